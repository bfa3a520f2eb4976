//! Classical (Holevo) and quantum (coherent-information) communication from
//! an inertial sender to two counter-accelerating receivers over single-rail
//! and dual-rail Unruh-mode channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`fock`]: truncated multimode Fock spaces, ladder operators, partial
//!   traces and sparse Hermitian spectra.
//! - [`unruh`]: Unruh vacuum and one-particle states in the Rindler basis and
//!   the four channel inputs built from them.
//! - [`info`]: von Neumann entropy, Holevo information, conditional entropy
//!   and coherent information for both receivers.
//! - [`optimize`]: maximisation over the sender-controlled `(|α|², q_R)`.

pub mod error;
pub mod fock;
pub mod info;
pub mod optimize;
pub mod unruh;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, ModeLayout, StateVector};
pub use info::{channel_report, InfoResult, Receiver};
pub use optimize::{maximize, optimal_curve, sma_crossover, Measure, OptConfig, OptResult};
pub use unruh::{ChannelKind, ChannelParams, Cutoff, Rail, RindlerParams, UnruhWeights};
