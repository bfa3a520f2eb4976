//! Composite truncated Fock spaces: index layouts, ladder operators,
//! partial traces and Hermitian spectra.

mod density;
mod layout;
mod spectrum;
mod state;

pub use density::{reduce_from_vector, DensityMatrix};
pub use layout::{decode_index, encode_index, ModeLayout};
pub use spectrum::{hermitian_eigenpairs, hermitian_spectrum, CLAMP_TOL, HERMITIAN_TOL};
pub use state::{apply_annihilation, apply_creation, StateVector};
