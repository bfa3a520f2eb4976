//! Entropic measures for the two receivers: Holevo information of the
//! classical ensemble and conditional entropy / coherent information of the
//! quantum channel state. All entropies are in bits.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{hermitian_spectrum, reduce_from_vector, DensityMatrix, StateVector};
use crate::unruh::{
    build_classical_ensemble, build_quantum_state, ChannelKind, ChannelParams, ClassicalEnsemble,
    Rail,
};

/// Eigenvalues below this are left out of entropy sums.
pub const ENTROPY_FLOOR: f64 = 1e-14;
/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-8;
/// The two conditional-entropy routes must agree to this, or the cutoff is
/// too small for the state to be treated as pure.
pub const ROUTE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Receiver {
    /// Region I.
    Rob,
    /// Region II.
    AntiRob,
}

impl Receiver {
    pub fn other(self) -> Receiver {
        match self {
            Receiver::Rob => Receiver::AntiRob,
            Receiver::AntiRob => Receiver::Rob,
        }
    }

    /// Short name used in tables: `R` or `Rbar`.
    pub fn name(self) -> &'static str {
        match self {
            Receiver::Rob => "R",
            Receiver::AntiRob => "Rbar",
        }
    }

    /// The Rindler modes this receiver holds.
    pub fn modes(self, rail: Rail) -> &'static [&'static str] {
        match (rail, self) {
            (Rail::Single, Receiver::Rob) => &["I"],
            (Rail::Single, Receiver::AntiRob) => &["II"],
            (Rail::Dual, Receiver::Rob) => &["I+", "I-"],
            (Rail::Dual, Receiver::AntiRob) => &["II+", "II-"],
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Receiver {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "rob" => Ok(Receiver::Rob),
            "Rbar" | "antirob" | "anti-rob" => Ok(Receiver::AntiRob),
            _ => Err(Error::Usage(format!("unknown receiver `{s}`"))),
        }
    }
}

/// `−Σ λ log₂ λ` over a spectrum, skipping `λ < 1e-14`.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > ENTROPY_FLOOR)
        .map(|&l| -l * l.log2())
        .sum()
}

pub fn binary_entropy(p: f64) -> f64 {
    entropy_of_spectrum(&[p, 1.0 - p])
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let values = hermitian_spectrum(rho)?;
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > TRACE_TOL {
        return Err(Error::Numeric(format!(
            "density matrix has trace {sum}, expected 1"
        )));
    }
    if let Some(&low) = values.last().filter(|&&l| l < 0.0) {
        return Err(Error::Numeric(format!(
            "density matrix has eigenvalue {low:e} below the clamp threshold"
        )));
    }
    Ok(entropy_of_spectrum(&values))
}

/// `S(Σ p σ_x) − Σ p S(σ_x)` with every branch reduced to the receiver.
pub fn holevo(ensemble: &ClassicalEnsemble, receiver: Receiver) -> Result<f64> {
    let modes = receiver.modes(ensemble.rail);
    let mut reduced = Vec::with_capacity(ensemble.branches.len());
    let mut average_entropy = 0.0;
    for b in &ensemble.branches {
        let rho = reduce_from_vector(&b.state, modes)?;
        if b.probability > 0.0 {
            average_entropy += b.probability * von_neumann_entropy(&rho)?;
        }
        reduced.push((b.probability, rho));
    }
    let terms: Vec<(f64, &DensityMatrix)> = reduced.iter().map(|(p, r)| (*p, r)).collect();
    let mixture = DensityMatrix::mix(&terms)?;
    Ok(von_neumann_entropy(&mixture)? - average_entropy)
}

fn alice_and(modes: &[&'static str]) -> Vec<&'static str> {
    std::iter::once("A").chain(modes.iter().copied()).collect()
}

/// Both routes to `S(A|recv)` for a global pure state: the direct
/// `S(ρ_{A,recv}) − S(ρ_recv)` and the complement `S(ρ_other) − S(ρ_recv)`.
pub fn conditional_entropy_routes(state: &StateVector, receiver: Receiver) -> Result<(f64, f64)> {
    let rail = Rail::of_layout(state.layout())?;
    let mine = receiver.modes(rail);
    let s_recv = von_neumann_entropy(&reduce_from_vector(state, mine)?)?;
    let s_joint = von_neumann_entropy(&reduce_from_vector(state, &alice_and(mine))?)?;
    let s_other = von_neumann_entropy(&reduce_from_vector(state, receiver.other().modes(rail))?)?;
    Ok((s_joint - s_recv, s_other - s_recv))
}

fn cross_check(direct: f64, shortcut: f64) -> Result<f64> {
    if (direct - shortcut).abs() > ROUTE_TOL {
        return Err(Error::Numeric(format!(
            "conditional entropy routes disagree: direct {direct}, complement {shortcut}; \
             the cutoff is too small"
        )));
    }
    Ok(direct)
}

/// `S(A|recv)` by the direct route, verified against the complement route.
pub fn conditional_entropy(state: &StateVector, receiver: Receiver) -> Result<f64> {
    let (direct, shortcut) = conditional_entropy_routes(state, receiver)?;
    cross_check(direct, shortcut)
}

pub fn coherent_information(state: &StateVector, receiver: Receiver) -> Result<f64> {
    conditional_entropy(state, receiver).map(|s| -s)
}

/// `S(ρ_recv) − S(ρ_other)`, valid for pure global states only. Needs two
/// reductions instead of three; used inside optimization loops.
pub fn coherent_information_complement(state: &StateVector, receiver: Receiver) -> Result<f64> {
    let rail = Rail::of_layout(state.layout())?;
    let s_recv = von_neumann_entropy(&reduce_from_vector(state, receiver.modes(rail))?)?;
    let s_other = von_neumann_entropy(&reduce_from_vector(state, receiver.other().modes(rail))?)?;
    Ok(s_recv - s_other)
}

/// All measures at one parameter point, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoResult {
    pub holevo_r: f64,
    pub holevo_rbar: f64,
    pub cohinfo_r: f64,
    pub cohinfo_rbar: f64,
    pub cond_r: f64,
    pub cond_rbar: f64,
    /// Largest pre-normalization deficit of the states built.
    pub deficit: f64,
    pub cutoff: usize,
}

impl InfoResult {
    pub fn holevo(&self, receiver: Receiver) -> f64 {
        match receiver {
            Receiver::Rob => self.holevo_r,
            Receiver::AntiRob => self.holevo_rbar,
        }
    }

    pub fn cohinfo(&self, receiver: Receiver) -> f64 {
        match receiver {
            Receiver::Rob => self.cohinfo_r,
            Receiver::AntiRob => self.cohinfo_rbar,
        }
    }

    pub fn cond(&self, receiver: Receiver) -> f64 {
        match receiver {
            Receiver::Rob => self.cond_r,
            Receiver::AntiRob => self.cond_rbar,
        }
    }
}

/// Holevo information for both receivers, plus deficit and cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalReport {
    pub holevo_r: f64,
    pub holevo_rbar: f64,
    pub deficit: f64,
    pub cutoff: usize,
}

/// Conditional entropies (direct route, cross-checked) for both receivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumReport {
    pub cond_r: f64,
    pub cond_rbar: f64,
    pub deficit: f64,
    pub cutoff: usize,
}

pub fn classical_report(params: &ChannelParams) -> Result<ClassicalReport> {
    let ensemble = build_classical_ensemble(&params.with_kind(ChannelKind::Classical))?;
    Ok(ClassicalReport {
        holevo_r: holevo(&ensemble, Receiver::Rob)?,
        holevo_rbar: holevo(&ensemble, Receiver::AntiRob)?,
        deficit: ensemble.deficit,
        cutoff: ensemble.cutoff,
    })
}

pub fn quantum_report(params: &ChannelParams) -> Result<QuantumReport> {
    let q = build_quantum_state(&params.with_kind(ChannelKind::Quantum))?;
    let rail = q.rail;
    let entropy = |modes: &[&str]| -> Result<f64> {
        von_neumann_entropy(&reduce_from_vector(&q.state, modes)?)
    };
    let (rob, anti) = (Receiver::Rob.modes(rail), Receiver::AntiRob.modes(rail));
    let s_r = entropy(rob)?;
    let s_rbar = entropy(anti)?;
    let s_ar = entropy(&alice_and(rob))?;
    let s_arbar = entropy(&alice_and(anti))?;
    Ok(QuantumReport {
        cond_r: cross_check(s_ar - s_r, s_rbar - s_r)?,
        cond_rbar: cross_check(s_arbar - s_rbar, s_r - s_rbar)?,
        deficit: q.deficit,
        cutoff: q.cutoff,
    })
}

/// Builds the classical ensemble and the quantum state at the same point
/// (ignoring `params.kind`) and evaluates every measure.
pub fn channel_report(params: &ChannelParams) -> Result<InfoResult> {
    let c = classical_report(params)?;
    let q = quantum_report(params)?;
    Ok(InfoResult {
        holevo_r: c.holevo_r,
        holevo_rbar: c.holevo_rbar,
        cohinfo_r: -q.cond_r,
        cohinfo_rbar: -q.cond_rbar,
        cond_r: q.cond_r,
        cond_rbar: q.cond_rbar,
        deficit: c.deficit.max(q.deficit),
        cutoff: q.cutoff,
    })
}
