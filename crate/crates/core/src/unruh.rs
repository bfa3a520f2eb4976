//! Unruh-mode states in the Rindler basis and the four channel inputs.
//!
//! With `t = tanh r` and `x = t²`, the Unruh vacuum is the two-mode squeezed
//! state `(1/cosh r) Σ tⁿ |n⟩_I |n⟩_II` and the one-particle Unruh excitation
//! `C† |0⟩_U` with `C† = q_R C†_R + q_L C†_L` splits into the orthogonal
//! branches `(1/cosh² r) Σ √(m+1) tᵐ |m+1, m⟩` (right) and its `I ↔ II`
//! mirror (left). Both are cut at occupation `N` per Rindler mode; the
//! weight that falls outside is the truncation deficit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ModeLayout, StateVector};

/// Smallest admissible right-region weight, `1/√2`.
pub const Q_R_MIN: f64 = FRAC_1_SQRT_2;
/// Smallest per-mode cutoff.
pub const MIN_CUTOFF: usize = 2;
/// Default ceiling for the automatic cutoff rule.
pub const DEFAULT_CUTOFF_CAP: usize = 64;
/// Default truncation-deficit tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

const WEIGHT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rail {
    Single,
    Dual,
}

impl Rail {
    pub fn name(self) -> &'static str {
        match self {
            Rail::Single => "single",
            Rail::Dual => "dual",
        }
    }

    /// Recognises the layouts produced by the builders in this module.
    pub fn of_layout(layout: &ModeLayout) -> Result<Rail> {
        let labels: Vec<&str> = layout.labels().iter().map(String::as_str).collect();
        let single = ["I", "II"];
        let dual = ["I+", "II+", "I-", "II-"];
        let strip_alice = |l: &[&str]| -> Vec<String> {
            l.iter()
                .filter(|s| **s != "A")
                .map(|s| s.to_string())
                .collect()
        };
        let rindler = strip_alice(&labels);
        if rindler == single {
            Ok(Rail::Single)
        } else if rindler == dual {
            Ok(Rail::Dual)
        } else {
            Err(Error::Usage(format!(
                "layout {labels:?} is not a single- or dual-rail channel layout"
            )))
        }
    }
}

impl fmt::Display for Rail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rail {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Rail::Single),
            "dual" => Ok(Rail::Dual),
            _ => Err(Error::Usage(format!(
                "unknown rail `{s}` (expected single or dual)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Classical,
    Quantum,
}

/// The acceleration-dependent squeezing `r` together with `tanh r` and
/// `1 − tanh² r`, which are kept separately so that `(a, ω, c)` inputs lose
/// no precision near `r = 0` or at very large `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerParams {
    r: f64,
    t: f64,
    sech2: f64,
}

impl RindlerParams {
    pub fn from_r(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Domain(format!(
                "squeezing parameter must be finite and nonnegative, got {r}"
            )));
        }
        let c = r.cosh();
        Ok(Self {
            r,
            t: r.tanh(),
            sech2: 1.0 / (c * c),
        })
    }

    /// `tanh r = exp(−π c ω / a)`.
    pub fn from_acceleration(a: f64, omega: f64, c: f64) -> Result<Self> {
        for (name, v) in [
            ("acceleration", a),
            ("frequency", omega),
            ("speed of light", c),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let z = PI * c * omega / a;
        let t = (-z).exp();
        let one_minus_t = -(-z).exp_m1();
        let r = 0.5 * ((1.0 + t) / one_minus_t).ln();
        Ok(Self {
            r,
            t,
            sech2: one_minus_t * (1.0 + t),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn tanh_r(&self) -> f64 {
        self.t
    }

    /// `1 / cosh² r = 1 − tanh² r`.
    pub fn sech2(&self) -> f64 {
        self.sech2
    }
}

pub fn squeezing_parameter(a: f64, omega: f64, c: f64) -> Result<f64> {
    RindlerParams::from_acceleration(a, omega, c).map(|p| p.r())
}

/// Unruh-mode weights `(q_R, q_L)` with `q_R² + q_L² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhWeights {
    q_r: f64,
    q_l: f64,
}

impl UnruhWeights {
    /// Accepts `q_R ∈ [1/√2, 1]`.
    pub fn new(q_r: f64) -> Result<Self> {
        if !(q_r >= Q_R_MIN - WEIGHT_SLACK && q_r <= 1.0 + WEIGHT_SLACK) {
            return Err(Error::Domain("qr must lie in [0.7071, 1]".into()));
        }
        let q_r = q_r.clamp(Q_R_MIN, 1.0);
        Ok(Self {
            q_r,
            q_l: ((1.0 - q_r) * (1.0 + q_r)).sqrt(),
        })
    }

    /// The single-mode approximation, `q_R = 1`.
    pub fn sma() -> Self {
        Self { q_r: 1.0, q_l: 0.0 }
    }

    pub fn symmetric() -> Self {
        Self {
            q_r: Q_R_MIN,
            q_l: Q_R_MIN,
        }
    }

    /// Exchanges the roles of the two regions. The result may have
    /// `q_R < q_L`; it exists to express the region-swap symmetry.
    pub fn swapped(self) -> Self {
        Self {
            q_r: self.q_l,
            q_l: self.q_r,
        }
    }

    pub fn q_r(&self) -> f64 {
        self.q_r
    }

    pub fn q_l(&self) -> f64 {
        self.q_l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    /// Smallest `N` meeting the tolerance, failing above `cap`.
    Auto {
        cap: usize,
    },
    Fixed(usize),
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff::Auto {
            cap: DEFAULT_CUTOFF_CAP,
        }
    }
}

/// One point of the parameter space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub rindler: RindlerParams,
    pub weights: UnruhWeights,
    /// `|α|²`; the excitation-encoded symbol gets `1 − alpha2`.
    pub alpha2: f64,
    pub rail: Rail,
    pub kind: ChannelKind,
    pub cutoff: Cutoff,
    pub tol: f64,
}

impl ChannelParams {
    /// Quantum-channel parameters with the automatic cutoff and default tolerance.
    pub fn new(r: f64, q_r: f64, alpha2: f64, rail: Rail) -> Result<Self> {
        let p = Self {
            rindler: RindlerParams::from_r(r)?,
            weights: UnruhWeights::new(q_r)?,
            alpha2,
            rail,
            kind: ChannelKind::Quantum,
            cutoff: Cutoff::default(),
            tol: DEFAULT_TOL,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_kind(mut self, kind: ChannelKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_cutoff(mut self, cutoff: Cutoff) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_weights(mut self, weights: UnruhWeights) -> Self {
        self.weights = weights;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha2) {
            return Err(Error::Domain(format!(
                "alpha2 must lie in [0, 1], got {}",
                self.alpha2
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if let Cutoff::Fixed(n) = self.cutoff {
            check_cutoff(n)?;
        }
        Ok(())
    }

    /// The per-mode cutoff `N` this point will be built with.
    pub fn resolve_cutoff(&self) -> Result<usize> {
        match self.cutoff {
            Cutoff::Fixed(n) => {
                check_cutoff(n)?;
                Ok(n)
            }
            Cutoff::Auto { cap } => auto_cutoff(&self.rindler, self.tol, cap),
        }
    }
}

fn check_cutoff(n: usize) -> Result<()> {
    if n < MIN_CUTOFF {
        return Err(Error::Domain(format!(
            "cutoff N must be at least {MIN_CUTOFF}, got {n}"
        )));
    }
    Ok(())
}

/// Weight of the vacuum beyond occupation `n`: `x^(n+1)`.
pub fn vacuum_deficit(rindler: &RindlerParams, n: usize) -> f64 {
    let x = rindler.t * rindler.t;
    x.powi(n as i32 + 1)
}

/// Weight of the excitation beyond occupation `n`:
/// `Σ_{m≥n} (m+1)(1−x)² xᵐ = xⁿ (1 + n(1−x))`.
pub fn excitation_deficit(rindler: &RindlerParams, n: usize) -> f64 {
    let x = rindler.t * rindler.t;
    x.powi(n as i32) * (1.0 + n as f64 * rindler.sech2)
}

/// Smallest `N ≥ 2` with both the vacuum and the excitation tails below
/// `tol / 4`.
pub fn auto_cutoff(rindler: &RindlerParams, tol: f64, cap: usize) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    (MIN_CUTOFF..=cap.max(MIN_CUTOFF))
        .find(|&n| {
            vacuum_deficit(rindler, n) < tol / 4.0 && excitation_deficit(rindler, n) < tol / 4.0
        })
        .ok_or_else(|| Error::Truncation {
            r: rindler.r,
            tol,
            detail: format!("automatic cutoff would exceed the cap N = {cap}"),
        })
}

fn check_deficit(rindler: &RindlerParams, tol: f64, deficit: f64, what: &str) -> Result<()> {
    if deficit > tol {
        return Err(Error::Truncation {
            r: rindler.r,
            tol,
            detail: format!("{what} deficit {deficit:e} exceeds the tolerance"),
        });
    }
    Ok(())
}

fn pair_layout(labels: (&str, &str), n: usize) -> Result<ModeLayout> {
    ModeLayout::new(&[(labels.0, n + 1), (labels.1, n + 1)])
}

fn vacuum_on(rindler: &RindlerParams, n: usize, labels: (&str, &str)) -> Result<StateVector> {
    let layout = pair_layout(labels, n)?;
    let norm = rindler.sech2.sqrt();
    let mut amp = norm;
    let mut entries = Vec::with_capacity(n + 1);
    for k in 0..=n {
        entries.push((k * (n + 1) + k, Complex64::new(amp, 0.0)));
        amp *= rindler.t;
    }
    StateVector::from_entries(layout, entries)
}

/// Right branch `|m+1, m⟩` and left branch `|m, m+1⟩` of the excitation.
fn excitation_branches_on(
    rindler: &RindlerParams,
    n: usize,
    labels: (&str, &str),
) -> Result<(StateVector, StateVector)> {
    let layout = pair_layout(labels, n)?;
    let d = n + 1;
    let mut right = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    let mut power = rindler.sech2;
    for m in 0..n {
        let a = Complex64::new(((m + 1) as f64).sqrt() * power, 0.0);
        right.push(((m + 1) * d + m, a));
        left.push((m * d + m + 1, a));
        power *= rindler.t;
    }
    Ok((
        StateVector::from_entries(layout.clone(), right)?,
        StateVector::from_entries(layout, left)?,
    ))
}

fn excitation_on(
    rindler: &RindlerParams,
    weights: &UnruhWeights,
    n: usize,
    labels: (&str, &str),
) -> Result<StateVector> {
    let (right, left) = excitation_branches_on(rindler, n, labels)?;
    right
        .scale(Complex64::new(weights.q_r, 0.0))
        .add(&left.scale(Complex64::new(weights.q_l, 0.0)))
}

/// The truncated Unruh vacuum over `(I, II)` and its deficit `x^(N+1)`.
/// The state is not renormalized: its squared norm is `1 − deficit`.
pub fn unruh_vacuum(rindler: &RindlerParams, n: usize, tol: f64) -> Result<(StateVector, f64)> {
    check_cutoff(n)?;
    let deficit = vacuum_deficit(rindler, n);
    check_deficit(rindler, tol, deficit, "vacuum")?;
    Ok((vacuum_on(rindler, n, ("I", "II"))?, deficit))
}

/// The two orthogonal components `C†_R |0⟩_U` and `C†_L |0⟩_U`.
#[derive(Debug, Clone)]
pub struct ExcitationBranches {
    pub right: StateVector,
    pub left: StateVector,
    pub deficit: f64,
}

pub fn unruh_excitation_branches(
    rindler: &RindlerParams,
    n: usize,
    tol: f64,
) -> Result<ExcitationBranches> {
    check_cutoff(n)?;
    let deficit = excitation_deficit(rindler, n);
    check_deficit(rindler, tol, deficit, "excitation")?;
    let (right, left) = excitation_branches_on(rindler, n, ("I", "II"))?;
    Ok(ExcitationBranches {
        right,
        left,
        deficit,
    })
}

/// The truncated one-particle Unruh state `q_R C†_R|0⟩_U + q_L C†_L|0⟩_U`
/// over `(I, II)`, not renormalized.
pub fn unruh_excitation(
    rindler: &RindlerParams,
    weights: &UnruhWeights,
    n: usize,
    tol: f64,
) -> Result<(StateVector, f64)> {
    check_cutoff(n)?;
    let deficit = excitation_deficit(rindler, n);
    check_deficit(rindler, tol, deficit, "excitation")?;
    Ok((excitation_on(rindler, weights, n, ("I", "II"))?, deficit))
}

/// Renormalized global pure state of the quantum channel.
#[derive(Debug, Clone)]
pub struct QuantumState {
    pub state: StateVector,
    pub rail: Rail,
    /// Squared-norm loss before renormalization.
    pub deficit: f64,
    pub cutoff: usize,
}

#[derive(Debug, Clone)]
pub struct EnsembleBranch {
    pub probability: f64,
    /// Logical symbol carried by this branch.
    pub symbol: u8,
    pub state: StateVector,
}

/// Classical ensemble over the Rindler modes; each branch is renormalized.
#[derive(Debug, Clone)]
pub struct ClassicalEnsemble {
    pub rail: Rail,
    pub branches: Vec<EnsembleBranch>,
    /// Probability-weighted squared-norm loss of the branches.
    pub deficit: f64,
    pub cutoff: usize,
}

/// Rindler-mode states encoding logical 0 and 1, with their deficits.
fn logical_states(params: &ChannelParams, n: usize) -> Result<[(StateVector, f64); 2]> {
    let p = &params.rindler;
    let (dv, de) = (vacuum_deficit(p, n), excitation_deficit(p, n));
    check_deficit(p, params.tol, dv, "vacuum")?;
    check_deficit(p, params.tol, de, "excitation")?;
    let w = &params.weights;
    Ok(match params.rail {
        Rail::Single => [
            (vacuum_on(p, n, ("I", "II"))?, dv),
            (excitation_on(p, w, n, ("I", "II"))?, de),
        ],
        Rail::Dual => {
            let both = 1.0 - (1.0 - de) * (1.0 - dv);
            [
                (
                    excitation_on(p, w, n, ("I+", "II+"))?.tensor(&vacuum_on(
                        p,
                        n,
                        ("I-", "II-"),
                    )?)?,
                    both,
                ),
                (
                    vacuum_on(p, n, ("I+", "II+"))?.tensor(&excitation_on(
                        p,
                        w,
                        n,
                        ("I-", "II-"),
                    )?)?,
                    both,
                ),
            ]
        }
    })
}

/// `α|0⟩_A ⊗ (logical 0) + β|1⟩_A ⊗ (logical 1)`, renormalized.
pub fn build_quantum_state(params: &ChannelParams) -> Result<QuantumState> {
    if params.kind != ChannelKind::Quantum {
        return Err(Error::Usage(
            "build_quantum_state needs a quantum-channel point".into(),
        ));
    }
    params.validate()?;
    let n = params.resolve_cutoff()?;
    let [(zero, _), (one, _)] = logical_states(params, n)?;
    let alice = ModeLayout::new(&[("A", 2)])?;
    let a = Complex64::new(params.alpha2.sqrt(), 0.0);
    let b = Complex64::new((1.0 - params.alpha2).sqrt(), 0.0);
    let raw = StateVector::basis(alice.clone(), &[0])?
        .tensor(&zero)?
        .scale(a)
        .add(&StateVector::basis(alice, &[1])?.tensor(&one)?.scale(b))?;
    let (state, n2) = raw.normalized()?;
    Ok(QuantumState {
        state,
        rail: params.rail,
        deficit: (1.0 - n2).max(0.0),
        cutoff: n,
    })
}

/// `{(α², logical 0), (1 − α², logical 1)}` over the Rindler modes.
pub fn build_classical_ensemble(params: &ChannelParams) -> Result<ClassicalEnsemble> {
    if params.kind != ChannelKind::Classical {
        return Err(Error::Usage(
            "build_classical_ensemble needs a classical-channel point".into(),
        ));
    }
    params.validate()?;
    let n = params.resolve_cutoff()?;
    let probabilities = [params.alpha2, 1.0 - params.alpha2];
    let mut branches = Vec::with_capacity(2);
    let mut deficit = 0.0;
    for (symbol, ((state, d), p)) in logical_states(params, n)?
        .into_iter()
        .zip(probabilities)
        .enumerate()
    {
        deficit += p * d;
        branches.push(EnsembleBranch {
            probability: p,
            symbol: symbol as u8,
            state: state.normalized()?.0,
        });
    }
    Ok(ClassicalEnsemble {
        rail: params.rail,
        branches,
        deficit,
        cutoff: n,
    })
}
