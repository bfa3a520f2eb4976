//! Maximization of Holevo or coherent information over the sender's
//! `(|α|², q_R)` at fixed squeezing: a fixed grid followed by bounded
//! simplex refinement from the best grid cell.

pub mod simplex;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::{coherent_information, coherent_information_complement, holevo, Receiver};
use crate::unruh::{
    build_classical_ensemble, build_quantum_state, ChannelKind, ChannelParams, Cutoff, Rail,
    RindlerParams, UnruhWeights, DEFAULT_TOL, Q_R_MIN,
};
use simplex::{minimize, SimplexOptions};

/// Objective values within this are treated as ties.
pub const TIE_TOL: f64 = 1e-10;
/// `q_R` counts as departed from the single-mode approximation below `1 − this`.
pub const SMA_DEPARTURE: f64 = 1e-3;
/// Bracket and resolution of the crossover search.
pub const CROSSOVER_BRACKET: (f64, f64) = (0.2, 2.0);
pub const CROSSOVER_WIDTH: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Holevo,
    Coherent,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Holevo => "holevo",
            Measure::Coherent => "cohinfo",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holevo" => Ok(Measure::Holevo),
            "cohinfo" | "coherent" => Ok(Measure::Coherent),
            _ => Err(Error::Usage(format!(
                "unknown measure `{s}` (expected holevo or coherent)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OptConfig {
    pub tol: f64,
    pub cutoff: Cutoff,
    /// Grid intervals per axis; the grid has `(grid + 1)²` points.
    pub grid: usize,
    pub ftol: f64,
    pub xtol: f64,
    pub max_iter: usize,
    /// Let `optimal_curve` seed each refinement from the previous optimum.
    pub warm_start: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            cutoff: Cutoff::default(),
            grid: 20,
            ftol: 1e-8,
            xtol: 1e-6,
            max_iter: 500,
            warm_start: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    pub r: f64,
    pub alpha2_opt: f64,
    pub q_r_opt: f64,
    pub value: f64,
    pub measure: Measure,
    pub rail: Rail,
    pub receiver: Receiver,
    pub evals: usize,
}

/// The measure for `receiver` at `(alpha2, q_r)`. Anti-Rob is evaluated as
/// Rob with the region weights exchanged; coherent information uses the
/// complement route.
pub fn objective(
    measure: Measure,
    rail: Rail,
    receiver: Receiver,
    rindler: &RindlerParams,
    alpha2: f64,
    q_r: f64,
    cfg: &OptConfig,
) -> Result<f64> {
    let run = || -> Result<f64> {
        let params = point_params(measure, rail, receiver, rindler, alpha2, q_r, cfg)?;
        match measure {
            Measure::Holevo => holevo(&build_classical_ensemble(&params)?, Receiver::Rob),
            Measure::Coherent => {
                coherent_information_complement(&build_quantum_state(&params)?.state, Receiver::Rob)
            }
        }
    };
    run().map_err(|e| at_point(e, alpha2, q_r))
}

fn point_params(
    measure: Measure,
    rail: Rail,
    receiver: Receiver,
    rindler: &RindlerParams,
    alpha2: f64,
    q_r: f64,
    cfg: &OptConfig,
) -> Result<ChannelParams> {
    let mut weights = UnruhWeights::new(q_r)?;
    if receiver == Receiver::AntiRob {
        weights = weights.swapped();
    }
    let params = ChannelParams {
        rindler: *rindler,
        weights,
        alpha2,
        rail,
        kind: match measure {
            Measure::Holevo => ChannelKind::Classical,
            Measure::Coherent => ChannelKind::Quantum,
        },
        cutoff: cfg.cutoff,
        tol: cfg.tol,
    };
    params.validate()?;
    Ok(params)
}

fn at_point(e: Error, alpha2: f64, q_r: f64) -> Error {
    match e {
        Error::AtPoint { .. } => e,
        other => Error::AtPoint {
            alpha2,
            q_r,
            source: Box::new(other),
        },
    }
}

/// Value with the tie-break toward larger `q_R`, then larger `α²`.
fn better(candidate: (f64, f64, f64), incumbent: (f64, f64, f64)) -> bool {
    let (v, a, q) = candidate;
    let (bv, ba, bq) = incumbent;
    if v > bv + TIE_TOL {
        return true;
    }
    if v < bv - TIE_TOL {
        return false;
    }
    (q, a) > (bq, ba)
}

fn grid_points(grid: usize) -> Vec<(f64, f64)> {
    let axis = |j: usize, lo: f64| {
        if j == grid {
            1.0
        } else {
            lo + j as f64 * (1.0 - lo) / grid as f64
        }
    };
    (0..=grid)
        .flat_map(|i| (0..=grid).map(move |j| (axis(i, 0.0), axis(j, Q_R_MIN))))
        .collect()
}

/// Maximizes `measure` for `receiver` at squeezing `r`.
pub fn maximize(
    measure: Measure,
    rail: Rail,
    receiver: Receiver,
    r: f64,
    cfg: &OptConfig,
) -> Result<OptResult> {
    maximize_from(measure, rail, receiver, r, cfg, None)
}

/// As [`maximize`], optionally seeding the refinement from `seed` when it
/// beats the best grid point.
pub fn maximize_from(
    measure: Measure,
    rail: Rail,
    receiver: Receiver,
    r: f64,
    cfg: &OptConfig,
    seed: Option<(f64, f64)>,
) -> Result<OptResult> {
    if cfg.grid == 0 {
        return Err(Error::Usage(
            "optimizer grid needs at least one interval".into(),
        ));
    }
    let rindler = RindlerParams::from_r(r)?;
    let f = |a: f64, q: f64| objective(measure, rail, receiver, &rindler, a, q, cfg);

    let points = grid_points(cfg.grid);
    let values = points
        .par_iter()
        .map(|&(a, q)| f(a, q))
        .collect::<Vec<Result<f64>>>()
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let mut evals = values.len();
    let mut best = (values[0], points[0].0, points[0].1);
    for (&v, &(a, q)) in values.iter().zip(&points).skip(1) {
        if better((v, a, q), best) {
            best = (v, a, q);
        }
    }
    if let Some((a, q)) = seed {
        let a = a.clamp(0.0, 1.0);
        let q = q.clamp(Q_R_MIN, 1.0);
        let v = f(a, q)?;
        evals += 1;
        if v > best.0 {
            best = (v, a, q);
        }
    }

    let ha = 0.5 / cfg.grid as f64;
    let hq = 0.5 * (1.0 - Q_R_MIN) / cfg.grid as f64;
    let step = |x: f64, h: f64, lo: f64, hi: f64| if x + h <= hi { x + h } else { (x - h).max(lo) };
    let start = vec![
        [best.1, best.2],
        [step(best.1, ha, 0.0, 1.0), best.2],
        [best.1, step(best.2, hq, Q_R_MIN, 1.0)],
    ];
    let opts = SimplexOptions {
        ftol: cfg.ftol,
        xtol: cfg.xtol,
        max_iter: cfg.max_iter,
    };
    let out = minimize(
        |x: &[f64; 2]| f(x[0], x[1]).map(|v| -v),
        start,
        [0.0, Q_R_MIN],
        [1.0, 1.0],
        &opts,
    )?;
    evals += out.evals;
    let (mut value, mut alpha2, mut q_r) = (-out.f, out.x[0], out.x[1]);
    if best.0 > value {
        (value, alpha2, q_r) = best;
    }

    // Prefer the exact single-mode edge when it is as good.
    if q_r != 1.0 && q_r > 1.0 - SMA_DEPARTURE {
        let v = f(alpha2, 1.0)?;
        evals += 1;
        if v >= value - TIE_TOL {
            value = value.max(v);
            q_r = 1.0;
        }
    }

    if measure == Measure::Coherent {
        // The refinement used the complement route; report the direct one,
        // which also cross-checks the two.
        let params = point_params(measure, rail, receiver, &rindler, alpha2, q_r, cfg)?;
        let state = build_quantum_state(&params).map_err(|e| at_point(e, alpha2, q_r))?;
        value = coherent_information(&state.state, Receiver::Rob)
            .map_err(|e| at_point(e, alpha2, q_r))?;
        evals += 1;
    }

    Ok(OptResult {
        r,
        alpha2_opt: alpha2,
        q_r_opt: q_r,
        value,
        measure,
        rail,
        receiver,
        evals,
    })
}

/// One optimum per squeezing value; `rs` must be ascending.
pub fn optimal_curve(
    measure: Measure,
    rail: Rail,
    receiver: Receiver,
    rs: &[f64],
    cfg: &OptConfig,
) -> Result<Vec<OptResult>> {
    if rs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Usage(
            "squeezing grid must be strictly ascending".into(),
        ));
    }
    let mut out: Vec<OptResult> = Vec::with_capacity(rs.len());
    for &r in rs {
        let seed = match out.last() {
            Some(prev) if cfg.warm_start => Some((prev.alpha2_opt, prev.q_r_opt)),
            _ => None,
        };
        out.push(maximize_from(measure, rail, receiver, r, cfg, seed)?);
    }
    Ok(out)
}

/// Squeezing at which the optimal `q_R` leaves 1, by bisection over
/// `[0.2, 2.0]` to width 0.02.
pub fn sma_crossover(measure: Measure, rail: Rail, cfg: &OptConfig) -> Result<f64> {
    let departed = |r: f64| -> Result<bool> {
        Ok(maximize(measure, rail, Receiver::Rob, r, cfg)?.q_r_opt < 1.0 - SMA_DEPARTURE)
    };
    let (mut lo, mut hi) = CROSSOVER_BRACKET;
    let (at_lo, at_hi) = (departed(lo)?, departed(hi)?);
    if at_lo || !at_hi {
        return Err(Error::Bracket(format!(
            "optimal qR {} at r = {lo} and {} at r = {hi}; no single crossover in the bracket",
            if at_lo {
                "departs from 1"
            } else {
                "stays at 1"
            },
            if at_hi {
                "departs from 1"
            } else {
                "stays at 1"
            },
        )));
    }
    while hi - lo > CROSSOVER_WIDTH {
        let mid = 0.5 * (lo + hi);
        if departed(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_the_anchors_exactly() {
        let pts = grid_points(20);
        assert_eq!(pts.len(), 441);
        assert!(pts.contains(&(0.5, 1.0)));
        assert!(pts.contains(&(0.5, Q_R_MIN)));
    }

    #[test]
    fn tie_break_prefers_larger_qr_then_alpha() {
        assert!(better((1.0, 0.1, 0.9), (1.0 + 1e-12, 0.5, 0.8)));
        assert!(better((1.0, 0.6, 0.9), (1.0, 0.5, 0.9)));
        assert!(!better((1.0, 0.9, 0.8), (1.0, 0.1, 0.9)));
        assert!(better((1.1, 0.0, Q_R_MIN), (1.0, 1.0, 1.0)));
    }

    #[test]
    fn noiseless_optimum_is_the_sma_at_half() {
        let cfg = OptConfig::default();
        let res = maximize(Measure::Coherent, Rail::Single, Receiver::Rob, 0.0, &cfg).unwrap();
        assert_eq!(res.q_r_opt, 1.0);
        assert!((res.alpha2_opt - 0.5).abs() < 1e-3);
        assert!((res.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn truncation_failures_carry_the_point() {
        let cfg = OptConfig::default();
        let err = maximize(Measure::Holevo, Rail::Single, Receiver::Rob, 3.0, &cfg).unwrap_err();
        assert!(err.is_truncation());
        assert!(matches!(err, Error::AtPoint { .. }));
    }

    #[test]
    fn curve_rejects_unsorted_grid() {
        let cfg = OptConfig::default();
        assert!(optimal_curve(
            Measure::Holevo,
            Rail::Single,
            Receiver::Rob,
            &[0.5, 0.2],
            &cfg
        )
        .is_err());
    }
}
