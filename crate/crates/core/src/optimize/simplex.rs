//! Box-constrained downhill simplex (Nelder–Mead) minimizer.
//!
//! Trial points are clamped into the box, so the simplex can flatten
//! against a face and then slide along it; this is how optima on the
//! `q_R = 1` edge are reached. Clamping can also collapse the simplex onto
//! a single point, so every converged run is restarted from a fresh simplex
//! of the original size until a restart no longer improves.

use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Stop once the spread of objective values over the simplex is below this...
    pub ftol: f64,
    /// ...and every vertex lies within this (max-norm) of the best one.
    pub xtol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOutcome<const D: usize> {
    pub x: [f64; D],
    pub f: f64,
    pub iterations: usize,
    pub evals: usize,
    pub converged: bool,
}

fn clamp<const D: usize>(x: [f64; D], lo: &[f64; D], hi: &[f64; D]) -> [f64; D] {
    std::array::from_fn(|k| x[k].clamp(lo[k], hi[k]))
}

fn affine<const D: usize>(a: &[f64; D], b: &[f64; D], t: f64) -> [f64; D] {
    // a + t (b − a)
    std::array::from_fn(|k| a[k] + t * (b[k] - a[k]))
}

const MAX_RESTARTS: usize = 10;

/// Minimizes `f` over the box `[lo, hi]` starting from `start` (D + 1 vertices).
pub fn minimize<const D: usize, F>(
    mut f: F,
    start: Vec<[f64; D]>,
    lo: [f64; D],
    hi: [f64; D],
    opts: &SimplexOptions,
) -> Result<SimplexOutcome<D>>
where
    F: FnMut(&[f64; D]) -> Result<f64>,
{
    assert_eq!(start.len(), D + 1, "simplex needs D + 1 vertices");
    let steps: [f64; D] = std::array::from_fn(|k| {
        start
            .iter()
            .map(|x| (x[k] - start[0][k]).abs())
            .fold(0.0, f64::max)
    });
    let mut out = run(&mut f, start, &lo, &hi, opts)?;
    for _ in 0..MAX_RESTARTS {
        if !out.converged {
            break;
        }
        let fresh = std::iter::once(out.x)
            .chain((0..D).map(|k| {
                let mut x = out.x;
                x[k] = if x[k] + steps[k] <= hi[k] {
                    x[k] + steps[k]
                } else {
                    x[k] - steps[k]
                };
                x
            }))
            .collect();
        let next = run(&mut f, fresh, &lo, &hi, opts)?;
        let improved = out.f - next.f > opts.ftol;
        let total = SimplexOutcome {
            iterations: out.iterations + next.iterations,
            evals: out.evals + next.evals,
            ..next
        };
        out = if next.f <= out.f {
            total
        } else {
            SimplexOutcome {
                x: out.x,
                f: out.f,
                ..total
            }
        };
        if !improved {
            break;
        }
    }
    Ok(out)
}

fn run<const D: usize, F>(
    f: &mut F,
    start: Vec<[f64; D]>,
    lo: &[f64; D],
    hi: &[f64; D],
    opts: &SimplexOptions,
) -> Result<SimplexOutcome<D>>
where
    F: FnMut(&[f64; D]) -> Result<f64>,
{
    let (lo, hi) = (*lo, *hi);
    let mut evals = 0usize;
    let mut eval = |x: &[f64; D], evals: &mut usize| -> Result<f64> {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
    for x in start {
        let x = clamp(x, &lo, &hi);
        let fx = eval(&x, &mut evals)?;
        simplex.push((x, fx));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Stable sort keeps equal-valued vertices in a fixed order.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0];
        let spread = simplex[D].1 - best.1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.ftol && diameter <= opts.xtol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let centroid: [f64; D] =
            std::array::from_fn(|k| simplex[..D].iter().map(|(x, _)| x[k]).sum::<f64>() / D as f64);
        let worst = simplex[D];
        let second = simplex[D - 1].1;

        let xr = clamp(affine(&centroid, &worst.0, -1.0), &lo, &hi);
        let fr = eval(&xr, &mut evals)?;
        if fr < best.1 {
            let xe = clamp(affine(&centroid, &worst.0, -2.0), &lo, &hi);
            let fe = eval(&xe, &mut evals)?;
            simplex[D] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < second {
            simplex[D] = (xr, fr);
            continue;
        }
        let (xc, fc, accept) = if fr < worst.1 {
            let xc = clamp(affine(&centroid, &xr, 0.5), &lo, &hi);
            let fc = eval(&xc, &mut evals)?;
            (xc, fc, fc <= fr)
        } else {
            let xc = affine(&centroid, &worst.0, 0.5);
            let fc = eval(&xc, &mut evals)?;
            (xc, fc, fc < worst.1)
        };
        if accept {
            simplex[D] = (xc, fc);
            continue;
        }
        for v in simplex.iter_mut().skip(1) {
            let x = affine(&best.0, &v.0, 0.5);
            *v = (x, eval(&x, &mut evals)?);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(SimplexOutcome {
        x: simplex[0].0,
        f: simplex[0].1,
        iterations,
        evals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: SimplexOptions = SimplexOptions {
        ftol: 1e-12,
        xtol: 1e-8,
        max_iter: 2000,
    };

    #[test]
    fn finds_interior_minimum() {
        let f = |x: &[f64; 2]| {
            Ok((x[0] - 0.3).powi(2) + 4.0 * (x[1] - 0.8).powi(2) + x[0] * x[1] * 0.1)
        };
        let out = minimize(
            f,
            vec![[0.5, 0.5], [0.6, 0.5], [0.5, 0.6]],
            [0.0; 2],
            [1.0; 2],
            &OPTS,
        )
        .unwrap();
        assert!(out.converged);
        // Stationary point of the quadratic.
        let det = 2.0 * 8.0 - 0.01;
        let x0 = (0.6 * 8.0 - 0.1 * 6.4) / det;
        let x1 = (2.0 * 6.4 - 0.1 * 0.6) / det;
        assert!((out.x[0] - x0).abs() < 1e-6 && (out.x[1] - x1).abs() < 1e-6);
    }

    #[test]
    fn slides_along_an_active_face() {
        // Unconstrained minimum at (0.4, 1.5) lies outside the box.
        let f = |x: &[f64; 2]| Ok((x[0] - 0.4).powi(2) + (x[1] - 1.5).powi(2));
        let out = minimize(
            f,
            vec![[0.8, 0.2], [0.9, 0.2], [0.8, 0.3]],
            [0.0; 2],
            [1.0; 2],
            &OPTS,
        )
        .unwrap();
        assert!((out.x[0] - 0.4).abs() < 1e-6);
        assert_eq!(out.x[1], 1.0);
    }

    #[test]
    fn is_deterministic() {
        let f = |x: &[f64; 2]| Ok((x[0] * 3.0).sin() + (x[1] - 0.2).powi(2));
        let run = || {
            minimize(
                f,
                vec![[0.5, 0.5], [0.6, 0.5], [0.5, 0.6]],
                [0.0; 2],
                [1.0; 2],
                &OPTS,
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.x, b.x);
        assert_eq!(a.evals, b.evals);
    }
}
