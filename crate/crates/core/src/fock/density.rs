use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::ModeLayout;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Hermitian operator on the kept subsystems, stored as sorted `(row, col,
/// value)` triplets. Both triangles are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: ModeLayout,
    entries: Vec<(usize, usize, Complex64)>,
}

impl DensityMatrix {
    /// Repeated `(row, col)` entries are summed and exact zeros dropped.
    pub fn from_entries<I>(layout: ModeLayout, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let dim = layout.total_dim();
        let mut raw: Vec<(usize, usize, Complex64)> = entries.into_iter().collect();
        if raw.iter().any(|&(i, j, _)| i >= dim || j >= dim) {
            return Err(Error::Usage(format!(
                "matrix entry outside dimension {dim}"
            )));
        }
        raw.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(raw.len());
        for (i, j, v) in raw {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|e| e.2 != Complex64::new(0.0, 0.0));
        Ok(Self {
            layout,
            entries: merged,
        })
    }

    pub fn from_dense(layout: ModeLayout, m: &DMatrix<Complex64>) -> Result<Self> {
        let dim = layout.total_dim();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Usage(format!(
                "{}x{} matrix does not match layout dimension {dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        let entries = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, m[(i, j)]))
            .filter(|e| e.2 != Complex64::new(0.0, 0.0));
        Self::from_entries(layout, entries.collect::<Vec<_>>())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] = v;
        }
        m
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self
            .entries
            .binary_search_by_key(&(i, j), |&(r, c, _)| (r, c))
        {
            Ok(k) => self.entries[k].2,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.0 == e.1)
            .map(|e| e.2.re)
            .sum()
    }

    /// Largest elementwise `|ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| (v - self.get(j, i).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ w_k ρ_k` over matrices on the same layout.
    pub fn mix(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Usage("cannot mix an empty list of matrices".into()))?;
        if terms.iter().any(|(_, m)| m.layout != first.1.layout) {
            return Err(Error::Usage(
                "mixed matrices live on different layouts".into(),
            ));
        }
        let entries = terms
            .iter()
            .flat_map(|&(w, m)| m.entries.iter().map(move |&(i, j, v)| (i, j, v * w)));
        Self::from_entries(first.1.layout.clone(), entries.collect::<Vec<_>>())
    }
}

/// Partial trace of `|ψ⟩⟨ψ|` onto the `keep` modes.
///
/// Works directly from the sparse amplitudes: amplitudes are grouped by
/// their traced-out index and each group contributes its outer product, so
/// the composite density matrix is never formed. The trace of the result is
/// the squared norm of `state`. Kept modes appear in layout order whatever
/// the order of `keep`.
pub fn reduce_from_vector(state: &StateVector, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::Usage(
            "partial trace needs a nonempty keep-set".into(),
        ));
    }
    let layout = state.layout();
    let mut kept_pos = keep
        .iter()
        .map(|l| layout.position(l))
        .collect::<Result<Vec<_>>>()?;
    kept_pos.sort_unstable();
    kept_pos.dedup();
    let traced_pos: Vec<usize> = (0..layout.num_modes())
        .filter(|p| !kept_pos.contains(p))
        .collect();

    let kept_layout = layout.sublayout(&kept_pos)?;
    let kept_strides = kept_layout.strides().to_vec();
    let mut traced_strides = vec![0usize; traced_pos.len()];
    let mut acc = 1usize;
    for k in (0..traced_pos.len()).rev() {
        traced_strides[k] = acc;
        acc *= layout.dims()[traced_pos[k]];
    }

    // (traced index, kept index, amplitude)
    let mut split: Vec<(usize, usize, Complex64)> = state
        .entries()
        .iter()
        .map(|&(i, a)| {
            let kept = kept_pos
                .iter()
                .zip(&kept_strides)
                .map(|(&p, &s)| layout.digit(i, p) * s)
                .sum();
            let traced = traced_pos
                .iter()
                .zip(&traced_strides)
                .map(|(&p, &s)| layout.digit(i, p) * s)
                .sum();
            (traced, kept, a)
        })
        .collect();
    split.sort_unstable_by_key(|&(t, k, _)| (t, k));

    let mut out = Vec::new();
    for group in split.chunk_by(|x, y| x.0 == y.0) {
        for &(_, ki, ai) in group {
            for &(_, kj, aj) in group {
                out.push((ki, kj, ai * aj.conj()));
            }
        }
    }
    DensityMatrix::from_entries(kept_layout, out)
}
