use num_complex::Complex64;

use super::layout::ModeLayout;
use crate::error::{Error, Result};

/// Pure state over a composite truncated Fock basis.
///
/// Amplitudes are stored sparsely as `(flat index, amplitude)` pairs sorted by
/// index; every index not listed has amplitude zero. The squared norm is not
/// forced to one: truncated constructions carry their deficit in it.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: ModeLayout,
    amps: Vec<(usize, Complex64)>,
}

impl StateVector {
    pub fn zero(layout: ModeLayout) -> Self {
        Self {
            layout,
            amps: Vec::new(),
        }
    }

    /// The product basis ket with the given per-mode occupations.
    pub fn basis(layout: ModeLayout, occupations: &[usize]) -> Result<Self> {
        let index = layout.encode(occupations)?;
        Ok(Self {
            layout,
            amps: vec![(index, Complex64::new(1.0, 0.0))],
        })
    }

    /// Builds a state from flat-index entries; repeated indices are summed.
    pub fn from_entries<I>(layout: ModeLayout, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Complex64)>,
    {
        let total = layout.total_dim();
        let mut amps: Vec<(usize, Complex64)> = entries.into_iter().collect();
        if let Some(&(bad, _)) = amps.iter().find(|(i, _)| *i >= total) {
            return Err(Error::Usage(format!(
                "flat index {bad} outside layout of dimension {total}"
            )));
        }
        amps.sort_by_key(|&(i, _)| i);
        Ok(Self {
            layout,
            amps: merge_sorted(amps),
        })
    }

    pub fn from_occupations<I>(layout: ModeLayout, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Complex64)>,
    {
        let flat = entries
            .into_iter()
            .map(|(occ, a)| layout.encode(&occ).map(|i| (i, a)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(layout, flat)
    }

    pub fn from_dense(layout: ModeLayout, amps: &[Complex64]) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(Error::Usage(format!(
                "dense amplitude vector has length {}, layout needs {}",
                amps.len(),
                layout.total_dim()
            )));
        }
        let entries = amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
            .map(|(i, a)| (i, *a));
        Self::from_entries(layout, entries)
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.layout.total_dim()];
        for &(i, a) in &self.amps {
            out[i] = a;
        }
        out
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn entries(&self) -> &[(usize, Complex64)] {
        &self.amps
    }

    pub fn nnz(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude_at(&self, index: usize) -> Complex64 {
        match self.amps.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(k) => self.amps[k].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn amplitude(&self, occupations: &[usize]) -> Result<Complex64> {
        Ok(self.amplitude_at(self.layout.encode(occupations)?))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let amps = self
            .amps
            .iter()
            .map(|&(i, a)| (i, a * factor))
            .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
            .collect();
        Self {
            layout: self.layout.clone(),
            amps,
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<Self> {
        self.check_same_layout(other)?;
        let mut amps = Vec::with_capacity(self.amps.len() + other.amps.len());
        amps.extend_from_slice(&self.amps);
        amps.extend_from_slice(&other.amps);
        amps.sort_by_key(|&(i, _)| i);
        Ok(Self {
            layout: self.layout.clone(),
            amps: merge_sorted(amps),
        })
    }

    pub fn sub(&self, other: &StateVector) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_layout(other)?;
        let (mut i, mut j) = (0, 0);
        let mut acc = Complex64::new(0.0, 0.0);
        while i < self.amps.len() && j < other.amps.len() {
            let (a, b) = (self.amps[i], other.amps[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a.1.conj() * b.1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    /// Returns the unit-norm state and the squared norm it was divided by.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let n2 = self.norm_sqr();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::Numeric(format!(
                "cannot normalize a state with squared norm {n2}"
            )));
        }
        Ok((self.scale(Complex64::new(1.0 / n2.sqrt(), 0.0)), n2))
    }

    /// Tensor product `self ⊗ other`; the layouts are concatenated.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let mut modes: Vec<(&str, usize)> = Vec::new();
        for l in [&self.layout, &other.layout] {
            for (label, &dim) in l.labels().iter().zip(l.dims()) {
                modes.push((label.as_str(), dim));
            }
        }
        let layout = ModeLayout::new(&modes)?;
        let inner_dim = other.layout.total_dim();
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &(i, a) in &self.amps {
            for &(j, b) in &other.amps {
                amps.push((i * inner_dim + j, a * b));
            }
        }
        // Already sorted: i-major, j ascending.
        Ok(Self { layout, amps })
    }

    /// Exchanges the occupations of two modes of equal dimension while
    /// keeping the labels in place, i.e. relabels `a ↔ b`.
    pub fn swap_modes(&self, a: &str, b: &str) -> Result<Self> {
        let (pa, pb) = (self.layout.position(a)?, self.layout.position(b)?);
        let dims = self.layout.dims();
        if dims[pa] != dims[pb] {
            return Err(Error::Usage(format!(
                "cannot swap modes `{a}` and `{b}` of different dimensions"
            )));
        }
        let strides = self.layout.strides();
        let entries = self.amps.iter().map(|&(i, amp)| {
            let (na, nb) = (self.layout.digit(i, pa), self.layout.digit(i, pb));
            let j = i - na * strides[pa] - nb * strides[pb] + nb * strides[pa] + na * strides[pb];
            (j, amp)
        });
        Self::from_entries(self.layout.clone(), entries.collect::<Vec<_>>())
    }

    fn check_same_layout(&self, other: &StateVector) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::Usage("states live on different layouts".into()));
        }
        Ok(())
    }
}

fn merge_sorted(sorted: Vec<(usize, Complex64)>) -> Vec<(usize, Complex64)> {
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(sorted.len());
    for (i, a) in sorted {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += a,
            _ => out.push((i, a)),
        }
    }
    out.retain(|(_, a)| *a != Complex64::new(0.0, 0.0));
    out
}

/// Applies `a†` on `mode`. Amplitude pushed above the cutoff is dropped and
/// its squared weight returned as the spill.
pub fn apply_creation(state: &StateVector, mode: &str) -> Result<(StateVector, f64)> {
    let layout = state.layout();
    let pos = layout.position(mode)?;
    let (dim, stride) = (layout.dims()[pos], layout.strides()[pos]);
    let mut spill = 0.0;
    let mut amps = Vec::with_capacity(state.nnz());
    for &(i, a) in state.entries() {
        let n = layout.digit(i, pos);
        let b = a * ((n + 1) as f64).sqrt();
        if n + 1 >= dim {
            spill += b.norm_sqr();
        } else {
            amps.push((i + stride, b));
        }
    }
    Ok((StateVector::from_entries(layout.clone(), amps)?, spill))
}

/// Applies `a` on `mode`; the vacuum component maps to zero.
pub fn apply_annihilation(state: &StateVector, mode: &str) -> Result<StateVector> {
    let layout = state.layout();
    let pos = layout.position(mode)?;
    let stride = layout.strides()[pos];
    let amps = state.entries().iter().filter_map(|&(i, a)| {
        let n = layout.digit(i, pos);
        (n > 0).then(|| (i - stride, a * (n as f64).sqrt()))
    });
    StateVector::from_entries(layout.clone(), amps.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn single_mode(dim: usize) -> ModeLayout {
        ModeLayout::new(&[("m", dim)]).unwrap()
    }

    #[test]
    fn creation_on_vacuum_and_one() {
        let vac = StateVector::basis(single_mode(4), &[0]).unwrap();
        let (one, spill) = apply_creation(&vac, "m").unwrap();
        assert_eq!(spill, 0.0);
        assert_eq!(one.amplitude(&[1]).unwrap(), c(1.0));
        let (two, spill) = apply_creation(&one, "m").unwrap();
        assert_eq!(spill, 0.0);
        assert!((two.amplitude(&[2]).unwrap() - c(2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn creation_spills_top_level() {
        let top = StateVector::basis(single_mode(4), &[3])
            .unwrap()
            .scale(c(0.5));
        let (out, spill) = apply_creation(&top, "m").unwrap();
        assert_eq!(out.nnz(), 0);
        assert!((spill - 0.25 * 4.0).abs() < 1e-15);
    }

    #[test]
    fn annihilation_basics() {
        let one = StateVector::basis(single_mode(4), &[1]).unwrap();
        let out = apply_annihilation(&one, "m").unwrap();
        assert_eq!(out.amplitude(&[0]).unwrap(), c(1.0));
        let vac = StateVector::basis(single_mode(4), &[0]).unwrap();
        assert_eq!(apply_annihilation(&vac, "m").unwrap().nnz(), 0);
    }

    #[test]
    fn commutator_below_cutoff() {
        let dim = 6;
        for n in 0..dim - 1 {
            let ket = StateVector::basis(single_mode(dim), &[n]).unwrap();
            let (up, _) = apply_creation(&ket, "m").unwrap();
            let a_adag = apply_annihilation(&up, "m").unwrap();
            let down = apply_annihilation(&ket, "m").unwrap();
            let (adag_a, _) = apply_creation(&down, "m").unwrap();
            let diff = a_adag.sub(&adag_a).unwrap().sub(&ket).unwrap();
            assert!(diff.norm_sqr() < 1e-24, "n = {n}");
        }
    }

    #[test]
    fn unknown_mode_is_usage_error() {
        let vac = StateVector::basis(single_mode(3), &[0]).unwrap();
        assert!(matches!(apply_creation(&vac, "x"), Err(Error::Usage(_))));
    }

    #[test]
    fn tensor_and_swap() {
        let a = StateVector::basis(single_mode(2), &[1]).unwrap();
        let pair = ModeLayout::new(&[("I", 3), ("II", 3)]).unwrap();
        let b = StateVector::basis(pair, &[2, 0]).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.layout().labels(), &["m", "I", "II"]);
        assert_eq!(ab.amplitude(&[1, 2, 0]).unwrap(), c(1.0));
        let swapped = ab.swap_modes("I", "II").unwrap();
        assert_eq!(swapped.amplitude(&[1, 0, 2]).unwrap(), c(1.0));
    }

    #[test]
    fn dense_round_trip_and_merging() {
        let l = ModeLayout::new(&[("a", 2), ("b", 3)]).unwrap();
        let s = StateVector::from_entries(l.clone(), vec![(4, c(0.5)), (1, c(0.25)), (4, c(0.5))])
            .unwrap();
        assert_eq!(s.nnz(), 2);
        assert_eq!(s.amplitude_at(4), c(1.0));
        let back = StateVector::from_dense(l, &s.to_dense()).unwrap();
        assert_eq!(back, s);
    }
}
