//! Eigenvalues of sparse Hermitian matrices.
//!
//! Reduced states of the channel inputs are extremely sparse and decompose
//! into many independent blocks (number-parity sectors, and tiny 2×2 blocks
//! under the single-mode approximation). The spectrum is assembled block by
//! block: each connected component of the sparsity graph is reordered with
//! reverse Cuthill–McKee and handed to a tridiagonal QL solver, a banded
//! Givens reduction, or a dense solver, whichever fits its shape.

use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::density::DensityMatrix;
use crate::error::{Error, Result};

/// Elementwise Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in `(-CLAMP_TOL, 0)` are reported as zero.
pub const CLAMP_TOL: f64 = 1e-10;

const DENSE_MAX: usize = 160;
const QL_MAX_ITER: usize = 30;

/// Real eigenvalues of a Hermitian matrix, in descending order.
///
/// Tiny negative eigenvalues (above `-1e-10`) are clamped to zero; larger
/// negative ones are returned untouched so callers can reject them.
pub fn hermitian_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let defect = rho.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::Numeric(format!(
            "matrix is not Hermitian: elementwise defect {defect:e}"
        )));
    }
    let n = rho.dim();
    let mut values = Vec::with_capacity(n);
    let mut touched = vec![false; n];

    for block in components(n, rho.entries()) {
        for &(i, j, _) in &block.entries {
            touched[block.nodes[i]] = true;
            touched[block.nodes[j]] = true;
        }
        values.extend(block_spectrum(&block)?);
    }
    // Rows with no entries at all are exact zero eigenvalues.
    values.extend(touched.iter().filter(|t| !**t).map(|_| 0.0));

    for v in values.iter_mut() {
        if *v < 0.0 && *v > -CLAMP_TOL {
            *v = 0.0;
        }
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Dense eigen-decomposition `(eigenvalues, eigenvectors as columns)`.
/// Intended for small matrices.
pub fn hermitian_eigenpairs(rho: &DensityMatrix) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let defect = rho.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::Numeric(format!(
            "matrix is not Hermitian: elementwise defect {defect:e}"
        )));
    }
    let eig = SymmetricEigen::new(rho.to_dense());
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

struct Block {
    /// Global indices, ascending.
    nodes: Vec<usize>,
    /// Entries in local indices.
    entries: Vec<(usize, usize, Complex64)>,
}

fn components(n: usize, entries: &[(usize, usize, Complex64)]) -> Vec<Block> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut present = vec![false; n];
    for &(i, j, _) in entries {
        present[i] = true;
        present[j] = true;
        if i != j {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut block_of = vec![usize::MAX; n];
    let mut local = vec![0usize; n];
    let mut blocks: Vec<Block> = Vec::new();
    for i in 0..n {
        if !present[i] {
            continue;
        }
        let root = find(&mut parent, i);
        if block_of[root] == usize::MAX {
            block_of[root] = blocks.len();
            blocks.push(Block {
                nodes: Vec::new(),
                entries: Vec::new(),
            });
        }
        let b = block_of[root];
        block_of[i] = b;
        local[i] = blocks[b].nodes.len();
        blocks[b].nodes.push(i);
    }
    for &(i, j, v) in entries {
        blocks[block_of[i]].entries.push((local[i], local[j], v));
    }
    blocks
}

fn block_spectrum(block: &Block) -> Result<Vec<f64>> {
    let m = block.nodes.len();
    if m == 1 {
        let v = block.entries.iter().map(|e| e.2.re).sum();
        return Ok(vec![v]);
    }
    let order = banded_order(m, &block.entries);
    let is_real = block.entries.iter().all(|e| e.2.im == 0.0);
    if is_real {
        let real: Vec<(usize, usize, f64)> = block
            .entries
            .iter()
            .map(|&(i, j, v)| (order[i], order[j], v.re))
            .collect();
        symmetric_eigenvalues(m, &real)
    } else {
        // [[Re, -Im], [Im, Re]] has the spectrum of the Hermitian block with
        // every eigenvalue doubled; interleaving keeps the band narrow.
        let mut real = Vec::with_capacity(4 * block.entries.len());
        for &(i, j, v) in &block.entries {
            let (a, b) = (2 * order[i], 2 * order[j]);
            real.push((a, b, v.re));
            real.push((a + 1, b + 1, v.re));
            real.push((a, b + 1, -v.im));
            real.push((a + 1, b, v.im));
        }
        let mut doubled = symmetric_eigenvalues(2 * m, &real)?;
        doubled.sort_by(f64::total_cmp);
        Ok(doubled.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
    }
}

/// New position of every local node: the natural order or reverse
/// Cuthill–McKee, whichever gives the narrower band.
fn banded_order(m: usize, entries: &[(usize, usize, Complex64)]) -> Vec<usize> {
    let natural: Vec<usize> = (0..m).collect();
    let natural_bw = bandwidth(entries, &natural);
    if natural_bw <= 1 {
        return natural;
    }
    let rcm = reverse_cuthill_mckee(m, entries);
    if bandwidth(entries, &rcm) < natural_bw {
        rcm
    } else {
        natural
    }
}

fn bandwidth(entries: &[(usize, usize, Complex64)], pos: &[usize]) -> usize {
    entries
        .iter()
        .map(|&(i, j, _)| pos[i].abs_diff(pos[j]))
        .max()
        .unwrap_or(0)
}

/// Position of each node in the RCM ordering of a connected graph.
fn reverse_cuthill_mckee(m: usize, entries: &[(usize, usize, Complex64)]) -> Vec<usize> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(i, j, _) in entries {
        if i < j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    for list in adj.iter_mut() {
        list.sort_by_key(|&v| (degree[v], v));
    }

    let bfs = |start: usize| -> Vec<usize> {
        let mut seen = vec![false; m];
        let mut order = Vec::with_capacity(m);
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    };

    // Pseudo-peripheral start: repeat BFS from the last node reached.
    let mut start = (0..m).min_by_key(|&v| (degree[v], v)).unwrap_or(0);
    let mut order = bfs(start);
    for _ in 0..2 {
        let far = *order.last().unwrap_or(&start);
        if far == start {
            break;
        }
        let candidate = bfs(far);
        start = far;
        order = candidate;
    }
    // Disconnected leftovers (not expected for a component) keep their order.
    let mut placed = vec![false; m];
    for &v in &order {
        placed[v] = true;
    }
    order.extend((0..m).filter(|&v| !placed[v]));

    let mut pos = vec![0usize; m];
    for (k, &v) in order.iter().rev().enumerate() {
        pos[v] = k;
    }
    pos
}

/// Eigenvalues of a real symmetric matrix given by both triangles.
fn symmetric_eigenvalues(m: usize, entries: &[(usize, usize, f64)]) -> Result<Vec<f64>> {
    let bw = entries
        .iter()
        .map(|&(i, j, _)| i.abs_diff(j))
        .max()
        .unwrap_or(0);
    if bw == 0 {
        let mut d = vec![0.0; m];
        for &(i, _, v) in entries {
            d[i] += v;
        }
        return Ok(d);
    }
    if bw == 1 {
        let mut d = vec![0.0; m];
        let mut e = vec![0.0; m];
        for &(i, j, v) in entries {
            if i == j {
                d[i] += v;
            } else if i == j + 1 {
                e[j] += v;
            }
        }
        tridiagonal_eigenvalues(&mut d, &mut e)?;
        return Ok(d);
    }
    if m <= DENSE_MAX || 5 * bw >= m {
        let mut a = DMatrix::<f64>::zeros(m, m);
        for &(i, j, v) in entries {
            a[(i, j)] += v;
        }
        return Ok(a.symmetric_eigenvalues().iter().copied().collect());
    }
    let mut band = SymmetricBand::new(m, bw);
    for &(i, j, v) in entries {
        band.add(i, j, v);
    }
    let (mut d, mut e) = band.tridiagonalize();
    tridiagonal_eigenvalues(&mut d, &mut e)?;
    Ok(d)
}

/// Eigenvalues of a symmetric tridiagonal matrix by root-free implicit QL
/// (the Pal–Walker–Kahan variant, which works on squared off-diagonals and
/// needs no square roots in the sweep).
///
/// `d` holds the diagonal and is overwritten with the eigenvalues (in no
/// particular order); `e[i]` couples `i` and `i + 1`, the last slot is
/// ignored. `e` is clobbered.
pub(crate) fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    // QL converges from the top; put the large end of graded inputs last.
    if d[n - 1].abs() < d[0].abs() {
        d.reverse();
        e[..n - 1].reverse();
    }
    // Graded inputs reach the subnormal range, where the relative test
    // alone never fires; absolute deflation at ε‖T‖ costs nothing in the
    // absolute eigenvalue accuracy that entropies need.
    let norm = (0..n)
        .map(|i| d[i].abs() + if i + 1 < n { e[i].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    let floor2 = (f64::EPSILON * norm).powi(2);
    let eps2 = f64::EPSILON * f64::EPSILON;
    for i in 0..n - 1 {
        e[i] *= e[i];
    }
    e[n - 1] = 0.0;

    let max_iter = QL_MAX_ITER * n;
    let mut iterations = 0;
    let mut l = 0;
    while l < n {
        let mut m = l;
        while m + 1 < n {
            if e[m] <= eps2 * (d[m] * d[m + 1]).abs() || e[m] <= floor2 {
                e[m] = 0.0;
                break;
            }
            m += 1;
        }
        if m == l {
            l += 1;
            continue;
        }
        if m == l + 1 {
            let (r1, r2) = eig2(d[l], e[l].sqrt(), d[l + 1]);
            d[l] = r1;
            d[l + 1] = r2;
            e[l] = 0.0;
            l += 2;
            continue;
        }
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::Numeric(
                "tridiagonal QL iteration did not converge".into(),
            ));
        }
        let rte = e[l].sqrt();
        let mut sigma = (d[l + 1] - d[l]) / (2.0 * rte);
        let r = sigma.hypot(1.0);
        sigma = d[l] - rte / (sigma + r.copysign(sigma));
        let (mut c, mut s) = (1.0, 0.0);
        let mut gamma = d[m] - sigma;
        let mut p = gamma * gamma;
        for i in (l..m).rev() {
            let bb = e[i];
            let r = p + bb;
            if i + 1 != m {
                e[i + 1] = s * r;
            }
            let oldc = c;
            c = p / r;
            s = bb / r;
            let oldgam = gamma;
            let alpha = d[i];
            gamma = c * (alpha - sigma) - s * oldgam;
            d[i + 1] = oldgam + (alpha - gamma);
            p = if c != 0.0 {
                gamma * gamma / c
            } else {
                oldc * bb
            };
        }
        e[l] = s * p;
        d[l] = sigma + gamma;
    }
    Ok(())
}

/// Eigenvalues of `[[a, b], [b, c]]`.
fn eig2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let sm = a + c;
    let rt = (a - c).hypot(2.0 * b);
    if sm == 0.0 {
        return (0.5 * rt, -0.5 * rt);
    }
    let r1 = 0.5 * (sm + rt.copysign(sm));
    (r1, (a * c - b * b) / r1)
}

/// Lower triangle of a symmetric band matrix, stored by column with room
/// for one bulge below the band: `data[j * stride + d] = A[j + d][j]`.
struct SymmetricBand {
    n: usize,
    bw: usize,
    stride: usize,
    data: Vec<f64>,
}

impl SymmetricBand {
    fn new(n: usize, bw: usize) -> Self {
        let stride = bw + 2;
        Self {
            n,
            bw,
            stride,
            data: vec![0.0; n * stride],
        }
    }

    /// Position of `A[i][j]` for `i ≥ j` inside the storage.
    #[inline(always)]
    fn at(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= j && i - j < self.stride);
        j * self.stride + (i - j)
    }

    /// Adds to `A[i][j]`; upper-triangle entries are ignored since the
    /// matrix is symmetric.
    fn add(&mut self, i: usize, j: usize, v: f64) {
        if i >= j {
            let k = self.at(i, j);
            self.data[k] += v;
        }
    }

    #[inline(always)]
    fn rotate_pair(&mut self, x: usize, y: usize, c: f64, s: f64) {
        let (a, b) = (self.data[x], self.data[y]);
        self.data[x] = c * a + s * b;
        self.data[y] = -s * a + c * b;
    }

    /// `A ← G A Gᵀ` for a rotation in the plane `(p, p + 1)` while the
    /// band has half-width `k` plus a bulge at distance `k + 1`.
    fn rotate(&mut self, p: usize, k: usize, c: f64, s: f64) {
        let q = p + 1;
        for j in q.saturating_sub(k + 1)..p {
            let (x, y) = (self.at(p, j), self.at(q, j));
            self.rotate_pair(x, y, c, s);
        }
        let (ipp, iqp, iqq) = (self.at(p, p), self.at(q, p), self.at(q, q));
        let (app, aqp, aqq) = (self.data[ipp], self.data[iqp], self.data[iqq]);
        self.data[ipp] = c * c * app + 2.0 * c * s * aqp + s * s * aqq;
        self.data[iqq] = s * s * app - 2.0 * c * s * aqp + c * c * aqq;
        self.data[iqp] = c * s * (aqq - app) + (c * c - s * s) * aqp;
        for i in q + 1..=(p + k + 1).min(self.n - 1) {
            let (x, y) = (self.at(i, p), self.at(i, q));
            self.rotate_pair(x, y, c, s);
        }
    }

    /// Reduces to tridiagonal form by peeling one outer diagonal at a time
    /// and chasing each bulge off the end of the matrix.
    fn tridiagonalize(mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        for k in (2..=self.bw).rev() {
            for i in 0..n.saturating_sub(k) {
                // Annihilate A[t][col] against the pivot A[t − 1][col].
                let (mut t, mut col) = (i + k, i);
                while t < n {
                    let it = self.at(t, col);
                    let target = self.data[it];
                    if target == 0.0 {
                        break;
                    }
                    let ip = self.at(t - 1, col);
                    let pivot = self.data[ip];
                    let mut rho = (pivot * pivot + target * target).sqrt();
                    if rho < 1e-150 {
                        // The squares underflow here.
                        rho = pivot.hypot(target);
                    }
                    self.rotate(t - 1, k, pivot / rho, target / rho);
                    self.data[it] = 0.0;
                    col = t - 1;
                    t += k;
                }
            }
        }
        let d = (0..n).map(|i| self.data[self.at(i, i)]).collect();
        let e = (0..n)
            .map(|i| {
                if i + 1 < n {
                    self.data[self.at(i + 1, i)]
                } else {
                    0.0
                }
            })
            .collect();
        (d, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::layout::ModeLayout;
    use rand::{Rng, SeedableRng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn layout(n: usize) -> ModeLayout {
        ModeLayout::new(&[("m", n)]).unwrap()
    }

    fn dense_reference(m: &DMatrix<Complex64>) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{x} vs {y}");
        }
    }

    #[test]
    fn diagonal_and_bell() {
        let rho =
            DensityMatrix::from_entries(layout(2), vec![(0, 0, c(0.25)), (1, 1, c(0.75))]).unwrap();
        assert_eq!(hermitian_spectrum(&rho).unwrap(), vec![0.75, 0.25]);
        let bell =
            DensityMatrix::from_entries(layout(2), vec![(0, 0, c(0.5)), (1, 1, c(0.5))]).unwrap();
        assert_eq!(hermitian_spectrum(&bell).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn random_hermitian_reconstructs_from_eigenpairs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let n = 10;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0));
            for j in 0..i {
                let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        let rho = DensityMatrix::from_dense(layout(n), &m).unwrap();
        let (values, vectors) = hermitian_eigenpairs(&rho).unwrap();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            values.iter().map(|&v| c(v)),
        ));
        let rebuilt = &vectors * diag * vectors.adjoint();
        assert!((rebuilt - &m).iter().all(|d| d.norm() < 1e-10));
        assert_close(
            &hermitian_spectrum(&rho).unwrap(),
            &dense_reference(&m),
            1e-10,
        );
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            DensityMatrix::from_entries(layout(2), vec![(0, 1, c(0.1)), (1, 0, c(0.2))]).unwrap();
        assert!(matches!(hermitian_spectrum(&m), Err(Error::Numeric(_))));
    }

    #[test]
    fn clamps_tiny_negatives_only() {
        let m = DensityMatrix::from_entries(
            layout(3),
            vec![(0, 0, c(1.0)), (1, 1, c(-1e-12)), (2, 2, c(-1e-3))],
        )
        .unwrap();
        assert_eq!(hermitian_spectrum(&m).unwrap(), vec![1.0, 0.0, -1e-3]);
    }

    fn random_banded(n: usize, bw: usize, complex: bool, seed: u64) -> DMatrix<Complex64> {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0));
            for j in i.saturating_sub(bw)..i {
                let im = if complex {
                    rng.gen_range(-1.0..1.0)
                } else {
                    0.0
                };
                let v = Complex64::new(rng.gen_range(-1.0..1.0), im);
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        m
    }

    #[test]
    fn tridiagonal_path_matches_dense() {
        let m = random_banded(300, 1, false, 5);
        let rho = DensityMatrix::from_dense(layout(300), &m).unwrap();
        assert_close(
            &hermitian_spectrum(&rho).unwrap(),
            &dense_reference(&m),
            1e-11,
        );
    }

    #[test]
    fn banded_path_matches_dense() {
        for (bw, seed) in [(2, 1), (7, 2), (30, 3)] {
            let m = random_banded(400, bw, false, seed);
            let rho = DensityMatrix::from_dense(layout(400), &m).unwrap();
            assert_close(
                &hermitian_spectrum(&rho).unwrap(),
                &dense_reference(&m),
                1e-10,
            );
        }
    }

    #[test]
    fn complex_banded_path_matches_dense() {
        let m = random_banded(260, 3, true, 9);
        let rho = DensityMatrix::from_dense(layout(260), &m).unwrap();
        assert_close(
            &hermitian_spectrum(&rho).unwrap(),
            &dense_reference(&m),
            1e-10,
        );
    }

    #[test]
    fn scrambled_band_is_recovered_by_rcm() {
        // A pentadiagonal matrix under a random relabelling.
        let n = 500;
        let m = random_banded(n, 2, false, 21);
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut scrambled = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                scrambled[(perm[i], perm[j])] = m[(i, j)];
            }
        }
        let entries: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| scrambled[(i, j)] != c(0.0))
            .map(|(i, j)| (i, j, scrambled[(i, j)]))
            .collect();
        let order = reverse_cuthill_mckee(n, &entries);
        assert!(bandwidth(&entries, &order) <= 4);
        let rho = DensityMatrix::from_dense(layout(n), &scrambled).unwrap();
        assert_close(
            &hermitian_spectrum(&rho).unwrap(),
            &dense_reference(&m),
            1e-10,
        );
    }

    #[test]
    fn block_diagonal_matrix_is_split() {
        let mut m = DMatrix::<Complex64>::zeros(6, 6);
        m[(0, 0)] = c(0.2);
        m[(0, 3)] = c(0.1);
        m[(3, 0)] = c(0.1);
        m[(3, 3)] = c(0.3);
        m[(1, 1)] = c(0.4);
        m[(5, 5)] = c(0.1);
        let rho = DensityMatrix::from_dense(layout(6), &m).unwrap();
        let blocks = components(6, rho.entries());
        assert_eq!(blocks.len(), 3);
        assert_close(
            &hermitian_spectrum(&rho).unwrap(),
            &dense_reference(&m),
            1e-14,
        );
    }
}
