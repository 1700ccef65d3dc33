//! Dense symmetric kernels: Cholesky, Bunch–Kaufman inertia, tridiagonal QL.
//!
//! Every elimination loop walks only the nonzero entries of the pivot column,
//! which keeps banded problems close to linear cost without a separate band
//! storage format.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{axpy, Matrix};

/// Lower Cholesky factor `A = L Lᵀ` of a symmetric positive-definite matrix.
#[derive(Clone, Debug)]
pub struct Cholesky {
    l: Matrix,
}

impl Cholesky {
    /// Factors `a`. Pivots at or below `16·ε·max|a_ii|` are treated as
    /// nonpositive, so a matrix with a numerically zero eigenvalue is rejected.
    pub fn new(a: &Matrix) -> Result<Self> {
        let scale = (0..a.rows().min(a.cols())).fold(0.0f64, |m, i| m.max(a[(i, i)].abs()));
        Self::with_floor(a, 16.0 * f64::EPSILON * scale)
    }

    /// Factors `a`, rejecting any pivot at or below `floor`.
    pub fn with_floor(a: &Matrix, floor: f64) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: n, found: a.cols() });
        }
        let mut w = a.clone();
        let mut nz = Vec::with_capacity(n);
        for j in 0..n {
            let d = w[(j, j)];
            if !(d > floor) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let ljj = math::sqrt(d);
            w[(j, j)] = ljj;
            nz.clear();
            for i in j + 1..n {
                if w[(i, j)] != 0.0 {
                    w[(i, j)] /= ljj;
                    nz.push(i);
                }
            }
            for (a_idx, &i) in nz.iter().enumerate() {
                let lij = w[(i, j)];
                for &k in &nz[..=a_idx] {
                    let v = lij * w[(k, j)];
                    w[(i, k)] -= v;
                }
            }
        }
        for i in 0..n {
            for v in &mut w.row_mut(i)[i + 1..] {
                *v = 0.0;
            }
        }
        Ok(Cholesky { l: w })
    }

    /// Factor of the Gram matrix `I + GᵀG`, read off a Householder QR of the
    /// stacked `[I; G]`. Forming `GᵀG` first loses the identity once `G` is
    /// large, which happens for `L_E` as `E` approaches `λ0`.
    pub fn of_gram(g: &Matrix) -> Self {
        let (n, m) = (g.cols(), g.rows());
        let mut s = Matrix::zeros(n + m, n);
        for i in 0..n {
            s[(i, i)] = 1.0;
        }
        s.set_block(n, 0, g);
        let mut v = vec![0.0; n + m];
        for j in 0..n {
            let mut norm2 = 0.0;
            for i in j..n + m {
                v[i] = s[(i, j)];
                norm2 += v[i] * v[i];
            }
            let alpha = if v[j] > 0.0 { -math::sqrt(norm2) } else { math::sqrt(norm2) };
            v[j] -= alpha;
            let vv = norm2 - s[(j, j)] * s[(j, j)] + v[j] * v[j];
            if vv > 0.0 {
                for c in j + 1..n {
                    let mut d = 0.0;
                    for i in j..n + m {
                        d += v[i] * s[(i, c)];
                    }
                    let f = 2.0 * d / vv;
                    for i in j..n + m {
                        s[(i, c)] -= f * v[i];
                    }
                }
            }
            s[(j, j)] = alpha;
        }
        let l = Matrix::from_fn(n, n, |i, j| if j <= i { s[(j, i)] * s[(j, j)].signum() } else { 0.0 });
        Cholesky { l }
    }

    pub fn factor(&self) -> &Matrix {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    /// Solves `L Y = B` in place, row by row.
    pub fn forward_mat(&self, b: &mut Matrix) {
        let n = self.dim();
        assert_eq!(b.rows(), n, "forward solve shape mismatch");
        let cols = b.cols();
        let mut acc = vec![0.0; cols];
        for i in 0..n {
            acc.copy_from_slice(b.row(i));
            for k in 0..i {
                let lik = self.l[(i, k)];
                if lik != 0.0 {
                    axpy(-lik, b.row(k), &mut acc);
                }
            }
            let inv = 1.0 / self.l[(i, i)];
            for (dst, v) in b.row_mut(i).iter_mut().zip(&acc) {
                *dst = v * inv;
            }
        }
    }

    /// Solves `Lᵀ X = Y` in place.
    pub fn backward_mat(&self, y: &mut Matrix) {
        let n = self.dim();
        assert_eq!(y.rows(), n, "backward solve shape mismatch");
        let cols = y.cols();
        let mut xi = vec![0.0; cols];
        for i in (0..n).rev() {
            let inv = 1.0 / self.l[(i, i)];
            for (dst, v) in xi.iter_mut().zip(y.row(i)) {
                *dst = v * inv;
            }
            y.row_mut(i).copy_from_slice(&xi);
            for k in 0..i {
                let lik = self.l[(i, k)];
                if lik != 0.0 {
                    axpy(-lik, &xi, y.row_mut(k));
                }
            }
        }
    }

    /// `A⁻¹ B`.
    pub fn solve_mat(&self, b: &Matrix) -> Matrix {
        let mut x = b.clone();
        self.forward_mat(&mut x);
        self.backward_mat(&mut x);
        x
    }

    /// `A⁻¹ v`.
    pub fn solve_vec(&self, v: &[f64]) -> Vec<f64> {
        let b = Matrix::from_vec(v.len(), 1, v.to_vec()).expect("column vector");
        self.solve_mat(&b).column(0)
    }
}

/// Counts of negative, zero and positive eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

/// Inertia of a symmetric matrix by a Bunch–Kaufman `LDLᵀ` factorization
/// (Sylvester's law of inertia). Only exact zero pivots count as zero.
pub fn inertia(a: &Matrix) -> Inertia {
    assert!(a.is_square(), "inertia of a non-square matrix");
    let n = a.rows();
    let alpha = (1.0 + math::sqrt(17.0)) / 8.0;
    let mut w = a.clone();
    let mut out = Inertia { negative: 0, zero: 0, positive: 0 };
    let mut nz: Vec<usize> = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        let akk = w[(k, k)].abs();
        let (mut r, mut colmax) = (k, 0.0f64);
        for i in k + 1..n {
            let v = w[(i, k)].abs();
            if v > colmax {
                colmax = v;
                r = i;
            }
        }
        if akk == 0.0 && colmax == 0.0 {
            out.zero += 1;
            k += 1;
            continue;
        }
        let mut two = false;
        if akk < alpha * colmax {
            let mut rowmax = 0.0f64;
            for j in k..n {
                if j != r {
                    rowmax = rowmax.max(w[(r, j)].abs());
                }
            }
            if akk * rowmax >= alpha * colmax * colmax {
                // 1×1 pivot at k
            } else if w[(r, r)].abs() >= alpha * rowmax {
                sym_swap(&mut w, k, r, k);
            } else {
                sym_swap(&mut w, k + 1, r, k);
                two = true;
            }
        }
        if !two {
            let d = w[(k, k)];
            tally(&mut out, d);
            nz.clear();
            nz.extend((k + 1..n).filter(|&i| w[(i, k)] != 0.0));
            for &i in &nz {
                let f = w[(i, k)] / d;
                for &j in &nz {
                    let v = f * w[(k, j)];
                    w[(i, j)] -= v;
                }
            }
            k += 1;
        } else {
            let (p, q, s) = (w[(k, k)], w[(k + 1, k + 1)], w[(k, k + 1)]);
            let det = p * q - s * s;
            // Eigenvalue signs of the 2×2 block.
            if det < 0.0 {
                out.negative += 1;
                out.positive += 1;
            } else if det > 0.0 {
                let sgn = if p + q > 0.0 { 1.0 } else { -1.0 };
                tally(&mut out, sgn);
                tally(&mut out, sgn);
            } else {
                out.zero += 1;
                tally(&mut out, p + q);
            }
            nz.clear();
            nz.extend((k + 2..n).filter(|&i| w[(i, k)] != 0.0 || w[(i, k + 1)] != 0.0));
            if det != 0.0 {
                let (i00, i01, i11) = (q / det, -s / det, p / det);
                for &i in &nz {
                    let (x0, x1) = (w[(i, k)], w[(i, k + 1)]);
                    let f0 = i00 * x0 + i01 * x1;
                    let f1 = i01 * x0 + i11 * x1;
                    for &j in &nz {
                        let v = f0 * w[(k, j)] + f1 * w[(k + 1, j)];
                        w[(i, j)] -= v;
                    }
                }
            }
            k += 2;
        }
    }
    out
}

fn tally(out: &mut Inertia, d: f64) {
    if d < 0.0 {
        out.negative += 1;
    } else if d > 0.0 {
        out.positive += 1;
    } else {
        out.zero += 1;
    }
}

/// Symmetric permutation swapping indices `i` and `j` of the trailing block
/// starting at `from`.
fn sym_swap(w: &mut Matrix, i: usize, j: usize, from: usize) {
    if i == j {
        return;
    }
    let n = w.rows();
    for c in from..n {
        let t = w[(i, c)];
        w[(i, c)] = w[(j, c)];
        w[(j, c)] = t;
    }
    for r in from..n {
        let t = w[(r, i)];
        w[(r, i)] = w[(r, j)];
        w[(r, j)] = t;
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns the diagonal `d` and the coupling `e`, where `e[i]` joins `i` and
/// `i + 1` and `e[n - 1] = 0`.
pub fn tridiagonalize(a: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut w = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut z = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut sq = 0.0;
        for i in 0..m {
            v[i] = w[(k + 1 + i, k)];
            sq += v[i] * v[i];
        }
        d[k] = w[(k, k)];
        let xnorm = math::sqrt(sq);
        let tail: f64 = sq - v[0] * v[0];
        if tail == 0.0 {
            e[k] = v[0];
            continue;
        }
        let alpha = if v[0] > 0.0 { -xnorm } else { xnorm };
        v[0] -= alpha;
        let vn = math::sqrt(tail + v[0] * v[0]);
        for vi in &mut v[..m] {
            *vi /= vn;
        }
        e[k] = alpha;
        // z = S v − (vᵀ S v) v with S the trailing block.
        for (i, zi) in z[..m].iter_mut().enumerate() {
            let row = &w.row(k + 1 + i)[k + 1..];
            *zi = row.iter().zip(&v[..m]).map(|(s, vj)| s * vj).sum();
        }
        let c: f64 = z[..m].iter().zip(&v[..m]).map(|(a, b)| a * b).sum();
        for i in 0..m {
            z[i] -= c * v[i];
        }
        // S ← S − 2 v zᵀ − 2 z vᵀ.
        for i in 0..m {
            let (vi, zi) = (2.0 * v[i], 2.0 * z[i]);
            let row = &mut w.row_mut(k + 1 + i)[k + 1..];
            for j in 0..m {
                row[j] -= vi * z[j] + zi * v[j];
            }
        }
    }
    if n >= 2 {
        d[n - 2] = w[(n - 2, n - 2)];
        e[n - 2] = w[(n - 1, n - 2)];
    }
    if n >= 1 {
        d[n - 1] = w[(n - 1, n - 1)];
    }
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts, sorted ascending.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigFailure);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &Matrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let (d, e) = tridiagonalize(a);
    tridiagonal_eigenvalues(d, e)
}

/// Eigenvalues of the symmetric-definite pencil `K v = μ M v`, ascending, by
/// reduction `R⁻¹ K R⁻ᵀ` with `M = R Rᵀ`.
pub fn generalized_eigenvalues(k: &Matrix, m: &Matrix) -> Result<Vec<f64>> {
    if k.rows() != m.rows() || !k.is_square() || !m.is_square() {
        return Err(Error::DimensionMismatch { expected: k.rows(), found: m.rows() });
    }
    generalized_eigenvalues_factored(k, &Cholesky::new(m)?)
}

/// As [`generalized_eigenvalues`] with `M = R Rᵀ` already factored.
pub fn generalized_eigenvalues_factored(k: &Matrix, chol: &Cholesky) -> Result<Vec<f64>> {
    if k.rows() != chol.dim() || !k.is_square() {
        return Err(Error::DimensionMismatch { expected: chol.dim(), found: k.rows() });
    }
    let mut x = k.clone();
    chol.forward_mat(&mut x);
    let mut w = x.transpose();
    chol.forward_mat(&mut w);
    symmetric_eigenvalues(&w.symmetrized())
}

/// Number of pencil eigenvalues strictly below `sigma`, i.e. the negative
/// inertia of `K − σM` (valid because `M` is positive definite).
pub fn pencil_count_below(k: &Matrix, m: &Matrix, sigma: f64) -> usize {
    inertia(&k.sub(&m.scale(sigma))).negative
}

/// Largest `|i − j|` over the nonzero entries.
pub fn half_bandwidth(a: &Matrix) -> usize {
    let mut b = 0;
    for i in 0..a.rows() {
        for (j, v) in a.row(i).iter().enumerate() {
            if *v != 0.0 {
                b = b.max(i.abs_diff(j));
            }
        }
    }
    b
}

/// Repeated inertia counts of `K − σM` for one pencil.
///
/// Narrow-band pencils are copied into band storage and counted with an
/// unpivoted `LDLᵀ` (a Sturm count when the band is tridiagonal). A pivot below
/// `1e-10` of its row scale sends that count through the pivoted dense path.
#[derive(Clone, Debug)]
pub struct PencilCounter<'a> {
    k: &'a Matrix,
    m: &'a Matrix,
    band: Option<Band>,
}

#[derive(Clone, Debug)]
struct Band {
    b: usize,
    // Entry (i, i − j) at [i * (b + 1) + j].
    k: Vec<f64>,
    m: Vec<f64>,
}

/// Widest band worth storing separately.
const MAX_BAND: usize = 16;

impl<'a> PencilCounter<'a> {
    pub fn new(k: &'a Matrix, m: &'a Matrix) -> Self {
        let n = k.rows();
        let b = half_bandwidth(k).max(half_bandwidth(m));
        let band = (b <= MAX_BAND && 4 * b < n).then(|| {
            let w = b + 1;
            let mut kb = vec![0.0; n * w];
            let mut mb = vec![0.0; n * w];
            for i in 0..n {
                for j in 0..=b.min(i) {
                    kb[i * w + j] = k[(i, i - j)];
                    mb[i * w + j] = m[(i, i - j)];
                }
            }
            Band { b, k: kb, m: mb }
        });
        PencilCounter { k, m, band }
    }

    pub fn is_banded(&self) -> bool {
        self.band.is_some()
    }

    pub fn count_below(&self, sigma: f64) -> usize {
        if let Some(band) = &self.band {
            if let Some(c) = band.count_below(sigma) {
                return c;
            }
        }
        pencil_count_below(self.k, self.m, sigma)
    }

    /// The `idx`-th smallest (1-based) pencil eigenvalue by bisection on the
    /// count. `M ⪰ I` is assumed, which bounds every eigenvalue by `‖K‖∞`.
    pub fn eigenvalue(&self, idx: usize) -> Result<f64> {
        let n = self.k.rows();
        if idx == 0 || idx > n {
            return Err(Error::KOutOfRange { k: idx, n_plus: n });
        }
        let bound = self.k.inf_norm() + 1.0;
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= idx {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

impl Band {
    fn count_below(&self, sigma: f64) -> Option<usize> {
        let w = self.b + 1;
        let n = self.k.len() / w;
        // Row i of L at l[i * w + j] holds l_{i, i−j}; d holds the pivots.
        let mut l = vec![0.0; n * w];
        let mut d = vec![0.0; n];
        let mut neg = 0;
        for i in 0..n {
            let a = |j: usize| self.k[i * w + j] - sigma * self.m[i * w + j];
            let mut scale = 0.0f64;
            for j in (1..=self.b.min(i)).rev() {
                let col = i - j;
                let mut v = a(j);
                scale = scale.max(v.abs());
                // Σ_{t < col} l_{i,t} d_t l_{col,t}, with t ≥ i − b.
                for t in (i.saturating_sub(self.b))..col {
                    v -= l[i * w + (i - t)] * d[t] * l[col * w + (col - t)];
                }
                l[i * w + j] = v / d[col];
            }
            let mut di = a(0);
            scale = scale.max(di.abs());
            for j in 1..=self.b.min(i) {
                let lij = l[i * w + j];
                di -= lij * lij * d[i - j];
            }
            if !(di.abs() > 1e-10 * scale) {
                return None;
            }
            if di < 0.0 {
                neg += 1;
            }
            d[i] = di;
        }
        Some(neg)
    }
}

/// The `idx`-th smallest (1-based) pencil eigenvalue by inertia bisection.
pub fn pencil_eigenvalue_bisect(k: &Matrix, m: &Matrix, idx: usize) -> Result<f64> {
    PencilCounter::new(k, m).eigenvalue(idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_factor_reproduces_gram() {
        let g = Matrix::from_rows(&[[1.0, -2.0, 0.5], [3.0, 0.25, -1.0]]).unwrap();
        let m = g.tr_matmul(&g).add_diag(1.0);
        let l = Cholesky::of_gram(&g);
        let back = l.factor().matmul(&l.factor().transpose());
        assert!(back.sub(&m).max_abs() < 1e-14);
        let direct = Cholesky::new(&m).unwrap();
        assert!(direct.factor().sub(l.factor()).max_abs() < 1e-14);
    }
    use approx::assert_abs_diff_eq;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn cholesky_solves() {
        let a = m(&[&[4.0, 2.0, 0.0], &[2.0, 5.0, 1.0], &[0.0, 1.0, 3.0]]);
        let ch = Cholesky::new(&a).unwrap();
        let l = ch.factor();
        assert!(l.matmul(&l.transpose()).sub(&a).max_abs() < 1e-14);
        let x = ch.solve_vec(&[1.0, 2.0, 3.0]);
        let r = a.matvec(&x);
        for (ri, bi) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*ri, bi, epsilon = 1e-14);
        }
    }

    #[test]
    fn cholesky_rejects_singular_and_indefinite() {
        assert!(matches!(Cholesky::new(&m(&[&[0.0]])), Err(Error::NotPositiveDefinite { pivot: 0 })));
        let a = m(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(Cholesky::new(&a), Err(Error::NotPositiveDefinite { pivot: 1 })));
    }

    #[test]
    fn inertia_counts() {
        assert_eq!(inertia(&Matrix::diag(&[1.0, -2.0, 0.0, 3.0])), Inertia { negative: 1, zero: 1, positive: 2 });
        // Zero diagonal forces a 2×2 pivot.
        let a = m(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, -1.0]]);
        assert_eq!(inertia(&a), Inertia { negative: 2, zero: 0, positive: 1 });
    }

    #[test]
    fn tridiagonal_ql_small() {
        let ev = tridiagonal_eigenvalues(vec![2.0, 2.0], vec![1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 3.0, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_eigenvalues_of_path_laplacian() {
        // Eigenvalues 2 − 2cos(jπ/(n+1)).
        let n = 9;
        let a = Matrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let ev = symmetric_eigenvalues(&a).unwrap();
        for (j, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * libm::cos((j + 1) as f64 * core::f64::consts::PI / (n + 1) as f64);
            assert_abs_diff_eq!(*v, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn pencil_paths_agree() {
        let k = m(&[&[1.0, 0.5, 0.0], &[0.5, -2.0, 0.3], &[0.0, 0.3, 0.7]]);
        let mm = m(&[&[2.0, 0.1, 0.0], &[0.1, 1.5, 0.2], &[0.0, 0.2, 1.2]]);
        let ev = generalized_eigenvalues(&k, &mm).unwrap();
        for (i, v) in ev.iter().enumerate() {
            let b = pencil_eigenvalue_bisect(&k, &mm, i + 1).unwrap();
            assert_abs_diff_eq!(*v, b, epsilon = 1e-13);
        }
        assert_eq!(pencil_count_below(&k, &mm, 0.0), 1);
    }

    #[test]
    fn band_count_matches_dense() {
        let n = 30;
        let k = Matrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => (i as f64 * 0.7).sin() * 3.0,
            1 => 1.0 + 0.1 * (i + j) as f64,
            2 => -0.3,
            _ => 0.0,
        });
        let mm = Matrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => 0.25,
            _ => 0.0,
        });
        let counter = PencilCounter::new(&k, &mm);
        assert!(counter.is_banded());
        for s in [-4.0, -1.3, 0.0, 0.77, 2.5] {
            assert_eq!(counter.count_below(s), pencil_count_below(&k, &mm, s));
        }
        let ev = generalized_eigenvalues(&k, &mm).unwrap();
        assert_abs_diff_eq!(counter.eigenvalue(4).unwrap(), ev[3], epsilon = 1e-12);
    }
}
