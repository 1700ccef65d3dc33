//! The energy-dependent Schur complement and its pencil.
//!
//! For `E > λ0` the lower block `B + E` is positive definite and
//!
//! ```text
//! L_E = (B+E)⁻¹ C
//! K_E = P − E + Cᵀ (B+E)⁻¹ C          q_E(x) = xᵀ K_E x
//! M_E = I + L_Eᵀ L_E                  ‖x‖²_E = xᵀ M_E x
//! ```
//!
//! `q_E(x)` is the maximum over `y` of `⟨x⊕y, A(x⊕y)⟩ − E‖x⊕y‖²`, attained at
//! `y = L_E x`, and `d/dE q_E(x) = −‖x‖²_E`. The lower bound of `q_E` relative
//! to `‖·‖_E` needs no separate constant here: every form on a finite space is
//! bounded.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Cholesky, PencilCounter};
use crate::linop::BlockOperator;
use crate::matrix::{dot, Matrix};

/// How the `k`-th pencil eigenvalue is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PencilMethod {
    /// Reduction for small or dense pencils, bisection for large sparse ones.
    #[default]
    Auto,
    /// `M = RRᵀ`, then all eigenvalues of `R⁻¹KR⁻ᵀ`.
    Reduction,
    /// Sylvester inertia of `K − σM` with bisection on `σ`.
    Bisection,
}

impl PencilMethod {
    fn resolve(self, k: &Matrix, m: &Matrix) -> PencilMethod {
        match self {
            PencilMethod::Auto => {
                let n = k.rows();
                let density = (k.nnz() + m.nnz()) as f64 / (2 * n * n) as f64;
                if n > 96 && density < 0.1 {
                    PencilMethod::Bisection
                } else {
                    PencilMethod::Reduction
                }
            }
            other => other,
        }
    }
}

/// Factorization of `B + E` for repeated solves.
#[derive(Clone, Debug)]
pub struct Resolvent {
    e: f64,
    kind: ResolventKind,
}

#[derive(Clone, Debug)]
enum ResolventKind {
    Diagonal(Vec<f64>),
    Dense(Cholesky),
}

impl Resolvent {
    /// Factors `b + e·I`; fails with `NotPositiveDefinite` when `e` is at or
    /// below `-min σ(b)` up to rounding.
    pub fn new(b: &Matrix, e: f64) -> Result<Self> {
        let shifted = b.add_diag(e);
        let n = shifted.rows();
        let is_diag = (0..n).all(|i| shifted.row(i).iter().enumerate().all(|(j, v)| i == j || *v == 0.0));
        let kind = if is_diag {
            let d = shifted.diagonal();
            let floor = 16.0 * f64::EPSILON * d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if let Some(pivot) = d.iter().position(|v| !(*v > floor)) {
                return Err(Error::NotPositiveDefinite { pivot });
            }
            ResolventKind::Diagonal(d)
        } else {
            ResolventKind::Dense(Cholesky::new(&shifted)?)
        };
        Ok(Resolvent { e, kind })
    }

    pub fn energy(&self) -> f64 {
        self.e
    }

    pub fn solve_vec(&self, v: &[f64]) -> Vec<f64> {
        match &self.kind {
            ResolventKind::Diagonal(d) => v.iter().zip(d).map(|(x, di)| x / di).collect(),
            ResolventKind::Dense(ch) => ch.solve_vec(v),
        }
    }

    pub fn solve_mat(&self, rhs: &Matrix) -> Matrix {
        match &self.kind {
            ResolventKind::Diagonal(d) => {
                let mut out = rhs.clone();
                for (i, di) in d.iter().enumerate() {
                    for v in out.row_mut(i) {
                        *v /= di;
                    }
                }
                out
            }
            ResolventKind::Dense(ch) => ch.solve_mat(rhs),
        }
    }
}

/// Solves `(b + e·I) y = v`.
pub fn resolvent_apply(b: &Matrix, e: f64, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != b.rows() {
        return Err(Error::DimensionMismatch { expected: b.rows(), found: v.len() });
    }
    Ok(Resolvent::new(b, e)?.solve_vec(v))
}

/// `K_E`, `M_E` and `L_E` at one energy.
#[derive(Clone, Debug)]
pub struct SchurSystem {
    e: f64,
    k_e: Matrix,
    m_e: Matrix,
    l_e: Matrix,
}

impl SchurSystem {
    pub fn energy(&self) -> f64 {
        self.e
    }

    pub fn k_e(&self) -> &Matrix {
        &self.k_e
    }

    pub fn m_e(&self) -> &Matrix {
        &self.m_e
    }

    pub fn l_e(&self) -> &Matrix {
        &self.l_e
    }

    /// `xᵀ K_E x`.
    pub fn q(&self, x: &[f64]) -> f64 {
        self.k_e.bilinear(x, x)
    }

    /// `‖x‖_E`.
    pub fn norm_e(&self, x: &[f64]) -> f64 {
        libm::sqrt(self.m_e.bilinear(x, x))
    }

    /// `d/dE q_E(x) = −‖x‖²_E`.
    pub fn energy_slope(&self, x: &[f64]) -> f64 {
        -self.m_e.bilinear(x, x)
    }

    /// All pencil eigenvalues, ascending.
    pub fn pencil_eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::generalized_eigenvalues_factored(&self.k_e, &Cholesky::of_gram(&self.l_e))
    }

    /// Number of pencil eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        self.counter().count_below(sigma)
    }

    pub fn counter(&self) -> PencilCounter<'_> {
        PencilCounter::new(&self.k_e, &self.m_e)
    }

    /// The `k`-th (1-based) min-max level `μ_k` of `q_E` with respect to `‖·‖_E`.
    pub fn mu(&self, k: usize, method: PencilMethod) -> Result<f64> {
        let n = self.k_e.rows();
        if k == 0 || k > n {
            return Err(Error::KOutOfRange { k, n_plus: n });
        }
        match method.resolve(&self.k_e, &self.m_e) {
            PencilMethod::Bisection => self.counter().eigenvalue(k),
            _ => Ok(self.pencil_eigenvalues()?[k - 1]),
        }
    }

    /// Number of pencil eigenvalues in `[-tau, tau)`.
    pub fn count_near_zero(&self, tau: f64, method: PencilMethod) -> Result<usize> {
        match method.resolve(&self.k_e, &self.m_e) {
            PencilMethod::Bisection => {
                let c = self.counter();
                Ok(c.count_below(tau) - c.count_below(-tau))
            }
            _ => Ok(self.pencil_eigenvalues()?.iter().filter(|v| -tau <= **v && **v < tau).count()),
        }
    }
}

/// Assembles the Schur system at energy `e`, solving against all columns of
/// `C` with one factorization of `B + E`.
pub fn build_schur(op: &BlockOperator, e: f64) -> Result<SchurSystem> {
    let res = Resolvent::new(&op.b_matrix(), e)?;
    let l_e = res.solve_mat(op.c());
    let k_e = op.p().add_diag(-e).add(&op.c().tr_matmul(&l_e)).symmetrized();
    let m_e = l_e.tr_matmul(&l_e).add_diag(1.0).symmetrized();
    Ok(SchurSystem { e, k_e, m_e, l_e })
}

/// `q_E(x) = xᵀ(P − E)x + (Cx)ᵀ(B+E)⁻¹(Cx)`, computed without forming `K_E`.
pub fn q_e_form(op: &BlockOperator, e: f64, x: &[f64]) -> Result<f64> {
    check_len(x, op.n_plus())?;
    let res = Resolvent::new(&op.b_matrix(), e)?;
    let cx = op.c().matvec(x);
    Ok(op.p().bilinear(x, x) - e * dot(x, x) + dot(&cx, &res.solve_vec(&cx)))
}

/// `φ_{E,x}(y) = ⟨x⊕y, A(x⊕y)⟩ − E‖x⊕y‖²`.
pub fn phi_form(op: &BlockOperator, e: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_len(x, op.n_plus())?;
    check_len(y, op.n_minus())?;
    let (ax, ay) = op.apply(x, y);
    Ok(dot(x, &ax) + dot(y, &ay) - e * (dot(x, x) + dot(y, y)))
}

/// `μ_k(Q_λ)`, the `k`-th level of the pencil `(K_λ, M_λ)`.
pub fn mu_k(op: &BlockOperator, lam: f64, k: usize) -> Result<f64> {
    mu_k_with(op, lam, k, PencilMethod::Auto)
}

pub fn mu_k_with(op: &BlockOperator, lam: f64, k: usize, method: PencilMethod) -> Result<f64> {
    if k == 0 || k > op.n_plus() {
        return Err(Error::KOutOfRange { k, n_plus: op.n_plus() });
    }
    build_schur(op, lam)?.mu(k, method)
}

/// `‖x‖_E`.
pub fn norm_e(op: &BlockOperator, e: f64, x: &[f64]) -> Result<f64> {
    check_len(x, op.n_plus())?;
    let res = Resolvent::new(&op.b_matrix(), e)?;
    let lx = res.solve_vec(&op.c().matvec(x));
    Ok(libm::sqrt(dot(x, x) + dot(&lx, &lx)))
}

/// `L_E x`.
pub fn l_e_apply(op: &BlockOperator, e: f64, x: &[f64]) -> Result<Vec<f64>> {
    check_len(x, op.n_plus())?;
    let res = Resolvent::new(&op.b_matrix(), e)?;
    Ok(res.solve_vec(&op.c().matvec(x)))
}

fn check_len(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::assemble_block;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::SQRT_2;

    fn canonical() -> BlockOperator {
        assemble_block(&Matrix::from_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap(), 1).unwrap()
    }

    fn decoupled() -> BlockOperator {
        BlockOperator::new(Matrix::diag(&[2.0, 3.0]), Matrix::diag(&[-1.0]), Matrix::zeros(1, 2)).unwrap()
    }

    #[test]
    fn resolvent_examples() {
        assert_eq!(resolvent_apply(&Matrix::diag(&[1.0]), 1.0, &[2.0]).unwrap(), [1.0]);
        assert_eq!(resolvent_apply(&Matrix::diag(&[2.0, 3.0]), 0.0, &[2.0, 3.0]).unwrap(), [1.0, 1.0]);
        assert!(matches!(
            resolvent_apply(&Matrix::diag(&[1.0]), -1.0, &[1.0]),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn dense_resolvent_residual() {
        let b = Matrix::from_rows(&[[2.0, 0.5, 0.1], [0.5, 1.0, 0.2], [0.1, 0.2, 3.0]]).unwrap();
        let v = [1.0, -2.0, 0.5];
        let y = resolvent_apply(&b, 0.3, &v).unwrap();
        let r = b.add_diag(0.3).matvec(&y);
        for (ri, vi) in r.iter().zip(v) {
            assert_abs_diff_eq!(*ri, vi, epsilon = 1e-14);
        }
    }

    #[test]
    fn build_schur_canonical() {
        let s = build_schur(&canonical(), 1.0).unwrap();
        assert_eq!(s.l_e()[(0, 0)], 0.5);
        assert_eq!(s.k_e()[(0, 0)], 0.5);
        assert_eq!(s.m_e()[(0, 0)], 1.25);
        let s = build_schur(&canonical(), SQRT_2).unwrap();
        assert_abs_diff_eq!(s.k_e()[(0, 0)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn build_schur_decoupled() {
        let s = build_schur(&decoupled(), 0.7).unwrap();
        assert_eq!(s.k_e(), &Matrix::diag(&[2.0 - 0.7, 3.0 - 0.7]));
        assert_eq!(s.m_e(), &Matrix::identity(2));
        assert_eq!(s.l_e(), &Matrix::zeros(1, 2));
    }

    #[test]
    fn forms_canonical() {
        let op = canonical();
        assert_eq!(q_e_form(&op, 0.0, &[1.0]).unwrap(), 2.0);
        assert_abs_diff_eq!(q_e_form(&op, SQRT_2, &[1.0]).unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(q_e_form(&op, 0.3, &[0.0]).unwrap(), 0.0);
        assert_eq!(phi_form(&op, 0.0, &[1.0], &[0.0]).unwrap(), 1.0);
        assert_eq!(phi_form(&op, 0.0, &[1.0], &[1.0]).unwrap(), 2.0);
        assert_eq!(phi_form(&op, 0.0, &[0.0], &[1.0]).unwrap(), -1.0);
        assert_eq!(l_e_apply(&op, 0.0, &[1.0]).unwrap(), [1.0]);
        assert!(matches!(phi_form(&op, 0.0, &[1.0, 2.0], &[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mu_k_examples() {
        assert_abs_diff_eq!(mu_k(&canonical(), 0.0, 1).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mu_k(&decoupled(), 2.5, 2).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(mu_k(&canonical(), SQRT_2, 1).unwrap(), 0.0, epsilon = 1e-10);
        assert!(matches!(mu_k(&canonical(), 0.0, 2), Err(Error::KOutOfRange { .. })));
        assert!(matches!(mu_k(&canonical(), 0.0, 0), Err(Error::KOutOfRange { .. })));
        assert!(matches!(mu_k(&canonical(), -1.0, 1), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn methods_agree_on_decoupled() {
        let s = build_schur(&decoupled(), 2.5).unwrap();
        for k in 1..=2 {
            let a = s.mu(k, PencilMethod::Reduction).unwrap();
            let b = s.mu(k, PencilMethod::Bisection).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        assert_eq!(s.count_near_zero(0.6, PencilMethod::Bisection).unwrap(), 2);
        assert_eq!(s.count_near_zero(0.4, PencilMethod::Reduction).unwrap(), 0);
    }
}
