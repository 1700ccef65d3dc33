//! Matrix-scale checks of the factorization behind the min-max principle.
//!
//! With `U = [[I, 0], [−L_E, I]]` and `D = diag(K_E, −(B+E))`,
//!
//! ```text
//! A − E = Uᵀ D U,
//! R_E(x⊕y) = [K_E x + L_Eᵀ(B+E)(y − L_E x)] ⊕ [−(B+E)(y − L_E x)],
//! R_E⁻¹(x⊕y) = K_E⁻¹(x + L_Eᵀy) ⊕ [L_E K_E⁻¹(x + L_Eᵀy) − (B+E)⁻¹y].
//! ```
//!
//! For matrices the extension `R_E + E` must reproduce `A` itself.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::linop::BlockOperator;
use crate::matrix::{dot, norm, Matrix};
use crate::minmax::lambda1_certificate;
use crate::oracle::dense_spectrum;
use crate::schur::{build_schur, Resolvent, SchurSystem};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub name: String,
    /// Residual or margin, depending on the check.
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub params: Vec<(String, f64)>,
}

impl VerificationReport {
    /// A residual check: passes iff `value ≤ tolerance`.
    pub fn residual(name: &str, value: f64, tolerance: f64, params: Vec<(String, f64)>) -> Self {
        VerificationReport { name: name.into(), value, tolerance, pass: value <= tolerance, params }
    }

    /// A margin check: passes iff `value ≥ −tolerance`.
    pub fn margin(name: &str, value: f64, tolerance: f64, params: Vec<(String, f64)>) -> Self {
        VerificationReport { name: name.into(), value, tolerance, pass: value >= -tolerance, params }
    }
}

pub const DECOMPOSITION_TOL: f64 = 1e-11;
pub const EXTENSION_TOL: f64 = 1e-11;
pub const INVERSE_TOL: f64 = 1e-10;

fn relative(diff: &Matrix, reference: &Matrix) -> f64 {
    diff.frobenius() / reference.frobenius().max(1.0)
}

fn shifted(op: &BlockOperator, e: f64) -> Matrix {
    op.full_matrix().add_diag(-e)
}

/// `‖(A − E) − UᵀDU‖_F / max(1, ‖A − E‖_F)`.
pub fn decomposition_residual(op: &BlockOperator, e: f64) -> Result<f64> {
    let sys = build_schur(op, e)?;
    let (np, nm) = (op.n_plus(), op.n_minus());
    let mut u = Matrix::identity(np + nm);
    u.set_block(np, 0, &sys.l_e().scale(-1.0));
    let mut d = Matrix::zeros(np + nm, np + nm);
    d.set_block(0, 0, sys.k_e());
    d.set_block(np, np, &op.amm().add_diag(-e));
    let factored = u.tr_matmul(&d.matmul(&u));
    let a = shifted(op, e);
    Ok(relative(&a.sub(&factored), &a))
}

/// Applies `R_E` to `x ⊕ y`.
pub fn extension_apply(op: &BlockOperator, sys: &SchurSystem, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let b_e = op.amm().scale(-1.0).add_diag(sys.energy());
    let lx = sys.l_e().matvec(x);
    let v: Vec<f64> = y.iter().zip(&lx).map(|(a, b)| a - b).collect();
    let bv = b_e.matvec(&v);
    let mut top = sys.k_e().matvec(x);
    for (t, w) in top.iter_mut().zip(sys.l_e().tr_matvec(&bv)) {
        *t += w;
    }
    let bottom = bv.into_iter().map(|w| -w).collect();
    (top, bottom)
}

/// Relative Frobenius distance between `R_E + E`, assembled column by column
/// on the standard basis, and `A`.
pub fn extension_consistency(op: &BlockOperator, e: f64) -> Result<f64> {
    let sys = build_schur(op, e)?;
    let a = op.full_matrix();
    let recon = columnwise(op, |x, y| extension_apply(op, &sys, x, y)).add_diag(e);
    Ok(relative(&a.sub(&recon), &a))
}

fn columnwise(op: &BlockOperator, mut f: impl FnMut(&[f64], &[f64]) -> (Vec<f64>, Vec<f64>)) -> Matrix {
    let (np, nm) = (op.n_plus(), op.n_minus());
    let n = np + nm;
    let mut out = Matrix::zeros(n, n);
    let mut z = alloc::vec![0.0; n];
    for j in 0..n {
        z[j] = 1.0;
        let (top, bottom) = f(&z[..np], &z[np..]);
        for (i, v) in top.iter().chain(&bottom).enumerate() {
            out[(i, j)] = *v;
        }
        z[j] = 0.0;
    }
    out
}

/// `R_E⁻¹` as a closure over one factorization of `K_E` and of `B + E`.
pub struct ExtensionInverse<'a> {
    sys: &'a SchurSystem,
    k_chol: Cholesky,
    res: Resolvent,
}

impl<'a> ExtensionInverse<'a> {
    /// Requires `K_E` positive definite, i.e. `E` strictly inside the gap.
    /// Pivots are measured against the terms `P`, `E` and `CᵀL_E` that cancel
    /// in `K_E`, so a Schur complement that vanishes up to rounding is
    /// reported as singular.
    pub fn new(op: &BlockOperator, sys: &'a SchurSystem) -> Result<Self> {
        let terms = op.p().max_abs() + sys.energy().abs() + op.c().tr_matmul(sys.l_e()).max_abs();
        let floor = 64.0 * f64::EPSILON * terms * op.n_plus() as f64;
        let k_chol =
            Cholesky::with_floor(sys.k_e(), floor).map_err(|_| Error::SingularSchur { e: sys.energy() })?;
        let res = Resolvent::new(&op.b_matrix(), sys.energy())?;
        Ok(ExtensionInverse { sys, k_chol, res })
    }

    pub fn apply(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut rhs = self.sys.l_e().tr_matvec(y);
        for (r, xi) in rhs.iter_mut().zip(x) {
            *r += xi;
        }
        let top = self.k_chol.solve_vec(&rhs);
        let by = self.res.solve_vec(y);
        let bottom = self.sys.l_e().matvec(&top).into_iter().zip(by).map(|(a, b)| a - b).collect();
        (top, bottom)
    }
}

/// `‖R_E⁻¹(A − E) − I‖_F`, with `R_E⁻¹` applied to the columns of `A − E`.
pub fn inverse_formula_check(op: &BlockOperator, e: f64) -> Result<f64> {
    let sys = build_schur(op, e)?;
    let inv = ExtensionInverse::new(op, &sys)?;
    let a = shifted(op, e);
    let np = op.n_plus();
    let n = a.rows();
    let mut prod = Matrix::zeros(n, n);
    for j in 0..n {
        let col = a.column(j);
        let (top, bottom) = inv.apply(&col[..np], &col[np..]);
        for (i, v) in top.iter().chain(&bottom).enumerate() {
            prod[(i, j)] = *v;
        }
    }
    Ok(prod.sub(&Matrix::identity(n)).frobenius())
}

/// The spectrum of `A − (λ0+λ1)/2` stays at distance `(λ1−λ0)/2` from zero.
///
/// The smallest singular value is read off the dense spectrum; `n_samples`
/// random quotients `‖(A − mid)z‖/‖z‖` are recorded as a cross-check and must
/// not undercut it.
pub fn krein_gap_check(op: &BlockOperator, n_samples: usize) -> Result<VerificationReport> {
    krein_gap_check_seeded(op, n_samples, 0x6b_7265_696e)
}

pub fn krein_gap_check_seeded(op: &BlockOperator, n_samples: usize, seed: u64) -> Result<VerificationReport> {
    let gap = lambda1_certificate(op);
    if !gap.valid {
        return Err(Error::NoGap { lambda0: gap.lambda0, lambda1: gap.lambda1 });
    }
    let mid = 0.5 * (gap.lambda0 + gap.lambda1);
    let bound = 0.5 * (gap.lambda1 - gap.lambda0);
    let s = dense_spectrum(op)?.values.iter().map(|v| (v - mid).abs()).fold(f64::INFINITY, f64::min);
    let shifted = shifted(op, mid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = f64::INFINITY;
    for _ in 0..n_samples {
        let z: Vec<f64> = (0..shifted.rows()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nz = norm(&z);
        if nz > 0.0 {
            sampled = sampled.min(norm(&shifted.matvec(&z)) / nz);
        }
    }
    let tol = 1e-10 * gap.lambda1.abs().max(1.0);
    let mut report = VerificationReport::margin(
        "krein_gap",
        s - bound,
        tol,
        alloc::vec![
            ("lambda0".into(), gap.lambda0),
            ("lambda1".into(), gap.lambda1),
            ("s_min".into(), s),
            ("bound".into(), bound),
            ("sampled_min".into(), sampled),
            ("n_samples".into(), n_samples as f64),
        ],
    );
    report.pass &= n_samples == 0 || sampled >= s - 1e-10 * s.max(1.0);
    Ok(report)
}

/// Worst violation of
/// `q_{E′} + (E′−E)‖x‖²_{E′} ≤ q_E ≤ q_{E′} + (E′−E)‖x‖²_E` for `E ≤ E′`,
/// scaled by `max(1, ‖x‖²_E)`; nonpositive when both sides hold.
pub fn sandwich_violation(s: &SchurSystem, s2: &SchurSystem, x: &[f64]) -> f64 {
    let (e, e2) = (s.energy(), s2.energy());
    let (q, q2) = (s.q(x), s2.q(x));
    let (n, n2) = (s.m_e().bilinear(x, x), s2.m_e().bilinear(x, x));
    let lower = q2 + (e2 - e) * n2 - q;
    let upper = q - q2 - (e2 - e) * n;
    lower.max(upper) / n.max(1.0)
}

/// Worst violation of `‖x‖ ≤ ‖x‖_{E′} ≤ ‖x‖_E ≤ C‖x‖_{E′}`, `C = (E′−λ0)/(E−λ0)`,
/// relative to `max(1, ‖x‖_E)`.
pub fn norm_chain_violation(s: &SchurSystem, s2: &SchurSystem, lambda0: f64, x: &[f64]) -> f64 {
    let plain = libm::sqrt(dot(x, x));
    let (ne, ne2) = (s.norm_e(x), s2.norm_e(x));
    let c = (s2.energy() - lambda0) / (s.energy() - lambda0);
    let worst = (plain - ne2).max(ne2 - ne).max(ne - c * ne2);
    worst / ne.max(1.0)
}

/// Relative gap between `d/dE q_E(x) = −‖x‖²_E` and a central difference of
/// step `h`.
pub fn energy_slope_error(op: &BlockOperator, e: f64, x: &[f64], h: f64) -> Result<f64> {
    let exact = build_schur(op, e)?.energy_slope(x);
    let qp = crate::schur::q_e_form(op, e + h, x)?;
    let qm = crate::schur::q_e_form(op, e - h, x)?;
    let fd = (qp - qm) / (2.0 * h);
    Ok((fd - exact).abs() / exact.abs())
}

/// Five energies log-spaced over `(λ0, λ0 + 10³]`.
pub fn log_spaced_energies(lambda0: f64) -> [f64; 5] {
    core::array::from_fn(|j| lambda0 + libm::pow(10.0, -2.0 + 1.25 * j as f64))
}

/// Five energies strictly inside `(λ0, λ1)`.
pub fn in_gap_energies(lambda0: f64, lambda1: f64) -> [f64; 5] {
    [0.01, 0.25, 0.5, 0.75, 0.99].map(|t| lambda0 + t * (lambda1 - lambda0))
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
        assemble_block(&Matrix::diag(&[2.0, -1.0]), 1).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        assert!(decomposition_residual(&canonical(), 0.0).unwrap() <= 1e-13);
        assert_eq!(decomposition_residual(&decoupled(), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn extension_examples() {
        assert!(extension_consistency(&canonical(), 0.0).unwrap() <= 1e-13);
        assert_eq!(extension_consistency(&decoupled(), 0.5).unwrap(), 0.0);
    }

    #[test]
    fn inverse_examples() {
        assert!(inverse_formula_check(&canonical(), 0.0).unwrap() <= 1e-12);
        assert!(matches!(inverse_formula_check(&canonical(), SQRT_2), Err(Error::SingularSchur { .. })));
    }

    #[test]
    fn krein_equality_cases() {
        let r = krein_gap_check(&canonical(), 100).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
        let r = krein_gap_check(&decoupled(), 100).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-12);
        let bad = BlockOperator::new(Matrix::diag(&[-5.0]), Matrix::diag(&[-1.0]), Matrix::zeros(1, 1)).unwrap();
        assert!(matches!(krein_gap_check(&bad, 10), Err(Error::NoGap { .. })));
    }

    #[test]
    fn energy_grids() {
        let e = log_spaced_energies(-1.0);
        assert_abs_diff_eq!(e[0], -0.99, epsilon = 1e-15);
        assert_abs_diff_eq!(e[4], 999.0, epsilon = 1e-9);
        let g = in_gap_energies(-1.0, 1.0);
        assert_eq!(g[2], 0.0);
    }
}
