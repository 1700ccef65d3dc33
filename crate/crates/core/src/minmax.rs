//! Gap eigenvalues as roots of the min-max levels.
//!
//! `λ ↦ μ_k(Q_λ)` is positive below `λ_k` and decreases with slope at most
//! `−1` once it is nonpositive, so the zero is unique and each level is found
//! by bracketing followed by a safeguarded secant iteration. A single
//! vector's energy `E(x)` solves `q_E(x) = 0`, where the exact slope
//! `−‖x‖²_E` makes Newton's method available.
//!
//! A finite sweep cannot see the ceiling `sup_ℓ λ_ℓ` of the continuous
//! statement; [`gap_spectrum`] reports the largest computed level as the
//! ceiling and flags the entries in its cluster.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linop::{BlockOperator, GapData};
use crate::matrix::dot;
use crate::oracle::CLUSTER_TOL;
use crate::schur::{self, build_schur, PencilMethod, Resolvent};

/// Default root tolerance on `|μ_k|` relative to `max(1, |λ|)`.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinMaxOptions {
    /// Brackets are sought no further than `λ0 + lambda_max_offset`.
    pub lambda_max_offset: f64,
    /// Relative tolerance for multiplicity clusters.
    pub cluster_tol: f64,
    pub method: PencilMethod,
    pub max_iter: usize,
}

impl Default for MinMaxOptions {
    fn default() -> Self {
        MinMaxOptions {
            lambda_max_offset: 1e12,
            cluster_tol: CLUSTER_TOL,
            method: PencilMethod::Auto,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinMaxResult {
    pub k: usize,
    pub lambda_k: f64,
    /// Number of levels within the cluster tolerance of `lambda_k`.
    pub multiplicity: usize,
    /// `|μ_k(Q_{λ_k})|`.
    pub residual: f64,
    /// Level evaluations spent on bracketing and refinement.
    pub iterations: usize,
    /// Final bracket, `μ_k > 0` at the left end and `< 0` at the right.
    pub bracket: (f64, f64),
    /// Whether `lambda_k` lies in the cluster of the largest computed level.
    pub at_ceiling: bool,
}

impl MinMaxResult {
    /// `residual ≤ tol·max(1, |λ_k|)`.
    pub fn meets_contract(&self, tol: f64) -> bool {
        self.residual <= tol * self.lambda_k.abs().max(1.0)
    }
}

/// Start of the bracket just above `λ0`.
pub fn bracket_start(lambda0: f64) -> f64 {
    lambda0 + 1e-8f64.max(1e-8 * lambda0.abs())
}

/// The energy `E(x) > λ0` with `q_E(x) = 0`.
pub fn energy_of_vector(op: &BlockOperator, x: &[f64]) -> Result<f64> {
    energy_of_vector_with(op, x, &MinMaxOptions::default())
}

pub fn energy_of_vector_with(op: &BlockOperator, x: &[f64], opts: &MinMaxOptions) -> Result<f64> {
    if x.len() != op.n_plus() {
        return Err(Error::DimensionMismatch { expected: op.n_plus(), found: x.len() });
    }
    let xx = dot(x, x);
    if xx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let b = op.b_matrix();
    let cx = op.c().matvec(x);
    let px = op.p().bilinear(x, x);
    // (q_E(x), d/dE q_E(x))
    let eval = |e: f64| -> Result<(f64, f64)> {
        let lx = Resolvent::new(&b, e)?.solve_vec(&cx);
        Ok((px - e * xx + dot(&cx, &lx), -(xx + dot(&lx, &lx))))
    };
    let lambda0 = op.lambda0()?;
    let ceiling = lambda0 + opts.lambda_max_offset;
    let mut lo = bracket_start(lambda0);
    let (q_lo, _) = eval(lo)?;
    if q_lo <= 0.0 {
        return Err(Error::BracketFailure { lo, hi: lo });
    }
    let mut step = 1.0;
    let mut hi = lambda0 + step;
    loop {
        let (q, _) = eval(hi)?;
        if q < 0.0 {
            break;
        }
        if q == 0.0 {
            return Ok(hi);
        }
        lo = hi;
        step *= 2.0;
        hi = lambda0 + step;
        if hi > ceiling {
            return Err(Error::BracketFailure { lo, hi: ceiling });
        }
    }
    // q is convex and decreasing, so Newton from the left end approaches the
    // root monotonically; the bisection guard covers rounding.
    let mut e = lo;
    for _ in 0..opts.max_iter {
        let (q, slope) = eval(e)?;
        if q.abs() <= 1e-12 * xx * e.abs().max(1.0) {
            return Ok(e);
        }
        if q > 0.0 {
            lo = e;
        } else {
            hi = e;
        }
        let newton = e - q / slope;
        e = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs()) {
            return Ok(e);
        }
    }
    Ok(e)
}

/// The `k`-th gap level, the root of `λ ↦ μ_k(Q_λ)` in `(λ0, ∞)`.
pub fn lambda_k(op: &BlockOperator, k: usize, tol: f64) -> Result<MinMaxResult> {
    lambda_k_with(op, k, tol, &MinMaxOptions::default())
}

pub fn lambda_k_with(op: &BlockOperator, k: usize, tol: f64, opts: &MinMaxOptions) -> Result<MinMaxResult> {
    if k == 0 || k > op.n_plus() {
        return Err(Error::KOutOfRange { k, n_plus: op.n_plus() });
    }
    let lambda0 = op.lambda0()?;
    solve_level(op, lambda0, k, tol, opts)
}

fn solve_level(op: &BlockOperator, lambda0: f64, k: usize, tol: f64, opts: &MinMaxOptions) -> Result<MinMaxResult> {
    let mut evals = 0usize;
    let mut mu = |lam: f64| -> Result<f64> {
        evals += 1;
        build_schur(op, lam)?.mu(k, opts.method)
    };
    let ceiling = lambda0 + opts.lambda_max_offset;
    let mut a = bracket_start(lambda0);
    let mut fa = mu(a)?;
    if fa <= 0.0 {
        return Err(Error::BracketFailure { lo: a, hi: a });
    }
    let mut step = 1.0;
    let mut b = lambda0 + step;
    let mut fb = mu(b)?;
    while fb > 0.0 {
        a = b;
        fa = fb;
        step *= 2.0;
        b = lambda0 + step;
        if b > ceiling {
            return Err(Error::BracketFailure { lo: a, hi: ceiling });
        }
        fb = mu(b)?;
    }
    let scale = |x: f64| tol * x.abs().max(1.0);
    let (mut best, mut best_f) = if fb == 0.0 { (b, 0.0) } else { (a, fa) };
    let mut side = 0i8;
    let mut iter = 0;
    // Unscaled end values; the Illinois rule halves fa or fb.
    let (mut ta, mut tb) = (fa, fb);
    // Once the tolerance is met a few more steps are taken while they still
    // halve the residual; secant convergence usually reaches rounding level.
    let mut polish = 0;
    while iter < opts.max_iter && best_f != 0.0 {
        if b - a <= 2.0 * f64::EPSILON * b.abs().max(a.abs()) {
            break;
        }
        if best_f.abs() <= scale(best) {
            if polish == 3 {
                break;
            }
            polish += 1;
        }
        iter += 1;
        // Illinois-modified regula falsi, falling back to bisection when the
        // secant point hugs an end of the bracket.
        let mut x = if polish > 0 { b - tb * (b - a) / (tb - ta) } else { b - fb * (b - a) / (fb - fa) };
        let w = if polish > 0 { 0.0 } else { 1e-3 * (b - a) };
        if !(x > a + w && x < b - w) || (polish == 0 && iter % 8 == 0) {
            x = 0.5 * (a + b);
        }
        let fx = mu(x)?;
        let previous = best_f.abs();
        if fx.abs() < previous {
            best = x;
            best_f = fx;
        }
        if fx > 0.0 {
            a = x;
            fa = fx;
            ta = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else if fx < 0.0 {
            b = x;
            fb = fx;
            tb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            b = x;
            break;
        }
        if polish > 0 && best_f.abs() > 0.5 * previous {
            break;
        }
    }
    let sys = build_schur(op, best)?;
    evals += 1;
    let tau = opts.cluster_tol * best.abs().max(1.0);
    let multiplicity = sys.count_near_zero(tau, opts.method)?.max(1);
    Ok(MinMaxResult {
        k,
        lambda_k: best,
        multiplicity,
        residual: best_f.abs(),
        iterations: evals,
        // `best` may trail the final ends by a step; its sign matches its side.
        bracket: (a.min(best), b.max(best)),
        at_ceiling: false,
    })
}

/// `λ_1 ≤ … ≤ λ_{k_max}` with multiplicities. Each level is solved
/// independently; a failed level does not stop the sweep.
pub fn gap_spectrum(op: &BlockOperator, k_max: usize, tol: f64) -> Result<Vec<Result<MinMaxResult>>> {
    gap_spectrum_with(op, k_max, tol, &MinMaxOptions::default())
}

pub fn gap_spectrum_with(
    op: &BlockOperator,
    k_max: usize,
    tol: f64,
    opts: &MinMaxOptions,
) -> Result<Vec<Result<MinMaxResult>>> {
    if k_max == 0 || k_max > op.n_plus() {
        return Err(Error::KOutOfRange { k: k_max, n_plus: op.n_plus() });
    }
    let lambda0 = op.lambda0()?;
    let mut out: Vec<Result<MinMaxResult>> = (1..=k_max).map(|k| solve_level(op, lambda0, k, tol, opts)).collect();
    let top = out.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.lambda_k).fold(f64::NEG_INFINITY, f64::max);
    for r in out.iter_mut().flatten() {
        r.at_ceiling = top - r.lambda_k <= opts.cluster_tol * top.abs().max(1.0);
    }
    Ok(out)
}

/// `(λ0, λ1)` and whether they certify a gap. Failures are reported through
/// `valid = false` and the `failure` field rather than an error.
pub fn lambda1_certificate(op: &BlockOperator) -> GapData {
    let lambda0 = match op.lambda0() {
        Ok(v) => v,
        Err(e) => return GapData { lambda0: f64::NAN, lambda1: f64::NAN, valid: false, failure: Some(e) },
    };
    match solve_level(op, lambda0, 1, DEFAULT_TOL, &MinMaxOptions::default()) {
        Ok(r) => GapData::new(lambda0, r.lambda_k),
        Err(e) => GapData { lambda0, lambda1: f64::NAN, valid: false, failure: Some(e) },
    }
}

/// `E·‖x‖² − xᵀPx − (Cx)ᵀL_E x`, which vanishes at `E = E(x)`.
pub fn energy_identity_residual(op: &BlockOperator, e: f64, x: &[f64]) -> Result<f64> {
    let lx = schur::l_e_apply(op, e, x)?;
    let cx = op.c().matvec(x);
    Ok(e * dot(x, x) - op.p().bilinear(x, x) - dot(&cx, &lx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::assemble_block;
    use crate::matrix::Matrix;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::SQRT_2;

    fn canonical() -> BlockOperator {
        assemble_block(&Matrix::from_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap(), 1).unwrap()
    }

    fn decoupled() -> BlockOperator {
        BlockOperator::new(Matrix::diag(&[2.0, 3.0]), Matrix::diag(&[-1.0]), Matrix::zeros(1, 2)).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert_abs_diff_eq!(energy_of_vector(&decoupled(), &[1.0, 0.0]).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(energy_of_vector(&canonical(), &[1.0]).unwrap(), SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(energy_of_vector(&canonical(), &[2.0]).unwrap(), SQRT_2, epsilon = 1e-12);
        assert_eq!(energy_of_vector(&canonical(), &[0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn lambda_k_examples() {
        let r = lambda_k(&canonical(), 1, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(r.lambda_k, SQRT_2, epsilon = 1e-12);
        assert_eq!(r.multiplicity, 1);
        assert!(r.meets_contract(DEFAULT_TOL));
        assert!(r.bracket.0 <= r.lambda_k && r.lambda_k <= r.bracket.1);
        assert_abs_diff_eq!(lambda_k(&decoupled(), 1, DEFAULT_TOL).unwrap().lambda_k, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(lambda_k(&decoupled(), 2, DEFAULT_TOL).unwrap().lambda_k, 3.0, epsilon = 1e-12);
        assert!(matches!(lambda_k(&decoupled(), 3, DEFAULT_TOL), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn double_level() {
        let op = assemble_block(&Matrix::diag(&[2.0, 2.0, -1.0]), 2).unwrap();
        let s = gap_spectrum(&op, 2, DEFAULT_TOL).unwrap();
        for r in &s {
            let r = r.as_ref().unwrap();
            assert_abs_diff_eq!(r.lambda_k, 2.0, epsilon = 1e-12);
            assert_eq!(r.multiplicity, 2);
            assert!(r.at_ceiling);
        }
    }

    #[test]
    fn certificates() {
        let g = lambda1_certificate(&canonical());
        assert!(g.valid);
        assert_eq!(g.lambda0, -1.0);
        assert_abs_diff_eq!(g.lambda1, SQRT_2, epsilon = 1e-12);

        let op = BlockOperator::new(Matrix::diag(&[-5.0]), Matrix::diag(&[-1.0]), Matrix::zeros(1, 1)).unwrap();
        let g = lambda1_certificate(&op);
        assert!(!g.valid);
        assert!(matches!(g.failure, Some(Error::BracketFailure { .. })));
    }

    #[test]
    fn empty_gap_hits_ceiling() {
        // P so large that no level is found below the configured ceiling.
        let op = BlockOperator::new(Matrix::diag(&[1e6]), Matrix::diag(&[0.0]), Matrix::zeros(1, 1)).unwrap();
        let opts = MinMaxOptions { lambda_max_offset: 1e3, ..MinMaxOptions::default() };
        assert!(matches!(lambda_k_with(&op, 1, DEFAULT_TOL, &opts), Err(Error::BracketFailure { .. })));
    }
}
