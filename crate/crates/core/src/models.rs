//! Concrete block operators: a radial Dirac–Coulomb channel, the cylinder
//! operator `σ(∂_x + B)` on an interval, and seeded random gapped matrices.

use alloc::vec::Vec;
use alloc::{format, vec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linop::BlockOperator;
use crate::math;
use crate::matrix::{dot, Matrix};
use crate::minmax::lambda1_certificate;
use crate::schur::{build_schur, PencilMethod};
use crate::verify::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Grading {
    /// `r_i = r_max · i/n`
    Uniform,
    /// `r_i = r_max · (i/n)²`, dense near the Coulomb singularity.
    Quadratic,
}

impl Grading {
    /// Quadratic above `ν = 0.7`, uniform otherwise.
    pub fn default_for(nu: f64) -> Self {
        if nu > 0.7 {
            Grading::Quadratic
        } else {
            Grading::Uniform
        }
    }

    fn map(self, t: f64) -> f64 {
        match self {
            Grading::Uniform => t,
            Grading::Quadratic => t * t,
        }
    }
}

/// One partial-wave channel `κ` of the Dirac–Coulomb operator with coupling
/// `ν`, in units where `m = c = 1`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiracSpec {
    pub nu: f64,
    pub kappa: i32,
    pub n: usize,
    pub r_max: f64,
    pub grading: Grading,
}

impl DiracSpec {
    pub fn new(nu: f64, kappa: i32, n: usize, r_max: f64) -> Self {
        DiracSpec { nu, kappa, n, r_max, grading: Grading::default_for(nu) }
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.nu) {
            return Err(Error::SpecInvalid("nu must lie in [0, 1]"));
        }
        if self.kappa == 0 {
            return Err(Error::SpecInvalid("kappa must be nonzero"));
        }
        if self.n < 16 {
            return Err(Error::SpecInvalid("n must be at least 16"));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::SpecInvalid("r_max must be positive and finite"));
        }
        Ok(())
    }

    /// Grid `r_1 < … < r_n = r_max`.
    pub fn grid(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.node(i)).collect()
    }

    fn node(&self, i: usize) -> f64 {
        self.r_max * self.grading.map(i as f64 / self.n as f64)
    }
}

/// Radial Dirac–Coulomb channel split into upper and lower spinor components.
///
/// On the grid `r_i` with `r_0 = 0` and a ghost node `r_{n+1}` (both
/// Dirichlet), with weights `w_i = (r_{i+1} − r_{i−1})/2`:
///
/// * `P = diag(1 − ν/r_i)`, `amm = diag(−1 − ν/r_i)`,
/// * `C = D + κ·diag(1/r_i)` with `D` the antisymmetric central difference
///   `D_{i,i+1} = −D_{i+1,i} = 1/(2√(w_i w_{i+1}))` in the weighted basis,
///
/// so `C` discretizes `∂_r + κ/r` and `Cᵀ` its adjoint `−∂_r + κ/r`.
pub fn build_dirac_coulomb(spec: &DiracSpec) -> Result<BlockOperator> {
    spec.validate()?;
    let n = spec.n;
    let r = spec.grid();
    let node = |i: usize| if i == 0 { 0.0 } else { spec.node(i) };
    let w: Vec<f64> = (1..=n).map(|i| 0.5 * (node(i + 1) - node(i - 1))).collect();
    let nu = spec.nu;
    let p = Matrix::diag(&r.iter().map(|ri| 1.0 - nu / ri).collect::<Vec<_>>());
    let amm = Matrix::diag(&r.iter().map(|ri| -1.0 - nu / ri).collect::<Vec<_>>());
    let mut c = Matrix::zeros(n, n);
    for i in 0..n {
        c[(i, i)] = f64::from(spec.kappa) / r[i];
        if i + 1 < n {
            let d = 0.5 / math::sqrt(w[i] * w[i + 1]);
            c[(i, i + 1)] = d;
            c[(i + 1, i)] = -d;
        }
    }
    BlockOperator::new(p, amm, c)
}

/// Closed-form Coulomb-Dirac bound state
/// `E = [1 + ν²/(n_r + √(κ² − ν²))²]^{−1/2}`.
///
/// `n_r = 0` exists only for `κ < 0`.
pub fn analytic_dirac_energy(nu: f64, kappa: i32, n_r: u32) -> Result<f64> {
    if kappa == 0 {
        return Err(Error::SpecInvalid("kappa must be nonzero"));
    }
    let k = f64::from(kappa);
    if !(nu >= 0.0 && nu < k.abs()) {
        return Err(Error::SpecInvalid("requires 0 <= nu < |kappa|"));
    }
    if n_r == 0 && kappa > 0 {
        return Err(Error::SpecInvalid("n_r = 0 requires kappa < 0"));
    }
    let gamma = math::sqrt(k * k - nu * nu);
    let denom = f64::from(n_r) + gamma;
    Ok(1.0 / math::sqrt(1.0 + nu * nu / (denom * denom)))
}

/// Smallest eigenvalue of the pencil `(K_0, M_0)` of the `κ = −1` channel:
/// the discrete form of `q_0 ≥ 0`.
pub fn hardy_check(nu: f64, n: usize, r_max: f64) -> Result<VerificationReport> {
    hardy_check_with(&DiracSpec::new(nu, -1, n, r_max))
}

pub fn hardy_check_with(spec: &DiracSpec) -> Result<VerificationReport> {
    let op = build_dirac_coulomb(spec)?;
    let sys = build_schur(&op, 0.0)?;
    let mu1 = sys.mu(1, PencilMethod::Auto)?;
    Ok(VerificationReport::margin(
        "hardy",
        mu1,
        1e-3,
        vec![
            ("nu".into(), spec.nu),
            ("n".into(), spec.n as f64),
            ("r_max".into(), spec.r_max),
            ("quadratic".into(), f64::from(u8::from(spec.grading == Grading::Quadratic))),
        ],
    ))
}

/// Cylinder operator on `(0, L)` with tangential eigenvalues `modes`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApsSpec {
    pub modes: Vec<f64>,
    pub length_l: f64,
    pub n: usize,
}

impl ApsSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::SpecInvalid("n must be at least 8"));
        }
        if !(self.length_l > 0.0 && self.length_l.is_finite()) {
            return Err(Error::SpecInvalid("length_l must be positive and finite"));
        }
        if self.modes.is_empty() {
            return Err(Error::SpecInvalid("modes must be nonempty"));
        }
        if self.modes.iter().any(|l| !l.is_finite()) {
            return Err(Error::SpecInvalid("modes must be finite"));
        }
        Ok(())
    }

    /// Singular values `2(n+1)/L·sin(jπ/(2(n+1)))`, `j = 1..n`, of the
    /// forward difference.
    pub fn difference_singular_values(&self) -> Vec<f64> {
        let m = (self.n + 1) as f64;
        (1..=self.n)
            .map(|j| 2.0 * m / self.length_l * math::sin(j as f64 * core::f64::consts::PI / (2.0 * m)))
            .collect()
    }

    /// Smallest singular value of the forward difference.
    pub fn s_min(&self) -> f64 {
        self.difference_singular_values()[0]
    }

    /// Sorted union over modes of `√(ℓ² + s_j²)`.
    pub fn closed_form_levels(&self) -> Vec<f64> {
        let s = self.difference_singular_values();
        let mut out: Vec<f64> =
            self.modes.iter().flat_map(|l| s.iter().map(move |sj| math::hypot(*l, *sj))).collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Block-diagonal over modes with `P = 0` and `amm = 0`. Mode `ℓ` couples
/// through `C_ℓ = [D_f; −ℓ·I]`: `D_f` is the `(n+1)×n` forward difference with
/// `h = L/(n+1)` and Dirichlet values at both ends, and the second block
/// injects `u` into a copy orthogonal to the range of `D_f`, so that
/// `‖C_ℓ u‖² = ‖D_f u‖² + ℓ²‖u‖²`. The rows of the second block are omitted
/// for `ℓ = 0`.
pub fn build_aps_cylinder(spec: &ApsSpec) -> Result<BlockOperator> {
    spec.validate()?;
    let n = spec.n;
    let inv_h = (n + 1) as f64 / spec.length_l;
    let blocks: Vec<Matrix> = spec
        .modes
        .iter()
        .map(|&l| {
            let extra = if l == 0.0 { 0 } else { n };
            let mut c = Matrix::zeros(n + 1 + extra, n);
            for j in 0..n {
                c[(j, j)] = inv_h;
                c[(j + 1, j)] = -inv_h;
                if extra > 0 {
                    c[(n + 1 + j, j)] = -l;
                }
            }
            c
        })
        .collect();
    let c = Matrix::direct_sum(&blocks);
    let (nm, np) = (c.rows(), c.cols());
    BlockOperator::new(Matrix::zeros(np, np), Matrix::zeros(nm, nm), c)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RandomSpec {
    pub n_plus: usize,
    pub n_minus: usize,
    pub gap_target: f64,
    pub seed: u64,
}

impl RandomSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_plus == 0 || self.n_minus == 0 {
            return Err(Error::SpecInvalid("dimensions must be at least 1"));
        }
        if !(self.gap_target > 0.0 && self.gap_target.is_finite()) {
            return Err(Error::SpecInvalid("gap_target must be positive and finite"));
        }
        Ok(())
    }
}

pub const RANDOM_RETRIES: usize = 100;

/// Seeded random operator with `σ(amm) ⊂ [−g−2, −g]` and
/// `σ(P) ⊂ [−g/2, 2+g]`, `g = gap_target`, coupled by a Gaussian `C` of
/// spectral size about one. Draws whose gap is not certified are discarded.
pub fn random_gapped(spec: &RandomSpec) -> Result<BlockOperator> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let g = spec.gap_target;
    for _ in 0..RANDOM_RETRIES {
        let p = random_symmetric(&mut rng, spec.n_plus, -0.5 * g, 2.0 + g);
        let amm = random_symmetric(&mut rng, spec.n_minus, -g - 2.0, -g);
        // Gaussian C has norm near √n⁺ + √n⁻; rescale to min(0.4g, 1) so the
        // coupling cannot drag a positive-type level below λ0.
        let spread = math::sqrt(spec.n_plus as f64) + math::sqrt(spec.n_minus as f64);
        let scale = (0.4 * g).min(1.0) / spread;
        let c = Matrix::from_fn(spec.n_minus, spec.n_plus, |_, _| scale * gaussian(&mut rng));
        let op = BlockOperator::new(p, amm, c)?;
        if lambda1_certificate(&op).valid {
            return Ok(op);
        }
    }
    Err(Error::GenerationFailure { retries: RANDOM_RETRIES })
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    math::sqrt(-2.0 * math::ln(u1)) * math::cos(2.0 * core::f64::consts::PI * u2)
}

/// `Q diag(v) Qᵀ` with `v` uniform in `[lo, hi]` and `Q` Haar-like orthogonal.
fn random_symmetric(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Matrix {
    let q = random_orthogonal(rng, n);
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let qd = Matrix::from_fn(n, n, |i, j| q[(i, j)] * v[j]);
    qd.matmul(&q.transpose()).symmetrized()
}

/// Modified Gram–Schmidt on Gaussian columns, stored as rows then transposed.
pub(crate) fn random_orthogonal(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
        }
        let nv = math::sqrt(dot(&v, &v));
        if nv > 1e-8 {
            basis.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    Matrix::from_fn(n, n, |i, j| basis[j][i])
}

/// Block-preserving orthogonal conjugation `diag(U, V)ᵀ A diag(U, V)` with
/// seeded random `U`, `V`; the spectrum and the gap levels are invariant.
pub fn conjugate_blockwise(op: &BlockOperator, seed: u64) -> Result<BlockOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_orthogonal(&mut rng, op.n_plus());
    let v = random_orthogonal(&mut rng, op.n_minus());
    let p = u.tr_matmul(&op.p().matmul(&u)).symmetrized();
    let amm = v.tr_matmul(&op.amm().matmul(&v)).symmetrized();
    let c = v.tr_matmul(&op.c().matmul(&u));
    BlockOperator::new(p, amm, c)
}

/// `op ⊕ op`, which doubles every multiplicity.
pub fn doubled(op: &BlockOperator) -> Result<BlockOperator> {
    BlockOperator::new(
        Matrix::direct_sum(&[op.p().clone(), op.p().clone()]),
        Matrix::direct_sum(&[op.amm().clone(), op.amm().clone()]),
        Matrix::direct_sum(&[op.c().clone(), op.c().clone()]),
    )
}

/// Short identifier used in reports.
pub fn dirac_label(spec: &DiracSpec) -> alloc::string::String {
    format!("dirac(nu={},kappa={},r_max={})", spec.nu, spec.kappa, spec.r_max)
}
