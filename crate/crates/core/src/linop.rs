//! Block operators `A = [[P, Cᵀ], [C, -B]]` split by a coordinate projection.
//!
//! The upper block acts on the first `n_plus` coordinates, the lower block on
//! the remaining `n_minus`. At matrix scale the form domains of the continuous
//! theory coincide with these coordinate spaces, and essential self-adjointness
//! of the lower block is automatic, so the only structural checks are
//! symmetry and a nonempty split.

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;

/// Largest block dimension accepted by the dense kernels.
pub const DEFAULT_SIZE_CAP: usize = 5000;

/// Relative symmetry tolerance for the individual blocks.
pub const BLOCK_SYMMETRY_TOL: f64 = 1e-13;

/// Relative symmetry tolerance for full matrices handed to [`assemble_block`].
pub const INPUT_SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockOperator {
    p: Matrix,
    amm: Matrix,
    c: Matrix,
}

impl BlockOperator {
    /// Builds the operator from its upper block `p` (`n⁺×n⁺`), lower block
    /// `amm = -B` (`n⁻×n⁻`) and coupling `c` (`n⁻×n⁺`).
    ///
    /// Blocks within `1e-13·‖·‖_F` of symmetric are symmetrized, others are
    /// rejected.
    pub fn new(p: Matrix, amm: Matrix, c: Matrix) -> Result<Self> {
        Self::with_cap(p, amm, c, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(p: Matrix, amm: Matrix, c: Matrix, cap: usize) -> Result<Self> {
        let (np, nm) = (p.rows(), amm.rows());
        if np == 0 || nm == 0 {
            return Err(Error::BadSplit { n_plus: np, size: np + nm });
        }
        for dim in [np, nm] {
            if dim > cap {
                return Err(Error::SizeCap { dim, cap });
            }
        }
        if !p.is_square() {
            return Err(Error::DimensionMismatch { expected: np, found: p.cols() });
        }
        if !amm.is_square() {
            return Err(Error::DimensionMismatch { expected: nm, found: amm.cols() });
        }
        if c.rows() != nm {
            return Err(Error::DimensionMismatch { expected: nm, found: c.rows() });
        }
        if c.cols() != np {
            return Err(Error::DimensionMismatch { expected: np, found: c.cols() });
        }
        let p = checked_symmetric(p, BLOCK_SYMMETRY_TOL)?;
        let amm = checked_symmetric(amm, BLOCK_SYMMETRY_TOL)?;
        Ok(BlockOperator { p, amm, c })
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn amm(&self) -> &Matrix {
        &self.amm
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn n_plus(&self) -> usize {
        self.p.rows()
    }

    pub fn n_minus(&self) -> usize {
        self.amm.rows()
    }

    pub fn dim(&self) -> usize {
        self.n_plus() + self.n_minus()
    }

    /// Top of the spectrum of the lower block.
    pub fn lambda0(&self) -> Result<f64> {
        if let Some(d) = diagonal_only(&self.amm) {
            return Ok(d.into_iter().fold(f64::NEG_INFINITY, f64::max));
        }
        let ev = linalg::symmetric_eigenvalues(&self.amm)?;
        Ok(*ev.last().expect("n_minus >= 1"))
    }

    /// `B = -amm`.
    pub fn b_matrix(&self) -> Matrix {
        self.amm.scale(-1.0)
    }

    /// The assembled `(n⁺+n⁻)²` matrix.
    pub fn full_matrix(&self) -> Matrix {
        let (np, nm) = (self.n_plus(), self.n_minus());
        let mut a = Matrix::zeros(np + nm, np + nm);
        a.set_block(0, 0, &self.p);
        a.set_block(np, np, &self.amm);
        a.set_block(np, 0, &self.c);
        a.set_block(0, np, &self.c.transpose());
        a
    }

    /// Applies `A` to `x ⊕ y`.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) {
        let mut top = self.p.matvec(x);
        for (t, v) in top.iter_mut().zip(self.c.tr_matvec(y)) {
            *t += v;
        }
        let mut bot = self.c.matvec(x);
        for (b, v) in bot.iter_mut().zip(self.amm.matvec(y)) {
            *b += v;
        }
        (top, bot)
    }
}

fn diagonal_only(m: &Matrix) -> Option<alloc::vec::Vec<f64>> {
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            if i != j && *v != 0.0 {
                return None;
            }
        }
    }
    Some(m.diagonal())
}

fn checked_symmetric(m: Matrix, rel: f64) -> Result<Matrix> {
    let asym = m.asymmetry();
    let tolerance = rel * m.frobenius();
    if asym > tolerance {
        return Err(Error::NonSymmetric { asymmetry: asym, tolerance });
    }
    Ok(if asym == 0.0 { m } else { m.symmetrized() })
}

/// Splits a full symmetric matrix after its first `n_plus` coordinates.
pub fn assemble_block(full: &Matrix, n_plus: usize) -> Result<BlockOperator> {
    let size = full.rows();
    if !full.is_square() {
        return Err(Error::DimensionMismatch { expected: size, found: full.cols() });
    }
    if size < 2 || n_plus == 0 || n_plus >= size {
        return Err(Error::BadSplit { n_plus, size });
    }
    let full = checked_symmetric(full.clone(), INPUT_SYMMETRY_TOL)?;
    let nm = size - n_plus;
    BlockOperator::new(
        full.submatrix(0, 0, n_plus, n_plus),
        full.submatrix(n_plus, n_plus, nm, nm),
        full.submatrix(n_plus, 0, nm, n_plus),
    )
}

/// The pair `(λ0, λ1)` of the gap condition.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapData {
    pub lambda0: f64,
    /// `NaN` when the first level could not be computed.
    pub lambda1: f64,
    pub valid: bool,
    /// Why the gap is not certified, when it is not.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub failure: Option<Error>,
}

impl GapData {
    pub fn new(lambda0: f64, lambda1: f64) -> Self {
        let valid = gap_is_valid(lambda0, lambda1);
        let failure = (!valid).then_some(Error::NoGap { lambda0, lambda1 });
        GapData { lambda0, lambda1, valid, failure }
    }
}

/// `λ0 < λ1 − 1e-12·max(1, |λ1|)`; false for NaN.
pub fn gap_is_valid(lambda0: f64, lambda1: f64) -> bool {
    lambda0 < lambda1 - 1e-12 * lambda1.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn assemble_canonical() {
        let op = assemble_block(&m(&[&[1.0, 1.0], &[1.0, -1.0]]), 1).unwrap();
        assert_eq!(op.p(), &m(&[&[1.0]]));
        assert_eq!(op.c(), &m(&[&[1.0]]));
        assert_eq!(op.amm(), &m(&[&[-1.0]]));
        assert_eq!(op.lambda0().unwrap(), -1.0);
    }

    #[test]
    fn assemble_identity() {
        let op = assemble_block(&Matrix::identity(4), 2).unwrap();
        assert_eq!(op.p(), &Matrix::identity(2));
        assert_eq!(op.c(), &Matrix::zeros(2, 2));
        assert_eq!(op.amm(), &Matrix::identity(2));
    }

    #[test]
    fn assemble_three_by_three() {
        let full = m(&[&[2.0, 0.0, 1.0], &[0.0, 3.0, 0.0], &[1.0, 0.0, -5.0]]);
        let op = assemble_block(&full, 2).unwrap();
        assert_eq!(op.p(), &m(&[&[2.0, 0.0], &[0.0, 3.0]]));
        assert_eq!(op.c(), &m(&[&[1.0, 0.0]]));
        assert_eq!(op.amm(), &m(&[&[-5.0]]));
        assert_eq!(op.full_matrix(), full);
    }

    #[test]
    fn assemble_rejects_bad_input() {
        let asym = m(&[&[1.0, 1.0], &[0.5, -1.0]]);
        assert!(matches!(assemble_block(&asym, 1), Err(Error::NonSymmetric { .. })));
        let full = Matrix::identity(3);
        assert!(matches!(assemble_block(&full, 0), Err(Error::BadSplit { .. })));
        assert!(matches!(assemble_block(&full, 3), Err(Error::BadSplit { .. })));
        assert!(matches!(assemble_block(&Matrix::identity(1), 1), Err(Error::BadSplit { .. })));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let full = m(&[&[1.0, 1.0 + 1e-15], &[1.0, -1.0]]);
        let op = assemble_block(&full, 1).unwrap();
        assert_eq!(op.full_matrix().asymmetry(), 0.0);
    }

    #[test]
    fn lambda0_and_b() {
        let amm = Matrix::diag(&[-2.0, -3.0]);
        let op = BlockOperator::new(Matrix::identity(1), amm, Matrix::zeros(2, 1)).unwrap();
        assert_eq!(op.lambda0().unwrap(), -2.0);
        assert_eq!(op.b_matrix(), Matrix::diag(&[2.0, 3.0]));
        let amm = m(&[&[-1.0, 0.2], &[0.2, -1.0]]);
        let op = BlockOperator::new(Matrix::identity(1), amm, Matrix::zeros(2, 1)).unwrap();
        assert_eq!(op.b_matrix(), m(&[&[1.0, -0.2], &[-0.2, 1.0]]));
        assert!((op.lambda0().unwrap() + 0.8).abs() < 1e-14);
    }

    #[test]
    fn size_cap_and_shapes() {
        let r = BlockOperator::with_cap(Matrix::identity(3), Matrix::identity(1), Matrix::zeros(1, 3), 2);
        assert!(matches!(r, Err(Error::SizeCap { dim: 3, cap: 2 })));
        let r = BlockOperator::new(Matrix::identity(2), Matrix::identity(1), Matrix::zeros(1, 3));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gap_validity() {
        assert!(GapData::new(-1.0, 1.0).valid);
        assert!(!GapData::new(-1.0, -1.0).valid);
        assert!(!GapData::new(-1.0, f64::NAN).valid);
        assert!(GapData::new(-1.0, -1.0).failure.is_some());
    }
}
