mod common;

use common::gapped_op;
use gapminmax_core::linalg::{symmetric_eigenvalues, Cholesky};
use gapminmax_core::linop::{assemble_block, BlockOperator};
use gapminmax_core::matrix::Matrix;
use gapminmax_core::Error;
use proptest::prelude::*;

proptest! {
    #[test]
    fn assembled_matrix_is_symmetric(op in gapped_op(12)) {
        let a = op.full_matrix();
        prop_assert!(a.asymmetry() <= 1e-13 * a.max_abs().max(1.0));
    }

    #[test]
    fn lambda0_is_top_of_lower_block(op in gapped_op(12)) {
        let amm_top = *symmetric_eigenvalues(op.amm()).unwrap().last().unwrap();
        prop_assert!((op.lambda0().unwrap() - amm_top).abs() <= 1e-12 * amm_top.abs().max(1.0));
    }

    #[test]
    fn shifted_b_is_positive_definite(op in gapped_op(12), t in -9.0f64..3.0) {
        let e = op.lambda0().unwrap() + 1e-10 + 10f64.powf(t);
        let shifted = op.b_matrix().add_diag(e);
        prop_assert!(Cholesky::new(&shifted).is_ok());
    }

    #[test]
    fn assemble_roundtrip(op in gapped_op(8)) {
        let back = assemble_block(&op.full_matrix(), op.n_plus()).unwrap();
        prop_assert_eq!(back.p(), op.p());
        prop_assert_eq!(back.c(), op.c());
        prop_assert_eq!(back.amm(), op.amm());
    }

    #[test]
    fn apply_matches_full_matrix(op in gapped_op(8), seed in any::<u64>()) {
        let n = op.dim();
        let z: Vec<f64> = (0..n).map(|i| ((seed.wrapping_mul(i as u64 + 7) % 1000) as f64) / 500.0 - 1.0).collect();
        let full = op.full_matrix().matvec(&z);
        let (top, bottom) = op.apply(&z[..op.n_plus()], &z[op.n_plus()..]);
        for (a, b) in full.iter().zip(top.iter().chain(&bottom)) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}

#[test]
fn asymmetric_input_rejected() {
    let full = Matrix::from_rows(&[[1.0, 2.0], [1.0, -1.0]]).unwrap();
    assert!(matches!(assemble_block(&full, 1), Err(Error::NonSymmetric { .. })));
}

#[test]
fn split_out_of_range_rejected() {
    assert!(matches!(assemble_block(&Matrix::identity(3), 3), Err(Error::BadSplit { .. })));
    assert!(matches!(assemble_block(&Matrix::identity(3), 0), Err(Error::BadSplit { .. })));
}

#[test]
fn cap_is_per_block() {
    let ok = BlockOperator::with_cap(Matrix::identity(3), Matrix::identity(3).scale(-1.0), Matrix::zeros(3, 3), 3);
    assert!(ok.is_ok());
    let r = BlockOperator::with_cap(Matrix::identity(4), Matrix::identity(3).scale(-1.0), Matrix::zeros(3, 4), 3);
    assert!(matches!(r, Err(Error::SizeCap { .. })));
}
