mod common;

use approx::assert_relative_eq;
use common::gapped_op;
use gapminmax_core::linalg::symmetric_eigenvalues;
use gapminmax_core::models::conjugate_blockwise;
use gapminmax_core::oracle::{cluster, dense_spectrum};
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #[test]
    fn spectrum_invariant_under_block_conjugation(op in gapped_op(10), seed in any::<u64>()) {
        let a = dense_spectrum(&op).unwrap().values;
        let b = dense_spectrum(&conjugate_blockwise(&op, seed).unwrap()).unwrap().values;
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn eigenvalue_sum_is_trace(op in gapped_op(12)) {
        let a = op.full_matrix();
        let trace: f64 = a.diagonal().iter().sum();
        let sum: f64 = dense_spectrum(&op).unwrap().values.iter().sum();
        prop_assert!((trace - sum).abs() <= 1e-10 * a.frobenius().max(1.0) * op.dim() as f64);
    }

    #[test]
    fn eigensolver_agrees_with_nalgebra(op in gapped_op(15)) {
        let a = op.full_matrix();
        let ours = symmetric_eigenvalues(&a).unwrap();
        let na = DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
        let mut theirs: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-11 * a.max_abs().max(1.0));
        }
    }

    #[test]
    fn cluster_counts_add_up(mut v in prop::collection::vec(-5.0f64..5.0, 0..40)) {
        v.sort_by(f64::total_cmp);
        let total: usize = cluster(&v, 1e-8).iter().map(|c| c.1).sum();
        prop_assert_eq!(total, v.len());
    }
}

#[test]
fn canonical_spectrum() {
    use gapminmax_core::linop::assemble_block;
    use gapminmax_core::matrix::Matrix;
    let op = assemble_block(&Matrix::from_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap(), 1).unwrap();
    let s = dense_spectrum(&op).unwrap();
    assert_relative_eq!(s.values[0], -std::f64::consts::SQRT_2, epsilon = 1e-14);
    assert_relative_eq!(s.values[1], std::f64::consts::SQRT_2, epsilon = 1e-14);
}
