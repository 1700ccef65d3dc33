#![allow(dead_code)]

use gapminmax_core::linop::BlockOperator;
use gapminmax_core::models::{random_gapped, RandomSpec};
use proptest::prelude::*;

pub fn gapped_op(max_dim: usize) -> impl Strategy<Value = BlockOperator> {
    (1..=max_dim, 1..=max_dim, 0.2f64..2.0, any::<u64>()).prop_map(|(n_plus, n_minus, gap_target, seed)| {
        random_gapped(&RandomSpec { n_plus, n_minus, gap_target, seed }).expect("generator")
    })
}

/// An operator together with a vector on its upper block.
pub fn op_and_vec(max_dim: usize) -> impl Strategy<Value = (BlockOperator, Vec<f64>)> {
    gapped_op(max_dim).prop_flat_map(|op| {
        let n = op.n_plus();
        (Just(op), prop::collection::vec(-1.0f64..1.0, n))
    })
}

pub fn nonzero(x: &[f64]) -> bool {
    x.iter().map(|v| v * v).sum::<f64>() > 1e-6
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
