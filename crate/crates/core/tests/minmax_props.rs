mod common;

use common::{gapped_op, nonzero, op_and_vec, rel};
use gapminmax_core::minmax::{energy_identity_residual, energy_of_vector, gap_spectrum, lambda1_certificate, lambda_k};
use gapminmax_core::models::{conjugate_blockwise, doubled};
use gapminmax_core::oracle::gap_eigs_bruteforce;
use gapminmax_core::schur::mu_k;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn levels_match_oracle_with_multiplicity(op in gapped_op(12), twice in any::<bool>()) {
        let op = if twice { doubled(&op).unwrap() } else { op };
        let k_max = op.n_plus().min(4);
        let levels: Vec<_> = gap_spectrum(&op, k_max, 1e-10).unwrap().into_iter().map(Result::unwrap).collect();
        let lambda0 = op.lambda0().unwrap();
        let top = levels.last().unwrap().lambda_k;
        let expanded: Vec<(f64, usize)> = gap_eigs_bruteforce(&op, lambda0, top + 1e-8 * top.abs().max(1.0))
            .unwrap()
            .into_iter()
            .flat_map(|(v, d)| std::iter::repeat((v, d)).take(d))
            .collect();
        prop_assert!(expanded.len() >= k_max);
        for (r, (v, d)) in levels.iter().zip(expanded) {
            prop_assert!(rel(r.lambda_k, v) <= 1e-8, "k={} {} vs {}", r.k, r.lambda_k, v);
            prop_assert_eq!(r.multiplicity, d);
        }
    }

    #[test]
    fn energy_identity_holds((op, x) in op_and_vec(10)) {
        prop_assume!(nonzero(&x));
        let e = energy_of_vector(&op, &x).unwrap();
        let xx: f64 = x.iter().map(|v| v * v).sum();
        let r = energy_identity_residual(&op, e, &x).unwrap();
        prop_assert!(r.abs() <= 1e-10 * xx * e.abs().max(1.0));
    }

    #[test]
    fn levels_invariant_under_conjugation(op in gapped_op(10), seed in any::<u64>()) {
        let k_max = op.n_plus().min(3);
        let other = conjugate_blockwise(&op, seed).unwrap();
        let a = gap_spectrum(&op, k_max, 1e-12).unwrap();
        let b = gap_spectrum(&other, k_max, 1e-12).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let (x, y) = (x.as_ref().unwrap().lambda_k, y.as_ref().unwrap().lambda_k);
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn root_is_bracketed(op in gapped_op(10), k in 1usize..4) {
        let k = k.min(op.n_plus());
        let tol = 1e-10;
        let r = lambda_k(&op, k, tol).unwrap();
        prop_assert!(r.meets_contract(tol));
        let step = 10.0 * tol * r.lambda_k.abs().max(1.0);
        prop_assert!(mu_k(&op, r.lambda_k - step, k).unwrap() > 0.0);
        prop_assert!(mu_k(&op, r.lambda_k + step, k).unwrap() < 0.0);
        prop_assert!(r.bracket.0 <= r.lambda_k && r.lambda_k <= r.bracket.1);
    }
}

/// `λ1 = inf E(x)`, so no sampled vector may undercut it.
#[test]
fn lambda1_bounds_every_vector_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..5 {
        let op = gapminmax_core::models::random_gapped(&gapminmax_core::models::RandomSpec {
            n_plus: 6,
            n_minus: 5,
            gap_target: 0.8,
            seed,
        })
        .unwrap();
        let l1 = lambda1_certificate(&op).lambda1;
        let lowest = (0..1000)
            .map(|_| {
                let x: Vec<f64> = (0..op.n_plus()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                energy_of_vector(&op, &x).unwrap()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(lowest >= l1 - 1e-8, "seed {seed}: {lowest} < {l1}");
    }
}

#[test]
fn ground_vector_attains_lambda1() {
    use gapminmax_core::schur::build_schur;
    let op = gapminmax_core::models::random_gapped(&gapminmax_core::models::RandomSpec {
        n_plus: 1,
        n_minus: 4,
        gap_target: 1.0,
        seed: 3,
    })
    .unwrap();
    let l1 = lambda_k(&op, 1, 1e-12).unwrap().lambda_k;
    assert!(build_schur(&op, l1).is_ok());
    assert!(rel(energy_of_vector(&op, &[1.0]).unwrap(), l1) <= 1e-10);
}
