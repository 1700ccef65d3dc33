//! Ground truth from the dense spectrum of the assembled matrix.

use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg;
use crate::linop::BlockOperator;

/// Relative tolerance for merging eigenvalues into one multiplicity cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spectrum {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    pub cluster_tol: f64,
}

impl Spectrum {
    /// Groups the eigenvalues strictly inside `(lo, hi)` into `(value, multiplicity)`.
    pub fn clusters_in(&self, lo: f64, hi: f64) -> Vec<(f64, usize)> {
        let inside: Vec<f64> = self.values.iter().copied().filter(|v| *v > lo && *v < hi).collect();
        cluster(&inside, self.cluster_tol)
    }
}

/// All eigenvalues of the assembled matrix, ascending.
pub fn dense_spectrum(op: &BlockOperator) -> Result<Spectrum> {
    let values = linalg::symmetric_eigenvalues(&op.full_matrix())?;
    Ok(Spectrum { values, cluster_tol: CLUSTER_TOL })
}

/// Eigenvalues strictly inside `(lo, hi)` with multiplicities.
pub fn gap_eigs_bruteforce(op: &BlockOperator, lo: f64, hi: f64) -> Result<Vec<(f64, usize)>> {
    Ok(dense_spectrum(op)?.clusters_in(lo, hi))
}

/// Chains ascending values whose neighbours differ by at most
/// `tol·max(1, |v|)`; each cluster is reported by its mean.
pub fn cluster(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    for &v in sorted {
        if let Some(last) = out.last_mut() {
            if v - prev <= tol * v.abs().max(prev.abs()).max(1.0) {
                last.1 += 1;
                sum += v;
                last.0 = sum / last.1 as f64;
                prev = v;
                continue;
            }
        }
        out.push((v, 1));
        sum = v;
        prev = v;
    }
    out
}
