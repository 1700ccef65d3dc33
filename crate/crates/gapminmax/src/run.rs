//! Experiment drivers. Each case (grid size, seed or file) is independent and
//! runs on the rayon pool; results are reassembled in case order.

use std::time::Instant;

use gapminmax_core::linop::BlockOperator;
use gapminmax_core::minmax::{lambda1_certificate, lambda_k};
use gapminmax_core::models::{
    analytic_dirac_energy, build_aps_cylinder, build_dirac_coulomb, dirac_label, hardy_check_with, random_gapped,
    ApsSpec, DiracSpec, RandomSpec,
};
use gapminmax_core::oracle::{dense_spectrum, gap_eigs_bruteforce};
use gapminmax_core::schur::build_schur;
use gapminmax_core::verify::{
    decomposition_residual, extension_consistency, in_gap_energies, inverse_formula_check, krein_gap_check_seeded,
    log_spaced_energies, norm_chain_violation, sandwich_violation, VerificationReport, DECOMPOSITION_TOL,
    EXTENSION_TOL, INVERSE_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ModelConfig};
use crate::error::{Error, Result};
use crate::matrix_file::MatrixFile;
use crate::report::ReportRow;

/// Operators up to this total dimension get a dense oracle column.
pub const DENSE_ORACLE_MAX_DIM: usize = 1200;
pub const KREIN_SAMPLES: usize = 64;
pub const SANDWICH_SAMPLES: usize = 100;
pub const SANDWICH_SLACK: f64 = 1e-10;
pub const POLLUTION_WINDOW: (f64, f64) = (-0.5, 0.5);
pub const POLLUTION_STABLE: f64 = 5e-3;
pub const POLLUTION_SPURIOUS: f64 = 0.05;

#[derive(Clone, Debug)]
enum Source {
    Dirac(DiracSpec),
    Aps(ApsSpec),
    Random(RandomSpec),
    Matrix(BlockOperator),
}

/// One operator of an experiment.
#[derive(Clone, Debug)]
pub struct Case {
    pub model: String,
    pub grid: usize,
    source: Source,
}

impl Case {
    pub fn operator(&self) -> Result<BlockOperator> {
        Ok(match &self.source {
            Source::Dirac(s) => build_dirac_coulomb(s)?,
            Source::Aps(s) => build_aps_cylinder(s)?,
            Source::Random(s) => random_gapped(s)?,
            Source::Matrix(op) => op.clone(),
        })
    }

    fn oracle(&self, op: &BlockOperator, k_max: usize, levels: &[Option<f64>]) -> Vec<Option<f64>> {
        match &self.source {
            Source::Dirac(s) => (0..k_max).map(|j| analytic_dirac_energy(s.nu, s.kappa, j as u32).ok()).collect(),
            Source::Aps(s) => {
                let exact = s.closed_form_levels();
                (0..k_max).map(|j| exact.get(j).copied()).collect()
            }
            Source::Random(_) | Source::Matrix(_) => dense_oracle(op, k_max, levels),
        }
    }

    fn label(&self) -> String {
        format!("{}@{}", self.model, self.grid)
    }
}

/// The `j`-th gap eigenvalue of the assembled matrix, repeated by multiplicity.
fn dense_oracle(op: &BlockOperator, k_max: usize, levels: &[Option<f64>]) -> Vec<Option<f64>> {
    let none = vec![None; k_max];
    if op.dim() > DENSE_ORACLE_MAX_DIM {
        return none;
    }
    let Some(top) = levels.iter().flatten().copied().reduce(f64::max) else {
        return none;
    };
    let Ok(lambda0) = op.lambda0() else {
        return none;
    };
    let hi = top + 1e-8 * top.abs().max(1.0);
    let Ok(found) = gap_eigs_bruteforce(op, lambda0, hi) else {
        return none;
    };
    let mut flat = found.into_iter().flat_map(|(v, d)| std::iter::repeat(v).take(d));
    (0..k_max).map(|_| flat.next()).collect()
}

/// Expands a config into its cases, reading the matrix file if there is one.
pub fn cases(config: &ExperimentConfig) -> Result<Vec<Case>> {
    Ok(match &config.model {
        ModelConfig::Dirac { .. } => config
            .grid_sizes()
            .into_iter()
            .map(|n| {
                let spec = config.dirac_spec(n).expect("dirac config");
                Case { model: dirac_label(&spec), grid: n, source: Source::Dirac(spec) }
            })
            .collect(),
        ModelConfig::Aps { modes, length_l, .. } => config
            .grid_sizes()
            .into_iter()
            .map(|n| {
                let spec = config.aps_spec(n).expect("aps config");
                let modes: Vec<String> = modes.iter().map(|m| m.to_string()).collect();
                let model = format!("aps(L={length_l},modes={})", modes.join(";"));
                Case { model, grid: n, source: Source::Aps(spec) }
            })
            .collect(),
        ModelConfig::Random { n_plus, n_minus, gap_target, seeds } => seeds
            .iter()
            .map(|&seed| Case {
                model: format!("random(seed={seed})"),
                grid: n_plus + n_minus,
                source: Source::Random(RandomSpec {
                    n_plus: *n_plus,
                    n_minus: *n_minus,
                    gap_target: *gap_target,
                    seed,
                }),
            })
            .collect(),
        ModelConfig::MatrixFile { path } => {
            let op = MatrixFile::load(path)?.operator()?;
            vec![Case { model: format!("matrix({})", path.display()), grid: op.dim(), source: Source::Matrix(op) }]
        }
    })
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn error_row(case: &Case, k: usize, err: &dyn std::fmt::Display, ms: f64) -> ReportRow {
    ReportRow {
        model: case.model.clone(),
        grid: case.grid,
        k,
        lambda_k: None,
        multiplicity: None,
        oracle: None,
        abs_error: None,
        residual: None,
        ms,
        status: err.to_string(),
    }
}

fn run_case(case: &Case, config: &ExperimentConfig) -> Vec<ReportRow> {
    let start = Instant::now();
    let op = match case.operator() {
        Ok(op) => op,
        Err(e) => {
            let ms = start.elapsed().as_secs_f64() * 1e3;
            return (1..=config.k_max).map(|k| error_row(case, k, &e, ms)).collect();
        }
    };
    let mut rows = Vec::with_capacity(config.k_max);
    for k in 1..=config.k_max {
        let t = Instant::now();
        let row = match lambda_k(&op, k, config.tol) {
            Ok(r) => ReportRow {
                model: case.model.clone(),
                grid: case.grid,
                k,
                lambda_k: Some(r.lambda_k),
                multiplicity: Some(r.multiplicity),
                oracle: None,
                abs_error: None,
                residual: Some(r.residual),
                ms: t.elapsed().as_secs_f64() * 1e3,
                status: if r.meets_contract(config.tol) { "ok".into() } else { "contract".into() },
            },
            Err(e) => error_row(case, k, &e, t.elapsed().as_secs_f64() * 1e3),
        };
        rows.push(row);
    }
    let levels: Vec<Option<f64>> = rows.iter().map(|r| r.lambda_k).collect();
    let oracle = case.oracle(&op, config.k_max, &levels);
    rows.into_iter().zip(oracle).map(|(r, o)| r.with_oracle(o)).collect()
}

/// Gap levels `1..=k_max` for every case, sorted by `(grid, k)`.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let cases = cases(config)?;
    let per_case: Vec<Vec<ReportRow>> = cases.par_iter().map(|c| run_case(c, config)).collect();
    let mut rows: Vec<ReportRow> = per_case.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.grid, r.k));
    Ok(rows)
}

fn grid_params(case: &Case) -> Vec<(String, f64)> {
    vec![("grid".into(), case.grid as f64)]
}

fn failed(name: &str, params: Vec<(String, f64)>, err: &dyn std::fmt::Display) -> VerificationReport {
    let mut r = VerificationReport::residual(name, f64::NAN, 0.0, params);
    r.name = format!("{name} ({err})");
    r
}

fn verify_case(case: &Case, config: &ExperimentConfig, index: usize) -> Vec<VerificationReport> {
    let label = case.label();
    let name = |check: &str| format!("{label}:{check}");
    let op = match case.operator() {
        Ok(op) => op,
        Err(e) => return vec![failed(&name("build"), grid_params(case), &e)],
    };
    let mut out = Vec::new();
    let gap = lambda1_certificate(&op);
    let lambda0 = gap.lambda0;

    let worst = |f: &dyn Fn(f64) -> gapminmax_core::Result<f64>, energies: &[f64]| -> Result<f64> {
        energies.iter().try_fold(0.0f64, |m, &e| Ok(m.max(f(e)?)))
    };
    let energies = log_spaced_energies(lambda0);
    for (check, tol, res) in [
        ("decomposition", DECOMPOSITION_TOL, worst(&|e| decomposition_residual(&op, e), &energies)),
        ("extension", EXTENSION_TOL, worst(&|e| extension_consistency(&op, e), &energies)),
    ] {
        out.push(match res {
            Ok(v) => VerificationReport::residual(&name(check), v, tol, grid_params(case)),
            Err(e) => failed(&name(check), grid_params(case), &e),
        });
    }
    out.push(if gap.valid {
        match worst(&|e| inverse_formula_check(&op, e), &in_gap_energies(gap.lambda0, gap.lambda1)) {
            Ok(v) => VerificationReport::residual(&name("inverse"), v, INVERSE_TOL, grid_params(case)),
            Err(e) => failed(&name("inverse"), grid_params(case), &e),
        }
    } else {
        failed(&name("inverse"), grid_params(case), &"gap not certified")
    });
    out.push(match krein_gap_check_seeded(&op, KREIN_SAMPLES, config.seed) {
        Ok(mut r) => {
            r.name = name("krein");
            r
        }
        Err(e) => failed(&name("krein"), grid_params(case), &e),
    });
    out.push(sandwich_suite(&op, lambda0, config.seed.wrapping_add(index as u64), &name("sandwich"), case));
    if let Source::Dirac(spec) = &case.source {
        out.push(match hardy_check_with(spec) {
            Ok(mut r) => {
                r.name = name("hardy");
                r
            }
            Err(e) => failed(&name("hardy"), grid_params(case), &e),
        });
    }
    out
}

/// Worst normalized violation of the monotonicity sandwich and the norm
/// chain over random `(x, E, E′)`.
fn sandwich_suite(op: &BlockOperator, lambda0: f64, seed: u64, name: &str, case: &Case) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..SANDWICH_SAMPLES {
        let e = lambda0 + 10f64.powf(rng.gen_range(-3.0..1.5));
        let e2 = e + 10f64.powf(rng.gen_range(-3.0..1.5));
        let x: Vec<f64> = (0..op.n_plus()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        match (build_schur(op, e), build_schur(op, e2)) {
            (Ok(s), Ok(s2)) => {
                worst = worst.max(sandwich_violation(&s, &s2, &x)).max(norm_chain_violation(&s, &s2, lambda0, &x));
            }
            (Err(err), _) | (_, Err(err)) => return failed(name, grid_params(case), &err),
        }
    }
    let mut params = grid_params(case);
    params.push(("samples".into(), SANDWICH_SAMPLES as f64));
    VerificationReport::residual(name, worst, SANDWICH_SLACK, params)
}

/// Every verification suite for every case, in case order.
pub fn verify_all(config: &ExperimentConfig) -> Result<Vec<VerificationReport>> {
    let cases = cases(config)?;
    let per_case: Vec<Vec<VerificationReport>> =
        cases.par_iter().enumerate().map(|(i, c)| verify_case(c, config, i)).collect();
    Ok(per_case.into_iter().flatten().collect())
}

fn require_dirac(config: &ExperimentConfig, what: &str) -> Result<()> {
    match config.model {
        ModelConfig::Dirac { .. } => Ok(()),
        _ => Err(Error::InvalidConfig(format!("{what} needs a dirac model"))),
    }
}

/// Smallest eigenvalue of the pencil `(K_0, M_0)` per grid size.
pub fn hardy_reports(config: &ExperimentConfig) -> Result<Vec<VerificationReport>> {
    require_dirac(config, "hardy")?;
    let sizes = config.grid_sizes();
    let out: Vec<VerificationReport> = sizes
        .par_iter()
        .map(|&n| {
            let spec = config.dirac_spec(n).expect("dirac config");
            match hardy_check_with(&spec) {
                Ok(r) => r,
                Err(e) => failed("hardy", vec![("n".into(), n as f64)], &e),
            }
        })
        .collect();
    Ok(out)
}

/// Nearest-neighbour drift of dense eigenvalues inside the window, taken in
/// both directions.
pub fn window_drift(a: &[f64], b: &[f64], window: (f64, f64)) -> f64 {
    let inside = |v: &&f64| **v > window.0 && **v < window.1;
    let nearest = |v: f64, set: &[f64]| set.iter().map(|w| (w - v).abs()).fold(f64::INFINITY, f64::min);
    let ab = a.iter().filter(inside).map(|&v| nearest(v, b)).fold(0.0, f64::max);
    let ba = b.iter().filter(inside).map(|&v| nearest(v, a)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Contrasts the drift of `λ1` with the drift of dense eigenvalues in
/// `(-0.5, 0.5)` between consecutive grid sizes.
pub fn pollution_reports(config: &ExperimentConfig) -> Result<Vec<VerificationReport>> {
    require_dirac(config, "pollution")?;
    let sizes = config.grid_sizes();
    if sizes.len() < 2 {
        return Err(Error::InvalidConfig("pollution needs at least two grids".into()));
    }
    let per_grid: Vec<Result<(f64, Vec<f64>)>> = sizes
        .par_iter()
        .map(|&n| {
            let op = build_dirac_coulomb(&config.dirac_spec(n).expect("dirac config"))?;
            let l1 = lambda_k(&op, 1, config.tol)?.lambda_k;
            Ok((l1, dense_spectrum(&op)?.values))
        })
        .collect();
    let mut out = Vec::new();
    for (w, pair) in sizes.windows(2).zip(per_grid.windows(2)) {
        let params = vec![("grid_a".into(), w[0] as f64), ("grid_b".into(), w[1] as f64)];
        match (&pair[0], &pair[1]) {
            (Ok((la, sa)), Ok((lb, sb))) => {
                out.push(VerificationReport::residual("lambda1-drift", (la - lb).abs(), POLLUTION_STABLE, params.clone()));
                let drift = window_drift(sa, sb, POLLUTION_WINDOW);
                let mut p = params;
                let count = |s: &[f64]| s.iter().filter(|v| **v > POLLUTION_WINDOW.0 && **v < POLLUTION_WINDOW.1).count();
                p.push(("window_a".into(), count(sa) as f64));
                p.push(("window_b".into(), count(sb) as f64));
                p.push(("drift".into(), drift));
                out.push(VerificationReport::margin("window-drift", drift - POLLUTION_SPURIOUS, 0.0, p));
            }
            (Err(e), _) | (_, Err(e)) => out.push(failed("pollution", params, e)),
        }
    }
    Ok(out)
}
