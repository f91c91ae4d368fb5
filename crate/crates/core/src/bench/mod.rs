//! Experiment harness: seeded instances, solver fan-out over seeds, averaged
//! trajectories as CSV, and the interpolation heatmap.

pub mod config;
pub mod instance;
pub mod output;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

pub use config::{Design, ExperimentConfig, ExperimentKind};
pub use instance::{InstanceSpec, ObjectiveSpec};
pub use output::{format_sig12, heatmap_svg, Table};

use crate::error::{Error, Result};
use crate::objectives::{
    grid_points, make_doptimal_instance, make_gaussian_kernel, make_qp_instance, DOptimalInstance,
    DOptimalObjective, LogBarrierConcave, SimilarityConcave, SoftmaxExtension,
};
use crate::problem::{ObjectivePair, Point, ProblemInstance, SolverReport};
use crate::regions::FeasibleRegion;
use crate::solvers::{Algorithm, SolverConfig};
use crate::verify::{self, CheckReport};

/// Files written by an experiment plus the tables behind them.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub files: Vec<PathBuf>,
    pub table: Table,
}

/// Solver configuration used by the harness for one run.
pub fn solver_config(cfg: &ExperimentConfig, seed: u64) -> SolverConfig {
    let mut sc = match cfg.epsilon {
        Some(eps) => SolverConfig::with_epsilon(eps),
        None => SolverConfig::experiment(cfg.iterations),
    };
    if cfg.epsilon.is_none() {
        sc.step = cfg.step;
    }
    sc.seed = seed;
    sc
}

/// Runs one algorithm; `Ok(None)` when the region does not support it.
fn run_one(alg: Algorithm, p: &ProblemInstance, sc: &SolverConfig) -> Result<Option<SolverReport>> {
    match alg.run(p, sc) {
        Ok(r) => Ok(Some(r)),
        Err(Error::UnsupportedRegion(msg)) => {
            log::info!("{alg}: {msg}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Per-iteration series for `rows` rows: the trajectory for plain solvers,
/// the final value repeated for best-of solvers.
fn series(alg: Algorithm, report: &SolverReport, rows: usize) -> Vec<f64> {
    (1..=rows)
        .map(|i| {
            if alg.is_best_of() {
                report.output_value
            } else {
                report.values[i.min(report.values.len() - 1)]
            }
        })
        .collect()
}

/// Runs every configured algorithm on the instance built for each seed and
/// averages the series across seeds, in seed order.
pub fn averaged_trajectories<B>(cfg: &ExperimentConfig, build: B) -> Result<Table>
where
    B: Fn(u64) -> Result<ProblemInstance> + Sync,
{
    let per_seed: Vec<Result<Vec<Option<SolverReport>>>> = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let p = build(seed)?;
            let sc = solver_config(cfg, seed);
            cfg.algorithms
                .iter()
                .map(|&a| run_one(a, &p, &sc))
                .collect()
        })
        .collect();
    let per_seed: Vec<Vec<Option<SolverReport>>> = per_seed.into_iter().collect::<Result<_>>()?;

    let rows = match cfg.epsilon {
        Some(_) => per_seed
            .iter()
            .flatten()
            .flatten()
            .map(|r| r.values.len() - 1)
            .max()
            .unwrap_or(0)
            .max(1),
        None => cfg.iterations,
    };
    let mut columns = Vec::with_capacity(cfg.algorithms.len());
    for (j, &alg) in cfg.algorithms.iter().enumerate() {
        let mut sum = vec![0.0; rows];
        let mut supported = true;
        for runs in &per_seed {
            match &runs[j] {
                Some(r) => {
                    for (s, v) in sum.iter_mut().zip(series(alg, r, rows)) {
                        *s += v;
                    }
                }
                None => supported = false,
            }
        }
        let k = per_seed.len() as f64;
        columns.push(supported.then(|| sum.into_iter().map(|s| s / k).collect::<Vec<_>>()));
    }

    let mut header = vec!["iteration".to_string()];
    header.extend(cfg.algorithms.iter().map(|a| a.name().to_string()));
    let rows = (0..rows)
        .map(|i| {
            let cells = columns.iter().map(|c| c.as_ref().map(|c| c[i])).collect();
            (i + 1, cells)
        })
        .collect();
    Ok(Table { header, rows })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn require_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    cfg.validate()?;
    if cfg.experiment != kind {
        return Err(Error::Config(format!(
            "expected a '{kind}' config, got '{}'",
            cfg.experiment
        )));
    }
    Ok(())
}

/// Quadratic-programming experiment; writes `qp_n{n}_m{m}.csv`.
pub fn run_qp_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    require_kind(cfg, ExperimentKind::Qp)?;
    let (n, m) = (cfg.n.unwrap_or(0), cfg.m.unwrap_or(0));
    let table = averaged_trajectories(cfg, |seed| {
        make_qp_instance(n, m, seed)?.problem(cfg.lambda)
    })?;
    let path = cfg.output_dir.join(format!("qp_n{n}_m{m}.csv"));
    write_file(&path, &table.to_csv())?;
    Ok(ExperimentOutput {
        files: vec![path],
        table,
    })
}

/// D-optimal instance for a seed, honoring the `design` override.
pub fn doptimal_instance(cfg: &ExperimentConfig, seed: u64) -> Result<DOptimalInstance> {
    let n = cfg.n.unwrap_or(0);
    match cfg.design {
        Design::Gaussian => make_doptimal_instance(n, seed),
        Design::Identity => Ok(DOptimalInstance {
            g: DOptimalObjective::identity(n),
            c: LogBarrierConcave::new(n, 0.1)?,
            region: FeasibleRegion::boxed(vec![1.0; n], vec![2.0; n])?,
        }),
    }
}

/// D-optimal design experiment over `[1, 2]^n`; writes `doptimal_n{n}.csv`.
pub fn run_doptimal_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    require_kind(cfg, ExperimentKind::DOptimal)?;
    let table = averaged_trajectories(cfg, |seed| {
        doptimal_instance(cfg, seed)?.problem(cfg.lambda)
    })?;
    let path = cfg
        .output_dir
        .join(format!("doptimal_n{}.csv", cfg.n.unwrap_or(0)));
    write_file(&path, &table.to_csv())?;
    Ok(ExperimentOutput {
        files: vec![path],
        table,
    })
}

/// Result of one interpolation run.
#[derive(Debug, Clone)]
pub struct InterpolationRun {
    pub kernel: DMatrix<f64>,
    pub report: SolverReport,
}

impl InterpolationRun {
    /// `sum_ij L_ij x_i x_j` at the output.
    pub fn similarity_score(&self) -> f64 {
        similarity_score(&self.kernel, &self.report.output)
    }
}

pub fn similarity_score(kernel: &DMatrix<f64>, x: &[f64]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(x);
    v.dot(&(kernel * &v))
}

/// Builds the grid kernel and runs gradient-combining Frank-Wolfe from
/// `(budget / n) 1` with the configured fixed step.
pub fn interpolation_run(cfg: &ExperimentConfig) -> Result<InterpolationRun> {
    require_kind(cfg, ExperimentKind::Interpolation)?;
    let points = grid_points(cfg.grid_side);
    let n = points.len();
    let kernel = make_gaussian_kernel(&points, cfg.sigma)?;
    let region = FeasibleRegion::cardinality(n, cfg.budget)?;
    let g = Arc::new(SoftmaxExtension::new(kernel.clone())?);
    let c = Arc::new(SimilarityConcave::new(kernel.clone())?);
    let pair = ObjectivePair::new(g, c, cfg.lambda)?;
    let p = ProblemInstance::new(pair, region)?;
    let mut sc = SolverConfig::experiment(cfg.iterations);
    sc.step = cfg.step;
    sc.start = Some(Point::filled(n, (cfg.budget / n as f64).min(1.0)));
    let report = Algorithm::GradientCombiningFw.run(&p, &sc)?;
    Ok(InterpolationRun { kernel, report })
}

/// Writes `interpolation_lambda{lambda}.csv` (the final vector) and the
/// matching `.svg` heatmap.
pub fn run_interpolation_experiment(
    cfg: &ExperimentConfig,
) -> Result<(ExperimentOutput, InterpolationRun)> {
    let run = interpolation_run(cfg)?;
    let side = cfg.grid_side;
    let table = Table {
        header: vec!["index".into(), "row".into(), "col".into(), "value".into()],
        rows: run
            .report
            .output
            .iter()
            .enumerate()
            .map(|(k, v)| {
                (
                    k,
                    vec![Some((k / side) as f64), Some((k % side) as f64), Some(*v)],
                )
            })
            .collect(),
    };
    let stem = format!("interpolation_lambda{}", cfg.lambda);
    let csv = cfg.output_dir.join(format!("{stem}.csv"));
    let svg = cfg.output_dir.join(format!("{stem}.svg"));
    write_file(&csv, &table.to_csv())?;
    write_file(&svg, &heatmap_svg(&run.report.output, side, 20))?;
    Ok((
        ExperimentOutput {
            files: vec![csv, svg],
            table,
        },
        run,
    ))
}

/// Runs the configured algorithms on a serialized instance; writes
/// `custom.csv` with one trajectory per solver (best-of solvers as their
/// final value).
pub fn run_custom(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    require_kind(cfg, ExperimentKind::Custom)?;
    let path = cfg.instance.as_ref().expect("validated");
    let p = InstanceSpec::load(path)?.build()?;
    let single = ExperimentConfig {
        seeds: vec![cfg.seeds[0]],
        ..cfg.clone()
    };
    let table = averaged_trajectories(&single, |_| Ok(p.clone()))?;
    let out = cfg.output_dir.join("custom.csv");
    write_file(&out, &table.to_csv())?;
    Ok(ExperimentOutput {
        files: vec![out],
        table,
    })
}

/// Dispatches on `cfg.experiment`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    match cfg.experiment {
        ExperimentKind::Qp => run_qp_experiment(cfg),
        ExperimentKind::DOptimal => run_doptimal_experiment(cfg),
        ExperimentKind::Interpolation => run_interpolation_experiment(cfg).map(|(o, _)| o),
        ExperimentKind::Custom => run_custom(cfg),
    }
}

/// Structural checks on a loaded instance: gradient fidelity of G and C,
/// DR-submodularity of G, concavity of C, and the smoothness estimate.
#[derive(Debug, Clone)]
pub struct InstanceChecks {
    pub checks: Vec<(&'static str, CheckReport)>,
    pub smoothness: f64,
}

impl InstanceChecks {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, c)| c.passed)
    }
}

pub fn verify_instance(p: &ProblemInstance, seed: u64) -> Result<InstanceChecks> {
    use crate::tolerances as tol;
    let region = &p.region;
    let pair = &p.objective;
    let checks = vec![
        (
            "gradient_g",
            verify::check_gradient(pair.g.as_ref(), region, 100, tol::GRADIENT_CHECK, seed)?,
        ),
        (
            "gradient_c",
            verify::check_gradient(pair.c.as_ref(), region, 100, tol::GRADIENT_CHECK, seed)?,
        ),
        (
            "dr_submodular_g",
            verify::check_dr_submodular(pair.g.as_ref(), region, 1000, tol::DR_CHECK, seed)?,
        ),
        (
            "concave_c",
            verify::check_concave(pair.c.as_ref(), region, 1000, tol::CONCAVITY_CHECK, seed)?,
        ),
    ];
    let smoothness = verify::estimate_pair_smoothness(pair, region, 1000, seed)?;
    Ok(InstanceChecks { checks, smoothness })
}
