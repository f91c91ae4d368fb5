//! Python bindings: problem construction, the solvers, the grid oracle,
//! instance verification and the experiment runner.

use std::collections::HashMap;
use std::path::PathBuf;

use fwsubmix::bench::{self, ExperimentConfig, InstanceSpec};
use fwsubmix::objectives::{make_doptimal_instance, make_qp_instance};
use fwsubmix::verify::{self, GuaranteeBound};
use fwsubmix::{Algorithm, Error, Point, ProblemInstance, SolverConfig, SolverReport};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

type CheckMap = HashMap<String, (bool, f64)>;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(msg) => PyOSError::new_err(msg),
        Error::Config(_)
        | Error::Parse { .. }
        | Error::InvalidRegion(_)
        | Error::DimensionMismatch { .. }
        | Error::NonFinite { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn point(x: Vec<f64>) -> PyResult<Point> {
    Point::new(x).map_err(to_py)
}

/// A DR-submodular plus concave maximization problem over a convex region.
#[pyclass(frozen, module = "pyfwsubmix")]
struct Problem {
    inner: ProblemInstance,
    spec: Option<InstanceSpec>,
}

#[pymethods]
impl Problem {
    /// Random packing-polytope quadratic instance.
    #[staticmethod]
    #[pyo3(signature = (n, m, seed, lam = 0.5))]
    fn qp(n: usize, m: usize, seed: u64, lam: f64) -> PyResult<Self> {
        let qp = make_qp_instance(n, m, seed).map_err(to_py)?;
        Ok(Self {
            inner: qp.problem(lam).map_err(to_py)?,
            spec: Some(InstanceSpec::from_qp(&qp, lam)),
        })
    }

    /// Log-det plus log-barrier instance over `[1, 2]^n`.
    #[staticmethod]
    #[pyo3(signature = (n, seed, lam = 0.5))]
    fn doptimal(n: usize, seed: u64, lam: f64) -> PyResult<Self> {
        let d = make_doptimal_instance(n, seed).map_err(to_py)?;
        Ok(Self {
            inner: d.problem(lam).map_err(to_py)?,
            spec: None,
        })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let spec = InstanceSpec::parse(text).map_err(to_py)?;
        Ok(Self {
            inner: spec.build().map_err(to_py)?,
            spec: Some(spec),
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let spec = InstanceSpec::load(&path).map_err(to_py)?;
        Ok(Self {
            inner: spec.build().map_err(to_py)?,
            spec: Some(spec),
        })
    }

    /// Instance file text; `None` for instances without a text form.
    fn to_text(&self) -> Option<String> {
        self.spec.as_ref().map(InstanceSpec::to_text)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.inner.objective.lambda
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.region.diameter_bound()
    }

    /// `F(x) = lam G(x) + (1 - lam) C(x)`.
    fn value(&self, x: Vec<f64>) -> PyResult<f64> {
        fwsubmix::evaluate_f(&self.inner.objective, &point(x)?).map_err(to_py)
    }

    /// `(lam G(x), (1 - lam) C(x))`.
    fn parts(&self, x: Vec<f64>) -> PyResult<(f64, f64)> {
        let o = &self.inner.objective;
        Ok((o.value_g(&x).map_err(to_py)?, o.value_c(&x).map_err(to_py)?))
    }

    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let mut counts = fwsubmix::OracleCounts::default();
        fwsubmix::gradient_f(&self.inner.objective, &point(x)?, &mut counts).map_err(to_py)
    }

    #[pyo3(signature = (x, tol = 1e-9))]
    fn contains(&self, x: Vec<f64>, tol: f64) -> bool {
        self.inner.region.contains(&x, tol)
    }

    /// Maximizer of `<c, x>` over the region and its value.
    fn lmo(&self, c: Vec<f64>) -> PyResult<(Vec<f64>, f64)> {
        let r = self.inner.region.lmo(&c).map_err(to_py)?;
        Ok((r.vertex.into_vec(), r.objective_value))
    }

    /// Empirical smoothness constant (largest of F, lam G, (1 - lam) C).
    #[pyo3(signature = (samples = 1000, seed = 0))]
    fn smoothness(&self, py: Python<'_>, samples: usize, seed: u64) -> PyResult<f64> {
        py.detach(|| {
            verify::estimate_pair_smoothness(
                &self.inner.objective,
                &self.inner.region,
                samples,
                seed,
            )
        })
        .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(dim={}, lam={}, region={:?})",
            self.inner.dimension(),
            self.inner.objective.lambda,
            self.inner.region.kind()
        )
    }
}

/// Trajectory and bookkeeping of one solver run.
#[pyclass(frozen, get_all, module = "pyfwsubmix")]
struct Report {
    algorithm: String,
    iterates: Vec<Vec<f64>>,
    values: Vec<f64>,
    output: Vec<f64>,
    output_value: f64,
    best: Vec<f64>,
    best_value: f64,
    grad_calls_g: u64,
    grad_calls_c: u64,
    lmo_calls: u64,
    iterations: usize,
    step: f64,
    certified_eta: Option<f64>,
    elapsed: f64,
}

impl From<SolverReport> for Report {
    fn from(r: SolverReport) -> Self {
        Self {
            algorithm: r.algorithm.to_string(),
            grad_calls_g: r.grad_calls_g(),
            grad_calls_c: r.grad_calls_c(),
            lmo_calls: r.lmo_calls(),
            iterates: r.iterates.into_iter().map(Point::into_vec).collect(),
            values: r.values,
            output: r.output.into_vec(),
            output_value: r.output_value,
            best: r.best.into_vec(),
            best_value: r.best_value,
            iterations: r.iterations,
            step: r.step,
            certified_eta: r.certified_eta,
            elapsed: r.elapsed.as_secs_f64(),
        }
    }
}

#[pymethods]
impl Report {
    fn __repr__(&self) -> String {
        format!(
            "Report({}, iterations={}, output_value={})",
            self.algorithm, self.iterations, self.output_value
        )
    }
}

/// Runs one solver. With `iterations` set the run uses a fixed budget and
/// step (`1/iterations` unless `step` is given) without precondition checks;
/// otherwise the iteration count follows from `epsilon`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (problem, algorithm, epsilon = 0.1, iterations = None, step = None, start = None, seed = 0))]
fn solve(
    py: Python<'_>,
    problem: &Problem,
    algorithm: &str,
    epsilon: f64,
    iterations: Option<usize>,
    step: Option<f64>,
    start: Option<Vec<f64>>,
    seed: u64,
) -> PyResult<Report> {
    let alg: Algorithm = algorithm.parse().map_err(to_py)?;
    let mut cfg = match iterations {
        Some(k) => SolverConfig::experiment(k),
        None => SolverConfig::with_epsilon(epsilon),
    };
    cfg.step = step;
    cfg.seed = seed;
    cfg.start = start.map(point).transpose()?;
    let report = py.detach(|| alg.run(&problem.inner, &cfg)).map_err(to_py)?;
    Ok(report.into())
}

/// Names accepted by `solve`.
#[pyfunction]
fn algorithms() -> Vec<&'static str> {
    Algorithm::ALL.iter().map(|a| a.name()).collect()
}

/// Exhaustive grid maximization (dimension at most 6).
#[pyfunction]
fn grid_maximize(
    py: Python<'_>,
    problem: &Problem,
    step: f64,
) -> PyResult<HashMap<&'static str, Py<PyAny>>> {
    let r = py
        .detach(|| verify::grid_maximize(&problem.inner, step))
        .map_err(to_py)?;
    let mut out = HashMap::new();
    out.insert(
        "argmax",
        r.argmax.into_vec().into_pyobject(py)?.into_any().unbind(),
    );
    out.insert("value", r.value.into_pyobject(py)?.into_any().unbind());
    out.insert("g_value", r.g_value.into_pyobject(py)?.into_any().unbind());
    out.insert("c_value", r.c_value.into_pyobject(py)?.into_any().unbind());
    out.insert(
        "points",
        r.points_scanned.into_pyobject(py)?.into_any().unbind(),
    );
    Ok(out)
}

/// Gradient, DR-submodularity and concavity checks: `{name: (passed,
/// max_violation)}` plus the overall verdict.
#[pyfunction]
#[pyo3(signature = (problem, seed = 0))]
fn verify_problem(py: Python<'_>, problem: &Problem, seed: u64) -> PyResult<(bool, CheckMap)> {
    let checks = py
        .detach(|| bench::verify_instance(&problem.inner, seed))
        .map_err(to_py)?;
    let map = checks
        .checks
        .iter()
        .map(|(name, c)| (name.to_string(), (c.passed, c.max_violation)))
        .collect();
    Ok((checks.passed(), map))
}

/// Approximation threshold `alpha G(o) + beta C(o) - error` for a solver
/// given the optimum's weighted parts, smoothness `l` and diameter `d`.
#[pyfunction]
#[pyo3(signature = (algorithm, epsilon, g_opt, c_opt, l, d, eta = 0.0, g_monotone = true, c_monotone = true))]
#[allow(clippy::too_many_arguments)]
fn guarantee_threshold(
    algorithm: &str,
    epsilon: f64,
    g_opt: f64,
    c_opt: f64,
    l: f64,
    d: f64,
    eta: f64,
    g_monotone: bool,
    c_monotone: bool,
) -> PyResult<f64> {
    let bound = match algorithm.parse().map_err(to_py)? {
        Algorithm::GreedyFw => GuaranteeBound::greedy(epsilon, l, d),
        Algorithm::MeasuredGreedyFw => {
            GuaranteeBound::measured(g_monotone, c_monotone, epsilon, l, d)
        }
        Algorithm::GradientCombiningFw => GuaranteeBound::gradient_combining(epsilon, eta, l, d),
        Algorithm::NonObliviousFw => GuaranteeBound::non_oblivious(epsilon, l, d),
        other => return Err(PyValueError::new_err(format!("{other} has no guarantee"))),
    };
    Ok(bound.alpha * g_opt + bound.beta * c_opt - bound.additive_error)
}

/// Runs an experiment config file with optional `key = value` overrides and
/// returns the written paths.
#[pyfunction]
#[pyo3(signature = (config, overrides = None))]
fn run_experiment(
    py: Python<'_>,
    config: PathBuf,
    overrides: Option<HashMap<String, String>>,
) -> PyResult<Vec<PathBuf>> {
    let mut cfg = ExperimentConfig::from_file(&config).map_err(to_py)?;
    let mut keys: Vec<_> = overrides.unwrap_or_default().into_iter().collect();
    keys.sort();
    for (k, v) in keys {
        cfg.set(&k, &v).map_err(to_py)?;
    }
    cfg.validate().map_err(to_py)?;
    let out = py.detach(|| bench::run_experiment(&cfg)).map_err(to_py)?;
    Ok(out.files)
}

/// Decimal rendering with 12 significant digits, as used in CSV output.
#[pyfunction]
fn format_sig12(v: f64) -> String {
    bench::format_sig12(v)
}

#[pymodule]
fn pyfwsubmix(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(algorithms, m)?)?;
    m.add_function(wrap_pyfunction!(grid_maximize, m)?)?;
    m.add_function(wrap_pyfunction!(verify_problem, m)?)?;
    m.add_function(wrap_pyfunction!(guarantee_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(format_sig12, m)?)?;
    Ok(())
}
