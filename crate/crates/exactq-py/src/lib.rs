//! Python bindings for the exactq simulator and verifier.
//!
//! Exposes the solver entry points, sampled run traces, whole-input-space
//! verification, the gap table, isometry residuals, and the deterministic
//! baseline as a `exactq` extension module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use exactq_core::algorithms::{
    self, run_full, trace_exact, trace_threshold, AlgorithmSpec, Family,
};
use exactq_core::classical::{
    exact_lower_bound_witness, threshold_lower_bound_witness, SymmetricFunction,
};
use exactq_core::oracle::{pad_for_exact, pad_for_threshold, parse_bits};
use exactq_core::verify as core_verify;
use exactq_core::verify::{FunctionFamily, VerifyConfig, VerifyMode};

fn value_error(e: exactq_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_function(name: &str) -> PyResult<FunctionFamily> {
    match name {
        "exact" => Ok(FunctionFamily::Exact),
        "threshold" => Ok(FunctionFamily::Threshold),
        other => Err(PyValueError::new_err(format!(
            "unknown function {other:?}; use \"exact\" or \"threshold\""
        ))),
    }
}

fn parse_algorithm(name: &str) -> PyResult<Family> {
    match name {
        "exact" => Ok(Family::Exact),
        "maj" => Ok(Family::Maj),
        other => Err(PyValueError::new_err(format!(
            "unknown algorithm {other:?}; use \"exact\" or \"maj\""
        ))),
    }
}

fn parse_mode(name: &str) -> PyResult<VerifyMode> {
    match name {
        "full" => Ok(VerifyMode::Full),
        "symmetric" => Ok(VerifyMode::Symmetric),
        other => Err(PyValueError::new_err(format!(
            "unknown mode {other:?}; use \"full\" or \"symmetric\""
        ))),
    }
}

/// One measured level of a sampled run.
#[pyclass(name = "LevelRecord", frozen)]
struct PyLevelRecord {
    #[pyo3(get)]
    size: usize,
    #[pyo3(get)]
    outcome: String,
    #[pyo3(get)]
    probability: f64,
    #[pyo3(get)]
    p_exact: String,
    #[pyo3(get)]
    removed: Vec<usize>,
}

#[pymethods]
impl PyLevelRecord {
    fn __repr__(&self) -> String {
        format!(
            "LevelRecord(size={}, outcome={:?}, probability={}, p_exact={:?}, removed={:?})",
            self.size, self.outcome, self.probability, self.p_exact, self.removed
        )
    }
}

/// The path taken by one sampled run.
#[pyclass(name = "RunTrace", frozen)]
struct PyRunTrace {
    function: String,
    k: usize,
    n: usize,
    input: String,
    seed: u64,
    trace: algorithms::RunTrace,
    #[pyo3(get)]
    budget: u32,
}

#[pymethods]
impl PyRunTrace {
    #[getter]
    fn answer(&self) -> u8 {
        self.trace.answer as u8
    }

    #[getter]
    fn queries(&self) -> u32 {
        self.trace.queries
    }

    #[getter]
    fn levels(&self) -> Vec<PyLevelRecord> {
        self.trace
            .levels
            .iter()
            .map(|l| PyLevelRecord {
                size: l.level_size,
                outcome: l.outcome.to_string(),
                probability: l.probability,
                p_exact: l.exact_probability.to_string(),
                removed: l.removed_global.clone(),
            })
            .collect()
    }

    /// The same JSON object the command-line `run --json` prints.
    fn to_json(&self) -> String {
        #[derive(serde::Serialize)]
        struct RunOutput<'a> {
            function: &'a str,
            k: usize,
            n: usize,
            input: &'a str,
            seed: u64,
            levels: &'a [algorithms::LevelRecord],
            answer: u8,
            queries: u32,
        }
        serde_json::to_string(&RunOutput {
            function: &self.function,
            k: self.k,
            n: self.n,
            input: &self.input,
            seed: self.seed,
            levels: &self.trace.levels,
            answer: self.trace.answer as u8,
            queries: self.trace.queries,
        })
        .expect("serializable")
    }

    fn __repr__(&self) -> String {
        format!(
            "RunTrace(function={:?}, k={}, input={:?}, seed={}, answer={}, queries={})",
            self.function,
            self.k,
            self.input,
            self.seed,
            self.trace.answer as u8,
            self.trace.queries
        )
    }
}

/// Outcome of verifying one instance.
#[pyclass(name = "VerificationReport", frozen)]
struct PyVerificationReport {
    report: core_verify::VerificationReport,
}

#[pymethods]
impl PyVerificationReport {
    #[getter]
    fn family(&self) -> String {
        self.report.family.to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.report.k
    }

    #[getter]
    fn n(&self) -> usize {
        self.report.n
    }

    #[getter]
    fn mode(&self) -> String {
        self.report.mode.to_string()
    }

    #[getter]
    fn inputs_checked(&self) -> u64 {
        self.report.inputs_checked
    }

    #[getter]
    fn leaves_checked(&self) -> u64 {
        self.report.leaves_checked
    }

    #[getter]
    fn max_queries_observed(&self) -> u32 {
        self.report.max_queries_observed
    }

    #[getter]
    fn budget(&self) -> u32 {
        self.report.budget
    }

    #[getter]
    fn worst_norm_residual(&self) -> f64 {
        self.report.worst_norm_residual
    }

    #[getter]
    fn worst_probability_sum_error(&self) -> f64 {
        self.report.worst_probability_sum_error
    }

    #[getter]
    fn passed(&self) -> bool {
        self.report.passed()
    }

    #[getter]
    fn witness(&self) -> Option<String> {
        self.report.witness().map(str::to_owned)
    }

    fn to_json(&self) -> String {
        self.report.to_json()
    }

    fn __repr__(&self) -> String {
        self.report.human_line()
    }
}

/// One row of the quantum-vs-deterministic table.
#[pyclass(name = "GapRow", frozen)]
struct PyGapRow {
    #[pyo3(get)]
    family: String,
    #[pyo3(get)]
    k: usize,
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    quantum: u32,
    #[pyo3(get)]
    deterministic: usize,
}

#[pymethods]
impl PyGapRow {
    fn __repr__(&self) -> String {
        format!(
            "GapRow(family={:?}, k={}, n={}, quantum={}, deterministic={})",
            self.family, self.k, self.n, self.quantum, self.deterministic
        )
    }
}

/// Decide EXACT_k^n. Returns (answer, query_budget).
#[pyfunction]
fn solve_exact(input: &str, k: usize) -> PyResult<(u8, u32)> {
    let bits = parse_bits(input).map_err(value_error)?;
    let (answer, budget) = algorithms::solve_exact(&bits, k).map_err(value_error)?;
    Ok((answer as u8, budget))
}

/// Decide Th_k^n. Returns (answer, query_budget).
#[pyfunction]
fn solve_threshold(input: &str, k: usize) -> PyResult<(u8, u32)> {
    let bits = parse_bits(input).map_err(value_error)?;
    let (answer, budget) = algorithms::solve_threshold(&bits, k).map_err(value_error)?;
    Ok((answer as u8, budget))
}

/// Sample one run of an instance with a deterministic seed.
#[pyfunction]
#[pyo3(signature = (function, k, input, seed = 0))]
fn run(function: &str, k: usize, input: &str, seed: u64) -> PyResult<PyRunTrace> {
    let family = parse_function(function)?;
    let bits = parse_bits(input).map_err(value_error)?;
    let (trace, budget) = match family {
        FunctionFamily::Exact => trace_exact(&bits, k, seed),
        FunctionFamily::Threshold => trace_threshold(&bits, k, seed),
    }
    .map_err(value_error)?;
    Ok(PyRunTrace {
        function: function.to_owned(),
        k,
        n: bits.len(),
        input: input.to_owned(),
        seed,
        trace,
        budget,
    })
}

/// Enumerate every leaf of the branch tree of an instance. Returns a list
/// of (answer, path_probability, queries) triples. Exponential in the
/// instance size; intended for small n.
#[pyfunction]
fn full_leaves(function: &str, k: usize, input: &str) -> PyResult<Vec<(u8, f64, u32)>> {
    let family = parse_function(function)?;
    let bits = parse_bits(input).map_err(value_error)?;
    let (padded, m, algorithm) = match family {
        FunctionFamily::Exact => {
            let (padded, m) = pad_for_exact(&bits, k).map_err(value_error)?;
            (padded, m, Family::Exact)
        }
        FunctionFamily::Threshold => {
            if k == 0 || k == bits.len() + 1 {
                return Ok(vec![(u8::from(k == 0), 1.0, 0)]);
            }
            let (padded, m) = pad_for_threshold(&bits, k).map_err(value_error)?;
            (padded, m, Family::Maj)
        }
    };
    let tree = run_full(&AlgorithmSpec::new(algorithm, m), padded).map_err(value_error)?;
    Ok(tree
        .leaves()
        .into_iter()
        .map(|l| (l.answer as u8, l.probability, l.queries))
        .collect())
}

/// Verify exactness and the query budget of one instance.
#[pyfunction]
#[pyo3(signature = (function, k, n, mode = "full", full_cap = 10, symmetric_cap = 20))]
fn verify(
    function: &str,
    k: usize,
    n: usize,
    mode: &str,
    full_cap: usize,
    symmetric_cap: usize,
) -> PyResult<PyVerificationReport> {
    let family = parse_function(function)?;
    let mode = parse_mode(mode)?;
    let config = VerifyConfig {
        full_cap,
        symmetric_cap,
    };
    let report = core_verify::verify_instance(family, k, n, mode, &config).map_err(value_error)?;
    Ok(PyVerificationReport { report })
}

/// The verified quantum budget against D(f) for every (family, k, n) with
/// n up to `max_n`.
#[pyfunction]
fn table(max_n: usize) -> PyResult<Vec<PyGapRow>> {
    let rows = core_verify::table_rows(max_n, &VerifyConfig::default()).map_err(value_error)?;
    Ok(rows
        .into_iter()
        .map(|r| PyGapRow {
            family: r.family.to_string(),
            k: r.k,
            n: r.n,
            quantum: r.quantum,
            deterministic: r.deterministic,
        })
        .collect())
}

/// Worst orthonormality residual of the two level transformations of an
/// algorithm family ("exact" or "maj") at level m.
#[pyfunction]
fn isometry_residual(algorithm: &str, m: usize) -> PyResult<f64> {
    let family = parse_algorithm(algorithm)?;
    let (u1, u2) = core_verify::isometry_residuals(family, m).map_err(value_error)?;
    Ok(u1.max(u2))
}

/// Exact deterministic decision-tree depth of EXACT_k^n or Th_k^n.
#[pyfunction]
fn deterministic_complexity(function: &str, k: usize, n: usize) -> PyResult<usize> {
    let f = match parse_function(function)? {
        FunctionFamily::Exact => SymmetricFunction::exact(k, n),
        FunctionFamily::Threshold => SymmetricFunction::threshold(k, n),
    };
    Ok(f.deterministic_complexity())
}

/// Check the restriction identity behind the lower bound: EXACT restricted
/// on k ones equals NOT-OR; THRESHOLD restricted on k−1 ones equals OR.
#[pyfunction]
fn lower_bound_witness(function: &str, k: usize, n: usize) -> PyResult<bool> {
    match parse_function(function)? {
        FunctionFamily::Exact => exact_lower_bound_witness(k, n).map_err(value_error),
        FunctionFamily::Threshold => threshold_lower_bound_witness(k, n).map_err(value_error),
    }
}

#[pymodule]
fn exactq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve_exact, m)?)?;
    m.add_function(wrap_pyfunction!(solve_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(full_leaves, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(isometry_residual, m)?)?;
    m.add_function(wrap_pyfunction!(deterministic_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound_witness, m)?)?;
    m.add_class::<PyRunTrace>()?;
    m.add_class::<PyLevelRecord>()?;
    m.add_class::<PyVerificationReport>()?;
    m.add_class::<PyGapRow>()?;
    Ok(())
}
