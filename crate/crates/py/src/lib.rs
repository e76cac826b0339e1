//! Python bindings. Every function takes and returns plain Python data
//! (lists, dicts, strings) mirroring the CLI's JSON documents.
//!
//! The `*_json` functions are the same operations on `serde_json` values and
//! carry all the logic; the Python wrappers only convert.

use pyo3::exceptions::{PyNotImplementedError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

use rado_core::algebra::json::scalar_from_json;
use rado_core::algebra::{Matrix, RingDescriptor};
use rado_core::colouring::{refute, Colouring, RefutationCertificate};
use rado_core::nonhom::{compute_h, pr_nonhom, FiniteAlgebra, DEFAULT_H_BUDGET};
use rado_core::regularity::{columns_condition, decide, Verdict};
use rado_core::search::{finite_witness, search_report, SearchWindow, DEFAULT_BUDGET};
use rado_core::{Error, Result};

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

/// A `{"ring", "rows"}` object, or bare rows over `ring`.
pub fn matrix_from(matrix: &Value, ring: &str) -> Result<Matrix> {
    match matrix {
        Value::Object(_) => Matrix::from_json(matrix, "/matrix"),
        _ => Matrix::parse_rows(ring.parse()?, matrix, "/matrix"),
    }
}

pub fn decide_json(matrix: &Value, ring: &str) -> Result<Value> {
    let a = matrix_from(matrix, ring)?;
    Ok(decide(&a)?.to_json(&a))
}

pub fn columns_condition_json(matrix: &Value, ring: &str) -> Result<Value> {
    let a = matrix_from(matrix, ring)?;
    Ok(columns_condition(&a)?.map_or(Value::Null, |w| to_value(&w)))
}

pub fn refute_json(matrix: &Value, ring: &str) -> Result<Value> {
    let a = matrix_from(matrix, ring)?;
    Ok(refute(&a)?.map_or(Value::Null, |c| to_value(&c)))
}

pub fn search_json(matrix: &Value, ring: &str, colouring: &Value, window: &Value, budget: Option<u64>) -> Result<Value> {
    let a = matrix_from(matrix, ring)?;
    let chi = Colouring::from_json(colouring, "/colouring")?;
    let w: SearchWindow =
        serde_json::from_value(window.clone()).map_err(|e| Error::invalid("/window", e.to_string()))?;
    Ok(to_value(&search_report(&a, &chi, &w, budget.unwrap_or(DEFAULT_BUDGET))?))
}

pub fn witness_json(matrix: &Value, ring: &str, colours: u32, max_size: u64, budget: Option<u64>) -> Result<Value> {
    let a = matrix_from(matrix, ring)?;
    let schedule: Vec<SearchWindow> = (1..=max_size).map(|n| SearchWindow::Positive { n }).collect();
    Ok(to_value(&finite_witness(&a, colours, &schedule, budget.unwrap_or(DEFAULT_BUDGET))?))
}

pub fn nonhom_json(matrix: &Value, b: &Value, ring: &str, module: Option<&str>) -> Result<Value> {
    let a = matrix_from(matrix, ring)?;
    let m: RingDescriptor = match module {
        Some(m) => m.parse()?,
        None => a.ring().clone(),
    };
    let entries = b.as_array().ok_or_else(|| Error::invalid("/b", "expected an array"))?;
    let b = entries
        .iter()
        .enumerate()
        .map(|(i, x)| scalar_from_json(&m, x, &format!("/b/{i}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(to_value(&pr_nonhom(&a, &b, &m)?))
}

pub fn hmodule_json(fixture: Option<&str>, p: u64, algebra: Option<&Value>) -> Result<Value> {
    let alg = match (algebra, fixture) {
        (Some(v), _) => FiniteAlgebra::from_json(v)?,
        (None, name) => FiniteAlgebra::fixture(name.unwrap_or("nonprincipal-h"), p)?,
    };
    Ok(to_value(&compute_h(&alg, DEFAULT_H_BUDGET)?))
}

/// `{"sound": bool, ...}` for a verdict or refutation certificate.
pub fn verify_json(document: &Value) -> Result<Value> {
    if document.get("evidence").is_some() {
        let (a, v) = Verdict::from_json(document)?;
        let result = v.check(&a);
        return Ok(json!({
            "kind": "verdict",
            "sound": result.is_ok(),
            "failures": result.err().into_iter().collect::<Vec<_>>(),
        }));
    }
    let cert: RefutationCertificate = serde_json::from_value(document.clone())
        .map_err(|e| Error::invalid("/document", format!("not a certificate: {e}")))?;
    let report = cert.replay();
    let mut doc = to_value(&report);
    doc["kind"] = json!("certificate");
    doc["sound"] = json!(report.sound());
    Ok(doc)
}

fn py_err(e: Error) -> PyErr {
    if e.is_unsupported() {
        PyNotImplementedError::new_err(e.to_string())
    } else if matches!(e, Error::InvalidInput { .. }) {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn from_py(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = py.import_bound("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_py(py: Python<'_>, v: Result<Value>) -> PyResult<PyObject> {
    let text = v.map_err(py_err)?.to_string();
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

/// Decide partition regularity of `A x = 0`; returns a verdict dict.
#[pyfunction]
#[pyo3(name = "decide", signature = (matrix, ring = "Z"))]
fn py_decide(py: Python<'_>, matrix: &Bound<'_, PyAny>, ring: &str) -> PyResult<PyObject> {
    let m = from_py(py, matrix)?;
    to_py(py, decide_json(&m, ring))
}

/// Columns-condition witness over a domain, or `None`.
#[pyfunction]
#[pyo3(name = "columns_condition", signature = (matrix, ring = "Z"))]
fn py_columns_condition(py: Python<'_>, matrix: &Bound<'_, PyAny>, ring: &str) -> PyResult<PyObject> {
    let m = from_py(py, matrix)?;
    to_py(py, columns_condition_json(&m, ring))
}

/// Refutation certificate for an integer or rational matrix, or `None`.
#[pyfunction]
#[pyo3(name = "refute", signature = (matrix, ring = "Z"))]
fn py_refute(py: Python<'_>, matrix: &Bound<'_, PyAny>, ring: &str) -> PyResult<PyObject> {
    let m = from_py(py, matrix)?;
    to_py(py, refute_json(&m, ring))
}

#[pyfunction]
#[pyo3(name = "search", signature = (matrix, colouring, window, ring = "Z", budget = None))]
fn py_search(
    py: Python<'_>,
    matrix: &Bound<'_, PyAny>,
    colouring: &Bound<'_, PyAny>,
    window: &Bound<'_, PyAny>,
    ring: &str,
    budget: Option<u64>,
) -> PyResult<PyObject> {
    let (m, c, w) = (from_py(py, matrix)?, from_py(py, colouring)?, from_py(py, window)?);
    py.allow_threads(|| search_json(&m, ring, &c, &w, budget))
        .map_or_else(|e| Err(py_err(e)), |v| to_py(py, Ok(v)))
}

#[pyfunction]
#[pyo3(name = "witness", signature = (matrix, colours = 2, max_size = 25, ring = "Z", budget = None))]
fn py_witness(
    py: Python<'_>,
    matrix: &Bound<'_, PyAny>,
    colours: u32,
    max_size: u64,
    ring: &str,
    budget: Option<u64>,
) -> PyResult<PyObject> {
    let m = from_py(py, matrix)?;
    py.allow_threads(|| witness_json(&m, ring, colours, max_size, budget))
        .map_or_else(|e| Err(py_err(e)), |v| to_py(py, Ok(v)))
}

#[pyfunction]
#[pyo3(name = "nonhom", signature = (matrix, b, ring = "Z", module = None))]
fn py_nonhom(
    py: Python<'_>,
    matrix: &Bound<'_, PyAny>,
    b: &Bound<'_, PyAny>,
    ring: &str,
    module: Option<&str>,
) -> PyResult<PyObject> {
    let (m, b) = (from_py(py, matrix)?, from_py(py, b)?);
    to_py(py, nonhom_json(&m, &b, ring, module))
}

#[pyfunction]
#[pyo3(name = "hmodule", signature = (fixture = None, p = 2, algebra = None))]
fn py_hmodule(py: Python<'_>, fixture: Option<&str>, p: u64, algebra: Option<&Bound<'_, PyAny>>) -> PyResult<PyObject> {
    let alg = algebra.map(|a| from_py(py, a)).transpose()?;
    to_py(py, hmodule_json(fixture, p, alg.as_ref()))
}

#[pyfunction]
#[pyo3(name = "verify")]
fn py_verify(py: Python<'_>, document: &Bound<'_, PyAny>) -> PyResult<PyObject> {
    let d = from_py(py, document)?;
    to_py(py, verify_json(&d))
}

#[pymodule]
fn rado(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(py_decide, m)?)?;
    m.add_function(wrap_pyfunction!(py_columns_condition, m)?)?;
    m.add_function(wrap_pyfunction!(py_refute, m)?)?;
    m.add_function(wrap_pyfunction!(py_search, m)?)?;
    m.add_function(wrap_pyfunction!(py_witness, m)?)?;
    m.add_function(wrap_pyfunction!(py_nonhom, m)?)?;
    m.add_function(wrap_pyfunction!(py_hmodule, m)?)?;
    m.add_function(wrap_pyfunction!(py_verify, m)?)?;
    Ok(())
}
