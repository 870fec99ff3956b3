//! Python bindings for the curvclass analysis library.
//!
//! Every function taking a `manifest` argument accepts a path to a manifest
//! file, the name of a built-in corpus entry, or the manifest text itself.

use std::path::Path;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use curvclass::corpus::{corpus_manifest, CORPUS_NAMES};
use curvclass::curvature::DerivedKind;
use curvclass::manifest::{parse_point, Manifest};
use curvclass::report::{self, AnalyzeOptions, Selection, TensorName};
use curvclass::{numeric, Error};

create_exception!(pycurvclass, CurvclassError, PyException);
create_exception!(pycurvclass, DegenerateError, CurvclassError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::DegenerateMetric(_) | Error::Pole(_) | Error::DivisionByZero => DegenerateError::new_err(e.to_string()),
        _ => CurvclassError::new_err(e.to_string()),
    }
}

fn load(manifest: &str) -> PyResult<Manifest> {
    if CORPUS_NAMES.contains(&manifest) {
        corpus_manifest(manifest)
    } else if !manifest.contains('\n') && Path::new(manifest).is_file() {
        Manifest::load(manifest)
    } else {
        Manifest::parse(manifest, "<string>")
    }
    .map_err(to_py)
}

fn target(tensor: &str) -> PyResult<Option<DerivedKind>> {
    Ok(match tensor.to_ascii_lowercase().as_str() {
        "r" => None,
        "c" => Some(DerivedKind::Conformal),
        "p" => Some(DerivedKind::Projective),
        "w" => Some(DerivedKind::Concircular),
        "k" => Some(DerivedKind::Conharmonic),
        other => return Err(CurvclassError::new_err(format!("unknown target tensor '{other}'"))),
    })
}

/// Names of the built-in example manifests.
#[pyfunction]
fn corpus_names() -> Vec<&'static str> {
    CORPUS_NAMES.to_vec()
}

/// Manifest text of a built-in example.
#[pyfunction]
fn corpus_show(name: &str) -> PyResult<String> {
    Ok(corpus_manifest(name).map_err(to_py)?.to_text())
}

/// Full analysis report as a JSON string.
#[pyfunction]
#[pyo3(signature = (manifest, structures=None, tensor="r"))]
fn analyze(py: Python<'_>, manifest: &str, structures: Option<&str>, tensor: &str) -> PyResult<String> {
    let m = load(manifest)?;
    let selection = match structures {
        Some(list) => Selection::parse_list(list).map_err(to_py)?,
        None => Selection::all(),
    };
    let opts = AnalyzeOptions {
        selection,
        target: target(tensor)?,
        ..AnalyzeOptions::default()
    };
    py.detach(|| report::analyze(&m, &opts))
        .map(|doc| doc.to_json())
        .map_err(to_py)
}

/// Verification battery as `(name, status, detail)` triples.
#[pyfunction]
fn verify(py: Python<'_>, manifest: &str) -> PyResult<Vec<(String, String, Option<String>)>> {
    let m = load(manifest)?;
    let checks = py.detach(|| report::verify_suite(&m, false)).map_err(to_py)?;
    Ok(checks
        .into_iter()
        .map(|c| (c.name, c.status.to_string(), c.detail))
        .collect())
}

/// Exact component values at a point, keyed by one-based index labels.
/// Values are canonical rational strings; vanishing components are included.
#[pyfunction]
fn eval_tensor(manifest: &str, tensor: &str, point: &str) -> PyResult<Vec<(String, String)>> {
    let m = load(manifest)?;
    let name: TensorName = tensor.parse().map_err(to_py)?;
    let point = parse_point(point).map_err(to_py)?;
    let b = report::build_bundle(&m, false).map_err(to_py)?;
    let values = report::eval_point(&b, name, &point).map_err(to_py)?;
    Ok(values.into_iter().map(|(k, v)| (k, v.to_string())).collect())
}

/// Canonical printing of an expression over the given coordinate names.
#[pyfunction]
fn canonical(expression: &str, coordinates: Vec<String>) -> PyResult<String> {
    let f = curvclass::parse_expression(expression, &coordinates).map_err(to_py)?;
    Ok(f.format_with(&coordinates))
}

/// Finite-difference cross-check; returns `(passed, max_relative_error, worst)`.
#[pyfunction]
#[pyo3(signature = (manifest, points=None, step=numeric::DEFAULT_STEP, tol=numeric::DEFAULT_TOLERANCE, seed=0))]
fn crosscheck(
    py: Python<'_>,
    manifest: &str,
    points: Option<usize>,
    step: f64,
    tol: f64,
    seed: u64,
) -> PyResult<(bool, f64, Option<String>)> {
    let m = load(manifest)?;
    let summary = py
        .detach(|| {
            let b = report::build_bundle(&m, false)?;
            let pts = match points {
                Some(count) => numeric::random_points(&b, &m.positive_indices(), count, seed)?,
                None => m.sample_points()?,
            };
            numeric::numeric_crosscheck(&b, &pts, step, tol)
        })
        .map_err(to_py)?;
    Ok((summary.passed, summary.max_relative_error, summary.worst))
}

#[pymodule]
fn pycurvclass(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CurvclassError", m.py().get_type::<CurvclassError>())?;
    m.add("DegenerateError", m.py().get_type::<DegenerateError>())?;
    m.add_function(wrap_pyfunction!(corpus_names, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_show, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(eval_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(crosscheck, m)?)?;
    Ok(())
}
