//! Python bindings for `rigidlab`.
//!
//! Distances, measures and function values are passed as Python `int`,
//! `fractions.Fraction` or `"p/q"` strings, and come back as `"p/q"`
//! strings. Floats are rejected so that no value is silently rounded.

use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rigidlab::cone::{cone_extremality as cone_check, Semimetric};
use rigidlab::constructions::{
    additive_realization, katetov_extend as extend, random_metric as generate, DistanceConstraint,
    RandomModel,
};
use rigidlab::lipschitz::{enumerate_extremal, representability_defect};
use rigidlab::metric::{lemma1_check, CandidateVertexData};
use rigidlab::norms::{dp_norm, hk_norm, kr_norm_dual, kr_norm_primal, NormReport};
use rigidlab::rational::{format_rational, parse_rational};
use rigidlab::rigidity::{dp_coincidence_check, rigidity_defect as defect, wlr_check as wlr};
use rigidlab::{Error, FiniteMetricSpace, LipschitzFunction, Rational, SignedMeasure};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::SizeLimit { .. } => PyOverflowError::new_err(e.to_string()),
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if obj.is_instance_of::<pyo3::types::PyFloat>() {
        return Err(PyValueError::new_err(
            "floats are not exact; pass an int, Fraction or \"p/q\" string",
        ));
    }
    let text = obj.str()?.to_string();
    parse_rational(&text).map_err(to_py)
}

fn rationals(v: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    v.iter().map(rational).collect()
}

fn matrix(rows: &[Vec<Bound<'_, PyAny>>]) -> PyResult<Vec<Vec<Rational>>> {
    rows.iter().map(|r| rationals(r)).collect()
}

fn space(rows: &[Vec<Bound<'_, PyAny>>]) -> PyResult<FiniteMetricSpace> {
    FiniteMetricSpace::from_matrix(matrix(rows)?).map_err(to_py)
}

fn measure(values: &[Bound<'_, PyAny>]) -> PyResult<SignedMeasure> {
    SignedMeasure::from_dense(&rationals(values)?).map_err(to_py)
}

fn text(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn text_matrix(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| text(r)).collect()
}

fn norm_value(r: rigidlab::Result<NormReport>) -> PyResult<String> {
    Ok(format_rational(&r.map_err(to_py)?.value))
}

/// Transport (Kantorovich–Rubinstein) norm of a zero-mass measure.
#[pyfunction]
fn kr_norm(distances: Vec<Vec<Bound<'_, PyAny>>>, mu: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
    norm_value(kr_norm_primal(&space(&distances)?, &measure(&mu)?))
}

#[pyfunction]
fn kr_norm_via_dual(
    distances: Vec<Vec<Bound<'_, PyAny>>>,
    mu: Vec<Bound<'_, PyAny>>,
) -> PyResult<String> {
    norm_value(kr_norm_dual(&space(&distances)?, &measure(&mu)?))
}

#[pyfunction]
fn hk(distances: Vec<Vec<Bound<'_, PyAny>>>, mu: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
    norm_value(hk_norm(&space(&distances)?, &measure(&mu)?))
}

#[pyfunction]
fn dp(distances: Vec<Vec<Bound<'_, PyAny>>>, mu: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
    norm_value(dp_norm(&space(&distances)?, &measure(&mu)?))
}

#[pyfunction]
fn wlr_check(distances: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<bool> {
    Ok(wlr(&space(&distances)?).map_err(to_py)?.verdict)
}

/// Whether the double-point norm equals the transport norm everywhere.
#[pyfunction]
fn dp_rigid(distances: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<bool> {
    Ok(dp_coincidence_check(&space(&distances)?)
        .map_err(to_py)?
        .verdict)
}

/// Extremal Lipschitz functions, normalized to vanish at the first point.
#[pyfunction]
fn extremal_functions(distances: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<Vec<String>>> {
    let fs = enumerate_extremal(&space(&distances)?).map_err(to_py)?;
    Ok(fs.iter().map(|f| text(f.values())).collect())
}

/// Rigidity defect of `subset` (every point when omitted).
#[pyfunction]
#[pyo3(signature = (distances, subset=None))]
fn rigidity_defect(
    distances: Vec<Vec<Bound<'_, PyAny>>>,
    subset: Option<Vec<usize>>,
) -> PyResult<String> {
    let s = space(&distances)?;
    let subset = subset.unwrap_or_else(|| (0..s.len()).collect());
    let r = defect(&s, &subset, &Rational::from_integer(0.into())).map_err(to_py)?;
    Ok(r.defect.as_ref().map(format_rational).unwrap_or_default())
}

/// Additive representability defect of `f` given on `subset`.
#[pyfunction]
#[pyo3(signature = (distances, subset, f, additive=true))]
fn representability(
    distances: Vec<Vec<Bound<'_, PyAny>>>,
    subset: Vec<usize>,
    f: Vec<Bound<'_, PyAny>>,
    additive: bool,
) -> PyResult<String> {
    let g = LipschitzFunction::new(rationals(&f)?);
    let r = representability_defect(&space(&distances)?, &subset, &g, additive).map_err(to_py)?;
    Ok(format_rational(&r.defect))
}

#[pyfunction]
fn lemma1<'py>(
    py: Python<'py>,
    distances: Vec<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyDict>> {
    let data = CandidateVertexData::from_distances(&matrix(&distances)?).map_err(to_py)?;
    let r = lemma1_check(&data).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("is_metric", r.is_metric)?;
    out.set_item("hull_condition", r.hull_condition)?;
    out.set_item("agreement", r.agreement)?;
    if let Some(w) = r.witness {
        out.set_item("vertex", w.vertex)?;
        out.set_item(
            "coefficient_sum",
            w.coefficient_sum.as_ref().map(format_rational),
        )?;
    }
    Ok(out)
}

/// `(extremal, face_dimension)` in the cone of semimetrics.
#[pyfunction]
fn cone_extremality(distances: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<(bool, usize)> {
    let d = Semimetric::new(matrix(&distances)?).map_err(to_py)?;
    let r = cone_check(&d).map_err(to_py)?;
    Ok((r.extremal, r.face_dimension))
}

/// Distance matrix of the space extended by one point at distances `g`.
#[pyfunction]
#[pyo3(signature = (distances, g, constraint="rational"))]
fn katetov_extend(
    distances: Vec<Vec<Bound<'_, PyAny>>>,
    g: Vec<Bound<'_, PyAny>>,
    constraint: &str,
) -> PyResult<Vec<Vec<String>>> {
    let c: DistanceConstraint = constraint.parse().map_err(to_py)?;
    let grown = extend(
        &space(&distances)?,
        &LipschitzFunction::new(rationals(&g)?),
        c,
    )
    .map_err(to_py)?;
    Ok(text_matrix(grown.matrix()))
}

/// Distance matrix after adding a point that realizes `f` on `subset`.
#[pyfunction]
#[pyo3(signature = (distances, subset, f, constraint="rational"))]
fn realize(
    distances: Vec<Vec<Bound<'_, PyAny>>>,
    subset: Vec<usize>,
    f: Vec<Bound<'_, PyAny>>,
    constraint: &str,
) -> PyResult<Vec<Vec<String>>> {
    let c: DistanceConstraint = constraint.parse().map_err(to_py)?;
    let r = additive_realization(
        &space(&distances)?,
        &subset,
        &LipschitzFunction::new(rationals(&f)?),
        c,
    )
    .map_err(to_py)?;
    Ok(text_matrix(r.space.matrix()))
}

#[pyfunction]
#[pyo3(signature = (n, model="shortest-path-completion", seed=0))]
fn random_metric(n: usize, model: &str, seed: u64) -> PyResult<Vec<Vec<String>>> {
    let m: RandomModel = model.parse().map_err(to_py)?;
    Ok(text_matrix(generate(n, m, seed).map_err(to_py)?.matrix()))
}

/// Runs the command-line front end in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = rigidlab::cli::run(std::iter::once("rigidlab".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn pyrigidlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(kr_norm, m)?)?;
    m.add_function(wrap_pyfunction!(kr_norm_via_dual, m)?)?;
    m.add_function(wrap_pyfunction!(hk, m)?)?;
    m.add_function(wrap_pyfunction!(dp, m)?)?;
    m.add_function(wrap_pyfunction!(wlr_check, m)?)?;
    m.add_function(wrap_pyfunction!(dp_rigid, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_functions, m)?)?;
    m.add_function(wrap_pyfunction!(rigidity_defect, m)?)?;
    m.add_function(wrap_pyfunction!(representability, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1, m)?)?;
    m.add_function(wrap_pyfunction!(cone_extremality, m)?)?;
    m.add_function(wrap_pyfunction!(katetov_extend, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(random_metric, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
