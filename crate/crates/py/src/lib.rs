//! Python bindings. Rationals cross the boundary as `"p/q"` strings and
//! structured results as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use seminorm_core::axioms;
use seminorm_core::demo::{self, DemoId};
use seminorm_core::grammar;
use seminorm_core::lp::{self, LpOutcome, LpProblem};
use seminorm_core::norms::PolyhedralNorm;
use seminorm_core::quotient::{self, Subspace};
use seminorm_core::{Format, FunctionalSpec};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spec(text: &str) -> PyResult<FunctionalSpec> {
    grammar::parse_spec(text).map_err(|e| value_error(format!("{e}\n{}", e.pointer(text))))
}

fn json(v: &serde_json::Value) -> String {
    serde_json::to_string(v).expect("json values serialize")
}

/// Canonical text of a spec.
#[pyfunction]
fn parse_spec(text: &str) -> PyResult<String> {
    Ok(spec(text)?.to_string())
}

/// Exact value of `spec` at the sequence `x`, e.g. `evaluate("l1", "e1-1/2*e3")`.
#[pyfunction]
fn evaluate(spec_text: &str, x: &str) -> PyResult<String> {
    let s = spec(spec_text)?;
    let x = grammar::parse_seq(x).map_err(value_error)?;
    Ok(s.evaluate(&x).to_string())
}

/// Distance from `point` to the span of `basis` under l1, linf or weighted l1.
#[pyfunction]
fn distance(norm: &str, basis: &str, point: &str) -> PyResult<String> {
    let ambient = PolyhedralNorm::try_from(&spec(norm)?).map_err(value_error)?;
    let v =
        Subspace::new(grammar::parse_seq_list(basis).map_err(value_error)?).map_err(value_error)?;
    let u = grammar::parse_seq(point).map_err(value_error)?;
    let d = quotient::polyhedral_distance(&ambient, &v, &u);
    Ok(json(&serde_json::json!({
        "value": d.value.to_string(),
        "minimizer": d.minimizer,
        "coefficients": d.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "certificate_verifies": d.certificate_verifies(),
    })))
}

#[pyfunction]
#[pyo3(signature = (spec_text, samples=1000, seed=0))]
fn verify_axioms(spec_text: &str, samples: usize, seed: u64) -> PyResult<String> {
    let r = axioms::verify_axioms(&spec(spec_text)?, samples, seed);
    let mut doc = serde_json::to_value(&r).expect("report serializes");
    doc["passed"] = r.passed().into();
    Ok(json(&doc))
}

/// Report of a named scenario rendered as `json`, `csv` or `table`.
#[pyfunction]
#[pyo3(signature = (id, n_max=demo::DEFAULT_N_MAX, format="json"))]
fn run_demo(id: &str, n_max: usize, format: &str) -> PyResult<String> {
    let id: DemoId = id.parse().map_err(value_error)?;
    let format: Format = format.parse().map_err(value_error)?;
    let bundle = demo::run_demo(id, n_max).map_err(value_error)?;
    Ok(bundle.render(format))
}

/// Solves an LP given as JSON and returns the outcome with its certificate check.
#[pyfunction]
fn solve_lp(problem: &str) -> PyResult<String> {
    let p: LpProblem = serde_json::from_str(problem).map_err(value_error)?;
    let outcome = lp::solve(&p).map_err(value_error)?;
    let verifies = match outcome {
        LpOutcome::Optimal { .. } => {
            Some(lp::verify_certificate(&p, &outcome).map_err(value_error)?)
        }
        _ => None,
    };
    Ok(json(&serde_json::json!({
        "outcome": outcome,
        "certificate_verifies": verifies,
    })))
}

#[pymodule]
fn seminorm_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(parse_spec, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(verify_axioms, m)?)?;
    m.add_function(wrap_pyfunction!(run_demo, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lp, m)?)?;
    Ok(())
}
