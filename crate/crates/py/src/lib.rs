//! Python module `pycoxcat`: the CLI commands plus a few direct calls.
//! Models and complexes are passed as JSON text in the same format the CLI reads.

use coxcat::cohomology::line_bundle_cohomology;
use coxcat::exactlin::Dim;
use coxcat::gkz::secondary_fan;
use coxcat::io::parse_model;
use coxcat::theta::{enumerate_theta, Variant};
use coxcat::{cli, Error, ToricModel};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(pycoxcat, CoxcatError, PyException, "Base class of coxcat errors.");
create_exception!(pycoxcat, SchemaError, CoxcatError, "Malformed input (CLI exit code 2).");
create_exception!(pycoxcat, PreconditionError, CoxcatError, "Input outside the supported range (exit code 3).");
create_exception!(pycoxcat, InvariantError, CoxcatError, "A certificate failed to verify (exit code 4).");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Schema(m) => SchemaError::new_err(m),
        Error::Precondition(m) => PreconditionError::new_err(m),
        Error::Invariant(m) => InvariantError::new_err(m),
    }
}

fn model(text: &str) -> PyResult<ToricModel> {
    parse_model(text).map_err(py_err)
}

#[pyfunction]
pub fn version() -> &'static str {
    coxcat::report::VERSION
}

/// Runs a CLI command, e.g. `run(["theta", "--input", "h3.json"])`.
/// Returns `(exit_code, summary_lines, document)`; the document is the JSON report (SVG for `plot`).
#[pyfunction]
pub fn run(args: Vec<String>) -> PyResult<(i32, Vec<String>, String)> {
    let argv = std::iter::once("coxcat".to_string()).chain(args);
    let parsed = cli::parse(argv).map_err(py_err)?;
    let out = cli::execute(&parsed).map_err(py_err)?;
    Ok((out.exit_code, out.summary, out.document))
}

/// A class with its witness as `Fraction` objects.
pub type ThetaPair<'py> = (Vec<BigInt>, Vec<Bound<'py, PyAny>>);

/// Θ as a list of `(class, witness)`; witness coordinates are `fractions.Fraction`.
#[pyfunction]
pub fn theta<'py>(py: Python<'py>, model_json: &str) -> PyResult<Vec<ThetaPair<'py>>> {
    let m = model(model_json)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    enumerate_theta(&m.betas(), &m.cl, Variant::Standard)
        .into_iter()
        .map(|e| {
            let w = e
                .witness
                .iter()
                .map(|q| fraction.call1((q.numer().clone(), q.denom().clone())))
                .collect::<PyResult<Vec<_>>>()?;
            Ok((e.class, w))
        })
        .collect()
}

/// Number of maximal cones of the secondary fan.
#[pyfunction]
pub fn chambers(model_json: &str) -> PyResult<usize> {
    let m = model(model_json)?;
    Ok(secondary_fan(&m).map_err(py_err)?.chambers.len())
}

/// h^i of the line bundle of a torus-invariant divisor, `None` where infinite.
#[pyfunction]
#[pyo3(signature = (model_json, divisor, characteristic = 0))]
pub fn cohomology(model_json: &str, divisor: Vec<BigInt>, characteristic: u64) -> PyResult<Vec<Option<usize>>> {
    let m = model(model_json)?;
    let sf = m.stacky().ok_or_else(|| PreconditionError::new_err("cohomology needs a fan-mode model"))?;
    let table = line_bundle_cohomology(&sf, &divisor, characteristic).map_err(py_err)?;
    Ok(table
        .dims
        .into_iter()
        .map(|d| match d {
            Dim::Finite(n) => Some(n),
            Dim::Infinite => None,
        })
        .collect())
}

#[pymodule]
fn pycoxcat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("CoxcatError", py.get_type::<CoxcatError>())?;
    m.add("SchemaError", py.get_type::<SchemaError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("InvariantError", py.get_type::<InvariantError>())?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(chambers, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    Ok(())
}
