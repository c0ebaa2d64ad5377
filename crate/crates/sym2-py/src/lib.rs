//! Python bindings: report text identical to the `sym2moment` binary, plus a few direct evaluations.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use rug::Complex;
use sym2_moment::asymptotics::MainTerms;
use sym2_moment::harness::{cmd_moment, cmd_verify, render_checks, render_moment, Format, RunConfig, Suite, VERSION};
use sym2_moment::modforms::{self, cache_dir_from_env};
use sym2_moment::mp::sci;
use sym2_moment::specfun::{self, DirichletCharacter};
use sym2_moment::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_format(s: &str) -> PyResult<Format> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(PyValueError::new_err(format!("unknown format {s:?}; expected csv or json"))),
    }
}

fn parse_suite(s: &str) -> PyResult<Suite> {
    [Suite::Lemmas, Suite::Petersson, Suite::Contour, Suite::Specfun, Suite::Critical]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| PyValueError::new_err(format!("unknown suite {s:?}")))
}

fn precision_config(digits: u32) -> PyResult<RunConfig> {
    let config = RunConfig { digits, ..RunConfig::default() };
    config.validate().map_err(py_err)?;
    Ok(config)
}

/// Moment table for even k in [k_min, k_max], as CSV or JSON text. Failed weights become error rows.
#[pyfunction]
#[pyo3(signature = (k_min = 12, k_max = 60, digits = 50, sigma = 1.0, format = "csv", cache_dir = None))]
fn moment(py: Python<'_>, k_min: u32, k_max: u32, digits: u32, sigma: f64, format: &str, cache_dir: Option<PathBuf>) -> PyResult<String> {
    let config = RunConfig {
        k_min,
        k_max,
        digits,
        sigma,
        format: parse_format(format)?,
        cache_dir: cache_dir.or_else(cache_dir_from_env),
        ..RunConfig::default()
    };
    py.detach(|| {
        let rows = cmd_moment(&config)?;
        render_moment(&rows, &config)
    })
    .map_err(py_err)
}

/// Runs a verification suite and returns the check report text.
#[pyfunction]
#[pyo3(signature = (suite, digits = 50, format = "csv"))]
fn verify(py: Python<'_>, suite: &str, digits: u32, format: &str) -> PyResult<String> {
    let suite = parse_suite(suite)?;
    let config = RunConfig { digits, format: parse_format(format)?, suite: Some(suite), ..RunConfig::default() };
    py.detach(|| {
        let checks = cmd_verify(&config, suite)?;
        render_checks(&checks, &config)
    })
    .map_err(py_err)
}

/// M_1, M_-4, M_-3 and their sum at weight k, in scientific notation.
#[pyfunction]
#[pyo3(signature = (k, digits = 50))]
fn main_terms(py: Python<'_>, k: u32, digits: u32) -> PyResult<BTreeMap<&'static str, String>> {
    let config = RunConfig { k_min: k, k_max: k, digits, ..RunConfig::default() };
    config.validate().map_err(py_err)?;
    let policy = config.policy().map_err(py_err)?;
    let terms = py.detach(|| MainTerms::compute(k, &policy)).map_err(py_err)?;
    let d = digits as usize;
    Ok(BTreeMap::from([
        ("m1", sci(&terms.m1, d)),
        ("m_minus4", sci(&terms.m_minus4, d)),
        ("m_minus3", sci(&terms.m_minus3, d)),
        ("sum", sci(&terms.sum(), d)),
    ]))
}

/// L(s, χ_d) for a fundamental discriminant d, with s real. Returns (re, im) as strings.
#[pyfunction]
#[pyo3(signature = (d, s = 0.5, digits = 50))]
fn dirichlet_l(d: i64, s: f64, digits: u32) -> PyResult<(String, String)> {
    let policy = precision_config(digits)?.policy().map_err(py_err)?;
    let chi = DirichletCharacter::from_kronecker(d).map_err(py_err)?;
    let s = Complex::with_val(policy.bits(), (s, 0.0));
    let v = specfun::dirichlet_l(&s, &chi, &policy).map_err(py_err)?;
    let n = digits as usize;
    Ok((sci(v.real(), n), sci(v.imag(), n)))
}

#[pyfunction]
fn cusp_dimension(k: u32) -> u32 {
    modforms::cusp_dimension(k)
}

#[pymodule]
fn sym2py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", VERSION)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(main_terms, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_l, m)?)?;
    m.add_function(wrap_pyfunction!(cusp_dimension, m)?)?;
    Ok(())
}
