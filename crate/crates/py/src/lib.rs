//! Python module `dynperc`: a thin layer over the Rust crate.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dynperc::anatomy;
use dynperc::estimators::{self, EnvStart, MixingStart, MixingTarget, WalkerStart};
use dynperc::graph::sample_er;
use dynperc::oracle::{stationarity_residual as residual_report, GeneratorSpec};
use dynperc::rng::{rng_for, Stream};
use dynperc::structure::{analyze, GoodGraphConstants};
use dynperc::Params;

fn py_err(e: dynperc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
fn solve_theta(lambda: f64) -> PyResult<f64> {
    anatomy::solve_theta(lambda).map_err(py_err)
}

#[pyfunction]
fn giant_fraction(lambda: f64) -> f64 {
    anatomy::giant_fraction(lambda)
}

#[pyfunction]
#[pyo3(signature = (n, mu, t, depth=2))]
fn isolation_tail_bound(n: usize, mu: f64, t: f64, depth: usize) -> PyResult<f64> {
    estimators::isolation_tail_bound(n, mu, t, depth).map_err(py_err)
}

/// Exact stationarity residual of the generator (small `n` only).
#[pyfunction]
fn stationarity_residual(n: usize, lambda: f64, mu: f64) -> PyResult<f64> {
    let params = Params::new(n, lambda, mu).map_err(py_err)?;
    let spec = GeneratorSpec::new(&params).map_err(py_err)?;
    Ok(residual_report(&spec).residual)
}

/// Walk TV-to-uniform curve from a stationary environment, as
/// `[(time, value, stderr), ...]`.
#[pyfunction]
#[pyo3(signature = (n, lambda, mu, times, replicas=1000, seed=0, start_vertex=None))]
fn mixing_curve(
    py: Python<'_>,
    n: usize,
    lambda: f64,
    mu: f64,
    times: Vec<f64>,
    replicas: usize,
    seed: u64,
    start_vertex: Option<usize>,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let params = Params::new(n, lambda, mu).map_err(py_err)?;
    let start = MixingStart {
        walker: start_vertex.map_or(WalkerStart::Uniform, WalkerStart::Vertex),
        env: EnvStart::Stationary,
    };
    let curve = py
        .detach(|| estimators::mixing_curve(&params, MixingTarget::Walk, start, &times, replicas, seed))
        .map_err(py_err)?;
    Ok(curve.iter().map(|p| (p.time, p.estimate.value, p.estimate.stderr)).collect())
}

/// Headline numbers of the structure report for one `G(n, lambda/n)` draw.
#[pyfunction]
#[pyo3(signature = (n, lambda, seed=0))]
fn structure<'py>(py: Python<'py>, n: usize, lambda: f64, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let params = Params::new(n, lambda, 0.0).map_err(py_err)?;
    let g = sample_er(n, params.p(), &mut rng_for(seed, 0, Stream::Environment));
    let report = analyze(&g, &GoodGraphConstants::default(), false).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("edge_count", report.edge_count)?;
    d.set_item("giant_size", report.giant_size)?;
    d.set_item("core_size", report.core_size)?;
    d.set_item("kernel_size", report.kernel_size)?;
    d.set_item("deg1_in_giant", report.deg1_in_giant)?;
    d.set_item("gamma", report.gamma.map(|g| g.gamma))?;
    d.set_item("is_good", report.is_good)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "dynperc")]
fn dynperc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve_theta, m)?)?;
    m.add_function(wrap_pyfunction!(giant_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(isolation_tail_bound, m)?)?;
    m.add_function(wrap_pyfunction!(stationarity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(mixing_curve, m)?)?;
    m.add_function(wrap_pyfunction!(structure, m)?)?;
    Ok(())
}
