//! Python bindings.
//!
//! Thin wrappers: states are `FockVector` objects, phase-space maps come
//! back as nested lists indexed `[ix][ip]`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use photon_adder::added_coherent::{pacs_coefficients, pacs_probability, pacs_quadrature, PacsParams};
use photon_adder::added_squeezed::{
    pasv_coefficients, pasv_husimi, pasv_probability, pasv_probability_exact, pasv_quadrature,
    pasv_wigner, PasvParams,
};
use photon_adder::mixtures::{mixed_probability as mixed_prob, BinomialParams, WeightMode};
use photon_adder::phasespace::{PhaseSpaceGrid, WignerOptions};
use photon_adder::{conditional, fock, io, phasespace, verify};

fn to_py(e: photon_adder::Error) -> PyErr {
    match e {
        photon_adder::Error::InvalidParameter(m) | photon_adder::Error::Format(m) => PyValueError::new_err(m),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Truncated pure state in the Fock basis.
#[pyclass(name = "FockVector", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFockVector(photon_adder::FockVector);

#[pymethods]
impl PyFockVector {
    #[new]
    fn new(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        fock::custom_state(&amplitudes).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::state_from_json(text).map(Self).map_err(to_py)
    }

    fn to_json(&self) -> String {
        io::state_to_json(&self.0)
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amps().to_vec()
    }

    #[getter]
    fn cutoff(&self) -> usize {
        self.0.cutoff()
    }

    /// Upper bound on the probability mass dropped by truncation.
    #[getter]
    fn tail_bound(&self) -> f64 {
        self.0.tail_bound()
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn photon_distribution(&self) -> Vec<f64> {
        fock::photon_number_distribution(&self.0)
    }

    fn mean_photon_number(&self) -> f64 {
        fock::mean_photon_number(&self.0)
    }

    fn fidelity(&self, other: &PyFockVector) -> f64 {
        fock::fidelity(&self.0, &other.0)
    }

    fn __len__(&self) -> usize {
        self.0.amps().len()
    }

    fn __repr__(&self) -> String {
        format!("FockVector(cutoff={}, tail_bound={:e})", self.0.cutoff(), self.0.tail_bound())
    }
}

/// Lossless beam splitter with `|T|² = t2` and phases `φ_T`, `φ_R`.
#[pyclass(name = "BeamSplitter", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBeamSplitter(photon_adder::BeamSplitter);

#[pymethods]
impl PyBeamSplitter {
    #[new]
    #[pyo3(signature = (t2, phi_t = 0.0, phi_r = 0.0))]
    fn new(t2: f64, phi_t: f64, phi_r: f64) -> PyResult<Self> {
        photon_adder::BeamSplitter::from_transmissivity(t2, phi_t, phi_r)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn t(&self) -> Complex64 {
        self.0.t()
    }

    #[getter]
    fn r(&self) -> Complex64 {
        self.0.r()
    }

    #[getter]
    fn t2(&self) -> f64 {
        self.0.t2()
    }

    #[getter]
    fn r2(&self) -> f64 {
        self.0.r2()
    }

    fn __repr__(&self) -> String {
        format!("BeamSplitter(t2={}, phi_t={}, phi_r={})", self.0.t2(), self.0.phi_t, self.0.phi_r)
    }
}

#[pyfunction]
#[pyo3(signature = (beta, eps = fock::DEFAULT_TAIL))]
fn coherent_state(beta: Complex64, eps: f64) -> PyResult<PyFockVector> {
    fock::coherent_state(beta, eps).map(PyFockVector).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (kappa, eps = fock::DEFAULT_TAIL))]
fn squeezed_vacuum(kappa: Complex64, eps: f64) -> PyResult<PyFockVector> {
    fock::squeezed_vacuum(kappa, eps).map(PyFockVector).map_err(to_py)
}

#[pyfunction]
fn fock_state(n: usize) -> PyResult<PyFockVector> {
    fock::fock_state(n).map(PyFockVector).map_err(to_py)
}

/// Conditional signal state and success probability when the ancilla starts
/// in `|n0⟩` and its output port registers no photons.
#[pyfunction]
fn conditional_zero_click(state: &PyFockVector, n0: usize, bs: &PyBeamSplitter) -> PyResult<(PyFockVector, f64)> {
    let r = conditional::conditional_zero_click(&state.0, n0, &bs.0).map_err(to_py)?;
    Ok((PyFockVector(r.state), r.probability))
}

/// Photon-added coherent state with output amplitude `beta_prime`.
#[pyfunction]
#[pyo3(signature = (beta_prime, n0, eps = fock::DEFAULT_TAIL))]
fn added_coherent_state(beta_prime: Complex64, n0: usize, eps: f64) -> PyResult<PyFockVector> {
    pacs_coefficients(&PacsParams::new(beta_prime, n0), eps)
        .map(PyFockVector)
        .map_err(to_py)
}

#[pyfunction]
fn added_coherent_probability(beta: Complex64, bs: &PyBeamSplitter, n0: usize) -> f64 {
    pacs_probability(beta, &bs.0, n0)
}

#[pyfunction]
fn added_coherent_quadrature(xs: Vec<f64>, phi: f64, beta_prime: Complex64, n0: usize) -> Vec<f64> {
    let p = PacsParams::new(beta_prime, n0);
    xs.iter().map(|&x| pacs_quadrature(x, phi, &p)).collect()
}

fn pasv(kappa_prime: f64, n0: usize) -> PyResult<PasvParams> {
    PasvParams::new(kappa_prime, n0).map_err(to_py)
}

/// Photon-added squeezed vacuum with real output parameter `kappa_prime`.
#[pyfunction]
#[pyo3(signature = (kappa_prime, n0, eps = fock::DEFAULT_TAIL))]
fn added_squeezed_state(kappa_prime: f64, n0: usize, eps: f64) -> PyResult<PyFockVector> {
    pasv_coefficients(&pasv(kappa_prime, n0)?, eps)
        .map(PyFockVector)
        .map_err(to_py)
}

/// Success probability for a squeezed input; the closed form by default,
/// the exact sum with `exact=True`.
#[pyfunction]
#[pyo3(signature = (kappa, bs, n0, exact = false))]
fn added_squeezed_probability(kappa: f64, bs: &PyBeamSplitter, n0: usize, exact: bool) -> PyResult<f64> {
    let r = if exact {
        pasv_probability_exact(kappa, &bs.0, n0)
    } else {
        pasv_probability(kappa, &bs.0, n0)
    };
    r.map_err(to_py)
}

#[pyfunction]
fn added_squeezed_quadrature(xs: Vec<f64>, phi: f64, kappa_prime: f64, n0: usize) -> PyResult<Vec<f64>> {
    let p = pasv(kappa_prime, n0)?;
    xs.iter().map(|&x| pasv_quadrature(x, phi, &p).map_err(to_py)).collect()
}

#[pyfunction]
fn added_squeezed_wigner(x: f64, p: f64, kappa_prime: f64, n0: usize) -> PyResult<f64> {
    pasv_wigner(x, p, &pasv(kappa_prime, n0)?).map_err(to_py)
}

#[pyfunction]
fn added_squeezed_husimi(x: f64, p: f64, kappa_prime: f64, n0: usize) -> PyResult<f64> {
    pasv_husimi(x, p, &pasv(kappa_prime, n0)?).map_err(to_py)
}

#[pyfunction]
fn quadrature_distribution(state: &PyFockVector, phi: f64, xs: Vec<f64>) -> Vec<f64> {
    phasespace::quadrature_distribution(&state.0, phi, &xs)
}

fn grid(x: (f64, f64, usize), p: (f64, f64, usize)) -> PyResult<PhaseSpaceGrid> {
    PhaseSpaceGrid::new(x, p).map_err(to_py)
}

fn rows(map: &phasespace::PhaseSpaceMap) -> Vec<Vec<f64>> {
    let (nx, np) = (map.grid.xs().len(), map.grid.ps().len());
    (0..nx).map(|ix| (0..np).map(|ip| map.get(ix, ip)).collect()).collect()
}

/// Wigner function on the grid `x = (min, max, n)`, `p = (min, max, n)`.
#[pyfunction]
fn wigner(py: Python<'_>, state: &PyFockVector, x: (f64, f64, usize), p: (f64, f64, usize)) -> PyResult<Vec<Vec<f64>>> {
    let g = grid(x, p)?;
    Ok(py.detach(|| rows(&phasespace::wigner(&state.0, &g, &WignerOptions::default()))))
}

#[pyfunction]
fn husimi(py: Python<'_>, state: &PyFockVector, x: (f64, f64, usize), p: (f64, f64, usize)) -> PyResult<Vec<Vec<f64>>> {
    let g = grid(x, p)?;
    Ok(py.detach(|| rows(&phasespace::husimi(&state.0, &g))))
}

/// Success probability averaged over a binomial ancilla `(n, p)`;
/// `weights` is `"average"` or `"posterior"`.
#[pyfunction]
#[pyo3(signature = (state, n, p, bs, weights = "average"))]
fn mixed_probability(state: &PyFockVector, n: usize, p: f64, bs: &PyBeamSplitter, weights: &str) -> PyResult<f64> {
    let mode = match weights {
        "average" => WeightMode::Average,
        "posterior" => WeightMode::Posterior,
        other => return Err(PyValueError::new_err(format!("unknown weighting '{other}'"))),
    };
    let bp = BinomialParams::new(n, p).map_err(to_py)?;
    Ok(mixed_prob(&fock::photon_number_distribution(&state.0), &bp, &bs.0, mode))
}

/// Runs the built-in consistency checks; returns `(passed, report_text)`.
#[pyfunction]
fn run_checks(py: Python<'_>) -> (bool, String) {
    let report = py.detach(|| verify::run(&verify::VerifyOptions::default()));
    (report.passed(), report.to_text())
}

#[pymodule(name = "photon_adder")]
fn photon_adder_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFockVector>()?;
    m.add_class::<PyBeamSplitter>()?;
    m.add_function(wrap_pyfunction!(coherent_state, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(fock_state, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_zero_click, m)?)?;
    m.add_function(wrap_pyfunction!(added_coherent_state, m)?)?;
    m.add_function(wrap_pyfunction!(added_coherent_probability, m)?)?;
    m.add_function(wrap_pyfunction!(added_coherent_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(added_squeezed_state, m)?)?;
    m.add_function(wrap_pyfunction!(added_squeezed_probability, m)?)?;
    m.add_function(wrap_pyfunction!(added_squeezed_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(added_squeezed_wigner, m)?)?;
    m.add_function(wrap_pyfunction!(added_squeezed_husimi, m)?)?;
    m.add_function(wrap_pyfunction!(quadrature_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(wigner, m)?)?;
    m.add_function(wrap_pyfunction!(husimi, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_probability, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
