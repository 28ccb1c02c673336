use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use bbshift::energies;
use bbshift::model;
use bbshift::sweep::compute_sweep;
use bbshift::{Error, ThetaGrid};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } | Error::NonFinite => PyArithmeticError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// One row of a temperature sweep; energies in units of ħω₀.
#[pyclass(
    name = "EnergyBreakdown",
    module = "bbshift",
    frozen,
    get_all,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PyEnergyBreakdown {
    theta: f64,
    u0_per_vtilde: f64,
    u1: f64,
    u2: f64,
    e_osc: f64,
    delta_e: f64,
    delta_e_asym: f64,
    delta_f: f64,
    thermo_residual: f64,
}

impl From<energies::EnergyBreakdown> for PyEnergyBreakdown {
    fn from(b: energies::EnergyBreakdown) -> Self {
        PyEnergyBreakdown {
            theta: b.theta,
            u0_per_vtilde: b.u0_per_vtilde,
            u1: b.u1,
            u2: b.u2,
            e_osc: b.e_osc,
            delta_e: b.delta_e,
            delta_e_asym: b.delta_e_asym,
            delta_f: b.delta_f,
            thermo_residual: b.thermo_residual,
        }
    }
}

#[pymethods]
impl PyEnergyBreakdown {
    fn __repr__(&self) -> String {
        format!(
            "EnergyBreakdown(theta={}, delta_e={:e}, delta_f={:e})",
            self.theta, self.delta_e, self.delta_f
        )
    }
}

/// Energies of one oscillator at a fixed reduced linewidth g.
#[pyclass(name = "ShiftModel", module = "bbshift", frozen)]
pub struct PyShiftModel(bbshift::ShiftModel);

#[pymethods]
impl PyShiftModel {
    #[new]
    #[pyo3(signature = (g, rel_tol = energies::DEFAULT_REL_TOL))]
    fn new(g: f64, rel_tol: f64) -> PyResult<Self> {
        bbshift::ShiftModel::new(g, rel_tol)
            .map(PyShiftModel)
            .map_err(to_py)
    }

    #[getter]
    fn g(&self) -> f64 {
        self.0.g()
    }

    #[getter]
    fn rel_tol(&self) -> f64 {
        self.0.rel_tol()
    }

    fn u1(&self, py: Python<'_>, theta: f64) -> PyResult<f64> {
        py.detach(|| self.0.u1(theta)).map_err(to_py)
    }

    fn u2(&self, py: Python<'_>, theta: f64) -> PyResult<f64> {
        py.detach(|| self.0.u2(theta)).map_err(to_py)
    }

    fn oscillator_energy(&self, py: Python<'_>, theta: f64) -> PyResult<f64> {
        py.detach(|| self.0.oscillator_energy(theta)).map_err(to_py)
    }

    fn delta_e(&self, py: Python<'_>, theta: f64) -> PyResult<f64> {
        py.detach(|| self.0.delta_e(theta)).map_err(to_py)
    }

    /// Returns (value, truncation_bound).
    fn free_energy_shift(&self, py: Python<'_>, theta: f64) -> PyResult<(f64, f64)> {
        py.detach(|| self.0.free_energy_shift(theta))
            .map(|f| (f.value, f.truncation_bound))
            .map_err(to_py)
    }

    fn thermo_residual(&self, py: Python<'_>, theta: f64) -> PyResult<f64> {
        py.detach(|| self.0.thermo_residual(theta)).map_err(to_py)
    }

    fn breakdown(&self, py: Python<'_>, theta: f64) -> PyResult<PyEnergyBreakdown> {
        py.detach(|| self.0.breakdown(theta))
            .map(Into::into)
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "ShiftModel(g={:e}, rel_tol={:e})",
            self.0.g(),
            self.0.rel_tol()
        )
    }
}

/// Sweep over a grid written as "min:max:count[:log|lin]".
#[pyfunction]
#[pyo3(signature = (g, grid, nu = 0.0, rel_tol = energies::DEFAULT_REL_TOL, threads = None))]
fn sweep(
    py: Python<'_>,
    g: f64,
    grid: &str,
    nu: f64,
    rel_tol: f64,
    threads: Option<usize>,
) -> PyResult<Vec<PyEnergyBreakdown>> {
    let grid: ThetaGrid = grid.parse().map_err(to_py)?;
    let table = py
        .detach(|| compute_sweep(g, nu, grid, rel_tol, threads))
        .map_err(to_py)?;
    Ok(table.rows.into_iter().map(Into::into).collect())
}

/// Same sweep rendered as CSV text.
#[pyfunction]
#[pyo3(signature = (g, grid, nu = 0.0, rel_tol = energies::DEFAULT_REL_TOL, threads = None))]
fn sweep_csv(
    py: Python<'_>,
    g: f64,
    grid: &str,
    nu: f64,
    rel_tol: f64,
    threads: Option<usize>,
) -> PyResult<String> {
    let grid: ThetaGrid = grid.parse().map_err(to_py)?;
    py.detach(|| compute_sweep(g, nu, grid, rel_tol, threads))
        .map(|t| t.to_csv())
        .map_err(to_py)
}

#[pyfunction]
fn delta_e(theta: f64, g: f64) -> PyResult<f64> {
    energies::delta_e(theta, g).map_err(to_py)
}

#[pyfunction]
fn free_energy_shift(theta: f64, g: f64) -> PyResult<f64> {
    energies::free_energy_shift(theta, g)
        .map(|f| f.value)
        .map_err(to_py)
}

#[pyfunction]
fn delta_e_asymptotic(theta: f64, g: f64) -> f64 {
    energies::delta_e_asymptotic(theta, g)
}

#[pyfunction]
fn rydberg_frequency_shift(temperature: f64) -> f64 {
    energies::rydberg_frequency_shift(temperature)
}

#[pyfunction]
fn full_vs_perturbative(
    nu: f64,
    g: f64,
    v_tilde: f64,
    lambda_cut: f64,
    theta: f64,
) -> PyResult<f64> {
    energies::full_vs_perturbative(nu, g, v_tilde, lambda_cut, theta).map_err(to_py)
}

#[pyfunction]
fn polarizability(u: f64, g: f64) -> Complex64 {
    model::polarizability(u, g).into()
}

#[pyfunction]
fn refractive_index(u: f64, g: f64, nu: f64) -> Complex64 {
    model::refractive_index(u, g, nu).into()
}

/// Reduced parameters of an electron oscillator as a dict.
#[pyfunction]
#[pyo3(signature = (omega0, temperature, density = 0.0, volume = 1.0, cutoff = None))]
fn reduce(
    py: Python<'_>,
    omega0: f64,
    temperature: f64,
    density: f64,
    volume: f64,
    cutoff: Option<f64>,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let input = model::PhysicalInput::electron(temperature, omega0).map_err(to_py)?;
    let p =
        model::reduce(&input, density, cutoff.unwrap_or(100.0 * omega0), volume).map_err(to_py)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("theta", p.theta)?;
    d.set_item("g", p.g)?;
    d.set_item("nu", p.nu)?;
    d.set_item("lambda_cut", p.lambda_cut)?;
    d.set_item("v_tilde", p.v_tilde)?;
    d.set_item("particle_count", p.particle_count())?;
    Ok(d.unbind())
}

#[pymodule]
#[pyo3(name = "bbshift")]
fn bbshift_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyShiftModel>()?;
    m.add_class::<PyEnergyBreakdown>()?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(delta_e, m)?)?;
    m.add_function(wrap_pyfunction!(free_energy_shift, m)?)?;
    m.add_function(wrap_pyfunction!(delta_e_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(rydberg_frequency_shift, m)?)?;
    m.add_function(wrap_pyfunction!(full_vs_perturbative, m)?)?;
    m.add_function(wrap_pyfunction!(polarizability, m)?)?;
    m.add_function(wrap_pyfunction!(refractive_index, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add("DELTA_E_REFERENCE", energies::DELTA_E_REFERENCE)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
