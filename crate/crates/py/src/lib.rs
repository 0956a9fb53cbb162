//! Python bindings: `johnson_fft_py.Plan` wraps a transform plan.

use std::path::PathBuf;

use johnson_fft::combinatorics::{binomial, StandardTableau};
use johnson_fft::error::Error;
use johnson_fft::spectral::{parse_components, project_op_bound, weights_op_bound};
use johnson_fft::transform::transform_op_bound;
use johnson_fft::{
    build_plan, forward, inverse, load_plan, project, save_plan, tableau_contents, verify_plan, weights,
    FunctionVector, GtCoefficients, OpCounter, TransformPlan,
};
use pyo3::exceptions::{PyIOError, PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Argument(_) | Error::Dimension { .. } | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        Error::Resource(_) => PyMemoryError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Plan", frozen, module = "johnson_fft_py")]
struct Plan {
    inner: TransformPlan,
}

impl Plan {
    fn function(&self, values: Vec<f64>) -> PyResult<FunctionVector> {
        FunctionVector::new(self.inner.n(), self.inner.k(), values).map_err(py_err)
    }
}

#[pymethods]
impl Plan {
    #[new]
    fn new(n: usize, k: usize) -> PyResult<Self> {
        Ok(Plan {
            inner: build_plan(n, k).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Plan {
            inner: load_plan(&path).map_err(py_err)?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        save_plan(&self.inner, &path).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn max_component(&self) -> usize {
        self.inner.max_component()
    }

    #[getter]
    fn build_ops(&self) -> u64 {
        self.inner.build_ops()
    }

    #[getter]
    fn num_factors(&self) -> usize {
        self.inner.factors().len()
    }

    /// Words of the delta basis, in input order.
    fn words(&self) -> Vec<String> {
        self.inner.words().iter().map(|w| w.to_string()).collect()
    }

    /// Tableaux labelling the coefficients, in output order.
    fn labels(&self) -> Vec<String> {
        self.inner
            .coefficient_labels()
            .iter()
            .map(|l| l.tableau.to_string())
            .collect()
    }

    /// Component index `a` of each coefficient.
    fn shapes(&self) -> Vec<usize> {
        self.inner.coefficient_shapes().to_vec()
    }

    fn forward(&self, values: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.forward_with_ops(values)?.0)
    }

    /// Coefficients together with the counted operations.
    fn forward_with_ops(&self, values: Vec<f64>) -> PyResult<(Vec<f64>, u64)> {
        let f = self.function(values)?;
        let mut counter = OpCounter::new();
        let c = forward(&self.inner, &f, &mut counter).map_err(py_err)?;
        Ok((c.into_values(), counter.count()))
    }

    fn inverse(&self, coefficients: Vec<f64>) -> PyResult<Vec<f64>> {
        let c = GtCoefficients::new(self.inner.n(), self.inner.k(), coefficients).map_err(py_err)?;
        let f = inverse(&self.inner, &c, &mut OpCounter::new()).map_err(py_err)?;
        Ok(f.into_values())
    }

    /// `{"weights": [...], "total": float, "shares": [...], "ops": int}`.
    fn weights<'py>(&self, py: Python<'py>, values: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
        let f = self.function(values)?;
        let mut counter = OpCounter::new();
        let r = weights(&self.inner, &f, &mut counter).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("weights", r.weights)?;
        d.set_item("total", r.total)?;
        d.set_item("shares", r.shares)?;
        d.set_item("ops", counter.count())?;
        Ok(d)
    }

    /// Projection onto the listed components; `components` may also be a
    /// string such as `"0,2"`.
    fn project(&self, values: Vec<f64>, components: Bound<'_, PyAny>) -> PyResult<Vec<f64>> {
        let h: Vec<usize> = match components.extract::<String>() {
            Ok(text) => parse_components(&text, self.inner.max_component()).map_err(py_err)?,
            Err(_) => components.extract()?,
        };
        let f = self.function(values)?;
        let g = project(&self.inner, &f, &h, &mut OpCounter::new()).map_err(py_err)?;
        Ok(g.into_values())
    }

    /// Runs the dense oracle; returns `(passed, report)`.
    fn verify(&self) -> PyResult<(bool, String)> {
        let report = verify_plan(&self.inner).map_err(py_err)?;
        Ok((report.all_passed(), report.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("Plan(n={}, k={}, dim={})", self.inner.n(), self.inner.k(), self.inner.dim())
    }
}

/// Contents `column - row` of the boxes `1..=size` of a tableau like `"134/25"`.
#[pyfunction]
fn contents(tableau: &str) -> PyResult<Vec<i32>> {
    let t: StandardTableau = tableau.parse().map_err(py_err)?;
    Ok(tableau_contents(&t))
}

/// Operation bounds `{"transform", "weights", "project"}` for `J(n, k)`.
#[pyfunction]
fn op_bounds<'py>(py: Python<'py>, n: usize, k: usize) -> PyResult<Bound<'py, PyDict>> {
    if n == 0 || k > n {
        return Err(PyValueError::new_err(format!("invalid parameters n = {n}, k = {k}")));
    }
    let d = PyDict::new(py);
    d.set_item("transform", transform_op_bound(n, k))?;
    d.set_item("weights", weights_op_bound(n, k))?;
    d.set_item("project", project_op_bound(n, k))?;
    Ok(d)
}

#[pyfunction(name = "binomial")]
fn py_binomial(n: usize, k: usize) -> u128 {
    binomial(n, k)
}

#[pymodule]
fn johnson_fft_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Plan>()?;
    m.add_function(wrap_pyfunction!(contents, m)?)?;
    m.add_function(wrap_pyfunction!(op_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(py_binomial, m)?)?;
    Ok(())
}
