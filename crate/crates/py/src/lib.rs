//! Python bindings: a `Model` class whose report methods return plain
//! dicts and lists, the same documents the `dimer` command prints.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde_json::Value;

use dimer_core::render::{render_domains, render_model, render_polygon};
use dimer_core::report::{self, Report, ThetaSource, Verdict};
use dimer_core::{catalog, io, DimerModel, Error};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_python(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn report_to_python(py: Python<'_>, r: Result<Report, Error>) -> PyResult<Py<PyAny>> {
    let r = r.map_err(to_py_err)?;
    if r.verdict == Verdict::Violation {
        return Err(PyRuntimeError::new_err(format!("invariant violated: {}", r.json)));
    }
    to_python(py, &r.json)
}

/// A dimer model on the torus.
#[pyclass(name = "Model", module = "dimer", frozen)]
struct PyModel {
    inner: DimerModel,
}

#[pymethods]
impl PyModel {
    /// Parses a model document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: io::parse_model(text).map_err(to_py_err)?,
        })
    }

    /// A built-in model by name.
    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: catalog::named(name).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn examples() -> Vec<&'static str> {
        catalog::NAMES.to_vec()
    }

    fn to_json(&self) -> String {
        io::model_to_json(&self.inner)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &report::validate(&self.inner).json)
    }

    fn quiver(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::quiver(&self.inner))
    }

    #[pyo3(signature = (reference=None))]
    fn matchings(&self, py: Python<'_>, reference: Option<usize>) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::matchings(&self.inner, reference))
    }

    #[pyo3(signature = (reference=None))]
    fn charpoly(&self, py: Python<'_>, reference: Option<usize>) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::charpoly(&self.inner, reference))
    }

    #[pyo3(signature = (reference=None))]
    fn polygon(&self, py: Python<'_>, reference: Option<usize>) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::polygon(&self.inner, reference).map(|(r, _)| r))
    }

    /// Non-degeneracy by the three methods; `non_degenerate` is false for degenerate models.
    fn check(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::check(&self.inner))
    }

    fn rcharge(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::rcharge(&self.inner))
    }

    #[pyo3(signature = (matching=None, seed=0))]
    fn theta(&self, py: Python<'_>, matching: Option<usize>, seed: u64) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::theta(&self.inner, matching, seed))
    }

    /// `theta` is `None` for a seeded draw, or a dict of face id to rational string.
    #[pyo3(signature = (theta=None, reference=None, seed=0))]
    fn fixed_points(
        &self,
        py: Python<'_>,
        theta: Option<Bound<'_, PyAny>>,
        reference: Option<usize>,
        seed: u64,
    ) -> PyResult<Py<PyAny>> {
        let source = match theta {
            None => ThetaSource::Auto,
            Some(t) => {
                let text: String = py.import("json")?.call_method1("dumps", (t,))?.extract()?;
                let v: Value =
                    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
                ThetaSource::Given(v)
            }
        };
        let r = report::fixed_points(&self.inner, &source, reference, seed);
        to_python(py, &r.map_err(to_py_err)?.json)
    }

    #[pyo3(signature = (reference=None))]
    fn toric(&self, py: Python<'_>, reference: Option<usize>) -> PyResult<Py<PyAny>> {
        report_to_python(py, report::toric(&self.inner, reference))
    }

    /// SVG of the model (`"matching"`), its polygon (`"polygon"`) or fixed-point domains (`"domain"`).
    #[pyo3(signature = (overlay="matching", matching=None, seed=0))]
    fn render(&self, overlay: &str, matching: Option<usize>, seed: u64) -> PyResult<String> {
        let m = &self.inner;
        dimer_core::tiling::ensure_valid(m).map_err(to_py_err)?;
        match overlay {
            "matching" => {
                let (_, d) = report::matching_at(m, matching).map_err(to_py_err)?;
                Ok(render_model(m, Some(&d)).svg)
            }
            "polygon" => {
                let (_, p) = report::polygon(m, matching).map_err(to_py_err)?;
                Ok(render_polygon(&p))
            }
            "domain" => {
                let (_, a) = report::fixed_points_analysis(m, &ThetaSource::Auto, matching, seed)
                    .map_err(to_py_err)?;
                Ok(render_domains(m, &a).svg)
            }
            other => Err(PyValueError::new_err(format!(
                "unknown overlay `{other}`; use matching, polygon or domain"
            ))),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(vertices={}, edges={})",
            self.inner.num_vertices(),
            self.inner.num_edges()
        )
    }
}

#[pymodule]
fn dimer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add("EXAMPLES", catalog::NAMES.to_vec())?;
    Ok(())
}
