//! Python bindings: graphs, morphisms, scheme models, automorphism groups and
//! theorem checks.

use std::path::PathBuf;

use loose_core::aut::{comb_aut_group, proj_aut_group};
use loose_core::graph::{emit_graph, parse_graph, read_graph, read_morphism};
use loose_core::matrices::{global_matrix, kernel_f1};
use loose_core::scheme::{build_scheme, classify_lines, count_points, SchemeModel};
use loose_core::theorems::{verify as verify_theorem, TheoremId, VerifyOptions, DEFAULT_SEED};
use loose_core::{Error, FField, LooseGraph, LooseMorphism};
use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

/// Coordinates as small integers; `Vec<u8>` would reach Python as `bytes`.
fn coords(v: &[u8]) -> Vec<u32> {
    v.iter().map(|&x| x.into()).collect()
}

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_u64() {
            Some(u) => u.into_pyobject(py)?.into_any(),
            None => match n.as_i64() {
                Some(i) => i.into_pyobject(py)?.into_any(),
                None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
            },
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(a) => {
            let items = a.iter().map(|x| json_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, json_to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn to_py<'py>(py: Python<'py>, v: impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

/// A loose graph: edges may have zero, one or two endpoints.
#[pyclass(name = "Graph", module = "loose_schemes", frozen)]
struct PyGraph {
    inner: LooseGraph,
}

#[pymethods]
impl PyGraph {
    /// Parses the text graph format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: parse_graph(text).map_err(py_err)? })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(PyGraph { inner: read_graph(path).map_err(py_err)? })
    }

    fn emit(&self) -> String {
        emit_graph(&self.inner)
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().to_vec()
    }

    /// `(name, end0, end1)` with `None` for a free end.
    #[getter]
    fn edges(&self) -> Vec<(String, Option<String>, Option<String>)> {
        let name = |s: Option<usize>| s.map(|v| self.inner.vertices()[v].clone());
        self.inner
            .edges()
            .iter()
            .map(|e| (e.name.clone(), name(e.slots[0]), name(e.slots[1])))
            .collect()
    }

    fn inner_vertices(&self) -> Vec<String> {
        self.inner.inner_vertices().into_iter().map(|v| self.inner.vertices()[v].clone()).collect()
    }

    fn is_loose_tree(&self) -> bool {
        self.inner.is_loose_tree()
    }

    /// Rational point counts at each `q` and the interpolated polynomial.
    #[pyo3(signature = (qs = vec![2, 3, 4, 5]))]
    fn count_points<'py>(&self, py: Python<'py>, qs: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let c = count_points(&self.inner, &qs).map_err(py_err)?;
        to_py(py, &c)
    }

    fn __repr__(&self) -> String {
        format!("Graph({} vertices, {} edges)", self.inner.vertex_count(), self.inner.edges().len())
    }
}

/// A morphism of loose graphs.
#[pyclass(name = "Morphism", module = "loose_schemes", frozen)]
struct PyMorphism {
    inner: LooseMorphism,
}

#[pymethods]
impl PyMorphism {
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(PyMorphism { inner: read_morphism(path).map_err(py_err)? })
    }

    #[getter]
    fn source(&self) -> PyGraph {
        PyGraph { inner: self.inner.source.clone() }
    }

    #[getter]
    fn target(&self) -> PyGraph {
        PyGraph { inner: self.inner.target.clone() }
    }

    /// The global 0/1 matrix, target rows by source columns.
    fn matrix(&self) -> Vec<Vec<u32>> {
        global_matrix(&self.inner).to_rows().iter().map(|r| coords(r)).collect()
    }

    /// `self` followed by `other`.
    fn then(&self, other: &PyMorphism) -> PyResult<PyMorphism> {
        Ok(PyMorphism { inner: self.inner.then(&other.inner).map_err(py_err)? })
    }

    /// Points of the source's F2-model sent to zero.
    fn kernel(&self) -> PyResult<Vec<Vec<u32>>> {
        let s = build_scheme(&self.inner.source, &FField::new(2).map_err(py_err)?).map_err(py_err)?;
        let k = kernel_f1(&self.inner, &s).map_err(py_err)?;
        Ok(k.members.iter().map(|(p, _)| coords(&p.0)).collect())
    }
}

/// The scheme of a loose graph over GF(q), with its rational points.
#[pyclass(name = "Scheme", module = "loose_schemes", frozen)]
struct PyScheme {
    inner: SchemeModel,
}

#[pymethods]
impl PyScheme {
    #[new]
    #[pyo3(signature = (graph, q, ext = None))]
    fn new(graph: &PyGraph, q: usize, ext: Option<usize>) -> PyResult<Self> {
        let mut s = build_scheme(&graph.inner, &FField::new(q).map_err(py_err)?).map_err(py_err)?;
        if let Some(r) = ext {
            s = s.with_ext_bound(r).map_err(py_err)?;
        }
        Ok(PyScheme { inner: s })
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn ext_bound(&self) -> usize {
        self.inner.ext_bound
    }

    #[getter]
    fn coordinates(&self) -> Vec<String> {
        self.inner.coordinate_names().to_vec()
    }

    fn points(&self) -> Vec<Vec<u32>> {
        self.inner.points.iter().map(|p| coords(&p.0)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, v: Vec<u32>) -> bool {
        let q = self.inner.q() as u32;
        let v: Option<Vec<u8>> = v.iter().map(|&x| (x < q).then_some(x as u8)).collect();
        v.is_some_and(|v| v.len() == self.inner.m() && self.inner.contains_vec(&v))
    }

    /// `(kind, points)` for every line of the scheme.
    fn lines(&self) -> PyResult<Vec<(String, Vec<Vec<u32>>)>> {
        let geo = classify_lines(&self.inner).map_err(py_err)?;
        Ok(geo
            .lines
            .iter()
            .map(|l| {
                let pts = l.points.iter().map(|&i| coords(&self.inner.points[i].0)).collect();
                (format!("{:?}", l.kind), pts)
            })
            .collect())
    }

    /// The projective automorphism group: orders and generators.
    fn proj_aut<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let a = proj_aut_group(&self.inner).map_err(py_err)?;
        to_py(py, a.summary())
    }

    /// Order of the combinatorial automorphism group.
    fn comb_aut_order(&self) -> PyResult<BigUint> {
        let geo = classify_lines(&self.inner).map_err(py_err)?;
        Ok(comb_aut_group(&geo).map_err(py_err)?.order())
    }

    fn __repr__(&self) -> String {
        format!("Scheme(q={}, {} points)", self.inner.q(), self.inner.len())
    }
}

/// Checks one theorem on one graph and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (theorem, graph, q, name = "graph", seed = DEFAULT_SEED, ext = None))]
fn verify<'py>(
    py: Python<'py>,
    theorem: &str,
    graph: &PyGraph,
    q: usize,
    name: &str,
    seed: u64,
    ext: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let id: TheoremId = theorem.parse().map_err(py_err)?;
    let opts = VerifyOptions {
        seed,
        ext_bound: ext,
        expected_igp: None,
    };
    let r = verify_theorem(id, &graph.inner, name, q, &opts).map_err(py_err)?;
    to_py(py, &r)
}

/// Names of the checkable theorems.
#[pyfunction]
fn theorems() -> Vec<&'static str> {
    TheoremId::ALL.iter().map(|t| t.as_str()).collect()
}

#[pymodule]
fn loose_schemes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyMorphism>()?;
    m.add_class::<PyScheme>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(theorems, m)?)?;
    Ok(())
}
