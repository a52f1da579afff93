//! Python bindings for `hfp-core`.
//!
//! Vectors cross the boundary as `'0'`/`'1'` strings with coordinate 1 first;
//! profiles and summaries come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use hfp_core::{
    assemble, quaternion_candidate, BitVector, Candidate, Error, Family, Mode, PropelinearCode, QuaternaryRow,
    SearchOptions, SearchTask, TableOptions,
};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_family(s: &str) -> PyResult<Family> {
    s.parse().map_err(err)
}

fn vector(s: &str) -> PyResult<BitVector> {
    s.parse().map_err(err)
}

fn vectors(words: Vec<String>) -> PyResult<Vec<BitVector>> {
    words.iter().map(|w| vector(w)).collect()
}

fn strings(vs: &[BitVector]) -> Vec<String> {
    vs.iter().map(ToString::to_string).collect()
}

/// A row given as text (`"0 0 1 3"`, `"1,i,-1,-i"`) or a list of exponents.
#[derive(FromPyObject)]
enum RowArg {
    Text(String),
    Exponents(Vec<u8>),
}

impl RowArg {
    fn row(self) -> PyResult<QuaternaryRow> {
        match self {
            RowArg::Text(s) => s.parse().map_err(err),
            RowArg::Exponents(e) => QuaternaryRow::new(e).map_err(err),
        }
    }
}

/// A full propelinear Hadamard code.
#[pyclass(name = "Code", module = "hfp_py", frozen)]
struct PyCode {
    inner: PropelinearCode,
}

#[pymethods]
impl PyCode {
    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family().tag()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    /// Codewords in lexicographic order.
    fn vectors(&self) -> Vec<String> {
        strings(&self.inner.sorted_vectors())
    }

    fn __contains__(&self, word: &str) -> PyResult<bool> {
        Ok(self.inner.contains(&vector(word)?))
    }

    /// Rank, kernel and generators as a dict.
    fn profile(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &hfp_core::profile(&self.inner).map_err(err)?)
    }

    /// The circulant complex Hadamard row of a `2t4u` code.
    fn to_cchm(&self) -> PyResult<Vec<u8>> {
        Ok(hfp_core::code_to_cchm(&self.inner).map_err(err)?.exponents().to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Code(family='{}', t={}, size={})", self.family(), self.t(), self.inner.size())
    }
}

/// Builds the code of `family` from its generators; raises `ValueError`
/// with the reject reason when they do not give a full propelinear
/// Hadamard code.
#[pyfunction]
#[pyo3(signature = (family, t, a=None, d=None))]
fn build(family: &str, t: usize, a: Option<&str>, d: Option<&str>) -> PyResult<PyCode> {
    let fam = parse_family(family)?;
    fam.check_t(t).map_err(err)?;
    let a = a.map(vector).transpose()?;
    let cand = if fam == Family::TQU {
        let d = vector(d.ok_or_else(|| PyValueError::new_err("d is required for tQu"))?)?;
        quaternion_candidate(t, &d, a.as_ref(), None).map_err(err)?
    } else {
        Candidate::Generator(a.ok_or_else(|| PyValueError::new_err("a is required"))?)
    };
    let inner = assemble(fam, t, &cand).map_err(|r| PyValueError::new_err(format!("rejected: {r}")))?;
    Ok(PyCode { inner })
}

/// Profile dict of the code built from the generators.
#[pyfunction]
#[pyo3(signature = (family, t, a=None, d=None))]
fn verify(py: Python<'_>, family: &str, t: usize, a: Option<&str>, d: Option<&str>) -> PyResult<PyObject> {
    build(family, t, a, d)?.profile(py)
}

/// Exhaustive search; returns the summary dict with a `codes` list of profiles.
#[pyfunction]
#[pyo3(signature = (family, t, all=false, workers=1))]
fn search(py: Python<'_>, family: &str, t: usize, all: bool, workers: usize) -> PyResult<PyObject> {
    let mode = if all { Mode::All } else { Mode::First };
    let task = SearchTask::full(parse_family(family)?, t, mode, workers);
    let opts = SearchOptions {
        workers,
        checkpoint: None,
    };
    let res = py.allow_threads(|| hfp_core::run_search(&task, &opts)).map_err(err)?;
    let summary = to_py(py, &res)?;
    let codes: Vec<_> = res.codes.iter().map(|c| &c.profile).collect();
    summary.bind(py).downcast::<PyDict>()?.set_item("codes", to_py(py, &codes)?)?;
    Ok(summary)
}

/// Table cells for `t = 1..=tmax` as a list of dicts.
#[pyfunction]
#[pyo3(signature = (tmax=5, workers=1, deep=false))]
fn table(py: Python<'_>, tmax: usize, workers: usize, deep: bool) -> PyResult<PyObject> {
    let opts = TableOptions { workers, deep };
    let table = py.allow_threads(|| hfp_core::reproduce_table(tmax, &opts)).map_err(err)?;
    let cells: Vec<_> = table.rows.iter().flatten().collect();
    to_py(py, &cells)
}

#[pyfunction]
fn count_candidates(family: &str, t: usize) -> PyResult<u128> {
    Ok(hfp_core::count_candidates(parse_family(family)?, t))
}

#[pyfunction]
fn rank(words: Vec<String>) -> PyResult<usize> {
    Ok(hfp_core::rank(&vectors(words)?))
}

/// `(dimension, basis)` of the kernel.
#[pyfunction]
fn kernel(words: Vec<String>) -> PyResult<(usize, Vec<String>)> {
    let (basis, k) = hfp_core::kernel(&vectors(words)?);
    Ok((k, strings(basis.rows())))
}

#[pyfunction]
fn is_hadamard_code(words: Vec<String>, t: usize) -> PyResult<bool> {
    Ok(hfp_core::is_hadamard_code(&vectors(words)?, t))
}

#[pyfunction]
fn is_cchm(row: RowArg) -> PyResult<bool> {
    Ok(hfp_core::is_cchm(&row.row()?))
}

/// Binary Hadamard code (rows and complements) of a circulant row.
#[pyfunction]
fn cchm_to_code(row: RowArg) -> PyResult<Vec<String>> {
    Ok(strings(&hfp_core::cchm_to_code(&row.row()?).map_err(err)?))
}

#[pyfunction]
fn cchm_equivalent(r1: RowArg, r2: RowArg) -> PyResult<bool> {
    Ok(hfp_core::cchm_equivalent(&r1.row()?, &r2.row()?))
}

#[pyfunction]
fn sylvester_double(a: &str) -> PyResult<PyCode> {
    let inner = hfp_core::sylvester_double(&vector(a)?).map_err(err)?;
    Ok(PyCode { inner })
}

#[pymodule]
fn hfp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(count_candidates, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(is_hadamard_code, m)?)?;
    m.add_function(wrap_pyfunction!(is_cchm, m)?)?;
    m.add_function(wrap_pyfunction!(cchm_to_code, m)?)?;
    m.add_function(wrap_pyfunction!(cchm_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(sylvester_double, m)?)?;
    Ok(())
}
