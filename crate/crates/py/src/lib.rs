//! Python bindings: groups, subsets, the component monoid, graded series,
//! Koszul homology, H1 of components and the stability reports.

use std::sync::Arc;

use hurwitz::group::{is_large, k_invariant, FiniteGroup, GroupFile, InvariantSubset, DEFAULT_MAX_ORDER};
use hurwitz::hurwitz::{tuple_label, ComponentMonoid, DEFAULT_STATE_CAP};
use hurwitz::koszul::{self, Homology, TwistedBimodule};
use hurwitz::linalg::{smith_normal_form, AbelianGroup, Coefficients};
use hurwitz::presentation::{h1_of_component, Caps, DEFAULT_LETTER_CAP};
use hurwitz::rings::{self, Windows};
use hurwitz::stability;
use hurwitz::Error;
use num_bigint::BigInt;
use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Infeasible { .. } => PyMemoryError::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for hurwitz::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

// Serializable values cross over as plain Python containers.
fn to_python<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn coefficients(tags: &[String]) -> PyResult<Vec<Coefficients>> {
    tags.iter().map(|t| Coefficients::parse(t).py()).collect()
}

fn abelian(g: &AbelianGroup) -> (usize, Vec<String>) {
    (g.rank, g.torsion.iter().map(|t| t.to_string()).collect())
}

/// A finite group read from a JSON description.
#[pyclass(frozen, name = "Group")]
struct PyGroup {
    file: GroupFile,
    group: Arc<FiniteGroup>,
}

#[pymethods]
impl PyGroup {
    /// One of the bundled groups: z2, s3, s4, s5, d3, d5.
    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        let file = GroupFile::bundled(name).py()?;
        let group = Arc::new(file.build(DEFAULT_MAX_ORDER).py()?);
        Ok(PyGroup { file, group })
    }

    #[staticmethod]
    #[pyo3(signature = (path, max_order = DEFAULT_MAX_ORDER))]
    fn open(path: &str, max_order: usize) -> PyResult<Self> {
        let file = GroupFile::open(path).py()?;
        let group = Arc::new(file.build(max_order).py()?);
        Ok(PyGroup { file, group })
    }

    #[getter]
    fn order(&self) -> usize {
        self.group.order()
    }

    fn labels(&self) -> Vec<String> {
        self.group.labels().to_vec()
    }

    fn conjugacy_classes(&self) -> Vec<Vec<String>> {
        self.group.conjugacy_classes().iter().map(|c| c.iter().map(|&x| self.group.label(x).to_string()).collect()).collect()
    }

    /// Index of an element given by name, label or cycle notation.
    fn element(&self, selector: &str) -> PyResult<usize> {
        self.file.select_element(&self.group, selector).py()
    }

    /// A conjugation-invariant subset, by name or explicit members.
    fn subset(&self, selector: &str) -> PyResult<PySubset> {
        let q = self.file.select_q(&self.group, selector).py()?;
        Ok(PySubset { file: self.file.clone(), q })
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.group.order())
    }
}

/// A conjugation-invariant subset Q of a group.
#[pyclass(frozen, name = "Subset")]
struct PySubset {
    file: GroupFile,
    q: InvariantSubset,
}

impl PySubset {
    fn element(&self, omega: Option<&str>) -> PyResult<Option<usize>> {
        omega.map(|s| self.file.select_element(self.q.group(), s)).transpose().py()
    }

    fn monoid(&self) -> ComponentMonoid {
        ComponentMonoid::new(self.q.clone())
    }

    fn positions(&self, labels: &[String]) -> PyResult<Vec<u8>> {
        labels
            .iter()
            .map(|l| {
                let g = self.file.select_element(self.q.group(), l).py()?;
                self.q.position(g).map(|i| i as u8).ok_or_else(|| PyValueError::new_err(format!("{l} is not in Q")))
            })
            .collect()
    }
}

#[pymethods]
impl PySubset {
    #[getter]
    fn m(&self) -> usize {
        self.q.len()
    }

    /// Least common multiple of the element orders.
    #[getter]
    fn ell(&self) -> usize {
        self.q.ell()
    }

    fn labels(&self) -> Vec<String> {
        (0..self.q.len()).map(|i| self.q.label(i).to_string()).collect()
    }

    fn is_single_class(&self) -> bool {
        self.q.is_single_class()
    }

    #[pyo3(signature = (omega = None))]
    fn k_invariant(&self, omega: Option<&str>) -> PyResult<usize> {
        Ok(k_invariant(&self.q, self.element(omega)?).py()?.value)
    }

    fn is_large(&self, omega: &str) -> PyResult<bool> {
        is_large(&self.q, self.element(Some(omega))?.unwrap()).py()
    }

    /// `(rank, torsion)` of H1 of the component containing a tuple of
    /// element names.
    #[pyo3(signature = (tuple, letter_cap = DEFAULT_LETTER_CAP))]
    fn h1(&self, tuple: Vec<String>, letter_cap: usize) -> PyResult<(usize, Vec<String>)> {
        let t = self.positions(&tuple)?;
        let caps = Caps { letters: letter_cap, ..Caps::default() };
        Ok(abelian(&h1_of_component(&self.q, &t, caps).py()?))
    }

    /// Dimensions of `A`, `A1`, `B`, `Bomega` or `C` through `max_weight`.
    #[pyo3(signature = (ring, max_weight, omega = None))]
    fn dim_series(&self, ring: &str, max_weight: usize, omega: Option<&str>) -> PyResult<Vec<u128>> {
        let mut mon = self.monoid();
        let w = self.element(omega)?;
        let s = match ring {
            "A" => rings::dim_series_a(&mut mon, max_weight, w, false),
            "A1" => rings::dim_series_a(&mut mon, max_weight, None, true),
            "B" => rings::dim_series_b(&mut mon, max_weight),
            "C" => rings::dim_series_c(&mut mon, max_weight),
            "Bomega" => {
                let w = w.ok_or_else(|| PyValueError::new_err("Bomega needs omega"))?;
                rings::dim_series_bomega(&mut mon, w, max_weight)
            }
            other => return Err(PyValueError::new_err(format!("unknown ring {other:?}"))),
        };
        Ok(s.py()?.dims)
    }

    /// Quasi-polynomial fits of all series against the k invariants.
    #[pyo3(signature = (omega = None, a_max = 20, b_max = 24))]
    fn degree_bounds(&self, py: Python<'_>, omega: Option<&str>, a_max: usize, b_max: usize) -> PyResult<Py<PyAny>> {
        let mut mon = self.monoid();
        let w = self.element(omega)?;
        let r = py.detach(|| rings::degree_bound_report(&mut mon, w, Windows::new(a_max, b_max))).py()?;
        to_python(py, &r)
    }

    /// Homology of the Koszul-like complex as `{(weight, degree): value}`,
    /// with `(rank, torsion)` over `z` and a dimension over `q` or `f<p>`.
    #[pyo3(signature = (max_weight, degrees = vec![-1, 0, 1], coeff = "z"))]
    fn koszul_homology(&self, py: Python<'_>, max_weight: usize, degrees: Vec<i64>, coeff: &str) -> PyResult<Py<PyAny>> {
        let prime = match Coefficients::parse(coeff).py()? {
            Coefficients::Integers => None,
            Coefficients::Rationals => Some(0),
            Coefficients::Prime(p) => Some(p),
        };
        let mut mon = self.monoid();
        mon.extend_to(max_weight + 1).py()?;
        let bm = TwistedBimodule::new(&mon, max_weight).py()?;
        let out = pyo3::types::PyDict::new(py);
        for w in 0..=max_weight {
            for &p in &degrees {
                match koszul::koszul_homology(&bm, w, p, prime).py()? {
                    Homology::Integral(g) => out.set_item((w, p), abelian(&g))?,
                    Homology::Dimension(d) => out.set_item((w, p), d)?,
                }
            }
        }
        Ok(out.into_any().unbind())
    }

    /// Twist axioms, d² = 0 and the homotopy identity through `max_weight`.
    fn koszul_checks(&self, max_weight: usize) -> PyResult<bool> {
        let mut mon = self.monoid();
        mon.extend_to(max_weight + 1).py()?;
        let bm = TwistedBimodule::new(&mon, max_weight).py()?;
        if bm.check_twist_axioms().is_some() {
            return Ok(false);
        }
        for w in 0..=max_weight {
            if koszul::build_complex(&bm, w, None).py()?.check_square_zero().py()?.is_some() {
                return Ok(false);
            }
        }
        Ok((0..self.q.len()).all(|a| koszul::homotopy_check(&bm, a).first_violation.is_none()))
    }

    /// Generation degree of `H_degree` through `max_weight`.
    #[pyo3(signature = (degree, field = "q", max_weight = 9, omega = None, letter_cap = DEFAULT_LETTER_CAP))]
    fn generation(&self, py: Python<'_>, degree: usize, field: &str, max_weight: usize, omega: Option<&str>, letter_cap: usize) -> PyResult<Py<PyAny>> {
        let w = self.element(omega)?;
        let f = Coefficients::parse(field).py()?;
        let caps = Caps { letters: letter_cap, ..Caps::default() };
        let mut mon = self.monoid();
        let r = py.detach(|| stability::generation_degree(&mut mon, degree, w, f, max_weight, caps)).py()?;
        to_python(py, &r)
    }

    /// Stabilization of H0 and H1 under `lst(a)^ℓ` for sources `lo..=hi`.
    #[pyo3(signature = (omega, lo, hi, fields = vec!["q".to_string()], letter_cap = DEFAULT_LETTER_CAP))]
    fn stability(&self, py: Python<'_>, omega: &str, lo: usize, hi: usize, fields: Vec<String>, letter_cap: usize) -> PyResult<Py<PyAny>> {
        let w = self.element(Some(omega))?.unwrap();
        let fields = coefficients(&fields)?;
        let caps = Caps { letters: letter_cap, ..Caps::default() };
        let mut mon = self.monoid();
        let r = py.detach(|| stability::stability_report(&mut mon, w, &fields, lo..=hi, caps)).py()?;
        to_python(py, &r)
    }

    fn __len__(&self) -> usize {
        self.q.len()
    }
}

/// Braid-orbit components of `Q^n` and their products.
#[pyclass(name = "Components")]
struct PyComponents {
    mon: ComponentMonoid,
}

#[pymethods]
impl PyComponents {
    #[new]
    #[pyo3(signature = (subset, state_cap = DEFAULT_STATE_CAP))]
    fn new(subset: &PySubset, state_cap: usize) -> Self {
        PyComponents { mon: ComponentMonoid::with_cap(subset.q.clone(), state_cap) }
    }

    fn extend_to(&mut self, n: usize) -> PyResult<()> {
        self.mon.extend_to(n).py()
    }

    /// Number of components of weight `n`.
    fn count(&mut self, n: usize) -> PyResult<usize> {
        self.mon.extend_to(n).py()?;
        Ok(self.mon.count(n))
    }

    /// Rows `(id, size, canonical tuple, total monodromy)` of weight `n`.
    #[pyo3(signature = (n, omega = None))]
    fn table(&mut self, n: usize, omega: Option<usize>) -> PyResult<Vec<(usize, u128, String, String)>> {
        self.mon.extend_to(n).py()?;
        let q = self.mon.subset().clone();
        Ok((0..self.mon.count(n))
            .filter(|&x| omega.is_none_or(|w| self.mon.monodromy(n, x) == w))
            .map(|x| (x, self.mon.size(n, x), tuple_label(&q, self.mon.canonical(n, x)), q.group().label(self.mon.monodromy(n, x)).to_string()))
            .collect())
    }

    /// `[a]·x` for `x` of weight `n`, where `a` is a position in Q.
    fn lmul(&mut self, n: usize, a: usize, x: usize) -> PyResult<usize> {
        self.mon.extend_to(n + 1).py()?;
        if a >= self.mon.subset().len() || x >= self.mon.count(n) {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.mon.lmul(n, a, x))
    }

    /// Product of components `x` (weight `n1`) and `y` (weight `n2`).
    fn multiply(&mut self, n1: usize, x: usize, n2: usize, y: usize) -> PyResult<usize> {
        self.mon.extend_to(n1 + n2).py()?;
        if x >= self.mon.count(n1) || y >= self.mon.count(n2) {
            return Err(PyValueError::new_err("index out of range"));
        }
        self.mon.multiply(n1, x, n2, y).py()
    }
}

/// Invariant factors (as decimal strings) of an integer matrix.
#[pyfunction]
fn smith_form(rows: Vec<Vec<i64>>) -> PyResult<Vec<String>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("rows must have equal length"));
    }
    let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    Ok(smith_normal_form(&m, cols, false).py()?.factors.iter().map(|d| d.to_string()).collect())
}

/// Runs the command-line driver and returns its exit status.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> i32 {
    py.detach(|| hurwitz::cli::dispatch(std::iter::once("hurwitz".to_string()).chain(args)))
}

/// Bundled group names.
#[pyfunction]
fn bundled_groups() -> Vec<&'static str> {
    hurwitz::group::spec::bundled_names()
}

#[pymodule]
fn hurwitz_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PySubset>()?;
    m.add_class::<PyComponents>()?;
    m.add_function(wrap_pyfunction!(smith_form, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_groups, m)?)?;
    Ok(())
}
