//! Python bindings: codes over Z_m, Construction A lattices and q-series.

use num_bigint::BigInt;
use num_rational::Rational64;
use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use zklat::constructions::Catalog;
use zklat::modforms::{self, QSeries};
use zklat::pipelines::{self, VerifyOptions};
use zklat::{EnumOptions, Error, LatticeBasis, LinearCode, Modulus};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::NotFound(msg) => PyKeyError::new_err(msg),
        Error::Resource { .. } => PyRuntimeError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn budget(nodes: Option<u64>) -> EnumOptions {
    EnumOptions {
        budget: nodes,
        progress: false,
    }
}

fn json_loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A linear code over Z_m.
#[pyclass(name = "Code", frozen)]
struct PyCode(LinearCode);

#[pymethods]
impl PyCode {
    #[new]
    fn new(modulus: u32, length: usize, rows: Vec<Vec<i64>>) -> PyResult<Self> {
        let m = Modulus::new(modulus).map_err(to_py)?;
        LinearCode::from_rows(m, length, &rows)
            .map(PyCode)
            .map_err(to_py)
    }

    /// Code stored under `name` in the bundled catalog.
    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        let catalog = Catalog::bundled();
        let entry = catalog.get(name).map_err(to_py)?;
        entry.code().map(PyCode).map_err(to_py)
    }

    #[getter]
    fn modulus(&self) -> u32 {
        self.0.modulus().order()
    }

    #[getter]
    fn length(&self) -> usize {
        self.0.length()
    }

    /// Canonical (Howell) generator rows.
    fn rows(&self) -> Vec<Vec<u32>> {
        self.0
            .canonical_rows()
            .iter()
            .map(|r| r.entries().to_vec())
            .collect()
    }

    fn cardinality(&self) -> BigInt {
        self.0.cardinality().into()
    }

    fn is_self_dual(&self) -> bool {
        self.0.is_self_dual()
    }

    fn is_type_ii(&self) -> bool {
        self.0.is_type_ii()
    }

    fn contains(&self, word: Vec<i64>) -> PyResult<bool> {
        let v = zklat::ResidueVector::new(self.0.modulus(), &word).map_err(to_py)?;
        self.0.contains(&v).map_err(to_py)
    }

    #[pyo3(signature = (cap = zklat::code::DEFAULT_ENUMERATION_CAP))]
    fn min_euclidean_weight(&self, cap: u64) -> PyResult<u64> {
        self.0.min_euclidean_weight_bruteforce(cap).map_err(to_py)
    }

    /// Theta series of A_m(C) through q^precision, via the weight enumerator.
    #[pyo3(signature = (precision, cap = zklat::code::DEFAULT_ENUMERATION_CAP))]
    fn theta(&self, precision: u64, cap: u64) -> PyResult<PySeries> {
        let w = self.0.swe(cap).map_err(to_py)?;
        modforms::theta_from_swe(&w, precision)
            .map(|s| PySeries(s.simplified()))
            .map_err(to_py)
    }

    fn construction_a(&self) -> PyResult<PyLattice> {
        zklat::construction_a(&self.0).map(PyLattice).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Code(Z_{}, length {})", self.modulus(), self.length())
    }
}

/// A lattice stored as integer rows of sqrt(scale) times a basis.
#[pyclass(name = "Lattice", frozen)]
struct PyLattice(LatticeBasis);

#[pymethods]
impl PyLattice {
    #[new]
    #[pyo3(signature = (rows, scale = 1))]
    fn new(rows: Vec<Vec<i64>>, scale: u64) -> PyResult<Self> {
        LatticeBasis::new(scale, rows).map(PyLattice).map_err(to_py)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        LatticeBasis::from_text(text).map(PyLattice).map_err(to_py)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn scale(&self) -> u64 {
        self.0.scale()
    }

    fn rows(&self) -> Vec<Vec<i64>> {
        self.0.rows().to_vec()
    }

    fn gram_scaled(&self) -> Vec<Vec<i64>> {
        self.0.gram_scaled().to_vec()
    }

    /// dict with det (as a string), integral, unimodular, even, odd.
    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let i = self.0.invariants();
        let text = serde_json::json!({
            "det": i.det.to_string(),
            "integral": i.integral,
            "unimodular": i.unimodular,
            "even": i.even,
            "odd": i.odd,
        })
        .to_string();
        json_loads(py, &text)
    }

    fn lll(&self) -> PyLattice {
        PyLattice(self.0.lll_reduce().0)
    }

    /// {norm: count} for norms up to `max_norm`; norms are (num, den) pairs.
    #[pyo3(signature = (max_norm, budget = None))]
    fn shell_sizes(
        &self,
        py: Python<'_>,
        max_norm: i64,
        budget: Option<u64>,
    ) -> PyResult<Vec<((i64, i64), u64)>> {
        let opts = self::budget(budget);
        let lattice = &self.0;
        let shells = py
            .detach(|| lattice.shell_sizes(Rational64::from_integer(max_norm), &opts))
            .map_err(to_py)?;
        Ok(shells
            .counts
            .iter()
            .map(|(k, v)| ((*k.numer(), *k.denom()), *v))
            .collect())
    }

    /// Minimum norm as a (num, den) pair.
    #[pyo3(signature = (budget = None))]
    fn min_norm(&self, py: Python<'_>, budget: Option<u64>) -> PyResult<(i64, i64)> {
        let opts = self::budget(budget);
        let lattice = &self.0;
        let mu = py.detach(|| lattice.min_norm(&opts)).map_err(to_py)?;
        Ok((*mu.numer(), *mu.denom()))
    }

    fn same_lattice(&self, other: &PyLattice) -> bool {
        self.0.same_lattice(&other.0)
    }

    fn __repr__(&self) -> String {
        format!("Lattice(dim {}, scale {})", self.0.dim(), self.0.scale())
    }
}

/// A truncated q-series with exponents in (1/D)Z.
#[pyclass(name = "Series", frozen)]
struct PySeries(QSeries);

#[pymethods]
impl PySeries {
    #[getter]
    fn denominator(&self) -> u32 {
        self.0.denominator()
    }

    /// Largest numerator e such that the coefficient of q^(e/D) is exact.
    #[getter]
    fn exact_through(&self) -> usize {
        self.0.exact_through()
    }

    /// Coefficient of q^e for an integer exponent e.
    fn coeff(&self, e: u64) -> Option<BigInt> {
        self.0.coeff_int(e)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_json()).expect("series serializes")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        QSeries::from_json(&j).map(PySeries).map_err(to_py)
    }

    fn __mul__(&self, other: &PySeries) -> PySeries {
        PySeries(self.0.mul(&other.0))
    }

    fn __add__(&self, other: &PySeries) -> PySeries {
        PySeries(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &PySeries) -> PySeries {
        PySeries(self.0.sub(&other.0))
    }

    fn agrees_with(&self, other: &PySeries) -> bool {
        self.0.agrees_with(&other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.0)
    }
}

#[pyfunction]
fn catalog_names() -> Vec<String> {
    Catalog::bundled()
        .entries()
        .iter()
        .map(|e| e.name.clone())
        .collect()
}

#[pyfunction]
fn euclidean_weight(word: Vec<i64>, modulus: u32) -> PyResult<u64> {
    let m = Modulus::new(modulus).map_err(to_py)?;
    let v = zklat::ResidueVector::new(m, &word).map_err(to_py)?;
    Ok(zklat::euclidean_weight(&v))
}

#[pyfunction]
fn extremal_bound(n: usize, k: u32) -> u64 {
    zklat::extremal_bound(n, k)
}

#[pyfunction]
#[pyo3(signature = (n, k, precision = None))]
fn extremal_defect(n: usize, k: u32, precision: Option<u64>) -> PyResult<BigInt> {
    modforms::extremal_defect(n, k, precision).map_err(to_py)
}

#[pyfunction]
fn extremal_theta(n: usize, precision: u64) -> PyResult<PySeries> {
    modforms::extremal_theta(n, precision)
        .map(PySeries)
        .map_err(to_py)
}

#[pyfunction]
fn e4(precision: u64) -> PySeries {
    PySeries(modforms::e4(precision))
}

#[pyfunction]
fn delta24(precision: u64) -> PySeries {
    PySeries(modforms::delta24(precision))
}

/// (a_0, ..., a_mu) with theta = sum a_s E4^(j-3s) Delta^s + O(q^(2mu+2)).
#[pyfunction]
fn decompose_e4_delta(theta: &PySeries, j: usize, mu: usize) -> PyResult<Vec<BigInt>> {
    modforms::decompose_e4_delta(&theta.0, j, mu)
        .map(|d| d.coefficients)
        .map_err(to_py)
}

/// Verification report for a catalog entry, as a dict.
#[pyfunction]
#[pyo3(signature = (name, certify_min_weight = false, budget = None))]
fn verify<'py>(
    py: Python<'py>,
    name: &str,
    certify_min_weight: bool,
    budget: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let catalog = Catalog::bundled();
    let entry = catalog.get(name).map_err(to_py)?.clone();
    let opts = VerifyOptions {
        certify_min_weight,
        enumeration: self::budget(budget),
        ..VerifyOptions::default()
    };
    let report = py
        .detach(|| pipelines::verify_entry(&entry, &opts))
        .map_err(to_py)?;
    let text = serde_json::to_string(&report).expect("report serializes");
    json_loads(py, &text)
}

#[pymodule]
fn zklat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyLattice>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(euclidean_weight, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_bound, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_defect, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_theta, m)?)?;
    m.add_function(wrap_pyfunction!(e4, m)?)?;
    m.add_function(wrap_pyfunction!(delta24, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_e4_delta, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
