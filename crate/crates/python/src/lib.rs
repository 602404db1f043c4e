use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qrank::identities::{check_named, macwilliams_dual_enumerator, IdentityReport};
use qrank::{qseries, subspace, Error, FieldContext, MatrixFq, QPolymatroid, RankMetricCode, Subspace, DEFAULT_BUDGET};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A Delsarte rank-metric code: an F_q-linear space of n x m matrices.
#[pyclass(name = "Code", module = "pyqrank", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCode {
    inner: RankMetricCode,
}

#[pymethods]
impl PyCode {
    /// Span of the given generator matrices (lists of rows of integers below q).
    #[new]
    fn new(q: u64, n: usize, m: usize, generators: Vec<Vec<Vec<u32>>>) -> PyResult<Self> {
        let ctx = FieldContext::of_order(q).map_err(py_err)?;
        let mats = generators.iter().map(|g| MatrixFq::from_rows(&ctx, g)).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
        let inner = RankMetricCode::from_generators(&ctx, n, m, &mats).map_err(py_err)?;
        Ok(PyCode { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyCode { inner: RankMetricCode::from_json(text).map_err(py_err)? })
    }

    #[staticmethod]
    fn full(q: u64, n: usize, m: usize) -> PyResult<Self> {
        let ctx = FieldContext::of_order(q).map_err(py_err)?;
        Ok(PyCode { inner: RankMetricCode::full(&ctx, n, m).map_err(py_err)? })
    }

    #[staticmethod]
    fn zero(q: u64, n: usize, m: usize) -> PyResult<Self> {
        let ctx = FieldContext::of_order(q).map_err(py_err)?;
        Ok(PyCode { inner: RankMetricCode::zero(&ctx, n, m).map_err(py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (q, n, m, seed, dim=None))]
    fn random(q: u64, n: usize, m: usize, seed: u64, dim: Option<usize>) -> PyResult<Self> {
        let ctx = FieldContext::of_order(q).map_err(py_err)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(PyCode { inner: RankMetricCode::random(&ctx, n, m, dim, &mut rng).map_err(py_err)? })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.context().q()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn generators(&self) -> Vec<Vec<Vec<u32>>> {
        self.inner.basis_matrices().iter().map(MatrixFq::to_rows).collect()
    }

    #[pyo3(signature = (seed=None))]
    fn to_json(&self, seed: Option<u64>) -> String {
        self.inner.to_json(seed)
    }

    #[pyo3(signature = (budget=DEFAULT_BUDGET))]
    fn rank_distribution(&self, budget: u64) -> PyResult<Vec<u64>> {
        Ok(self.inner.rank_distribution(budget).map_err(py_err)?.counts)
    }

    #[pyo3(signature = (budget=DEFAULT_BUDGET))]
    fn enumerator(&self, budget: u64) -> PyResult<String> {
        Ok(self.inner.rank_weight_enumerator(budget).map_err(py_err)?.to_string())
    }

    /// The dual enumerator computed from subspace counts of this code alone.
    fn macwilliams_dual_enumerator(&self) -> PyResult<String> {
        Ok(macwilliams_dual_enumerator(&self.inner).map_err(py_err)?.to_string())
    }

    fn dual(&self) -> Self {
        PyCode { inner: self.inner.dual() }
    }

    /// C(J) for J spanned by `rows`.
    fn restrict(&self, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        let space = Subspace::span_of_rows(self.inner.context(), self.inner.n(), &rows).map_err(py_err)?;
        Ok(PyCode { inner: self.inner.restrict(&space).map_err(py_err)? })
    }

    fn polymatroid(&self) -> PyResult<PyPolymatroid> {
        Ok(PyPolymatroid { inner: QPolymatroid::from_code(&self.inner).map_err(py_err)? })
    }

    /// Runs one named identity, or all of them.
    #[pyo3(signature = (identity="all", budget=DEFAULT_BUDGET))]
    fn check(&self, identity: &str, budget: u64) -> PyResult<Vec<PyReport>> {
        let reports = check_named(identity, &self.inner, budget).map_err(py_err)?;
        Ok(reports.into_iter().map(|inner| PyReport { inner }).collect())
    }

    fn __repr__(&self) -> String {
        format!("Code(q={}, n={}, m={}, dim={})", self.q(), self.n(), self.m(), self.dim())
    }
}

/// The (q, m)-polymatroid of a code.
#[pyclass(name = "Polymatroid", module = "pyqrank", frozen)]
struct PyPolymatroid {
    inner: QPolymatroid,
}

#[pymethods]
impl PyPolymatroid {
    #[getter]
    fn r(&self) -> i64 {
        self.inner.r()
    }

    /// Rank of every subspace, keyed by its canonical basis text ("" is the zero space).
    fn ranks(&self) -> BTreeMap<String, i64> {
        self.inner.lattice().subspaces().iter().zip(self.inner.ranks()).map(|(s, &r)| (s.key(), r)).collect()
    }

    fn rank(&self, rows: Vec<Vec<u32>>) -> PyResult<i64> {
        let lattice = self.inner.lattice();
        let space = Subspace::span_of_rows(lattice.context(), lattice.ambient_dim(), &rows).map_err(py_err)?;
        self.inner.rank(&space).ok_or_else(|| PyValueError::new_err("subspace is not in this lattice"))
    }

    fn dual(&self) -> Self {
        PyPolymatroid { inner: self.inner.dual() }
    }

    /// Axiom violations as strings; empty when the rank function is a polymatroid.
    fn verify_axioms(&self) -> Vec<String> {
        self.inner.verify_axioms().violations.iter().map(ToString::to_string).collect()
    }

    #[pyo3(signature = (hat=false))]
    fn rgf(&self, hat: bool) -> String {
        self.inner.rank_generating_function(hat).to_string()
    }

    /// `[(exponents, coefficient), ...]` in variables X1..X4.
    #[pyo3(signature = (hat=false))]
    fn rgf_terms(&self, hat: bool) -> Vec<(Vec<i32>, BigInt)> {
        self.inner.rank_generating_function(hat).records()
    }
}

#[pyclass(name = "Report", module = "pyqrank", frozen)]
struct PyReport {
    inner: IdentityReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn identity(&self) -> &str {
        &self.inner.identity
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.pass
    }

    #[getter]
    fn lhs(&self) -> &str {
        &self.inner.lhs
    }

    #[getter]
    fn rhs(&self) -> &str {
        &self.inner.rhs
    }

    #[getter]
    fn witness(&self) -> Option<&str> {
        self.inner.witness.as_deref()
    }

    fn __repr__(&self) -> String {
        format!("Report({}, passed={})", self.inner.identity, self.inner.pass)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
fn gaussian_binomial(a: i64, b: i64, q: i64) -> PyResult<BigInt> {
    if q < 2 {
        return Err(PyValueError::new_err("q must be at least 2"));
    }
    Ok(qseries::gaussian_binomial(a, b, q))
}

#[pyfunction]
fn moebius_coefficient(k: i64, q: i64) -> BigInt {
    qseries::moebius_coefficient(k, q)
}

#[pyfunction]
fn p_j_coeff(i: i64, j: i64, m: i64, n: i64, q: i64) -> PyResult<BigInt> {
    qseries::p_j_coeff(i, j, m, n, q).map_err(py_err)
}

/// Number of subspaces of F_q^n, optionally of one dimension only.
#[pyfunction]
#[pyo3(signature = (n, q, dim=None))]
fn count_subspaces(n: usize, q: u32, dim: Option<usize>) -> BigInt {
    subspace::count_subspaces(n, q, dim)
}

#[pymodule]
fn pyqrank(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCode>()?;
    m.add_class::<PyPolymatroid>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(moebius_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(p_j_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(count_subspaces, m)?)?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    Ok(())
}
