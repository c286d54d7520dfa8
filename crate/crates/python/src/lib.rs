//! Python bindings: moment tables, Arnoldi, reconstruction and spectra.

// pyo3 0.22 macro expansion of `PyResult` returns
#![allow(clippy::useless_conversion)]

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;

use bergshape_core as core;
use bergshape_core::arnoldi::DiagonalIndexing;
use bergshape_core::{io, Error};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::MomentsNotPositiveDefinite { .. }
        | Error::NoConvergence { .. }
        | Error::EvaluationOverflow
        | Error::ZeroArgument
        | Error::PrecisionTooLow { .. } => PyArithmeticError::new_err(err.to_string()),
        Error::Io(_) => PyOSError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn ctx(bits: u32) -> PyResult<core::PrecisionContext> {
    core::PrecisionContext::new(bits).map_err(to_py)
}

fn c64(z: &core::Complex) -> Complex64 {
    let (re, im) = z.to_f64();
    Complex64::new(re, im)
}

fn indexing(name: &str) -> PyResult<DiagonalIndexing> {
    DiagonalIndexing::parse(name).map_err(to_py)
}

/// A domain given as a reference name (`"triangle"`), a JSON description,
/// or a list of polygon vertices.
#[derive(FromPyObject)]
enum DomainArg {
    Text(String),
    Vertices(Vec<Complex64>),
}

fn domain_spec(domain: DomainArg, c: core::PrecisionContext) -> PyResult<core::DomainSpec> {
    match domain {
        DomainArg::Text(t) if t.trim_start().starts_with('{') => core::DomainSpec::from_json(&t, c).map_err(to_py),
        DomainArg::Text(t) => Ok(core::NamedDomain::parse(&t, None).map_err(to_py)?.spec()),
        DomainArg::Vertices(v) => {
            let vertices: Vec<core::Complex> = v.iter().map(|z| core::Complex::from_f64(c, z.re, z.im)).collect();
            core::moments::validate_polygon(&vertices).map_err(to_py)?;
            Ok(core::DomainSpec::Polygon { vertices })
        }
    }
}

/// Hermitian table of complex area moments `mu[k, j]`.
#[pyclass(name = "MomentMatrix", module = "bergshape")]
#[derive(Clone)]
pub struct PyMomentMatrix {
    inner: core::MomentMatrix,
}

#[pymethods]
impl PyMomentMatrix {
    /// Moments of `domain` up to `degree` at `bits` of precision.
    #[staticmethod]
    #[pyo3(signature = (domain, degree, bits = 113, nodes = None))]
    fn from_domain(domain: DomainArg, degree: usize, bits: u32, nodes: Option<usize>) -> PyResult<Self> {
        let c = ctx(bits)?;
        let inner = domain_spec(domain, c)?.moments(degree, c, nodes).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (text, bits = None))]
    fn from_csv(text: &str, bits: Option<u32>) -> PyResult<Self> {
        let bits = bits.or_else(|| io::header_precision(text)).unwrap_or(113);
        let inner = io::read_moments_csv(text, ctx(bits)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn to_csv(&self) -> String {
        io::write_moments_csv(&self.inner)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn bits(&self) -> u32 {
        self.inner.ctx().bits()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    fn __getitem__(&self, index: (usize, usize)) -> PyResult<Complex64> {
        self.inner.entry(index.0, index.1).map(c64).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("MomentMatrix(degree={}, bits={}, area={})", self.degree(), self.bits(), self.area())
    }
}

/// Upper Hessenberg matrix; column `j` holds rows `0..=j+1`.
#[pyclass(name = "HessenbergMatrix", module = "bergshape")]
#[derive(Clone)]
pub struct PyHessenbergMatrix {
    inner: core::HessenbergMatrix,
}

#[pymethods]
impl PyHessenbergMatrix {
    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::read_hessenberg_csv(text).map_err(to_py)? })
    }

    fn to_csv(&self) -> String {
        io::write_hessenberg_csv(&self.inner)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn __getitem__(&self, index: (usize, usize)) -> PyResult<Complex64> {
        if index.1 >= self.inner.order() {
            return Err(PyValueError::new_err(format!("column {} out of range", index.1)));
        }
        Ok(c64(&self.inner.get(index.0, index.1)))
    }

    /// Eigenvalues of the principal `n x n` block.
    fn eigenvalues(&self, n: usize) -> PyResult<Vec<Complex64>> {
        let s = core::hessenberg_eigenvalues(&self.inner, n).map_err(to_py)?;
        Ok(s.values.iter().map(c64).collect())
    }

    /// Coefficients (ascending) of the polynomial whose zeros are
    /// `eigenvalues(n)`.
    fn recurrence_polynomial(&self, n: usize) -> PyResult<Vec<Complex64>> {
        let p = core::recurrence_polynomial(&self.inner, n).map_err(to_py)?;
        Ok(p.coeffs().iter().map(c64).collect())
    }

    /// `b^(n)` from this matrix.
    #[pyo3(signature = (n, indexing = "zero-based"))]
    fn scaled_capacity(&self, n: usize, indexing: &str) -> PyResult<f64> {
        let z = core::arnoldi::scaled_capacity_indexed(&self.inner, n, self::indexing(indexing)?).map_err(to_py)?;
        Ok(z.re.to_f64())
    }

    /// `b_k^(n)` from this matrix.
    #[pyo3(signature = (n, k, indexing = "zero-based"))]
    fn scaled_coefficient(&self, n: usize, k: usize, indexing: &str) -> PyResult<Complex64> {
        core::arnoldi::scaled_coefficient_indexed(&self.inner, n, k, self::indexing(indexing)?)
            .map(|z| c64(&z))
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("HessenbergMatrix(order={}, bits={})", self.inner.order(), self.inner.ctx().bits())
    }
}

/// Exterior map `Psi(w) = b w + sum_k c_k w^{-k}`.
#[pyclass(name = "LaurentMap", module = "bergshape")]
#[derive(Clone)]
pub struct PyLaurentMap {
    inner: core::LaurentMap,
}

#[pymethods]
impl PyLaurentMap {
    #[new]
    #[pyo3(signature = (b, coeffs, bits = 113))]
    fn new(b: f64, coeffs: Vec<Complex64>, bits: u32) -> PyResult<Self> {
        let c = ctx(bits)?;
        let coeffs = coeffs.iter().map(|z| core::Complex::from_f64(c, z.re, z.im)).collect();
        let inner = core::LaurentMap::new(core::scalar::real(c, b), coeffs).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (a, b, bits = 113))]
    fn ellipse(a: f64, b: f64, bits: u32) -> PyResult<Self> {
        let c = ctx(bits)?;
        Ok(Self { inner: core::NamedDomain::Ellipse { a, b }.reference_map(c, 0) })
    }

    #[staticmethod]
    #[pyo3(signature = (bits = 113))]
    fn hypocycloid(bits: u32) -> PyResult<Self> {
        Ok(Self { inner: core::LaurentMap::hypocycloid3(ctx(bits)?) })
    }

    /// Exterior map of the equilateral triangle, cut after `order` terms.
    #[staticmethod]
    #[pyo3(signature = (order, bits = 113))]
    fn triangle(order: usize, bits: u32) -> PyResult<Self> {
        Ok(Self { inner: core::triangle_coefficients(order, ctx(bits)?) })
    }

    #[staticmethod]
    #[pyo3(signature = (text, bits = 113))]
    fn from_json(text: &str, bits: u32) -> PyResult<Self> {
        Ok(Self { inner: io::laurent_from_json(text, ctx(bits)?).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        io::laurent_to_json(&self.inner)
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b().to_f64()
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().iter().map(c64).collect()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn __call__(&self, w: Complex64) -> PyResult<Complex64> {
        let w = core::Complex::from_f64(self.inner.ctx(), w.re, w.im);
        core::laurent_eval(&self.inner, &w).map(|z| c64(&z)).map_err(to_py)
    }

    /// `samples` boundary points `Psi(e^{i theta})`.
    #[pyo3(signature = (samples = 720))]
    fn curve(&self, samples: usize) -> PyResult<Vec<Complex64>> {
        let pts = core::curve_points(&self.inner, samples).map_err(to_py)?;
        Ok(pts.iter().map(|s| c64(&s.point)).collect())
    }

    /// Upper Hessenberg Toeplitz matrix of order `n`.
    fn toeplitz(&self, n: usize) -> PyHessenbergMatrix {
        PyHessenbergMatrix { inner: core::toeplitz_matrix(&self.inner, n) }
    }

    /// Coefficients (ascending) of the Faber polynomial of the second kind `G_n`.
    fn faber(&self, n: usize) -> Vec<Complex64> {
        let seq = core::faber_second_kind(&self.inner, n);
        seq.polys[n].coeffs().iter().map(c64).collect()
    }

    fn __repr__(&self) -> String {
        format!("LaurentMap(b={}, order={})", self.b(), self.order())
    }
}

/// Arnoldi Gram-Schmidt to degree `n`; returns the Hessenberg matrix.
#[pyfunction]
#[pyo3(signature = (moments, n, strict_precision = false))]
fn arnoldi(moments: &PyMomentMatrix, n: usize, strict_precision: bool) -> PyResult<PyHessenbergMatrix> {
    let options = core::ArnoldiOptions { strict_precision };
    let (_, h) = core::arnoldi_orthonormalize_with(&moments.inner, n, options).map_err(to_py)?;
    Ok(PyHessenbergMatrix { inner: h })
}

/// Truncated exterior map from the scaled diagonals; `m` defaults to `n // 2`.
#[pyfunction]
#[pyo3(signature = (moments, n, m = None, indexing = "zero-based", strict_precision = false))]
fn reconstruct(
    moments: &PyMomentMatrix,
    n: usize,
    m: Option<usize>,
    indexing: &str,
    strict_precision: bool,
) -> PyResult<PyLaurentMap> {
    let m = m.unwrap_or_else(|| core::reconstruction::default_order(n));
    let options = core::ArnoldiOptions { strict_precision };
    let inner = core::reconstruct_with(&moments.inner, n, m, options, self::indexing(indexing)?).map_err(to_py)?;
    Ok(PyLaurentMap { inner })
}

/// Largest distance between the two maps over `samples` points of `|w| = 1`.
#[pyfunction]
#[pyo3(signature = (reference, estimate, samples = 720))]
fn sup_distance(reference: &PyLaurentMap, estimate: &PyLaurentMap, samples: usize) -> PyResult<f64> {
    core::sup_distance(&reference.inner, &estimate.inner, samples).map_err(to_py)
}

/// Convergence table rows as dicts with keys `n`, `b`, `t`, `s`, `bk`, `tk`, `sk`.
#[pyfunction]
#[pyo3(signature = (domain, n_list, k = 2, indexing = "zero-based", bits = 212, reference = None))]
fn rate_table(
    py: Python<'_>,
    domain: DomainArg,
    n_list: Vec<usize>,
    k: usize,
    indexing: &str,
    bits: u32,
    reference: Option<&PyLaurentMap>,
) -> PyResult<Vec<PyObject>> {
    let c = ctx(bits)?;
    let spec = domain_spec(domain, c)?;
    let order = n_list.last().copied().unwrap_or(0).max(k).max(10);
    let reference = match reference {
        Some(r) => Some(r.inner.clone()),
        None => spec.reference_map(c, order),
    };
    let rows = core::rate_table(&spec, reference.as_ref(), &n_list, k, self::indexing(indexing)?, c).map_err(to_py)?;
    rows.iter()
        .map(|r| {
            let d = pyo3::types::PyDict::new_bound(py);
            d.set_item("n", r.n)?;
            d.set_item("b", r.capacity.re.to_f64())?;
            d.set_item("t", r.capacity_error)?;
            d.set_item("s", r.capacity_rate)?;
            d.set_item("bk", c64(&r.coefficient))?;
            d.set_item("tk", r.coefficient_error.as_ref().map(c64))?;
            d.set_item("sk", r.coefficient_rate)?;
            Ok(d.into_any().unbind())
        })
        .collect()
}

/// Zeros of the polynomial with ascending coefficients `coeffs`.
#[pyfunction]
#[pyo3(signature = (coeffs, bits = 113))]
fn polynomial_zeros(coeffs: Vec<Complex64>, bits: u32) -> PyResult<Vec<Complex64>> {
    let c = ctx(bits)?;
    let p = core::ComplexPolynomial::from_coeffs(coeffs.iter().map(|z| core::Complex::from_f64(c, z.re, z.im)).collect());
    let s = core::polynomial_zeros_oracle(&p).map_err(to_py)?;
    Ok(s.values.iter().map(c64).collect())
}

#[pymodule]
pub fn bergshape(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMomentMatrix>()?;
    m.add_class::<PyHessenbergMatrix>()?;
    m.add_class::<PyLaurentMap>()?;
    m.add_function(wrap_pyfunction!(arnoldi, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(sup_distance, m)?)?;
    m.add_function(wrap_pyfunction!(rate_table, m)?)?;
    m.add_function(wrap_pyfunction!(polynomial_zeros, m)?)?;
    Ok(())
}
