//! Python bindings: `import mquot`.

use mquot_core::cells::{enumerate_cells as enumerate, CactusCell as CoreCell, Shape};
use mquot_core::chain::{
    cacti_complex as core_cacti, homology, ChainComplex as CoreComplex, Coefficients, HomologyResult,
};
use mquot_core::cohen::{self, Monomial as CoreMonomial};
use mquot_core::embedding::{self, Configuration, WeightedPoint as CorePoint};
use mquot_core::equivariant::full_quotient_complex as core_full_quotient;
use mquot_core::lens::{self, LensSpec as CoreLens};
use mquot_core::verify;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: mquot_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_shape(s: &str) -> PyResult<Shape> {
    match s {
        "based" | "linear" => Ok(Shape::Linear),
        "unbased" | "cyclic" => Ok(Shape::Cyclic),
        _ => Err(PyValueError::new_err(format!(
            "unknown shape {s:?}; use 'based' or 'unbased'"
        ))),
    }
}

fn parse_coeff(s: &str) -> PyResult<Coefficients> {
    s.parse().map_err(err)
}

#[pyclass(frozen, module = "mquot")]
struct CactusCell(CoreCell);

#[pymethods]
impl CactusCell {
    #[new]
    #[pyo3(signature = (word, n, shape = "based"))]
    fn new(word: Vec<u8>, n: u8, shape: &str) -> PyResult<Self> {
        Ok(CactusCell(CoreCell::new(word, parse_shape(shape)?, n).map_err(err)?))
    }

    #[getter]
    fn word(&self) -> Vec<u8> {
        self.0.word().to_vec()
    }

    #[getter]
    fn n(&self) -> u8 {
        self.0.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn shape(&self) -> &'static str {
        match self.0.shape() {
            Shape::Linear => "based",
            Shape::Cyclic => "unbased",
        }
    }

    /// `(sign, face)` for every codimension-one face.
    fn facets(&self) -> Vec<(i8, CactusCell)> {
        self.0
            .facets()
            .into_iter()
            .map(|f| (f.sign, CactusCell(f.cell)))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("CactusCell({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __eq__(&self, other: &CactusCell) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }
}

#[pyclass(frozen, module = "mquot")]
struct Homology(HomologyResult);

#[pymethods]
impl Homology {
    #[getter]
    fn coefficients(&self) -> String {
        self.0.coefficients.to_string()
    }

    #[getter]
    fn betti(&self) -> Vec<usize> {
        self.0.betti_trimmed()
    }

    /// Invariant factors above one, by degree.
    #[getter]
    fn torsion(&self) -> Vec<Vec<u64>> {
        self.0.degrees.iter().map(|d| d.torsion.clone()).collect()
    }

    #[getter]
    fn groups(&self) -> Vec<String> {
        self.0.describe()
    }

    #[getter]
    fn euler_characteristic(&self) -> i64 {
        self.0.euler_characteristic()
    }

    fn is_point(&self) -> bool {
        self.0.is_point()
    }

    fn is_homology_sphere(&self, dim: usize) -> bool {
        lens::is_homology_sphere(&self.0, dim)
    }

    fn __repr__(&self) -> String {
        format!("Homology({}; {})", self.0.coefficients, self.0.describe().join(", "))
    }
}

#[pyclass(frozen, module = "mquot")]
struct ChainComplex(CoreComplex);

#[pymethods]
impl ChainComplex {
    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims().to_vec()
    }

    #[getter]
    fn euler_characteristic(&self) -> i64 {
        self.0.euler_characteristic()
    }

    /// Boundary matrix `C_d -> C_(d-1)` as `(row, col, value)` triplets.
    fn boundary(&self, d: usize) -> PyResult<Vec<(usize, usize, i64)>> {
        let m = self
            .0
            .boundary(d)
            .ok_or_else(|| PyValueError::new_err(format!("no boundary in degree {d}")))?;
        Ok((0..m.ncols())
            .flat_map(|j| m.column(j).iter().map(move |&(i, v)| (i, j, v)))
            .collect())
    }

    #[pyo3(signature = (coeff = "z"))]
    fn homology(&self, py: Python<'_>, coeff: &str) -> PyResult<Homology> {
        let c = parse_coeff(coeff)?;
        let h = py.detach(|| homology(&self.0, c)).map_err(err)?;
        Ok(Homology(h))
    }

    fn __repr__(&self) -> String {
        format!("ChainComplex(dims={:?})", self.0.dims())
    }
}

#[pyclass(frozen, module = "mquot")]
struct Monomial(CoreMonomial);

#[pymethods]
impl Monomial {
    #[getter]
    fn name(&self) -> String {
        self.0.to_string()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn weight(&self) -> usize {
        self.0.weight()
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.0.prime()
    }

    fn contains_bracket(&self) -> bool {
        self.0.contains_bracket()
    }

    /// `(coefficient mod p, monomial)`, or `None` when the image vanishes.
    fn delta(&self) -> PyResult<Option<(u64, Monomial)>> {
        Ok(cohen::delta(&self.0, self.0.prime())
            .map_err(err)?
            .map(|(c, m)| (c, Monomial(m))))
    }

    fn __repr__(&self) -> String {
        format!("Monomial({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(frozen, module = "mquot")]
struct LensSpec(CoreLens);

#[pymethods]
impl LensSpec {
    #[new]
    fn new(m: u64, weights: Vec<u64>) -> PyResult<Self> {
        Ok(LensSpec(CoreLens::new(m, weights).map_err(err)?))
    }

    /// `L(n; n-1, ..., 2)`.
    #[staticmethod]
    fn moduli(n: usize) -> PyResult<Self> {
        Ok(LensSpec(CoreLens::moduli(n).map_err(err)?))
    }

    #[getter]
    fn m(&self) -> u64 {
        self.0.m
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.0.weights.clone()
    }

    #[getter]
    fn sphere_dim(&self) -> usize {
        self.0.sphere_dim()
    }

    fn is_free(&self) -> bool {
        self.0.is_free()
    }

    fn complex(&self) -> PyResult<ChainComplex> {
        Ok(ChainComplex(lens::lens_chain_complex(&self.0).map_err(err)?))
    }

    fn homology(&self, py: Python<'_>) -> PyResult<Homology> {
        Ok(Homology(py.detach(|| lens::lens_homology(&self.0)).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(frozen, module = "mquot")]
struct WeightedPoint(CorePoint);

#[pymethods]
impl WeightedPoint {
    #[getter]
    fn coords(&self) -> Vec<Complex64> {
        self.0.coords.clone()
    }

    #[getter]
    fn weights(&self) -> Vec<u32> {
        self.0.weights.clone()
    }

    /// The image under `t`, scaling coordinate `k` by `t^w_k`.
    fn act(&self, t: Complex64) -> WeightedPoint {
        WeightedPoint(self.0.act(t))
    }

    #[pyo3(signature = (other, tol = 1e-9))]
    fn equals(&self, other: &WeightedPoint, tol: f64) -> PyResult<bool> {
        embedding::weighted_equal(&self.0, &other.0, tol).map_err(err)
    }

    fn __repr__(&self) -> String {
        let coords: Vec<String> = self.0.coords.iter().map(|z| format!("{z}")).collect();
        format!("WeightedPoint([{}], weights={:?})", coords.join(", "), self.0.weights)
    }
}

#[pyfunction]
#[pyo3(signature = (n, shape = "based"))]
fn enumerate_cells(n: usize, shape: &str) -> PyResult<Vec<Vec<CactusCell>>> {
    let e = enumerate(n, parse_shape(shape)?).map_err(err)?;
    Ok(e.by_dim
        .into_iter()
        .map(|l| l.into_iter().map(CactusCell).collect())
        .collect())
}

#[pyfunction]
#[pyo3(signature = (n, shape = "based"))]
fn cacti_complex(py: Python<'_>, n: usize, shape: &str) -> PyResult<ChainComplex> {
    let shape = parse_shape(shape)?;
    Ok(ChainComplex(py.detach(|| core_cacti(n, shape)).map_err(err)?))
}

/// Cellular model of `C_n / (S^1 x S_n)`.
#[pyfunction]
fn full_quotient_complex(py: Python<'_>, n: usize) -> PyResult<ChainComplex> {
    Ok(ChainComplex(py.detach(|| core_full_quotient(n)).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (n, p, degree = None))]
fn cohen_basis(n: usize, p: u64, degree: Option<usize>) -> PyResult<Vec<Monomial>> {
    Ok(cohen::basis(n, p, degree)
        .map_err(err)?
        .into_iter()
        .map(Monomial)
        .collect())
}

#[pyfunction]
fn coker_delta_dims(n: usize, p: u64) -> PyResult<Vec<usize>> {
    cohen::coker_delta_dims(n, p).map_err(err)
}

#[pyfunction]
fn equivariant_series(n: usize, p: u64, max_degree: usize) -> PyResult<Vec<usize>> {
    cohen::equivariant_series(n, p, max_degree).map_err(err)
}

#[pyfunction]
fn manifold_obstruction<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = lens::manifold_obstruction(n).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("lens", r.lens.to_string())?;
    d.set_item("sphere_dim", r.sphere_dim)?;
    d.set_item("lens_homology", r.lens_homology)?;
    d.set_item("local_homology", r.local_homology)?;
    d.set_item("is_homology_sphere", r.is_homology_sphere)?;
    d.set_item("obstruction", r.obstruction)?;
    Ok(d)
}

#[pyfunction]
fn embed(points: Vec<Complex64>) -> PyResult<WeightedPoint> {
    let config = Configuration::new(points).map_err(err)?;
    Ok(WeightedPoint(embedding::embed(&config).map_err(err)?))
}

/// Runs one verification check by id; returns `(passed, detail lines)`.
#[pyfunction]
fn run_check(py: Python<'_>, id: &str) -> PyResult<(bool, Vec<String>)> {
    let c = py
        .detach(|| verify::check(id))
        .ok_or_else(|| PyValueError::new_err(format!("unknown check {id:?}")))?;
    Ok((c.passed, c.detail))
}

#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    verify::CHECK_IDS.to_vec()
}

#[pymodule]
fn mquot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<CactusCell>()?;
    m.add_class::<ChainComplex>()?;
    m.add_class::<Homology>()?;
    m.add_class::<Monomial>()?;
    m.add_class::<LensSpec>()?;
    m.add_class::<WeightedPoint>()?;
    m.add_function(wrap_pyfunction!(enumerate_cells, m)?)?;
    m.add_function(wrap_pyfunction!(cacti_complex, m)?)?;
    m.add_function(wrap_pyfunction!(full_quotient_complex, m)?)?;
    m.add_function(wrap_pyfunction!(cohen_basis, m)?)?;
    m.add_function(wrap_pyfunction!(coker_delta_dims, m)?)?;
    m.add_function(wrap_pyfunction!(equivariant_series, m)?)?;
    m.add_function(wrap_pyfunction!(manifold_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    Ok(())
}
