//! Python bindings: graph families, norm brackets, kernel classification,
//! tail spectra and polynomial roots.

use graph_shift::kernel::{classify_kernel, inductive_kernel, level_power_sums, BranchingBounds, KernelClass};
use graph_shift::lp::norm_bounds;
use graph_shift::poly::{family_polynomial, nonzero_roots_in_open_interval, roots_in_open_interval, PolyFamily, ROOT_TOL};
use graph_shift::spectra::{full_spectrum, infinite_comb_membership, infinite_comb_spectrum};
use graph_shift::{
    euclidean_ratio, gamma_sequence, make_homogeneous, make_infinite_comb, make_tail_graph, make_tree, Error,
    Exponent, GraphFamily, Homogeneous, NormBracket, Spectrum, TailEigenpair, TailKind, TreeSpec,
};
use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceCap { .. } => PyMemoryError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Accepts a float (including `float("inf")`) or the string `"inf"`.
#[derive(FromPyObject)]
enum PyExponent {
    Float(f64),
    Text(String),
}

impl PyExponent {
    fn get(self) -> PyResult<Exponent> {
        match self {
            PyExponent::Float(p) => Exponent::new(p),
            PyExponent::Text(s) => s.parse(),
        }
        .map_err(py_err)
    }
}

fn json_to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn exponent_to_py(py: Python<'_>, p: Exponent) -> PyResult<Py<PyAny>> {
    Ok(p.value().into_pyobject(py)?.into_any().unbind())
}

/// A locally finite infinite graph with a distinguished root.
#[pyclass(name = "Family", module = "graph_shift_py", frozen)]
struct PyFamily {
    inner: GraphFamily,
}

fn family(r: graph_shift::Result<GraphFamily>) -> PyResult<PyFamily> {
    r.map(|inner| PyFamily { inner }).map_err(py_err)
}

#[pymethods]
impl PyFamily {
    #[staticmethod]
    fn lattice(d: usize) -> PyResult<Self> {
        family(make_homogeneous(Homogeneous::Lattice(d)))
    }

    #[staticmethod]
    fn triangular() -> PyResult<Self> {
        family(make_homogeneous(Homogeneous::Triangular))
    }

    #[staticmethod]
    fn hexagonal() -> PyResult<Self> {
        family(make_homogeneous(Homogeneous::Hexagonal))
    }

    #[staticmethod]
    fn ladder() -> PyResult<Self> {
        family(make_homogeneous(Homogeneous::Ladder))
    }

    #[staticmethod]
    fn ray() -> PyResult<Self> {
        family(make_homogeneous(Homogeneous::Ray))
    }

    #[staticmethod]
    fn kite(n: usize) -> PyResult<Self> {
        family(make_tail_graph(TailKind::Kite(n)))
    }

    #[staticmethod]
    fn fly_swatter(n: usize) -> PyResult<Self> {
        family(make_tail_graph(TailKind::FlySwatter(n)))
    }

    #[staticmethod]
    fn comb_with_tail(n: usize) -> PyResult<Self> {
        family(make_tail_graph(TailKind::CombWithTail(n)))
    }

    #[staticmethod]
    fn infinite_comb() -> Self {
        PyFamily { inner: make_infinite_comb() }
    }

    #[staticmethod]
    fn alternating_tree(m: u64, big_m: u64) -> PyResult<Self> {
        family(make_tree(TreeSpec::Alternating { m, big_m }))
    }

    #[staticmethod]
    #[pyo3(signature = (k, root_children=None))]
    fn almost_regular_tree(k: u64, root_children: Option<u64>) -> PyResult<Self> {
        family(make_tree(TreeSpec::AlmostRegular { k, root_children }))
    }

    /// Any tree from its JSON description, e.g. `{"kind": "stretched", "M": 2, "t": "squares"}`.
    #[staticmethod]
    fn tree(spec: &str) -> PyResult<Self> {
        let spec: TreeSpec = serde_json::from_str(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
        family(make_tree(spec))
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn degree_bound(&self) -> usize {
        self.inner.degree_bound()
    }

    #[getter]
    fn is_tree(&self) -> bool {
        self.inner.is_tree()
    }

    /// Sphere sizes `gamma(0..=nmax)`.
    fn gamma(&self, py: Python<'_>, nmax: usize) -> PyResult<Vec<u64>> {
        py.detach(|| gamma_sequence(&self.inner, nmax)).map(|g| g.counts).map_err(py_err)
    }

    fn euclidean_ratio(&self, py: Python<'_>, n: usize) -> PyResult<f64> {
        py.detach(|| gamma_sequence(&self.inner, n + 1).and_then(|g| euclidean_ratio(&g, n))).map_err(py_err)
    }

    /// Certified `[lower, upper]` for the operator norm on `l^p`.
    #[pyo3(signature = (p, budget=60))]
    fn norm_bounds(&self, py: Python<'_>, p: PyExponent, budget: usize) -> PyResult<PyNormBracket> {
        let p = p.get()?;
        py.detach(|| norm_bounds(&self.inner, p, budget)).map(|inner| PyNormBracket { inner }).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Family({})", self.inner.name())
    }
}

#[pyclass(name = "NormBracket", module = "graph_shift_py", frozen)]
struct PyNormBracket {
    inner: NormBracket,
}

#[pymethods]
impl PyNormBracket {
    #[getter]
    fn lower(&self) -> f64 {
        self.inner.lower
    }

    #[getter]
    fn upper(&self) -> f64 {
        self.inner.upper
    }

    #[getter]
    fn p(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        exponent_to_py(py, self.inner.p)
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family.clone()
    }

    #[getter]
    fn upper_formula(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        json_to_py(py, &self.inner.upper_formula)
    }

    #[getter]
    fn witness(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        json_to_py(py, &self.inner.witness)
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        json_to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("NormBracket({}, p={}, [{}, {}])", self.inner.family, self.inner.p, self.inner.lower, self.inner.upper)
    }
}

#[pyclass(name = "KernelClass", module = "graph_shift_py", frozen)]
struct PyKernelClass {
    inner: KernelClass,
}

#[pymethods]
impl PyKernelClass {
    /// `"Trivial"`, `"Nontrivial"` or `"Undetermined"`.
    #[getter]
    fn verdict(&self) -> String {
        self.inner.verdict.to_string()
    }

    #[getter]
    fn theorem(&self) -> String {
        self.inner.theorem.clone()
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.m
    }

    #[getter(M)]
    fn big_m(&self) -> u64 {
        self.inner.big_m
    }

    #[getter]
    fn p(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        exponent_to_py(py, self.inner.p)
    }

    fn __repr__(&self) -> String {
        format!("KernelClass(m={}, M={}, p={}, {})", self.inner.m, self.inner.big_m, self.inner.p, self.inner.verdict)
    }
}

/// Classifies `ker S` on `l^p` for a tree with branching between `m` and `M`.
#[pyfunction]
#[pyo3(signature = (m, big_m, p, big_n=0))]
fn classify(m: u64, big_m: u64, p: PyExponent, big_n: usize) -> PyResult<PyKernelClass> {
    let bounds = BranchingBounds::new(m, big_m, big_n).map_err(py_err)?;
    Ok(PyKernelClass { inner: classify_kernel(&bounds, p.get()?) })
}

/// Even-level sums `sigma_k` of `|f|^p` for the inductive kernel element of an alternating tree.
#[pyfunction]
fn kernel_level_sums(py: Python<'_>, m: u64, big_m: u64, depth: usize, p: PyExponent) -> PyResult<Vec<f64>> {
    let p = p.get()?;
    py.detach(|| {
        let tree = make_tree(TreeSpec::Alternating { m, big_m })?;
        let f = inductive_kernel(&tree, depth)?;
        level_power_sums(&f, p)
    })
    .map(|s| s.sigma)
    .map_err(py_err)
}

#[pyclass(name = "Eigenpair", module = "graph_shift_py", frozen)]
struct PyEigenpair {
    inner: TailEigenpair,
}

#[pymethods]
impl PyEigenpair {
    #[getter]
    fn eigenvalue(&self) -> f64 {
        self.inner.lambda
    }

    #[getter]
    fn b(&self) -> Option<f64> {
        self.inner.b
    }

    #[getter]
    fn branch(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        json_to_py(py, &self.inner.branch)
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn embedded(&self) -> bool {
        self.inner.embedded
    }

    fn __repr__(&self) -> String {
        format!("Eigenpair({:?}, lambda={}, residual={:e})", self.inner.branch, self.inner.lambda, self.inner.residual)
    }
}

#[pyclass(name = "Spectrum", module = "graph_shift_py", frozen)]
struct PySpectrum {
    inner: Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn essential(&self) -> Vec<(f64, f64)> {
        self.inner.essential.iter().map(|[a, b]| (*a, *b)).collect()
    }

    #[getter]
    fn point(&self) -> Vec<PyEigenpair> {
        self.inner.point.iter().map(|e| PyEigenpair { inner: *e }).collect()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    #[pyo3(signature = (lambda, tol=1e-9))]
    fn contains(&self, lambda: f64, tol: f64) -> bool {
        self.inner.contains(lambda, tol)
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        json_to_py(py, &self.inner)
    }
}

/// Spectrum of `"kite"`, `"fly_swatter"` or `"comb"` with finite part of size `n`.
#[pyfunction]
fn tail_spectrum(py: Python<'_>, kind: &str, n: usize) -> PyResult<PySpectrum> {
    let kind = match kind {
        "kite" => TailKind::Kite(n),
        "fly_swatter" => TailKind::FlySwatter(n),
        "comb" => TailKind::CombWithTail(n),
        other => return Err(PyValueError::new_err(format!("unknown tail graph {other:?}"))),
    };
    py.detach(|| full_spectrum(kind)).map(|inner| PySpectrum { inner }).map_err(py_err)
}

#[pyfunction]
fn infinite_comb() -> PySpectrum {
    PySpectrum { inner: infinite_comb_spectrum() }
}

#[pyfunction]
fn in_infinite_comb_spectrum(lambda: f64) -> bool {
    infinite_comb_membership(lambda).lambda_in_spectrum
}

fn poly_family(kind: &str, n: usize) -> PyResult<PolyFamily> {
    match kind {
        "kite" => Ok(PolyFamily::KiteP(n)),
        "comb" => Ok(PolyFamily::CombH(n)),
        other => Err(PyValueError::new_err(format!("unknown polynomial family {other:?}"))),
    }
}

/// Integer coefficients, constant term first.
#[pyfunction]
fn polynomial(kind: &str, n: usize) -> PyResult<Vec<i64>> {
    let poly = family_polynomial(poly_family(kind, n)?).map_err(py_err)?;
    let too_big = || PyValueError::new_err("coefficients exceed 64 bits");
    poly.integer_coeffs()
        .ok_or_else(too_big)?
        .iter()
        .map(|c| i64::try_from(c).map_err(|_| too_big()))
        .collect()
}

/// Real roots in the open interval `(lo, hi)`.
#[pyfunction]
#[pyo3(signature = (kind, n, lo=-1.0, hi=1.0, tol=ROOT_TOL, exclude_zero=false))]
fn polynomial_roots(
    py: Python<'_>,
    kind: &str,
    n: usize,
    lo: f64,
    hi: f64,
    tol: f64,
    exclude_zero: bool,
) -> PyResult<Vec<f64>> {
    let kind = poly_family(kind, n)?;
    py.detach(|| {
        let poly = family_polynomial(kind)?;
        if exclude_zero {
            nonzero_roots_in_open_interval(&poly, lo, hi, tol)
        } else {
            roots_in_open_interval(&poly, lo, hi, tol)
        }
    })
    .map(|r| r.into_iter().map(|r| r.x).collect())
    .map_err(py_err)
}

#[pymodule]
fn graph_shift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamily>()?;
    m.add_class::<PyNormBracket>()?;
    m.add_class::<PyKernelClass>()?;
    m.add_class::<PyEigenpair>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_level_sums, m)?)?;
    m.add_function(wrap_pyfunction!(tail_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(infinite_comb, m)?)?;
    m.add_function(wrap_pyfunction!(in_infinite_comb_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(polynomial_roots, m)?)?;
    Ok(())
}
