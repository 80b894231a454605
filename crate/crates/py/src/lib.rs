//! Python module `graphpack`.

use std::sync::Arc;
use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use graphpack::curve::{self, CurveAction, GeneratingVector};
use graphpack::group::{self, FiniteGroup, GroupElement, DEFAULT_ORDER_CAP};
use graphpack::packing::{self, PackingOptions};
use graphpack::search::{run_search, SearchSpec};
use graphpack::slope::{self, AdmissibleConfiguration};
use graphpack::verify;
use num_rational::BigRational;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, x: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),))
}

fn indices(xs: &[GroupElement]) -> Vec<usize> {
    xs.iter().map(|x| x.index()).collect()
}

/// A finite group stored as a multiplication table. Elements are the
/// integers `0..order`, with `0` the identity.
#[pyclass(frozen, name = "Group", module = "graphpack", skip_from_py_object)]
struct PyGroup {
    inner: Arc<FiniteGroup>,
}

impl PyGroup {
    fn element(&self, i: usize) -> PyResult<GroupElement> {
        self.inner.element(i).ok_or_else(|| {
            PyValueError::new_err(format!("{i} is not an element of a group of order {}", self.inner.order()))
        })
    }

    fn elements(&self, xs: &[usize]) -> PyResult<Vec<GroupElement>> {
        xs.iter().map(|&i| self.element(i)).collect()
    }
}

#[pymethods]
impl PyGroup {
    /// Builds a named builtin such as `"sl2(3)"` or `"product(cyclic(2),alternating(4))"`.
    #[staticmethod]
    fn builtin(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: Arc::new(group::builtin(spec).map_err(value_error)?) })
    }

    /// Closure of permutations given as 0-based image lists.
    #[staticmethod]
    #[pyo3(signature = (name, degree, generators, order_cap = DEFAULT_ORDER_CAP))]
    fn from_permutations(name: &str, degree: usize, generators: Vec<Vec<usize>>, order_cap: usize) -> PyResult<Self> {
        let g = FiniteGroup::from_permutations(name, degree, &generators, order_cap).map_err(value_error)?;
        Ok(Self { inner: Arc::new(g) })
    }

    #[staticmethod]
    fn from_table(name: &str, table: Vec<Vec<usize>>) -> PyResult<Self> {
        let g = FiniteGroup::from_multiplication_table(name, &table).map_err(value_error)?;
        Ok(Self { inner: Arc::new(g) })
    }

    /// Every group in a catalog file's text.
    #[staticmethod]
    fn parse_catalog(text: &str) -> PyResult<Vec<Self>> {
        let groups = group::parse_catalog(text.as_bytes()).map_err(value_error)?;
        Ok(groups.into_iter().map(|g| Self { inner: Arc::new(g) }).collect())
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?}, order={})", self.inner.name(), self.inner.order())
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.inner.mul(self.element(a)?, self.element(b)?).index())
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        Ok(self.inner.inv(self.element(a)?).index())
    }

    fn element_order(&self, a: usize) -> PyResult<usize> {
        Ok(self.inner.element_order(self.element(a)?))
    }

    fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        self.inner.conjugacy_classes().iter().map(|c| c.to_vec()).collect()
    }

    fn generates(&self, xs: Vec<usize>) -> PyResult<bool> {
        Ok(self.inner.generates(&self.elements(&xs)?))
    }

    /// Element acting as the given 0-based permutation, if the group came
    /// from permutations and contains it.
    fn element_of_permutation(&self, perm: Vec<u32>) -> Option<usize> {
        self.inner.element_of_permutation(&perm).map(GroupElement::index)
    }

    fn multiplication_table(&self) -> Vec<Vec<usize>> {
        self.inner.multiplication_table()
    }
}

/// Branching data `h=0;2,3,7`, also accepted as `(2,3,7)`.
#[pyclass(frozen, name = "CurveType", module = "graphpack", eq, hash, skip_from_py_object)]
#[derive(PartialEq, Eq, Hash)]
struct PyCurveType {
    inner: curve::CurveType,
}

#[pymethods]
impl PyCurveType {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: spec.parse().map_err(value_error)? })
    }

    #[getter]
    fn quotient_genus(&self) -> u32 {
        self.inner.quotient_genus()
    }

    #[getter]
    fn branch_orders(&self) -> Vec<u32> {
        self.inner.branch_orders().to_vec()
    }

    /// Genus of a curve with an action of `order` and this type.
    fn genus(&self, order: u64) -> PyResult<u64> {
        curve::riemann_hurwitz_genus(order, self.inner.quotient_genus(), self.inner.branch_orders())
            .map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CurveType({:?})", self.inner.to_string())
    }
}

type TypeRow<'py> = (PyCurveType, Bound<'py, PyAny>, Bound<'py, PyAny>);

/// `[(type, m coefficient, order coefficient)]` for the genus-zero types with `λ < 2/3`.
#[pyfunction]
fn exceptional_types(py: Python<'_>) -> PyResult<Vec<TypeRow<'_>>> {
    curve::enumerate_exceptional_types()
        .into_iter()
        .map(|e| {
            Ok((
                PyCurveType { inner: e.curve_type },
                fraction(py, &e.m_coefficient)?,
                fraction(py, &e.order_coefficient)?,
            ))
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (group, curve_type, distinct = false))]
fn generating_vectors(group: &PyGroup, curve_type: &PyCurveType, distinct: bool) -> PyResult<Vec<Vec<usize>>> {
    let vs = curve::enumerate_generating_vectors(&group.inner, &curve_type.inner, distinct).map_err(value_error)?;
    Ok(vs.iter().map(|v| indices(&v.elements)).collect())
}

fn action(group: &PyGroup, curve_type: &PyCurveType, vector: &[usize]) -> PyResult<CurveAction> {
    let v = GeneratingVector::new(group.elements(vector)?);
    CurveAction::new(group.inner.clone(), curve_type.inner.clone(), v).map_err(value_error)
}

/// Elements fixing a point of the curve defined by the vector.
#[pyfunction]
fn fixed_points(group: &PyGroup, curve_type: &PyCurveType, vector: Vec<usize>) -> PyResult<Vec<usize>> {
    Ok(action(group, curve_type, &vector)?.fixed_set().to_vec())
}

/// Largest set of automorphisms with pairwise disjoint graphs. Returns a
/// dict with `m`, `witness`, `genus`, `bound`, `time_bounded`, `nodes`.
#[pyfunction]
#[pyo3(signature = (group, curve_type, vector, budget = None))]
fn max_packing<'py>(
    py: Python<'py>,
    group: &PyGroup,
    curve_type: &PyCurveType,
    vector: Vec<usize>,
    budget: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let a = action(group, curve_type, &vector)?;
    let time_budget = budget.map(Duration::try_from_secs_f64).transpose().map_err(value_error)?;
    let options = PackingOptions { time_budget, seed_lower_bound: None };
    let r = py.detach(|| packing::max_packing(&group.inner, a.fixed_set(), &options)).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("m", r.m)?;
    d.set_item("witness", indices(&r.witness))?;
    d.set_item("genus", a.genus())?;
    d.set_item("bound", a.mu_bound())?;
    d.set_item("time_bounded", r.time_bounded)?;
    d.set_item("nodes", r.nodes_explored)?;
    Ok(d)
}

#[pyfunction]
fn brute_force_max_packing(group: &PyGroup, curve_type: &PyCurveType, vector: Vec<usize>) -> PyResult<usize> {
    let a = action(group, curve_type, &vector)?;
    packing::brute_force_max_packing(&group.inner, a.fixed_set()).map_err(value_error)
}

#[pyfunction]
fn simple_galois_slope(py: Python<'_>, genus: u64, r_list: Vec<u64>) -> PyResult<Bound<'_, PyAny>> {
    if genus < 2 {
        return Err(PyValueError::new_err(format!("genus {genus} is below 2")));
    }
    fraction(py, &slope::simple_galois_slope(genus, &r_list))
}

/// Chern numbers, signature and slope of a configuration in TOML form.
#[pyfunction]
fn invariants<'py>(py: Python<'py>, config: &str) -> PyResult<Bound<'py, PyDict>> {
    let c = AdmissibleConfiguration::from_toml_str(config).map_err(value_error)?;
    let inv = slope::invariants(&c).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("c2", fraction(py, &inv.c2)?)?;
    d.set_item("c1sq", fraction(py, &inv.c1sq)?)?;
    d.set_item("sigma", fraction(py, &inv.sigma)?)?;
    d.set_item("slope", fraction(py, &inv.slope)?)?;
    Ok(d)
}

/// Best packing per (type, genus, group) over `groups`; one dict per record.
#[pyfunction]
#[pyo3(signature = (groups, max_genus, types = None, budget = None, distinct = false))]
fn search<'py>(
    py: Python<'py>,
    groups: Vec<PyRef<'py, PyGroup>>,
    max_genus: u64,
    types: Option<Vec<PyRef<'py, PyCurveType>>>,
    budget: Option<f64>,
    distinct: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut spec = SearchSpec::new(max_genus, groups.iter().map(|g| g.inner.clone()).collect());
    if let Some(types) = types {
        spec = spec.with_types(types.iter().map(|t| t.inner.clone()).collect());
    }
    spec.per_instance_budget = budget.map(Duration::try_from_secs_f64).transpose().map_err(value_error)?;
    spec.require_distinct = distinct;
    let records = py.detach(|| run_search(&spec)).map_err(value_error)?;
    records
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("group", &r.group)?;
            d.set_item("type", r.curve_type.tuple_string())?;
            d.set_item("genus", r.genus)?;
            d.set_item("vector_classes", r.vector_classes)?;
            d.set_item("m", r.m)?;
            d.set_item("best_vector", indices(&r.best_vector.elements))?;
            d.set_item("witness", indices(&r.witness))?;
            d.set_item("ratio", fraction(py, &r.ratio)?)?;
            d.set_item("slope_all_threes", fraction(py, &r.slope_all_threes)?)?;
            d.set_item("optimal_slope", fraction(py, &r.optimal_slope)?)?;
            d.set_item("truncated", r.truncated)?;
            Ok(d)
        })
        .collect()
}

/// Runs the SL(2,3) genus 2 checks; returns their names or raises.
#[pyfunction]
fn verify_paper() -> PyResult<Vec<&'static str>> {
    verify::verify_paper().map_err(value_error)
}

#[pymodule(name = "graphpack")]
fn graphpack_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyCurveType>()?;
    m.add_function(wrap_pyfunction!(exceptional_types, m)?)?;
    m.add_function(wrap_pyfunction!(generating_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(max_packing, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_max_packing, m)?)?;
    m.add_function(wrap_pyfunction!(simple_galois_slope, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    Ok(())
}
