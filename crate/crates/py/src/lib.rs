//! Python bindings for `rpp-core`.
//!
//! Structured results (solutions, certificates, reports) cross the boundary
//! as JSON and come back as plain dicts.

use num_bigint::BigUint;
use num_rational::Ratio;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rpp_core::cayley::{self, CayleyGraph};
use rpp_core::group::{self, Elem, DEFAULT_CAP};
use rpp_core::perm::{schreier_sims, Permutation, SubgroupChain};
use rpp_core::smallbias::{self, construct_for_group};
use rpp_core::solver::{self, Mode, RppInstance, RppSolution, SolveOptions, Strategy};
use rpp_core::{GroupSpec, Subgroup, Tuple};
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyDict>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))?.cast_into::<PyDict>().map_err(Into::into)
}

fn from_dict<T: serde::de::DeserializeOwned>(py: Python<'_>, value: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = py.import("json")?.call_method1("dumps", (value,))?.extract()?;
    serde_json::from_str(&text).map_err(err)
}

fn tuple(coords: Vec<Elem>) -> Tuple {
    Tuple::new(coords)
}

/// Coordinates as Python ints (a `Vec<u8>` would become `bytes`).
fn coords(t: &Tuple) -> Vec<u32> {
    t.0.iter().map(|&c| c as u32).collect()
}

fn subgroup(n: usize, generators: Vec<Vec<Elem>>) -> Subgroup {
    Subgroup::new(n, generators.into_iter().map(tuple).collect())
}

/// `"1/4"`, `"3"`, or a `fractions.Fraction` (through its string form).
fn ratio(value: &Bound<'_, PyAny>) -> PyResult<Ratio<u64>> {
    let text = value.str()?.to_string();
    let r: Ratio<u64> = text.trim().parse().map_err(|_| err(format!("not a fraction: {text}")))?;
    if *r.numer() == 0 {
        return Err(err("epsilon must be positive"));
    }
    Ok(r)
}

/// A finite group `G`: abelian by invariant factors, or symmetric.
#[pyclass(name = "Group", module = "rpp", frozen)]
struct PyGroup {
    inner: GroupSpec,
}

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn abelian(factors: Vec<u32>) -> PyResult<Self> {
        Ok(Self { inner: GroupSpec::abelian(&factors).map_err(err)? })
    }

    #[staticmethod]
    fn cyclic(m: u32) -> PyResult<Self> {
        Ok(Self { inner: GroupSpec::cyclic(m).map_err(err)? })
    }

    #[staticmethod]
    fn symmetric(k: usize) -> PyResult<Self> {
        Ok(Self { inner: GroupSpec::symmetric(k).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn identity(&self) -> Elem {
        self.inner.identity()
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_commutative()
    }

    fn op(&self, a: Elem, b: Elem) -> PyResult<Elem> {
        let m = self.inner.order();
        if a as usize >= m || b as usize >= m {
            return Err(err(format!("elements must be below {m}")));
        }
        Ok(self.inner.op(a, b))
    }

    /// Coordinatewise product in `G^n`.
    fn mul(&self, x: Vec<Elem>, y: Vec<Elem>) -> PyResult<Vec<u32>> {
        Ok(coords(&self.inner.mul(&tuple(x), &tuple(y)).map_err(err)?))
    }

    fn inverse(&self, x: Vec<Elem>) -> PyResult<Vec<u32>> {
        let x = tuple(x);
        self.inner.check_tuple(&x).map_err(err)?;
        Ok(coords(&self.inner.inv(&x)))
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        match self.inner.invariant_factors() {
            Some(f) => format!("Group.abelian({f:?})"),
            None => format!("Group(order={})", self.inner.order()),
        }
    }
}

/// A multiset `S ⊆ G^n`, typically a small-bias space.
#[pyclass(name = "BiasedSpace", module = "rpp", frozen)]
struct PySpace {
    inner: smallbias::BiasedSpace,
}

#[pymethods]
impl PySpace {
    /// A symmetric `ε`-biased multiset in `G^n` for abelian `G`.
    #[staticmethod]
    fn construct(group: &PyGroup, n: usize, eps: &Bound<'_, PyAny>) -> PyResult<Self> {
        let eps = ratio(eps)?;
        let inner = construct_for_group(&group.inner, n, eps).map_err(err)?;
        Ok(Self { inner })
    }

    /// A multiset from explicit tuples, optionally closed under inverses.
    #[staticmethod]
    #[pyo3(signature = (group, n, items, symmetrize = false))]
    fn from_items(group: &PyGroup, n: usize, items: Vec<Vec<Elem>>, symmetrize: bool) -> PyResult<Self> {
        let s = smallbias::BiasedSpace::from_multiset(&group.inner, n, items.into_iter().map(tuple)).map_err(err)?;
        let inner = if symmetrize { smallbias::symmetrize(&s) } else { s };
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_dict(py: Python<'_>, value: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self { inner: from_dict(py, value)? })
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Total size counting multiplicity.
    fn __len__(&self) -> usize {
        self.inner.size() as usize
    }

    #[getter]
    fn construction(&self) -> String {
        format!("{:?}", self.inner.construction).to_lowercase()
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    /// `(tuple, multiplicity)` pairs in index order.
    fn items(&self) -> Vec<(Vec<u32>, u64)> {
        self.inner.iter().map(|(t, c)| (coords(t), c)).collect()
    }

    /// Largest nontrivial character sum divided by the size.
    fn bias(&self, py: Python<'_>) -> PyResult<f64> {
        py.detach(|| smallbias::measure_bias(&self.inner)).map_err(err)
    }

    /// Second-largest absolute eigenvalue of the normalized Cayley graph.
    fn spectral_gap_lambda(&self, py: Python<'_>) -> PyResult<f64> {
        let g = CayleyGraph::new(self.inner.clone()).map_err(err)?;
        py.detach(|| cayley::lambda(&g)).map(|r| r.lambda).map_err(err)
    }

    /// Exact probability that a uniform `t`-step walk never leaves `H`.
    fn confinement(&self, py: Python<'_>, generators: Vec<Vec<Elem>>, t: usize) -> PyResult<f64> {
        let group = self.inner.group().clone();
        let h = subgroup(self.inner.n(), generators);
        h.validate(&group).map_err(err)?;
        let chain = SubgroupChain::new(&group, &h).map_err(err)?;
        let g = CayleyGraph::new(self.inner.clone()).map_err(err)?;
        py.detach(|| cayley::confinement_exact(&g, &|x: &Tuple| chain.contains(x), t)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("BiasedSpace(n={}, size={}, distinct={})", self.inner.n(), self.inner.size(), self.inner.distinct())
    }
}

/// Order of the subgroup of `G^n` generated by `generators`.
#[pyfunction]
fn subgroup_order(group: &PyGroup, n: usize, generators: Vec<Vec<Elem>>) -> PyResult<BigUint> {
    let h = subgroup(n, generators);
    h.validate(&group.inner).map_err(err)?;
    h.order(&group.inner).map_err(err)
}

/// `{"order", "delta", "exact"}` for the generated subgroup; `exact` is a
/// `(num, den)` pair when `δ` is rational.
#[pyfunction]
fn dimension<'py>(py: Python<'py>, group: &PyGroup, n: usize, generators: Vec<Vec<Elem>>) -> PyResult<Bound<'py, PyDict>> {
    let h = subgroup(n, generators);
    h.validate(&group.inner).map_err(err)?;
    let d = group::dimension(&group.inner, &h).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("order", d.order)?;
    out.set_item("delta", d.delta)?;
    out.set_item("exact", d.exact.map(|r| (*r.numer(), *r.denom())))?;
    Ok(out)
}

/// Hamming distance from `x` to the generated subgroup, by enumeration.
#[pyfunction]
#[pyo3(signature = (group, x, generators, cap = DEFAULT_CAP))]
fn distance(py: Python<'_>, group: &PyGroup, x: Vec<Elem>, generators: Vec<Vec<Elem>>, cap: usize) -> PyResult<usize> {
    let h = subgroup(x.len(), generators);
    h.validate(&group.inner).map_err(err)?;
    let x = tuple(x);
    py.detach(|| group::distance_to_subgroup(&group.inner, &x, &h, cap)).map_err(err)
}

/// Order of the permutation group on `0..degree` generated by image lists.
#[pyfunction]
fn perm_group_order(degree: usize, generators: Vec<Vec<u32>>) -> PyResult<BigUint> {
    let gens = generators.into_iter().map(Permutation::from_images).collect::<Result<Vec<_>, _>>().map_err(err)?;
    Ok(schreier_sims(degree, &gens, None).map_err(err)?.order())
}

#[pyfunction]
fn perm_member(degree: usize, generators: Vec<Vec<u32>>, perm: Vec<u32>) -> PyResult<bool> {
    let gens = generators.into_iter().map(Permutation::from_images).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let p = Permutation::from_images(perm).map_err(err)?;
    schreier_sims(degree, &gens, None).map_err(err)?.member(&p).map_err(err)
}

fn instance(group: &PyGroup, n: usize, generators: Vec<Vec<Elem>>, r: usize, mode: &str) -> PyResult<RppInstance> {
    let mode: Mode = mode.parse().map_err(err)?;
    let inst = RppInstance::new(group.inner.clone(), &subgroup(n, generators), r, mode);
    inst.validate().map_err(err)?;
    Ok(inst)
}

/// A point at distance greater than `r` from `H`, with its certificate.
#[pyfunction]
#[pyo3(signature = (group, n, generators, r, mode = "auto", strategy = "auto", c = None))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    group: &PyGroup,
    n: usize,
    generators: Vec<Vec<Elem>>,
    r: usize,
    mode: &str,
    strategy: &str,
    c: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = instance(group, n, generators, r, mode)?;
    let opts = SolveOptions {
        c: c.map(ratio).transpose()?,
        strategy: strategy.parse::<Strategy>().map_err(err)?,
        ..SolveOptions::default()
    };
    let sol = py.detach(|| solver::solve(&inst, &opts)).map_err(err)?;
    to_dict(py, &sol)
}

/// Re-check a solution dict; raises `ValueError` if it does not hold up.
#[pyfunction]
#[pyo3(signature = (group, n, generators, r, solution, cap = DEFAULT_CAP))]
fn verify<'py>(
    py: Python<'py>,
    group: &PyGroup,
    n: usize,
    generators: Vec<Vec<Elem>>,
    r: usize,
    solution: &Bound<'py, PyAny>,
    cap: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = instance(group, n, generators, r, "auto")?;
    let sol: RppSolution = from_dict(py, solution)?;
    let report = py.detach(|| solver::verify_solution(&inst, &sol, cap)).map_err(err)?;
    to_dict(py, &report)
}

#[pymodule]
fn rpp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(subgroup_order, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(perm_group_order, m)?)?;
    m.add_function(wrap_pyfunction!(perm_member, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
