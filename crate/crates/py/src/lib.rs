//! Python bindings: the field context, cyclotomic integers and the main
//! distribution/counting operations, for interactive exploration.
//!
//! Field elements cross the boundary as packed coefficient vectors
//! (base-p integers below q, 0 = zero); counts are Python ints.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use apncodes::codes::{
    dual_min_distance_at_most, make_code, weight_distribution as enumerate_weights,
};
use apncodes::cyclotomic::CycInt;
use apncodes::error::Error;
use apncodes::expsums;
use apncodes::field::FieldCtx;
use apncodes::report::run_desk_suite;
use apncodes::tables::{self, TableData, TableId};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::IdentityViolated(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn checked_elem(ctx: &FieldCtx, v: u64) -> PyResult<apncodes::FieldElem> {
    if v < ctx.q() {
        Ok(ctx.elem(v))
    } else {
        Err(PyValueError::new_err(format!(
            "element {v} out of range for q = {}",
            ctx.q()
        )))
    }
}

/// Immutable GF(p^m) context.
#[pyclass(frozen, name = "Field")]
struct PyField {
    ctx: FieldCtx,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, m, modulus=None))]
    fn new(p: u64, m: u32, modulus: Option<Vec<u64>>) -> PyResult<Self> {
        let ctx = FieldCtx::new(p, m, modulus.as_deref()).map_err(to_py_err)?;
        Ok(PyField { ctx })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.ctx.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.ctx.m()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.ctx.q()
    }

    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.ctx.modulus().to_vec()
    }

    /// Trace of a packed element to GF(p).
    fn trace(&self, packed: u64) -> PyResult<u64> {
        if packed >= self.ctx.q() {
            return Err(PyValueError::new_err("element out of range"));
        }
        Ok(self.ctx.trace_packed(packed))
    }

    fn coset(&self, j: u64) -> Vec<u64> {
        self.ctx.coset(j % self.ctx.n()).members
    }

    /// Minimal polynomial coefficients (constant term first, monic).
    fn minimal_polynomial(&self, i: u64) -> Vec<u64> {
        self.ctx.minimal_polynomial(i % self.ctx.n())
    }

    fn descriptor(&self) -> String {
        self.ctx.descriptor().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(p={}, m={}, modulus={:?})",
            self.ctx.p(),
            self.ctx.m(),
            self.ctx.modulus()
        )
    }
}

/// Exact element of Z[w], w a primitive p-th root of unity.
#[pyclass(frozen, name = "Cyc")]
struct PyCyc {
    inner: CycInt,
}

#[pymethods]
impl PyCyc {
    /// The integer n as an element of Z[w_p].
    #[staticmethod]
    fn integer(p: u64, n: BigInt) -> PyCyc {
        PyCyc {
            inner: CycInt::from_int(p, n),
        }
    }

    /// w^t.
    #[staticmethod]
    fn omega(p: u64, t: i64) -> PyCyc {
        PyCyc {
            inner: CycInt::omega_pow(p, t),
        }
    }

    /// Quadratic Gauss sum with square (-1)^((p-1)/2) p.
    #[staticmethod]
    fn gauss(p: u64) -> PyCyc {
        PyCyc {
            inner: CycInt::gauss_sum(p),
        }
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    fn coeffs(&self) -> Vec<BigInt> {
        self.inner.coeffs().to_vec()
    }

    fn conj(&self) -> PyCyc {
        PyCyc {
            inner: self.inner.conj(),
        }
    }

    /// The value as a Python int, or None if it is not rational.
    fn as_integer(&self) -> Option<BigInt> {
        self.inner.as_integer()
    }

    fn __add__(&self, other: &PyCyc) -> PyCyc {
        PyCyc {
            inner: &self.inner + &other.inner,
        }
    }

    fn __sub__(&self, other: &PyCyc) -> PyCyc {
        PyCyc {
            inner: &self.inner - &other.inner,
        }
    }

    fn __mul__(&self, other: &PyCyc) -> PyCyc {
        PyCyc {
            inner: &self.inner * &other.inner,
        }
    }

    fn __neg__(&self) -> PyCyc {
        PyCyc {
            inner: -&self.inner,
        }
    }

    fn __eq__(&self, other: &PyCyc) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        self.inner.pretty()
    }
}

/// T0(a,b) = sum_x w^{Tr(a x^{p^k+1} + b x^2)} for packed a, b.
#[pyfunction]
fn t0(field: &PyField, a: u64, b: u64, k: u64) -> PyResult<PyCyc> {
    let ctx = &field.ctx;
    expsums::t0(ctx, checked_elem(ctx, a)?, checked_elem(ctx, b)?, k)
        .map(|inner| PyCyc { inner })
        .map_err(to_py_err)
}

/// T(a,b) for a certified exponent (direct sum, checked against the
/// reduction identity).
#[pyfunction]
fn t(field: &PyField, a: u64, b: u64, e: u64) -> PyResult<PyCyc> {
    let ctx = &field.ctx;
    expsums::t(ctx, checked_elem(ctx, a)?, checked_elem(ctx, b)?, e)
        .map(|inner| PyCyc { inner })
        .map_err(to_py_err)
}

/// S(a,b,c) for a certified exponent, same double-route check.
#[pyfunction]
fn s(field: &PyField, a: u64, b: u64, c: u64, e: u64) -> PyResult<PyCyc> {
    let ctx = &field.ctx;
    expsums::s(
        ctx,
        checked_elem(ctx, a)?,
        checked_elem(ctx, b)?,
        checked_elem(ctx, c)?,
        e,
    )
    .map(|inner| PyCyc { inner })
    .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (field, k, budget=None))]
fn t0_distribution(field: &PyField, k: u64, budget: Option<u64>) -> PyResult<Vec<(PyCyc, BigInt)>> {
    let dist = expsums::t0_distribution(
        &field.ctx,
        k,
        budget.unwrap_or_else(apncodes::default_budget),
    )
    .map_err(to_py_err)?;
    Ok(dist
        .entries
        .into_iter()
        .map(|(v, c)| (PyCyc { inner: v }, c))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (field, k, budget=None))]
fn pair_distribution(
    field: &PyField,
    k: u64,
    budget: Option<u64>,
) -> PyResult<Vec<((PyCyc, PyCyc), BigInt)>> {
    let dist = expsums::pair_distribution(
        &field.ctx,
        k,
        budget.unwrap_or_else(apncodes::default_budget),
    )
    .map_err(to_py_err)?;
    Ok(dist
        .entries
        .into_iter()
        .map(|((a, b), c)| ((PyCyc { inner: a }, PyCyc { inner: b }), c))
        .collect())
}

/// Weight -> multiplicity for the cyclic code with the given parity-check
/// exponents, by exhaustive enumeration.
#[pyfunction]
#[pyo3(signature = (field, exponents, budget=None))]
fn weight_distribution(
    field: &PyField,
    exponents: Vec<u64>,
    budget: Option<u64>,
) -> PyResult<std::collections::BTreeMap<u64, BigInt>> {
    let code = make_code(&field.ctx, &exponents).map_err(to_py_err)?;
    let dist = enumerate_weights(
        &field.ctx,
        &code,
        budget.unwrap_or_else(apncodes::default_budget),
    )
    .map_err(to_py_err)?;
    Ok(dist.entries)
}

/// Smallest dual-codeword weight up to `bound`, or None.
#[pyfunction]
#[pyo3(signature = (field, exponents, bound=5, budget=None))]
fn dual_min_distance(
    field: &PyField,
    exponents: Vec<u64>,
    bound: u64,
    budget: Option<u64>,
) -> PyResult<Option<u64>> {
    let code = make_code(&field.ctx, &exponents).map_err(to_py_err)?;
    dual_min_distance_at_most(
        &field.ctx,
        &code,
        bound,
        budget.unwrap_or_else(apncodes::default_budget),
    )
    .map_err(to_py_err)
}

/// Certificate for an exponent: witnesses, parity, residue class, tables.
#[pyfunction]
fn classify_exponent(py: Python<'_>, p: u64, m: u32, e: u64) -> PyResult<Py<PyDict>> {
    let cert = tables::classify_exponent(p, m, e);
    let d = PyDict::new(py);
    d.set_item("e", cert.e)?;
    d.set_item("coset_rep", cert.coset_rep)?;
    d.set_item("cc_witness", cert.cc_witness)?;
    d.set_item("thm1i_witness", cert.thm1i_witness)?;
    d.set_item("parity", if cert.parity_even { "even" } else { "odd" })?;
    d.set_item(
        "tables",
        cert.table_ids.iter().map(|t| t.code()).collect::<Vec<_>>(),
    )?;
    Ok(d.into())
}

/// The APN exponent families over GF(3^m) as (e, family, companion_d).
#[pyfunction]
fn apn_exponent_families(m: u32) -> Vec<(u64, u8, u64)> {
    tables::apn_exponent_families(m)
        .into_iter()
        .map(|f| (f.e, f.family, f.companion_d))
        .collect()
}

/// Closed-form table by id (e.g. "WD-I", "T0-DIST", "COR2"):
/// weight tables come back as {weight: count}, value tables as a list of
/// (Cyc, count), pair tables as a list of ((Cyc, Cyc), count).
#[pyfunction]
fn generate_table(py: Python<'_>, id: &str, p: u64, m: u32) -> PyResult<Py<PyAny>> {
    let id = TableId::from_code(id)
        .ok_or_else(|| PyValueError::new_err(format!("unknown table id '{id}'")))?;
    let data = tables::generate_table(id, p, m).map_err(to_py_err)?;
    Ok(match data {
        TableData::Weights(w) => w.entries.into_pyobject(py)?.into_any().unbind(),
        TableData::Values(v) => v
            .entries
            .into_iter()
            .map(|(z, c)| (PyCyc { inner: z }, c))
            .collect::<Vec<_>>()
            .into_pyobject(py)?
            .into_any()
            .unbind(),
        TableData::Pairs(pr) => pr
            .entries
            .into_iter()
            .map(|((a, b), c)| ((PyCyc { inner: a }, PyCyc { inner: b }), c))
            .collect::<Vec<_>>()
            .into_pyobject(py)?
            .into_any()
            .unbind(),
    })
}

/// Runs the desk verification suite; returns (pass, report_json).
#[pyfunction]
#[pyo3(signature = (p, m, budget=None))]
fn verify_desk(p: u64, m: u32, budget: Option<u64>) -> PyResult<(bool, String)> {
    let report = run_desk_suite(p, m, budget.unwrap_or_else(apncodes::default_budget), None)
        .map_err(to_py_err)?;
    Ok((report.pass(), report.to_json().to_string()))
}

#[pymodule]
fn apncodes_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCyc>()?;
    m.add_function(wrap_pyfunction!(t0, m)?)?;
    m.add_function(wrap_pyfunction!(t, m)?)?;
    m.add_function(wrap_pyfunction!(s, m)?)?;
    m.add_function(wrap_pyfunction!(t0_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(pair_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(weight_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(dual_min_distance, m)?)?;
    m.add_function(wrap_pyfunction!(classify_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(apn_exponent_families, m)?)?;
    m.add_function(wrap_pyfunction!(generate_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify_desk, m)?)?;
    Ok(())
}
