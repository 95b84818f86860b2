//! Python bindings: `import nilclean`.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nilclean_core::dsl::{self, Context, DslError, Elaborated};
use nilclean_core::theorems::{self, Analysis, CorpusOptions, TheoremReport};
use nilclean_core::{
    canonical_hash, enumerate_bimodules, FinAbGroup, GroupType, RingTables, ValidatedRing,
    DEFAULT_BUDGET,
};

create_exception!(nilclean, NilcleanError, PyValueError, "Invalid input.");
create_exception!(
    nilclean,
    AxiomViolation,
    NilcleanError,
    "Tables violate an axiom."
);

fn err(e: DslError) -> PyErr {
    if e.is_axiom_violation() {
        AxiomViolation::new_err(e.to_string())
    } else {
        NilcleanError::new_err(e.to_string())
    }
}

fn input_err(e: impl ToString) -> PyErr {
    NilcleanError::new_err(e.to_string())
}

fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn context(base_dir: Option<PathBuf>, budget: Option<u64>) -> Context {
    Context {
        base_dir: base_dir.unwrap_or_else(|| PathBuf::from(".")),
        budget: budget.unwrap_or(DEFAULT_BUDGET),
    }
}

fn build(expr: &str) -> PyResult<Elaborated> {
    dsl::build(expr, &Context::default()).map_err(err)
}

/// A validated finite ring, built from an expression such as `"UT2(Z2)"`.
#[pyclass(frozen, module = "nilclean")]
struct Ring {
    inner: Elaborated,
}

impl Ring {
    fn ring(&self) -> &ValidatedRing {
        &self.inner.ring
    }

    fn check(&self, x: usize) -> PyResult<usize> {
        if x < self.ring().order() {
            Ok(x)
        } else {
            Err(PyIndexError::new_err(format!(
                "element {x} out of range 0..{}",
                self.ring().order()
            )))
        }
    }
}

#[pymethods]
impl Ring {
    #[new]
    #[pyo3(signature = (expr, base_dir=None, budget=None))]
    fn new(expr: &str, base_dir: Option<PathBuf>, budget: Option<u64>) -> PyResult<Self> {
        let inner = dsl::build(expr, &context(base_dir, budget)).map_err(err)?;
        Ok(Ring { inner })
    }

    /// Ring from raw row-major Cayley tables; index 0 must be the zero.
    #[staticmethod]
    fn from_tables(order: usize, one: usize, add: Vec<u32>, mul: Vec<u32>) -> PyResult<Self> {
        let ring = ValidatedRing::new(RingTables {
            order,
            one,
            add,
            mul,
        })
        .map_err(|e| err(e.into()))?;
        Ok(Ring {
            inner: Elaborated {
                ring: ring.into(),
                triangular: None,
            },
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.ring().order()
    }

    #[getter]
    fn one(&self) -> usize {
        self.ring().one()
    }

    #[getter]
    fn hash(&self) -> String {
        canonical_hash(self.ring())
    }

    #[getter]
    fn is_triangular(&self) -> bool {
        self.inner.triangular.is_some()
    }

    fn add(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.ring().add(self.check(a)?, self.check(b)?))
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.ring().mul(self.check(a)?, self.check(b)?))
    }

    fn neg(&self, a: usize) -> PyResult<usize> {
        Ok(self.ring().neg(self.check(a)?))
    }

    fn idempotents(&self) -> Vec<usize> {
        self.ring().idempotents()
    }

    fn nilpotents(&self) -> Vec<usize> {
        self.ring().nilpotents()
    }

    fn units(&self) -> Vec<usize> {
        self.ring().units()
    }

    fn eta(&self, a: usize) -> PyResult<Vec<usize>> {
        Ok(self.ring().eta(self.check(a)?).members)
    }

    /// `Nin(R)`.
    fn nil_clean_index(&self) -> usize {
        self.ring().nil_clean_index().nin
    }

    /// `{"nin", "witness", "histogram"}` with the histogram keyed by |η(a)|.
    fn index_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.ring().nil_clean_index_par();
        let d = PyDict::new(py);
        d.set_item("nin", r.nin)?;
        d.set_item("witness", r.witness)?;
        d.set_item("histogram", r.histogram)?;
        Ok(d)
    }

    fn is_nil_clean(&self) -> bool {
        self.ring().is_nil_clean()
    }

    fn additive_type(&self) -> PyResult<String> {
        FinAbGroup::additive_group_of(self.ring())
            .classify()
            .map(|t| t.to_string())
            .map_err(input_err)
    }

    /// `(a, w, b)` for a triangular ring.
    fn decode(&self, x: usize) -> PyResult<(usize, usize, usize)> {
        let t = self
            .inner
            .triangular
            .as_ref()
            .ok_or_else(|| input_err("not a triangular ring"))?;
        Ok(t.decode(self.check(x)?))
    }

    fn encode(&self, a: usize, w: usize, b: usize) -> PyResult<usize> {
        let t = self
            .inner
            .triangular
            .as_ref()
            .ok_or_else(|| input_err("not a triangular ring"))?;
        let (na, nm, nb) = t.shape();
        if a >= na || w >= nm || b >= nb {
            return Err(PyIndexError::new_err(format!(
                "({a}, {w}, {b}) outside shape ({na}, {nm}, {nb})"
            )));
        }
        Ok(t.encode(a, w, b))
    }

    /// `(add, mul)` as flat row-major lists.
    fn tables(&self) -> (Vec<u32>, Vec<u32>) {
        let t = self.ring().tables();
        (t.add.clone(), t.mul.clone())
    }

    fn __len__(&self) -> usize {
        self.order()
    }

    fn __repr__(&self) -> String {
        format!("Ring(order={}, hash='{}')", self.order(), self.hash())
    }
}

#[pyfunction]
fn index(expr: &str) -> PyResult<usize> {
    Ok(build(expr)?.ring.nil_clean_index().nin)
}

#[pyfunction]
fn eta(expr: &str, element: usize) -> PyResult<Vec<usize>> {
    Ring {
        inner: build(expr)?,
    }
    .eta(element)
}

#[pyfunction]
fn idempotents(expr: &str) -> PyResult<Vec<usize>> {
    Ok(build(expr)?.ring.idempotents())
}

#[pyfunction]
fn nilpotents(expr: &str) -> PyResult<Vec<usize>> {
    Ok(build(expr)?.ring.nilpotents())
}

#[pyfunction]
fn units(expr: &str) -> PyResult<Vec<usize>> {
    Ok(build(expr)?.ring.units())
}

/// Normalizes a group type (`"C2xC3"` → `"C6"`).
#[pyfunction]
fn classify(group_type: &str) -> PyResult<String> {
    group_type
        .parse::<GroupType>()
        .map(|t| t.to_string())
        .map_err(input_err)
}

/// Runs one check (`main`, `l25`, `l26`, `t41`, `p42`, `eta`) on a triangular
/// instance and returns the report dicts.
#[pyfunction]
fn verify<'py>(py: Python<'py>, theorem: &str, expr: &str) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let e = build(expr)?;
    let spec = e
        .triangular
        .as_ref()
        .ok_or_else(|| input_err(format!("{expr} is not triangular")))?;
    let a = Analysis::new(spec).map_err(input_err)?.with_label(expr);
    let reports: Vec<TheoremReport> = match theorem {
        "main" => vec![a.verify_main().map_err(input_err)?],
        "l25" => a.lemma_bounds().into(),
        "l26" => vec![a.lemma_two_power()],
        "t41" => vec![a.index2_sufficiency()],
        "p42" => vec![a.index3_sufficiency()],
        "eta" => vec![a.eta_crosscheck_all()],
        other => return Err(input_err(format!("unknown theorem '{other}'"))),
    };
    reports
        .iter()
        .map(|r| from_json(py, &serde_json::to_string(r).expect("serializable")))
        .collect()
}

/// Number of A–B-bimodule structures on the group of the given type.
#[pyfunction]
#[pyo3(signature = (a, b, group_type, budget=None))]
fn count_bimodules(a: &str, b: &str, group_type: &str, budget: Option<u64>) -> PyResult<usize> {
    let (a, b) = (build(a)?.ring, build(b)?.ring);
    let t: GroupType = group_type.parse().map_err(input_err)?;
    enumerate_bimodules(
        &a,
        &b,
        &FinAbGroup::from_type(&t),
        budget.unwrap_or(DEFAULT_BUDGET),
    )
    .map(|v| v.len())
    .map_err(|e| err(e.into()))
}

/// Summary of a sweep over the default catalog.
#[pyfunction]
#[pyo3(signature = (m_orders=vec![2, 3, 4]))]
fn corpus_summary(py: Python<'_>, m_orders: Vec<usize>) -> PyResult<Bound<'_, PyAny>> {
    let opts = CorpusOptions {
        m_orders,
        budget: DEFAULT_BUDGET,
        ..Default::default()
    };
    let run = py
        .detach(|| theorems::run_corpus(&dsl::default_catalog(), &opts))
        .map_err(input_err)?;
    from_json(
        py,
        &serde_json::to_string(&run.summary).expect("serializable"),
    )
}

#[pymodule]
fn nilclean(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", nilclean_core::TOOL_VERSION)?;
    m.add("NilcleanError", m.py().get_type::<NilcleanError>())?;
    m.add("AxiomViolation", m.py().get_type::<AxiomViolation>())?;
    m.add_class::<Ring>()?;
    m.add_function(wrap_pyfunction!(index, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(idempotents, m)?)?;
    m.add_function(wrap_pyfunction!(nilpotents, m)?)?;
    m.add_function(wrap_pyfunction!(units, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(count_bimodules, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_summary, m)?)?;
    Ok(())
}
