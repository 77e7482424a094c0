//! Python bindings: `import entangle`.

use std::sync::Arc;

use entangle_core::cli_io::verify::run_all;
use entangle_core::cli_io::{run_command, Built, GroupSpec};
use entangle_core::entangle::{
    classify_2q, cyclic_witness, ent_set, ent_set_direct, entangling_subgroups, gl2_gcd, s3_witness, EntContext,
};
use entangle_core::group::{subgroup_classes, Caps, Enumeration, FiniteGroup};
use entangle_core::group_id::identify;
use entangle_core::{Error, Mat2 as CoreMat2};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    if e.is_precondition() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn caps() -> Caps {
    Caps::default()
}

type Rows = [[u32; 2]; 2];

/// A 2x2 invertible matrix mod N.
#[pyclass(name = "Mat2", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyMat2(CoreMat2);

#[pymethods]
impl PyMat2 {
    #[new]
    fn new(a: i64, b: i64, c: i64, d: i64, modulus: u32) -> PyResult<Self> {
        CoreMat2::new(a, b, c, d, modulus).map(PyMat2).map_err(py_err)
    }

    #[getter]
    fn modulus(&self) -> u32 {
        self.0.modulus()
    }

    fn rows(&self) -> Rows {
        self.0.rows()
    }

    fn det(&self) -> u32 {
        self.0.det()
    }

    fn order(&self) -> u64 {
        self.0.order()
    }

    fn inv(&self) -> Self {
        PyMat2(self.0.inv())
    }

    fn pow(&self, k: u64) -> Self {
        PyMat2(self.0.pow(k))
    }

    fn reduce_to(&self, m: u32) -> PyResult<Self> {
        self.0.reduce_to(m).map(PyMat2).map_err(py_err)
    }

    fn __mul__(&self, other: &PyMat2) -> PyResult<Self> {
        self.0.mul(&other.0).map(PyMat2).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Mat2({} mod {})", self.0, self.0.modulus())
    }
}

fn built_from(spec_json: &str) -> PyResult<Built> {
    GroupSpec::parse(spec_json)
        .and_then(|s| s.build(&caps()))
        .map_err(py_err)
}

/// A finite group given by a JSON group spec.
#[pyclass(name = "Group", frozen)]
struct PyGroup {
    group: Arc<FiniteGroup>,
}

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn from_spec(spec_json: &str) -> PyResult<Self> {
        Ok(PyGroup {
            group: built_from(spec_json)?.group,
        })
    }

    #[staticmethod]
    fn gl2(modulus: u32) -> PyResult<Self> {
        let group = FiniteGroup::gl2(modulus, &caps()).map_err(py_err)?;
        Ok(PyGroup { group: Arc::new(group) })
    }

    #[staticmethod]
    fn generated(matrices: Vec<PyMat2>, modulus: u32) -> PyResult<Self> {
        let mats: Vec<CoreMat2> = matrices.into_iter().map(|m| m.0).collect();
        let group = FiniteGroup::generate(&mats, modulus, &caps()).map_err(py_err)?;
        Ok(PyGroup { group: Arc::new(group) })
    }

    #[getter]
    fn order(&self) -> usize {
        self.group.order()
    }

    /// Isomorphism-class label.
    fn identify(&self) -> String {
        identify(&self.group).to_string()
    }

    /// `(order, number of conjugates, class label)` per conjugacy class of
    /// subgroups.
    fn subgroup_classes(&self) -> PyResult<Vec<(usize, usize, String)>> {
        let (classes, _) = subgroup_classes(&self.group, &caps(), None).map_err(py_err)?;
        Ok(classes
            .iter()
            .map(|c| {
                let h = Arc::new(FiniteGroup::from_subgroup(&c.representative));
                (c.representative.order(), c.size, identify(&h).to_string())
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.group.order())
    }
}

/// A subgroup of GL2(Z/pq) with its reduction kernels.
#[pyclass(name = "Context", frozen)]
struct PyContext {
    ctx: EntContext,
}

fn matrices_of(ctx: &EntContext, members: &[u32]) -> Vec<Rows> {
    members.iter().map(|&x| ctx.group.matrix(x).expect("matrix group").rows()).collect()
}

#[pymethods]
impl PyContext {
    #[staticmethod]
    fn from_spec(spec_json: &str) -> PyResult<Self> {
        let built = built_from(spec_json)?;
        let ctx = built.require_context().map_err(py_err)?.clone();
        Ok(PyContext { ctx })
    }

    #[staticmethod]
    fn from_generators(matrices: Vec<PyMat2>, p: u32, q: u32) -> PyResult<Self> {
        let mats: Vec<CoreMat2> = matrices.into_iter().map(|m| m.0).collect();
        let ctx = EntContext::from_generators(&mats, p, q, &caps()).map_err(py_err)?;
        Ok(PyContext { ctx })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.ctx.p
    }

    #[getter]
    fn q(&self) -> u32 {
        self.ctx.q
    }

    #[getter]
    fn order(&self) -> usize {
        self.ctx.group.order()
    }

    #[getter]
    fn d(&self) -> u64 {
        self.ctx.d_value()
    }

    fn entanglement_type(&self) -> String {
        self.ctx.entanglement_type().to_string()
    }

    /// Achievable base-change types. `strategy` is "auto" or "direct".
    #[pyo3(signature = (strategy = "auto"))]
    fn ent_set(&self, strategy: &str) -> PyResult<Vec<String>> {
        let report = match strategy {
            "auto" => ent_set(&self.ctx, &caps(), None),
            "direct" => ent_set_direct(&self.ctx, &caps(), None),
            other => return Err(PyValueError::new_err(format!("unknown strategy {other:?}"))),
        }
        .map_err(py_err)?;
        Ok(report.classes().iter().map(|c| c.to_string()).collect())
    }

    /// Matrices of a subgroup whose base-change type is Z/ell.
    fn cyclic_witness(&self, ell: u64) -> PyResult<Vec<Rows>> {
        let h = cyclic_witness(&self.ctx, ell).map_err(py_err)?;
        Ok(matrices_of(&self.ctx, h.members()))
    }

    /// Base-change type of the subgroup generated by `matrices`.
    fn base_change_type(&self, matrices: Vec<PyMat2>) -> PyResult<String> {
        let elems = matrices
            .iter()
            .map(|m| self.ctx.element(&m.0))
            .collect::<Result<Vec<_>, _>>()
            .map_err(py_err)?;
        let h = entangle_core::group::Subgroup::generated(&self.ctx.group, &elems);
        self.ctx.base_change_type(&h).map(|c| c.to_string()).map_err(py_err)
    }

    /// Quotient types `H / (H ∩ N_p)` of the entangling subgroups.
    #[pyo3(signature = (all = false))]
    fn entangling_types(&self, all: bool) -> PyResult<Vec<String>> {
        let mode = if all { Enumeration::All } else { Enumeration::UpToConjugacy };
        let found = entangling_subgroups(&self.ctx.group, &self.ctx.n_p, &self.ctx.n_q, mode, &caps()).map_err(py_err)?;
        Ok(found
            .iter()
            .map(|e| e.class.as_ref().map_or("?".to_string(), |c| c.to_string()))
            .collect())
    }

    /// The (2,q) case table and computed Ent set, as JSON.
    fn classify_2q(&self) -> PyResult<String> {
        let c = classify_2q(&self.ctx, true, &caps(), None).map_err(py_err)?;
        serde_json_string(&c)
    }

    fn __repr__(&self) -> String {
        format!("Context(p={}, q={}, order={})", self.ctx.p, self.ctx.q, self.ctx.group.order())
    }
}

fn serde_json_string<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// `(sigma, tau, valid)` for the diagonal S3 inside GL2(Z/2q).
#[pyfunction(name = "s3_witness")]
fn py_s3_witness(q: u32) -> PyResult<(Rows, Rows, bool)> {
    let w = s3_witness(q, &caps()).map_err(py_err)?;
    Ok((w.sigma.rows(), w.tau.rows(), w.is_valid()))
}

#[pyfunction(name = "gl2_gcd")]
fn py_gl2_gcd(p: u32, q: u32) -> u64 {
    gl2_gcd(p, q)
}

/// Runs the command line with `args` (without the program name). Returns
/// `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("entangle".to_string()).chain(args);
    let code = run_command(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

/// `(id, passed, detail)` for each item of the reproduction matrix.
#[pyfunction]
fn verify_paper() -> Vec<(u32, bool, String)> {
    run_all(&caps(), None, false)
        .into_iter()
        .map(|r| (r.id, r.passed, r.detail))
        .collect()
}

#[pymodule]
fn entangle(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMat2>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyContext>()?;
    m.add_function(wrap_pyfunction!(py_s3_witness, m)?)?;
    m.add_function(wrap_pyfunction!(py_gl2_gcd, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    Ok(())
}
