//! Python bindings: laws, plane trees, looptrees, samplers, constants and suites.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use looplab::lab::constants::{bn_values, c_bar_mu, c_mu};
use looplab::lab::exact::{bias_identity_check, kemperman_check};
use looplab::lab::stats;
use looplab::lab::suites::{self, Scale, SuiteConfig};
use looplab::looptree::{hcirc_from_tree, LoopGraph, LoopKind};
use looplab::sampling;
use looplab::walk::{self, WalkLaw};
use looplab::{LawSpec, OffspringLaw, PlaneTree, RandomSource, TrunkSkeleton};

fn py_err(e: looplab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loop_kind(kind: &str) -> PyResult<LoopKind> {
    match kind {
        "loop" => Ok(LoopKind::Loop),
        "loop-bar" => Ok(LoopKind::LoopBar),
        k => Err(PyValueError::new_err(format!("unknown looptree kind {k:?}"))),
    }
}

fn check_vertex(t: &PlaneTree, v: usize) -> PyResult<()> {
    if v >= t.len() {
        return Err(PyValueError::new_err(format!("vertex {v} out of range for a tree with {} vertices", t.len())));
    }
    Ok(())
}

/// Offspring law. Accepts a short name (`binary`, `geometric`, `heavy-tail`, ...) or a JSON spec.
#[pyclass(name = "Law", frozen)]
struct PyLaw {
    law: OffspringLaw,
}

#[pymethods]
impl PyLaw {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let law = LawSpec::parse(spec).and_then(|s| s.build()).map_err(py_err)?;
        Ok(PyLaw { law })
    }

    #[staticmethod]
    fn finite(probs: Vec<f64>) -> PyResult<Self> {
        Ok(PyLaw { law: OffspringLaw::finite("finite", probs).map_err(py_err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.law.name().to_string()
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.law.mean()
    }

    #[getter]
    fn variance(&self) -> f64 {
        self.law.variance()
    }

    fn is_critical(&self) -> bool {
        self.law.is_critical()
    }

    fn pmf(&self, j: u64) -> f64 {
        self.law.pmf(j)
    }

    fn sample(&self, count: usize, seed: u64, stream: Option<u64>) -> Vec<u64> {
        let mut rng = RandomSource::with_stream(seed, stream.unwrap_or(0)).rng();
        (0..count).map(|_| self.law.sample(&mut rng)).collect()
    }

    fn size_biased(&self) -> PyResult<PyLaw> {
        Ok(PyLaw { law: self.law.size_biased().map_err(py_err)? })
    }

    fn c_mu(&self) -> PyResult<f64> {
        c_mu(&self.law).map_err(py_err)
    }

    fn c_bar_mu(&self) -> PyResult<f64> {
        c_bar_mu(&self.law).map_err(py_err)
    }

    /// Scaling sequence `B_n` at each `n` (made non-decreasing).
    fn b_n(&self, ns: Vec<u64>) -> PyResult<Vec<f64>> {
        bn_values(&self.law, &ns).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Law({:?})", self.law.name())
    }
}

/// Plane tree, vertices in depth-first order.
#[pyclass(name = "Tree", frozen)]
struct PyTree {
    tree: PlaneTree,
}

#[pymethods]
impl PyTree {
    #[new]
    fn new(degrees: Vec<u32>) -> PyResult<Self> {
        Ok(PyTree { tree: PlaneTree::from_degree_sequence(&degrees).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_dsv1(text: &str) -> PyResult<Self> {
        Ok(PyTree { tree: PlaneTree::from_dsv1(text).map_err(py_err)? })
    }

    fn to_dsv1(&self) -> String {
        self.tree.to_dsv1()
    }

    fn __len__(&self) -> usize {
        self.tree.len()
    }

    fn __eq__(&self, other: &PyTree) -> bool {
        self.tree == other.tree
    }

    fn __repr__(&self) -> String {
        format!("Tree(n={})", self.tree.len())
    }

    #[getter]
    fn degrees(&self) -> Vec<u32> {
        self.tree.degrees().to_vec()
    }

    #[getter]
    fn depths(&self) -> Vec<u32> {
        self.tree.depths().to_vec()
    }

    fn parent(&self, v: usize) -> PyResult<Option<usize>> {
        check_vertex(&self.tree, v)?;
        Ok(self.tree.parent(v))
    }

    fn children(&self, v: usize) -> PyResult<Vec<usize>> {
        check_vertex(&self.tree, v)?;
        Ok(self.tree.children(v))
    }

    fn leaf_count(&self) -> usize {
        self.tree.leaf_count()
    }

    fn height(&self) -> u32 {
        self.tree.max_depth()
    }

    fn lukasiewicz(&self) -> Vec<i64> {
        self.tree.lukasiewicz()
    }

    fn contour(&self) -> Vec<u32> {
        self.tree.contour()
    }

    fn mirror(&self) -> PyTree {
        PyTree { tree: self.tree.mirror().0 }
    }

    fn subtree(&self, v: usize) -> PyResult<PyTree> {
        check_vertex(&self.tree, v)?;
        Ok(PyTree { tree: self.tree.subtree_at(v) })
    }

    fn cut(&self, v: usize) -> PyResult<PyTree> {
        check_vertex(&self.tree, v)?;
        Ok(PyTree { tree: self.tree.cut_at(v) })
    }

    fn mrca(&self, i: usize, j: usize) -> PyResult<usize> {
        check_vertex(&self.tree, i)?;
        check_vertex(&self.tree, j)?;
        Ok(self.tree.mrca(i, j))
    }

    fn trunk(&self, v: usize) -> PyResult<PyTrunk> {
        check_vertex(&self.tree, v)?;
        Ok(PyTrunk { sk: self.tree.trunk_of(v).map_err(py_err)? })
    }

    /// Loop distances from the root, computed from the tree alone.
    #[pyo3(signature = (kind = "loop"))]
    fn hcirc(&self, kind: &str) -> PyResult<Vec<u32>> {
        Ok(hcirc_from_tree(&self.tree, loop_kind(kind)?))
    }

    #[pyo3(signature = (kind = "loop"))]
    fn looptree(&self, kind: &str) -> PyResult<PyLoopTree> {
        Ok(PyLoopTree { g: LoopGraph::build(&self.tree, loop_kind(kind)?), n: self.tree.len() })
    }
}

#[pyclass(name = "Trunk", frozen)]
struct PyTrunk {
    sk: TrunkSkeleton,
}

#[pymethods]
impl PyTrunk {
    #[getter]
    fn child_counts(&self) -> Vec<u64> {
        self.sk.child_counts.clone()
    }

    #[getter]
    fn spine_pos(&self) -> Vec<u64> {
        self.sk.spine_pos.clone()
    }

    #[getter]
    fn h(&self) -> usize {
        self.sk.h()
    }

    fn leaf_count(&self) -> u64 {
        self.sk.leaf_count()
    }

    /// The skeleton as a tree, with the index of its spine tip.
    fn to_tree(&self) -> (PyTree, usize) {
        let (tree, tip) = self.sk.to_tree();
        (PyTree { tree }, tip)
    }

    fn __repr__(&self) -> String {
        format!("Trunk(h={}, leaves={})", self.sk.h(), self.sk.leaf_count())
    }
}

#[pyclass(name = "LoopTree", frozen)]
struct PyLoopTree {
    g: LoopGraph,
    n: usize,
}

#[pymethods]
impl PyLoopTree {
    fn vertex_count(&self) -> usize {
        self.g.vertex_count()
    }

    fn edge_count(&self) -> u64 {
        self.g.edge_count()
    }

    /// `(a, b, multiplicity)` between looptree vertices.
    fn edges(&self) -> Vec<(u32, u32, u32)> {
        self.g.edges.clone()
    }

    /// Looptree vertex of every tree vertex.
    fn class_of(&self) -> Vec<u32> {
        self.g.class_of.clone()
    }

    /// Graph distance between the images of tree vertices `u` and `v`.
    fn dist(&self, u: usize, v: usize) -> PyResult<u32> {
        if u >= self.n || v >= self.n {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.g.tree_dist(u, v))
    }

    fn profile_hcirc(&self) -> Vec<u32> {
        self.g.profile_hcirc()
    }

    /// `(length, tree vertex)` of the largest cycle.
    fn largest_cycle(&self) -> (u64, usize) {
        self.g.largest_cycle()
    }

    fn to_edge_csv(&self) -> String {
        self.g.to_edge_csv()
    }
}

/// BGW tree: `mode` is `exact` (|T| = n), `at-least` (|T| ≥ n, subcritical) or `free`.
#[pyfunction]
#[pyo3(signature = (law, n, seed, stream = 0, mode = "exact"))]
fn sample_tree(law: &PyLaw, n: u64, seed: u64, stream: u64, mode: &str) -> PyResult<PyTree> {
    let mut rng = RandomSource::with_stream(seed, stream).rng();
    let tree = match mode {
        "exact" => sampling::sample_bgw_exact_n(&law.law, n, &mut rng),
        "at-least" => {
            let s = sampling::at_least_n_sampler(&law.law, n);
            sampling::sample_bgw_at_least_n(&s, &law.law, 1_000_000_000, &mut rng)
        }
        "free" => sampling::sample_bgw_capped(&law.law, n, &mut rng),
        m => return Err(PyValueError::new_err(format!("unknown mode {m:?}"))),
    }
    .map_err(py_err)?;
    Ok(PyTree { tree })
}

/// `Trunk*_h` for a critical law.
#[pyfunction]
#[pyo3(signature = (law, h, seed, stream = 0))]
fn sample_trunk_star(law: &PyLaw, h: usize, seed: u64, stream: u64) -> PyResult<PyTrunk> {
    let sb = law.law.size_biased().map_err(py_err)?;
    let sk = sampling::sample_trunk_star(&sb, h, &mut RandomSource::with_stream(seed, stream).rng());
    Ok(PyTrunk { sk })
}

/// Walk `W_0..W_horizon` with increments `K − 1`; conditioned on `ζ ≥ n` when `n > 1`.
#[pyfunction]
#[pyo3(signature = (law, horizon, seed, n = 0, stream = 0))]
fn sample_walk(law: &PyLaw, horizon: usize, seed: u64, n: usize, stream: u64) -> PyResult<Vec<i64>> {
    let wl = WalkLaw::with_shift(law.law.clone(), 1).map_err(py_err)?;
    let mut rng = RandomSource::with_stream(seed, stream).rng();
    let path = if n > 1 {
        let s = walk::ConditionedSampler::new(&wl, n - 1);
        walk::sample_conditioned_walk(&s, horizon, 1_000_000_000, &mut rng).map_err(py_err)?
    } else {
        walk::sample_free_walk(&wl, horizon, &mut rng)
    };
    Ok(path.values)
}

/// `(P(|T| = n) by enumeration, P(W_n = −1)/n by convolution)`.
#[pyfunction]
fn kemperman(law: &PyLaw, n: u64) -> PyResult<(f64, f64)> {
    kemperman_check(&law.law, n).map_err(py_err)
}

/// Largest discrepancy between the two sides of the trunk bias identity at size `n`.
#[pyfunction]
fn bias_identity(law: &PyLaw, n: u64) -> PyResult<f64> {
    Ok(bias_identity_check(&law.law, n).map_err(py_err)?.max_discrepancy)
}

#[pyfunction]
fn ks_two_sample(a: Vec<f64>, b: Vec<f64>) -> f64 {
    stats::ks_two_sample(&a, &b)
}

/// Run a named suite; returns one dict per record.
#[pyfunction]
#[pyo3(signature = (suite, seed, quick = true))]
fn run_suite<'py>(py: Python<'py>, suite: &str, seed: u64, quick: bool) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let scale = if quick { Scale::Quick } else { Scale::Full };
    let records = suites::run_suite(&SuiteConfig::new(suite, seed, scale)).map_err(py_err)?;
    records
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("experiment", r.experiment)?;
            d.set_item("law", r.law)?;
            d.set_item("n", r.n)?;
            d.set_item("seed", r.seed)?;
            d.set_item("statistic", r.statistic)?;
            d.set_item("value", r.value)?;
            d.set_item("threshold", r.threshold)?;
            d.set_item("pass", r.pass)?;
            d.set_item("gate", r.gate)?;
            d.set_item("config_hash", r.config_hash)?;
            d.set_item("module_version", r.module_version)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "looplab")]
fn looplab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", looplab::VERSION)?;
    m.add("SUITES", suites::SUITES.to_vec())?;
    m.add_class::<PyLaw>()?;
    m.add_class::<PyTree>()?;
    m.add_class::<PyTrunk>()?;
    m.add_class::<PyLoopTree>()?;
    m.add_function(wrap_pyfunction!(sample_tree, m)?)?;
    m.add_function(wrap_pyfunction!(sample_trunk_star, m)?)?;
    m.add_function(wrap_pyfunction!(sample_walk, m)?)?;
    m.add_function(wrap_pyfunction!(kemperman, m)?)?;
    m.add_function(wrap_pyfunction!(bias_identity, m)?)?;
    m.add_function(wrap_pyfunction!(ks_two_sample, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
