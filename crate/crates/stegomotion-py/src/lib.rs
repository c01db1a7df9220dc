//! Python bindings: thin wrappers over the stegomotion crate.
//!
//! The module mirrors the Rust API shape: keys and message spaces are value
//! types, scenes come from presets or JSON, and the codec operations are
//! module-level functions. All simulation uses the default controller
//! parameters; tuning them is a Rust-side concern.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use stegomotion::analytics;
use stegomotion::codec;
use stegomotion::core;
use stegomotion::hashing;
use stegomotion::metrics;
use stegomotion::sim;
use stegomotion::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(inner) => PyIOError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "StegoKey", frozen)]
struct PyStegoKey {
    inner: core::StegoKey,
}

#[pymethods]
impl PyStegoKey {
    /// Build a key from a hex string of 16 to 64 bytes.
    #[new]
    fn new(hex_str: &str) -> PyResult<Self> {
        Ok(Self { inner: core::StegoKey::from_hex(hex_str).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_bytes(data: Vec<u8>) -> PyResult<Self> {
        Ok(Self { inner: core::StegoKey::from_bytes(data).map_err(to_py)? })
    }

    #[getter]
    fn fingerprint(&self) -> &str {
        self.inner.fingerprint()
    }

    fn __repr__(&self) -> String {
        format!("StegoKey(fingerprint={})", self.inner.fingerprint())
    }
}

#[pyclass(name = "MessageSpace", frozen)]
struct PyMessageSpace {
    inner: core::MessageSpace,
}

#[pymethods]
impl PyMessageSpace {
    #[new]
    fn new(n: u32) -> PyResult<Self> {
        Ok(Self { inner: core::MessageSpace::new(n).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.size()
    }

    #[getter]
    fn capacity_bits(&self) -> f64 {
        self.inner.capacity_bits()
    }

    fn __repr__(&self) -> String {
        format!("MessageSpace(n={})", self.inner.size())
    }
}

#[pyclass(name = "Stimulus", frozen)]
struct PyStimulus {
    inner: core::Stimulus,
}

#[pymethods]
impl PyStimulus {
    #[new]
    #[pyo3(signature = (x, y, radius, strength, id=0))]
    fn new(x: f64, y: f64, radius: f64, strength: f64, id: u32) -> Self {
        Self { inner: core::Stimulus { x, y, radius, strength, id } }
    }

    #[getter]
    fn x(&self) -> f64 {
        self.inner.x
    }

    #[getter]
    fn y(&self) -> f64 {
        self.inner.y
    }

    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius
    }

    #[getter]
    fn strength(&self) -> f64 {
        self.inner.strength
    }

    #[getter]
    fn id(&self) -> u32 {
        self.inner.id
    }

    fn __repr__(&self) -> String {
        format!(
            "Stimulus(x={}, y={}, radius={}, strength={}, id={})",
            self.inner.x, self.inner.y, self.inner.radius, self.inner.strength, self.inner.id
        )
    }
}

#[pyclass(name = "Scene", frozen)]
struct PyScene {
    inner: sim::Scene,
}

#[pymethods]
impl PyScene {
    /// Load a built-in preset scene by id.
    #[staticmethod]
    fn preset(id: &str) -> PyResult<Self> {
        Ok(Self { inner: sim::preset(id).map_err(to_py)? })
    }

    /// Parse a scene from JSON holding a single scene object.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let mut scenes = sim::scenes_from_json(text).map_err(to_py)?;
        match scenes.len() {
            1 => Ok(Self { inner: scenes.pop().expect("len checked") }),
            other => Err(PyValueError::new_err(format!(
                "expected exactly one scene, found {other}"
            ))),
        }
    }

    #[getter]
    fn scene_id(&self) -> &str {
        &self.inner.scene_id
    }

    #[getter]
    fn goal(&self) -> (f64, f64) {
        (self.inner.goal[0], self.inner.goal[1])
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("Scene(scene_id={:?})", self.inner.scene_id)
    }
}

#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory {
    inner: core::Trajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged()
    }

    /// Joint-angle actions as a list of [theta1, theta2] rows.
    #[getter]
    fn actions(&self) -> Vec<Vec<f64>> {
        self.inner.actions().iter().map(|a| a.components.clone()).collect()
    }

    #[pyo3(signature = (q=core::DEFAULT_QUANTIZATION))]
    fn canonical_bytes<'py>(&self, py: Python<'py>, q: u8) -> PyResult<Bound<'py, PyBytes>> {
        let bytes = self.inner.canonical_bytes(q).map_err(to_py)?;
        Ok(PyBytes::new(py, &bytes))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trajectory(len={}, converged={})",
            self.inner.len(),
            self.inner.converged()
        )
    }
}

#[pyclass(name = "Decoder", frozen)]
struct PyDecoder {
    inner: codec::Decoder,
}

#[pymethods]
impl PyDecoder {
    #[new]
    #[pyo3(signature = (key, space, q=core::DEFAULT_QUANTIZATION))]
    fn new(key: &PyStegoKey, space: &PyMessageSpace, q: u8) -> Self {
        Self { inner: codec::init_decoder(key.inner.clone(), space.inner, q) }
    }

    fn decode(&self, trajectory: &PyTrajectory) -> PyResult<u32> {
        self.inner.decode(&trajectory.inner).map_err(to_py)
    }

    fn decode_bytes(&self, data: &[u8]) -> u32 {
        self.inner.decode_bytes(data)
    }

    fn digest(&self, trajectory: &PyTrajectory) -> PyResult<u64> {
        self.inner.digest(&trajectory.inner).map_err(to_py)
    }
}

#[pyclass(name = "Codebook", frozen)]
struct PyCodebook {
    inner: core::Codebook,
}

#[pymethods]
impl PyCodebook {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: core::Codebook =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        codec::verify_codebook_fast(&inner).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn q(&self) -> u8 {
        self.inner.q
    }

    #[getter]
    fn scene_id(&self) -> &str {
        &self.inner.scene_id
    }

    #[getter]
    fn trials_used(&self) -> u32 {
        self.inner.trials_used
    }

    #[getter]
    fn key_fingerprint(&self) -> &str {
        &self.inner.key_fingerprint
    }

    /// Map a symbol to its stimulus.
    fn encode(&self, symbol: u32) -> PyResult<PyStimulus> {
        let stimulus = codec::encode(&self.inner, symbol).map_err(to_py)?;
        Ok(PyStimulus { inner: *stimulus })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Codebook(scene_id={:?}, n={}, trials_used={})",
            self.inner.scene_id, self.inner.n, self.inner.trials_used
        )
    }
}

#[pyclass(name = "CollectorStats", frozen)]
struct PyCollectorStats {
    inner: analytics::CoverageStats,
}

#[pymethods]
impl PyCollectorStats {
    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn expected_trials(&self) -> f64 {
        self.inner.expected_trials
    }

    #[getter]
    fn approx_trials(&self) -> f64 {
        self.inner.approx_trials
    }

    #[getter]
    fn empirical_mean(&self) -> Option<f64> {
        self.inner.empirical_mean
    }

    #[getter]
    fn runs(&self) -> u32 {
        self.inner.runs
    }

    /// Fraction of runs that had covered all symbols by trial t.
    fn coverage_at(&self, t: u32) -> Option<f64> {
        self.inner.empirical_coverage_at(t)
    }
}

#[pyclass(name = "SecrecyReport", frozen)]
struct PySecrecyReport {
    inner: metrics::SecrecyReport,
}

#[pymethods]
impl PySecrecyReport {
    #[getter]
    fn scene_id(&self) -> &str {
        &self.inner.scene_id
    }

    #[getter]
    fn baseline_length(&self) -> u32 {
        self.inner.baseline_length
    }

    #[getter]
    fn stego_lengths(&self) -> Vec<u32> {
        self.inner.stego_lengths.clone()
    }

    #[getter]
    fn mean_deviation(&self) -> f64 {
        self.inner.mean_deviation
    }

    #[getter]
    fn min_deviation(&self) -> f64 {
        self.inner.min_deviation
    }

    #[getter]
    fn max_deviation(&self) -> f64 {
        self.inner.max_deviation
    }

    #[getter]
    fn max_abs_relative_deviation(&self) -> f64 {
        self.inner.max_abs_relative_deviation
    }
}

/// Ids of the built-in preset scenes.
#[pyfunction]
fn preset_ids() -> Vec<String> {
    sim::preset_ids()
}

/// Run the arm controller; `stimulus=None` gives the baseline trajectory.
#[pyfunction]
#[pyo3(signature = (scene, stimulus=None))]
fn interact(scene: &PyScene, stimulus: Option<&PyStimulus>) -> PyResult<PyTrajectory> {
    let params = sim::ControllerParams::default();
    let inner = sim::interact(&scene.inner, &params, stimulus.map(|s| &s.inner))
        .map_err(to_py)?;
    Ok(PyTrajectory { inner })
}

/// Build a codebook by trial and error; `max_trials=None` uses the
/// coupon-collector default budget.
#[pyfunction]
#[pyo3(signature = (key, n, scene, seed, max_trials=None, q=core::DEFAULT_QUANTIZATION))]
fn build_codebook(
    key: &PyStegoKey,
    n: u32,
    scene: &PyScene,
    seed: u64,
    max_trials: Option<u32>,
    q: u8,
) -> PyResult<PyCodebook> {
    let space = core::MessageSpace::new(n).map_err(to_py)?;
    let params = sim::ControllerParams::default();
    let budget = max_trials.unwrap_or_else(|| codec::default_max_trials(n));
    let build = codec::build_codebook(&key.inner, space, &scene.inner, &params, seed, budget, q)
        .map_err(to_py)?;
    Ok(PyCodebook { inner: build.codebook })
}

/// Build a codebook, then encode, simulate, and decode each symbol of
/// `message`. Returns the decoded sequence.
#[pyfunction]
#[pyo3(signature = (key, n, scene, seed, message, max_trials=None, q=core::DEFAULT_QUANTIZATION))]
fn roundtrip(
    key: &PyStegoKey,
    n: u32,
    scene: &PyScene,
    seed: u64,
    message: Vec<u32>,
    max_trials: Option<u32>,
    q: u8,
) -> PyResult<Vec<u32>> {
    let space = core::MessageSpace::new(n).map_err(to_py)?;
    let params = sim::ControllerParams::default();
    let budget = max_trials.unwrap_or_else(|| codec::default_max_trials(n));
    let (decoded, _) =
        codec::roundtrip(&key.inner, space, &scene.inner, &params, seed, budget, q, &message)
            .map_err(to_py)?;
    Ok(decoded)
}

/// Keyed 64-bit digest of arbitrary bytes.
#[pyfunction]
fn keyed_hash64(key: &[u8], data: &[u8]) -> u64 {
    hashing::keyed_hash64(key, data)
}

/// Expected trials to cover all n symbols: n * H_n.
#[pyfunction]
fn expected_trials(n: u32) -> PyResult<f64> {
    analytics::expected_trials(n).map_err(to_py)
}

/// Asymptotic approximation n (ln n + gamma).
#[pyfunction]
fn approx_trials(n: u32) -> PyResult<f64> {
    analytics::approx_expected_trials(n).map_err(to_py)
}

/// Probability that t uniform draws cover all n symbols.
#[pyfunction]
fn coverage_probability(n: u32, t: u32) -> PyResult<f64> {
    analytics::coverage_probability(n, t).map_err(to_py)
}

/// Monte Carlo coupon-collector simulation.
#[pyfunction]
fn simulate_collector(n: u32, runs: u32, seed: u64) -> PyResult<PyCollectorStats> {
    Ok(PyCollectorStats { inner: analytics::simulate_collector(n, runs, seed).map_err(to_py)? })
}

/// Replay a codebook's stimuli and compare trajectory lengths with the
/// baseline.
#[pyfunction]
fn secrecy_report(scene: &PyScene, codebook: &PyCodebook) -> PyResult<PySecrecyReport> {
    let params = sim::ControllerParams::default();
    let inner =
        metrics::secrecy_report(&scene.inner, &params, &codebook.inner).map_err(to_py)?;
    Ok(PySecrecyReport { inner })
}

/// Fraction of keys whose decoder covers all n symbols within the first t
/// successful trials, for t = 0..=t_max. Returns (t, coverage) lists.
#[pyfunction]
fn empirical_capacity_curve(
    scene: &PyScene,
    n: u32,
    num_keys: u32,
    t_max: u32,
    seed: u64,
) -> PyResult<(Vec<u32>, Vec<f64>)> {
    let params = sim::ControllerParams::default();
    let curve =
        metrics::empirical_capacity_curve(&scene.inner, &params, n, num_keys, t_max, seed)
            .map_err(to_py)?;
    Ok((curve.t, curve.coverage))
}

#[pymodule]
fn stegomotion_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyStegoKey>()?;
    m.add_class::<PyMessageSpace>()?;
    m.add_class::<PyStimulus>()?;
    m.add_class::<PyScene>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyDecoder>()?;
    m.add_class::<PyCodebook>()?;
    m.add_class::<PyCollectorStats>()?;
    m.add_class::<PySecrecyReport>()?;
    m.add_function(wrap_pyfunction!(preset_ids, m)?)?;
    m.add_function(wrap_pyfunction!(interact, m)?)?;
    m.add_function(wrap_pyfunction!(build_codebook, m)?)?;
    m.add_function(wrap_pyfunction!(roundtrip, m)?)?;
    m.add_function(wrap_pyfunction!(keyed_hash64, m)?)?;
    m.add_function(wrap_pyfunction!(expected_trials, m)?)?;
    m.add_function(wrap_pyfunction!(approx_trials, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_probability, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_collector, m)?)?;
    m.add_function(wrap_pyfunction!(secrecy_report, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_capacity_curve, m)?)?;
    Ok(())
}
