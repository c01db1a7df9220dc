//! Shared domain types and the canonical trajectory serialization that makes
//! hashing and replay bit-exact.
//!
//! Canonical form: every action component is printed as a fixed-point decimal
//! with exactly `q` fractional digits, components joined by `,` (0x2C) and
//! actions joined by `;` (0x3B). Negative zero normalizes to positive zero,
//! so two trajectories quantize to the same bytes whenever they agree to
//! `q` digits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing;

/// Default number of fractional digits in canonical serialization.
/// Absorbs sub-milliradian jitter while preserving stimulus-induced
/// deviations, which are at least 1e-2 radians in the preset scenes.
pub const DEFAULT_QUANTIZATION: u8 = 3;

const MIN_KEY_LEN: usize = 16;
const MAX_KEY_LEN: usize = 64;

/// Shared secret seeding the decoder. The fingerprint (first 8 bytes of the
/// key's SHA-256, hex) identifies a key in persisted artifacts without
/// revealing it.
#[derive(Clone, PartialEq, Eq)]
pub struct StegoKey {
    bytes: Vec<u8>,
    fingerprint: String,
}

impl StegoKey {
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        if bytes.len() < MIN_KEY_LEN || bytes.len() > MAX_KEY_LEN {
            return Err(Error::Config(format!(
                "key must be {MIN_KEY_LEN}-{MAX_KEY_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        let fingerprint = hashing::fingerprint(&bytes);
        Ok(Self { bytes, fingerprint })
    }

    pub fn from_hex(hex_str: &str) -> Result<Self> {
        let bytes = hex::decode(hex_str.trim())
            .map_err(|e| Error::Config(format!("invalid key hex: {e}")))?;
        Self::from_bytes(bytes)
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

impl std::fmt::Debug for StegoKey {
    // Never print key material.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StegoKey({})", self.fingerprint)
    }
}

/// Message space of `n >= 2` symbols `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageSpace {
    n: u32,
}

impl MessageSpace {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("message space size must be >= 2, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn size(&self) -> u32 {
        self.n
    }

    /// Capacity in bits per trajectory: log2(n).
    pub fn capacity_bits(&self) -> f64 {
        f64::from(self.n).log2()
    }

    pub fn symbols(&self) -> impl Iterator<Item = u32> {
        0..self.n
    }

    pub fn contains(&self, symbol: u32) -> bool {
        symbol < self.n
    }
}

/// One joint configuration (radians). Dimension is set by the scene;
/// the planar arm uses d = 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Action {
    pub components: Vec<f64>,
}

impl Action {
    pub fn new(components: Vec<f64>) -> Self {
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

/// How a simulated episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    Converged,
    MaxStepsExceeded,
}

/// Time-ordered sequence of actions; the observable channel signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    actions: Vec<Action>,
    terminal_status: TerminalStatus,
}

impl Trajectory {
    /// Build a trajectory, enforcing `T >= 1` and a constant action dimension.
    pub fn new(actions: Vec<Action>, terminal_status: TerminalStatus) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::Validation("trajectory must contain at least one action".into()));
        }
        let dim = actions[0].dim();
        if actions.iter().any(|a| a.dim() != dim) {
            return Err(Error::Validation("action dimension varies across trajectory".into()));
        }
        Ok(Self { actions, terminal_status })
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Trajectory length T.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.actions[0].dim()
    }

    pub fn terminal_status(&self) -> TerminalStatus {
        self.terminal_status
    }

    pub fn converged(&self) -> bool {
        self.terminal_status == TerminalStatus::Converged
    }

    /// Canonical byte serialization at `q` fractional digits.
    pub fn canonical_bytes(&self, q: u8) -> Result<Vec<u8>> {
        canonical_bytes(self, q)
    }
}

/// Format one component as fixed-point decimal with exactly `q` fractional
/// digits, normalizing negative zero.
fn format_component(value: f64, q: u8) -> String {
    let mut s = format!("{value:.prec$}", prec = q as usize);
    // Values that round to zero must not keep their sign.
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s.remove(0);
    }
    s
}

/// Canonical byte serialization of a trajectory (see module docs).
pub fn canonical_bytes(trajectory: &Trajectory, q: u8) -> Result<Vec<u8>> {
    if q < 1 {
        return Err(Error::Domain("quantization digits q must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(trajectory.len() * trajectory.dim() * (q as usize + 4));
    for (step, action) in trajectory.actions.iter().enumerate() {
        if step > 0 {
            out.push(b';');
        }
        for (index, &value) in action.components.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteComponent { step, index });
            }
            if index > 0 {
                out.push(b',');
            }
            out.extend_from_slice(format_component(value, q).as_bytes());
        }
    }
    Ok(out)
}

/// Parse canonical bytes back into actions. Inverse of [`canonical_bytes`]
/// up to quantization.
pub fn parse_canonical(bytes: &[u8]) -> Result<Vec<Action>> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| Error::Validation(format!("canonical bytes not UTF-8: {e}")))?;
    text.split(';')
        .map(|row| {
            let components = row
                .split(',')
                .map(|field| {
                    field
                        .parse::<f64>()
                        .map_err(|e| Error::Validation(format!("bad component {field:?}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(Action::new(components))
        })
        .collect()
}

/// An environmental perturbation placed in the scene; the physical codeword.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stimulus {
    pub x: f64,
    pub y: f64,
    /// Object radius, workspace units (> 0).
    pub radius: f64,
    /// Repulsion gain multiplier (> 0).
    pub strength: f64,
    /// Trial index that produced this stimulus.
    pub id: u32,
}

impl Stimulus {
    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// One realized symbol-to-stimulus mapping inside a codebook.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookEntry {
    pub symbol: u32,
    pub stimulus: Stimulus,
    /// Length of the trajectory this stimulus induces.
    pub trajectory_length: u32,
    /// Keyed 64-bit digest of the induced trajectory's canonical bytes, hex.
    /// Satisfies `digest mod n == symbol`, which fast-mode loading checks.
    pub trajectory_hash: String,
}

/// Realized encoder map from message symbols to stimuli, built by trial and
/// error. `trials_used` is the number of draws the construction consumed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    pub schema_version: u32,
    pub key_fingerprint: String,
    pub n: u32,
    pub q: u8,
    pub scene_id: String,
    pub hash_algorithm: String,
    pub trials_used: u32,
    /// Exactly one entry per symbol, sorted ascending.
    pub entries: Vec<CodebookEntry>,
}

/// Current version written into all persisted file schemas.
pub const SCHEMA_VERSION: u32 = 1;

impl Codebook {
    pub fn entry(&self, symbol: u32) -> Option<&CodebookEntry> {
        self.entries
            .binary_search_by_key(&symbol, |e| e.symbol)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn message_space(&self) -> Result<MessageSpace> {
        MessageSpace::new(self.n)
    }
}

/// Header line of a JSON-lines trajectory log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLogHeader {
    pub schema_version: u32,
    pub scene_id: String,
    pub q: u8,
    pub terminal_status: TerminalStatus,
}

/// A parsed trajectory log: header plus the recorded trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub header: TrajectoryLogHeader,
    pub trajectory: Trajectory,
}

/// Serialize a trajectory as JSON-lines: one header object, then one JSON
/// array of components per action.
pub fn trajectory_log_to_string(trajectory: &Trajectory, scene_id: &str, q: u8) -> Result<String> {
    let header = TrajectoryLogHeader {
        schema_version: SCHEMA_VERSION,
        scene_id: scene_id.to_string(),
        q,
        terminal_status: trajectory.terminal_status(),
    };
    let mut out = serde_json::to_string(&header)?;
    out.push('\n');
    for action in trajectory.actions() {
        out.push_str(&serde_json::to_string(&action.components)?);
        out.push('\n');
    }
    Ok(out)
}

/// Parse a JSON-lines trajectory log. Errors name the offending line.
pub fn trajectory_log_from_str(text: &str) -> Result<TrajectoryLog> {
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines.next().ok_or_else(|| Error::Parse {
        what: "trajectory log".into(),
        line: 1,
        message: "empty file".into(),
    })?;
    let header: TrajectoryLogHeader =
        serde_json::from_str(header_line).map_err(|e| Error::Parse {
            what: "trajectory log header".into(),
            line: 1,
            message: e.to_string(),
        })?;
    let mut actions = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let components: Vec<f64> = serde_json::from_str(line).map_err(|e| Error::Parse {
            what: "trajectory log action".into(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        actions.push(Action::new(components));
    }
    if actions.is_empty() {
        return Err(Error::Parse {
            what: "trajectory log".into(),
            line: 2,
            message: "log contains a header but no actions".into(),
        });
    }
    let trajectory = Trajectory::new(actions, header.terminal_status)?;
    Ok(TrajectoryLog { header, trajectory })
}
