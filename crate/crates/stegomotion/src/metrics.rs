//! Secrecy and capacity evaluation on the simulator.
//!
//! `secrecy_report` compares steganographic trajectory lengths against the
//! unstimulated baseline. `empirical_capacity_curve` measures the
//! probability of complete message-space coverage as a function of the trial
//! budget, across many pseudo-random keys, and is the empirical counterpart
//! of `analytics::coverage_probability`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::codec::MAX_DEVIATION_FACTOR;
use crate::core::{Codebook, StegoKey, Stimulus};
use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::sim::{interact, sample_stimulus, ControllerParams, Scene};

/// Default survey sample size: stego trajectories per scene.
pub const DEFAULT_SURVEY_TRIALS: u32 = 25;

/// Stream tags for the independent randomness consumers in this module.
const POOL_STREAM: u64 = 0x6361_7061_706f_6f6c; // "capapool"
const KEY_STREAM: u64 = 0x6361_7061_6b65_7973; // "capakeys"
const SURVEY_STREAM: u64 = 0x7375_7276_6579_0000; // "survey"

/// Trajectory-length statistics of stego motion relative to the baseline.
/// Deviations are `stego_length - baseline_length`, in steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub scene_id: String,
    pub baseline_length: u32,
    pub stego_lengths: Vec<u32>,
    pub mean_deviation: f64,
    pub min_deviation: f64,
    pub max_deviation: f64,
    pub max_abs_relative_deviation: f64,
}

impl SecrecyReport {
    fn from_lengths(scene_id: &str, baseline_length: u32, stego_lengths: Vec<u32>) -> Self {
        assert!(!stego_lengths.is_empty());
        let base = f64::from(baseline_length);
        let deviations: Vec<f64> =
            stego_lengths.iter().map(|&l| f64::from(l) - base).collect();
        let mean_deviation = deviations.iter().sum::<f64>() / deviations.len() as f64;
        let min_deviation = deviations.iter().copied().fold(f64::INFINITY, f64::min);
        let max_deviation = deviations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let max_abs_relative_deviation = deviations
            .iter()
            .map(|d| (d / base).abs())
            .fold(0.0, f64::max);
        SecrecyReport {
            scene_id: scene_id.to_string(),
            baseline_length,
            stego_lengths,
            mean_deviation,
            min_deviation,
            max_deviation,
            max_abs_relative_deviation,
        }
    }

    /// Per-entry deviations in the order of `stego_lengths`.
    pub fn deviations(&self) -> Vec<f64> {
        let base = f64::from(self.baseline_length);
        self.stego_lengths.iter().map(|&l| f64::from(l) - base).collect()
    }
}

/// Run the baseline and every codebook stimulus, reporting length
/// statistics. Every stego trajectory must converge; a non-converging entry
/// is an integrity failure (impossible for a freshly verified codebook).
pub fn secrecy_report(
    scene: &Scene,
    params: &ControllerParams,
    codebook: &Codebook,
) -> Result<SecrecyReport> {
    if codebook.entries.is_empty() {
        return Err(Error::Validation("codebook has no entries to report on".into()));
    }
    if codebook.scene_id != scene.scene_id {
        return Err(Error::Validation(format!(
            "codebook was built for scene {:?}, not {:?}",
            codebook.scene_id, scene.scene_id
        )));
    }
    let baseline = baseline_length(scene, params)?;
    let mut stego_lengths = Vec::with_capacity(codebook.entries.len());
    for entry in &codebook.entries {
        let trajectory = interact(scene, params, Some(&entry.stimulus))?;
        if !trajectory.converged() {
            return Err(Error::Validation(format!(
                "integrity failure: stimulus for symbol {} does not converge",
                entry.symbol
            )));
        }
        stego_lengths.push(trajectory.len() as u32);
    }
    Ok(SecrecyReport::from_lengths(&scene.scene_id, baseline, stego_lengths))
}

/// Codebook-independent survey: sample `trials` converging stimuli and
/// report their length statistics. Samples are drawn fresh from the scene's
/// stimulus region, so this reflects the channel rather than one codebook.
pub fn secrecy_survey(
    scene: &Scene,
    params: &ControllerParams,
    trials: u32,
    seed: u64,
) -> Result<SecrecyReport> {
    if trials == 0 {
        return Err(Error::Config("survey needs at least one trial".into()));
    }
    let baseline = baseline_length(scene, params)?;
    let mut rng = CounterRng::new(seed, SURVEY_STREAM);
    let mut stego_lengths = Vec::with_capacity(trials as usize);
    let budget = trials.saturating_mul(10);
    let mut id = 0;
    while (stego_lengths.len() as u32) < trials {
        if id >= budget {
            return Err(Error::Sensitivity(format!(
                "{}: only {} of {trials} sampled stimuli converged within {budget} draws",
                scene.scene_id,
                stego_lengths.len()
            )));
        }
        let stimulus = sample_stimulus(&mut rng, scene, id)?;
        id += 1;
        let trajectory = interact(scene, params, Some(&stimulus))?;
        if trajectory.converged() {
            stego_lengths.push(trajectory.len() as u32);
        }
    }
    Ok(SecrecyReport::from_lengths(&scene.scene_id, baseline, stego_lengths))
}

fn baseline_length(scene: &Scene, params: &ControllerParams) -> Result<u32> {
    let baseline = interact(scene, params, None)?;
    if !baseline.converged() {
        return Err(Error::Config(format!(
            "{}: baseline does not converge",
            scene.scene_id
        )));
    }
    Ok(baseline.len() as u32)
}

/// Empirical probability of complete coverage after t trials, averaged over
/// pseudo-random keys. `coverage[i]` is the fraction of keys whose first
/// `t[i]` successful trials decode to all `n` symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityCurve {
    pub n: u32,
    pub t: Vec<u32>,
    pub coverage: Vec<f64>,
    pub num_keys: u32,
}

impl CapacityCurve {
    /// Smallest t at which coverage reaches `level`, if any.
    pub fn crossing(&self, level: f64) -> Option<u32> {
        self.t
            .iter()
            .zip(&self.coverage)
            .find(|(_, &c)| c >= level)
            .map(|(&t, _)| t)
    }
}

/// A shared pool of simulated trials: the per-trial stimuli plus canonical
/// trajectory bytes. Trajectories are key-independent, so one pool serves
/// every decoder, which is what makes thousand-key sweeps cheap.
pub struct TrialPool {
    pub scene_id: String,
    pub stimuli: Vec<Stimulus>,
    canonical: Vec<Vec<u8>>,
    pub distinct_trajectories: usize,
}

impl TrialPool {
    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    pub fn canonical_bytes(&self) -> &[Vec<u8>] {
        &self.canonical
    }
}

/// Simulate a pool of `t_max` successful trials (converged and within the
/// deviation bound, mirroring codebook construction). Draws that fail are
/// discarded and do not count toward the pool.
pub fn simulate_trial_pool(
    scene: &Scene,
    params: &ControllerParams,
    t_max: u32,
    q: u8,
    seed: u64,
) -> Result<TrialPool> {
    let baseline = interact(scene, params, None)?;
    if !baseline.converged() {
        return Err(Error::Config(format!(
            "{}: baseline does not converge",
            scene.scene_id
        )));
    }
    let max_length = (MAX_DEVIATION_FACTOR * baseline.len() as f64) as usize;
    let mut rng = CounterRng::new(seed, POOL_STREAM);
    let mut stimuli = Vec::with_capacity(t_max as usize);
    let mut canonical = Vec::with_capacity(t_max as usize);
    let budget = t_max.saturating_mul(20).max(100);
    let mut id = 0;
    while (canonical.len() as u32) < t_max {
        if id >= budget {
            return Err(Error::Sensitivity(format!(
                "{}: only {} of {t_max} trials succeeded within {budget} draws",
                scene.scene_id,
                canonical.len()
            )));
        }
        let stimulus = sample_stimulus(&mut rng, scene, id)?;
        id += 1;
        let trajectory = interact(scene, params, Some(&stimulus))?;
        if !trajectory.converged() || trajectory.len() > max_length {
            continue;
        }
        canonical.push(trajectory.canonical_bytes(q)?);
        stimuli.push(stimulus);
    }
    let distinct_trajectories = canonical.iter().collect::<BTreeSet<_>>().len();
    Ok(TrialPool {
        scene_id: scene.scene_id.clone(),
        stimuli,
        canonical,
        distinct_trajectories,
    })
}

/// Capacity curves for several message-space sizes over one shared pool.
///
/// For each of `num_keys` pseudo-random 16-byte keys, decode every pool
/// trajectory and record the first t at which all n symbols have appeared;
/// the curve is the per-t fraction of keys already covered. Per-key coverage
/// is a step function, so each curve is nondecreasing by construction.
pub fn empirical_capacity_curves(
    pool: &TrialPool,
    ns: &[u32],
    num_keys: u32,
    seed: u64,
) -> Result<Vec<CapacityCurve>> {
    if num_keys == 0 {
        return Err(Error::Config("capacity sweep needs at least one key".into()));
    }
    let max_n = ns.iter().copied().max().unwrap_or(0);
    for &n in ns {
        if !(2..=8).contains(&n) {
            return Err(Error::Config(format!("capacity n must be in 2..=8, got {n}")));
        }
    }
    if (pool.distinct_trajectories as u32) < max_n {
        return Err(Error::Sensitivity(format!(
            "{}: trial pool has {} distinct trajectories, fewer than n = {max_n}; \
             the channel cannot express the message space",
            pool.scene_id, pool.distinct_trajectories
        )));
    }
    let t_max = pool.len() as u32;
    // covered_counts[j][t] = keys covered by their first t trials for ns[j].
    let mut covered_counts = vec![vec![0u32; t_max as usize + 1]; ns.len()];
    for key_index in 0..num_keys {
        let mut key_bytes = [0u8; 16];
        CounterRng::new(seed, KEY_STREAM ^ u64::from(key_index)).fill_bytes(&mut key_bytes);
        let key = StegoKey::from_bytes(key_bytes.to_vec())
            .expect("16-byte keys are always valid");
        let digests: Vec<u64> = pool
            .canonical
            .iter()
            .map(|bytes| crate::hashing::keyed_hash64(key.bytes(), bytes))
            .collect();
        for (j, &n) in ns.iter().enumerate() {
            let mut seen = 0u64;
            let full = (1u64 << n) - 1;
            let mut covered_at = None;
            for (i, digest) in digests.iter().enumerate() {
                seen |= 1 << (digest % u64::from(n));
                if seen == full {
                    covered_at = Some(i + 1);
                    break;
                }
            }
            if let Some(at) = covered_at {
                for count in covered_counts[j][at..].iter_mut() {
                    *count += 1;
                }
            }
        }
    }
    Ok(ns
        .iter()
        .zip(covered_counts)
        .map(|(&n, counts)| CapacityCurve {
            n,
            t: (0..=t_max).collect(),
            coverage: counts.iter().map(|&c| f64::from(c) / f64::from(num_keys)).collect(),
            num_keys,
        })
        .collect())
}

/// Single-n convenience wrapper: simulate the pool, then sweep keys.
pub fn empirical_capacity_curve(
    scene: &Scene,
    params: &ControllerParams,
    n: u32,
    num_keys: u32,
    t_max: u32,
    seed: u64,
) -> Result<CapacityCurve> {
    let pool = simulate_trial_pool(scene, params, t_max, crate::core::DEFAULT_QUANTIZATION, seed)?;
    let mut curves = empirical_capacity_curves(&pool, &[n], num_keys, seed)?;
    Ok(curves.pop().expect("one n in, one curve out"))
}

/// Symbol frequencies of the pool under `num_keys` pseudo-random keys,
/// aggregated over (key, trial) pairs. Used to check that the decoded pool
/// is close to uniform before comparing capacity curves to theory.
pub fn pool_symbol_frequencies(pool: &TrialPool, n: u32, num_keys: u32, seed: u64) -> Vec<f64> {
    let mut counts = vec![0u64; n as usize];
    for key_index in 0..num_keys {
        let mut key_bytes = [0u8; 16];
        CounterRng::new(seed, KEY_STREAM ^ u64::from(key_index)).fill_bytes(&mut key_bytes);
        for bytes in &pool.canonical {
            let digest = crate::hashing::keyed_hash64(&key_bytes, bytes);
            counts[(digest % u64::from(n)) as usize] += 1;
        }
    }
    let total = (pool.len() as u64 * u64::from(num_keys)) as f64;
    counts.iter().map(|&c| c as f64 / total).collect()
}
