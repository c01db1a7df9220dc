//! Command-line interface: the artifact's only human-facing surface.
//!
//! Every run writes a `<command>.manifest.json` capturing the effective
//! parameters and tool version; identical manifests imply byte-identical
//! outputs. Files are written atomically (temp file + rename) and contain no
//! timestamps or absolute paths. Key material never reaches disk or the
//! manifest; only its fingerprint does.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analytics::{coverage_probability, simulate_collector};
use crate::codec::{
    self, bits_to_symbols, build_codebook, default_max_trials, init_decoder, symbols_to_bits,
    verify_codebook_fast,
};
use crate::core::{
    trajectory_log_from_str, trajectory_log_to_string, Codebook, MessageSpace, StegoKey,
    DEFAULT_QUANTIZATION,
};
use crate::error::{Error, Result};
use crate::metrics::{
    empirical_capacity_curves, secrecy_report, secrecy_survey, simulate_trial_pool,
    DEFAULT_SURVEY_TRIALS,
};
use crate::sim::{interact, preset, scenes_from_json, ControllerParams, Scene};
use crate::svg::{Plot, SeriesStyle};

const MANIFEST_SCHEMA_VERSION: u32 = 1;
const FULL_SCALE_KEYS: u32 = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "stegomotion",
    version,
    about = "Hide messages in robot motion: encode as environmental stimuli, decode from trajectories"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory (also via STEGOMOTION_OUT). Created if missing.
    #[arg(long, global = true, env = "STEGOMOTION_OUT", default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproduce the coupon-collector statistics: table plus coverage curves.
    Analyze(AnalyzeArgs),
    /// Build a codebook for a scene by trial and error.
    Build(BuildArgs),
    /// Encode a bitstring as stimuli and emit one trajectory log per symbol.
    Send(SendArgs),
    /// Decode trajectory logs back into a bitstring (key and logs only).
    Receive(ReceiveArgs),
    /// Secrecy report: stego trajectory lengths versus baseline.
    Report(ReportArgs),
    /// Empirical capacity curves across pseudo-random keys.
    Capacity(CapacityArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Message-space sizes, inclusive range like 2..8 or a single value.
    #[arg(long, default_value = "2..8")]
    n: String,
    /// Monte Carlo runs per n.
    #[arg(long, default_value_t = 10_000)]
    runs: u32,
    /// Largest trial count for the coverage curves.
    #[arg(long, default_value_t = 100)]
    t_max: u32,
    #[arg(long, default_value_t = 9)]
    seed: u64,
    #[command(flatten)]
    formats: FormatArgs,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Message-space size.
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    key: KeyArgs,
    /// Sampler seed.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Trial budget; defaults to ceil(10 n H_n).
    #[arg(long)]
    max_trials: Option<u32>,
    /// Quantization digits for canonical trajectory bytes.
    #[arg(long, default_value_t = DEFAULT_QUANTIZATION)]
    q: u8,
    #[command(flatten)]
    formats: FormatArgs,
}

#[derive(Debug, Args)]
struct SendArgs {
    /// Codebook JSON produced by `build`.
    #[arg(long)]
    codebook: PathBuf,
    /// Bitstring to transmit, e.g. 1011; length must divide into log2(n) chunks.
    #[arg(long)]
    message: String,
    #[command(flatten)]
    scene: OptionalSceneArgs,
    #[command(flatten)]
    formats: FormatArgs,
}

#[derive(Debug, Args)]
struct ReceiveArgs {
    #[command(flatten)]
    key: KeyArgs,
    /// Message-space size used by the sender.
    #[arg(long)]
    n: u32,
    /// Trajectory log files, in transmission order.
    #[arg(required = true)]
    logs: Vec<PathBuf>,
    #[command(flatten)]
    formats: FormatArgs,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    scene: OptionalSceneArgs,
    /// Codebook JSON to report on.
    #[arg(long)]
    codebook: PathBuf,
    /// Survey mode: sample fresh stimuli instead of replaying the codebook.
    #[arg(long)]
    survey: bool,
    /// Survey sample size.
    #[arg(long, default_value_t = DEFAULT_SURVEY_TRIALS)]
    trials: u32,
    /// Survey sampler seed.
    #[arg(long, default_value_t = 5)]
    seed: u64,
    #[command(flatten)]
    formats: FormatArgs,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[command(flatten)]
    scene: SceneArgs,
    /// Message-space sizes, comma separated, e.g. 2,4,8.
    #[arg(long, default_value = "2,4,8", value_delimiter = ',')]
    n: Vec<u32>,
    /// Number of pseudo-random keys.
    #[arg(long, default_value_t = 1000)]
    keys: u32,
    /// Full-scale sweep: 10,000 keys (overrides --keys).
    #[arg(long)]
    full: bool,
    /// Trial-pool size per key.
    #[arg(long, default_value_t = 60)]
    t_max: u32,
    #[arg(long, default_value_t = 3)]
    seed: u64,
    #[command(flatten)]
    formats: FormatArgs,
}

#[derive(Debug, Args)]
struct SceneArgs {
    /// Preset scene id: drawer, move-near, pick, basket.
    #[arg(long, conflicts_with = "scene_file")]
    scene: Option<String>,
    /// JSON file holding one scene or an array of scenes.
    #[arg(long)]
    scene_file: Option<PathBuf>,
}

/// Scene selection that may default to the codebook's scene id.
#[derive(Debug, Args)]
struct OptionalSceneArgs {
    /// Preset scene id; defaults to the codebook's scene_id.
    #[arg(long, conflicts_with = "scene_file")]
    scene: Option<String>,
    /// JSON file holding one scene or an array of scenes.
    #[arg(long)]
    scene_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KeyArgs {
    /// Stego-key as hex (16 to 64 bytes).
    #[arg(long, conflicts_with = "key_file")]
    key: Option<String>,
    /// File containing the stego-key as hex.
    #[arg(long)]
    key_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FormatArgs {
    /// Output formats to emit.
    #[arg(long, value_delimiter = ',', default_values = ["csv", "json", "svg"])]
    formats: Vec<String>,
}

impl FormatArgs {
    fn validate(&self) -> Result<()> {
        for f in &self.formats {
            if !matches!(f.as_str(), "csv" | "json" | "svg") {
                return Err(Error::Config(format!(
                    "unknown format {f:?}; expected csv, json, or svg"
                )));
            }
        }
        Ok(())
    }

    fn wants(&self, format: &str) -> bool {
        self.formats.iter().any(|f| f == format)
    }
}

impl KeyArgs {
    fn load(&self) -> Result<StegoKey> {
        match (&self.key, &self.key_file) {
            (Some(hex_str), None) => StegoKey::from_hex(hex_str),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)?;
                StegoKey::from_hex(text.trim())
            }
            _ => Err(Error::Config("provide exactly one of --key or --key-file".into())),
        }
    }
}

fn load_scene(scene: &Option<String>, scene_file: &Option<PathBuf>) -> Result<Scene> {
    match (scene, scene_file) {
        (Some(id), None) => preset(id),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let mut scenes = scenes_from_json(&text)?;
            match scenes.len() {
                1 => Ok(scenes.pop().expect("len checked")),
                other => Err(Error::Config(format!(
                    "scene file must hold exactly one scene, found {other}"
                ))),
            }
        }
        _ => Err(Error::Config("provide exactly one of --scene or --scene-file".into())),
    }
}

impl OptionalSceneArgs {
    /// Resolve against a codebook: explicit flags win, otherwise the
    /// codebook's scene_id must name a preset.
    fn load_for(&self, codebook: &Codebook) -> Result<Scene> {
        if self.scene.is_none() && self.scene_file.is_none() {
            return preset(&codebook.scene_id);
        }
        load_scene(&self.scene, &self.scene_file)
    }
}

/// Manifest of one CLI run. Deterministic field order; no timestamps, no
/// paths, no key material.
#[derive(Debug, Serialize)]
struct Manifest {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    command: &'static str,
    parameters: BTreeMap<&'static str, serde_json::Value>,
}

impl Manifest {
    fn new(command: &'static str) -> Self {
        Manifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            tool: "stegomotion",
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            parameters: BTreeMap::new(),
        }
    }

    fn set(&mut self, name: &'static str, value: impl Serialize) {
        self.parameters.insert(
            name,
            serde_json::to_value(value).expect("manifest parameters are plain data"),
        );
    }

    fn write(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join(format!("{}.manifest.json", self.command));
        write_atomic(&path, &(serde_json::to_string_pretty(self)? + "\n"))
    }
}

/// Write via a sibling temp file and rename, so readers never observe a
/// partially written artifact.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 32 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    write_atomic(path, &text)
}

/// Inclusive n range: "2..8", or a single "4".
fn parse_n_range(text: &str) -> Result<Vec<u32>> {
    let parse_one = |s: &str| -> Result<u32> {
        s.trim()
            .parse::<u32>()
            .map_err(|_| Error::Config(format!("invalid message-space size {s:?}")))
    };
    let range = match text.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse_one(lo)?, parse_one(hi)?);
            if lo > hi {
                return Err(Error::Config(format!("empty range {text:?}")));
            }
            (lo..=hi).collect()
        }
        None => vec![parse_one(text)?],
    };
    for &n in &range {
        if n < 2 {
            return Err(Error::Config(format!("message-space size must be >= 2, got {n}")));
        }
    }
    Ok(range)
}

/// Entry point: parse argv, dispatch, and map errors onto exit codes.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(&cli.out, args),
        Command::Build(args) => cmd_build(&cli.out, args),
        Command::Send(args) => cmd_send(&cli.out, args),
        Command::Receive(args) => cmd_receive(&cli.out, args),
        Command::Report(args) => cmd_report(&cli.out, args),
        Command::Capacity(args) => cmd_capacity(&cli.out, args),
    }
}

fn cmd_analyze(out: &Path, args: &AnalyzeArgs) -> Result<()> {
    args.formats.validate()?;
    let ns = parse_n_range(&args.n)?;
    if args.runs == 0 {
        return Err(Error::Config("analyze needs at least one run".into()));
    }

    let mut stats = Vec::with_capacity(ns.len());
    for &n in &ns {
        stats.push(simulate_collector(n, args.runs, args.seed)?);
    }

    if args.formats.wants("csv") {
        let rows: Vec<String> = stats
            .iter()
            .map(|s| {
                format!(
                    "{},{:.2},{:.2},{:.2}",
                    s.n,
                    s.empirical_mean.expect("runs > 0"),
                    s.expected_trials,
                    s.approx_trials
                )
            })
            .collect();
        write_csv(
            &out.join("table1.csv"),
            "n,empirical_mean,theoretical_mean,approximate_mean",
            &rows,
        )?;

        let mut rows = Vec::with_capacity(ns.len() * (args.t_max as usize + 1));
        for s in &stats {
            for t in 0..=args.t_max {
                rows.push(format!(
                    "{},{},{:.6},{:.6}",
                    s.n,
                    t,
                    coverage_probability(s.n, t)?,
                    s.empirical_coverage_at(t).expect("runs > 0")
                ));
            }
        }
        write_csv(&out.join("coverage_curves.csv"), "n,t,analytic,empirical", &rows)?;
    }

    if args.formats.wants("svg") {
        let mut plot = Plot::new("Mean trials to full coverage", "message-space size n", "trials");
        plot.add_series(
            "theoretical n*H_n",
            stats.iter().map(|s| (f64::from(s.n), s.expected_trials)).collect(),
            SeriesStyle::LineWithMarkers,
        );
        plot.add_series(
            "approximation",
            stats.iter().map(|s| (f64::from(s.n), s.approx_trials)).collect(),
            SeriesStyle::Line,
        );
        plot.add_series(
            "empirical",
            stats
                .iter()
                .map(|s| (f64::from(s.n), s.empirical_mean.expect("runs > 0")))
                .collect(),
            SeriesStyle::Scatter,
        );
        write_atomic(&out.join("mean_trials.svg"), &plot.render())?;

        let mut plot = Plot::new("Probability of complete coverage", "trials t", "P(covered)")
            .with_y_range(0.0, 1.0);
        for s in &stats {
            let analytic: Result<Vec<(f64, f64)>> = (0..=args.t_max)
                .map(|t| Ok((f64::from(t), coverage_probability(s.n, t)?)))
                .collect();
            plot.add_series(&format!("n={} analytic", s.n), analytic?, SeriesStyle::Line);
            plot.add_series(
                &format!("n={} empirical", s.n),
                (0..=args.t_max)
                    .map(|t| (f64::from(t), s.empirical_coverage_at(t).expect("runs > 0")))
                    .collect(),
                SeriesStyle::Scatter,
            );
        }
        write_atomic(&out.join("coverage_prob.svg"), &plot.render())?;
    }

    let mut manifest = Manifest::new("analyze");
    manifest.set("n", &ns);
    manifest.set("runs", args.runs);
    manifest.set("t_max", args.t_max);
    manifest.set("seed", args.seed);
    manifest.set("formats", &args.formats.formats);
    manifest.write(out)?;

    println!("analyze: wrote statistics for n in {:?} ({} runs each)", ns, args.runs);
    Ok(())
}

fn cmd_build(out: &Path, args: &BuildArgs) -> Result<()> {
    args.formats.validate()?;
    let scene = load_scene(&args.scene.scene, &args.scene.scene_file)?;
    let key = args.key.load()?;
    let space = MessageSpace::new(args.n)?;
    let params = ControllerParams::default();
    let max_trials = args.max_trials.unwrap_or_else(|| default_max_trials(args.n));

    let build = build_codebook(&key, space, &scene, &params, args.seed, max_trials, args.q)?;

    write_atomic(
        &out.join("codebook.json"),
        &(serde_json::to_string_pretty(&build.codebook)? + "\n"),
    )?;
    if args.formats.wants("json") {
        let mut log = String::new();
        for record in &build.trials {
            log.push_str(&serde_json::to_string(record)?);
            log.push('\n');
        }
        write_atomic(&out.join("trial_log.jsonl"), &log)?;
    }

    let mut manifest = Manifest::new("build");
    manifest.set("scene_id", &scene.scene_id);
    manifest.set("n", args.n);
    manifest.set("key_fingerprint", key.fingerprint());
    manifest.set("seed", args.seed);
    manifest.set("max_trials", max_trials);
    manifest.set("q", args.q);
    manifest.set("formats", &args.formats.formats);
    manifest.write(out)?;

    println!(
        "build: covered {} symbols in {} trials (baseline {} steps)",
        build.codebook.n, build.codebook.trials_used, build.baseline_length
    );
    Ok(())
}

fn cmd_send(out: &Path, args: &SendArgs) -> Result<()> {
    args.formats.validate()?;
    let codebook: Codebook = serde_json::from_str(&fs::read_to_string(&args.codebook)?)?;
    verify_codebook_fast(&codebook)?;
    let scene = args.scene.load_for(&codebook)?;
    if scene.scene_id != codebook.scene_id {
        return Err(Error::Validation(format!(
            "codebook was built for scene {:?}, not {:?}",
            codebook.scene_id, scene.scene_id
        )));
    }
    let params = ControllerParams::default();
    let symbols = bits_to_symbols(&args.message, codebook.n)?;

    let mut files = Vec::with_capacity(symbols.len());
    for (i, &symbol) in symbols.iter().enumerate() {
        let stimulus = codec::encode(&codebook, symbol)?;
        let trajectory = interact(&scene, &params, Some(stimulus))?;
        let name = format!("traj_{i:03}.jsonl");
        write_atomic(
            &out.join(&name),
            &trajectory_log_to_string(&trajectory, &scene.scene_id, codebook.q)?,
        )?;
        files.push(name);
    }

    let mut manifest = Manifest::new("send");
    manifest.set("scene_id", &scene.scene_id);
    manifest.set("n", codebook.n);
    manifest.set("q", codebook.q);
    manifest.set("key_fingerprint", &codebook.key_fingerprint);
    manifest.set("message", &args.message);
    manifest.set("trajectory_logs", &files);
    manifest.set("formats", &args.formats.formats);
    manifest.write(out)?;

    println!("send: emitted {} trajectory logs", files.len());
    Ok(())
}

fn cmd_receive(out: &Path, args: &ReceiveArgs) -> Result<()> {
    args.formats.validate()?;
    let key = args.key.load()?;
    let space = MessageSpace::new(args.n)?;

    let mut symbols = Vec::with_capacity(args.logs.len());
    let mut q_seen = None;
    for path in &args.logs {
        let log = trajectory_log_from_str(&fs::read_to_string(path)?)?;
        match q_seen {
            None => q_seen = Some(log.header.q),
            Some(q) if q != log.header.q => {
                return Err(Error::Validation(format!(
                    "trajectory logs disagree on quantization: {} vs {}",
                    q, log.header.q
                )))
            }
            Some(_) => {}
        }
        let decoder = init_decoder(key.clone(), space, log.header.q);
        symbols.push(decoder.decode(&log.trajectory)?);
    }
    let bits = symbols_to_bits(&symbols, args.n)?;

    let mut manifest = Manifest::new("receive");
    manifest.set("n", args.n);
    manifest.set("key_fingerprint", key.fingerprint());
    manifest.set("logs", args.logs.len());
    manifest.set("formats", &args.formats.formats);
    manifest.write(out)?;

    println!("{bits}");
    Ok(())
}

fn cmd_report(out: &Path, args: &ReportArgs) -> Result<()> {
    args.formats.validate()?;
    let codebook: Codebook = serde_json::from_str(&fs::read_to_string(&args.codebook)?)?;
    verify_codebook_fast(&codebook)?;
    let scene = args.scene.load_for(&codebook)?;
    let params = ControllerParams::default();

    let report = if args.survey {
        secrecy_survey(&scene, &params, args.trials, args.seed)?
    } else {
        secrecy_report(&scene, &params, &codebook)?
    };

    if args.formats.wants("csv") {
        let rows: Vec<String> = report
            .stego_lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                format!(
                    "{},{},{},{}",
                    report.scene_id,
                    i,
                    len,
                    i64::from(len) - i64::from(report.baseline_length)
                )
            })
            .collect();
        write_csv(&out.join("secrecy_report.csv"), "scene,symbol,length,deviation", &rows)?;
    }
    if args.formats.wants("json") {
        write_atomic(
            &out.join("secrecy_report.json"),
            &(serde_json::to_string_pretty(&report)? + "\n"),
        )?;
    }
    if args.formats.wants("svg") {
        let mut plot = Plot::new(
            &format!("Stego trajectory lengths: {}", report.scene_id),
            if args.survey { "sample" } else { "symbol" },
            "steps",
        );
        plot.add_series(
            "baseline",
            vec![
                (0.0, f64::from(report.baseline_length)),
                (
                    (report.stego_lengths.len() - 1).max(1) as f64,
                    f64::from(report.baseline_length),
                ),
            ],
            SeriesStyle::Line,
        );
        plot.add_series(
            "stego",
            report
                .stego_lengths
                .iter()
                .enumerate()
                .map(|(i, &len)| (i as f64, f64::from(len)))
                .collect(),
            SeriesStyle::Scatter,
        );
        write_atomic(&out.join("secrecy_report.svg"), &plot.render())?;
    }

    let mut manifest = Manifest::new("report");
    manifest.set("scene_id", &report.scene_id);
    manifest.set("n", codebook.n);
    manifest.set("key_fingerprint", &codebook.key_fingerprint);
    manifest.set("survey", args.survey);
    if args.survey {
        manifest.set("trials", args.trials);
        manifest.set("seed", args.seed);
    }
    manifest.set("formats", &args.formats.formats);
    manifest.write(out)?;

    println!(
        "report: baseline {} steps, mean deviation {:+.2}, max |relative| {:.3}",
        report.baseline_length, report.mean_deviation, report.max_abs_relative_deviation
    );
    Ok(())
}

fn cmd_capacity(out: &Path, args: &CapacityArgs) -> Result<()> {
    args.formats.validate()?;
    let scene = load_scene(&args.scene.scene, &args.scene.scene_file)?;
    let params = ControllerParams::default();
    let num_keys = if args.full { FULL_SCALE_KEYS } else { args.keys };
    let mut ns = args.n.clone();
    ns.sort_unstable();
    ns.dedup();

    let pool = simulate_trial_pool(&scene, &params, args.t_max, DEFAULT_QUANTIZATION, args.seed)?;
    let curves = empirical_capacity_curves(&pool, &ns, num_keys, args.seed)?;

    if args.formats.wants("csv") {
        let mut rows = Vec::new();
        for curve in &curves {
            for (&t, &fraction) in curve.t.iter().zip(&curve.coverage) {
                rows.push(format!("{},{},{:.6}", curve.n, t, fraction));
            }
        }
        write_csv(&out.join("capacity.csv"), "n,t,fraction", &rows)?;
    }
    if args.formats.wants("svg") {
        let mut plot = Plot::new(
            &format!("Complete-coverage probability: {} ({num_keys} keys)", scene.scene_id),
            "trials t",
            "fraction of keys covered",
        )
        .with_y_range(0.0, 1.0);
        for curve in &curves {
            plot.add_series(
                &format!("n={} empirical", curve.n),
                curve
                    .t
                    .iter()
                    .zip(&curve.coverage)
                    .map(|(&t, &c)| (f64::from(t), c))
                    .collect(),
                SeriesStyle::Line,
            );
            let analytic: Result<Vec<(f64, f64)>> = curve
                .t
                .iter()
                .map(|&t| Ok((f64::from(t), coverage_probability(curve.n, t)?)))
                .collect();
            plot.add_series(&format!("n={} analytic", curve.n), analytic?, SeriesStyle::Line);
        }
        write_atomic(&out.join("capacity.svg"), &plot.render())?;
    }

    let mut manifest = Manifest::new("capacity");
    manifest.set("scene_id", &scene.scene_id);
    manifest.set("n", &ns);
    manifest.set("num_keys", num_keys);
    manifest.set("full", args.full);
    manifest.set("t_max", args.t_max);
    manifest.set("seed", args.seed);
    manifest.set("formats", &args.formats.formats);
    manifest.write(out)?;

    println!(
        "capacity: {} curves over {num_keys} keys, pool of {} trials",
        curves.len(),
        pool.len()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_range_parsing() {
        assert_eq!(parse_n_range("2..8").unwrap(), vec![2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(parse_n_range("2..2").unwrap(), vec![2]);
        assert_eq!(parse_n_range("5").unwrap(), vec![5]);
        assert!(parse_n_range("8..2").is_err());
        assert!(parse_n_range("1..3").is_err());
        assert!(parse_n_range("x").is_err());
        assert!(parse_n_range("2..y").is_err());
    }

    #[test]
    fn manifest_serialization_is_deterministic_and_keyless() {
        let mut m = Manifest::new("build");
        m.set("seed", 7u64);
        m.set("scene_id", "pick");
        m.set("key_fingerprint", "0011223344556677");
        let a = serde_json::to_string(&m).unwrap();
        let b = serde_json::to_string(&m).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("key_fingerprint"));
        assert!(!a.to_lowercase().contains("timestamp"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn format_filter_rejects_unknown_names() {
        let args = FormatArgs { formats: vec!["csv".into(), "pdf".into()] };
        assert!(args.validate().is_err());
        let args = FormatArgs { formats: vec!["svg".into()] };
        args.validate().unwrap();
        assert!(args.wants("svg"));
        assert!(!args.wants("csv"));
    }
}
