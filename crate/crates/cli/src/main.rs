//! `topoqec` command-line front end.
//!
//! Exit codes: 0 on success, 2 on a configuration error, 3 when a threshold
//! run cannot bracket a crossing, 1 for anything else.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use topoqec::decoders::{decode_2d, ml_decode, Match};
use topoqec::distill::{distill_cost, distill_curve, distill_threshold};
use topoqec::error::Error;
use topoqec::harness::{
    estimate_crossing, run_threshold_experiment, DecoderKind, ExecutionMode, ExperimentConfig, NoiseFamily,
};
use topoqec::pauli::PauliKind;
use topoqec::stabilizer::{outcome_probability, weak_sample, CliffordCircuit};
use topoqec::surface::{CodeKind, SurfaceCodeLayout, Syndrome};

const CONFIG_ERROR: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "topoqec", version, about = "Topological error-correction toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo logical error rates over a size × p grid, as CSV.
    Threshold(ThresholdArgs),
    /// Decode one syndrome read from JSON.
    Decode(DecodeArgs),
    /// Sample a Clifford circuit from |0…0⟩.
    Simulate(SimulateArgs),
    /// Reed–Muller-15 distillation report.
    Distill(DistillArgs),
    /// Code parameters of a lattice.
    Codeinfo(CodeinfoArgs),
}

#[derive(Args, Default)]
struct ThresholdArgs {
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    code: Option<CodeKind>,
    /// Comma-separated lattice sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    noise: Option<NoiseFamily>,
    /// p_meas / p_data for phenomenological noise.
    #[arg(long)]
    meas_ratio: Option<f64>,
    #[arg(long)]
    decoder: Option<DecoderKind>,
    /// Noisy rounds before the final perfect one (default: the size).
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long, default_value = "toric")]
    code: CodeKind,
    #[arg(long)]
    size: usize,
    /// JSON file: {"basis": "Z", "defects": [..]}.
    #[arg(long)]
    syndrome: PathBuf,
    #[arg(long, default_value = "mwpm")]
    decoder: DecoderKind,
    /// Flip rate assumed by the ML decoder.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit text: one gate per line, ending with `M q…`.
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, default_value_t = 1000)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also print exact outcome probabilities (at most 16 measured qubits).
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct DistillArgs {
    #[arg(long)]
    p: f64,
    /// Target output error for the cost estimate.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct CodeinfoArgs {
    #[arg(long)]
    code: CodeKind,
    #[arg(long)]
    size: usize,
}

/// Keys accepted in a threshold TOML file.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    code: Option<CodeKind>,
    sizes: Option<Vec<usize>>,
    p_min: Option<f64>,
    p_max: Option<f64>,
    steps: Option<usize>,
    trials: Option<u64>,
    noise: Option<NoiseSpec>,
    meas_ratio: Option<f64>,
    decoder: Option<DecoderKind>,
    rounds: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

/// `noise = "iid-z"` or `noise = { kind = "phenomenological", meas_ratio = 0.5 }`.
#[derive(Deserialize)]
#[serde(untagged)]
enum NoiseSpec {
    Name(NoiseFamily),
    Table { kind: NoiseFamily, meas_ratio: Option<f64> },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<Error>() {
            Some(Error::Inconclusive(_)) => INCONCLUSIVE,
            Some(
                Error::Config(_)
                | Error::ProbabilityOutOfRange(_)
                | Error::SizeTooSmall(_)
                | Error::UnknownCode(_)
                | Error::UnsupportedModel(_)
                | Error::ResourceLimit(_),
            ) => CONFIG_ERROR,
            _ if e.downcast_ref::<toml::de::Error>().is_some() => CONFIG_ERROR,
            _ => 1,
        };
        Failure { code, message: format!("{e:#}") }
    }
}

fn config_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Error::Config(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Threshold(a) => threshold(a),
        Command::Decode(a) => decode(a),
        Command::Simulate(a) => simulate(a),
        Command::Distill(a) => distill(a),
        Command::Codeinfo(a) => codeinfo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn build_config(a: &ThresholdArgs) -> anyhow::Result<ExperimentConfig> {
    let file = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str::<ConfigFile>(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let (file_noise, file_ratio) = match file.noise {
        Some(NoiseSpec::Name(n)) => (Some(n), None),
        Some(NoiseSpec::Table { kind, meas_ratio }) => (Some(kind), meas_ratio),
        None => (None, None),
    };
    let cfg = ExperimentConfig {
        code: a.code.or(file.code).unwrap_or(CodeKind::Toric),
        sizes: a.sizes.clone().or(file.sizes).ok_or_else(|| config_error("no sizes given"))?,
        p_min: a.p_min.or(file.p_min).ok_or_else(|| config_error("no p-min given"))?,
        p_max: a.p_max.or(file.p_max).ok_or_else(|| config_error("no p-max given"))?,
        steps: a.steps.or(file.steps).unwrap_or(11),
        trials: a.trials.or(file.trials).unwrap_or(1000),
        noise: a.noise.or(file_noise).unwrap_or(NoiseFamily::IidZ),
        meas_ratio: a.meas_ratio.or(file.meas_ratio).or(file_ratio).unwrap_or(1.0),
        decoder: a.decoder.or(file.decoder).unwrap_or(DecoderKind::Mwpm),
        rounds: a.rounds.or(file.rounds),
        seed: a.seed.or(file.seed).unwrap_or(0),
        out: a.out.clone().or(file.out),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn threshold(a: ThresholdArgs) -> Result<(), Failure> {
    let cfg = build_config(&a)?;
    let mode = if a.sequential { ExecutionMode::Sequential } else { ExecutionMode::Parallel };
    let table = run_threshold_experiment(&cfg, mode).map_err(anyhow::Error::new)?;
    let csv = table.to_csv();
    match &cfg.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    if cfg.sizes.len() < 2 {
        return Ok(());
    }
    let c = estimate_crossing(&table).map_err(anyhow::Error::new)?;
    eprintln!("crossing {:.5} (pairs span {:.5}..{:.5})", c.estimate, c.low, c.high);
    Ok(())
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Deserialize)]
struct SyndromeFile {
    #[serde(default = "default_basis")]
    basis: PauliKind,
    defects: Vec<usize>,
}

fn default_basis() -> PauliKind {
    PauliKind::Z
}

fn decode(a: DecodeArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.syndrome).with_context(|| format!("reading {}", a.syndrome.display()))?;
    let file: SyndromeFile =
        serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", a.syndrome.display())))?;
    let code = SurfaceCodeLayout::new(a.code, a.size).map_err(anyhow::Error::new)?;
    let checks = code.checks(file.basis);
    let syn = Syndrome::from_defects(file.basis, checks.num_checks(), &file.defects).map_err(anyhow::Error::new)?;
    let ones = |v: &topoqec::gf2::BitVec| v.iter_ones().collect::<Vec<_>>();
    let report = match a.decoder {
        DecoderKind::Mwpm => {
            let r = decode_2d(&code, &syn).map_err(anyhow::Error::new)?;
            let matching: Vec<Value> = r
                .matching
                .iter()
                .map(|m| match m {
                    Match::Pair(x, y) => json!([x.check, y.check]),
                    Match::Boundary(x) => json!([x.check, "boundary"]),
                })
                .collect();
            json!({
                "decoder": "mwpm",
                "basis": file.basis,
                "defects": syn.defects(),
                "matching": matching,
                "recovery": ones(&r.recovery),
                "weight": r.weight,
            })
        }
        DecoderKind::Ml => {
            let r = ml_decode(checks, &syn.bits, a.p).map_err(anyhow::Error::new)?;
            json!({
                "decoder": "ml",
                "basis": file.basis,
                "defects": syn.defects(),
                "class": r.class.0,
                "posterior": r.posterior,
                "recovery": ones(&r.recovery),
            })
        }
    };
    print_json(&report);
    Ok(())
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.circuit).with_context(|| format!("reading {}", a.circuit.display()))?;
    let c = CliffordCircuit::parse(&text).map_err(|e| config_error(format!("{}: {e}", a.circuit.display())))?;
    let zero = vec![[0.0, 0.0, 0.0, 0.0, 1.0, 0.0]; c.n()];
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for _ in 0..a.shots {
        let s = weak_sample(&c, &zero, &mut rng).map_err(anyhow::Error::new)?;
        *counts.entry(bit_string(&s)).or_default() += 1;
    }
    let mut report = json!({ "qubits": c.n(), "measured": c.measured(), "shots": a.shots, "counts": counts });
    if a.exact {
        let m = c.measured().len();
        if m > 16 {
            return Err(config_error(format!("--exact needs at most 16 measured qubits, got {m}")).into());
        }
        let mut probs = BTreeMap::new();
        for x in 0..1usize << m {
            let out: Vec<bool> = (0..m).map(|i| x >> i & 1 == 1).collect();
            let p = outcome_probability(&c, &out).map_err(anyhow::Error::new)?.value();
            if p > 0.0 {
                probs.insert(bit_string(&out), p);
            }
        }
        report["probabilities"] = json!(probs);
    }
    print_json(&report);
    Ok(())
}

fn distill(a: DistillArgs) -> Result<(), Failure> {
    let (p_pass, p_out) = distill_curve(a.p).map_err(anyhow::Error::new)?;
    let t = distill_threshold();
    let mut report = json!({
        "p": a.p,
        "p_pass": p_pass,
        "p_out": p_out,
        "threshold": t.fixed_point,
    });
    if let Some(eps) = a.eps {
        let c = distill_cost(a.p, eps).map_err(anyhow::Error::new)?;
        report["eps"] = json!(eps);
        report["rounds"] = json!(c.rounds);
        report["states"] = json!(c.states.to_string());
        report["final_error"] = json!(c.final_error);
        report["states_estimate"] = json!(c.estimate);
    }
    print_json(&report);
    Ok(())
}

fn codeinfo(a: CodeinfoArgs) -> Result<(), Failure> {
    let code = SurfaceCodeLayout::new(a.code, a.size).map_err(anyhow::Error::new)?;
    let d = code.distance();
    print_json(&json!({
        "code": a.code,
        "size": a.size,
        "qubits": code.num_qubits(),
        "generators": code.num_independent_generators(),
        "logical_pairs": code.logical_pairs(),
        "distance": d.value(),
        "distance_x": d.x,
        "distance_z": d.z,
        "distance_exact": d.exact,
    }));
    Ok(())
}
