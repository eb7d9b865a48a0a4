//! Monte Carlo threshold experiments and crossing estimation.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decoders::{ml_decode, MatchingDecoder, ML_MAX_RANK};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::noise::{sample_error, sample_spacetime, NoiseModel};
use crate::pauli::PauliKind;
use crate::rng::trial_rng;
use crate::surface::{CheckSet, CodeKind, SurfaceCodeLayout};

pub const CSV_HEADER: &str = "code,size,p,trials,failures,logical_error_rate,stderr";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseFamily {
    IidZ,
    Depolarizing,
    Phenomenological,
}

impl FromStr for NoiseFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid-z" | "iid_z" => Ok(NoiseFamily::IidZ),
            "depolarizing" => Ok(NoiseFamily::Depolarizing),
            "phenomenological" => Ok(NoiseFamily::Phenomenological),
            other => Err(Error::Config(format!("unknown noise `{other}`"))),
        }
    }
}

impl fmt::Display for NoiseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseFamily::IidZ => "iid-z",
            NoiseFamily::Depolarizing => "depolarizing",
            NoiseFamily::Phenomenological => "phenomenological",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Mwpm,
    Ml,
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mwpm" => Ok(DecoderKind::Mwpm),
            "ml" => Ok(DecoderKind::Ml),
            other => Err(Error::Config(format!("unknown decoder `{other}`"))),
        }
    }
}

/// How trials are scheduled. Results do not depend on the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExecutionMode {
    Sequential,
    /// Rayon worker pool; sequential when built without `parallel`.
    #[default]
    Parallel,
}

fn default_meas_ratio() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub code: CodeKind,
    pub sizes: Vec<usize>,
    pub p_min: f64,
    pub p_max: f64,
    pub steps: usize,
    pub trials: u64,
    pub noise: NoiseFamily,
    /// p_meas / p_data for phenomenological noise.
    #[serde(default = "default_meas_ratio")]
    pub meas_ratio: f64,
    pub decoder: DecoderKind,
    /// Noisy rounds per trial; the code size when absent.
    #[serde(default)]
    pub rounds: Option<usize>,
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Config("no sizes given".into()));
        }
        if let Some(s) = self.sizes.iter().find(|&&s| s < 2) {
            return Err(Error::Config(format!("size {s} is below 2")));
        }
        if self.trials < 1 {
            return Err(Error::Config("at least one trial per point".into()));
        }
        if self.steps < 1 {
            return Err(Error::Config("at least one grid point".into()));
        }
        if !(0.0 <= self.p_min && self.p_min <= self.p_max && self.p_max < 0.5) {
            return Err(Error::Config(format!("need 0 ≤ p_min ≤ p_max < 0.5, got [{}, {}]", self.p_min, self.p_max)));
        }
        if self.steps > 1 && self.p_min >= self.p_max {
            return Err(Error::Config("the p grid must be strictly increasing".into()));
        }
        if !(0.0..=1.0e6).contains(&self.meas_ratio) || self.p_max * self.meas_ratio > 0.5 {
            return Err(Error::Config(format!("measurement ratio {} out of range", self.meas_ratio)));
        }
        if self.rounds == Some(0) {
            return Err(Error::Config("at least one round".into()));
        }
        if self.noise == NoiseFamily::Phenomenological {
            if self.decoder == DecoderKind::Ml {
                return Err(Error::Config("the ML decoder handles code-capacity noise only".into()));
            }
            if self.code == CodeKind::Bitflip {
                return Err(Error::Config("phenomenological runs need a toric or planar code".into()));
            }
        }
        Ok(())
    }

    pub fn p_grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.p_min];
        }
        let span = self.p_max - self.p_min;
        (0..self.steps).map(|i| self.p_min + span * i as f64 / (self.steps - 1) as f64).collect()
    }

    pub fn rounds_for(&self, size: usize) -> usize {
        self.rounds.unwrap_or(size)
    }

    pub fn model_at(&self, p: f64) -> NoiseModel {
        match self.noise {
            NoiseFamily::IidZ => NoiseModel::iid_z(p),
            NoiseFamily::Depolarizing => NoiseModel::Depolarizing { p },
            NoiseFamily::Phenomenological => NoiseModel::Phenomenological { p_data: p, p_meas: self.meas_ratio * p },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub code: CodeKind,
    pub size: usize,
    pub p: f64,
    pub trials: u64,
    /// Trials with any logical error.
    pub failures: u64,
    pub logical_error_rate: f64,
    pub stderr: f64,
    /// Trials whose X-part (resp. Z-part) left a logical error.
    pub failures_x: u64,
    pub failures_z: u64,
    /// Per logical qubit, trials with an error on that qubit.
    pub failures_per_logical: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// CSV with the fixed header; the per-type counts stay in memory.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.code, r.size, r.p, r.trials, r.failures, r.logical_error_rate, r.stderr
            );
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.rows.iter().map(|r| r.size).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// (p, rate) points of one size in increasing p.
    pub fn curve(&self, size: usize) -> Vec<(f64, f64)> {
        let mut c: Vec<(f64, f64)> =
            self.rows.iter().filter(|r| r.size == size).map(|r| (r.p, r.logical_error_rate)).collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        c
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Tally {
    failures: u64,
    x: u64,
    z: u64,
    per_logical: Vec<u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.failures += other.failures;
        self.x += other.x;
        self.z += other.z;
        if self.per_logical.len() < other.per_logical.len() {
            self.per_logical.resize(other.per_logical.len(), 0);
        }
        for (a, b) in self.per_logical.iter_mut().zip(other.per_logical) {
            *a += b;
        }
        self
    }
}

enum Engine {
    Matching { x: Box<MatchingDecoder>, z: Box<MatchingDecoder> },
    Ml { x: Box<CheckSet>, z: Box<CheckSet> },
}

struct SizeContext {
    engine: Engine,
    n: usize,
    logicals: usize,
}

impl SizeContext {
    fn new(cfg: &ExperimentConfig, size: usize) -> Result<Self> {
        let code = SurfaceCodeLayout::new(cfg.code, size)?;
        let engine = match cfg.decoder {
            DecoderKind::Mwpm => Engine::Matching {
                x: Box::new(MatchingDecoder::for_code(&code, PauliKind::X)?),
                z: Box::new(MatchingDecoder::for_code(&code, PauliKind::Z)?),
            },
            DecoderKind::Ml => {
                let (x, z) = (code.checks(PauliKind::X).clone(), code.checks(PauliKind::Z).clone());
                for c in [&x, &z] {
                    if c.stabilizer_rank() > ML_MAX_RANK {
                        return Err(Error::ResourceLimit(format!(
                            "size {size} has stabilizer rank {} > {ML_MAX_RANK} for the ML decoder",
                            c.stabilizer_rank()
                        )));
                    }
                }
                Engine::Ml { x: Box::new(x), z: Box::new(z) }
            }
        };
        Ok(SizeContext { engine, n: code.num_qubits(), logicals: code.logical_pairs() })
    }

    fn checks(&self, kind: PauliKind) -> &CheckSet {
        match (&self.engine, kind) {
            (Engine::Matching { x, .. }, PauliKind::X) => x.checks(),
            (Engine::Matching { z, .. }, PauliKind::Z) => z.checks(),
            (Engine::Ml { x, .. }, PauliKind::X) => x,
            (Engine::Ml { z, .. }, PauliKind::Z) => z,
        }
    }

    /// Residual class bits of one error part after decoding.
    fn residual(&self, kind: PauliKind, error: &BitVec, rate: f64) -> Result<u32> {
        let checks = self.checks(kind);
        if error.is_zero() {
            return Ok(0);
        }
        let syndrome = checks.syndrome(error);
        let mut residual = match &self.engine {
            Engine::Matching { x, z } => {
                let dec = if kind == PauliKind::X { x } else { z };
                dec.decode(&syndrome)?.recovery
            }
            Engine::Ml { .. } => ml_decode(checks, &syndrome, rate)?.recovery,
        };
        residual ^= error;
        Ok(checks.class_of(&residual).0)
    }

    fn trial(
        &self,
        cfg: &ExperimentConfig,
        model: &NoiseModel,
        size: usize,
        rng: &mut impl rand::Rng,
    ) -> Result<Tally> {
        let mut tally = Tally { per_logical: vec![0; self.logicals], ..Tally::default() };
        let (cx, cz) = match cfg.noise {
            NoiseFamily::Phenomenological => {
                let Engine::Matching { z, .. } = &self.engine else {
                    return Err(Error::Config("space-time decoding needs the matching decoder".into()));
                };
                let sample = sample_spacetime(model, z.checks(), cfg.rounds_for(size), rng)?;
                let (ws, wt) = crate::decoders::spacetime_weights(model)?;
                let mut residual = z.decode_spacetime(&sample.differenced, ws, wt)?.recovery;
                residual ^= &sample.final_error;
                (0, z.checks().class_of(&residual).0)
            }
            _ => {
                let e = sample_error(model, self.n, rng)?;
                let (px, pz) = model.data_rates();
                (self.residual(PauliKind::X, &e.x, px)?, self.residual(PauliKind::Z, &e.z, pz)?)
            }
        };
        if cx != 0 {
            tally.x = 1;
        }
        if cz != 0 {
            tally.z = 1;
        }
        if cx | cz != 0 {
            tally.failures = 1;
        }
        for (i, slot) in tally.per_logical.iter_mut().enumerate() {
            *slot = u64::from((cx | cz) >> i & 1);
        }
        Ok(tally)
    }
}

fn run_trials(
    ctx: &SizeContext,
    cfg: &ExperimentConfig,
    model: &NoiseModel,
    size: usize,
    p_index: usize,
    mode: ExecutionMode,
) -> Result<Tally> {
    let one = |t: u64| {
        let mut rng = trial_rng(cfg.seed, size, p_index, t);
        ctx.trial(cfg, model, size, &mut rng)
    };
    let empty = || Ok(Tally { per_logical: vec![0; ctx.logicals], ..Tally::default() });
    match mode {
        #[cfg(feature = "parallel")]
        ExecutionMode::Parallel => {
            use rayon::prelude::*;
            (0..cfg.trials)
                .into_par_iter()
                .map(one)
                .try_reduce(|| Tally { per_logical: vec![0; ctx.logicals], ..Tally::default() }, |a, b| Ok(a.merge(b)))
        }
        _ => (0..cfg.trials).try_fold(empty()?, |acc, t| Ok(acc.merge(one(t)?))),
    }
}

/// Sweeps every (size, p) point of the config.
pub fn run_threshold_experiment(cfg: &ExperimentConfig, mode: ExecutionMode) -> Result<ResultTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &size in &cfg.sizes {
        let ctx = SizeContext::new(cfg, size)?;
        for (pi, p) in cfg.p_grid().into_iter().enumerate() {
            let model = cfg.model_at(p);
            let tally = run_trials(&ctx, cfg, &model, size, pi, mode)?;
            let rate = tally.failures as f64 / cfg.trials as f64;
            rows.push(ResultRow {
                code: cfg.code,
                size,
                p,
                trials: cfg.trials,
                failures: tally.failures,
                logical_error_rate: rate,
                stderr: (rate * (1.0 - rate) / cfg.trials as f64).sqrt(),
                failures_x: tally.x,
                failures_z: tally.z,
                failures_per_logical: tally.per_logical,
            });
        }
    }
    Ok(ResultTable { rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    /// Median of the pairwise crossings.
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
    /// Crossing of each consecutive size pair that has one.
    pub pairs: Vec<((usize, usize), f64)>,
}

/// First p where the larger code stops beating the smaller one, by linear
/// interpolation between grid points.
fn pair_crossing(small: &[(f64, f64)], large: &[(f64, f64)]) -> Option<f64> {
    let diffs: Vec<(f64, f64)> =
        small.iter().filter_map(|&(p, rs)| large.iter().find(|q| q.0 == p).map(|&(_, rl)| (p, rl - rs))).collect();
    for w in diffs.windows(2) {
        let ((p0, d0), (p1, d1)) = (w[0], w[1]);
        if d0 < 0.0 && d1 >= 0.0 {
            return Some(p0 + (p1 - p0) * (-d0) / (d1 - d0));
        }
    }
    None
}

pub fn estimate_crossing(table: &ResultTable) -> Result<Crossing> {
    let sizes = table.sizes();
    if sizes.len() < 2 {
        return Err(Error::Inconclusive("need at least two sizes".into()));
    }
    let mut pairs = Vec::new();
    for w in sizes.windows(2) {
        if let Some(p) = pair_crossing(&table.curve(w[0]), &table.curve(w[1])) {
            pairs.push(((w[0], w[1]), p));
        }
    }
    if pairs.is_empty() {
        return Err(Error::Inconclusive("no size pair crosses inside the grid".into()));
    }
    let mut xs: Vec<f64> = pairs.iter().map(|x| x.1).collect();
    xs.sort_by(f64::total_cmp);
    let m = xs.len();
    let estimate = if m % 2 == 1 { xs[m / 2] } else { 0.5 * (xs[m / 2 - 1] + xs[m / 2]) };
    Ok(Crossing { estimate, low: xs[0], high: xs[m - 1], pairs })
}
