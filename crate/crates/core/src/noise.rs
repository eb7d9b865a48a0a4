//! Error sampling for code-capacity and space-time decoding problems, and
//! the closed-form syndrome-bias expressions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chain::{Chain, CubicComplex};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::surface::CheckSet;

/// Independent Pauli noise. Probabilities lie in [0, ½].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    IidXz {
        p_x: f64,
        p_z: f64,
    },
    Depolarizing {
        p: f64,
    },
    Phenomenological {
        p_data: f64,
        p_meas: f64,
    },
    /// Gate-level rates with p₁ = p₂ = (3/2)p_prep = (3/2)p_meas.
    CircuitLevel {
        p2: f64,
    },
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=0.5).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

/// Rates of the circuit-level model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitRates {
    pub p1: f64,
    pub p2: f64,
    pub p_prep: f64,
    pub p_meas: f64,
}

impl NoiseModel {
    pub fn iid_z(p: f64) -> Self {
        NoiseModel::IidXz { p_x: 0.0, p_z: p }
    }

    pub fn phenomenological(p: f64) -> Self {
        NoiseModel::Phenomenological { p_data: p, p_meas: p }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::IidXz { p_x, p_z } => check_p(p_x).and(check_p(p_z)),
            NoiseModel::Depolarizing { p } => check_p(p),
            NoiseModel::Phenomenological { p_data, p_meas } => check_p(p_data).and(check_p(p_meas)),
            NoiseModel::CircuitLevel { p2 } => check_p(p2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::IidXz { .. } => "iid_xz",
            NoiseModel::Depolarizing { .. } => "depolarizing",
            NoiseModel::Phenomenological { .. } => "phenomenological",
            NoiseModel::CircuitLevel { .. } => "circuit_level",
        }
    }

    pub fn circuit_rates(&self) -> Option<CircuitRates> {
        match *self {
            NoiseModel::CircuitLevel { p2 } => {
                Some(CircuitRates { p1: p2, p2, p_prep: 2.0 * p2 / 3.0, p_meas: 2.0 * p2 / 3.0 })
            }
            _ => None,
        }
    }

    /// Marginal flip rate of the X-part and of the Z-part of a data error.
    pub fn data_rates(&self) -> (f64, f64) {
        match *self {
            NoiseModel::IidXz { p_x, p_z } => (p_x, p_z),
            NoiseModel::Depolarizing { p } => (2.0 * p / 3.0, 2.0 * p / 3.0),
            NoiseModel::Phenomenological { p_data, .. } => (p_data, p_data),
            NoiseModel::CircuitLevel { p2 } => (p2, p2),
        }
    }
}

/// X-part and Z-part of a code-capacity error on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorSample {
    pub x: BitVec,
    pub z: BitVec,
}

fn bernoulli<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> BitVec {
    let mut v = BitVec::zeros(n);
    if p > 0.0 {
        for i in 0..n {
            if rng.random::<f64>() < p {
                v.set(i, true);
            }
        }
    }
    v
}

/// Samples independent errors on `n` qubits. A depolarizing Y enters both
/// the X-part and the Z-part.
pub fn sample_error<R: Rng + ?Sized>(model: &NoiseModel, n: usize, rng: &mut R) -> Result<ErrorSample> {
    model.validate()?;
    match *model {
        NoiseModel::IidXz { p_x, p_z } => {
            let x = bernoulli(n, p_x, rng);
            let z = bernoulli(n, p_z, rng);
            Ok(ErrorSample { x, z })
        }
        NoiseModel::Depolarizing { p } => {
            let mut x = BitVec::zeros(n);
            let mut z = BitVec::zeros(n);
            for i in 0..n {
                if rng.random::<f64>() < p {
                    match rng.random_range(0..3u8) {
                        0 => x.set(i, true),
                        1 => {
                            x.set(i, true);
                            z.set(i, true);
                        }
                        _ => z.set(i, true),
                    }
                }
            }
            Ok(ErrorSample { x, z })
        }
        _ => Err(Error::UnsupportedModel(format!("{} has no code-capacity sampler", model.name()))),
    }
}

/// One error type over `rounds` noisy syndrome rounds followed by a
/// perfect one.
///
/// Layer t (0..=rounds) holds round t+1. A data error first present in
/// round t+1 sits on spatial edge (e, t); a flip of the round t+1
/// measurement of check k sits on temporal edge (k, t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTimeSample {
    pub rounds: usize,
    /// Fresh data errors per layer; the last layer is always empty.
    pub data: Vec<BitVec>,
    /// Measurement flips per noisy round.
    pub flips: Vec<BitVec>,
    /// Raw outcomes m_k(t) for t = 1..=rounds+1.
    pub measured: Vec<BitVec>,
    /// Differenced syndrome s_k(t) = m_k(t) ⊕ m_k(t−1), with m_k(0) = 0.
    pub differenced: Vec<BitVec>,
    /// Accumulated data error after the last round.
    pub final_error: BitVec,
}

impl SpaceTimeSample {
    /// Defects as (check, layer) pairs in layer-major order.
    pub fn defects(&self) -> Vec<(usize, usize)> {
        self.differenced.iter().enumerate().flat_map(|(t, s)| s.iter_ones().map(move |k| (k, t))).collect()
    }

    /// The error as a 1-chain on the cubic complex over a base whose
    /// vertices are the checks.
    pub fn to_chain(&self, complex: &CubicComplex) -> Result<Chain> {
        let base = complex.base();
        if complex.layers() != self.rounds + 1 || base.num_edges() != self.final_error.len() {
            return Err(Error::DimensionMismatch { expected: complex.layers(), found: self.rounds + 1 });
        }
        let len = complex.layers() * base.num_edges() + (complex.layers() - 1) * base.num_vertices();
        let mut bits = BitVec::zeros(len);
        for (t, d) in self.data.iter().enumerate() {
            for e in d.iter_ones() {
                bits.set(complex.spatial_edge(e, t), true);
            }
        }
        for (t, f) in self.flips.iter().enumerate() {
            for k in f.iter_ones() {
                bits.set(complex.temporal_edge(k, t), true);
            }
        }
        Ok(Chain::new(1, false, bits))
    }

    /// Differenced syndrome flattened layer-major.
    pub fn defect_chain(&self) -> BitVec {
        let mut out = BitVec::zeros(0);
        for s in &self.differenced {
            out = out.concat(s);
        }
        out
    }
}

/// Samples a phenomenological space-time history for the error type whose
/// checks are given.
pub fn sample_spacetime<R: Rng + ?Sized>(
    model: &NoiseModel,
    checks: &CheckSet,
    rounds: usize,
    rng: &mut R,
) -> Result<SpaceTimeSample> {
    model.validate()?;
    let NoiseModel::Phenomenological { p_data, p_meas } = *model else {
        return Err(Error::UnsupportedModel(format!("{} has no space-time sampler", model.name())));
    };
    if rounds < 1 {
        return Err(Error::Config("at least one noisy round is needed".into()));
    }
    let n = checks.num_qubits();
    let m = checks.num_checks();
    let mut accumulated = BitVec::zeros(n);
    let mut data = Vec::with_capacity(rounds + 1);
    let mut flips = Vec::with_capacity(rounds);
    let mut measured = Vec::with_capacity(rounds + 1);
    let mut differenced = Vec::with_capacity(rounds + 1);
    let mut previous = BitVec::zeros(m);
    for t in 0..=rounds {
        let fresh = if t < rounds { bernoulli(n, p_data, rng) } else { BitVec::zeros(n) };
        accumulated ^= &fresh;
        let mut outcome = checks.syndrome(&accumulated);
        if t < rounds {
            let f = bernoulli(m, p_meas, rng);
            outcome ^= &f;
            flips.push(f);
        }
        let mut diff = outcome.clone();
        diff ^= &previous;
        previous = outcome.clone();
        data.push(fresh);
        measured.push(outcome);
        differenced.push(diff);
    }
    Ok(SpaceTimeSample { rounds, data, flips, measured, differenced, final_error: accumulated })
}

/// Expectation ⟨(−1)^s⟩ of one differenced syndrome bit.
///
/// Phenomenological: (1−2p_meas)²(1−2p_data)⁴. Circuit level:
/// (1−2p_prep−2p_meas−8p₂)²(1−8p₂)⁴.
pub fn syndrome_bias(model: &NoiseModel) -> Result<f64> {
    model.validate()?;
    match *model {
        NoiseModel::Phenomenological { p_data, p_meas } => {
            Ok((1.0 - 2.0 * p_meas).powi(2) * (1.0 - 2.0 * p_data).powi(4))
        }
        NoiseModel::CircuitLevel { .. } => {
            let r = model.circuit_rates().expect("circuit model");
            Ok((1.0 - 2.0 * r.p_prep - 2.0 * r.p_meas - 8.0 * r.p2).powi(2) * (1.0 - 8.0 * r.p2).powi(4))
        }
        _ => Err(Error::UnsupportedModel(format!("no syndrome bias for {}", model.name()))),
    }
}

/// Equal-rate phenomenological p at which the bias equals `target`.
pub fn phenomenological_rate_for_bias(target: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::ProbabilityOutOfRange(target));
    }
    Ok((1.0 - target.powf(1.0 / 6.0)) / 2.0)
}

/// Circuit-level p₂ at which the bias equals `target`, by bisection on the
/// decreasing branch p₂ ∈ [0, 1/8].
pub fn circuit_rate_for_bias(target: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::ProbabilityOutOfRange(target));
    }
    let f = |p2: f64| syndrome_bias(&NoiseModel::CircuitLevel { p2 }).expect("valid rate") - target;
    let (mut lo, mut hi) = (0.0, 0.125);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Coupling J with e^{−J} = √(p/(1−p)).
pub fn coupling_from_p(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(-0.5 * (p / (1.0 - p)).ln())
}
