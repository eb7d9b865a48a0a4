//! Error and resource recursion for concatenated codes,
//! p⁽ˡ⁾ = (C·p)^(2ˡ)/C with N physical qubits per logical one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Deepest level searched for the target.
pub const MAX_LEVELS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct ConcatReport {
    pub threshold: f64,
    /// p⁽ˡ⁾ for l = 0..=levels (or up to the search limit).
    pub level_errors: Vec<f64>,
    /// Minimal level with p⁽ˡ⁾·M < 1, if any.
    pub levels: Option<usize>,
    /// N^levels · M.
    pub resources: Option<f64>,
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::ProbabilityOutOfRange(x))
}

/// Exact p⁽ˡ⁾ = (C·p)^(2ˡ)/C.
pub fn level_error_exact(c: &BigRational, p: &BigRational, level: u32) -> Result<BigRational> {
    if *c < BigRational::one() {
        return Err(Error::Config(format!("C = {c} must be at least 1")));
    }
    if p.numer() < &BigInt::zero() || *p >= BigRational::one() {
        return Err(Error::Config(format!("p = {p} must lie in [0, 1)")));
    }
    if level > 24 {
        return Err(Error::ResourceLimit(format!("exact level {level} is too deep")));
    }
    let mut acc = c * p;
    for _ in 0..level {
        acc = &acc * &acc;
    }
    Ok(acc / c)
}

/// [`level_error_exact`] on the exact binary values of two doubles.
pub fn level_error_exact_f64(c: f64, p: f64, level: u32) -> Result<BigRational> {
    level_error_exact(&rational(c)?, &rational(p)?, level)
}

/// Log-space level error, exact enough for choosing the level count.
fn log_level_error(c: f64, p: f64, level: usize) -> f64 {
    2f64.powi(level as i32) * (c * p).ln() - c.ln()
}

pub fn concat_analytics(c: f64, n: f64, p: f64, m: f64) -> Result<ConcatReport> {
    if c < 1.0 || n < 1.0 {
        return Err(Error::Config("C and N must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if m < 1.0 {
        return Err(Error::Config("the computation size M must be at least 1".into()));
    }
    let mut level_errors = Vec::new();
    let mut levels = None;
    for l in 0..=MAX_LEVELS {
        let e = if p == 0.0 { 0.0 } else { log_level_error(c, p, l).exp() };
        level_errors.push(e);
        let below = if p == 0.0 { true } else { log_level_error(c, p, l) + m.ln() < 0.0 };
        if below {
            levels = Some(l);
            break;
        }
    }
    let resources = levels.map(|l| n.powi(l as i32) * m);
    Ok(ConcatReport { threshold: 1.0 / c, level_errors, levels, resources })
}

/// Whether p⁽ˡ⁾ = p for every level up to `depth`.
pub fn is_fixed_point(c: &BigRational, p: &BigRational, depth: u32) -> Result<bool> {
    for l in 0..=depth {
        if level_error_exact(c, p, l)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nearest double, also for values below the normal range of a direct
/// conversion.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    match r.to_f64() {
        Some(x) if x != 0.0 && x.is_finite() => x,
        _ => {
            // Scale into range before converting.
            let num = r.numer().bits() as i64;
            let den = r.denom().bits() as i64;
            let shift = num - den;
            let scaled = if shift > 0 {
                r / BigRational::from_integer(BigInt::one() << shift as usize)
            } else {
                r * BigRational::from_integer(BigInt::one() << (-shift) as usize)
            };
            scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
        }
    }
}
