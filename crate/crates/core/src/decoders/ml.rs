//! Maximum-likelihood decoding by exact summation over the stabilizer
//! group, for codes with at most 20 independent same-type stabilizers.

use crate::chain::HomologyClass;
use crate::error::{Error, Result};
use crate::gf2::{solve_linear, BitVec, SpanBasis};
use crate::surface::CheckSet;

pub const ML_MAX_RANK: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct MlResult {
    pub class: HomologyClass,
    /// Normalized posterior of the error's logical class, indexed by the
    /// class bits of [`CheckSet::class_of`].
    pub posterior: Vec<f64>,
    /// Reference recovery R(S) with the given syndrome.
    pub reference: BitVec,
    /// Recovery in the most likely class, so that error + recovery is
    /// trivial whenever the error lies in that class.
    pub recovery: BitVec,
}

/// Exact homology-class posterior for i.i.d. flips of rate `p`.
///
/// Each class i collects P[R(S)·G·L_i] over the stabilizer group G; ties go
/// to the lowest class index.
pub fn ml_decode(checks: &CheckSet, syndrome: &BitVec, p: f64) -> Result<MlResult> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let n = checks.num_qubits();
    if syndrome.len() != checks.num_checks() {
        return Err(Error::InvalidSyndrome(format!("expected {} bits, found {}", checks.num_checks(), syndrome.len())));
    }
    let rows: Vec<BitVec> =
        (0..checks.num_checks()).map(|c| BitVec::from_indices(n, checks.check(c).iter().copied())).collect();
    let reference = if rows.is_empty() {
        BitVec::zeros(n)
    } else {
        solve_linear(&rows, syndrome).ok_or_else(|| Error::InvalidSyndrome("no error has this syndrome".into()))?
    };
    let span = SpanBasis::from_vectors(n, checks.stabilizers(), false);
    if span.rank() > ML_MAX_RANK {
        return Err(Error::ResourceLimit(format!("stabilizer rank {} exceeds {ML_MAX_RANK}", span.rank())));
    }
    let basis: Vec<BitVec> = span.basis().cloned().collect();
    let logicals = checks.logicals();
    let k = logicals.len();
    let ratio = p / (1.0 - p);
    let mut weights = vec![0.0; 1 << k];
    for (class, w) in weights.iter_mut().enumerate() {
        let mut cur = reference.clone();
        for (i, l) in logicals.iter().enumerate() {
            if class >> i & 1 == 1 {
                cur ^= l;
            }
        }
        let mut hist = vec![0u64; n + 1];
        hist[cur.count_ones()] += 1;
        for step in 1u64..(1 << basis.len()) {
            cur ^= &basis[step.trailing_zeros() as usize];
            hist[cur.count_ones()] += 1;
        }
        *w = hist.iter().enumerate().map(|(wt, &c)| c as f64 * ratio.powi(wt as i32)).sum();
    }
    // Logical i flips class bit i, so combination c lands in class base ^ c.
    let base = checks.class_of(&reference).0 as usize;
    let mut posterior = vec![0.0; 1 << k];
    for (combo, &w) in weights.iter().enumerate() {
        posterior[base ^ combo] = w;
    }
    let total: f64 = posterior.iter().sum();
    if total > 0.0 {
        posterior.iter_mut().for_each(|x| *x /= total);
    }
    let mut best = 0;
    for (i, &x) in posterior.iter().enumerate() {
        if x > posterior[best] {
            best = i;
        }
    }
    let mut recovery = reference.clone();
    for (i, l) in logicals.iter().enumerate() {
        if (best ^ base) >> i & 1 == 1 {
            recovery ^= l;
        }
    }
    Ok(MlResult { class: HomologyClass(best as u32), posterior, reference, recovery })
}
