//! Belief propagation on the tree of a concatenated code.
//!
//! Errors of one Pauli type are tracked. A block's input is the logical
//! class of each child (or the physical flip at level 1), and its error
//! decomposes uniquely as logical · stabilizer · pure error R(S).

use crate::error::{Error, Result};
use crate::gf2::{solve_linear, BitVec};
use crate::pauli::PauliKind;
use crate::stabilizer::{code_fixture, CodeFixture};

/// Largest inner block handled by the per-block tables.
pub const BP_MAX_BLOCK: usize = 16;

#[derive(Clone, Debug)]
pub struct ConcatenatedCode {
    inner: CodeFixture,
    error: PauliKind,
    levels: usize,
    /// Syndrome of each input pattern of one block.
    pattern_syndrome: Vec<u32>,
    /// Logical class of each input pattern, after removing R(S).
    pattern_class: Vec<bool>,
}

fn pattern_bits(pattern: usize, n: usize) -> BitVec {
    BitVec::from_bools(&(0..n).map(|i| pattern >> i & 1 == 1).collect::<Vec<_>>())
}

impl ConcatenatedCode {
    /// `levels` layers of the named fixture, for errors of type `error`.
    pub fn new(fixture: &str, error: PauliKind, levels: usize) -> Result<Self> {
        Self::from_fixture(code_fixture(fixture)?, error, levels)
    }

    pub fn from_fixture(inner: CodeFixture, error: PauliKind, levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::Config("at least one level is needed".into()));
        }
        let n = inner.n;
        if n > BP_MAX_BLOCK {
            return Err(Error::ResourceLimit(format!("block of {n} qubits exceeds {BP_MAX_BLOCK}")));
        }
        if inner.stabilizers.len() > 32 {
            return Err(Error::ResourceLimit("more than 32 checks per block".into()));
        }
        // An error of type X sees the Z-parts of the checks, and vice versa.
        let detecting = |p: &crate::pauli::PauliProduct| match error {
            PauliKind::X => p.z_bits().clone(),
            PauliKind::Z => p.x_bits().clone(),
        };
        let rows: Vec<BitVec> = inner.stabilizers.iter().map(detecting).collect();
        let conj = match error {
            PauliKind::X => detecting(&inner.logical_z),
            PauliKind::Z => detecting(&inner.logical_x),
        };
        let mut pattern_syndrome = Vec::with_capacity(1 << n);
        let mut pattern_class = Vec::with_capacity(1 << n);
        for pattern in 0..1usize << n {
            let e = pattern_bits(pattern, n);
            let syn = BitVec::from_bools(&rows.iter().map(|r| r.dot(&e)).collect::<Vec<_>>());
            let pure = solve_linear(&rows, &syn).expect("the syndrome of an actual error is solvable");
            let mut rest = e.clone();
            rest ^= &pure;
            pattern_syndrome.push(syn.iter_ones().fold(0u32, |acc, i| acc | 1 << i));
            pattern_class.push(rest.dot(&conj));
        }
        Ok(ConcatenatedCode { inner, error, levels, pattern_syndrome, pattern_class })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn error_type(&self) -> PauliKind {
        self.error
    }

    pub fn block_size(&self) -> usize {
        self.inner.n
    }

    pub fn checks_per_block(&self) -> usize {
        self.inner.stabilizers.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.inner.n.pow(self.levels as u32)
    }

    /// Number of blocks at level `l` (1-based).
    pub fn blocks_at(&self, l: usize) -> usize {
        self.inner.n.pow((self.levels - l) as u32)
    }

    fn block_pattern(bits: &[bool]) -> usize {
        bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | usize::from(b) << i)
    }

    /// Syndromes of every block at every level, and the top logical class.
    pub fn syndromes(&self, error: &BitVec) -> Result<(Vec<Vec<u32>>, bool)> {
        if error.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch { expected: self.num_qubits(), found: error.len() });
        }
        let n = self.inner.n;
        let mut inputs: Vec<bool> = error.to_bools();
        let mut out = Vec::with_capacity(self.levels);
        for _ in 0..self.levels {
            let mut level = Vec::with_capacity(inputs.len() / n);
            let mut next = Vec::with_capacity(inputs.len() / n);
            for block in inputs.chunks(n) {
                let pat = Self::block_pattern(block);
                level.push(self.pattern_syndrome[pat]);
                next.push(self.pattern_class[pat]);
            }
            out.push(level);
            inputs = next;
        }
        Ok((out, inputs[0]))
    }
}

/// Posterior of the top-level logical flip given every block syndrome,
/// for independent flips of rate `p`. Returns [P(no flip), P(flip)].
pub fn bp_posterior(cc: &ConcatenatedCode, syndromes: &[Vec<u32>], p: f64) -> Result<[f64; 2]> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if syndromes.len() != cc.levels {
        return Err(Error::InvalidSyndrome(format!("expected {} levels, found {}", cc.levels, syndromes.len())));
    }
    let n = cc.inner.n;
    let mask = if cc.checks_per_block() == 32 { u32::MAX } else { (1u32 << cc.checks_per_block()) - 1 };
    let mut messages: Vec<[f64; 2]> = vec![[1.0 - p, p]; cc.num_qubits()];
    for (l, level) in syndromes.iter().enumerate() {
        if level.len() != cc.blocks_at(l + 1) {
            return Err(Error::InvalidSyndrome(format!("level {} needs {} blocks", l + 1, cc.blocks_at(l + 1))));
        }
        let mut next = Vec::with_capacity(level.len());
        for (b, &syn) in level.iter().enumerate() {
            if syn & !mask != 0 {
                return Err(Error::InvalidSyndrome(format!("syndrome {syn:#b} has too many bits")));
            }
            let inputs = &messages[b * n..(b + 1) * n];
            let mut mu = [0.0f64; 2];
            for pattern in 0..1usize << n {
                if cc.pattern_syndrome[pattern] != syn {
                    continue;
                }
                let weight: f64 = (0..n).map(|i| inputs[i][pattern >> i & 1]).product();
                mu[usize::from(cc.pattern_class[pattern])] += weight;
            }
            let total = mu[0] + mu[1];
            if total > 0.0 {
                mu[0] /= total;
                mu[1] /= total;
            }
            next.push(mu);
        }
        messages = next;
    }
    Ok(messages[0])
}

/// Most likely top-level logical flip; ties resolve to no flip.
pub fn bp_decode(cc: &ConcatenatedCode, syndromes: &[Vec<u32>], p: f64) -> Result<bool> {
    let post = bp_posterior(cc, syndromes, p)?;
    Ok(post[1] > post[0])
}
