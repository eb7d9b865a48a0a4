use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::StabilizerTableau;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    /// Accepts `H S SDG X Y Z CNOT CX CZ` (case-insensitive).
    pub fn from_name(name: &str, qubits: &[usize]) -> Result<Gate> {
        let upper = name.to_ascii_uppercase();
        let one = |f: fn(usize) -> Gate| match qubits {
            [q] => Ok(f(*q)),
            _ => Err(Error::Parse(format!("{name} takes one qubit, got {}", qubits.len()))),
        };
        let two = |f: fn(usize, usize) -> Gate| match qubits {
            [a, b] if a == b => Err(Error::DuplicateQubit(*a)),
            [a, b] => Ok(f(*a, *b)),
            _ => Err(Error::Parse(format!("{name} takes two qubits, got {}", qubits.len()))),
        };
        match upper.as_str() {
            "H" => one(Gate::H),
            "S" => one(Gate::S),
            "SDG" | "SDAG" | "S†" => one(Gate::Sdg),
            "X" => one(Gate::X),
            "Y" => one(Gate::Y),
            "Z" => one(Gate::Z),
            "CNOT" | "CX" => two(Gate::Cnot),
            "CZ" => two(Gate::Cz),
            _ => Err(Error::UnknownGate(name.to_string())),
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Cnot(..) => "CNOT",
            Gate::Cz(..) => "CZ",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Gate list acting on |0⟩^⊗n followed by Z measurements of `measured`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<Gate>,
    measured: Vec<usize>,
}

impl CliffordCircuit {
    pub fn new(n: usize, gates: Vec<Gate>, measured: Vec<usize>) -> Result<Self> {
        for g in &gates {
            for q in g.qubits() {
                if q >= n {
                    return Err(Error::QubitOutOfRange { index: q, n });
                }
            }
        }
        let mut seen = vec![false; n];
        for &q in &measured {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(CliffordCircuit { n, gates, measured })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    /// Runs the gates on a given tableau.
    pub fn run_on(&self, t: &mut StabilizerTableau) -> Result<()> {
        for g in &self.gates {
            t.apply(g)?;
        }
        Ok(())
    }

    /// Parses the line format: one gate per line (`H 3`, `CNOT 0 1`), an
    /// optional terminal `M q...` line, `#` comments, and an optional
    /// `QUBITS n` header. Without the header n is one more than the largest
    /// index used.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut gates = Vec::new();
        let mut measured: Option<Vec<usize>> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap_or_default();
            let args: Vec<usize> = parts
                .map(|a| {
                    a.parse::<usize>().map_err(|_| Error::Parse(format!("line {}: bad qubit index `{a}`", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            if measured.is_some() {
                return Err(Error::Parse(format!("line {}: the M line must be last", lineno + 1)));
            }
            match head.to_ascii_uppercase().as_str() {
                "QUBITS" => match args[..] {
                    [k] if gates.is_empty() => declared = Some(k),
                    _ => {
                        return Err(Error::Parse(format!(
                            "line {}: QUBITS takes one count and must come first",
                            lineno + 1
                        )))
                    }
                },
                "M" => measured = Some(args),
                _ => gates.push(Gate::from_name(head, &args).map_err(|e| match e {
                    Error::UnknownGate(g) => Error::UnknownGate(format!("{g} (line {})", lineno + 1)),
                    other => other,
                })?),
            }
        }
        let measured = measured.unwrap_or_default();
        let used =
            gates.iter().flat_map(Gate::qubits).chain(measured.iter().copied()).map(|q| q + 1).max().unwrap_or(0);
        let n = declared.unwrap_or(used);
        CliffordCircuit::new(n, gates, measured)
    }
}

impl FromStr for CliffordCircuit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CliffordCircuit::parse(s)
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        if !self.measured.is_empty() {
            write!(f, "M")?;
            for q in &self.measured {
                write!(f, " {q}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Exact probability: zero, or 2^(−k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Probability {
    pub is_zero: bool,
    pub k: u32,
}

impl Probability {
    pub const ONE: Probability = Probability { is_zero: false, k: 0 };
    pub const ZERO: Probability = Probability { is_zero: true, k: 0 };

    pub fn value(&self) -> f64 {
        if self.is_zero {
            0.0
        } else {
            (-(self.k as f64)).exp2()
        }
    }
}

/// Probability of observing `outcome` on the measured qubits, by the
/// three-case update: deterministic match keeps p, mismatch gives 0, and a
/// random outcome halves p.
pub fn outcome_probability(c: &CliffordCircuit, outcome: &[bool]) -> Result<Probability> {
    if outcome.len() != c.measured.len() {
        return Err(Error::DimensionMismatch { expected: c.measured.len(), found: outcome.len() });
    }
    let mut t = StabilizerTableau::zero_state(c.n);
    c.run_on(&mut t)?;
    let mut prob = Probability::ONE;
    for (&q, &m) in c.measured.iter().zip(outcome) {
        let z = PauliProduct::single(c.n, q, Pauli::Z);
        let rec = t.measure_with(&z, || m, |_| true)?;
        if rec.outcome != m {
            return Ok(Probability::ZERO);
        }
        if rec.random {
            prob.k += 1;
        }
    }
    Ok(prob)
}

/// The six Pauli eigenstates used as weak-simulation inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisState {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
    Zero,
    One,
}

impl BasisState {
    pub const ALL: [BasisState; 6] = [
        BasisState::PlusX,
        BasisState::MinusX,
        BasisState::PlusY,
        BasisState::MinusY,
        BasisState::Zero,
        BasisState::One,
    ];

    /// Gates preparing the state from |0⟩.
    pub fn preparation(self, q: usize) -> Vec<Gate> {
        match self {
            BasisState::Zero => vec![],
            BasisState::One => vec![Gate::X(q)],
            BasisState::PlusX => vec![Gate::H(q)],
            BasisState::MinusX => vec![Gate::X(q), Gate::H(q)],
            BasisState::PlusY => vec![Gate::H(q), Gate::S(q)],
            BasisState::MinusY => vec![Gate::H(q), Gate::Sdg(q)],
        }
    }
}

/// Samples one run of `c` with qubit q prepared in a Pauli eigenstate drawn
/// from `inputs[q]`, weights in the order of [`BasisState::ALL`].
pub fn weak_sample<R: Rng + ?Sized>(c: &CliffordCircuit, inputs: &[[f64; 6]], rng: &mut R) -> Result<Vec<bool>> {
    if inputs.len() != c.n {
        return Err(Error::DimensionMismatch { expected: c.n, found: inputs.len() });
    }
    for w in inputs {
        if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total: f64 = w.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
    }
    let mut t = StabilizerTableau::zero_state(c.n);
    for (q, w) in inputs.iter().enumerate() {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut pick = BasisState::Zero;
        for (state, &wi) in BasisState::ALL.iter().zip(w) {
            acc += wi;
            if u < acc {
                pick = *state;
                break;
            }
        }
        if u >= acc {
            pick = *BasisState::ALL
                .iter()
                .zip(w)
                .rev()
                .find(|(_, &wi)| wi > 0.0)
                .map(|(s, _)| s)
                .unwrap_or(&BasisState::Zero);
        }
        for g in pick.preparation(q) {
            t.apply(&g)?;
        }
    }
    c.run_on(&mut t)?;
    let mut out = Vec::with_capacity(c.measured.len());
    for &q in &c.measured {
        let z = PauliProduct::single(c.n, q, Pauli::Z);
        out.push(t.measure(&z, rng)?.outcome);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        let c = CliffordCircuit::parse("H 0\nCNOT 0 1 # entangle\nCZ 1 2\nM 0 1 2\n").unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.gates().len(), 3);
        assert_eq!(CliffordCircuit::parse(&c.to_string()).unwrap(), c);
        assert!(CliffordCircuit::parse("FOO 1").is_err());
        assert!(CliffordCircuit::parse("CNOT 1 1").is_err());
        assert!(CliffordCircuit::parse("M 0\nH 0").is_err());
    }

    #[test]
    fn simple_probabilities() {
        let empty = CliffordCircuit::new(2, vec![], vec![0, 1]).unwrap();
        assert_eq!(outcome_probability(&empty, &[false, false]).unwrap(), Probability::ONE);
        let h = CliffordCircuit::new(1, vec![Gate::H(0)], vec![0]).unwrap();
        assert_eq!(outcome_probability(&h, &[false]).unwrap().value(), 0.5);
        let bell = CliffordCircuit::parse("H 0\nCNOT 0 1\nM 0 1").unwrap();
        assert_eq!(outcome_probability(&bell, &[true, false]).unwrap(), Probability::ZERO);
        assert!(outcome_probability(&bell, &[true]).is_err());
    }
}
