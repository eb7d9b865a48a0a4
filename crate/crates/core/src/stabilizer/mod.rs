//! Stabilizer tableau with destabilizers, Clifford circuits, Gottesman–Knill
//! simulation, graph states and small code fixtures.

mod circuit;
mod fixtures;
mod graph;

pub use circuit::{outcome_probability, weak_sample, BasisState, CliffordCircuit, Gate, Probability};
pub use fixtures::{
    code_fixture, rm15_column_labels, rm15_hz_aligned, CodeFixture, FIXTURE_NAMES, HAMMING_H, RM15_HX, RM15_HZ,
};
pub use graph::{graph_state, Graph};

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{solve_linear, BitVec, SpanBasis};
use crate::pauli::{Pauli, PauliProduct};

/// Outcome of a Pauli measurement. `outcome` is the bit m of the eigenvalue
/// (−1)^m.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureRecord {
    pub outcome: bool,
    pub random: bool,
    /// For random outcomes, a Pauli that maps the post-measurement state of
    /// one branch onto the other while fixing every other generator.
    pub flip: Option<PauliProduct>,
}

/// Generating set `S` of a stabilizer group together with destabilizer
/// partners `D`: `D_i` anticommutes with `S_i` only, and all other pairs
/// commute.
#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    n: usize,
    stabs: Vec<PauliProduct>,
    destabs: Vec<PauliProduct>,
}

impl StabilizerTableau {
    /// |0⟩^⊗n.
    pub fn zero_state(n: usize) -> Self {
        StabilizerTableau {
            n,
            stabs: (0..n).map(|q| PauliProduct::single(n, q, Pauli::Z)).collect(),
            destabs: (0..n).map(|q| PauliProduct::single(n, q, Pauli::X)).collect(),
        }
    }

    /// Validates the generators and derives destabilizers.
    pub fn from_generators(n: usize, gens: Vec<PauliProduct>) -> Result<Self> {
        for g in &gens {
            if g.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.n() });
            }
            if !g.is_hermitian() {
                return Err(Error::NonHermitian);
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].anticommutes_unchecked(&gens[j]) {
                    return Err(Error::Anticommuting(i, j));
                }
            }
        }
        let mut span = SpanBasis::new(2 * n, false);
        for (i, g) in gens.iter().enumerate() {
            if !span.insert(&g.x_bits().concat(g.z_bits())) {
                return Err(if g.is_identity_up_to_phase() && g.is_negative() {
                    Error::MinusIdentity
                } else {
                    Error::Dependent(i)
                });
            }
        }
        let destabs = destabilizers_for(n, &gens);
        Ok(StabilizerTableau { n, stabs: gens, destabs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators k; the stabilized space has dimension 2^(n−k).
    pub fn rank(&self) -> usize {
        self.stabs.len()
    }

    pub fn generators(&self) -> &[PauliProduct] {
        &self.stabs
    }

    pub fn destabilizers(&self) -> &[PauliProduct] {
        &self.destabs
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { index: q, n: self.n });
        }
        Ok(())
    }

    /// Conjugates every generator by the gate.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        for &q in gate.qubits().iter() {
            self.check_qubit(q)?;
        }
        if let [a, b] = gate.qubits()[..] {
            if a == b {
                return Err(Error::DuplicateQubit(a));
            }
        }
        for row in self.stabs.iter_mut().chain(self.destabs.iter_mut()) {
            match *gate {
                Gate::H(q) => row.conj_h(q),
                Gate::S(q) => row.conj_s(q),
                Gate::Sdg(q) => row.conj_sdg(q),
                Gate::X(q) => row.conj_x(q),
                Gate::Y(q) => row.conj_y(q),
                Gate::Z(q) => row.conj_z(q),
                Gate::Cnot(c, t) => row.conj_cnot(c, t),
                Gate::Cz(a, b) => row.conj_cz(a, b),
            }
        }
        Ok(())
    }

    /// Applies a gate given by name and qubit list.
    pub fn apply_clifford(&mut self, name: &str, qubits: &[usize]) -> Result<()> {
        let gate = Gate::from_name(name, qubits)?;
        self.apply(&gate)
    }

    /// Applies a Pauli operator as a gate.
    pub fn apply_pauli(&mut self, p: &PauliProduct) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n() });
        }
        for row in self.stabs.iter_mut() {
            row.conj_pauli(p);
        }
        Ok(())
    }

    /// If ±P belongs to the group, returns whether the sign is −1.
    pub fn membership(&self, p: &PauliProduct) -> Option<bool> {
        if p.n() != self.n || self.stabs.iter().any(|s| s.anticommutes_unchecked(p)) {
            return None;
        }
        let mut acc = PauliProduct::identity(self.n);
        for (s, d) in self.stabs.iter().zip(&self.destabs) {
            if d.anticommutes_unchecked(p) {
                acc.mul_assign_unchecked(s);
            }
        }
        acc.eq_up_to_phase(p).then(|| (acc.phase() ^ p.phase()) & 2 != 0)
    }

    /// Deterministic measurement outcome of P, or `None` if it would be random.
    pub fn expectation(&self, p: &PauliProduct) -> Option<bool> {
        self.membership(p)
    }

    /// Measures P, sampling random outcomes from `rng`.
    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliProduct, rng: &mut R) -> Result<MeasureRecord> {
        self.measure_with(p, || rng.random::<bool>(), |_| true)
    }

    /// Measures P and, when the outcome is random, forces it to `outcome`.
    /// Returns `None` if the requested outcome has probability zero.
    pub fn project(&mut self, p: &PauliProduct, outcome: bool) -> Result<Option<MeasureRecord>> {
        let rec = self.measure_with(p, || outcome, |_| true)?;
        Ok((rec.outcome == outcome).then_some(rec))
    }

    /// General measurement. `choose` supplies the outcome when it is random;
    /// `prefer` selects which anticommuting generator is replaced.
    pub fn measure_with(
        &mut self,
        p: &PauliProduct,
        choose: impl FnOnce() -> bool,
        prefer: impl Fn(&PauliProduct) -> bool,
    ) -> Result<MeasureRecord> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n() });
        }
        if !p.is_hermitian() {
            return Err(Error::NonHermitian);
        }
        let anti: Vec<usize> = (0..self.stabs.len()).filter(|&i| self.stabs[i].anticommutes_unchecked(p)).collect();
        if let Some(&first) = anti.first() {
            let pivot = anti.iter().copied().find(|&i| prefer(&self.stabs[i])).unwrap_or(first);
            let sp = self.stabs[pivot].clone();
            for &i in &anti {
                if i != pivot {
                    self.stabs[i].mul_assign_unchecked(&sp);
                }
            }
            for j in 0..self.destabs.len() {
                if j != pivot && self.destabs[j].anticommutes_unchecked(p) {
                    self.destabs[j].mul_assign_unchecked(&sp);
                }
            }
            let outcome = choose();
            let mut np = p.clone();
            np.set_phase(0);
            if p.is_negative() ^ outcome {
                np.negate();
            }
            self.destabs[pivot] = sp.clone();
            self.stabs[pivot] = np;
            return Ok(MeasureRecord { outcome, random: true, flip: Some(sp) });
        }
        if let Some(neg) = self.membership(p) {
            return Ok(MeasureRecord { outcome: neg, random: false, flip: None });
        }
        // P commutes with the group but lies outside it: a logical measurement
        // on a mixed code state.
        let d = self.new_partner(p);
        for dj in self.destabs.iter_mut() {
            if dj.anticommutes_unchecked(p) {
                dj.mul_assign_unchecked(&d);
            }
        }
        let outcome = choose();
        let mut np = p.clone();
        np.set_phase(0);
        if p.is_negative() ^ outcome {
            np.negate();
        }
        self.stabs.push(np);
        self.destabs.push(d.clone());
        Ok(MeasureRecord { outcome, random: true, flip: Some(d) })
    }

    /// An operator anticommuting with `p` and commuting with every current
    /// stabilizer and destabilizer.
    fn new_partner(&self, p: &PauliProduct) -> PauliProduct {
        let n = self.n;
        let rows: Vec<BitVec> =
            self.stabs.iter().chain(&self.destabs).chain(std::iter::once(p)).map(symplectic_dual_row).collect();
        let mut rhs = BitVec::zeros(rows.len());
        rhs.set(rows.len() - 1, true);
        let sol = solve_linear(&rows, &rhs).expect("independent operator has a symplectic partner");
        let x = BitVec::from_indices(n, sol.iter_ones().filter(|&i| i < n));
        let z = BitVec::from_indices(n, sol.iter_ones().filter(|&i| i >= n).map(|i| i - n));
        PauliProduct::from_bits(x, z, 0).expect("equal lengths")
    }

    /// Row-reduced generating set; two tableaux describe the same group iff
    /// their canonical forms are equal.
    pub fn canonical_form(&self) -> Vec<PauliProduct> {
        canonical_form(self.n, &self.stabs)
    }

    pub fn same_group(&self, other: &StabilizerTableau) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }

    /// Checks the commutation, independence and destabilizer invariants.
    pub fn check_invariants(&self) -> bool {
        let k = self.stabs.len();
        if self.destabs.len() != k {
            return false;
        }
        for i in 0..k {
            if !self.stabs[i].is_hermitian() {
                return false;
            }
            for j in 0..k {
                if self.stabs[i].anticommutes_unchecked(&self.stabs[j])
                    || self.destabs[i].anticommutes_unchecked(&self.destabs[j])
                    || self.stabs[i].anticommutes_unchecked(&self.destabs[j]) != (i == j)
                {
                    return false;
                }
            }
        }
        let rows: Vec<BitVec> = self.stabs.iter().map(|s| s.x_bits().concat(s.z_bits())).collect();
        SpanBasis::from_vectors(2 * self.n, &rows, false).rank() == k
    }
}

/// (z|x), so that ordinary dot products give symplectic products with (x|z).
fn symplectic_dual_row(p: &PauliProduct) -> BitVec {
    p.z_bits().concat(p.x_bits())
}

/// Destabilizer partners for an independent commuting set.
fn destabilizers_for(n: usize, gens: &[PauliProduct]) -> Vec<PauliProduct> {
    let rows: Vec<BitVec> = gens.iter().map(symplectic_dual_row).collect();
    let mut ds: Vec<PauliProduct> = (0..gens.len())
        .map(|i| {
            let rhs = BitVec::from_indices(gens.len(), [i]);
            let sol = solve_linear(&rows, &rhs).expect("independent generators have a dual basis");
            let x = BitVec::from_indices(n, sol.iter_ones().filter(|&b| b < n));
            let z = BitVec::from_indices(n, sol.iter_ones().filter(|&b| b >= n).map(|b| b - n));
            PauliProduct::from_bits(x, z, 0).expect("equal lengths")
        })
        .collect();
    for i in 0..ds.len() {
        for j in 0..i {
            if ds[i].anticommutes_unchecked(&ds[j]) {
                let s = gens[j].clone();
                ds[i].mul_assign_unchecked(&s);
                ds[i].set_phase(0);
            }
        }
    }
    ds
}

/// Gaussian elimination on the (x|z) generator matrix: x-block columns first,
/// lowest pivot first, with exact sign tracking. Identity rows are dropped.
pub fn canonical_form(n: usize, gens: &[PauliProduct]) -> Vec<PauliProduct> {
    let mut rows: Vec<PauliProduct> = gens.to_vec();
    let mut r = 0;
    for col in 0..2 * n {
        let bit = |p: &PauliProduct| if col < n { p.x_bits().get(col) } else { p.z_bits().get(col - n) };
        let Some(pi) = (r..rows.len()).find(|&i| bit(&rows[i])) else { continue };
        rows.swap(r, pi);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(row) {
                row.mul_assign_unchecked(&pivot);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}
