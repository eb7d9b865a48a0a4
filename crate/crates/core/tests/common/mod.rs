//! Brute-force and dense oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use topoqec::decoders::ConcatenatedCode;
use topoqec::gf2::BitVec;
use topoqec::pauli::{Pauli, PauliProduct};
use topoqec::stabilizer::{canonical_form, graph_state, CliffordCircuit, Gate, Graph, StabilizerTableau, RM15_HX};
use topoqec::surface::CheckSet;

/// State vector on n qubits, qubit q is bit q of the index.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub amp: Vec<Complex64>,
}

impl Dense {
    pub fn zero(n: usize) -> Self {
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        amp[0] = Complex64::new(1.0, 0.0);
        Dense { n, amp }
    }

    fn single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1 << q;
        for i in 0..self.amp.len() {
            if i & bit == 0 {
                let (a, b) = (self.amp[i], self.amp[i | bit]);
                self.amp[i] = m[0][0] * a + m[0][1] * b;
                self.amp[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply(&mut self, g: &Gate) {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match *g {
            Gate::H(q) => self.single(q, [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]),
            Gate::S(q) => self.single(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]),
            Gate::Sdg(q) => self.single(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]]),
            Gate::X(q) => self.single(q, [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            Gate::Y(q) => self.single(q, [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
            Gate::Z(q) => self.single(q, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
            Gate::Cnot(a, b) => {
                for i in 0..self.amp.len() {
                    if i >> a & 1 == 1 && i >> b & 1 == 0 {
                        self.amp.swap(i, i | 1 << b);
                    }
                }
            }
            Gate::Cz(a, b) => {
                for i in 0..self.amp.len() {
                    if i >> a & 1 == 1 && i >> b & 1 == 1 {
                        self.amp[i] = -self.amp[i];
                    }
                }
            }
        }
    }

    /// Born probability of `outcome` on `qubits`, marginalizing the rest.
    pub fn probability(&self, qubits: &[usize], outcome: &[bool]) -> f64 {
        self.amp
            .iter()
            .enumerate()
            .filter(|(i, _)| qubits.iter().zip(outcome).all(|(&q, &m)| (i >> q & 1 == 1) == m))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// ⟨ψ|P|ψ⟩ for a Pauli product including its phase.
    pub fn expectation(&self, p: &PauliProduct) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let xmask: usize = p.x_bits().iter_ones().map(|q| 1 << q).sum();
        for (i, a) in self.amp.iter().enumerate() {
            // P|i⟩ = i^phase · Π (phase from Y/Z) |i ^ xmask⟩
            let mut f = Complex64::new(1.0, 0.0);
            for q in 0..p.n() {
                let bit = i >> q & 1 == 1;
                f *= match p.get(q) {
                    Pauli::I | Pauli::X => Complex64::new(1.0, 0.0),
                    Pauli::Z => Complex64::new(if bit { -1.0 } else { 1.0 }, 0.0),
                    Pauli::Y => Complex64::new(0.0, if bit { -1.0 } else { 1.0 }),
                };
            }
            f *= Complex64::i().powu(p.phase() as u32);
            acc += self.amp[i ^ xmask].conj() * f * a;
        }
        acc
    }
}

pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    match rng.random_range(0..8) {
        0 => Gate::H(a),
        1 => Gate::S(a),
        2 => Gate::Sdg(a),
        3 => Gate::X(a),
        4 => Gate::Y(a),
        5 => Gate::Z(a),
        6 => Gate::Cnot(a, b),
        _ => Gate::Cz(a, b),
    }
}

/// Random circuit; measures all qubits when `mask` is `None`.
pub fn random_circuit<R: Rng>(n: usize, gates: usize, measured: Option<usize>, rng: &mut R) -> CliffordCircuit {
    let gs = (0..gates).map(|_| random_gate(n, rng)).collect();
    let mut qs: Vec<usize> = (0..n).collect();
    if let Some(m) = measured {
        for i in (1..n).rev() {
            qs.swap(i, rng.random_range(0..=i));
        }
        qs.truncate(m);
    }
    CliffordCircuit::new(n, gs, qs).unwrap()
}

pub fn dense_run(c: &CliffordCircuit) -> Dense {
    let mut d = Dense::zero(c.n());
    for g in c.gates() {
        d.apply(g);
    }
    d
}

pub fn bits_of(x: usize, m: usize) -> Vec<bool> {
    (0..m).map(|i| x >> i & 1 == 1).collect()
}

/// Minimum total weight of a perfect matching by exhaustive pairing.
pub fn brute_min_pairing(n: usize, edges: &[(usize, usize, i64)]) -> Option<i64> {
    let mut w = vec![vec![None; n]; n];
    for &(a, b, c) in edges {
        w[a][b] = Some(c);
        w[b][a] = Some(c);
    }
    fn go(left: &mut Vec<usize>, w: &[Vec<Option<i64>>]) -> Option<i64> {
        if left.is_empty() {
            return Some(0);
        }
        let a = left.remove(0);
        let mut best: Option<i64> = None;
        for k in 0..left.len() {
            let b = left[k];
            if let Some(c) = w[a][b] {
                left.remove(k);
                if let Some(rest) = go(left, w) {
                    best = Some(best.map_or(c + rest, |x: i64| x.min(c + rest)));
                }
                left.insert(k, b);
            }
        }
        left.insert(0, a);
        best
    }
    go(&mut (0..n).collect(), &w)
}

/// Class posterior by summing over every error pattern of the code.
pub fn brute_class_posterior(checks: &CheckSet, syndrome: &BitVec, p: f64) -> Vec<f64> {
    let n = checks.num_qubits();
    assert!(n <= 24);
    let k = checks.conjugates().len();
    let check_masks: Vec<u64> =
        (0..checks.num_checks()).map(|c| checks.check(c).iter().map(|&q| 1u64 << q).sum()).collect();
    let conj_masks: Vec<u64> = checks.conjugates().iter().map(|l| l.iter_ones().map(|q| 1u64 << q).sum()).collect();
    let target: u64 = syndrome.iter_ones().map(|c| 1u64 << c).sum();
    let mut post = vec![0.0; 1 << k];
    for e in 0u64..1 << n {
        let s: u64 = check_masks.iter().enumerate().map(|(c, m)| u64::from((e & m).count_ones() % 2) << c).sum();
        if s != target {
            continue;
        }
        let class: usize = conj_masks.iter().enumerate().map(|(i, m)| (((e & m).count_ones() % 2) as usize) << i).sum();
        let w = e.count_ones() as i32;
        post[class] += p.powi(w) * (1.0 - p).powi(n as i32 - w);
    }
    let total: f64 = post.iter().sum();
    post.iter().map(|x| x / total).collect()
}

/// Top-level flip posterior of a concatenated code over all 2^n errors.
pub fn brute_concat_posterior(cc: &ConcatenatedCode, syndromes: &[Vec<u32>], p: f64) -> Option<[f64; 2]> {
    let n = cc.num_qubits();
    let mut post = [0.0; 2];
    for e in 0usize..1 << n {
        let bits = BitVec::from_bools(&bits_of(e, n));
        let (s, top) = cc.syndromes(&bits).unwrap();
        if s != syndromes {
            continue;
        }
        let w = e.count_ones() as i32;
        post[usize::from(top)] += p.powi(w) * (1.0 - p).powi(n as i32 - w);
    }
    let total = post[0] + post[1];
    (total > 0.0).then(|| [post[0] / total, post[1] / total])
}

/// (p_pass, p_out) of 15-to-1 distillation by enumerating all 2^15 Z-error
/// patterns on the Reed–Muller code: pass on a trivial X-check syndrome,
/// fail on an odd-weight accepted error.
pub fn distill_oracle(p: f64) -> (f64, f64) {
    let rows: Vec<u32> = RM15_HX
        .iter()
        .map(|r| r.bytes().enumerate().filter(|(_, b)| *b == b'1').map(|(i, _)| 1u32 << i).sum())
        .collect();
    let (mut pass, mut bad) = (0.0, 0.0);
    for e in 0u32..1 << 15 {
        if rows.iter().any(|r| (r & e).count_ones() % 2 == 1) {
            continue;
        }
        let w = e.count_ones() as i32;
        let pr = p.powi(w) * (1.0 - p).powi(15 - w);
        pass += pr;
        if w % 2 == 1 {
            bad += pr;
        }
    }
    (pass, bad / pass)
}

/// Expected post-measurement tableau of a graph-state rule: graph `g` on
/// the unmeasured vertices and (−1)^m P on each measured one.
pub fn rule_target(n: usize, g: &Graph, measured: &[(usize, Pauli, bool)]) -> Vec<PauliProduct> {
    let mut gens = Vec::new();
    for v in 0..n {
        if let Some(&(_, p, m)) = measured.iter().find(|(q, _, _)| *q == v) {
            let mut s = PauliProduct::single(n, v, p);
            if m {
                s.negate();
            }
            gens.push(s);
        } else {
            let mut k = PauliProduct::single(n, v, Pauli::X);
            for u in g.neighbors(v) {
                k.set(u, Pauli::Z);
            }
            gens.push(k);
        }
    }
    canonical_form(n, &gens)
}

/// Smallest Pauli supported on `support` that maps `t` onto `target`.
pub fn pauli_byproduct(t: &StabilizerTableau, target: &[PauliProduct], support: &[usize]) -> Option<PauliProduct> {
    let n = t.n();
    let mut best: Option<PauliProduct> = None;
    for code in 0usize..1 << (2 * support.len()) {
        let mut p = PauliProduct::identity(n);
        for (i, &q) in support.iter().enumerate() {
            p.set(q, Pauli::from_bits(code >> (2 * i) & 1 == 1, code >> (2 * i + 1) & 1 == 1));
        }
        let mut u = t.clone();
        u.apply_pauli(&p).unwrap();
        if u.canonical_form() == target && best.as_ref().is_none_or(|b| p.weight() < b.weight()) {
            best = Some(p);
        }
    }
    best
}

/// Graph state of a path of length n.
pub fn chain(n: usize) -> StabilizerTableau {
    graph_state(&Graph::path(n))
}
