//! CSS codes from parity-check matrices, weight enumerators and the
//! 15-to-1 magic-state distillation analytics.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, SpanBasis};
use crate::pauli::{PauliKind, PauliProduct};
use crate::stabilizer::{rm15_hz_aligned, RM15_HX};

/// Largest dimension enumerated element by element.
pub const MAX_ENUMERATION_DIM: usize = 24;

/// Exponent of the state cost in log(1/ε): ln 15 / ln 3.
pub fn cost_exponent() -> f64 {
    15f64.ln() / 3f64.ln()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    hx: BitMatrix,
    hz: BitMatrix,
}

fn parse_rows(rows: &[&str]) -> Result<BitMatrix> {
    BitMatrix::from_strs(rows).ok_or_else(|| Error::Parse("parity-check rows must be equal-length 0/1 strings".into()))
}

/// Builds the code with X checks from the rows of `hx` and Z checks from
/// the rows of `hz`, rejecting the first non-orthogonal row pair.
pub fn build_css(hx: &[&str], hz: &[&str]) -> Result<CssCode> {
    CssCode::new(parse_rows(hx)?, parse_rows(hz)?)
}

impl CssCode {
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<Self> {
        let n = hx.num_cols().max(hz.num_cols());
        for m in [&hx, &hz] {
            if m.num_rows() > 0 && m.num_cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.num_cols() });
            }
        }
        for (i, rx) in hx.rows().iter().enumerate() {
            for (j, rz) in hz.rows().iter().enumerate() {
                if rx.dot(rz) {
                    return Err(Error::NotOrthogonal(i, j));
                }
            }
        }
        Ok(CssCode { n, hx, hz })
    }

    /// The Steane code: the Hamming matrix for both check types.
    pub fn steane() -> Self {
        let h = parse_rows(&crate::stabilizer::HAMMING_H).expect("fixture");
        CssCode::new(h.clone(), h).expect("Hamming matrix is self-orthogonal")
    }

    /// The 15-qubit Reed–Muller code, with its Z checks in the qubit order
    /// of the X checks.
    pub fn reed_muller15() -> Self {
        let hz = rm15_hz_aligned();
        let hz: Vec<&str> = hz.iter().map(String::as_str).collect();
        build_css(&RM15_HX, &hz).expect("aligned checks are orthogonal")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn rank_x(&self) -> usize {
        self.hx.rank()
    }

    pub fn rank_z(&self) -> usize {
        self.hz.rank()
    }

    pub fn k(&self) -> usize {
        self.n - self.rank_x() - self.rank_z()
    }

    pub fn stabilizers(&self) -> Vec<PauliProduct> {
        let x = self.hx.rows().iter().map(|r| PauliProduct::from_support(self.n, r, PauliKind::X));
        let z = self.hz.rows().iter().map(|r| PauliProduct::from_support(self.n, r, PauliKind::Z));
        x.chain(z).collect()
    }

    fn logical_reps(kernel_of: &BitMatrix, modulo: &BitMatrix, n: usize) -> Vec<BitVec> {
        let mut span = SpanBasis::from_vectors(n, modulo.rows(), false);
        let mut out = Vec::new();
        for v in kernel_of.kernel() {
            if span.insert(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Supports of X logicals: ker H_z modulo the row space of H_x.
    pub fn logical_x(&self) -> Vec<BitVec> {
        Self::logical_reps(&self.hz, &self.hx, self.n)
    }

    /// Supports of Z logicals: ker H_x modulo the row space of H_z.
    pub fn logical_z(&self) -> Vec<BitVec> {
        Self::logical_reps(&self.hx, &self.hz, self.n)
    }

    /// Computational-basis terms of the logical state with X-logical
    /// pattern `offset`: the coset offset + row space of H_x.
    pub fn codeword_terms(&self, offset: &BitVec) -> Result<Vec<BitVec>> {
        let basis: Vec<BitVec> = SpanBasis::from_vectors(self.n, self.hx.rows(), false).basis().cloned().collect();
        if basis.len() > MAX_ENUMERATION_DIM {
            return Err(Error::ResourceLimit(format!("dimension {} exceeds {MAX_ENUMERATION_DIM}", basis.len())));
        }
        let mut cur = offset.clone();
        let mut out = vec![cur.clone()];
        for step in 1u64..(1 << basis.len()) {
            cur ^= &basis[step.trailing_zeros() as usize];
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// W_V(x, y) = Σ_w a_w x^(n−w) y^w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub n: usize,
    pub coeffs: Vec<BigUint>,
}

impl WeightEnumerator {
    pub fn size(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(w, a)| a.to_f64().unwrap_or(f64::INFINITY) * x.powi((self.n - w) as i32) * y.powi(w as i32))
            .sum()
    }

    /// Σ over odd weights only.
    pub fn evaluate_odd(&self, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(w, _)| w % 2 == 1)
            .map(|(w, a)| a.to_f64().unwrap_or(f64::INFINITY) * x.powi((self.n - w) as i32) * y.powi(w as i32))
            .sum()
    }
}

/// Enumerator of the span of `generators` in GF(2)^n.
pub fn weight_enumerator(n: usize, generators: &[BitVec]) -> Result<WeightEnumerator> {
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: g.len() });
    }
    let basis: Vec<BitVec> = SpanBasis::from_vectors(n, generators, false).basis().cloned().collect();
    if basis.len() > MAX_ENUMERATION_DIM {
        return Err(Error::ResourceLimit(format!("dimension {} exceeds {MAX_ENUMERATION_DIM}", basis.len())));
    }
    let mut counts = vec![0u64; n + 1];
    let mut cur = BitVec::zeros(n);
    counts[0] = 1;
    for step in 1u64..(1 << basis.len()) {
        cur ^= &basis[step.trailing_zeros() as usize];
        counts[cur.count_ones()] += 1;
    }
    Ok(WeightEnumerator { n, coeffs: counts.into_iter().map(BigUint::from).collect() })
}

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut c = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = BigInt::one();
        for j in 1..=i {
            c[i][j] = &c[i - 1][j - 1] + &c[i - 1][j];
        }
    }
    c
}

/// Enumerator of V⊥ from that of V: W_V(x+y, x−y)/|V|.
pub fn macwilliams(w: &WeightEnumerator, size: &BigUint) -> Result<WeightEnumerator> {
    if size.is_zero() {
        return Err(Error::NonIntegerEnumerator);
    }
    let n = w.n;
    let c = binomials(n);
    let mut out = vec![BigInt::zero(); n + 1];
    for (wt, a) in w.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let a = BigInt::from(a.clone());
        // (x+y)^(n−wt) (x−y)^wt, coefficient of x^(n−j) y^j.
        for (j, slot) in out.iter_mut().enumerate() {
            let mut k = BigInt::zero();
            for i in 0..=wt.min(j) {
                if j - i > n - wt {
                    continue;
                }
                let term = &c[n - wt][j - i] * &c[wt][i];
                if i % 2 == 0 {
                    k += term;
                } else {
                    k -= term;
                }
            }
            *slot += &a * k;
        }
    }
    let size = BigInt::from(size.clone());
    let coeffs = out
        .into_iter()
        .map(|v| {
            if (&v % &size).is_zero() && !v.is_negative() {
                Ok((v / &size).to_biguint().expect("non-negative"))
            } else {
                Err(Error::NonIntegerEnumerator)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightEnumerator { n, coeffs })
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=0.5).contains(&p) {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange(p))
    }
}

/// Acceptance probability of the 15-to-1 protocol: (1+15(1−2p)⁸)/16.
pub fn pass_probability(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok((1.0 + 15.0 * (1.0 - 2.0 * p).powi(8)) / 16.0)
}

/// Output error given acceptance:
/// [1+15(2p−1)⁸+15(2p−1)⁷+(2p−1)¹⁵] / (2[1+15(1−2p)⁸]).
pub fn output_error(p: f64) -> Result<f64> {
    check_p(p)?;
    let q = 2.0 * p - 1.0;
    Ok((1.0 + 15.0 * q.powi(8) + 15.0 * q.powi(7) + q.powi(15)) / (2.0 * (1.0 + 15.0 * (1.0 - 2.0 * p).powi(8))))
}

/// (p_pass, p_out).
pub fn distill_curve(p: f64) -> Result<(f64, f64)> {
    Ok((pass_probability(p)?, output_error(p)?))
}

/// (p_pass, p_out) from the enumerator of ker H_x of the Reed–Muller code:
/// acceptance is a syndrome-free error, failure an odd-weight one.
pub fn distill_curve_enumerator(p: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    let code = CssCode::reed_muller15();
    let ker = weight_enumerator(code.n(), &code.hx().kernel())?;
    let pass = ker.evaluate(1.0 - p, p);
    Ok((pass, ker.evaluate_odd(1.0 - p, p) / pass))
}

/// p_pass through the dual route: W_{row H_x}(1, 1−2p)/|row H_x|.
pub fn pass_probability_dual(p: f64) -> Result<f64> {
    check_p(p)?;
    let code = CssCode::reed_muller15();
    let rows = weight_enumerator(code.n(), code.hx().rows())?;
    Ok(rows.evaluate(1.0, 1.0 - 2.0 * p) / rows.size().to_f64().expect("small"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    /// Nonzero fixed point of p_out(p) = p.
    pub fixed_point: f64,
    /// (1−√2/2)/2, where the noisy state reaches the stabilizer octahedron.
    pub octahedron: f64,
}

/// Bisection of p_out(p) − p on (0, 0.3) to 1e−9.
pub fn distill_threshold() -> Threshold {
    let f = |p: f64| output_error(p).expect("in range") - p;
    let (mut lo, mut hi) = (0.01, 0.3);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Threshold { fixed_point: 0.5 * (lo + hi), octahedron: (1.0 - std::f64::consts::FRAC_1_SQRT_2) / 2.0 }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistillCost {
    pub rounds: u32,
    pub states: BigUint,
    /// Error after the chosen number of rounds, (√35p)^(3^l)/√35.
    pub final_error: f64,
    /// [log(√35ε)/log(√35p)]^(ln15/ln3).
    pub estimate: f64,
}

/// Rounds and input states needed to reach error ε from p.
pub fn distill_cost(p: f64, eps: f64) -> Result<DistillCost> {
    check_p(p)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::ProbabilityOutOfRange(eps));
    }
    let s = 35f64.sqrt();
    if p >= distill_threshold().fixed_point || s * p >= 1.0 {
        return Err(Error::NonConvergent(p));
    }
    let estimate = ((s * eps).ln() / (s * p).ln()).powf(cost_exponent());
    let log_err = |l: u32| 3f64.powi(l as i32) * (s * p).ln() - s.ln();
    let mut rounds = 0;
    if p > 0.0 {
        while log_err(rounds) > eps.ln() {
            rounds += 1;
        }
    }
    let final_error = if p == 0.0 { 0.0 } else { log_err(rounds).exp() };
    Ok(DistillCost { rounds, states: BigUint::from(15u32).pow(rounds), final_error, estimate })
}
