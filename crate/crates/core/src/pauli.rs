//! n-qubit Pauli products in symplectic (x|z) form.
//!
//! A product is stored as `i^phase · ⊗_j σ(x_j, z_j)` with σ(1,0)=X,
//! σ(0,1)=Z and σ(1,1)=Y. The project-wide convention is Y = iXZ, so
//! X·Z = −iY.

use std::fmt;
use std::str::FromStr;

use crate::chain::{Chain, Surface};
use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Basis of a CSS-type operator built from a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PauliKind {
    X,
    Z,
}

impl PauliKind {
    pub fn other(self) -> PauliKind {
        match self {
            PauliKind::X => PauliKind::Z,
            PauliKind::Z => PauliKind::X,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliProduct {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliProduct {
    pub fn identity(n: usize) -> Self {
        PauliProduct { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    /// Builds `i^phase · σ(x, z)`.
    pub fn from_bits(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: z.len() });
        }
        Ok(PauliProduct { x, z, phase: phase & 3 })
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut out = PauliProduct::identity(n);
        out.set(q, p);
        out
    }

    /// `X` or `Z` on every qubit in `support`.
    pub fn from_support(n: usize, support: &BitVec, kind: PauliKind) -> Self {
        assert_eq!(support.len(), n);
        match kind {
            PauliKind::X => PauliProduct { x: support.clone(), z: BitVec::zeros(n), phase: 0 },
            PauliKind::Z => PauliProduct { x: BitVec::zeros(n), z: support.clone(), phase: 0 },
        }
    }

    /// W(c) = ∏_l W_l^{c_l} for a 1-chain (primal or dual) on `surface`.
    pub fn from_chain(surface: &Surface, chain: &Chain, basis: PauliKind) -> Result<Self> {
        if chain.dim() != 1 {
            return Err(Error::InvalidChain(format!("expected a 1-chain, found dimension {}", chain.dim())));
        }
        if chain.bits().len() != surface.num_edges() {
            return Err(Error::DimensionMismatch { expected: surface.num_edges(), found: chain.bits().len() });
        }
        Ok(PauliProduct::from_support(surface.num_edges(), chain.bits(), basis))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    /// Phase exponent k of the prefactor i^k.
    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    /// Whether the prefactor is −1 (or −i).
    pub fn is_negative(&self) -> bool {
        self.phase & 2 != 0
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negate();
        p
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase & 1 == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn weight(&self) -> usize {
        self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.x.get(q) || self.z.get(q)).collect()
    }

    /// Same operator up to the scalar prefactor.
    pub fn eq_up_to_phase(&self, other: &PauliProduct) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    fn check_dim(&self, other: &PauliProduct) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        Ok(())
    }

    /// Symplectic inner product x_P·z_Q + z_P·x_Q mod 2, true when anticommuting.
    pub fn anticommutes_unchecked(&self, other: &PauliProduct) -> bool {
        let mut acc = 0u32;
        for k in 0..self.x.words().len() {
            acc ^= ((self.x.words()[k] & other.z.words()[k]) ^ (self.z.words()[k] & other.x.words()[k])).count_ones();
        }
        acc & 1 == 1
    }

    pub fn commutes(&self, other: &PauliProduct) -> Result<bool> {
        self.check_dim(other)?;
        Ok(!self.anticommutes_unchecked(other))
    }

    /// In-place right multiplication `self ← self · other`.
    pub fn mul_assign_unchecked(&mut self, other: &PauliProduct) {
        let mut plus = 0u32;
        let mut minus = 0u32;
        let words = self.x.words().len();
        for k in 0..words {
            let x1 = self.x.words()[k];
            let z1 = self.z.words()[k];
            let x2 = other.x.words()[k];
            let z2 = other.z.words()[k];
            // σ(a)σ(b) = i^g σ(a⊕b) with g ∈ {−1, 0, 1}.
            let p = (x1 & !z1 & x2 & z2) | (x1 & z1 & !x2 & z2) | (!x1 & z1 & x2 & !z2);
            let m = (x1 & !z1 & !x2 & z2) | (x1 & z1 & x2 & !z2) | (!x1 & z1 & x2 & z2);
            plus += p.count_ones();
            minus += m.count_ones();
        }
        let g = (plus as i64 - minus as i64).rem_euclid(4) as u8;
        self.phase = (self.phase + other.phase + g) & 3;
        self.x ^= &other.x;
        self.z ^= &other.z;
    }

    pub fn multiply(&self, other: &PauliProduct) -> Result<PauliProduct> {
        self.check_dim(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PauliProduct) -> PauliProduct {
        PauliProduct { x: self.x.concat(&other.x), z: self.z.concat(&other.z), phase: (self.phase + other.phase) & 3 }
    }

    /// Restriction to a contiguous qubit range, dropping the phase.
    pub fn slice(&self, range: std::ops::Range<usize>) -> PauliProduct {
        let n = range.len();
        let mut out = PauliProduct::identity(n);
        for (k, q) in range.enumerate() {
            out.set(k, self.get(q));
        }
        out
    }

    // Conjugation rules U P U† for the Clifford generators.

    pub fn conj_h(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.negate();
        }
        self.x.set(q, z);
        self.z.set(q, x);
    }

    pub fn conj_s(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.negate();
        }
        self.z.set(q, z ^ x);
    }

    pub fn conj_sdg(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && !z {
            self.negate();
        }
        self.z.set(q, z ^ x);
    }

    pub fn conj_x(&mut self, q: usize) {
        if self.z.get(q) {
            self.negate();
        }
    }

    pub fn conj_y(&mut self, q: usize) {
        if self.x.get(q) ^ self.z.get(q) {
            self.negate();
        }
    }

    pub fn conj_z(&mut self, q: usize) {
        if self.x.get(q) {
            self.negate();
        }
    }

    pub fn conj_cnot(&mut self, c: usize, t: usize) {
        let (xc, zc, xt, zt) = (self.x.get(c), self.z.get(c), self.x.get(t), self.z.get(t));
        if xc && zt && !(xt ^ zc) {
            self.negate();
        }
        self.x.set(t, xt ^ xc);
        self.z.set(c, zc ^ zt);
    }

    pub fn conj_cz(&mut self, a: usize, b: usize) {
        let (xa, za, xb, zb) = (self.x.get(a), self.z.get(a), self.x.get(b), self.z.get(b));
        if xa && xb && (za ^ zb) {
            self.negate();
        }
        self.z.set(a, za ^ xb);
        self.z.set(b, zb ^ xa);
    }

    /// Conjugation by the Pauli operator `p`: flips the sign when anticommuting.
    pub fn conj_pauli(&mut self, p: &PauliProduct) {
        if self.anticommutes_unchecked(p) {
            self.negate();
        }
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.n() {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliProduct {
    type Err = Error;

    /// Accepts an optional `+`, `-`, `+i`, `-i` or `i` prefix followed by
    /// letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (1, r)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        let mut out = PauliProduct::identity(n);
        for (q, c) in body.chars().enumerate() {
            let p = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(format!("unexpected character `{other}` in Pauli string `{s}`"))),
            };
            out.set(q, p);
        }
        out.phase = phase;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliProduct {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_table() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("-iY"));
        assert_eq!(p("Z").multiply(&p("X")).unwrap(), p("+iY"));
        assert_eq!(p("X").multiply(&p("Y")).unwrap(), p("+iZ"));
        assert_eq!(p("Y").multiply(&p("Z")).unwrap(), p("+iX"));
        assert_eq!(p("Y").multiply(&p("Y")).unwrap(), p("I"));
    }

    #[test]
    fn xx_times_zz_is_minus_yy() {
        assert_eq!(p("XX").multiply(&p("ZZ")).unwrap(), p("-YY"));
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
    }

    #[test]
    fn text_roundtrip() {
        for s in ["+XIZZY", "-YYI", "+iZ", "-iXY"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("+XQ".parse::<PauliProduct>().is_err());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(p("XX").multiply(&p("X")).is_err());
        assert!(p("XX").commutes(&p("X")).is_err());
    }

    #[test]
    fn weight_counts_non_identity() {
        assert_eq!(p("XIYZI").weight(), 3);
    }
}
