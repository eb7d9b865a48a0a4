//! Surface-code layouts built on the chain complexes, syndrome extraction,
//! residual classification and defect-qubit operations.
//!
//! Conventions: Z errors are primal 1-chains detected by the star (X-type)
//! generators, X errors are dual 1-chains detected by the plaquette (Z-type)
//! generators. Check indices equal vertex indices for stars and face
//! indices for plaquettes.

mod defects;

pub use defects::{
    braid_cnot_run, braid_cnot_verify, BraidReport, BraidRun, DefectRegion, DefectState, LogicalCheck,
    MeasurementRecord, BRAID_MIN_SIZE,
};

use std::fmt;
use std::str::FromStr;

use crate::chain::{Chain, HomologyClass, Surface};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, SpanBasis};
use crate::pauli::{PauliKind, PauliProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Toric,
    Planar,
    Bitflip,
}

impl FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "toric" => Ok(CodeKind::Toric),
            "planar" => Ok(CodeKind::Planar),
            "bitflip" | "bit-flip" => Ok(CodeKind::Bitflip),
            other => Err(Error::UnknownCode(other.to_string())),
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::Toric => "toric",
            CodeKind::Planar => "planar",
            CodeKind::Bitflip => "bitflip",
        })
    }
}

/// Everything a decoder needs for one error type: the detecting checks, the
/// same-type stabilizers (the equivalences of an error), the same-type
/// logicals and their conjugate partners.
#[derive(Clone, Debug)]
pub struct CheckSet {
    n: usize,
    checks: Vec<Vec<usize>>,
    qubit_checks: Vec<Vec<usize>>,
    stabilizers: Vec<BitVec>,
    logicals: Vec<BitVec>,
    conjugates: Vec<BitVec>,
}

impl CheckSet {
    fn new(
        n: usize,
        checks: Vec<BitVec>,
        stabilizers: Vec<BitVec>,
        logicals: Vec<BitVec>,
        conjugates: Vec<BitVec>,
    ) -> Self {
        let checks: Vec<Vec<usize>> = checks.iter().map(|c| c.iter_ones().collect()).collect();
        let mut qubit_checks = vec![Vec::new(); n];
        for (i, c) in checks.iter().enumerate() {
            for &q in c {
                qubit_checks[q].push(i);
            }
        }
        CheckSet { n, checks, qubit_checks, stabilizers, logicals, conjugates }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Qubits in check `i`.
    pub fn check(&self, i: usize) -> &[usize] {
        &self.checks[i]
    }

    /// Checks touching qubit `q`: two in the bulk, one on a boundary.
    pub fn qubit_checks(&self, q: usize) -> &[usize] {
        &self.qubit_checks[q]
    }

    /// Same-type stabilizer supports (possibly dependent).
    pub fn stabilizers(&self) -> &[BitVec] {
        &self.stabilizers
    }

    pub fn logicals(&self) -> &[BitVec] {
        &self.logicals
    }

    pub fn conjugates(&self) -> &[BitVec] {
        &self.conjugates
    }

    pub fn syndrome(&self, error: &BitVec) -> BitVec {
        let mut s = BitVec::zeros(self.checks.len());
        for q in error.iter_ones() {
            for &c in &self.qubit_checks[q] {
                s.flip(c);
            }
        }
        s
    }

    /// Logical class of a syndrome-free error by overlap with the conjugate
    /// logicals.
    pub fn class_of(&self, error: &BitVec) -> HomologyClass {
        HomologyClass(self.conjugates.iter().enumerate().fold(0, |acc, (i, l)| acc | (u32::from(error.dot(l)) << i)))
    }

    /// Rank of the same-type stabilizer span.
    pub fn stabilizer_rank(&self) -> usize {
        SpanBasis::from_vectors(self.n, &self.stabilizers, false).rank()
    }

    /// Minimum weight of a nontrivial same-type logical, by enumerating the
    /// stabilizer span. `None` when the span rank exceeds `max_rank`.
    pub fn min_logical_weight(&self, max_rank: usize) -> Option<usize> {
        let span = SpanBasis::from_vectors(self.n, &self.stabilizers, false);
        if span.rank() > max_rank {
            return None;
        }
        let basis: Vec<BitVec> = span.basis().cloned().collect();
        let k = self.logicals.len();
        let mut best = usize::MAX;
        for mask in 1u32..(1 << k) {
            let mut cur = BitVec::zeros(self.n);
            for (i, l) in self.logicals.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    cur ^= l;
                }
            }
            best = best.min(cur.count_ones());
            for g in 1u64..(1u64 << basis.len()) {
                cur ^= &basis[g.trailing_zeros() as usize];
                best = best.min(cur.count_ones());
            }
        }
        Some(best)
    }
}

/// Set of flagged checks for one error type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    /// Pauli type of the errors this syndrome detects.
    pub basis: PauliKind,
    pub bits: BitVec,
}

impl Syndrome {
    pub fn from_defects(basis: PauliKind, num_checks: usize, defects: &[usize]) -> Result<Self> {
        if let Some(&d) = defects.iter().find(|&&d| d >= num_checks) {
            return Err(Error::InvalidSyndrome(format!("check {d} out of range ({num_checks} checks)")));
        }
        Ok(Syndrome { basis, bits: BitVec::from_indices(num_checks, defects.iter().copied()) })
    }

    pub fn defects(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.is_zero()
    }
}

/// Code distance, with a flag telling whether it was computed by
/// enumeration or taken from the lattice structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Distance {
    pub x: usize,
    pub z: usize,
    pub exact: bool,
}

impl Distance {
    pub fn value(&self) -> usize {
        self.x.min(self.z)
    }
}

/// Largest stabilizer-span rank for which the distance is enumerated.
pub const EXACT_DISTANCE_MAX_RANK: usize = 20;

#[derive(Clone, Debug)]
pub struct SurfaceCodeLayout {
    kind: CodeKind,
    size: usize,
    surface: Surface,
    x_stabilizers: Vec<BitVec>,
    z_stabilizers: Vec<BitVec>,
    logical_x: Vec<BitVec>,
    logical_z: Vec<BitVec>,
    z_checks: CheckSet,
    x_checks: CheckSet,
}

fn supports(lists: impl Iterator<Item = Vec<usize>>, n: usize) -> Vec<BitVec> {
    lists.map(|l| BitVec::from_indices(n, l)).collect()
}

/// Builds the toric, planar or bit-flip code of size `n`.
pub fn build_code(kind: CodeKind, n: usize) -> Result<SurfaceCodeLayout> {
    SurfaceCodeLayout::new(kind, n)
}

impl SurfaceCodeLayout {
    pub fn new(kind: CodeKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::SizeTooSmall(n));
        }
        let surface = match kind {
            CodeKind::Toric => Surface::torus(n)?,
            CodeKind::Planar => Surface::planar(n)?,
            CodeKind::Bitflip => Surface::polygon_sphere(n)?,
        };
        let e = surface.num_edges();
        let stars = supports((0..surface.num_vertices()).map(|v| surface.vertex_edges(v).to_vec()), e);
        let plaquettes = supports((0..surface.num_faces()).map(|f| surface.face_edges(f).to_vec()), e);
        let (x_stabilizers, z_stabilizers, logical_x, logical_z) = match kind {
            CodeKind::Toric | CodeKind::Planar => {
                (stars, plaquettes, surface.dual_cycles().to_vec(), surface.primal_cycles().to_vec())
            }
            // One generator Z(δv) per dual face; the first vertex is dropped
            // so that the n−1 generators are independent.
            CodeKind::Bitflip => {
                let z = stars[1..].to_vec();
                let lx = BitVec::from_indices(e, surface.face_edges(0).iter().copied());
                let lz = BitVec::from_indices(e, [0]);
                (Vec::new(), z, vec![lx], vec![lz])
            }
        };
        let z_checks =
            CheckSet::new(e, x_stabilizers.clone(), z_stabilizers.clone(), logical_z.clone(), logical_x.clone());
        let x_checks =
            CheckSet::new(e, z_stabilizers.clone(), x_stabilizers.clone(), logical_x.clone(), logical_z.clone());
        Ok(SurfaceCodeLayout {
            kind,
            size: n,
            surface,
            x_stabilizers,
            z_stabilizers,
            logical_x,
            logical_z,
            z_checks,
            x_checks,
        })
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn num_qubits(&self) -> usize {
        self.surface.num_edges()
    }

    /// Star generator supports X(δv_k).
    pub fn x_stabilizers(&self) -> &[BitVec] {
        &self.x_stabilizers
    }

    /// Plaquette generator supports Z(∂f_m).
    pub fn z_stabilizers(&self) -> &[BitVec] {
        &self.z_stabilizers
    }

    pub fn logical_x(&self) -> &[BitVec] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[BitVec] {
        &self.logical_z
    }

    /// Checks, equivalences and logicals for errors of the given Pauli type.
    pub fn checks(&self, error: PauliKind) -> &CheckSet {
        match error {
            PauliKind::Z => &self.z_checks,
            PauliKind::X => &self.x_checks,
        }
    }

    pub fn num_independent_generators(&self) -> usize {
        self.z_checks.stabilizer_rank() + self.x_checks.stabilizer_rank()
    }

    pub fn logical_pairs(&self) -> usize {
        self.num_qubits() - self.num_independent_generators()
    }

    /// All generators as Pauli products, X-type first.
    pub fn generators(&self) -> Vec<PauliProduct> {
        let n = self.num_qubits();
        self.x_stabilizers
            .iter()
            .map(|s| PauliProduct::from_support(n, s, PauliKind::X))
            .chain(self.z_stabilizers.iter().map(|s| PauliProduct::from_support(n, s, PauliKind::Z)))
            .collect()
    }

    /// A maximal independent subset of [`Self::generators`].
    pub fn independent_generators(&self) -> Vec<PauliProduct> {
        let n = self.num_qubits();
        let mut span = SpanBasis::new(2 * n, false);
        self.generators().into_iter().filter(|g| span.insert(&g.x_bits().concat(g.z_bits()))).collect()
    }

    /// Logical operator pairs (X_i, Z_i).
    pub fn logical_operators(&self) -> Vec<(PauliProduct, PauliProduct)> {
        let n = self.num_qubits();
        self.logical_x
            .iter()
            .zip(&self.logical_z)
            .map(|(x, z)| {
                (PauliProduct::from_support(n, x, PauliKind::X), PauliProduct::from_support(n, z, PauliKind::Z))
            })
            .collect()
    }

    fn check_error(&self, error: &Chain) -> Result<()> {
        if error.dim() != 1 {
            return Err(Error::InvalidChain(format!("errors are 1-chains, found dimension {}", error.dim())));
        }
        if error.bits().len() != self.num_qubits() {
            return Err(Error::DimensionMismatch { expected: self.num_qubits(), found: error.bits().len() });
        }
        Ok(())
    }

    /// Flagged generators for an error of Pauli type `basis`: its boundary.
    pub fn syndrome_of(&self, error: &Chain, basis: PauliKind) -> Result<Syndrome> {
        self.check_error(error)?;
        Ok(Syndrome { basis, bits: self.checks(basis).syndrome(error.bits()) })
    }

    /// Logical class of error + recovery, which must be syndrome-free.
    pub fn residual_class(&self, residual: &Chain, basis: PauliKind) -> Result<HomologyClass> {
        self.check_error(residual)?;
        let checks = self.checks(basis);
        if !checks.syndrome(residual.bits()).is_zero() {
            return Err(Error::InvalidChain("residual has a nonzero boundary".into()));
        }
        match self.kind {
            CodeKind::Bitflip => Ok(checks.class_of(residual.bits())),
            _ => self.surface.classify_cycle(&Chain::new(1, basis == PauliKind::X, residual.bits().clone())),
        }
    }

    /// Exact when both stabilizer spans have rank ≤ 20 (every size up to
    /// 4), the lattice size otherwise.
    pub fn distance(&self) -> Distance {
        let x = self.x_checks.min_logical_weight(EXACT_DISTANCE_MAX_RANK);
        let z = self.z_checks.min_logical_weight(EXACT_DISTANCE_MAX_RANK);
        match (x, z) {
            (Some(x), Some(z)) => Distance { x, z, exact: true },
            _ => {
                let (x, z) = match self.kind {
                    CodeKind::Bitflip => (self.size, 1),
                    _ => (self.size, self.size),
                };
                Distance { x, z, exact: false }
            }
        }
    }
}
