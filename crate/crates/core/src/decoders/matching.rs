//! Minimum-weight perfect-matching decoding of code-capacity and space-time
//! syndromes.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::chain::HomologyClass;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::noise::{coupling_from_p, NoiseModel};
use crate::pauli::PauliKind;
use crate::surface::{CheckSet, CodeKind, SurfaceCodeLayout, Syndrome};

use super::blossom::min_weight_perfect_matching;

const UNREACHABLE: u32 = u32::MAX;
/// Edge-weight unit per unit of coupling J.
const WEIGHT_SCALE: f64 = 1000.0;
/// Weight of a step that the model says cannot happen.
const FORBIDDEN_STEP: i64 = 1_000_000;

/// Check graph of one error type with all-pairs shortest paths. Qubits seen
/// by one check connect it to a shared boundary node, which paths may end at
/// but never pass through.
#[derive(Clone, Debug)]
struct CheckGraph {
    nodes: usize,
    boundary: Option<usize>,
    dist: Vec<u32>,
    pred: Vec<u32>,
    qubit_ends: Vec<(usize, usize)>,
}

impl CheckGraph {
    fn new(checks: &CheckSet) -> Result<Self> {
        let m = checks.num_checks();
        let n = checks.num_qubits();
        let has_boundary = (0..n).any(|q| checks.qubit_checks(q).len() == 1);
        let boundary = has_boundary.then_some(m);
        let nodes = m + usize::from(has_boundary);
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
        let mut qubit_ends = vec![(usize::MAX, usize::MAX); n];
        for (q, ends) in qubit_ends.iter_mut().enumerate() {
            let (a, b) = match *checks.qubit_checks(q) {
                [] => continue,
                [a] => (a, m),
                [a, b] => (a, b),
                _ => return Err(Error::InvalidSyndrome(format!("qubit {q} meets more than two checks"))),
            };
            adj[a].push((q, b));
            adj[b].push((q, a));
            *ends = (a, b);
        }
        let mut dist = vec![UNREACHABLE; nodes * nodes];
        let mut pred = vec![u32::MAX; nodes * nodes];
        let mut queue = VecDeque::new();
        for s in 0..nodes {
            let row = s * nodes;
            dist[row + s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                if Some(u) == boundary && u != s {
                    continue;
                }
                for &(q, v) in &adj[u] {
                    if dist[row + v] == UNREACHABLE {
                        dist[row + v] = dist[row + u] + 1;
                        pred[row + v] = q as u32;
                        queue.push_back(v);
                    }
                }
            }
        }
        Ok(CheckGraph { nodes, boundary, dist, pred, qubit_ends })
    }

    fn distance(&self, a: usize, b: usize) -> Option<u32> {
        let d = self.dist[a * self.nodes + b];
        (d != UNREACHABLE).then_some(d)
    }

    fn add_path(&self, s: usize, t: usize, out: &mut BitVec) {
        let row = s * self.nodes;
        let mut cur = t;
        while cur != s {
            let q = self.pred[row + cur] as usize;
            out.flip(q);
            let (a, b) = self.qubit_ends[q];
            cur = if cur == a { b } else { a };
        }
    }
}

/// A defect at a check and a time layer (always 0 for code capacity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Defect {
    pub check: usize,
    pub layer: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Match {
    Pair(Defect, Defect),
    Boundary(Defect),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphNode {
    Defect(Defect),
    /// Boundary partner of the defect with this node index.
    Virtual(usize),
}

/// Complete graph on the defects, plus one boundary partner per defect when
/// the code has a boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<(usize, usize, i64)>,
}

impl MatchingGraph {
    /// Partner of every node in a minimum-weight perfect matching.
    pub fn mwpm(&self) -> Result<Vec<usize>> {
        min_weight_perfect_matching(self.nodes.len(), &self.edges)
    }

    pub fn weight_of(&self, mate: &[usize]) -> i64 {
        self.edges.iter().filter(|&&(i, j, _)| mate[i] == j).map(|e| e.2).sum()
    }

    /// Line-based dump: `node i x y [t]` then `edge i j w`. Boundary
    /// partners sit at their defect's coordinates with a trailing `b`.
    pub fn dump(&self, coords: impl Fn(usize) -> (i64, i64), spacetime: bool) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let (d, tag) = match *node {
                GraphNode::Defect(d) => (d, ""),
                GraphNode::Virtual(of) => match self.nodes[of] {
                    GraphNode::Defect(d) => (d, " b"),
                    GraphNode::Virtual(_) => unreachable!("virtual nodes pair with defects"),
                },
            };
            let (x, y) = coords(d.check);
            if spacetime {
                let _ = writeln!(out, "node {i} {x} {y} {}{tag}", d.layer);
            } else {
                let _ = writeln!(out, "node {i} {x} {y}{tag}");
            }
        }
        for &(i, j, w) in &self.edges {
            let _ = writeln!(out, "edge {i} {j} {w}");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub matching: Vec<Match>,
    /// Data correction; time-like segments of a space-time matching only
    /// explain measurement errors and contribute nothing here.
    pub recovery: BitVec,
    pub weight: i64,
}

impl DecodeResult {
    /// Logical class of error + recovery.
    pub fn residual_class(&self, error: &BitVec, checks: &CheckSet) -> Result<HomologyClass> {
        let mut r = self.recovery.clone();
        r ^= error;
        if !checks.syndrome(&r).is_zero() {
            return Err(Error::InvalidSyndrome("recovery does not match the error's syndrome".into()));
        }
        Ok(checks.class_of(&r))
    }

    pub fn success(&self, error: &BitVec, checks: &CheckSet) -> Result<bool> {
        Ok(self.residual_class(error, checks)?.is_trivial())
    }
}

/// Space and time weights for a phenomenological history: round(1000·J)
/// for the data and measurement rates.
pub fn spacetime_weights(model: &NoiseModel) -> Result<(i64, i64)> {
    let NoiseModel::Phenomenological { p_data, p_meas } = *model else {
        return Err(Error::UnsupportedModel(format!("{} has no space-time weights", model.name())));
    };
    let w = |p: f64| -> Result<i64> {
        if p == 0.0 {
            Ok(FORBIDDEN_STEP)
        } else if p >= 0.5 {
            Ok(1)
        } else {
            Ok(((WEIGHT_SCALE * coupling_from_p(p)?).round() as i64).max(1))
        }
    };
    Ok((w(p_data)?, w(p_meas)?))
}

/// Matching decoder for one error type, with shortest paths cached.
#[derive(Clone, Debug)]
pub struct MatchingDecoder {
    checks: CheckSet,
    graph: CheckGraph,
    coords: Vec<(i64, i64)>,
}

impl MatchingDecoder {
    pub fn new(checks: &CheckSet, coords: Vec<(i64, i64)>) -> Result<Self> {
        if coords.len() != checks.num_checks() {
            return Err(Error::DimensionMismatch { expected: checks.num_checks(), found: coords.len() });
        }
        Ok(MatchingDecoder { checks: checks.clone(), graph: CheckGraph::new(checks)?, coords })
    }

    /// Decoder for errors of Pauli type `error` on a surface code.
    pub fn for_code(code: &SurfaceCodeLayout, error: PauliKind) -> Result<Self> {
        let checks = code.checks(error);
        let s = code.surface();
        let coords = match (code.kind(), error) {
            (CodeKind::Bitflip, _) => (0..checks.num_checks()).map(|c| s.vertex_coord(c + 1)).collect(),
            (_, PauliKind::Z) => (0..checks.num_checks()).map(|v| s.vertex_coord(v)).collect(),
            (_, PauliKind::X) => (0..checks.num_checks()).map(|f| s.face_coord(f)).collect(),
        };
        MatchingDecoder::new(checks, coords)
    }

    pub fn checks(&self) -> &CheckSet {
        &self.checks
    }

    pub fn coord(&self, check: usize) -> (i64, i64) {
        self.coords[check]
    }

    pub fn has_boundary(&self) -> bool {
        self.graph.boundary.is_some()
    }

    /// Lattice distance between two checks, avoiding the boundary.
    pub fn distance(&self, a: usize, b: usize) -> Option<u32> {
        self.graph.distance(a, b)
    }

    pub fn boundary_distance(&self, a: usize) -> Option<u32> {
        self.graph.boundary.and_then(|b| self.graph.distance(a, b))
    }

    /// Matching graph for the given defects with weight ws per lattice step
    /// and wt per time step.
    pub fn matching_graph(&self, defects: &[Defect], ws: i64, wt: i64) -> Result<MatchingGraph> {
        let k = defects.len();
        if let Some(d) = defects.iter().find(|d| d.check >= self.checks.num_checks()) {
            return Err(Error::InvalidSyndrome(format!("check {} out of range", d.check)));
        }
        if self.graph.boundary.is_none() && k % 2 == 1 {
            return Err(Error::InvalidSyndrome(format!("{k} defects cannot be paired without a boundary")));
        }
        let mut nodes: Vec<GraphNode> = defects.iter().map(|&d| GraphNode::Defect(d)).collect();
        let mut edges = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (defects[i], defects[j]);
                if let Some(d) = self.graph.distance(a.check, b.check) {
                    edges.push((i, j, ws * i64::from(d) + wt * a.layer.abs_diff(b.layer) as i64));
                }
            }
        }
        if let Some(bnode) = self.graph.boundary {
            for (i, d) in defects.iter().enumerate() {
                nodes.push(GraphNode::Virtual(i));
                if let Some(w) = self.graph.distance(d.check, bnode) {
                    edges.push((i, k + i, ws * i64::from(w)));
                }
            }
            for i in 0..k {
                for j in i + 1..k {
                    edges.push((k + i, k + j, 0));
                }
            }
        }
        Ok(MatchingGraph { nodes, edges })
    }

    fn solve(&self, defects: &[Defect], ws: i64, wt: i64) -> Result<DecodeResult> {
        let mut recovery = BitVec::zeros(self.checks.num_qubits());
        if defects.is_empty() {
            return Ok(DecodeResult { matching: Vec::new(), recovery, weight: 0 });
        }
        let g = self.matching_graph(defects, ws, wt)?;
        let mate = g.mwpm()?;
        let k = defects.len();
        let mut matching = Vec::new();
        for i in 0..k {
            let j = mate[i];
            if j < k {
                if i < j {
                    matching.push(Match::Pair(defects[i], defects[j]));
                    self.graph.add_path(defects[i].check, defects[j].check, &mut recovery);
                }
            } else {
                matching.push(Match::Boundary(defects[i]));
                let b = self.graph.boundary.expect("virtual nodes need a boundary");
                self.graph.add_path(defects[i].check, b, &mut recovery);
            }
        }
        Ok(DecodeResult { matching, recovery, weight: g.weight_of(&mate) })
    }

    /// Code-capacity decoding of a perfectly measured syndrome.
    pub fn decode(&self, syndrome: &BitVec) -> Result<DecodeResult> {
        if syndrome.len() != self.checks.num_checks() {
            return Err(Error::InvalidSyndrome(format!(
                "expected {} syndrome bits, found {}",
                self.checks.num_checks(),
                syndrome.len()
            )));
        }
        let defects: Vec<Defect> = syndrome.iter_ones().map(|check| Defect { check, layer: 0 }).collect();
        self.solve(&defects, 1, 1)
    }

    /// Space-time decoding of differenced syndromes, one per layer.
    pub fn decode_spacetime(&self, differenced: &[BitVec], ws: i64, wt: i64) -> Result<DecodeResult> {
        if differenced.is_empty() {
            return Err(Error::InvalidSyndrome("no syndrome layers".into()));
        }
        let mut defects = Vec::new();
        for (layer, s) in differenced.iter().enumerate() {
            if s.len() != self.checks.num_checks() {
                return Err(Error::InvalidSyndrome(format!("layer {layer} has {} bits", s.len())));
            }
            defects.extend(s.iter_ones().map(|check| Defect { check, layer }));
        }
        self.solve(&defects, ws, wt)
    }
}

/// Matches the syndrome of a surface code.
pub fn decode_2d(code: &SurfaceCodeLayout, syndrome: &Syndrome) -> Result<DecodeResult> {
    MatchingDecoder::for_code(code, syndrome.basis)?.decode(&syndrome.bits)
}

/// Matches a differenced space-time syndrome of a surface code for errors
/// of type `error`, weighting steps by the model's couplings.
pub fn decode_3d(
    code: &SurfaceCodeLayout,
    error: PauliKind,
    differenced: &[BitVec],
    model: &NoiseModel,
) -> Result<DecodeResult> {
    let (ws, wt) = spacetime_weights(model)?;
    MatchingDecoder::for_code(code, error)?.decode_spacetime(differenced, ws, wt)
}
