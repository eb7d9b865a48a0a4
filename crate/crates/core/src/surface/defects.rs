//! Defect qubits on a smooth-boundary patch, run on the stabilizer tableau.
//!
//! A primal defect is a set of faces whose plaquettes are no longer
//! enforced; its interior edges are held in X eigenstates. A dual defect is
//! the same on vertices, stars and Z eigenstates. Reference qubits appended
//! after the code qubits purify logical states so that logical maps can be
//! read off by exact group membership.
//!
//! Random outcomes of gauge measurements are not corrected on the tableau.
//! Instead the byproduct frame F records a Pauli with F·ψ equal to the
//! state in which every such outcome came out +1; all checks are made on
//! that ideal state.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::Surface;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{Pauli, PauliKind, PauliProduct};
use crate::stabilizer::StabilizerTableau;

const SAME_TYPE_MARGIN: i64 = 4;
const MIXED_TYPE_MARGIN: i64 = 3;

/// A connected set of faces (primal) or vertices (dual).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectRegion {
    dual: bool,
    cells: BTreeSet<usize>,
}

impl DefectRegion {
    pub fn primal<I: IntoIterator<Item = usize>>(faces: I) -> Self {
        DefectRegion { dual: false, cells: faces.into_iter().collect() }
    }

    pub fn dual<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        DefectRegion { dual: true, cells: vertices.into_iter().collect() }
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn cell_edges<'a>(&self, s: &'a Surface, c: usize) -> &'a [usize] {
        if self.dual {
            s.vertex_edges(c)
        } else {
            s.face_edges(c)
        }
    }

    fn edge_cells<'a>(&self, s: &'a Surface, e: usize) -> &'a [usize] {
        if self.dual {
            s.edge_vertices(e)
        } else {
            s.edge_faces(e)
        }
    }

    /// ∂D for a primal region, δD̄ for a dual one, as an edge set.
    pub fn boundary(&self, s: &Surface) -> BitVec {
        let mut b = BitVec::zeros(s.num_edges());
        for c in self.cells() {
            for &e in self.cell_edges(s, c) {
                b.flip(e);
            }
        }
        b
    }

    /// Edges with both neighbouring cells inside the region, in index order.
    pub fn interior_edges(&self, s: &Surface) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for c in self.cells() {
            for &e in self.cell_edges(s, c) {
                let cells = self.edge_cells(s, e);
                if cells.len() == 2 && cells.iter().all(|x| self.cells.contains(x)) {
                    out.insert(e);
                }
            }
        }
        out.into_iter().collect()
    }

    fn is_connected(&self, s: &Surface) -> bool {
        let Some(&start) = self.cells.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for &e in self.cell_edges(s, c) {
                for &d in self.edge_cells(s, e) {
                    if self.cells.contains(&d) && seen.insert(d) {
                        queue.push_back(d);
                    }
                }
            }
        }
        seen.len() == self.cells.len()
    }

    fn coords(&self, s: &Surface) -> Vec<(i64, i64)> {
        self.cells().map(|c| if self.dual { s.vertex_coord(c) } else { s.face_coord(c) }).collect()
    }
}

/// One measurement made by a defect operation.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub operator: PauliProduct,
    /// Bit observed on the tableau.
    pub raw: bool,
    /// The same bit read in the ideal frame, before any forcing.
    pub outcome: bool,
    pub random: bool,
    /// Whether a random outcome was absorbed into the byproduct frame.
    pub forced: bool,
}

/// Tableau state of a patch with defects and reference qubits.
#[derive(Clone, Debug)]
pub struct DefectState {
    surface: Surface,
    refs: usize,
    tableau: StabilizerTableau,
    frame: PauliProduct,
    defects: Vec<Option<DefectRegion>>,
    history: Vec<MeasurementRecord>,
    rng: ChaCha8Rng,
}

impl DefectState {
    /// Defect-free `width`×`height` patch, with `refs` reference qubits in |0⟩.
    pub fn vacuum(width: usize, height: usize, refs: usize, seed: u64) -> Result<Self> {
        let surface = Surface::patch(width, height)?;
        let n = surface.num_edges();
        let mut gens: Vec<PauliProduct> = Vec::new();
        for f in 0..surface.num_faces() {
            gens.push(op_on(n + refs, surface.face_edges(f), Pauli::Z));
        }
        // The product of all stars is the identity on a smooth patch.
        for v in 1..surface.num_vertices() {
            gens.push(op_on(n + refs, surface.vertex_edges(v), Pauli::X));
        }
        for r in 0..refs {
            gens.push(PauliProduct::single(n + refs, n + r, Pauli::Z));
        }
        DefectState::from_parts(surface, refs, gens, Vec::new(), seed)
    }

    /// State with the given generators and already-present defects.
    pub fn from_parts(
        surface: Surface,
        refs: usize,
        generators: Vec<PauliProduct>,
        defects: Vec<DefectRegion>,
        seed: u64,
    ) -> Result<Self> {
        let n = surface.num_edges() + refs;
        let tableau = StabilizerTableau::from_generators(n, generators)?;
        let mut state = DefectState {
            surface,
            refs,
            tableau,
            frame: PauliProduct::identity(n),
            defects: Vec::new(),
            history: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        for d in defects {
            state.check_placement(&d, &[])?;
            state.defects.push(Some(d));
        }
        Ok(state)
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn num_code_qubits(&self) -> usize {
        self.surface.num_edges()
    }

    pub fn num_qubits(&self) -> usize {
        self.surface.num_edges() + self.refs
    }

    pub fn tableau(&self) -> &StabilizerTableau {
        &self.tableau
    }

    pub fn frame(&self) -> &PauliProduct {
        &self.frame
    }

    pub fn history(&self) -> &[MeasurementRecord] {
        &self.history
    }

    pub fn defect(&self, id: usize) -> Option<&DefectRegion> {
        self.defects.get(id).and_then(Option::as_ref)
    }

    /// Pauli of type `p` on the given code edges.
    pub fn code_operator(&self, edges: &[usize], p: Pauli) -> PauliProduct {
        op_on(self.num_qubits(), edges, p)
    }

    pub fn support_operator(&self, support: &BitVec, kind: PauliKind) -> PauliProduct {
        let edges: Vec<usize> = support.iter_ones().collect();
        self.code_operator(&edges, if kind == PauliKind::X { Pauli::X } else { Pauli::Z })
    }

    pub fn reference(&self, r: usize, p: Pauli) -> PauliProduct {
        PauliProduct::single(self.num_qubits(), self.num_code_qubits() + r, p)
    }

    /// Sign of ±P in the ideal state: `Some(false)` for +P, `Some(true)` for
    /// −P, `None` if neither is a stabilizer.
    pub fn ideal_sign(&self, p: &PauliProduct) -> Option<bool> {
        self.tableau.membership(p).map(|neg| neg ^ p.anticommutes_unchecked(&self.frame))
    }

    fn measure(&mut self, p: PauliProduct, force: bool) -> Result<MeasurementRecord> {
        let n_code = self.num_code_qubits();
        let n = self.num_qubits();
        let through_frame = p.anticommutes_unchecked(&self.frame);
        let coin: bool = self.rng.random();
        let rec = self.tableau.measure_with(&p, || coin, |s| (n_code..n).all(|q| s.get(q) == Pauli::I))?;
        let outcome = rec.outcome ^ through_frame;
        let forced = force && rec.random && outcome;
        if forced {
            let flip = rec.flip.as_ref().expect("random outcomes carry a flip operator");
            self.frame.mul_assign_unchecked(flip);
            self.frame.set_phase(0);
        }
        let record = MeasurementRecord { operator: p, raw: rec.outcome, outcome, random: rec.random, forced };
        self.history.push(record.clone());
        Ok(record)
    }

    fn interior_pauli(dual: bool) -> Pauli {
        if dual {
            Pauli::Z
        } else {
            Pauli::X
        }
    }

    /// Plaquette of a face for primal regions, star of a vertex for dual ones.
    fn cell_operator(&self, dual: bool, c: usize) -> PauliProduct {
        if dual {
            self.code_operator(self.surface.vertex_edges(c), Pauli::X)
        } else {
            self.code_operator(self.surface.face_edges(c), Pauli::Z)
        }
    }

    fn check_placement(&self, d: &DefectRegion, ignore: &[usize]) -> Result<()> {
        let s = &self.surface;
        let limit = if d.dual { s.num_vertices() } else { s.num_faces() };
        if d.is_empty() {
            return Err(Error::Defect("empty region".into()));
        }
        if let Some(c) = d.cells().find(|&c| c >= limit) {
            return Err(Error::Defect(format!("cell {c} out of range")));
        }
        if !d.is_connected(s) {
            return Err(Error::Defect("region is not connected".into()));
        }
        let (rows, cols) = patch_extent(s);
        let inner = if d.dual { 2 } else { 3 };
        for (i, j) in d.coords(s) {
            if i < inner || j < inner || i > rows - inner || j > cols - inner {
                return Err(Error::Defect(format!("cell at {:?} is too close to the patch boundary", (i, j))));
            }
        }
        for (id, other) in self.defects.iter().enumerate() {
            let Some(other) = other else { continue };
            if ignore.contains(&id) {
                continue;
            }
            let margin = if other.dual == d.dual { SAME_TYPE_MARGIN } else { MIXED_TYPE_MARGIN };
            for a in d.coords(s) {
                for b in other.coords(s) {
                    if (a.0 - b.0).abs().max((a.1 - b.1).abs()) < margin {
                        return Err(Error::Defect(format!(
                            "cell at {a:?} overlaps the margin of defect {id} at {b:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn live(&self, id: usize) -> Result<&DefectRegion> {
        self.defect(id).ok_or_else(|| Error::Defect(format!("no defect with id {id}")))
    }

    fn register(&mut self, d: DefectRegion) -> usize {
        self.defects.push(Some(d));
        self.defects.len() - 1
    }

    /// Measures the interior edges of two new defects of the same type. The
    /// pair is left in an eigenstate of its boundary operator: logical Z for
    /// primal pairs, logical X for dual ones.
    pub fn create_pair(&mut self, a: DefectRegion, b: DefectRegion) -> Result<(usize, usize)> {
        if a.dual != b.dual {
            return Err(Error::Defect("a pair needs two defects of the same type".into()));
        }
        self.check_placement(&a, &[])?;
        let ia = self.register(a.clone());
        if let Err(e) = self.check_placement(&b, &[]) {
            self.defects.pop();
            return Err(e);
        }
        let ib = self.register(b.clone());
        for d in [a, b] {
            for e in d.interior_edges(&self.surface) {
                let p = self.code_operator(&[e], Self::interior_pauli(d.dual));
                self.measure(p, true)?;
            }
        }
        Ok((ia, ib))
    }

    /// Grows a defect by `add`, measuring each newly interior edge in index
    /// order.
    pub fn expand(&mut self, id: usize, add: &[usize]) -> Result<()> {
        let old = self.live(id)?.clone();
        let mut new = old.clone();
        new.cells.extend(add.iter().copied());
        self.check_placement(&new, &[id])?;
        let before: BTreeSet<usize> = old.interior_edges(&self.surface).into_iter().collect();
        for e in new.interior_edges(&self.surface) {
            if !before.contains(&e) {
                let p = self.code_operator(&[e], Self::interior_pauli(new.dual));
                self.measure(p, true)?;
            }
        }
        self.defects[id] = Some(new);
        Ok(())
    }

    /// Shrinks a defect to `keep` by restoring the generators of the other
    /// cells in index order.
    pub fn contract(&mut self, id: usize, keep: &[usize]) -> Result<()> {
        let old = self.live(id)?.clone();
        let kept = DefectRegion { dual: old.dual, cells: keep.iter().copied().collect() };
        if !kept.cells.is_subset(&old.cells) {
            return Err(Error::Defect("contraction target is not inside the defect".into()));
        }
        self.check_placement(&kept, &[id])?;
        let removed: Vec<usize> = old.cells.difference(&kept.cells).copied().collect();
        for c in removed {
            let p = self.cell_operator(old.dual, c);
            self.measure(p, true)?;
        }
        self.defects[id] = Some(kept);
        Ok(())
    }

    /// Expansion onto `to` followed by contraction to `to`.
    pub fn move_defect(&mut self, id: usize, to: &[usize]) -> Result<()> {
        self.expand(id, to)?;
        self.contract(id, to)
    }

    /// Restores every generator inside the defect and removes it. Returns
    /// the parity of the outcomes, the eigenvalue bit of the boundary
    /// operator.
    pub fn annihilate(&mut self, id: usize) -> Result<bool> {
        let d = self.live(id)?.clone();
        let mut parity = false;
        for c in d.cells() {
            let p = self.cell_operator(d.dual, c);
            parity ^= self.measure(p, false)?.outcome;
        }
        self.defects[id] = None;
        Ok(parity)
    }

    /// Boundary-basis measurement of a pair by annihilating both defects.
    /// For a primal pair this is the logical Z measurement.
    pub fn measure_z(&mut self, a: usize, b: usize) -> Result<bool> {
        let ma = self.annihilate(a)?;
        let mb = self.annihilate(b)?;
        if ma != mb {
            return Err(Error::Defect("the two defects of the pair disagree".into()));
        }
        Ok(ma)
    }

    /// Chain-basis preparation: creates `left ∪ middle ∪ right` as one
    /// defect, then restores the middle. For primal regions the pair ends in
    /// the +1 eigenstate of logical X.
    pub fn prepare_x(
        &mut self,
        left: DefectRegion,
        middle: DefectRegion,
        right: DefectRegion,
    ) -> Result<(usize, usize)> {
        if left.dual != middle.dual || left.dual != right.dual {
            return Err(Error::Defect("regions of mixed type".into()));
        }
        let mut all = left.clone();
        all.cells.extend(middle.cells());
        all.cells.extend(right.cells());
        if all.len() != left.len() + middle.len() + right.len() {
            return Err(Error::Defect("regions overlap".into()));
        }
        self.check_placement(&all, &[])?;
        self.check_placement(&left, &[])?;
        let il = self.register(left.clone());
        if let Err(e) = self.check_placement(&right, &[]) {
            self.defects.pop();
            return Err(e);
        }
        self.defects.pop();
        let id = self.register(all.clone());
        for e in all.interior_edges(&self.surface) {
            let p = self.code_operator(&[e], Self::interior_pauli(all.dual));
            self.measure(p, true)?;
        }
        for c in middle.cells() {
            let p = self.cell_operator(all.dual, c);
            self.measure(p, true)?;
        }
        debug_assert_eq!(il, id);
        self.defects[id] = Some(left);
        let ir = self.register(right);
        Ok((id, ir))
    }

    /// Chain-basis measurement: merges the pair through `bridge` and reads
    /// the product of the interior edges crossed by a path from `a` to `b`.
    /// For a primal pair this is the logical X measurement.
    pub fn measure_x(&mut self, a: usize, b: usize, bridge: &[usize]) -> Result<bool> {
        let da = self.live(a)?.clone();
        let db = self.live(b)?.clone();
        if da.dual != db.dual {
            return Err(Error::Defect("a pair needs two defects of the same type".into()));
        }
        let mut all = da.clone();
        all.cells.extend(db.cells());
        all.cells.extend(bridge.iter().copied());
        self.check_placement(&all, &[a, b])?;
        let before: BTreeSet<usize> =
            da.interior_edges(&self.surface).into_iter().chain(db.interior_edges(&self.surface)).collect();
        for e in all.interior_edges(&self.surface) {
            if !before.contains(&e) {
                let p = self.code_operator(&[e], Self::interior_pauli(all.dual));
                self.measure(p, false)?;
            }
        }
        let path = crossing_path(&self.surface, &all, &da, &db)
            .ok_or_else(|| Error::Defect("bridge does not connect the pair".into()))?;
        let op = self.code_operator(&path, Self::interior_pauli(all.dual));
        let sign =
            self.ideal_sign(&op).ok_or_else(|| Error::Defect("chain operator is not fixed after merging".into()))?;
        self.defects[a] = Some(all);
        self.defects[b] = None;
        Ok(sign)
    }
}

fn op_on(n: usize, qubits: &[usize], p: Pauli) -> PauliProduct {
    let mut op = PauliProduct::identity(n);
    for &q in qubits {
        op.set(q, p);
    }
    op
}

fn patch_extent(s: &Surface) -> (i64, i64) {
    (0..s.num_vertices()).map(|v| s.vertex_coord(v)).fold((0, 0), |(r, c), (i, j)| (r.max(i), c.max(j)))
}

/// Interior edges crossed by a shortest path of cells from `a` to `b`
/// inside `all`.
fn crossing_path(s: &Surface, all: &DefectRegion, a: &DefectRegion, b: &DefectRegion) -> Option<Vec<usize>> {
    let mut prev: std::collections::BTreeMap<usize, (usize, usize)> = Default::default();
    let mut queue: VecDeque<usize> = a.cells().collect();
    let mut seen: BTreeSet<usize> = a.cells.clone();
    while let Some(c) = queue.pop_front() {
        if b.cells.contains(&c) {
            let mut path = Vec::new();
            let mut cur = c;
            while let Some(&(p, e)) = prev.get(&cur) {
                path.push(e);
                cur = p;
            }
            return Some(path);
        }
        for &e in all.cell_edges(s, c) {
            for &d in all.edge_cells(s, e) {
                if d != c && all.cells.contains(&d) && seen.insert(d) {
                    prev.insert(d, (c, e));
                    queue.push_back(d);
                }
            }
        }
    }
    None
}

/// One logical transformation check of the braid.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalCheck {
    pub name: String,
    /// Whether the expected image (times its reference) is a +1 stabilizer.
    pub holds: bool,
    /// Whether the untransformed operator is still a stabilizer; for an odd
    /// number of braids on the transformed logicals this must be false.
    pub unchanged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BraidRun {
    pub braids: usize,
    pub moves: usize,
    pub measurements: usize,
    pub checks: Vec<LogicalCheck>,
}

impl BraidRun {
    pub fn passed(&self) -> bool {
        let odd = self.braids % 2 == 1;
        self.checks.iter().enumerate().all(|(i, c)| {
            let moves_logical = i == 1 || i == 3;
            c.holds && (c.unchanged == !(odd && moves_logical))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BraidReport {
    pub lattice: usize,
    pub runs: Vec<BraidRun>,
}

impl BraidReport {
    pub fn passed(&self) -> bool {
        self.runs.iter().all(BraidRun::passed)
    }
}

/// Smallest patch width hosting the braid layout.
pub const BRAID_MIN_SIZE: usize = 9;

/// Braids a primal defect around a dual defect `braids` times on an n×n
/// patch and checks the images of the four logical generators.
///
/// Layout in (row, col) doubled coordinates: the primal pair sits on faces
/// (5,7) and (5,3) joined by the dual chain crossing edges (5,6) and (5,4);
/// the dual pair sits on vertices (6,10) and (6,16) joined by the edges
/// (6,11), (6,13), (6,15). The primal defect circles (6,10) on the twelve
/// faces at Chebyshev distance 3.
pub fn braid_cnot_run(n: usize, braids: usize, seed: u64) -> Result<BraidRun> {
    if n < BRAID_MIN_SIZE {
        return Err(Error::Defect(format!("lattice {n} is too small for the braid, need at least {BRAID_MIN_SIZE}")));
    }
    let s = Surface::patch(n, n)?;
    let face = |c: (i64, i64)| s.face_at(c).expect("layout face");
    let vertex = |c: (i64, i64)| s.vertex_at(c).expect("layout vertex");
    let edge = |c: (i64, i64)| s.edge_at(c).expect("layout edge");
    let d1 = face((5, 7));
    let d2 = face((5, 3));
    let v1 = vertex((6, 10));
    let v2 = vertex((6, 16));
    let c_bar: Vec<usize> = [(5, 6), (5, 4)].into_iter().map(edge).collect();
    let c: Vec<usize> = [(6, 11), (6, 13), (6, 15)].into_iter().map(edge).collect();
    let ring: Vec<usize> =
        [(3, 7), (3, 9), (3, 11), (3, 13), (5, 13), (7, 13), (9, 13), (9, 11), (9, 9), (9, 7), (7, 7), (5, 7)]
            .into_iter()
            .map(face)
            .collect();

    let e = s.num_edges();
    let total = e + 2;
    let with_ref = |mut op: PauliProduct, r: usize, p: Pauli| {
        op.set(e + r, p);
        op
    };
    let mut gens = Vec::new();
    for f in (0..s.num_faces()).filter(|&f| f != d1 && f != d2) {
        gens.push(op_on(total, s.face_edges(f), Pauli::Z));
    }
    let dd: Vec<usize> = s.face_edges(d1).iter().chain(s.face_edges(d2)).copied().collect();
    gens.push(op_on(total, &dd, Pauli::Z));
    for v in (0..s.num_vertices()).filter(|&v| v != v1 && v != v2) {
        gens.push(op_on(total, s.vertex_edges(v), Pauli::X));
    }
    let z_d = op_on(total, s.face_edges(d1), Pauli::Z);
    let x_cbar = op_on(total, &c_bar, Pauli::X);
    let x_dbar = op_on(total, s.vertex_edges(v1), Pauli::X);
    let z_c = op_on(total, &c, Pauli::Z);
    gens.push(with_ref(z_d.clone(), 0, Pauli::Z));
    gens.push(with_ref(x_cbar.clone(), 0, Pauli::X));
    gens.push(with_ref(x_dbar.clone(), 1, Pauli::X));
    gens.push(with_ref(z_c.clone(), 1, Pauli::Z));

    let defects = vec![
        DefectRegion::primal([d1]),
        DefectRegion::primal([d2]),
        DefectRegion::dual([v1]),
        DefectRegion::dual([v2]),
    ];
    let mut state = DefectState::from_parts(s.clone(), 2, gens, defects, seed)?;
    let mut moves = 0;
    for _ in 0..braids {
        for &f in &ring {
            state.move_defect(0, &[f])?;
            moves += 1;
        }
    }

    let odd = braids % 2 == 1;
    let times = |a: &PauliProduct, b: &PauliProduct, apply: bool| {
        let mut out = a.clone();
        if apply {
            out.mul_assign_unchecked(b);
        }
        out
    };
    let check = |name: &str, image: PauliProduct, original: PauliProduct, r: usize, p: Pauli| LogicalCheck {
        name: name.to_string(),
        holds: state.ideal_sign(&with_ref(image, r, p)) == Some(false),
        unchanged: state.ideal_sign(&with_ref(original, r, p)) == Some(false),
    };
    let checks = vec![
        check("Z(∂D) -> Z(∂D)", z_d.clone(), z_d.clone(), 0, Pauli::Z),
        check("Z(c1) -> Z(c1)Z(∂D)", times(&z_c, &z_d, odd), z_c.clone(), 1, Pauli::Z),
        check("X(∂D̄) -> X(∂D̄)", x_dbar.clone(), x_dbar.clone(), 1, Pauli::X),
        check("X(c̄1) -> X(c̄1)X(∂D̄)", times(&x_cbar, &x_dbar, odd), x_cbar.clone(), 0, Pauli::X),
    ];
    Ok(BraidRun { braids, moves, measurements: state.history().len(), checks })
}

/// Runs zero, one and two braids on an n×n patch.
pub fn braid_cnot_verify(n: usize) -> Result<BraidReport> {
    let runs = (0..3).map(|b| braid_cnot_run(n, b, 0x5eed + b as u64)).collect::<Result<Vec<_>>>()?;
    Ok(BraidReport { lattice: n, runs })
}
