//! Z₂ chain complexes on 2D cell complexes and the 3D space-time complex.
//!
//! Cells of the square-lattice surfaces live on a doubled grid: on the torus
//! and on the smooth patch vertices sit at (even, even), edges at mixed
//! parity and faces at (odd, odd). The planar code uses the rotated
//! convention of its (2n−1)×(2n−1) grid: edges at i+j even, vertices at
//! (even, odd), faces at (odd, even). Within each dimension cells are indexed
//! row-major over the grid.
//!
//! Planar rough boundaries are realized as edges with a single endpoint, so
//! the boundary map already acts on chains relative to the rough boundary.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, SpanBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SurfaceKind {
    Torus,
    Planar,
    PolygonSphere,
    /// Rectangular patch with smooth boundaries on all four sides.
    Patch,
}

/// A chain of cells of one dimension. Dual chains are indexed by the primal
/// cells they are identified with: a dual 0-chain lives on faces, a dual
/// 1-chain on edges and a dual 2-chain on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    dim: u8,
    dual: bool,
    bits: BitVec,
}

impl Chain {
    pub fn new(dim: u8, dual: bool, bits: BitVec) -> Self {
        Chain { dim, dual, bits }
    }

    pub fn zero(dim: u8, dual: bool, len: usize) -> Self {
        Chain { dim, dual, bits: BitVec::zeros(len) }
    }

    pub fn from_cells<I: IntoIterator<Item = usize>>(dim: u8, dual: bool, len: usize, cells: I) -> Self {
        Chain { dim, dual, bits: BitVec::from_indices(len, cells) }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn cells(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Chain) -> bool {
        self.bits.dot(&other.bits)
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        if self.dim != other.dim || self.dual != other.dual {
            return Err(Error::InvalidChain("adding chains of different dimension".into()));
        }
        if self.bits.len() != other.bits.len() {
            return Err(Error::DimensionMismatch { expected: self.bits.len(), found: other.bits.len() });
        }
        Ok(Chain { dim: self.dim, dual: self.dual, bits: &self.bits ^ &other.bits })
    }
}

/// Anything with GF(2) boundary maps.
pub trait CellComplex {
    /// Number of cells of dimension `dim` in the primal complex.
    fn cell_count(&self, dim: u8) -> usize;
    fn boundary(&self, c: &Chain) -> Result<Chain>;
}

/// Homology class of a 1-cycle as bits against the reference cycles; bit i
/// set means the i-th nontrivial generator is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct HomologyClass(pub u32);

impl HomologyClass {
    pub const TRIVIAL: HomologyClass = HomologyClass(0);

    pub fn is_trivial(&self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("trivial");
        }
        let mut first = true;
        for i in 0..32 {
            if self.0 >> i & 1 == 1 {
                if !first {
                    f.write_str("·")?;
                }
                write!(f, "h{}", i + 1)?;
                first = false;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Vertex,
    Edge,
    Face,
}

#[derive(Debug)]
pub struct Surface {
    kind: SurfaceKind,
    size: usize,
    is_dual: bool,
    edge_vertices: Vec<Vec<usize>>,
    edge_faces: Vec<Vec<usize>>,
    face_edges: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    vertex_coords: Vec<(i64, i64)>,
    edge_coords: Vec<(i64, i64)>,
    face_coords: Vec<(i64, i64)>,
    genus: Option<usize>,
    primal_cycles: Vec<BitVec>,
    dual_cycles: Vec<BitVec>,
    face_span: OnceLock<SpanBasis>,
    star_span: OnceLock<SpanBasis>,
}

impl Clone for Surface {
    fn clone(&self) -> Self {
        Surface {
            kind: self.kind,
            size: self.size,
            is_dual: self.is_dual,
            edge_vertices: self.edge_vertices.clone(),
            edge_faces: self.edge_faces.clone(),
            face_edges: self.face_edges.clone(),
            vertex_edges: self.vertex_edges.clone(),
            vertex_coords: self.vertex_coords.clone(),
            edge_coords: self.edge_coords.clone(),
            face_coords: self.face_coords.clone(),
            genus: self.genus,
            primal_cycles: self.primal_cycles.clone(),
            dual_cycles: self.dual_cycles.clone(),
            face_span: OnceLock::new(),
            star_span: OnceLock::new(),
        }
    }
}

impl PartialEq for Surface {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
            && self.size == o.size
            && self.is_dual == o.is_dual
            && self.edge_vertices == o.edge_vertices
            && self.edge_faces == o.edge_faces
            && self.face_edges == o.face_edges
            && self.vertex_edges == o.vertex_edges
            && self.vertex_coords == o.vertex_coords
            && self.edge_coords == o.edge_coords
            && self.face_coords == o.face_coords
            && self.genus == o.genus
            && self.primal_cycles == o.primal_cycles
            && self.dual_cycles == o.dual_cycles
    }
}

impl Eq for Surface {}

fn invert(lists: &[Vec<usize>], count: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); count];
    for (i, l) in lists.iter().enumerate() {
        for &j in l {
            out[j].push(i);
        }
    }
    out
}

/// Builds a square-lattice surface from a doubled grid and a cell classifier.
fn from_grid(
    kind: SurfaceKind,
    size: usize,
    rows: i64,
    cols: i64,
    wrap: bool,
    classify: impl Fn(i64, i64) -> Cell,
) -> Surface {
    let mut index = vec![usize::MAX; (rows * cols) as usize];
    let mut coords: [Vec<(i64, i64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..rows {
        for j in 0..cols {
            let slot = match classify(i, j) {
                Cell::Vertex => 0,
                Cell::Edge => 1,
                Cell::Face => 2,
            };
            index[(i * cols + j) as usize] = coords[slot].len();
            coords[slot].push((i, j));
        }
    }
    let neighbor = |i: i64, j: i64| -> Option<(i64, i64)> {
        if wrap {
            Some((i.rem_euclid(rows), j.rem_euclid(cols)))
        } else if (0..rows).contains(&i) && (0..cols).contains(&j) {
            Some((i, j))
        } else {
            None
        }
    };
    let mut edge_vertices = Vec::with_capacity(coords[1].len());
    let mut edge_faces = Vec::with_capacity(coords[1].len());
    for &(i, j) in &coords[1] {
        let mut vs = Vec::new();
        let mut fs = Vec::new();
        for (di, dj) in [(-1, 0), (0, -1), (0, 1), (1, 0)] {
            if let Some((a, b)) = neighbor(i + di, j + dj) {
                let k = index[(a * cols + b) as usize];
                match classify(a, b) {
                    Cell::Vertex => vs.push(k),
                    Cell::Face => fs.push(k),
                    Cell::Edge => {}
                }
            }
        }
        vs.sort_unstable();
        fs.sort_unstable();
        edge_vertices.push(vs);
        edge_faces.push(fs);
    }
    let [vertex_coords, edge_coords, face_coords] = coords;
    let vertex_edges = invert(&edge_vertices, vertex_coords.len());
    let face_edges = invert(&edge_faces, face_coords.len());
    Surface {
        kind,
        size,
        is_dual: false,
        edge_vertices,
        edge_faces,
        face_edges,
        vertex_edges,
        vertex_coords,
        edge_coords,
        face_coords,
        genus: None,
        primal_cycles: Vec::new(),
        dual_cycles: Vec::new(),
        face_span: OnceLock::new(),
        star_span: OnceLock::new(),
    }
}

impl Surface {
    pub fn build(kind: SurfaceKind, n: usize) -> Result<Surface> {
        match kind {
            SurfaceKind::Torus => Surface::torus(n),
            SurfaceKind::Planar => Surface::planar(n),
            SurfaceKind::PolygonSphere => Surface::polygon_sphere(n),
            SurfaceKind::Patch => Surface::patch(n, n),
        }
    }

    /// n×n periodic square lattice.
    pub fn torus(n: usize) -> Result<Surface> {
        if n < 2 {
            return Err(Error::SizeTooSmall(n));
        }
        let m = 2 * n as i64;
        let mut s = from_grid(SurfaceKind::Torus, n, m, m, true, |i, j| match (i % 2, j % 2) {
            (0, 0) => Cell::Vertex,
            (1, 1) => Cell::Face,
            _ => Cell::Edge,
        });
        s.genus = Some(1);
        let pick = |f: &dyn Fn(i64, i64) -> bool| {
            BitVec::from_indices(
                s.edge_coords.len(),
                s.edge_coords.iter().enumerate().filter(|(_, &(i, j))| f(i, j)).map(|(k, _)| k),
            )
        };
        let h1 = pick(&|i, _| i == 0);
        let h2 = pick(&|_, j| j == 0);
        let d1 = pick(&|i, j| j == 1 && i % 2 == 0);
        let d2 = pick(&|i, j| i == 1 && j % 2 == 0);
        s.primal_cycles = vec![h1, h2];
        s.dual_cycles = vec![d1, d2];
        Ok(s)
    }

    /// Planar code lattice with rough left/right and smooth top/bottom
    /// boundaries: 2n²−2n+1 edges and n²−n vertices and faces.
    pub fn planar(n: usize) -> Result<Surface> {
        if n < 2 {
            return Err(Error::SizeTooSmall(n));
        }
        let m = 2 * n as i64 - 1;
        let mut s = from_grid(SurfaceKind::Planar, n, m, m, false, |i, j| match (i % 2, j % 2) {
            (0, 1) => Cell::Vertex,
            (1, 0) => Cell::Face,
            _ => Cell::Edge,
        });
        let pick = |f: &dyn Fn(i64, i64) -> bool| {
            BitVec::from_indices(
                s.edge_coords.len(),
                s.edge_coords.iter().enumerate().filter(|(_, &(i, j))| f(i, j)).map(|(k, _)| k),
            )
        };
        let row = pick(&|i, _| i == 0);
        let col = pick(&|_, j| j == 0);
        s.primal_cycles = vec![row];
        s.dual_cycles = vec![col];
        Ok(s)
    }

    /// Regular n-gon on the sphere: n vertices, n edges, two faces.
    pub fn polygon_sphere(n: usize) -> Result<Surface> {
        if n < 2 {
            return Err(Error::SizeTooSmall(n));
        }
        let edge_vertices: Vec<Vec<usize>> = (0..n)
            .map(|l| {
                let mut v = vec![l, (l + 1) % n];
                v.sort_unstable();
                v
            })
            .collect();
        let face_edges = vec![(0..n).collect::<Vec<_>>(), (0..n).collect()];
        let edge_faces = invert(&face_edges, n);
        let vertex_edges = invert(&edge_vertices, n);
        Ok(Surface {
            kind: SurfaceKind::PolygonSphere,
            size: n,
            is_dual: false,
            edge_vertices,
            edge_faces,
            face_edges,
            vertex_edges,
            vertex_coords: (0..n as i64).map(|k| (0, 2 * k)).collect(),
            edge_coords: (0..n as i64).map(|k| (0, 2 * k + 1)).collect(),
            face_coords: vec![(-1, 0), (1, 0)],
            genus: Some(0),
            primal_cycles: Vec::new(),
            dual_cycles: Vec::new(),
            face_span: OnceLock::new(),
            star_span: OnceLock::new(),
        })
    }

    /// `width`×`height` faces with smooth boundaries on every side.
    pub fn patch(width: usize, height: usize) -> Result<Surface> {
        if width < 1 || height < 1 {
            return Err(Error::SizeTooSmall(width.min(height)));
        }
        Ok(from_grid(SurfaceKind::Patch, width, 2 * height as i64 + 1, 2 * width as i64 + 1, false, |i, j| {
            match (i % 2, j % 2) {
                (0, 0) => Cell::Vertex,
                (1, 1) => Cell::Face,
                _ => Cell::Edge,
            }
        }))
    }

    /// Exchanges vertices and faces. Applying it twice returns the original.
    pub fn dual(&self) -> Surface {
        Surface {
            kind: self.kind,
            size: self.size,
            is_dual: !self.is_dual,
            edge_vertices: self.edge_faces.clone(),
            edge_faces: self.edge_vertices.clone(),
            face_edges: self.vertex_edges.clone(),
            vertex_edges: self.face_edges.clone(),
            vertex_coords: self.face_coords.clone(),
            edge_coords: self.edge_coords.clone(),
            face_coords: self.vertex_coords.clone(),
            genus: self.genus,
            primal_cycles: self.dual_cycles.clone(),
            dual_cycles: self.primal_cycles.clone(),
            face_span: OnceLock::new(),
            star_span: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_dual(&self) -> bool {
        self.is_dual
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_vertices.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_edges.len()
    }

    pub fn genus(&self) -> Option<usize> {
        self.genus
    }

    /// |V| − |E| + |F|.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Endpoints of an edge; one endpoint for edges ending on a rough boundary.
    pub fn edge_vertices(&self, e: usize) -> &[usize] {
        &self.edge_vertices[e]
    }

    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    pub fn face_edges(&self, f: usize) -> &[usize] {
        &self.face_edges[f]
    }

    /// δv: the edges incident to a vertex.
    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn vertex_coord(&self, v: usize) -> (i64, i64) {
        self.vertex_coords[v]
    }

    pub fn edge_coord(&self, e: usize) -> (i64, i64) {
        self.edge_coords[e]
    }

    pub fn face_coord(&self, f: usize) -> (i64, i64) {
        self.face_coords[f]
    }

    pub fn vertex_at(&self, c: (i64, i64)) -> Option<usize> {
        self.vertex_coords.iter().position(|&x| x == c)
    }

    pub fn edge_at(&self, c: (i64, i64)) -> Option<usize> {
        self.edge_coords.iter().position(|&x| x == c)
    }

    pub fn face_at(&self, c: (i64, i64)) -> Option<usize> {
        self.face_coords.iter().position(|&x| x == c)
    }

    /// Edges with a single endpoint (rough boundary).
    pub fn rough_edges(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.edge_vertices[e].len() == 1).collect()
    }

    /// Edges on a single face (smooth boundary).
    pub fn smooth_edges(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.edge_faces[e].len() == 1).collect()
    }

    /// Nontrivial primal 1-cycles generating the first homology.
    pub fn primal_cycles(&self) -> &[BitVec] {
        &self.primal_cycles
    }

    /// Dual 1-cycles with `primal_cycles[i] · dual_cycles[j] = δ_ij`.
    pub fn dual_cycles(&self) -> &[BitVec] {
        &self.dual_cycles
    }

    /// M(∂₁) (|V|×|E|) for dim 1 and M(∂₂) (|E|×|F|) for dim 2.
    pub fn boundary_matrix(&self, dim: u8) -> Result<BitMatrix> {
        let (rows, lists) = match dim {
            1 => (self.num_vertices(), &self.edge_vertices),
            2 => (self.num_edges(), &self.face_edges),
            _ => return Err(Error::InvalidChain(format!("no boundary map of dimension {dim}"))),
        };
        let mut m = BitMatrix::zeros(rows, lists.len());
        for (c, l) in lists.iter().enumerate() {
            for &r in l {
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    /// Matrices of the dual complex: M(∂̄₁) (|F|×|E|) and M(∂̄₂) (|E|×|V|).
    pub fn dual_boundary_matrix(&self, dim: u8) -> Result<BitMatrix> {
        self.dual().boundary_matrix(dim)
    }

    fn face_span(&self) -> &SpanBasis {
        self.face_span.get_or_init(|| {
            let cols: Vec<BitVec> =
                self.face_edges.iter().map(|l| BitVec::from_indices(self.num_edges(), l.iter().copied())).collect();
            SpanBasis::from_vectors(self.num_edges(), &cols, true)
        })
    }

    fn star_span(&self) -> &SpanBasis {
        self.star_span.get_or_init(|| {
            let cols: Vec<BitVec> =
                self.vertex_edges.iter().map(|l| BitVec::from_indices(self.num_edges(), l.iter().copied())).collect();
            SpanBasis::from_vectors(self.num_edges(), &cols, true)
        })
    }

    /// Solves c = ∂c₂ (primal) or c = ∂̄c̄₂ (dual) for a 1-chain.
    pub fn solve_boundary(&self, c: &Chain) -> Result<Option<Chain>> {
        self.check_chain(c, 1)?;
        Ok(if c.dual {
            self.star_span().solve(&c.bits).map(|b| Chain::new(2, true, b))
        } else {
            self.face_span().solve(&c.bits).map(|b| Chain::new(2, false, b))
        })
    }

    fn check_chain(&self, c: &Chain, dim: u8) -> Result<()> {
        if c.dim != dim {
            return Err(Error::InvalidChain(format!("expected dimension {dim}, found {}", c.dim)));
        }
        let want = self.cell_len(dim, c.dual);
        if c.bits.len() != want {
            return Err(Error::DimensionMismatch { expected: want, found: c.bits.len() });
        }
        Ok(())
    }

    fn cell_len(&self, dim: u8, dual: bool) -> usize {
        match (dim, dual) {
            (0, false) | (2, true) => self.num_vertices(),
            (1, _) => self.num_edges(),
            (2, false) | (0, true) => self.num_faces(),
            _ => 0,
        }
    }

    /// Homology class of a (primal or dual) 1-cycle.
    pub fn classify_cycle(&self, c: &Chain) -> Result<HomologyClass> {
        self.check_chain(c, 1)?;
        if !self.boundary(c)?.is_zero() {
            return Err(Error::InvalidChain("not a cycle".into()));
        }
        if self.solve_boundary(c)?.is_some() {
            return Ok(HomologyClass::TRIVIAL);
        }
        let refs = if c.dual { &self.primal_cycles } else { &self.dual_cycles };
        let class = self.class_bits(&c.bits, refs);
        debug_assert!(!class.is_trivial(), "nontrivial cycle detected by no reference cycle");
        Ok(class)
    }

    /// Class bits by inner products only, assuming `bits` is a cycle.
    pub fn class_bits(&self, bits: &BitVec, refs: &[BitVec]) -> HomologyClass {
        HomologyClass(refs.iter().enumerate().fold(0u32, |acc, (i, r)| acc | ((bits.dot(r) as u32) << i)))
    }

    /// Adjacency dump: one line per cell with its boundary.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "surface {:?} n={} V={} E={} F={}\n",
            self.kind,
            self.size,
            self.num_vertices(),
            self.num_edges(),
            self.num_faces()
        ));
        for (e, vs) in self.edge_vertices.iter().enumerate() {
            out.push_str(&format!("edge {e} {:?} vertices {:?}\n", self.edge_coords[e], vs));
        }
        for (f, es) in self.face_edges.iter().enumerate() {
            out.push_str(&format!("face {f} {:?} edges {:?}\n", self.face_coords[f], es));
        }
        out
    }
}

impl CellComplex for Surface {
    fn cell_count(&self, dim: u8) -> usize {
        self.cell_len(dim, false)
    }

    fn boundary(&self, c: &Chain) -> Result<Chain> {
        if c.dim == 0 || c.dim > 2 {
            return Err(Error::InvalidChain(format!("no boundary of a {}-chain on a surface", c.dim)));
        }
        self.check_chain(c, c.dim)?;
        let (lists, len) = match (c.dim, c.dual) {
            (1, false) => (&self.edge_vertices, self.num_vertices()),
            (2, false) => (&self.face_edges, self.num_edges()),
            (1, true) => (&self.edge_faces, self.num_faces()),
            _ => (&self.vertex_edges, self.num_edges()),
        };
        let mut out = BitVec::zeros(len);
        for i in c.bits.iter_ones() {
            for &j in &lists[i] {
                out.flip(j);
            }
        }
        Ok(Chain::new(c.dim - 1, c.dual, out))
    }
}

/// Product of a surface with a time interval of `layers` vertex layers:
/// the complex on which space-time syndromes and errors live.
///
/// 0-cells (v, t); 1-cells spatial (e, t) and temporal (v, t)→(v, t+1);
/// 2-cells spatial (f, t) and temporal (e, t); 3-cells (f, t).
#[derive(Clone, Debug)]
pub struct CubicComplex {
    base: Surface,
    layers: usize,
}

impl CubicComplex {
    pub fn new(base: Surface, layers: usize) -> Result<Self> {
        if layers < 1 {
            return Err(Error::SizeTooSmall(layers));
        }
        Ok(CubicComplex { base, layers })
    }

    pub fn base(&self) -> &Surface {
        &self.base
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn vertex(&self, v: usize, t: usize) -> usize {
        t * self.base.num_vertices() + v
    }

    pub fn spatial_edge(&self, e: usize, t: usize) -> usize {
        t * self.base.num_edges() + e
    }

    pub fn temporal_edge(&self, v: usize, t: usize) -> usize {
        self.layers * self.base.num_edges() + t * self.base.num_vertices() + v
    }

    pub fn spatial_face(&self, f: usize, t: usize) -> usize {
        t * self.base.num_faces() + f
    }

    pub fn temporal_face(&self, e: usize, t: usize) -> usize {
        self.layers * self.base.num_faces() + t * self.base.num_edges() + e
    }

    pub fn cube(&self, f: usize, t: usize) -> usize {
        t * self.base.num_faces() + f
    }

    fn boundary_cells(&self, dim: u8, cell: usize) -> Vec<usize> {
        let (v, e, f) = (self.base.num_vertices(), self.base.num_edges(), self.base.num_faces());
        let l = self.layers;
        match dim {
            1 if cell < l * e => {
                let (t, k) = (cell / e, cell % e);
                self.base.edge_vertices(k).iter().map(|&x| self.vertex(x, t)).collect()
            }
            1 => {
                let r = cell - l * e;
                let (t, k) = (r / v, r % v);
                vec![self.vertex(k, t), self.vertex(k, t + 1)]
            }
            2 if cell < l * f => {
                let (t, k) = (cell / f, cell % f);
                self.base.face_edges(k).iter().map(|&x| self.spatial_edge(x, t)).collect()
            }
            2 => {
                let r = cell - l * f;
                let (t, k) = (r / e, r % e);
                let mut out = vec![self.spatial_edge(k, t), self.spatial_edge(k, t + 1)];
                out.extend(self.base.edge_vertices(k).iter().map(|&x| self.temporal_edge(x, t)));
                out
            }
            _ => {
                let (t, k) = (cell / f, cell % f);
                let mut out = vec![self.spatial_face(k, t), self.spatial_face(k, t + 1)];
                out.extend(self.base.face_edges(k).iter().map(|&x| self.temporal_face(x, t)));
                out
            }
        }
    }
}

impl CellComplex for CubicComplex {
    fn cell_count(&self, dim: u8) -> usize {
        let (v, e, f) = (self.base.num_vertices(), self.base.num_edges(), self.base.num_faces());
        let l = self.layers;
        match dim {
            0 => l * v,
            1 => l * e + (l - 1) * v,
            2 => l * f + (l - 1) * e,
            3 => (l - 1) * f,
            _ => 0,
        }
    }

    fn boundary(&self, c: &Chain) -> Result<Chain> {
        if c.dim == 0 || c.dim > 3 || c.dual {
            return Err(Error::InvalidChain(format!("no boundary of a {}-chain here", c.dim)));
        }
        let want = self.cell_count(c.dim);
        if c.bits.len() != want {
            return Err(Error::DimensionMismatch { expected: want, found: c.bits.len() });
        }
        let mut out = BitVec::zeros(self.cell_count(c.dim - 1));
        for i in c.bits.iter_ones() {
            for j in self.boundary_cells(c.dim, i) {
                out.flip(j);
            }
        }
        Ok(Chain::new(c.dim - 1, false, out))
    }
}
