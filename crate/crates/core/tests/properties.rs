mod common;

use common::Dense;
use num_complex::Complex64;
use proptest::prelude::*;
use topoqec::chain::{CellComplex, Chain, CubicComplex, Surface, SurfaceKind};
use topoqec::gf2::{solve_linear, BitMatrix, BitVec, SpanBasis};
use topoqec::pauli::{Pauli, PauliKind, PauliProduct};
use topoqec::stabilizer::Gate;
use topoqec::surface::{CodeKind, SurfaceCodeLayout};

fn pauli(n: usize) -> impl Strategy<Value = PauliProduct> {
    (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(|(ps, phase)| {
        let mut p = PauliProduct::identity(ps.len());
        for (q, &c) in ps.iter().enumerate() {
            p.set(q, Pauli::from_bits(c & 1 == 1, c & 2 == 2));
        }
        p.set_phase(phase);
        p
    })
}

fn bitvec(n: usize) -> impl Strategy<Value = BitVec> {
    prop::collection::vec(any::<bool>(), n).prop_map(|b| BitVec::from_bools(&b))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(bitvec(cols), rows).prop_map(move |r| BitMatrix::from_rows(cols, r))
}

/// Dense matrix of a Pauli product, columns P|i⟩.
fn dense_pauli(p: &PauliProduct) -> Vec<Vec<Complex64>> {
    let n = p.n();
    (0..1usize << n)
        .map(|i| {
            let mut col = vec![Complex64::new(0.0, 0.0); 1 << n];
            let mut f = Complex64::i().powu(p.phase() as u32);
            let mut j = i;
            for q in 0..n {
                let bit = i >> q & 1 == 1;
                match p.get(q) {
                    Pauli::I => {}
                    Pauli::X => j ^= 1 << q,
                    Pauli::Z => f *= if bit { -1.0 } else { 1.0 },
                    Pauli::Y => {
                        j ^= 1 << q;
                        f *= Complex64::new(0.0, if bit { -1.0 } else { 1.0 });
                    }
                }
            }
            col[j] = f;
            col
        })
        .collect()
}

fn apply_cols(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (i, col) in m.iter().enumerate() {
        for (o, c) in out.iter_mut().zip(col) {
            *o += c * v[i];
        }
    }
    out
}

fn close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-10)
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    (0..8u8, 0..n, 1..n).prop_map(move |(k, a, off)| {
        let b = (a + off) % n;
        match k {
            0 => Gate::H(a),
            1 => Gate::S(a),
            2 => Gate::Sdg(a),
            3 => Gate::X(a),
            4 => Gate::Y(a),
            5 => Gate::Z(a),
            6 => Gate::Cnot(a, b),
            _ => Gate::Cz(a, b),
        }
    })
}

fn conj(p: &mut PauliProduct, g: &Gate) {
    match *g {
        Gate::H(q) => p.conj_h(q),
        Gate::S(q) => p.conj_s(q),
        Gate::Sdg(q) => p.conj_sdg(q),
        Gate::X(q) => p.conj_x(q),
        Gate::Y(q) => p.conj_y(q),
        Gate::Z(q) => p.conj_z(q),
        Gate::Cnot(a, b) => p.conj_cnot(a, b),
        Gate::Cz(a, b) => p.conj_cz(a, b),
    }
}

proptest! {
    #[test]
    fn product_matches_dense_matrices(p in pauli(3), q in pauli(3), i in 0usize..8) {
        let pq = p.multiply(&q).unwrap();
        let mut e = vec![Complex64::new(0.0, 0.0); 8];
        e[i] = Complex64::new(1.0, 0.0);
        let lhs = apply_cols(&dense_pauli(&pq), &e);
        let rhs = apply_cols(&dense_pauli(&p), &apply_cols(&dense_pauli(&q), &e));
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn commutation_sign(p in pauli(5), q in pauli(5)) {
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        prop_assert!(pq.eq_up_to_phase(&qp));
        let sign_flip = (pq.phase() + 4 - qp.phase()) % 4 == 2;
        prop_assert_eq!(sign_flip, !p.commutes(&q).unwrap());
        prop_assert_eq!(p.commutes(&q).unwrap(), q.commutes(&p).unwrap());
    }

    #[test]
    fn product_is_associative(p in pauli(4), q in pauli(4), r in pauli(4)) {
        let a = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let b = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn text_round_trip(p in pauli(7)) {
        let s = p.to_string();
        prop_assert_eq!(s.parse::<PauliProduct>().unwrap(), p);
    }

    #[test]
    fn conjugation_matches_dense(p in pauli(3), g in gate(3), i in 0usize..8) {
        // U P U† |ψ⟩ = U P |φ⟩ with |φ⟩ = U†|ψ⟩; compare on U|e_i⟩.
        let mut e = Dense::zero(3);
        e.amp = vec![Complex64::new(0.0, 0.0); 8];
        e.amp[i] = Complex64::new(1.0, 0.0);
        let mut ue = e.clone();
        ue.apply(&g);
        let mut c = p.clone();
        conj(&mut c, &g);
        let lhs = apply_cols(&dense_pauli(&c), &ue.amp);
        let mut rhs = Dense { n: 3, amp: apply_cols(&dense_pauli(&p), &e.amp) };
        rhs.apply(&g);
        prop_assert!(close(&lhs, &rhs.amp));
    }

    #[test]
    fn conjugation_preserves_commutation(p in pauli(4), q in pauli(4), gs in prop::collection::vec(gate(4), 0..20)) {
        let before = p.commutes(&q).unwrap();
        let (mut a, mut b) = (p.clone(), q.clone());
        for g in &gs {
            conj(&mut a, g);
            conj(&mut b, g);
        }
        prop_assert_eq!(a.commutes(&b).unwrap(), before);
        prop_assert_eq!(a.weight() == 0, p.weight() == 0);
    }

    #[test]
    fn rank_nullity(m in (1usize..9, 1usize..14).prop_flat_map(|(r, c)| matrix(r, c))) {
        let ker = m.kernel();
        prop_assert_eq!(m.rank() + ker.len(), m.num_cols());
        for v in &ker {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        prop_assert_eq!(SpanBasis::from_vectors(m.num_cols(), &ker, false).rank(), ker.len());
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn solve_linear_is_consistent(m in matrix(6, 10), x in bitvec(10)) {
        let rhs = m.mul_vec(&x);
        let sol = solve_linear(m.rows(), &rhs).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&sol), rhs);
    }

    #[test]
    fn span_membership(vs in prop::collection::vec(bitvec(12), 1..8), pick in prop::collection::vec(any::<bool>(), 8)) {
        let span = SpanBasis::from_vectors(12, &vs, true);
        let mut sum = BitVec::zeros(12);
        for (v, &b) in vs.iter().zip(&pick) {
            if b {
                sum ^= v;
            }
        }
        prop_assert!(span.contains(&sum));
        let coeffs = span.solve(&sum).unwrap();
        let mut back = BitVec::zeros(12);
        for i in coeffs.iter_ones() {
            back ^= &vs[i];
        }
        prop_assert_eq!(back, sum);
    }

    #[test]
    fn face_boundaries_are_trivial_cycles(n in 2usize..6, planar in any::<bool>(), seed in any::<u64>()) {
        let s = if planar { Surface::planar(n.max(2)).unwrap() } else { Surface::torus(n).unwrap() };
        let faces: Vec<usize> = (0..s.num_faces()).filter(|f| (seed >> (f % 64)) & 1 == 1).collect();
        let c2 = Chain::from_cells(2, false, s.num_faces(), faces);
        let c1 = s.boundary(&c2).unwrap();
        prop_assert!(s.boundary(&c1).unwrap().is_zero());
        prop_assert!(s.classify_cycle(&c1).unwrap().is_trivial());
        let back = s.solve_boundary(&c1).unwrap().unwrap();
        prop_assert_eq!(s.boundary(&back).unwrap(), c1);
        let verts: Vec<usize> = (0..s.num_vertices()).filter(|v| (seed >> ((v + 7) % 64)) & 1 == 1).collect();
        let d2 = Chain::from_cells(2, true, s.num_vertices(), verts);
        let d1 = s.boundary(&d2).unwrap();
        prop_assert!(s.boundary(&d1).unwrap().is_zero());
        prop_assert!(s.classify_cycle(&d1).unwrap().is_trivial());
    }

    #[test]
    fn cubic_boundary_squares_to_zero(n in 2usize..5, layers in 1usize..5, seed in any::<u64>()) {
        let cx = CubicComplex::new(Surface::torus(n).unwrap(), layers).unwrap();
        for dim in 2..=3u8 {
            let len = cx.cell_count(dim);
            let cells: Vec<usize> = (0..len).filter(|i| (seed.rotate_left(*i as u32 % 64)) & 1 == 1).collect();
            let c = Chain::from_cells(dim, false, len, cells);
            let b = cx.boundary(&c).unwrap();
            prop_assert!(cx.boundary(&b).unwrap().is_zero());
        }
    }

    #[test]
    fn stabilizers_commute_with_logicals(n in 2usize..6, planar in any::<bool>()) {
        let kind = if planar { CodeKind::Planar } else { CodeKind::Toric };
        let code = SurfaceCodeLayout::new(kind, n.max(2)).unwrap();
        let gens = code.generators();
        for a in &gens {
            for b in &gens {
                prop_assert!(a.commutes(b).unwrap());
            }
        }
        for (lx, lz) in code.logical_operators() {
            prop_assert!(!lx.commutes(&lz).unwrap());
            for g in &gens {
                prop_assert!(lx.commutes(g).unwrap() && lz.commutes(g).unwrap());
            }
        }
        for kind in [PauliKind::X, PauliKind::Z] {
            let cs = code.checks(kind);
            for s in cs.stabilizers() {
                prop_assert!(cs.syndrome(s).is_zero());
                prop_assert!(cs.class_of(s).is_trivial());
            }
        }
    }
}

#[test]
fn euler_characteristics() {
    for n in 2..7 {
        assert_eq!(Surface::torus(n).unwrap().euler_characteristic(), 0);
        assert_eq!(Surface::torus(n).unwrap().genus(), Some(1));
        assert_eq!(Surface::build(SurfaceKind::Torus, n).unwrap().dual().euler_characteristic(), 0);
    }
    for n in 3..8 {
        assert_eq!(Surface::polygon_sphere(n).unwrap().euler_characteristic(), 2);
    }
}

#[test]
fn wrapping_cycles_are_nontrivial_and_distinct() {
    let s = Surface::torus(4).unwrap();
    let classes: Vec<_> =
        s.primal_cycles().iter().map(|c| s.classify_cycle(&Chain::new(1, false, c.clone())).unwrap()).collect();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().all(|c| !c.is_trivial()));
    assert_ne!(classes[0], classes[1]);
    for (i, p) in s.primal_cycles().iter().enumerate() {
        for (j, d) in s.dual_cycles().iter().enumerate() {
            assert_eq!(p.dot(d), i == j);
        }
    }
}
