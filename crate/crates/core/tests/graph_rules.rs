mod common;

use common::{chain, pauli_byproduct, rule_target};
use topoqec::pauli::{Pauli, PauliProduct};
use topoqec::stabilizer::{Gate, Graph, StabilizerTableau};

fn measure(t: &mut StabilizerTableau, q: usize, p: Pauli, outcome: bool) -> bool {
    let op = PauliProduct::single(t.n(), q, p);
    let rec = t.measure_with(&op, || outcome, |_| true).unwrap();
    rec.outcome
}

fn path_without(n: usize, removed: &[usize], extra: &[(usize, usize)]) -> Graph {
    let mut edges: Vec<(usize, usize)> =
        (1..n).map(|i| (i - 1, i)).filter(|(a, b)| !removed.contains(a) && !removed.contains(b)).collect();
    edges.extend_from_slice(extra);
    Graph::new(n, &edges).unwrap()
}

fn explore(
    n: usize,
    ms: &[(usize, Pauli)],
    outcomes: u32,
    fix: &[Gate],
) -> (StabilizerTableau, Vec<(usize, Pauli, bool)>) {
    let mut t = chain(n);
    let mut got = Vec::new();
    for (k, &(q, p)) in ms.iter().enumerate() {
        let m = measure(&mut t, q, p, outcomes >> k & 1 == 1);
        got.push((q, p, m));
    }
    for g in fix {
        t.apply(g).unwrap();
    }
    assert!(t.check_invariants());
    (t, got)
}

#[test]
fn z_measurement_cuts_the_vertex() {
    for n in 2..=12usize {
        for i in 0..n {
            for o in 0..2 {
                let nb: Vec<usize> = [i.wrapping_sub(1), i + 1].into_iter().filter(|&v| v < n).collect();
                // Outcome 1 is corrected by Z on each neighbor.
                let fix: Vec<Gate> = if o == 1 { nb.iter().map(|&v| Gate::Z(v)).collect() } else { vec![] };
                let (t, got) = explore(n, &[(i, Pauli::Z)], o, &fix);
                assert_eq!(got[0].2, o == 1);
                let target = rule_target(n, &path_without(n, &[i], &[]), &got);
                assert_eq!(t.canonical_form(), target, "n={n} i={i} o={o}");
            }
        }
    }
}

#[test]
fn x_measurement_leaves_a_leaf() {
    for n in 3..=12 {
        for i in 1..n - 1 {
            for o in 0..2 {
                // H on i+1: i+1 hangs off i−1, which takes over i+2.
                let (t, got) = explore(n, &[(i, Pauli::X)], o, &[Gate::H(i + 1)]);
                let mut extra = vec![(i - 1, i + 1)];
                if i + 2 < n {
                    extra.push((i - 1, i + 2));
                }
                let g = path_without(n, &[i, i + 1], &extra);
                let target = rule_target(n, &g, &got);
                let nb: Vec<usize> = (i.saturating_sub(1)..(i + 3).min(n)).filter(|&v| v != i).collect();
                assert!(pauli_byproduct(&t, &target, &nb).is_some(), "n={n} i={i} o={o}");
                // Mirror image with H on i−1.
                let (t, got) = explore(n, &[(i, Pauli::X)], o, &[Gate::H(i - 1)]);
                let mut extra = vec![(i + 1, i - 1)];
                if i >= 2 {
                    extra.push((i + 1, i - 2));
                }
                let g = path_without(n, &[i, i - 1], &extra);
                let target = rule_target(n, &g, &got);
                let nb: Vec<usize> = (i.saturating_sub(2)..(i + 2).min(n)).filter(|&v| v != i).collect();
                assert!(pauli_byproduct(&t, &target, &nb).is_some(), "mirror n={n} i={i} o={o}");
            }
        }
    }
}

#[test]
fn y_measurement_joins_neighbors() {
    for n in 3..=12 {
        for i in 1..n - 1 {
            for o in 0..2 {
                // S† is exact on the +1 branch; the −1 branch also needs Z on both.
                let mut fix = vec![Gate::Sdg(i - 1), Gate::Sdg(i + 1)];
                if o == 1 {
                    fix.extend([Gate::Z(i - 1), Gate::Z(i + 1)]);
                }
                let (t, got) = explore(n, &[(i, Pauli::Y)], o, &fix);
                assert_eq!(got[0].2, o == 1);
                let target = rule_target(n, &path_without(n, &[i], &[(i - 1, i + 1)]), &got);
                assert_eq!(t.canonical_form(), target, "n={n} i={i} o={o}");
            }
        }
    }
}

#[test]
fn y_measurement_with_s_needs_a_byproduct_on_the_plus_branch() {
    let (t, got) = explore(5, &[(2, Pauli::Y)], 0, &[Gate::S(1), Gate::S(3)]);
    assert!(!got[0].2);
    let target = rule_target(5, &path_without(5, &[2], &[(1, 3)]), &got);
    assert_ne!(t.canonical_form(), target);
    let mut u = t.clone();
    u.apply_pauli(&"IZIZI".parse().unwrap()).unwrap();
    assert_eq!(u.canonical_form(), target);
}

#[test]
fn adjacent_xx_contracts_the_chain() {
    for n in 4..=12 {
        for i in 1..n - 2 {
            for o in 0..4 {
                let (t, got) = explore(n, &[(i, Pauli::X), (i + 1, Pauli::X)], o, &[]);
                let target = rule_target(n, &path_without(n, &[i, i + 1], &[(i - 1, i + 2)]), &got);
                assert!(pauli_byproduct(&t, &target, &[i - 1, i + 2]).is_some(), "n={n} i={i} o={o}");
            }
        }
    }
}

#[test]
fn triple_y_contracts_the_chain() {
    for n in 5..=12 {
        for i in 2..n - 2 {
            for o in 0..8 {
                let (t, got) = explore(n, &[(i - 1, Pauli::Y), (i, Pauli::Y), (i + 1, Pauli::Y)], o, &[]);
                let target = rule_target(n, &path_without(n, &[i - 1, i, i + 1], &[(i - 2, i + 2)]), &got);
                assert!(pauli_byproduct(&t, &target, &[i - 2, i + 2]).is_some(), "n={n} i={i} o={o}");
            }
        }
    }
}

#[test]
fn wrong_rule_is_rejected() {
    // Y without the phase correction is not the joined chain up to Paulis.
    let (t, got) = explore(6, &[(2, Pauli::Y)], 0, &[]);
    let target = rule_target(6, &path_without(6, &[2], &[(1, 3)]), &got);
    assert!(pauli_byproduct(&t, &target, &[1, 3]).is_none());
    // Nor is X without the Hadamard.
    let (t, got) = explore(6, &[(2, Pauli::X)], 0, &[]);
    let g = path_without(6, &[2, 3], &[(1, 3), (1, 4)]);
    let target = rule_target(6, &g, &got);
    assert!(pauli_byproduct(&t, &target, &[1, 3, 4]).is_none());
}
