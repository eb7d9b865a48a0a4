use std::collections::BTreeSet;

use super::StabilizerTableau;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliProduct};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if !adj[a].insert(b) {
                return Err(Error::InvalidGraph(format!("repeated edge ({a}, {b})")));
            }
            adj[b].insert(a);
        }
        Ok(Graph { n, adj })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("path graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| self.adj[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b))).collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }
}

/// Graph state with generators K_i = X_i ∏_{j∈N(i)} Z_j.
pub fn graph_state(g: &Graph) -> StabilizerTableau {
    let n = g.n();
    let stabs = (0..n)
        .map(|i| {
            let mut k = PauliProduct::single(n, i, Pauli::X);
            for j in g.neighbors(i) {
                k.set(j, Pauli::Z);
            }
            k
        })
        .collect();
    let destabs = (0..n).map(|i| PauliProduct::single(n, i, Pauli::Z)).collect();
    StabilizerTableau { n, stabs, destabs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::Gate;

    #[test]
    fn path_generators() {
        let t = graph_state(&Graph::path(3));
        let want: Vec<PauliProduct> = ["XZI", "ZXZ", "IZX"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(t.generators(), &want[..]);
        assert!(t.check_invariants());
    }

    #[test]
    fn equals_cz_on_plus_states() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let mut t = StabilizerTableau::zero_state(4);
        for q in 0..4 {
            t.apply(&Gate::H(q)).unwrap();
        }
        for (a, b) in g.edges() {
            t.apply(&Gate::Cz(a, b)).unwrap();
        }
        assert!(t.same_group(&graph_state(&g)));
    }

    #[test]
    fn rejects_non_simple() {
        assert!(Graph::new(2, &[(0, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 1), (1, 0)]).is_err());
    }
}
