//! Directed multigraphs on vertices `1..=n` and their pole products.

use std::fmt;

use thiserror::Error;

use crate::algebra::{DiagRat, VarId};

/// A directed multigraph on vertices `1..=n`: a sorted multiset of ordered
/// edges `i -> j` with `i != j` (no tadpoles).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DiGraph {
    n: u32,
    edges: Vec<(u32, u32)>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphParseError {
    #[error("graph text at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("vertex {0} out of range 1..={1}")]
    VertexRange(u32, u32),
    #[error("tadpole edge {0}->{0} is not allowed")]
    Tadpole(u32),
}

impl DiGraph {
    pub fn new(n: u32, mut edges: Vec<(u32, u32)>) -> Result<Self, GraphParseError> {
        for &(a, b) in &edges {
            if a == b {
                return Err(GraphParseError::Tadpole(a));
            }
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphParseError::VertexRange(v, n));
                }
            }
        }
        edges.sort_unstable();
        Ok(DiGraph { n, edges })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Relabels vertices by the permutation `perm` (1-based images:
    /// vertex `i` becomes `perm[i-1]`).
    pub fn apply_perm(&self, perm: &[u32]) -> DiGraph {
        assert_eq!(perm.len(), self.n as usize, "permutation arity mismatch");
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[(a - 1) as usize], perm[(b - 1) as usize]))
            .collect();
        DiGraph::new(self.n, edges).expect("relabelling preserves validity")
    }

    /// Looks for an oriented cycle. Returns its edges
    /// `[i1->i2, ..., is->i1]` in walk order, or `None` for acyclic graphs.
    ///
    /// Deterministic: depth-first search rooted at the smallest vertices
    /// first, visiting successors in ascending order, reporting the first
    /// closed walk encountered.
    pub fn find_cycle(&self) -> Option<Vec<(u32, u32)>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let n = self.n as usize;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
        }
        for lst in &mut adj {
            lst.sort_unstable();
            lst.dedup();
        }
        let mut color = vec![Color::White; n + 1];
        // Iterative DFS carrying the current path.
        fn dfs(
            v: u32,
            adj: &[Vec<u32>],
            color: &mut [Color],
            path: &mut Vec<u32>,
        ) -> Option<Vec<u32>> {
            color[v as usize] = Color::Gray;
            path.push(v);
            for &u in &adj[v as usize] {
                match color[u as usize] {
                    Color::Gray => {
                        let start = path.iter().position(|&x| x == u).expect("gray on path");
                        let mut cyc = path[start..].to_vec();
                        cyc.push(u);
                        return Some(cyc);
                    }
                    Color::White => {
                        if let Some(c) = dfs(u, adj, color, path) {
                            return Some(c);
                        }
                    }
                    Color::Black => {}
                }
            }
            path.pop();
            color[v as usize] = Color::Black;
            None
        }
        for s in 1..=self.n {
            if color[s as usize] == Color::White {
                let mut path = Vec::new();
                if let Some(walk) = dfs(s, &adj, &mut color, &mut path) {
                    let edges = walk.windows(2).map(|w| (w[0], w[1])).collect();
                    return Some(edges);
                }
            }
        }
        None
    }

    pub fn has_cycle(&self) -> bool {
        self.find_cycle().is_some()
    }

    /// Serializes as `n=<n>; edges=<i>-><j>,...` with edges sorted.
    pub fn display_text(&self) -> String {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| format!("{a}->{b}"))
            .collect::<Vec<_>>()
            .join(",");
        format!("n={}; edges={}", self.n, edges)
    }

    /// Parses the `display_text` format (whitespace-tolerant).
    pub fn parse(text: &str) -> Result<Self, GraphParseError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact
            .strip_prefix("n=")
            .ok_or_else(|| GraphParseError::Syntax(0, "expected `n=`".into()))?;
        let (n_str, edge_part) = rest
            .split_once(';')
            .ok_or_else(|| GraphParseError::Syntax(rest.len(), "expected `;`".into()))?;
        let n: u32 = n_str
            .parse()
            .map_err(|_| GraphParseError::Syntax(2, format!("bad vertex count `{n_str}`")))?;
        let list = edge_part
            .strip_prefix("edges=")
            .ok_or_else(|| GraphParseError::Syntax(compact.len(), "expected `edges=`".into()))?;
        let mut edges = Vec::new();
        if !list.is_empty() {
            for item in list.split(',') {
                let (a, b) = item.split_once("->").ok_or_else(|| {
                    GraphParseError::Syntax(compact.len(), format!("bad edge `{item}`"))
                })?;
                let a: u32 = a.parse().map_err(|_| {
                    GraphParseError::Syntax(compact.len(), format!("bad vertex `{a}`"))
                })?;
                let b: u32 = b.parse().map_err(|_| {
                    GraphParseError::Syntax(compact.len(), format!("bad vertex `{b}`"))
                })?;
                edges.push((a, b));
            }
        }
        DiGraph::new(n, edges)
    }
}

impl fmt::Display for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_text())
    }
}

/// The pole product of a graph: the product over edges `i -> j` of
/// `1/(z_i - z_j)`, as a diagonal-localized function on `{z1..zn}`.
pub fn p_gamma(g: &DiGraph) -> DiagRat {
    let mut out = DiagRat::one(g.n());
    for &(a, b) in g.edges() {
        out = out
            .div_diag(VarId::Z(a), VarId::Z(b), 1)
            .expect("edge endpoints are live");
    }
    out
}

/// All directed simple cycles (distinct vertices, length >= 2) on the
/// complete digraph over `1..=n`, each as an edge list starting from the
/// cycle's smallest vertex. Deterministic order.
pub fn enumerate_simple_cycles(n: u32) -> Vec<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    fn extend(
        start: u32,
        path: &mut Vec<u32>,
        used: &mut Vec<bool>,
        n: u32,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        let last = *path.last().unwrap();
        for next in 1..=n {
            if next == start && path.len() >= 2 {
                let mut cyc: Vec<(u32, u32)> =
                    path.windows(2).map(|w| (w[0], w[1])).collect();
                cyc.push((last, start));
                out.push(cyc);
            }
            if next > start && !used[next as usize] {
                used[next as usize] = true;
                path.push(next);
                extend(start, path, used, n, out);
                path.pop();
                used[next as usize] = false;
            }
        }
    }
    for start in 1..=n {
        let mut used = vec![false; n as usize + 1];
        used[start as usize] = true;
        let mut path = vec![start];
        extend(start, &mut path, &mut used, n, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32, edges: &[(u32, u32)]) -> DiGraph {
        DiGraph::new(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let gr = g(3, &[(2, 1), (1, 3)]);
        assert_eq!(gr.display_text(), "n=3; edges=1->3,2->1");
        assert_eq!(DiGraph::parse("n=3; edges=2->1, 1->3").unwrap(), gr);
        assert_eq!(
            DiGraph::parse("n=2; edges=").unwrap(),
            g(2, &[]),
            "empty edge list"
        );
        assert!(DiGraph::parse("n=2; edges=1->1").is_err(), "tadpole");
        assert!(DiGraph::parse("n=2; edges=1->3").is_err(), "range");
    }

    #[test]
    fn cycle_detection() {
        assert_eq!(g(3, &[(1, 2), (2, 3)]).find_cycle(), None);
        assert_eq!(
            g(2, &[(1, 2), (2, 1)]).find_cycle(),
            Some(vec![(1, 2), (2, 1)])
        );
        assert_eq!(
            g(4, &[(2, 3), (3, 4), (4, 2)]).find_cycle(),
            Some(vec![(2, 3), (3, 4), (4, 2)])
        );
        // A repeated edge alone is not an oriented cycle.
        assert_eq!(g(2, &[(1, 2), (1, 2)]).find_cycle(), None);
    }

    #[test]
    fn permutation_action_relabels_edges() {
        let gr = g(3, &[(1, 2), (2, 3)]);
        // sigma = (1 2): 1->2, 2->1, 3->3.
        let h = gr.apply_perm(&[2, 1, 3]);
        assert_eq!(h, g(3, &[(2, 1), (1, 3)]));
        // Applying a permutation twice with its inverse restores the graph.
        assert_eq!(h.apply_perm(&[2, 1, 3]), gr);
    }

    #[test]
    fn pole_product_signs() {
        // p of 2->1 is 1/(z2 - z1) = -1/(z1 - z2).
        let f = p_gamma(&g(2, &[(2, 1)]));
        let expected = DiagRat::one(2)
            .div_diag(VarId::Z(1), VarId::Z(2), 1)
            .unwrap()
            .neg();
        assert_eq!(f, expected);
        // Repeated edges pile up pole order.
        let f2 = p_gamma(&g(2, &[(1, 2), (1, 2)]));
        assert_eq!(f2.pole_order(VarId::Z(1), VarId::Z(2)).unwrap(), 2);
    }

    #[test]
    fn simple_cycle_counts() {
        // n=3: three 2-cycles and two orientations of the triangle.
        assert_eq!(enumerate_simple_cycles(3).len(), 5);
        // n=4: six 2-cycles, eight 3-cycles, six 4-cycles.
        assert_eq!(enumerate_simple_cycles(4).len(), 20);
    }
}
