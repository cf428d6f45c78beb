//! The relation span on graphs — cyclic graphs and cycle-edge-removal sums —
//! and the exact rank computation showing the quotient has dimension `n!`.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{scalar, Scalar};
use crate::linalg::RowSpace;

use super::digraph::{enumerate_simple_cycles, DiGraph};

/// All graphs on `1..=n` whose ordered-pair multiplicities are each at most
/// `max_multiplicity`, enumerated deterministically (mixed-radix count over
/// the sorted list of ordered pairs).
pub fn enumerate_graphs(n: u32, max_multiplicity: u32) -> Vec<DiGraph> {
    let pairs = ordered_pairs(n);
    let mut digits = vec![0u32; pairs.len()];
    let mut out = Vec::new();
    loop {
        let mut edges = Vec::new();
        for (d, &(a, b)) in digits.iter().zip(&pairs) {
            for _ in 0..*d {
                edges.push((a, b));
            }
        }
        out.push(DiGraph::new(n, edges).expect("pairs are valid edges"));
        // increment mixed-radix counter
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            if digits[i] < max_multiplicity {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn ordered_pairs(n: u32) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            if a != b {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

fn remove_one_edge(g: &DiGraph, e: (u32, u32)) -> DiGraph {
    let mut edges = g.edges().to_vec();
    let pos = edges
        .iter()
        .position(|&x| x == e)
        .expect("edge present in graph");
    edges.remove(pos);
    DiGraph::new(g.n(), edges).expect("still a valid graph")
}

/// Generators of the relation span restricted to graphs with per-pair
/// multiplicity at most `max_multiplicity`: one unit vector per graph that
/// contains a cycle, and for every graph containing a cycle `C` the sum of
/// the graphs with one `C`-edge removed.
pub fn cycle_relation_span(n: u32, max_multiplicity: u32) -> Vec<Vec<(DiGraph, Scalar)>> {
    let cycles = enumerate_simple_cycles(n);
    let mut rows = Vec::new();
    for g in enumerate_graphs(n, max_multiplicity) {
        if g.has_cycle() {
            rows.push(vec![(g.clone(), scalar::one())]);
        }
        for cycle in &cycles {
            if !cycle.iter().all(|e| g.edges().contains(e)) {
                continue;
            }
            let row: Vec<(DiGraph, Scalar)> = cycle
                .iter()
                .map(|&e| (remove_one_edge(&g, e), scalar::one()))
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// The outcome of the rank computation over the simple-graph basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRank {
    pub num_graphs: usize,
    pub num_cyclic: usize,
    pub relation_rank: usize,
    pub quotient_dim: usize,
}

/// Dimension of (span of simple graphs on `1..=n`) / (relation span).
///
/// The cyclic graphs contribute unit vectors, so the rank splits as
/// `#cyclic + rank(removal rows projected onto the acyclic columns)`; the
/// projected rows are assembled per cycle so no subset scan over all graphs
/// is needed.
pub fn quotient_dimension(n: u32) -> RelationRank {
    let pairs = ordered_pairs(n);
    let num_graphs = 1usize << pairs.len();
    let mut num_cyclic = 0usize;
    let mut acyclic: HashMap<DiGraph, bool> = HashMap::new();
    for g in enumerate_graphs(n, 1) {
        let is_acyclic = !g.has_cycle();
        if !is_acyclic {
            num_cyclic += 1;
        }
        acyclic.insert(g, is_acyclic);
    }

    let mut space: RowSpace<DiGraph> = RowSpace::new();
    for cycle in enumerate_simple_cycles(n) {
        let rest: Vec<(u32, u32)> = pairs
            .iter()
            .copied()
            .filter(|p| !cycle.contains(p))
            .collect();
        for mask in 0u64..(1u64 << rest.len()) {
            let mut base: Vec<(u32, u32)> = cycle.clone();
            for (i, &p) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    base.push(p);
                }
            }
            let g = DiGraph::new(n, base).expect("valid edges");
            let mut row: BTreeMap<DiGraph, Scalar> = BTreeMap::new();
            for &e in &cycle {
                let h = remove_one_edge(&g, e);
                if acyclic[&h] {
                    *row.entry(h).or_insert_with(scalar::zero) += scalar::one();
                }
            }
            space.insert(row);
        }
    }

    let relation_rank = num_cyclic + space.rank();
    RelationRank {
        num_graphs,
        num_cyclic,
        relation_rank,
        quotient_dim: num_graphs - relation_rank,
    }
}
