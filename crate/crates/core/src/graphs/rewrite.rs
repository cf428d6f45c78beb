//! Constructive reduction of a graph to the line-forest basis by local
//! moves: an independent oracle for the residue-based decomposition.
//!
//! The moves, each an instance of the two defining relation families, are:
//!
//! * a graph with an oriented cycle is zero;
//! * a graph with a repeated edge is zero (adjoin the reverse edge and
//!   apply the cycle relations to the resulting 2-cycle);
//! * replacing two edges at a pivot vertex by pairs that lower the pivot's
//!   degree (split off the triangle relation through an auxiliary edge
//!   between the two neighbours).
//!
//! The recursion peels the smallest vertex once its degree drops to at most
//! one; a peeled head must later sit at the front of its line, which the
//! `marked` variant of the recursion guarantees for the reattachment vertex.

use crate::algebra::scalar;
use crate::graphs::{DiGraph, LineCombo, LineForest};

/// The class of `g` expressed over canonical line forests, computed purely
/// combinatorially. Must agree with the residue-based decomposition.
pub fn rewrite_to_lines(g: &DiGraph) -> LineCombo {
    let verts: Vec<u32> = (1..=g.n()).collect();
    let mut out = LineCombo::zero(g.n());
    for (sign, lines) in rewrite(g.edges().to_vec(), verts, g.n()) {
        let forest = LineForest::new(g.n(), lines).expect("rewriting yields canonical forests");
        out.add_term(forest, scalar::int(sign));
    }
    out
}

fn degree(edges: &[(u32, u32)], v: u32) -> usize {
    edges.iter().filter(|&&(a, b)| a == v || b == v).count()
}

fn has_repeated_edge(edges: &[(u32, u32)]) -> bool {
    // Edge lists stay sorted throughout.
    edges.windows(2).any(|w| w[0] == w[1])
}

fn has_cycle(edges: &[(u32, u32)], n: u32) -> bool {
    DiGraph::new(n, edges.to_vec())
        .expect("moves preserve validity")
        .has_cycle()
}

fn remove_edge(edges: &[(u32, u32)], e: (u32, u32)) -> Vec<(u32, u32)> {
    let mut out = edges.to_vec();
    let pos = out.iter().position(|&x| x == e).expect("edge present");
    out.remove(pos);
    out
}

fn swap_edge(edges: &[(u32, u32)], from: (u32, u32), to: (u32, u32)) -> Vec<(u32, u32)> {
    let mut out = remove_edge(edges, from);
    let pos = out.partition_point(|&x| x < to);
    out.insert(pos, to);
    out
}

/// Splits two edges at the pivot into the two relation terms, each with the
/// pivot's degree lowered by one. Returns `(sign, edges)` pairs.
fn split_at_pivot(edges: &[(u32, u32)], pivot: u32) -> [(i64, Vec<(u32, u32)>); 2] {
    let at: Vec<(u32, u32)> = edges
        .iter()
        .copied()
        .filter(|&(a, b)| a == pivot || b == pivot)
        .take(2)
        .collect();
    let (e1, e2) = (at[0], at[1]);
    let other = |e: (u32, u32)| if e.0 == pivot { e.1 } else { e.0 };
    let (x, y) = (other(e1), other(e2));
    debug_assert_ne!(x, y, "parallel or antiparallel pairs are handled earlier");
    match (e1.0 == pivot, e2.0 == pivot) {
        // {p->x, p->y} = {p->y, y->x} + {x->p, y->x}
        (true, true) => [
            (1, swap_edge(edges, e1, (y, x))),
            (1, swap_edge(&swap_edge(edges, e1, (x, pivot)), e2, (y, x))),
        ],
        // {x->p, y->p} = {p->x, x->y} + {y->p, x->y}
        (false, false) => [
            (1, swap_edge(&swap_edge(edges, e1, (pivot, x)), e2, (x, y))),
            (1, swap_edge(edges, e1, (x, y))),
        ],
        // {p->x, y->p} = -{p->x, x->y} - {y->p, x->y}
        (true, false) => [
            (-1, swap_edge(edges, e2, (x, y))),
            (-1, swap_edge(edges, e1, (x, y))),
        ],
        // {x->p, p->y} = -{p->y, y->x} - {x->p, y->x}
        (false, true) => [
            (-1, swap_edge(edges, e1, (y, x))),
            (-1, swap_edge(edges, e2, (y, x))),
        ],
    }
}

/// Expresses the graph over forests whose lines are each headed by their
/// minimum, returned as `(sign, lines)` with lines ordered by head.
fn rewrite(edges: Vec<(u32, u32)>, verts: Vec<u32>, n: u32) -> Vec<(i64, Vec<Vec<u32>>)> {
    if verts.is_empty() {
        debug_assert!(edges.is_empty());
        return vec![(1, Vec::new())];
    }
    if has_repeated_edge(&edges) || has_cycle(&edges, n) {
        return Vec::new();
    }
    let v = verts[0];
    if degree(&edges, v) >= 2 {
        let mut out = Vec::new();
        for (sign, next) in split_at_pivot(&edges, v) {
            for (s2, lines) in rewrite(next, verts.clone(), n) {
                out.push((sign * s2, lines));
            }
        }
        return out;
    }
    // Degree <= 1: peel v.
    let rest: Vec<u32> = verts[1..].to_vec();
    let at_v: Vec<(u32, u32)> = edges
        .iter()
        .copied()
        .filter(|&(a, b)| a == v || b == v)
        .collect();
    match at_v.as_slice() {
        [] => {
            let mut out = Vec::new();
            for (sign, mut lines) in rewrite(edges, rest, n) {
                lines.insert(0, vec![v]);
                out.push((sign, lines));
            }
            out
        }
        &[(a, b)] => {
            let (sign0, head) = if a == v { (1, b) } else { (-1, a) };
            let trimmed = remove_edge(&edges, (a, b));
            let mut out = Vec::new();
            for (sign, marked, mut lines) in rewrite_marked(trimmed, rest, head, n) {
                let mut line = vec![v];
                line.extend(marked);
                lines.insert(0, line);
                out.push((sign0 * sign, lines));
            }
            out
        }
        _ => unreachable!("degree at most one"),
    }
}

/// Like `rewrite`, but the line containing `mark` is returned separately
/// with `mark` at its head (so a peeled vertex can be reattached in front).
fn rewrite_marked(
    edges: Vec<(u32, u32)>,
    verts: Vec<u32>,
    mark: u32,
    n: u32,
) -> Vec<(i64, Vec<u32>, Vec<Vec<u32>>)> {
    debug_assert!(verts.contains(&mark));
    if has_repeated_edge(&edges) || has_cycle(&edges, n) {
        return Vec::new();
    }
    if degree(&edges, mark) >= 2 {
        let mut out = Vec::new();
        for (sign, next) in split_at_pivot(&edges, mark) {
            for (s2, marked, lines) in rewrite_marked(next, verts.clone(), mark, n) {
                out.push((sign * s2, marked, lines));
            }
        }
        return out;
    }
    let rest: Vec<u32> = verts.iter().copied().filter(|&u| u != mark).collect();
    let at_mark: Vec<(u32, u32)> = edges
        .iter()
        .copied()
        .filter(|&(a, b)| a == mark || b == mark)
        .collect();
    match at_mark.as_slice() {
        [] => {
            let mut out = Vec::new();
            for (sign, lines) in rewrite(edges, rest, n) {
                out.push((sign, vec![mark], lines));
            }
            out
        }
        &[(a, b)] => {
            let (sign0, head) = if a == mark { (1, b) } else { (-1, a) };
            let trimmed = remove_edge(&edges, (a, b));
            let mut out = Vec::new();
            for (sign, mut marked, lines) in rewrite_marked(trimmed, rest, head, n) {
                marked.insert(0, mark);
                out.push((sign0 * sign, marked, lines));
            }
            out
        }
        _ => unreachable!("degree at most one"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::decompose::decompose_to_lines;
    use crate::graphs::enumerate_all_line_forests;

    #[test]
    fn forests_are_fixed_points() {
        for n in 1..=4u32 {
            for f in enumerate_all_line_forests(n) {
                let c = rewrite_to_lines(&f.to_digraph());
                assert_eq!(c.coeff(&f), scalar::one(), "{f}");
                assert_eq!(c.terms().count(), 1, "{f}");
            }
        }
    }

    #[test]
    fn hand_examples() {
        let g = DiGraph::parse("n=2; edges=2->1").unwrap();
        let c = rewrite_to_lines(&g);
        assert_eq!(
            c.coeff(&LineForest::parse("1>2").unwrap()),
            scalar::int(-1)
        );

        let g = DiGraph::parse("n=3; edges=1->2,1->3").unwrap();
        let c = rewrite_to_lines(&g);
        assert_eq!(c.coeff(&LineForest::parse("1>2>3").unwrap()), scalar::one());
        assert_eq!(c.coeff(&LineForest::parse("1>3>2").unwrap()), scalar::one());
        assert_eq!(c.terms().count(), 2);
    }

    #[test]
    fn agrees_with_residue_decomposition_on_all_small_simple_graphs() {
        // Every simple graph on three vertices.
        let pairs: Vec<(u32, u32)> = vec![(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];
        for mask in 0u32..64 {
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = DiGraph::new(3, edges).unwrap();
            assert_eq!(
                rewrite_to_lines(&g),
                decompose_to_lines(&g),
                "mismatch on {}",
                g.display_text()
            );
        }
    }

    #[test]
    fn agrees_on_multigraphs() {
        for text in [
            "n=3; edges=1->2,1->2",
            "n=3; edges=1->2,1->2,2->3",
            "n=4; edges=2->1,3->1,4->1",
            "n=4; edges=1->2,3->2,3->4",
        ] {
            let g = DiGraph::parse(text).unwrap();
            assert_eq!(rewrite_to_lines(&g), decompose_to_lines(&g), "{text}");
        }
    }

    #[test]
    fn cycle_relations_hold_in_the_basis() {
        // Both relation families map to zero through the rewriting.
        let cyclic = DiGraph::parse("n=3; edges=1->2,2->3,3->1").unwrap();
        assert!(rewrite_to_lines(&cyclic).is_zero());
        // Sum over removals of one cycle edge from a graph with a cycle.
        let with_extra = DiGraph::parse("n=3; edges=1->2,2->1,1->3").unwrap();
        let mut acc = LineCombo::zero(3);
        for e in [(1, 2), (2, 1)] {
            let removed = remove_edge(with_extra.edges(), e);
            let h = DiGraph::new(3, removed).unwrap();
            acc = acc.add(&rewrite_to_lines(&h));
        }
        assert!(acc.is_zero());
    }
}
