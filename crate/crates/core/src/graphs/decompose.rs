//! Decomposition of an arbitrary graph into the line-forest basis by
//! iterated residues of its pole product.

use crate::calculus::gamma_residue;
use crate::graphs::{enumerate_line_forests, p_gamma, DiGraph, LineCombo, LineForest};

/// The class of `g` in the graph span modulo relations, expressed over the
/// canonical line forests with the same edge count.
///
/// Graphs containing a cycle, and graphs with more than `n - 1` edges, are
/// zero. Otherwise the coefficient of each candidate forest is the iterated
/// residue of the pole product of `g` along that forest; every such residue
/// must come out constant, which doubles as an internal arithmetic check.
pub fn decompose_to_lines(g: &DiGraph) -> LineCombo {
    let n = g.n();
    let mut out = LineCombo::zero(n);
    if g.has_cycle() {
        return out;
    }
    if n == 0 {
        out.add_term(LineForest::empty(), crate::algebra::scalar::one());
        return out;
    }
    let s = g.num_edges() as i64;
    let p = n as i64 - s;
    if p < 1 {
        return out;
    }
    let pg = p_gamma(g);
    for forest in enumerate_line_forests(n, p as u32) {
        let r = gamma_residue(&pg, &forest).expect("forest labels match the graph");
        if r.is_zero() {
            continue;
        }
        let c = r.as_constant().unwrap_or_else(|| {
            panic!(
                "residue of {} along {} is non-constant: {}",
                g.display_text(),
                forest,
                r.display_text()
            )
        });
        out.add_term(forest, c);
    }
    out
}
