//! Deterministic fixtures shared by the benchmarks: forest/pole-product
//! pairs for the transform sweep, a mid-size graph for decomposition, and
//! a seeded two-slot evaluator with one localized input.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use chiral_core::graphs::{enumerate_all_line_forests, p_gamma};
use chiral_core::{
    inverse_map, ChiralOp, ClassicalOp, DiGraph, DiagRat, FreeDModule, LineForest, TensorElem,
    VarId,
};

/// Every canonical forest at the given arity together with its pole
/// product; the transform benchmark sweeps all equal-edge-count pairs.
pub fn delta_pairs(n: u32) -> Vec<(LineForest, DiagRat)> {
    enumerate_all_line_forests(n)
        .into_iter()
        .map(|forest| {
            let product = p_gamma(&forest.to_digraph());
            (forest, product)
        })
        .collect()
}

/// A four-vertex acyclic graph with three edges whose class spreads over
/// several forests.
pub fn branching_graph() -> DiGraph {
    DiGraph::parse("n=4; edges=1->2,1->3,2->4").expect("fixture graph is valid")
}

/// A seeded degree-1 two-slot evaluator with a basis tensor and a
/// second-order localized input.
pub fn eval_fixture() -> (ChiralOp, TensorElem, DiagRat) {
    let module = Arc::new(FreeDModule::rank2_graded());
    let mut rng = ChaCha8Rng::seed_from_u64(1729);
    let op = ClassicalOp::random(module, 2, 1, 1, 2, &mut rng);
    let x = inverse_map(&op, true).expect("random tables validate");
    let v = TensorElem::basis(2, vec![(0, 1), (1, 0)]);
    let f = DiagRat::one(2)
        .div_diag(VarId::Z(1), VarId::Z(2), 2)
        .expect("live diagonal pair");
    (x, v, f)
}
