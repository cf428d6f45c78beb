//! Table-backed multilinear operations on tensor powers of a free graded
//! module, stored on the line-forest basis and extended to arbitrary
//! directed graphs through the basis decomposition.
//!
//! A value table assigns to a line forest and a basis tensor a polynomial
//! in one variable `L1..Lp` per line with module coefficients. Keys whose
//! last-vertex d-powers are nonzero are derived from reduced keys by the
//! per-line shift rule
//!
//! `Y(d_last u) = -L_line * Y(u) - sum over the other line vertices i of
//! Y(d_i u)`
//!
//! which encodes that the operation kills `(d_line + L_line) * v` for every
//! line. Stored entries take precedence over the rule, so an over-specified
//! table can be inconsistent; `validate` detects exactly that.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{scalar, MPoly, Monomial, VarId};
use crate::calculus::LambdaPoly;
use crate::graphs::{decompose_to_lines, enumerate_all_line_forests, DiGraph, LineForest};
use crate::modules::dmodule::{
    big_lambda_vars, canonical_rep, canonicalize, FreeDModule, ModuleError, QuotElem, TensorElem,
    TensorKey, VElem,
};

/// A degree-`r` multilinear operation, determined by its values on line
/// forests.
#[derive(Clone, Debug)]
pub struct ClassicalOp {
    module: Arc<FreeDModule>,
    n: u32,
    degree: i64,
    table: BTreeMap<LineForest, BTreeMap<TensorKey, LambdaPoly<VElem>>>,
}

impl ClassicalOp {
    pub fn new(
        module: Arc<FreeDModule>,
        n: u32,
        degree: i64,
        table: BTreeMap<LineForest, BTreeMap<TensorKey, LambdaPoly<VElem>>>,
    ) -> Result<Self, ModuleError> {
        let mut clean = BTreeMap::new();
        for (forest, values) in table {
            if forest.n() != n {
                return Err(ModuleError::ArityMismatch {
                    expected: n,
                    got: forest.n(),
                });
            }
            let p = forest.num_lines() as u32;
            let allowed: BTreeSet<VarId> = big_lambda_vars(p).into_iter().collect();
            let mut clean_values = BTreeMap::new();
            for (key, value) in values {
                if key.len() != n as usize {
                    return Err(ModuleError::KeyArity {
                        got: key.len(),
                        expected: n as usize,
                    });
                }
                for &(g, _) in &key {
                    module.check_gen(g)?;
                }
                for v in value.vars() {
                    if !allowed.contains(&v) {
                        return Err(ModuleError::BadValueVariable {
                            forest: forest.display_text(),
                            var: v.to_string(),
                            lines: p,
                        });
                    }
                }
                if !value.is_zero() {
                    clean_values.insert(key, value);
                }
            }
            if !clean_values.is_empty() {
                clean.insert(forest, clean_values);
            }
        }
        Ok(ClassicalOp {
            module,
            n,
            degree,
            table: clean,
        })
    }

    pub fn zero(module: Arc<FreeDModule>, n: u32, degree: i64) -> Self {
        ClassicalOp {
            module,
            n,
            degree,
            table: BTreeMap::new(),
        }
    }

    pub fn module(&self) -> &Arc<FreeDModule> {
        &self.module
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn table(&self) -> &BTreeMap<LineForest, BTreeMap<TensorKey, LambdaPoly<VElem>>> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// True when the d-power at every line-final vertex of `forest` is zero.
    pub fn key_is_reduced(forest: &LineForest, key: &TensorKey) -> bool {
        forest
            .lines()
            .iter()
            .all(|line| key[(*line.last().unwrap() - 1) as usize].1 == 0)
    }

    /// Value on a single basis tensor of the given forest. Stored entries
    /// are returned directly; otherwise a nonzero d-power at some
    /// line-final vertex is peeled off with the shift rule and the result
    /// is assembled recursively. Missing reduced entries evaluate to zero.
    pub fn eval_forest_key(&self, forest: &LineForest, key: &TensorKey) -> LambdaPoly<VElem> {
        assert_eq!(forest.n(), self.n, "forest arity mismatch");
        assert_eq!(key.len(), self.n as usize, "tensor key arity mismatch");
        let Some(values) = self.table.get(forest) else {
            return LambdaPoly::zero();
        };
        if let Some(v) = values.get(key) {
            return v.clone();
        }
        for (ell, line) in forest.lines().iter().enumerate() {
            let last = *line.last().unwrap();
            if key[(last - 1) as usize].1 == 0 {
                continue;
            }
            let mut u = key.clone();
            u[(last - 1) as usize].1 -= 1;
            let mut out = self
                .eval_forest_key(forest, &u)
                .mul_var(VarId::BigLambda(ell as u32 + 1))
                .scale(&scalar::int(-1));
            for &i in &line[..line.len() - 1] {
                let mut shifted = u.clone();
                shifted[(i - 1) as usize].1 += 1;
                out = out.sub(&self.eval_forest_key(forest, &shifted));
            }
            return out;
        }
        LambdaPoly::zero()
    }

    /// Linear extension of `eval_forest_key` to tensor elements.
    pub fn eval_forest(&self, forest: &LineForest, v: &TensorElem) -> LambdaPoly<VElem> {
        assert_eq!(v.n(), self.n, "tensor arity mismatch");
        let mut out = LambdaPoly::zero();
        for (key, c) in v.terms() {
            out = out.add(&self.eval_forest_key(forest, key).scale(c));
        }
        out
    }

    /// Rewrites each per-line variable `L(ell)` as the sum of the `li` over
    /// the vertices of line `ell`.
    pub fn expand_line_lambdas(forest: &LineForest, poly: &LambdaPoly<VElem>) -> LambdaPoly<VElem> {
        let mut out = poly.clone();
        for (ell, line) in forest.lines().iter().enumerate() {
            let mut sum = MPoly::zero();
            for &i in line {
                sum = sum.add(&MPoly::var(VarId::Lambda(i)));
            }
            out = out.substitute(VarId::BigLambda(ell as u32 + 1), &sum);
        }
        out
    }

    /// Value on an arbitrary directed graph: decompose into the line-forest
    /// basis, evaluate each forest, rewrite the per-line variables as sums
    /// of the per-vertex ones, and return the quotient normal form. Both
    /// cycle relations hold automatically for values produced this way.
    pub fn eval_graph(&self, g: &DiGraph, v: &TensorElem) -> QuotElem {
        assert_eq!(g.n(), self.n, "graph arity mismatch");
        let combo = decompose_to_lines(g);
        let mut raw = LambdaPoly::zero();
        for (forest, c) in combo.terms() {
            let value = self.eval_forest(forest, v);
            raw = raw.add(&Self::expand_line_lambdas(forest, &value).scale(c));
        }
        canonicalize(&raw, self.n)
    }

    /// Checks the shift rule and degree bookkeeping on the stored table and
    /// returns human-readable violations (empty means valid).
    ///
    /// * Shift rule: for every stored forest, every line, and every sample
    ///   key (the stored keys and their one-step d-shifts), the combination
    ///   `Y(d_line v) + L_line * Y(v)` must be zero modulo
    ///   `<d + L1 + ... + Lp>`.
    /// * Degree: on a key of total generator degree `t` over a forest with
    ///   `s` edges, every coefficient must be homogeneous of degree
    ///   `s + t - r`.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        for (forest, values) in &self.table {
            let p = forest.num_lines() as u32;
            let s = forest.num_edges() as i64;
            let vars = big_lambda_vars(p);

            for (key, value) in values {
                let t = i64::from(TensorElem::key_degree(&self.module, key));
                let target = s + t - self.degree;
                for (_, c) in value.terms() {
                    if !c.is_homogeneous_of(&self.module, target) {
                        violations.push(format!(
                            "degree violation at forest `{}`, key `{}`: expected homogeneous degree {}, found degrees {:?}",
                            forest.display_text(),
                            TensorElem::basis(self.n, key.clone()).display_text(&self.module),
                            target,
                            c.degrees(&self.module),
                        ));
                        break;
                    }
                }
            }

            let mut sample_keys: BTreeSet<TensorKey> = values.keys().cloned().collect();
            for key in values.keys() {
                for i in 0..key.len() {
                    let mut bumped = key.clone();
                    bumped[i].1 += 1;
                    sample_keys.insert(bumped);
                }
            }
            for key in &sample_keys {
                let v = TensorElem::basis(self.n, key.clone());
                for (ell, line) in forest.lines().iter().enumerate() {
                    let mut shifted = TensorElem::zero(self.n);
                    for &i in line {
                        shifted = shifted.add(&v.apply_d_at(i));
                    }
                    let raw = self
                        .eval_forest(forest, &shifted)
                        .add(&self.eval_forest(forest, &v).mul_var(VarId::BigLambda(ell as u32 + 1)));
                    if !canonical_rep(&raw, &vars).is_zero() {
                        violations.push(format!(
                            "shift-rule violation at forest `{}`, line {}, key `{}`",
                            forest.display_text(),
                            ell + 1,
                            v.display_text(&self.module),
                        ));
                    }
                }
            }
        }
        violations
    }

    /// Class-level equality: compares values on the union of stored keys
    /// modulo `<d + L1 + ... + Lp>` per forest. Faithful for operations
    /// whose tables pass `validate`.
    pub fn equivalent(&self, other: &ClassicalOp) -> bool {
        if self.n != other.n || self.degree != other.degree || self.module != other.module {
            return false;
        }
        let forests: BTreeSet<&LineForest> =
            self.table.keys().chain(other.table.keys()).collect();
        for forest in forests {
            let vars = big_lambda_vars(forest.num_lines() as u32);
            let mut keys: BTreeSet<&TensorKey> = BTreeSet::new();
            if let Some(m) = self.table.get(forest) {
                keys.extend(m.keys());
            }
            if let Some(m) = other.table.get(forest) {
                keys.extend(m.keys());
            }
            for key in keys {
                let a = canonical_rep(&self.eval_forest_key(forest, key), &vars);
                let b = canonical_rep(&other.eval_forest_key(forest, key), &vars);
                if a != b {
                    return false;
                }
            }
        }
        true
    }

    /// A seeded random operation of the given degree: for every forest and
    /// every reduced key with slot d-powers at most `max_dpow`, a sparse
    /// random polynomial in the per-line variables (degree at most
    /// `lambda_cap`) whose coefficients are drawn from the generators of
    /// the single degree the grading allows.
    pub fn random(
        module: Arc<FreeDModule>,
        n: u32,
        degree: i64,
        max_dpow: u32,
        lambda_cap: u32,
        rng: &mut impl Rng,
    ) -> Self {
        let mut table = BTreeMap::new();
        for forest in enumerate_all_line_forests(n) {
            let p = forest.num_lines() as u32;
            let s = forest.num_edges() as i64;
            let mut last_slots = vec![false; n as usize];
            for line in forest.lines() {
                last_slots[(*line.last().unwrap() - 1) as usize] = true;
            }
            let mut values: BTreeMap<TensorKey, LambdaPoly<VElem>> = BTreeMap::new();
            for key in enumerate_keys(&module, n, max_dpow, &last_slots) {
                let t = i64::from(TensorElem::key_degree(&module, &key));
                let target = s + t - degree;
                let gens = module.gens_of_degree(target);
                if gens.is_empty() {
                    continue;
                }
                let mut value = LambdaPoly::zero();
                for mono in lambda_monomials(p, lambda_cap) {
                    if rng.random_range(0..3) == 0 {
                        continue;
                    }
                    let mut c = VElem::zero();
                    for &g in &gens {
                        let coeff = rng.random_range(-3..=3i64);
                        let dpow = rng.random_range(0..=1u32);
                        c.add_term(g, dpow, scalar::int(coeff));
                    }
                    value.add_term(mono, c);
                }
                if !value.is_zero() {
                    values.insert(key, value);
                }
            }
            if !values.is_empty() {
                table.insert(forest, values);
            }
        }
        ClassicalOp {
            module,
            n,
            degree,
            table,
        }
    }
}

/// All reduced keys with per-slot d-powers bounded by `max_dpow` (forced to
/// zero at line-final slots).
pub(crate) fn enumerate_keys(
    module: &FreeDModule,
    n: u32,
    max_dpow: u32,
    last_slots: &[bool],
) -> Vec<TensorKey> {
    let mut keys = vec![Vec::new()];
    for &is_last in last_slots.iter().take(n as usize) {
        let cap = if is_last { 0 } else { max_dpow };
        let mut next = Vec::new();
        for key in &keys {
            for g in 0..module.rank() {
                for dpow in 0..=cap {
                    let mut k = key.clone();
                    k.push((g, dpow));
                    next.push(k);
                }
            }
        }
        keys = next;
    }
    keys
}

/// All monomials in `L1..Lp` of total degree at most `cap`.
pub(crate) fn lambda_monomials(p: u32, cap: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::unit()];
    for ell in 1..=p {
        let mut next = Vec::new();
        for m in &out {
            let used = m.degree() as u32;
            for e in 0..=cap.saturating_sub(used) {
                next.push(m.mul(&Monomial::var_pow(VarId::BigLambda(ell), e)));
            }
        }
        out = next;
    }
    out
}
