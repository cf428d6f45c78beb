//! From a table-backed operation to a diagonal-localized evaluator.
//!
//! For a tensor `v` and translation-invariant `f`, the evaluator computes,
//! over every line forest `G` (optionally pruned to those whose edge count
//! does not exceed the divisor count of `f`):
//!
//! 1. the forest transform of `f`, a polynomial in `l1..ln` with
//!    coefficients in the `w`-variables, one per line;
//! 2. for every transform monomial `c` and every split `c = a + b` with
//!    multiplicity `prod binom(c_i, a_i)`: the `b`-powers act as slot
//!    derivations on `v`, the table value on the result is convolved with
//!    the transform coefficient, and the `a`-powers remain as `l`-variables;
//! 3. each per-line variable is rewritten as the sum of the `l`-variables
//!    over its line, everything is summed, and the quotient normal form is
//!    taken.
//!
//! Forest transforms are cached per `(input, forest)` pair.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{scalar, DiagRat, Monomial, VarId};
use crate::calculus::{convolve, fourier, LambdaPoly, PolyOverDiagRat};
use crate::graphs::{enumerate_all_line_forests, LineForest};
use crate::modules::{
    canonicalize, check_eval_input, ChiralError, ChiralEval, ChiralOp, ClassicalOp, FreeDModule,
    QuotElem, TensorElem, VElem,
};

/// Evaluator produced by [`inverse_map`].
pub struct InverseMapEval {
    op: ClassicalOp,
    prune: bool,
    forests: Vec<LineForest>,
    cache: Mutex<HashMap<(DiagRat, LineForest), Arc<PolyOverDiagRat>>>,
}

impl InverseMapEval {
    fn transform(&self, f: &DiagRat, forest: &LineForest) -> Result<Arc<PolyOverDiagRat>, ChiralError> {
        let key = (f.clone(), forest.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let computed = Arc::new(fourier(f, forest)?);
        self.cache
            .lock()
            .unwrap()
            .insert(key, computed.clone());
        Ok(computed)
    }
}

/// All splits `mono = a + b` with the product of binomial coefficients
/// `prod binom(mono_i, a_i)` attached.
fn splits(mono: &Monomial) -> Vec<(Monomial, Monomial, crate::algebra::Scalar)> {
    let vars: Vec<(VarId, u32)> = mono.iter().collect();
    let mut out = vec![(Monomial::unit(), Monomial::unit(), scalar::one())];
    for &(v, e) in &vars {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for (a, b, c) in &out {
            for ai in 0..=e {
                next.push((
                    a.mul(&Monomial::var_pow(v, ai)),
                    b.mul(&Monomial::var_pow(v, e - ai)),
                    c * scalar::binomial(e.into(), ai.into()),
                ));
            }
        }
        out = next;
    }
    out
}

/// Applies the slot derivations prescribed by a monomial in `l1..ln`.
fn apply_b_powers(v: &TensorElem, b: &Monomial) -> TensorElem {
    let mut out = v.clone();
    for (var, e) in b.iter() {
        let VarId::Lambda(i) = var else {
            panic!("transform monomial outside the l-family: {var}");
        };
        for _ in 0..e {
            out = out.apply_d_at(i);
        }
    }
    out
}

impl ChiralEval for InverseMapEval {
    fn n(&self) -> u32 {
        self.op.n()
    }

    fn module(&self) -> &Arc<FreeDModule> {
        self.op.module()
    }

    fn eval(&self, v: &TensorElem, f: &DiagRat) -> Result<QuotElem, ChiralError> {
        check_eval_input(self.op.n(), v, f)?;
        let mut raw: LambdaPoly<VElem> = LambdaPoly::zero();
        for forest in &self.forests {
            if self.prune && forest.num_edges() > f.divisor_count() {
                continue;
            }
            let transform = self.transform(f, forest)?;
            for (mono, coeff_fn) in transform.terms() {
                for (a, b, mult) in splits(mono) {
                    let shifted = apply_b_powers(v, &b);
                    let value = self.op.eval_forest(forest, &shifted);
                    if value.is_zero() {
                        continue;
                    }
                    let conv = convolve(coeff_fn, &value);
                    if conv.is_zero() {
                        continue;
                    }
                    let expanded = ClassicalOp::expand_line_lambdas(forest, &conv);
                    raw = raw.add(&expanded.mul_mono(&a).scale(&mult));
                }
            }
        }
        Ok(canonicalize(&raw, self.op.n()))
    }
}

/// Wraps a validated table-backed operation as an evaluator; fails on
/// tables with validation violations. With `prune` set, forests with more
/// edges than the input has divisors are skipped; the output is identical
/// either way.
pub fn inverse_map(op: &ClassicalOp, prune: bool) -> Result<ChiralOp, ChiralError> {
    let violations = op.validate();
    if let Some(first) = violations.into_iter().next() {
        return Err(ChiralError::InvalidOperation(first));
    }
    Ok(Arc::new(InverseMapEval {
        op: op.clone(),
        prune,
        forests: enumerate_all_line_forests(op.n()),
        cache: Mutex::new(HashMap::new()),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{z_live, MPoly};
    use crate::graphs::p_gamma;
    use crate::modules::TensorKey;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn module() -> Arc<FreeDModule> {
        Arc::new(FreeDModule::rank2_graded())
    }

    fn z(i: u32) -> MPoly {
        MPoly::var(VarId::Z(i))
    }

    #[test]
    fn arity_one_evaluator_scales_the_table_value() {
        // With one slot the only input functions are constants c, and the
        // evaluator returns c times the table value as a quotient class.
        let mut table = BTreeMap::new();
        let mut values = BTreeMap::new();
        values.insert(
            TensorKey::from([(1, 0)]),
            LambdaPoly::constant(VElem::basis(0, 1)),
        );
        table.insert(LineForest::parse("1").unwrap(), values);
        let op = ClassicalOp::new(module(), 1, 1, table).unwrap();
        let x = inverse_map(&op, true).unwrap();

        let v = TensorElem::basis(1, vec![(1, 0)]);
        let c = DiagRat::constant_on(z_live(1), scalar::ratio(3, 2));
        let got = x.eval(&v, &c).unwrap();
        let expected = canonicalize(
            &LambdaPoly::constant(VElem::basis(0, 1).scale(&scalar::ratio(3, 2))),
            1,
        );
        assert_eq!(got, expected);

        // A generator with no table entry maps to zero.
        let other = TensorElem::basis(1, vec![(0, 0)]);
        assert!(x.eval(&other, &c).unwrap().is_zero());
    }

    #[test]
    fn arity_zero_evaluator_lands_in_the_d_quotient() {
        // With no slots the input function is a constant and the output
        // lives in the quotient of the module by the image of d.
        let mut table = BTreeMap::new();
        let mut values = BTreeMap::new();
        values.insert(
            TensorKey::new(),
            LambdaPoly::constant(VElem::gen(0).add(&VElem::basis(0, 1))),
        );
        table.insert(LineForest::empty(), values);
        let op = ClassicalOp::new(module(), 0, 0, table).unwrap();
        let x = inverse_map(&op, true).unwrap();

        let v = TensorElem::basis(0, vec![]);
        let c = DiagRat::constant_on(z_live(0), scalar::int(2));
        let got = x.eval(&v, &c).unwrap();
        // The d*a part dies in the quotient; 2*a survives.
        let expected = canonicalize(
            &LambdaPoly::constant(VElem::gen(0).scale(&scalar::int(2))),
            0,
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn edgeless_support_reduces_to_a_convolution() {
        // If the table is supported on the edgeless forest only, the
        // evaluator is f(w1, w2) convolved against the table value.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let full = ClassicalOp::random(module(), 2, 1, 1, 2, &mut rng);
        let edgeless = LineForest::parse("1 | 2").unwrap();
        let mut table = BTreeMap::new();
        if let Some(values) = full.table().get(&edgeless) {
            table.insert(edgeless.clone(), values.clone());
        }
        let op = ClassicalOp::new(module(), 2, 1, table).unwrap();
        assert!(!op.is_zero());
        let x = inverse_map(&op, true).unwrap();

        let f = DiagRat::from_parts(
            z_live(2),
            MPoly::one(),
            [((VarId::Z(1), VarId::Z(2)), 1u32)].into_iter().collect(),
        )
        .unwrap();
        let v = TensorElem::basis(2, vec![(0, 0), (1, 0)]);
        let got = x.eval(&v, &f).unwrap();

        // Direct route: rename z -> w, convolve, rewrite, canonicalize.
        let renamed = f
            .rename_var(VarId::Z(1), VarId::W(1))
            .unwrap()
            .rename_var(VarId::Z(2), VarId::W(2))
            .unwrap();
        let value = op.eval_forest(&edgeless, &v);
        let direct = canonicalize(
            &ClassicalOp::expand_line_lambdas(&edgeless, &convolve(&renamed, &value)),
            2,
        );
        assert_eq!(got, direct);
    }

    #[test]
    fn pruning_does_not_change_the_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=3u32 {
            let op = ClassicalOp::random(module(), n, 1, 1, 1, &mut rng);
            let fast = inverse_map(&op, true).unwrap();
            let slow = inverse_map(&op, false).unwrap();
            let v = TensorElem::basis(n, vec![(1, 0); n as usize]);
            let mut funcs = vec![DiagRat::one(n)];
            if n >= 2 {
                funcs.push(p_gamma(
                    &crate::graphs::DiGraph::new(n, vec![(1, 2)]).unwrap(),
                ));
                funcs.push(
                    DiagRat::from_mpoly(n, z(1).sub(&z(2)))
                        .unwrap(),
                );
            }
            if n >= 3 {
                funcs.push(p_gamma(
                    &crate::graphs::DiGraph::new(n, vec![(1, 2), (1, 3)]).unwrap(),
                ));
            }
            for f in &funcs {
                assert_eq!(fast.eval(&v, f).unwrap(), slow.eval(&v, f).unwrap());
            }
        }
    }

    #[test]
    fn unvalidated_tables_are_rejected() {
        let mut table = BTreeMap::new();
        let mut values = BTreeMap::new();
        // Degree mismatch: s = 1, t = 0, r = 0 demands degree 1, value has 0.
        values.insert(
            TensorKey::from([(0, 0), (0, 0)]),
            LambdaPoly::constant(VElem::gen(0)),
        );
        table.insert(LineForest::parse("1>2").unwrap(), values);
        let op = ClassicalOp::new(module(), 2, 0, table).unwrap();
        assert!(matches!(
            inverse_map(&op, true),
            Err(ChiralError::InvalidOperation(_))
        ));
    }

    #[test]
    fn monomial_splits_carry_binomial_multiplicities() {
        let mono = Monomial::var_pow(VarId::Lambda(1), 2);
        let got = splits(&mono);
        assert_eq!(got.len(), 3);
        let total: crate::algebra::Scalar = got.iter().map(|(_, _, c)| c.clone()).sum();
        assert_eq!(total, scalar::int(4));
    }
}
