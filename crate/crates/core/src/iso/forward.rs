//! From an evaluator back to a table-backed operation of a given degree.
//!
//! For each line forest `G` with `s` edges and each reduced basis key of
//! total generator degree `t`, the evaluator is applied to the basis tensor
//! together with the product of simple poles along `G`. The result is
//! projected onto generator degree `s + t - r`; parts above that degree are
//! a contract violation and reported, parts below are lower-order and
//! dropped. The projected polynomial must depend on the `l`-variables only
//! through per-line sums; the per-line variables are recovered by
//! substituting the leading vertex of each line and verified by expanding
//! back.

use std::collections::BTreeMap;

use crate::algebra::{MPoly, VarId};
use crate::calculus::LambdaPoly;
use crate::graphs::{enumerate_all_line_forests, p_gamma, LineForest};
use crate::modules::{
    big_lambda_vars, canonical_rep, enumerate_keys, ChiralEval, ClassicalOp, TensorElem,
    TensorKey, VElem,
};

use super::IsoError;

/// Rewrites a projected value in `l1..l(n-1)` as a polynomial in the
/// per-line variables, or reports that it is not line-shaped.
fn recover_line_poly(
    forest: &LineForest,
    key: &TensorKey,
    module: &crate::modules::FreeDModule,
    n: u32,
    projected: &LambdaPoly<VElem>,
) -> Result<LambdaPoly<VElem>, IsoError> {
    let not_line_shaped = || IsoError::NotLineShaped {
        forest: forest.display_text(),
        key: TensorElem::basis(n, key.clone()).display_text(module),
    };
    if n == 0 {
        return Ok(projected.clone());
    }
    let lstar = forest.line_of(n) - 1;
    let mut substituted = projected.clone();
    for (ell, line) in forest.lines().iter().enumerate() {
        if ell == lstar {
            continue;
        }
        let leader = line[0];
        let target = MPoly::var(VarId::BigLambda(ell as u32 + 1));
        substituted = substituted.substitute(VarId::Lambda(leader), &target);
        for &i in &line[1..] {
            substituted = substituted.substitute(VarId::Lambda(i), &MPoly::zero());
        }
    }
    for &i in &forest.lines()[lstar] {
        if i < n {
            substituted = substituted.substitute(VarId::Lambda(i), &MPoly::zero());
        }
    }
    if &ClassicalOp::expand_line_lambdas(forest, &substituted) != projected {
        return Err(not_line_shaped());
    }
    Ok(substituted)
}

/// Reads off the table of the degree-`r` operation underlying an
/// evaluator, probing reduced keys with slot operator-powers up to
/// `max_dpow`. Fails if any probe output exceeds the degree bound or is
/// not a per-line polynomial.
pub fn forward_map(
    x: &dyn ChiralEval,
    r: i64,
    max_dpow: u32,
) -> Result<ClassicalOp, IsoError> {
    let n = x.n();
    let module = x.module().clone();
    let mut table: BTreeMap<LineForest, BTreeMap<TensorKey, LambdaPoly<VElem>>> = BTreeMap::new();
    for forest in enumerate_all_line_forests(n) {
        let s = forest.num_edges() as i64;
        let p = forest.num_lines() as u32;
        let vars = big_lambda_vars(p);
        let f = p_gamma(&forest.to_digraph());
        let mut last_slots = vec![false; n as usize];
        for line in forest.lines() {
            last_slots[(*line.last().expect("lines are nonempty") - 1) as usize] = true;
        }
        let mut values: BTreeMap<TensorKey, LambdaPoly<VElem>> = BTreeMap::new();
        for key in enumerate_keys(&module, n, max_dpow, &last_slots) {
            let t = i64::from(TensorElem::key_degree(&module, &key));
            let target = s + t - r;
            let v = TensorElem::basis(n, key.clone());
            let out = x.eval(&v, &f)?;
            let mut projected = LambdaPoly::zero();
            for (mono, c) in out.poly().terms() {
                if let Some(found) = c.max_degree(&module) {
                    if i64::from(found) > target {
                        return Err(IsoError::FiltrationViolation {
                            forest: forest.display_text(),
                            key: v.display_text(&module),
                            found,
                            bound: target,
                        });
                    }
                }
                let kept = c.project_degree(&module, target);
                if !kept.is_zero() {
                    projected.add_term(mono.clone(), kept);
                }
            }
            if projected.is_zero() {
                continue;
            }
            let line_poly = recover_line_poly(&forest, &key, &module, n, &projected)?;
            let value = canonical_rep(&line_poly, &vars);
            if !value.is_zero() {
                values.insert(key, value);
            }
        }
        if !values.is_empty() {
            table.insert(forest, values);
        }
    }
    ClassicalOp::new(module, n, r, table).map_err(IsoError::Module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{scalar, DiagRat};
    use crate::iso::inverse_map;
    use crate::modules::{canonicalize, FnChiral, FreeDModule, QuotElem};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn module() -> Arc<FreeDModule> {
        Arc::new(FreeDModule::rank2_graded())
    }

    #[test]
    fn zero_evaluator_gives_the_zero_operation() {
        for n in 0..=3u32 {
            let zero = FnChiral::new(n, module(), move |v, _| Ok(QuotElem::zero(v.n())));
            let op = forward_map(&zero, 0, 1).unwrap();
            assert!(op.is_zero());
            assert!(op.validate().is_empty());
        }
    }

    #[test]
    fn round_trip_recovers_random_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 0..=2u32 {
            for r in 0..=1i64 {
                let y = ClassicalOp::random(module(), n, r, 1, 1, &mut rng);
                let x = inverse_map(&y, true).unwrap();
                let back = forward_map(x.as_ref(), r, 1).unwrap();
                assert!(back.validate().is_empty());
                assert!(
                    back.equivalent(&y),
                    "round trip drifted at n={n}, r={r}"
                );
            }
        }
    }

    #[test]
    fn recovered_tables_validate_and_are_canonical_per_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let y = ClassicalOp::random(module(), 2, 1, 1, 2, &mut rng);
        let x = inverse_map(&y, true).unwrap();
        let back = forward_map(x.as_ref(), 1, 1).unwrap();
        assert!(back.validate().is_empty());
        for (forest, values) in back.table() {
            let p = forest.num_lines() as u32;
            let vars = big_lambda_vars(p);
            for value in values.values() {
                assert_eq!(&canonical_rep(value, &vars), value);
            }
        }
    }

    #[test]
    fn degree_violations_are_reported_with_location() {
        // An evaluator pretending to have degree 1 while emitting degree-1
        // generators on a degree-0 probe: bound is t - 1 < 1.
        let high = FnChiral::new(1, module(), move |v, _| {
            let _ = v;
            Ok(canonicalize(
                &LambdaPoly::constant(VElem::gen(1)),
                1,
            ))
        });
        let err = forward_map(&high, 1, 0).unwrap_err();
        match err {
            IsoError::FiltrationViolation { found, bound, .. } => {
                assert_eq!(found, 1);
                assert!(i64::from(found) > bound);
            }
            other => panic!("expected a filtration violation, got {other:?}"),
        }
    }

    #[test]
    fn outputs_mixing_variables_within_a_line_are_rejected() {
        // At the full line over two slots, any dependence on l1 alone (not
        // through l1 + l2, which the normal form eliminates) cannot come
        // from a per-line table.
        let crooked = FnChiral::new(2, module(), move |v, f: &DiagRat| {
            if f.divisor_count() == 0 {
                return Ok(QuotElem::zero(v.n()));
            }
            let poly = LambdaPoly::constant(VElem::gen(1))
                .mul_var(crate::algebra::VarId::Lambda(1));
            Ok(canonicalize(&poly, 2))
        });
        let err = forward_map(&crooked, 0, 0).unwrap_err();
        assert!(matches!(err, IsoError::NotLineShaped { .. }));
    }

    #[test]
    fn scaling_the_evaluator_scales_the_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let y = ClassicalOp::random(module(), 2, 0, 1, 1, &mut rng);
        let x = inverse_map(&y, true).unwrap();
        let doubled = FnChiral::new(2, module(), move |v, f: &DiagRat| {
            Ok(x.eval(v, f)?.scale(&scalar::int(2)))
        });
        let back = forward_map(&doubled, 0, 1).unwrap();
        let mut expected_table = y.table().clone();
        for values in expected_table.values_mut() {
            for value in values.values_mut() {
                *value = value.scale(&scalar::int(2));
            }
        }
        let expected =
            ClassicalOp::new(module(), 2, 0, expected_table).unwrap();
        assert!(back.equivalent(&expected));
    }
}
