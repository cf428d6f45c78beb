//! Independent closed-form evaluators used to cross-check the general
//! machinery on two special shapes of table:
//!
//! * two slots, input `(z1-z2)^m`: a two-term formula combining the
//!   `m`-fold derivative (or antiderivative) of the edgeless value with a
//!   binomially weighted sum over the line value;
//! * three slots, table supported on the single full line `1>2>3`: a
//!   two-stage iterated residue of `f(z1, z2, 0)` against the shift
//!   operators `li + di` acting on the tensor.
//!
//! Neither path touches the forest transforms or the convolution; they
//! share only the table lookup and the quotient normal form.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::algebra::{scalar, DiagRat, MPoly, Monomial, Scalar, VarId};
use crate::calculus::LambdaPoly;
use crate::graphs::LineForest;
use crate::modules::{
    big_lambda_vars, canonical_rep, canonicalize, check_eval_input, ChiralError, ClassicalOp,
    QuotElem, TensorElem,
};

/// Generalized binomial coefficient `e (e-1) ... (e-j+1) / j!` for integer
/// `e` of either sign.
fn genbinom(e: i64, j: u32) -> Scalar {
    let mut num = scalar::one();
    for t in 0..i64::from(j) {
        num *= scalar::int(e - t);
    }
    num / scalar::factorial(j)
}

/// Evaluates a two-slot operation on `v1 (x) v2 (x) (z1-z2)^m` in closed
/// form: the sign-twisted `m`-fold derivative (antiderivative for negative
/// `m`, normalized without constant term) of the edgeless value, plus for
/// negative `m` the divided-power shift of slot one fed to the line value.
pub fn closed_form_n2(
    y: &ClassicalOp,
    v: &TensorElem,
    m: i32,
) -> Result<QuotElem, ChiralError> {
    if y.n() != 2 || v.n() != 2 {
        return Err(ChiralError::ArityMismatch {
            expected: 2,
            got: if y.n() != 2 { y.n() } else { v.n() },
        });
    }
    let edgeless = LineForest::new(2, vec![vec![1], vec![2]]).expect("canonical forest");
    let line = LineForest::new(2, vec![vec![1, 2]]).expect("canonical forest");

    // First term: (-1)^m times the m-fold lambda-derivative of the
    // edgeless class, written in its normal form in l1 alone.
    let expanded = ClassicalOp::expand_line_lambdas(&edgeless, &y.eval_forest(&edgeless, v));
    let base = canonicalize(&expanded, 2);
    let mut first = base.poly().clone();
    if m >= 0 {
        for _ in 0..m {
            first = first.diff(VarId::Lambda(1));
        }
    } else {
        let s = (-m) as u32;
        let mut shifted = LambdaPoly::zero();
        for (mono, c) in first.terms() {
            let k = mono.exp(VarId::Lambda(1));
            let factor = scalar::factorial(k) / scalar::factorial(k + s);
            shifted.add_term(
                Monomial::var_pow(VarId::Lambda(1), k + s),
                c.scale(&factor),
            );
        }
        first = shifted;
    }
    let mut raw = first.scale(&scalar::neg_one_pow(i64::from(m)));

    // Second term, present only for negative m: the divided power
    // (l1 + d1)^(k) spread over the line value, which is independent of
    // its per-line variable after reduction.
    if m < 0 {
        let k = (-m - 1) as u32;
        let sign = scalar::neg_one_pow(i64::from(m) + 1);
        let mut u = v.clone();
        let mut shifts: Vec<TensorElem> = vec![u.clone()];
        for _ in 0..k {
            u = u.apply_d_at(1);
            shifts.push(u.clone());
        }
        for j in 0..=k {
            let value = y.eval_forest(&line, &shifts[(k - j) as usize]);
            let class = canonical_rep(&value, &big_lambda_vars(1));
            if class.is_zero() {
                continue;
            }
            let coeff = &sign / (scalar::factorial(j) * scalar::factorial(k - j));
            raw = raw.add(
                &class
                    .mul_mono(&Monomial::var_pow(VarId::Lambda(1), j))
                    .scale(&coeff),
            );
        }
    }
    Ok(canonicalize(&raw, 2))
}

/// A formal sum of `l`-monomials attached to tensors, closed under the
/// shift operators `li + di`.
type Carrier = BTreeMap<Monomial, TensorElem>;

fn carrier_add(carrier: &mut Carrier, mono: Monomial, u: TensorElem) {
    if u.is_zero() {
        return;
    }
    match carrier.entry(mono) {
        Entry::Occupied(mut slot) => {
            let merged = slot.get().add(&u);
            if merged.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = merged;
            }
        }
        Entry::Vacant(slot) => {
            slot.insert(u);
        }
    }
}

/// Multiplies the carrier by `sum over the given slots of (li + di)`.
fn apply_shift_sum(carrier: &Carrier, slots: &[u32]) -> Carrier {
    let mut out = Carrier::new();
    for (mono, u) in carrier {
        for &i in slots {
            carrier_add(
                &mut out,
                mono.mul(&Monomial::var_pow(VarId::Lambda(i), 1)),
                u.clone(),
            );
            carrier_add(&mut out, mono.clone(), u.apply_d_at(i));
        }
    }
    out
}

/// Evaluates a three-slot operation supported on the single full line
/// `1>2>3` by the iterated-residue formula: expand `f(z1, z2, 0)` in the
/// local bases at `z1 = z2` and `z2 = 0`, read off the two residues
/// against the exponential of shift operators, and feed the resulting
/// tensors to the line value.
pub fn single_line_n3(
    y: &ClassicalOp,
    v: &TensorElem,
    f: &DiagRat,
) -> Result<QuotElem, ChiralError> {
    if y.n() != 3 {
        return Err(ChiralError::ArityMismatch {
            expected: 3,
            got: y.n(),
        });
    }
    check_eval_input(3, v, f)?;
    let line = LineForest::new(3, vec![vec![1, 2, 3]]).expect("canonical forest");
    for forest in y.table().keys() {
        if forest != &line {
            return Err(ChiralError::InvalidOperation(format!(
                "closed form needs support on `{}` only, found `{}`",
                line.display_text(),
                forest.display_text()
            )));
        }
    }

    let k12 = i64::from(f.poles().get(&(VarId::Z(1), VarId::Z(2))).copied().unwrap_or(0));
    let k13 = i64::from(f.poles().get(&(VarId::Z(1), VarId::Z(3))).copied().unwrap_or(0));
    let k23 = i64::from(f.poles().get(&(VarId::Z(2), VarId::Z(3))).copied().unwrap_or(0));

    // Numerator at z3 = 0, written in the difference z1 - z2 and in z2.
    let num0 = f
        .numerator()
        .substitute(VarId::Z(3), &MPoly::zero())
        .substitute(
            VarId::Z(1),
            &MPoly::var(VarId::X(1)).add(&MPoly::var(VarId::X(2))),
        )
        .substitute(VarId::Z(2), &MPoly::var(VarId::X(2)));

    let mut raw: LambdaPoly<crate::modules::VElem> = LambdaPoly::zero();
    for (mono, c) in num0.terms() {
        let e12 = i64::from(mono.exp(VarId::X(1))) - k12;
        let e1 = -k13;
        let e2 = i64::from(mono.exp(VarId::X(2))) - k23;
        if e12 >= 0 {
            continue;
        }
        for j in 0..=(-1 - e12) {
            let t = (-1 - e12 - j) as u32;
            let e_mid = e1 - j + e2;
            let tp = -1 - e_mid;
            if tp < 0 {
                continue;
            }
            let tp = tp as u32;
            let coeff = c.clone()
                * genbinom(e1, j as u32)
                * scalar::neg_one_pow(i64::from(t) + i64::from(tp))
                / (scalar::factorial(t) * scalar::factorial(tp));
            if coeff == scalar::zero() {
                continue;
            }
            let mut carrier: Carrier = BTreeMap::new();
            carrier_add(&mut carrier, Monomial::unit(), v.clone());
            for _ in 0..t {
                carrier = apply_shift_sum(&carrier, &[1]);
            }
            for _ in 0..tp {
                carrier = apply_shift_sum(&carrier, &[1, 2]);
            }
            for (lmono, u) in &carrier {
                let value = y.eval_forest(&line, u);
                if value.is_zero() {
                    continue;
                }
                let expanded = ClassicalOp::expand_line_lambdas(&line, &value);
                raw = raw.add(&expanded.mul_mono(lmono).scale(&coeff));
            }
        }
    }
    Ok(canonicalize(&raw, 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::z_live;
    use crate::calculus::LambdaPoly;
    use crate::iso::{inverse_map, spanning_functions};
    use crate::modules::{FreeDModule, TensorKey, VElem};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn module() -> Arc<FreeDModule> {
        Arc::new(FreeDModule::rank2_graded())
    }

    fn power_input(m: i32) -> DiagRat {
        let diff = MPoly::var(VarId::Z(1)).sub(&MPoly::var(VarId::Z(2)));
        if m >= 0 {
            DiagRat::from_mpoly(2, diff.pow(m as u32)).unwrap()
        } else {
            DiagRat::from_parts(
                z_live(2),
                MPoly::one(),
                [((VarId::Z(1), VarId::Z(2)), (-m) as u32)]
                    .into_iter()
                    .collect(),
            )
            .unwrap()
        }
    }

    /// The fixed two-slot table used for the frozen cases: edgeless value
    /// `L1*a` and line value `b` on the lowest key.
    fn pinned_n2() -> ClassicalOp {
        let mut table = BTreeMap::new();
        let mut edgeless_values = BTreeMap::new();
        edgeless_values.insert(
            TensorKey::from([(0, 0), (0, 0)]),
            LambdaPoly::from_term(
                Monomial::var_pow(VarId::BigLambda(1), 1),
                VElem::gen(0),
            ),
        );
        table.insert(
            LineForest::new(2, vec![vec![1], vec![2]]).unwrap(),
            edgeless_values,
        );
        let mut line_values = BTreeMap::new();
        line_values.insert(
            TensorKey::from([(0, 0), (0, 0)]),
            LambdaPoly::constant(VElem::gen(1)),
        );
        table.insert(LineForest::new(2, vec![vec![1, 2]]).unwrap(), line_values);
        ClassicalOp::new(module(), 2, 0, table).unwrap()
    }

    fn quot_of(raw: LambdaPoly<VElem>) -> QuotElem {
        canonicalize(&raw, 2)
    }

    fn l1_pow_gen(k: u32, c: Scalar, g: u32, dpow: u32) -> LambdaPoly<VElem> {
        let mut velem = VElem::zero();
        velem.add_term(g, dpow, c);
        LambdaPoly::from_term(Monomial::var_pow(VarId::Lambda(1), k), velem)
    }

    #[test]
    fn two_slot_closed_form_matches_pinned_values() {
        let y = pinned_n2();
        assert!(y.validate().is_empty());
        let v = TensorElem::basis(2, vec![(0, 0), (0, 0)]);

        // m = 0 keeps the edgeless class, l1*a.
        let expect0 = quot_of(l1_pow_gen(1, scalar::one(), 0, 0));
        assert_eq!(closed_form_n2(&y, &v, 0).unwrap(), expect0);

        // m = 1: minus the derivative, -a; m = 2, 3: zero.
        let expect1 = quot_of(l1_pow_gen(0, scalar::int(-1), 0, 0));
        assert_eq!(closed_form_n2(&y, &v, 1).unwrap(), expect1);
        assert!(closed_form_n2(&y, &v, 2).unwrap().is_zero());
        assert!(closed_form_n2(&y, &v, 3).unwrap().is_zero());

        // m = -1: -(1/2) l1^2 a + b.
        let expect_m1 = quot_of(
            l1_pow_gen(2, scalar::ratio(-1, 2), 0, 0).add(&l1_pow_gen(0, scalar::one(), 1, 0)),
        );
        assert_eq!(closed_form_n2(&y, &v, -1).unwrap(), expect_m1);

        // m = -2: (1/6) l1^3 a - l1 b.
        let expect_m2 = quot_of(
            l1_pow_gen(3, scalar::ratio(1, 6), 0, 0).add(&l1_pow_gen(1, scalar::int(-1), 1, 0)),
        );
        assert_eq!(closed_form_n2(&y, &v, -2).unwrap(), expect_m2);

        // m = -3: -(1/24) l1^4 a + (1/2) l1^2 b.
        let expect_m3 = quot_of(
            l1_pow_gen(4, scalar::ratio(-1, 24), 0, 0)
                .add(&l1_pow_gen(2, scalar::ratio(1, 2), 1, 0)),
        );
        assert_eq!(closed_form_n2(&y, &v, -3).unwrap(), expect_m3);
    }

    #[test]
    fn two_slot_closed_form_matches_the_general_evaluator() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for r in 0..=1i64 {
            let y = ClassicalOp::random(module(), 2, r, 1, 2, &mut rng);
            let x = inverse_map(&y, true).unwrap();
            for key in [
                vec![(0, 0), (0, 0)],
                vec![(0, 0), (1, 0)],
                vec![(1, 0), (0, 0)],
                vec![(1, 1), (1, 0)],
            ] {
                let v = TensorElem::basis(2, key);
                for m in -3..=3i32 {
                    let direct = closed_form_n2(&y, &v, m).unwrap();
                    let general = x.eval(&v, &power_input(m)).unwrap();
                    assert_eq!(direct, general, "split at r={r}, m={m}");
                }
            }
        }
    }

    /// The fixed three-slot table for the frozen cases: line value `b` on
    /// the lowest key and `L1*b` on the key with one operator power in the
    /// first slot.
    fn pinned_n3() -> ClassicalOp {
        let line = LineForest::new(3, vec![vec![1, 2, 3]]).unwrap();
        let mut values = BTreeMap::new();
        values.insert(
            TensorKey::from([(0, 0), (0, 0), (0, 0)]),
            LambdaPoly::constant(VElem::gen(1)),
        );
        values.insert(
            TensorKey::from([(0, 1), (0, 0), (0, 0)]),
            LambdaPoly::from_term(
                Monomial::var_pow(VarId::BigLambda(1), 1),
                VElem::gen(1),
            ),
        );
        let mut table = BTreeMap::new();
        table.insert(line, values);
        ClassicalOp::new(module(), 3, 1, table).unwrap()
    }

    fn pole_input(k12: u32, k13: u32, k23: u32) -> DiagRat {
        let mut poles = BTreeMap::new();
        if k12 > 0 {
            poles.insert((VarId::Z(1), VarId::Z(2)), k12);
        }
        if k13 > 0 {
            poles.insert((VarId::Z(1), VarId::Z(3)), k13);
        }
        if k23 > 0 {
            poles.insert((VarId::Z(2), VarId::Z(3)), k23);
        }
        DiagRat::from_parts(z_live(3), MPoly::one(), poles).unwrap()
    }

    #[test]
    fn three_slot_residues_match_pinned_values() {
        let y = pinned_n3();
        assert!(y.validate().is_empty());
        let v = TensorElem::basis(3, vec![(0, 0), (0, 0), (0, 0)]);
        let module = module();

        // The product of the two line poles returns the stored value.
        let got = single_line_n3(&y, &v, &pole_input(1, 0, 1)).unwrap();
        let expected = canonicalize(&LambdaPoly::constant(VElem::gen(1)), 3);
        assert_eq!(got, expected, "got {}", got.display_text(&module));

        // A single pole cannot reach both residues.
        assert!(single_line_n3(&y, &v, &pole_input(1, 0, 0))
            .unwrap()
            .is_zero());
        assert!(single_line_n3(&y, &v, &pole_input(0, 0, 1))
            .unwrap()
            .is_zero());

        // Doubling the first pole brings down one shift of slot one:
        // -(l1 b) minus the stored value at the slot-one bump; after
        // reduction this is -l1 b + d b, checked via the raw expansion.
        let got = single_line_n3(&y, &v, &pole_input(2, 0, 1)).unwrap();
        let mut raw: LambdaPoly<VElem> = LambdaPoly::zero();
        raw.add_term(
            Monomial::var_pow(VarId::Lambda(1), 1),
            VElem::gen(1).scale(&scalar::int(-1)),
        );
        let bump = ClassicalOp::expand_line_lambdas(
            &LineForest::new(3, vec![vec![1, 2, 3]]).unwrap(),
            &LambdaPoly::from_term(Monomial::var_pow(VarId::BigLambda(1), 1), VElem::gen(1)),
        );
        raw = raw.sub(&bump);
        assert_eq!(got, canonicalize(&raw, 3));

        // Doubling the last pole instead brings down the full shift sum:
        // -(l1+l2)b - (value at the slot-one bump) - 0.
        let got = single_line_n3(&y, &v, &pole_input(1, 0, 2)).unwrap();
        let mut raw: LambdaPoly<VElem> = LambdaPoly::zero();
        raw.add_term(
            Monomial::var_pow(VarId::Lambda(1), 1),
            VElem::gen(1).scale(&scalar::int(-1)),
        );
        raw.add_term(
            Monomial::var_pow(VarId::Lambda(2), 1),
            VElem::gen(1).scale(&scalar::int(-1)),
        );
        raw = raw.sub(&bump);
        assert_eq!(got, canonicalize(&raw, 3));
    }

    #[test]
    fn three_slot_residues_match_the_general_evaluator() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let line = LineForest::new(3, vec![vec![1, 2, 3]]).unwrap();
        let full = ClassicalOp::random(module(), 3, 1, 1, 1, &mut rng);
        let mut table = BTreeMap::new();
        if let Some(values) = full.table().get(&line) {
            table.insert(line.clone(), values.clone());
        }
        let y = ClassicalOp::new(module(), 3, 1, table).unwrap();
        assert!(!y.is_zero());
        let x = inverse_map(&y, true).unwrap();

        let tensors = [
            TensorElem::basis(3, vec![(0, 0), (0, 0), (0, 0)]),
            TensorElem::basis(3, vec![(1, 0), (0, 1), (0, 0)]),
            TensorElem::basis(3, vec![(0, 1), (1, 0), (1, 0)]),
        ];
        for (label, f) in spanning_functions(3) {
            for v in &tensors {
                let direct = single_line_n3(&y, v, &f).unwrap();
                let general = x.eval(v, &f).unwrap();
                assert_eq!(direct, general, "split at f = {label}");
            }
        }
    }

    #[test]
    fn oracle_preconditions_are_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let y3 = ClassicalOp::random(module(), 3, 1, 1, 1, &mut rng);
        let v3 = TensorElem::basis(3, vec![(0, 0), (0, 0), (0, 0)]);
        // Support beyond the full line is rejected.
        assert!(matches!(
            single_line_n3(&y3, &v3, &DiagRat::one(3)),
            Err(ChiralError::InvalidOperation(_))
        ));
        // Arity mismatches are rejected.
        let v2 = TensorElem::basis(2, vec![(0, 0), (0, 0)]);
        assert!(matches!(
            closed_form_n2(&y3, &v2, 0),
            Err(ChiralError::ArityMismatch { .. })
        ));
    }
}
