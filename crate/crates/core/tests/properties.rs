//! Randomized algebraic properties: ring axioms for the polynomial and
//! localized-function layers, calculus rules, and the parser round trip.

use std::collections::BTreeMap;

use proptest::prelude::*;

use chiral_core::algebra::{scalar, z_live};
use chiral_core::{parse_diagrat, serialize_diagrat, DiagRat, MPoly, VarId};

const N: u32 = 3;

/// A sparse polynomial in z1..z3 with small coefficients and exponents.
fn arb_mpoly() -> impl Strategy<Value = MPoly> {
    let term = (
        prop::collection::vec((1..=N, 0u32..3), 0..3),
        -4i64..=4,
    );
    prop::collection::vec(term, 0..4).prop_map(|terms| {
        let mut out = MPoly::zero();
        for (vars, c) in terms {
            let mut mono = MPoly::constant(scalar::int(c));
            for (i, e) in vars {
                mono = mono.mul(&MPoly::var(VarId::Z(i)).pow(e));
            }
            out = out.add(&mono);
        }
        out
    })
}

/// A localized function on z1..z3: sparse numerator over up to two
/// diagonal pole factors.
fn arb_diagrat() -> impl Strategy<Value = DiagRat> {
    let pole = (1..=N, 1..=N, 1u32..=2);
    (arb_mpoly(), prop::collection::vec(pole, 0..3)).prop_map(|(num, raw_poles)| {
        let mut poles = BTreeMap::new();
        for (a, b, k) in raw_poles {
            if a == b {
                continue;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            poles.insert((VarId::Z(lo), VarId::Z(hi)), k);
        }
        DiagRat::from_parts(z_live(N), num, poles).expect("generated parts are well formed")
    })
}

proptest! {
    #[test]
    fn polynomial_ring_axioms(a in arb_mpoly(), b in arb_mpoly(), c in arb_mpoly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), MPoly::zero());
        prop_assert_eq!(a.mul(&MPoly::one()), a.clone());
    }

    #[test]
    fn localized_ring_axioms(a in arb_diagrat(), b in arb_diagrat(), c in arb_diagrat()) {
        let ab = a.add(&b).unwrap();
        prop_assert_eq!(&ab, &b.add(&a).unwrap());
        prop_assert_eq!(
            ab.add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        let amb = a.mul(&b).unwrap();
        prop_assert_eq!(&amb, &b.mul(&a).unwrap());
        prop_assert_eq!(
            amb.mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.sub(&a).unwrap(), DiagRat::zero(N));
        prop_assert_eq!(a.neg().neg(), a.clone());
    }

    #[test]
    fn derivative_is_a_derivation(a in arb_diagrat(), b in arb_diagrat(), i in 1..=N) {
        let v = VarId::Z(i);
        let lhs = a.mul(&b).unwrap().diff_z(v).unwrap();
        let rhs = a
            .diff_z(v)
            .unwrap()
            .mul(&b)
            .unwrap()
            .add(&a.mul(&b.diff_z(v).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn serialization_round_trips(a in arb_diagrat()) {
        let text = serialize_diagrat(&a);
        let back = parse_diagrat(&text, N).expect("serialized output reparses");
        prop_assert_eq!(back, a);
    }
}
