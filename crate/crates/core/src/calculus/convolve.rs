//! Polynomials in the per-line `Lambda` variables over an abstract
//! coefficient space, and the convolution of a rational function of the `w`
//! variables against them.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num::Zero;

use crate::algebra::{scalar, DiagRat, MPoly, Monomial, Scalar, VarId};

use super::laurent::iota_expand;

/// What the convolution needs from a coefficient space: a module over the
/// rationals with decidable zero.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_c(&mut self, other: &Self);
    fn scale(&self, s: &Scalar) -> Self;
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_c(&mut self, other: &Self) {
        *self += other;
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

/// A polynomial in `lambda`- or `Lambda`-family variables with coefficients
/// in `C`. Exponents are plain; divided-power factorials enter only through
/// the formulas that consume these objects.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambdaPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for LambdaPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> LambdaPoly<C> {
    pub fn zero() -> Self {
        LambdaPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_term(m: Monomial, c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn constant(c: C) -> Self {
        Self::from_term(Monomial::unit(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign_c(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if Zero::is_zero(s) {
            return Self::zero();
        }
        LambdaPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale(s)))
                .collect(),
        }
    }

    /// Multiplies every term by a scalar monomial.
    pub fn mul_mono(&self, m: &Monomial) -> Self {
        LambdaPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul_var(&self, v: VarId) -> Self {
        self.mul_mono(&Monomial::var_pow(v, 1))
    }

    /// Multiplies by a scalar polynomial in the same variable family.
    pub fn mul_scalar_poly(&self, p: &MPoly) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (pm, pc) in p.terms() {
                out.add_term(m.mul(pm), c.scale(pc));
            }
        }
        out
    }

    /// The plain partial derivative in `v`.
    pub fn diff(&self, v: VarId) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                let lowered = m.div_var(v).expect("positive exponent");
                out.add_term(lowered, c.scale(&scalar::int(e as i64)));
            }
        }
        out
    }

    /// Substitutes the scalar polynomial `rep` for the variable `v`.
    pub fn substitute(&self, v: VarId, rep: &MPoly) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.strip_var(v);
            if e == 0 {
                out.add_term(rest, c.clone());
                continue;
            }
            for (pm, pc) in rep.pow(e).terms() {
                out.add_term(rest.mul(pm), c.scale(pc));
            }
        }
        out
    }

    /// Applies a coefficient-space map, dropping terms that land on zero.
    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LambdaPoly<D> {
        let mut out = LambdaPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Largest total degree among the monomials (zero polynomial: 0).
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }
}

impl LambdaPoly<Scalar> {
    pub fn from_mpoly(p: &MPoly) -> Self {
        let mut out = Self::zero();
        for (m, c) in p.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn to_mpoly(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

/// `b! / (b - a)!` for integers `0 <= b` and `a <= b` (where `a` may be
/// negative): a falling factorial for `a >= 0`, the reciprocal of a rising
/// one for `a < 0`.
fn shift_ratio(b: i64, a: i64) -> Scalar {
    debug_assert!(b >= 0 && a <= b);
    if a >= 0 {
        let mut out = scalar::one();
        for t in 0..a {
            out *= scalar::int(b - t);
        }
        out
    } else {
        let mut out = scalar::one();
        for t in 1..=(-a) {
            out *= scalar::int(b + t);
        }
        scalar::one() / out
    }
}

/// The convolution of `f`, a rational function of `w_1..w_p`, against a
/// polynomial in `Lambda_1..Lambda_p` over `C`.
///
/// Expanding `f` as a Laurent series `sum_a c_a w^a` in the nested domain,
/// each divided-power monomial `Lambda^(b)` of the polynomial is sent to
/// `sum_a c_a (-1)^{|a|} Lambda^(b-a)`, where only the finitely many series
/// terms with `a <= b` componentwise contribute. Coefficients in `C` ride
/// along untouched.
pub fn convolve<C: Coefficient>(f: &DiagRat, q: &LambdaPoly<C>) -> LambdaPoly<C> {
    let live: Vec<VarId> = f.live().iter().copied().collect();
    let line_index = |v: VarId| -> u32 {
        match v {
            VarId::W(l) => l,
            other => panic!("convolution needs a w-variable world, got {other}"),
        }
    };
    for v in q.vars() {
        assert!(
            matches!(v, VarId::BigLambda(l) if f.live().contains(&VarId::W(l))),
            "polynomial variable {v} has no matching w variable"
        );
    }
    let caps: BTreeMap<VarId, i64> = live
        .iter()
        .map(|&w| {
            let l = line_index(w);
            let cap = q
                .terms()
                .map(|(m, _)| m.exp(VarId::BigLambda(l)) as i64)
                .max()
                .unwrap_or(0);
            (w, cap)
        })
        .collect();
    let expansion = iota_expand(f, &caps);

    let mut out = LambdaPoly::zero();
    for (bmono, qc) in q.terms() {
        'series: for (a, ca) in expansion.terms() {
            let mut factor = ca.clone();
            let mut mono = Monomial::unit();
            let mut total_a: i64 = 0;
            for &wv in &live {
                let l = line_index(wv);
                let b = bmono.exp(VarId::BigLambda(l)) as i64;
                let av = a.get(&wv).copied().unwrap_or(0);
                if av > b {
                    continue 'series;
                }
                total_a += av;
                factor *= shift_ratio(b, av);
                mono = mono.mul(&Monomial::var_pow(VarId::BigLambda(l), (b - av) as u32));
            }
            factor *= scalar::neg_one_pow(total_a);
            out.add_term(mono, qc.scale(&factor));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::w_live;

    fn w(i: u32) -> VarId {
        VarId::W(i)
    }

    fn big(i: u32) -> VarId {
        VarId::BigLambda(i)
    }

    fn one_w(p: u32) -> DiagRat {
        DiagRat::constant_on(w_live(p), scalar::one())
    }

    fn w_diff() -> DiagRat {
        // w1 - w2 as a polynomial function on the 2-variable world
        DiagRat::from_parts(
            w_live(2),
            MPoly::var(w(1)).sub(&MPoly::var(w(2))),
            BTreeMap::new(),
        )
        .unwrap()
    }

    fn inv_w_diff() -> DiagRat {
        one_w(2).div_diag(w(1), w(2), 1).unwrap()
    }

    fn poly(terms: &[(&[(u32, u32)], i64)]) -> LambdaPoly<Scalar> {
        let mut out = LambdaPoly::zero();
        for (entries, c) in terms {
            let m = entries.iter().fold(Monomial::unit(), |m, &(i, e)| {
                m.mul(&Monomial::var_pow(big(i), e))
            });
            out.add_term(m, scalar::int(*c));
        }
        out
    }

    #[test]
    fn one_is_the_identity() {
        let q = poly(&[(&[(1, 2), (2, 1)], 3), (&[(1, 1)], -1), (&[], 7)]);
        assert_eq!(convolve(&one_w(2), &q), q);
    }

    #[test]
    fn simple_pole_against_product_of_lambdas() {
        // (1/(w1-w2)) * (L1 L2) = -(1/2) L1^2 L2 - (1/6) L1^3
        let q = poly(&[(&[(1, 1), (2, 1)], 1)]);
        let got = convolve(&inv_w_diff(), &q);
        let mut expect = LambdaPoly::zero();
        expect.add_term(
            Monomial::var_pow(big(1), 2).mul(&Monomial::var_pow(big(2), 1)),
            scalar::ratio(-1, 2),
        );
        expect.add_term(Monomial::var_pow(big(1), 3), scalar::ratio(-1, 6));
        assert_eq!(got, expect);
    }

    #[test]
    fn non_action_counterexample() {
        // Associativity fails across the product of functions:
        // (1/(w1-w2)) * ((w1-w2) * 1) = 0 because the inner convolution
        // already kills everything, while ((w1-w2)/(w1-w2)) * 1 = 1.
        let one_poly = poly(&[(&[], 1)]);
        let inner = convolve(&w_diff(), &one_poly);
        assert!(inner.is_zero());
        let lhs = convolve(&inv_w_diff(), &inner);
        assert!(lhs.is_zero());

        let collapsed = w_diff().mul(&inv_w_diff()).unwrap();
        let rhs = convolve(&collapsed, &one_poly);
        assert_eq!(rhs, one_poly);
    }

    #[test]
    fn w_multiplication_matches_derivative_rule() {
        // (w_l F) * Q = -d/dLambda_l (F * Q), on a mixed F and Q.
        let f = inv_w_diff();
        let wf = f
            .mul_mpoly(&MPoly::var(w(1)))
            .unwrap();
        let q = poly(&[(&[(1, 2), (2, 1)], 1), (&[(2, 2)], 2)]);
        let lhs = convolve(&wf, &q);
        let rhs = convolve(&f, &q).diff(big(1)).scale(&scalar::int(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lambda_commutator_matches_w_derivative() {
        // Lambda_l (F * Q) - F * (Lambda_l Q) = (dF/dw_l) * Q.
        let f = inv_w_diff();
        let q = poly(&[(&[(1, 1), (2, 2)], 1), (&[(1, 1)], -3)]);
        for l in [1u32, 2] {
            let lhs = convolve(&f, &q)
                .mul_var(big(l))
                .sub(&convolve(&f, &q.mul_var(big(l))));
            let rhs = convolve(&f.diff_z(w(l)).unwrap(), &q);
            assert_eq!(lhs, rhs, "line {l}");
        }
    }

    #[test]
    fn caveat_with_negative_series_exponents() {
        // -F * (dQ/dLambda_1) differs from (w_1 F) * Q when the series has
        // a term with a_1 < 0 while b_1 = 0: the witness F = 1/(w1-w2),
        // Q = Lambda_2.
        let f = inv_w_diff();
        let q = poly(&[(&[(2, 1)], 1)]);
        let lhs = convolve(&f.mul_mpoly(&MPoly::var(w(1))).unwrap(), &q);
        let rhs = convolve(&f, &q.diff(big(1))).scale(&scalar::int(-1));
        assert!(rhs.is_zero(), "derivative of Q in Lambda_1 is zero");
        assert!(!lhs.is_zero(), "left side keeps a_1 < 0 contributions");
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn shift_ratio_values() {
        assert_eq!(shift_ratio(3, 2), scalar::int(6));
        assert_eq!(shift_ratio(3, 3), scalar::int(6));
        assert_eq!(shift_ratio(3, 0), scalar::one());
        assert_eq!(shift_ratio(1, -1), scalar::ratio(1, 2));
        assert_eq!(shift_ratio(0, -2), scalar::ratio(1, 2));
    }
}
