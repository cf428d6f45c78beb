//! Rational functions whose poles are confined to diagonals `a = b` of a
//! set of live position variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::mpoly::MPoly;
use super::scalar::{self, Scalar};
use super::vars::VarId;

/// Errors for the exact-algebra layer.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable {0} is not live in this function")]
    NotLive(VarId),
    #[error("variable {0} is not a position variable")]
    NotAPosition(VarId),
    #[error("the two variables must be distinct, got {0} twice")]
    SameVariable(VarId),
    #[error("pole order is undefined for the zero function")]
    ZeroPoleOrder,
    #[error("cannot set {0} = {1}: the function has a pole on that diagonal")]
    PolePresent(VarId, VarId),
    #[error("operands live on different variable sets")]
    LiveSetMismatch,
    #[error("variable {0} is already live")]
    AlreadyLive(VarId),
    #[error("numerator uses variable {0} outside the live set")]
    ForeignVariable(VarId),
}

/// A rational function `N / prod (a - b)^k` over a finite set of live
/// position variables, with every denominator factor a difference of two
/// live variables.
///
/// Stored normalized: the numerator shares no factor `a - b` with the
/// denominator, denominator keys are ordered pairs `a < b` with positive
/// exponents, and the zero function has an empty denominator. Operations
/// that eliminate a variable (residues, diagonal substitution) keep the
/// remaining variables under their original names — the live set carries
/// the bookkeeping that the arity used to.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DiagRat {
    live: BTreeSet<VarId>,
    num: MPoly,
    poles: BTreeMap<(VarId, VarId), u32>,
}

/// The live set `{z1, ..., zn}`.
pub fn z_live(n: u32) -> BTreeSet<VarId> {
    (1..=n).map(VarId::Z).collect()
}

/// The live set `{w1, ..., wp}`.
pub fn w_live(p: u32) -> BTreeSet<VarId> {
    (1..=p).map(VarId::W).collect()
}

impl DiagRat {
    /// Zero on the live set `{z1..zn}`.
    pub fn zero(n: u32) -> Self {
        Self::zero_on(z_live(n))
    }

    /// One on the live set `{z1..zn}`.
    pub fn one(n: u32) -> Self {
        Self::from_mpoly(n, MPoly::one()).expect("constant is valid")
    }

    pub fn zero_on(live: BTreeSet<VarId>) -> Self {
        DiagRat {
            live,
            num: MPoly::zero(),
            poles: BTreeMap::new(),
        }
    }

    pub fn constant_on(live: BTreeSet<VarId>, c: Scalar) -> Self {
        DiagRat {
            live,
            num: MPoly::constant(c),
            poles: BTreeMap::new(),
        }
    }

    /// A polynomial in `{z1..zn}` viewed as a diagonal-localized function.
    pub fn from_mpoly(n: u32, num: MPoly) -> Result<Self, AlgebraError> {
        Self::from_parts(z_live(n), num, BTreeMap::new())
    }

    /// General constructor; validates variables and normalizes.
    pub fn from_parts(
        live: BTreeSet<VarId>,
        num: MPoly,
        poles: BTreeMap<(VarId, VarId), u32>,
    ) -> Result<Self, AlgebraError> {
        for v in &live {
            if !v.is_position() {
                return Err(AlgebraError::NotAPosition(*v));
            }
        }
        for v in num.vars() {
            if v.is_position() && !live.contains(&v) {
                return Err(AlgebraError::ForeignVariable(v));
            }
        }
        for (&(a, b), &k) in &poles {
            if !live.contains(&a) {
                return Err(AlgebraError::NotLive(a));
            }
            if !live.contains(&b) {
                return Err(AlgebraError::NotLive(b));
            }
            if a >= b {
                return Err(AlgebraError::SameVariable(a));
            }
            if k == 0 {
                return Err(AlgebraError::SameVariable(b));
            }
        }
        let mut out = DiagRat { live, num, poles };
        out.normalize();
        Ok(out)
    }

    pub fn live(&self) -> &BTreeSet<VarId> {
        &self.live
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn poles(&self) -> &BTreeMap<(VarId, VarId), u32> {
        &self.poles
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if the function is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.poles.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Number of distinct diagonal divisors in the denominator; for a
    /// single normalized fraction this is the per-term upper bound on the
    /// divisor filtration level.
    pub fn divisor_count(&self) -> usize {
        self.poles.len()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.poles.clear();
            return;
        }
        let keys: Vec<(VarId, VarId)> = self.poles.keys().copied().collect();
        for key in keys {
            let (a, b) = key;
            while let Some(&k) = self.poles.get(&key) {
                match self.num.div_exact_diff(a, b) {
                    Some(q) => {
                        self.num = q;
                        if k == 1 {
                            self.poles.remove(&key);
                            break;
                        } else {
                            self.poles.insert(key, k - 1);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    /// Multiplies by `(a - b)^{-k}` (a diagonal denominator factor).
    pub fn div_diag(&self, a: VarId, b: VarId, k: u32) -> Result<Self, AlgebraError> {
        if a == b {
            return Err(AlgebraError::SameVariable(a));
        }
        for v in [a, b] {
            if !self.live.contains(&v) {
                return Err(AlgebraError::NotLive(v));
            }
        }
        if k == 0 {
            return Ok(self.clone());
        }
        let (lo, hi, flip) = if a < b { (a, b, false) } else { (b, a, true) };
        let mut out = self.clone();
        *out.poles.entry((lo, hi)).or_insert(0) += k;
        if flip && k % 2 == 1 {
            out.num = out.num.neg();
        }
        out.normalize();
        Ok(out)
    }

    fn check_same_live(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.live == other.live {
            Ok(())
        } else {
            Err(AlgebraError::LiveSetMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_live(other)?;
        // Bring both numerators over the max-order common denominator.
        let mut target: BTreeMap<(VarId, VarId), u32> = self.poles.clone();
        for (&k, &v) in &other.poles {
            let e = target.entry(k).or_insert(0);
            *e = (*e).max(v);
        }
        let lift = |f: &DiagRat| -> MPoly {
            let mut num = f.num.clone();
            for (&(a, b), &k) in &target {
                let have = f.poles.get(&(a, b)).copied().unwrap_or(0);
                for _ in have..k {
                    num = num.mul(&MPoly::var(a).sub(&MPoly::var(b)));
                }
            }
            num
        };
        let num = lift(self).add(&lift(other));
        let mut out = DiagRat {
            live: self.live.clone(),
            num,
            poles: target,
        };
        out.normalize();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiagRat {
            live: self.live.clone(),
            num: self.num.neg(),
            poles: self.poles.clone(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = DiagRat {
            live: self.live.clone(),
            num: self.num.scale(s),
            poles: self.poles.clone(),
        };
        if out.num.is_zero() {
            out.poles.clear();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same_live(other)?;
        let mut poles = self.poles.clone();
        for (&k, &v) in &other.poles {
            *poles.entry(k).or_insert(0) += v;
        }
        let mut out = DiagRat {
            live: self.live.clone(),
            num: self.num.mul(&other.num),
            poles,
        };
        out.normalize();
        Ok(out)
    }

    /// Multiplies by a polynomial in the live variables.
    pub fn mul_mpoly(&self, p: &MPoly) -> Result<Self, AlgebraError> {
        for v in p.vars() {
            if v.is_position() && !self.live.contains(&v) {
                return Err(AlgebraError::ForeignVariable(v));
            }
        }
        let mut out = DiagRat {
            live: self.live.clone(),
            num: self.num.mul(p),
            poles: self.poles.clone(),
        };
        out.normalize();
        Ok(out)
    }

    /// Partial derivative with respect to a live position variable.
    pub fn diff_z(&self, v: VarId) -> Result<Self, AlgebraError> {
        if !self.live.contains(&v) {
            return Err(AlgebraError::NotLive(v));
        }
        // d(N / prod D_k^{d_k}) = N' / prod D_k^{d_k}
        //   + sum_k (-d_k * dD_k/dv) * N / (D_k^{d_k+1} prod_{j!=k} D_j^{d_j})
        let mut acc = DiagRat {
            live: self.live.clone(),
            num: self.num.diff(v),
            poles: if self.num.diff(v).is_zero() {
                BTreeMap::new()
            } else {
                self.poles.clone()
            },
        };
        acc.normalize();
        for (&(a, b), &k) in &self.poles {
            let sign = if v == a {
                1i64
            } else if v == b {
                -1i64
            } else {
                continue;
            };
            let mut term = DiagRat {
                live: self.live.clone(),
                num: self.num.scale(&scalar::int(-(k as i64) * sign)),
                poles: self.poles.clone(),
            };
            *term.poles.entry((a, b)).or_insert(0) += 1;
            term.normalize();
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Pole order along the diagonal `a = b`: positive for a pole,
    /// `-k` for a zero of multiplicity `k`, 0 when regular and nonzero
    /// there. Undefined (error) for the zero function.
    pub fn pole_order(&self, a: VarId, b: VarId) -> Result<i64, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPoleOrder);
        }
        if a == b {
            return Err(AlgebraError::SameVariable(a));
        }
        for v in [a, b] {
            if !self.live.contains(&v) {
                return Err(AlgebraError::NotLive(v));
            }
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&k) = self.poles.get(&key) {
            // Normalized: the numerator is not divisible by (a - b).
            Ok(k as i64)
        } else {
            Ok(-(self.num.multiplicity_of_diff(key.0, key.1) as i64))
        }
    }

    /// Restricts to the diagonal `a = b`: substitutes `a := b` and removes
    /// `a` from the live set. Requires no pole along that diagonal.
    pub fn substitute_equal(&self, a: VarId, b: VarId) -> Result<Self, AlgebraError> {
        if a == b {
            return Err(AlgebraError::SameVariable(a));
        }
        for v in [a, b] {
            if !self.live.contains(&v) {
                return Err(AlgebraError::NotLive(v));
            }
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if self.poles.contains_key(&key) {
            return Err(AlgebraError::PolePresent(a, b));
        }
        let mut out = self.rename_unchecked(a, b);
        out.live.remove(&a);
        out.normalize();
        Ok(out)
    }

    /// Renames live variable `old` to the fresh position variable `new`.
    pub fn rename_var(&self, old: VarId, new: VarId) -> Result<Self, AlgebraError> {
        if !self.live.contains(&old) {
            return Err(AlgebraError::NotLive(old));
        }
        if self.live.contains(&new) {
            return Err(AlgebraError::AlreadyLive(new));
        }
        if !new.is_position() {
            return Err(AlgebraError::NotAPosition(new));
        }
        let mut out = self.rename_unchecked(old, new);
        out.live.remove(&old);
        out.live.insert(new);
        out.normalize();
        Ok(out)
    }

    /// Rewrites numerator and poles under `old -> new`, merging pole keys
    /// and tracking orientation signs. Does not touch the live set.
    fn rename_unchecked(&self, old: VarId, new: VarId) -> Self {
        let num = self.num.substitute(old, &MPoly::var(new));
        let mut poles: BTreeMap<(VarId, VarId), u32> = BTreeMap::new();
        let mut sign_flips: u32 = 0;
        for (&(a, b), &k) in &self.poles {
            let (a2, b2) = (
                if a == old { new } else { a },
                if b == old { new } else { b },
            );
            debug_assert_ne!(a2, b2, "pole collapsed onto the renamed diagonal");
            let (lo, hi, flip) = if a2 < b2 {
                (a2, b2, false)
            } else {
                (b2, a2, true)
            };
            if flip {
                sign_flips += k;
            }
            *poles.entry((lo, hi)).or_insert(0) += k;
        }
        let num = if sign_flips % 2 == 1 { num.neg() } else { num };
        DiagRat {
            live: self.live.clone(),
            num,
            poles,
        }
    }

    /// True when the function is killed by the total translation operator
    /// `sum_v d/dv` over all live variables.
    pub fn is_translation_invariant(&self) -> bool {
        let mut acc = DiagRat::zero_on(self.live.clone());
        for &v in &self.live {
            acc = acc
                .add(&self.diff_z(v).expect("live variable"))
                .expect("same live set");
        }
        acc.is_zero()
    }

    /// Renders the canonical product form
    /// `(numerator)*(a-b)^-k*...`, grammar-compatible and deterministic.
    pub fn display_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let num_str = self.num.display_expanded();
        let needs_parens = self.num.num_terms() > 1 || num_str.starts_with('-');
        let mut out = String::new();
        if self.poles.is_empty() {
            return num_str;
        }
        if self.num.is_one() {
            // Denominator-only: just the product of pole factors.
        } else if needs_parens {
            out.push_str(&format!("({num_str})"));
        } else {
            out.push_str(&num_str);
        }
        for (&(a, b), &k) in &self.poles {
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&format!("({a}-{b})^-{k}"));
        }
        out
    }
}

impl fmt::Display for DiagRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zv(i: u32) -> VarId {
        VarId::Z(i)
    }

    /// `1/(z_i - z_j)` on n live variables.
    fn inv_diff(n: u32, i: u32, j: u32) -> DiagRat {
        DiagRat::one(n).div_diag(zv(i), zv(j), 1).unwrap()
    }

    fn zpoly(i: u32) -> MPoly {
        MPoly::var(zv(i))
    }

    fn diff_poly(i: u32, j: u32) -> MPoly {
        zpoly(i).sub(&zpoly(j))
    }

    #[test]
    fn sum_of_adjacent_inverses() {
        // 1/z12 + 1/z23 == z13 / (z12 z23), checked by cross-multiplying.
        let f = inv_diff(3, 1, 2).add(&inv_diff(3, 2, 3)).unwrap();
        let expected = DiagRat::from_mpoly(3, diff_poly(1, 3))
            .unwrap()
            .div_diag(zv(1), zv(2), 1)
            .unwrap()
            .div_diag(zv(2), zv(3), 1)
            .unwrap();
        assert_eq!(f, expected);
        assert_eq!(f.numerator(), &diff_poly(1, 3));
        assert_eq!(f.divisor_count(), 2);
    }

    #[test]
    fn normalization_cancels_shared_factors() {
        // (z1 - z2)^2 / (z1 - z2) normalizes to the polynomial z1 - z2.
        let f = DiagRat::from_mpoly(2, diff_poly(1, 2).mul(&diff_poly(1, 2)))
            .unwrap()
            .div_diag(zv(1), zv(2), 1)
            .unwrap();
        assert!(f.poles().is_empty());
        assert_eq!(f.numerator(), &diff_poly(1, 2));
    }

    #[test]
    fn orientation_flip_negates() {
        // 1/(z2 - z1) == -1/(z1 - z2).
        let f = DiagRat::one(2).div_diag(zv(2), zv(1), 1).unwrap();
        let g = inv_diff(2, 1, 2).neg();
        assert_eq!(f, g);
    }

    #[test]
    fn derivative_of_double_pole_product() {
        // d/dz1 [1/(z12 z13)] == -(z12 + z13)/(z12^2 z13^2),
        // i.e. numerator -(2 z1 - z2 - z3).
        let f = inv_diff(3, 1, 2)
            .mul(&inv_diff(3, 1, 3))
            .unwrap();
        let df = f.diff_z(zv(1)).unwrap();
        let expected_num = diff_poly(1, 2).add(&diff_poly(1, 3)).neg();
        let expected = DiagRat::from_mpoly(3, expected_num)
            .unwrap()
            .div_diag(zv(1), zv(2), 2)
            .unwrap()
            .div_diag(zv(1), zv(3), 2)
            .unwrap();
        assert_eq!(df, expected);
    }

    #[test]
    fn pole_orders_by_example() {
        let f = inv_diff(2, 1, 2).mul(&inv_diff(2, 1, 2)).unwrap();
        assert_eq!(f.pole_order(zv(1), zv(2)).unwrap(), 2);

        let g = DiagRat::from_mpoly(3, diff_poly(1, 2).mul(&diff_poly(1, 3))).unwrap();
        assert_eq!(g.pole_order(zv(1), zv(2)).unwrap(), -1);

        let h = DiagRat::from_mpoly(3, diff_poly(1, 2).add(&diff_poly(2, 3)))
            .unwrap()
            .div_diag(zv(1), zv(2), 1)
            .unwrap();
        assert_eq!(h.pole_order(zv(1), zv(2)).unwrap(), 1);
        assert_eq!(h.pole_order(zv(2), zv(1)).unwrap(), 1, "order is symmetric");

        assert_eq!(
            DiagRat::zero(2).pole_order(zv(1), zv(2)),
            Err(AlgebraError::ZeroPoleOrder)
        );
    }

    #[test]
    fn diagonal_restriction() {
        // (z12 + z23)/z13 at z1 = z2 becomes z23/z23 = 1.
        let f = DiagRat::from_mpoly(3, diff_poly(1, 2).add(&diff_poly(2, 3)))
            .unwrap()
            .div_diag(zv(1), zv(3), 1)
            .unwrap();
        let g = f.substitute_equal(zv(1), zv(2)).unwrap();
        assert_eq!(g.as_constant(), Some(scalar::one()));
        assert_eq!(g.live().len(), 2);

        // Substitution on a pole is refused.
        let h = inv_diff(2, 1, 2);
        assert_eq!(
            h.substitute_equal(zv(1), zv(2)),
            Err(AlgebraError::PolePresent(zv(1), zv(2)))
        );
    }

    #[test]
    fn substitution_can_merge_poles() {
        // 1/(z13 z23) at z1 = z2 becomes 1/z23^2.
        let f = inv_diff(3, 1, 3).mul(&inv_diff(3, 2, 3)).unwrap();
        let g = f.substitute_equal(zv(1), zv(2)).unwrap();
        assert_eq!(g.pole_order(zv(2), zv(3)).unwrap(), 2);
    }

    #[test]
    fn translation_invariance() {
        assert!(inv_diff(3, 1, 2).is_translation_invariant());
        assert!(inv_diff(3, 1, 2)
            .mul(&inv_diff(3, 2, 3))
            .unwrap()
            .is_translation_invariant());
        let f = DiagRat::from_mpoly(2, zpoly(1)).unwrap();
        assert!(!f.is_translation_invariant());
    }

    #[test]
    fn display_product_form() {
        let f = inv_diff(3, 1, 2).add(&inv_diff(3, 2, 3)).unwrap();
        assert_eq!(f.display_text(), "(z1-z3)*(z1-z2)^-1*(z2-z3)^-1");
        assert_eq!(DiagRat::zero(2).display_text(), "0");
        assert_eq!(
            inv_diff(2, 1, 2).display_text(),
            "(z1-z2)^-1",
            "unit numerator shows denominator only"
        );
    }
}
