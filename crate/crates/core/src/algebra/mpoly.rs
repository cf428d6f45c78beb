//! Sparse multivariate polynomials over the rational scalars.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use super::scalar::{self, Scalar};
use super::vars::VarId;

/// A monomial: variables with positive exponents, sorted by variable.
///
/// Monomials are totally ordered degree-first, then lexicographically with
/// smaller variables more significant; the order only matters for
/// deterministic iteration and serialization.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    /// The empty monomial `1`.
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    /// Single variable to a power (power 0 gives the unit monomial).
    pub fn var_pow(v: VarId, k: u32) -> Self {
        if k == 0 {
            Monomial::unit()
        } else {
            Monomial(vec![(v, k)])
        }
    }

    /// Exponent of `v` (0 when absent).
    pub fn exp(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(u, _)| u)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// Sum of all exponents.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, k)| k as u64).sum()
    }

    /// The (variable, exponent) pairs in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of two monomials.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for &(v, k) in &other.0 {
            match out.binary_search_by_key(&v, |&(u, _)| u) {
                Ok(i) => out[i].1 += k,
                Err(i) => out.insert(i, (v, k)),
            }
        }
        Monomial(out)
    }

    /// Divides by `v` once; `None` when `v` is absent.
    pub fn div_var(&self, v: VarId) -> Option<Monomial> {
        let i = self.0.binary_search_by_key(&v, |&(u, _)| u).ok()?;
        let mut out = self.0.clone();
        if out[i].1 == 1 {
            out.remove(i);
        } else {
            out[i].1 -= 1;
        }
        Some(Monomial(out))
    }

    /// Removes `v` entirely, returning the removed exponent.
    pub fn strip_var(&self, v: VarId) -> (Monomial, u32) {
        match self.0.binary_search_by_key(&v, |&(u, _)| u) {
            Ok(i) => {
                let mut out = self.0.clone();
                let (_, k) = out.remove(i);
                (Monomial(out), k)
            }
            Err(_) => (self.clone(), 0),
        }
    }

    /// All variables appearing with positive exponent.
    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Same degree: lexicographic with the smaller variable more
        // significant and a larger exponent there winning.
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                // The side that still has variables has them at *larger*
                // VarIds, i.e. is smaller at the first missing slot.
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(&(va, ka)), Some(&(vb, kb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ka.cmp(&kb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, k) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{k}")?;
            }
        }
        Ok(())
    }
}

/// A sparse multivariate polynomial: monomial -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(), c);
        }
        p
    }

    pub fn var(v: VarId) -> Self {
        MPoly::from_mono(Monomial::var_pow(v, 1), scalar::one())
    }

    pub fn from_mono(m: Monomial, c: Scalar) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// The constant value when the polynomial has no variables at all.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::unit()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> MPoly {
        if s.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `v`.
    pub fn diff(&self, v: VarId) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let k = m.exp(v);
            if k > 0 {
                let m2 = m.div_var(v).expect("positive exponent");
                out.add_term(m2, c.clone() * scalar::int(k as i64));
            }
        }
        out
    }

    /// Substitutes `v := rep` everywhere.
    pub fn substitute(&self, v: VarId, rep: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        // Cache powers of the replacement as we go.
        let mut pows: Vec<MPoly> = vec![MPoly::one()];
        for (m, c) in &self.terms {
            let (rest, k) = m.strip_var(v);
            while pows.len() <= k as usize {
                let next = pows.last().unwrap().mul(rep);
                pows.push(next);
            }
            for (pm, pc) in &pows[k as usize].terms {
                out.add_term(rest.mul(pm), c.clone() * pc.clone());
            }
        }
        out
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// All variables that occur.
    pub fn vars(&self) -> std::collections::BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    /// Exact division by the difference `a - b` of two variables.
    ///
    /// Returns `None` when the division leaves a remainder. Division is by
    /// linear reduction on `a`: any term containing `a` is rewritten through
    /// `a = (a - b) + b`, so the loop strictly lowers the total `a`-weight
    /// and the remainder is `a`-free; a nonzero `a`-free remainder cannot be
    /// a multiple of `a - b`.
    pub fn div_exact_diff(&self, a: VarId, b: VarId) -> Option<MPoly> {
        assert_ne!(a, b, "difference of a variable with itself");
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        loop {
            let pick = rem
                .terms
                .iter()
                .rev()
                .find(|(m, _)| m.exp(a) > 0)
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = pick else { break };
            let m1 = m.div_var(a).expect("contains a");
            quot.add_term(m1.clone(), c.clone());
            // rem -= c * m1 * (a - b)  — cancels c*m and adds c*m1*b.
            rem.add_term(m, -c.clone());
            rem.add_term(m1.mul(&Monomial::var_pow(b, 1)), c);
        }
        if rem.is_zero() {
            Some(quot)
        } else {
            None
        }
    }

    /// Multiplicity of the factor `a - b`: the largest `k` with
    /// `(a - b)^k` dividing `self` exactly (0 for the zero polynomial).
    pub fn multiplicity_of_diff(&self, a: VarId, b: VarId) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact_diff(a, b) {
            k += 1;
            cur = q;
            if cur.is_zero() {
                break;
            }
        }
        k
    }

    /// Renders the polynomial as a grammar-compatible sum of monomial terms
    /// in descending monomial order: `3/2*z1^2*z2-z1+1`.
    pub fn display_expanded(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = scalar::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let coeff_is_one = abs.is_one();
            if m.is_unit() {
                out.push_str(&scalar::display(&abs));
            } else if coeff_is_one {
                out.push_str(&format!("{m}"));
            } else {
                out.push_str(&format!("{}*{m}", scalar::display(&abs)));
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_expanded())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u32) -> MPoly {
        MPoly::var(VarId::Z(i))
    }

    #[test]
    fn arithmetic_basics() {
        let p = z(1).add(&z(2)).mul(&z(1).sub(&z(2)));
        let q = z(1).mul(&z(1)).sub(&z(2).mul(&z(2)));
        assert_eq!(p, q, "(z1+z2)(z1-z2) == z1^2 - z2^2");
        assert!(p.sub(&q).is_zero());
    }

    #[test]
    fn derivative_of_product() {
        let p = z(1).mul(&z(1)).mul(&z(2)); // z1^2 z2
        assert_eq!(p.diff(VarId::Z(1)), z(1).mul(&z(2)).scale(&scalar::int(2)));
        assert_eq!(p.diff(VarId::Z(2)), z(1).mul(&z(1)));
        assert!(p.diff(VarId::Z(3)).is_zero());
    }

    #[test]
    fn substitution_merges_exponents() {
        // (z1*z2) with z1 := z2 gives z2^2.
        let p = z(1).mul(&z(2));
        let s = p.substitute(VarId::Z(1), &z(2));
        assert_eq!(s, z(2).mul(&z(2)));
    }

    #[test]
    fn exact_division_by_difference() {
        // z1^2 - z2^2 = (z1 - z2)(z1 + z2)
        let p = z(1).mul(&z(1)).sub(&z(2).mul(&z(2)));
        let q = p.div_exact_diff(VarId::Z(1), VarId::Z(2)).expect("divides");
        assert_eq!(q, z(1).add(&z(2)));
        // z1^2 + z2^2 is not divisible.
        let p2 = z(1).mul(&z(1)).add(&z(2).mul(&z(2)));
        assert!(p2.div_exact_diff(VarId::Z(1), VarId::Z(2)).is_none());
    }

    #[test]
    fn multiplicity_counts_repeated_factors() {
        let d = z(1).sub(&z(2));
        let p = d.mul(&d).mul(&z(1).add(&z(3)));
        assert_eq!(p.multiplicity_of_diff(VarId::Z(1), VarId::Z(2)), 2);
        assert_eq!(p.multiplicity_of_diff(VarId::Z(1), VarId::Z(3)), 0);
    }

    #[test]
    fn display_is_deterministic_and_readable() {
        let p = z(1)
            .mul(&z(1))
            .scale(&scalar::ratio(3, 2))
            .sub(&z(2))
            .add(&MPoly::one());
        assert_eq!(p.display_expanded(), "3/2*z1^2-z2+1");
    }

    #[test]
    fn monomial_order_is_degree_then_position() {
        let a = Monomial::var_pow(VarId::Z(1), 1);
        let b = Monomial::var_pow(VarId::Z(2), 1);
        let ab = a.mul(&b);
        assert!(ab > a, "higher degree wins");
        assert!(a > b, "same degree: smaller variable wins");
    }
}
