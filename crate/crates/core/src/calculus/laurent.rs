//! Geometric-series expansion of diagonal-localized rational functions in
//! the nested domain `|w_1| > |w_2| > ... > |w_p|`.

use std::collections::BTreeMap;

use num::Zero;

use crate::algebra::{scalar, DiagRat, Scalar, VarId};

/// An integer exponent vector, sparse (absent variables have exponent 0).
pub type IntMono = BTreeMap<VarId, i64>;

/// A truncated Laurent expansion: every monomial whose exponents are all
/// bounded by the recorded caps is present with its exact coefficient;
/// monomials outside the cap region are discarded, so the object does not
/// depend on internal truncation choices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentExpansion {
    caps: BTreeMap<VarId, i64>,
    terms: BTreeMap<IntMono, Scalar>,
}

impl LaurentExpansion {
    pub fn caps(&self) -> &BTreeMap<VarId, i64> {
        &self.caps
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntMono, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &IntMono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(scalar::zero)
    }

    /// Deterministic rendering such as `w1^-2*w2 + w1^-1`.
    pub fn display_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono = if m.is_empty() {
                    "1".to_string()
                } else {
                    m.iter()
                        .map(|(v, e)| {
                            if *e == 1 {
                                format!("{v}")
                            } else {
                                format!("{v}^{e}")
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("*")
                };
                if c == &scalar::one() && !m.is_empty() {
                    mono
                } else if m.is_empty() {
                    scalar::display(c)
                } else {
                    format!("{}*{mono}", scalar::display(c))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Expands `f` as a Laurent series in the nested domain, exactly on the
/// region where every exponent is at most its cap (missing caps default
/// to 0). Each factor `(w_a - w_b)^-k` with `a < b` expands as
/// `w_a^-k * sum_m binom(k-1+m, m) (w_b / w_a)^m`.
///
/// The per-factor truncation is recomputed at double the order and the two
/// runs are asserted to agree on the cap region.
pub fn iota_expand(f: &DiagRat, caps: &BTreeMap<VarId, i64>) -> LaurentExpansion {
    let bounds = factor_bounds(f, caps);
    let first = expand_with(f, caps, &bounds);
    let doubled: BTreeMap<(VarId, VarId), i64> =
        bounds.iter().map(|(&k, &m)| (k, 2 * m + 1)).collect();
    let second = expand_with(f, caps, &doubled);
    assert_eq!(
        first, second,
        "expansion truncation is unstable under doubling"
    );
    LaurentExpansion {
        caps: f
            .live()
            .iter()
            .map(|&v| (v, caps.get(&v).copied().unwrap_or(0)))
            .collect(),
        terms: first,
    }
}

/// For each pole factor keyed `(a, b)` with `a < b`, the largest series
/// order that can still land inside the cap region: positive powers of
/// `w_b` come only from its factors, bounded by `cap_b` plus everything the
/// factors `(b, c)` can subtract at `b`. Computed for `b` descending.
fn factor_bounds(f: &DiagRat, caps: &BTreeMap<VarId, i64>) -> BTreeMap<(VarId, VarId), i64> {
    let mut max_sub: BTreeMap<VarId, i64> = BTreeMap::new();
    let mut bounds: BTreeMap<(VarId, VarId), i64> = BTreeMap::new();
    for &v in f.live().iter().rev() {
        let neg: i64 = f
            .poles()
            .iter()
            .filter(|((a, _), _)| *a == v)
            .map(|((_, b), &k)| k as i64 + bounds[&(v, *b)])
            .sum();
        max_sub.insert(v, neg);
        let cap_v = caps.get(&v).copied().unwrap_or(0);
        for (a, b) in f.poles().keys() {
            if *b == v {
                bounds.insert((*a, *b), (cap_v + neg).max(0));
            }
        }
    }
    bounds
}

fn expand_with(
    f: &DiagRat,
    caps: &BTreeMap<VarId, i64>,
    bounds: &BTreeMap<(VarId, VarId), i64>,
) -> BTreeMap<IntMono, Scalar> {
    let mut terms: BTreeMap<IntMono, Scalar> = BTreeMap::new();
    for (mono, c) in f.numerator().terms() {
        let key: IntMono = mono.iter().map(|(v, e)| (v, e as i64)).collect();
        *terms.entry(key).or_insert_with(scalar::zero) += c;
    }
    for (&(a, b), &k) in f.poles() {
        let m_max = bounds[&(a, b)];
        let mut next: BTreeMap<IntMono, Scalar> = BTreeMap::new();
        for (expo, c) in &terms {
            for m in 0..=m_max {
                let coeff = c * scalar::binomial((k as u64 - 1) + m as u64, m as u64);
                let mut e = expo.clone();
                bump(&mut e, a, -(k as i64) - m);
                bump(&mut e, b, m);
                *next.entry(e).or_insert_with(scalar::zero) += coeff;
            }
        }
        next.retain(|_, c| !c.is_zero());
        terms = next;
    }
    terms.retain(|expo, c| {
        !c.is_zero()
            && f.live().iter().all(|v| {
                expo.get(v).copied().unwrap_or(0) <= caps.get(v).copied().unwrap_or(0)
            })
    });
    terms
}

fn bump(e: &mut IntMono, v: VarId, by: i64) {
    let entry = e.entry(v).or_insert(0);
    *entry += by;
    if *entry == 0 {
        e.remove(&v);
    }
}
