//! The integral-kernel transform along a line forest: a polynomial in the
//! `lambda` variables with diagonal-localized rational coefficients in the
//! `w` variables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::algebra::{scalar, AlgebraError, DiagRat, MPoly, Monomial, VarId};
use crate::graphs::LineForest;

use super::residue::residue;

/// A polynomial in `lambda_1..lambda_n` whose coefficients are
/// diagonal-localized rational functions of `w_1..w_p`. Exponents are plain
/// (divided-power factorials are applied by consumers where the formulas
/// require them).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyOverDiagRat {
    arity: u32,
    terms: BTreeMap<Monomial, DiagRat>,
}

impl PolyOverDiagRat {
    pub fn new(arity: u32, terms: BTreeMap<Monomial, DiagRat>) -> Self {
        let out = PolyOverDiagRat { arity, terms };
        debug_assert!(out.terms.values().all(|c| !c.is_zero()));
        out
    }

    /// Number of `w` variables in the coefficient world.
    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &DiagRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&DiagRat> {
        self.terms.get(m)
    }

    /// Total degree in the `lambda` variables.
    pub fn lambda_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Deterministic rendering: descending monomial order, each term as
    /// `mono*(coefficient)`, the unit monomial as just `(coefficient)`.
    pub fn display_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono = mono_text(m);
                let coeff = c.display_text();
                if m.is_unit() {
                    format!("({coeff})")
                } else {
                    format!("{mono}*({coeff})")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn mono_text(m: &Monomial) -> String {
    m.iter()
        .map(|(v, e)| {
            if e == 1 {
                format!("{v}")
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn accumulate(
    map: &mut BTreeMap<Monomial, DiagRat>,
    key: Monomial,
    val: DiagRat,
) -> Result<(), AlgebraError> {
    if val.is_zero() {
        return Ok(());
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(val);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&val)?;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
    Ok(())
}

/// The transform of `f` along a line forest.
///
/// Each line `i_1 -> ... -> i_k` contributes the kernel
/// `prod_b exp(-(z_{i_b} - z_{i_{b+1}}) * (lambda_{i_1} + ... + lambda_{i_b}))`,
/// and the same iterated residues as the plain forest residue. The
/// exponential at each residue step is truncated at the current pole order
/// (higher terms have no pole left); the first discarded order is asserted
/// to contribute nothing.
pub fn fourier(f: &DiagRat, forest: &LineForest) -> Result<PolyOverDiagRat, AlgebraError> {
    let mut terms: BTreeMap<Monomial, DiagRat> = BTreeMap::new();
    if !f.is_zero() {
        terms.insert(Monomial::unit(), f.clone());
    }
    for ell in (0..forest.num_lines()).rev() {
        let line = &forest.lines()[ell];
        for (b, pair) in line.windows(2).enumerate() {
            let (i, j) = (VarId::Z(pair[0]), VarId::Z(pair[1]));
            let mu = line[..=b]
                .iter()
                .map(|&v| MPoly::var(VarId::Lambda(v)))
                .fold(MPoly::zero(), |acc, x| acc.add(&x));
            let zdiff = MPoly::var(i).sub(&MPoly::var(j));
            let mut next: BTreeMap<Monomial, DiagRat> = BTreeMap::new();
            for (mono, c) in &terms {
                let d = c.pole_order(i, j)?;
                let tmax = if d > 0 { (d - 1) as u32 } else { 0 };
                let mut shifted = c.clone(); // c * zdiff^t, built incrementally
                let mut mu_pow = MPoly::one(); // mu^t
                for t in 0..=tmax {
                    if t > 0 {
                        shifted = shifted.mul_mpoly(&zdiff)?;
                        mu_pow = mu_pow.mul(&mu);
                    }
                    let r = residue(&shifted, i, j)?;
                    if r.is_zero() {
                        continue;
                    }
                    let base = scalar::neg_one_pow(t as i64) / scalar::factorial(t);
                    for (m2, c2) in mu_pow.terms() {
                        accumulate(&mut next, mono.mul(m2), r.scale(&(c2 * base.clone())))?;
                    }
                }
                // One order past the truncation must contribute nothing.
                let over = shifted.mul_mpoly(&zdiff)?;
                assert!(
                    residue(&over, i, j)?.is_zero(),
                    "kernel truncation at order {tmax} is unstable"
                );
            }
            terms = next;
        }
        let last = VarId::Z(*line.last().expect("lines are non-empty"));
        let w = VarId::W(ell as u32 + 1);
        let mut renamed = BTreeMap::new();
        for (mono, c) in terms {
            let r = c.rename_var(last, w)?;
            if !r.is_zero() {
                renamed.insert(mono, r);
            }
        }
        terms = renamed;
    }
    Ok(PolyOverDiagRat::new(forest.num_lines() as u32, terms))
}
