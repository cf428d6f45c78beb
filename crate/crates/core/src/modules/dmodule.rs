//! Free modules over the operator ring `F[d]` with graded generators,
//! tensor powers carrying one derivation per slot, and normal forms in the
//! quotient `V[l1..ln] / <d + l1 + ... + ln>`.
//!
//! Elements of the module are finite sums `c * d^a * g` over exact rational
//! coefficients; the degree of `d^a * g` is the degree of `g`, so the grading
//! is by `F[d]`-submodules and degree projections act on generators only.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{scalar, MPoly, Scalar, VarId};
#[cfg(test)]
use crate::algebra::Monomial;
use crate::calculus::{Coefficient, LambdaPoly};

/// Errors for module construction and table-backed operations.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("generator name `{0}` is not a valid identifier")]
    BadGeneratorName(String),
    #[error("generator name `{0}` collides with a reserved symbol")]
    ReservedGeneratorName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator index {index} out of range for a module of rank {rank}")]
    GeneratorOutOfRange { index: u32, rank: u32 },
    #[error("tensor key has {got} factors, expected {expected}")]
    KeyArity { got: usize, expected: usize },
    #[error("value for forest `{forest}` uses variable `{var}`; only L1..L{lines} are allowed")]
    BadValueVariable {
        forest: String,
        var: String,
        lines: u32,
    },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: u32, got: u32 },
}

/// One generator of a [`FreeDModule`]: a name, a non-negative degree, and a
/// parity flag that is carried along verbatim (no sign logic consumes it).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenInfo {
    pub name: String,
    pub degree: u32,
    pub odd: bool,
}

impl GenInfo {
    pub fn new(name: &str, degree: u32) -> Self {
        GenInfo {
            name: name.to_string(),
            degree,
            odd: false,
        }
    }

    pub fn odd(name: &str, degree: u32) -> Self {
        GenInfo {
            name: name.to_string(),
            degree,
            odd: true,
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Names that the text formats parse as variables or operators rather than
/// generators: `d`, and the letter-digit families `z1`, `w1`, `x1`, `l1`, `L1`.
fn is_reserved_name(s: &str) -> bool {
    if s == "d" {
        return true;
    }
    let mut chars = s.chars();
    match chars.next() {
        Some('z') | Some('w') | Some('x') | Some('l') | Some('L') => {
            let rest: String = chars.collect();
            !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
        }
        _ => false,
    }
}

/// A free module over `F[d]` on finitely many graded generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeDModule {
    gens: Vec<GenInfo>,
}

impl FreeDModule {
    pub fn new(gens: Vec<GenInfo>) -> Result<Self, ModuleError> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &gens {
            if !is_identifier(&g.name) {
                return Err(ModuleError::BadGeneratorName(g.name.clone()));
            }
            if is_reserved_name(&g.name) {
                return Err(ModuleError::ReservedGeneratorName(g.name.clone()));
            }
            if !seen.insert(g.name.clone()) {
                return Err(ModuleError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(FreeDModule { gens })
    }

    /// The two-generator module of degrees 0 and 1 used throughout the
    /// verification suites.
    pub fn rank2_graded() -> Self {
        FreeDModule::new(vec![GenInfo::new("a", 0), GenInfo::new("b", 1)]).unwrap()
    }

    /// Rank-one module concentrated in degree 0.
    pub fn rank1_trivial() -> Self {
        FreeDModule::new(vec![GenInfo::new("a", 0)]).unwrap()
    }

    pub fn rank(&self) -> u32 {
        self.gens.len() as u32
    }

    pub fn gens(&self) -> &[GenInfo] {
        &self.gens
    }

    pub fn degree(&self, g: u32) -> u32 {
        self.gens[g as usize].degree
    }

    pub fn name(&self, g: u32) -> &str {
        &self.gens[g as usize].name
    }

    pub fn find(&self, name: &str) -> Option<u32> {
        self.gens.iter().position(|g| g.name == name).map(|i| i as u32)
    }

    /// Indices of the generators of the given degree.
    pub fn gens_of_degree(&self, degree: i64) -> Vec<u32> {
        self.gens
            .iter()
            .enumerate()
            .filter(|(_, g)| i64::from(g.degree) == degree)
            .map(|(i, _)| i as u32)
            .collect()
    }

    pub fn check_gen(&self, g: u32) -> Result<(), ModuleError> {
        if g < self.rank() {
            Ok(())
        } else {
            Err(ModuleError::GeneratorOutOfRange {
                index: g,
                rank: self.rank(),
            })
        }
    }
}

/// An element of a [`FreeDModule`]: a finite sum of `c * d^a * g` terms,
/// keyed by `(generator index, power of d)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VElem {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl VElem {
    pub fn zero() -> Self {
        VElem::default()
    }

    /// The basis element `d^dpow * g`.
    pub fn basis(g: u32, dpow: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((g, dpow), scalar::one());
        VElem { terms }
    }

    /// The generator `g` itself.
    pub fn gen(g: u32) -> Self {
        VElem::basis(g, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: u32, dpow: u32) -> Scalar {
        self.terms.get(&(g, dpow)).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn add_term(&mut self, g: u32, dpow: u32, c: Scalar) {
        if num::Zero::is_zero(&c) {
            return;
        }
        let entry = self.terms.entry((g, dpow)).or_insert_with(scalar::zero);
        *entry += c;
        if num::Zero::is_zero(entry) {
            self.terms.remove(&(g, dpow));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(g, k), c) in &other.terms {
            out.add_term(g, k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if num::Zero::is_zero(s) {
            return VElem::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(&key, c)| (key, c * s))
            .collect();
        VElem { terms }
    }

    /// Applies the operator `d` once (raises every d-power by one).
    pub fn apply_d(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(g, k), c)| ((g, k + 1), c.clone()))
            .collect();
        VElem { terms }
    }

    pub fn apply_d_pow(&self, pow: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(g, k), c)| ((g, k + pow), c.clone()))
            .collect();
        VElem { terms }
    }

    /// The part with d-power zero; this is the normal form in the quotient
    /// of the module by the image of `d`.
    pub fn dpow_zero_part(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|((_, k), _)| *k == 0)
            .map(|(&key, c)| (key, c.clone()))
            .collect();
        VElem { terms }
    }

    /// The set of generator degrees appearing with nonzero coefficient.
    pub fn degrees(&self, module: &FreeDModule) -> std::collections::BTreeSet<u32> {
        self.terms
            .keys()
            .map(|&(g, _)| module.degree(g))
            .collect()
    }

    /// True when every term sits in the single given degree (the zero
    /// element is homogeneous of every degree).
    pub fn is_homogeneous_of(&self, module: &FreeDModule, degree: i64) -> bool {
        self.terms
            .keys()
            .all(|&(g, _)| i64::from(module.degree(g)) == degree)
    }

    /// Largest generator degree present, or `None` for the zero element.
    pub fn max_degree(&self, module: &FreeDModule) -> Option<u32> {
        self.degrees(module).into_iter().next_back()
    }

    /// Keeps only the terms whose generator has the given degree.
    pub fn project_degree(&self, module: &FreeDModule, degree: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|((g, _), _)| i64::from(module.degree(*g)) == degree)
            .map(|(&key, c)| (key, c.clone()))
            .collect();
        VElem { terms }
    }

    pub fn display_text(&self, module: &FreeDModule) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(g, k), c) in &self.terms {
            let mut factors = Vec::new();
            if *c != scalar::one() {
                factors.push(scalar::display(c));
            }
            if k > 0 {
                factors.push(format!("d^{k}"));
            }
            factors.push(module.name(g).to_string());
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl Coefficient for VElem {
    fn zero() -> Self {
        VElem::zero()
    }

    fn is_zero(&self) -> bool {
        VElem::is_zero(self)
    }

    fn add_assign_c(&mut self, other: &Self) {
        for (&(g, k), c) in &other.terms {
            self.add_term(g, k, c.clone());
        }
    }

    fn scale(&self, s: &Scalar) -> Self {
        VElem::scale(self, s)
    }
}

/// One basis tensor of the `n`-fold tensor power: for each slot a pair
/// `(generator index, power of d)`.
pub type TensorKey = Vec<(u32, u32)>;

/// An element of the `n`-fold tensor power of a [`FreeDModule`] with exact
/// rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElem {
    n: u32,
    terms: BTreeMap<TensorKey, Scalar>,
}

impl TensorElem {
    pub fn zero(n: u32) -> Self {
        TensorElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(n: u32, key: TensorKey) -> Self {
        assert_eq!(key.len(), n as usize, "tensor key arity mismatch");
        let mut terms = BTreeMap::new();
        terms.insert(key, scalar::one());
        TensorElem { n, terms }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, key: TensorKey, c: Scalar) {
        assert_eq!(key.len(), self.n as usize, "tensor key arity mismatch");
        if num::Zero::is_zero(&c) {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(scalar::zero);
        *entry += c;
        if num::Zero::is_zero(entry) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "tensor arity mismatch");
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.add_term(key.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if num::Zero::is_zero(s) {
            return TensorElem::zero(self.n);
        }
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| (key.clone(), c * s))
            .collect();
        TensorElem { n: self.n, terms }
    }

    /// Applies the slot derivation at position `i` (1-based): raises the
    /// d-power of the `i`-th tensor factor by one in every term.
    pub fn apply_d_at(&self, i: u32) -> Self {
        assert!(i >= 1 && i <= self.n, "slot index out of range");
        let terms = self
            .terms
            .iter()
            .map(|(key, c)| {
                let mut key = key.clone();
                key[(i - 1) as usize].1 += 1;
                (key, c.clone())
            })
            .collect();
        TensorElem { n: self.n, terms }
    }

    /// Total generator degree of a basis key.
    pub fn key_degree(module: &FreeDModule, key: &TensorKey) -> u32 {
        key.iter().map(|&(g, _)| module.degree(g)).sum()
    }

    /// The single total degree of all terms, if the element is homogeneous
    /// (the zero element reports degree 0).
    pub fn homogeneous_degree(&self, module: &FreeDModule) -> Option<u32> {
        let mut degs = self
            .terms
            .keys()
            .map(|key| TensorElem::key_degree(module, key));
        match degs.next() {
            None => Some(0),
            Some(first) => {
                if degs.all(|d| d == first) {
                    Some(first)
                } else {
                    None
                }
            }
        }
    }

    /// Largest total generator degree over the support (0 for the zero
    /// element); this is the filtration level of the tensor factor.
    pub fn max_degree(&self, module: &FreeDModule) -> u32 {
        self.terms
            .keys()
            .map(|key| TensorElem::key_degree(module, key))
            .max()
            .unwrap_or(0)
    }

    pub fn display_text(&self, module: &FreeDModule) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (key, c) in &self.terms {
            let slots: Vec<String> = key
                .iter()
                .map(|&(g, k)| {
                    if k == 0 {
                        module.name(g).to_string()
                    } else {
                        format!("d^{}*{}", k, module.name(g))
                    }
                })
                .collect();
            let body = format!("[{}]", slots.join(", "));
            if *c == scalar::one() {
                parts.push(body);
            } else {
                parts.push(format!("{}*{}", scalar::display(c), body));
            }
        }
        parts.join(" + ")
    }
}

/// Applies a polynomial in the slot variables `x1..xn` to a tensor, with
/// each `xi`-power acting as the corresponding power of the `i`-th slot
/// derivation.
pub fn apply_poly_partials(p: &MPoly, v: &TensorElem) -> TensorElem {
    let mut out = TensorElem::zero(v.n());
    for (mono, c) in p.terms() {
        let mut piece = v.scale(c);
        for (var, e) in mono.iter() {
            match var {
                VarId::X(i) if i >= 1 && i <= v.n() => {
                    for _ in 0..e {
                        piece = piece.apply_d_at(i);
                    }
                }
                other => panic!("apply_poly_partials: unexpected variable {other}"),
            }
        }
        out = out.add(&piece);
    }
    out
}

/// `(d + v1 + ... + vk) * p` for the listed variables: the generator of the
/// relation whose image the quotient normal form kills.
pub fn relation_image(p: &LambdaPoly<VElem>, vars: &[VarId]) -> LambdaPoly<VElem> {
    let mut out = p.map_coeffs(|c| c.apply_d());
    for &v in vars {
        out = out.add(&p.mul_var(v));
    }
    out
}

/// Substitutes `last := -d - (sum of the remaining vars)` once into a
/// polynomial with module coefficients, for `last` the final entry of
/// `vars`; repeated until no power of `last` remains, this computes the
/// normal form in `V[vars] / <d + sum vars>`.
fn eliminate_once(p: &LambdaPoly<VElem>, rest: &[VarId]) -> LambdaPoly<VElem> {
    let mut out = p.map_coeffs(|c| c.apply_d()).scale(&scalar::int(-1));
    for &v in rest {
        out = out.sub(&p.mul_var(v));
    }
    out
}

/// Normal form in `V[vars] / <d + sum vars>`: eliminates the last listed
/// variable via `last := -d - (sum of the others)`. With an empty variable
/// list the quotient is by the image of `d` alone, and the normal form
/// keeps the d-power-zero part of each coefficient.
pub fn canonical_rep(raw: &LambdaPoly<VElem>, vars: &[VarId]) -> LambdaPoly<VElem> {
    match vars.split_last() {
        Some((&last, rest)) => {
            let mut out = LambdaPoly::zero();
            for (mono, c) in raw.terms() {
                let (base, k) = mono.strip_var(last);
                let mut cur = LambdaPoly::from_term(base, c.clone());
                for _ in 0..k {
                    cur = eliminate_once(&cur, rest);
                }
                out = out.add(&cur);
            }
            out
        }
        None => raw.map_coeffs(|c| c.dpow_zero_part()),
    }
}

/// The list `l1..ln`.
pub fn lambda_vars(n: u32) -> Vec<VarId> {
    (1..=n).map(VarId::Lambda).collect()
}

/// The list `L1..Lp`.
pub fn big_lambda_vars(p: u32) -> Vec<VarId> {
    (1..=p).map(VarId::BigLambda).collect()
}

/// An element of the quotient `V[l1..ln] / <d + l1 + ... + ln>` in normal
/// form: a polynomial in `l1..l(n-1)` only, with module-element
/// coefficients. Two classes are equal iff their normal forms are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotElem {
    n: u32,
    poly: LambdaPoly<VElem>,
}

impl QuotElem {
    pub fn zero(n: u32) -> Self {
        QuotElem {
            n,
            poly: LambdaPoly::zero(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn poly(&self) -> &LambdaPoly<VElem> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "quotient arity mismatch");
        QuotElem {
            n: self.n,
            poly: self.poly.add(&other.poly),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "quotient arity mismatch");
        QuotElem {
            n: self.n,
            poly: self.poly.sub(&other.poly),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        QuotElem {
            n: self.n,
            poly: self.poly.scale(s),
        }
    }

    /// Multiplication by `li` (1-based). For `i < n` this is plain variable
    /// multiplication; for `i = n` the eliminated variable acts as the
    /// operator `-d - l1 - ... - l(n-1)`.
    pub fn mul_lambda(&self, i: u32) -> Self {
        assert!(i >= 1 && i <= self.n, "variable index out of range");
        let poly = if i < self.n {
            self.poly.mul_var(VarId::Lambda(i))
        } else {
            eliminate_once(&self.poly, &lambda_vars(self.n.saturating_sub(1)))
        };
        QuotElem { n: self.n, poly }
    }

    /// The coefficient-wise operator `d`; it descends to the quotient.
    pub fn apply_d(&self) -> Self {
        QuotElem {
            n: self.n,
            poly: self.poly.map_coeffs(|c| c.apply_d()),
        }
    }

    /// The difference of variable derivatives `d/dlj - d/dli`; only the
    /// difference descends to the quotient. On the normal form the
    /// derivative in the eliminated variable `ln` is zero.
    pub fn diff_pair(&self, j: u32, i: u32) -> Self {
        assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n && i != j);
        let part = |v: u32| -> LambdaPoly<VElem> {
            if v < self.n {
                self.poly.diff(VarId::Lambda(v))
            } else {
                LambdaPoly::zero()
            }
        };
        QuotElem {
            n: self.n,
            poly: part(j).sub(&part(i)),
        }
    }

    pub fn display_text(&self, module: &FreeDModule) -> String {
        lambda_poly_text(&self.poly, module)
    }
}

/// Renders a polynomial with module coefficients as a sum of
/// `coeff*vars*d^k*gen` products in deterministic order.
pub(crate) fn lambda_poly_text(p: &LambdaPoly<VElem>, module: &FreeDModule) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (mono, c) in p.terms() {
        for (&(g, k), s) in c.terms() {
            let mut factors = Vec::new();
            if *s != scalar::one() {
                factors.push(scalar::display(s));
            }
            for (v, e) in mono.iter() {
                if e == 1 {
                    factors.push(format!("{v}"));
                } else {
                    factors.push(format!("{v}^{e}"));
                }
            }
            if k > 0 {
                factors.push(format!("d^{k}"));
            }
            factors.push(module.name(g).to_string());
            parts.push(factors.join("*"));
        }
    }
    parts.join(" + ")
}

/// Normal form of a raw polynomial in `l1..ln` as a quotient class.
pub fn canonicalize(raw: &LambdaPoly<VElem>, n: u32) -> QuotElem {
    QuotElem {
        n,
        poly: canonical_rep(raw, &lambda_vars(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn l(i: u32) -> VarId {
        VarId::Lambda(i)
    }

    fn lp(terms: Vec<(Monomial, VElem)>) -> LambdaPoly<VElem> {
        let mut out = LambdaPoly::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn random_poly(rng: &mut ChaCha8Rng, n: u32, rank: u32) -> LambdaPoly<VElem> {
        let mut out = LambdaPoly::zero();
        for _ in 0..6 {
            let mut mono = Monomial::unit();
            for i in 1..=n {
                mono = mono.mul(&Monomial::var_pow(l(i), rng.random_range(0..=2)));
            }
            let g = rng.random_range(0..rank);
            let dpow = rng.random_range(0..=2);
            let c = scalar::int(rng.random_range(-3..=3));
            out.add_term(mono, VElem::basis(g, dpow).scale(&c));
        }
        out
    }

    #[test]
    fn normal_form_eliminates_the_last_variable() {
        // l2*a with n = 2 becomes -l1*a - d*a.
        let raw = lp(vec![(Monomial::var_pow(l(2), 1), VElem::gen(0))]);
        let got = canonicalize(&raw, 2);
        let expected = lp(vec![
            (Monomial::var_pow(l(1), 1), VElem::gen(0).scale(&scalar::int(-1))),
            (Monomial::unit(), VElem::basis(0, 1).scale(&scalar::int(-1))),
        ]);
        assert_eq!(got.poly(), &expected);

        // l1*l2*a becomes -l1^2*a - l1*d*a.
        let raw = lp(vec![(
            Monomial::var_pow(l(1), 1).mul(&Monomial::var_pow(l(2), 1)),
            VElem::gen(0),
        )]);
        let got = canonicalize(&raw, 2);
        let expected = lp(vec![
            (Monomial::var_pow(l(1), 2), VElem::gen(0).scale(&scalar::int(-1))),
            (
                Monomial::var_pow(l(1), 1),
                VElem::basis(0, 1).scale(&scalar::int(-1)),
            ),
        ]);
        assert_eq!(got.poly(), &expected);
    }

    #[test]
    fn normal_form_kills_the_relation_image() {
        // (d + l1 + l2)*a maps to zero.
        let v = LambdaPoly::constant(VElem::gen(0));
        let rel = relation_image(&v, &lambda_vars(2));
        assert!(canonicalize(&rel, 2).is_zero());

        // The kernel contains the image of the relation for random inputs.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=3u32 {
            for _ in 0..25 {
                let q = random_poly(&mut rng, n, 2);
                let rel = relation_image(&q, &lambda_vars(n));
                assert!(
                    canonicalize(&rel, n).is_zero(),
                    "relation image not killed for n={n}"
                );
            }
        }
    }

    #[test]
    fn normal_form_is_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 0..=3u32 {
            for _ in 0..25 {
                let q = random_poly(&mut rng, n, 2);
                let once = canonicalize(&q, n);
                let twice = canonicalize(once.poly(), n);
                assert_eq!(once.poly(), twice.poly());
            }
        }
    }

    #[test]
    fn small_arity_normal_forms() {
        // n = 1: l1*b goes to -d*b.
        let raw = lp(vec![(Monomial::var_pow(l(1), 1), VElem::gen(1))]);
        let got = canonicalize(&raw, 1);
        let expected = lp(vec![(
            Monomial::unit(),
            VElem::basis(1, 1).scale(&scalar::int(-1)),
        )]);
        assert_eq!(got.poly(), &expected);

        // n = 0: the quotient is by the image of d alone.
        let raw = LambdaPoly::constant(VElem::basis(0, 1));
        assert!(canonicalize(&raw, 0).is_zero());
        let raw = LambdaPoly::constant(VElem::gen(0).add(&VElem::basis(1, 2)));
        let got = canonicalize(&raw, 0);
        assert_eq!(got.poly(), &LambdaPoly::constant(VElem::gen(0)));
    }

    #[test]
    fn derivative_pair_agrees_with_raw_representative() {
        // Hand case: the class of l2*v has normal form -l1*v - d*v, and
        // (d/dl2 - d/dl1) of the raw representative is v.
        let raw = lp(vec![(Monomial::var_pow(l(2), 1), VElem::gen(0))]);
        let got = canonicalize(&raw, 2).diff_pair(2, 1);
        assert_eq!(got.poly(), &LambdaPoly::constant(VElem::gen(0)));

        // Random agreement: differentiating the raw polynomial and then
        // reducing equals reducing first and using the normal-form rule.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 2..=3u32 {
            for _ in 0..25 {
                let q = random_poly(&mut rng, n, 2);
                for j in 1..=n {
                    for i in 1..=n {
                        if i == j {
                            continue;
                        }
                        let raw_diff = q.diff(l(j)).sub(&q.diff(l(i)));
                        let via_raw = canonicalize(&raw_diff, n);
                        let via_class = canonicalize(&q, n).diff_pair(j, i);
                        assert_eq!(via_raw, via_class);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplication_by_the_eliminated_variable_matches_raw() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 1..=3u32 {
            for _ in 0..20 {
                let q = random_poly(&mut rng, n, 2);
                for i in 1..=n {
                    let raw_mul = q.mul_var(l(i));
                    let via_raw = canonicalize(&raw_mul, n);
                    let via_class = canonicalize(&q, n).mul_lambda(i);
                    assert_eq!(via_raw, via_class);
                }
            }
        }
    }

    #[test]
    fn slot_partials_follow_the_polynomial() {
        let v = TensorElem::basis(2, vec![(0, 0), (1, 0)]);
        let p1 = MPoly::one();
        assert_eq!(apply_poly_partials(&p1, &v), v);

        let px = MPoly::var(VarId::X(1));
        assert_eq!(
            apply_poly_partials(&px, &v),
            TensorElem::basis(2, vec![(0, 1), (1, 0)])
        );

        let p = MPoly::var(VarId::X(1)).mul(&MPoly::var(VarId::X(2)).pow(2));
        assert_eq!(
            apply_poly_partials(&p, &v),
            TensorElem::basis(2, vec![(0, 1), (1, 2)])
        );
    }

    #[test]
    fn module_construction_rejects_bad_names() {
        assert!(FreeDModule::new(vec![GenInfo::new("a", 0), GenInfo::new("a", 1)]).is_err());
        assert!(FreeDModule::new(vec![GenInfo::new("d", 0)]).is_err());
        assert!(FreeDModule::new(vec![GenInfo::new("L1", 0)]).is_err());
        assert!(FreeDModule::new(vec![GenInfo::new("z12", 0)]).is_err());
        assert!(FreeDModule::new(vec![GenInfo::new("1a", 0)]).is_err());
        assert!(FreeDModule::new(vec![GenInfo::new("", 0)]).is_err());
        let m = FreeDModule::new(vec![GenInfo::new("alpha", 2), GenInfo::odd("beta", 1)]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.find("beta"), Some(1));
        assert!(m.gens()[1].odd);
    }

    #[test]
    fn degree_bookkeeping_on_module_elements() {
        let m = FreeDModule::rank2_graded();
        let x = VElem::gen(0).add(&VElem::basis(1, 3));
        assert_eq!(x.degrees(&m).into_iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(!x.is_homogeneous_of(&m, 0));
        assert_eq!(x.max_degree(&m), Some(1));
        assert_eq!(x.project_degree(&m, 1), VElem::basis(1, 3));
        assert!(x.project_degree(&m, 2).is_zero());

        let t = TensorElem::basis(2, vec![(1, 0), (1, 5)]);
        assert_eq!(t.homogeneous_degree(&m), Some(2));
        assert_eq!(t.max_degree(&m), 2);
        let mixed = t.add(&TensorElem::basis(2, vec![(0, 0), (0, 0)]));
        assert_eq!(mixed.homogeneous_degree(&m), None);
        assert_eq!(mixed.max_degree(&m), 2);
    }

    #[test]
    fn display_is_deterministic() {
        let m = FreeDModule::rank2_graded();
        let x = VElem::gen(0)
            .scale(&scalar::ratio(1, 2))
            .add(&VElem::basis(1, 2).scale(&scalar::int(-3)));
        assert_eq!(x.display_text(&m), "1/2*a + -3*d^2*b");
        let raw = lp(vec![
            (Monomial::var_pow(l(1), 2), VElem::gen(1)),
            (Monomial::unit(), VElem::basis(0, 1)),
        ]);
        assert_eq!(lambda_poly_text(&raw, &m), "d^1*a + l1^2*b");
    }
}
