//! Exact symbolic calculus for chiral and classical operad structures.
//!
//! The library implements, over arbitrary-precision rationals:
//!
//! * rational functions with poles confined to the diagonals `z_i = z_j`
//!   ([`algebra`]);
//! * the combinatorics of directed graphs on `n` labelled vertices modulo
//!   oriented-cycle relations, with disjoint unions of directed lines as a
//!   distinguished basis ([`graphs`]);
//! * iterated residues along line forests, the associated integral-kernel
//!   transform producing polynomials in `lambda` with coefficients in the
//!   `w`-variables, geometric-series expansions, and the convolution product
//!   against divided-power polynomials ([`calculus`]);
//! * free finitely generated modules over a one-derivation polynomial
//!   algebra, their tensor powers, `lambda`-polynomial quotients, and value
//!   tables for classical operations ([`modules`]);
//! * the explicit inverse and forward maps between chiral operations and
//!   classical operations together with the verification suites that check
//!   the structural identities at desk scale ([`iso`], [`suites`]);
//! * the Lie-operad dimension count `(n-1)!` recovered from first principles
//!   ([`lie`]).
//!
//! Everything is exact: there is no floating point anywhere, and every
//! verification suite compares symbolic normal forms for equality.

pub mod algebra;
pub mod calculus;
pub mod expr;
pub mod graphs;
pub mod iso;
pub mod lie;
pub mod linalg;
pub mod modules;
pub mod report;
pub mod suites;

pub use algebra::{DiagRat, MPoly, Monomial, Scalar, VarId};
pub use calculus::{
    convolve, fourier, gamma_residue, iota_expand, residue, Coefficient, LambdaPoly,
    LaurentExpansion, PolyOverDiagRat,
};
pub use expr::{
    elaborate, elaborate_poly, elaborate_w, parse_diagrat, parse_expr, parse_lambda_poly,
    parse_w_diagrat, serialize_diagrat, serialize_lambda_poly, ExprAst, ExprKind, ParseError,
};
pub use graphs::{decompose_to_lines, rewrite_to_lines, DiGraph, LineCombo, LineForest};
pub use iso::{forward_map, inverse_map, IsoError};
pub use lie::{bracket_to_line, bracket_words, classical_dimension, line_to_bracket, BracketWord};
pub use modules::{ChiralEval, ChiralOp, ClassicalOp, FreeDModule, QuotElem, TensorElem, VElem};
pub use report::{Counterexample, SuiteReport};
pub use suites::{run_suite, UnknownSuite, DEFAULT_SEED, SUITE_NAMES};
