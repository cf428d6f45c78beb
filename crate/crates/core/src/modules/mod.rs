//! Graded free modules over a one-variable operator ring, tensor powers,
//! quotient normal forms, and the table-backed operations evaluated on
//! graphs through the line-forest basis.

mod chiral;
mod classical;
mod dmodule;
mod formats;

pub use chiral::{check_eval_input, ChiralError, ChiralEval, ChiralOp, FnChiral};
pub use classical::ClassicalOp;
pub(crate) use classical::{enumerate_keys, lambda_monomials};
pub use dmodule::{
    apply_poly_partials, big_lambda_vars, canonical_rep, canonicalize, lambda_vars,
    relation_image, FreeDModule, GenInfo, ModuleError, QuotElem, TensorElem, TensorKey, VElem,
};
pub use formats::{
    parse_classical, parse_module, serialize_classical, serialize_module, FormatError,
};
