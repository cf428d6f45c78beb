//! Exact scalar, polynomial, and diagonal-localized rational arithmetic.

mod diagrat;
mod mpoly;
pub mod scalar;
mod vars;

pub use diagrat::{w_live, z_live, AlgebraError, DiagRat};
pub use mpoly::{MPoly, Monomial};
pub use scalar::Scalar;
pub use vars::VarId;
