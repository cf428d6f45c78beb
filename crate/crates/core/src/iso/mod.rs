//! The two maps between table-backed operations and diagonal-localized
//! evaluators, together with the checkable properties that certify them:
//! sesquilinearity, representative independence, filtration containment,
//! closed-form oracles, and the exact round trip.

mod checks;
mod forward;
mod inverse;
mod oracle;

use thiserror::Error;

use crate::modules::{ChiralError, ModuleError};

pub use checks::{
    check_filtration, check_sesquilinearity, check_well_definedness, perturbed_op,
    sample_tensors, spanning_functions, FiltrationCheck, FiltrationWitness,
};
pub use forward::forward_map;
pub use inverse::{inverse_map, InverseMapEval};
pub use oracle::{closed_form_n2, single_line_n3};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error(transparent)]
    Chiral(#[from] ChiralError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(
        "filtration violation at forest `{forest}`, key `{key}`: output has degree {found}, bound is {bound}"
    )]
    FiltrationViolation {
        forest: String,
        key: String,
        found: u32,
        bound: i64,
    },
    #[error(
        "output at forest `{forest}`, key `{key}` does not factor through the per-line variables"
    )]
    NotLineShaped { forest: String, key: String },
}
