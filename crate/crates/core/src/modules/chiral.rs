//! Evaluator interface for operations that consume a tensor together with a
//! translation-invariant diagonal-localized function and produce a quotient
//! class. Evaluators are pure and shareable across threads.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, DiagRat};
use crate::modules::dmodule::{FreeDModule, QuotElem, TensorElem};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ChiralError {
    #[error("input function is not translation invariant")]
    NotTranslationInvariant,
    #[error("arity mismatch: evaluator has arity {expected}, input has arity {got}")]
    ArityMismatch { expected: u32, got: u32 },
    #[error("operation table failed validation: {0}")]
    InvalidOperation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A linear-in-both-slots evaluator `(v, f) -> class`.
pub trait ChiralEval: Send + Sync {
    fn n(&self) -> u32;
    fn module(&self) -> &Arc<FreeDModule>;
    fn eval(&self, v: &TensorElem, f: &DiagRat) -> Result<QuotElem, ChiralError>;
}

pub type ChiralOp = Arc<dyn ChiralEval>;

/// Verifies the shared preconditions of every evaluator: matching arity,
/// the live variables being exactly `z1..zn`, and translation invariance.
pub fn check_eval_input(n: u32, v: &TensorElem, f: &DiagRat) -> Result<(), ChiralError> {
    if v.n() != n {
        return Err(ChiralError::ArityMismatch {
            expected: n,
            got: v.n(),
        });
    }
    if f.live() != &crate::algebra::z_live(n) {
        return Err(ChiralError::ArityMismatch {
            expected: n,
            got: f.live().len() as u32,
        });
    }
    if !f.is_translation_invariant() {
        return Err(ChiralError::NotTranslationInvariant);
    }
    Ok(())
}

/// A closure-backed evaluator; used to wrap ad-hoc or deliberately corrupted
/// evaluators in negative tests.
pub struct FnChiral {
    n: u32,
    module: Arc<FreeDModule>,
    #[allow(clippy::type_complexity)]
    eval: Box<dyn Fn(&TensorElem, &DiagRat) -> Result<QuotElem, ChiralError> + Send + Sync>,
}

impl FnChiral {
    pub fn new(
        n: u32,
        module: Arc<FreeDModule>,
        eval: impl Fn(&TensorElem, &DiagRat) -> Result<QuotElem, ChiralError> + Send + Sync + 'static,
    ) -> Self {
        FnChiral {
            n,
            module,
            eval: Box::new(eval),
        }
    }
}

impl ChiralEval for FnChiral {
    fn n(&self) -> u32 {
        self.n
    }

    fn module(&self) -> &Arc<FreeDModule> {
        &self.module
    }

    fn eval(&self, v: &TensorElem, f: &DiagRat) -> Result<QuotElem, ChiralError> {
        check_eval_input(self.n, v, f)?;
        (self.eval)(v, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MPoly;

    #[test]
    fn input_checks_reject_bad_shapes() {
        let module = Arc::new(FreeDModule::rank2_graded());
        let id = FnChiral::new(2, module, |v, _| Ok(QuotElem::zero(v.n())));
        let v2 = TensorElem::basis(2, vec![(0, 0), (0, 0)]);
        let v3 = TensorElem::basis(3, vec![(0, 0), (0, 0), (0, 0)]);
        let one2 = DiagRat::one(2);
        let one3 = DiagRat::one(3);
        let z1 = DiagRat::from_mpoly(2, MPoly::var(crate::algebra::VarId::Z(1))).unwrap();

        assert!(id.eval(&v2, &one2).is_ok());
        assert!(matches!(
            id.eval(&v3, &one2),
            Err(ChiralError::ArityMismatch { .. })
        ));
        assert!(matches!(
            id.eval(&v2, &one3),
            Err(ChiralError::ArityMismatch { .. })
        ));
        assert!(matches!(
            id.eval(&v2, &z1),
            Err(ChiralError::NotTranslationInvariant)
        ));
    }
}
