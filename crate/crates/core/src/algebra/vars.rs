//! Typed variable identifiers shared by every symbolic layer.

use std::fmt;

/// A typed, indexed variable.
///
/// The calculus juggles several families of commuting variables at once;
/// keeping the family in the identifier (rather than in surrounding context)
/// lets a single sparse-polynomial type serve every layer.
///
/// The derived ordering — family first in the declaration order below, then
/// index — is the canonical variable order used for all deterministic
/// serialization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    /// Position variable `z<i>` attached to input slot `i` (1-based).
    Z(u32),
    /// Transform variable `lambda<i>` attached to input slot `i`.
    Lambda(u32),
    /// Output position variable `w<l>` attached to line `l` of a forest.
    W(u32),
    /// Aggregated transform variable `Lambda<l>` attached to line `l`.
    BigLambda(u32),
    /// Placeholder `x<i>` standing for the derivation acting on slot `i`.
    X(u32),
    /// The indexless formal derivation symbol.
    D,
}

impl VarId {
    /// True for the position families (`z`, `w`) that may appear in
    /// diagonal denominators.
    pub fn is_position(self) -> bool {
        matches!(self, VarId::Z(_) | VarId::W(_))
    }

    /// The numeric index, if the family carries one.
    pub fn index(self) -> Option<u32> {
        match self {
            VarId::Z(i) | VarId::Lambda(i) | VarId::W(i) | VarId::BigLambda(i) | VarId::X(i) => {
                Some(i)
            }
            VarId::D => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Z(i) => write!(f, "z{i}"),
            VarId::Lambda(i) => write!(f, "l{i}"),
            VarId::W(i) => write!(f, "w{i}"),
            VarId::BigLambda(i) => write!(f, "L{i}"),
            VarId::X(i) => write!(f, "x{i}"),
            VarId::D => write!(f, "d"),
        }
    }
}
