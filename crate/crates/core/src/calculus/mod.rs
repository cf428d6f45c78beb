//! Residue calculus along line forests, the associated integral-kernel
//! transform, geometric-series expansions, and the convolution product.

pub mod convolve;
pub mod fourier;
pub mod laurent;
pub mod residue;

pub use convolve::{convolve, Coefficient, LambdaPoly};
pub use fourier::{fourier, PolyOverDiagRat};
pub use laurent::{iota_expand, LaurentExpansion};
pub use residue::{gamma_residue, residue};
