//! Exact linear algebra over prime fields and enumeration of `GL_m(F_p)`.

mod gl;
mod matrix;
mod scalar;
mod subspace;

pub use gl::{gl_generators, gl_order, GlEnumeration, GlIter};
pub use matrix::{AffineSolution, FpMatrix};
pub use scalar::{FpScalar, Prime, MAX_PRIME};
pub use subspace::Subspace;

