//! Finite-truncation numerics for scales, Schwartz-type sequence spaces and
//! direct sums of matrix algebras.

pub mod counterexamples;
pub mod error;
pub mod fixtures;
pub mod logvalue;
pub mod renorm;
pub mod scale;
pub mod schwartz;
pub mod socle;
pub mod sparse;
pub mod summability;

pub use error::{Error, Result};
pub use logvalue::{LogSum, LogValue};
pub use sparse::{FinSuppVector, SparseVec};
pub use scale::{Enumeration, Index, Prefix, Scale, ScaleContext, ScaleFamily};
