//! Unit equations `u1 + u2 = n` over the orders `Z[ρ]` of the simplest cubic
//! fields `K_a = Q(ρ)`, `f_a(ρ) = ρ^3 - aρ^2 - (a+3)ρ - 1 = 0`.
//!
//! The crate covers exact arithmetic in `Z[ρ]` ([`cubic_core`]), certified
//! interval enclosures of the real embeddings ([`embeddings`], backed by
//! [`interval`]), the solution model and its order-12 symmetry group
//! ([`solutions`]), a bounded exhaustive solver ([`search`]), the exponent
//! bounds from linear forms in logarithms ([`bounds`]) and the
//! continued-fraction reduction with replayable certificates ([`reduction`]).

pub mod bounds;
pub mod cubic_core;
pub mod embeddings;
pub mod error;
pub mod interval;
mod json;
pub mod reduction;
pub mod search;
pub mod solutions;

pub use cubic_core::{CubicParams, OrderElement, UnitRepr};
pub use embeddings::{build_context, EmbeddingContext};
pub use error::{Error, Result};
