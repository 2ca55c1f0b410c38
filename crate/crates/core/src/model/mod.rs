//! Left-invariant metric contact structures on Lie algebras.
//!
//! A model is a frame `b_0..b_{n-1}` with brackets `[b_i, b_j] = c^k_ij b_k`
//! and constant `(g, eta, J)`. Every derivative of a left-invariant tensor
//! reduces to structure-constant algebra, so the Levi-Civita connection, the
//! Nijenhuis tensor, `L_xi J` and `nabla F` are exact up to rounding.

mod builtin;
mod checks;
mod geometry;
mod lie;
mod schema;

pub use builtin::{builtin, heisenberg, noncr5, random_contact_lie, su2, BUILTIN_NAMES};
pub use geometry::endo_block;
pub use lie::LieContactModel;
pub use schema::ModelFile;
