//! Vector valued two-forms, three-forms and their splitting on a metric
//! contact space.
//!
//! Conventions: a vector valued two-form is stored through its metric
//! contraction `B(X; Y, Z) = g(X, B(Y, Z))`; a three-form embeds with the
//! same components. Wedges with `eta` use the determinant convention, so
//! `(eta ^ alpha)(X,Y,Z) = eta(X) alpha(Y,Z) + eta(Y) alpha(Z,X) + eta(Z) alpha(X,Y)`
//! and `(eta ^ Phi)(X; Y, Z) = eta(Y) g(X, Phi Z) - eta(Z) g(X, Phi Y)`.

mod decompose;
mod ops;
mod types;

pub use decompose::*;
pub use ops::*;
pub use types::*;
