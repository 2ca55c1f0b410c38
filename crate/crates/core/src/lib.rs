//! Pointwise linear algebra of metric contact structures and the torsion
//! classification of their adapted connections.
//!
//! Everything runs on component tables in a fixed frame: a
//! [`ContactMetricSpace`] carries `(g, eta, J)` and the Reeb vector, the
//! `forms` module implements the Bianchi operator `b`, the operator
//! `M B = B(J., J.)`, the trace and the eight-part splitting of vector valued
//! two-forms, and `model` supplies left-invariant structures on Lie algebras
//! where every derivative reduces to structure-constant algebra.
//!
//! Adapted connections are built from their free torsion data in
//! [`connection`] and compared through their Dirac operators in [`clifford`].

pub mod batch;
pub mod clifford;
pub mod connection;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod model;
pub mod random;
pub mod report;
pub mod space;
pub mod suites;
pub mod tensor;

pub use connection::{AdaptedData, ConnectionField};
pub use error::{Error, Result};
pub use forms::{Decomposition, EndoOnContact, ThreeForm, TwoForm, VectorValuedTwoForm};
pub use linalg::{Mat, Vector};
pub use model::LieContactModel;
pub use report::{CheckRecord, CheckSuiteResult};
pub use space::{AdaptedFrame, ContactMetricSpace, ValidationReport};
