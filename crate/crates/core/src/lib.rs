//! Exact quadratic form algebra over `Q`, odd prime fields and iterated
//! Laurent series towers over them.

pub mod arith;
pub mod brauer;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod field;
pub mod pfister;
pub mod properties;
pub mod quadform;
pub mod report;
pub mod splitting;

pub use brauer::{clifford_invariant, hasse_invariant, BrauerClass2};
pub use error::{Error, Result};
pub use field::{BaseField, FieldDesc, Ordering, Place, SquareClass};
pub use quadform::{QForm, WittDecomp};
