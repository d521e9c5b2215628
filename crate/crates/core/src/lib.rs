//! Codes for composite DNA symbols under limited-magnitude probability
//! errors (LMPE).
//!
//! A symbol is a probability vector of four non-negative integers summing to
//! a resolution `k`. An `l`-limited error moves at most `l` units of mass
//! between the four bases.

pub mod blockcodes;
pub mod bounds;
pub mod classify;
pub mod combin;
pub mod constructions;
pub mod error;
pub mod field;
pub mod gray;
pub mod prob;
pub mod sim;

pub use error::{LmpeError, Result};
pub use field::{Field, FieldElement};
pub use prob::{ProbVec, SymbolError, Word};
