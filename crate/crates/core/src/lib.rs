//! Exact algebraic engine for Kirby data of finite order cork families.
//!
//! A handle decomposition is stored as a [`KirbyDatum`]: dotted circles
//! (free generators), framed 2-handles carrying a word, a framing and
//! linking numbers, and a count of 3-handles. On top of that sit exact
//! integer linear algebra ([`linalg`]), homology and presentation
//! invariants ([`invariants`]), a replayable move engine ([`moves`]),
//! generators for every family ([`families`]) and Legendrian front
//! bookkeeping for Stein framing checks ([`stein`]).

pub mod datum;
pub mod error;
pub mod families;
pub mod format;
pub mod invariants;
pub mod linalg;
pub mod moves;
pub mod seq;
pub mod stein;
pub mod word;

pub use datum::{CorkPair, DottedCircle, FamilyKind, FamilyMeta, KirbyDatum, Role, Circle, TwoHandle};
pub use error::{Error, Result};
pub use seq::{CorkOrder, StarZeroSequence, Symbol};
pub use word::{Letter, Word};
