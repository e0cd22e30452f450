//! Exact mixed probabilistic/nondeterministic powerdomains over finite posets.

pub mod error;
pub mod functional;
pub mod hull;
pub mod io;
pub mod lang;
pub mod laws;
pub mod lp;
pub mod poset;
pub mod powerdomain;
pub mod predicate;
pub mod rat;
pub mod sample;
pub mod valuation;

pub use error::{Error, Result};
pub use poset::{FinitePoset, UpSet};
pub use powerdomain::{Flavor, PowerElement, StateTransformer};
pub use predicate::{IntervalPredicate, Predicate, RangeMode};
pub use rat::{ExtRat, Interval, Rat};
pub use valuation::Valuation;
