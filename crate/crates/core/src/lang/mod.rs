//! A small imperative language with probabilistic and nondeterministic choice.

mod ast;
mod duality;
mod parser;
mod semantics;

pub use ast::{BExp, Pos, Program, Stmt, StmtKind};
pub use parser::parse_program;
pub use semantics::{denote, fuel_from, wp, wp_interval, StateSpace, DEFAULT_VAR_CAP};
pub use duality::{check_duality, duality_posts, named_interval, DualityMismatch, DualityReport};
