//! Decision analysis over possibilistic bases: pessimistic and optimistic
//! qualitative utilities computed three ways (semantic model enumeration,
//! level cuts, arguments), plus an acceptability pipeline for inconsistent
//! knowledge, a random instance generator and a differential check harness.

pub mod accept;
pub mod args;
pub mod bases;
pub mod check;
pub mod cuts;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod gen;
pub mod logic;
pub mod report;
pub mod sat;
pub mod scale;
pub mod semantic;

pub use bases::{load_instance, Decision, GoalBase, Instance, KnowledgeBase, WeightedFormula};
pub use error::{Error, Result};
pub use logic::{parse_formula, Formula, Interpretation, Vocabulary};
pub use scale::{order_reverse, ScaleValue};
