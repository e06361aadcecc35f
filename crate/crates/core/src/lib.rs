//! Exact probabilities for propositional formulas.
//!
//! The engine assigns every formula a probability conditional on any
//! satisfiable formula, with no free parameters: an atom given only
//! tautologies has probability 1/2, and everything else follows by exact
//! model counting. The crate provides the formula language (`formula`),
//! two independent counting backends (`semantics`), the probability
//! operations themselves (`prior`), the named assumption constructors and
//! closed-form tables (`assumptions`), and a seeded property harness that
//! re-derives every symmetry the engine relies on (`harness`).

pub mod assumptions;
pub mod formula;
pub mod harness;
pub mod prior;
pub mod semantics;

pub use formula::{parse, Atom, Formula, FormulaError, Universe};
pub use prior::{PriorError, Probability};
pub use semantics::{Backend, Engine, Limits, ModelCount, SemanticsError};
