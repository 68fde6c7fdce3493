//! Polarized double-negation translations between classical and
//! intuitionistic first-order logic.
//!
//! The crate provides:
//!
//! - first-order syntax with parsing, printing, substitution, antinegation
//!   and occurrence polarity ([`formula`], [`parse`]);
//! - the four historical negative translations and the two polarized pairs,
//!   with sequent-level lifting ([`translate`]);
//! - machine-checked proof objects for three cut-free sequent calculi:
//!   classical LK, intuitionistic LJ and a focused classical calculus
//!   ([`proof`], [`check`]);
//! - executable proof transformations between the calculi: eta-expansion
//!   of axioms, Kleene inversion, focusing and unfocusing, and the forward
//!   and reverse translation embeddings ([`transform`]);
//! - bounded backward proof search for LK and LJ used as a provability
//!   oracle and proof generator ([`prover`], [`corpus`]).

pub mod check;
pub mod corpus;
pub mod formula;
pub mod parse;
pub mod proof;
pub mod prover;
pub mod transform;
pub mod translate;

pub use check::{check_lj, check_lk, check_lkf};
pub use formula::{Formula, Polarity, Term};
pub use parse::{parse_formula, parse_sequent, parse_term};
pub use proof::{ProofNode, RuleId, Sequent};
pub use translate::{goal_wrapper, lift_sequent, translate, Scheme};
