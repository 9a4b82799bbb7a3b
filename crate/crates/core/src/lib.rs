//! Decide, for a Presburger set `A ⊆ Z^n`, whether `A` is definable in
//! `(Z,+,0)` or defines the ordering, and produce a witness that can be
//! checked independently either way.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: exact integers and rationals, Hermite/Smith normal forms,
//!   Diophantine systems, Fourier–Motzkin linear programming.
//! * [`formula`]: terms, formulas, parser, printer, substitution.
//! * [`oracle`]: brute-force evaluation on boxes, the ground truth for tests.
//! * [`qe`]: Cooper-style quantifier elimination and decision procedures.
//! * [`cells`]: Z-linear functions and cell decompositions.
//! * [`groupsets`]: lattices, cosets and quasi-coset decompositions.
//! * [`polyhedra`]: half-spaces, planks and the inradius decision.
//! * [`classifier`]: the reduction pipeline and witness composition.

pub mod arith;
pub mod cells;
pub mod classifier;
pub mod error;
pub mod formula;
pub mod groupsets;
pub mod oracle;
pub mod par;
pub mod polyhedra;
pub mod qe;
pub mod suites;

pub use arith::{Int, Rat};
pub use error::{Error, Result};
pub use formula::{parse, Formula, Term};
