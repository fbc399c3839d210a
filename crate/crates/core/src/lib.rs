//! Worthwhile-change dynamics on finite goal systems.
//!
//! An agent holds means, uses them in feasible ways, and scores each
//! means-way pair with a vector of costs ordered by a cone that may vary
//! with the current payoff. Changing means costs a quasimetric amount
//! (asymmetric, triangle inequality). A change is *worthwhile* when the
//! payoff improvement beats the change cost spread along a unit direction;
//! the solver walks worthwhile changes to a *variational trap* — a position
//! easy to reach and not worth leaving — and an independent certifier
//! re-verifies every claimed property by brute force on the finite
//! instance.
//!
//! The crate splits into:
//!
//! * [`cones`] — polyhedral cone algebra, variable orderings, minimality;
//! * [`quasimetric`] — finite asymmetric distance matrices and axioms;
//! * [`goal`] — the means/ways/payoff model and the resource builder;
//! * [`worthwhile`] — scalar and vector worthwhile-change sets;
//! * [`solver`] — the constructive descent and its reductions;
//! * [`certify`] — hypothesis gate, conclusion checks, trap analysis;
//! * [`scenario`] / [`report`] — file formats of the command-line tool.

pub mod certify;
pub mod cones;
pub mod error;
pub mod goal;
pub mod quasimetric;
pub mod report;
pub mod samples;
pub mod scenario;
pub mod solver;
pub mod worthwhile;

pub use cones::{Cone, PayoffVec, VariableOrdering};
pub use error::{Error, Result};
pub use goal::{FeasiblePair, GoalSystem, Sense};
pub use quasimetric::QuasimetricSpace;
pub use solver::{SolveOutcome, SolveParams};
