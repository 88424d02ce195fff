//! Solvers and a seeded agent simulator for the peer-review game.
//!
//! A unit mass of authors of two productivity types exert costly effort to
//! produce high- or low-quality papers; a capacity-constrained journal
//! accepts papers whose noisy quality signal clears an evaluation
//! threshold, and may additionally let authors pay to challenge a
//! rejection with a fresh referee draw. This crate computes the resulting
//! equilibria in closed form and cross-checks them:
//!
//! - [`first_best`]: the full-information benchmark and the acceptance
//!   probability that implements it when only quality is verifiable.
//! - [`one_shot`]: single-evaluation review: best responses, aggregate
//!   impact and yield, the capacity-binding threshold, and the journal's
//!   unconstrained first-order condition.
//! - [`dynamic`]: review with a challenge option: regime classification,
//!   total/virtual acceptance rates, aggregates, capacity inversion, and
//!   policy optimization over (threshold, challenge cost).
//! - [`monte_carlo`]: a deterministic, splittable-stream agent simulation
//!   and brute-force best-response grids that serve as independent oracles
//!   for every closed form above.
//! - [`sweep`]: one-parameter comparative-statics tables with monotonicity
//!   reports.

pub mod dynamic;
pub mod error;
pub mod first_best;
pub mod gaussian;
pub mod model;
pub mod monte_carlo;
pub mod numeric;
pub mod one_shot;
pub mod sweep;

pub use error::Error;
pub use model::{
    Capacity, DynamicPolicy, OneShotPolicy, Population, Quality, ReviewPolicy, Technology,
};
