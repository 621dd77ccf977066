//! # welfarelab
//!
//! Tools for two closely related questions in applied welfare economics:
//!
//! 1. **When does a stochastic social choice rule behave like a utilitarian
//!    planner?** Populations are described by random expected-utility (REU)
//!    measures — distributions over von Neumann–Morgenstern utilities — and a
//!    planner's menu-by-menu choice frequencies are tested against the convex
//!    hull of the population rows. The [`aggregation`] module provides the
//!    linear-programming certificates: mixture weights when the planner is a
//!    behavioral utilitarian, and a separating payoff assignment (a falsifiable
//!    betting slip) when it is not, together with maximality and dominance
//!    classification for rules that cannot be rationalized exactly.
//!
//! 2. **How should heterogeneous willingness to pay be aggregated when a price
//!    change hits a logit population?** The [`welfare`] module computes the
//!    full distribution of compensating variation in closed form for logit
//!    demand systems, exposes its quantiles (the median and friends), its mean
//!    (the usual average-surplus measure), a Monte Carlo simulator that must
//!    agree with the closed form, and diagnostics for when the median and mean
//!    orderings part ways.
//!
//! Supporting modules: [`lottery`] (simplex primitives: lotteries, normalized
//! utilities, menus), [`choice`] (REU measures and their choice
//! distributions), [`lp`] (a small dense two-phase simplex solver with dual
//! extraction), [`numeric`] (bisection and adaptive quadrature),
//! [`rng`] (counter-based deterministic random streams), [`oracles`]
//! (brute-force reference answers that cross-validate the LP checkers), and
//! [`scenarios`] (four worked end-to-end examples with self-checking
//! reports).
//!
//! ## Determinism
//!
//! Every randomized computation in this crate is a pure function of an
//! explicit `(seed, sample index)` pair. Samples are generated from
//! independent counter-addressed ChaCha streams, so results do not depend on
//! evaluation order, chunking, or thread count, and reruns are bit-identical
//! on every platform with IEEE-754 doubles.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod aggregation;
pub mod choice;
mod error;
pub mod lottery;
pub mod lp;
pub mod numeric;
pub mod oracles;
pub mod rng;
pub mod scenarios;
pub mod welfare;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
