//! The crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong constructing or running a computation.
///
/// Variants are grouped by the layer that raises them; all carry enough
/// context to be actionable without a debugger.
#[derive(Debug, Clone, Error, PartialEq)]
#[non_exhaustive]
pub enum Error {
    // ---- simplex / vector primitives -------------------------------------
    /// A lottery weight was negative beyond tolerance.
    #[error("negative mass {value:e} at component {index}")]
    NegativeMass {
        /// Offending component.
        index: usize,
        /// Its value.
        value: f64,
    },
    /// Lottery weights do not sum to one within tolerance.
    #[error("weights sum to {sum} which is not 1 within 1e-12")]
    SumNotOne {
        /// The actual sum.
        sum: f64,
    },
    /// Two vectors that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Required length.
        expected: usize,
        /// Supplied length.
        got: usize,
    },
    /// An index referred past the end of a menu or vector.
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange {
        /// The offending index.
        index: usize,
        /// The container length.
        len: usize,
    },
    /// A menu must contain at least one alternative.
    #[error("menu is empty")]
    EmptyMenu,
    /// Two menu alternatives coincide componentwise within 1e-12.
    #[error("alternatives {first} and {second} are duplicates within 1e-12")]
    DuplicateAlternative {
        /// First of the coinciding pair.
        first: usize,
        /// Second of the coinciding pair.
        second: usize,
    },
    /// An input vector or atom list was empty where content is required.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    // ---- REU measures -----------------------------------------------------
    /// An atom weight was zero or negative.
    #[error("atom {index} has non-positive weight {value}")]
    NonpositiveWeight {
        /// Offending atom.
        index: usize,
        /// Its weight.
        value: f64,
    },
    /// A choice distribution's probabilities are invalid.
    #[error("choice probabilities sum to {sum} which is not 1 within 1e-9")]
    InvalidChoiceProbs {
        /// The actual sum.
        sum: f64,
    },
    /// Two operands were built over different menus.
    #[error("menus differ between operands")]
    MenuMismatch,
    /// The operation needs atomic (finite-support) agents.
    #[error("operation requires atomic agents; agent {0} is sampler-based")]
    NonAtomicAgent(usize),
    /// A rule is missing a row for one of the requested menus.
    #[error("no choice row supplied for menu {0}")]
    MissingMenu(usize),
    /// Mixture weights are invalid.
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    // ---- linear programming ----------------------------------------------
    /// The solver failed; this indicates a malformed program, not data.
    #[error("linear program failed: {0}")]
    LpFailure(String),

    // ---- welfare / demand -------------------------------------------------
    /// Demand evaluated outside its domain.
    #[error("domain error: {0}")]
    DomainError(String),
    /// A bisection bracket did not straddle the root.
    #[error("bracket [{lo}, {hi}] does not straddle the root")]
    BracketError {
        /// Lower end of the bracket.
        lo: f64,
        /// Upper end of the bracket.
        hi: f64,
    },
    /// The diagnosis requires a change to exactly one price.
    #[error("price change moves {moved} prices; exactly one is required")]
    MultiPriceChange {
        /// Number of goods whose price moved.
        moved: usize,
    },
    /// A quantile level must lie strictly between 0 and 1.
    #[error("quantile level {0} is outside (0, 1)")]
    InvalidTau(f64),
    /// A scenario or configuration field is out of range.
    #[error("invalid configuration: {0}")]
    ConfigError(String),
}
