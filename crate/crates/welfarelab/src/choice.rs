//! Random expected-utility (REU) populations and their choice distributions.
//!
//! A population is a probability measure over normalized vNM utilities. Facing
//! a menu `D`, a member drawn from the measure picks an expected-utility
//! maximizer, and the induced *choice distribution* `ρ(·, D)` records the
//! frequency of each alternative. Two representations are supported:
//!
//! * [`AtomicReu`] — finitely many utility types with weights; choice
//!   frequencies are computed exactly by enumerating atoms.
//! * [`SamplerReu`] — an arbitrary measure presented as a deterministic
//!   `(seed, sample index) -> utility` sampler; choice frequencies are
//!   estimated by Monte Carlo with binomial standard errors.
//!
//! Ties (several maximizers for one utility draw) are broken by an explicit
//! [`TieBreakRule`]; for the continuous measures this crate targets, ties are
//! events of probability zero and the rule never matters beyond edge cases.
//!
//! ```
//! use welfarelab::choice::{AtomicReu, TieBreakRule, atoms_choice_distribution};
//! use welfarelab::lottery::{make_lottery, DecisionProblem, VnmUtility};
//!
//! // 60% of the population prefers outcome 0, 40% prefers outcome 1.
//! let pi = AtomicReu::new(vec![
//!     (VnmUtility::new(vec![1.0, 0.0]).unwrap(), 0.6),
//!     (VnmUtility::new(vec![-1.0, 0.0]).unwrap(), 0.4),
//! ]).unwrap();
//! let menu = DecisionProblem::new(vec![
//!     make_lottery(&[1.0, 0.0]).unwrap(),
//!     make_lottery(&[0.0, 1.0]).unwrap(),
//! ]).unwrap();
//! let rho = atoms_choice_distribution(&pi, &menu, TieBreakRule::UniformOverArgmax).unwrap();
//! assert_eq!(rho.probs(), &[0.6, 0.4]);
//! ```

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lottery::{argmax_set, DecisionProblem, VnmUtility, SIMPLEX_TOL};
use crate::rng::{splitmix64, stream_rng};
use crate::{Error, Result};

/// Sum tolerance for estimated choice probabilities.
pub const CHOICE_TOL: f64 = 1e-9;

/// How a utility draw with several expected-utility maximizers is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreakRule {
    /// Choose uniformly over the argmax set (the default).
    #[default]
    UniformOverArgmax,
    /// Choose the argmax alternative with the smallest menu index.
    LexicographicFirst,
}

impl fmt::Display for TieBreakRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreakRule::UniformOverArgmax => write!(f, "uniform-over-argmax"),
            TieBreakRule::LexicographicFirst => write!(f, "lexicographic-first"),
        }
    }
}

/// A finite-support REU measure: utility atoms with positive weights
/// summing to one (within `1e-12`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomicReu {
    atoms: Vec<(VnmUtility, f64)>,
}

impl AtomicReu {
    /// Validates positivity, the weight sum, and a shared dimension, then
    /// stores weights normalized by their exact sum.
    pub fn new(atoms: Vec<(VnmUtility, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyInput("REU atoms"));
        }
        for (index, (_, w)) in atoms.iter().enumerate() {
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::NonpositiveWeight { index, value: *w });
            }
        }
        let dim = atoms[0].0.len();
        for (u, _) in &atoms {
            if u.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: u.len(),
                });
            }
        }
        let sum: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::SumNotOne { sum });
        }
        let atoms = atoms.into_iter().map(|(u, w)| (u, w / sum)).collect();
        Ok(AtomicReu { atoms })
    }

    /// The atoms: `(utility, weight)` pairs in construction order.
    pub fn atoms(&self) -> &[(VnmUtility, f64)] {
        &self.atoms
    }

    /// Dimension of the outcome space.
    pub fn dimension(&self) -> usize {
        self.atoms[0].0.len()
    }

    /// Presents the atomic measure as a sampler (inverse-CDF over atoms).
    pub fn to_sampler(&self) -> SamplerReu {
        let atoms = self.atoms.clone();
        let dimension = self.dimension();
        SamplerReu::new(dimension, move |seed, index| {
            let mut rng = stream_rng(seed, index);
            let k = crate::rng::sample_index(
                &mut rng,
                &atoms.iter().map(|(_, w)| *w).collect::<Vec<_>>(),
            );
            atoms[k].0.clone()
        })
    }
}

/// An REU measure given by a deterministic counter-addressed sampler.
///
/// `draw(seed, index)` must be a pure function of its arguments: the same
/// pair always yields the same utility, which makes every downstream Monte
/// Carlo estimate reproducible and schedule-independent.
#[derive(Clone)]
pub struct SamplerReu {
    dimension: usize,
    draw: Arc<dyn Fn(u64, u64) -> VnmUtility + Send + Sync>,
}

impl fmt::Debug for SamplerReu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SamplerReu")
            .field("dimension", &self.dimension)
            .finish_non_exhaustive()
    }
}

impl SamplerReu {
    /// Wraps a pure `(seed, index) -> utility` function.
    pub fn new<F>(dimension: usize, draw: F) -> Self
    where
        F: Fn(u64, u64) -> VnmUtility + Send + Sync + 'static,
    {
        SamplerReu {
            dimension,
            draw: Arc::new(draw),
        }
    }

    /// Dimension of the outcome space.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Sample `index` of the run keyed by `seed`.
    pub fn draw(&self, seed: u64, index: u64) -> VnmUtility {
        (self.draw)(seed, index)
    }
}

/// A (possibly estimated) choice distribution over a menu.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoiceDistribution {
    menu: DecisionProblem,
    probs: Vec<f64>,
    std_errors: Option<Vec<f64>>,
}

impl ChoiceDistribution {
    /// Validates lengths, nonnegativity, and the probability sum (within
    /// `1e-9`, the estimation tolerance).
    pub fn new(
        menu: DecisionProblem,
        probs: Vec<f64>,
        std_errors: Option<Vec<f64>>,
    ) -> Result<Self> {
        if probs.len() != menu.len() {
            return Err(Error::DimensionMismatch {
                expected: menu.len(),
                got: probs.len(),
            });
        }
        if let Some(se) = &std_errors {
            if se.len() != menu.len() {
                return Err(Error::DimensionMismatch {
                    expected: menu.len(),
                    got: se.len(),
                });
            }
        }
        for (index, &value) in probs.iter().enumerate() {
            if value < -CHOICE_TOL || !value.is_finite() {
                return Err(Error::NegativeMass { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > CHOICE_TOL {
            return Err(Error::InvalidChoiceProbs { sum });
        }
        Ok(ChoiceDistribution {
            menu,
            probs,
            std_errors,
        })
    }

    /// The menu the probabilities refer to (same order).
    pub fn menu(&self) -> &DecisionProblem {
        &self.menu
    }

    /// Choice probabilities, aligned with the menu's alternatives.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Binomial standard errors when the row was estimated by simulation.
    pub fn std_errors(&self) -> Option<&[f64]> {
        self.std_errors.as_deref()
    }

    /// Indices of alternatives with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > tol)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Exact choice distribution of an atomic population on a menu.
///
/// Each atom contributes its full weight to its maximizer; an atom with a
/// tied argmax set contributes according to the tie-break rule (uniformly
/// split or to the first index).
pub fn atoms_choice_distribution(
    pi: &AtomicReu,
    menu: &DecisionProblem,
    tie_break: TieBreakRule,
) -> Result<ChoiceDistribution> {
    if pi.dimension() != menu.dimension() {
        return Err(Error::DimensionMismatch {
            expected: menu.dimension(),
            got: pi.dimension(),
        });
    }
    let mut probs = vec![0.0; menu.len()];
    for (u, w) in pi.atoms() {
        let arg = argmax_set(menu, u, SIMPLEX_TOL)?;
        match tie_break {
            TieBreakRule::UniformOverArgmax => {
                let share = w / arg.len() as f64;
                for j in arg {
                    probs[j] += share;
                }
            }
            TieBreakRule::LexicographicFirst => probs[arg[0]] += w,
        }
    }
    ChoiceDistribution::new(menu.clone(), probs, None)
}

/// Monte Carlo estimate of a sampler population's choice distribution.
///
/// Sample `k` is drawn from the stream keyed by `(seed, k)`, so the estimate
/// is a pure function of `(seed, samples)`: chunking, evaluation order, and
/// thread count cannot change the result. Every sample contributes one
/// integer count (ties resolve to a single index — uniformly via a
/// deterministic per-sample pick, or lexicographically), which keeps the
/// reduction order-independent. Standard errors are binomial:
/// `sqrt(p(1-p)/N)`.
pub fn mc_choice_distribution(
    pi: &SamplerReu,
    menu: &DecisionProblem,
    samples: u64,
    seed: u64,
    tie_break: TieBreakRule,
) -> Result<ChoiceDistribution> {
    if pi.dimension() != menu.dimension() {
        return Err(Error::DimensionMismatch {
            expected: menu.dimension(),
            got: pi.dimension(),
        });
    }
    if samples == 0 {
        return Err(Error::EmptyInput("samples"));
    }
    let mut counts = vec![0u64; menu.len()];
    for k in 0..samples {
        let u = pi.draw(seed, k);
        let arg = argmax_set(menu, &u, SIMPLEX_TOL)?;
        let j = if arg.len() == 1 {
            arg[0]
        } else {
            match tie_break {
                // A deterministic uniform pick keyed by (seed, k): unbiased
                // across samples, reproducible, and still one integer count.
                TieBreakRule::UniformOverArgmax => {
                    let r = splitmix64(splitmix64(seed) ^ k.wrapping_mul(0x9e37_79b9));
                    arg[(r % arg.len() as u64) as usize]
                }
                TieBreakRule::LexicographicFirst => arg[0],
            }
        };
        counts[j] += 1;
    }
    let n = samples as f64;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let se = probs.iter().map(|&p| (p * (1.0 - p) / n).sqrt()).collect();
    ChoiceDistribution::new(menu.clone(), probs, Some(se))
}

/// Probability mass of atoms whose argmax on the menu is not a singleton
/// (ties within `1e-12`).
pub fn tie_probability(pi: &AtomicReu, menu: &DecisionProblem) -> Result<f64> {
    if pi.dimension() != menu.dimension() {
        return Err(Error::DimensionMismatch {
            expected: menu.dimension(),
            got: pi.dimension(),
        });
    }
    let mut mass = 0.0;
    for (u, w) in pi.atoms() {
        if argmax_set(menu, u, SIMPLEX_TOL)?.len() > 1 {
            mass += w;
        }
    }
    Ok(mass)
}
