//! Simplex primitives: lotteries, normalized vNM utilities, and menus.
//!
//! A policy space with `n + 1` pure outcomes is modeled by the probability
//! simplex in `R^(n+1)`. Expected-utility comparisons are bilinear forms
//! `u · x`, and because choice is invariant to adding a constant to every
//! coordinate of `u`, utilities are stored *normalized*: the last coordinate
//! is pinned to exactly `0.0` by subtracting the final entry at construction.
//! This makes utility vectors unique representatives of their preference and
//! keeps downstream aggregation well-posed.
//!
//! ```
//! use welfarelab::lottery::{make_lottery, VnmUtility, DecisionProblem, argmax_set, expected_utility};
//!
//! let safe = make_lottery(&[1.0, 0.0]).unwrap();
//! let coin = make_lottery(&[0.5, 0.5]).unwrap();
//! let menu = DecisionProblem::new(vec![safe, coin]).unwrap();
//! let u = VnmUtility::new(vec![2.0, -1.0]).unwrap(); // stored as [3, 0]
//!
//! assert_eq!(expected_utility(&u, &menu.alternatives()[0]).unwrap(), 3.0);
//! assert_eq!(argmax_set(&menu, &u, 1e-12).unwrap(), vec![0]);
//! ```

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Componentwise tolerance for simplex membership and duplicate detection.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A point of the probability simplex: nonnegative entries summing to one
/// (within [`SIMPLEX_TOL`]).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lottery {
    probs: Vec<f64>,
}

impl Lottery {
    /// The probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of pure outcomes.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// True when the lottery has no components (never constructible).
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// The degenerate lottery putting all mass on outcome `i`.
    pub fn degenerate(i: usize, len: usize) -> Result<Self> {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
        let mut probs = vec![0.0; len];
        probs[i] = 1.0;
        Ok(Lottery { probs })
    }

    /// Componentwise comparison within `tol`.
    pub fn approx_eq(&self, other: &Lottery, tol: f64) -> bool {
        self.probs.len() == other.probs.len()
            && self
                .probs
                .iter()
                .zip(&other.probs)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// Validates `weights` as a lottery and returns it normalized.
///
/// Entries may be perturbed by roundoff: anything not below `-1e-12` is
/// accepted and clamped to zero after the exact division by the total, so the
/// result's components are the normalized weights. Fails with
/// [`Error::NegativeMass`] on a genuinely negative entry and
/// [`Error::SumNotOne`] when the total strays from one by more than `1e-12`.
pub fn make_lottery(weights: &[f64]) -> Result<Lottery> {
    if weights.is_empty() {
        return Err(Error::EmptyInput("lottery weights"));
    }
    for (index, &value) in weights.iter().enumerate() {
        if value < -SIMPLEX_TOL || !value.is_finite() {
            return Err(Error::NegativeMass { index, value });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::SumNotOne { sum });
    }
    let probs = weights.iter().map(|w| (w / sum).max(0.0)).collect();
    Ok(Lottery { probs })
}

/// A von Neumann–Morgenstern utility over pure outcomes, normalized so the
/// last coordinate is exactly zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VnmUtility {
    values: Vec<f64>,
}

impl VnmUtility {
    /// Normalizes `values` by subtracting the final entry from every
    /// coordinate; the stored last coordinate is exactly `0.0`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("utility values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidWeights("non-finite utility value".into()));
        }
        let last = *values.last().expect("nonempty");
        let mut values: Vec<f64> = values.into_iter().map(|v| v - last).collect();
        *values.last_mut().expect("nonempty") = 0.0;
        Ok(VnmUtility { values })
    }

    /// The normalized utility vector (last entry exactly zero).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of pure outcomes.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the vector has no components (never constructible).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A finite menu of distinct lotteries over a common outcome space.
///
/// Order is preserved exactly as supplied; all rows of choice data over the
/// menu index into that order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionProblem {
    alternatives: Vec<Lottery>,
}

impl DecisionProblem {
    /// Validates non-emptiness, equal dimensions, and pairwise distinctness
    /// (componentwise within `1e-12`).
    pub fn new(alternatives: Vec<Lottery>) -> Result<Self> {
        if alternatives.is_empty() {
            return Err(Error::EmptyMenu);
        }
        let dim = alternatives[0].len();
        for alt in &alternatives {
            if alt.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: alt.len(),
                });
            }
        }
        for first in 0..alternatives.len() {
            for second in (first + 1)..alternatives.len() {
                if alternatives[first].approx_eq(&alternatives[second], SIMPLEX_TOL) {
                    return Err(Error::DuplicateAlternative { first, second });
                }
            }
        }
        Ok(DecisionProblem { alternatives })
    }

    /// The alternatives, in construction order.
    pub fn alternatives(&self) -> &[Lottery] {
        &self.alternatives
    }

    /// Number of alternatives.
    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    /// True when the menu has no alternatives (never constructible).
    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    /// Dimension of the underlying outcome space.
    pub fn dimension(&self) -> usize {
        self.alternatives[0].len()
    }

    /// Menus are interchangeable when alternatives match pairwise in order
    /// (componentwise within `tol`).
    pub fn approx_eq(&self, other: &DecisionProblem, tol: f64) -> bool {
        self.alternatives.len() == other.alternatives.len()
            && self
                .alternatives
                .iter()
                .zip(&other.alternatives)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Expected utility `u · x` of lottery `x` under utility `u`.
pub fn expected_utility(u: &VnmUtility, x: &Lottery) -> Result<f64> {
    if u.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: x.len(),
        });
    }
    Ok(u.values().iter().zip(x.probs()).map(|(a, b)| a * b).sum())
}

/// Indices of menu alternatives within `tol` of the best expected utility.
///
/// Never empty: the maximizer itself always qualifies.
pub fn argmax_set(menu: &DecisionProblem, u: &VnmUtility, tol: f64) -> Result<Vec<usize>> {
    if u.len() != menu.dimension() {
        return Err(Error::DimensionMismatch {
            expected: menu.dimension(),
            got: u.len(),
        });
    }
    let scores: Vec<f64> = menu
        .alternatives()
        .iter()
        .map(|x| expected_utility(u, x).expect("dimension checked"))
        .collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >= best - tol)
        .map(|(j, _)| j)
        .collect())
}

/// Whether utility `u` lies in the normal cone of alternative `j`: does `j`
/// maximize expected utility over the menu (ties allowed within `1e-12`)?
pub fn in_normal_cone(menu: &DecisionProblem, j: usize, u: &VnmUtility) -> Result<bool> {
    if j >= menu.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: menu.len(),
        });
    }
    Ok(argmax_set(menu, u, SIMPLEX_TOL)?.contains(&j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_lottery_normalizes_and_validates() {
        let l = make_lottery(&[0.25, 0.25, 0.5]).unwrap();
        assert_eq!(l.probs(), &[0.25, 0.25, 0.5]);

        // Tiny negative noise is clamped, not rejected.
        let l = make_lottery(&[1.0 + 5e-13, -5e-13]).unwrap();
        assert!(l.probs()[1] >= 0.0);
        assert!((l.probs().iter().sum::<f64>() - 1.0).abs() <= 2.0 * SIMPLEX_TOL);

        assert!(matches!(
            make_lottery(&[1.2, -0.2]),
            Err(Error::NegativeMass { index: 1, .. })
        ));
        assert!(matches!(
            make_lottery(&[0.5, 0.4]),
            Err(Error::SumNotOne { .. })
        ));
        assert!(matches!(make_lottery(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn utility_normalization_pins_last_coordinate() {
        let u = VnmUtility::new(vec![2.0, -1.0, 0.5]).unwrap();
        assert_eq!(u.values(), &[1.5, -1.5, 0.0]);
        assert_eq!(u.values()[2].to_bits(), 0.0_f64.to_bits());
    }

    #[test]
    fn expected_utility_is_the_dot_product() {
        // Hand-computed: (2, -1, 0) · (1/3, 1/3, 1/3) = 1/3.
        let u = VnmUtility::new(vec![2.0, -1.0, 0.0]).unwrap();
        let x = make_lottery(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
        let v = expected_utility(&u, &x).unwrap();
        assert!((v - 1.0 / 3.0).abs() <= 1e-12);

        let short = make_lottery(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            expected_utility(&u, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bilinearity_within_tolerance() {
        // u·(αx + (1−α)y) = α u·x + (1−α) u·y for a few mixtures.
        let u = VnmUtility::new(vec![0.3, -2.0, 1.7, 0.0]).unwrap();
        let x = make_lottery(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let y = make_lottery(&[0.7, 0.1, 0.1, 0.1]).unwrap();
        for &alpha in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let mix: Vec<f64> = x
                .probs()
                .iter()
                .zip(y.probs())
                .map(|(a, b)| alpha * a + (1.0 - alpha) * b)
                .collect();
            let mix = make_lottery(&mix).unwrap();
            let lhs = expected_utility(&u, &mix).unwrap();
            let rhs = alpha * expected_utility(&u, &x).unwrap()
                + (1.0 - alpha) * expected_utility(&u, &y).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12);
        }
    }

    #[test]
    fn degenerate_menu_argmax_matches_coordinate_order() {
        // Menu of the three degenerate lotteries; utility picks coordinate 1.
        let menu =
            DecisionProblem::new((0..3).map(|i| Lottery::degenerate(i, 3).unwrap()).collect())
                .unwrap();
        let u = VnmUtility::new(vec![0.0, 5.0, 1.0]).unwrap();
        assert_eq!(argmax_set(&menu, &u, 1e-12).unwrap(), vec![1]);
        assert!(in_normal_cone(&menu, 1, &u).unwrap());
        assert!(!in_normal_cone(&menu, 0, &u).unwrap());
        assert!(matches!(
            in_normal_cone(&menu, 7, &u),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn argmax_reports_ties_and_never_returns_empty() {
        let menu = DecisionProblem::new(vec![
            make_lottery(&[1.0, 0.0]).unwrap(),
            make_lottery(&[0.0, 1.0]).unwrap(),
        ])
        .unwrap();
        // Indifferent utility: both alternatives tie at 0.
        let u = VnmUtility::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(argmax_set(&menu, &u, 1e-12).unwrap(), vec![0, 1]);
    }

    #[test]
    fn argmax_invariance_under_scaling_and_shift() {
        let menu = DecisionProblem::new(vec![
            make_lottery(&[0.6, 0.1, 0.3]).unwrap(),
            make_lottery(&[0.2, 0.5, 0.3]).unwrap(),
            make_lottery(&[0.1, 0.1, 0.8]).unwrap(),
        ])
        .unwrap();
        let u = VnmUtility::new(vec![1.0, 0.4, -0.3]).unwrap();
        let base = argmax_set(&menu, &u, 1e-12).unwrap();
        // Positive scaling and constant shifts are normalized away.
        let scaled = VnmUtility::new(u.values().iter().map(|v| 3.7 * v).collect()).unwrap();
        let shifted = VnmUtility::new(u.values().iter().map(|v| v + 11.0).collect()).unwrap();
        assert_eq!(argmax_set(&menu, &scaled, 1e-12).unwrap(), base);
        assert_eq!(argmax_set(&menu, &shifted, 1e-12).unwrap(), base);
    }

    #[test]
    fn menus_reject_duplicates_and_dimension_mixes() {
        let a = make_lottery(&[0.5, 0.5]).unwrap();
        let b = make_lottery(&[0.5 + 4e-13, 0.5 - 4e-13]).unwrap();
        assert!(matches!(
            DecisionProblem::new(vec![a.clone(), b]),
            Err(Error::DuplicateAlternative {
                first: 0,
                second: 1
            })
        ));
        let c = make_lottery(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            DecisionProblem::new(vec![a, c]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            DecisionProblem::new(vec![]),
            Err(Error::EmptyMenu)
        ));
    }
}
