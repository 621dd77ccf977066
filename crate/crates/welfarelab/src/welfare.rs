//! Distributional welfare for logit demand systems: the compensating
//! variation (CV) distribution, its quantiles and mean, and skewness
//! diagnostics.
//!
//! A population of consumer types chooses one of `Z` goods by additive random
//! utility with i.i.d. standard Gumbel shocks, giving logit choice shares
//!
//! ```text
//! q̂ⁱ_x(p, y) = exp(Wⁱ_x(y − p_x)) / Σ_z exp(Wⁱ_z(y − p_z))
//! ```
//!
//! for increasing money-to-utility maps `Wⁱ_x`. A price move `p⁰ → p′`
//! induces, per consumer draw, the compensating variation `CV(ε)`: the income
//! adjustment `t` solving `v(p′, y + t | ε) = v(p⁰, y | ε)` — positive for
//! losses (money must be paid *to* the consumer), negative for gains. Across
//! the shock distribution this yields a CV distribution whose CDF has the
//! closed piecewise form implemented by [`cv_cdf`]: with price differences
//! relabeled so `Δp_1 ≤ … ≤ Δp_Z`, the CDF at `a` sums the demand shares of
//! the goods already "cheap enough" (`Δp_x ≤ a`) at a half-updated price
//! vector. Atoms sit exactly at the `Δp_x` values.
//!
//! Three independent routes to the same object keep each other honest:
//! the analytic CDF ([`cv_cdf`]), per-draw bisection on simulated shocks
//! ([`simulate_cv_samples`]), and the binary-menu preference probability
//! ([`binary_preference_probability`]) that backs [`stochastic_cv`].
//!
//! ```
//! use welfarelab::aggregation::Weights;
//! use welfarelab::welfare::*;
//!
//! let scen = WelfareScenario::new(
//!     vec!["bread".into(), "rice".into()],
//!     10.0,
//!     UtilitySpec::CobbDouglas { a: 1.0 },
//!     vec![ConsumerType::new("only", vec![0.0, 0.0])],
//!     Weights::new(vec![1.0]).unwrap(),
//! ).unwrap();
//! let change = PriceChange::new(vec![2.0, 2.0], vec![3.0, 2.0]).unwrap();
//! let alpha = Weights::new(vec![1.0]).unwrap();
//! // The CDF is 0 below the smallest price difference and 1 at the largest.
//! assert_eq!(cv_cdf(&scen, &alpha, &change, -0.5).unwrap(), 0.0);
//! assert_eq!(cv_cdf(&scen, &alpha, &change, 1.0).unwrap(), 1.0);
//! let median = distributional_cv(&scen, &alpha, 0.5, &change).unwrap();
//! assert!((0.0..=1.0).contains(&median));
//! ```

use serde::{Deserialize, Serialize};

use crate::aggregation::Weights;
use crate::numeric::{
    bisect_increasing_root, bisect_smallest_at_least, integrate_with_breakpoints,
};
use crate::rng::{sample_index, standard_gumbel, stream_rng};
use crate::{Error, Result};

/// Absolute tolerance for CV roots and quantile bisection.
pub const ROOT_TOL: f64 = 1e-10;

/// Absolute tolerance for mean-CV quadrature.
pub const QUAD_TOL: f64 = 1e-8;

/// Simulated CV roots within this distance of a price difference snap onto
/// it exactly, so atoms are recovered verbatim.
pub const SNAP_TOL: f64 = 1e-9;

/// The money-to-utility family `W` shared by every (type, good) pair; the
/// additive quality terms `L(i, x)` live on the consumer types.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum UtilitySpec {
    /// `W(t) = a·log t + L(i, x)`; requires `t = y − p_x > 0`.
    CobbDouglas {
        /// Curvature parameter, `a > 0`.
        a: f64,
    },
    /// Quasilinear local form `W(t) = b·t / y₀ + L(i, x)` with `y₀` the
    /// scenario's base income; no wealth effects.
    Linear {
        /// Slope parameter, `b > 0`.
        b: f64,
    },
}

/// One consumer type: a label and the additive quality `L(i, x)` per good.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumerType {
    /// Human-readable type name.
    pub label: String,
    /// `L(i, x)` for each good `x`, in goods order.
    pub quality: Vec<f64>,
}

impl ConsumerType {
    /// Builds a type from a label and quality vector.
    pub fn new(label: impl Into<String>, quality: Vec<f64>) -> Self {
        ConsumerType {
            label: label.into(),
            quality,
        }
    }
}

/// A logit demand economy: goods, base income, utility family, and a
/// population of consumer types with shares.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WelfareScenario {
    goods: Vec<String>,
    income: f64,
    spec: UtilitySpec,
    types: Vec<ConsumerType>,
    shares: Weights,
}

impl WelfareScenario {
    /// Validates and assembles a scenario.
    ///
    /// Requires non-empty goods and types, one quality entry per good on
    /// every type, a positive finite income, positive curvature/slope, and
    /// one population share per type.
    pub fn new(
        goods: Vec<String>,
        income: f64,
        spec: UtilitySpec,
        types: Vec<ConsumerType>,
        shares: Weights,
    ) -> Result<Self> {
        if goods.is_empty() {
            return Err(Error::EmptyInput("goods"));
        }
        if types.is_empty() {
            return Err(Error::EmptyInput("consumer types"));
        }
        if !(income.is_finite() && income > 0.0) {
            return Err(Error::DomainError(format!(
                "income {income} must be positive"
            )));
        }
        match spec {
            UtilitySpec::CobbDouglas { a } => {
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::DomainError(format!(
                        "curvature a = {a} must be positive"
                    )));
                }
            }
            UtilitySpec::Linear { b } => {
                if !(b.is_finite() && b > 0.0) {
                    return Err(Error::DomainError(format!(
                        "slope b = {b} must be positive"
                    )));
                }
            }
        }
        for t in &types {
            if t.quality.len() != goods.len() {
                return Err(Error::DimensionMismatch {
                    expected: goods.len(),
                    got: t.quality.len(),
                });
            }
            if t.quality.iter().any(|q| !q.is_finite()) {
                return Err(Error::DomainError(format!(
                    "non-finite quality for type {}",
                    t.label
                )));
            }
        }
        if shares.len() != types.len() {
            return Err(Error::DimensionMismatch {
                expected: types.len(),
                got: shares.len(),
            });
        }
        Ok(WelfareScenario {
            goods,
            income,
            spec,
            types,
            shares,
        })
    }

    /// Good labels, in order.
    pub fn goods(&self) -> &[String] {
        &self.goods
    }

    /// Number of goods `Z`.
    pub fn num_goods(&self) -> usize {
        self.goods.len()
    }

    /// Base income `y`.
    pub fn income(&self) -> f64 {
        self.income
    }

    /// The utility family.
    pub fn spec(&self) -> UtilitySpec {
        self.spec
    }

    /// Consumer types, in order.
    pub fn types(&self) -> &[ConsumerType] {
        &self.types
    }

    /// Number of consumer types.
    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    /// Population shares `σ` over types.
    pub fn shares(&self) -> &Weights {
        &self.shares
    }

    /// `Wⁱ_x(t)` for effective money `t`; `−∞` when Cobb-Douglas money runs
    /// out (`t ≤ 0`), so maxima ignore unaffordable goods.
    fn weight_value(&self, i: usize, x: usize, t: f64) -> f64 {
        let l = self.types[i].quality[x];
        match self.spec {
            UtilitySpec::CobbDouglas { a } => {
                if t > 0.0 {
                    a * t.ln() + l
                } else {
                    f64::NEG_INFINITY
                }
            }
            UtilitySpec::Linear { b } => b * t / self.income + l,
        }
    }

    /// Checks that a price vector has one entry per good and leaves positive
    /// money at base income.
    fn check_prices(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.num_goods() {
            return Err(Error::DimensionMismatch {
                expected: self.num_goods(),
                got: p.len(),
            });
        }
        for &px in p {
            if !(px.is_finite() && px > 0.0) {
                return Err(Error::DomainError(format!("price {px} must be positive")));
            }
            if px >= self.income {
                return Err(Error::DomainError(format!(
                    "price {px} is not below income {}",
                    self.income
                )));
            }
        }
        Ok(())
    }

    fn check_alpha(&self, alpha: &Weights) -> Result<()> {
        if alpha.len() != self.num_types() {
            return Err(Error::DimensionMismatch {
                expected: self.num_types(),
                got: alpha.len(),
            });
        }
        Ok(())
    }
}

/// A price move `p⁰ → p′` with the differences pre-sorted.
///
/// The differences `Δp_x = p′_x − p⁰_x` are relabeled ascending
/// (`Δp_(1) ≤ … ≤ Δp_(Z)`) with the permutation recorded; the CV support is
/// exactly `[Δp_(1), Δp_(Z)]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceChange {
    p0: Vec<f64>,
    p1: Vec<f64>,
    dp: Vec<f64>,
    sorted_dp: Vec<f64>,
    order: Vec<usize>,
}

impl PriceChange {
    /// Validates equal-length positive price vectors and precomputes the
    /// sorted difference labeling.
    pub fn new(p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        if p0.is_empty() {
            return Err(Error::EmptyInput("prices"));
        }
        if p0.len() != p1.len() {
            return Err(Error::DimensionMismatch {
                expected: p0.len(),
                got: p1.len(),
            });
        }
        for &p in p0.iter().chain(&p1) {
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::DomainError(format!("price {p} must be positive")));
            }
        }
        let dp: Vec<f64> = p0.iter().zip(&p1).map(|(a, b)| b - a).collect();
        let mut order: Vec<usize> = (0..dp.len()).collect();
        order.sort_by(|&i, &j| dp[i].partial_cmp(&dp[j]).expect("finite differences"));
        let sorted_dp = order.iter().map(|&i| dp[i]).collect();
        Ok(PriceChange {
            p0,
            p1,
            dp,
            sorted_dp,
            order,
        })
    }

    /// Number of goods.
    pub fn len(&self) -> usize {
        self.p0.len()
    }

    /// True when there are no goods (never constructible).
    pub fn is_empty(&self) -> bool {
        self.p0.is_empty()
    }

    /// Original prices.
    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    /// New prices.
    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    /// Differences `p′ − p⁰` in original good order.
    pub fn dp(&self) -> &[f64] {
        &self.dp
    }

    /// Differences sorted ascending.
    pub fn dp_sorted(&self) -> &[f64] {
        &self.sorted_dp
    }

    /// `order[k]` is the original index of the `k`-th smallest difference.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Smallest difference — the lower end of the CV support.
    pub fn dp_min(&self) -> f64 {
        self.sorted_dp[0]
    }

    /// Largest difference — the upper end of the CV support.
    pub fn dp_max(&self) -> f64 {
        *self.sorted_dp.last().expect("non-empty")
    }

    /// Indices (original order) of goods whose price moved by more than
    /// `tol` in absolute value.
    pub fn moved(&self, tol: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.dp[x].abs() > tol)
            .collect()
    }
}

/// Logit choice shares of type `i` at prices `p` and effective income
/// `y_eff`: the softmax of `(Wⁱ_x(y_eff − p_x))_x`.
///
/// Under Cobb-Douglas every good must be affordable (`y_eff > p_x`);
/// otherwise a [`Error::DomainError`] is raised.
pub fn logit_shares(scen: &WelfareScenario, i: usize, p: &[f64], y_eff: f64) -> Result<Vec<f64>> {
    if i >= scen.num_types() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: scen.num_types(),
        });
    }
    if p.len() != scen.num_goods() {
        return Err(Error::DimensionMismatch {
            expected: scen.num_goods(),
            got: p.len(),
        });
    }
    if matches!(scen.spec, UtilitySpec::CobbDouglas { .. }) {
        for (x, &px) in p.iter().enumerate() {
            if y_eff <= px {
                return Err(Error::DomainError(format!(
                    "effective income {y_eff} does not exceed price {px} of good {x}"
                )));
            }
        }
    }
    let w: Vec<f64> = (0..p.len())
        .map(|x| scen.weight_value(i, x, y_eff - p[x]))
        .collect();
    Ok(softmax(&w))
}

/// Numerically stable softmax; `−∞` entries get share zero.
fn softmax(w: &[f64]) -> Vec<f64> {
    let m = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = w.iter().map(|&v| (v - m).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Aggregate demand `Q^α_x(p, y_eff) = Σ_i α_i q̂ⁱ_x(p, y_eff)`.
pub fn aggregate_demand(
    scen: &WelfareScenario,
    alpha: &Weights,
    p: &[f64],
    y_eff: f64,
) -> Result<Vec<f64>> {
    scen.check_alpha(alpha)?;
    let mut total = vec![0.0; scen.num_goods()];
    for (i, &a) in alpha.alpha().iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let shares = logit_shares(scen, i, p, y_eff)?;
        for (t, s) in total.iter_mut().zip(shares) {
            *t += a * s;
        }
    }
    Ok(total)
}

/// The CV CDF (right-continuous) or its left limit, depending on `strict`.
fn cv_cdf_impl(
    scen: &WelfareScenario,
    alpha: &Weights,
    change: &PriceChange,
    a: f64,
    strict: bool,
) -> Result<f64> {
    scen.check_alpha(alpha)?;
    scen.check_prices(change.p0())?;
    scen.check_prices(change.p1())?;
    if !a.is_finite() {
        return Err(Error::DomainError(format!("evaluation point {a}")));
    }
    let lo = change.dp_min();
    let hi = change.dp_max();
    if strict {
        if a <= lo {
            return Ok(0.0);
        }
        if a > hi {
            return Ok(1.0);
        }
    } else {
        if a < lo {
            return Ok(0.0);
        }
        if a >= hi {
            return Ok(1.0);
        }
    }
    // Winners are goods whose price difference is already covered by `a`;
    // the left limit excludes the boundary atoms.
    let winner = |dp: f64| if strict { dp < a } else { dp <= a };
    let positive_branch = if strict { a > 0.0 } else { a >= 0.0 };
    let z = change.len();
    let prices: Vec<f64>;
    let y_eff;
    if positive_branch {
        prices = (0..z)
            .map(|x| {
                if winner(change.dp()[x]) {
                    change.p1()[x]
                } else {
                    change.p0()[x] + a
                }
            })
            .collect();
        y_eff = scen.income + a;
    } else {
        prices = (0..z)
            .map(|x| {
                if winner(change.dp()[x]) {
                    change.p1()[x] - a
                } else {
                    change.p0()[x]
                }
            })
            .collect();
        y_eff = scen.income;
    }
    let q = aggregate_demand(scen, alpha, &prices, y_eff)?;
    Ok((0..z)
        .filter(|&x| winner(change.dp()[x]))
        .map(|x| q[x])
        .sum())
}

/// The CDF `G(a)` of the compensating variation under type weights `alpha`.
///
/// Piecewise closed form: `0` below `Δp_(1)`, `1` at and above `Δp_(Z)`, and
/// in between the sum of demand shares of the goods with `Δp_x ≤ a`,
/// evaluated — for `a ≥ 0` — at new prices on those goods, `p⁰ + a` on the
/// rest, and income `y + a`; for `a < 0` at `p′ − a` on those goods, `p⁰` on
/// the rest, and income `y`. Right-continuous with atoms at the `Δp_x`.
pub fn cv_cdf(
    scen: &WelfareScenario,
    alpha: &Weights,
    change: &PriceChange,
    a: f64,
) -> Result<f64> {
    cv_cdf_impl(scen, alpha, change, a, false)
}

/// The left limit `G(a⁻)`, used for exact Kolmogorov–Smirnov statistics in
/// the presence of atoms.
pub fn cv_cdf_left(
    scen: &WelfareScenario,
    alpha: &Weights,
    change: &PriceChange,
    a: f64,
) -> Result<f64> {
    cv_cdf_impl(scen, alpha, change, a, true)
}

/// The probability that a consumer drawn from `alpha` weakly prefers the
/// changed prices with compensation `x` — the pair `(p′, y + x)` — to the
/// status quo `(p⁰, y)`.
///
/// Computed from first principles through the binary-menu choice
/// probability: with shared Gumbel shocks, the comparison
/// `max_g(A_g + ε_g) ≥ max_g(B_g + ε_g)` for `A_g = W_g(y + x − p′_g)`,
/// `B_g = W_g(y − p⁰_g)` reduces to the softmax mass of the coordinates with
/// `A_g ≥ B_g` (equivalently `Δp_g ≤ x`) inside the combined weight vector.
/// This equals [`cv_cdf`] pointwise but shares no code with it, making the
/// equality of [`stochastic_cv`] and [`distributional_cv`] a genuine test.
pub fn binary_preference_probability(
    scen: &WelfareScenario,
    alpha: &Weights,
    change: &PriceChange,
    x: f64,
) -> Result<f64> {
    scen.check_alpha(alpha)?;
    scen.check_prices(change.p0())?;
    scen.check_prices(change.p1())?;
    if !x.is_finite() {
        return Err(Error::DomainError(format!("payment {x}")));
    }
    let y = scen.income;
    let z = change.len();
    let mut total = 0.0;
    for (i, &ai) in alpha.alpha().iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        // Per good, the better of the compensated-change value A and the
        // status-quo value B enters a combined softmax; the preference
        // probability is the mass on goods where A wins (ties to A, which
        // makes the function right-continuous like the CDF).
        let mut combined = Vec::with_capacity(z);
        let mut a_wins = Vec::with_capacity(z);
        for g in 0..z {
            let a_val = scen.weight_value(i, g, y + x - change.p1()[g]);
            let b_val = scen.weight_value(i, g, y - change.p0()[g]);
            let win = change.dp()[g] <= x;
            combined.push(if win { a_val } else { b_val });
            a_wins.push(win);
        }
        let shares = softmax(&combined);
        let d_i: f64 = shares
            .iter()
            .zip(&a_wins)
            .filter(|(_, &w)| w)
            .map(|(s, _)| s)
            .sum();
        total += ai * d_i;
    }
    Ok(total)
}

/// Draws `n` independent CV samples by per-draw bisection.
///
/// Stream `k` of the seed draws a type from `alpha` and one Gumbel shock per
/// good, then solves `v(p′, y + t | ε) = v(p⁰, y | ε)` for `t` on
/// `[Δp_(1) − 1, Δp_(Z) + 1]` to within `1e-10`; roots within `1e-9` of a
/// price difference snap onto it exactly. Sample `k` depends only on
/// `(seed, k)`, so any evaluation order yields the same list.
pub fn simulate_cv_samples(
    scen: &WelfareScenario,
    alpha: &Weights,
    change: &PriceChange,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::EmptyInput("samples"));
    }
    scen.check_alpha(alpha)?;
    scen.check_prices(change.p0())?;
    scen.check_prices(change.p1())?;
    let y = scen.income;
    let z = change.len();
    let lo = change.dp_min() - 1.0;
    let hi = change.dp_max() + 1.0;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut rng = stream_rng(seed, k as u64);
        let i = sample_index(&mut rng, alpha.alpha());
        let eps: Vec<f64> = (0..z).map(|_| standard_gumbel(&mut rng)).collect();
        let value = |prices: &[f64], y_eff: f64| -> f64 {
            (0..z)
                .map(|g| scen.weight_value(i, g, y_eff - prices[g]) + eps[g])
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let base = value(change.p0(), y);
        let h = |t: f64| value(change.p1(), y + t) - base;
        let mut root = bisect_increasing_root(h, lo, hi, ROOT_TOL)?;
        let mut best = f64::INFINITY;
        let mut snap = root;
        for &dp in change.dp_sorted() {
            let d = (root - dp).abs();
            if d < best {
                best = d;
                snap = dp;
            }
        }
        if best <= SNAP_TOL {
            root = snap;
        }
        out.push(root);
    }
    Ok(out)
}

/// The distributional compensating variation `CV_{α,τ}`: the `τ`-quantile
/// `inf{z : G(z) ≥ τ}` of the CV distribution, located by bisection on the
/// support to `1e-10`.
pub fn distributional_cv(
    scen: &WelfareScenario,
    alpha: &Weights,
    tau: f64,
    change: &PriceChange,
) -> Result<f64> {
    check_tau(tau)?;
    let g = |a: f64| cv_cdf(scen, alpha, change, a).expect("validated inputs");
    // Validate once up front so the closure cannot actually panic.
    cv_cdf(scen, alpha, change, change.dp_min())?;
    bisect_smallest_at_least(g, tau, change.dp_min(), change.dp_max(), ROOT_TOL)
}

/// The mean compensating variation `CV_avg = ∫ a dG(a)`, computed as
/// `∫₀^{max Δp} (1 − G) − ∫_{min Δp}^0 G` by adaptive quadrature with cuts at
/// every `Δp_x` (the atoms), to absolute tolerance `1e-8`.
pub fn mean_cv(scen: &WelfareScenario, alpha: &Weights, change: &PriceChange) -> Result<f64> {
    cv_cdf(scen, alpha, change, change.dp_min())?;
    let g = |a: f64| cv_cdf(scen, alpha, change, a).expect("validated inputs");
    let lo = change.dp_min().min(0.0);
    let hi = change.dp_max().max(0.0);
    let cuts = change.dp_sorted();
    let negative_part = integrate_with_breakpoints(&g, lo, 0.0, cuts, QUAD_TOL / 2.0);
    let positive_part = integrate_with_breakpoints(|a| 1.0 - g(a), 0.0, hi, cuts, QUAD_TOL / 2.0);
    Ok(positive_part - negative_part)
}

/// The stochastic compensating variation: the smallest payment `x` at which
/// the population weakly prefers `(p′, y + x)` to `(p⁰, y)` with probability
/// at least `τ`.
///
/// Implemented through [`binary_preference_probability`] — not through
/// [`cv_cdf`] — and must agree with [`distributional_cv`] to numerical
/// tolerance; the test suite asserts that equality.
pub fn stochastic_cv(
    scen: &WelfareScenario,
    alpha: &Weights,
    tau: f64,
    change: &PriceChange,
) -> Result<f64> {
    check_tau(tau)?;
    binary_preference_probability(scen, alpha, change, change.dp_min())?;
    let d = |x: f64| binary_preference_probability(scen, alpha, change, x).expect("validated");
    bisect_smallest_at_least(d, tau, change.dp_min(), change.dp_max(), ROOT_TOL)
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && 0.0 < tau && tau < 1.0) {
        return Err(Error::InvalidTau(tau));
    }
    Ok(())
}

/// Which way the single moved price went.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceDirection {
    /// The moved price rose.
    Increase,
    /// The moved price fell.
    Decrease,
    /// No price moved.
    Null,
}

/// Numerically certified shape of the shifted-demand map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureVerdict {
    /// All second differences nonnegative (within tolerance).
    Convex,
    /// All second differences nonpositive (within tolerance).
    Concave,
    /// Both — the map is affine within tolerance.
    Linear,
    /// Mixed signs; no prediction made.
    Indeterminate,
}

/// How the median CV compares with the mean CV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingVerdict {
    /// Median strictly below mean (beyond `1e-9`).
    MedianBelowMean,
    /// Median strictly above mean (beyond `1e-9`).
    MedianAboveMean,
    /// Equal within `1e-9`.
    Equal,
}

/// Output of [`median_mean_diagnosis`].
#[derive(Debug, Clone, Serialize)]
pub struct MedianMeanReport {
    /// Direction of the single moved price.
    pub direction: PriceDirection,
    /// `CV_{α,1/2}`.
    pub median: f64,
    /// `CV_avg`.
    pub mean: f64,
    /// Observed ordering of median vs mean.
    pub observed: OrderingVerdict,
    /// Certified curvature of the relevant demand map.
    pub curvature: CurvatureVerdict,
    /// Ordering predicted from the curvature branch, when one applies.
    /// A weakly convex *and* concave (affine) map predicts nothing: with
    /// atoms at the support ends, flat demand is compatible with either
    /// ordering.
    pub predicted: Option<OrderingVerdict>,
    /// Whether the observed ordering is consistent with the prediction
    /// (vacuously true when no prediction applies).
    pub matches_prediction: bool,
}

/// Compares median and mean CV for a single-price change and certifies the
/// curvature hypothesis that predicts their order.
///
/// For an increase of good `g` the scanned map is
/// `a ↦ Q_g(p⁰ with p⁰_g + a; y + a)` on `[0, Δp_g]`: convexity predicts
/// median ≤ mean (the CDF `1 − Q` is then concave, hence right-skewed);
/// concavity predicts median ≥ mean. For a decrease the map is
/// `a ↦ Q_g(p⁰ with p′_g − a; y)` on `[Δp_g, 0]` — it *is* the CDF there —
/// so the predictions flip. Exactly one moved price is required.
pub fn median_mean_diagnosis(
    scen: &WelfareScenario,
    alpha: &Weights,
    change: &PriceChange,
) -> Result<MedianMeanReport> {
    scen.check_alpha(alpha)?;
    scen.check_prices(change.p0())?;
    scen.check_prices(change.p1())?;
    let moved = change.moved(1e-12);
    if moved.len() > 1 {
        return Err(Error::MultiPriceChange { moved: moved.len() });
    }
    if moved.is_empty() {
        return Ok(MedianMeanReport {
            direction: PriceDirection::Null,
            median: 0.0,
            mean: 0.0,
            observed: OrderingVerdict::Equal,
            curvature: CurvatureVerdict::Linear,
            predicted: None,
            matches_prediction: true,
        });
    }
    let g = moved[0];
    let dp = change.dp()[g];
    let increase = dp > 0.0;
    let median = distributional_cv(scen, alpha, 0.5, change)?;
    let mean = mean_cv(scen, alpha, change)?;

    const POINTS: usize = 1000;
    let (lo, hi) = if increase { (0.0, dp) } else { (dp, 0.0) };
    let mut values = Vec::with_capacity(POINTS);
    for k in 0..POINTS {
        let a = lo + (hi - lo) * k as f64 / (POINTS - 1) as f64;
        let mut prices = change.p0().to_vec();
        let y_eff;
        if increase {
            prices[g] = change.p0()[g] + a;
            y_eff = scen.income + a;
        } else {
            prices[g] = change.p1()[g] - a;
            y_eff = scen.income;
        }
        let q = aggregate_demand(scen, alpha, &prices, y_eff)?;
        values.push(q[g]);
    }
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let eps = 1e-9 * scale;
    let mut convex_ok = true;
    let mut concave_ok = true;
    for w in values.windows(3) {
        let d2 = w[2] - 2.0 * w[1] + w[0];
        if d2 < -eps {
            convex_ok = false;
        }
        if d2 > eps {
            concave_ok = false;
        }
    }
    let curvature = match (convex_ok, concave_ok) {
        (true, true) => CurvatureVerdict::Linear,
        (true, false) => CurvatureVerdict::Convex,
        (false, true) => CurvatureVerdict::Concave,
        (false, false) => CurvatureVerdict::Indeterminate,
    };
    let predicted = match (increase, curvature) {
        (true, CurvatureVerdict::Convex) => Some(OrderingVerdict::MedianBelowMean),
        (true, CurvatureVerdict::Concave) => Some(OrderingVerdict::MedianAboveMean),
        (false, CurvatureVerdict::Convex) => Some(OrderingVerdict::MedianAboveMean),
        (false, CurvatureVerdict::Concave) => Some(OrderingVerdict::MedianBelowMean),
        _ => None,
    };
    let observed = if (median - mean).abs() <= 1e-9 {
        OrderingVerdict::Equal
    } else if median < mean {
        OrderingVerdict::MedianBelowMean
    } else {
        OrderingVerdict::MedianAboveMean
    };
    let matches_prediction = match predicted {
        None => true,
        // The predicted orderings are weak inequalities; equality is
        // consistent with either branch.
        Some(p) => observed == OrderingVerdict::Equal || observed == p,
    };
    Ok(MedianMeanReport {
        direction: if increase {
            PriceDirection::Increase
        } else {
            PriceDirection::Decrease
        },
        median,
        mean,
        observed,
        curvature,
        predicted,
        matches_prediction,
    })
}

/// Output of [`scitovsky_probe`]: welfare rankings of two alternatives via a
/// common status quo versus directly.
#[derive(Debug, Clone, Serialize)]
pub struct ScitovskyReport {
    /// `CV_avg(p⁰ → p¹)`.
    pub avg_0_to_1: f64,
    /// `CV_avg(p⁰ → p²)`.
    pub avg_0_to_2: f64,
    /// `CV_avg(p¹ → p²)` — the direct comparison.
    pub avg_1_to_2: f64,
    /// `CV_med(p⁰ → p¹)`.
    pub med_0_to_1: f64,
    /// `CV_med(p⁰ → p²)`.
    pub med_0_to_2: f64,
    /// `CV_med(p¹ → p²)`.
    pub med_1_to_2: f64,
    /// The mean measure ranks `p²` over `p¹` via `p⁰` but the direct
    /// comparison disagrees (or vice versa), beyond `1e-9` both ways.
    pub reversal_avg: bool,
    /// Same flag for the median measure.
    pub reversal_med: bool,
}

/// Probes for ranking reversals: compares `p¹` and `p²` through the status
/// quo `p⁰` (smaller CV from `p⁰` = better) and directly
/// (`CV(p¹ → p²) ≤ 0` = `p²` better), flagging disagreement.
///
/// With quasilinear (`Linear`) utilities CV differences are exact value
/// differences and no reversal can occur; wealth effects (Cobb-Douglas) can
/// produce them. `p¹ = p²` is allowed and trivially consistent.
pub fn scitovsky_probe(
    scen: &WelfareScenario,
    alpha: &Weights,
    p0: &[f64],
    p1: &[f64],
    p2: &[f64],
) -> Result<ScitovskyReport> {
    let c01 = PriceChange::new(p0.to_vec(), p1.to_vec())?;
    let c02 = PriceChange::new(p0.to_vec(), p2.to_vec())?;
    let c12 = PriceChange::new(p1.to_vec(), p2.to_vec())?;
    let avg_0_to_1 = mean_cv(scen, alpha, &c01)?;
    let avg_0_to_2 = mean_cv(scen, alpha, &c02)?;
    let avg_1_to_2 = mean_cv(scen, alpha, &c12)?;
    let med_0_to_1 = distributional_cv(scen, alpha, 0.5, &c01)?;
    let med_0_to_2 = distributional_cv(scen, alpha, 0.5, &c02)?;
    let med_1_to_2 = distributional_cv(scen, alpha, 0.5, &c12)?;
    // via > 0 means p2 looks better through p0; direct > 0 means p2 is
    // better head-to-head. Opposite strict signs are a reversal.
    let opposite =
        |via: f64, direct: f64| via * direct < 0.0 && via.abs() > 1e-9 && direct.abs() > 1e-9;
    Ok(ScitovskyReport {
        avg_0_to_1,
        avg_0_to_2,
        avg_1_to_2,
        med_0_to_1,
        med_0_to_2,
        med_1_to_2,
        reversal_avg: opposite(avg_0_to_1 - avg_0_to_2, -avg_1_to_2),
        reversal_med: opposite(med_0_to_1 - med_0_to_2, -med_1_to_2),
    })
}

/// A CV distribution exposed as a curve: either the analytic CDF of a
/// scenario/price-change pair, or an explicit discrete distribution (used
/// for hand-checkable tables).
// Curves are held one at a time, never in bulk, so the size gap between the
// two variants is not worth boxing the analytic fields over.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum CvCurve {
    /// The analytic CDF of [`cv_cdf`] for one scenario and change.
    Analytic {
        /// The demand economy.
        scenario: WelfareScenario,
        /// Type weights.
        alpha: Weights,
        /// The price move.
        change: PriceChange,
    },
    /// A finite distribution given by `(value, probability)` atoms, sorted
    /// ascending by value.
    Discrete {
        /// Sorted atoms with probabilities summing to one.
        atoms: Vec<(f64, f64)>,
    },
}

impl CvCurve {
    /// Wraps a scenario and price change after validating them against each
    /// other.
    pub fn analytic(
        scenario: WelfareScenario,
        alpha: Weights,
        change: PriceChange,
    ) -> Result<Self> {
        cv_cdf(&scenario, &alpha, &change, change.dp_min())?;
        Ok(CvCurve::Analytic {
            scenario,
            alpha,
            change,
        })
    }

    /// Builds a discrete curve from atoms; probabilities must be
    /// nonnegative and sum to one within `1e-12`. Atoms are sorted and
    /// coinciding values merged.
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyInput("atoms"));
        }
        for &(v, p) in &atoms {
            if !v.is_finite() {
                return Err(Error::DomainError(format!("atom value {v}")));
            }
            if !(p.is_finite() && p >= -1e-12) {
                return Err(Error::NegativeMass { index: 0, value: p });
            }
        }
        let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::SumNotOne { sum: total });
        }
        let mut sorted = atoms;
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite values"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (v, p) in sorted {
            match merged.last_mut() {
                Some((lv, lp)) if (v - *lv).abs() <= 1e-12 => *lp += p,
                _ => merged.push((v, p.max(0.0))),
            }
        }
        Ok(CvCurve::Discrete { atoms: merged })
    }

    /// The support `[Δp_(1), Δp_(Z)]` (analytic) or `[min atom, max atom]`
    /// (discrete).
    pub fn support(&self) -> (f64, f64) {
        match self {
            CvCurve::Analytic { change, .. } => (change.dp_min(), change.dp_max()),
            CvCurve::Discrete { atoms } => (atoms[0].0, atoms[atoms.len() - 1].0),
        }
    }

    /// `G(a)`, right-continuous.
    pub fn cdf(&self, a: f64) -> Result<f64> {
        match self {
            CvCurve::Analytic {
                scenario,
                alpha,
                change,
            } => cv_cdf(scenario, alpha, change, a),
            CvCurve::Discrete { atoms } => Ok(atoms
                .iter()
                .filter(|&&(v, _)| v <= a)
                .map(|&(_, p)| p)
                .sum()),
        }
    }

    /// The left limit `G(a⁻)`.
    pub fn cdf_left(&self, a: f64) -> Result<f64> {
        match self {
            CvCurve::Analytic {
                scenario,
                alpha,
                change,
            } => cv_cdf_left(scenario, alpha, change, a),
            CvCurve::Discrete { atoms } => {
                Ok(atoms.iter().filter(|&&(v, _)| v < a).map(|&(_, p)| p).sum())
            }
        }
    }

    /// The `τ`-quantile `inf{z : G(z) ≥ τ}`; exact for discrete curves,
    /// bisected to `1e-10` for analytic ones.
    pub fn quantile(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        match self {
            CvCurve::Analytic {
                scenario,
                alpha,
                change,
            } => distributional_cv(scenario, alpha, tau, change),
            CvCurve::Discrete { atoms } => {
                let mut cum = 0.0;
                for &(v, p) in atoms {
                    cum += p;
                    if cum >= tau - 1e-15 {
                        return Ok(v);
                    }
                }
                Ok(atoms[atoms.len() - 1].0)
            }
        }
    }

    /// The mean `∫ a dG(a)`; exact for discrete curves, quadrature to `1e-8`
    /// for analytic ones.
    pub fn mean(&self) -> Result<f64> {
        match self {
            CvCurve::Analytic {
                scenario,
                alpha,
                change,
            } => mean_cv(scenario, alpha, change),
            CvCurve::Discrete { atoms } => Ok(atoms.iter().map(|&(v, p)| v * p).sum()),
        }
    }

    /// `n ≥ 2` evenly spaced `(a, G(a))` pairs across the support, endpoints
    /// included — the CSV export format.
    pub fn cdf_grid(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if n < 2 {
            return Err(Error::EmptyInput("grid size below 2"));
        }
        let (lo, hi) = self.support();
        (0..n)
            .map(|k| {
                let a = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                Ok((a, self.cdf(a)?))
            })
            .collect()
    }
}
