//! Utilitarian aggregation: when does a planner's stochastic choice behave
//! like a weighted mixture of its agents?
//!
//! Fix a menu `D` and let `r_1, …, r_m` be the agents' choice rows on `D`.
//! A planner row `ρ` is *locally behavioral utilitarian* when it lies in the
//! convex hull of the agent rows. This module decides that membership by
//! linear programming from two independent directions and hands back
//! machine-checkable certificates either way:
//!
//! * [`local_weights`] — fits weights directly, minimizing the L∞ distance
//!   `‖ρ − Σ α_i r_i‖_∞`; feasible means distance within tolerance.
//! * [`respects_pareto_at`] — minimizes the L1 distance, whose dual produces
//!   a *payoff assignment* `c`: alternatives are priced, and a violation is
//!   certified by the planner's expected payoff strictly exceeding every
//!   agent's (the Pareto form of the separation).
//!
//! The two verdicts agree (membership is membership); running both is a
//! deliberate cross-check, and the certificates are falsifiable artifacts:
//! feasible weights reproduce the row, and a separating `c` converts into an
//! *agreement probe* — a comparison row `q` with `Σ_x q(x)ρ(x)` outside the
//! agents' range — via [`witness_probe`].
//!
//! Alignment-based notions are also provided: [`agreement`] (probability of
//! choosing the same alternative), [`is_maximal`] (no row is weakly more
//! aligned with every agent, decided by a worst-slack LP over blends of the
//! agent rows), [`uniform_support_rule`], and [`classify_rule`] which bundles
//! the responsiveness / consistency / maximality / dominance flags.
//!
//! ```
//! use welfarelab::aggregation::{local_weights, LpVerdict};
//! use welfarelab::choice::ChoiceDistribution;
//! use welfarelab::lottery::{make_lottery, DecisionProblem};
//!
//! let menu = DecisionProblem::new(vec![
//!     make_lottery(&[1.0, 0.0]).unwrap(),
//!     make_lottery(&[0.0, 1.0]).unwrap(),
//! ]).unwrap();
//! let row = |p: f64| ChoiceDistribution::new(menu.clone(), vec![p, 1.0 - p], None).unwrap();
//!
//! // 0.6 = 0.5·0.9 + 0.5·0.3: the planner is a mixture of the two agents.
//! let verdict = local_weights(&row(0.6), &[row(0.9), row(0.3)], 1e-9).unwrap();
//! match verdict {
//!     LpVerdict::Feasible { weights } => {
//!         assert!((weights.alpha()[0] - 0.5).abs() < 1e-7);
//!     }
//!     LpVerdict::Infeasible { .. } => unreachable!("planted mixture"),
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::choice::{
    atoms_choice_distribution, AtomicReu, ChoiceDistribution, SamplerReu, TieBreakRule,
};
use crate::lottery::{DecisionProblem, SIMPLEX_TOL};
use crate::lp::{LpBuilder, Rel};
use crate::{Error, Result};

/// Mass threshold below which a choice probability counts as zero when
/// reading supports off exact rows.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Default LP feasibility tolerance.
pub const LP_TOL: f64 = 1e-9;

/// One agent of a population profile: atomic or sampler-based.
#[derive(Debug, Clone)]
pub enum ReuAgent {
    /// Finite-support measure with exact choice rows.
    Atomic(AtomicReu),
    /// Sampler-based measure; rows must be estimated.
    Sampler(SamplerReu),
}

impl ReuAgent {
    fn dimension(&self) -> usize {
        match self {
            ReuAgent::Atomic(a) => a.dimension(),
            ReuAgent::Sampler(s) => s.dimension(),
        }
    }
}

/// An ordered collection of agent populations over one outcome space.
#[derive(Debug, Clone)]
pub struct AgentProfile {
    agents: Vec<ReuAgent>,
}

impl AgentProfile {
    /// Validates non-emptiness and a shared outcome dimension.
    pub fn new(agents: Vec<ReuAgent>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::EmptyInput("agent profile"));
        }
        let dim = agents[0].dimension();
        for a in &agents {
            if a.dimension() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.dimension(),
                });
            }
        }
        Ok(AgentProfile { agents })
    }

    /// A profile of purely atomic agents.
    pub fn from_atomic(agents: Vec<AtomicReu>) -> Result<Self> {
        Self::new(agents.into_iter().map(ReuAgent::Atomic).collect())
    }

    /// The agents in order.
    pub fn agents(&self) -> &[ReuAgent] {
        &self.agents
    }

    /// Number of agents.
    pub fn len(&self) -> usize {
        self.agents.len()
    }

    /// True when the profile holds no agents (never constructible).
    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Outcome-space dimension shared by all agents.
    pub fn dimension(&self) -> usize {
        self.agents[0].dimension()
    }

    /// The atomic measure of agent `i`, or a [`Error::NonAtomicAgent`] error.
    pub fn atomic(&self, i: usize) -> Result<&AtomicReu> {
        match &self.agents[i] {
            ReuAgent::Atomic(a) => Ok(a),
            ReuAgent::Sampler(_) => Err(Error::NonAtomicAgent(i)),
        }
    }

    /// Exact choice rows of every agent on `menu`; requires atomic agents.
    pub fn atomic_rows(
        &self,
        menu: &DecisionProblem,
        tie_break: TieBreakRule,
    ) -> Result<Vec<ChoiceDistribution>> {
        (0..self.len())
            .map(|i| atoms_choice_distribution(self.atomic(i)?, menu, tie_break))
            .collect()
    }
}

/// Nonnegative mixture weights summing to one (within `1e-12`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    alpha: Vec<f64>,
}

impl Weights {
    /// Validates sign and sum, then stores the exactly renormalized vector.
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::EmptyInput("weights"));
        }
        for &a in &alpha {
            if a < -SIMPLEX_TOL || !a.is_finite() {
                return Err(Error::InvalidWeights(format!("negative weight {a}")));
            }
        }
        let sum: f64 = alpha.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1 within 1e-12"
            )));
        }
        let alpha = alpha.into_iter().map(|a| (a / sum).max(0.0)).collect();
        Ok(Weights { alpha })
    }

    /// Normalizes an arbitrary nonnegative vector to sum one.
    ///
    /// Convenience for raw LP output and CLI input; rejects vectors with a
    /// non-positive total.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidWeights(format!("weight total {sum}")));
        }
        Weights::new(raw.iter().map(|a| (a.max(0.0)) / sum).collect()).or_else(|_| {
            // A second exact pass absorbs clamp-induced drift.
            let clamped: Vec<f64> = raw.iter().map(|a| a.max(0.0)).collect();
            let s: f64 = clamped.iter().sum();
            Ok(Weights {
                alpha: clamped.into_iter().map(|a| a / s).collect(),
            })
        })
    }

    /// The uniform weights on `m` agents.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyInput("weights"));
        }
        Ok(Weights {
            alpha: vec![1.0 / m as f64; m],
        })
    }

    /// The weight vector.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Number of components.
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    /// True when there are no components (never constructible).
    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

/// A payoff assignment on a menu: alternative `x` pays `c[x]`, with `theta`
/// the best agent expectation. Serves as a separation witness: the planner's
/// expected payoff exceeds `theta` by the certified margin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PayoffAssignment {
    /// Payoff of each alternative, `‖c‖_∞ <= 1`.
    pub c: Vec<f64>,
    /// `max_i  c · agent_row_i`.
    pub theta: f64,
}

/// Outcome of a hull-membership query, carrying exactly one certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LpVerdict {
    /// The planner row is a mixture of agent rows; `weights` reproduce it.
    Feasible {
        /// Mixture weights with `‖ρ − Σ α_i r_i‖` within tolerance.
        weights: Weights,
    },
    /// The planner row is separated from the hull.
    Infeasible {
        /// Margin-maximal separating payoff assignment.
        witness: PayoffAssignment,
        /// `c · planner − theta`, at least `1e-9` for genuine violations.
        margin: f64,
    },
}

impl LpVerdict {
    /// Whether the membership holds.
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpVerdict::Feasible { .. })
    }
}

fn ensure_shared_menu<'a, I>(mut rows: I) -> Result<&'a DecisionProblem>
where
    I: Iterator<Item = &'a ChoiceDistribution>,
{
    let first = rows.next().ok_or(Error::EmptyInput("choice rows"))?;
    for row in rows {
        if !row.menu().approx_eq(first.menu(), SIMPLEX_TOL) {
            return Err(Error::MenuMismatch);
        }
    }
    Ok(first.menu())
}

/// Mixes atomic agents into the weighted-utilitarian population
/// `Σ_i α_i π_i`: atom weights scale by `α_i`, zero-weight contributions are
/// dropped, and coinciding utilities (componentwise within `1e-12`) merge.
pub fn mix(profile: &AgentProfile, alpha: &Weights) -> Result<AtomicReu> {
    if alpha.len() != profile.len() {
        return Err(Error::DimensionMismatch {
            expected: profile.len(),
            got: alpha.len(),
        });
    }
    let mut merged: Vec<(crate::lottery::VnmUtility, f64)> = Vec::new();
    for (i, &a) in alpha.alpha().iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let agent = profile.atomic(i)?;
        for (u, w) in agent.atoms() {
            let weight = a * w;
            if weight == 0.0 {
                continue;
            }
            match merged.iter_mut().find(|(v, _)| {
                v.values()
                    .iter()
                    .zip(u.values())
                    .all(|(a, b)| (a - b).abs() <= SIMPLEX_TOL)
            }) {
                Some((_, acc)) => *acc += weight,
                None => merged.push((u.clone(), weight)),
            }
        }
    }
    AtomicReu::new(merged)
}

/// Decides hull membership by fitting mixture weights (L∞ objective).
///
/// Feasible when weights `α` on the simplex achieve
/// `‖planner − Σ α_i agent_i‖_∞ <= tol`; otherwise infeasible with a
/// margin-maximal separating payoff assignment. With duplicate agent rows the
/// weights are non-unique and any feasible vector is returned.
pub fn local_weights(
    planner: &ChoiceDistribution,
    agents: &[ChoiceDistribution],
    tol: f64,
) -> Result<LpVerdict> {
    ensure_shared_menu(std::iter::once(planner).chain(agents))?;
    if agents.is_empty() {
        return Err(Error::EmptyInput("agent rows"));
    }
    let m = agents.len();
    let n = planner.menu().len();

    // Variables: alpha_1..alpha_m >= 0, t >= 0. Minimize t subject to
    // -t <= (Σ alpha_i r_i - rho)[x] <= t and Σ alpha = 1.
    let mut lp = LpBuilder::new(m + 1);
    let mut objective = vec![0.0; m + 1];
    objective[m] = 1.0;
    lp.set_objective(&objective);
    for x in 0..n {
        let mut upper = vec![0.0; m + 1];
        for (i, r) in agents.iter().enumerate() {
            upper[i] = r.probs()[x];
        }
        let mut lower = upper.clone();
        upper[m] = -1.0;
        lower[m] = 1.0;
        lp.add_row(&upper, Rel::Le, planner.probs()[x]);
        lp.add_row(&lower, Rel::Ge, planner.probs()[x]);
    }
    let mut simplex_row = vec![1.0; m + 1];
    simplex_row[m] = 0.0;
    lp.add_row(&simplex_row, Rel::Eq, 1.0);

    let sol = lp.solve()?;
    if sol.value <= tol {
        let weights = Weights::normalized(sol.x[..m].to_vec())?;
        Ok(LpVerdict::Feasible { weights })
    } else {
        let (witness, margin) = separating_witness(planner, agents)?;
        Ok(LpVerdict::Infeasible { witness, margin })
    }
}

/// Decides the respects-Pareto condition at one menu (L1 objective).
///
/// Same verdict semantics as [`local_weights`] — at a fixed menu the two
/// conditions are equivalent — but decided by an independent program: the
/// minimal L1 deviation `min Σ|ρ − Σ y_i r_i|` over the weight simplex, whose
/// optimal dual prices are the Pareto witness `c` with
/// `E_planner c > max_i E_agent_i c`.
pub fn respects_pareto_at(
    planner: &ChoiceDistribution,
    agents: &[ChoiceDistribution],
    tol: f64,
) -> Result<LpVerdict> {
    ensure_shared_menu(std::iter::once(planner).chain(agents))?;
    if agents.is_empty() {
        return Err(Error::EmptyInput("agent rows"));
    }
    let m = agents.len();
    let n = planner.menu().len();

    // Variables: y (m), u (n), v (n), all >= 0; minimize Σ(u + v)
    // subject to Σ_i y_i r_i + u - v = rho and Σ y = 1.
    let nv = m + 2 * n;
    let mut lp = LpBuilder::new(nv);
    let mut objective = vec![0.0; nv];
    for c in objective.iter_mut().skip(m) {
        *c = 1.0;
    }
    lp.set_objective(&objective);
    for x in 0..n {
        let mut row = vec![0.0; nv];
        for (i, r) in agents.iter().enumerate() {
            row[i] = r.probs()[x];
        }
        row[m + x] = 1.0;
        row[m + n + x] = -1.0;
        lp.add_row(&row, Rel::Eq, planner.probs()[x]);
    }
    let mut simplex_row = vec![0.0; nv];
    for c in simplex_row.iter_mut().take(m) {
        *c = 1.0;
    }
    lp.add_row(&simplex_row, Rel::Eq, 1.0);

    let sol = lp.solve()?;
    if sol.value <= tol {
        let weights = Weights::normalized(sol.x[..m].to_vec())?;
        return Ok(LpVerdict::Feasible { weights });
    }
    // The duals of the n residual rows are the payoff assignment; dual
    // feasibility bounds them in [-1, 1]. Recompute theta and the margin
    // from first principles so the certificate stands on its own.
    let c: Vec<f64> = sol.duals[..n].to_vec();
    let (witness, margin) = finish_witness(planner, agents, c)?;
    Ok(LpVerdict::Infeasible { witness, margin })
}

/// Maximizes the separation margin `c·planner − max_i c·agent_i` over
/// `‖c‖_∞ <= 1` and packages the optimum as a [`PayoffAssignment`].
fn separating_witness(
    planner: &ChoiceDistribution,
    agents: &[ChoiceDistribution],
) -> Result<(PayoffAssignment, f64)> {
    let m = agents.len();
    let n = planner.menu().len();
    // Variables: c (n, free), theta (free). Maximize c·rho − theta, i.e.
    // minimize theta − c·rho, subject to c·r_i − theta <= 0 and |c_x| <= 1.
    let nv = n + 1;
    let mut lp = LpBuilder::new(nv);
    for j in 0..nv {
        lp.set_free(j);
    }
    let mut objective: Vec<f64> = planner.probs().iter().map(|p| -p).collect();
    objective.push(1.0);
    lp.set_objective(&objective);
    for r in agents.iter() {
        let mut row: Vec<f64> = r.probs().to_vec();
        row.push(-1.0);
        lp.add_row(&row, Rel::Le, 0.0);
    }
    for x in 0..n {
        let mut hi = vec![0.0; nv];
        hi[x] = 1.0;
        lp.add_row(&hi, Rel::Le, 1.0);
        let mut lo = vec![0.0; nv];
        lo[x] = 1.0;
        lp.add_row(&lo, Rel::Ge, -1.0);
    }
    let _ = m;
    let sol = lp.solve()?;
    let c = sol.x[..n].to_vec();
    finish_witness(planner, agents, c)
}

/// Recomputes `theta` and the margin for a candidate payoff vector.
fn finish_witness(
    planner: &ChoiceDistribution,
    agents: &[ChoiceDistribution],
    c: Vec<f64>,
) -> Result<(PayoffAssignment, f64)> {
    let dot = |row: &ChoiceDistribution| -> f64 {
        row.probs().iter().zip(&c).map(|(p, cx)| p * cx).sum()
    };
    let theta = agents.iter().map(dot).fold(f64::NEG_INFINITY, f64::max);
    let margin = dot(planner) - theta;
    if !(margin.is_finite() && margin > 0.0) {
        return Err(Error::LpFailure(format!(
            "separation failed to certify (margin {margin:e})"
        )));
    }
    Ok((PayoffAssignment { c, theta }, margin))
}

/// The agreement `Σ_x ρ(x)·ρ̂(x)` — the probability that independent draws
/// from the two rows pick the same alternative. Always in `[0, 1]`.
pub fn agreement(rho: &ChoiceDistribution, rho_hat: &ChoiceDistribution) -> Result<f64> {
    ensure_shared_menu([rho, rho_hat].into_iter())?;
    Ok(rho
        .probs()
        .iter()
        .zip(rho_hat.probs())
        .map(|(a, b)| a * b)
        .sum())
}

/// Checks the agreement-bounds condition for one probe row: the planner's
/// agreement with the probe must lie between the smallest and largest agent
/// agreement, with `1e-9` slack on both sides.
pub fn agreement_bounds_check(
    planner: &ChoiceDistribution,
    agents: &[ChoiceDistribution],
    probe: &ChoiceDistribution,
) -> Result<bool> {
    ensure_shared_menu(
        std::iter::once(planner)
            .chain(agents)
            .chain(std::iter::once(probe)),
    )?;
    if agents.is_empty() {
        return Err(Error::EmptyInput("agent rows"));
    }
    let planner_agreement = agreement(probe, planner)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in agents {
        let a = agreement(probe, r)?;
        lo = lo.min(a);
        hi = hi.max(a);
    }
    Ok(planner_agreement >= lo - LP_TOL && planner_agreement <= hi + LP_TOL)
}

/// Converts a separating payoff assignment into an agreement probe.
///
/// The affine map `q_x = (c_x + K) / Σ(c + K)` with `K = ‖c‖_∞` lands on the
/// probability simplex and preserves strict payoff inequalities, so a
/// violation certified by `c` materializes as a probe whose agreement with
/// the planner escapes the agents' range — the falsifiable form of the
/// certificate.
pub fn witness_probe(
    witness: &PayoffAssignment,
    menu: &DecisionProblem,
) -> Result<ChoiceDistribution> {
    if witness.c.len() != menu.len() {
        return Err(Error::DimensionMismatch {
            expected: menu.len(),
            got: witness.c.len(),
        });
    }
    let k = witness.c.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
    let shifted: Vec<f64> = witness.c.iter().map(|v| v + k).collect();
    let total: f64 = shifted.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::LpFailure("degenerate witness (constant c)".into()));
    }
    ChoiceDistribution::new(
        menu.clone(),
        shifted.into_iter().map(|v| v / total).collect(),
        None,
    )
}

/// Decides maximality of a row against agent rows by the worst-slack LP.
///
/// `rho` is maximal exactly when some blend `y` of the agent rows is
/// maximized (over alternatives) on all of `supp(rho)`: the LP maximizes the
/// worst slack `min_{x ∈ supp} (yR)_x − max_{x'} (yR)_{x'}` and maximality
/// means the optimum reaches zero (within `1e-9`).
pub fn is_maximal(rho: &ChoiceDistribution, agents: &[ChoiceDistribution]) -> Result<bool> {
    ensure_shared_menu(std::iter::once(rho).chain(agents))?;
    if agents.is_empty() {
        return Err(Error::EmptyInput("agent rows"));
    }
    let support = rho.support(SUPPORT_TOL);
    if support.is_empty() {
        // A zero row (impossible for validated distributions) is vacuously
        // supported anywhere; treat as maximal.
        return Ok(true);
    }
    let m = agents.len();
    let n = rho.menu().len();

    // Variables: y (m) >= 0, v free, w >= 0; minimize w subject to
    //   (yR)_x - v + w >= 0   for x in supp(rho)
    //   (yR)_x - v      <= 0  for every alternative x
    //   Σ y = 1.
    // The optimum w* equals -s* where s* is the best worst slack.
    let nv = m + 2;
    let mut lp = LpBuilder::new(nv);
    lp.set_free(m);
    let mut objective = vec![0.0; nv];
    objective[m + 1] = 1.0;
    lp.set_objective(&objective);
    for &x in &support {
        let mut row = vec![0.0; nv];
        for (i, r) in agents.iter().enumerate() {
            row[i] = r.probs()[x];
        }
        row[m] = -1.0;
        row[m + 1] = 1.0;
        lp.add_row(&row, Rel::Ge, 0.0);
    }
    for x in 0..n {
        let mut row = vec![0.0; nv];
        for (i, r) in agents.iter().enumerate() {
            row[i] = r.probs()[x];
        }
        row[m] = -1.0;
        lp.add_row(&row, Rel::Le, 0.0);
    }
    let mut simplex_row = vec![0.0; nv];
    for c in simplex_row.iter_mut().take(m) {
        *c = 1.0;
    }
    lp.add_row(&simplex_row, Rel::Eq, 1.0);

    let sol = lp.solve()?;
    Ok(sol.value <= LP_TOL)
}

/// The rule that is uniform over the union of the agents' supports.
pub fn uniform_support_rule(agents: &[ChoiceDistribution]) -> Result<ChoiceDistribution> {
    let menu = ensure_shared_menu(agents.iter())?.clone();
    let n = menu.len();
    let mut in_union = vec![false; n];
    for r in agents {
        for x in r.support(SUPPORT_TOL) {
            in_union[x] = true;
        }
    }
    let count = in_union.iter().filter(|&&b| b).count();
    if count == 0 {
        return Err(Error::EmptyInput("union support"));
    }
    let probs = in_union
        .iter()
        .map(|&b| if b { 1.0 / count as f64 } else { 0.0 })
        .collect();
    ChoiceDistribution::new(menu, probs, None)
}

/// The classification produced by [`classify_rule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFlags {
    /// Positive planner mass wherever any agent has positive mass.
    pub responsive: bool,
    /// Zero planner mass wherever every agent has zero mass.
    pub consistent: bool,
    /// Maximal (per [`is_maximal`]) at every supplied menu.
    pub maximal_on_every_menu: bool,
    /// The uniform-support rule is weakly more aligned with every agent at
    /// every menu and strictly more aligned with every agent at some menu.
    pub dominated_by_uniform_support: bool,
}

/// Classifies a planner rule against an atomic profile on a menu family.
///
/// `rho` must contain one row per menu in `menus` (matched by menu content,
/// in any order); a missing row raises [`Error::MissingMenu`] with the menu's
/// index. Sampler agents raise [`Error::NonAtomicAgent`] — classification
/// needs exact rows, so estimate sampler rows first and work at the row
/// level.
pub fn classify_rule(
    rho: &[ChoiceDistribution],
    profile: &AgentProfile,
    menus: &[DecisionProblem],
    tie_break: TieBreakRule,
) -> Result<RuleFlags> {
    if menus.is_empty() {
        return Err(Error::EmptyInput("menus"));
    }
    let mut responsive = true;
    let mut consistent = true;
    let mut maximal = true;
    let mut weakly_dominated_everywhere = true;
    let mut strictly_dominated_somewhere = false;

    for (k, menu) in menus.iter().enumerate() {
        let row = rho
            .iter()
            .find(|r| r.menu().approx_eq(menu, SIMPLEX_TOL))
            .ok_or(Error::MissingMenu(k))?;
        let agent_rows = profile.atomic_rows(menu, tie_break)?;

        for x in 0..menu.len() {
            let any_agent = agent_rows.iter().any(|r| r.probs()[x] > SUPPORT_TOL);
            let planner_mass = row.probs()[x];
            if any_agent && planner_mass <= SUPPORT_TOL {
                responsive = false;
            }
            if !any_agent && planner_mass > SUPPORT_TOL {
                consistent = false;
            }
        }

        maximal &= is_maximal(row, &agent_rows)?;

        let uniform = uniform_support_rule(&agent_rows)?;
        let mut strict_here = true;
        for agent in &agent_rows {
            let au = agreement(&uniform, agent)?;
            let ar = agreement(row, agent)?;
            if au < ar - SUPPORT_TOL {
                weakly_dominated_everywhere = false;
            }
            if au <= ar + SUPPORT_TOL {
                strict_here = false;
            }
        }
        strictly_dominated_somewhere |= strict_here;
    }

    Ok(RuleFlags {
        responsive,
        consistent,
        maximal_on_every_menu: maximal,
        dominated_by_uniform_support: weakly_dominated_everywhere && strictly_dominated_somewhere,
    })
}

/// The outcome of expected-utilitarian-welfare maximization on one menu.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EuwChoice {
    /// Degenerate (up to tie-break) choice on the welfare-maximal
    /// alternative.
    pub distribution: ChoiceDistribution,
    /// The welfare value `v · x` of each alternative, in menu order.
    pub values: Vec<f64>,
}

/// Expected utilitarian welfare: aggregates utilities (not choices) as
/// `v = Σ_i α_i E_{π_i}[u]` and deterministically picks the alternative
/// maximizing `v · x`.
///
/// Unlike the mixture planner, this rule is sensitive to per-agent utility
/// *intensity*: rescaling one agent's utilities changes `v` and can flip the
/// chosen alternative even though no individual choice changes.
pub fn euw_choice(
    profile: &AgentProfile,
    alpha: &Weights,
    menu: &DecisionProblem,
    tie_break: TieBreakRule,
) -> Result<EuwChoice> {
    if alpha.len() != profile.len() {
        return Err(Error::DimensionMismatch {
            expected: profile.len(),
            got: alpha.len(),
        });
    }
    if profile.dimension() != menu.dimension() {
        return Err(Error::DimensionMismatch {
            expected: menu.dimension(),
            got: profile.dimension(),
        });
    }
    let dim = profile.dimension();
    let mut v = vec![0.0; dim];
    for (i, &a) in alpha.alpha().iter().enumerate() {
        let agent = profile.atomic(i)?;
        for (u, w) in agent.atoms() {
            for (vk, uk) in v.iter_mut().zip(u.values()) {
                *vk += a * w * uk;
            }
        }
    }
    let values: Vec<f64> = menu
        .alternatives()
        .iter()
        .map(|x| x.probs().iter().zip(&v).map(|(p, vk)| p * vk).sum())
        .collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<usize> = (0..values.len())
        .filter(|&j| values[j] >= best - SIMPLEX_TOL)
        .collect();
    let mut probs = vec![0.0; menu.len()];
    match tie_break {
        TieBreakRule::UniformOverArgmax => {
            for &j in &winners {
                probs[j] = 1.0 / winners.len() as f64;
            }
        }
        TieBreakRule::LexicographicFirst => probs[winners[0]] = 1.0,
    }
    Ok(EuwChoice {
        distribution: ChoiceDistribution::new(menu.clone(), probs, None)?,
        values,
    })
}
