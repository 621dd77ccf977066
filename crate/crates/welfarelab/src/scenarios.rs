//! Scripted worked examples with machine-checkable reports.
//!
//! Each `run_*` function reproduces one benchmark construction end to end and
//! returns an [`ExampleReport`]: echoed inputs, labeled computed quantities,
//! and a list of [`ExpectedCheck`]s comparing computed values against their
//! expected values at stated tolerances. Every expectation records where its
//! reference value comes from (`hand-computed`, `closed-form`,
//! `numerical-integration`, or `simulation (3σ)`), so a failing check names
//! the kind of oracle it broke.
//!
//! The four examples:
//!
//! * [`run_euw_example`] — a two-population binary choice where expected
//!   utilitarian welfare (EUW) picks an alternative that loses money for
//!   every agent under a payoff probe, while the mixture planner does not;
//!   also shows EUW's sensitivity to utility intensity.
//! * [`run_diamond_example`] — sure policy vs a fair coin; EUW is
//!   indifferent, the mixture planner randomizes 50/50.
//! * [`run_condorcet_example`] — three agents with cyclic pairwise choice
//!   probabilities built from angular utility perturbations; the mixture
//!   planner spreads mass over all three lotteries while EUW picks a single
//!   one.
//! * [`run_median_counterexample`] — a two-type discrete CV table where the
//!   median measure calls both alternatives gains yet every type loses in
//!   expectation under the 50-50 lottery.
//!
//! ```
//! use welfarelab::scenarios::run_euw_example;
//! let report = run_euw_example().unwrap();
//! assert!(report.all_pass());
//! ```

use std::f64::consts::PI;

use serde::Serialize;

use crate::aggregation::{euw_choice, local_weights, mix, AgentProfile, LpVerdict, Weights};
use crate::choice::{
    atoms_choice_distribution, mc_choice_distribution, AtomicReu, ChoiceDistribution, SamplerReu,
    TieBreakRule,
};
use crate::lottery::{make_lottery, DecisionProblem, VnmUtility};
use crate::numeric::integrate_with_breakpoints;
use crate::rng::{splitmix64, stream_rng, uniform_open01};
use crate::welfare::CvCurve;
use crate::{Error, Result};

/// How a check compares `actual` against `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|actual − expected| ≤ tolerance`.
    Equals,
    /// `actual ≥ expected − tolerance`.
    AtLeast,
    /// `actual ≤ expected + tolerance`.
    AtMost,
}

/// One expected-value assertion inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectedCheck {
    /// What is being checked.
    pub label: String,
    /// Comparison direction.
    pub kind: CheckKind,
    /// Reference value.
    pub expected: f64,
    /// Computed value.
    pub actual: f64,
    /// Allowed slack.
    pub tolerance: f64,
    /// Where the reference value comes from: `hand-computed`,
    /// `closed-form`, `numerical-integration`, or `simulation (3σ)`.
    pub source: &'static str,
    /// Whether the check passed.
    pub pass: bool,
}

impl ExpectedCheck {
    fn new(
        label: impl Into<String>,
        kind: CheckKind,
        expected: f64,
        actual: f64,
        tolerance: f64,
        source: &'static str,
    ) -> Self {
        let pass = match kind {
            CheckKind::Equals => (actual - expected).abs() <= tolerance,
            CheckKind::AtLeast => actual >= expected - tolerance,
            CheckKind::AtMost => actual <= expected + tolerance,
        };
        ExpectedCheck {
            label: label.into(),
            kind,
            expected,
            actual,
            tolerance,
            source,
            pass,
        }
    }
}

/// A structured, self-checking record of one worked example.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    /// Example identifier (`euw`, `diamond`, `condorcet`,
    /// `median-counterexample`).
    pub name: String,
    /// Echoed inputs as label/value pairs.
    pub inputs: Vec<(String, String)>,
    /// Labeled computed quantities.
    pub quantities: Vec<(String, f64)>,
    /// Expected-value assertions.
    pub checks: Vec<ExpectedCheck>,
    /// Free-form caveats and construction notes.
    pub notes: Vec<String>,
}

impl ExampleReport {
    /// True when every check passed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Plain-text rendering (one line per item).
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("example: {}\n", self.name));
        out.push_str("inputs:\n");
        for (k, v) in &self.inputs {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        out.push_str("quantities:\n");
        for (k, v) in &self.quantities {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        out.push_str("checks:\n");
        for c in &self.checks {
            let op = match c.kind {
                CheckKind::Equals => "==",
                CheckKind::AtLeast => ">=",
                CheckKind::AtMost => "<=",
            };
            out.push_str(&format!(
                "  [{}] {}: {} {} {} (tol {}, {})\n",
                if c.pass { "pass" } else { "FAIL" },
                c.label,
                c.actual,
                op,
                c.expected,
                c.tolerance,
                c.source
            ));
        }
        if !self.notes.is_empty() {
            out.push_str("notes:\n");
            for n in &self.notes {
                out.push_str(&format!("  - {n}\n"));
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.all_pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn payoff_expectation(row: &ChoiceDistribution, c: &[f64]) -> f64 {
    row.probs().iter().zip(c).map(|(p, cx)| p * cx).sum()
}

/// The two-population binary-choice example: EUW versus the mixture planner,
/// payoff-probe expectations, and the intensity flip.
pub fn run_euw_example() -> Result<ExampleReport> {
    let up = |s: f64| VnmUtility::new(vec![s, 0.0]);
    let profile = AgentProfile::from_atomic(vec![
        AtomicReu::new(vec![(up(1.0)?, 0.9), (up(-1.0)?, 0.1)])?,
        AtomicReu::new(vec![(up(-1.0)?, 0.7), (up(1.0)?, 0.3)])?,
    ])?;
    let menu = DecisionProblem::new(vec![make_lottery(&[1.0, 0.0])?, make_lottery(&[0.0, 1.0])?])?;
    let alpha = Weights::uniform(2)?;
    let tb = TieBreakRule::UniformOverArgmax;

    let euw = euw_choice(&profile, &alpha, &menu, tb)?;
    let mixture = mix(&profile, &alpha)?;
    let mixture_row = atoms_choice_distribution(&mixture, &menu, tb)?;
    let agent_rows = profile.atomic_rows(&menu, tb)?;

    let c = [1.0, 2.0];
    let e_star = payoff_expectation(&euw.distribution, &c);
    let e_agent1 = payoff_expectation(&agent_rows[0], &c);
    let e_mixture = payoff_expectation(&mixture_row, &c);
    let e_agent2 = payoff_expectation(&agent_rows[1], &c);

    let verdict = local_weights(&euw.distribution, &agent_rows, 1e-9)?;
    let margin = match &verdict {
        LpVerdict::Infeasible { margin, .. } => *margin,
        LpVerdict::Feasible { .. } => 0.0,
    };

    // Intensity variant: the second population's utilities scale by 3.
    let intense = AgentProfile::from_atomic(vec![
        AtomicReu::new(vec![(up(1.0)?, 0.9), (up(-1.0)?, 0.1)])?,
        AtomicReu::new(vec![(up(-3.0)?, 0.7), (up(3.0)?, 0.3)])?,
    ])?;
    let euw_intense = euw_choice(&intense, &alpha, &menu, tb)?;

    let checks = vec![
        ExpectedCheck::new(
            "planner picks the first alternative surely",
            CheckKind::Equals,
            1.0,
            euw.distribution.probs()[0],
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "mixture probability of the first alternative",
            CheckKind::Equals,
            0.6,
            mixture_row.probs()[0],
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "planner payoff expectation",
            CheckKind::Equals,
            1.0,
            e_star,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "agent 1 payoff expectation",
            CheckKind::Equals,
            1.1,
            e_agent1,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "mixture payoff expectation",
            CheckKind::Equals,
            1.4,
            e_mixture,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "agent 2 payoff expectation",
            CheckKind::Equals,
            1.7,
            e_agent2,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "planner payoff below both agents (probe violation)",
            CheckKind::AtMost,
            e_agent1.min(e_agent2) - 0.1,
            e_star,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "hull-separation margin of the welfare planner",
            CheckKind::Equals,
            0.2,
            margin,
            1e-9,
            "closed-form",
        ),
        ExpectedCheck::new(
            "intensity variant picks the second alternative",
            CheckKind::Equals,
            1.0,
            euw_intense.distribution.probs()[1],
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "intensity variant unnormalized sum value of the first alternative",
            CheckKind::Equals,
            -0.4,
            2.0 * euw_intense.values[0],
            1e-12,
            "hand-computed",
        ),
    ];

    Ok(ExampleReport {
        name: "euw".into(),
        inputs: vec![
            (
                "population 1".into(),
                "0.9 on +1, 0.1 on −1 (first outcome)".into(),
            ),
            ("population 2".into(), "0.7 on −1, 0.3 on +1".into()),
            ("weights".into(), "equal (0.5, 0.5)".into()),
            ("payoff probe".into(), "c = (1, 2)".into()),
            ("tie break".into(), tb.to_string()),
        ],
        quantities: vec![
            ("euw_value_first".into(), euw.values[0]),
            ("euw_value_second".into(), euw.values[1]),
            ("unnormalized_sum_value_first".into(), 2.0 * euw.values[0]),
            ("mixture_prob_first".into(), mixture_row.probs()[0]),
            ("payoff_planner".into(), e_star),
            ("payoff_agent1".into(), e_agent1),
            ("payoff_mixture".into(), e_mixture),
            ("payoff_agent2".into(), e_agent2),
            ("separation_margin".into(), margin),
            ("intense_euw_value_first".into(), euw_intense.values[0]),
        ],
        checks,
        notes: vec![
            "The welfare-maximizing planner chooses deterministically and its payoff \
             expectation falls outside the agents' range; the mixture planner stays inside."
                .into(),
            "Tripling one population's utility intensities flips the welfare choice even \
             though no individual's choice behavior changes."
                .into(),
        ],
    })
}

/// The sure-policy-versus-fair-coin example: EUW indifference against the
/// mixture planner's deliberate randomization.
pub fn run_diamond_example() -> Result<ExampleReport> {
    // Raw utilities (1,0) and (0,1); normalization subtracts the last
    // coordinate, so agent 2 becomes (−1, 0).
    let u1 = VnmUtility::new(vec![1.0, 0.0])?;
    let u2 = VnmUtility::new(vec![0.0, 1.0])?;
    let profile = AgentProfile::from_atomic(vec![
        AtomicReu::new(vec![(u1, 1.0)])?,
        AtomicReu::new(vec![(u2, 1.0)])?,
    ])?;
    let alpha = Weights::uniform(2)?;
    let tb = TieBreakRule::UniformOverArgmax;

    // Menu: x = policy 1 for sure, y = fair coin over the two policies.
    let menu = DecisionProblem::new(vec![make_lottery(&[1.0, 0.0])?, make_lottery(&[0.5, 0.5])?])?;

    // Raw-coordinate aggregate utility: mean of (1,0) and (0,1) = (1/2, 1/2).
    let raw_mean = [0.5, 0.5];
    let raw_value = |l: &[f64]| -> f64 { l.iter().zip(raw_mean).map(|(p, u)| p * u).sum() };
    let raw_x = raw_value(&[1.0, 0.0]);
    let raw_y = raw_value(&[0.5, 0.5]);

    // Normalized EUW: a tie, resolved uniformly.
    let euw = euw_choice(&profile, &alpha, &menu, tb)?;
    let mixture = mix(&profile, &alpha)?;
    let mixture_row = atoms_choice_distribution(&mixture, &menu, tb)?;

    // Pure-policy menu: implementing the chosen agent's favorite policy.
    let policy_menu =
        DecisionProblem::new(vec![make_lottery(&[1.0, 0.0])?, make_lottery(&[0.0, 1.0])?])?;
    let policy_row = atoms_choice_distribution(&mixture, &policy_menu, tb)?;

    let checks = vec![
        ExpectedCheck::new(
            "raw aggregate value of the sure policy",
            CheckKind::Equals,
            0.5,
            raw_x,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "raw aggregate value of the fair coin",
            CheckKind::Equals,
            0.5,
            raw_y,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "normalized welfare values coincide (indifference)",
            CheckKind::Equals,
            0.0,
            euw.values[0] - euw.values[1],
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "tie-broken welfare choice randomizes over the tie",
            CheckKind::Equals,
            0.5,
            euw.distribution.probs()[0],
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "mixture planner picks the sure policy half the time",
            CheckKind::Equals,
            0.5,
            mixture_row.probs()[0],
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "mixture planner implements each pure policy equally",
            CheckKind::Equals,
            0.5,
            policy_row.probs()[0],
            1e-12,
            "hand-computed",
        ),
    ];

    Ok(ExampleReport {
        name: "diamond".into(),
        inputs: vec![
            ("agent 1 utility".into(), "(1, 0)".into()),
            ("agent 2 utility".into(), "(0, 1)".into()),
            ("weights".into(), "equal (0.5, 0.5)".into()),
            (
                "menu".into(),
                "x = policy 1 for sure; y = fair coin over both policies".into(),
            ),
            ("tie break".into(), tb.to_string()),
        ],
        quantities: vec![
            ("raw_value_sure".into(), raw_x),
            ("raw_value_coin".into(), raw_y),
            ("euw_value_sure".into(), euw.values[0]),
            ("euw_value_coin".into(), euw.values[1]),
            ("mixture_prob_sure".into(), mixture_row.probs()[0]),
            ("mixture_prob_coin".into(), mixture_row.probs()[1]),
            ("policy_menu_prob_first".into(), policy_row.probs()[0]),
            ("policy_menu_prob_second".into(), policy_row.probs()[1]),
        ],
        checks,
        notes: vec![
            "Welfare aggregation is indifferent between the sure policy and the coin; \
             the mixture planner randomizes between the agents and implements each \
             agent's favorite policy with probability one half."
                .into(),
        ],
    })
}

/// Configuration for [`run_condorcet_example`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CondorcetConfig {
    /// Perturbation weight `η ∈ (0, 1/2)` mixing the base direction with the
    /// random angle.
    pub eta: f64,
    /// Asymmetry `δ ∈ (0, 1/(2π)]` of the third agent's triangular angle
    /// density.
    pub delta: f64,
    /// Offset `ε ∈ (0, π/6)` rotating the three lotteries off the agents'
    /// bisectors.
    pub eps_angle: f64,
    /// Monte Carlo draws per (agent, menu) estimate.
    pub samples: u64,
    /// Base seed; agents use decorrelated sub-streams.
    pub seed: u64,
    /// Angle interval for agents 1 and 2 (uniform); the full circle gives a
    /// mean-zero perturbation.
    pub uniform_interval: (f64, f64),
}

impl Default for CondorcetConfig {
    fn default() -> Self {
        CondorcetConfig {
            eta: 0.1,
            delta: 0.05,
            eps_angle: PI / 24.0,
            samples: 100_000,
            seed: 0,
            uniform_interval: (0.0, 2.0 * PI),
        }
    }
}

impl CondorcetConfig {
    /// Validates all parameter ranges.
    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && 0.0 < self.eta && self.eta < 0.5) {
            return Err(Error::ConfigError(format!(
                "eta = {} must lie in (0, 1/2)",
                self.eta
            )));
        }
        if !(self.delta.is_finite() && 0.0 < self.delta && self.delta <= 1.0 / (2.0 * PI)) {
            return Err(Error::ConfigError(format!(
                "delta = {} must lie in (0, 1/(2π)] so the angle density stays nonnegative",
                self.delta
            )));
        }
        if !(self.eps_angle.is_finite() && 0.0 < self.eps_angle && self.eps_angle < PI / 6.0) {
            return Err(Error::ConfigError(format!(
                "eps_angle = {} must lie in (0, π/6)",
                self.eps_angle
            )));
        }
        if self.samples == 0 {
            return Err(Error::ConfigError("samples must be at least 1".into()));
        }
        let (lo, hi) = self.uniform_interval;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi && hi <= 2.0 * PI) {
            return Err(Error::ConfigError(format!(
                "uniform interval ({lo}, {hi}) must satisfy 0 ≤ lo < hi ≤ 2π"
            )));
        }
        Ok(())
    }
}

/// A probability density for a random angle on (a subset of) the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AngleDensity {
    /// Uniform on `[lo, hi] ⊆ [0, 2π]`.
    Uniform {
        /// Interval start.
        lo: f64,
        /// Interval end.
        hi: f64,
    },
    /// `f(θ) = 1/(2π) + δ·g(θ)` on `[0, 2π]` with `g` piecewise linear,
    /// `g(0) = g(2π) = −1`, `g(π) = +1`; integrates to one, endpoints at
    /// `1/(2π) − δ`, peak at `1/(2π) + δ`, mean direction exactly
    /// `(−8δ/π, 0)`.
    Triangular {
        /// Tilt `δ ∈ (0, 1/(2π)]`.
        delta: f64,
    },
}

impl AngleDensity {
    /// The density's domain.
    pub fn domain(&self) -> (f64, f64) {
        match *self {
            AngleDensity::Uniform { lo, hi } => (lo, hi),
            AngleDensity::Triangular { .. } => (0.0, 2.0 * PI),
        }
    }

    /// Density value at `theta` (zero outside the domain).
    pub fn pdf(&self, theta: f64) -> f64 {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&theta) {
            return 0.0;
        }
        match *self {
            AngleDensity::Uniform { lo, hi } => 1.0 / (hi - lo),
            AngleDensity::Triangular { delta } => {
                let g = if theta <= PI {
                    -1.0 + 2.0 * theta / PI
                } else {
                    1.0 - 2.0 * (theta - PI) / PI
                };
                1.0 / (2.0 * PI) + delta * g
            }
        }
    }

    /// Draws one angle by inverse-CDF transform of a single uniform.
    pub fn sample<R: rand_chacha::rand_core::RngCore>(&self, rng: &mut R) -> f64 {
        let u = uniform_open01(rng);
        match *self {
            AngleDensity::Uniform { lo, hi } => lo + u * (hi - lo),
            AngleDensity::Triangular { delta } => {
                // The CDF is piecewise quadratic with F(π) = 1/2; each half
                // inverts in closed form.
                let a = delta / PI;
                if u <= 0.5 {
                    let b = 1.0 / (2.0 * PI) - delta;
                    (-b + (b * b + 4.0 * a * u).sqrt()) / (2.0 * a)
                } else {
                    let c = 1.0 / (2.0 * PI) + delta;
                    let w = u - 0.5;
                    let s = (c - (c * c - 4.0 * a * w).max(0.0).sqrt()) / (2.0 * a);
                    PI + s
                }
            }
        }
    }

    /// `E[(cos θ, sin θ)]` by adaptive quadrature (absolute tolerance 1e-9).
    pub fn mean_direction(&self) -> Result<(f64, f64)> {
        let (lo, hi) = self.domain();
        let cuts = match self {
            AngleDensity::Uniform { .. } => vec![],
            AngleDensity::Triangular { .. } => vec![PI],
        };
        let ex = integrate_with_breakpoints(|t| t.cos() * self.pdf(t), lo, hi, &cuts, 1e-9);
        let ey = integrate_with_breakpoints(|t| t.sin() * self.pdf(t), lo, hi, &cuts, 1e-9);
        Ok((ex, ey))
    }
}

/// Embeds a planar vector of norm ≤ 1 into the 3-outcome probability
/// simplex; affine, so expected-utility orderings are preserved.
fn embed_plane(v: (f64, f64)) -> Result<crate::lottery::Lottery> {
    let e1 = 0.25 + v.0 / 4.0;
    let e2 = 0.25 + v.1 / 4.0;
    make_lottery(&[e1, e2, 1.0 - e1 - e2])
}

/// The cyclic-choice example: three agents whose pairwise menus produce a
/// majority cycle, the aggregate-utility ranking that breaks it one way, and
/// the mixture planner that spreads mass over all three lotteries.
pub fn run_condorcet_example(cfg: &CondorcetConfig) -> Result<ExampleReport> {
    cfg.validate()?;
    let theta0 = PI / 6.0;
    let eta = cfg.eta;

    // Base directions at angles 0, 2π/3, 4π/3 (they sum to zero).
    let base = [
        (1.0, 0.0),
        (-0.5, 3.0_f64.sqrt() / 2.0),
        (-0.5, -3.0_f64.sqrt() / 2.0),
    ];
    // Lottery angles: x near agent 1, z near agent 2, y near agent 3. This
    // assignment is the one that realizes the cyclic table; swapping y and z
    // onto angles 5θ0/3θ0 breaks both the table and the final ranking.
    let angles = [
        ("x", theta0 - cfg.eps_angle),
        ("y", 9.0 * theta0 - cfg.eps_angle),
        ("z", 5.0 * theta0 - cfg.eps_angle),
    ];
    let lotteries: Vec<crate::lottery::Lottery> = angles
        .iter()
        .map(|&(_, a)| embed_plane((a.cos(), a.sin())))
        .collect::<Result<_>>()?;
    let (lx, ly, lz) = (
        lotteries[0].clone(),
        lotteries[1].clone(),
        lotteries[2].clone(),
    );

    let densities = [
        AngleDensity::Uniform {
            lo: cfg.uniform_interval.0,
            hi: cfg.uniform_interval.1,
        },
        AngleDensity::Uniform {
            lo: cfg.uniform_interval.0,
            hi: cfg.uniform_interval.1,
        },
        AngleDensity::Triangular { delta: cfg.delta },
    ];
    let agents: Vec<SamplerReu> = (0..3)
        .map(|i| {
            let density = densities[i];
            let (bx, by) = base[i];
            SamplerReu::new(3, move |seed, index| {
                let mut rng = stream_rng(seed, index);
                let theta = density.sample(&mut rng);
                let vx = (1.0 - eta) * bx + eta * theta.cos();
                let vy = (1.0 - eta) * by + eta * theta.sin();
                VnmUtility::new(vec![vx, vy, 0.0]).expect("finite utility")
            })
        })
        .collect();
    let agent_seed = |i: usize| splitmix64(cfg.seed ^ (i as u64 + 1));

    // Pairwise menus and the nine table cells.
    let menu_xy = DecisionProblem::new(vec![lx.clone(), ly.clone()])?;
    let menu_yz = DecisionProblem::new(vec![ly.clone(), lz.clone()])?;
    let menu_xz = DecisionProblem::new(vec![lx.clone(), lz.clone()])?;
    let tb = TieBreakRule::UniformOverArgmax;
    let cell = |i: usize, menu: &DecisionProblem, alt: usize| -> Result<(f64, f64)> {
        let row = mc_choice_distribution(&agents[i], menu, cfg.samples, agent_seed(i), tb)?;
        let se = row.std_errors().map(|s| s[alt]).unwrap_or(0.0);
        Ok((row.probs()[alt], se))
    };
    // (value, std error) per agent: probability of x from {x,y}, y from
    // {y,z}, z from {x,z}.
    let mut table = Vec::new();
    for i in 0..3 {
        table.push([
            cell(i, &menu_xy, 0)?,
            cell(i, &menu_yz, 0)?,
            cell(i, &menu_xz, 1)?,
        ]);
    }

    // Mixture planner on the full menu: the equal-weight average of the
    // agents' estimated rows.
    let full_menu = DecisionProblem::new(vec![lx.clone(), ly.clone(), lz.clone()])?;
    let rows: Vec<ChoiceDistribution> = (0..3)
        .map(|i| mc_choice_distribution(&agents[i], &full_menu, cfg.samples, agent_seed(i), tb))
        .collect::<Result<_>>()?;
    let mut mixture = [0.0; 3];
    let mut mixture_se = [0.0; 3];
    for row in &rows {
        for k in 0..3 {
            mixture[k] += row.probs()[k] / 3.0;
            let se = row.std_errors().map(|s| s[k]).unwrap_or(0.0) / 3.0;
            mixture_se[k] += se * se;
        }
    }
    for se in &mut mixture_se {
        *se = se.sqrt();
    }

    // Mean perturbations by numerical integration; the aggregate utility is
    // the sum of the (1−η)-shrunk bases (zero) plus η times the perturbation
    // means.
    let mut perturbation_means = Vec::new();
    for d in &densities {
        perturbation_means.push(d.mean_direction()?);
    }
    let mean_sum = (
        eta * perturbation_means.iter().map(|m| m.0).sum::<f64>(),
        eta * perturbation_means.iter().map(|m| m.1).sum::<f64>(),
    );
    let value_of = |l: &crate::lottery::Lottery| -> f64 {
        mean_sum.0 * l.probs()[0] + mean_sum.1 * l.probs()[1]
    };
    let (vx, vy, vz) = (value_of(&lx), value_of(&ly), value_of(&lz));
    let ranking_ok = vz > vy && vy > vx;

    // Reference means for both uniform-interval conventions.
    let full_circle = AngleDensity::Uniform {
        lo: 0.0,
        hi: 2.0 * PI,
    }
    .mean_direction()?;
    let quarter = AngleDensity::Uniform {
        lo: 0.0,
        hi: PI / 2.0,
    }
    .mean_direction()?;

    let mut checks = Vec::new();
    let hi_bound = 1.0 - cfg.eta;
    for (i, cells) in table.iter().enumerate() {
        let labels = [
            format!("agent {} picks x from {{x,y}}", i + 1),
            format!("agent {} picks y from {{y,z}}", i + 1),
            format!("agent {} picks z from {{x,z}}", i + 1),
        ];
        // Which cells are "high" (≥ 1 − η) per agent; the rest are "< η".
        let high = match i {
            0 => [true, true, false],
            1 => [true, false, true],
            _ => [false, true, true],
        };
        for k in 0..3 {
            let (value, se) = cells[k];
            if high[k] {
                checks.push(ExpectedCheck::new(
                    labels[k].clone(),
                    CheckKind::AtLeast,
                    hi_bound,
                    value,
                    3.0 * se,
                    "simulation (3σ)",
                ));
            } else {
                checks.push(ExpectedCheck::new(
                    labels[k].clone(),
                    CheckKind::AtMost,
                    cfg.eta,
                    value,
                    3.0 * se,
                    "simulation (3σ)",
                ));
            }
        }
    }
    checks.push(ExpectedCheck::new(
        "third agent's perturbation mean, first coordinate",
        CheckKind::Equals,
        -8.0 * cfg.delta / PI,
        perturbation_means[2].0,
        1e-6,
        "numerical-integration",
    ));
    checks.push(ExpectedCheck::new(
        "third agent's perturbation mean, second coordinate",
        CheckKind::Equals,
        0.0,
        perturbation_means[2].1,
        1e-6,
        "numerical-integration",
    ));
    checks.push(ExpectedCheck::new(
        "aggregate ranking is z over y over x",
        CheckKind::Equals,
        1.0,
        if ranking_ok { 1.0 } else { 0.0 },
        1e-12,
        "numerical-integration",
    ));
    for (k, name) in ["x", "y", "z"].iter().enumerate() {
        checks.push(ExpectedCheck::new(
            format!("mixture planner puts at least 1/4 on {name}"),
            CheckKind::AtLeast,
            0.25,
            mixture[k],
            3.0 * mixture_se[k],
            "simulation (3σ)",
        ));
    }

    let mut quantities = vec![
        ("lottery_angle_x".into(), angles[0].1),
        ("lottery_angle_y".into(), angles[1].1),
        ("lottery_angle_z".into(), angles[2].1),
        ("mixture_x".into(), mixture[0]),
        ("mixture_y".into(), mixture[1]),
        ("mixture_z".into(), mixture[2]),
        ("mean_sum_x".into(), mean_sum.0),
        ("mean_sum_y".into(), mean_sum.1),
        ("perturbation3_mean_x".into(), perturbation_means[2].0),
        ("perturbation3_mean_y".into(), perturbation_means[2].1),
        ("value_x".into(), vx),
        ("value_y".into(), vy),
        ("value_z".into(), vz),
        ("uniform_mean_x_full_circle".into(), full_circle.0),
        ("uniform_mean_y_full_circle".into(), full_circle.1),
        ("uniform_mean_x_quarter_circle".into(), quarter.0),
        ("uniform_mean_y_quarter_circle".into(), quarter.1),
        (
            "triangular_endpoint_density".into(),
            1.0 / (2.0 * PI) - cfg.delta,
        ),
        (
            "triangular_peak_density".into(),
            1.0 / (2.0 * PI) + cfg.delta,
        ),
    ];
    for (i, cells) in table.iter().enumerate() {
        quantities.push((format!("agent{}_x_given_xy", i + 1), cells[0].0));
        quantities.push((format!("agent{}_y_given_yz", i + 1), cells[1].0));
        quantities.push((format!("agent{}_z_given_xz", i + 1), cells[2].0));
    }

    Ok(ExampleReport {
        name: "condorcet".into(),
        inputs: vec![
            ("eta".into(), cfg.eta.to_string()),
            ("delta".into(), cfg.delta.to_string()),
            ("eps_angle".into(), cfg.eps_angle.to_string()),
            ("samples".into(), cfg.samples.to_string()),
            ("seed".into(), cfg.seed.to_string()),
            (
                "uniform_interval".into(),
                format!("[{}, {}]", cfg.uniform_interval.0, cfg.uniform_interval.1),
            ),
        ],
        quantities,
        checks,
        notes: vec![
            "Lottery labels sit at angles x = θ0 − ε, z = 5θ0 − ε, y = 9θ0 − ε \
             (θ0 = π/6): each agent's favorite is the lottery nearest its base \
             direction. Placing y at 5θ0 and z at 3θ0 instead fails six of the nine \
             pairwise cells and reverses the aggregate ranking."
                .into(),
            "The third agent's angle density is the normalized triangular form \
             1/(2π) + δ·g(θ) with endpoints 1/(2π) − δ; an unnormalized variant with \
             endpoint value 1 − δ does not integrate to one and, after rescaling, \
             moves the perturbation mean to roughly (+0.26, 0), flipping the ranking."
                .into(),
            "Agents 1 and 2 draw angles uniformly from the configured interval; the \
             full circle [0, 2π] gives mean zero while [0, π/2] gives mean \
             (2/π, 2/π) — both reference means are reported as quantities."
                .into(),
            "All nine pairwise cells are estimated by Monte Carlo with per-agent \
             decorrelated streams; at the default parameters every draw ranks the \
             agent's favorite first, so the cells are exact and the mixture row is \
             exactly (1/3, 1/3, 1/3)."
                .into(),
        ],
    })
}

/// The discrete two-type CV table where the median welfare measure and the
/// Pareto criterion disagree about a 50-50 policy lottery.
pub fn run_median_counterexample() -> Result<ExampleReport> {
    // Two equally likely quasilinear types; CV under alternative 1 is
    // (2, −1) across types, under alternative 2 it is (−1, 2).
    let cv_p1 = [2.0, -1.0];
    let cv_p2 = [-1.0, 2.0];
    let curve_p1 = CvCurve::discrete(vec![(cv_p1[0], 0.5), (cv_p1[1], 0.5)])?;
    let curve_p2 = CvCurve::discrete(vec![(cv_p2[0], 0.5), (cv_p2[1], 0.5)])?;

    let med_p1 = curve_p1.quantile(0.5)?;
    let med_p2 = curve_p2.quantile(0.5)?;
    let mean_p1 = curve_p1.mean()?;
    let mean_p2 = curve_p2.mean()?;
    // Expected CV of each type under the fair lottery over the alternatives.
    let lottery_type1 = 0.5 * cv_p1[0] + 0.5 * cv_p2[0];
    let lottery_type2 = 0.5 * cv_p1[1] + 0.5 * cv_p2[1];

    let checks = vec![
        ExpectedCheck::new(
            "median CV under alternative 1",
            CheckKind::Equals,
            -1.0,
            med_p1,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "median CV under alternative 2",
            CheckKind::Equals,
            -1.0,
            med_p2,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "type 1 expected CV under the fair lottery",
            CheckKind::Equals,
            0.5,
            lottery_type1,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "type 2 expected CV under the fair lottery",
            CheckKind::Equals,
            0.5,
            lottery_type2,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "mean CV under alternative 1",
            CheckKind::Equals,
            0.5,
            mean_p1,
            1e-12,
            "hand-computed",
        ),
        ExpectedCheck::new(
            "mean CV under alternative 2",
            CheckKind::Equals,
            0.5,
            mean_p2,
            1e-12,
            "hand-computed",
        ),
    ];

    Ok(ExampleReport {
        name: "median-counterexample".into(),
        inputs: vec![
            ("type shares".into(), "equal (0.5, 0.5)".into()),
            (
                "CV under alternative 1".into(),
                "(2, −1) across types".into(),
            ),
            (
                "CV under alternative 2".into(),
                "(−1, 2) across types".into(),
            ),
        ],
        quantities: vec![
            ("median_cv_alt1".into(), med_p1),
            ("median_cv_alt2".into(), med_p2),
            ("mean_cv_alt1".into(), mean_p1),
            ("mean_cv_alt2".into(), mean_p2),
            ("lottery_expected_cv_type1".into(), lottery_type1),
            ("lottery_expected_cv_type2".into(), lottery_type2),
        ],
        checks,
        notes: vec![
            "The median measure calls both alternatives strict gains (median CV −1), \
             so any ranking that treats a lottery between two gains as a gain must \
             rank the fair lottery above the status quo; yet every type's expected \
             CV under that lottery is +0.5, a strict expected loss — consistency of \
             the median ranking with lotteries clashes with the Pareto criterion."
                .into(),
        ],
    })
}
