//! Scenario-file ingestion: a human-editable TOML document describing agent
//! profiles, menus, welfare economies, price changes, and planner
//! specifications.
//!
//! The schema is strict: unknown keys anywhere in the document are rejected
//! with a path-qualified error (`welfare.types[1].qualitty: unknown field`),
//! so typos fail loudly before any computation runs. One file may carry both
//! a social-choice section and a welfare section; each subcommand picks the
//! parts it needs.
//!
//! ```toml
//! [profile]
//! [[profile.agents]]
//! label = "optimists"
//! atoms = [{ utility = [1.0, 0.0], weight = 0.9 },
//!          { utility = [-1.0, 0.0], weight = 0.1 }]
//!
//! [[menus]]
//! id = "ab"
//! alternatives = [[1.0, 0.0], [0.0, 1.0]]
//!
//! [planner]
//! weights = [0.5, 0.5]
//!
//! [welfare]
//! goods = ["bus", "train"]
//! income = 10.0
//! family = "cobb_douglas"
//! a = 1.0
//! types = [{ label = "commuter", quality = [0.0, 0.0], share = 1.0 }]
//!
//! [[changes]]
//! id = "fare-hike"
//! p0 = [1.0, 1.0]
//! p1 = [1.5, 1.0]
//! ```

use serde::Deserialize;

use welfarelab::aggregation::{AgentProfile, Weights};
use welfarelab::choice::{AtomicReu, ChoiceDistribution};
use welfarelab::lottery::{make_lottery, DecisionProblem, VnmUtility};
use welfarelab::welfare::{ConsumerType, PriceChange, UtilitySpec, WelfareScenario};

use crate::CliError;

/// Top-level scenario document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Social-choice profile (atomic agents).
    pub profile: Option<ProfileSection>,
    /// Named menus of lotteries.
    #[serde(default)]
    pub menus: Vec<MenuSection>,
    /// Planner specification for utilitarian checks.
    pub planner: Option<PlannerSection>,
    /// Logit welfare economy.
    pub welfare: Option<WelfareSection>,
    /// Named price changes.
    #[serde(default)]
    pub changes: Vec<ChangeSection>,
}

/// A population of atomic REU agents.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    /// The agents, in order.
    pub agents: Vec<AgentSection>,
}

/// One atomic agent.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSection {
    /// Optional display label.
    #[serde(default)]
    pub label: Option<String>,
    /// Utility atoms with weights summing to one.
    pub atoms: Vec<AtomSection>,
}

/// One utility atom.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    /// vNM utility vector over outcomes.
    pub utility: Vec<f64>,
    /// Probability mass on this utility.
    pub weight: f64,
}

/// A named menu.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MenuSection {
    /// Identifier referenced by `--menu`.
    pub id: String,
    /// Lotteries over outcomes.
    pub alternatives: Vec<Vec<f64>>,
}

/// Planner specification: exactly one of `weights` (a mixture of the profile
/// agents) or `rows` (explicit per-menu choice distributions).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerSection {
    /// Mixture weights over the profile's agents.
    pub weights: Option<Vec<f64>>,
    /// Explicit choice rows keyed by menu id.
    #[serde(default)]
    pub rows: Vec<PlannerRowSection>,
}

/// One explicit planner row.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerRowSection {
    /// Menu id the row applies to.
    pub menu: String,
    /// Choice probabilities over that menu's alternatives.
    pub probs: Vec<f64>,
}

/// A logit welfare economy.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WelfareSection {
    /// Good names, in price order.
    pub goods: Vec<String>,
    /// Base income, strictly above every price.
    pub income: f64,
    /// Utility family: `cobb_douglas` (with `a`) or `linear` (with `b`).
    pub family: String,
    /// Curvature parameter for `cobb_douglas`.
    pub a: Option<f64>,
    /// Slope parameter for `linear`.
    pub b: Option<f64>,
    /// Consumer types with population shares.
    pub types: Vec<TypeSection>,
}

/// One consumer type.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeSection {
    /// Display label.
    pub label: String,
    /// Quality constant per good.
    pub quality: Vec<f64>,
    /// Population share.
    pub share: f64,
}

/// A named price change.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeSection {
    /// Identifier referenced by `--change`.
    pub id: String,
    /// Original prices.
    pub p0: Vec<f64>,
    /// New prices.
    pub p1: Vec<f64>,
}

impl ScenarioFile {
    /// Parses a TOML document, rejecting unknown keys with the offending
    /// path.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = toml::de::Deserializer::parse(text)
            .map_err(|e| CliError::input(format!("scenario parse error: {e}")))?;
        serde_path_to_error::deserialize(de).map_err(|e| {
            CliError::input(format!("scenario error at `{}`: {}", e.path(), e.inner()))
        })
    }

    /// Loads and parses a scenario file from disk.
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Builds the agent profile, or errors when the section is missing.
    pub fn build_profile(&self) -> Result<AgentProfile, CliError> {
        let section = self
            .profile
            .as_ref()
            .ok_or_else(|| CliError::input("scenario has no [profile] section".into()))?;
        if section.agents.is_empty() {
            return Err(CliError::input("profile has no agents".into()));
        }
        let mut agents = Vec::new();
        for (i, agent) in section.agents.iter().enumerate() {
            let atoms = agent
                .atoms
                .iter()
                .map(|atom| Ok((VnmUtility::new(atom.utility.clone())?, atom.weight)))
                .collect::<Result<Vec<_>, welfarelab::Error>>()
                .map_err(|e| CliError::core(format!("profile.agents[{i}]"), e))?;
            agents.push(
                AtomicReu::new(atoms)
                    .map_err(|e| CliError::core(format!("profile.agents[{i}]"), e))?,
            );
        }
        AgentProfile::from_atomic(agents).map_err(|e| CliError::core("profile", e))
    }

    /// Agent labels, synthesized where missing.
    pub fn agent_labels(&self) -> Vec<String> {
        match &self.profile {
            None => Vec::new(),
            Some(p) => p
                .agents
                .iter()
                .enumerate()
                .map(|(i, a)| a.label.clone().unwrap_or_else(|| format!("agent{}", i + 1)))
                .collect(),
        }
    }

    /// Resolves a named menu.
    pub fn build_menu(&self, id: &str) -> Result<DecisionProblem, CliError> {
        let section = self
            .menus
            .iter()
            .find(|m| m.id == id)
            .ok_or_else(|| CliError::input(format!("no menu named `{id}`")))?;
        let lotteries = section
            .alternatives
            .iter()
            .map(|p| make_lottery(p))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::core(format!("menus.{id}"), e))?;
        DecisionProblem::new(lotteries).map_err(|e| CliError::core(format!("menus.{id}"), e))
    }

    /// All menus in file order as `(id, menu)` pairs.
    pub fn build_all_menus(&self) -> Result<Vec<(String, DecisionProblem)>, CliError> {
        self.menus
            .iter()
            .map(|m| Ok((m.id.clone(), self.build_menu(&m.id)?)))
            .collect()
    }

    /// The planner's choice row on one menu: a computed mixture row when the
    /// planner is given by weights, or the explicit row otherwise.
    pub fn planner_row(
        &self,
        menu_id: &str,
        menu: &DecisionProblem,
    ) -> Result<ChoiceDistribution, CliError> {
        let planner = self
            .planner
            .as_ref()
            .ok_or_else(|| CliError::input("scenario has no [planner] section".into()))?;
        match (&planner.weights, planner.rows.is_empty()) {
            (Some(w), true) => {
                let profile = self.build_profile()?;
                let alpha =
                    Weights::new(w.clone()).map_err(|e| CliError::core("planner.weights", e))?;
                let mixed = welfarelab::aggregation::mix(&profile, &alpha)?;
                Ok(welfarelab::choice::atoms_choice_distribution(
                    &mixed,
                    menu,
                    welfarelab::choice::TieBreakRule::UniformOverArgmax,
                )?)
            }
            (None, false) => {
                let row = planner
                    .rows
                    .iter()
                    .find(|r| r.menu == menu_id)
                    .ok_or_else(|| {
                        CliError::input(format!("planner has no row for menu `{menu_id}`"))
                    })?;
                Ok(
                    ChoiceDistribution::new(menu.clone(), row.probs.clone(), None)
                        .map_err(|e| CliError::core(format!("planner.rows.{menu_id}"), e))?,
                )
            }
            (Some(_), false) => Err(CliError::input(
                "planner must give either weights or rows, not both".into(),
            )),
            (None, true) => Err(CliError::input(
                "planner must give either weights or rows".into(),
            )),
        }
    }

    /// Builds the welfare economy, or errors when the section is missing.
    pub fn build_welfare(&self) -> Result<WelfareScenario, CliError> {
        let w = self
            .welfare
            .as_ref()
            .ok_or_else(|| CliError::input("scenario has no [welfare] section".into()))?;
        let spec = match (w.family.as_str(), w.a, w.b) {
            ("cobb_douglas", Some(a), None) => UtilitySpec::CobbDouglas { a },
            ("linear", None, Some(b)) => UtilitySpec::Linear { b },
            ("cobb_douglas", _, _) => {
                return Err(CliError::input(
                    "welfare.family `cobb_douglas` needs `a` and no `b`".into(),
                ))
            }
            ("linear", _, _) => {
                return Err(CliError::input(
                    "welfare.family `linear` needs `b` and no `a`".into(),
                ))
            }
            (other, _, _) => {
                return Err(CliError::input(format!(
                    "welfare.family must be `cobb_douglas` or `linear`, got `{other}`"
                )))
            }
        };
        let types: Vec<ConsumerType> = w
            .types
            .iter()
            .map(|t| ConsumerType::new(t.label.clone(), t.quality.clone()))
            .collect();
        let shares = Weights::new(w.types.iter().map(|t| t.share).collect())
            .map_err(|e| CliError::core("welfare.types shares", e))?;
        WelfareScenario::new(w.goods.clone(), w.income, spec, types, shares)
            .map_err(|e| CliError::core("welfare", e))
    }

    /// Resolves a named price change.
    pub fn build_change(&self, id: &str) -> Result<PriceChange, CliError> {
        let c = self
            .changes
            .iter()
            .find(|c| c.id == id)
            .ok_or_else(|| CliError::input(format!("no price change named `{id}`")))?;
        PriceChange::new(c.p0.clone(), c.p1.clone())
            .map_err(|e| CliError::core(format!("changes.{id}"), e))
    }
}
