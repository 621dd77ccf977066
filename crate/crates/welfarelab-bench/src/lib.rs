//! Shared fixtures for the benchmark suite.
//!
//! The sizes sit near the top of the intended use range — a handful of
//! agents with several belief atoms each, menus of half a dozen
//! alternatives, and a three-good economy with several consumer types — so
//! the timings reflect the worst of the interactive workloads rather than
//! toy inputs.

use welfarelab::aggregation::{AgentProfile, Weights};
use welfarelab::choice::AtomicReu;
use welfarelab::lottery::{make_lottery, DecisionProblem, VnmUtility};
use welfarelab::rng::{stream_rng, uniform_open01};
use welfarelab::welfare::{ConsumerType, PriceChange, UtilitySpec, WelfareScenario};

/// A four-agent profile, each agent holding four equally weighted belief
/// atoms over five policy outcomes.
pub fn referendum_profile() -> AgentProfile {
    let mut rng = stream_rng(0xBE7C, 0);
    let agents = (0..4)
        .map(|_| {
            let atoms = (0..4)
                .map(|_| {
                    let u = VnmUtility::new(
                        (0..5)
                            .map(|_| 2.0 * uniform_open01(&mut rng) - 1.0)
                            .collect(),
                    )
                    .expect("finite utility vector");
                    (u, 0.25)
                })
                .collect();
            AtomicReu::new(atoms).expect("valid atom weights")
        })
        .collect();
    AgentProfile::from_atomic(agents).expect("consistent dimensions")
}

/// A six-alternative menu of mixed policies over the five outcomes.
pub fn policy_menu() -> DecisionProblem {
    let mut rng = stream_rng(0xBE7C, 1);
    let lotteries = (0..6)
        .map(|_| {
            let raw: Vec<f64> = (0..5)
                .map(|_| -(1.0 - uniform_open01(&mut rng)).ln())
                .collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            make_lottery(&probs).expect("interior lottery")
        })
        .collect();
    DecisionProblem::new(lotteries).expect("distinct lotteries")
}

/// A three-good, three-type grocery economy together with a price move
/// that raises produce, lowers dairy, and leaves grains alone.
pub fn grocery_economy() -> (WelfareScenario, PriceChange) {
    let types = vec![
        ConsumerType::new("urban", vec![0.3, -0.1, 0.0]),
        ConsumerType::new("suburban", vec![-0.2, 0.4, 0.1]),
        ConsumerType::new("rural", vec![0.0, 0.1, -0.3]),
    ];
    let shares = Weights::normalized(vec![0.5, 0.3, 0.2]).expect("positive shares");
    let scen = WelfareScenario::new(
        vec!["produce".into(), "dairy".into(), "grains".into()],
        9.0,
        UtilitySpec::CobbDouglas { a: 1.2 },
        types,
        shares,
    )
    .expect("valid economy");
    let change =
        PriceChange::new(vec![1.0, 1.2, 0.9], vec![1.3, 1.1, 0.9]).expect("positive prices");
    (scen, change)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_mutually_consistent() {
        let profile = referendum_profile();
        let menu = policy_menu();
        assert_eq!(profile.dimension(), menu.dimension());
        assert_eq!(profile.agents().len(), 4);
        assert_eq!(menu.len(), 6);
    }

    #[test]
    fn economy_change_moves_two_prices() {
        let (scen, change) = grocery_economy();
        assert_eq!(scen.num_goods(), change.len());
        assert_eq!(change.moved(1e-12).len(), 2);
    }
}
