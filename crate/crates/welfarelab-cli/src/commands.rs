//! Subcommand implementations.
//!
//! Each command loads what it needs from the scenario file, computes through
//! the library, assembles a complete [`Emission`] in all three formats, and
//! returns the process exit code: `0` for success / all checks passed, `4`
//! when a violation is certified or an example expectation fails. Input and
//! domain errors propagate as [`CliError`] (exit 2 and 3).

use std::path::Path;

use serde::Serialize;
use serde_json::json;

use welfarelab::aggregation::{
    agreement, local_weights, mix, respects_pareto_at, witness_probe, LpVerdict, Weights,
};
use welfarelab::choice::{
    atoms_choice_distribution, mc_choice_distribution, ChoiceDistribution, TieBreakRule,
};
use welfarelab::lottery::DecisionProblem;
use welfarelab::rng::{splitmix64, stream_rng, RngCore};
use welfarelab::scenarios::{
    run_condorcet_example, run_diamond_example, run_euw_example, run_median_counterexample,
    CondorcetConfig, ExampleReport,
};
use welfarelab::welfare::{
    cv_cdf, distributional_cv, mean_cv, median_mean_diagnosis, MedianMeanReport,
};

use crate::output::{csv_f64, emit, text_f64, CsvRows, Emission};
use crate::{load_scenario, CliError, ExampleName, RunConfig};

/// Renders a unit-variant enum through its serde name (`snake_case`), so
/// text and CSV agree with the JSON field values.
fn enum_str<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "unserializable".to_string(),
    }
}

/// Space-separated shortest-round-trip rendering for a float slice.
fn text_vec(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| text_f64(*x))
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// choice
// ---------------------------------------------------------------------------

/// `welfarelab choice --menu ID [--weights ...] [--sampled]`
pub fn cmd_choice(
    scenario_path: Option<&Path>,
    menu_id: &str,
    weights: Option<&[f64]>,
    sampled: bool,
    run: &RunConfig,
) -> Result<u8, CliError> {
    let file = load_scenario(scenario_path)?;
    let profile = file.build_profile()?;
    let menu = file.build_menu(menu_id)?;

    // Either the single mixture-planner row or one row per agent.
    let mut labeled: Vec<(String, welfarelab::choice::AtomicReu)> = Vec::new();
    match weights {
        Some(w) => {
            let alpha =
                Weights::new(w.to_vec()).map_err(|e| CliError::input(format!("--weights: {e}")))?;
            labeled.push(("planner".to_string(), mix(&profile, &alpha)?));
        }
        None => {
            for (i, label) in file.agent_labels().iter().enumerate() {
                labeled.push((label.clone(), profile.atomic(i)?.clone()));
            }
        }
    }

    let mut rows: Vec<(String, ChoiceDistribution)> = Vec::new();
    for (i, (label, reu)) in labeled.iter().enumerate() {
        let row = if sampled {
            let sampler = reu.to_sampler();
            let seed = splitmix64(run.seed ^ (i as u64 + 1));
            mc_choice_distribution(
                &sampler,
                &menu,
                run.samples,
                seed,
                TieBreakRule::UniformOverArgmax,
            )?
        } else {
            atoms_choice_distribution(reu, &menu, TieBreakRule::UniformOverArgmax)?
        };
        rows.push((label.clone(), row));
    }

    let mode = if sampled { "sampled" } else { "exact" };
    let mut text = format!(
        "choice on menu `{menu_id}` ({} alternatives, mode: {mode})\n",
        menu.len()
    );
    let mut csv = CsvRows::new();
    csv.push("menu", "id", menu_id);
    csv.push("menu", "mode", mode);
    let mut json_rows = Vec::new();
    for (label, row) in &rows {
        match row.std_errors() {
            Some(se) => text.push_str(&format!(
                "  {label}: {}  (se {})\n",
                text_vec(row.probs()),
                text_vec(se)
            )),
            None => text.push_str(&format!("  {label}: {}\n", text_vec(row.probs()))),
        }
        for (j, p) in row.probs().iter().enumerate() {
            csv.push_f64("prob", &format!("{label}/{j}"), *p);
        }
        if let Some(se) = row.std_errors() {
            for (j, s) in se.iter().enumerate() {
                csv.push_f64("std_error", &format!("{label}/{j}"), *s);
            }
        }
        json_rows.push(json!({
            "label": label,
            "probs": row.probs(),
            "std_errors": row.std_errors(),
        }));
    }
    let json = json!({
        "command": "choice",
        "menu": menu_id,
        "mode": mode,
        "samples": if sampled { Some(run.samples) } else { None },
        "rows": json_rows,
    });

    emit(
        &Emission {
            text,
            csv: csv.finish(),
            json,
        },
        run.format,
        run.output.as_deref(),
    )?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// check-utilitarian
// ---------------------------------------------------------------------------

/// One menu's verdict bundle.
struct MenuVerdict {
    menu_id: String,
    local: LpVerdict,
    pareto: LpVerdict,
    probes_ok: u32,
    probes_total: u32,
    /// `(planner agreement, min agent agreement, max agent agreement)` at
    /// the witness probe, when the local-weights verdict is infeasible.
    witness_agreement: Option<(f64, f64, f64)>,
}

/// `welfarelab check-utilitarian [--menu ID] [--weights ...] [--probes N]`
pub fn cmd_check_utilitarian(
    scenario_path: Option<&Path>,
    menu_filter: Option<&str>,
    weights: Option<&[f64]>,
    probes: u32,
    run: &RunConfig,
) -> Result<u8, CliError> {
    let file = load_scenario(scenario_path)?;
    let profile = file.build_profile()?;
    let menus: Vec<(String, DecisionProblem)> = match menu_filter {
        Some(id) => vec![(id.to_string(), file.build_menu(id)?)],
        None => file.build_all_menus()?,
    };
    if menus.is_empty() {
        return Err(CliError::input(
            "scenario has no menus to check (add a [[menus]] block)".into(),
        ));
    }
    let flag_alpha = weights
        .map(|w| Weights::new(w.to_vec()).map_err(|e| CliError::input(format!("--weights: {e}"))))
        .transpose()?;

    let mut verdicts = Vec::new();
    for (menu_index, (menu_id, menu)) in menus.iter().enumerate() {
        let agent_rows = profile.atomic_rows(menu, TieBreakRule::UniformOverArgmax)?;
        let planner_row = match &flag_alpha {
            Some(alpha) => {
                let mixed = mix(&profile, alpha)?;
                atoms_choice_distribution(&mixed, menu, TieBreakRule::UniformOverArgmax)?
            }
            None => file.planner_row(menu_id, menu)?,
        };

        let local = local_weights(&planner_row, &agent_rows, run.tol)?;
        let pareto = respects_pareto_at(&planner_row, &agent_rows, run.tol)?;

        // Spot-check the agreement-bounds characterization on random probes.
        let mut rng = stream_rng(splitmix64(run.seed), menu_index as u64);
        let mut probes_ok = 0;
        for _ in 0..probes {
            let probe = random_probe(&mut rng, menu)?;
            if welfarelab::aggregation::agreement_bounds_check(&planner_row, &agent_rows, &probe)? {
                probes_ok += 1;
            }
        }

        let witness_agreement = match &local {
            LpVerdict::Infeasible { witness, .. } => {
                let probe = witness_probe(witness, menu)?;
                let planner_a = agreement(&planner_row, &probe)?;
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for r in &agent_rows {
                    let a = agreement(r, &probe)?;
                    lo = lo.min(a);
                    hi = hi.max(a);
                }
                Some((planner_a, lo, hi))
            }
            LpVerdict::Feasible { .. } => None,
        };

        verdicts.push(MenuVerdict {
            menu_id: menu_id.clone(),
            local,
            pareto,
            probes_ok,
            probes_total: probes,
            witness_agreement,
        });
    }

    let violation = verdicts
        .iter()
        .any(|v| !v.local.is_feasible() || !v.pareto.is_feasible() || v.probes_ok < v.probes_total);

    let planner_desc = match (&flag_alpha, &file.planner) {
        (Some(a), _) => format!("mixture weights [{}]", text_vec(a.alpha())),
        (None, Some(p)) if p.weights.is_some() => format!(
            "mixture weights [{}]",
            text_vec(p.weights.as_deref().unwrap_or(&[]))
        ),
        _ => "explicit rows".to_string(),
    };

    let mut text = format!(
        "check-utilitarian: {} menu(s), planner = {planner_desc}, tol {}\n",
        verdicts.len(),
        text_f64(run.tol)
    );
    let mut csv = CsvRows::new();
    let mut json_menus = Vec::new();
    for v in &verdicts {
        let id = &v.menu_id;
        match &v.local {
            LpVerdict::Feasible { weights } => {
                text.push_str(&format!(
                    "menu `{id}`:\n  local-weights: feasible (weights: {})\n",
                    text_vec(weights.alpha())
                ));
                csv.push("menu", &format!("{id}/local_weights"), "feasible");
                for (i, w) in weights.alpha().iter().enumerate() {
                    csv.push_f64("menu", &format!("{id}/weight[{i}]"), *w);
                }
            }
            LpVerdict::Infeasible { witness, margin } => {
                text.push_str(&format!(
                    "menu `{id}`:\n  local-weights: VIOLATION (margin {})\n    witness payoffs c: {}\n    threshold theta: {}\n",
                    text_f64(*margin),
                    text_vec(&witness.c),
                    text_f64(witness.theta)
                ));
                if let Some((pa, lo, hi)) = v.witness_agreement {
                    text.push_str(&format!(
                        "    witness probe agreement: planner {} vs agents [{}, {}]\n",
                        text_f64(pa),
                        text_f64(lo),
                        text_f64(hi)
                    ));
                }
                csv.push("menu", &format!("{id}/local_weights"), "infeasible");
                csv.push_f64("menu", &format!("{id}/margin"), *margin);
                for (j, c) in witness.c.iter().enumerate() {
                    csv.push_f64("menu", &format!("{id}/witness_c[{j}]"), *c);
                }
                csv.push_f64("menu", &format!("{id}/witness_theta"), witness.theta);
            }
        }
        let pareto_word = if v.pareto.is_feasible() {
            "respected"
        } else {
            "VIOLATED"
        };
        text.push_str(&format!("  pareto: {pareto_word}\n"));
        text.push_str(&format!(
            "  agreement bounds: {}/{} probes within bounds\n",
            v.probes_ok, v.probes_total
        ));
        csv.push(
            "menu",
            &format!("{id}/pareto"),
            if v.pareto.is_feasible() {
                "respected"
            } else {
                "violated"
            },
        );
        csv.push(
            "menu",
            &format!("{id}/probes_ok"),
            &format!("{}/{}", v.probes_ok, v.probes_total),
        );

        json_menus.push(json!({
            "menu": id,
            "local_weights": lp_verdict_json(&v.local),
            "pareto": lp_verdict_json(&v.pareto),
            "probes_ok": v.probes_ok,
            "probes_total": v.probes_total,
            "witness_probe_agreement": v.witness_agreement.map(|(pa, lo, hi)| json!({
                "planner": pa,
                "agent_min": lo,
                "agent_max": hi,
            })),
        }));
    }
    let overall = if violation {
        "VIOLATION CERTIFIED"
    } else {
        "utilitarian on every menu"
    };
    text.push_str(&format!("overall: {overall}\n"));
    csv.push(
        "overall",
        "",
        if violation {
            "violation"
        } else {
            "utilitarian"
        },
    );
    let json = json!({
        "command": "check-utilitarian",
        "planner": planner_desc,
        "tol": run.tol,
        "menus": json_menus,
        "violation": violation,
    });

    emit(
        &Emission {
            text,
            csv: csv.finish(),
            json,
        },
        run.format,
        run.output.as_deref(),
    )?;
    Ok(if violation { 4 } else { 0 })
}

/// JSON rendering of an LP verdict with its certificate.
fn lp_verdict_json(v: &LpVerdict) -> serde_json::Value {
    match v {
        LpVerdict::Feasible { weights } => json!({
            "verdict": "feasible",
            "weights": weights.alpha(),
        }),
        LpVerdict::Infeasible { witness, margin } => json!({
            "verdict": "infeasible",
            "witness_c": witness.c,
            "witness_theta": witness.theta,
            "margin": margin,
        }),
    }
}

/// A random interior choice distribution on `menu` (normalized exponentials,
/// so every alternative keeps positive mass).
fn random_probe<R: RngCore>(
    rng: &mut R,
    menu: &DecisionProblem,
) -> Result<ChoiceDistribution, CliError> {
    let raw: Vec<f64> = (0..menu.len())
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
    Ok(ChoiceDistribution::new(menu.clone(), probs, None)?)
}

// ---------------------------------------------------------------------------
// cv
// ---------------------------------------------------------------------------

/// `welfarelab cv --change ID [--tau ...] [--alpha ...] [--grid N]`
pub fn cmd_cv(
    scenario_path: Option<&Path>,
    change_id: &str,
    taus: &[f64],
    alpha_flag: Option<&[f64]>,
    grid: Option<u32>,
    run: &RunConfig,
) -> Result<u8, CliError> {
    if taus.is_empty() {
        return Err(CliError::input("--tau needs at least one quantile".into()));
    }
    for &t in taus {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::input(format!(
                "--tau values must lie strictly between 0 and 1, got {t}"
            )));
        }
    }
    let file = load_scenario(scenario_path)?;
    let scen = file.build_welfare()?;
    let change = file.build_change(change_id)?;
    let alpha = match alpha_flag {
        Some(a) => {
            Weights::new(a.to_vec()).map_err(|e| CliError::input(format!("--alpha: {e}")))?
        }
        None => scen.shares().clone(),
    };

    let mut cv_rows: Vec<(f64, f64)> = Vec::new();
    for &t in taus {
        cv_rows.push((t, distributional_cv(&scen, &alpha, t, &change)?));
    }
    let cv_avg = mean_cv(&scen, &alpha, &change)?;
    let diagnosis: Option<MedianMeanReport> = match median_mean_diagnosis(&scen, &alpha, &change) {
        Ok(d) => Some(d),
        Err(welfarelab::Error::MultiPriceChange { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let cdf_grid: Option<Vec<(f64, f64)>> = match grid {
        None => None,
        Some(n) => {
            if n < 2 {
                return Err(CliError::input("--grid needs at least 2 points".into()));
            }
            let lo = change.dp_min().min(0.0);
            let hi = change.dp_max().max(0.0);
            let mut pts = Vec::with_capacity(n as usize);
            for k in 0..n {
                let a = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                pts.push((a, cv_cdf(&scen, &alpha, &change, a)?));
            }
            Some(pts)
        }
    };

    let mut text = format!(
        "cv for change `{change_id}` ({} goods, alpha: {})\n",
        scen.num_goods(),
        text_vec(alpha.alpha())
    );
    let mut csv = CsvRows::new();
    for (t, v) in &cv_rows {
        text.push_str(&format!("  cv[{}] = {}\n", text_f64(*t), text_f64(*v)));
        csv.push_f64("cv", &text_f64(*t), *v);
    }
    text.push_str(&format!("  cv_avg = {}\n", text_f64(cv_avg)));
    csv.push_f64("cv_avg", "", cv_avg);
    match &diagnosis {
        Some(d) => {
            text.push_str(&format!(
                "  diagnosis: direction {}, median {} vs mean {}, observed {}, curvature {}, predicted {}, matches prediction: {}\n",
                enum_str(&d.direction),
                text_f64(d.median),
                text_f64(d.mean),
                enum_str(&d.observed),
                enum_str(&d.curvature),
                d.predicted.as_ref().map(enum_str).unwrap_or_else(|| "none".to_string()),
                d.matches_prediction
            ));
            csv.push("diagnosis", "direction", &enum_str(&d.direction));
            csv.push_f64("diagnosis", "median", d.median);
            csv.push_f64("diagnosis", "mean", d.mean);
            csv.push("diagnosis", "observed", &enum_str(&d.observed));
            csv.push("diagnosis", "curvature", &enum_str(&d.curvature));
            csv.push(
                "diagnosis",
                "predicted",
                &d.predicted
                    .as_ref()
                    .map(enum_str)
                    .unwrap_or_else(|| "none".to_string()),
            );
            csv.push(
                "diagnosis",
                "matches_prediction",
                if d.matches_prediction {
                    "true"
                } else {
                    "false"
                },
            );
        }
        None => {
            text.push_str("  diagnosis: not applicable (more than one price moved)\n");
            csv.push("diagnosis", "direction", "multi_price");
        }
    }
    if let Some(pts) = &cdf_grid {
        text.push_str(&format!("  cdf grid ({} points):\n", pts.len()));
        for (a, g) in pts {
            text.push_str(&format!("    G({}) = {}\n", text_f64(*a), text_f64(*g)));
            csv.push_f64("cdf", &csv_f64(*a), *g);
        }
    }
    let json = json!({
        "command": "cv",
        "change": change_id,
        "alpha": alpha.alpha(),
        "cv": cv_rows.iter().map(|(t, v)| json!({"tau": t, "value": v})).collect::<Vec<_>>(),
        "cv_avg": cv_avg,
        "diagnosis": diagnosis,
        "cdf": cdf_grid.as_ref().map(|pts| {
            pts.iter().map(|(a, g)| json!([a, g])).collect::<Vec<_>>()
        }),
    });

    emit(
        &Emission {
            text,
            csv: csv.finish(),
            json,
        },
        run.format,
        run.output.as_deref(),
    )?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// example
// ---------------------------------------------------------------------------

/// `welfarelab example <name> [condorcet overrides]`
pub fn cmd_example(
    name: ExampleName,
    eta: Option<f64>,
    delta: Option<f64>,
    eps_angle: Option<f64>,
    interval: Option<&[f64]>,
    run: &RunConfig,
) -> Result<u8, CliError> {
    let report = match name {
        ExampleName::Euw => run_euw_example()?,
        ExampleName::Diamond => run_diamond_example()?,
        ExampleName::MedianCounterexample => run_median_counterexample()?,
        ExampleName::Condorcet => {
            let mut cfg = CondorcetConfig {
                samples: run.samples,
                seed: run.seed,
                ..Default::default()
            };
            if let Some(x) = eta {
                cfg.eta = x;
            }
            if let Some(x) = delta {
                cfg.delta = x;
            }
            if let Some(x) = eps_angle {
                cfg.eps_angle = x;
            }
            if let Some(iv) = interval {
                if iv.len() != 2 {
                    return Err(CliError::input(
                        "--interval needs exactly two values: LO,HI".into(),
                    ));
                }
                cfg.uniform_interval = (iv[0], iv[1]);
            }
            run_condorcet_example(&cfg)?
        }
    };

    let emission = example_emission(&report);
    emit(&emission, run.format, run.output.as_deref())?;
    Ok(if report.all_pass() { 0 } else { 4 })
}

/// Renders an example report in all three formats.
fn example_emission(report: &ExampleReport) -> Emission {
    let mut csv = CsvRows::new();
    csv.push("example", "name", &report.name);
    for (k, v) in &report.inputs {
        csv.push("input", k, v);
    }
    for (k, v) in &report.quantities {
        csv.push_f64("quantity", k, *v);
    }
    for c in &report.checks {
        csv.push_f64("check_actual", &c.label, c.actual);
        csv.push_f64("check_expected", &c.label, c.expected);
        csv.push("check_kind", &c.label, &enum_str(&c.kind));
        csv.push_f64("check_tolerance", &c.label, c.tolerance);
        csv.push("check_source", &c.label, c.source);
        csv.push(
            "check_pass",
            &c.label,
            if c.pass { "true" } else { "false" },
        );
    }
    for (i, n) in report.notes.iter().enumerate() {
        csv.push("note", &i.to_string(), n);
    }
    csv.push(
        "overall",
        "",
        if report.all_pass() { "pass" } else { "fail" },
    );
    Emission {
        text: report.render_text(),
        csv: csv.finish(),
        json: serde_json::to_value(report).unwrap_or(serde_json::Value::Null),
    }
}
