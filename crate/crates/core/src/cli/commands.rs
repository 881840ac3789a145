use serde_json::{json, Value};

use super::format::{csv_row, format_dense, format_matrix, CSV_HEADER};
use super::scenario::Scenario;
use crate::feasible::{
    boundary_curves, garbling_posteriors, sample_feasible_general, wing_polygons, BinaryGarbling, Wing,
};
use crate::info::{bayes_plausible_weights, blackwell_compare, induced_tau, BeliefDistribution, BlackwellOrder, StochasticMatrix};
use crate::solver::{
    bp_solve, check_equilibrium, compare_outcomes, mediator_best_response_with, search_equilibria,
    sender_best_response, EquilibriumCertificate, Verdict,
};
use crate::{Error, Result};

pub const SPEC_VERSION: &str = "1";

/// Grid step of the sampler used for garblings with more than two signals.
pub const GENERAL_RESOLUTION: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Result of a command: the text to emit and whether a check was refuted.
pub struct Output {
    pub text: String,
    pub refuted: bool,
}

pub fn tau_json(t: &BeliefDistribution) -> Value {
    Value::Array(t.atoms().iter().map(|a| json!([a.belief, a.prob])).collect())
}

fn matrix_json(m: &StochasticMatrix) -> Value {
    json!({ "rows": m.to_rows(), "text": format_matrix(m) })
}

pub fn feasible(scenario: &Scenario, points: usize, format: Format) -> Result<Output> {
    let sigma = scenario.sigma()?;
    let prior = scenario.prior;
    if sigma.rank() < sigma.cols().min(sigma.rows()) {
        return Err(Error::SingularGarbling);
    }
    let text = if sigma.is_binary() {
        BinaryGarbling::new(sigma)?;
        let curves = boundary_curves(sigma, prior, points)?;
        let set = wing_polygons(sigma, prior, points)?;
        let a = garbling_posteriors(sigma, prior)?;
        let wing_rows = |w: Wing| -> Vec<[f64; 4]> {
            set.wing(w)
                .iter()
                .map(|&(b1, b2)| {
                    let (p1, p2) = bayes_plausible_weights(b1, b2, prior).unwrap_or((0.5, 0.5));
                    [b1, b2, p1, p2]
                })
                .collect()
        };
        match format {
            Format::Csv => {
                let mut out = String::from(CSV_HEADER);
                out.push('\n');
                for c in &curves {
                    for s in &c.samples {
                        csv_row(&mut out, c.family.name(), s.p, s.pair.b1, s.pair.b2, s.pair.prob1, s.pair.prob2);
                    }
                }
                for (w, name) in [(Wing::Natural, "natural"), (Wing::Perverse, "perverse")] {
                    for (i, r) in wing_rows(w).iter().enumerate() {
                        csv_row(&mut out, name, i as f64, r[0], r[1], r[2], r[3]);
                    }
                }
                out
            }
            Format::Json => {
                let curves: Vec<Value> = curves
                    .iter()
                    .map(|c| {
                        json!({
                            "family": c.family.name(),
                            "samples": c.samples.iter()
                                .map(|s| [s.p, s.pair.b1, s.pair.b2, s.pair.prob1, s.pair.prob2])
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                let doc = json!({
                    "spec_version": SPEC_VERSION,
                    "command": "feasible",
                    "prior": prior,
                    "sigma": matrix_json(sigma),
                    "columns": ["p", "b1", "b2", "prob1", "prob2"],
                    "curves": curves,
                    "wings": {
                        "natural": wing_rows(Wing::Natural),
                        "perverse": wing_rows(Wing::Perverse),
                    },
                    "origin": [prior, prior],
                    "garbling_posteriors": tau_json(&a),
                });
                pretty(&doc)
            }
        }
    } else {
        let cloud = sample_feasible_general(sigma, prior, GENERAL_RESOLUTION)?;
        match format {
            Format::Csv => {
                // One row per sampled experiment: its lowest and highest posterior.
                let mut out = String::from(CSV_HEADER);
                out.push('\n');
                for i in 0..cloud.len() {
                    let Ok(t) = cloud.support(i) else { continue };
                    let (lo, hi) = (t.atoms()[0], t.atoms()[t.len() - 1]);
                    csv_row(&mut out, "cloud", i as f64, lo.belief, hi.belief, lo.prob, hi.prob);
                }
                out
            }
            Format::Json => pretty(&json!({
                "spec_version": SPEC_VERSION,
                "command": "feasible",
                "prior": prior,
                "sigma": matrix_json(sigma),
                "signals": cloud.signals,
                "resolution": GENERAL_RESOLUTION,
                "samples": cloud.len(),
                "min_belief": cloud.min_belief(),
                "max_belief": cloud.max_belief(),
            })),
        }
    };
    Ok(Output { text, refuted: false })
}

pub struct Profile {
    pub x: Option<StochasticMatrix>,
    pub sigma: Option<StochasticMatrix>,
}

fn need<'a>(m: &'a Option<StochasticMatrix>, flag: &str) -> Result<&'a StochasticMatrix> {
    m.as_ref().ok_or_else(|| Error::InvalidArgument(format!("this mode needs --{flag}")))
}

fn certificate_json(c: &EquilibriumCertificate) -> Value {
    let verdict = match &c.verdict {
        Verdict::Verified { tol } => json!({ "status": "verified", "tol": tol }),
        Verdict::Refuted { deviation } => json!({
            "status": "refuted",
            "deviation": {
                "player": deviation.player,
                "matrix": matrix_json(&deviation.matrix),
                "tau": tau_json(&deviation.tau),
                "gain": deviation.gain,
            }
        }),
    };
    json!({
        "x": matrix_json(&c.x),
        "sigma": matrix_json(&c.sigma),
        "tau": tau_json(&c.tau),
        "values": c.values,
        "sender_gap": c.sender_gap,
        "mediator_gap": c.mediator_gap,
        "verdict": verdict,
    })
}

pub fn solve(scenario: &Scenario, mode: &str, profile: &Profile) -> Result<Output> {
    let prior = scenario.prior;
    let sigma = profile.sigma.as_ref().or(scenario.sigma.as_ref());
    let mut refuted = false;
    let body = match mode {
        "bp" => {
            let u = scenario.sender.as_ref().ok_or_else(|| Error::Scenario("scenario has no sender utility".into()))?;
            let s = bp_solve(u, prior)?;
            json!({
                "tau": tau_json(&s.tau),
                "value": s.value,
                "x": matrix_json(&s.x),
                "epsilon_optimal": s.epsilon_optimal,
            })
        }
        "sender-br" => {
            let u = scenario.sender.as_ref().ok_or_else(|| Error::Scenario("scenario has no sender utility".into()))?;
            let sigma = sigma.ok_or_else(|| Error::InvalidArgument("this mode needs --sigma".into()))?;
            let r = sender_best_response(u, sigma, prior)?;
            json!({ "sigma": matrix_json(sigma), "x": matrix_json(&r.x), "tau": tau_json(&r.tau), "value": r.value })
        }
        "mediator-br" => {
            let u = scenario.mediator.as_ref().ok_or_else(|| Error::Scenario("scenario has no mediator utility".into()))?;
            let x = need(&profile.x, "x")?;
            let r = mediator_best_response_with(u, x, prior, scenario.search.concavify_grid)?;
            json!({ "x": matrix_json(x), "sigma": matrix_json(&r.sigma), "tau": tau_json(&r.tau), "value": r.value })
        }
        "check" => {
            let game = scenario.game()?;
            let x = need(&profile.x, "x")?;
            let sigma = sigma.ok_or_else(|| Error::InvalidArgument("this mode needs --sigma".into()))?;
            let c = check_equilibrium(&game, x, sigma)?;
            refuted = !c.is_verified();
            certificate_json(&c)
        }
        "search" => {
            let game = scenario.game()?;
            let out = search_equilibria(&game)?;
            let cluster = |c: &crate::solver::OutcomeCluster| {
                json!({
                    "anchor": tau_json(&c.anchor),
                    "members": c.members,
                    "grid_gap": c.grid_gap,
                    "babbling": c.is_babbling(),
                    "representative": certificate_json(&c.representative),
                })
            };
            json!({
                "grid": game.search.grid,
                "tol_search": game.search.tol_search,
                "tol_dev": game.search.tol_dev,
                "cluster_tol": game.search.cluster_tol,
                "profiles": out.profiles,
                "kept": out.kept,
                "anchored": out.anchored,
                "clusters": out.clusters.iter().map(cluster).collect::<Vec<_>>(),
                "unverified": out.unverified.iter().map(cluster).collect::<Vec<_>>(),
            })
        }
        "compare" => {
            let game = scenario.game()?;
            let x = need(&profile.x, "x")?;
            let sigma = sigma.ok_or_else(|| Error::InvalidArgument("this mode needs --sigma".into()))?;
            let mp = induced_tau(&sigma.compose(x)?, prior)?;
            let bp = bp_solve(&game.sender, prior)?;
            let r = compare_outcomes(&game, &mp, &bp.tau)?;
            let c = check_equilibrium(&game, x, sigma)?;
            json!({
                "mediated_tau": tau_json(&mp),
                "unmediated_tau": tau_json(&bp.tau),
                "informativeness": r.informativeness,
                "witness": r.witness.as_ref().map(|w| json!({ "rows": w.to_rows(), "text": format_dense(w) })),
                "mediated": r.mediated,
                "unmediated": r.unmediated,
                "welfare": r.welfare,
                "receiver_benefits": r.receiver_benefits,
                "equilibrium": certificate_json(&c),
            })
        }
        other => return Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
    };
    let mut doc = json!({ "spec_version": SPEC_VERSION, "command": "solve", "mode": mode, "prior": prior });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    Ok(Output { text: pretty(&doc), refuted })
}

pub fn order(a: &StochasticMatrix, b: &StochasticMatrix, json_out: bool) -> Result<Output> {
    let verdict = blackwell_compare(a, b)?;
    let gamma = match &verdict {
        BlackwellOrder::Dominates { gamma } | BlackwellOrder::DominatedBy { gamma } => Some(gamma),
        BlackwellOrder::Equivalent { forward, .. } => Some(forward),
        BlackwellOrder::Unranked => None,
    };
    let text = if json_out {
        pretty(&json!({
            "spec_version": SPEC_VERSION,
            "command": "order",
            "a": matrix_json(a),
            "b": matrix_json(b),
            "verdict": verdict.label(),
            "gamma": gamma.map(|g| json!({ "rows": g.to_rows(), "text": format_dense(g) })),
        }))
    } else {
        let mut s = format!("{}\n", verdict.label());
        if let Some(g) = gamma {
            s.push_str(&format!("gamma {}\n", format_dense(g)));
        }
        s
    };
    Ok(Output { text, refuted: false })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
