//! One test per acceptance criterion. Each prints a single PASS/FAIL line on
//! stderr before asserting, so `cargo test --test acceptance` lists all of
//! them even when some fail. The command-line and property suites live in
//! the same binary.

mod cli;
mod common;

use std::time::{Duration, Instant};

use common::{canonical_two_action, game, property_search, random_concave, random_convex, random_pwl, report, sender_step};
use mediated_persuasion::feasible::hull::{boundary_distance, contains, convex_hull, Point};
use mediated_persuasion::feasible::{
    membership, nesting_report, pair_from_uv, reconstruct_experiment, sample_feasible_general, wing_polygons, Wing,
};
use mediated_persuasion::fixtures;
use mediated_persuasion::info::{
    garbling, garbling_lp, induced_tau, is_mps, mps_residual, BeliefDistribution, StochasticMatrix,
};
use mediated_persuasion::solver::{
    bp_solve, check_equilibrium, compare_outcomes, search_equilibria, Informativeness, Player, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact identities (values, beliefs, matrices).
const EXACT: f64 = 1e-9;
/// Beliefs and probabilities given to three decimals.
const DRAWN: f64 = 1e-3;
/// Transport distance under which two outcomes count as the same.
const CLUSTER: f64 = 0.02;
/// Oracle band around wing boundaries.
const BAND: f64 = 0.02;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn tau_matches(t: &BeliefDistribution, want: &[(f64, f64)], tol: f64) -> bool {
    t.len() == want.len()
        && t.atoms().iter().zip(want).all(|(a, &(b, p))| close(a.belief, b, tol) && close(a.prob, p, tol))
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let e = start.elapsed();
    (e < limit, format!("{:.3}s of {:.0?}", e.as_secs_f64(), limit))
}

fn binary(a: f64, b: f64) -> StochasticMatrix {
    StochasticMatrix::binary(a, b).unwrap()
}

fn random_full_rank(rng: &mut impl Rng, gap: f64) -> StochasticMatrix {
    loop {
        let (a, b) = (rng.gen::<f64>(), rng.gen::<f64>());
        if (a - b).abs() >= gap {
            return binary(a, b);
        }
    }
}

#[test]
fn c01_unmediated_benchmark() {
    let start = Instant::now();
    let s = fixtures::scenario(fixtures::PROSECUTOR);
    let sol = bp_solve(s.sender.as_ref().unwrap(), s.prior).unwrap();
    let (fast, time) = within(start, Duration::from_millis(100));
    let tau_ok = tau_matches(&sol.tau, &[(0.0, 0.4), (0.5, 0.6)], EXACT);
    let value_ok = close(sol.value, 0.6, EXACT);
    let x_ok = sol.x.max_abs_diff(&binary(4.0 / 7.0, 0.0)) <= EXACT;
    let pass = tau_ok && value_ok && x_ok && fast;
    report(1, "unmediated benchmark", pass, &format!("value {} tau ok {tau_ok} X ok {x_ok}, {time}", sol.value));
    assert!(pass);
}

#[test]
fn c02_three_step_revealing_equilibrium() {
    let start = Instant::now();
    let g = fixtures::scenario(fixtures::THREE_STEP).game().unwrap();
    let c = check_equilibrium(&g, &StochasticMatrix::identity(2), &fixtures::three_step_sigma()).unwrap();
    let bp = BeliefDistribution::binary(1.0 / 3.0, 2.0 / 3.0, 0.5).unwrap();
    let mps = is_mps(&c.tau, &bp).unwrap();
    let (fast, time) = within(start, Duration::from_secs(5));
    let verified = c.is_verified();
    let tau_ok = tau_matches(&c.tau, &[(1.0 / 3.0, 9.0 / 14.0), (0.8, 5.0 / 14.0)], EXACT);
    let witness_ok = mps.holds && mps.witness.as_ref().is_some_and(|t| mps_residual(t, &c.tau, &bp) <= EXACT);
    let deviation = match &c.verdict {
        Verdict::Verified { .. } => String::from("none"),
        Verdict::Refuted { deviation } => format!("{:?} gains {:.6} via tau {:?}", deviation.player, deviation.gain,
            deviation.tau.atoms().iter().map(|a| (a.belief, a.prob)).collect::<Vec<_>>()),
    };
    let pass = verified && tau_ok && witness_ok && fast;
    report(
        2,
        "three-step revealing equilibrium",
        pass,
        &format!("verified {verified} (deviation: {deviation}), tau ok {tau_ok}, mps witness ok {witness_ok}, {time}"),
    );
    assert!(pass);
}

#[test]
fn c03_two_clusters_and_refuted_benchmark() {
    let start = Instant::now();
    let g = fixtures::scenario(fixtures::TWO_OUTCOMES).game().unwrap();
    let out = search_equilibria(&g).unwrap();
    let babbling = out.clusters.iter().filter(|c| c.representative.tau.is_degenerate()).count();
    let revealing = out
        .clusters
        .iter()
        .filter(|c| c.representative.is_verified())
        .filter(|c| tau_matches(&c.representative.tau, &[(1.0 / 3.0, 0.5), (2.0 / 3.0, 0.5)], EXACT))
        .count();
    let bp = bp_solve(&g.sender, g.prior).unwrap();
    let bp_ok = tau_matches(&bp.tau, &[(0.25, 0.5), (0.75, 0.5)], EXACT);
    let c = check_equilibrium(&g, &bp.x, &StochasticMatrix::identity(2)).unwrap();
    let refuted_by_mediator = matches!(&c.verdict, Verdict::Refuted { deviation } if deviation.player == Player::Mediator);
    let (fast, time) = within(start, Duration::from_secs(60));
    let pass = out.clusters.len() == 2 && babbling == 1 && revealing == 1 && bp_ok && refuted_by_mediator && fast;
    report(
        3,
        "exactly two equilibrium outcomes",
        pass,
        &format!(
            "{} clusters ({babbling} babbling, {revealing} at 1/3,2/3), benchmark refuted by mediator {refuted_by_mediator}, {time}",
            out.clusters.len()
        ),
    );
    assert!(pass);
}

#[test]
fn c04_informative_mediated_outcome() {
    let start = Instant::now();
    let g = fixtures::scenario(fixtures::INFORMATIVE).game().unwrap();
    let c = check_equilibrium(&g, &StochasticMatrix::identity(2), &fixtures::informative_sigma()).unwrap();
    let bp = bp_solve(&g.sender, g.prior).unwrap();
    let stated = BeliefDistribution::binary(0.2, 0.5, g.prior).unwrap();
    let bp_ok = bp.tau.distance(&stated) <= EXACT;
    let r = compare_outcomes(&g, &c.tau, &stated).unwrap();
    let tau_ok = tau_matches(&c.tau, &[(0.1779, 0.843), (0.9554, 0.157)], DRAWN);
    let (fast, time) = within(start, Duration::from_secs(10));
    let strict = r.informativeness == Informativeness::MpMoreInformative;
    let pass = c.is_verified() && tau_ok && strict && bp_ok && fast;
    report(
        4,
        "informative mediated outcome",
        pass,
        &format!("verified {}, tau ok {tau_ok}, strictly more informative {strict}, benchmark ok {bp_ok}, {time}", c.is_verified()),
    );
    assert!(pass);
}

#[test]
fn c05_nesting_under_blackwell_order() {
    let start = Instant::now();
    let (s1, s2) = fixtures::pair(fixtures::RANKED);
    let ranked = nesting_report(&s1, &s2, 0.3, 10_000, 5).unwrap();
    let (u1, u2) = fixtures::pair(fixtures::UNRANKED);
    let forward = nesting_report(&u1, &u2, 0.3, 10_000, 5).unwrap();
    let backward = nesting_report(&u2, &u1, 0.3, 10_000, 5).unwrap();
    let (fast, time) = within(start, Duration::from_secs(10));
    let ranked_ok = ranked.nested && ranked.witnesses_checked == 10_000 && ranked.witness_failures == 0;
    let unranked_ok = !forward.violations.is_empty() && !backward.violations.is_empty();
    let pass = ranked_ok && unranked_ok && fast;
    report(
        5,
        "nesting under Blackwell order",
        pass,
        &format!(
            "ranked: {} violations, {} witness failures; unranked: {} and {} violations, {time}",
            ranked.violations.len(),
            ranked.witness_failures,
            forward.violations.len(),
            backward.violations.len()
        ),
    );
    assert!(pass);
}

#[test]
fn c06_reconstruction_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..1000 {
        let sigma = random_full_rank(&mut rng, 0.05);
        let prior = rng.gen_range(0.02..0.98);
        let x = binary(rng.gen(), rng.gen());
        let tau = induced_tau(&sigma.compose(&x).unwrap(), prior).unwrap();
        match reconstruct_experiment(&sigma, prior, &tau) {
            Ok(y) => {
                let back = induced_tau(&sigma.compose(&y).unwrap(), prior).unwrap();
                worst = worst.max(back.distance(&tau));
            }
            Err(_) => failures += 1,
        }
    }
    let pass = failures == 0 && worst < EXACT;
    report(6, "reconstruction round trip", pass, &format!("{failures} failures, worst error {worst:.2e}"));
    assert!(pass);
}

#[test]
fn c07_membership_against_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tested, mut disagreements) = (0usize, 0usize);
    for _ in 0..100 {
        let sigma = random_full_rank(&mut rng, 0.1);
        let prior = rng.gen_range(0.1..0.9);
        let (s1, s2) = (sigma.get(0, 0), sigma.get(0, 1));
        let (mut natural, mut perverse): (Vec<Point>, Vec<Point>) = (vec![], vec![]);
        for i in 0..=100 {
            for j in 0..=100 {
                let (x, y) = (i as f64 / 100.0, j as f64 / 100.0);
                let (u, v) = (s2 + (s1 - s2) * x, s2 + (s1 - s2) * y);
                if let Some(p) = pair_from_uv(u, v, prior) {
                    match Wing::of(p.b1, p.b2) {
                        Wing::Natural => natural.push(p.point()),
                        Wing::Perverse => perverse.push(p.point()),
                    }
                }
            }
        }
        let brute = [convex_hull(&natural), convex_hull(&perverse)];
        let exact = wing_polygons(&sigma, prior, 256).unwrap();
        for i in 0..=50 {
            for j in 0..=50 {
                let p = (i as f64 / 50.0, j as f64 / 50.0);
                let near = [&exact.left, &exact.right].iter().any(|w| w.len() >= 2 && boundary_distance(w, p) <= BAND);
                if near || close(p.0, prior, BAND) && close(p.1, prior, BAND) {
                    continue;
                }
                tested += 1;
                let member = membership(&sigma, prior, p.0, p.1).ok().flatten().is_some();
                let enumerated = brute.iter().any(|h| h.len() >= 3 && contains(h, p, 0.0));
                if member != enumerated {
                    disagreements += 1;
                }
            }
        }
    }
    let pass = disagreements == 0 && tested > 0;
    report(7, "membership against enumeration", pass, &format!("{tested} points, {disagreements} disagreements"));
    assert!(pass);
}

#[test]
fn c08_babbling_and_concave_designers() {
    let mut babbling_ok = 0;
    let with_games: Vec<_> = fixtures::SCENARIOS
        .iter()
        .map(|(_, t)| fixtures::scenario(t))
        .filter(|s| s.sender.is_some())
        .collect();
    for s in &with_games {
        let g = s.game().unwrap();
        let flat = StochasticMatrix::uninformative(2, 2);
        if check_equilibrium(&g, &flat, &flat).unwrap().is_verified() {
            babbling_ok += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut only_babbling = 0;
    for trial in 0..40 {
        let prior = rng.gen_range(0.1..0.9);
        let concave = random_concave(&mut rng, 64);
        let other = random_pwl(&mut rng, 4);
        let g = if trial < 20 {
            game(prior, concave, other.clone(), other, property_search())
        } else {
            game(prior, other, concave.clone(), concave, property_search())
        };
        let out = search_equilibria(&g).unwrap();
        let single = out.clusters.len() == 1 && out.clusters[0].is_babbling();
        if single {
            only_babbling += 1;
        }
    }
    let pass = babbling_ok == with_games.len() && only_babbling == 40;
    report(
        8,
        "babbling and concave designers",
        pass,
        &format!("babbling verified in {babbling_ok}/{} fixtures; only babbling in {only_babbling}/40 concave games", with_games.len()),
    );
    assert!(pass);
}

#[test]
fn c09_two_action_games_not_strictly_more_informative() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut games, mut verified, mut offending) = (0, 0, 0);
    while games < 50 {
        let (action_game, c) = canonical_two_action(&mut rng);
        let prior = rng.gen_range(0.02..0.98);
        if prior >= c - 0.02 {
            continue;
        }
        games += 1;
        let induced = action_game.induce();
        let g = game(prior, induced.sender, random_pwl(&mut rng, 4), induced.receiver, property_search());
        let bp = bp_solve(&g.sender, prior).unwrap();
        for cl in search_equilibria(&g).unwrap().clusters {
            let rep = &cl.representative;
            if !rep.is_verified() {
                continue;
            }
            verified += 1;
            let ahead = is_mps(&rep.tau, &bp.tau).unwrap().holds && !is_mps(&bp.tau, &rep.tau).unwrap().holds;
            if ahead {
                offending += 1;
            }
        }
    }
    let pass = offending == 0;
    report(
        9,
        "two-action games never strictly more informative",
        pass,
        &format!("{games} games, {verified} verified outcomes, {offending} strictly more informative than the benchmark"),
    );
    assert!(pass);
}

#[test]
fn c10_aligned_mediator_uninformative_or_benchmark() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut games, mut outcomes, mut offending) = (0, 0, 0);
    while games < 50 {
        let c = rng.gen_range(0.15..0.9);
        let prior = rng.gen_range(0.05..c - 0.05);
        games += 1;
        let convex = random_convex(&mut rng, 64);
        let g = game(prior, sender_step(&mut rng, c), convex.clone(), convex, property_search());
        let bp = bp_solve(&g.sender, prior).unwrap();
        let point = BeliefDistribution::point(prior).unwrap();
        for cl in search_equilibria(&g).unwrap().clusters {
            let rep = &cl.representative;
            outcomes += 1;
            let flat = rep.tau.transport_distance(&point) <= CLUSTER;
            let benchmark = rep.tau.transport_distance(&bp.tau) <= CLUSTER;
            if !(flat || benchmark) {
                offending += 1;
            }
        }
    }
    let pass = offending == 0;
    report(
        10,
        "aligned mediator: uninformative or benchmark",
        pass,
        &format!("{games} games, {outcomes} verified outcomes, {offending} neither uninformative nor the benchmark"),
    );
    assert!(pass);
}

#[test]
fn c11_three_signals_reach_further() {
    let s = fixtures::scenario(fixtures::THREE_SIGNALS);
    let sigma = s.sigma.unwrap();
    let cloud = sample_feasible_general(&sigma, s.prior, 0.02).unwrap();
    let r = sigma.to_rows();
    let restriction = StochasticMatrix::new(&[
        vec![r[0][0] / (r[0][0] + r[1][0]), r[0][1] / (r[0][1] + r[1][1])],
        vec![r[1][0] / (r[0][0] + r[1][0]), r[1][1] / (r[0][1] + r[1][1])],
    ])
    .unwrap();
    let two = sample_feasible_general(&restriction, s.prior, 0.02).unwrap();
    let below_prior = cloud.min_belief() < s.prior;
    let beyond = cloud.attained().any(|b| b < two.min_belief() - EXACT);
    let pass = below_prior && beyond;
    report(
        11,
        "three signals reach beliefs two cannot",
        pass,
        &format!(
            "three-signal minimum {:.4}, two-signal restriction minimum {:.4} ({} and {} experiments)",
            cloud.min_belief(),
            two.min_belief(),
            cloud.len(),
            two.len()
        ),
    );
    assert!(pass);
}

#[test]
fn c12_closed_form_against_feasibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut disagreements, mut ranked) = (0, 0);
    for i in 0..1000 {
        let a = random_full_rank(&mut rng, 0.02);
        let b = if i % 2 == 0 {
            let g = binary(rng.gen(), rng.gen());
            g.compose(&a).unwrap()
        } else {
            binary(rng.gen(), rng.gen())
        };
        let closed = garbling(&a, &b).is_some();
        let lp = garbling_lp(&a, &b).is_some();
        ranked += closed as usize;
        if closed != lp {
            disagreements += 1;
        }
    }
    let pass = disagreements == 0;
    report(12, "closed form against feasibility", pass, &format!("1000 pairs, {ranked} ranked, {disagreements} disagreements"));
    assert!(pass);
}
