//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use hybeam::closed_form::{
    a_quantity, eta_f, eta_f_minimum, g_full, g_partial, kappa_for_eta_f, omega, proposition1, proposition2,
    ratio_approx_at, ratio_exact, ratio_exact_equal_gap,
};
use hybeam::monte_carlo::{run, SimulationPlan, StructureChoice};
use hybeam::{ApproxVariant, ScenarioConfig, Structure, Verdict, C64};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D: f64 = 0.5;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Two UEs symmetric about broadside with cosine gap `beta`.
fn pair(beta: f64) -> Vec<f64> {
    vec![(beta / 2.0).acos(), (-beta / 2.0).acos()]
}

fn toy_identity() -> Outcome {
    let mut worst = 0.0f64;
    for i in 1..=39 {
        let beta = 0.05 * i as f64;
        let r = ratio_exact(&ScenarioConfig::new(2, 2, pair(beta))).unwrap()[0];
        let c2 = (PI * D * beta).cos().powi(2);
        worst = worst.max((r - (1.0 - c2) / (1.0 + c2)).abs());
    }
    outcome(worst < 1e-10, format!("max abs error {worst:.2e}"))
}

fn threshold_example() -> Outcome {
    let eta = eta_f(1.6, D);
    let stated = 0.23;
    let th = proposition1(10, stated).threshold.value().unwrap();
    let min_lbs = (th.floor() as usize) + 1;
    let th_exact = proposition1(10, eta).threshold.value().unwrap();
    let crossing = kappa_for_eta_f(1.0 / 3.0, D).unwrap();
    let pass = (eta - 0.23).abs() <= 0.005
        && th > 9.5
        && th <= 10.5
        && min_lbs == 10
        && (crossing - 1.45).abs() <= 0.01;
    outcome(
        pass,
        format!(
            "eta_F(1.6) = {eta:.5}; threshold at eta_F = 0.23: {th:.4} (minimum l_bs {min_lbs}); \
             unrounded eta_F threshold {th_exact:.4}; eta_F = 1/3 at kappa = {crossing:.4}"
        ),
    )
}

fn eta_range() -> Outcome {
    let (k, v) = eta_f_minimum(D, 20.0);
    let rounded = (v * 100.0).round() / 100.0;
    outcome((v + 0.2172).abs() <= 0.0005 && rounded == -0.22, format!("min eta_F = {v:.5} at kappa = {k:.4}"))
}

fn large_array_asymptotics() -> Outcome {
    let r = ratio_exact(&ScenarioConfig::new(4096, 2, pair(0.1))).unwrap()[0];
    let err = (r / 2.0 - 1.0).abs();
    outcome(err < 0.05, format!("M = 4096: ratio {r:.5}, |ratio/l_bs - 1| = {err:.4}"))
}

fn steering(m: usize, theta: f64) -> DVector<C64> {
    DVector::from_fn(m, |i, _| C64::from_polar(1.0, -2.0 * PI * i as f64 * D * theta.cos()))
}

/// Explicit analog matrix: one beam per UE, over the whole array or over
/// the UE's own subarray.
fn explicit_analog(m: usize, l_bs: usize, angles: &[f64], partial: bool) -> DMatrix<C64> {
    let k = angles.len();
    let mut f = DMatrix::zeros(m, k);
    for (u, &theta) in angles.iter().enumerate() {
        if partial {
            let mp = m / l_bs;
            let b = steering(mp, theta) / C64::new((mp as f64).sqrt(), 0.0);
            f.view_mut((u * mp, u), (mp, 1)).copy_from(&b);
        } else {
            f.set_column(u, &(steering(m, theta) / C64::new((m as f64).sqrt(), 0.0)));
        }
    }
    f
}

/// Gain upper bound from explicit matrices with rank-one covariances.
fn explicit_gains(f: &DMatrix<C64>, m: usize, angles: &[f64]) -> Vec<f64> {
    let k = angles.len();
    let projected: Vec<DMatrix<C64>> = angles
        .iter()
        .map(|&t| {
            let b = steering(m, t);
            f.adjoint() * (&b * b.adjoint()) * f
        })
        .collect();
    let t: Vec<f64> = projected.iter().map(|p| p.trace().re).collect();
    (0..k)
        .map(|u| {
            if k == 1 {
                return t[u];
            }
            let leak: f64 = (0..k).filter(|&j| j != u).map(|j| (&projected[u] * &projected[j]).trace().re / t[j]).sum();
            t[u] - leak / (k - 1) as f64
        })
        .collect()
}

fn trace_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 100 {
        let m = 1usize << rng.random_range(2..=6);
        let k = rng.random_range(1..=4usize);
        let divisors: Vec<usize> = (k..=m).filter(|l| m.is_multiple_of(*l)).collect();
        if divisors.is_empty() {
            continue;
        }
        let l_bs = divisors[rng.random_range(0..divisors.len())];
        let angles: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..PI - 0.2)).collect();
        let cos: Vec<f64> = angles.iter().map(|a| a.cos()).collect();
        let separated = cos.iter().enumerate().all(|(i, a)| cos[..i].iter().all(|b| (a - b).abs() > 0.02));
        if !separated {
            continue;
        }
        let config = ScenarioConfig::new(m, l_bs, angles.clone());
        for (partial, got) in [(false, g_full(&config)), (true, g_partial(&config))] {
            let expect = explicit_gains(&explicit_analog(m, l_bs, &angles, partial), m, &angles);
            for (g, e) in got.iter().zip(&expect) {
                worst = worst.max((g - e).abs() / e.abs().max(1e-300));
            }
        }
        count += 1;
    }
    outcome(worst < 1e-9, format!("{count} scenarios, max relative error {worst:.2e}"))
}

fn monte_carlo_ground_truth() -> Outcome {
    let config = ScenarioConfig::new(32, 2, pair(3.0 / 32.0));
    let plan = SimulationPlan::new(config.clone(), StructureChoice::Both, 100_000, 20_240_601);
    let summary = run(&plan).unwrap();
    let mut worst = 0.0f64;
    let mut gap = 0.0f64;
    for (structure, closed) in [(Structure::Full, g_full(&config)), (Structure::Partial, g_partial(&config))] {
        let s = summary.get(structure).unwrap();
        for (est, g) in s.scaled_gains.iter().zip(&closed) {
            worst = worst.max((est.mean - g).abs() / g);
        }
        gap = gap.max(s.audit.max_tight_gap);
    }
    outcome(
        worst < 0.02 && gap < 1e-9,
        format!("max relative deviation {worst:.4}; max two-UE bound gap {gap:.2e}"),
    )
}

fn pair_bound_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut violations = 0;
    let mut checks = 0;
    let mut worst = f64::NEG_INFINITY;
    for users in [2usize, 3, 4] {
        for spread in [0.0, 0.02] {
            let angles: Vec<f64> = (0..users).map(|i| 0.6 + 0.5 * i as f64 + rng.random_range(0.0..0.3)).collect();
            let paths = if spread > 0.0 { 6 } else { 1 };
            let config = ScenarioConfig::new(32, 4, angles).with_spread(spread).with_paths(paths);
            let plan = SimulationPlan::new(config, StructureChoice::Both, 10_000, rng.random());
            for s in run(&plan).unwrap().structures {
                violations += s.audit.pair_violations;
                checks += s.audit.pair_checks;
                worst = worst.max(s.audit.max_pair_violation);
            }
        }
    }
    outcome(
        violations == 0,
        format!("{checks} pair checks, {violations} violations, max relative excess {worst:.2e}"),
    )
}

fn omega_non_negative() -> Outcome {
    let a_grid = std::iter::once(2.01).chain((21..=100).map(|i| i as f64 / 10.0));
    let mut min = f64::INFINITY;
    for a in a_grid {
        for e in 0..=122 {
            min = min.min(omega(-0.22 + e as f64 * 0.01, a));
        }
    }
    outcome(min >= -1e-12, format!("min Omega = {min:.3e}"))
}

fn threshold_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for i in 1..=332 {
        let kappa = kappa_for_eta_f(i as f64 / 1000.0, D).unwrap();
        let eta = eta_f(kappa, D);
        let p1 = proposition1(16, eta).threshold.value().unwrap();
        let p2 = proposition2(16, 1.0, kappa, D).threshold.value().unwrap();
        worst = worst.max((p1 - p2).abs() / p1.abs());
    }
    outcome(worst < 1e-9, format!("332 eta_F values, max relative difference {worst:.2e}"))
}

fn fig3_approximation() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for l in [8usize, 16] {
        let mut worst = 0.0f64;
        let mut at = 0.0;
        let mut checked = 0;
        for i in 1..=400 {
            let kappa = i as f64 * 0.01;
            let exact = ratio_exact_equal_gap(16, l, l, kappa, D, 0).unwrap();
            if !(0.5..=2.0).contains(&exact) {
                continue;
            }
            let approx = ratio_approx_at(ApproxVariant::Simplified, kappa, D, l, l, 0).unwrap().value;
            let err = (approx - exact).abs() / exact;
            checked += 1;
            if err > worst {
                worst = err;
                at = kappa;
            }
        }
        pass &= worst < 0.10;
        details.push(format!("l_bs = {l}: {checked} points, max relative error {worst:.4} at kappa = {at:.2}"));
    }
    outcome(pass, details.join("; "))
}

fn verdict_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut sampled = 0;
    let mut disagreements = 0;
    while sampled < 500 {
        let kappa: f64 = rng.random_range(0.0..8.0);
        let l_bs = rng.random_range(1..=128usize);
        let users = rng.random_range(1..=l_bs);
        let rho = users as f64 / l_bs as f64;
        if kappa == 0.0 {
            continue;
        }
        let Ok(a) = a_quantity(kappa, D, rho, eta_f(kappa, D)) else { continue };
        if (a - 2.0).abs() <= 0.05 {
            continue;
        }
        sampled += 1;
        let approx = ratio_approx_at(ApproxVariant::GeneralK, kappa, D, users, l_bs, 0).unwrap().value;
        let full_wins = proposition2(l_bs, rho, kappa, D).verdict == Verdict::FullWins;
        if full_wins != (approx >= 1.0) {
            disagreements += 1;
        }
    }
    outcome(disagreements == 0, format!("{sampled} samples, {disagreements} disagreements"))
}

fn main() -> ExitCode {
    let criteria: [Check; 11] = [
        ("toy identity", toy_identity),
        ("threshold example", threshold_example),
        ("eta_F range", eta_range),
        ("large-array asymptotics", large_array_asymptotics),
        ("trace oracle", trace_oracle),
        ("Monte Carlo ground truth", monte_carlo_ground_truth),
        ("gain bound property", pair_bound_property),
        ("Omega non-negativity", omega_non_negative),
        ("threshold consistency", threshold_consistency),
        ("simplified approximation accuracy", fig3_approximation),
        ("verdict consistency", verdict_consistency),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
