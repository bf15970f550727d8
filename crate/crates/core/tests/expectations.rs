use hybeam::channel::covariance;
use hybeam::closed_form::{a_quantity, eta_f, proposition2, ratio_approx_at, sum_rate_upper_bound};
use hybeam::monte_carlo::{run, SimulationPlan, StructureChoice};
use hybeam::precoding::analog;
use hybeam::{ApproxVariant, ChannelMode, ScenarioConfig, Structure, Verdict, C64};
use nalgebra::DMatrix;

fn projected(config: &ScenarioConfig, structure: Structure) -> Vec<DMatrix<C64>> {
    let f = analog(config, structure).matrix;
    (0..config.users)
        .map(|k| f.adjoint() * covariance(config.antennas, config.spacing, config.ue_angles[k], config.spreads[k]).0 * &f)
        .collect()
}

fn three_ue(spread: f64) -> ScenarioConfig {
    ScenarioConfig::new(32, 4, vec![1.1, 1.35, 1.8])
        .with_spread(spread)
        .with_paths(if spread > 0.0 { 8 } else { 1 })
        .with_pathloss(vec![1.0, 2.0, 0.5])
}

#[test]
fn effective_channel_power_matches_trace() {
    for spread in [0.0, 0.02] {
        let config = three_ue(spread);
        let plan = SimulationPlan::new(config.clone(), StructureChoice::Both, 100_000, 9).with_mode(ChannelMode::Approx);
        let summary = run(&plan).unwrap();
        for s in &summary.structures {
            let traces = projected(&config, s.structure);
            for k in 0..config.users {
                let expect = traces[k].trace().re;
                let est = s.norm_sq[k];
                let got = est.mean * config.pathloss[k];
                let se = est.std_error * config.pathloss[k];
                assert!((got - expect).abs() < 3.0 * se, "{:?} spread {spread} ue {k}: {got} vs {expect} (se {se})", s.structure);
            }
        }
    }
}

#[test]
fn cross_terms_match_trace_products() {
    let config = three_ue(0.02);
    let plan = SimulationPlan::new(config.clone(), StructureChoice::Both, 100_000, 21).with_mode(ChannelMode::Approx);
    let summary = run(&plan).unwrap();
    for s in &summary.structures {
        let traces = projected(&config, s.structure);
        for j in 0..config.users {
            for k in 0..config.users {
                if j == k {
                    continue;
                }
                let expect = (&traces[k] * &traces[j]).trace().re;
                let scale = config.pathloss[j] * config.pathloss[k];
                let est = s.cross[j][k];
                let (got, se) = (est.mean * scale, est.std_error * scale);
                assert!((got - expect).abs() < 3.0 * se, "{:?} ({j},{k}): {got} vs {expect} (se {se})", s.structure);
            }
        }
    }
}

#[test]
fn sum_rate_bound_dominates_simulation() {
    let config = ScenarioConfig::new(32, 2, vec![1.2, 1.6]).with_spread(0.02).with_paths(8).with_power(10.0, 1.0);
    let plan = SimulationPlan::new(config.clone(), StructureChoice::Both, 10_000, 4).with_mode(ChannelMode::Approx);
    let summary = run(&plan).unwrap();
    for s in &summary.structures {
        let bound = sum_rate_upper_bound(&config, s.structure).unwrap();
        assert!(bound.total >= s.sum_rate.mean, "{:?}: {} < {}", s.structure, bound.total, s.sum_rate.mean);
        assert_eq!(s.audit.rate_violations, 0);
    }
}

#[test]
fn verdict_tracks_approximation_on_a_grid() {
    for l_bs in [2usize, 8, 16, 64] {
        for users in 1..=l_bs {
            let rho = users as f64 / l_bs as f64;
            for i in 1..=80 {
                let kappa = i as f64 * 0.05 + 0.013;
                let a = a_quantity(kappa, 0.5, rho, eta_f(kappa, 0.5)).unwrap();
                if (a - 2.0).abs() <= 0.05 {
                    continue;
                }
                let approx = ratio_approx_at(ApproxVariant::GeneralK, kappa, 0.5, users, l_bs, 0).unwrap().value;
                let wins = proposition2(l_bs, rho, kappa, 0.5).verdict == Verdict::FullWins;
                assert_eq!(wins, approx >= 1.0, "l_bs {l_bs} K {users} kappa {kappa}: ratio {approx}");
            }
        }
    }
}
