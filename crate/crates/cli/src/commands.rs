//! Figure data, simulation summaries, sweeps and regime decisions.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use hybeam::closed_form::{
    a_quantity, eta_f, eta_p, g_full, g_partial, kappa_for_eta_f, proposition1, proposition2, ratio_approx_at,
    ratio_exact, ratio_exact_equal_gap, ratio_full_multiplexing, sum_rate_upper_bound,
};
use hybeam::monte_carlo::{run, SimulationPlan, StructureChoice};
use hybeam::scenario::angles_from_kappa;
use hybeam::{ApproxVariant, ScenarioConfig, Structure, SweepMetadata, SweepResult, Threshold};

const D: f64 = 0.5;
const SUBARRAY: usize = 16;

fn or_nan(v: hybeam::Result<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn grid(step: f64, count: usize) -> impl Iterator<Item = f64> {
    (1..=count).map(move |i| i as f64 * step)
}

/// Ratio of UE 1 for `K = l_bs = 2` and `M` in {4, 8, 16, 32}.
pub fn fig2(seed: u64) -> Result<SweepResult> {
    let sizes = [4usize, 8, 16, 32];
    let mut out = SweepResult::new(
        SweepMetadata::new("fig2 d=0.5 K=2 l_bs=2 M=4,8,16,32 kappa=0.02:8", seed),
        std::iter::once("kappa".to_string()).chain(sizes.iter().map(|m| format!("ratio_M{m}"))),
    );
    for kappa in grid(0.02, 400) {
        let mut row = vec![kappa];
        row.extend(sizes.iter().map(|&m| or_nan(ratio_exact_equal_gap(m / 2, 2, 2, kappa, D, 0))));
        out.push_row(row)?;
    }
    Ok(out)
}

/// Exact ratio against the simplified approximation for `K = l_bs`.
pub fn fig3(seed: u64) -> Result<SweepResult> {
    let chains = [4usize, 8, 16, 32];
    let mut columns = vec!["kappa".to_string()];
    for l in chains {
        columns.push(format!("exact_l{l}"));
        columns.push(format!("approx_l{l}"));
    }
    let mut out = SweepResult::new(SweepMetadata::new("fig3 d=0.5 M_P=16 K=l_bs=4,8,16,32 kappa=0.01:4", seed), columns);
    for kappa in grid(0.01, 400) {
        let mut row = vec![kappa];
        for l in chains {
            row.push(or_nan(ratio_exact_equal_gap(SUBARRAY, l, l, kappa, D, 0)));
            row.push(or_nan(ratio_approx_at(ApproxVariant::Simplified, kappa, D, l, l, 0).map(|v| v.value)));
        }
        out.push_row(row)?;
    }
    Ok(out)
}

/// Full-multiplexing ratio against `eta_F`.
pub fn fig4(seed: u64) -> Result<SweepResult> {
    let chains = [8usize, 16, 128];
    let mut columns = vec!["eta_f".to_string(), "kappa".to_string()];
    for l in chains {
        columns.push(format!("exact_l{l}"));
        columns.push(format!("approx_l{l}"));
    }
    let mut out = SweepResult::new(SweepMetadata::new("fig4 d=0.5 M_P=16 K=l_bs=8,16,128 eta_f=-0.21:0.99", seed), columns);
    for i in -21..=99 {
        let eta = i as f64 / 100.0;
        let kappa = kappa_for_eta_f(eta, D)?;
        let mut row = vec![eta, kappa];
        for l in chains {
            row.push(or_nan(ratio_exact_equal_gap(SUBARRAY, l, l, kappa, D, 0)));
            row.push(ratio_full_multiplexing(eta, l));
        }
        out.push_row(row)?;
    }
    Ok(out)
}

/// Ratio against `A` for `l_bs = 16` and `K` in {8, 16}.
pub fn fig5(seed: u64) -> Result<SweepResult> {
    let l = 16;
    let loads = [8usize, 16];
    let mut columns = vec!["kappa".to_string(), "eta_f".to_string()];
    for k in loads {
        columns.extend([format!("a_K{k}"), format!("exact_K{k}"), format!("approx_K{k}")]);
    }
    let mut out = SweepResult::new(SweepMetadata::new("fig5 d=0.5 M_P=16 l_bs=16 K=8,16 kappa=0.01:4", seed), columns);
    for kappa in grid(0.01, 400) {
        let ef = eta_f(kappa, D);
        let mut row = vec![kappa, ef];
        for k in loads {
            let rho = k as f64 / l as f64;
            row.push(or_nan(a_quantity(kappa, D, rho, ef)));
            row.push(or_nan(ratio_exact_equal_gap(SUBARRAY, l, k, kappa, D, 0)));
            row.push(or_nan(ratio_approx_at(ApproxVariant::GeneralK, kappa, D, k, l, 0).map(|v| v.value)));
        }
        out.push_row(row)?;
    }
    Ok(out)
}

fn plan_text(config: &ScenarioConfig, structure: StructureChoice, n: u64) -> String {
    format!("{}structure={structure:?}\nn={n}\n", config.to_toml_string())
}

/// Monte Carlo summary per UE, next to the closed-form gains and bounds.
pub fn simulate(config: &ScenarioConfig, n: u64, seed: u64, structure: StructureChoice) -> Result<SweepResult> {
    let plan = SimulationPlan::new(config.clone(), structure, n, seed);
    let summary = run(&plan)?;
    let structures = structure.structures();

    let mut columns = vec!["ue".to_string()];
    for s in structures {
        let p = s.name();
        for c in [
            "gain",
            "gain_se",
            "closed_form",
            "trace_bound",
            "rate_bound",
            "sum_rate",
            "sum_rate_se",
            "sum_rate_bound",
            "violations",
        ] {
            columns.push(format!("{p}_{c}"));
        }
    }
    let mut out = SweepResult::new(SweepMetadata::new(&plan_text(config, structure, n), seed), columns);

    let mut per_structure = Vec::new();
    for &s in structures {
        let closed = match s {
            Structure::Full => g_full(config),
            Structure::Partial => g_partial(config),
        };
        let bound = sum_rate_upper_bound(config, s)?;
        let sim = summary.get(s).context("structure missing from summary")?;
        per_structure.push((closed, bound, sim));
    }
    for ue in 0..config.users {
        let mut row = vec![(ue + 1) as f64];
        for (closed, bound, sim) in &per_structure {
            row.extend([
                sim.scaled_gains[ue].mean,
                sim.scaled_gains[ue].std_error,
                closed[ue],
                bound.gains[ue],
                bound.rates[ue],
                sim.sum_rate.mean,
                sim.sum_rate.std_error,
                bound.total,
                sim.audit.violations() as f64,
            ]);
        }
        out.push_row(row)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Kappa,
    Spread,
}

impl SweepParam {
    fn name(self) -> &'static str {
        match self {
            SweepParam::Kappa => "kappa",
            SweepParam::Spread => "spread",
        }
    }
}

/// `from:to:step` with an inclusive end.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [from, to, step] = parts.as_slice() else {
        bail!("range must be from:to:step, got {text:?}");
    };
    let (from, to, step): (f64, f64, f64) = (from.parse()?, to.parse()?, step.parse()?);
    if step.is_nan() || step <= 0.0 || to < from {
        bail!("range needs step > 0 and to >= from, got {text:?}");
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| from + i as f64 * step).collect())
}

/// Closed-form metrics (and optionally simulated rates) over one parameter.
pub fn sweep(
    base: &ScenarioConfig,
    param: SweepParam,
    values: &[f64],
    n: u64,
    seed: u64,
    structure: StructureChoice,
) -> Result<SweepResult> {
    let structures = structure.structures();
    let mut columns: Vec<String> = [param.name(), "g_full_1", "g_partial_1", "ratio_exact_1", "ratio_approx"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for s in structures {
        columns.push(format!("{}_rate_bound", s.name()));
        if n > 0 {
            columns.push(format!("{}_sum_rate", s.name()));
            columns.push(format!("{}_sum_rate_se", s.name()));
        }
    }
    let text = format!("{}sweep={}:{:?}\n", plan_text(base, structure, n), param.name(), values);
    let mut out = SweepResult::new(SweepMetadata::new(&text, seed), columns);

    for &value in values {
        let config = match param {
            SweepParam::Kappa => ScenarioConfig {
                ue_angles: angles_from_kappa(value, base.users, base.antennas, base.ue_angles[0])
                    .with_context(|| format!("kappa = {value}"))?,
                ..base.clone()
            },
            SweepParam::Spread => base.clone().with_spread(value),
        };
        config.validate()?;
        let kappa = config.kappa();
        let mut row = vec![
            value,
            g_full(&config)[0],
            g_partial(&config)[0],
            or_nan(ratio_exact(&config).map(|r| r[0])),
            or_nan(ratio_approx_at(ApproxVariant::GeneralK, kappa, config.spacing, config.users, config.rf_chains, 0).map(|v| v.value)),
        ];
        let summary = (n > 0).then(|| run(&SimulationPlan::new(config.clone(), structure, n, seed)).ok()).flatten();
        for &s in structures {
            row.push(or_nan(sum_rate_upper_bound(&config, s).map(|b| b.total)));
            if n > 0 {
                let est = summary.as_ref().and_then(|sum| sum.get(s)).map(|st| st.sum_rate);
                row.push(est.map_or(f64::NAN, |e| e.mean));
                row.push(est.map_or(f64::NAN, |e| e.std_error));
            }
        }
        out.push_row(row)?;
    }
    out.sort();
    Ok(out)
}

fn describe(threshold: Threshold, strict: bool) -> String {
    match threshold {
        Threshold::Finite(t) => {
            let min = if strict { t.floor() + 1.0 } else { t.ceil() }.max(1.0);
            let op = if strict { ">" } else { ">=" };
            format!("l_bs {op} {t:.4} (minimum integer {min})")
        }
        Threshold::Infeasible => "no l_bs suffices".to_string(),
        Threshold::AnyLbs => "any l_bs".to_string(),
    }
}

/// Regime decision report for `K` UEs on `l_bs` RF chains at separation `kappa`.
pub fn decide(antennas: usize, l_bs: usize, users: usize, spacing: f64, kappa: f64) -> Result<String> {
    if users == 0 || l_bs == 0 || users > l_bs {
        bail!("need 1 <= K <= l_bs (K = {users}, l_bs = {l_bs})");
    }
    if !antennas.is_multiple_of(l_bs) {
        bail!("M not divisible by l_bs ({antennas} % {l_bs} != 0)");
    }
    let rho = users as f64 / l_bs as f64;
    let ef = eta_f(kappa, spacing);
    let mut text = String::new();
    writeln!(text, "kappa = {kappa}")?;
    writeln!(text, "beta = {}", kappa / antennas as f64)?;
    writeln!(text, "eta_F = {ef:.6}")?;
    writeln!(text, "eta_P = {:.6}", eta_p(kappa, spacing, l_bs))?;
    writeln!(text, "rho = {rho}")?;
    match a_quantity(kappa, spacing, rho, ef) {
        Ok(a) => writeln!(text, "A = {a:.6}")?,
        Err(_) => writeln!(text, "A = undefined (zero separation)")?,
    }
    if users == l_bs {
        let p1 = proposition1(l_bs, ef);
        writeln!(text, "proposition 1: {} ({})", p1.verdict, describe(p1.threshold, true))?;
    }
    let p2 = proposition2(l_bs, rho, kappa, spacing);
    writeln!(text, "proposition 2: {} ({})", p2.verdict, describe(p2.threshold, false))?;
    let requirement = match (users == l_bs, p2.threshold) {
        (_, Threshold::AnyLbs) => "full-connection wins for any l_bs".to_string(),
        (_, Threshold::Infeasible) => "full-connection cannot win; use partial-connection".to_string(),
        (true, _) => match proposition1(l_bs, ef).threshold {
            Threshold::Finite(t) => format!("full-connection requires l_bs >= {}", t.floor() as i64 + 1),
            _ => "full-connection cannot win; use partial-connection".to_string(),
        },
        (false, Threshold::Finite(t)) => format!("full-connection requires l_bs >= {}", t.ceil().max(1.0) as i64),
    };
    writeln!(text, "{requirement}")?;
    Ok(text)
}
