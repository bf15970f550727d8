//! Random-channel simulation: one-ring channel draws, analog precoding,
//! zero forcing, per-UE gains and sum rate, with per-realization audits of
//! the gain and rate upper bounds.
//!
//! Realizations are processed in fixed-size chunks on the rayon pool and the
//! chunk statistics are merged in chunk order, so a summary depends only on
//! the plan and never on the number of worker threads.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{draw_realization_paths, synthesize, ChannelMode};
use crate::error::{Error, Result};
use crate::precoding::{analog, averaged_bound, evaluate, pair_bound, AnalogPrecoder, Structure};
use crate::scenario::ScenarioConfig;
use crate::C64;

/// Realizations per parallel work item.
const CHUNK: u64 = 512;

/// Relative slack allowed on the analytic bounds.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureChoice {
    Full,
    Partial,
    Both,
}

impl StructureChoice {
    pub fn structures(self) -> &'static [Structure] {
        match self {
            StructureChoice::Full => &[Structure::Full],
            StructureChoice::Partial => &[Structure::Partial],
            StructureChoice::Both => &Structure::BOTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub config: ScenarioConfig,
    pub structure: StructureChoice,
    pub n_realizations: u64,
    pub seed: u64,
    pub channel_mode: ChannelMode,
}

impl SimulationPlan {
    pub fn new(config: ScenarioConfig, structure: StructureChoice, n_realizations: u64, seed: u64) -> Self {
        Self { config, structure, n_realizations, seed, channel_mode: ChannelMode::Exact }
    }

    pub fn with_mode(mut self, channel_mode: ChannelMode) -> Self {
        self.channel_mode = channel_mode;
        self
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Running first and second moments.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moment {
    sum: f64,
    sum_sq: f64,
}

impl Moment {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moment) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    fn estimate(&self, n: u64) -> Estimate {
        let nf = n as f64;
        let mean = self.sum / nf;
        if n < 2 {
            return Estimate { mean, std_error: 0.0 };
        }
        let var = ((self.sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        Estimate { mean, std_error: (var / nf).sqrt() }
    }
}

/// Per-realization checks of the gain and rate upper bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundAudit {
    /// Number of `(i, j)` pair checks performed.
    pub pair_checks: u64,
    /// Pairs where `h_i` exceeded the pair bound beyond the slack.
    pub pair_violations: u64,
    /// Largest `(h_i - bound) / ||hbar_i||^2` seen (negative when all hold).
    pub max_pair_violation: f64,
    /// Largest `|h_i - bound| / ||hbar_i||^2`; only tracked for two UEs,
    /// where the bound is tight.
    pub max_tight_gap: f64,
    pub rate_violations: u64,
    /// Largest `(R_sum - bound) / bound` seen.
    pub max_rate_violation: f64,
}

impl BoundAudit {
    fn empty() -> Self {
        Self { max_pair_violation: f64::NEG_INFINITY, max_rate_violation: f64::NEG_INFINITY, ..Self::default() }
    }

    fn merge(&mut self, other: &BoundAudit) {
        self.pair_checks += other.pair_checks;
        self.pair_violations += other.pair_violations;
        self.max_pair_violation = self.max_pair_violation.max(other.max_pair_violation);
        self.max_tight_gap = self.max_tight_gap.max(other.max_tight_gap);
        self.rate_violations += other.rate_violations;
        self.max_rate_violation = self.max_rate_violation.max(other.max_rate_violation);
    }

    pub fn violations(&self) -> u64 {
        self.pair_violations + self.rate_violations
    }
}

/// Statistics of one analog structure.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureSummary {
    pub structure: Structure,
    /// `E[h_k]`.
    pub gains: Vec<Estimate>,
    /// `E[alpha_k h_k]`, comparable with the closed-form gains.
    pub scaled_gains: Vec<Estimate>,
    pub sum_rate: Estimate,
    /// `E[||hbar_k||^2]`.
    pub norm_sq: Vec<Estimate>,
    /// `cross[j][k] = E[|hbar_j^H hbar_k|^2]`.
    pub cross: Vec<Vec<Estimate>>,
    /// `projected_cross[j][k] = E[|hbar_j^H hbar_k|^2 / ||hbar_j||^2]`.
    pub projected_cross: Vec<Vec<Estimate>>,
    pub audit: BoundAudit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub n_realizations: u64,
    pub seed: u64,
    pub structures: Vec<StructureSummary>,
}

impl SimulationSummary {
    pub fn get(&self, structure: Structure) -> Option<&StructureSummary> {
        self.structures.iter().find(|s| s.structure == structure)
    }

    pub fn violations(&self) -> u64 {
        self.structures.iter().map(|s| s.audit.violations()).sum()
    }
}

#[derive(Debug, Clone)]
struct Accumulator {
    gains: Vec<Moment>,
    scaled: Vec<Moment>,
    rate: Moment,
    norm: Vec<Moment>,
    cross: Vec<Moment>,
    projected: Vec<Moment>,
    audit: BoundAudit,
}

impl Accumulator {
    fn new(users: usize) -> Self {
        Self {
            gains: vec![Moment::default(); users],
            scaled: vec![Moment::default(); users],
            rate: Moment::default(),
            norm: vec![Moment::default(); users],
            cross: vec![Moment::default(); users * users],
            projected: vec![Moment::default(); users * users],
            audit: BoundAudit::empty(),
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        let pairs = [
            (&mut self.gains, &other.gains),
            (&mut self.scaled, &other.scaled),
            (&mut self.norm, &other.norm),
            (&mut self.cross, &other.cross),
            (&mut self.projected, &other.projected),
        ];
        for (mine, theirs) in pairs {
            mine.iter_mut().zip(theirs).for_each(|(a, b)| a.merge(b));
        }
        self.rate.merge(&other.rate);
        self.audit.merge(&other.audit);
    }

    fn record(&mut self, config: &ScenarioConfig, hbar: &[DVector<C64>], gains: &[f64], power_scale: f64, sum_rate: f64) {
        let users = hbar.len();
        for k in 0..users {
            self.gains[k].push(gains[k]);
            self.scaled[k].push(gains[k] * config.pathloss[k]);
            let norm_k = hbar[k].norm_squared();
            self.norm[k].push(norm_k);
            for j in 0..users {
                let c = hbar[j].dotc(&hbar[k]).norm_sqr();
                self.cross[j * users + k].push(c);
                self.projected[j * users + k].push(c / hbar[j].norm_squared());
                if j != k {
                    let bound = pair_bound(&hbar[k], &hbar[j]);
                    let excess = (gains[k] - bound) / norm_k;
                    self.audit.pair_checks += 1;
                    if excess > BOUND_SLACK {
                        self.audit.pair_violations += 1;
                    }
                    self.audit.max_pair_violation = self.audit.max_pair_violation.max(excess);
                    if users == 2 {
                        self.audit.max_tight_gap = self.audit.max_tight_gap.max(excess.abs());
                    }
                }
            }
        }
        self.rate.push(sum_rate);
        let bound: f64 =
            (0..users).map(|k| (1.0 + averaged_bound(hbar, k) * power_scale / config.noise_var).log2()).sum();
        let excess = (sum_rate - bound) / bound.max(f64::MIN_POSITIVE);
        if excess > BOUND_SLACK {
            self.audit.rate_violations += 1;
        }
        self.audit.max_rate_violation = self.audit.max_rate_violation.max(excess);
    }

    fn summarize(&self, structure: Structure, n: u64, users: usize) -> StructureSummary {
        let matrix = |m: &[Moment]| (0..users).map(|j| (0..users).map(|k| m[j * users + k].estimate(n)).collect()).collect();
        StructureSummary {
            structure,
            gains: self.gains.iter().map(|m| m.estimate(n)).collect(),
            scaled_gains: self.scaled.iter().map(|m| m.estimate(n)).collect(),
            sum_rate: self.rate.estimate(n),
            norm_sq: self.norm.iter().map(|m| m.estimate(n)).collect(),
            cross: matrix(&self.cross),
            projected_cross: matrix(&self.projected),
            audit: self.audit,
        }
    }
}

fn run_chunk(plan: &SimulationPlan, precoders: &[AnalogPrecoder], chunk: u64) -> Result<Vec<Accumulator>> {
    let users = plan.config.users;
    let mut accs = vec![Accumulator::new(users); precoders.len()];
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(plan.n_realizations);
    for index in start..end {
        let paths = draw_realization_paths(&plan.config, plan.seed, index);
        let realization = synthesize(&plan.config, &paths, plan.channel_mode);
        for (acc, fa) in accs.iter_mut().zip(precoders) {
            let (hbar, report) = evaluate(&plan.config, fa, &realization)
                .map_err(|e| Error::Realization { index, source: Box::new(e) })?;
            acc.record(&plan.config, &hbar, &report.gains, report.power_scale, report.sum_rate);
        }
    }
    Ok(accs)
}

/// Simulates `plan` on the current rayon pool.
pub fn run(plan: &SimulationPlan) -> Result<SimulationSummary> {
    plan.config.validate()?;
    if plan.n_realizations == 0 {
        return Err(Error::EmptyPlan);
    }
    let structures = plan.structure.structures();
    let precoders: Vec<AnalogPrecoder> = structures.iter().map(|&s| analog(&plan.config, s)).collect();
    let chunks = plan.n_realizations.div_ceil(CHUNK);
    let partials: Vec<Result<Vec<Accumulator>>> =
        (0..chunks).into_par_iter().map(|c| run_chunk(plan, &precoders, c)).collect();

    let users = plan.config.users;
    let mut totals = vec![Accumulator::new(users); precoders.len()];
    for part in partials {
        for (total, acc) in totals.iter_mut().zip(part?) {
            total.merge(&acc);
        }
    }
    Ok(SimulationSummary {
        n_realizations: plan.n_realizations,
        seed: plan.seed,
        structures: structures
            .iter()
            .zip(&totals)
            .map(|(&s, acc)| acc.summarize(s, plan.n_realizations, users))
            .collect(),
    })
}

/// Simulates `plan` on a dedicated pool of `workers` threads.
pub fn run_with_workers(plan: &SimulationPlan, workers: usize) -> Result<SimulationSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Dimension(format!("thread pool: {e}")))?;
    pool.install(|| run(plan))
}

/// Bound checks of every realization of `plan`, per structure.
pub fn bound_audit(plan: &SimulationPlan) -> Result<Vec<(Structure, BoundAudit)>> {
    Ok(run(plan)?.structures.into_iter().map(|s| (s.structure, s.audit)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{g_full, g_partial};
    use crate::scenario::broadside_angles;

    fn two_user(n: u64) -> SimulationPlan {
        let config = ScenarioConfig::new(32, 2, broadside_angles(3.0, 2, 32).unwrap());
        SimulationPlan::new(config, StructureChoice::Both, n, 11)
    }

    #[test]
    fn moments() {
        let mut m = Moment::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            m.push(x);
        }
        let e = m.estimate(4);
        assert_eq!(e.mean, 2.5);
        assert!((e.std_error - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
        assert_eq!(Moment { sum: 3.0, sum_sq: 9.0 }.estimate(1).std_error, 0.0);
    }

    #[test]
    fn single_ue_gain_is_array_size() {
        let config = ScenarioConfig::new(16, 2, vec![1.0]);
        let plan = SimulationPlan::new(config, StructureChoice::Full, 20_000, 3);
        let s = run(&plan).unwrap();
        let g = s.get(Structure::Full).unwrap().scaled_gains[0];
        assert!((g.mean - 16.0).abs() < 0.01 * 16.0, "{g:?}");
        assert!(s.get(Structure::Partial).is_none());
    }

    #[test]
    fn two_users_match_closed_forms() {
        let plan = two_user(20_000);
        let s = run(&plan).unwrap();
        let gf = g_full(&plan.config);
        let gp = g_partial(&plan.config);
        for k in 0..2 {
            let f = s.get(Structure::Full).unwrap().scaled_gains[k];
            let p = s.get(Structure::Partial).unwrap().scaled_gains[k];
            assert!((f.mean - gf[k]).abs() < 4.0 * f.std_error + 1e-9, "{f:?} vs {}", gf[k]);
            assert!((p.mean - gp[k]).abs() < 4.0 * p.std_error + 1e-9, "{p:?} vs {}", gp[k]);
        }
        for st in &s.structures {
            assert_eq!(st.audit.violations(), 0);
            assert!(st.audit.max_tight_gap < 1e-9);
            assert_eq!(st.audit.pair_checks, 2 * 20_000);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut plan = two_user(3_000);
        plan.config = plan.config.with_spread(0.02).with_paths(4);
        let one = run_with_workers(&plan, 1).unwrap();
        let eight = run_with_workers(&plan, 8).unwrap();
        assert_eq!(one, eight);
        assert_eq!(one, run(&plan).unwrap());
    }

    #[test]
    fn standard_error_shrinks_with_n() {
        let mut plan = two_user(4_000);
        plan.config = plan.config.with_spread(0.02).with_paths(3);
        let small = run(&plan).unwrap();
        plan.n_realizations = 16_000;
        let large = run(&plan).unwrap();
        let a = small.structures[0].scaled_gains[0].std_error;
        let b = large.structures[0].scaled_gains[0].std_error;
        assert!((a / b - 2.0).abs() < 0.15, "{a} {b}");
    }

    #[test]
    fn coincident_angles_report_the_realization() {
        let config = ScenarioConfig::new(16, 2, vec![1.0, 1.0]);
        let plan = SimulationPlan::new(config, StructureChoice::Full, 10, 0);
        match run(&plan) {
            Err(Error::Realization { index, source }) => {
                assert_eq!(index, 0);
                assert!(matches!(*source, Error::RankDeficient { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_and_invalid_plans() {
        let mut plan = two_user(1);
        plan.n_realizations = 0;
        assert_eq!(run(&plan), Err(Error::EmptyPlan));
        plan.n_realizations = 1;
        plan.config.rf_chains = 3;
        assert!(matches!(run(&plan), Err(Error::Config(_))));
    }

    #[test]
    fn audit_covers_larger_groups() {
        let config = ScenarioConfig::new(32, 4, vec![0.9, 1.3, 1.7, 2.2]).with_spread(0.02).with_paths(5);
        let plan = SimulationPlan::new(config, StructureChoice::Both, 1_000, 5);
        for (_, audit) in bound_audit(&plan).unwrap() {
            assert_eq!(audit.violations(), 0);
            assert_eq!(audit.pair_checks, 12 * 1_000);
            assert!(audit.max_pair_violation <= BOUND_SLACK);
        }
    }
}
