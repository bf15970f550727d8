//! Closed-form precoded channel gains of both hybrid structures, their
//! small-separation approximations, and the regime conditions that decide
//! which structure wins.
//!
//! Gains are the trace expressions of the zero-forcing gain upper bound
//! evaluated with rank-one (zero-spread) covariances, written in terms of
//! the Dirichlet kernel `Z_N(x) = sin(pi d N x) / sin(pi d x)`. Two UE
//! layouts are supported: the actual central angles of a scenario, and the
//! idealized layout in which every UE pair has the same cosine gap, which is
//! the layout the approximations are built on.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::channel::{covariance, steering_vector};
use crate::error::{Error, Result};
use crate::math::sinc;
use crate::precoding::{analog, zf_precoder, Structure};
use crate::scenario::ScenarioConfig;
use crate::C64;

/// Below this value a partial-connection gain makes the ratio undefined.
pub const MIN_PARTIAL_GAIN: f64 = 1e-12;

/// Approximation denominators smaller than this are flagged.
pub const ILL_CONDITIONED: f64 = 1e-9;

/// `Z_N(x) = sin(pi d N x) / sin(pi d x)`, with removable singularities
/// (`d x` an integer) taken by limit.
///
/// Writing `pi d x = w pi + t` with `w` the nearest integer gives
/// `Z_N = (-1)^{w (N-1)} sin(N t) / sin(t)`, evaluated through sinc ratios so
/// the kernel is smooth through every singular point.
pub fn dirichlet(n: usize, spacing: f64, x: f64) -> f64 {
    let phase = PI * spacing * x;
    let wraps = (phase / PI).round();
    let t = phase - wraps * PI;
    let n_f = n as f64;
    let odd = (wraps.abs() as u64 % 2 == 1) && n.is_multiple_of(2);
    let value = n_f * sinc(n_f * t) / sinc(t);
    if odd {
        -value
    } else {
        value
    }
}

/// Angular arrangement of the UEs as seen by the gain expressions.
#[derive(Debug, Clone, Copy)]
pub enum Layout<'a> {
    /// Direction cosines `cos(theta_k)` of the central angles.
    Cosines(&'a [f64]),
    /// `users` UEs whose pairwise cosine gaps all equal `beta`.
    EqualGap { users: usize, beta: f64 },
}

impl Layout<'_> {
    pub fn users(&self) -> usize {
        match self {
            Layout::Cosines(c) => c.len(),
            Layout::EqualGap { users, .. } => *users,
        }
    }

    /// Kernel argument between UEs `i` and `k` (the kernel is even).
    fn gap(&self, i: usize, k: usize) -> f64 {
        match self {
            Layout::Cosines(c) => c[i] - c[k],
            Layout::EqualGap { beta, .. } => {
                if i == k {
                    0.0
                } else {
                    *beta
                }
            }
        }
    }

    /// Cosine difference `cos(theta_k) - cos(theta_j)` driving the subarray
    /// phase progression of the partial-connection cross term.
    fn phase_gap(&self, k: usize, j: usize) -> f64 {
        match self {
            Layout::Cosines(c) => c[k] - c[j],
            Layout::EqualGap { beta, .. } => *beta,
        }
    }
}

/// Kernel matrix `Z_N(gap(i, k))`, precomputed for explicit cosines.
enum Kernel {
    Table { users: usize, z: Vec<f64> },
    Equal { diagonal: f64, off: f64 },
}

impl Kernel {
    fn new(layout: &Layout, n: usize, spacing: f64) -> Self {
        match layout {
            Layout::Cosines(_) => {
                let users = layout.users();
                let mut z = vec![0.0; users * users];
                for i in 0..users {
                    for k in 0..users {
                        z[i * users + k] = dirichlet(n, spacing, layout.gap(i, k));
                    }
                }
                Kernel::Table { users, z }
            }
            Layout::EqualGap { beta, .. } => Kernel::Equal { diagonal: n as f64, off: dirichlet(n, spacing, *beta) },
        }
    }

    #[inline]
    fn at(&self, i: usize, k: usize) -> f64 {
        match self {
            Kernel::Table { users, z } => z[i * users + k],
            Kernel::Equal { diagonal, off } => {
                if i == k {
                    *diagonal
                } else {
                    *off
                }
            }
        }
    }
}

fn full_gain(kernel: &Kernel, users: usize, n: f64, ue: usize) -> f64 {
    let own: f64 = (0..users).map(|i| kernel.at(i, ue).powi(2)).sum::<f64>() / n;
    if users < 2 {
        return own;
    }
    let leak: f64 = (0..users)
        .filter(|&j| j != ue)
        .map(|j| {
            let cross: f64 = (0..users).map(|i| kernel.at(ue, i) * kernel.at(i, j)).sum();
            let norm: f64 = (0..users).map(|i| kernel.at(i, j).powi(2)).sum();
            cross * cross / (n * norm)
        })
        .sum();
    own - leak / (users - 1) as f64
}

fn partial_gain(kernel: &Kernel, layout: &Layout, n: f64, spacing: f64, ue: usize) -> f64 {
    let users = layout.users();
    let own: f64 = (0..users).map(|i| kernel.at(i, ue).powi(2)).sum::<f64>() / n;
    if users < 2 {
        return own;
    }
    let leak: f64 = (0..users)
        .filter(|&j| j != ue)
        .map(|j| {
            let step = 2.0 * PI * spacing * n * layout.phase_gap(ue, j);
            let cross: C64 = (0..users)
                .map(|i| C64::from_polar(kernel.at(ue, i) * kernel.at(i, j), step * i as f64))
                .sum();
            let norm: f64 = (0..users).map(|i| kernel.at(i, j).powi(2)).sum();
            cross.norm_sqr() / (n * norm)
        })
        .sum();
    own - leak / (users - 1) as f64
}

/// Full-connection gain `g_F,k` of one UE.
pub fn g_full_ue(layout: &Layout, antennas: usize, spacing: f64, ue: usize) -> f64 {
    full_gain(&Kernel::new(layout, antennas, spacing), layout.users(), antennas as f64, ue)
}

/// Partial-connection gain `g_P,k` of one UE; UE `i` sits on subarray `i`.
pub fn g_partial_ue(layout: &Layout, subarray: usize, spacing: f64, ue: usize) -> f64 {
    partial_gain(&Kernel::new(layout, subarray, spacing), layout, subarray as f64, spacing, ue)
}

pub fn g_full_layout(layout: &Layout, antennas: usize, spacing: f64) -> Vec<f64> {
    let kernel = Kernel::new(layout, antennas, spacing);
    (0..layout.users()).map(|k| full_gain(&kernel, layout.users(), antennas as f64, k)).collect()
}

pub fn g_partial_layout(layout: &Layout, subarray: usize, spacing: f64) -> Vec<f64> {
    let kernel = Kernel::new(layout, subarray, spacing);
    (0..layout.users()).map(|k| partial_gain(&kernel, layout, subarray as f64, spacing, k)).collect()
}

/// `g_F,k` for every UE of `config`, from its central angles.
pub fn g_full(config: &ScenarioConfig) -> Vec<f64> {
    let c = config.cosines();
    g_full_layout(&Layout::Cosines(&c), config.antennas, config.spacing)
}

/// `g_P,k` for every UE of `config`, from its central angles.
pub fn g_partial(config: &ScenarioConfig) -> Vec<f64> {
    let c = config.cosines();
    g_partial_layout(&Layout::Cosines(&c), config.antennas / config.rf_chains, config.spacing)
}

fn checked_ratio(full: &[f64], partial: &[f64]) -> Result<Vec<f64>> {
    full.iter()
        .zip(partial)
        .enumerate()
        .map(|(ue, (&f, &p))| {
            if p.abs() < MIN_PARTIAL_GAIN {
                Err(Error::ZeroPartialGain { ue, value: p })
            } else {
                Ok(f / p)
            }
        })
        .collect()
}

/// `g_F,k / g_P,k` for every UE of `config`.
pub fn ratio_exact(config: &ScenarioConfig) -> Result<Vec<f64>> {
    checked_ratio(&g_full(config), &g_partial(config))
}

/// `g_F,k / g_P,k` of one UE in the equal-gap layout with `kappa = beta M`
/// and `M = subarray * l_bs`.
pub fn ratio_exact_equal_gap(subarray: usize, l_bs: usize, users: usize, kappa: f64, spacing: f64, ue: usize) -> Result<f64> {
    let antennas = subarray * l_bs;
    let layout = Layout::EqualGap { users, beta: kappa / antennas as f64 };
    let f = g_full_ue(&layout, antennas, spacing, ue);
    let p = g_partial_ue(&layout, subarray, spacing, ue);
    Ok(checked_ratio(&[f], &[p])?[0])
}

/// `eta_F = sin(pi d kappa) / (pi d kappa)`.
pub fn eta_f(kappa: f64, spacing: f64) -> f64 {
    sinc(PI * spacing * kappa)
}

/// `eta_P = l_bs sin(pi d kappa / l_bs) / (pi d kappa)`.
pub fn eta_p(kappa: f64, spacing: f64, l_bs: usize) -> f64 {
    sinc(PI * spacing * kappa / l_bs as f64)
}

/// Global minimum of `eta_F` over `kappa` in `(0, kappa_max]`, located by a
/// grid scan refined with golden-section search. Returns `(kappa, eta_F)`.
pub fn eta_f_minimum(spacing: f64, kappa_max: f64) -> (f64, f64) {
    const GRID: usize = 20_000;
    let step = kappa_max / GRID as f64;
    let f = |k: f64| eta_f(k, spacing);
    let best = (1..=GRID).min_by(|&a, &b| f(a as f64 * step).total_cmp(&f(b as f64 * step))).unwrap();
    let (mut lo, mut hi) = ((best - 1) as f64 * step, ((best + 1) as f64 * step).min(kappa_max));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - inv_phi * (hi - lo);
        let b = lo + inv_phi * (hi - lo);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let k = 0.5 * (lo + hi);
    (k, f(k))
}

/// Inverse of `eta_F` on its monotone branches: `kappa` in `[0, 1/d]` for
/// `eta_F >= 0`, and `kappa` in `(1/d, kappa_min]` (up to the sinc minimum)
/// for negative `eta_F`.
pub fn kappa_for_eta_f(eta: f64, spacing: f64) -> Result<f64> {
    let zero = 1.0 / spacing;
    let (k_min, eta_min) = eta_f_minimum(spacing, 2.0 / spacing);
    if !(eta_min..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    if eta == 1.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = if eta >= 0.0 { (0.0, zero) } else { (zero, k_min) };
    // eta_F is decreasing on both brackets
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eta_f(mid, spacing) > eta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which approximation of `g_F,k / g_P,k` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxVariant {
    /// Keeps `eta_P` and the exact `f_k` sum.
    General,
    /// Takes `eta_P = 1` and the closed-form `f_k`.
    Simplified,
    /// `Simplified` with `K = l_BS`, a function of `eta_F` alone.
    FullMultiplexing,
    /// `Simplified` rewritten with the loading ratio `rho = K / l_BS`.
    GeneralK,
}

/// An approximate ratio with a flag for a near-singular denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxValue {
    pub value: f64,
    pub ill_conditioned: bool,
}

/// `f_k(kappa / l_bs) = sum_{j != k} |e^{j phi k} + e^{j phi j} + eta_P sum_{i != j,k} e^{j phi i}|^2`
/// with `phi = 2 pi d kappa / l_bs` and 0-based UE indices.
pub fn f_k(kappa: f64, spacing: f64, users: usize, l_bs: usize, ue: usize) -> f64 {
    let phi = 2.0 * PI * spacing * kappa / l_bs as f64;
    let ep = eta_p(kappa, spacing, l_bs);
    let e = |i: usize| C64::from_polar(1.0, phi * i as f64);
    let total: C64 = (0..users).map(e).sum();
    (0..users)
        .filter(|&j| j != ue)
        .map(|j| {
            let rest = total - e(ue) - e(j);
            (e(ue) + e(j) + rest * ep).norm_sqr()
        })
        .sum()
}

/// Full-multiplexing ratio as a function of `eta_F`:
/// `(eta-1)^2 [(2l-3) eta^2 + 2 eta + 1] / ([1 + (l-1) eta^2] (1 - eta^2))`,
/// with `(eta-1)^2 / (1-eta^2)` cancelled to `(1-eta)/(1+eta)` so that the
/// zero-separation limit `eta = 1` evaluates to 0.
pub fn ratio_full_multiplexing(eta: f64, l_bs: usize) -> f64 {
    let l = l_bs as f64;
    (1.0 - eta) * ((2.0 * l - 3.0) * eta * eta + 2.0 * eta + 1.0) / ((1.0 + (l - 1.0) * eta * eta) * (1.0 + eta))
}

/// Numerator shared by every approximation, without the `l_bs` factor.
fn full_part(eta: f64, users: usize) -> f64 {
    let k = users as f64;
    (eta - 1.0).powi(2) * ((2.0 * k - 3.0) * eta * eta + 2.0 * eta + 1.0) / (1.0 + (k - 1.0) * eta * eta)
}

/// Approximate `g_F,k / g_P,k` at normalized separation `kappa`.
pub fn ratio_approx_at(
    variant: ApproxVariant,
    kappa: f64,
    spacing: f64,
    users: usize,
    l_bs: usize,
    ue: usize,
) -> Result<ApproxValue> {
    let ef = eta_f(kappa, spacing);
    let l = l_bs as f64;
    let k = users as f64;
    match variant {
        ApproxVariant::FullMultiplexing => {
            if users != l_bs {
                return Err(Error::NotFullMultiplexing { users, l_bs });
            }
            let denom = (1.0 + (l - 1.0) * ef * ef) * (1.0 - ef * ef);
            Ok(ApproxValue { value: ratio_full_multiplexing(ef, l_bs), ill_conditioned: denom.abs() < ILL_CONDITIONED })
        }
        _ if kappa == 0.0 => Err(Error::ZeroSeparation),
        ApproxVariant::General => {
            if users < 2 {
                return Err(Error::TooFewUsers);
            }
            let ep = eta_p(kappa, spacing, l_bs);
            let spread = 1.0 + (k - 1.0) * ep * ep;
            let bracket = spread - ep * ep / (k - 1.0) * f_k(kappa, spacing, users, l_bs, ue) / spread;
            Ok(ApproxValue { value: l * full_part(ef, users) / bracket, ill_conditioned: bracket.abs() < ILL_CONDITIONED })
        }
        ApproxVariant::Simplified => {
            let arg = PI * spacing * kappa;
            let bracket = k - l * l * (arg * k / l).sin().powi(2) / (k * arg * arg);
            Ok(ApproxValue { value: l * full_part(ef, users) / bracket, ill_conditioned: bracket.abs() < ILL_CONDITIONED })
        }
        ApproxVariant::GeneralK => {
            let rho = k / l;
            let bracket = rho * (1.0 - sinc(PI * spacing * rho * kappa).powi(2));
            Ok(ApproxValue { value: full_part(ef, users) / bracket, ill_conditioned: bracket.abs() < ILL_CONDITIONED })
        }
    }
}

/// Per-UE approximate ratio for `config`, using its adjacent-UE `kappa`.
pub fn ratio_approx(config: &ScenarioConfig, variant: ApproxVariant) -> Result<Vec<ApproxValue>> {
    let kappa = config.kappa();
    (0..config.users)
        .map(|ue| ratio_approx_at(variant, kappa, config.spacing, config.users, config.rf_chains, ue))
        .collect()
}

/// `A = rho (1 - sinc^2(pi d rho kappa)) / (1 - eta_F)^2`.
pub fn a_quantity(kappa: f64, spacing: f64, rho: f64, eta_f: f64) -> Result<f64> {
    let gap = 1.0 - eta_f;
    if gap.abs() < f64::EPSILON {
        return Err(Error::ZeroSeparation);
    }
    Ok(rho * (1.0 - sinc(PI * spacing * rho * kappa).powi(2)) / (gap * gap))
}

/// `Omega(eta_F) = (3 - A) eta_F^2 - 2 eta_F - 1 + A`.
pub fn omega(eta_f: f64, a: f64) -> f64 {
    (3.0 - a) * eta_f * eta_f - 2.0 * eta_f - 1.0 + a
}

/// Outcome of a regime decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    FullWins,
    PartialWinsOrTies,
    /// Both structures give the same gain.
    Boundary,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FullWins => "full_wins",
            Verdict::PartialWinsOrTies => "partial_wins_or_ties",
            Verdict::Boundary => "boundary",
        })
    }
}

/// RF-chain count the full-connection structure needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Full connection wins once `l_bs` clears this value.
    Finite(f64),
    /// No `l_bs` makes full connection win.
    Infeasible,
    /// Full connection wins for every `l_bs`.
    AnyLbs,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(v) => write!(f, "{v}"),
            Threshold::Infeasible => f.write_str("infeasible"),
            Threshold::AnyLbs => f.write_str("any"),
        }
    }
}

impl Threshold {
    pub fn value(&self) -> Option<f64> {
        match self {
            Threshold::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub verdict: Verdict,
    pub threshold: Threshold,
}

/// Full-multiplexing (`K = l_BS`) decision. Full connection wins iff
/// `eta_F < 1/3`, `eta_F != 0` and `l_bs > 4 (1 - eta_F) / (1 - 3 eta_F)`.
pub fn proposition1(l_bs: usize, eta_f: f64) -> Decision {
    if eta_f >= 1.0 / 3.0 {
        return Decision { verdict: Verdict::PartialWinsOrTies, threshold: Threshold::Infeasible };
    }
    let th = 4.0 * (1.0 - eta_f) / (1.0 - 3.0 * eta_f);
    let verdict = if eta_f == 0.0 {
        Verdict::Boundary
    } else if l_bs as f64 > th {
        Verdict::FullWins
    } else {
        Verdict::PartialWinsOrTies
    };
    Decision { verdict, threshold: Threshold::Finite(th) }
}

/// `l_bs^th = Omega(eta_F) / (eta_F^2 rho (2 - A))` when `A < 2`.
pub fn l_bs_threshold(eta_f: f64, a: f64, rho: f64) -> Threshold {
    if a < 2.0 {
        Threshold::Finite(omega(eta_f, a) / (eta_f * eta_f * rho * (2.0 - a)))
    } else {
        Threshold::Infeasible
    }
}

/// Tolerance on `kappa d` being a positive integer.
const INTEGER_TOL: f64 = 1e-9;

/// Decision for arbitrary loading `rho = K / l_BS`.
pub fn proposition2(l_bs: usize, rho: f64, kappa: f64, spacing: f64) -> Decision {
    let kd = (kappa * spacing).abs();
    if kd.round() >= 1.0 && (kd - kd.round()).abs() < INTEGER_TOL {
        return Decision { verdict: Verdict::FullWins, threshold: Threshold::AnyLbs };
    }
    let ef = eta_f(kappa, spacing);
    let Ok(a) = a_quantity(kappa, spacing, rho, ef) else {
        // zero separation: partial-connection gain dominates
        return Decision { verdict: Verdict::PartialWinsOrTies, threshold: Threshold::Infeasible };
    };
    let threshold = l_bs_threshold(ef, a, rho);
    let verdict = match threshold {
        Threshold::Finite(th) if l_bs as f64 >= th => Verdict::FullWins,
        _ => Verdict::PartialWinsOrTies,
    };
    Decision { verdict, threshold }
}

/// Sum-rate upper bound of one structure built from the full one-ring
/// covariances (valid for any spread).
#[derive(Debug, Clone, PartialEq)]
pub struct UpperBoundReport {
    pub structure: Structure,
    /// Trace-form gains `g_k`.
    pub gains: Vec<f64>,
    /// `log2(1 + g_k p / (alpha_k noise_var))` per UE.
    pub rates: Vec<f64>,
    pub total: f64,
    /// Power scale of the zero-forcing precoder built on the central-angle
    /// steering vectors.
    pub power_scale: f64,
}

/// `tr(F^H K_k F)` and `tr(F^H K_k F F^H K_j F)` for every UE pair.
pub(crate) fn trace_terms(config: &ScenarioConfig, f: &DMatrix<C64>) -> (Vec<f64>, DMatrix<f64>) {
    let projected: Vec<DMatrix<C64>> = (0..config.users)
        .map(|k| {
            let cov = covariance(config.antennas, config.spacing, config.ue_angles[k], config.spreads[k]);
            f.adjoint() * cov.as_matrix() * f
        })
        .collect();
    let single = projected.iter().map(|a| a.trace().re).collect();
    let pair = DMatrix::from_fn(config.users, config.users, |k, j| (&projected[k] * &projected[j]).trace().re);
    (single, pair)
}

/// Trace-form gain `g_k` from single and pair traces.
pub(crate) fn trace_gains(single: &[f64], pair: &DMatrix<f64>) -> Vec<f64> {
    let users = single.len();
    (0..users)
        .map(|k| {
            if users < 2 {
                return single[k];
            }
            let leak: f64 = (0..users).filter(|&j| j != k).map(|j| pair[(k, j)] / single[j]).sum();
            single[k] - leak / (users - 1) as f64
        })
        .collect()
}

pub fn sum_rate_upper_bound(config: &ScenarioConfig, structure: Structure) -> Result<UpperBoundReport> {
    config.validate()?;
    let fa = analog(config, structure);
    let (single, pair) = trace_terms(config, &fa.matrix);
    let gains = trace_gains(&single, &pair);

    let hbar: Vec<DVector<C64>> = config
        .ue_angles
        .iter()
        .zip(&config.pathloss)
        .map(|(&theta, &loss)| fa.matrix.adjoint() * steering_vector(config.antennas, config.spacing, theta).0 / C64::new(loss.sqrt(), 0.0))
        .collect();
    let fd = zf_precoder(&hbar)?;
    let power_scale = config.total_power / (&fa.matrix * &fd.matrix).norm_squared();

    let rates: Vec<f64> = gains
        .iter()
        .zip(&config.pathloss)
        .map(|(g, loss)| (1.0 + g * power_scale / (loss * config.noise_var)).log2())
        .collect();
    let total = rates.iter().sum();
    Ok(UpperBoundReport { structure, gains, rates, total, power_scale })
}

/// Closed-form summary of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormReport {
    pub g_full: Vec<f64>,
    pub g_partial: Vec<f64>,
    pub ratio_exact: Vec<f64>,
    pub kappa: f64,
    pub rho: f64,
    pub eta_f: f64,
    pub eta_p: f64,
    /// `None` at zero separation.
    pub a: Option<f64>,
    /// Loading-ratio approximation; `None` at zero separation.
    pub ratio_approx: Option<f64>,
    /// Only evaluated in full multiplexing.
    pub proposition1: Option<Decision>,
    pub proposition2: Decision,
}

impl ClosedFormReport {
    pub fn evaluate(config: &ScenarioConfig) -> Result<Self> {
        let derived = config.validate()?;
        let g_full = g_full(config);
        let g_partial = g_partial(config);
        let ratio_exact = checked_ratio(&g_full, &g_partial)?;
        let kappa = config.kappa();
        let ef = eta_f(kappa, config.spacing);
        let a = a_quantity(kappa, config.spacing, derived.loading, ef).ok();
        let ratio_approx = ratio_approx_at(ApproxVariant::GeneralK, kappa, config.spacing, config.users, config.rf_chains, 0)
            .ok()
            .map(|v| v.value);
        Ok(Self {
            g_full,
            g_partial,
            ratio_exact,
            kappa,
            rho: derived.loading,
            eta_f: ef,
            eta_p: eta_p(kappa, config.spacing, config.rf_chains),
            a,
            ratio_approx,
            proposition1: (config.users == config.rf_chains).then(|| proposition1(config.rf_chains, ef)),
            proposition2: proposition2(config.rf_chains, derived.loading, kappa, config.spacing),
        })
    }

    pub fn prop1_ok(&self) -> bool {
        self.proposition1.is_some_and(|d| d.verdict == Verdict::FullWins)
    }

    pub fn prop2_ok(&self) -> bool {
        self.proposition2.verdict == Verdict::FullWins
    }

    pub fn l_bs_threshold(&self) -> Threshold {
        self.proposition2.threshold
    }
}
