//! Analog precoders for both hybrid structures, zero-forcing digital
//! precoding on the analog-precoded effective channels, and the resulting
//! per-UE gains and sum rate.

use nalgebra::{DMatrix, DVector};

use crate::channel::{steering_vector, ChannelRealization};
use crate::error::{Error, Result};
use crate::scenario::ScenarioConfig;
use crate::C64;

/// Smallest-to-largest singular value ratio below which the effective
/// channels are treated as linearly dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Hybrid beamforming phase-shifter network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    /// Every RF chain drives every antenna.
    Full,
    /// Each RF chain drives its own subarray of `M / l_BS` antennas.
    Partial,
}

impl Structure {
    pub const BOTH: [Structure; 2] = [Structure::Full, Structure::Partial];

    pub fn name(self) -> &'static str {
        match self {
            Structure::Full => "full",
            Structure::Partial => "partial",
        }
    }
}

/// `M x K` analog precoder with unit-norm columns steered at the UEs.
///
/// The partial-connection precoder keeps only the `K` used RF chains; the
/// `l_BS - K` idle chains would be zero columns and contribute nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalogPrecoder {
    pub matrix: DMatrix<C64>,
    pub structure: Structure,
}

pub fn analog_full(config: &ScenarioConfig) -> AnalogPrecoder {
    let m = config.antennas;
    let scale = C64::new(1.0 / (m as f64).sqrt(), 0.0);
    let mut matrix = DMatrix::zeros(m, config.users);
    for (k, &theta) in config.ue_angles.iter().enumerate() {
        matrix.set_column(k, &(steering_vector(m, config.spacing, theta).into_inner() * scale));
    }
    AnalogPrecoder { matrix, structure: Structure::Full }
}

/// UE `k` is served by subarray `k` (rows `k*M_P .. (k+1)*M_P`).
pub fn analog_partial(config: &ScenarioConfig) -> AnalogPrecoder {
    let sub = config.antennas / config.rf_chains;
    let scale = C64::new(1.0 / (sub as f64).sqrt(), 0.0);
    let mut matrix = DMatrix::zeros(config.antennas, config.users);
    for (k, &theta) in config.ue_angles.iter().enumerate() {
        let b = steering_vector(sub, config.spacing, theta).into_inner() * scale;
        matrix.view_mut((k * sub, k), (sub, 1)).copy_from(&b);
    }
    AnalogPrecoder { matrix, structure: Structure::Partial }
}

pub fn analog(config: &ScenarioConfig, structure: Structure) -> AnalogPrecoder {
    match structure {
        Structure::Full => analog_full(config),
        Structure::Partial => analog_partial(config),
    }
}

/// Analog-precoded effective channels `F_a^H h_i`.
pub fn effective_channel(analog: &AnalogPrecoder, realization: &ChannelRealization) -> Result<Vec<DVector<C64>>> {
    let adjoint = analog.matrix.adjoint();
    realization
        .channels
        .iter()
        .map(|h| {
            if h.len() != analog.matrix.nrows() {
                return Err(Error::Dimension(format!(
                    "channel has {} entries, analog precoder has {} rows",
                    h.len(),
                    analog.matrix.nrows()
                )));
            }
            Ok(&adjoint * h)
        })
        .collect()
}

/// `K x K` zero-forcing precoder; column `i` is the unit-norm projection of
/// `hbar_i` onto the orthogonal complement of the other UEs' channels.
#[derive(Debug, Clone, PartialEq)]
pub struct DigitalPrecoder {
    pub matrix: DMatrix<C64>,
}

/// Orthonormal basis of the span of `vectors` by Gram-Schmidt with one
/// reorthogonalization pass. Vectors must be linearly independent.
pub(crate) fn orthonormal_basis(vectors: &[&DVector<C64>]) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = (*v).clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&w);
                w.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let norm = w.norm();
        basis.push(w.unscale(norm));
    }
    basis
}

/// Removes the component of `v` lying in the span of `basis`.
pub(crate) fn project_out(v: &DVector<C64>, basis: &[DVector<C64>]) -> DVector<C64> {
    let mut w = v.clone();
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(&w);
            w.axpy(-c, q, C64::new(1.0, 0.0));
        }
    }
    w
}

fn check_rank(hbar: &[DVector<C64>]) -> Result<()> {
    let dim = hbar[0].len();
    if hbar.iter().any(|h| h.len() != dim) {
        return Err(Error::Dimension("effective channels differ in length".into()));
    }
    if hbar.len() > dim {
        return Err(Error::RankDeficient { ratio: 0.0 });
    }
    // directions only: a weak UE is not a rank defect
    let mut normalized = DMatrix::<C64>::zeros(dim, hbar.len());
    for (i, h) in hbar.iter().enumerate() {
        let n = h.norm();
        if n.is_nan() || n <= 0.0 || !n.is_finite() {
            return Err(Error::RankDeficient { ratio: 0.0 });
        }
        normalized.set_column(i, &h.unscale(n));
    }
    let sv = normalized.singular_values();
    let ratio = sv.min() / sv.max();
    if ratio < RANK_TOLERANCE {
        return Err(Error::RankDeficient { ratio });
    }
    Ok(())
}

pub fn zf_precoder(hbar: &[DVector<C64>]) -> Result<DigitalPrecoder> {
    if hbar.is_empty() {
        return Err(Error::Dimension("no effective channels".into()));
    }
    check_rank(hbar)?;
    let users = hbar.len();
    let mut matrix = DMatrix::zeros(hbar[0].len(), users);
    for i in 0..users {
        let others: Vec<&DVector<C64>> = hbar.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h).collect();
        let basis = orthonormal_basis(&others);
        let p = project_out(&hbar[i], &basis);
        let n = p.norm();
        matrix.set_column(i, &p.unscale(n));
    }
    Ok(DigitalPrecoder { matrix })
}

/// Per-UE effective gains, power scale and sum rate of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct GainReport {
    /// `|hbar_i^H f_d,i|^2`.
    pub gains: Vec<f64>,
    /// `P_t / ||F_a F_d||_F^2`.
    pub power_scale: f64,
    /// `sum_k log2(1 + h_k p / noise_var)` in bits/s/Hz.
    pub sum_rate: f64,
}

pub fn gains_and_rate(
    analog: &AnalogPrecoder,
    digital: &DigitalPrecoder,
    hbar: &[DVector<C64>],
    config: &ScenarioConfig,
) -> Result<GainReport> {
    if digital.matrix.ncols() != hbar.len() || analog.matrix.ncols() != digital.matrix.nrows() {
        return Err(Error::Dimension(format!(
            "analog {}x{}, digital {}x{}, {} UEs",
            analog.matrix.nrows(),
            analog.matrix.ncols(),
            digital.matrix.nrows(),
            digital.matrix.ncols(),
            hbar.len()
        )));
    }
    let gains: Vec<f64> = hbar
        .iter()
        .enumerate()
        .map(|(i, h)| h.dotc(&digital.matrix.column(i)).norm_sqr())
        .collect();
    let power_scale = config.total_power / (&analog.matrix * &digital.matrix).norm_squared();
    let sum_rate = gains.iter().map(|g| (1.0 + g * power_scale / config.noise_var).log2()).sum();
    Ok(GainReport { gains, power_scale, sum_rate })
}

/// Analog precoding, zero forcing and gain evaluation in one step.
pub fn evaluate(
    config: &ScenarioConfig,
    analog: &AnalogPrecoder,
    realization: &ChannelRealization,
) -> Result<(Vec<DVector<C64>>, GainReport)> {
    let hbar = effective_channel(analog, realization)?;
    let digital = zf_precoder(&hbar)?;
    let report = gains_and_rate(analog, &digital, &hbar, config)?;
    Ok((hbar, report))
}

/// Right-hand side of the per-pair gain bound:
/// `||hbar_i||^2 - |hbar_j^H hbar_i|^2 / ||hbar_j||^2`.
pub fn pair_bound(hbar_i: &DVector<C64>, hbar_j: &DVector<C64>) -> f64 {
    hbar_i.norm_squared() - hbar_j.dotc(hbar_i).norm_sqr() / hbar_j.norm_squared()
}

/// Pair bound averaged over all `j != i`, the per-UE quantity inside the
/// sum-rate upper bound. Equals `||hbar_i||^2` for a single UE.
pub fn averaged_bound(hbar: &[DVector<C64>], i: usize) -> f64 {
    let users = hbar.len();
    if users < 2 {
        return hbar[i].norm_squared();
    }
    let penalty: f64 = (0..users)
        .filter(|&j| j != i)
        .map(|j| hbar[j].dotc(&hbar[i]).norm_sqr() / hbar[j].norm_squared())
        .sum();
    hbar[i].norm_squared() - penalty / (users - 1) as f64
}
