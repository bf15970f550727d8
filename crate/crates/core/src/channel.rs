//! Uniform-linear-array steering vectors, one-ring multipath channels and
//! their spatial covariance.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::math::sinc;
use crate::scenario::ScenarioConfig;
use crate::C64;

/// Array response `b_M(theta)`, entry `m` (0-based) = `exp(-j 2 pi m d cos theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector(pub DVector<C64>);

impl SteeringVector {
    pub fn as_vector(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DVector<C64> {
        self.0
    }
}

pub fn steering_vector(antennas: usize, spacing: f64, theta: f64) -> SteeringVector {
    SteeringVector(steering_from_cosine(antennas, spacing, theta.cos()))
}

/// Steering vector parameterized directly by the direction cosine.
pub(crate) fn steering_from_cosine(antennas: usize, spacing: f64, cosine: f64) -> DVector<C64> {
    let step = -2.0 * PI * spacing * cosine;
    DVector::from_fn(antennas, |m, _| C64::from_polar(1.0, step * m as f64))
}

/// Subpaths of one UE: AOD offsets around the central angle and complex gains.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub offsets: Vec<f64>,
    pub gains: Vec<C64>,
}

impl PathSet {
    /// A single on-axis path with the given gain.
    pub fn single(gain: C64) -> Self {
        Self { offsets: vec![0.0], gains: vec![gain] }
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }
}

/// Draws `paths` subpaths with offsets uniform on `[-spread, spread]` and
/// gains `CN(0, 1/paths)`.
pub fn draw_paths<R: Rng + ?Sized>(spread: f64, paths: usize, rng: &mut R) -> PathSet {
    // two real Gaussians of variance 1/(2L) per complex gain
    let component = Normal::new(0.0, (0.5 / paths as f64).sqrt()).expect("finite std dev");
    let mut offsets = Vec::with_capacity(paths);
    let mut gains = Vec::with_capacity(paths);
    for _ in 0..paths {
        let u: f64 = rng.random();
        offsets.push(spread * (2.0 * u - 1.0));
        let re = component.sample(rng);
        let im = component.sample(rng);
        gains.push(C64::new(re, im));
    }
    PathSet { offsets, gains }
}

/// Independent random stream for one (realization, UE) pair. Streams do not
/// depend on how realizations are distributed across workers.
pub fn ue_stream(seed: u64, realization: u64, ue: usize) -> ChaCha8Rng {
    assert!(realization < 1 << 44 && ue < 1 << 20, "stream index out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((realization << 20) | ue as u64);
    rng
}

/// Draws the path sets of every UE of `config` for one realization.
pub fn draw_realization_paths(config: &ScenarioConfig, seed: u64, realization: u64) -> Vec<PathSet> {
    (0..config.users)
        .map(|ue| {
            let mut rng = ue_stream(seed, realization, ue);
            draw_paths(config.spreads[ue], config.num_paths[ue], &mut rng)
        })
        .collect()
}

/// Which channel synthesis produced a realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMode {
    /// `cos(theta + offset)` evaluated as is.
    Exact,
    /// First-order expansion `cos(theta) - sin(theta) * offset`.
    Approx,
}

/// Per-UE downlink channel vectors for one draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub mode: ChannelMode,
    pub channels: Vec<DVector<C64>>,
}

pub fn synthesize(config: &ScenarioConfig, paths: &[PathSet], mode: ChannelMode) -> ChannelRealization {
    assert_eq!(paths.len(), config.users, "one path set per UE");
    let channels = config
        .ue_angles
        .iter()
        .zip(paths)
        .zip(&config.pathloss)
        .map(|((&theta, set), &loss)| {
            let (c, s) = (theta.cos(), theta.sin());
            let mut h = DVector::<C64>::zeros(config.antennas);
            for (&offset, &gain) in set.offsets.iter().zip(&set.gains) {
                let cosine = match mode {
                    ChannelMode::Exact => (theta + offset).cos(),
                    ChannelMode::Approx => c - s * offset,
                };
                h.axpy(gain, &steering_from_cosine(config.antennas, config.spacing, cosine), C64::new(1.0, 0.0));
            }
            h / C64::new(loss.sqrt(), 0.0)
        })
        .collect();
    ChannelRealization { mode, channels }
}

pub fn synthesize_exact(config: &ScenarioConfig, paths: &[PathSet]) -> ChannelRealization {
    synthesize(config, paths, ChannelMode::Exact)
}

pub fn synthesize_approx(config: &ScenarioConfig, paths: &[PathSet]) -> ChannelRealization {
    synthesize(config, paths, ChannelMode::Approx)
}

/// Hermitian spatial covariance of the approximated one-ring steering vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(pub DMatrix<C64>);

impl CovarianceMatrix {
    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }
}

/// `E[b b^H]` for offsets uniform on `[-spread, spread]`:
/// `K(m, n) = exp(j 2 pi (n - m) d cos theta) * sinc(2 pi d (m - n) sin theta * spread)`.
pub fn covariance(antennas: usize, spacing: f64, theta: f64, spread: f64) -> CovarianceMatrix {
    let (c, s) = (theta.cos(), theta.sin());
    CovarianceMatrix(DMatrix::from_fn(antennas, antennas, |m, n| {
        let lag = n as f64 - m as f64;
        let phase = C64::from_polar(1.0, 2.0 * PI * lag * spacing * c);
        phase * sinc(-2.0 * PI * spacing * lag * s * spread)
    }))
}
