//! Experiment configuration: array, RF chains, UE geometry, power and noise.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Error, Result};

/// Antenna spacing used by every figure, in wavelengths.
pub const DEFAULT_SPACING: f64 = 0.5;

/// Full description of one downlink scenario.
///
/// Angles are central angles of departure in radians, measured from the
/// array axis. `spreads`, `num_paths` and `pathloss` are per UE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Antenna count `M`.
    #[serde(rename = "m")]
    pub antennas: usize,
    /// RF-chain count `l_BS`.
    #[serde(rename = "l_bs")]
    pub rf_chains: usize,
    /// Scheduled-UE count `K`.
    #[serde(rename = "k")]
    pub users: usize,
    /// Antenna spacing in wavelengths.
    #[serde(rename = "d")]
    pub spacing: f64,
    /// Total transmit power (linear).
    #[serde(rename = "p_t")]
    pub total_power: f64,
    /// Noise variance (linear).
    pub noise_var: f64,
    pub ue_angles: Vec<f64>,
    /// Half-width of the uniform AOD offset distribution per UE.
    pub spreads: Vec<f64>,
    pub num_paths: Vec<usize>,
    /// Large-scale loss per UE (channel is scaled by `1/sqrt(loss)`).
    pub pathloss: Vec<f64>,
}

/// Quantities that follow from a valid [`ScenarioConfig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScenario {
    /// Antennas per subarray, `M / l_BS`.
    pub subarray_size: usize,
    /// Loading ratio `K / l_BS`.
    pub loading: f64,
}

impl ScenarioConfig {
    /// Scenario with one on-axis path per UE, no spread, unit pathloss, unit
    /// power and noise, and half-wavelength spacing. `K` is taken from the
    /// angle list.
    pub fn new(antennas: usize, rf_chains: usize, ue_angles: Vec<f64>) -> Self {
        let users = ue_angles.len();
        Self {
            antennas,
            rf_chains,
            users,
            spacing: DEFAULT_SPACING,
            total_power: 1.0,
            noise_var: 1.0,
            ue_angles,
            spreads: vec![0.0; users],
            num_paths: vec![1; users],
            pathloss: vec![1.0; users],
        }
    }

    pub fn with_spacing(mut self, spacing: f64) -> Self {
        self.spacing = spacing;
        self
    }

    /// Same angular spread for every UE.
    pub fn with_spread(mut self, spread: f64) -> Self {
        self.spreads = vec![spread; self.users];
        self
    }

    /// Same path count for every UE.
    pub fn with_paths(mut self, paths: usize) -> Self {
        self.num_paths = vec![paths; self.users];
        self
    }

    pub fn with_pathloss(mut self, pathloss: Vec<f64>) -> Self {
        self.pathloss = pathloss;
        self
    }

    pub fn with_power(mut self, total_power: f64, noise_var: f64) -> Self {
        self.total_power = total_power;
        self.noise_var = noise_var;
        self
    }

    /// Checks every invariant and returns the derived quantities.
    pub fn validate(&self) -> Result<DerivedScenario, ConfigError> {
        let positive = |field, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::NonPositive { field, value })
            }
        };
        if self.antennas == 0 {
            return Err(ConfigError::ZeroCount { field: "m" });
        }
        if self.rf_chains == 0 {
            return Err(ConfigError::ZeroCount { field: "l_bs" });
        }
        if self.users == 0 {
            return Err(ConfigError::ZeroCount { field: "k" });
        }
        positive("d", self.spacing)?;
        positive("p_t", self.total_power)?;
        positive("noise_var", self.noise_var)?;
        if !self.antennas.is_multiple_of(self.rf_chains) {
            return Err(ConfigError::NotDivisible { m: self.antennas, l_bs: self.rf_chains });
        }
        if self.users > self.rf_chains {
            return Err(ConfigError::TooManyUsers { k: self.users, l_bs: self.rf_chains });
        }
        for (field, len) in [
            ("ue_angles", self.ue_angles.len()),
            ("spreads", self.spreads.len()),
            ("num_paths", self.num_paths.len()),
            ("pathloss", self.pathloss.len()),
        ] {
            if len != self.users {
                return Err(ConfigError::LengthMismatch { field, len, expected: self.users });
            }
        }
        for (index, &value) in self.ue_angles.iter().enumerate() {
            // sin(theta) must not vanish
            if !(value > 0.0 && value < std::f64::consts::PI) || value.sin() <= 0.0 {
                return Err(ConfigError::AngleOutOfRange { index, value });
            }
        }
        for (index, &value) in self.spreads.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(ConfigError::NegativeSpread { index, value });
            }
        }
        if let Some(index) = self.num_paths.iter().position(|&l| l == 0) {
            return Err(ConfigError::ZeroPaths { index });
        }
        for (index, &value) in self.pathloss.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConfigError::NonPositivePathloss { index, value });
            }
        }
        Ok(DerivedScenario {
            subarray_size: self.antennas / self.rf_chains,
            loading: self.users as f64 / self.rf_chains as f64,
        })
    }

    pub fn cosines(&self) -> Vec<f64> {
        self.ue_angles.iter().map(|t| t.cos()).collect()
    }

    /// Normalized adjacent separation `kappa = beta * M`, with `beta` the
    /// mean absolute cosine gap between consecutive UEs. Zero for one UE.
    pub fn kappa(&self) -> f64 {
        if self.users < 2 {
            return 0.0;
        }
        let c = self.cosines();
        let total: f64 = c.windows(2).map(|w| (w[0] - w[1]).abs()).sum();
        total / (self.users - 1) as f64 * self.antennas as f64
    }
}

/// Places `users` central angles with a constant cosine gap `kappa / antennas`,
/// starting at `theta_ref`: `cos(theta_k) = cos(theta_ref) - k * kappa / M`.
pub fn angles_from_kappa(kappa: f64, users: usize, antennas: usize, theta_ref: f64) -> Result<Vec<f64>> {
    let base = theta_ref.cos();
    let step = kappa / antennas as f64;
    (0..users)
        .map(|k| {
            if k == 0 {
                return Ok(theta_ref);
            }
            let c = base - k as f64 * step;
            if !(-1.0..=1.0).contains(&c) {
                return Err(Error::CosineOutOfRange { index: k, value: c });
            }
            Ok(c.acos())
        })
        .collect()
}

/// `angles_from_kappa` anchored at broadside.
pub fn broadside_angles(kappa: f64, users: usize, antennas: usize) -> Result<Vec<f64>> {
    angles_from_kappa(kappa, users, antennas, FRAC_PI_2)
}

/// On-disk scenario description. Keys mirror [`ScenarioConfig`]; the angle
/// list can instead be generated from `kappa` (and optional `theta_ref`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    m: usize,
    l_bs: usize,
    k: usize,
    #[serde(default = "default_spacing")]
    d: f64,
    #[serde(default = "one")]
    p_t: f64,
    #[serde(default = "one")]
    noise_var: f64,
    ue_angles: Option<Vec<f64>>,
    kappa: Option<f64>,
    theta_ref: Option<f64>,
    spreads: Option<Vec<f64>>,
    num_paths: Option<Vec<usize>>,
    pathloss: Option<Vec<f64>>,
}

fn default_spacing() -> f64 {
    DEFAULT_SPACING
}

fn one() -> f64 {
    1.0
}

impl ScenarioConfig {
    /// Parses a TOML scenario description. Missing per-UE lists default to
    /// zero spread, one path and unit pathloss. The result is not validated.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let ue_angles = match (file.ue_angles, file.kappa) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either ue_angles or kappa, not both".into())),
            (Some(a), None) => a,
            (None, Some(kappa)) => angles_from_kappa(kappa, file.k, file.m, file.theta_ref.unwrap_or(FRAC_PI_2))?,
            (None, None) => return Err(Error::Parse("missing ue_angles (or kappa)".into())),
        };
        Ok(Self {
            antennas: file.m,
            rf_chains: file.l_bs,
            users: file.k,
            spacing: file.d,
            total_power: file.p_t,
            noise_var: file.noise_var,
            ue_angles,
            spreads: file.spreads.unwrap_or_else(|| vec![0.0; file.k]),
            num_paths: file.num_paths.unwrap_or_else(|| vec![1; file.k]),
            pathloss: file.pathloss.unwrap_or_else(|| vec![1.0; file.k]),
        })
    }

    /// Canonical TOML rendering, used for hashing and round trips.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }
}
