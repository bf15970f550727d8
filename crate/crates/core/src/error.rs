use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A violated scenario invariant. Each variant names the offending field.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{field} must be a positive integer")]
    ZeroCount { field: &'static str },
    #[error("{field} must be positive and finite (got {value})")]
    NonPositive { field: &'static str, value: f64 },
    #[error("M not divisible by l_bs ({m} % {l_bs} != 0)")]
    NotDivisible { m: usize, l_bs: usize },
    #[error("K ({k}) exceeds l_bs ({l_bs})")]
    TooManyUsers { k: usize, l_bs: usize },
    #[error("{field} has {len} entries, expected K = {expected}")]
    LengthMismatch { field: &'static str, len: usize, expected: usize },
    #[error("ue_angles[{index}] = {value} is not strictly inside (0, pi)")]
    AngleOutOfRange { index: usize, value: f64 },
    #[error("spreads[{index}] = {value} must be non-negative and finite")]
    NegativeSpread { index: usize, value: f64 },
    #[error("num_paths[{index}] must be at least 1")]
    ZeroPaths { index: usize },
    #[error("pathloss[{index}] = {value} must be positive and finite")]
    NonPositivePathloss { index: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    Config(#[from] ConfigError),
    #[error("cosine out of range for UE index {index}: {value}")]
    CosineOutOfRange { index: usize, value: f64 },
    #[error("effective channels are rank deficient (sigma_min / sigma_max = {ratio:e}); coinciding UE angles?")]
    RankDeficient { ratio: f64 },
    #[error("partial-connection gain of UE {ue} is {value:e}; ratio undefined")]
    ZeroPartialGain { ue: usize, value: f64 },
    #[error("undefined at zero separation")]
    ZeroSeparation,
    #[error("variant requires K = l_bs (K = {users}, l_bs = {l_bs})")]
    NotFullMultiplexing { users: usize, l_bs: usize },
    #[error("approximation requires at least two UEs")]
    TooFewUsers,
    #[error("eta_F = {0} is outside the attainable range")]
    EtaOutOfRange(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("realization {index}: {source}")]
    Realization { index: u64, source: Box<Error> },
    #[error("simulation plan needs at least one realization")]
    EmptyPlan,
    #[error("{0}")]
    Parse(String),
}
