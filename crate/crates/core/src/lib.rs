//! Full-connection versus partial-connection hybrid beamforming for
//! multiuser massive MIMO downlinks.
//!
//! The crate evaluates the trace-based precoded channel gains of both
//! analog structures, their closed-form approximations and regime
//! conditions, and cross-checks everything with a seeded Monte Carlo
//! simulator that runs zero-forcing digital precoding on random
//! one-ring channels.
//!
//! Modules follow the processing chain:
//!
//! - [`scenario`]: experiment description and validation
//! - [`channel`]: steering vectors, one-ring channels, covariances
//! - [`precoding`]: analog precoders, zero-forcing, gains and sum rate
//! - [`closed_form`]: Dirichlet-kernel gains, approximations, regime decisions
//! - [`monte_carlo`]: end-to-end random-channel ground truth
//! - [`report`]: tabular sweep results and CSV output

pub mod channel;
pub mod closed_form;
pub mod error;
pub mod math;
pub mod monte_carlo;
pub mod precoding;
pub mod report;
pub mod scenario;

pub use channel::{ChannelMode, ChannelRealization, CovarianceMatrix, PathSet, SteeringVector};
pub use closed_form::{ApproxVariant, ClosedFormReport, Decision, Layout, Threshold, UpperBoundReport, Verdict};
pub use error::{ConfigError, Error, Result};
pub use monte_carlo::{SimulationPlan, SimulationSummary, StructureChoice};
pub use precoding::{AnalogPrecoder, DigitalPrecoder, GainReport, Structure};
pub use report::{SweepMetadata, SweepResult};
pub use scenario::{DerivedScenario, ScenarioConfig};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
