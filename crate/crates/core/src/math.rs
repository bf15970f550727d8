//! Scalar helpers shared by the channel and closed-form code.

/// Below this magnitude `sin(x)/x` is taken from its Taylor series.
pub const SINC_SERIES_CUTOFF: f64 = 1e-6;

/// Unnormalized sinc, `sin(x) / x`, with the removable singularity at 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_CUTOFF {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
