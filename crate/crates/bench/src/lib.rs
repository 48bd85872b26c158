//! Shared fixtures for the benchmarks.

use jetsplit::JetPoint;

/// Sample states spread over `|x| ≤ 1, |u| ≤ 0.4, |p| ≤ 1`.
pub fn states(count: usize) -> Vec<JetPoint> {
    (0..count)
        .map(|k| {
            let s = k as f64 / count as f64;
            JetPoint::scalar(
                (7.0 * s).sin(),
                0.4 * (3.0 * s).cos(),
                (5.0 * s + 1.0).sin(),
            )
        })
        .collect()
}
