//! Classification of a single triangle as ultrametric-respecting.
//!
//! A triangle counts as ultrametric when its smallest angle is at most 60°
//! (largest cosine in `[0.5, 1)`) and its two other angles differ by less
//! than a small tolerance: an isosceles triangle with a small base, or an
//! equilateral one.

use crate::error::{Error, Result};

/// Sides at or below this are treated as zero.
pub const DEFAULT_EPSILON: f64 = 1.0e-10;
/// Two degrees, as the constant used by the reference procedure.
pub const DEFAULT_ANGLE_TOLERANCE_RAD: f64 = 0.03490656;
pub const DEFAULT_SAMPLE_SIZE: usize = 2000;
pub const DEFAULT_REPETITIONS: usize = 20;
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 3000;

/// Cosines this far outside `[-1, 1]` are rounding noise and get clamped.
pub const COSINE_SLACK: f64 = 1e-12;

/// Triangle test parameters and the sampling protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleConfig {
    pub epsilon: f64,
    pub angle_tolerance_rad: f64,
    /// Triangles drawn per repetition.
    pub sample_size: usize,
    pub repetitions: usize,
    pub seed: u64,
    /// Largest point count accepted by exhaustive enumeration.
    pub exhaustive_cap: usize,
}

impl Default for TriangleConfig {
    fn default() -> Self {
        TriangleConfig {
            epsilon: DEFAULT_EPSILON,
            angle_tolerance_rad: DEFAULT_ANGLE_TOLERANCE_RAD,
            sample_size: DEFAULT_SAMPLE_SIZE,
            repetitions: DEFAULT_REPETITIONS,
            seed: 0,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

impl TriangleConfig {
    pub fn with_seed(seed: u64) -> Self {
        TriangleConfig { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.epsilon) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !positive(self.angle_tolerance_rad) {
            return Err(Error::InvalidParameter(format!(
                "angle tolerance must be positive, got {}",
                self.angle_tolerance_rad
            )));
        }
        if self.sample_size == 0 || self.repetitions == 0 {
            return Err(Error::InvalidParameter("sample size and repetitions must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleStatus {
    Ultrametric,
    NonUltrametric,
    /// A side at or below epsilon, or collinear vertices.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleVerdict {
    pub status: TriangleStatus,
    /// Sorted cosines `c1 <= c2 <= c3`; `None` when a side was too short.
    pub cosines: Option<[f64; 3]>,
    /// `|arccos c1 - arccos c2|`, set when the smallest angle is at most 60°.
    pub base_angle_gap_rad: Option<f64>,
    /// Some cosine fell outside `[-1, 1]` by more than rounding: the sides
    /// break the triangle inequality.
    pub metric_violation: bool,
}

impl TriangleVerdict {
    pub fn is_ultrametric(&self) -> bool {
        self.status == TriangleStatus::Ultrametric
    }

    pub fn is_degenerate(&self) -> bool {
        self.status == TriangleStatus::Degenerate
    }
}

/// Classify the triangle with side lengths `d1`, `d2`, `d3`.
pub fn classify_triangle(d1: f64, d2: f64, d3: f64, cfg: &TriangleConfig) -> TriangleVerdict {
    let eps = cfg.epsilon;
    if !(d1 > eps && d2 > eps && d3 > eps) {
        return TriangleVerdict {
            status: TriangleStatus::Degenerate,
            cosines: None,
            base_angle_gap_rad: None,
            metric_violation: false,
        };
    }

    let mut c = [
        (d1 * d1 + d2 * d2 - d3 * d3) / (2.0 * d1 * d2),
        (d2 * d2 + d3 * d3 - d1 * d1) / (2.0 * d2 * d3),
        (d1 * d1 + d3 * d3 - d2 * d2) / (2.0 * d1 * d3),
    ];
    let mut metric_violation = false;
    for v in &mut c {
        if *v > 1.0 + COSINE_SLACK || *v < -1.0 - COSINE_SLACK {
            metric_violation = true;
        }
        *v = v.clamp(-1.0, 1.0);
    }
    c.sort_by(f64::total_cmp);
    let [c1, c2, c3] = c;

    if metric_violation {
        return TriangleVerdict {
            status: TriangleStatus::NonUltrametric,
            cosines: Some(c),
            base_angle_gap_rad: None,
            metric_violation,
        };
    }
    if c3 >= 1.0 {
        return TriangleVerdict {
            status: TriangleStatus::Degenerate,
            cosines: Some(c),
            base_angle_gap_rad: None,
            metric_violation,
        };
    }
    if c3 < 0.5 {
        return TriangleVerdict {
            status: TriangleStatus::NonUltrametric,
            cosines: Some(c),
            base_angle_gap_rad: None,
            metric_violation,
        };
    }
    let gap = (c1.acos() - c2.acos()).abs();
    let status =
        if gap < cfg.angle_tolerance_rad { TriangleStatus::Ultrametric } else { TriangleStatus::NonUltrametric };
    TriangleVerdict { status, cosines: Some(c), base_angle_gap_rad: Some(gap), metric_violation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn status(d1: f64, d2: f64, d3: f64) -> TriangleStatus {
        classify_triangle(d1, d2, d3, &TriangleConfig::default()).status
    }

    #[test]
    fn defaults() {
        let cfg = TriangleConfig::default();
        assert_eq!(cfg.epsilon, 1e-10);
        assert_eq!(cfg.angle_tolerance_rad, 0.03490656);
        assert_eq!(cfg.sample_size, 2000);
        assert_eq!(cfg.repetitions, 20);
        assert!(cfg.validate().is_ok());
        assert!(TriangleConfig { sample_size: 0, ..cfg }.validate().is_err());
        assert!(TriangleConfig { epsilon: 0.0, ..cfg }.validate().is_err());
    }

    #[test]
    fn equilateral_is_ultrametric() {
        let v = classify_triangle(1.0, 1.0, 1.0, &TriangleConfig::default());
        assert_eq!(v.status, TriangleStatus::Ultrametric);
        assert_eq!(v.cosines.unwrap()[2], 0.5);
        assert_eq!(v.base_angle_gap_rad, Some(0.0));
    }

    #[test]
    fn right_triangle_is_not() {
        // Angles 36.87°, 53.13°, 90°: the smallest is below 60° but the
        // other two differ by 36.87°.
        let v = classify_triangle(3.0, 4.0, 5.0, &TriangleConfig::default());
        assert_eq!(v.status, TriangleStatus::NonUltrametric);
        let gap = v.base_angle_gap_rad.unwrap();
        assert!((gap.to_degrees() - 36.869_897_645_844_02).abs() < 1e-9);
    }

    #[test]
    fn thin_isosceles_is_ultrametric() {
        let v = classify_triangle(1.0, 10.0, 10.0, &TriangleConfig::default());
        assert_eq!(v.status, TriangleStatus::Ultrametric);
        let apex = v.cosines.unwrap()[2].acos().to_degrees();
        assert!((apex - 5.731_967_965_197_727).abs() < 1e-9);
    }

    #[test]
    fn short_sides_and_collinear_points_are_degenerate() {
        assert_eq!(status(1e-12, 1.0, 1.0), TriangleStatus::Degenerate);
        assert_eq!(status(0.0, 1.0, 1.0), TriangleStatus::Degenerate);
        assert_eq!(status(1e-10, 1.0, 1.0), TriangleStatus::Degenerate);
        assert_eq!(status(1.0, 2.0, 3.0), TriangleStatus::Degenerate);
        assert_eq!(status(f64::NAN, 1.0, 1.0), TriangleStatus::Degenerate);
    }

    #[test]
    fn wide_isosceles_fails_the_angle_bound() {
        // Base angles equal but the apex is 120°, so the smallest angle is 30°
        // and the two others (30° and 120°) are far apart.
        assert_eq!(status(1.0, 1.0, 3f64.sqrt()), TriangleStatus::NonUltrametric);
    }

    #[test]
    fn triangle_inequality_violation_is_flagged() {
        let v = classify_triangle(1.0, 1.0, 5.0, &TriangleConfig::default());
        assert_eq!(v.status, TriangleStatus::NonUltrametric);
        assert!(v.metric_violation);
        assert!(!classify_triangle(3.0, 4.0, 5.0, &TriangleConfig::default()).metric_violation);
    }

    #[test]
    fn tolerance_boundary() {
        // Base angles differ by about 2.86°, 1.14° and 0.57°.
        let cfg = TriangleConfig::default();
        assert_eq!(classify_triangle(1.0, 10.0, 10.025, &cfg).status, TriangleStatus::NonUltrametric);
        assert_eq!(classify_triangle(1.0, 10.0, 10.01, &cfg).status, TriangleStatus::Ultrametric);
        assert_eq!(classify_triangle(1.0, 10.0, 10.005, &cfg).status, TriangleStatus::Ultrametric);
        let loose = TriangleConfig { angle_tolerance_rad: 0.1, ..cfg };
        assert_eq!(classify_triangle(1.0, 10.0, 10.025, &loose).status, TriangleStatus::Ultrametric);
    }

    fn side() -> impl Strategy<Value = f64> {
        0.01f64..100.0
    }

    proptest! {
        #[test]
        fn permutation_invariant(a in side(), b in side(), c in side()) {
            let cfg = TriangleConfig::default();
            let base = classify_triangle(a, b, c, &cfg);
            for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                let v = classify_triangle(x, y, z, &cfg);
                prop_assert_eq!(v.status, base.status);
                prop_assert_eq!(v.cosines, base.cosines);
            }
        }

        #[test]
        fn scale_invariant(
            x in proptest::collection::vec(-1.0f64..1.0, 9),
            s in 1e-3f64..1e3,
        ) {
            let cfg = TriangleConfig::default();
            let p = |k: usize| [x[3 * k], x[3 * k + 1], x[3 * k + 2]];
            let dist = |u: [f64; 3], v: [f64; 3]| {
                u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
            };
            let (d1, d2, d3) = (dist(p(0), p(1)), dist(p(1), p(2)), dist(p(0), p(2)));
            prop_assume!([d1, d2, d3].iter().all(|&d| d * s.min(1.0) > 1e-6));
            let before = classify_triangle(d1, d2, d3, &cfg).status;
            let after = classify_triangle(s * d1, s * d2, s * d3, &cfg).status;
            prop_assert_eq!(before, after);
        }
    }
}
