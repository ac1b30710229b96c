//! Road geometry in Frenet coordinates and its trapezoidal decomposition.
//!
//! The road is the set `{ (s, r) : r_min(s) <= r <= r_max(s) }` over an
//! arc-length window, with piecewise-linear continuous lateral bounds. All
//! planning happens directly in `(s, r)`; no world-frame conversion exists.

use serde::{Deserialize, Serialize};

use crate::poly::{HalfPlane, Point2, Polyhedron};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RoadError {
    #[error("need at least two breakpoints")]
    TooFewBreakpoints,
    #[error("breakpoints must be strictly increasing")]
    NonIncreasingBreakpoints,
    #[error("breakpoints must start at s_min and end at s_max")]
    BreakpointCoverage,
    #[error("lateral bound arrays must match the breakpoint count")]
    BoundLengthMismatch,
    #[error("r_min must stay strictly below r_max everywhere")]
    EmptyRoad,
    #[error("road coordinates must be finite")]
    NonFinite,
}

/// Arc-length window plus piecewise-linear lateral bounds sampled at
/// breakpoints and interpolated linearly in between.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoadModel {
    s_min: f64,
    s_max: f64,
    breakpoints: Vec<f64>,
    r_min_vals: Vec<f64>,
    r_max_vals: Vec<f64>,
}

impl RoadModel {
    pub fn new(
        breakpoints: Vec<f64>,
        r_min_vals: Vec<f64>,
        r_max_vals: Vec<f64>,
    ) -> Result<Self, RoadError> {
        if breakpoints.len() < 2 {
            return Err(RoadError::TooFewBreakpoints);
        }
        if breakpoints.len() != r_min_vals.len() || breakpoints.len() != r_max_vals.len() {
            return Err(RoadError::BoundLengthMismatch);
        }
        let all = breakpoints.iter().chain(&r_min_vals).chain(&r_max_vals);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(RoadError::NonFinite);
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(RoadError::NonIncreasingBreakpoints);
        }
        if r_min_vals.iter().zip(&r_max_vals).any(|(lo, hi)| lo >= hi) {
            return Err(RoadError::EmptyRoad);
        }
        let s_min = breakpoints[0];
        let s_max = *breakpoints.last().unwrap();
        Ok(Self { s_min, s_max, breakpoints, r_min_vals, r_max_vals })
    }

    /// Constant-width road over `[s_min, s_max]`.
    pub fn constant_width(s_min: f64, s_max: f64, r_min: f64, r_max: f64) -> Result<Self, RoadError> {
        Self::new(vec![s_min, s_max], vec![r_min, r_min], vec![r_max, r_max])
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    fn interval_of(&self, s: f64) -> usize {
        // Clamp to the covering interval; callers check the domain separately.
        let n = self.breakpoints.len();
        match self.breakpoints.partition_point(|&b| b <= s) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    fn interp(&self, vals: &[f64], s: f64) -> f64 {
        let k = self.interval_of(s);
        let (b0, b1) = (self.breakpoints[k], self.breakpoints[k + 1]);
        let t = (s - b0) / (b1 - b0);
        vals[k] + t * (vals[k + 1] - vals[k])
    }

    pub fn r_min(&self, s: f64) -> f64 {
        self.interp(&self.r_min_vals, s)
    }

    pub fn r_max(&self, s: f64) -> f64 {
        self.interp(&self.r_max_vals, s)
    }

    /// Closed road-set membership: boundaries count as drivable.
    pub fn contains(&self, z: Point2) -> bool {
        z.x >= self.s_min
            && z.x <= self.s_max
            && z.y >= self.r_min(z.x)
            && z.y <= self.r_max(z.x)
    }

    /// Trapezoidal convex decomposition, one trapeze per breakpoint interval.
    /// Shared `s` boundaries stay closed in the lower-index trapeze and are
    /// shifted inward by `eps_strict` in the higher-index one.
    pub fn decompose(&self, eps_strict: f64) -> TrapezeSet {
        let k_count = self.breakpoints.len() - 1;
        let mut trapezes = Vec::with_capacity(k_count);
        for k in 0..k_count {
            let (b0, b1) = (self.breakpoints[k], self.breakpoints[k + 1]);
            let lower = if k == 0 { b0 } else { b0 + eps_strict };
            let mut rows = vec![
                HalfPlane::new(-1.0, 0.0, -lower), // s >= lower
                HalfPlane::new(1.0, 0.0, b1),      // s <= b1
            ];
            // r >= a s + c  <=>  a s - r <= -c, with the interpolant through
            // the two breakpoint samples.
            let span = b1 - b0;
            let a_min = (self.r_min_vals[k + 1] - self.r_min_vals[k]) / span;
            let c_min = self.r_min_vals[k] - a_min * b0;
            rows.push(HalfPlane::new(a_min, -1.0, -c_min));
            let a_max = (self.r_max_vals[k + 1] - self.r_max_vals[k]) / span;
            let c_max = self.r_max_vals[k] - a_max * b0;
            rows.push(HalfPlane::new(-a_max, 1.0, c_max));
            trapezes.push(Polyhedron::new(rows).expect("nonzero normals by construction"));
        }
        TrapezeSet { trapezes }
    }
}

/// Ordered convex cover of the road, one 4-row polyhedron per interval.
#[derive(Debug, Clone)]
pub struct TrapezeSet {
    trapezes: Vec<Polyhedron>,
}

impl TrapezeSet {
    pub fn len(&self) -> usize {
        self.trapezes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trapezes.is_empty()
    }

    pub fn get(&self, k: usize) -> &Polyhedron {
        &self.trapezes[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Polyhedron> {
        self.trapezes.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_road_gives_one_rectangle() {
        let road = RoadModel::constant_width(0.0, 200.0, -3.5, 3.5).unwrap();
        let set = road.decompose(1e-6);
        assert_eq!(set.len(), 1);
        assert_eq!(set.get(0).rows().len(), 4);
        assert!(set.get(0).contains(Point2::new(100.0, 0.0), 0.0));
        assert!(!set.get(0).contains(Point2::new(100.0, 3.6), 0.0));
    }

    #[test]
    fn three_breakpoints_give_two_trapezes() {
        let road = RoadModel::new(
            vec![0.0, 50.0, 100.0],
            vec![-3.5, -3.5, -3.5],
            vec![3.5, 7.0, 7.0],
        )
        .unwrap();
        let set = road.decompose(1e-6);
        assert_eq!(set.len(), 2);
        // Shared boundary: closed in trapeze 0, shifted in trapeze 1.
        assert!(set.get(0).contains(Point2::new(50.0, 0.0), 0.0));
        assert!(!set.get(1).contains(Point2::new(50.0, 0.0), 0.0));
        assert!(set.get(1).contains(Point2::new(50.0 + 1e-5, 0.0), 0.0));
    }

    #[test]
    fn membership_matches_bounds() {
        let road = RoadModel::constant_width(0.0, 100.0, -3.5, 3.5).unwrap();
        assert!(road.contains(Point2::new(10.0, 0.0)));
        assert!(!road.contains(Point2::new(10.0, 4.0)));
        assert!(road.contains(Point2::new(10.0, 3.5))); // closed boundary
        assert!(!road.contains(Point2::new(-1.0, 0.0)));
    }

    #[test]
    fn widening_road_classification_matches_interpolant() {
        // r_max widens 3.5 -> 7.0 over s in [0, 50].
        let road = RoadModel::new(
            vec![0.0, 50.0],
            vec![-3.5, -3.5],
            vec![3.5, 7.0],
        )
        .unwrap();
        let set = road.decompose(1e-6);
        let mut inside = 0usize;
        for i in 0..100 {
            for j in 0..100 {
                let s = 0.5 + 49.0 * (i as f64) / 99.0;
                let r = -4.0 + 11.5 * (j as f64) / 99.0;
                let z = Point2::new(s, r);
                let direct = road.contains(z);
                let in_trapeze = set.iter().any(|t| t.contains(z, 0.0));
                assert_eq!(direct, in_trapeze, "mismatch at ({s}, {r})");
                if direct {
                    inside += 1;
                }
            }
        }
        assert!(inside > 1000);
    }

    #[test]
    fn invalid_roads_rejected() {
        assert_eq!(
            RoadModel::new(vec![0.0], vec![0.0], vec![1.0]).unwrap_err(),
            RoadError::TooFewBreakpoints
        );
        assert_eq!(
            RoadModel::new(vec![0.0, 0.0], vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap_err(),
            RoadError::NonIncreasingBreakpoints
        );
        assert_eq!(
            RoadModel::new(vec![0.0, 10.0], vec![1.0, -1.0], vec![1.0, 1.0]).unwrap_err(),
            RoadError::EmptyRoad
        );
    }
}
