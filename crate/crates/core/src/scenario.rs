//! Obstacles with predicted per-step poses, configuration-space inflation
//! and whole-scenario validation.

use serde::{Deserialize, Serialize};

use crate::poly::{GeometryError, Point2, Polyhedron, Rectangle};
use crate::road::RoadModel;

/// Per-step rotation above which the sweep pad no longer guarantees coverage
/// of the in-between footprints; such tracks are flagged with a warning.
pub const ROTATION_WARN_THRESHOLD: f64 = 0.1;

/// Pose of an obstacle center at one discretization step.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ObstaclePose {
    pub center_s: f64,
    pub center_r: f64,
    /// Heading relative to the road axis, radians.
    pub heading: f64,
}

/// Predicted trajectory of one rectangular obstacle over the horizon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObstacleTrack {
    pub id: u32,
    pub half_length: f64,
    pub half_width: f64,
    /// Exactly `P + 1` poses, one per step boundary.
    pub poses: Vec<ObstaclePose>,
}

/// Ego vehicle footprint and initial state.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EgoConfig {
    pub half_length: f64,
    pub half_width: f64,
    pub s: f64,
    pub r: f64,
    pub s_dot: f64,
    pub r_dot: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("horizon must be a positive integer multiple of tau")]
    BadHorizon,
    #[error("obstacle {id}: expected {expected} poses, found {found}")]
    PoseCountMismatch { id: u32, expected: usize, found: usize },
    #[error("obstacle {0}: half extents must be positive")]
    BadObstacleDims(u32),
    #[error("ego half extents must be positive")]
    BadEgoDims,
    #[error("ego must move forward (s_dot >= 0)")]
    BackwardEgo,
    #[error("ego initial position is off the road")]
    EgoOffRoad,
    #[error("ego initial position collides with obstacle {0}")]
    EgoInCollision(u32),
    #[error("duplicate obstacle id {0}")]
    DuplicateObstacleId(u32),
    #[error("scenario parameter out of range: {0}")]
    BadParameter(&'static str),
}

/// A full planning problem: road, obstacle predictions, ego model and the
/// numeric parameters of the discretization and the optimizer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub road: RoadModel,
    pub obstacles: Vec<ObstacleTrack>,
    pub ego: EgoConfig,
    /// Horizon length in seconds; equals `steps() * tau`.
    pub horizon: f64,
    pub tau: f64,
    pub margin_min: f64,
    /// Lateral-velocity ratio bound: `|r_dot| <= alpha * s_dot`.
    pub alpha: f64,
    pub a_lon_max: f64,
    pub a_lat_max: f64,
    pub ref_speed: f64,
    pub safety_pad: f64,
}

impl Scenario {
    /// Number of steps `P`, so layers are indexed `0..=P`.
    pub fn steps(&self) -> usize {
        (self.horizon / self.tau).round() as usize
    }

    pub fn obstacle_count(&self) -> usize {
        self.obstacles.len()
    }

    /// Validate every structural invariant. Obstacles sorted by id.
    pub fn validate(&mut self) -> Result<(), ScenarioError> {
        if !(self.tau > 0.0) || !(self.horizon > 0.0) {
            return Err(ScenarioError::BadHorizon);
        }
        let p = self.horizon / self.tau;
        if (p - p.round()).abs() > 1e-9 || p.round() < 1.0 {
            return Err(ScenarioError::BadHorizon);
        }
        if self.alpha <= 0.0 {
            return Err(ScenarioError::BadParameter("alpha"));
        }
        if self.a_lon_max <= 0.0 || self.a_lat_max <= 0.0 {
            return Err(ScenarioError::BadParameter("control bounds"));
        }
        if self.margin_min < 0.0 {
            return Err(ScenarioError::BadParameter("margin_min"));
        }
        if self.safety_pad < 0.0 {
            return Err(ScenarioError::BadParameter("safety_pad"));
        }
        if self.ego.half_length <= 0.0 || self.ego.half_width <= 0.0 {
            return Err(ScenarioError::BadEgoDims);
        }
        if self.ego.s_dot < 0.0 {
            return Err(ScenarioError::BackwardEgo);
        }
        let steps = self.steps();
        self.obstacles.sort_by_key(|t| t.id);
        for pair in self.obstacles.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(ScenarioError::DuplicateObstacleId(pair[0].id));
            }
        }
        for track in &self.obstacles {
            if track.half_length <= 0.0 || track.half_width <= 0.0 {
                return Err(ScenarioError::BadObstacleDims(track.id));
            }
            if track.poses.len() != steps + 1 {
                return Err(ScenarioError::PoseCountMismatch {
                    id: track.id,
                    expected: steps + 1,
                    found: track.poses.len(),
                });
            }
            for pair in track.poses.windows(2) {
                let dh = (pair[1].heading - pair[0].heading).abs();
                if dh > ROTATION_WARN_THRESHOLD {
                    log::warn!(
                        "obstacle {}: per-step rotation {:.3} rad exceeds {} rad; \
                         sweep coverage between steps is not guaranteed",
                        track.id,
                        dh,
                        ROTATION_WARN_THRESHOLD
                    );
                }
            }
        }
        let ego_pos = Point2::new(self.ego.s, self.ego.r);
        if !self.road.contains(ego_pos) {
            return Err(ScenarioError::EgoOffRoad);
        }
        for track in &self.obstacles {
            let footprint = self
                .inflated_rectangle(track, 0)
                .expect("dims validated above");
            if footprint.contains_interior(ego_pos) {
                return Err(ScenarioError::EgoInCollision(track.id));
            }
        }
        Ok(())
    }

    fn inflated_rectangle(&self, track: &ObstacleTrack, step: usize) -> Result<Rectangle, GeometryError> {
        inflate(track, step, (self.ego.half_length, self.ego.half_width), self.safety_pad)
    }

    /// The configuration-space obstacle at `step` as a 4-row polyhedron:
    /// the predicted rectangle grown by the ego footprint, the safety pad and
    /// half the displacement toward the next step.
    pub fn inflated_obstacle(&self, track: &ObstacleTrack, step: usize) -> Polyhedron {
        self.inflated_rectangle(track, step)
            .expect("validated scenario has positive extents")
            .to_polyhedron()
    }

    /// Pointwise free-space oracle: on the road and strictly outside every
    /// inflated obstacle at `step`.
    pub fn free_space_sample_check(&self, z: Point2, step: usize) -> bool {
        if !self.road.contains(z) {
            return false;
        }
        self.obstacles.iter().all(|track| {
            !self
                .inflated_rectangle(track, step)
                .expect("validated scenario has positive extents")
                .contains_interior(z)
        })
    }
}

/// Inflation used by `Scenario::inflated_obstacle`, exposed for tests.
///
/// The rotated-rectangle-with-axis-aligned-ego Minkowski sum is an octagon;
/// it is outer-bounded here by growing the rotated rectangle's half extents
/// by `|cos h| hl_e + |sin h| hw_e` and `|sin h| hl_e + |cos h| hw_e`. The
/// sweep pad recenters the rectangle at the midpoint of the step's center
/// displacement and grows each half extent by half the displacement resolved
/// along the rectangle axes, so both bracketing footprints stay covered.
pub fn inflate(
    track: &ObstacleTrack,
    step: usize,
    ego_half: (f64, f64),
    safety_pad: f64,
) -> Result<Rectangle, GeometryError> {
    let pose = &track.poses[step];
    let (ego_hl, ego_hw) = ego_half;
    let (sin_h, cos_h) = pose.heading.sin_cos();

    let grow_l = cos_h.abs() * ego_hl + sin_h.abs() * ego_hw;
    let grow_w = sin_h.abs() * ego_hl + cos_h.abs() * ego_hw;

    // Last step reuses the previous displacement (clamped sweep).
    let (from, to) = if step + 1 < track.poses.len() {
        (step, step + 1)
    } else {
        (step.saturating_sub(1), step)
    };
    let disp = Point2::new(
        track.poses[to].center_s - track.poses[from].center_s,
        track.poses[to].center_r - track.poses[from].center_r,
    );
    let u = Point2::new(cos_h, sin_h);
    let v = Point2::new(-sin_h, cos_h);
    let sweep_l = 0.5 * u.dot(&disp).abs();
    let sweep_w = 0.5 * v.dot(&disp).abs();
    let mid = Point2::new(
        0.5 * (track.poses[from].center_s + track.poses[to].center_s),
        0.5 * (track.poses[from].center_r + track.poses[to].center_r),
    );

    Rectangle::new(
        mid,
        pose.heading,
        track.half_length + grow_l + safety_pad + sweep_l,
        track.half_width + grow_w + safety_pad + sweep_w,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn static_track(id: u32, s: f64, r: f64, hl: f64, hw: f64, steps: usize) -> ObstacleTrack {
        ObstacleTrack {
            id,
            half_length: hl,
            half_width: hw,
            poses: vec![ObstaclePose { center_s: s, center_r: r, heading: 0.0 }; steps + 1],
        }
    }

    fn moving_track(id: u32, s0: f64, r: f64, ds: f64, steps: usize) -> ObstacleTrack {
        ObstacleTrack {
            id,
            half_length: 2.0,
            half_width: 1.0,
            poses: (0..=steps)
                .map(|p| ObstaclePose { center_s: s0 + ds * p as f64, center_r: r, heading: 0.0 })
                .collect(),
        }
    }

    fn base_scenario(obstacles: Vec<ObstacleTrack>) -> Scenario {
        let mut scn = Scenario {
            road: RoadModel::constant_width(0.0, 300.0, -3.5, 3.5).unwrap(),
            obstacles,
            ego: EgoConfig { half_length: 2.0, half_width: 1.0, s: 5.0, r: 0.0, s_dot: 10.0, r_dot: 0.0 },
            horizon: 10.0,
            tau: 1.0,
            margin_min: 1.0,
            alpha: 0.2,
            a_lon_max: 3.0,
            a_lat_max: 2.0,
            ref_speed: 12.0,
            safety_pad: 0.0,
        };
        scn.validate().unwrap();
        scn
    }

    #[test]
    fn aligned_static_inflation_is_minkowski_sum() {
        let track = static_track(1, 100.0, 0.0, 2.0, 1.0, 10);
        let rect = inflate(&track, 0, (2.0, 1.0), 0.0).unwrap();
        assert_eq!(rect.half_length, 4.0);
        assert_eq!(rect.half_width, 2.0);
        assert_eq!(rect.center, Point2::new(100.0, 0.0));
    }

    #[test]
    fn sweep_pad_is_half_the_displacement() {
        let track = moving_track(1, 100.0, 0.0, 10.0, 10);
        let rect = inflate(&track, 3, (0.0001, 0.0001), 0.0).unwrap();
        assert!((rect.half_length - (2.0 + 0.0001 + 5.0)).abs() < 1e-12);
    }

    #[test]
    fn rotated_inflation_contains_exact_minkowski_sum() {
        let heading = 0.2;
        let track = ObstacleTrack {
            id: 1,
            half_length: 2.0,
            half_width: 1.0,
            poses: vec![ObstaclePose { center_s: 50.0, center_r: 0.0, heading }; 2],
        };
        let grown = inflate(&track, 0, (2.0, 1.0), 0.0).unwrap();
        let poly = grown.to_polyhedron();
        // Sample the boundary of the exact sum: obstacle corner + ego corner.
        let (sh, ch) = heading.sin_cos();
        for &(du, dv) in &[(2.0, 1.0), (2.0, -1.0), (-2.0, 1.0), (-2.0, -1.0)] {
            for &(ex, ey) in &[(2.0, 1.0), (2.0, -1.0), (-2.0, 1.0), (-2.0, -1.0)] {
                let corner = Point2::new(
                    50.0 + du * ch - dv * sh + ex,
                    du * sh + dv * ch + ey,
                );
                assert!(poly.contains(corner, 1e-9), "corner {corner:?} escapes the bound");
            }
        }
    }

    #[test]
    fn inflation_monotone_in_safety_pad() {
        let track = moving_track(1, 50.0, 0.0, 5.0, 10);
        let small = inflate(&track, 2, (2.0, 1.0), 0.1).unwrap();
        let large = inflate(&track, 2, (2.0, 1.0), 0.7).unwrap();
        assert!(large.half_length > small.half_length);
        assert!(large.half_width > small.half_width);
    }

    #[test]
    fn sweep_covers_both_bracketing_footprints() {
        let track = moving_track(1, 50.0, 0.0, 5.0, 10);
        for step in 0..=10usize {
            let grown = inflate(&track, step, (0.0, 0.0), 1e-9).unwrap().to_polyhedron();
            let here = &track.poses[step];
            let next = &track.poses[(step + 1).min(10)];
            for pose in [here, next] {
                for &(du, dv) in &[(2.0, 1.0), (2.0, -1.0), (-2.0, 1.0), (-2.0, -1.0)] {
                    let corner = Point2::new(pose.center_s + du, pose.center_r + dv);
                    assert!(grown.contains(corner, 1e-6), "step {step} corner {corner:?}");
                }
            }
        }
    }

    #[test]
    fn free_space_check_respects_road_and_obstacles() {
        let scn = base_scenario(vec![static_track(1, 100.0, 0.0, 2.0, 1.0, 10)]);
        assert!(!scn.free_space_sample_check(Point2::new(100.0, 0.0), 0)); // inside footprint
        assert!(!scn.free_space_sample_check(Point2::new(50.0, 5.0), 0)); // off road
        assert!(scn.free_space_sample_check(Point2::new(50.0, 0.0), 0));
    }

    #[test]
    fn validation_rejects_colliding_ego() {
        let mut scn = base_scenario(vec![]);
        scn.obstacles = vec![static_track(1, 6.0, 0.0, 2.0, 1.0, 10)];
        assert!(matches!(scn.validate(), Err(ScenarioError::EgoInCollision(1))));
    }

    #[test]
    fn validation_rejects_bad_pose_count() {
        let mut scn = base_scenario(vec![]);
        scn.obstacles = vec![static_track(1, 100.0, 0.0, 2.0, 1.0, 4)];
        assert!(matches!(scn.validate(), Err(ScenarioError::PoseCountMismatch { .. })));
    }
}
