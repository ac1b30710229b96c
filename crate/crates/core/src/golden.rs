//! Canonical two-vehicle overtaking scenario used by tests, benches and the
//! bundled example input.
//!
//! Single straight road segment with two lanes centered at r = -1.75 and
//! r = +1.75. Vehicle 1 drives slowly ahead of the ego in the right lane;
//! vehicle 2 approaches faster from behind in the left lane. The ego starts
//! in the right lane behind vehicle 1 ("br": behind 1, right of 2).
//!
//! With the inflated footprints the free space splits into exactly four cells
//! per step (br, lb, lf, fr), and the geometry is tuned so the two maneuver
//! families separate cleanly:
//!
//! * overtake-first: swerve left into the shrinking gap between vehicle 2's
//!   front and vehicle 1's rear (`br -> lf`). The gap closes just after
//!   t = 2.0 s, and the lateral acceleration bound makes the lane change take
//!   at least ~1.7 s, so the transition is only reachable at its last valid
//!   step and carries a 0.5 s margin;
//! * wait-then-overtake: brake, let vehicle 2 pass, follow it through the
//!   left lane and cut back once vehicle 2 has cleared vehicle 1
//!   (`br -> lb -> fr`). Both transitions stay available to the end of the
//!   horizon, so the maneuver carries an infinite margin.
//!
//! A minimum margin of 1 s therefore forces the wait maneuver, while margin 0
//! picks the cheaper overtake-first trajectory.

use crate::road::RoadModel;
use crate::scenario::{EgoConfig, ObstaclePose, ObstacleTrack, Scenario};

/// Number of discretization steps of the golden scenario.
pub const GOLDEN_STEPS: usize = 20;

fn lane_track(id: u32, s0: f64, r: f64, speed: f64, tau: f64) -> ObstacleTrack {
    ObstacleTrack {
        id,
        half_length: 2.0,
        half_width: 0.85,
        poses: (0..=GOLDEN_STEPS)
            .map(|p| ObstaclePose {
                center_s: s0 + speed * tau * p as f64,
                center_r: r,
                heading: 0.0,
            })
            .collect(),
    }
}

/// The golden scenario. Already validated.
pub fn two_vehicle_overtake() -> Scenario {
    let tau = 0.5;
    let mut scn = Scenario {
        road: RoadModel::constant_width(-20.0, 220.0, -3.4, 3.4).unwrap(),
        obstacles: vec![
            lane_track(1, 24.0, -1.75, 4.0, tau),
            lane_track(2, -2.0, 1.75, 10.0, tau),
        ],
        ego: EgoConfig {
            half_length: 1.9,
            half_width: 0.8,
            s: 5.0,
            r: -1.75,
            s_dot: 12.0,
            r_dot: 0.0,
        },
        horizon: 10.0,
        tau,
        margin_min: 1.0,
        alpha: 0.2,
        a_lon_max: 3.0,
        // Low enough that a full lane change takes ~1.7 s, which blocks the
        // early-overtake transitions and leaves only the 0.5 s-margin one.
        a_lat_max: 1.2,
        ref_speed: 15.0,
        safety_pad: 0.1,
    };
    scn.validate().expect("golden scenario is valid by construction");
    scn
}
