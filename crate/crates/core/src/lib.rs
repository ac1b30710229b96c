//! Space-time cell decomposition and trajectory planning around moving
//! rectangular obstacles on a road, in Frenet coordinates.
//!
//! Pipeline: [`road`] describes the drivable set, [`scenario`] the obstacles
//! and ego, [`partition`] slices the free space at each step into labeled
//! convex cells, [`graph`] links the slices across time, and the planner
//! searches signature paths whose trajectories come from convex QPs.

pub mod admm;
pub mod config;
pub mod golden;
pub mod graph;
pub mod lp;
pub mod partition;
pub mod planner;
pub mod poly;
pub mod qp;
pub mod road;
pub mod scenario;

pub use config::Tolerances;
pub use graph::{build_graph, SignaturePath, TransitionGraph, ValiditySet};
pub use partition::{locate, partition_step, CellSlice, RegionLabel, Signature};
pub use poly::{FeasibilityResult, HalfPlane, Point2, Polyhedron, Rectangle};
pub use planner::{enumerate_oracle, margin_sweep, plan, plan_on_graph, PlanResult};
pub use qp::{assemble, solve, validate_trajectory, SolveOutcome, Trajectory, TrajectoryQP};
pub use road::RoadModel;
pub use scenario::{EgoConfig, ObstaclePose, ObstacleTrack, Scenario};
