//! Best-first branch-and-bound over signature paths, with relaxed-tail QP
//! lower bounds, time-margin filtering, an exhaustive-enumeration oracle and
//! a margin sweep utility.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::graph::{build_graph_from_layers, build_layers, SignaturePath, TransitionGraph};
use crate::partition::{locate, Signature};
use crate::poly::Point2;
use crate::qp::{
    assemble, assemble_bound, solve, solve_detailed, trajectory_from_stack, validate_trajectory,
    SolveOutcome, Trajectory,
};
use nalgebra::DVector;
use crate::scenario::Scenario;

#[derive(Debug, thiserror::Error)]
pub enum PlanError {
    #[error("initial ego position is not inside any layer-0 cell")]
    StartNotLocatable,
    #[error("oracle refused: {count} paths exceed the cap of {cap}")]
    OracleCapExceeded { count: u128, cap: u128 },
}

/// Node counts per pruning reason.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct PlanStats {
    pub generated: usize,
    pub expanded: usize,
    pub pruned_infeasible: usize,
    pub pruned_bound: usize,
    pub pruned_margin: usize,
    pub pruned_corridor: usize,
    pub qp_solves: usize,
}

/// Wall-clock milliseconds per phase.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub partitioning_ms: f64,
    pub graph_exploration_ms: f64,
    pub optimal_path_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanResult {
    pub trajectory: Option<Trajectory>,
    pub path: Option<SignaturePath>,
    pub cost: Option<f64>,
    pub margin: Option<f64>,
    pub stats: PlanStats,
    pub timings: PhaseTimings,
}

impl PlanResult {
    pub fn is_feasible(&self) -> bool {
        self.trajectory.is_some()
    }
}

/// Frontier entry: min bound first, then lexicographic path order, so
/// expansion order (and therefore every tie-break) is deterministic.
struct Node {
    prefix: Vec<Signature>,
    bound: f64,
    /// Number of signature changes along the prefix, used as a tie-break.
    transitions: usize,
    /// Whether `bound` is the node's own QP value. Children enter the
    /// frontier with their parent's bound (still admissible) and only get
    /// their QP solved when popped, so branches an incumbent later prunes
    /// never pay for a solve.
    solved: bool,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap: reverse so the smallest bound pops first.
        // Bound ties go to the prefix with fewer transitions: siblings share
        // the bound of a common ancestor until their own QP is solved, and
        // racing the straightest continuation to full length first turns the
        // wigglier ties into bound prunes instead of QP solves. Remaining
        // ties prefer the lexicographically larger (deeper) prefix.
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.transitions.cmp(&self.transitions))
            .then_with(|| self.prefix.cmp(&other.prefix))
    }
}

/// Whether `sig`'s cell at `step` intersects the axis-aligned box of
/// positions reachable from the initial state under the control bounds alone
/// (slip and cell constraints ignored, so the box over-approximates and the
/// test never discards a dynamically feasible branch).
fn reachable_cell(scn: &Scenario, graph: &TransitionGraph, step: usize, sig: &Signature) -> bool {
    let Some(cell) = graph.cell(step, sig) else { return false };
    let t = step as f64 * scn.tau;
    let (s0, v0) = (scn.ego.s, scn.ego.s_dot);
    let s_max = s0 + v0 * t + 0.5 * scn.a_lon_max * t * t;
    // Forward-only motion: full braking holds position once stopped.
    let s_min = if t * scn.a_lon_max <= v0 {
        s0 + v0 * t - 0.5 * scn.a_lon_max * t * t
    } else {
        s0 + 0.5 * v0 * v0 / scn.a_lon_max
    };
    let half_lat = 0.5 * scn.a_lat_max * t * t;
    let r_min = scn.ego.r + scn.ego.r_dot * t - half_lat;
    let r_max = scn.ego.r + scn.ego.r_dot * t + half_lat;
    // Support test per halfplane: the box and the cell intersect only if the
    // box corner minimizing each row still satisfies it.
    cell.poly.rows().iter().all(|hp| {
        let s = if hp.normal[0] >= 0.0 { s_min } else { s_max };
        let r = if hp.normal[1] >= 0.0 { r_min } else { r_max };
        hp.normal[0] * s + hp.normal[1] * r <= hp.offset + 1e-9
    })
}

/// Time margin accumulated over the transitions of a prefix. Exact even for
/// partial paths: a transition's margin depends only on the adjacency table,
/// not on how the path continues.
fn prefix_margin(graph: &TransitionGraph, prefix: &[Signature]) -> f64 {
    let path = SignaturePath::new(prefix.to_vec());
    graph.time_margin(&path)
}

/// Full planning entry point: partition, build the graph, then search.
pub fn plan(scn: &Scenario, tol: &Tolerances) -> Result<PlanResult, PlanError> {
    let t0 = Instant::now();
    let layers = build_layers(scn, tol);
    let partitioning_ms = t0.elapsed().as_secs_f64() * 1e3;

    let t1 = Instant::now();
    let graph = build_graph_from_layers(scn.tau, layers, tol);
    let graph_ms = t1.elapsed().as_secs_f64() * 1e3;

    let mut result = plan_on_graph(scn, &graph, tol)?;
    result.timings.partitioning_ms = partitioning_ms;
    result.timings.graph_exploration_ms = graph_ms;
    Ok(result)
}

/// Branch-and-bound search over a prebuilt graph.
pub fn plan_on_graph(
    scn: &Scenario,
    graph: &TransitionGraph,
    tol: &Tolerances,
) -> Result<PlanResult, PlanError> {
    let t0 = Instant::now();
    let start = locate(graph.layer(0), Point2::new(scn.ego.s, scn.ego.r), tol)
        .ok_or(PlanError::StartNotLocatable)?;

    let mut stats = PlanStats::default();
    // Prefix -> (bound, stacked primal, stacked dual). The vectors warm-start
    // the one-step extensions of the prefix and are empty when infeasible.
    let mut bound_cache: BTreeMap<Vec<Signature>, (f64, DVector<f64>, DVector<f64>)> =
        BTreeMap::new();
    let mut frontier = BinaryHeap::new();
    frontier.push(Node { prefix: vec![start], bound: 0.0, transitions: 0, solved: true });
    stats.generated += 1;

    let full_len = graph.layers().len();
    let mut best_cost = f64::INFINITY;
    let mut best_traj: Option<Trajectory> = None;
    // Prune ties up to the solver accuracy: sibling paths that differ only in
    // zero-cost wiggling otherwise all survive the bound test and blow the
    // search up combinatorially. Costs the planner returns therefore match
    // the true optimum to roughly qp_tol in relative terms.
    let prune_at = |best: f64| {
        if best.is_finite() {
            best - tol.qp_tol * (1.0 + best.abs())
        } else {
            f64::INFINITY
        }
    };

    while let Some(node) = frontier.pop() {
        if node.bound >= prune_at(best_cost) {
            stats.pruned_bound += 1;
            continue;
        }

        if !node.solved {
            // Deferred evaluation: solve the node's own bound QP now, warm
            // started from its parent (the child's rows are the parent's rows
            // plus rows appended at the end).
            let path = SignaturePath::new(node.prefix.clone());
            let qp = assemble_bound(scn, graph, &path, tol)
                .expect("successors always yield assemblable prefixes");
            let parent = &node.prefix[..node.prefix.len() - 1];
            let warm = bound_cache.get(parent).and_then(|(_, z, y)| {
                if z.len() != qp.num_vars() || y.len() > qp.num_rows() {
                    return None;
                }
                let mut y_pad = DVector::zeros(qp.num_rows());
                y_pad.rows_mut(0, y.len()).copy_from(y);
                Some((z.clone(), y_pad))
            });
            stats.qp_solves += 1;
            let detail = solve_detailed(&qp, tol, warm.as_ref().map(|(z, y)| (z, y)));
            let bound = match detail.outcome {
                SolveOutcome::Optimal(t) => t.cost,
                SolveOutcome::Infeasible => f64::INFINITY,
                SolveOutcome::IterationLimit => {
                    log::warn!(
                        "QP iteration limit on prefix {:?}; treating as infeasible",
                        node.prefix
                    );
                    f64::INFINITY
                }
            };
            if bound.is_infinite() {
                stats.pruned_infeasible += 1;
                continue;
            }
            bound_cache.insert(node.prefix.clone(), (bound, detail.z, detail.y));
            if bound >= prune_at(best_cost) {
                stats.pruned_bound += 1;
                continue;
            }
            frontier.push(Node {
                prefix: node.prefix,
                bound,
                transitions: node.transitions,
                solved: true,
            });
            continue;
        }

        if node.prefix.len() == full_len {
            // The bound QP of a full-length prefix is the full QP, so the
            // cached solution already is the candidate trajectory.
            let path = SignaturePath::new(node.prefix.clone());
            let (_, z, _) = &bound_cache[&node.prefix];
            let traj = trajectory_from_stack(z, full_len, scn.ref_speed, path);
            let report = validate_trajectory(scn, graph, &traj, tol);
            if !report.interpolation_ok {
                stats.pruned_corridor += 1;
                continue;
            }
            if !report.pass() {
                log::warn!("QP solution failed validation: {:?}", report.failures);
                stats.pruned_infeasible += 1;
                continue;
            }
            if traj.cost < best_cost {
                best_cost = traj.cost;
                best_traj = Some(traj);
            }
            continue;
        }

        stats.expanded += 1;
        let p = node.prefix.len() - 1;
        let last = node.prefix.last().unwrap().clone();
        for succ in graph.successors(p, &last) {
            let mut prefix = node.prefix.clone();
            prefix.push(succ.clone());
            stats.generated += 1;

            if prefix_margin(graph, &prefix) < scn.margin_min {
                stats.pruned_margin += 1;
                continue;
            }
            let is_transition = succ != &last;
            // A cheap necessary condition before any QP: the new cell (and
            // the crossing knot's incoming cell) must intersect the set of
            // positions the control bounds allow at that step at all.
            let reachable = reachable_cell(scn, graph, p + 1, succ)
                && (!is_transition || reachable_cell(scn, graph, p, succ));
            if !reachable {
                stats.pruned_infeasible += 1;
                continue;
            }
            // Inherit the parent's bound; it lower-bounds every completion of
            // the child as well.
            frontier.push(Node {
                prefix,
                bound: node.bound,
                transitions: node.transitions + usize::from(is_transition),
                solved: false,
            });
        }
    }

    let optimal_path_ms = t0.elapsed().as_secs_f64() * 1e3;
    let path = best_traj.as_ref().map(|t| t.path.clone());
    let margin = path.as_ref().map(|p| graph.time_margin(p));
    Ok(PlanResult {
        cost: best_traj.as_ref().map(|t| t.cost),
        trajectory: best_traj,
        path,
        margin,
        stats,
        timings: PhaseTimings { optimal_path_ms, ..Default::default() },
    })
}

/// Default cap on the number of paths the oracle will enumerate.
pub const ORACLE_PATH_CAP: u128 = 200_000;

/// Ground-truth planner: enumerate every signature path in the graph, solve
/// the full QP for each, apply the margin filter, return the exact minimum.
/// Refuses (no silent truncation) when the path count exceeds `cap`.
pub fn enumerate_oracle(
    scn: &Scenario,
    graph: &TransitionGraph,
    margin_min: f64,
    tol: &Tolerances,
    cap: u128,
) -> Result<PlanResult, PlanError> {
    let t0 = Instant::now();
    let start = locate(graph.layer(0), Point2::new(scn.ego.s, scn.ego.r), tol)
        .ok_or(PlanError::StartNotLocatable)?;
    let full_len = graph.layers().len();

    // Count paths by dynamic programming before enumerating anything.
    let mut counts: BTreeMap<Signature, u128> = BTreeMap::new();
    counts.insert(start.clone(), 1);
    for p in 0..full_len - 1 {
        let mut next: BTreeMap<Signature, u128> = BTreeMap::new();
        for (sig, n) in &counts {
            for succ in graph.successors(p, sig) {
                *next.entry(succ.clone()).or_default() += n;
            }
        }
        counts = next;
    }
    let total: u128 = counts.values().sum();
    if total > cap {
        return Err(PlanError::OracleCapExceeded { count: total, cap });
    }

    let mut stats = PlanStats::default();
    let mut best_cost = f64::INFINITY;
    let mut best_traj: Option<Trajectory> = None;
    let mut stack = vec![vec![start]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == full_len {
            stats.generated += 1;
            let path = SignaturePath::new(prefix);
            if graph.time_margin(&path) < margin_min {
                stats.pruned_margin += 1;
                continue;
            }
            let qp = assemble(scn, graph, &path, tol).expect("enumerated path is assemblable");
            stats.qp_solves += 1;
            if let SolveOutcome::Optimal(traj) = solve(&qp, tol) {
                if !validate_trajectory(scn, graph, &traj, tol).interpolation_ok {
                    stats.pruned_corridor += 1;
                    continue;
                }
                if traj.cost < best_cost {
                    best_cost = traj.cost;
                    best_traj = Some(traj);
                }
            } else {
                stats.pruned_infeasible += 1;
            }
            continue;
        }
        let p = prefix.len() - 1;
        // Reverse order so lexicographically smaller successors pop first,
        // matching the planner's tie-breaking on equal costs.
        for succ in graph.successors(p, prefix.last().unwrap()).iter().rev() {
            let mut ext = prefix.clone();
            ext.push(succ.clone());
            stack.push(ext);
        }
    }

    let optimal_path_ms = t0.elapsed().as_secs_f64() * 1e3;
    let path = best_traj.as_ref().map(|t| t.path.clone());
    let margin = path.as_ref().map(|p| graph.time_margin(p));
    Ok(PlanResult {
        cost: best_traj.as_ref().map(|t| t.cost),
        trajectory: best_traj,
        path,
        margin,
        stats,
        timings: PhaseTimings { optimal_path_ms, ..Default::default() },
    })
}

/// One row of a margin sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub margin_min: f64,
    pub path: Option<String>,
    pub cost: Option<f64>,
    pub margin: Option<f64>,
}

/// Re-plan at each requested minimum margin; costs are nondecreasing in the
/// margin since feasible sets only shrink.
pub fn margin_sweep(
    scn: &Scenario,
    margins: &[f64],
    tol: &Tolerances,
) -> Result<Vec<SweepRow>, PlanError> {
    let graph = crate::graph::build_graph(scn, tol);
    let mut rows = Vec::with_capacity(margins.len());
    for &m in margins {
        let mut variant = scn.clone();
        variant.margin_min = m;
        let result = plan_on_graph(&variant, &graph, tol)?;
        rows.push(SweepRow {
            margin_min: m,
            path: result.path.as_ref().map(path_label),
            cost: result.cost,
            margin: result.margin,
        });
    }
    Ok(rows)
}

/// Compact human-readable form of a path: run-length encoded signatures.
pub fn path_label(path: &SignaturePath) -> String {
    let mut parts: Vec<String> = Vec::new();
    for sig in &path.steps {
        let label = sig.label();
        if parts.last() != Some(&label) {
            parts.push(label);
        }
    }
    parts.join("->")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::road::RoadModel;
    use crate::scenario::{EgoConfig, ObstaclePose, ObstacleTrack};

    fn scenario(steps: usize, obstacles: Vec<ObstacleTrack>, margin_min: f64) -> Scenario {
        let mut scn = Scenario {
            road: RoadModel::constant_width(0.0, 500.0, -3.5, 3.5).unwrap(),
            obstacles,
            ego: EgoConfig { half_length: 2.0, half_width: 1.0, s: 5.0, r: -1.75, s_dot: 12.0, r_dot: 0.0 },
            horizon: steps as f64,
            tau: 1.0,
            margin_min,
            alpha: 0.2,
            a_lon_max: 3.0,
            a_lat_max: 2.0,
            ref_speed: 12.0,
            safety_pad: 0.1,
        };
        scn.validate().unwrap();
        scn
    }

    fn slow_car_ahead(steps: usize) -> ObstacleTrack {
        ObstacleTrack {
            id: 1,
            half_length: 2.0,
            half_width: 1.0,
            poses: (0..=steps)
                .map(|p| ObstaclePose { center_s: 30.0 + 4.0 * p as f64, center_r: -1.75, heading: 0.0 })
                .collect(),
        }
    }

    #[test]
    fn empty_road_reduces_to_single_qp() {
        let mut scn = scenario(4, vec![], 0.0);
        scn.ego.r = 0.0;
        scn.validate().unwrap();
        let tol = Tolerances::default();
        let result = plan(&scn, &tol).unwrap();
        assert!(result.is_feasible());
        assert_eq!(result.stats.pruned_bound + result.stats.pruned_infeasible, 0);
        assert!(result.cost.unwrap() < 1e-6); // already cruising at reference
        assert_eq!(result.margin.unwrap(), f64::INFINITY);
    }

    #[test]
    fn planner_matches_oracle_with_slow_car() {
        let scn = scenario(6, vec![slow_car_ahead(6)], 0.0);
        let tol = Tolerances::default();
        let graph = build_graph(&scn, &tol);
        let planned = plan_on_graph(&scn, &graph, &tol).unwrap();
        let oracle = enumerate_oracle(&scn, &graph, 0.0, &tol, ORACLE_PATH_CAP).unwrap();
        assert!(planned.is_feasible() && oracle.is_feasible());
        let (a, b) = (planned.cost.unwrap(), oracle.cost.unwrap());
        assert!((a - b).abs() <= 1e-5 * (1.0 + b.abs()), "plan {a} oracle {b}");
    }

    #[test]
    fn wall_of_cars_is_infeasible() {
        // Stopped vehicles spanning the entire road width directly ahead.
        let steps = 4;
        let wall = ObstacleTrack {
            id: 1,
            half_length: 2.0,
            half_width: 3.5,
            poses: vec![ObstaclePose { center_s: 30.0, center_r: 0.0, heading: 0.0 }; steps + 1],
        };
        let mut scn = scenario(steps, vec![wall], 0.0);
        scn.ego.s_dot = 12.0; // cannot stop in time before the wall
        scn.a_lon_max = 1.0;
        scn.validate().unwrap();
        let tol = Tolerances::default();
        let result = plan(&scn, &tol).unwrap();
        assert!(!result.is_feasible());
        assert!(result.cost.is_none());
    }

    #[test]
    fn infinite_margin_requirement_keeps_only_transition_free_paths() {
        let scn = scenario(6, vec![slow_car_ahead(6)], f64::INFINITY);
        let tol = Tolerances::default();
        let result = plan(&scn, &tol).unwrap();
        if let Some(path) = &result.path {
            assert_eq!(result.margin.unwrap(), f64::INFINITY);
            let graph = build_graph(&scn, &tol);
            assert_eq!(graph.time_margin(path), f64::INFINITY);
        }
    }

    #[test]
    fn sweep_costs_nondecreasing_and_deterministic() {
        let scn = scenario(6, vec![slow_car_ahead(6)], 0.0);
        let tol = Tolerances::default();
        let rows = margin_sweep(&scn, &[0.0, 0.0, 2.0], &tol).unwrap();
        assert_eq!(rows[0].cost, rows[1].cost);
        assert_eq!(rows[0].path, rows[1].path);
        if let (Some(c0), Some(c2)) = (rows[0].cost, rows[2].cost) {
            assert!(c2 >= c0 - 1e-9);
        }
    }

    #[test]
    fn bound_below_descendant_cost() {
        let scn = scenario(5, vec![slow_car_ahead(5)], 0.0);
        let tol = Tolerances::default();
        let graph = build_graph(&scn, &tol);
        let result = plan_on_graph(&scn, &graph, &tol).unwrap();
        let traj = result.trajectory.unwrap();
        // Every prefix QP of the winning path must lower-bound its cost.
        for len in 2..traj.path.steps.len() {
            let prefix = SignaturePath::new(traj.path.steps[..len].to_vec());
            let qp = assemble(&scn, &graph, &prefix, &tol).unwrap();
            let bound = solve(&qp, &tol).trajectory().unwrap().cost;
            assert!(bound <= traj.cost + 1e-6, "prefix {len} bound {bound} > {}", traj.cost);
        }
    }

    #[test]
    fn oracle_refuses_over_cap() {
        let scn = scenario(6, vec![slow_car_ahead(6)], 0.0);
        let tol = Tolerances::default();
        let graph = build_graph(&scn, &tol);
        assert!(matches!(
            enumerate_oracle(&scn, &graph, 0.0, &tol, 1),
            Err(PlanError::OracleCapExceeded { .. })
        ));
    }
}
