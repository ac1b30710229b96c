//! Trajectory optimization over a fixed signature path: exact discrete
//! dynamics, constraint assembly into a boxed QP and post-hoc validation.
//!
//! The state is `x = (s, r, s_dot, r_dot)` with acceleration controls
//! `u = (a_lon, a_lat)`; with the signature path fixed, every constraint is
//! linear and the cost quadratic, so the whole problem is one convex QP.

use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::admm::{solve_qp_warm, AdmmSettings, AdmmStatus};
use crate::config::Tolerances;
use crate::graph::{SignaturePath, TransitionGraph};
use crate::poly::Point2;
use crate::scenario::Scenario;

pub type State = SVector<f64, 4>;
pub type Control = SVector<f64, 2>;

/// Exact zero-order-hold discretization of the double integrator at `tau`.
#[derive(Debug, Clone)]
pub struct DiscreteDynamics {
    pub a: SMatrix<f64, 4, 4>,
    pub b: SMatrix<f64, 4, 2>,
    pub tau: f64,
}

impl DiscreteDynamics {
    pub fn new(tau: f64) -> Self {
        let mut a = SMatrix::<f64, 4, 4>::identity();
        a[(0, 2)] = tau;
        a[(1, 3)] = tau;
        let mut b = SMatrix::<f64, 4, 2>::zeros();
        let h = 0.5 * tau * tau;
        b[(0, 0)] = h;
        b[(1, 1)] = h;
        b[(2, 0)] = tau;
        b[(3, 1)] = tau;
        Self { a, b, tau }
    }

    pub fn step(&self, x: &State, u: &Control) -> State {
        self.a * x + self.b * u
    }
}

#[derive(Debug, thiserror::Error)]
pub enum QpError {
    #[error("signature path step {0} has no cell in the graph layer")]
    MissingCell(usize),
    #[error("initial position lies outside the cell of the first signature")]
    StartOutsideCell,
    #[error("signature path must cover at least two layers")]
    PathTooShort,
}

/// Assembled boxed QP `min 1/2 z'Qz + q'z  s.t.  l <= Az <= u` over the
/// stacked variables `[x_0..x_K, u_0..u_{K-1}]`.
#[derive(Debug, Clone)]
pub struct TrajectoryQP {
    pub layers: usize,
    pub q: DMatrix<f64>,
    pub lin: DVector<f64>,
    pub a: DMatrix<f64>,
    pub l: DVector<f64>,
    pub u: DVector<f64>,
    pub path: SignaturePath,
    ref_speed: f64,
}

impl TrajectoryQP {
    pub fn num_vars(&self) -> usize {
        4 * self.layers + 2 * (self.layers - 1)
    }

    pub fn num_rows(&self) -> usize {
        self.a.nrows()
    }

    fn state_index(p: usize) -> usize {
        4 * p
    }
}

/// Build the QP for a (possibly partial) signature path starting at layer 0.
/// The terminal state is free; only nonnegative stage costs accumulate, so
/// a prefix QP lower-bounds every extension.
pub fn assemble(
    scn: &Scenario,
    graph: &TransitionGraph,
    path: &SignaturePath,
    tol: &Tolerances,
) -> Result<TrajectoryQP, QpError> {
    assemble_inner(scn, graph, path, path.steps.len(), tol)
}

/// Relaxation used as the branch-and-bound lower bound: the horizon-length
/// QP (dynamics, control, slip and forward rows everywhere) with cell rows
/// imposed only on the prefix steps. Compared to truncating the horizon at
/// the prefix this keeps the tail's stage costs in the objective, which
/// tightens the bound toward the true path cost while remaining admissible:
/// every completion of the prefix only adds constraints.
pub fn assemble_bound(
    scn: &Scenario,
    graph: &TransitionGraph,
    prefix: &SignaturePath,
    tol: &Tolerances,
) -> Result<TrajectoryQP, QpError> {
    assemble_inner(scn, graph, prefix, graph.layers().len(), tol)
}

/// Relaxation applied to the incoming-cell rows at a transition knot, and
/// covered again by the validation slack. Well above `eps_strict` so the
/// corridor between a strict face and its relaxed opposite stays wide
/// compared to the solver tolerance, yet far below the safety pad.
fn transition_relax(tol: &Tolerances) -> f64 {
    100.0 * tol.eps_strict
}

fn assemble_inner(
    scn: &Scenario,
    graph: &TransitionGraph,
    path: &SignaturePath,
    layers: usize,
    tol: &Tolerances,
) -> Result<TrajectoryQP, QpError> {
    if path.steps.len() < 2 || layers < path.steps.len() {
        return Err(QpError::PathTooShort);
    }
    let cells: Vec<_> = path
        .steps
        .iter()
        .enumerate()
        .map(|(p, sig)| graph.cell(p, sig).ok_or(QpError::MissingCell(p)))
        .collect::<Result<_, _>>()?;
    let x0 = State::new(scn.ego.s, scn.ego.r, scn.ego.s_dot, scn.ego.r_dot);
    if !cells[0].poly.contains(Point2::new(x0[0], x0[1]), tol.eps_lp + tol.eps_strict) {
        return Err(QpError::StartOutsideCell);
    }

    // At a signature change the knot before the transition must also satisfy
    // the incoming cell, evaluated at the same step and relaxed so its strict
    // shared face stays feasible. Without these rows the optimizer happily
    // cuts the corner of a moving obstacle: it clears the lateral face exactly
    // at the next knot while the longitudinal position is already past the
    // cell it came from. Pinning the crossing at the earlier step also makes
    // QP feasibility of a transition line up with the adjacency test the graph
    // ran at that step.
    let transition_slack = transition_relax(tol);
    let transition_cells: Vec<Option<&crate::partition::CellSlice>> = (0..path.steps.len())
        .map(|p| {
            if p + 1 >= path.steps.len() || path.steps[p] == path.steps[p + 1] {
                None
            } else {
                graph.cell(p, &path.steps[p + 1])
            }
        })
        .collect();

    // Each relaxed incoming-cell row either shares a direction with a row of
    // the step's own cell (the two merge into one row; an opposing pair
    // becomes a single two-sided corridor row instead of a nearly parallel
    // pair that would leave the dual degenerate) or it stands alone and gets
    // its own row.
    enum TransRow {
        TightenUpper(usize, f64),
        SetLower(usize, f64),
        Append,
    }
    let trans_plans: Vec<Vec<TransRow>> = transition_cells
        .iter()
        .enumerate()
        .map(|(p, next)| {
            let Some(next) = next else { return Vec::new() };
            let own = cells[p].poly.rows();
            next.poly
                .rows()
                .iter()
                .map(|hp| {
                    let relaxed = hp.offset + transition_slack;
                    for (j, own_hp) in own.iter().enumerate() {
                        if own_hp.normal == hp.normal {
                            return TransRow::TightenUpper(j, relaxed.min(own_hp.offset));
                        }
                        if own_hp.normal == [-hp.normal[0], -hp.normal[1]] {
                            return TransRow::SetLower(j, -relaxed);
                        }
                    }
                    TransRow::Append
                })
                .collect()
        })
        .collect();

    let ctrls = layers - 1;
    let n = 4 * layers + 2 * ctrls;
    let cell_rows: usize = cells.iter().map(|c| c.poly.rows().len()).sum();
    let trans_rows: usize = trans_plans
        .iter()
        .flatten()
        .filter(|plan| matches!(plan, TransRow::Append))
        .count();
    let m = 4 + 4 * ctrls + 2 * ctrls + 3 * layers + cell_rows + trans_rows;

    let mut a = DMatrix::zeros(m, n);
    let mut l = DVector::from_element(m, f64::NEG_INFINITY);
    let mut u = DVector::from_element(m, f64::INFINITY);
    let dyn_ = DiscreteDynamics::new(scn.tau);
    let ctrl_base = 4 * layers;
    let mut row = 0;

    // Initial state pin.
    for i in 0..4 {
        a[(row, i)] = 1.0;
        l[row] = x0[i];
        u[row] = x0[i];
        row += 1;
    }
    // Dynamics: x_{p+1} - A x_p - B u_p = 0.
    for p in 0..ctrls {
        for i in 0..4 {
            a[(row, 4 * (p + 1) + i)] = 1.0;
            for j in 0..4 {
                a[(row, 4 * p + j)] -= dyn_.a[(i, j)];
            }
            for j in 0..2 {
                a[(row, ctrl_base + 2 * p + j)] -= dyn_.b[(i, j)];
            }
            l[row] = 0.0;
            u[row] = 0.0;
            row += 1;
        }
    }
    // Control boxes.
    for p in 0..ctrls {
        a[(row, ctrl_base + 2 * p)] = 1.0;
        l[row] = -scn.a_lon_max;
        u[row] = scn.a_lon_max;
        row += 1;
        a[(row, ctrl_base + 2 * p + 1)] = 1.0;
        l[row] = -scn.a_lat_max;
        u[row] = scn.a_lat_max;
        row += 1;
    }
    // Slip |r_dot| <= alpha s_dot and forward motion, per layer.
    for p in 0..layers {
        let i = 4 * p;
        a[(row, i + 3)] = 1.0;
        a[(row, i + 2)] = -scn.alpha;
        u[row] = 0.0;
        row += 1;
        a[(row, i + 3)] = 1.0;
        a[(row, i + 2)] = scn.alpha;
        l[row] = 0.0;
        row += 1;
        a[(row, i + 2)] = 1.0;
        l[row] = 0.0;
        row += 1;
    }
    // Cell membership on (s_p, r_p), then the relaxed incoming-cell rows
    // when step p+1 enters a different cell. Grouping both by step keeps
    // the coefficient rows of every prefix QP a prefix of its extensions'
    // rows, which the planner's warm starts rely on: extending a path only
    // appends rows (and possibly tightens bounds of the old last step's
    // cell rows through the merge above).
    for (p, cell) in cells.iter().enumerate() {
        let cell_base = row;
        for hp in cell.poly.rows() {
            a[(row, 4 * p)] = hp.normal[0];
            a[(row, 4 * p + 1)] = hp.normal[1];
            u[row] = hp.offset;
            row += 1;
        }
        if let Some(next) = transition_cells[p] {
            for (hp, plan) in next.poly.rows().iter().zip(&trans_plans[p]) {
                match *plan {
                    TransRow::TightenUpper(j, bound) => u[cell_base + j] = bound,
                    TransRow::SetLower(j, bound) => l[cell_base + j] = bound,
                    TransRow::Append => {
                        a[(row, 4 * p)] = hp.normal[0];
                        a[(row, 4 * p + 1)] = hp.normal[1];
                        u[row] = hp.offset + transition_slack;
                        row += 1;
                    }
                }
            }
        }
    }
    debug_assert_eq!(row, m);

    // Cost: sum over layers of (s_dot - ref)^2 + r_dot^2 + r^2.
    let mut q = DMatrix::zeros(n, n);
    let mut lin = DVector::zeros(n);
    for p in 0..layers {
        let i = 4 * p;
        q[(i + 1, i + 1)] = 2.0;
        q[(i + 2, i + 2)] = 2.0;
        q[(i + 3, i + 3)] = 2.0;
        lin[i + 2] = -2.0 * scn.ref_speed;
    }

    Ok(TrajectoryQP {
        layers,
        q,
        lin,
        a,
        l,
        u,
        path: path.clone(),
        ref_speed: scn.ref_speed,
    })
}

/// A solved trajectory over (a prefix of) the horizon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<[f64; 4]>,
    pub controls: Vec<[f64; 2]>,
    pub cost: f64,
    pub path: SignaturePath,
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Optimal(Trajectory),
    Infeasible,
    /// Iteration cap exhausted before reaching the residual tolerances;
    /// reported distinctly from infeasibility.
    IterationLimit,
}

impl SolveOutcome {
    pub fn trajectory(&self) -> Option<&Trajectory> {
        match self {
            SolveOutcome::Optimal(t) => Some(t),
            _ => None,
        }
    }
}

pub fn solve(qp: &TrajectoryQP, tol: &Tolerances) -> SolveOutcome {
    solve_detailed(qp, tol, None).outcome
}

/// Solution with the raw stacked primal/dual vectors kept around, so callers
/// can warm-start related solves (the planner reuses a prefix solution for
/// its one-step extensions, whose rows are the prefix rows plus appended
/// cell rows).
pub struct SolveDetail {
    pub outcome: SolveOutcome,
    pub z: DVector<f64>,
    pub y: DVector<f64>,
    pub iterations: usize,
}

pub fn solve_detailed(
    qp: &TrajectoryQP,
    tol: &Tolerances,
    warm: Option<(&DVector<f64>, &DVector<f64>)>,
) -> SolveDetail {
    let settings = AdmmSettings { tol: tol.qp_tol, ..AdmmSettings::default() };
    let res = solve_qp_warm(&qp.q, &qp.lin, &qp.a, &qp.l, &qp.u, &settings, warm);
    let outcome = match res.status {
        AdmmStatus::PrimalInfeasible => SolveOutcome::Infeasible,
        AdmmStatus::IterationLimit => SolveOutcome::IterationLimit,
        AdmmStatus::Solved => {
            SolveOutcome::Optimal(trajectory_from_stack(&res.z, qp.layers, qp.ref_speed, qp.path.clone()))
        }
    };
    SolveDetail { outcome, z: res.z, y: res.y, iterations: res.iterations }
}

/// Unpack a stacked `[x_0..x_K, u_0..u_{K-1}]` solution into a trajectory.
pub fn trajectory_from_stack(
    z: &DVector<f64>,
    layers: usize,
    ref_speed: f64,
    path: SignaturePath,
) -> Trajectory {
    let mut states = Vec::with_capacity(layers);
    for p in 0..layers {
        let i = TrajectoryQP::state_index(p);
        states.push([z[i], z[i + 1], z[i + 2], z[i + 3]]);
    }
    let ctrl_base = 4 * layers;
    let mut controls = Vec::with_capacity(layers - 1);
    for p in 0..layers - 1 {
        let i = ctrl_base + 2 * p;
        controls.push([z[i], z[i + 1]]);
    }
    let cost = states
        .iter()
        .map(|x| (x[2] - ref_speed).powi(2) + x[3].powi(2) + x[1].powi(2))
        .sum();
    Trajectory { states, controls, cost, path }
}

/// Diagnostic report of `validate_trajectory`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub endpoints_ok: bool,
    pub interpolation_ok: bool,
    pub slip_ok: bool,
    pub controls_ok: bool,
    pub dynamics_ok: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.endpoints_ok
            && self.interpolation_ok
            && self.slip_ok
            && self.controls_ok
            && self.dynamics_ok
    }
}

/// Samples checked per inter-step interval by the interpolation test.
pub const INTERP_SAMPLES: usize = 9;

/// Check a trajectory against the scenario: endpoint-in-cell at every layer,
/// quadratically interpolated positions inside the corridor of each interval,
/// slip and control bounds, and the dynamics recursion.
///
/// The corridor of interval `p` is the union of the two bracketing cells,
/// where each cell's spatial extent over the interval is sampled at both of
/// the bracketing steps: the obstacle geometry moves between steps, so a
/// trajectory riding a cell face tracks a boundary that only the step `p+1`
/// evaluation of the same cell contains.
pub fn validate_trajectory(
    scn: &Scenario,
    graph: &TransitionGraph,
    traj: &Trajectory,
    tol: &Tolerances,
) -> ValidationReport {
    let mut report = ValidationReport {
        endpoints_ok: true,
        interpolation_ok: true,
        slip_ok: true,
        controls_ok: true,
        dynamics_ok: true,
        failures: Vec::new(),
    };
    let slack = 10.0 * tol.qp_tol + tol.eps_strict + transition_relax(tol);

    for (p, (sig, x)) in traj.path.steps.iter().zip(&traj.states).enumerate() {
        let z = Point2::new(x[0], x[1]);
        match graph.cell(p, sig) {
            Some(cell) if cell.poly.contains(z, slack) => {}
            _ => {
                report.endpoints_ok = false;
                report.failures.push(format!("layer {p}: position outside cell {sig}"));
            }
        }
        if x[3].abs() > scn.alpha * x[2] + slack {
            report.slip_ok = false;
            report.failures.push(format!("layer {p}: slip bound violated"));
        }
        if x[2] < -slack {
            report.slip_ok = false;
            report.failures.push(format!("layer {p}: backward motion"));
        }
    }
    for (p, u) in traj.controls.iter().enumerate() {
        if u[0].abs() > scn.a_lon_max + slack || u[1].abs() > scn.a_lat_max + slack {
            report.controls_ok = false;
            report.failures.push(format!("step {p}: control outside box"));
        }
    }
    let dyn_ = DiscreteDynamics::new(scn.tau);
    for p in 0..traj.controls.len() {
        let x = State::from_row_slice(&traj.states[p]);
        let u = Control::from_row_slice(&traj.controls[p]);
        let pred = dyn_.step(&x, &u);
        let next = State::from_row_slice(&traj.states[p + 1]);
        if (pred - next).amax() > 1e-6 {
            report.dynamics_ok = false;
            report.failures.push(format!("step {p}: dynamics residual too large"));
        }
    }
    // Interpolation: position under ZOH controls is quadratic in time.
    for p in 0..traj.controls.len() {
        let x = &traj.states[p];
        let u = &traj.controls[p];
        let here = traj.path.steps[p].clone();
        let next = traj.path.steps.get(p + 1);
        for k in 1..=INTERP_SAMPLES {
            let dt = scn.tau * k as f64 / (INTERP_SAMPLES + 1) as f64;
            let z = Point2::new(
                x[0] + x[2] * dt + 0.5 * u[0] * dt * dt,
                x[1] + x[3] * dt + 0.5 * u[1] * dt * dt,
            );
            let in_cell = |sig: &crate::partition::Signature| {
                [p, p + 1].iter().any(|&q| {
                    graph.cell(q, sig).is_some_and(|c| c.poly.contains(z, slack))
                })
            };
            if !in_cell(&here) && !next.is_some_and(in_cell) {
                report.interpolation_ok = false;
                report
                    .failures
                    .push(format!("step {p}: interpolated position {z:?} leaves the corridor"));
                break;
            }
        }
    }
    report
}
