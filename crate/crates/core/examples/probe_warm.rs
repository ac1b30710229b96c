// Temporary diagnostic: warm-started vs cold solves on feasible and
// infeasible one-step extensions.

use std::time::Instant;

use stcell_core::golden::two_vehicle_overtake;
use stcell_core::graph::{build_graph, SignaturePath};
use stcell_core::partition::locate;
use stcell_core::poly::Point2;
use stcell_core::qp::{assemble_bound, solve_detailed};
use stcell_core::Tolerances;

fn main() {
    let scn = two_vehicle_overtake();
    let tol = Tolerances::default();
    let graph = build_graph(&scn, &tol);
    let start = locate(graph.layer(0), Point2::new(scn.ego.s, scn.ego.r), &tol).unwrap();

    let parent = SignaturePath::new(vec![start.clone(), start.clone()]);
    let parent_qp = assemble_bound(&scn, &graph, &parent, &tol).unwrap();
    let parent_sol = solve_detailed(&parent_qp, &tol, None);
    println!("parent rows {}", parent_qp.num_rows());

    for sig in graph.successors(1, &start) {
        let mut steps = parent.steps.clone();
        steps.push(sig.clone());
        let child = SignaturePath::new(steps);
        let qp = assemble_bound(&scn, &graph, &child, &tol).unwrap();

        let t = Instant::now();
        let cold = solve_detailed(&qp, &tol, None);
        let cold_t = t.elapsed();

        let mut y_pad = nalgebra::DVector::zeros(qp.num_rows());
        y_pad.rows_mut(0, parent_sol.y.len()).copy_from(&parent_sol.y);
        let t = Instant::now();
        let warm = solve_detailed(&qp, &tol, Some((&parent_sol.z, &y_pad)));
        let warm_t = t.elapsed();

        println!(
            "child ..{}: cold {:?} in {:?} | warm {:?} in {:?}",
            sig.label(),
            kind(&cold.outcome),
            cold_t,
            kind(&warm.outcome),
            warm_t
        );
    }
}

fn kind(o: &stcell_core::qp::SolveOutcome) -> String {
    match o {
        stcell_core::qp::SolveOutcome::Optimal(t) => format!("opt {:.3}", t.cost),
        stcell_core::qp::SolveOutcome::Infeasible => "infeasible".into(),
        stcell_core::qp::SolveOutcome::IterationLimit => "iter-limit".into(),
    }
}
