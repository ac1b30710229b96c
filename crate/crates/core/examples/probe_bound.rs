// Temporary diagnostic: timing of single full-path QP solves.
use std::time::Instant;
use stcell_core::golden::two_vehicle_overtake;
use stcell_core::graph::build_graph;
use stcell_core::planner::plan_on_graph;
use stcell_core::qp::{assemble, solve_detailed};
use stcell_core::Tolerances;

fn main() {
    let scn = two_vehicle_overtake();
    let tol = Tolerances::default();
    let graph = build_graph(&scn, &tol);
    for m in [0.0, 1.0] {
        let mut variant = scn.clone();
        variant.margin_min = m;
        let result = plan_on_graph(&variant, &graph, &tol).unwrap();
        let path = result.path.unwrap();
        let qp = assemble(&scn, &graph, &path, &tol).unwrap();
        for _ in 0..3 {
            let t = Instant::now();
            let det = solve_detailed(&qp, &tol, None);
            println!("margin {m}: single QP {:?} iters {}", t.elapsed(), det.iterations);
        }
    }
}
