// Temporary diagnostic: settings grid on the margin-1 full-path QP.
use std::time::Instant;
use stcell_core::admm::{solve_qp_warm, AdmmSettings};
use stcell_core::golden::two_vehicle_overtake;
use stcell_core::graph::build_graph;
use stcell_core::planner::plan_on_graph;
use stcell_core::qp::assemble;
use stcell_core::Tolerances;

fn main() {
    let scn = two_vehicle_overtake();
    let tol = Tolerances::default();
    let graph = build_graph(&scn, &tol);
    for margin in [0.0, 1.0] {
        let mut variant = scn.clone();
        variant.margin_min = margin;
        let result = plan_on_graph(&variant, &graph, &tol).unwrap();
        let path = result.path.unwrap();
        let qp = assemble(&scn, &graph, &path, &tol).unwrap();
        for rho in [0.1, 0.3, 1.0, 3.0] {
            for check in [10usize, 25] {
                let s = AdmmSettings { tol: tol.qp_tol, rho, check_every: check, ..Default::default() };
                let mut best = f64::INFINITY;
                let mut iters = 0;
                for _ in 0..3 {
                    let t = Instant::now();
                    let res = solve_qp_warm(&qp.q, &qp.lin, &qp.a, &qp.l, &qp.u, &s, None);
                    best = best.min(t.elapsed().as_secs_f64() * 1e3);
                    iters = res.iterations;
                }
                println!("margin {margin} rho {rho:4} check {check:3}: best {best:7.2}ms iters {iters}");
            }
        }
    }
}
