// Temporary diagnostic: the hard brx8->lb bound QP in isolation.

use std::time::Instant;

use nalgebra::DVector;
use stcell_core::admm::{solve_qp_warm, AdmmSettings, AdmmStatus};
use stcell_core::golden::two_vehicle_overtake;
use stcell_core::graph::{build_graph, SignaturePath};
use stcell_core::partition::locate;
use stcell_core::poly::Point2;
use stcell_core::qp::{assemble_bound, solve_detailed, SolveOutcome};
use stcell_core::Tolerances;

fn main() {
    let scn = two_vehicle_overtake();
    let tol = Tolerances::default();
    let graph = build_graph(&scn, &tol);
    let start = locate(graph.layer(0), Point2::new(scn.ego.s, scn.ego.r), &tol).unwrap();
    let lb = graph
        .signatures()
        .into_iter()
        .find(|s| s.label() == "lb")
        .unwrap();

    // Parent brx9 (prefix of 9 br steps), child brx8->lb.
    let mut steps = vec![start.clone(); 9];
    let parent = SignaturePath::new(steps.clone());
    steps[8] = lb.clone();
    let child = SignaturePath::new(steps);

    let pqp = assemble_bound(&scn, &graph, &parent, &tol).unwrap();
    let pdet = solve_detailed(&pqp, &tol, None);
    println!("parent iters {} outcome {:?}", pdet.iterations, kind(&pdet.outcome));

    let qp = assemble_bound(&scn, &graph, &child, &tol).unwrap();
    println!("child rows {} vars {}", qp.num_rows(), qp.num_vars());

    for (name, warm, settings) in [
        ("cold default", false, AdmmSettings { tol: tol.qp_tol, ..Default::default() }),
        ("warm default", true, AdmmSettings { tol: tol.qp_tol, ..Default::default() }),
        (
            "cold 200k",
            false,
            AdmmSettings { tol: tol.qp_tol, max_iter: 200_000, ..Default::default() },
        ),
        (
            "warm 200k",
            true,
            AdmmSettings { tol: tol.qp_tol, max_iter: 200_000, ..Default::default() },
        ),
        (
            "cold rho 1",
            false,
            AdmmSettings { tol: tol.qp_tol, rho: 1.0, ..Default::default() },
        ),
        (
            "cold eqscale 1e4",
            false,
            AdmmSettings { tol: tol.qp_tol, rho_eq_scale: 1e4, ..Default::default() },
        ),
    ] {
        let w = if warm {
            let mut y_pad = DVector::zeros(qp.num_rows());
            y_pad.rows_mut(0, pdet.y.len()).copy_from(&pdet.y);
            Some((pdet.z.clone(), y_pad))
        } else {
            None
        };
        let t = Instant::now();
        let res = solve_qp_warm(
            &qp.q,
            &qp.lin,
            &qp.a,
            &qp.l,
            &qp.u,
            &settings,
            w.as_ref().map(|(z, y)| (z, y)),
        );
        println!(
            "{name:18} status {:?} iters {:6} in {:9.2?} rp {:9.2e} rd {:9.2e}",
            res.status,
            res.iterations,
            t.elapsed(),
            res.primal_residual,
            res.dual_residual
        );
        if res.status == AdmmStatus::Solved {
            let traj = stcell_core::qp::trajectory_from_stack(
                &res.z,
                qp.layers,
                scn.ref_speed,
                child.clone(),
            );
            println!("{name:18} cost {:.4}", traj.cost);
        }
    }
}

fn kind(o: &SolveOutcome) -> String {
    match o {
        SolveOutcome::Optimal(t) => format!("opt {:.3}", t.cost),
        SolveOutcome::Infeasible => "infeasible".into(),
        SolveOutcome::IterationLimit => "iter-limit".into(),
    }
}
