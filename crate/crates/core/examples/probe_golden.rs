// Temporary diagnostic for the golden scenario geometry.

use stcell_core::golden::two_vehicle_overtake;
use stcell_core::graph::build_graph;
use stcell_core::planner::{plan_on_graph, path_label};
use stcell_core::Tolerances;

fn main() {
    let scn = two_vehicle_overtake();
    let tol = Tolerances::default();
    let t0 = std::time::Instant::now();
    let graph = build_graph(&scn, &tol);
    println!("graph built in {:?}", t0.elapsed());

    for p in 0..=graph.steps() {
        let sigs: Vec<String> = graph.layer(p).iter().map(|c| c.signature.label()).collect();
        println!("layer {:2} (t={:4.1}): {}", p, p as f64 * scn.tau, sigs.join(" "));
    }

    let all = graph.signatures();
    println!("\nvalidity sets:");
    for (i, s1) in all.iter().enumerate() {
        for s2 in all.iter().skip(i + 1) {
            let vs = graph.validity_set(s1, s2);
            println!("  ({}, {}): {:?}", s1.label(), s2.label(), vs.intervals);
        }
    }

    for m in [0.0, 1.0] {
        let mut variant = scn.clone();
        variant.margin_min = m;
        let t = std::time::Instant::now();
        let result = plan_on_graph(&variant, &graph, &tol).unwrap();
        println!(
            "\nmargin_min {m}: elapsed {:?} cost {:?} margin {:?}\n  path {:?}\n  stats {:?}",
            t.elapsed(),
            result.cost,
            result.margin,
            result.path.as_ref().map(path_label),
            result.stats
        );
    }
}
