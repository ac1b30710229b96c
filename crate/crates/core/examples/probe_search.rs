// Temporary diagnostic: replicate the branch-and-bound loop with per-solve
// iteration counts on the golden scenario.

use std::collections::{BTreeMap, BinaryHeap};
use std::time::Instant;

use nalgebra::DVector;
use stcell_core::golden::two_vehicle_overtake;
use stcell_core::graph::{build_graph, SignaturePath};
use stcell_core::partition::{locate, Signature};
use stcell_core::poly::Point2;
use stcell_core::qp::{assemble_bound, solve_detailed, SolveOutcome};
use stcell_core::Tolerances;

struct Node {
    prefix: Vec<Signature>,
    bound: f64,
}
impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == std::cmp::Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        o.bound.total_cmp(&self.bound).then_with(|| self.prefix.cmp(&o.prefix))
    }
}

fn main() {
    let margin_min: f64 = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(0.0);
    let scn = two_vehicle_overtake();
    let tol = Tolerances::default();
    let graph = build_graph(&scn, &tol);
    let start = locate(graph.layer(0), Point2::new(scn.ego.s, scn.ego.r), &tol).unwrap();
    let full_len = graph.layers().len();

    let mut cache: BTreeMap<Vec<Signature>, (f64, DVector<f64>, DVector<f64>)> = BTreeMap::new();
    let mut frontier = BinaryHeap::new();
    frontier.push(Node { prefix: vec![start], bound: 0.0 });
    let mut best = f64::INFINITY;
    let mut expanded = 0usize;
    let mut qp_solves = 0usize;
    let mut total_iters = 0usize;
    let t0 = Instant::now();

    while let Some(node) = frontier.pop() {
        let cutoff = if best.is_finite() { best - 1e-6 * (1.0 + best.abs()) } else { f64::INFINITY };
        if node.bound >= cutoff {
            continue;
        }
        if node.prefix.len() == full_len {
            println!("[{:8.2?}] incumbent cost {:.4} path {}", t0.elapsed(), node.bound, label(&node.prefix));
            best = node.bound;
            continue;
        }
        expanded += 1;
        let p = node.prefix.len() - 1;
        let last = node.prefix.last().unwrap().clone();
        for succ in graph.successors(p, &last) {
            let mut prefix = node.prefix.clone();
            prefix.push(succ.clone());
            if graph.time_margin(&SignaturePath::new(prefix.clone())) < margin_min {
                continue;
            }
            let bound = match cache.get(&prefix) {
                Some(&(b, _, _)) => b,
                None => {
                    let path = SignaturePath::new(prefix.clone());
                    let qp = assemble_bound(&scn, &graph, &path, &tol).unwrap();
                    let warm = cache.get(&node.prefix).and_then(|(_, z, y)| {
                        if z.len() != qp.num_vars() || y.len() > qp.num_rows() {
                            return None;
                        }
                        let mut y_pad = DVector::zeros(qp.num_rows());
                        y_pad.rows_mut(0, y.len()).copy_from(y);
                        Some((z.clone(), y_pad))
                    });
                    qp_solves += 1;
                    let ts = Instant::now();
                    let detail = solve_detailed(&qp, &tol, warm.as_ref().map(|(z, y)| (z, y)));
                    let dt = ts.elapsed();
                    total_iters += detail.iterations;
                    let b = match detail.outcome {
                        SolveOutcome::Optimal(t) => t.cost,
                        _ => f64::INFINITY,
                    };
                    println!(
                        "  solve {:28} warm {} iters {:5} {:9.2?} -> {:.4}",
                        label(&prefix),
                        warm.is_some(),
                        detail.iterations,
                        dt,
                        b
                    );
                    if b.is_finite() {
                        cache.insert(prefix.clone(), (b, detail.z, detail.y));
                    } else {
                        cache.insert(prefix.clone(), (b, DVector::zeros(0), DVector::zeros(0)));
                    }
                    b
                }
            };
            if bound.is_finite() && bound < cutoff {
                frontier.push(Node { prefix, bound });
            }
        }
    }
    println!(
        "done in {:?}: best {:.4} expanded {} qp_solves {} total_iters {}",
        t0.elapsed(),
        best,
        expanded,
        qp_solves,
        total_iters
    );
}

fn label(prefix: &[Signature]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut run = 0usize;
    let mut last: Option<String> = None;
    for sig in prefix {
        let l = sig.label();
        if last.as_ref() == Some(&l) {
            run += 1;
        } else {
            if let Some(prev) = last.take() {
                parts.push(format!("{prev}x{run}"));
            }
            last = Some(l);
            run = 1;
        }
    }
    if let Some(prev) = last {
        parts.push(format!("{prev}x{run}"));
    }
    parts.join("->")
}
