//! Seidel's randomized incremental linear programming for dimensions 2 and 3.
//!
//! Expected linear time in the number of constraints at fixed dimension.
//! Every solve works inside an implicit bounding box, so unbounded inputs
//! come back clipped rather than failing. The random row order is driven by
//! a caller-supplied seed, making results reproducible bit for bit.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Half extent of the implicit bounding box. Scenario geometry lives within
/// a few hundred meters, so this never binds for feasible queries.
const BOX_HALF: f64 = 1.0e7;

/// Absolute slack when testing whether the running optimum violates a row.
const VIOLATION_TOL: f64 = 1.0e-9;

/// Coefficient magnitude below which a projected row is treated as constant.
const DEGENERATE_COEFF: f64 = 1.0e-12;

#[derive(Debug, Clone)]
pub struct LpProblem {
    dim: usize,
    objective: Vec<f64>,
    rows: Vec<(Vec<f64>, f64)>,
}

impl LpProblem {
    pub fn new(dim: usize, objective: &[f64]) -> Self {
        assert!(dim >= 1 && dim <= 3, "solver supports dimensions 1..=3");
        assert_eq!(objective.len(), dim);
        Self { dim, objective: objective.to_vec(), rows: Vec::new() }
    }

    /// Add `coeffs . x <= rhs`.
    pub fn add_row(&mut self, coeffs: &[f64], rhs: f64) {
        assert_eq!(coeffs.len(), self.dim);
        self.rows.push((coeffs.to_vec(), rhs));
    }
}

/// Maximize the objective over the rows intersected with the working box.
/// Returns `None` when the system is infeasible.
pub fn seidel_maximize(problem: &LpProblem, seed: u64) -> Option<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    solve(problem.dim, &problem.objective, &problem.rows, BOX_HALF, &mut rng)
}

fn solve(
    dim: usize,
    c: &[f64],
    rows: &[(Vec<f64>, f64)],
    box_half: f64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<f64>> {
    if dim == 1 {
        return solve_1d(c[0], rows, box_half);
    }

    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(rng);

    // Optimum of the box alone: the corner selected by the objective.
    let mut x: Vec<f64> = c.iter().map(|&ci| if ci >= 0.0 { box_half } else { -box_half }).collect();

    let mut processed: Vec<usize> = Vec::with_capacity(rows.len());
    for &idx in &order {
        let (a, b) = &rows[idx];
        let slack = dot(a, &x) - b;
        if slack > VIOLATION_TOL {
            // The new optimum lies on this row's hyperplane; recurse there.
            x = solve_on_hyperplane(dim, c, rows, &processed, a, *b, box_half, rng)?;
        }
        processed.push(idx);
    }
    Some(x)
}

#[allow(clippy::too_many_arguments)]
fn solve_on_hyperplane(
    dim: usize,
    c: &[f64],
    rows: &[(Vec<f64>, f64)],
    processed: &[usize],
    a: &[f64],
    b: f64,
    box_half: f64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<f64>> {
    let norm = dot(a, a).sqrt();
    if norm < DEGENERATE_COEFF {
        // A violated constant row: 0 > b, so the system is infeasible.
        return None;
    }
    let unit: Vec<f64> = a.iter().map(|v| v / norm).collect();
    let rhs = b / norm;
    let p0: Vec<f64> = unit.iter().map(|v| v * rhs).collect();
    let basis = null_basis(&unit);

    let sub_dim = dim - 1;
    let mut sub_c = vec![0.0; sub_dim];
    for (j, e) in basis.iter().enumerate() {
        sub_c[j] = dot(c, e);
    }

    let mut sub_rows: Vec<(Vec<f64>, f64)> = Vec::with_capacity(processed.len() + 2 * dim);
    let project = |g: &[f64], h: f64, out: &mut Vec<(Vec<f64>, f64)>| {
        let mut coeffs = vec![0.0; sub_dim];
        for (j, e) in basis.iter().enumerate() {
            coeffs[j] = dot(g, e);
        }
        let shifted = h - dot(g, &p0);
        out.push((coeffs, shifted));
    };
    for &idx in processed {
        let (g, h) = &rows[idx];
        project(g, *h, &mut sub_rows);
    }
    // The parent box becomes ordinary rows of the subproblem.
    for i in 0..dim {
        let mut g = vec![0.0; dim];
        g[i] = 1.0;
        project(&g, box_half, &mut sub_rows);
        g[i] = -1.0;
        project(&g, box_half, &mut sub_rows);
    }

    let y = solve(sub_dim, &sub_c, &sub_rows, 2.0 * box_half, rng)?;
    let mut x = p0;
    for (j, e) in basis.iter().enumerate() {
        for (xi, ei) in x.iter_mut().zip(e.iter()) {
            *xi += y[j] * ei;
        }
    }
    Some(x)
}

fn solve_1d(c: f64, rows: &[(Vec<f64>, f64)], box_half: f64) -> Option<Vec<f64>> {
    let mut lo = -box_half;
    let mut hi = box_half;
    for (a, b) in rows {
        let coeff = a[0];
        if coeff.abs() < DEGENERATE_COEFF {
            if *b < -VIOLATION_TOL {
                return None;
            }
            continue;
        }
        let bound = b / coeff;
        if coeff > 0.0 {
            hi = hi.min(bound);
        } else {
            lo = lo.max(bound);
        }
    }
    if lo > hi + VIOLATION_TOL {
        return None;
    }
    let hi = hi.max(lo); // collapse the closure-contact case to a point
    Some(vec![if c >= 0.0 { hi } else { lo }])
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `a`.
fn null_basis(a: &[f64]) -> Vec<Vec<f64>> {
    match a.len() {
        2 => vec![vec![-a[1], a[0]]],
        3 => {
            // Seed with the axis least aligned with `a`.
            let (mut seed_axis, mut best) = (0usize, f64::INFINITY);
            for (i, v) in a.iter().enumerate() {
                if v.abs() < best {
                    best = v.abs();
                    seed_axis = i;
                }
            }
            let mut t = vec![0.0; 3];
            t[seed_axis] = 1.0;
            let proj = dot(&t, a);
            let mut e1: Vec<f64> = t.iter().zip(a.iter()).map(|(ti, ai)| ti - proj * ai).collect();
            let n = dot(&e1, &e1).sqrt();
            for v in e1.iter_mut() {
                *v /= n;
            }
            let e2 = vec![
                a[1] * e1[2] - a[2] * e1[1],
                a[2] * e1[0] - a[0] * e1[2],
                a[0] * e1[1] - a[1] * e1[0],
            ];
            vec![e1, e2]
        }
        _ => unreachable!("dimension bounded by 3"),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn maximizes_over_a_triangle() {
        // x + y <= 1, x >= 0, y >= 0; maximize x + 2y -> (0, 1).
        let mut p = LpProblem::new(2, &[1.0, 2.0]);
        p.add_row(&[1.0, 1.0], 1.0);
        p.add_row(&[-1.0, 0.0], 0.0);
        p.add_row(&[0.0, -1.0], 0.0);
        let x = seidel_maximize(&p, 0).expect("feasible");
        assert_relative_eq!(x[0], 0.0, epsilon = 1e-7);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-7);
    }

    #[test]
    fn detects_infeasible_strip() {
        let mut p = LpProblem::new(2, &[0.0, 0.0]);
        p.add_row(&[1.0, 0.0], -1.0);
        p.add_row(&[-1.0, 0.0], -1.0);
        assert_eq!(seidel_maximize(&p, 0), None);
    }

    #[test]
    fn three_dimensional_solve() {
        // Maximize z in the unit cube cut by x + y + z <= 1.5.
        let mut p = LpProblem::new(3, &[0.0, 0.0, 1.0]);
        for i in 0..3 {
            let mut g = [0.0; 3];
            g[i] = 1.0;
            p.add_row(&g, 1.0);
            g[i] = -1.0;
            p.add_row(&g, 0.0);
        }
        p.add_row(&[1.0, 1.0, 1.0], 1.5);
        let x = seidel_maximize(&p, 9).expect("feasible");
        assert_relative_eq!(x[2], 1.0, epsilon = 1e-7);
    }

    #[test]
    fn deterministic_under_fixed_seed() {
        let mut p = LpProblem::new(2, &[1.0, 1.0]);
        p.add_row(&[1.0, 2.0], 4.0);
        p.add_row(&[3.0, -1.0], 6.0);
        p.add_row(&[-1.0, -1.0], 1.0);
        let a = seidel_maximize(&p, 1234).unwrap();
        let b = seidel_maximize(&p, 1234).unwrap();
        assert_eq!(a, b);
    }
}
