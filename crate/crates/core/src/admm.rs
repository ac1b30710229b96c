//! Dense operator-splitting QP solver:
//!
//! ```text
//! minimize   1/2 z' Q z + q' z
//! subject to l <= A z <= u
//! ```
//!
//! ADMM iteration with over-relaxation, Ruiz equilibration, deterministic
//! fixed step parameters, periodic rho adaptation, infeasibility
//! certificates and an active-set polish step. Convergence is always judged
//! on the *unscaled* residuals. Problem sizes here are a few hundred
//! variables, so dense Cholesky factorization is the right tool.

use nalgebra::{Cholesky, DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct AdmmSettings {
    /// Absolute tolerance on primal/dual residuals (infinity norm).
    pub tol: f64,
    pub max_iter: usize,
    pub rho: f64,
    pub sigma: f64,
    pub alpha: f64,
    /// Equality rows (l == u) get `rho * rho_eq_scale`.
    pub rho_eq_scale: f64,
    pub check_every: usize,
    pub scaling_iters: usize,
}

impl Default for AdmmSettings {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 20_000,
            rho: 0.1,
            sigma: 1e-6,
            alpha: 1.6,
            rho_eq_scale: 1e3,
            check_every: 10,
            scaling_iters: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdmmStatus {
    Solved,
    PrimalInfeasible,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct AdmmResult {
    pub status: AdmmStatus,
    pub z: DVector<f64>,
    pub y: DVector<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

fn project(v: &DVector<f64>, l: &DVector<f64>, u: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(v.len(), |i, _| v[i].clamp(l[i], u[i]))
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Ruiz equilibration of the stacked KKT matrix plus OSQP-style cost
/// scaling. Returns `(D, E, c)` with the scaled problem written in place.
fn equilibrate(
    q: &mut DMatrix<f64>,
    lin: &mut DVector<f64>,
    a: &mut DMatrix<f64>,
    l: &mut DVector<f64>,
    u: &mut DVector<f64>,
    iters: usize,
) -> (DVector<f64>, DVector<f64>, f64) {
    let n = q.nrows();
    let m = a.nrows();
    let mut d = DVector::from_element(n, 1.0);
    let mut e = DVector::from_element(m, 1.0);
    let mut c = 1.0;

    let guard = |v: f64| if v < 1e-8 { 1.0 } else { v };
    for _ in 0..iters {
        let mut delta = DVector::from_element(n, 1.0);
        for j in 0..n {
            let mut norm = 0.0_f64;
            for i in 0..n {
                norm = norm.max(q[(i, j)].abs());
            }
            for i in 0..m {
                norm = norm.max(a[(i, j)].abs());
            }
            delta[j] = 1.0 / guard(norm).sqrt();
        }
        let mut eps = DVector::from_element(m, 1.0);
        for i in 0..m {
            let mut norm = 0.0_f64;
            for j in 0..n {
                norm = norm.max(a[(i, j)].abs());
            }
            eps[i] = 1.0 / guard(norm).sqrt();
        }
        for i in 0..n {
            for j in 0..n {
                q[(i, j)] *= delta[i] * delta[j];
            }
            lin[i] *= delta[i];
            d[i] *= delta[i];
        }
        for i in 0..m {
            for j in 0..n {
                a[(i, j)] *= eps[i] * delta[j];
            }
            l[i] *= eps[i];
            u[i] *= eps[i];
            e[i] *= eps[i];
        }
        // Cost scaling toward unit-norm objective.
        let mut mean_col = 0.0;
        for j in 0..n {
            let mut norm = 0.0_f64;
            for i in 0..n {
                norm = norm.max(q[(i, j)].abs());
            }
            mean_col += norm;
        }
        mean_col /= n as f64;
        let gamma = 1.0 / guard(mean_col.max(inf_norm(lin)));
        *q *= gamma;
        *lin *= gamma;
        c *= gamma;
    }
    (d, e, c)
}

struct Factored {
    chol: Cholesky<f64, nalgebra::Dyn>,
}

fn factorize(
    q: &DMatrix<f64>,
    a: &DMatrix<f64>,
    rho_vec: &DVector<f64>,
    sigma: f64,
) -> Option<Factored> {
    let n = q.nrows();
    let mut k = q.clone();
    for i in 0..n {
        k[(i, i)] += sigma;
    }
    // K += A' diag(rho) A
    let mut scaled = a.clone();
    for (i, mut row) in scaled.row_iter_mut().enumerate() {
        row *= rho_vec[i];
    }
    k += a.transpose() * scaled;
    Cholesky::new(k).map(|chol| Factored { chol })
}

/// Solve the boxed QP. `l[i] == u[i]` marks an equality row.
pub fn solve_qp(
    q0: &DMatrix<f64>,
    lin0: &DVector<f64>,
    a0: &DMatrix<f64>,
    l0: &DVector<f64>,
    u0: &DVector<f64>,
    settings: &AdmmSettings,
) -> AdmmResult {
    solve_qp_warm(q0, lin0, a0, l0, u0, settings, None)
}

/// [`solve_qp`] with an optional warm start `(z, y)` in unscaled units.
/// Passing the solution of a closely related problem (here: the parent
/// prefix in the planner's search tree) typically cuts iterations by an
/// order of magnitude. Deterministic for fixed inputs.
pub fn solve_qp_warm(
    q0: &DMatrix<f64>,
    lin0: &DVector<f64>,
    a0: &DMatrix<f64>,
    l0: &DVector<f64>,
    u0: &DVector<f64>,
    settings: &AdmmSettings,
    warm: Option<(&DVector<f64>, &DVector<f64>)>,
) -> AdmmResult {
    let n = q0.nrows();
    let m = a0.nrows();
    debug_assert_eq!(lin0.len(), n);
    debug_assert_eq!(l0.len(), m);
    debug_assert_eq!(u0.len(), m);

    if m == 0 {
        // Unconstrained: minimize directly (Q is PSD; regularize mildly).
        let mut k = q0.clone();
        for i in 0..n {
            k[(i, i)] += settings.sigma;
        }
        let z = Cholesky::new(k)
            .map(|c| c.solve(&(-lin0)))
            .unwrap_or_else(|| DVector::zeros(n));
        return AdmmResult {
            status: AdmmStatus::Solved,
            z,
            y: DVector::zeros(0),
            iterations: 0,
            primal_residual: 0.0,
            dual_residual: 0.0,
        };
    }

    let mut q = q0.clone();
    let mut lin = lin0.clone();
    let mut a = a0.clone();
    let mut l = l0.clone();
    let mut u = u0.clone();
    let (d, e, c) = equilibrate(&mut q, &mut lin, &mut a, &mut l, &mut u, settings.scaling_iters);

    let mut rho = settings.rho;
    let rho_vec = |rho: f64| {
        DVector::from_fn(m, |i, _| {
            if (u[i] - l[i]).abs() < 1e-14 {
                rho * settings.rho_eq_scale
            } else {
                rho
            }
        })
    };
    let mut rv = rho_vec(rho);
    let mut rv_inv = rv.map(|v| 1.0 / v);
    let mut fact = match factorize(&q, &a, &rv, settings.sigma) {
        Some(f) => f,
        None => {
            return AdmmResult {
                status: AdmmStatus::IterationLimit,
                z: DVector::zeros(n),
                y: DVector::zeros(m),
                iterations: 0,
                primal_residual: f64::INFINITY,
                dual_residual: f64::INFINITY,
            }
        }
    };

    // Warm start maps the unscaled iterates into the equilibrated space:
    // z_u = D z and y_u = E y / c.
    let (mut z, mut y) = match warm {
        Some((z0, y0)) => {
            debug_assert_eq!(z0.len(), n);
            debug_assert_eq!(y0.len(), m);
            (
                DVector::from_fn(n, |i, _| z0[i] / d[i]),
                DVector::from_fn(m, |i, _| y0[i] * c / e[i]),
            )
        }
        None => (DVector::zeros(n), DVector::zeros(m)),
    };
    let mut zeta: DVector<f64> = project(&(&a * &z), &l, &u);
    // Hoisted transposes: materializing them inside the loop dominates the
    // per-iteration cost at these sizes.
    let at = a.transpose();
    let a0t = a0.transpose();

    let mut status = AdmmStatus::IterationLimit;
    let mut iterations = settings.max_iter;
    let mut r_prim = f64::INFINITY;
    let mut r_dual = f64::INFINITY;
    let mut polished: Option<(DVector<f64>, DVector<f64>, f64, f64)> = None;
    let mut next_attempt = 0usize;
    let mut attempt_backoff = settings.check_every;

    // Residuals are judged unscaled: z_u = D z, y_u = E y / c.
    let unscale_z = |z: &DVector<f64>| z.component_mul(&d);
    let unscale_y = |y: &DVector<f64>| y.component_mul(&e) / c;

    for it in 0..settings.max_iter {
        // x-update via the reduced KKT system.
        let rhs = settings.sigma * &z - &lin + &at * (rv.component_mul(&zeta) - &y);
        let z_tilde = fact.chol.solve(&rhs);
        let zeta_tilde = &a * &z_tilde;

        let z_next = settings.alpha * &z_tilde + (1.0 - settings.alpha) * &z;
        let zeta_relaxed = settings.alpha * &zeta_tilde + (1.0 - settings.alpha) * &zeta;
        let zeta_next = project(&(&zeta_relaxed + rv_inv.component_mul(&y)), &l, &u);
        let y_next = &y + rv.component_mul(&(&zeta_relaxed - &zeta_next));

        let dy = &y_next - &y;
        z = z_next;
        zeta = zeta_next;
        y = y_next;

        if (it + 1) % settings.check_every == 0 || it + 1 == settings.max_iter {
            let z_u = unscale_z(&z);
            let y_u = unscale_y(&y);
            let az_u = a0 * &z_u;
            let proj_u = project(&az_u, l0, u0);
            r_prim = inf_norm(&(&az_u - &proj_u));
            let qz_u = q0 * &z_u;
            let aty_u = &a0t * &y_u;
            r_dual = inf_norm(&(&qz_u + lin0 + &aty_u));
            if r_prim <= settings.tol && r_dual <= settings.tol {
                status = AdmmStatus::Solved;
                iterations = it + 1;
                break;
            }

            // A loosely converged iterate usually identifies the active set
            // already; polishing from it reaches full accuracy in one linear
            // solve and skips the slow ADMM tail on stiff instances. Failed
            // attempts back off exponentially so a stretch of wrong guesses
            // does not dominate the solve time.
            let prim_scale = 1.0 + inf_norm(&az_u).max(inf_norm(&proj_u));
            let dual_scale = 1.0 + inf_norm(&qz_u).max(inf_norm(&aty_u)).max(inf_norm(lin0));
            if it + 1 >= next_attempt
                && r_prim <= 1e-2 * prim_scale
                && r_dual <= 1e-2 * dual_scale
            {
                let active = active_rows(&az_u, &y_u, l0, u0);
                let mut accepted = false;
                if let Some((z_pol, y_pol, rp, rd)) =
                    polish(q0, lin0, a0, l0, u0, settings, &active, &az_u)
                {
                    if rp <= settings.tol && rd <= settings.tol {
                        polished = Some((z_pol, y_pol, rp, rd));
                        status = AdmmStatus::Solved;
                        iterations = it + 1;
                        accepted = true;
                    }
                }
                if accepted {
                    break;
                }
                next_attempt = it + 1 + attempt_backoff;
                attempt_backoff *= 2;
            }

            // Primal infeasibility certificate from the dual increment:
            // A'dy ~ 0 with negative support. Components pushing against an
            // infinite bound void the certificate only when significant.
            let dy_u = unscale_y(&dy);
            let dy_norm = inf_norm(&dy_u);
            if dy_norm > 1e-12 {
                const EPS_PINF: f64 = 1e-5;
                let thresh = EPS_PINF * dy_norm;
                let at_dy = inf_norm(&(&a0t * &dy_u));
                let mut support = 0.0;
                let mut certificate = at_dy <= thresh;
                if certificate {
                    for i in 0..m {
                        if dy_u[i] > thresh {
                            if u0[i].is_infinite() {
                                certificate = false;
                                break;
                            }
                            support += u0[i] * dy_u[i];
                        } else if dy_u[i] < -thresh {
                            if l0[i].is_infinite() {
                                certificate = false;
                                break;
                            }
                            support += l0[i] * dy_u[i];
                        }
                    }
                }
                if certificate && support <= -thresh {
                    status = AdmmStatus::PrimalInfeasible;
                    iterations = it + 1;
                    break;
                }
            }

            // Deterministic rho adaptation on residual imbalance.
            if r_prim > 0.0 && r_dual > 0.0 {
                let ratio = (r_prim / r_dual).sqrt();
                if ratio > 5.0 || ratio < 0.2 {
                    rho = (rho * ratio).clamp(1e-6, 1e6);
                    rv = rho_vec(rho);
                    rv_inv = rv.map(|v| 1.0 / v);
                    if let Some(f) = factorize(&q, &a, &rv, settings.sigma) {
                        fact = f;
                    }
                }
            }
        }
    }

    let was_polished = polished.is_some();
    let mut result = match polished {
        Some((z_pol, y_pol, rp, rd)) => AdmmResult {
            status,
            z: z_pol,
            y: y_pol,
            iterations,
            primal_residual: rp,
            dual_residual: rd,
        },
        None => AdmmResult {
            status,
            z: unscale_z(&z),
            y: unscale_y(&y),
            iterations,
            primal_residual: r_prim,
            dual_residual: r_dual,
        },
    };
    if result.status == AdmmStatus::Solved && !was_polished {
        let az = a0 * &result.z;
        let active = active_rows(&az, &result.y, l0, u0);
        if let Some((z_pol, y_pol, rp, rd)) = polish(q0, lin0, a0, l0, u0, settings, &active, &az)
        {
            if rd <= result.dual_residual.max(settings.tol) {
                result.z = z_pol;
                result.y = y_pol;
                result.primal_residual = rp;
                result.dual_residual = rd;
            }
        }
    }
    result
}

/// Rows the iterate holds (near) tight, each paired with the bound it sits
/// on. Shared between the polish step and its stability gate in the solve
/// loop, so both agree on what "the active set" means.
fn active_rows(
    az: &DVector<f64>,
    y: &DVector<f64>,
    l: &DVector<f64>,
    u: &DVector<f64>,
) -> Vec<(usize, f64)> {
    let act_tol = 1e-5;
    // Multipliers flag a row as active only when clearly above the noise
    // floor of the current iterate; an absolute cutoff pins spurious rows
    // during the first few checks.
    let y_tol = 1e-6 * (1.0 + inf_norm(y));
    let mut active: Vec<(usize, f64)> = Vec::new();
    for i in 0..az.len() {
        let eq = (u[i] - l[i]).abs() < 1e-14;
        let row_scale = 1.0 + l[i].abs().min(u[i].abs());
        // A multiplier transient must not pin a row at the far side of its
        // box, so the sign criterion only picks the nearer bound.
        let dl = az[i] - l[i];
        let du = u[i] - az[i];
        if eq || dl < act_tol * row_scale || (y[i] < -y_tol && dl <= du) {
            active.push((i, l[i]));
        } else if du < act_tol * row_scale || (y[i] > y_tol && du <= dl) {
            active.push((i, u[i]));
        }
    }
    active
}

/// Active-set polish: solve the equality-constrained KKT system over the
/// given rows with light regularization and iterative refinement. Returns
/// the polished point and its unscaled residuals if it is primal feasible
/// and the multipliers are dual feasible, `None` otherwise. A stationary
/// point with wrong-sign multipliers is the KKT point of the wrong active
/// set, not an optimum, so those are rejected and the caller keeps
/// iterating.
fn polish(
    q: &DMatrix<f64>,
    lin: &DVector<f64>,
    a: &DMatrix<f64>,
    l: &DVector<f64>,
    u: &DVector<f64>,
    settings: &AdmmSettings,
    active: &[(usize, f64)],
    az_ref: &DVector<f64>,
) -> Option<(DVector<f64>, DVector<f64>, f64, f64)> {
    let m = a.nrows();
    let n = q.nrows();

    // Pinning two exactly parallel (or anti-parallel) rows at different
    // offsets makes the system contradictory; the regularized solve then
    // answers with a huge cancelling multiplier pair. Such pairs arise from
    // slack-relaxed row copies and from the narrow corridor between a
    // strict face and the opposing face of its neighbor. Keep the row of
    // each conflicting pair whose bound the reference iterate is closest
    // to.
    let mut active: Vec<(usize, f64)> = active.to_vec();
    let mut dropped = vec![false; active.len()];
    for j in 0..active.len() {
        if dropped[j] {
            continue;
        }
        for j2 in (j + 1)..active.len() {
            if dropped[j2] {
                continue;
            }
            let (i, b) = active[j];
            let (i2, b2) = active[j2];
            let same = a.row(i) == a.row(i2);
            let anti = !same && a.row(i) == -a.row(i2);
            if !same && !anti {
                continue;
            }
            let keep_first = (az_ref[i] - b).abs() <= (az_ref[i2] - b2).abs();
            dropped[if keep_first { j2 } else { j }] = true;
            if !keep_first {
                break;
            }
        }
    }
    let mut idx = 0;
    active.retain(|_| {
        idx += 1;
        !dropped[idx - 1]
    });

    // Solve the pinned KKT system; a stationary point with wrong-sign
    // multipliers is the KKT point of the wrong active set, not an optimum.
    // Rows the first solve exposes that way were over-pinned: drop them and
    // retry once, then give up and let the caller keep iterating.
    let mut sol = DVector::zeros(n);
    for retry in 0..2 {
        let k = active.len();
        let dim = n + k;
        let mut kkt = DMatrix::zeros(dim, dim);
        kkt.view_mut((0, 0), (n, n)).copy_from(q);
        for (j, &(i, _)) in active.iter().enumerate() {
            for col in 0..n {
                kkt[(n + j, col)] = a[(i, col)];
                kkt[(col, n + j)] = a[(i, col)];
            }
            kkt[(n + j, n + j)] = -1e-9;
        }
        for i in 0..n {
            kkt[(i, i)] += 1e-12;
        }
        let mut rhs = DVector::zeros(dim);
        for col in 0..n {
            rhs[col] = -lin[col];
        }
        for (j, &(_, b)) in active.iter().enumerate() {
            rhs[n + j] = b;
        }
        let lu = kkt.clone().lu();
        sol = lu.solve(&rhs)?;
        for _ in 0..3 {
            let resid = &rhs - &kkt * &sol;
            if let Some(corr) = lu.solve(&resid) {
                sol += corr;
            }
        }

        // Dual feasibility: lower-bound rows need y <= 0, upper-bound rows
        // y >= 0; equality rows are free.
        let sign_tol =
            1e-7 * (1.0 + sol.rows(n, k).iter().fold(0.0_f64, |acc, v| acc.max(v.abs())));
        let clean: Vec<(usize, f64)> = active
            .iter()
            .enumerate()
            .filter(|&(j, &(i, b))| {
                (u[i] - l[i]).abs() < 1e-14
                    || if b == l[i] { sol[n + j] <= sign_tol } else { sol[n + j] >= -sign_tol }
            })
            .map(|(_, &row)| row)
            .collect();
        if clean.len() == k {
            break;
        }
        if retry == 1 {
            return None;
        }
        active = clean;
    }
    let z_pol = sol.rows(0, n).into_owned();

    // Feasibility of the polished point on every row.
    let az_pol = a * &z_pol;
    let feas_tol = settings.tol * 10.0;
    for i in 0..m {
        if az_pol[i] < l[i] - feas_tol || az_pol[i] > u[i] + feas_tol {
            if std::env::var_os("ADMM_TRACE").is_some() {
                eprintln!(
                    "polish feas reject: row {i} az {:.6e} bounds [{:.3e},{:.3e}]",
                    az_pol[i], l[i], u[i]
                );
            }
            return None;
        }
    }
    let mut y_pol = DVector::zeros(m);
    for (j, &(i, _)) in active.iter().enumerate() {
        y_pol[i] = sol[n + j];
    }
    let r_dual = inf_norm(&(q * &z_pol + lin + a.transpose() * &y_pol));
    let r_prim = {
        let proj = project(&az_pol, l, u);
        inf_norm(&(&az_pol - &proj))
    };
    Some((z_pol, y_pol, r_prim, r_dual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dmat(rows: usize, cols: usize, vals: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, vals)
    }

    #[test]
    fn unconstrained_quadratic() {
        // min (z0 - 3)^2 -> Q = 2, q = -6
        let q = dmat(1, 1, &[2.0]);
        let lin = DVector::from_row_slice(&[-6.0]);
        let a = DMatrix::zeros(0, 1);
        let res = solve_qp(&q, &lin, &a, &DVector::zeros(0), &DVector::zeros(0), &AdmmSettings::default());
        assert_eq!(res.status, AdmmStatus::Solved);
        assert!((res.z[0] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn box_constrained_projection() {
        // min z^2 s.t. 1 <= z <= 2 -> z = 1
        let q = dmat(1, 1, &[2.0]);
        let lin = DVector::zeros(1);
        let a = dmat(1, 1, &[1.0]);
        let res = solve_qp(
            &q,
            &lin,
            &a,
            &DVector::from_row_slice(&[1.0]),
            &DVector::from_row_slice(&[2.0]),
            &AdmmSettings::default(),
        );
        assert_eq!(res.status, AdmmStatus::Solved);
        assert!((res.z[0] - 1.0).abs() < 1e-5, "z = {}", res.z[0]);
    }

    #[test]
    fn equality_and_inequality_mix() {
        // min z0^2 + z1^2 s.t. z0 + z1 = 2, z0 >= 1.5 -> (1.5, 0.5)
        let q = dmat(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        let lin = DVector::zeros(2);
        let a = dmat(2, 2, &[1.0, 1.0, 1.0, 0.0]);
        let l = DVector::from_row_slice(&[2.0, 1.5]);
        let u = DVector::from_row_slice(&[2.0, f64::INFINITY]);
        let res = solve_qp(&q, &lin, &a, &l, &u, &AdmmSettings::default());
        assert_eq!(res.status, AdmmStatus::Solved);
        assert!((res.z[0] - 1.5).abs() < 1e-5);
        assert!((res.z[1] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn detects_primal_infeasibility() {
        // z >= 1 and z <= 0 simultaneously.
        let q = dmat(1, 1, &[2.0]);
        let lin = DVector::zeros(1);
        let a = dmat(2, 1, &[1.0, 1.0]);
        let l = DVector::from_row_slice(&[1.0, f64::NEG_INFINITY]);
        let u = DVector::from_row_slice(&[f64::INFINITY, 0.0]);
        let res = solve_qp(&q, &lin, &a, &l, &u, &AdmmSettings::default());
        assert_eq!(res.status, AdmmStatus::PrimalInfeasible);
    }

    #[test]
    fn badly_scaled_problem_still_converges_fast() {
        // Position-scale ~1e2 against unit-scale velocity rows.
        let q = dmat(2, 2, &[0.0, 0.0, 0.0, 2.0]);
        let lin = DVector::from_row_slice(&[0.0, -24.0]);
        let a = dmat(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, -10.0]);
        let l = DVector::from_row_slice(&[0.0, 0.0, f64::NEG_INFINITY]);
        let u = DVector::from_row_slice(&[500.0, 30.0, 200.0]);
        let res = solve_qp(&q, &lin, &a, &l, &u, &AdmmSettings::default());
        assert_eq!(res.status, AdmmStatus::Solved);
        assert!(res.iterations < 2000, "took {} iterations", res.iterations);
    }

    #[test]
    fn deterministic_across_runs() {
        let q = dmat(2, 2, &[2.0, 0.2, 0.2, 4.0]);
        let lin = DVector::from_row_slice(&[1.0, -2.0]);
        let a = dmat(3, 2, &[1.0, 1.0, 1.0, -1.0, 0.3, 0.7]);
        let l = DVector::from_row_slice(&[-1.0, -2.0, 0.1]);
        let u = DVector::from_row_slice(&[1.0, 2.0, 1.4]);
        let r1 = solve_qp(&q, &lin, &a, &l, &u, &AdmmSettings::default());
        let r2 = solve_qp(&q, &lin, &a, &l, &u, &AdmmSettings::default());
        assert_eq!(r1.z, r2.z);
        assert_eq!(r1.iterations, r2.iterations);
    }
}
