//! Planar polyhedra in halfspace representation and feasibility queries.
//!
//! All region algebra in the planner happens on conjunctions of linear
//! inequalities `normal . z <= offset` with `z = [s, r]` in meters. Time
//! never enters as an LP variable; it is handled by layering upstream.

use serde::{Deserialize, Serialize};

use crate::lp::{self, LpProblem};

pub type Point2 = nalgebra::Vector2<f64>;

/// One linear inequality `normal . z <= offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(nx: f64, ny: f64, offset: f64) -> Self {
        Self { normal: [nx, ny], offset }
    }

    pub fn eval(&self, z: Point2) -> f64 {
        self.normal[0] * z.x + self.normal[1] * z.y - self.offset
    }

    fn norm(&self) -> f64 {
        (self.normal[0] * self.normal[0] + self.normal[1] * self.normal[1]).sqrt()
    }
}

/// Convex region `{ z : A z <= b }`. Rows with zero normal are rejected at
/// construction; the empty row set denotes the whole plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyhedron {
    rows: Vec<HalfPlane>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("halfspace normal must be nonzero (row {0})")]
    ZeroNormal(usize),
    #[error("degenerate rectangle: half extents must be positive")]
    DegenerateRectangle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeasibilityResult {
    Feasible(Point2),
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }

    pub fn witness(&self) -> Option<Point2> {
        match self {
            FeasibilityResult::Feasible(w) => Some(*w),
            FeasibilityResult::Infeasible => None,
        }
    }
}

impl Polyhedron {
    pub fn new(rows: Vec<HalfPlane>) -> Result<Self, GeometryError> {
        for (i, row) in rows.iter().enumerate() {
            if row.normal[0] == 0.0 && row.normal[1] == 0.0 {
                return Err(GeometryError::ZeroNormal(i));
            }
        }
        Ok(Self { rows })
    }

    /// The whole plane.
    pub fn universe() -> Self {
        Self { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[HalfPlane] {
        &self.rows
    }

    /// Set intersection: concatenate rows, dropping bit-exact duplicates.
    /// No numeric near-duplicate merging happens here.
    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut rows = self.rows.clone();
        for row in &other.rows {
            if !rows.iter().any(|r| r == row) {
                rows.push(*row);
            }
        }
        Polyhedron { rows }
    }

    /// Pointwise membership with slack `tol` on every row.
    pub fn contains(&self, z: Point2, tol: f64) -> bool {
        self.rows.iter().all(|row| row.eval(z) <= tol * row.norm().max(1.0))
    }

    /// Feasibility of the system relaxed by `epsilon` on every row
    /// (a closure test: `normal . z <= offset + epsilon`). Deterministic for
    /// a fixed `seed`, which drives Seidel's randomized row ordering.
    pub fn is_feasible(&self, epsilon: f64, seed: u64) -> FeasibilityResult {
        if self.rows.is_empty() {
            return FeasibilityResult::Feasible(Point2::zeros());
        }
        let mut problem = LpProblem::new(2, &[0.0, 0.0]);
        for row in &self.rows {
            let n = row.norm();
            problem.add_row(&[row.normal[0] / n, row.normal[1] / n], (row.offset + epsilon) / n);
        }
        match lp::seidel_maximize(&problem, seed) {
            Some(x) => FeasibilityResult::Feasible(Point2::new(x[0], x[1])),
            None => FeasibilityResult::Infeasible,
        }
    }

    /// Center of the largest inscribed disc, when the region is bounded and
    /// full-dimensional; `None` when infeasible. Unbounded regions yield a
    /// feasible deep point clipped against the solver's working box, which is
    /// deterministic for a fixed seed.
    pub fn chebyshev_interior_point(&self, seed: u64) -> Option<Point2> {
        if self.rows.is_empty() {
            return Some(Point2::zeros());
        }
        // Variables (s, r, rho); maximize rho with a.z + |a| rho <= b.
        let mut problem = LpProblem::new(3, &[0.0, 0.0, 1.0]);
        for row in &self.rows {
            let n = row.norm();
            problem.add_row(
                &[row.normal[0] / n, row.normal[1] / n, 1.0],
                row.offset / n,
            );
        }
        problem.add_row(&[0.0, 0.0, -1.0], 0.0); // rho >= 0
        lp::seidel_maximize(&problem, seed).map(|x| Point2::new(x[0], x[1]))
    }
}

/// A rotated rectangle stored as its center, axes and half extents, with the
/// 4-row polyhedron derivable on demand. `axis_long` points along `heading`.
#[derive(Debug, Clone, Copy)]
pub struct Rectangle {
    pub center: Point2,
    pub heading: f64,
    pub half_length: f64,
    pub half_width: f64,
}

impl Rectangle {
    pub fn new(center: Point2, heading: f64, half_length: f64, half_width: f64) -> Result<Self, GeometryError> {
        if half_length <= 0.0 || half_width <= 0.0 {
            return Err(GeometryError::DegenerateRectangle);
        }
        Ok(Self { center, heading, half_length, half_width })
    }

    pub fn axis_long(&self) -> Point2 {
        Point2::new(self.heading.cos(), self.heading.sin())
    }

    pub fn axis_lat(&self) -> Point2 {
        Point2::new(-self.heading.sin(), self.heading.cos())
    }

    /// The rectangle as a 4-row polyhedron.
    pub fn to_polyhedron(&self) -> Polyhedron {
        let u = self.axis_long();
        let v = self.axis_lat();
        let cu = u.dot(&self.center);
        let cv = v.dot(&self.center);
        Polyhedron {
            rows: vec![
                HalfPlane::new(u.x, u.y, cu + self.half_length),
                HalfPlane::new(-u.x, -u.y, -cu + self.half_length),
                HalfPlane::new(v.x, v.y, cv + self.half_width),
                HalfPlane::new(-v.x, -v.y, -cv + self.half_width),
            ],
        }
    }

    /// Strict interior membership (the obstacle is an open set).
    pub fn contains_interior(&self, z: Point2) -> bool {
        let d = z - self.center;
        let du = self.axis_long().dot(&d).abs();
        let dv = self.axis_lat().dot(&d).abs();
        du < self.half_length && dv < self.half_width
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn halfspace(nx: f64, ny: f64, b: f64) -> Polyhedron {
        Polyhedron::new(vec![HalfPlane::new(nx, ny, b)]).unwrap()
    }

    #[test]
    fn intersect_is_idempotent_on_duplicate_rows() {
        let p = halfspace(1.0, 0.0, 5.0);
        let q = p.intersect(&p);
        assert_eq!(q.rows().len(), 1);
    }

    #[test]
    fn disjoint_halfplanes_are_infeasible() {
        // s <= 5 and s >= 7
        let p = halfspace(1.0, 0.0, 5.0).intersect(&halfspace(-1.0, 0.0, -7.0));
        assert_eq!(p.is_feasible(0.0, 42), FeasibilityResult::Infeasible);
    }

    #[test]
    fn empty_row_set_is_the_whole_plane() {
        let p = Polyhedron::universe();
        assert_eq!(p.is_feasible(0.0, 1), FeasibilityResult::Feasible(Point2::zeros()));
    }

    #[test]
    fn single_point_closure_intersection() {
        // s <= 0, s >= 0, r <= 3, r >= 3 relaxed by 1e-6: pinches to ~(0, 3).
        let p = Polyhedron::new(vec![
            HalfPlane::new(1.0, 0.0, 0.0),
            HalfPlane::new(-1.0, 0.0, 0.0),
            HalfPlane::new(0.0, 1.0, 3.0),
            HalfPlane::new(0.0, -1.0, -3.0),
        ])
        .unwrap();
        assert_eq!(p.is_feasible(0.0, 7).is_feasible(), true);
        let w = p.is_feasible(1e-6, 7).witness().expect("feasible");
        assert_relative_eq!(w.x, 0.0, epsilon = 1e-5);
        assert_relative_eq!(w.y, 3.0, epsilon = 1e-5);
    }

    #[test]
    fn feasibility_is_monotone_in_epsilon() {
        let p = Polyhedron::new(vec![
            HalfPlane::new(1.0, 0.0, 1.0),
            HalfPlane::new(-1.0, 0.0, -1.0 - 1e-7),
        ])
        .unwrap();
        assert!(!p.is_feasible(0.0, 3).is_feasible());
        assert!(p.is_feasible(1e-6, 3).is_feasible());
    }

    #[test]
    fn chebyshev_center_of_unit_square() {
        let square = Rectangle::new(Point2::new(0.5, 0.5), 0.0, 0.5, 0.5)
            .unwrap()
            .to_polyhedron();
        let c = square.chebyshev_interior_point(11).expect("nonempty");
        assert_relative_eq!(c.x, 0.5, epsilon = 1e-6);
        assert_relative_eq!(c.y, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn chebyshev_of_infeasible_system_is_none() {
        let p = halfspace(1.0, 0.0, -1.0).intersect(&halfspace(-1.0, 0.0, -1.0));
        assert_eq!(p.chebyshev_interior_point(5), None);
    }

    #[test]
    fn zero_normal_rejected() {
        let err = Polyhedron::new(vec![HalfPlane::new(0.0, 0.0, 1.0)]).unwrap_err();
        assert_eq!(err, GeometryError::ZeroNormal(0));
    }
}
