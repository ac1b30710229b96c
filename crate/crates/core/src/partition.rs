//! Semantic partitioning of the free space at one time step.
//!
//! Around every inflated obstacle the plane splits into four collision-free
//! regions (front / left / behind / right); intersecting the road trapezes
//! with one region per obstacle and discarding empty intersections yields a
//! partition of the free space into convex cells, each carrying a unique
//! signature.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::poly::{GeometryError, Point2, Polyhedron, Rectangle};
use crate::scenario::Scenario;

/// Relative position of the ego with respect to one obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionLabel {
    Front = 1,
    Left = 2,
    Behind = 3,
    Right = 4,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 4] =
        [RegionLabel::Front, RegionLabel::Left, RegionLabel::Behind, RegionLabel::Right];

    pub fn letter(self) -> char {
        match self {
            RegionLabel::Front => 'f',
            RegionLabel::Left => 'l',
            RegionLabel::Behind => 'b',
            RegionLabel::Right => 'r',
        }
    }
}

/// Trapeze index plus one region label per obstacle, ordered by obstacle id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub trapeze: usize,
    pub labels: Vec<RegionLabel>,
}

impl Signature {
    pub fn new(trapeze: usize, labels: Vec<RegionLabel>) -> Self {
        Self { trapeze, labels }
    }

    /// Compact label string: bare letters for the first trapeze, a `T{k}`
    /// prefix otherwise, matching the figure convention of dropping the
    /// trapeze index on single-trapeze roads.
    pub fn label(&self) -> String {
        let letters: String = self.labels.iter().map(|l| l.letter()).collect();
        if self.labels.is_empty() {
            format!("T{}", self.trapeze + 1)
        } else if self.trapeze == 0 {
            letters
        } else {
            format!("T{}-{}", self.trapeze + 1, letters)
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// One nonempty convex cell of the partition at one step.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellSlice {
    pub signature: Signature,
    pub step: usize,
    pub poly: Polyhedron,
    pub witness: Point2,
}

/// Band decomposition of the plane around a rectangle into the four
/// collision-free regions.
///
/// With `u` the long axis and `v` the lateral axis, left and right extend the
/// lateral edge lines over the full length of the road, while front and behind
/// are clipped to the body-width band between them. A point far behind the
/// rectangle but beside its lane therefore still reads left or right, which is
/// what keeps lateral relations stable while the rectangle drives past.
/// Shared boundaries stay closed in the region with lower index and are
/// shifted by `eps_strict` in the other, keeping siblings disjoint.
pub fn obstacle_regions(
    rect: &Rectangle,
    eps_strict: f64,
) -> Result<[Polyhedron; 4], GeometryError> {
    if rect.half_length <= 0.0 || rect.half_width <= 0.0 {
        return Err(GeometryError::DegenerateRectangle);
    }
    let u = rect.axis_long();
    let v = rect.axis_lat();
    let cu = u.dot(&rect.center);
    let cv = v.dot(&rect.center);
    let (hl, hw) = (rect.half_length, rect.half_width);
    let e = eps_strict;

    let ge = |n: Point2, b: f64| crate::poly::HalfPlane::new(-n.x, -n.y, -b); // n.z >= b
    let le = |n: Point2, b: f64| crate::poly::HalfPlane::new(n.x, n.y, b); // n.z <= b

    let front = Polyhedron::new(vec![ge(u, cu + hl), le(v, cv + hw - e), ge(v, cv - hw)])?;
    let left = Polyhedron::new(vec![ge(v, cv + hw)])?;
    let behind = Polyhedron::new(vec![le(u, cu - hl), le(v, cv + hw - e), ge(v, cv - hw)])?;
    let right = Polyhedron::new(vec![le(v, cv - hw - e)])?;
    Ok([front, left, behind, right])
}

/// Partition of the free space at one step: refine the road trapezes by one
/// region per obstacle, pruning infeasible intersections as they appear.
/// Output carries at most `K * 4^N` cells.
pub fn partition_step(scn: &Scenario, step: usize, tol: &Tolerances) -> Vec<CellSlice> {
    let trapezes = scn.road.decompose(tol.eps_strict);

    struct Partial {
        trapeze: usize,
        labels: Vec<RegionLabel>,
        poly: Polyhedron,
    }

    let mut cells: Vec<Partial> = trapezes
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_feasible(tol.eps_lp, tol.seed).is_feasible())
        .map(|(k, t)| Partial { trapeze: k, labels: Vec::new(), poly: t.clone() })
        .collect();

    for track in &scn.obstacles {
        let rect = crate::scenario::inflate(
            track,
            step,
            (scn.ego.half_length, scn.ego.half_width),
            scn.safety_pad,
        )
        .expect("validated scenario has positive extents");
        let regions = obstacle_regions(&rect, tol.eps_strict)
            .expect("inflated rectangle is non-degenerate");
        let mut refined = Vec::with_capacity(cells.len());
        for cell in &cells {
            for (label, region) in RegionLabel::ALL.iter().zip(regions.iter()) {
                let poly = cell.poly.intersect(region);
                if poly.is_feasible(tol.eps_lp, tol.seed).is_feasible() {
                    let mut labels = cell.labels.clone();
                    labels.push(*label);
                    refined.push(Partial { trapeze: cell.trapeze, labels, poly });
                }
            }
        }
        cells = refined;
    }

    cells
        .into_iter()
        .map(|cell| {
            let witness = cell
                .poly
                .chebyshev_interior_point(tol.seed)
                .or_else(|| cell.poly.is_feasible(tol.eps_lp, tol.seed).witness())
                .expect("cells were filtered for feasibility");
            CellSlice {
                signature: Signature::new(cell.trapeze, cell.labels),
                step,
                poly: cell.poly,
                witness,
            }
        })
        .collect()
}

/// The unique signature whose cell contains `z`, or `None` for points in
/// obstacle space or off the road. Ties on shared boundaries resolve to the
/// first cell in partition order, which is deterministic.
pub fn locate(cells: &[CellSlice], z: Point2, tol: &Tolerances) -> Option<Signature> {
    cells
        .iter()
        .find(|cell| cell.poly.contains(z, tol.eps_lp))
        .map(|cell| cell.signature.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn unit_square_regions() -> [Polyhedron; 4] {
        let rect = Rectangle::new(Point2::new(0.5, 0.5), 0.0, 0.5, 0.5).unwrap();
        obstacle_regions(&rect, 1e-6).unwrap()
    }

    #[test]
    fn far_field_classification() {
        let regions = unit_square_regions();
        let cases = [
            (Point2::new(10.0, 0.5), 0usize),  // front
            (Point2::new(0.5, 10.0), 1),       // left
            (Point2::new(-10.0, 0.5), 2),      // behind
            (Point2::new(0.5, -10.0), 3),      // right
        ];
        for (z, expect) in cases {
            for (j, region) in regions.iter().enumerate() {
                assert_eq!(region.contains(z, 0.0), j == expect, "point {z:?} region {j}");
            }
        }
    }

    #[test]
    fn corner_probe_lands_in_exactly_one_region() {
        let regions = unit_square_regions();
        let delta = 1e-3;
        let probe = Point2::new(1.0 + delta, 0.5 + delta);
        let hits: Vec<usize> = regions
            .iter()
            .enumerate()
            .filter(|(_, r)| r.contains(probe, 0.0))
            .map(|(j, _)| j)
            .collect();
        assert_eq!(hits.len(), 1, "probe hit regions {hits:?}");
    }

    #[test]
    fn regions_and_rectangle_partition_the_plane() {
        let rect = Rectangle::new(Point2::new(0.5, 0.5), 0.3, 0.5, 0.25).unwrap();
        let regions = obstacle_regions(&rect, 1e-6).unwrap();
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..100_000 {
            let z = Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let mut count = usize::from(rect.contains_interior(z));
            count += regions.iter().filter(|r| r.contains(z, 0.0)).count();
            assert_eq!(count, 1, "point {z:?} covered {count} times");
        }
    }

    #[test]
    fn degenerate_rectangle_rejected() {
        let rect = Rectangle { center: Point2::zeros(), heading: 0.0, half_length: 0.0, half_width: 1.0 };
        assert!(obstacle_regions(&rect, 1e-6).is_err());
    }

    #[test]
    fn signature_labels() {
        let sig = Signature::new(0, vec![RegionLabel::Behind, RegionLabel::Right]);
        assert_eq!(sig.label(), "br");
        let sig = Signature::new(1, vec![RegionLabel::Front]);
        assert_eq!(sig.label(), "T2-f");
        let sig = Signature::new(2, vec![]);
        assert_eq!(sig.label(), "T3");
    }
}
