//! Time-layered transition graph over partition cells, adjacency, validity
//! sets and the time-margin metric.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::partition::{partition_step, CellSlice, Signature};
use crate::scenario::Scenario;

/// Two same-step cells are adjacent when their closures intersect, tested as
/// LP feasibility of the joint system relaxed by `eps_lp + eps_strict` (the
/// relaxation undoes the strict-boundary shift). Symmetric by construction.
pub fn adjacency(c1: &CellSlice, c2: &CellSlice, tol: &Tolerances) -> bool {
    debug_assert_eq!(c1.step, c2.step, "adjacency is an instantaneous check");
    c1.poly
        .intersect(&c2.poly)
        .is_feasible(tol.eps_lp + tol.eps_strict, tol.seed)
        .is_feasible()
}

/// One signature per layer, consecutive pairs connected by graph edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignaturePath {
    pub steps: Vec<Signature>,
}

impl SignaturePath {
    pub fn new(steps: Vec<Signature>) -> Self {
        Self { steps }
    }

    /// Distinct consecutive transitions as `(step index, from, to)`.
    pub fn transitions(&self) -> Vec<(usize, &Signature, &Signature)> {
        self.steps
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] != w[1])
            .map(|(i, w)| (i, &w[0], &w[1]))
            .collect()
    }
}

/// Maximal step ranges (inclusive) over which a signature pair is adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValiditySet {
    pub pair: (Signature, Signature),
    pub intervals: Vec<(usize, usize)>,
}

impl ValiditySet {
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, step: usize) -> bool {
        self.intervals.iter().any(|&(a, b)| step >= a && step <= b)
    }
}

/// Directed edge between consecutive layers.
pub type Edge = ((Signature, usize), (Signature, usize));

/// Layered graph: vertex = nonempty cell slice at a step; edge = adjacency
/// between steps `p` and `p + 1`, evaluated on the step-`p` geometry.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    pub tau: f64,
    layers: Vec<Vec<CellSlice>>,
    /// Per step, the set of adjacent signature pairs (both orientations).
    adjacent: Vec<BTreeSet<(Signature, Signature)>>,
    edges: Vec<Edge>,
    successors: BTreeMap<(usize, Signature), Vec<Signature>>,
}

impl TransitionGraph {
    /// Number of steps `P`; layers are `0..=P`.
    pub fn steps(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, p: usize) -> &[CellSlice] {
        &self.layers[p]
    }

    pub fn layers(&self) -> &[Vec<CellSlice>] {
        &self.layers
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cell(&self, p: usize, sig: &Signature) -> Option<&CellSlice> {
        self.layers[p].iter().find(|c| &c.signature == sig)
    }

    pub fn adjacent_at(&self, p: usize, s1: &Signature, s2: &Signature) -> bool {
        self.adjacent[p].contains(&(s1.clone(), s2.clone()))
    }

    /// Successor signatures of `(sig, p)` in layer `p + 1`, sorted.
    pub fn successors(&self, p: usize, sig: &Signature) -> &[Signature] {
        self.successors
            .get(&(p, sig.clone()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Every signature appearing in any layer, sorted.
    pub fn signatures(&self) -> Vec<Signature> {
        let mut set: BTreeSet<Signature> = BTreeSet::new();
        for layer in &self.layers {
            for cell in layer {
                set.insert(cell.signature.clone());
            }
        }
        set.into_iter().collect()
    }

    pub fn validity_set(&self, s1: &Signature, s2: &Signature) -> ValiditySet {
        let mut intervals = Vec::new();
        let mut open: Option<usize> = None;
        for p in 0..self.layers.len() {
            if self.adjacent_at(p, s1, s2) {
                open.get_or_insert(p);
            } else if let Some(a) = open.take() {
                intervals.push((a, p - 1));
            }
        }
        if let Some(a) = open {
            intervals.push((a, self.layers.len() - 1));
        }
        ValiditySet { pair: (s1.clone(), s2.clone()), intervals }
    }

    /// Whether `path` is realizable in this graph: right length, every layer
    /// contains its signature and every consecutive pair is an edge.
    pub fn admits(&self, path: &SignaturePath) -> bool {
        if path.steps.len() != self.layers.len() {
            return false;
        }
        for (p, sig) in path.steps.iter().enumerate() {
            if self.cell(p, sig).is_none() {
                return false;
            }
        }
        path.steps.windows(2).enumerate().all(|(p, w)| {
            w[0] == w[1] || self.adjacent_at(p, &w[0], &w[1])
        })
    }

    /// Time margin of a path: for each distinct transition taken at step `i`,
    /// the length of the longest run of consecutive steps `q >= i` over which
    /// the transition stays available, times tau; the path margin is the
    /// minimum over its transitions. A run reaching the final layer counts
    /// as unconstrained (`+inf`), as does a transition-free path.
    pub fn time_margin(&self, path: &SignaturePath) -> f64 {
        let last = self.layers.len() - 1;
        let mut margin = f64::INFINITY;
        for (i, from, to) in path.transitions() {
            let mut q = i;
            while q <= last && self.adjacent_at(q, from, to) {
                q += 1;
            }
            let value = if q > last {
                f64::INFINITY
            } else {
                self.tau * (q - i) as f64
            };
            margin = margin.min(value);
        }
        margin
    }
}

/// Partition every layer `0..=P`. Split out from [`build_graph`] so callers
/// can time partitioning and graph assembly separately.
pub fn build_layers(scn: &Scenario, tol: &Tolerances) -> Vec<Vec<CellSlice>> {
    (0..=scn.steps()).map(|p| partition_step(scn, p, tol)).collect()
}

/// Build the discrete transition graph: partition every layer, test pairwise
/// adjacency inside each layer, and connect consecutive layers.
pub fn build_graph(scn: &Scenario, tol: &Tolerances) -> TransitionGraph {
    build_graph_from_layers(scn.tau, build_layers(scn, tol), tol)
}

/// Graph assembly over prebuilt layers.
pub fn build_graph_from_layers(
    tau: f64,
    layers: Vec<Vec<CellSlice>>,
    tol: &Tolerances,
) -> TransitionGraph {
    let p_steps = layers.len() - 1;
    let mut adjacent = Vec::with_capacity(layers.len());
    for layer in &layers {
        let mut pairs = BTreeSet::new();
        for (i, c1) in layer.iter().enumerate() {
            pairs.insert((c1.signature.clone(), c1.signature.clone()));
            for c2 in layer.iter().skip(i + 1) {
                if adjacency(c1, c2, tol) {
                    pairs.insert((c1.signature.clone(), c2.signature.clone()));
                    pairs.insert((c2.signature.clone(), c1.signature.clone()));
                }
            }
        }
        adjacent.push(pairs);
    }

    let mut edges = Vec::new();
    let mut successors: BTreeMap<(usize, Signature), Vec<Signature>> = BTreeMap::new();
    for p in 0..p_steps {
        for c1 in &layers[p] {
            for c2 in &layers[p + 1] {
                let linked = if c1.signature == c2.signature {
                    true
                } else {
                    adjacent[p].contains(&(c1.signature.clone(), c2.signature.clone()))
                };
                if linked {
                    edges.push(((c1.signature.clone(), p), (c2.signature.clone(), p + 1)));
                    successors
                        .entry((p, c1.signature.clone()))
                        .or_default()
                        .push(c2.signature.clone());
                }
            }
        }
    }
    for succ in successors.values_mut() {
        succ.sort();
    }

    TransitionGraph { tau, layers, adjacent, edges, successors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::road::RoadModel;
    use crate::scenario::{EgoConfig, ObstaclePose, ObstacleTrack};

    fn empty_road_scenario(steps: usize) -> Scenario {
        let mut scn = Scenario {
            road: RoadModel::constant_width(0.0, 200.0, -3.5, 3.5).unwrap(),
            obstacles: vec![],
            ego: EgoConfig { half_length: 2.0, half_width: 1.0, s: 5.0, r: 0.0, s_dot: 10.0, r_dot: 0.0 },
            horizon: steps as f64,
            tau: 1.0,
            margin_min: 0.0,
            alpha: 0.2,
            a_lon_max: 3.0,
            a_lat_max: 2.0,
            ref_speed: 10.0,
            safety_pad: 0.1,
        };
        scn.validate().unwrap();
        scn
    }

    #[test]
    fn zero_obstacles_give_a_chain_of_self_edges() {
        let scn = empty_road_scenario(4);
        let g = build_graph(&scn, &Tolerances::default());
        assert_eq!(g.steps(), 4);
        for p in 0..=4 {
            assert_eq!(g.layer(p).len(), 1);
        }
        assert_eq!(g.edges().len(), 4);
        let sig = g.layer(0)[0].signature.clone();
        let vs = g.validity_set(&sig, &sig);
        assert_eq!(vs.intervals, vec![(0, 4)]);
    }

    #[test]
    fn self_adjacency_and_symmetry() {
        let mut scn = empty_road_scenario(3);
        scn.obstacles = vec![ObstacleTrack {
            id: 1,
            half_length: 2.0,
            half_width: 1.0,
            poses: vec![ObstaclePose { center_s: 100.0, center_r: 0.0, heading: 0.0 }; 4],
        }];
        scn.validate().unwrap();
        let tol = Tolerances::default();
        let g = build_graph(&scn, &tol);
        let layer = g.layer(0);
        for c1 in layer {
            assert!(adjacency(c1, c1, &tol));
            for c2 in layer {
                assert_eq!(adjacency(c1, c2, &tol), adjacency(c2, c1, &tol));
                assert_eq!(
                    g.adjacent_at(0, &c1.signature, &c2.signature),
                    g.adjacent_at(0, &c2.signature, &c1.signature)
                );
            }
        }
    }

    #[test]
    fn margin_of_transition_free_path_is_infinite() {
        let scn = empty_road_scenario(3);
        let g = build_graph(&scn, &Tolerances::default());
        let sig = g.layer(0)[0].signature.clone();
        let path = SignaturePath::new(vec![sig; 4]);
        assert!(g.admits(&path));
        assert_eq!(g.time_margin(&path), f64::INFINITY);
    }
}
