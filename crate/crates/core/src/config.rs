//! Run-wide numeric tolerances and the reproducibility seed.

use serde::{Deserialize, Serialize};

/// Tolerances shared by partitioning, adjacency and optimization.
///
/// `eps_lp` is the feasibility slack of the LP-based emptiness test.
/// `eps_strict` realizes the strict-inequality convention: sibling cells are
/// kept disjoint by shifting each shared boundary by this amount in exactly
/// one of the two cells (the lower region index keeps the closed side).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps_lp: f64,
    pub eps_strict: f64,
    pub qp_tol: f64,
    pub seed: u64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eps_lp: 1.0e-9, eps_strict: 1.0e-6, qp_tol: 1.0e-6, seed: 0 }
    }
}
