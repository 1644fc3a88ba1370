use serde::{Deserialize, Serialize};

/// Solver settings, copied into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// Finest mesh size for bounded 2-D solves.
    pub h: f64,
    /// Finest mesh size on each truncation Ωₙ.
    pub h_unbounded: f64,
    /// Finest mesh size for the plane surrogate Disk(12).
    pub h_plane: f64,
    /// Slack for inequalities backed by 2-D solves.
    pub tol: f64,
    /// Absolute stop tolerance of the truncation loop; `None` is 1e-3·value.
    pub trunc_tol: Option<f64>,
    pub seed: u64,
    /// 1-D grid size for interval eigenvalues.
    pub grid_n: usize,
    /// Nested mesh levels per 2-D solve.
    pub levels: usize,
    pub version: String,
}

pub const DEFAULT_H: f64 = 0.05;
pub const DEFAULT_H_UNBOUNDED: f64 = 0.1;
pub const DEFAULT_H_PLANE: f64 = 0.2;
pub const DEFAULT_TOL: f64 = 5e-3;
pub const DEFAULT_SEED: u64 = 7;

impl Default for Settings {
    fn default() -> Self {
        Settings {
            h: DEFAULT_H,
            h_unbounded: DEFAULT_H_UNBOUNDED,
            h_plane: DEFAULT_H_PLANE,
            tol: DEFAULT_TOL,
            trunc_tol: None,
            seed: DEFAULT_SEED,
            grid_n: hermite_gap::solver1d::DEFAULT_GRID,
            levels: hermite_gap::solver2d::LEVELS,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}
