//! Gaussian-weighted P1 Galerkin eigensolver: Neumann spectra, odd modes via
//! the half domain with u = 0 on the axis, and the truncation loop for
//! domains unbounded below.

mod assemble;
mod spectrum;
mod unbounded;

use serde::{Deserialize, Serialize};

pub use assemble::{assemble, AssembledSystem};
pub use spectrum::{
    mu1_odd, nested_half_meshes, neumann_and_odd, neumann_spectrum, odd_spectrum, Level, Modes, Spectrum2D, SpectrumKind, Symmetry,
    LEVELS, TRIVIAL_TOL,
};
pub use unbounded::{
    rayleigh_upper_bound, solve_unbounded, Tracked, UnboundedOptions, UnboundedSolution, DEFAULT_TRUNC_TOL,
    MAX_DEPTH, RAYLEIGH_DEPTH,
};

/// Values of a quantity along a refinement parameter (h or the truncation depth n).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub parameter: String,
    pub samples: Vec<(f64, f64)>,
    pub extrapolated: Option<f64>,
    pub order: Option<f64>,
    pub converged: bool,
}

impl ConvergenceRecord {
    /// Record of an h-refinement: samples (h, value) for one eigenvalue index.
    pub fn from_levels(spectrum: &Spectrum2D, index: usize) -> Self {
        let samples = spectrum.levels.iter().map(|l| (l.h, l.values[index])).collect();
        let e = spectrum.extrapolated.get(index);
        ConvergenceRecord {
            parameter: "h".into(),
            samples,
            extrapolated: e.map(|e| e.value),
            order: e.and_then(|e| e.order),
            converged: e.is_some_and(|e| e.extrapolated),
        }
    }
}
