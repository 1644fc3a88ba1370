//! One-dimensional Hermite eigenproblems −(φ e^{−x²/2} v′)′ = μ φ e^{−x²/2} v
//! in flux form on uniform grids, with Richardson extrapolation, an
//! independent shooting oracle, the w = v′φ^{1/2} transform check and the
//! radial problem on disks.

mod ode;
mod radial;
mod shooting;
mod transform;
mod weight;

use serde::{Deserialize, Serialize};

pub use radial::disk_radial_eigenvalue;
pub use shooting::{shoot_profile, shooting_eigenvalue};
pub use transform::{transform_check, TransformCheck};
pub use weight::{Constant, Scaled, Unit, Weight};

use crate::eigen::{eigs_path_pencil, sturm_eigenvalues, PathPencil};
use crate::error::{Error, Result};
use crate::gaussian::{ExtReal, TRUNCATION};
use crate::richardson::{extrapolate3, Extrapolation};

/// Fewest grid cells a solve accepts.
pub const MIN_GRID: usize = 16;

/// Default grid for the middle Richardson level.
pub const DEFAULT_GRID: usize = 2048;

/// The trivial Neumann eigenvalue must come out below this.
const TRIVIAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bc {
    Neumann,
    Dirichlet,
}

impl std::fmt::Display for Bc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Bc::Neumann => "neumann",
            Bc::Dirichlet => "dirichlet",
        })
    }
}

/// An interval problem; infinite ends are cut at |x| = 12.
#[derive(Clone, Copy)]
pub struct SLProblem<'w> {
    pub a: ExtReal,
    pub b: ExtReal,
    pub bc: Bc,
    pub weight: &'w dyn Weight,
    pub grid_n: usize,
}

/// Extrapolated eigenvalue with its discretization record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigen1d {
    pub a: f64,
    pub b: f64,
    pub bc: Bc,
    pub grid_n: usize,
    pub value: f64,
    /// (cells, raw value) at grid_n/2, grid_n, 2·grid_n.
    pub levels: Vec<(usize, f64)>,
    pub extrapolation: Extrapolation<f64>,
    /// |x| cut applied to an infinite endpoint.
    pub truncation: Option<f64>,
    /// Smallest pencil eigenvalue of a Neumann solve (should be 0).
    pub trivial: Option<f64>,
    /// Pencil residual ‖Kv − λMv‖/‖Mv‖ of the finest-level eigenpair.
    pub residual: f64,
}

impl Eigen1d {
    pub const CSV_HEADER: &'static str = "a,b,bc,grid_n,value,extrapolated,order,residual";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.12e},{},{},{:.3e}",
            self.a,
            self.b,
            self.bc,
            self.grid_n,
            self.value,
            self.extrapolation.extrapolated,
            self.extrapolation.order.map_or(String::new(), |p| format!("{p:.4}")),
            self.residual
        )
    }
}

/// A discrete eigenpair on the finest grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair1D {
    pub value: f64,
    pub a: f64,
    pub b: f64,
    pub bc: Bc,
    /// Nodes carrying `function` (cell centres for Neumann, interior vertices for Dirichlet).
    pub x: Vec<f64>,
    pub function: Vec<f64>,
    /// Faces between nodes, where `derivative` lives (including the two end faces).
    pub faces: Vec<f64>,
    pub derivative: Vec<f64>,
    /// |∫ v φ dγ_x| / (‖v‖ ‖1‖) in the weighted L² norm; Neumann only.
    pub zero_mean_defect: Option<f64>,
}

struct Discrete {
    pencil: PathPencil<f64>,
    nodes: Vec<f64>,
    faces: Vec<f64>,
}

impl<'w> SLProblem<'w> {
    pub fn new(a: impl Into<ExtReal>, b: impl Into<ExtReal>, bc: Bc, weight: &'w dyn Weight, grid_n: usize) -> Self {
        SLProblem { a: a.into(), b: b.into(), bc, weight, grid_n }
    }

    /// Finite endpoints after truncation, and the cut if one was applied.
    pub fn interval(&self) -> Result<(f64, f64, Option<f64>)> {
        if !(self.a < self.b) {
            let v = |e: ExtReal| match e {
                ExtReal::NegInf => f64::NEG_INFINITY,
                ExtReal::PosInf => f64::INFINITY,
                ExtReal::Finite(x) => x,
            };
            return Err(Error::InvalidInterval { a: v(self.a), b: v(self.b) });
        }
        let cut = (!self.a.is_finite() || !self.b.is_finite()).then_some(TRUNCATION);
        let (lo, hi) = (self.a.clamp_to(TRUNCATION), self.b.clamp_to(TRUNCATION));
        if !(hi - lo > 0.0) {
            return Err(Error::Resolution(format!("interval ({lo}, {hi}) is empty after truncation at |x| = {TRUNCATION}")));
        }
        Ok((lo, hi, cut))
    }

    fn discretize(&self, n: usize) -> Result<Discrete> {
        if n < MIN_GRID / 2 {
            return Err(Error::Resolution(format!("{n} cells, at least {} needed", MIN_GRID / 2)));
        }
        let (lo, hi, _) = self.interval()?;
        let h = (hi - lo) / n as f64;
        let w = |x: f64| -> Result<f64> {
            let v = self.weight.value(x) * (-0.5 * x * x).exp();
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Weight { x, value: self.weight.value(x) })
            }
        };
        match self.bc {
            Bc::Neumann => {
                // Cell centres, zero flux through the end faces.
                let nodes: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
                let faces: Vec<f64> = (0..=n).map(|j| lo + j as f64 * h).collect();
                let c = faces[1..n].iter().map(|&x| w(x).map(|v| v / h)).collect::<Result<Vec<_>>>()?;
                let m = nodes.iter().map(|&x| w(x).map(|v| v * h)).collect::<Result<Vec<_>>>()?;
                Ok(Discrete { pencil: PathPencil::new(c, vec![0.0; n], m)?, nodes, faces })
            }
            Bc::Dirichlet => {
                // Interior vertices; the end faces couple to the zero boundary values.
                let nodes: Vec<f64> = (1..n).map(|j| lo + j as f64 * h).collect();
                let faces: Vec<f64> = (0..n).map(|j| lo + (j as f64 + 0.5) * h).collect();
                let fc = faces.iter().map(|&x| w(x).map(|v| v / h)).collect::<Result<Vec<_>>>()?;
                let m = nodes.iter().map(|&x| w(x).map(|v| v * h)).collect::<Result<Vec<_>>>()?;
                let mut e = vec![0.0; n - 1];
                e[0] += fc[0];
                e[n - 2] += fc[n - 1];
                Ok(Discrete { pencil: PathPencil::new(fc[1..n - 1].to_vec(), e, m)?, nodes, faces })
            }
        }
    }

    fn target_index(&self) -> usize {
        match self.bc {
            Bc::Neumann => 1,
            Bc::Dirichlet => 0,
        }
    }

    /// Raw eigenvalue at `n` cells, plus the trivial one for Neumann.
    fn raw(&self, n: usize) -> Result<(f64, Option<f64>)> {
        let d = self.discretize(n)?;
        let v = sturm_eigenvalues(&d.pencil, self.target_index() + 1)?;
        Ok(match self.bc {
            Bc::Neumann => (v[1], Some(v[0])),
            Bc::Dirichlet => (v[0], None),
        })
    }

    /// Eigenvalue extrapolated from grid_n and 2·grid_n, order measured with grid_n/2.
    pub fn solve(&self) -> Result<Eigen1d> {
        if self.grid_n < MIN_GRID {
            return Err(Error::Resolution(format!("grid_n = {} below the minimum {MIN_GRID}", self.grid_n)));
        }
        let (lo, hi, cut) = self.interval()?;
        let ns = [self.grid_n / 2, self.grid_n, 2 * self.grid_n];
        let mut levels = Vec::with_capacity(3);
        let mut trivial = None;
        for &n in &ns {
            let (v, t) = self.raw(n)?;
            levels.push((n, v));
            trivial = t;
        }
        if let Some(t) = trivial {
            if t.abs() > TRIVIAL_TOL {
                return Err(Error::Precision(format!("trivial Neumann eigenvalue {t:e} is not zero")));
            }
        }
        let pair = self.eigenpair_at(ns[2])?;
        let residual = self.discretize(ns[2])?.pencil.residual(pair.value, &pair.function);
        let extrapolation = extrapolate3(levels[0].1, levels[1].1, levels[2].1);
        Ok(Eigen1d {
            a: lo,
            b: hi,
            bc: self.bc,
            grid_n: self.grid_n,
            value: extrapolation.value,
            levels,
            extrapolation,
            truncation: cut,
            trivial,
            residual,
        })
    }

    /// First nontrivial eigenpair at grid_n cells.
    pub fn eigenpair(&self) -> Result<Eigenpair1D> {
        if self.grid_n < MIN_GRID {
            return Err(Error::Resolution(format!("grid_n = {} below the minimum {MIN_GRID}", self.grid_n)));
        }
        self.eigenpair_at(self.grid_n)
    }

    fn eigenpair_at(&self, n: usize) -> Result<Eigenpair1D> {
        let d = self.discretize(n)?;
        let idx = self.target_index();
        let r = eigs_path_pencil(&d.pencil, idx + 1)?;
        let mut v = r.vectors.expect("path pencil returns vectors").swap_remove(idx);
        // Fix the sign: positive at the right end.
        if v.last().copied().unwrap_or(0.0) < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let (lo, hi, _) = self.interval()?;
        let h = (hi - lo) / n as f64;
        let derivative = match self.bc {
            Bc::Neumann => {
                // Discrete flux balance c_{j−1}(v_j − v_{j−1}) = −λ Σ_{i<j} m_i v_i: identical to
                // the difference quotient in exact arithmetic, without its 1/h amplification
                // of rounding. The sum is taken for the M-projection of v off the constants
                // (exactly v for a true eigenvector) so the total flux closes to zero.
                let lam = r.values[idx];
                let m = &d.pencil.mass;
                let c = &d.pencil.conductance;
                let (mut sum, mut mass) = (vec![0.0; n + 1], vec![0.0; n + 1]);
                for j in 1..=n {
                    sum[j] = sum[j - 1] + m[j - 1] * v[j - 1];
                    mass[j] = mass[j - 1] + m[j - 1];
                }
                let mut dv = vec![0.0; n + 1];
                for j in 1..n {
                    let s = sum[j] - sum[n] * mass[j] / mass[n];
                    dv[j] = -lam * s / (c[j - 1] * h);
                }
                dv
            }
            Bc::Dirichlet => {
                let padded: Vec<f64> = std::iter::once(0.0).chain(v.iter().copied()).chain(std::iter::once(0.0)).collect();
                padded.windows(2).map(|p| (p[1] - p[0]) / h).collect()
            }
        };
        let zero_mean_defect = (self.bc == Bc::Neumann).then(|| {
            let m = &d.pencil.mass;
            let mean: f64 = v.iter().zip(m).map(|(a, b)| a * b).sum();
            let norm: f64 = v.iter().zip(m).map(|(a, b)| a * a * b).sum::<f64>().sqrt();
            let total: f64 = m.iter().sum::<f64>().sqrt();
            mean.abs() / (norm * total)
        });
        Ok(Eigenpair1D {
            value: r.values[idx],
            a: lo,
            b: hi,
            bc: self.bc,
            x: d.nodes,
            function: v,
            faces: d.faces,
            derivative,
            zero_mean_defect,
        })
    }
}

/// μ₁(a, b): first nontrivial Neumann eigenvalue of the Hermite operator.
pub fn mu1_interval(a: impl Into<ExtReal>, b: impl Into<ExtReal>, grid_n: usize) -> Result<Eigen1d> {
    SLProblem::new(a, b, Bc::Neumann, &Unit, grid_n).solve()
}

/// λ₁(a, b): first Dirichlet eigenvalue of the Hermite operator.
pub fn lambda1_interval(a: impl Into<ExtReal>, b: impl Into<ExtReal>, grid_n: usize) -> Result<Eigen1d> {
    SLProblem::new(a, b, Bc::Dirichlet, &Unit, grid_n).solve()
}

/// λ̄: first nontrivial eigenvalue of −(v′φγ_x)′ = λ̄vφγ_x with natural boundary conditions.
pub fn weighted_mu1(a: f64, b: f64, phi: &dyn Weight, grid_n: usize) -> Result<Eigen1d> {
    SLProblem::new(a, b, Bc::Neumann, phi, grid_n).solve()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_line_gives_one() {
        let r = mu1_interval(f64::NEG_INFINITY, f64::INFINITY, 1024).unwrap();
        assert_eq!(r.truncation, Some(12.0));
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
        assert!(r.trivial.unwrap().abs() < 1e-12);
    }

    #[test]
    fn order_is_two() {
        let r = mu1_interval(-1.0, 1.0, 256).unwrap();
        let p = r.extrapolation.order.unwrap();
        assert!(p > 1.8 && p < 2.2, "{p}");
    }

    #[test]
    fn reflection_invariance() {
        let a = mu1_interval(-0.3, 1.7, 512).unwrap().value;
        let b = mu1_interval(-1.7, 0.3, 512).unwrap().value;
        assert!(((a - b) / a).abs() < 1e-10);
    }

    #[test]
    fn constant_weights_are_invisible() {
        let a = weighted_mu1(-1.0, 1.0, &Unit, 256).unwrap().value;
        let b = weighted_mu1(-1.0, 1.0, &Constant(3.7), 256).unwrap().value;
        let c = mu1_interval(-1.0, 1.0, 256).unwrap().value;
        assert!((a - b).abs() < 1e-10 && (a - c).abs() < 1e-10);
    }

    #[test]
    fn errors() {
        assert!(matches!(mu1_interval(1.0, -1.0, 64), Err(Error::InvalidInterval { .. })));
        assert!(matches!(mu1_interval(-1.0, 1.0, 8), Err(Error::Resolution(_))));
        assert!(matches!(mu1_interval(13.0, f64::INFINITY, 64), Err(Error::Resolution(_))));
        assert!(matches!(weighted_mu1(-1.0, 1.0, &Constant(-1.0), 64), Err(Error::Weight { .. })));
    }

    #[test]
    fn zero_mean_and_csv() {
        let p = SLProblem::new(-1.0, 2.0, Bc::Neumann, &Unit, 400).eigenpair().unwrap();
        assert!(p.zero_mean_defect.unwrap() < 1e-10);
        let r = mu1_interval(-1.0, 1.0, 64).unwrap();
        assert_eq!(r.csv_row().split(',').count(), Eigen1d::CSV_HEADER.split(',').count());
    }
}
