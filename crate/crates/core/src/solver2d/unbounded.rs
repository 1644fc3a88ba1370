use serde::{Deserialize, Serialize};

use super::spectrum::{mu1_odd, neumann_and_odd, Spectrum2D};
use super::ConvergenceRecord;
use crate::error::{Error, Result};
use crate::gaussian::{gamma1, gaussian_measure_2d, normal_pdf, region_integral};
use crate::geometry::{first_index, invading_sequence, Domain, Shape};

/// Deepest truncation tried before giving up.
pub const MAX_DEPTH: u32 = 14;
/// Default stop tolerance, relative to the current value.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-3;
/// Depth at which unbounded domains are cut for the Rayleigh bound.
pub const RAYLEIGH_DEPTH: u32 = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnboundedOptions {
    /// Absolute stop tolerance on successive values; `None` means 1e-3·value.
    pub tol: Option<f64>,
    /// Finest mesh size on each Ωₙ.
    pub h: f64,
    /// Also follow μ₁(Ωₙ), not only μ₁ᵒᵈᵈ(Ωₙ).
    pub full: bool,
    /// Fillet radius; `None` uses the default.
    pub radius: Option<f64>,
}

impl Default for UnboundedOptions {
    fn default() -> Self {
        UnboundedOptions { tol: None, h: 0.1, full: false, radius: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tracked {
    pub spectrum: Spectrum2D,
    pub record: ConvergenceRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnboundedSolution {
    pub odd: Tracked,
    pub full: Option<Tracked>,
}

fn converged(samples: &[(f64, f64)], tol: Option<f64>) -> bool {
    match samples {
        [.., (_, prev), (_, last)] => (last - prev).abs() < tol.unwrap_or(DEFAULT_TRUNC_TOL * last.abs()),
        _ => false,
    }
}

fn record(samples: Vec<(f64, f64)>, converged: bool) -> ConvergenceRecord {
    let extrapolated = samples.last().map(|s| s.1);
    ConvergenceRecord { parameter: "n".into(), samples, extrapolated, order: None, converged }
}

/// μ₁ᵒᵈᵈ (and optionally μ₁) of an unbounded-below domain through the
/// invading sequence Ωₙ, n = ñ+2, ñ+4, … ≤ 14, stopping once successive
/// values differ by less than the tolerance.
pub fn solve_unbounded(domain: &Domain, opts: &UnboundedOptions) -> Result<UnboundedSolution> {
    if !domain.is_unbounded_below() {
        return Err(Error::Unsupported("truncation loop needs a domain unbounded below".into()));
    }
    if let Some(t) = opts.tol {
        if !(t > 0.0) {
            return Err(Error::Parameter(format!("truncation tolerance must be positive, got {t}")));
        }
    }
    let start = first_index(domain)? + 2;
    let mut odd_samples = Vec::new();
    let mut full_samples = Vec::new();
    let mut last: Option<(Spectrum2D, Option<Spectrum2D>)> = None;
    let mut n = start;
    while n <= MAX_DEPTH {
        let omega = invading_sequence(domain, n, opts.radius)?;
        let (mut odd, full) = if opts.full {
            let (mut full, odd) = neumann_and_odd(&omega, opts.h, 2)?;
            full.truncation_n = Some(n);
            full_samples.push((n as f64, full.mu1()));
            (odd, Some(full))
        } else {
            (mu1_odd(&omega, opts.h)?, None)
        };
        odd.truncation_n = Some(n);
        odd_samples.push((n as f64, odd.mu1()));
        last = Some((odd, full));
        let done = converged(&odd_samples, opts.tol) && (!opts.full || converged(&full_samples, opts.tol));
        if done {
            break;
        }
        n += 2;
    }
    let (odd, full) = last.ok_or_else(|| Error::Parameter(format!("first truncation {start} exceeds {MAX_DEPTH}")))?;
    let odd_ok = converged(&odd_samples, opts.tol);
    let full_ok = !opts.full || converged(&full_samples, opts.tol);
    if !(odd_ok && full_ok) {
        let bad = if odd_ok { full_samples } else { odd_samples };
        return Err(Error::NonConvergence { last_n: n.min(MAX_DEPTH), record: Box::new(record(bad, false)) });
    }
    Ok(UnboundedSolution {
        odd: Tracked { spectrum: odd, record: record(odd_samples, true) },
        full: full.map(|spectrum| Tracked { spectrum, record: record(full_samples, true) }),
    })
}

/// γ₂(Ω) / ∫_Ω x² dγ₂: the Rayleigh quotient of u = x, an upper bound for
/// μ₁ᵒᵈᵈ(Ω). Domains unbounded below are cut at depth 10.
pub fn rayleigh_upper_bound(domain: &Domain) -> Result<f64> {
    // ∫_{−a}^{a} x² γ(dx) = γ(−a, a) − 2a φ(a).
    let second = |a: f64| if a.is_finite() { gamma1(-a, a) - 2.0 * a * normal_pdf(a) } else { 1.0 };
    let (mass, moment) = match domain.shape() {
        Shape::Plane => (1.0, 1.0),
        Shape::Strip { a } => (gamma1(-a, *a), second(*a)),
        Shape::Below { .. } => {
            let cut = invading_sequence(domain, RAYLEIGH_DEPTH.max(first_index(domain)?), None)?;
            return rayleigh_upper_bound(&cut);
        }
        Shape::Region(r) => (
            gaussian_measure_2d(domain).value,
            2.0 * region_integral(r, |x, q, p| x * x * normal_pdf(x) * gamma1(q, p)),
        ),
    };
    if !(moment > 0.0) {
        return Err(Error::Degenerate(format!("∫ x² dγ₂ = {moment:e}")));
    }
    Ok(mass / moment)
}
