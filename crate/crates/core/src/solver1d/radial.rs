use super::{Bc, Eigen1d};
use crate::eigen::{sturm_eigenvalues, PathPencil};
use crate::error::{Error, Result};
use crate::richardson::extrapolate3;

/// ∫ r e^{−r²/2} dr over [r0, r1].
fn radial_mass(r0: f64, r1: f64) -> f64 {
    (-0.5 * r0 * r0).exp() - (-0.5 * r1 * r1).exp()
}

/// Vertex grid r_j = jh on [0, R] with dual-cell masses; g(0) = 0 is imposed by
/// dropping node 0 when m ≥ 1.
fn pencil(radius: f64, m: u32, n: usize) -> Result<PathPencil<f64>> {
    let h = radius / n as f64;
    let w = |r: f64| r * (-0.5 * r * r).exp();
    let first = if m == 0 { 0 } else { 1 };
    let nodes: Vec<f64> = (first..=n).map(|j| j as f64 * h).collect();
    let mass: Vec<f64> = nodes
        .iter()
        .map(|&r| radial_mass((r - 0.5 * h).max(0.0), (r + 0.5 * h).min(radius)))
        .collect();
    let cond = nodes.windows(2).map(|p| w(0.5 * (p[0] + p[1])) / h).collect();
    // m²∫ g²/r² r e^{−r²/2} dr lumped as m² g_j² · mass_j / r_j², exact for g ∝ r
    // (the behaviour at the axis); a plain midpoint rule loses a log factor.
    let mut pot: Vec<f64> =
        nodes.iter().zip(&mass).map(|(&r, &mj)| if m == 0 { 0.0 } else { (m * m) as f64 * mj / (r * r) }).collect();
    if m > 0 {
        pot[0] += w(0.5 * h) / h;
    }
    PathPencil::new(cond, pot, mass)
}

/// Smallest eigenvalue of the angular-index-m radial problem on the disk of
/// radius R with g′(R) = 0 (the trivial zero mode skipped when m = 0).
pub fn disk_radial_eigenvalue(radius: f64, m: i32, grid_n: usize) -> Result<Eigen1d> {
    if m < 0 {
        return Err(Error::Parameter(format!("angular index m = {m} must be nonnegative")));
    }
    if !(radius > 0.0) {
        return Err(Error::Parameter(format!("radius {radius} must be positive")));
    }
    if grid_n < super::MIN_GRID {
        return Err(Error::Resolution(format!("grid_n = {grid_n} below the minimum {}", super::MIN_GRID)));
    }
    let m = m as u32;
    let idx = usize::from(m == 0);
    let mut levels = Vec::new();
    let mut trivial = None;
    for n in [grid_n / 2, grid_n, 2 * grid_n] {
        let v = sturm_eigenvalues(&pencil(radius, m, n)?, idx + 1)?;
        if m == 0 {
            trivial = Some(v[0]);
        }
        levels.push((n, v[idx]));
    }
    let finest = pencil(radius, m, 2 * grid_n)?;
    let pair = crate::eigen::eigs_path_pencil(&finest, idx + 1)?;
    let extrapolation = extrapolate3(levels[0].1, levels[1].1, levels[2].1);
    Ok(Eigen1d {
        a: 0.0,
        b: radius,
        bc: Bc::Neumann,
        grid_n,
        value: extrapolation.value,
        levels,
        extrapolation,
        truncation: None,
        trivial,
        residual: pair.residuals[idx],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_disk_matches_plane_levels() {
        // Plane spectrum: m = 1 → 1 (x), m = 0 → 2 (x² + y² − 2), m = 2 → 2.
        let r1 = disk_radial_eigenvalue(12.0, 1, 2048).unwrap();
        assert!((r1.value - 1.0).abs() < 1e-6, "{}", r1.value);
        let r0 = disk_radial_eigenvalue(12.0, 0, 2048).unwrap();
        assert!((r0.value - 2.0).abs() < 1e-6, "{}", r0.value);
        let r2 = disk_radial_eigenvalue(12.0, 2, 2048).unwrap();
        assert!((r2.value - 2.0).abs() < 1e-6, "{}", r2.value);
    }

    #[test]
    fn negative_index_rejected() {
        assert!(matches!(disk_radial_eigenvalue(1.0, -1, 64), Err(Error::Parameter(_))));
    }
}
