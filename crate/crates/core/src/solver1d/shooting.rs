use super::ode::{integrate, Tolerance};
use super::{Bc, Weight};
use crate::error::{Error, Result};

const TOL: Tolerance = Tolerance { rel: 1e-13, abs: 1e-15 };

/// v and v′ at each of the ascending `points`, integrating
/// v″ = (x − φ′/φ) v′ − μ v from `a` with the boundary data of `bc`.
/// Integration restarts at the kinks of φ.
pub fn shoot_profile(a: f64, b: f64, bc: Bc, weight: &dyn Weight, mu: f64, points: &[f64]) -> Result<Vec<[f64; 2]>> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b });
    }
    let eps = 1e-13 * (b - a);
    let mut stops: Vec<(f64, Option<usize>)> =
        weight.kinks().into_iter().filter(|&k| k > a + eps && k < b - eps).map(|k| (k, None)).collect();
    stops.extend(points.iter().enumerate().map(|(i, &p)| (p.clamp(a, b), Some(i))));
    stops.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut y = match bc {
        Bc::Neumann => [1.0, 0.0],
        Bc::Dirichlet => [0.0, 1.0],
    };
    let mut out = vec![[0.0; 2]; points.len()];
    let mut t = a;
    // Segment bounds used to evaluate φ′/φ one-sidedly at kinks.
    let mut kinks: Vec<f64> = weight.kinks().into_iter().filter(|&k| k > a + eps && k < b - eps).collect();
    kinks.sort_by(f64::total_cmp);
    for (s, idx) in stops {
        if s > t {
            let seg_lo = t;
            let seg_hi = kinks.iter().copied().find(|&k| k > t + eps).unwrap_or(b).min(b);
            let f = |x: f64, y: &[f64; 2]| {
                let xs = x.clamp(seg_lo + eps, seg_hi - eps);
                let g = weight.d1(xs) / weight.value(xs);
                [y[1], (x - g) * y[1] - mu * y[0]]
            };
            y = integrate(&f, t, s, y, &TOL);
            t = s;
        }
        if let Some(i) = idx {
            out[i] = y;
        }
    }
    Ok(out)
}

fn defect(a: f64, b: f64, bc: Bc, weight: &dyn Weight, mu: f64) -> Result<f64> {
    let end = shoot_profile(a, b, bc, weight, mu, &[b])?[0];
    Ok(match bc {
        Bc::Neumann => end[1],
        Bc::Dirichlet => end[0],
    })
}

/// Eigenvalue in `bracket` as the root of the terminal boundary defect, by bisection.
pub fn shooting_eigenvalue(a: f64, b: f64, bc: Bc, weight: &dyn Weight, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    let (mut flo, fhi) = (defect(a, b, bc, weight, lo)?, defect(a, b, bc, weight, hi)?);
    if !(flo * fhi < 0.0) {
        return Err(Error::Bracket { lo, hi });
    }
    while hi - lo > 1e-13 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fm = defect(a, b, bc, weight, mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver1d::Unit;

    #[test]
    fn hermite_levels_on_a_long_interval() {
        // On (−8, 8) the Neumann spectrum is numerically 0, 1, 2, …
        let mu = shooting_eigenvalue(-8.0, 8.0, Bc::Neumann, &Unit, (0.5, 1.5)).unwrap();
        assert!((mu - 1.0).abs() < 1e-8, "{mu}");
    }

    #[test]
    fn no_sign_change_is_reported() {
        assert!(matches!(
            shooting_eigenvalue(-1.0, 1.0, Bc::Dirichlet, &Unit, (0.1, 0.2)),
            Err(Error::Bracket { .. })
        ));
    }
}
