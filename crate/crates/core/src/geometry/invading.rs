//! Invading sequence Ωₙ = Ω ∩ {y > −n} with the two bottom corners rounded.

use super::curve::{Curve, Piece};
use super::domain::{Domain, DomainSpec, Region, Shape};
use crate::error::{Error, Result};

/// Which corner construction produced Ωₙ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilletKind {
    /// Fillet tangent to the top graph and to {y = −n}.
    Graph,
    /// Fillet tangent to the vertical wall x = ±a and to {y = −n}.
    Wall,
}

fn unbounded_top(domain: &Domain) -> Result<(&Curve, f64)> {
    match domain.shape() {
        Shape::Below { a, top } => Ok((top, *a)),
        _ => Err(Error::Unsupported("invading sequence needs a domain unbounded below".into())),
    }
}

/// First admissible truncation index ñ = ⌊−p(0)⌋ + 1.
pub fn first_index(domain: &Domain) -> Result<u32> {
    let (top, _) = unbounded_top(domain)?;
    Ok(((-top.eval(0.0)).floor() + 1.0).max(1.0) as u32)
}

/// Default corner radius: half the smallest curvature radius of the top
/// profile, capped at a/4 so that straight walls still get a proper fillet.
pub fn default_radius(domain: &Domain) -> Result<f64> {
    let (top, a) = unbounded_top(domain)?;
    let m = 2000;
    let kmax = (0..=m)
        .map(|i| {
            let x = a * i as f64 / m as f64;
            top.piece_at(x).curvature(x)
        })
        .fold(0.0f64, f64::max);
    let from_curvature = if kmax > 0.0 { 0.5 / kmax } else { f64::INFINITY };
    Ok(from_curvature.min(0.25 * a))
}

/// Ωₙ for an unbounded-below domain; `radius` defaults to [`default_radius`].
pub fn invading_sequence(domain: &Domain, n: u32, radius: Option<f64>) -> Result<Domain> {
    let (top, a) = unbounded_top(domain)?;
    let n_min = first_index(domain)?;
    if n < n_min {
        return Err(Error::EmptyInterior { n, n_min });
    }
    let r = match radius {
        Some(r) if r.is_finite() && r > 0.0 => r,
        Some(r) => return Err(Error::Parameter(format!("fillet radius must be positive, got {r}"))),
        None => default_radius(domain)?,
    };
    let floor = -(n as f64);
    if top.eval(0.0) - floor <= 2.0 * r {
        return Err(Error::Geometry(format!("fillet radius {r} does not fit above y = {floor}")));
    }
    let region = match fillet_kind(top, a, floor, r)? {
        FilletKind::Wall => {
            if a <= r {
                return Err(Error::Geometry(format!("fillet radius {r} wider than the half-width {a}")));
            }
            let bottom = Curve::new(vec![
                Piece::Line { x0: 0.0, x1: a - r, y0: floor, y1: floor },
                Piece::Arc { x0: a - r, x1: a, cx: a - r, cy: floor + r, r, upper: false },
            ]);
            Region { a, top: top.clone(), bottom }
        }
        FilletKind::Graph => {
            let centre = |t: f64| {
                let (p, dp) = (top.eval(t), top.d1(t));
                let s = (1.0 + dp * dp).sqrt();
                (t + r * dp / s, p - r / s)
            };
            let target = floor + r;
            let (mut lo, mut hi) = (0.0, a);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if centre(mid).1 > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = lo;
            let (cx, _) = centre(t);
            if cx <= 0.0 {
                return Err(Error::Geometry(format!("fillet radius {r} does not fit at depth {n}")));
            }
            let reach = cx + r;
            let mut top_pieces = top.truncated(t).pieces;
            top_pieces.push(Piece::Arc { x0: t, x1: reach, cx, cy: target, r, upper: true });
            let bottom = Curve::new(vec![
                Piece::Line { x0: 0.0, x1: cx, y0: floor, y1: floor },
                Piece::Arc { x0: cx, x1: reach, cx, cy: target, r, upper: false },
            ]);
            Region { a: reach, top: Curve::new(top_pieces), bottom }
        }
    };
    let spec = DomainSpec::Truncated { parent: Box::new(domain.spec().clone()), n, radius: Some(r) };
    Ok(Domain::from_parts(spec, Shape::Region(region)))
}

fn fillet_kind(top: &Curve, a: f64, floor: f64, r: f64) -> Result<FilletKind> {
    let pa = top.eval(a);
    if pa >= floor + r {
        Ok(FilletKind::Wall)
    } else if pa < floor {
        Ok(FilletKind::Graph)
    } else {
        Err(Error::Geometry(format!(
            "wall below the profile is too short for a fillet of radius {r} at y = {floor}"
        )))
    }
}

/// Truncation parameters (n, r̃) and the parent's p(0) for a domain built by [`invading_sequence`].
pub fn truncation_of(domain: &Domain) -> Option<(u32, f64, f64)> {
    match domain.spec() {
        DomainSpec::Truncated { parent, n, radius: Some(r) } => {
            let p0 = super::build_domain(parent).ok()?.top()?.eval(0.0);
            Some((*n, *r, p0))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_domain;

    fn half_strip() -> Domain {
        build_domain(&DomainSpec::HalfStrip { a: 1.0, top: 0.0 }).unwrap()
    }

    #[test]
    fn straight_wall_fillets() {
        let d = half_strip();
        assert_eq!(default_radius(&d).unwrap(), 0.25);
        let o4 = invading_sequence(&d, 4, Some(0.25)).unwrap();
        let r = o4.region().unwrap();
        assert_eq!(r.a, 1.0);
        assert!((r.bottom.eval(0.5) + 4.0).abs() < 1e-15);
        // Corner rounded: the point (0.99, −3.99) lies outside, (0.9, −3.9) inside.
        assert!(!o4.contains(0.99, -3.99));
        assert!(o4.contains(0.9, -3.9));
        assert!((r.bottom.eval(1.0) + 3.75).abs() < 1e-12);
    }

    #[test]
    fn index_and_radius_errors() {
        let d = build_domain(&DomainSpec::HalfStrip { a: 1.0, top: -2.5 }).unwrap();
        assert_eq!(first_index(&d).unwrap(), 3);
        assert!(matches!(invading_sequence(&d, 2, None), Err(Error::EmptyInterior { .. })));
        assert!(matches!(invading_sequence(&half_strip(), 4, Some(1.2)), Err(Error::Geometry(_))));
    }
}
