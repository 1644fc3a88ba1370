//! Normal reflection of the inner collar of Ωₙ across its nearest wall.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::curve::Piece;
use super::domain::{Domain, Region};
use super::invading::truncation_of;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Wall {
    TopProfile,
    BottomProfile,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReflectionSample {
    pub source: [f64; 2],
    pub image: [f64; 2],
    /// Abscissa of the foot of the normal, x_m = (x + x_e)/2.
    pub midpoint_abscissa: f64,
    pub jacobian_abs: f64,
    pub wall: Wall,
    /// Distance from the source to the wall.
    pub depth: f64,
    /// Set when another wall is equally near (the top profile wins).
    pub tie: bool,
}

impl ReflectionSample {
    /// exp(−‖Φ(x,y)‖²/2 + (x² + y²)/2).
    pub fn weight_ratio(&self) -> f64 {
        let n2 = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
        (0.5 * (n2(self.source) - n2(self.image))).exp()
    }
}

/// The weight-ratio bound max{1, e^{−2r̃p(0)}}.
pub fn weight_ratio_bound(radius: f64, p0: f64) -> f64 {
    (-2.0 * radius * p0).exp().max(1.0)
}

enum Element<'a> {
    Curve(&'a Piece),
    Vertical { x: f64, y0: f64, y1: f64 },
}

struct Foot {
    point: [f64; 2],
    dist: f64,
    jacobian: f64,
}

fn segment_foot(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return a;
    }
    let s = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    [a[0] + s * dx, a[1] + s * dy]
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Closed-form Jacobian of the reflection across a graph y = f(x), at foot abscissa x_m.
pub fn graph_jacobian(d1: f64, d2: f64, y_minus_f: f64) -> f64 {
    let s = 1.0 + d1 * d1;
    let c = d2 * y_minus_f;
    ((s + c) / (-s + c)).abs()
}

fn foot_on(el: &Element, p: [f64; 2]) -> Foot {
    match *el {
        Element::Vertical { x, y0, y1 } => {
            let f = segment_foot(p, [x, y0], [x, y1]);
            Foot { point: f, dist: dist(p, f), jacobian: 1.0 }
        }
        Element::Curve(piece) => match *piece {
            Piece::Line { x0, x1, y0, y1 } => {
                let f = segment_foot(p, [x0, y0], [x1, y1]);
                Foot { point: f, dist: dist(p, f), jacobian: 1.0 }
            }
            Piece::Arc { x0, x1, cx, cy, r, upper } => {
                let (dx, dy) = (p[0] - cx, p[1] - cy);
                let len = dx.hypot(dy);
                let proj = [cx + r * dx / len, cy + r * dy / len];
                let on_arc = len > 0.0
                    && proj[0] >= x0 - 1e-15
                    && proj[0] <= x1 + 1e-15
                    && (if upper { proj[1] >= cy } else { proj[1] <= cy });
                let f = if on_arc {
                    proj
                } else {
                    let e0 = [x0, piece.eval(x0)];
                    let e1 = [x1, piece.eval(x1)];
                    if dist(p, e0) <= dist(p, e1) {
                        e0
                    } else {
                        e1
                    }
                };
                let t = dist(p, f);
                let jacobian = if on_arc { (r + t) / (r - t) } else { 1.0 };
                Foot { point: f, dist: t, jacobian }
            }
            Piece::Graph { x0, x1, ref f } => {
                let d2 = |s: f64| (s - p[0]).powi(2) + (f.eval(s) - p[1]).powi(2);
                let m = 64;
                let grid: Vec<f64> = (0..=m).map(|i| x0 + (x1 - x0) * i as f64 / m as f64).collect();
                let best = (0..=m).min_by(|&i, &j| d2(grid[i]).total_cmp(&d2(grid[j]))).unwrap();
                let (mut lo, mut hi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(m)]);
                let g = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..80 {
                    let (c, d) = (hi - g * (hi - lo), lo + g * (hi - lo));
                    if d2(c) < d2(d) {
                        hi = d;
                    } else {
                        lo = c;
                    }
                }
                let (blo, bhi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(m)]);
                let mut s = 0.5 * (lo + hi);
                for _ in 0..4 {
                    let (v, d, dd) = (f.eval(s), f.d1(s), f.d2(s));
                    let g1 = (s - p[0]) + (v - p[1]) * d;
                    let g2 = 1.0 + d * d + (v - p[1]) * dd;
                    if g2 <= 0.0 {
                        break;
                    }
                    s = (s - g1 / g2).clamp(blo, bhi);
                }
                let foot = [s, f.eval(s)];
                let interior = s > x0 && s < x1;
                let jacobian = if interior { graph_jacobian(f.d1(s), f.d2(s), p[1] - foot[1]) } else { 1.0 };
                Foot { point: foot, dist: dist(p, foot), jacobian }
            }
        },
    }
}

fn elements(r: &Region) -> Vec<(Element<'_>, Wall)> {
    let mut out = Vec::new();
    for (curve, wall) in [(&r.top, Wall::TopProfile), (&r.bottom, Wall::BottomProfile)] {
        for (i, piece) in curve.pieces.iter().enumerate() {
            out.push((Element::Curve(piece), wall));
            if let Some(next) = curve.pieces.get(i + 1) {
                let x = piece.span().1;
                let (ya, yb) = (piece.eval(x), next.eval(x));
                if ya != yb {
                    out.push((Element::Vertical { x, y0: ya.min(yb), y1: ya.max(yb) }, wall));
                }
            }
        }
    }
    let (lo, hi) = (r.bottom.eval(r.a), r.top.eval(r.a));
    if hi > lo {
        out.push((Element::Vertical { x: r.a, y0: lo, y1: hi }, Wall::TopProfile));
    }
    out
}

fn nearest(r: &Region, p: [f64; 2]) -> (Foot, Wall, bool) {
    let mut feet: Vec<(Foot, Wall)> = elements(r).iter().map(|(e, w)| (foot_on(e, p), *w)).collect();
    feet.sort_by(|a, b| a.0.dist.total_cmp(&b.0.dist).then((a.1 as u8).cmp(&(b.1 as u8))));
    let tie = feet.len() > 1
        && (feet[1].0.dist - feet[0].0.dist).abs() <= 1e-12 * (1.0 + feet[0].0.dist)
        && dist(feet[1].0.point, feet[0].0.point) > 1e-9;
    // Equidistant walls: prefer the top profile.
    let pick = if tie && feet[0].1 != Wall::TopProfile && feet[1].1 == Wall::TopProfile { 1 } else { 0 };
    let (foot, wall) = feet.swap_remove(pick);
    (foot, wall, tie)
}

/// Distance from an interior point to the boundary of a bounded region.
pub fn boundary_distance(r: &Region, x: f64, y: f64) -> f64 {
    nearest(r, [x.abs(), y]).0.dist
}

/// Reflect `point` of the collar {dist < r̃} of Ωₙ across its nearest wall.
pub fn reflection_jacobian(domain_n: &Domain, point: (f64, f64)) -> Result<ReflectionSample> {
    let (_, radius, _) = truncation_of(domain_n)
        .ok_or_else(|| Error::Unsupported("reflection needs a truncated domain Ωₙ".into()))?;
    let r = domain_n.region().expect("truncated domains are bounded");
    let (x, y) = point;
    if !r.contains(x, y) {
        return Err(Error::Geometry(format!("point ({x}, {y}) is not inside Ωₙ")));
    }
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let (foot, wall, tie) = nearest(r, [x.abs(), y]);
    if foot.dist >= radius {
        return Err(Error::NotInCollar { distance: foot.dist, radius });
    }
    let image = [sign * (2.0 * foot.point[0] - x.abs()), 2.0 * foot.point[1] - y];
    Ok(ReflectionSample {
        source: [x, y],
        image,
        midpoint_abscissa: sign * foot.point[0],
        jacobian_abs: foot.jacobian,
        wall,
        depth: foot.dist,
        tie,
    })
}

/// `count` seeded uniform points of Ωₙ at distance < `depth` from ∂Ωₙ.
pub fn sample_collar(domain_n: &Domain, count: usize, depth: f64, seed: u64) -> Result<Vec<(f64, f64)>> {
    let r = domain_n
        .region()
        .ok_or_else(|| Error::Unsupported("collar sampling needs a bounded domain".into()))?;
    let m = 400;
    let (mut ylo, mut yhi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=m {
        let x = r.a * i as f64 / m as f64;
        ylo = ylo.min(r.bottom.eval(x));
        yhi = yhi.max(r.top.eval(x));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let limit = 2_000 * count.max(1) + 100_000;
    for _ in 0..limit {
        if out.len() == count {
            return Ok(out);
        }
        let x = rng.gen_range(-r.a..r.a);
        let y = rng.gen_range(ylo..yhi);
        if r.contains(x, y) && boundary_distance(r, x, y) < depth {
            out.push((x, y));
        }
    }
    Err(Error::Parameter(format!("collar of depth {depth} is empty or too thin to sample")))
}
