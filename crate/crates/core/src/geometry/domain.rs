//! Declarative domain descriptions and their validated, evaluable form.

use serde::{Deserialize, Serialize};

use super::curve::{Curve, Piece};
use super::invading;
use super::profile::{ProfileFn, ProfileSpec};
use crate::error::{Error, Result};

/// Domain as read from a JSON file (`{"kind": "rectangle", "a": 1, "b": 2}`).
/// Every kind is symmetric under x ↦ −x.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Plane,
    /// (−a, a) × (−b, b).
    Rectangle { a: f64, b: f64 },
    /// (−a, a) × ℝ.
    Strip { a: f64 },
    /// (−a, a) × (−∞, top).
    HalfStrip { a: f64, top: f64 },
    Disk { r: f64 },
    ConvexPolygon { vertices: Vec<[f64; 2]> },
    /// {|x| < a, q(x) < y < p(x)}.
    Profile { a: f64, p: ProfileSpec, q: Bottom },
    /// Two `side`-squares centred on the x-axis joined by a corridor of width
    /// `corridor` and length `length` crossing the y-axis. Not convex.
    Dumbbell {
        corridor: f64,
        #[serde(default = "unit")]
        length: f64,
        #[serde(default = "unit")]
        side: f64,
    },
    /// Bounded truncation Ωₙ of an unbounded-below parent with filleted corners.
    Truncated {
        parent: Box<DomainSpec>,
        n: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
    },
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bottom {
    Profile(ProfileSpec),
    Keyword(BottomKeyword),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BottomKeyword {
    UnboundedBelow,
}

impl Bottom {
    pub const UNBOUNDED: Bottom = Bottom::Keyword(BottomKeyword::UnboundedBelow);
}

/// {|x| < a, bottom(|x|) < y < top(|x|)} with both curves given on [0, a].
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub a: f64,
    pub top: Curve,
    pub bottom: Curve,
}

impl Region {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let t = x.abs();
        t < self.a && y > self.bottom.eval(t) && y < self.top.eval(t)
    }

    /// Merged breakpoints of both curves on [0, a].
    pub fn knots(&self) -> Vec<f64> {
        let mut k = self.top.knots();
        k.extend(self.bottom.knots());
        k.sort_by(f64::total_cmp);
        k.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * (1.0 + b.abs()));
        k
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Plane,
    Strip { a: f64 },
    /// {|x| < a, y < top(|x|)}: vertical walls at x = ±a run down to −∞.
    Below { a: f64, top: Curve },
    Region(Region),
}

/// A validated domain: the declarative spec plus its evaluable shape.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    spec: DomainSpec,
    shape: Shape,
}

impl Domain {
    pub(crate) fn from_parts(spec: DomainSpec, shape: Shape) -> Self {
        Domain { spec, shape }
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn region(&self) -> Option<&Region> {
        match &self.shape {
            Shape::Region(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.shape, Shape::Region(_))
    }

    pub fn is_unbounded_below(&self) -> bool {
        matches!(self.shape, Shape::Below { .. })
    }

    /// Half-width a = sup |x| over the domain.
    pub fn half_width(&self) -> f64 {
        match &self.shape {
            Shape::Plane => f64::INFINITY,
            Shape::Strip { a } | Shape::Below { a, .. } => *a,
            Shape::Region(r) => r.a,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        match &self.shape {
            Shape::Plane => true,
            Shape::Strip { a } => x.abs() < *a,
            Shape::Below { a, top } => x.abs() < *a && y < top.eval(x.abs()),
            Shape::Region(r) => r.contains(x, y),
        }
    }

    /// Top profile p on [0, a], when the domain has one.
    pub fn top(&self) -> Option<&Curve> {
        match &self.shape {
            Shape::Below { top, .. } => Some(top),
            Shape::Region(r) => Some(&r.top),
            _ => None,
        }
    }
}

fn invalid(invariant: &str, x: f64, y: f64) -> Error {
    Error::Validation { invariant: invariant.into(), x, y }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(&format!("{name} > 0 and finite"), v, 0.0))
    }
}

const PROFILE_SAMPLES: usize = 1000;

/// Validate a raw spec and build its evaluable shape.
pub fn build_domain(spec: &DomainSpec) -> Result<Domain> {
    let shape = match spec {
        DomainSpec::Plane => Shape::Plane,
        DomainSpec::Rectangle { a, b } => {
            let (a, b) = (positive("a", *a)?, positive("b", *b)?);
            Shape::Region(Region { a, top: Curve::constant(0.0, a, b), bottom: Curve::constant(0.0, a, -b) })
        }
        DomainSpec::Strip { a } => Shape::Strip { a: positive("a", *a)? },
        DomainSpec::HalfStrip { a, top } => {
            let a = positive("a", *a)?;
            if !top.is_finite() {
                return Err(invalid("top is finite", 0.0, *top));
            }
            Shape::Below { a, top: Curve::constant(0.0, a, *top) }
        }
        DomainSpec::Disk { r } => {
            let r = positive("R", *r)?;
            let arc = |upper| Piece::Arc { x0: 0.0, x1: r, cx: 0.0, cy: 0.0, r, upper };
            Shape::Region(Region { a: r, top: Curve::new(vec![arc(true)]), bottom: Curve::new(vec![arc(false)]) })
        }
        DomainSpec::ConvexPolygon { vertices } => Shape::Region(polygon_region(vertices)?),
        DomainSpec::Profile { a, p, q } => profile_shape(*a, p, q)?,
        DomainSpec::Dumbbell { corridor, length, side } => {
            let (eps, len, side) = (positive("corridor", *corridor)?, positive("length", *length)?, positive("side", *side)?);
            if eps > side {
                return Err(invalid("corridor ≤ side", eps, side));
            }
            let l = 0.5 * len;
            let a = l + side;
            let half = |s: f64| {
                Curve::new(vec![
                    Piece::Line { x0: 0.0, x1: l, y0: s * 0.5 * eps, y1: s * 0.5 * eps },
                    Piece::Line { x0: l, x1: a, y0: s * 0.5 * side, y1: s * 0.5 * side },
                ])
            };
            Shape::Region(Region { a, top: half(1.0), bottom: half(-1.0) })
        }
        DomainSpec::Truncated { parent, n, radius } => {
            let parent = build_domain(parent)?;
            return invading::invading_sequence(&parent, *n, *radius);
        }
    };
    Ok(Domain { spec: spec.clone(), shape })
}

fn polygon_region(vertices: &[[f64; 2]]) -> Result<Region> {
    if vertices.len() < 3 {
        return Err(invalid("polygon has at least three vertices", 0.0, 0.0));
    }
    if let Some(v) = vertices.iter().find(|v| !(v[0].is_finite() && v[1].is_finite())) {
        return Err(invalid("finite vertices", v[0], v[1]));
    }
    let scale = vertices.iter().fold(0.0f64, |m, v| m.max(v[0].abs()).max(v[1].abs())).max(1e-300);
    let tol = 1e-12 * scale;
    for v in vertices {
        if !vertices.iter().any(|w| (w[0] + v[0]).abs() <= tol && (w[1] - v[1]).abs() <= tol) {
            return Err(invalid("vertex set invariant under x ↦ −x", v[0], v[1]));
        }
    }
    let n = vertices.len() as f64;
    let (cx, cy) = vertices.iter().fold((0.0, 0.0), |(sx, sy), v| (sx + v[0] / n, sy + v[1] / n));
    let mut ring = vertices.to_vec();
    ring.sort_by(|p, q| (p[1] - cy).atan2(p[0] - cx).total_cmp(&(q[1] - cy).atan2(q[0] - cx)));
    for i in 0..ring.len() {
        let (p, q, r) = (ring[i], ring[(i + 1) % ring.len()], ring[(i + 2) % ring.len()]);
        let cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
        if !(cross > 1e-12 * scale * scale) {
            return Err(invalid("vertices in strictly convex position", q[0], q[1]));
        }
    }
    let mut xs: Vec<f64> = ring.iter().map(|v| v[0].abs()).collect();
    xs.push(0.0);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= tol);
    let a = *xs.last().unwrap();
    let section = |x: f64| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..ring.len() {
            let (p, q) = (ring[i], ring[(i + 1) % ring.len()]);
            let (xl, xr) = (p[0].min(q[0]), p[0].max(q[0]));
            if x < xl - tol || x > xr + tol {
                continue;
            }
            if xr - xl <= tol {
                lo = lo.min(p[1].min(q[1]));
                hi = hi.max(p[1].max(q[1]));
            } else {
                let y = p[1] + (q[1] - p[1]) * ((x - p[0]) / (q[0] - p[0])).clamp(0.0, 1.0);
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        (lo, hi)
    };
    let secs: Vec<(f64, f64)> = xs.iter().map(|&x| section(x)).collect();
    let chain = |pick: fn(&(f64, f64)) -> f64| {
        Curve::new(
            xs.windows(2)
                .zip(secs.windows(2))
                .map(|(x, s)| Piece::Line { x0: x[0], x1: x[1], y0: pick(&s[0]), y1: pick(&s[1]) })
                .collect(),
        )
    };
    Ok(Region { a, top: chain(|s| s.1), bottom: chain(|s| s.0) })
}

fn check_profile(f: &ProfileFn, a: f64, name: &str, concave: bool) -> Result<()> {
    if f.reach() < a * (1.0 - 1e-12) {
        return Err(invalid(&format!("{name} sampled over the whole interval (−a, a)"), f.reach(), 0.0));
    }
    let m = PROFILE_SAMPLES;
    let dx = 2.0 * a / m as f64;
    for i in 0..=m {
        let x = (-a + i as f64 * dx).clamp(-a, a);
        let (v, w) = (f.eval(x), f.eval(-x));
        if !v.is_finite() {
            return Err(invalid(&format!("{name} finite"), x, v));
        }
        if (v - w).abs() > 1e-9 * (1.0 + v.abs()) {
            return Err(invalid(&format!("{name} even"), x, v));
        }
        if i > 0 && i < m {
            let sd = f.eval(x - dx) - 2.0 * v + f.eval(x + dx);
            let sd = if concave { sd } else { -sd };
            if sd > 1e-8 * (1.0 + v.abs()) {
                let what = if concave { "p concave (found convex-not-concave)" } else { "q convex (found concave-not-convex)" };
                return Err(invalid(&format!("{name}: {what}"), x, v));
            }
        }
    }
    Ok(())
}

fn profile_shape(a: f64, p: &ProfileSpec, q: &Bottom) -> Result<Shape> {
    let a = positive("a", a)?;
    let pf = ProfileFn::from_spec(p)?;
    check_profile(&pf, a, "p", true)?;
    let top = Curve::new(vec![Piece::Graph { x0: 0.0, x1: a, f: pf.clone() }]);
    match q {
        Bottom::Keyword(BottomKeyword::UnboundedBelow) => Ok(Shape::Below { a, top }),
        Bottom::Profile(qs) => {
            let qf = ProfileFn::from_spec(qs)?;
            check_profile(&qf, a, "q", false)?;
            let m = PROFILE_SAMPLES;
            for i in 0..=m {
                let x = a * i as f64 / m as f64;
                let (pv, qv) = (pf.eval(x), qf.eval(x));
                let ok = if i < m { pv > qv } else { pv >= qv - 1e-12 * (1.0 + pv.abs()) };
                if !ok {
                    return Err(invalid("p > q", x, pv));
                }
            }
            let bottom = Curve::new(vec![Piece::Graph { x0: 0.0, x1: a, f: qf }]);
            Ok(Shape::Region(Region { a, top, bottom }))
        }
    }
}

/// Extent of the symmetry axis {x = 0} inside the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxisSpan {
    Segment { y_min: f64, y_max: f64 },
    RayDown { y_max: f64 },
    Line,
}

impl AxisSpan {
    pub fn length(&self) -> f64 {
        match *self {
            AxisSpan::Segment { y_min, y_max } => y_max - y_min,
            _ => f64::INFINITY,
        }
    }
}

/// Ω ∩ {x > 0}, with the part of ∂ on x = 0 tagged as the axis.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfDomain {
    pub domain: Domain,
    pub axis: AxisSpan,
}

impl HalfDomain {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > 0.0 && self.domain.contains(x, y)
    }
}

pub fn half_domain(domain: &Domain) -> HalfDomain {
    let axis = match domain.shape() {
        Shape::Plane | Shape::Strip { .. } => AxisSpan::Line,
        Shape::Below { top, .. } => AxisSpan::RayDown { y_max: top.eval(0.0) },
        Shape::Region(r) => AxisSpan::Segment { y_min: r.bottom.eval(0.0), y_max: r.top.eval(0.0) },
    };
    HalfDomain { domain: domain.clone(), axis }
}

/// Euclidean diameter of a bounded domain.
pub fn diameter(domain: &Domain) -> Result<f64> {
    match domain.spec() {
        DomainSpec::Rectangle { a, b } => return Ok(2.0 * a.hypot(*b)),
        DomainSpec::Disk { r } => return Ok(2.0 * r),
        DomainSpec::ConvexPolygon { vertices } => return Ok(max_pairwise(vertices)),
        _ => {}
    }
    let r = domain.region().ok_or_else(|| Error::Unsupported("diameter of an unbounded domain".into()))?;
    // Boundary samples: all curve knots plus a dense uniform sweep.
    let mut xs = r.knots();
    let m = 600;
    xs.extend((0..=m).map(|i| r.a * i as f64 / m as f64));
    let mut pts = Vec::with_capacity(4 * xs.len());
    for &x in &xs {
        for y in [r.top.eval(x), r.bottom.eval(x)] {
            pts.push([x, y]);
            pts.push([-x, y]);
        }
        // Both sides of a jump between pieces.
        for c in [&r.top, &r.bottom] {
            for p in &c.pieces {
                let (x0, x1) = p.span();
                if x == x0 || x == x1 {
                    pts.push([x, p.eval(x)]);
                    pts.push([-x, p.eval(x)]);
                }
            }
        }
    }
    Ok(max_pairwise(&pts))
}

fn max_pairwise(pts: &[[f64; 2]]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max((p[0] - q[0]).hypot(p[1] - q[1]));
        }
    }
    best
}

/// Regular hexagon of half-width `a` with two vertices on the y-axis.
pub fn regular_hexagon(a: f64) -> DomainSpec {
    let r = 2.0 * a / 3f64.sqrt();
    DomainSpec::ConvexPolygon {
        vertices: vec![[0.0, r], [-a, 0.5 * r], [-a, -0.5 * r], [0.0, -r], [a, -0.5 * r], [a, 0.5 * r]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trips_through_json() {
        let specs = [
            DomainSpec::Rectangle { a: 1.0, b: 2.0 },
            DomainSpec::HalfStrip { a: 1.0, top: 0.0 },
            DomainSpec::Profile { a: 12.0, p: ProfileSpec::Poly(vec![0.0, 0.0, -1.0]), q: Bottom::UNBOUNDED },
            DomainSpec::Dumbbell { corridor: 0.1, length: 1.0, side: 1.0 },
        ];
        for s in specs {
            let text = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<DomainSpec>(&text).unwrap(), s);
        }
        let t: DomainSpec = serde_json::from_str(
            r#"{"kind":"profile","a":1,"p":{"poly":[1,0,-1]},"q":{"poly":[-1,0,1]}}"#,
        )
        .unwrap();
        assert!(build_domain(&t).unwrap().is_bounded());
        let u: DomainSpec = serde_json::from_str(r#"{"kind":"profile","a":2,"p":{"poly":[0]},"q":"unbounded_below"}"#).unwrap();
        assert!(build_domain(&u).unwrap().is_unbounded_below());
    }

    #[test]
    fn polygon_sections() {
        let d = build_domain(&regular_hexagon(1.0)).unwrap();
        let r = d.region().unwrap();
        let big = 2.0 / 3f64.sqrt();
        assert!((r.top.eval(0.0) - big).abs() < 1e-14);
        assert!((r.top.eval(1.0) - big / 2.0).abs() < 1e-14);
        assert!((r.bottom.eval(0.5) + 0.75 * big).abs() < 1e-14);
        assert!(d.contains(0.99, 0.5) && !d.contains(0.5, 1.0));
    }

    #[test]
    fn non_convex_polygon_rejected_with_witness() {
        let dart = DomainSpec::ConvexPolygon { vertices: vec![[0.0, 0.0], [-1.0, 1.0], [0.0, -1.0], [1.0, 1.0]] };
        match build_domain(&dart) {
            Err(Error::Validation { invariant, .. }) => assert!(invariant.contains("convex")),
            other => panic!("{other:?}"),
        }
    }
}
