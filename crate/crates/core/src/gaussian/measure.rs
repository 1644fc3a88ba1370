use super::{gamma1, gauss_legendre, normal_pdf, TRUNCATION};
use crate::geometry::{Curve, Domain, DomainSpec, Region, Shape};

/// γ₂(Ω), flagged when the domain has no area.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measure2d {
    pub value: f64,
    pub degenerate: bool,
}

const PANEL: f64 = 0.25;

/// ∫₀^a f(x) dx by composite Gauss–Legendre, split at `knots`. Subintervals
/// ending where a curve has a vertical tangent use x = x₀ + (x₁ − x₀) sin θ,
/// which removes the square-root singularity.
fn integrate_x(a: f64, knots: &[f64], vertical_end: impl Fn(f64) -> bool, f: impl Fn(f64) -> f64) -> f64 {
    let gl = gauss_legendre::<f64>(20);
    let mut cuts = vec![0.0];
    cuts.extend(knots.iter().copied().filter(|&k| k > 0.0 && k < a));
    cuts.push(a);
    cuts.dedup_by(|p, q| (*p - *q).abs() <= 1e-15 * (1.0 + q.abs()));
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if vertical_end(x1) {
            let half = std::f64::consts::FRAC_PI_2;
            let n = ((x1 - x0) / PANEL).ceil().max(2.0) as usize;
            let dt = half / n as f64;
            for i in 0..n {
                let mid = (i as f64 + 0.5) * dt;
                sum += 0.5
                    * dt
                    * gl.integrate(|t| {
                        let th = mid + 0.5 * dt * t;
                        f(x0 + (x1 - x0) * th.sin()) * (x1 - x0) * th.cos()
                    });
            }
        } else {
            let n = ((x1 - x0) / PANEL).ceil().max(1.0) as usize;
            let h = (x1 - x0) / n as f64;
            for i in 0..n {
                let mid = x0 + (i as f64 + 0.5) * h;
                sum += 0.5 * h * gl.integrate(|t| f(mid + 0.5 * h * t));
            }
        }
    }
    sum
}

fn vertical_end_of(curves: &[&Curve]) -> impl Fn(f64) -> bool {
    let ends: Vec<f64> =
        curves.iter().flat_map(|c| c.pieces.iter()).filter(|p| p.vertical_at_end()).map(|p| p.span().1).collect();
    move |x| ends.iter().any(|&e| (e - x).abs() <= 1e-12 * (1.0 + x.abs()))
}

/// ∫₀^a f(x, q(x), p(x)) dx over the right half of a region.
pub fn region_integral(r: &Region, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
    integrate_x(r.a, &r.knots(), vertical_end_of(&[&r.top, &r.bottom]), |x| {
        f(x, r.bottom.eval(x), r.top.eval(x))
    })
}

/// γ₂(Ω): closed forms for the built-in shapes, composite quadrature otherwise.
pub fn gaussian_measure_2d(domain: &Domain) -> Measure2d {
    let value = match (domain.spec(), domain.shape()) {
        (DomainSpec::Plane, _) => 1.0,
        (DomainSpec::Rectangle { a, b }, _) => gamma1(-a, *a) * gamma1(-b, *b),
        (DomainSpec::Disk { r }, _) => -(-0.5 * r * r).exp_m1(),
        (DomainSpec::HalfStrip { a, top }, _) => gamma1(-a, *a) * gamma1(f64::NEG_INFINITY, *top),
        (DomainSpec::Dumbbell { corridor, length, side }, _) => {
            let l = 0.5 * length;
            gamma1(-l, l) * gamma1(-0.5 * corridor, 0.5 * corridor)
                + 2.0 * gamma1(l, l + side) * gamma1(-0.5 * side, 0.5 * side)
        }
        (_, Shape::Plane) => 1.0,
        (_, Shape::Strip { a }) => gamma1(-a, *a),
        (_, Shape::Below { a, top }) => {
            let a = a.min(TRUNCATION);
            2.0 * integrate_x(a, &top.knots(), vertical_end_of(&[top]), |x| {
                normal_pdf(x) * gamma1(f64::NEG_INFINITY, top.eval(x))
            })
        }
        (_, Shape::Region(r)) => 2.0 * region_integral(r, |x, q, p| normal_pdf(x) * gamma1(q, p)),
    };
    Measure2d { value, degenerate: !(value > 0.0) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_domain, regular_hexagon, Bottom, Curve, Piece, ProfileSpec};

    fn measure(spec: DomainSpec) -> f64 {
        gaussian_measure_2d(&build_domain(&spec).unwrap()).value
    }

    #[test]
    fn built_in_shapes_agree_with_quadrature() {
        // A rectangle written as a polygon goes through the quadrature path.
        let poly = DomainSpec::ConvexPolygon { vertices: vec![[-1.0, -2.0], [1.0, -2.0], [1.0, 2.0], [-1.0, 2.0]] };
        let rect = measure(DomainSpec::Rectangle { a: 1.0, b: 2.0 });
        assert!(((measure(poly) - rect) / rect).abs() < 1e-13);
        // Disk through the arc-substituted quadrature.
        let d = build_domain(&DomainSpec::Disk { r: 1.5 }).unwrap();
        let quad = 2.0 * region_integral(d.region().unwrap(), |x, q, p| normal_pdf(x) * gamma1(q, p));
        let exact = measure(DomainSpec::Disk { r: 1.5 });
        assert!(((quad - exact) / exact).abs() < 1e-12, "{quad} vs {exact}");
    }

    #[test]
    fn partition_additivity() {
        // Hexagon = upper cap {y > 0} ∪ lower cap {y < 0}, each built as its own region.
        let hex = build_domain(&regular_hexagon(1.0)).unwrap();
        let r = hex.region().unwrap().clone();
        let upper = Region { a: r.a, top: r.top.clone(), bottom: Curve::constant(0.0, r.a, 0.0) };
        let lower = Region { a: r.a, top: Curve::constant(0.0, r.a, 0.0), bottom: r.bottom.clone() };
        let m = |g: &Region| 2.0 * region_integral(g, |x, q, p| normal_pdf(x) * gamma1(q, p));
        let whole = gaussian_measure_2d(&hex).value;
        assert!(((m(&upper) + m(&lower) - whole) / whole).abs() < 1e-13);
        let _ = Piece::Line { x0: 0.0, x1: 1.0, y0: 0.0, y1: 0.0 };
    }

    #[test]
    fn profile_domains_and_half_strips() {
        let lens = DomainSpec::Profile {
            a: 1.0,
            p: ProfileSpec::Poly(vec![1.0, 0.0, -1.0]),
            q: Bottom::Profile(ProfileSpec::Poly(vec![-1.0, 0.0, 1.0])),
        };
        // Oracle: 2-D tensor Gauss–Legendre on the square map (x, s) ↦ (x, s·p(x)).
        let gl = gauss_legendre::<f64>(40);
        let mut oracle = 0.0;
        for (&x, &wx) in gl.nodes.iter().zip(&gl.weights) {
            let p = 1.0 - x * x;
            for (&s, &ws) in gl.nodes.iter().zip(&gl.weights) {
                oracle += wx * ws * p * normal_pdf(x) * normal_pdf(s * p);
            }
        }
        assert!(((measure(lens) - oracle) / oracle).abs() < 1e-10);
        let hs = measure(DomainSpec::HalfStrip { a: 1.0, top: 0.0 });
        let hs_profile = measure(DomainSpec::Profile { a: 1.0, p: ProfileSpec::Poly(vec![0.0]), q: Bottom::UNBOUNDED });
        assert!((hs - hs_profile).abs() < 1e-14);
    }
}
