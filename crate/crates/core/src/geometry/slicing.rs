//! Decomposition of Ω ∩ {y > y₀} into 2ⁿ horizontal strips of equal Gaussian measure.

use std::sync::Arc;

use super::curve::Curve;
use super::domain::Domain;
use crate::error::{Error, Result};
use crate::gaussian::{gamma1, gauss_legendre, normal_pdf, QuadratureRule};

/// Height profile φ(x) = γ₁(d, min(p(x), e)) of the strip {d < y < min(p(x), e)}.
#[derive(Clone, Debug, PartialEq)]
pub struct StripWeight {
    top: Arc<Curve>,
    pub d: f64,
    pub e: f64,
    /// Half-width: φ > 0 on (−a_k, a_k).
    pub a_k: f64,
    /// Half-width of the flat part where p ≥ e (0 when p has no flat part).
    pub flat: f64,
}

impl StripWeight {
    /// Strip of {|x| < a, y < top(|x|)} between heights d < e.
    pub fn new(top: Arc<Curve>, d: f64, e: f64) -> Result<Self> {
        if !(d < e) {
            return Err(Error::InvalidInterval { a: d, b: e });
        }
        let a_k = top
            .last_at_or_above(d)
            .ok_or_else(|| Error::Geometry(format!("strip bottom {d} above the profile")))?;
        let flat = top.last_at_or_above(e).unwrap_or(0.0).min(a_k);
        let flat = if flat <= 1e-12 * a_k { 0.0 } else { flat };
        Ok(StripWeight { top, d, e, a_k, flat })
    }

    fn height(&self, x: f64) -> f64 {
        self.top.eval(x.abs()).min(self.e)
    }

    pub fn value(&self, x: f64) -> f64 {
        gamma1(self.d, self.height(x))
    }

    pub fn d1(&self, x: f64) -> f64 {
        let t = x.abs();
        if t < self.flat || self.top.eval(t) >= self.e {
            return 0.0;
        }
        x.signum() * normal_pdf(self.top.eval(t)) * self.top.d1(t)
    }

    pub fn d2(&self, x: f64) -> f64 {
        let t = x.abs();
        if t < self.flat || self.top.eval(t) >= self.e {
            return 0.0;
        }
        let (p, dp, ddp) = (self.top.eval(t), self.top.d1(t), self.top.d2(t));
        (ddp - p * dp * dp) * normal_pdf(p)
    }

    /// Abscissae in (−a_k, a_k) where φ′ may jump.
    pub fn kinks(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.top.knots().into_iter().filter(|&t| t < self.a_k).collect();
        if self.flat > 0.0 && self.flat < self.a_k {
            k.push(self.flat);
        }
        let mut all: Vec<f64> = k.iter().flat_map(|&t| [t, -t]).collect();
        all.sort_by(f64::total_cmp);
        all.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        if all.contains(&0.0) && self.d1(1e-9).abs() < 1e-14 {
            all.retain(|&t| t != 0.0);
        }
        all
    }

    /// Gaussian measure of the strip, ∫ φ dγ_x.
    pub fn measure(&self) -> f64 {
        strip_measure(&self.top, self.d, self.e)
    }
}

fn panels(a: f64, b: f64, knots: &[f64], gl: &QuadratureRule<f64>, f: impl Fn(f64) -> f64) -> f64 {
    let mut cuts = vec![a];
    cuts.extend(knots.iter().copied().filter(|&t| t > a && t < b));
    cuts.push(b);
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let n = ((w[1] - w[0]) / 0.1).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            let mid = w[0] + (i as f64 + 0.5) * h;
            sum += 0.5 * h * gl.integrate(|t| f(mid + 0.5 * h * t));
        }
    }
    sum
}

/// γ₂ of {|x| < a, d < y < min(p(|x|), e)}.
fn strip_measure(top: &Curve, d: f64, e: f64) -> f64 {
    let Some(a_d) = top.last_at_or_above(d) else { return 0.0 };
    let x_e = top.last_at_or_above(e).unwrap_or(0.0).min(a_d);
    let gl = gauss_legendre::<f64>(20);
    let flat = gamma1(0.0, x_e) * gamma1(d, e);
    let sloped = panels(x_e, a_d, &top.knots(), &gl, |x| normal_pdf(x) * gamma1(d, top.eval(x)));
    2.0 * (flat + sloped)
}

#[derive(Clone, Debug)]
pub struct SliceStrip {
    pub a_k: f64,
    pub d_k: f64,
    /// Top cut height; p_k = min(p, top).
    pub top: f64,
    /// ā_k, the flat half-width of p_k.
    pub flat: f64,
    pub measure: f64,
    pub phi: StripWeight,
}

#[derive(Clone, Debug)]
pub struct SliceSet {
    pub parent: Domain,
    /// Base ordinate y₀ of the sliced part Ω ∩ {y > y₀}.
    pub base: f64,
    pub n: u32,
    pub total_measure: f64,
    pub strips: Vec<SliceStrip>,
    pub notes: Vec<String>,
}

impl SliceSet {
    /// Smallest sampled second difference of φ_k (negative values mean non-convex).
    pub fn phi_second_difference_min(&self, k: usize, samples: usize) -> f64 {
        let s = &self.strips[k];
        let h = 2.0 * s.a_k / samples as f64;
        (1..samples)
            .map(|i| {
                let x = -s.a_k + i as f64 * h;
                s.phi.value(x - h) - 2.0 * s.phi.value(x) + s.phi.value(x + h)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

const MEASURE_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;
/// Equal-measure guarantee of the slicing; a stalled bisection below it is an error.
const STALL_TOL: f64 = 1e-10;

/// Slice Ω⁺ = Ω ∩ {y > p(a)} into 2ⁿ strips of equal Gaussian measure.
pub fn slice_equal_gaussian(domain: &Domain, n: u32) -> Result<SliceSet> {
    let r = domain
        .region()
        .ok_or_else(|| Error::Unsupported("slicing needs a bounded domain".into()))?;
    slice_above(domain, r.top.eval(r.a), n)
}

/// Slice Ω ∩ {y > y₀} for any y₀ at or above the bottom profile's maximum.
pub fn slice_above(domain: &Domain, y0: f64, n: u32) -> Result<SliceSet> {
    let r = domain
        .region()
        .ok_or_else(|| Error::Unsupported("slicing needs a bounded domain".into()))?;
    let bottom_max = r.bottom.eval(r.a).max(r.bottom.eval(0.0));
    if y0 < bottom_max - 1e-12 {
        return Err(Error::Parameter(format!("base {y0} below the bottom profile maximum {bottom_max}")));
    }
    if n > 20 {
        return Err(Error::Parameter(format!("slicing depth {n} too large")));
    }
    let top = Arc::new(r.top.clone());
    let peak = top.eval(0.0);
    if !(peak > y0) {
        return Err(Error::Degenerate(format!("Ω ∩ {{y > {y0}}} is empty")));
    }
    let total = strip_measure(&top, y0, peak);
    let mut cuts = vec![y0, peak];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * cuts.len() - 1);
        for w in cuts.windows(2) {
            next.push(w[0]);
            next.push(halve(&top, w[0], w[1])?);
        }
        next.push(*cuts.last().unwrap());
        cuts = next;
    }
    let mut notes = Vec::new();
    let mut strips = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let phi = StripWeight::new(top.clone(), w[0], w[1])?;
        if phi.flat == 0.0 {
            notes.push(format!("strip [{}, {}]: profile has no flat part, ā_k = 0", w[0], w[1]));
        }
        strips.push(SliceStrip {
            a_k: phi.a_k,
            d_k: w[0],
            top: w[1],
            flat: phi.flat,
            measure: phi.measure(),
            phi,
        });
    }
    Ok(SliceSet { parent: domain.clone(), base: y0, n, total_measure: total, strips, notes })
}

/// Height c in (d, e) splitting the strip into halves of equal measure.
fn halve(top: &Curve, d: f64, e: f64) -> Result<f64> {
    let target = 0.5 * strip_measure(top, d, e);
    if !(target > 0.0) {
        return Err(Error::Precision(format!("strip [{d}, {e}] has no measurable mass")));
    }
    let (mut lo, mut hi) = (d, e);
    for _ in 0..MAX_BISECTIONS {
        let c = 0.5 * (lo + hi);
        let m = strip_measure(top, d, c);
        if (m - target).abs() <= MEASURE_TOL * target {
            return Ok(c);
        }
        if hi - lo < 1e-13 * (1.0 + c.abs()) {
            // Quadrature noise floor: accept if the strip invariant still holds.
            if (m - target).abs() <= STALL_TOL * target {
                return Ok(c);
            }
            return Err(Error::Precision(format!(
                "bisection stalled at width {:e} with relative measure error {:e}",
                hi - lo,
                (m - target).abs() / target
            )));
        }
        if m < target {
            lo = c;
        } else {
            hi = c;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_domain, regular_hexagon, DomainSpec};

    #[test]
    fn slice_weights_are_even_and_flat_on_rectangles() {
        let d = build_domain(&DomainSpec::Rectangle { a: 1.0, b: 1.0 }).unwrap();
        let s = slice_above(&d, 0.0, 3).unwrap();
        for k in 0..s.strips.len() {
            let w = &s.strips[k].phi;
            for i in 0..=50 {
                let x = w.a_k * i as f64 / 50.0;
                assert_eq!(w.value(x), w.value(-x));
            }
            let m = s.phi_second_difference_min(k, 400);
            assert!(m.abs() < 1e-12, "strip {k}: {m:e}");
        }
    }

    // Sloped tops give φ'' = (p'' - p p'^2)·pdf(p) < 0 off the flat part, so
    // the sampled second difference is negative there. Kept as a diagnostic.
    #[test]
    #[ignore]
    fn slice_weight_second_differences_on_convex_parents() {
        let lens: DomainSpec =
            serde_json::from_str(r#"{"kind":"profile","a":1,"p":{"poly":[1,0,-1]},"q":{"poly":[-1,0,1]}}"#).unwrap();
        for spec in [regular_hexagon(1.0), lens, DomainSpec::Disk { r: 1.0 }] {
            let s = slice_equal_gaussian(&build_domain(&spec).unwrap(), 3).unwrap();
            for k in 0..s.strips.len() {
                let w = &s.strips[k].phi;
                for i in 0..=20 {
                    let x = w.a_k * i as f64 / 20.0;
                    assert!((w.value(x) - w.value(-x)).abs() <= 1e-15 * w.value(0.0));
                }
                println!("{spec:?} strip {k}: min second difference {:e}", s.phi_second_difference_min(k, 400));
            }
        }
    }

    #[test]
    fn rectangle_top_half_in_two() {
        let d = build_domain(&DomainSpec::Rectangle { a: 1.0, b: 1.0 }).unwrap();
        let s = slice_above(&d, 0.0, 1).unwrap();
        assert_eq!(s.strips.len(), 2);
        let (m0, m1) = (s.strips[0].measure, s.strips[1].measure);
        assert!(((m0 - m1) / m0).abs() < 1e-10);
        assert_eq!(s.strips[0].flat, 1.0);
    }

    #[test]
    fn depth_zero_is_identity() {
        let d = build_domain(&regular_hexagon(1.0)).unwrap();
        let s = slice_equal_gaussian(&d, 0).unwrap();
        assert_eq!(s.strips.len(), 1);
        assert!(((s.strips[0].measure - s.total_measure) / s.total_measure).abs() < 1e-14);
        assert_eq!(s.strips[0].flat, 0.0);
        assert!(!s.notes.is_empty());
    }

    #[test]
    fn strip_weight_derivatives() {
        let d = build_domain(&regular_hexagon(1.0)).unwrap();
        let s = slice_equal_gaussian(&d, 2).unwrap();
        let w = &s.strips[1].phi;
        let x = 0.5 * (w.flat + w.a_k);
        let h = 1e-5;
        assert!(((w.value(x + h) - w.value(x - h)) / (2.0 * h) - w.d1(x)).abs() < 1e-8);
        assert!(((w.value(x + h) - 2.0 * w.value(x) + w.value(x - h)) / (h * h) - w.d2(x)).abs() < 1e-4);
    }
}
