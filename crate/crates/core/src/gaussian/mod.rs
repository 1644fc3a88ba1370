//! Gaussian measure primitives: the normal CDF on intervals, weighted
//! quadrature rules, and the 2-D Gaussian measure of domains.

mod measure;
mod quadrature;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use measure::{gaussian_measure_2d, region_integral, Measure2d};
pub use quadrature::{
    gauss_legendre, triangle_rule, triangle_weighted_integral, triangle_weighted_nodes, weighted_interval_rule,
    QuadratureRule, TriangleRule, WEIGHTED_ORDER_CAP,
};
pub(crate) use quadrature::signed_area as quadrature_signed_area;

/// Numerically infinite integrals are cut here; the Gaussian tail beyond is < 1e-32.
pub const TRUNCATION: f64 = 12.0;

pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// A real number or one of the two infinities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The value with infinities replaced by `±cut`.
    pub fn clamp_to(self, cut: f64) -> f64 {
        match self {
            ExtReal::NegInf => -cut,
            ExtReal::PosInf => cut,
            ExtReal::Finite(x) => x.clamp(-cut, cut),
        }
    }

    fn rank(self) -> (i8, f64) {
        match self {
            ExtReal::NegInf => (-1, 0.0),
            ExtReal::Finite(x) => (0, x),
            ExtReal::PosInf => (1, 0.0),
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (ra, xa) = self.rank();
        let (rb, xb) = other.rank();
        match ra.cmp(&rb) {
            Ordering::Equal => xa.partial_cmp(&xb),
            o => Some(o),
        }
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// P(X > t) for a standard normal X, accurate in the far tail.
pub fn upper_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

pub fn normal_cdf(x: f64) -> f64 {
    if x < 0.0 {
        upper_tail(-x)
    } else {
        1.0 - upper_tail(x)
    }
}

fn tail_above(t: ExtReal) -> f64 {
    match t {
        ExtReal::NegInf => 1.0,
        ExtReal::PosInf => 0.0,
        ExtReal::Finite(x) => upper_tail(x),
    }
}

fn neg(t: ExtReal) -> ExtReal {
    match t {
        ExtReal::NegInf => ExtReal::PosInf,
        ExtReal::PosInf => ExtReal::NegInf,
        ExtReal::Finite(x) => ExtReal::Finite(-x),
    }
}

/// γ₁(a, b), combining tails so that neither side suffers cancellation.
pub fn gauss_cdf_interval(a: impl Into<ExtReal>, b: impl Into<ExtReal>) -> Result<f64> {
    let (a, b) = (a.into(), b.into());
    if let (ExtReal::Finite(x), _) | (_, ExtReal::Finite(x)) = (a, b) {
        if x.is_nan() {
            return Err(Error::Parameter("NaN interval endpoint".into()));
        }
    }
    if a > b {
        return Err(Error::InvalidInterval {
            a: a.clamp_to(f64::INFINITY),
            b: b.clamp_to(f64::INFINITY),
        });
    }
    let v = if a >= ExtReal::Finite(0.0) {
        tail_above(a) - tail_above(b)
    } else if b <= ExtReal::Finite(0.0) {
        tail_above(neg(b)) - tail_above(neg(a))
    } else {
        1.0 - tail_above(neg(a)) - tail_above(b)
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Gaussian mass of (a, b) for finite or infinite `f64` endpoints; 0 when a ≥ b.
pub fn gamma1(a: f64, b: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    gauss_cdf_interval(a, b).unwrap_or(0.0)
}
