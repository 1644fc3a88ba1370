//! Even profile functions y = p(x): closed-form polynomials or monotone-cubic
//! interpolants of user samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Declarative profile: polynomial coefficients `c0 + c1 x + …`, or samples
/// on x ≥ 0 (samples at negative x are accepted if they mirror the positive ones).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSpec {
    Poly(Vec<f64>),
    Samples { x: Vec<f64>, y: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileFn {
    Poly(Vec<f64>),
    Cubic(MonotoneCubic),
}

impl ProfileFn {
    pub fn from_spec(spec: &ProfileSpec) -> Result<Self> {
        match spec {
            ProfileSpec::Poly(c) => {
                if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Parse("polynomial needs finite coefficients".into()));
                }
                Ok(ProfileFn::Poly(c.clone()))
            }
            ProfileSpec::Samples { x, y } => MonotoneCubic::even(x, y).map(ProfileFn::Cubic),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ProfileFn::Poly(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            ProfileFn::Cubic(m) => m.eval(x.abs()).0,
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match self {
            ProfileFn::Poly(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * x + k as f64 * ck),
            ProfileFn::Cubic(m) => x.signum() * m.eval(x.abs()).1,
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match self {
            ProfileFn::Poly(c) => c
                .iter()
                .enumerate()
                .skip(2)
                .rev()
                .fold(0.0, |acc, (k, &ck)| acc * x + (k * (k - 1)) as f64 * ck),
            ProfileFn::Cubic(m) => m.eval(x.abs()).2,
        }
    }

    /// Largest abscissa where the function is defined (infinite for polynomials).
    pub fn reach(&self) -> f64 {
        match self {
            ProfileFn::Poly(_) => f64::INFINITY,
            ProfileFn::Cubic(m) => *m.x.last().unwrap(),
        }
    }

    /// Abscissae in [0, ∞) where the second derivative may jump.
    pub fn knots(&self) -> Vec<f64> {
        match self {
            ProfileFn::Poly(_) => vec![],
            ProfileFn::Cubic(m) => m.x.clone(),
        }
    }
}

/// Fritsch–Carlson monotone cubic Hermite interpolant on x ≥ 0, used through
/// its even extension (zero slope at the origin).
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    fn even(xs: &[f64], ys: &[f64]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Parse("profile samples: x and y lengths differ".into()));
        }
        if xs.iter().chain(ys).any(|v| !v.is_finite()) {
            return Err(Error::Parse("profile samples must be finite".into()));
        }
        let mut pos: Vec<(f64, f64)> = Vec::new();
        for (&x, &y) in xs.iter().zip(ys) {
            if x >= 0.0 {
                pos.push((x, y));
            }
        }
        pos.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Negative samples must mirror a positive one.
        for (&x, &y) in xs.iter().zip(ys).filter(|(&x, _)| x < 0.0) {
            let mate = pos.iter().find(|(px, _)| (px + x).abs() <= 1e-12 * (1.0 + x.abs()));
            match mate {
                Some(&(_, py)) if (py - y).abs() <= 1e-9 * (1.0 + y.abs()) => {}
                _ => {
                    return Err(Error::Validation {
                        invariant: "profile samples are even".into(),
                        x,
                        y,
                    })
                }
            }
        }
        if pos.len() < 3 || pos[0].0 != 0.0 {
            return Err(Error::Parse(
                "profile samples need at least three abscissae starting at x = 0".into(),
            ));
        }
        if pos.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Parse("profile sample abscissae must be distinct".into()));
        }
        let (x, y): (Vec<f64>, Vec<f64>) = pos.into_iter().unzip();
        let n = x.len();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k])).collect();
        let mut m = vec![0.0; n];
        m[n - 1] = delta[n - 2];
        for k in 1..n - 1 {
            m[k] = if delta[k - 1] * delta[k] > 0.0 {
                0.5 * (delta[k - 1] + delta[k])
            } else {
                0.0
            };
        }
        for k in 0..n - 1 {
            if delta[k] == 0.0 {
                m[k] = 0.0;
                m[k + 1] = 0.0;
                continue;
            }
            let (al, be) = (m[k] / delta[k], m[k + 1] / delta[k]);
            let s = al * al + be * be;
            if s > 9.0 {
                let tau = 3.0 / s.sqrt();
                m[k] = tau * al * delta[k];
                m[k + 1] = tau * be * delta[k];
            }
        }
        m[0] = 0.0;
        Ok(MonotoneCubic { x, y, m })
    }

    /// (value, first, second derivative) at t ≥ 0.
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let n = self.x.len();
        let k = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            i => (i - 1).min(n - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (y0, y1, m0, m1) = (self.y[k], self.y[k + 1], self.m[k] * h, self.m[k + 1] * h);
        let h00 = 2.0 * s.powi(3) - 3.0 * s * s + 1.0;
        let h10 = s.powi(3) - 2.0 * s * s + s;
        let h01 = -2.0 * s.powi(3) + 3.0 * s * s;
        let h11 = s.powi(3) - s * s;
        let v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let d = ((6.0 * s * s - 6.0 * s) * y0
            + (3.0 * s * s - 4.0 * s + 1.0) * m0
            + (-6.0 * s * s + 6.0 * s) * y1
            + (3.0 * s * s - 2.0 * s) * m1)
            / h;
        let dd = ((12.0 * s - 6.0) * y0 + (6.0 * s - 4.0) * m0 + (-12.0 * s + 6.0) * y1 + (6.0 * s - 2.0) * m1)
            / (h * h);
        (v, d, dd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        let p = ProfileFn::Poly(vec![1.0, 0.0, -2.0, 0.0, 0.5]);
        let x = 0.7;
        assert!((p.eval(x) - (1.0 - 2.0 * x * x + 0.5 * x.powi(4))).abs() < 1e-15);
        assert!((p.d1(x) - (-4.0 * x + 2.0 * x.powi(3))).abs() < 1e-15);
        assert!((p.d2(x) - (-4.0 + 6.0 * x * x)).abs() < 1e-15);
    }

    #[test]
    fn cubic_interpolates_and_is_even() {
        let xs: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 - x * x / 2.0).collect();
        let p = ProfileFn::from_spec(&ProfileSpec::Samples { x: xs.clone(), y: ys.clone() }).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x) - y).abs() < 1e-14);
            assert_eq!(p.eval(-x), p.eval(*x));
        }
        assert!((p.eval(0.33) - (1.0 - 0.33f64.powi(2) / 2.0)).abs() < 1e-4);
    }

    #[test]
    fn asymmetric_samples_rejected() {
        let spec = ProfileSpec::Samples { x: vec![-0.5, 0.0, 0.5, 1.0], y: vec![0.0, 1.0, 0.9, 0.5] };
        assert!(matches!(ProfileFn::from_spec(&spec), Err(Error::Validation { .. })));
    }
}
