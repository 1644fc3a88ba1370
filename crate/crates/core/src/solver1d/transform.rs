use super::{Bc, Eigenpair1D, Weight};
use crate::error::{Error, Result};

/// Defect of w = v′φ^{1/2} in −w″ + xw′ + w[−½φ″/φ + ¾(φ′/φ)² − ½xφ′/φ] = (λ̄ − 1)w.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformCheck {
    /// Interior max-norm residual divided by max |w|.
    pub residual: f64,
    /// |w| at the two ends, extrapolated from the interior faces, relative to max |w|.
    pub boundary_defect: f64,
    /// Faces evaluated (stencils touching a kink of φ are skipped).
    pub evaluated: usize,
}

/// Evaluate the transformed equation on the face grid of a Neumann eigenpair by
/// central differences.
pub fn transform_check(pair: &Eigenpair1D, phi: &dyn Weight) -> Result<TransformCheck> {
    if pair.bc != Bc::Neumann {
        return Err(Error::Parameter("the transform applies to the natural-boundary problem".into()));
    }
    let f = &pair.faces;
    let n = f.len() - 1;
    let h = f[1] - f[0];
    let mut w = vec![0.0; n + 1];
    for j in 1..n {
        let p = phi.value(f[j]);
        if !(p > 0.0) {
            return Err(Error::Weight { x: f[j], value: p });
        }
        w[j] = pair.derivative[j] * p.sqrt();
    }
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let kinks = phi.kinks();
    let lam = pair.value - 1.0;
    let mut worst = 0.0f64;
    let mut evaluated = 0;
    for j in 1..n {
        let x = f[j];
        if kinks.iter().any(|&k| (k - x).abs() < h * (1.0 + 1e-9)) {
            continue;
        }
        let (p, p1, p2) = (phi.value(x), phi.d1(x), phi.d2(x));
        let g = p1 / p;
        let bracket = -0.5 * p2 / p + 0.75 * g * g - 0.5 * x * g;
        let wxx = (w[j + 1] - 2.0 * w[j] + w[j - 1]) / (h * h);
        let wx = (w[j + 1] - w[j - 1]) / (2.0 * h);
        let r = -wxx + x * wx + w[j] * bracket - lam * w[j];
        worst = worst.max(r.abs());
        evaluated += 1;
    }
    let ends = if n >= 4 {
        let left = 3.0 * w[1] - 3.0 * w[2] + w[3];
        let right = 3.0 * w[n - 1] - 3.0 * w[n - 2] + w[n - 3];
        left.abs().max(right.abs())
    } else {
        f64::NAN
    };
    Ok(TransformCheck { residual: worst / scale, boundary_defect: ends / scale, evaluated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver1d::{SLProblem, Unit};

    #[test]
    fn unit_weight_residual_is_second_order() {
        let r = |n| {
            let p = SLProblem::new(-1.0, 1.0, Bc::Neumann, &Unit, n).eigenpair().unwrap();
            transform_check(&p, &Unit).unwrap()
        };
        let (a, b) = (r(256), r(512));
        let order = (a.residual / b.residual).log2();
        assert!(order > 1.8 && order < 2.2, "{order}");
        assert!(b.boundary_defect < 1e-4);
    }
}


