use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Orders outside this window mean the asymptotic regime has not been reached.
pub const TRUSTED_ORDER: (f64, f64) = (1.8, 2.2);

/// Richardson extrapolation of a sequence computed at mesh ratios of 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation<T> {
    /// Raw value at the finest level.
    pub fine: T,
    /// Extrapolated value if trusted, else `fine`.
    pub value: T,
    /// Observed order from three levels, when available.
    pub order: Option<T>,
    pub extrapolated: bool,
    pub warning: Option<String>,
}

/// v_fine + (v_fine − v_coarse)/(2^p − 1).
pub fn richardson_step<T: Scalar>(coarse: T, fine: T, order: T) -> T {
    fine + (fine - coarse) / (T::of(2.0).powf(order) - T::one())
}

/// log₂ |v₀ − v₁| / |v₁ − v₂| for levels h, h/2, h/4.
pub fn observed_order<T: Scalar>(v0: T, v1: T, v2: T) -> Option<T> {
    let (d1, d2) = ((v0 - v1).abs(), (v1 - v2).abs());
    if d1 > T::zero() && d2 > T::zero() {
        Some((d1 / d2).log2())
    } else {
        None
    }
}

/// Three levels h, h/2, h/4: extrapolate the last two at the assumed order 2
/// when the observed order lies in [`TRUSTED_ORDER`], otherwise return the
/// finest value with a warning.
pub fn extrapolate3<T: Scalar>(v0: T, v1: T, v2: T) -> Extrapolation<T> {
    let order = observed_order(v0, v1, v2);
    let trusted = order.is_some_and(|p| p > T::of(TRUSTED_ORDER.0) && p < T::of(TRUSTED_ORDER.1));
    if trusted {
        Extrapolation { fine: v2, value: richardson_step(v1, v2, T::of(2.0)), order, extrapolated: true, warning: None }
    } else {
        let warning = Some(match order {
            Some(p) => format!("observed order {} outside trusted window; raw fine-grid value returned", p),
            None => "differences vanish; order undefined, raw fine-grid value returned".into(),
        });
        Extrapolation { fine: v2, value: v2, order, extrapolated: false, warning }
    }
}

/// Two levels h, h/2 under an assumed order 2; the order is not measured.
pub fn extrapolate2<T: Scalar>(v0: T, v1: T) -> Extrapolation<T> {
    Extrapolation { fine: v1, value: richardson_step(v0, v1, T::of(2.0)), order: None, extrapolated: true, warning: None }
}
