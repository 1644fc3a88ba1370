//! Adaptive Dormand–Prince 5(4) integration of small first-order systems.

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B_LOW: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub(crate) struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

/// Integrate y′ = f(t, y) from t0 to t1 (either direction) and return y(t1).
pub(crate) fn integrate<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    t1: f64,
    y0: [f64; N],
    tol: &Tolerance,
) -> [f64; N] {
    let span = t1 - t0;
    if span == 0.0 {
        return y0;
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = span.abs() / 64.0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y);
    loop {
        let remaining = (t1 - t).abs();
        if remaining <= 1e-15 * span.abs() {
            return y;
        }
        let step = h.min(remaining) * dir;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                for i in 0..N {
                    ys[i] += step * A[s][j] * kj[i];
                }
            }
            k[s] = f(t + C[s] * step, &ys);
        }
        let mut y_new = y;
        let mut err = 0.0f64;
        for i in 0..N {
            let (mut hi, mut lo) = (0.0, 0.0);
            for s in 0..7 {
                hi += B[s] * k[s][i];
                lo += B_LOW[s] * k[s][i];
            }
            y_new[i] += step * hi;
            let scale = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err = err.max((step * (hi - lo)).abs() / scale);
        }
        if err <= 1.0 {
            t += step;
            y = y_new;
            // First-same-as-last: the last stage is f at the new point.
            k[0] = k[6];
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = step.abs() * factor;
        if h < 1e-14 * span.abs() {
            // Accept a tiny step rather than stall.
            h = 1e-14 * span.abs();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let tol = Tolerance { rel: 1e-12, abs: 1e-14 };
        let y = integrate(&f, 0.0, 10.0, [0.0, 1.0], &tol);
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        let back = integrate(&f, 10.0, 0.0, y, &tol);
        assert!(back[0].abs() < 1e-9 && (back[1] - 1.0).abs() < 1e-9);
    }
}
