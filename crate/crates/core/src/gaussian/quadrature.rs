use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Nodes with positive weights and a stated polynomial exactness degree.
/// `N` is the node type: abscissae for 1-D rules, barycentric triples for triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T, N = T> {
    pub nodes: Vec<N>,
    pub weights: Vec<T>,
    pub order: usize,
}

pub type TriangleRule<T> = QuadratureRule<T, [T; 3]>;

impl<T: Scalar, N: Copy> QuadratureRule<T, N> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(N) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// n-point Gauss–Legendre rule on (−1, 1), exact for degree 2n − 1.
pub fn gauss_legendre<T: Scalar>(n: usize) -> QuadratureRule<T> {
    assert!(n >= 1, "Gauss–Legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule {
        nodes: nodes.into_iter().map(T::of).collect(),
        weights: weights.into_iter().map(T::of).collect(),
        order: 2 * n - 1,
    }
}

pub const WEIGHTED_ORDER_CAP: usize = 40;
const PANEL_WIDTH: f64 = 0.5;

/// Composite Gauss–Legendre rule on (a, b) with e^{−x²/2} folded into the weights:
/// `rule.integrate(f) ≈ ∫ₐᵇ f(x) e^{−x²/2} dx`.
pub fn weighted_interval_rule<T: Scalar>(a: f64, b: f64, order: usize) -> Result<QuadratureRule<T>> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidInterval { a, b });
    }
    if order == 0 {
        return Err(Error::Parameter("quadrature order must be at least 1".into()));
    }
    if order > WEIGHTED_ORDER_CAP {
        return Err(Error::UnsupportedOrder { order, cap: WEIGHTED_ORDER_CAP });
    }
    let gl = gauss_legendre::<f64>(20 + order / 2);
    let panels = ((b - a) / PANEL_WIDTH).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * gl.len());
    let mut weights = Vec::with_capacity(panels * gl.len());
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        for (&t, &w) in gl.nodes.iter().zip(&gl.weights) {
            let x = mid + 0.5 * width * t;
            nodes.push(T::of(x));
            weights.push(T::of(0.5 * width * w * (-0.5 * x * x).exp()));
        }
    }
    Ok(QuadratureRule { nodes, weights, order })
}

/// Symmetric 12-point degree-6 rule on the reference triangle; weights sum to 1.
pub fn triangle_rule<T: Scalar>() -> TriangleRule<T> {
    let orbits3: [(f64, f64, f64); 2] = [
        (0.501_426_509_658_179, 0.249_286_745_170_910, 0.116_786_275_726_379),
        (0.873_821_971_016_996, 0.063_089_014_491_502, 0.050_844_906_370_207),
    ];
    let (a, b, c, w6) = (
        0.053_145_049_844_817,
        0.310_352_451_033_784,
        0.636_502_499_121_399,
        0.082_851_075_618_374,
    );
    let mut nodes = Vec::with_capacity(12);
    let mut weights = Vec::with_capacity(12);
    for (p, q, w) in orbits3 {
        for bary in [[p, q, q], [q, p, q], [q, q, p]] {
            nodes.push(bary);
            weights.push(w);
        }
    }
    for bary in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
        nodes.push(bary);
        weights.push(w6);
    }
    QuadratureRule {
        nodes: nodes.into_iter().map(|n| n.map(T::of)).collect(),
        weights: weights.into_iter().map(T::of).collect(),
        order: 6,
    }
}

pub(crate) fn signed_area(v: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]))
}

/// Degree-6 nodes of a triangle as (barycentric coordinates, weight), the
/// weight including the element area and the Gaussian factor e^{−(x²+y²)/2}.
pub fn triangle_weighted_nodes(v: [[f64; 2]; 3]) -> Result<Vec<([f64; 3], f64)>> {
    let area = signed_area(&v).abs();
    if !(area >= 1e-14) {
        return Err(Error::DegenerateElement { area });
    }
    let rule = triangle_rule::<f64>();
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&l, &w)| {
            let x = l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0];
            let y = l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1];
            (l, area * w * (-0.5 * (x * x + y * y)).exp())
        })
        .collect())
}

/// ∫_T f(x, y) e^{−(x²+y²)/2} dx dy with the degree-6 rule.
pub fn triangle_weighted_integral(v: [[f64; 2]; 3], f: impl Fn(f64, f64) -> f64) -> Result<f64> {
    Ok(triangle_weighted_nodes(v)?
        .into_iter()
        .map(|(l, w)| {
            let x = l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0];
            let y = l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1];
            w * f(x, y)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_to_its_degree() {
        let r = gauss_legendre::<f64>(7);
        for k in 0..=13 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let got = r.integrate(|x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "k = {k}: {got} vs {exact}");
        }
    }

    #[test]
    fn legendre_rule_in_single_precision() {
        let r = gauss_legendre::<f32>(5);
        let got = r.integrate(|x| x * x * x * x);
        assert!((got - 0.4).abs() < 1e-6);
    }

    #[test]
    fn triangle_rule_monomials() {
        // ∫ over the unit right triangle of x^a y^b = a! b! / (a + b + 2)!.
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        let r = triangle_rule::<f64>();
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(r.weights.iter().all(|&w| w > 0.0));
        for a in 0..=6u32 {
            for b in 0..=(6 - a) {
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                let got = 0.5 * r.integrate(|[_, l1, l2]| l1.powi(a as i32) * l2.powi(b as i32));
                assert!((got - exact).abs() < 1e-14, "x^{a} y^{b}");
            }
        }
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let err = triangle_weighted_integral([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]], |_, _| 1.0);
        assert!(matches!(err, Err(Error::DegenerateElement { .. })));
    }
}
