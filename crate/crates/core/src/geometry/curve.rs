//! Piecewise boundary curves y = f(x) on [0, a], the right half of an even profile.

use super::profile::ProfileFn;

#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    Line { x0: f64, x1: f64, y0: f64, y1: f64 },
    /// Upper or lower half of the circle of radius `r` about (cx, cy).
    Arc { x0: f64, x1: f64, cx: f64, cy: f64, r: f64, upper: bool },
    Graph { x0: f64, x1: f64, f: ProfileFn },
}

impl Piece {
    pub fn span(&self) -> (f64, f64) {
        match *self {
            Piece::Line { x0, x1, .. } | Piece::Arc { x0, x1, .. } | Piece::Graph { x0, x1, .. } => (x0, x1),
        }
    }

    fn arc_root(cx: f64, r: f64, x: f64) -> f64 {
        (r * r - (x - cx) * (x - cx)).max(0.0).sqrt()
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Piece::Line { x0, x1, y0, y1 } => {
                if x1 == x0 {
                    *y0
                } else {
                    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
                }
            }
            Piece::Arc { cx, cy, r, upper, .. } => {
                let s = Self::arc_root(*cx, *r, x);
                if *upper {
                    cy + s
                } else {
                    cy - s
                }
            }
            Piece::Graph { f, .. } => f.eval(x),
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match self {
            Piece::Line { x0, x1, y0, y1 } => {
                if x1 == x0 {
                    0.0
                } else {
                    (y1 - y0) / (x1 - x0)
                }
            }
            Piece::Arc { cx, r, upper, .. } => {
                let d = -(x - cx) / Self::arc_root(*cx, *r, x);
                if *upper {
                    d
                } else {
                    -d
                }
            }
            Piece::Graph { f, .. } => f.d1(x),
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match self {
            Piece::Line { .. } => 0.0,
            Piece::Arc { cx, r, upper, .. } => {
                let d = -r * r / Self::arc_root(*cx, *r, x).powi(3);
                if *upper {
                    d
                } else {
                    -d
                }
            }
            Piece::Graph { f, .. } => f.d2(x),
        }
    }

    /// Unsigned curvature of the graph at x.
    pub fn curvature(&self, x: f64) -> f64 {
        match self {
            Piece::Line { .. } => 0.0,
            Piece::Arc { r, .. } => 1.0 / r,
            Piece::Graph { f, .. } => f.d2(x).abs() / (1.0 + f.d1(x).powi(2)).powf(1.5),
        }
    }

    /// Vertical tangent at the right end (only arcs reaching their extreme abscissa).
    pub fn vertical_at_end(&self) -> bool {
        matches!(*self, Piece::Arc { x1, cx, r, .. } if (x1 - (cx + r)).abs() <= 1e-12 * (1.0 + r))
    }

    pub fn restricted(&self, lo: f64, hi: f64) -> Piece {
        let mut p = self.clone();
        match &mut p {
            Piece::Line { x0, x1, y0, y1 } => {
                let (a0, a1) = (self.eval(lo), self.eval(hi));
                *x0 = lo;
                *x1 = hi;
                *y0 = a0;
                *y1 = a1;
            }
            Piece::Arc { x0, x1, .. } | Piece::Graph { x0, x1, .. } => {
                *x0 = lo;
                *x1 = hi;
            }
        }
        p
    }
}

/// Curve on [x_start, x_end] made of pieces with contiguous spans. Values may
/// jump between pieces; such jumps are closed by vertical boundary segments.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub pieces: Vec<Piece>,
}

impl Curve {
    pub fn new(pieces: Vec<Piece>) -> Self {
        debug_assert!(!pieces.is_empty());
        Curve { pieces }
    }

    pub fn constant(x0: f64, x1: f64, y: f64) -> Self {
        Curve::new(vec![Piece::Line { x0, x1, y0: y, y1: y }])
    }

    pub fn start(&self) -> f64 {
        self.pieces[0].span().0
    }

    pub fn end(&self) -> f64 {
        self.pieces.last().unwrap().span().1
    }

    /// The piece whose span contains x (leftmost on shared endpoints), clamped to the ends.
    pub fn piece_at(&self, x: f64) -> &Piece {
        self.pieces
            .iter()
            .find(|p| x <= p.span().1)
            .unwrap_or_else(|| self.pieces.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.piece_at(x).eval(x)
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.piece_at(x).d1(x)
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.piece_at(x).d2(x)
    }

    /// Piece boundaries plus interior knots of sampled graphs.
    pub fn knots(&self) -> Vec<f64> {
        let mut k = vec![self.start()];
        for p in &self.pieces {
            let (x0, x1) = p.span();
            if let Piece::Graph { f, .. } = p {
                k.extend(f.knots().into_iter().filter(|&t| t > x0 && t < x1));
            }
            k.push(x1);
        }
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Clip to [start, hi].
    pub fn truncated(&self, hi: f64) -> Curve {
        let mut out = Vec::new();
        for p in &self.pieces {
            let (x0, x1) = p.span();
            if x0 >= hi {
                break;
            }
            out.push(p.restricted(x0, x1.min(hi)));
        }
        Curve::new(out)
    }

    /// Largest x in [start, end] with f(x) ≥ level, for nonincreasing f; `None` if f(start) < level.
    pub fn last_at_or_above(&self, level: f64) -> Option<f64> {
        let (lo, hi) = (self.start(), self.end());
        if self.eval(lo) < level {
            return None;
        }
        if self.eval(hi) >= level {
            return Some(hi);
        }
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.eval(m) >= level {
                a = m;
            } else {
                b = m;
            }
        }
        Some(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_derivatives_match_differences() {
        let p = Piece::Arc { x0: 0.0, x1: 1.0, cx: 0.2, cy: -1.0, r: 1.0, upper: false };
        let (x, h) = (0.6, 1e-5);
        let fd1 = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
        let fd2 = (p.eval(x + h) - 2.0 * p.eval(x) + p.eval(x - h)) / (h * h);
        assert!((fd1 - p.d1(x)).abs() < 1e-8);
        assert!((fd2 - p.d2(x)).abs() < 1e-4);
    }

    #[test]
    fn level_search_on_decreasing_curve() {
        let c = Curve::new(vec![
            Piece::Line { x0: 0.0, x1: 0.5, y0: 1.0, y1: 1.0 },
            Piece::Line { x0: 0.5, x1: 1.0, y0: 1.0, y1: 0.0 },
        ]);
        assert!((c.last_at_or_above(0.5).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(c.last_at_or_above(-1.0), Some(1.0));
        assert_eq!(c.last_at_or_above(2.0), None);
    }
}
