use crate::geometry::StripWeight;

/// A positive profile φ multiplying the Gaussian weight, with derivatives.
pub trait Weight: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn d1(&self, x: f64) -> f64;
    fn d2(&self, x: f64) -> f64;
    /// Abscissae where φ′ may jump.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// φ ≡ 1.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Unit;

impl Weight for Unit {
    fn value(&self, _: f64) -> f64 {
        1.0
    }
    fn d1(&self, _: f64) -> f64 {
        0.0
    }
    fn d2(&self, _: f64) -> f64 {
        0.0
    }
}

/// φ ≡ c.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub f64);

impl Weight for Constant {
    fn value(&self, _: f64) -> f64 {
        self.0
    }
    fn d1(&self, _: f64) -> f64 {
        0.0
    }
    fn d2(&self, _: f64) -> f64 {
        0.0
    }
}

/// c·φ for another weight φ.
pub struct Scaled<'a>(pub f64, pub &'a dyn Weight);

impl Weight for Scaled<'_> {
    fn value(&self, x: f64) -> f64 {
        self.0 * self.1.value(x)
    }
    fn d1(&self, x: f64) -> f64 {
        self.0 * self.1.d1(x)
    }
    fn d2(&self, x: f64) -> f64 {
        self.0 * self.1.d2(x)
    }
    fn kinks(&self) -> Vec<f64> {
        self.1.kinks()
    }
}

impl Weight for StripWeight {
    fn value(&self, x: f64) -> f64 {
        StripWeight::value(self, x)
    }
    fn d1(&self, x: f64) -> f64 {
        StripWeight::d1(self, x)
    }
    fn d2(&self, x: f64) -> f64 {
        StripWeight::d2(self, x)
    }
    fn kinks(&self) -> Vec<f64> {
        StripWeight::kinks(self)
    }
}
