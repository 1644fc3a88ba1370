use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use hermite_gap::gaussian::gaussian_measure_2d;
use hermite_gap::geometry::{
    build_domain, default_radius, diameter, invading_sequence, reflection_jacobian, sample_collar, truncation_of,
    weight_ratio_bound, Domain, DomainSpec, Shape,
};
use hermite_gap::solver1d::{disk_radial_eigenvalue, lambda1_interval, mu1_interval};
use hermite_gap::solver2d::{
    mu1_odd, neumann_and_odd, neumann_spectrum, solve_unbounded, ConvergenceRecord, Spectrum2D, UnboundedOptions, UnboundedSolution,
};
use hermite_gap::Error;

use crate::report::{CheckId, CheckReport, Orientation, Status};
use crate::settings::Settings;

/// Slack of the 1-D identity μ₁(S_a) = 1 + λ₁(−a, a).
pub const IDENTITY_TOL: f64 = 1e-8;
/// Bounds of the reflection Jacobian are checked to this slack.
pub const JACOBIAN_TOL: f64 = 1e-12;
/// μ₁ and μ₁ᵒᵈᵈ closer than this count as equal for the gap check.
pub const GAP_HYPOTHESIS_TOL: f64 = 1e-3;
/// Relative slack of the rectangle equality.
pub const RECTANGLE_REL_TOL: f64 = 1e-3;
pub const PLANE_TOL: f64 = 2e-2;
/// Relative slack of the T-example values 2 and 3.
pub const T_REL_TOL: f64 = 1e-2;
pub const DEFAULT_SWEEP: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

type Memo<T> = Mutex<HashMap<String, Arc<Result<T, Error>>>>;

/// Runs checks under fixed settings; 2-D solves shared between checks on the
/// same domain are computed once.
#[derive(Default)]
pub struct Runner {
    pub settings: Settings,
    odd: Memo<Spectrum2D>,
    full: Memo<(Spectrum2D, Spectrum2D)>,
    unbounded: Memo<UnboundedSolution>,
}

fn key(spec: &DomainSpec) -> String {
    serde_json::to_string(spec).expect("domain specs serialize")
}

fn memoized<T>(memo: &Memo<T>, k: String, f: impl FnOnce() -> Result<T, Error>) -> Arc<Result<T, Error>> {
    if let Some(v) = memo.lock().expect("memo lock").get(&k) {
        return v.clone();
    }
    let v = Arc::new(f());
    memo.lock().expect("memo lock").entry(k).or_insert(v).clone()
}

fn h_record(s: &Spectrum2D, index: usize) -> ConvergenceRecord {
    ConvergenceRecord::from_levels(s, index)
}

impl Runner {
    pub fn new(settings: Settings) -> Self {
        Runner { settings, ..Default::default() }
    }

    fn odd(&self, d: &Domain) -> Arc<Result<Spectrum2D, Error>> {
        memoized(&self.odd, key(d.spec()), || mu1_odd(d, self.settings.h))
    }

    fn full(&self, d: &Domain) -> Arc<Result<(Spectrum2D, Spectrum2D), Error>> {
        memoized(&self.full, key(d.spec()), || neumann_and_odd(d, self.settings.h, 2))
    }

    fn unbounded(&self, d: &Domain) -> Arc<Result<UnboundedSolution, Error>> {
        let opts = UnboundedOptions { tol: self.settings.trunc_tol, h: self.settings.h_unbounded, full: true, radius: None };
        memoized(&self.unbounded, key(d.spec()), || solve_unbounded(d, &opts))
    }

    fn error(&self, id: CheckId, domain_id: &str, e: &Error) -> CheckReport {
        match e {
            Error::NonConvergence { record, .. } => {
                CheckReport::undecided(id, domain_id, Status::Inconclusive, e.to_string(), &self.settings)
                    .with_evidence(vec![(**record).clone()])
            }
            Error::Unsupported(_) => CheckReport::undecided(id, domain_id, Status::Unsupported, e.to_string(), &self.settings),
            _ => CheckReport::undecided(id, domain_id, Status::Error, e.to_string(), &self.settings),
        }
    }

    fn interval_mu1(&self, a: f64) -> Result<f64, Error> {
        Ok(mu1_interval(-a, a, self.settings.grid_n)?.value)
    }

    /// μ₁ᵒᵈᵈ(Ω) ≥ μ₁(−a, a) for a bounded domain.
    pub fn check_thm1(&self, domain_id: &str, d: &Domain) -> CheckReport {
        let id = CheckId::Thm1;
        if !d.is_bounded() {
            return self.error(id, domain_id, &Error::Unsupported("thm1 needs a bounded domain".into()));
        }
        let odd = self.odd(d);
        let run = || -> Result<CheckReport, Error> {
            let s = odd.as_ref().as_ref().map_err(Clone::clone)?;
            let rhs = self.interval_mu1(d.half_width())?;
            Ok(CheckReport::decided(id, domain_id, s.mu1(), rhs, self.settings.tol, Orientation::AtLeast, &self.settings)
                .with_evidence(vec![h_record(s, 0)])
                .with_detail("a", d.half_width()))
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// μ₁ᵒᵈᵈ(Ω) ≥ μ₁(−a, a) for a domain unbounded below, through the truncation loop.
    pub fn check_thm2(&self, domain_id: &str, d: &Domain) -> CheckReport {
        let id = CheckId::Thm2;
        if !d.is_unbounded_below() {
            return self.error(id, domain_id, &Error::Unsupported("thm2 needs a domain unbounded below".into()));
        }
        let sol = self.unbounded(d);
        let run = || -> Result<CheckReport, Error> {
            let sol = sol.as_ref().as_ref().map_err(Clone::clone)?;
            let rhs = self.interval_mu1(d.half_width())?;
            let s = &sol.odd.spectrum;
            Ok(CheckReport::decided(id, domain_id, s.mu1(), rhs, self.settings.tol, Orientation::AtLeast, &self.settings)
                .with_evidence(vec![sol.odd.record.clone(), h_record(s, 0)])
                .with_detail("a", d.half_width())
                .with_detail("truncation_n", s.truncation_n.unwrap_or(0) as f64))
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// μ₁(Ω) ≤ μ₁(Ω♯), Ω♯ the centred disk of equal Gaussian measure. Reported
    /// with lhs = μ₁(Ω♯), rhs = μ₁(Ω).
    pub fn check_sw(&self, domain_id: &str, d: &Domain) -> CheckReport {
        let id = CheckId::Sw;
        if !d.is_bounded() {
            return self.error(id, domain_id, &Error::Unsupported("sw needs a bounded domain".into()));
        }
        if !origin_symmetric(d) {
            return self.error(id, domain_id, &Error::Unsupported("domain is not symmetric about the origin".into()));
        }
        let gamma = gaussian_measure_2d(d).value;
        if gamma >= 1.0 - 1e-12 {
            return self.error(id, domain_id, &Error::Unsupported("plane-like domain: Ω♯ undefined".into()));
        }
        let radius = (-2.0 * (-gamma).ln_1p()).sqrt();
        let full = self.full(d);
        let run = || -> Result<CheckReport, Error> {
            let (s, _) = full.as_ref().as_ref().map_err(Clone::clone)?;
            let disk = build_domain(&DomainSpec::Disk { r: radius })?;
            let lhs = disk_radial_eigenvalue(radius, 1, self.settings.grid_n)?.value;
            Ok(CheckReport::decided(id, domain_id, lhs, s.mu1(), self.settings.tol, Orientation::AtLeast, &self.settings)
                .with_evidence(vec![h_record(s, 1)])
                .with_detail("gaussian_measure", gamma)
                .with_detail("disk_radius", radius)
                .with_detail("disk_measure_defect", gaussian_measure_2d(&disk).value - gamma))
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// μ₁(Ω) ≥ μ₁(−d/2, d/2), d the diameter, for bounded convex Ω.
    pub fn check_an(&self, domain_id: &str, d: &Domain) -> CheckReport {
        let id = CheckId::AndrewsNi;
        if !d.is_bounded() {
            return self.error(id, domain_id, &Error::Unsupported("andrews_ni needs a bounded domain".into()));
        }
        if matches!(d.spec(), DomainSpec::Dumbbell { .. }) {
            return self.error(id, domain_id, &Error::Unsupported("andrews_ni needs a convex domain".into()));
        }
        let full = self.full(d);
        let run = || -> Result<CheckReport, Error> {
            let (s, _) = full.as_ref().as_ref().map_err(Clone::clone)?;
            let diam = diameter(d)?;
            let rhs = self.interval_mu1(0.5 * diam)?;
            Ok(CheckReport::decided(id, domain_id, s.mu1(), rhs, self.settings.tol, Orientation::AtLeast, &self.settings)
                .with_evidence(vec![h_record(s, 1)])
                .with_detail("diameter", diam))
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// μ₁(Ω) − 1 ≥ λ₁(−a, a), valid when μ₁(Ω) = μ₁ᵒᵈᵈ(Ω).
    pub fn check_gap(&self, domain_id: &str, d: &Domain) -> CheckReport {
        let id = CheckId::Gap;
        let run = || -> Result<CheckReport, Error> {
            let (mu1, odd, evidence) = if d.is_unbounded_below() {
                let sol = self.unbounded(d);
                let sol = sol.as_ref().as_ref().map_err(Clone::clone)?;
                let full = sol.full.as_ref().expect("full spectrum requested");
                (full.spectrum.mu1(), sol.odd.spectrum.mu1(), vec![full.record.clone(), sol.odd.record.clone()])
            } else if d.is_bounded() {
                let full = self.full(d);
                let (s, o) = full.as_ref().as_ref().map_err(Clone::clone)?;
                (s.mu1(), o.mu1(), vec![h_record(s, 1), h_record(o, 0)])
            } else {
                return Err(Error::Unsupported("gap needs a bounded or unbounded-below domain".into()));
            };
            let a = d.half_width();
            let lambda1 = lambda1_interval(-a, a, self.settings.grid_n)?.value;
            let strip = self.interval_mu1(a)?;
            let identity = strip - 1.0 - lambda1;
            let base = if (mu1 - odd).abs() <= GAP_HYPOTHESIS_TOL {
                CheckReport::decided(id, domain_id, mu1 - 1.0, lambda1, self.settings.tol, Orientation::AtLeast, &self.settings)
            } else {
                let mut r = CheckReport::decided(id, domain_id, mu1 - 1.0, lambda1, self.settings.tol, Orientation::AtLeast, &self.settings);
                r.status = Status::HypothesisNotMet;
                r.with_note(format!("μ₁ = {mu1:.6} differs from μ₁ᵒᵈᵈ = {odd:.6}; the bound is not implied"))
            };
            let mut r = base
                .with_evidence(evidence)
                .with_detail("mu1", mu1)
                .with_detail("mu1_odd", odd)
                .with_detail("strip_identity_defect", identity);
            if identity.abs() > IDENTITY_TOL {
                r = r.with_note(format!("1-D identity defect {identity:e} exceeds {IDENTITY_TOL:e}"));
            }
            Ok(r)
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// μ₁ᵒᵈᵈ of dumbbells with shrinking corridors: strictly decreasing, the
    /// last value below half the first. lhs is the smallest of the successive
    /// decrements and (first/2 − last), rhs = 0.
    pub fn dumbbell_sweep(&self, domain_id: &str, eps: &[f64], length: f64, side: f64) -> CheckReport {
        let id = CheckId::Dumbbell;
        if eps.is_empty() || eps.windows(2).any(|w| !(w[1] < w[0])) || eps.iter().any(|&e| !(e > 0.0 && e <= side)) {
            let note = format!("corridor widths must be strictly decreasing in (0, {side}]");
            return CheckReport::undecided(id, domain_id, Status::Error, note, &self.settings);
        }
        let mut record = ConvergenceRecord {
            parameter: "corridor".into(),
            samples: Vec::new(),
            extrapolated: None,
            order: None,
            converged: false,
        };
        for &e in eps {
            let solved = build_domain(&DomainSpec::Dumbbell { corridor: e, length, side })
                .and_then(|d| Ok(self.odd(&d).as_ref().clone()?.mu1()));
            match solved {
                Ok(v) => record.samples.push((e, v)),
                Err(err) => {
                    return CheckReport::undecided(id, domain_id, Status::Error, format!("corridor {e}: {err}"), &self.settings)
                        .with_evidence(vec![record]);
                }
            }
        }
        let values: Vec<f64> = record.samples.iter().map(|s| s.1).collect();
        let drop = values.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        let halving = 0.5 * values[0] - values[values.len() - 1];
        record.converged = true;
        record.extrapolated = values.last().copied();
        CheckReport::decided(id, domain_id, drop.min(halving), 0.0, 0.0, Orientation::Above, &self.settings)
            .with_detail("min_decrement", drop)
            .with_detail("half_first_minus_last", halving)
            .with_evidence(vec![record])
    }

    /// Seeded collar samples of Ωₙ: 1 ≤ |J| ≤ 3 and the weight-ratio bound.
    /// lhs is the smallest slack over min(|J| − 1, 3 − |J|, 1 − ratio/bound).
    pub fn jacobian_audit(&self, domain_id: &str, d: &Domain, n: u32, samples: usize, seed: u64) -> CheckReport {
        let id = CheckId::Jacobian;
        let run = || -> Result<CheckReport, Error> {
            let radius = default_radius(d)?;
            let omega = invading_sequence(d, n, Some(radius))?;
            let (_, r, p0) = truncation_of(&omega).expect("built by invading_sequence");
            let bound = weight_ratio_bound(r, p0);
            let points = sample_collar(&omega, samples, 0.5 * r, seed)?;
            let (mut jmin, mut jmax, mut ratio_max, mut ties) = (f64::INFINITY, 0.0f64, 0.0f64, 0usize);
            for p in points {
                let s = reflection_jacobian(&omega, p)?;
                jmin = jmin.min(s.jacobian_abs);
                jmax = jmax.max(s.jacobian_abs);
                ratio_max = ratio_max.max(s.weight_ratio() / bound);
                ties += usize::from(s.tie);
            }
            let slack = (jmin - 1.0).min(3.0 - jmax).min(1.0 - ratio_max);
            Ok(CheckReport::decided(id, domain_id, slack, 0.0, JACOBIAN_TOL, Orientation::AtLeast, &self.settings)
                .with_detail("n", n as f64)
                .with_detail("samples", samples as f64)
                .with_detail("radius", r)
                .with_detail("jacobian_min", jmin)
                .with_detail("jacobian_max", jmax)
                .with_detail("weight_ratio_over_bound_max", ratio_max)
                .with_detail("weight_ratio_bound", bound)
                .with_detail("ties", ties as f64))
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// First five nonzero Neumann values of a large centred disk against the
    /// plane levels (1, 1, 2, 2, 2); lhs is the largest deviation.
    pub fn plane_spectrum(&self, domain_id: &str, d: &Domain) -> CheckReport {
        let id = CheckId::PlaneSpectrum;
        let run = || -> Result<CheckReport, Error> {
            let s = neumann_spectrum(d, self.settings.h_plane, 6)?;
            let levels = [1.0, 1.0, 2.0, 2.0, 2.0];
            let values: Vec<f64> = (1..=levels.len()).map(|i| s.best(i)).collect();
            let dev = values.iter().zip(levels).map(|(v, w)| (v - w).abs()).fold(0.0, f64::max);
            let mut r = CheckReport::decided(id, domain_id, dev, 0.0, PLANE_TOL, Orientation::Equal, &self.settings)
                .with_evidence((1..6).map(|i| h_record(&s, i)).collect());
            for (i, v) in values.into_iter().enumerate() {
                r = r.with_detail(&format!("mu{}", i + 1), v);
            }
            Ok(r)
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// μ₁ᵒᵈᵈ of a rectangle equals μ₁(−a, a) (relative slack 1e-3).
    pub fn rectangle_equality(&self, domain_id: &str, d: &Domain) -> CheckReport {
        let id = CheckId::RectangleEquality;
        if !matches!(d.spec(), DomainSpec::Rectangle { .. }) {
            return self.error(id, domain_id, &Error::Unsupported("rectangle_equality needs a rectangle".into()));
        }
        let odd = self.odd(d);
        let run = || -> Result<CheckReport, Error> {
            let s = odd.as_ref().as_ref().map_err(Clone::clone)?;
            let rhs = self.interval_mu1(d.half_width())?;
            Ok(CheckReport::decided(id, domain_id, s.mu1(), rhs, RECTANGLE_REL_TOL * rhs, Orientation::Equal, &self.settings)
                .with_evidence(vec![h_record(s, 0)]))
        };
        run().unwrap_or_else(|e| self.error(id, domain_id, &e))
    }

    /// T = (−1, 1) × (−∞, 0): μ₁ = 2 and μ₁ᵒᵈᵈ = 3, one report each
    /// (domain ids suffixed `:mu1` and `:mu1_odd`).
    pub fn t_example(&self, domain_id: &str, d: &Domain) -> Vec<CheckReport> {
        let id = CheckId::TExample;
        let sol = self.unbounded(d);
        let sol = match sol.as_ref() {
            Ok(s) => s,
            Err(e) => return vec![self.error(id, &format!("{domain_id}:mu1"), e), self.error(id, &format!("{domain_id}:mu1_odd"), e)],
        };
        let full = sol.full.as_ref().expect("full spectrum requested");
        let (mu1, odd) = (full.spectrum.mu1(), sol.odd.spectrum.mu1());
        vec![
            CheckReport::decided(id, &format!("{domain_id}:mu1"), mu1, 2.0, 2.0 * T_REL_TOL, Orientation::Equal, &self.settings)
                .with_evidence(vec![full.record.clone()]),
            CheckReport::decided(id, &format!("{domain_id}:mu1_odd"), odd, 3.0, 3.0 * T_REL_TOL, Orientation::Equal, &self.settings)
                .with_evidence(vec![sol.odd.record.clone()]),
        ]
    }
}

/// (x, y) ∈ Ω ⇔ (−x, −y) ∈ Ω; given x-symmetry this is y ↦ −y symmetry.
pub fn origin_symmetric(d: &Domain) -> bool {
    match d.shape() {
        Shape::Plane | Shape::Strip { .. } => true,
        Shape::Below { .. } => false,
        Shape::Region(r) => (0..=200).all(|i| {
            let x = r.a * i as f64 / 200.0;
            (r.top.eval(x) + r.bottom.eval(x)).abs() <= 1e-12 * (1.0 + r.top.eval(x).abs())
        }),
    }
}
