use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use hermite_gap::geometry::{build_domain, DomainSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::checks::{Runner, DEFAULT_SWEEP};
use crate::report::{sort_reports, CheckId, CheckReport, Status};
use crate::CliError;

/// Random symmetric convex polygons added to the Theorem 1 battery.
pub const RANDOM_POLYGONS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditParams {
    pub n: u32,
    pub samples: usize,
}

/// One battery file: a domain and the checks to run on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryEntry {
    pub id: String,
    pub checks: Vec<CheckId>,
    pub domain: DomainSpec,
    /// Corridor widths for the dumbbell sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditParams>,
}

const BUILT_IN: &[(&str, &str)] = &[
    ("disk-1.json", include_str!("../battery/disk-1.json")),
    ("disk-12.json", include_str!("../battery/disk-12.json")),
    ("dumbbell.json", include_str!("../battery/dumbbell.json")),
    ("halfstrip-0.5-0.json", include_str!("../battery/halfstrip-0.5-0.json")),
    ("halfstrip-2-1.json", include_str!("../battery/halfstrip-2-1.json")),
    ("hexagon-1.json", include_str!("../battery/hexagon-1.json")),
    ("lens.json", include_str!("../battery/lens.json")),
    ("parabola.json", include_str!("../battery/parabola.json")),
    ("rect-0.5x1.json", include_str!("../battery/rect-0.5x1.json")),
    ("rect-1.5x0.5.json", include_str!("../battery/rect-1.5x0.5.json")),
    ("rect-1x0.05.json", include_str!("../battery/rect-1x0.05.json")),
    ("rect-1x0.5.json", include_str!("../battery/rect-1x0.5.json")),
    ("rect-1x2.json", include_str!("../battery/rect-1x2.json")),
    ("rect-2x0.5.json", include_str!("../battery/rect-2x0.5.json")),
    ("square-1.json", include_str!("../battery/square-1.json")),
    ("t.json", include_str!("../battery/t.json")),
];

fn parse_entry(name: &str, text: &str) -> Result<BatteryEntry, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse { path: name.into(), message: e.to_string() })
}

/// The checked-in battery files, compiled into the binary.
pub fn built_in() -> Result<Vec<BatteryEntry>, CliError> {
    BUILT_IN.iter().map(|(name, text)| parse_entry(name, text)).collect()
}

/// Every `*.json` file of a directory, in file-name order.
pub fn load_dir(dir: &Path) -> Result<Vec<BatteryEntry>, CliError> {
    let read = std::fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let mut paths: Vec<_> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.clone(), source })?;
            parse_entry(&p.display().to_string(), &text)
        })
        .collect()
}

/// Convex hull (counter-clockwise) by the monotone chain.
fn hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = out.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while out.len() >= start + 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= 1e-9 {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
    }
    out
}

/// Convex polygons symmetric under x ↦ −x: hull of random points and their
/// mirror images, kept when the hull is well shaped.
pub fn random_polygons(seed: u64, count: usize) -> Vec<BatteryEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.gen_range(3..=6);
        let mut pts = Vec::with_capacity(2 * m);
        for _ in 0..m {
            let theta = rng.gen_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
            let r = rng.gen_range(0.5..1.5);
            let p = [r * theta.cos(), r * theta.sin() + rng.gen_range(-0.3..0.3)];
            pts.push(p);
            pts.push([-p[0], p[1]]);
        }
        let vertices: Vec<[f64; 2]> =
            hull(pts).into_iter().map(|p| [(p[0] * 1e6).round() / 1e6, (p[1] * 1e6).round() / 1e6]).collect();
        let spec = DomainSpec::ConvexPolygon { vertices };
        if build_domain(&spec).is_ok_and(|d| d.half_width() > 0.3) {
            out.push(BatteryEntry {
                id: format!("random-{:02}", out.len()),
                checks: vec![CheckId::Thm1],
                domain: spec,
                sweep: None,
                audit: None,
            });
        }
    }
    out
}

/// The full battery: checked-in entries plus the seeded random polygons.
pub fn battery_entries(seed: u64) -> Result<Vec<BatteryEntry>, CliError> {
    let mut entries = built_in()?;
    entries.extend(random_polygons(seed, RANDOM_POLYGONS));
    Ok(entries)
}

/// All reports of one entry.
pub fn run_entry(runner: &Runner, entry: &BatteryEntry) -> Vec<CheckReport> {
    let domain = match build_domain(&entry.domain) {
        Ok(d) => d,
        Err(e) => {
            return entry
                .checks
                .iter()
                .map(|&c| CheckReport::undecided(c, &entry.id, Status::Error, e.to_string(), &runner.settings))
                .collect()
        }
    };
    let mut out = Vec::new();
    for &check in &entry.checks {
        match check {
            CheckId::Thm1 => out.push(runner.check_thm1(&entry.id, &domain)),
            CheckId::Thm2 => out.push(runner.check_thm2(&entry.id, &domain)),
            CheckId::Sw => out.push(runner.check_sw(&entry.id, &domain)),
            CheckId::AndrewsNi => out.push(runner.check_an(&entry.id, &domain)),
            CheckId::Gap => out.push(runner.check_gap(&entry.id, &domain)),
            CheckId::Dumbbell => {
                let (length, side) = match &entry.domain {
                    DomainSpec::Dumbbell { length, side, .. } => (*length, *side),
                    _ => (1.0, 1.0),
                };
                let eps = entry.sweep.clone().unwrap_or(DEFAULT_SWEEP.to_vec());
                out.push(runner.dumbbell_sweep(&entry.id, &eps, length, side));
            }
            CheckId::Jacobian => {
                let p = entry.audit.clone().unwrap_or(AuditParams { n: 6, samples: 1000 });
                out.push(runner.jacobian_audit(&entry.id, &domain, p.n, p.samples, runner.settings.seed));
            }
            CheckId::PlaneSpectrum => out.push(runner.plane_spectrum(&entry.id, &domain)),
            CheckId::RectangleEquality => out.push(runner.rectangle_equality(&entry.id, &domain)),
            CheckId::TExample => out.extend(runner.t_example(&entry.id, &domain)),
        }
    }
    out
}

/// Worker count: HERMITE_GAP_THREADS if set, else the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("HERMITE_GAP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Run every entry, spreading entries over worker threads; the result is
/// sorted by (check_id, domain_id) and independent of scheduling.
pub fn run_battery(runner: &Runner, entries: &[BatteryEntry], threads: usize) -> Vec<CheckReport> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, entries.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(entry) = entries.get(i) else { break };
                let reports = run_entry(runner, entry);
                results.lock().expect("results lock").extend(reports);
            });
        }
    });
    let mut reports = results.into_inner().expect("results lock");
    sort_reports(&mut reports);
    reports
}
