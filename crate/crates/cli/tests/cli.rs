use std::path::PathBuf;
use std::process::Command;

use hermite_gap::geometry::{build_domain, regular_hexagon, Domain, DomainSpec};
use hermite_gap::solver1d::mu1_interval;
use hermite_gap_cli::battery::{built_in, random_polygons, run_battery, BatteryEntry};
use hermite_gap_cli::report::round12;
use hermite_gap_cli::{
    emit_report, exit_code, read_domain_file, CheckId, CheckReport, Format, Orientation, Runner, Settings, Status,
};
use serde_json::Value;

fn domain(spec: DomainSpec) -> Domain {
    build_domain(&spec).unwrap()
}

fn lens() -> DomainSpec {
    serde_json::from_str(r#"{"kind":"profile","a":1,"p":{"poly":[1,0,-1]},"q":{"poly":[-1,0,1]}}"#).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hermite-gap-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hermite-gap"))
}

#[test]
fn empty_report_is_valid_and_exits_zero() {
    let text = emit_report(&[], Format::Json);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["reports"], Value::Array(vec![]));
    assert_eq!(v["summary"]["total"], 0);
    assert_eq!(v["summary"]["exit_code"], 0);
    assert_eq!(exit_code(&[]), 0);
    assert_eq!(emit_report(&[], Format::Csv).lines().count(), 1);
}

#[test]
fn one_failing_check_exits_one_with_its_numbers() {
    let s = Settings::default();
    let fail = CheckReport::decided(CheckId::Thm1, "bad", 1.0, 2.0, 0.5, Orientation::AtLeast, &s);
    assert_eq!(fail.status, Status::Fail);
    assert_eq!(fail.margin, -1.0);
    let ok = CheckReport::decided(CheckId::Thm1, "good", 2.0, 2.0, 0.0, Orientation::AtLeast, &s);
    let reports = vec![ok, fail];
    assert_eq!(exit_code(&reports), 1);
    let v: Value = serde_json::from_str(&emit_report(&reports, Format::Json)).unwrap();
    let bad = v["reports"].as_array().unwrap().iter().find(|r| r["domain_id"] == "bad").unwrap();
    assert_eq!((bad["lhs"].as_f64(), bad["rhs"].as_f64(), bad["margin"].as_f64()), (Some(1.0), Some(2.0), Some(-1.0)));
    assert_eq!(bad["status"], "fail");
}

#[test]
fn only_failures_and_errors_change_the_exit_code() {
    let s = Settings::default();
    let quiet = [Status::HypothesisNotMet, Status::Inconclusive, Status::Unsupported]
        .map(|st| CheckReport::undecided(CheckId::Gap, "d", st, "n/a".into(), &s));
    assert_eq!(exit_code(&quiet), 0);
    let mut with_error = quiet.to_vec();
    with_error.push(CheckReport::undecided(CheckId::Gap, "e", Status::Error, "boom".into(), &s));
    assert_eq!(exit_code(&with_error), 2);
    with_error.push(CheckReport::decided(CheckId::Gap, "f", 0.0, 1.0, 0.0, Orientation::AtLeast, &s));
    assert_eq!(exit_code(&with_error), 1);
}

#[test]
fn orientations() {
    assert!(Orientation::Equal.passes(Orientation::Equal.margin(1.0, 1.0005), 1e-3));
    assert!(!Orientation::Equal.passes(Orientation::Equal.margin(1.0, 0.998), 1e-3));
    assert!(Orientation::AtLeast.passes(0.0, 0.0));
    assert!(!Orientation::Above.passes(0.0, 0.0));
    assert!(Orientation::Above.passes(1e-300, 0.0));
}

#[test]
fn twelve_digit_rounding() {
    assert_eq!(round12(0.1 + 0.2), 0.3);
    assert_eq!(round12(1.0 / 3.0), 0.333333333333);
    assert!(round12(f64::NAN).is_nan());
    let s = Settings::default();
    let r = CheckReport::decided(CheckId::Sw, "x", 1.0 / 3.0, 0.0, 0.0, Orientation::AtLeast, &s);
    let text = emit_report(&[r], Format::Json);
    assert!(text.contains("0.333333333333,"), "{text}");
}

#[test]
fn json_is_deterministic_and_pass_flags_recompute() {
    let runner = Runner::new(Settings::default());
    let d = domain(DomainSpec::Rectangle { a: 1.0, b: 0.5 });
    let reports = vec![
        runner.check_thm1("rect", &d),
        runner.check_an("rect", &d),
        CheckReport::undecided(CheckId::Thm2, "rect", Status::Unsupported, "bounded".into(), &runner.settings),
    ];
    let a = emit_report(&reports, Format::Json);
    let b = emit_report(&reports.clone(), Format::Json);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    for r in v["reports"].as_array().unwrap() {
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let back: CheckReport = serde_json::from_value(r.clone()).unwrap();
        assert_eq!(back.pass, back.recomputed_pass());
        match back.status {
            Status::Pass | Status::Fail => assert_eq!(back.recomputed_pass(), back.status == Status::Pass),
            _ => assert!(back.lhs.is_nan()),
        }
    }
}

#[test]
fn csv_has_one_row_per_check() {
    let s = Settings::default();
    let reports = vec![
        CheckReport::decided(CheckId::Thm1, "a", 3.0, 2.0, 0.0, Orientation::AtLeast, &s),
        CheckReport::undecided(CheckId::Gap, "b,c", Status::HypothesisNotMet, "μ₁ ≠ μ₁ᵒᵈᵈ".into(), &s),
    ];
    let csv = emit_report(&reports, Format::Csv);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "check_id,domain_id,lhs,rhs,margin,tolerance,orientation,status,note");
    assert_eq!(lines[1], "thm1,a,3,2,1,0,at_least,pass,");
    assert!(lines[2].starts_with("gap,\"b,c\",,,,,"));
}

#[test]
fn thm1_examples() {
    let runner = Runner::new(Settings::default());
    let rect = runner.check_thm1("rect", &domain(DomainSpec::Rectangle { a: 1.0, b: 0.5 }));
    assert!(rect.passed() && rect.margin.abs() <= 1e-3, "{rect:?}");
    assert!(!rect.evidence.is_empty());
    let hex = runner.check_thm1("hex", &domain(regular_hexagon(1.0)));
    assert!(hex.passed() && hex.margin > 0.0);
    assert!(runner.check_thm1("lens", &domain(lens())).passed());
    let strip = runner.check_thm1("strip", &domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 }));
    assert_eq!(strip.status, Status::Unsupported);
}

#[test]
fn sw_disk_is_an_equality() {
    let runner = Runner::new(Settings::default());
    let r = runner.check_sw("disk", &domain(DomainSpec::Disk { r: 1.0 }));
    assert!(r.passed() && r.margin.abs() <= 1e-4, "{r:?}");
    assert!((r.details["disk_radius"] - 1.0).abs() < 1e-9);
    assert!(r.details["disk_measure_defect"].abs() < 1e-12);
    let off = runner.check_sw("lens", &domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 }));
    assert_eq!(off.status, Status::Unsupported);
}

#[test]
fn andrews_ni_on_a_thin_rectangle() {
    let runner = Runner::new(Settings::default());
    let r = runner.check_an("needle", &domain(DomainSpec::Rectangle { a: 1.0, b: 0.05 }));
    assert!(r.passed() && r.margin < 0.05, "{r:?}");
    let dumbbell = runner.check_an("db", &domain(DomainSpec::Dumbbell { corridor: 0.2, length: 1.0, side: 1.0 }));
    assert_eq!(dumbbell.status, Status::Unsupported);
}

#[test]
fn gap_hypothesis() {
    let runner = Runner::new(Settings::default());
    let sq = runner.check_gap("square", &domain(DomainSpec::Rectangle { a: 1.0, b: 1.0 }));
    assert!(sq.passed(), "{sq:?}");
    assert!(sq.details["strip_identity_defect"].abs() <= 1e-8);
    let t = runner.check_gap("t", &domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 }));
    assert_eq!(t.status, Status::HypothesisNotMet);
    assert!((t.details["mu1"] - 2.0).abs() < 0.02 && (t.details["mu1_odd"] - 3.0).abs() < 0.03);
    assert_eq!(exit_code(&[t]), 0);
}

#[test]
fn dumbbell_sweep_contract() {
    let runner = Runner::new(Settings::default());
    // A corridor as wide as the squares leaves the 3 × 1 rectangle.
    let full = runner.dumbbell_sweep("db", &[1.0], 1.0, 1.0);
    let rect = mu1_interval(-1.5, 1.5, 2048).unwrap().value;
    let v = full.evidence[0].samples[0].1;
    assert!((v - rect).abs() / rect < 1e-3, "{v} vs {rect}");
    let long = runner.dumbbell_sweep("db", &[0.1], 2.0, 1.0).evidence[0].samples[0].1;
    let short = runner.dumbbell_sweep("db", &[0.1], 1.0, 1.0).evidence[0].samples[0].1;
    assert!(long < short, "{long} vs {short}");
    for bad in [vec![0.1, 0.2], vec![0.4, 0.0], vec![]] {
        assert_eq!(runner.dumbbell_sweep("db", &bad, 1.0, 1.0).status, Status::Error);
    }
}

#[test]
fn jacobian_audit_on_t() {
    let runner = Runner::new(Settings::default());
    let r = runner.jacobian_audit("t", &domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 }), 6, 300, 7);
    assert!(r.passed(), "{r:?}");
    assert!(r.details["jacobian_min"] >= 1.0 - 1e-12 && r.details["jacobian_max"] <= 3.0 + 1e-12);
    let again = runner.jacobian_audit("t", &domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 }), 6, 300, 7);
    assert_eq!(r, again);
}

#[test]
fn battery_files_parse() {
    let entries = built_in().unwrap();
    let mut ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), entries.len());
    for e in &entries {
        build_domain(&e.domain).unwrap();
    }
    let thm1 = entries.iter().filter(|e| e.checks.contains(&CheckId::Thm1)).count();
    assert_eq!(thm1 + random_polygons(7, 12).len(), 20);
}

#[test]
fn random_polygons_are_seeded_symmetric_and_convex() {
    let a = random_polygons(7, 12);
    assert_eq!(a, random_polygons(7, 12));
    assert_ne!(a, random_polygons(8, 12));
    for e in &a {
        let DomainSpec::ConvexPolygon { vertices } = &e.domain else { panic!() };
        for v in vertices {
            assert!(vertices.iter().any(|w| w[0] == -v[0] && w[1] == v[1]), "{}: {v:?} has no mirror", e.id);
        }
        let n = vertices.len();
        for i in 0..n {
            let (p, q, r) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
            assert!(cross > 0.0, "{}: not strictly convex at {q:?}", e.id);
        }
    }
}

#[test]
fn battery_order_does_not_change_reports() {
    let entries: Vec<BatteryEntry> = built_in()
        .unwrap()
        .into_iter()
        .filter(|e| ["disk-1", "rect-1x0.5", "lens", "rect-2x0.5"].contains(&e.id.as_str()))
        .collect();
    let forward = run_battery(&Runner::new(Settings::default()), &entries, 1);
    let mut reversed = entries.clone();
    reversed.reverse();
    let backward = run_battery(&Runner::new(Settings::default()), &reversed, 3);
    assert_eq!(emit_report(&forward, Format::Json), emit_report(&backward, Format::Json));
    assert!(forward.windows(2).all(|w| (w[0].check_id, &w[0].domain_id) <= (w[1].check_id, &w[1].domain_id)));
}

#[test]
fn domain_files_take_either_form() {
    let dir = scratch_dir("forms");
    let bare = dir.join("my-square.json");
    std::fs::write(&bare, r#"{"kind": "rectangle", "a": 1, "b": 1}"#).unwrap();
    let e = read_domain_file(&bare).unwrap();
    assert_eq!(e.id, "my-square");
    assert!(e.checks.is_empty());
    let entry = dir.join("entry.json");
    std::fs::write(&entry, r#"{"id": "sq", "checks": ["an"], "domain": {"kind": "rectangle", "a": 1, "b": 1}}"#)
        .unwrap();
    let e = read_domain_file(&entry).unwrap();
    assert_eq!((e.id.as_str(), e.checks.as_slice()), ("sq", &[CheckId::AndrewsNi][..]));
    let broken = dir.join("broken.json");
    std::fs::write(&broken, r#"{"kind": "triangle"}"#).unwrap();
    let err = read_domain_file(&broken).unwrap_err().to_string();
    assert!(err.contains("broken.json"), "{err}");
}

#[test]
fn binary_check_and_output_file() {
    let dir = scratch_dir("bin");
    let spec = dir.join("rect-1x0.5.json");
    std::fs::write(&spec, r#"{"kind": "rectangle", "a": 1, "b": 0.5}"#).unwrap();
    let out = dir.join("reports/thm1.csv");
    let st = bin().args(["check", "thm1"]).arg(&spec).args(["--format", "csv", "--out"]).arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("thm1,rect-1x0.5,"), "{csv}");

    let o = bin().args(["eig1d", "-1", "1", "--format", "json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 3.0).abs() < 1e-8);

    let blocked = dir.join("file");
    std::fs::write(&blocked, "").unwrap();
    let o = bin().args(["eig1d", "-1", "1", "--out"]).arg(blocked.join("x.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("file"));
}

#[test]
fn binary_reports_failures_with_exit_one() {
    let dir = scratch_dir("fail");
    let spec = dir.join("rect.json");
    std::fs::write(&spec, r#"{"kind": "rectangle", "a": 1, "b": 0.5}"#).unwrap();
    // A negative slack demands a strict excess the equality case cannot give.
    let o = bin().args(["check", "thm1"]).arg(&spec).args(["--tol=-0.01", "--format", "json"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["reports"][0]["status"], "fail");
    assert_eq!(v["summary"]["fail"], 1);
}
