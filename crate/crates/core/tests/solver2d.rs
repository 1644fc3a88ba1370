use hermite_gap::eigen::eigs_generalized_sym;
use hermite_gap::gaussian::gaussian_measure_2d;
use hermite_gap::geometry::{build_domain, regular_hexagon, triangulate_half, half_domain, Domain, DomainSpec};
use hermite_gap::solver1d::{disk_radial_eigenvalue, mu1_interval, shoot_profile, shooting_eigenvalue, Bc, Unit};
use hermite_gap::solver2d::{
    assemble, mu1_odd, neumann_spectrum, rayleigh_upper_bound, solve_unbounded, UnboundedOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn domain(spec: DomainSpec) -> Domain {
    build_domain(&spec).unwrap()
}

fn lens() -> DomainSpec {
    serde_json::from_str(r#"{"kind":"profile","a":1,"p":{"poly":[1,0,-1]},"q":{"poly":[-1,0,1]}}"#).unwrap()
}

/// Neumann eigenvalues of −v″ + xv′ on (−a, a) below `top`, by scanning the
/// shooting defect v′(a) for sign changes.
fn interval_neumann(a: f64, top: f64) -> Vec<f64> {
    let defect = |mu: f64| shoot_profile(-a, a, Bc::Neumann, &Unit, mu, &[a]).unwrap()[0][1];
    let mut out = vec![0.0];
    let step = 0.05;
    let mut lo = step;
    let mut d_lo = defect(lo);
    while lo < top {
        let hi = lo + step;
        let d_hi = defect(hi);
        if d_lo.signum() != d_hi.signum() {
            out.push(shooting_eigenvalue(-a, a, Bc::Neumann, &Unit, (lo, hi)).unwrap());
        }
        (lo, d_lo) = (hi, d_hi);
    }
    out
}

#[test]
fn assembled_pencil_invariants() {
    let d = domain(regular_hexagon(1.0));
    let mesh = triangulate_half(&half_domain(&d), 0.15).unwrap().mirror_union().unwrap();
    let sys = assemble(&mesh, false).unwrap();
    let n = sys.dofs();
    let ones = vec![1.0; n];
    let (k1, m1) = sys.pair.apply(&ones);
    assert!(k1.iter().all(|v| v.abs() <= 1e-10), "K·1 ≠ 0");
    let total: f64 = m1.iter().sum();
    let exact = 2.0 * std::f64::consts::PI * gaussian_measure_2d(&d).value;
    assert!(((total - exact) / exact).abs() < 1e-12, "{total} vs {exact}");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (kv, mv) = sys.pair.apply(&v);
        let vkv: f64 = v.iter().zip(&kv).map(|(a, b)| a * b).sum();
        let vmv: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        assert!(vkv >= -1e-10 && vmv > 0.0);
    }
}

#[test]
fn axis_constraint_removes_axis_vertices() {
    let d = domain(DomainSpec::Rectangle { a: 1.0, b: 1.0 });
    let mesh = triangulate_half(&half_domain(&d), 0.25).unwrap();
    let free = assemble(&mesh, false).unwrap();
    let odd = assemble(&mesh, true).unwrap();
    let axis = mesh.axis_vertices().iter().filter(|&&b| b).count();
    assert_eq!(odd.constrained_dofs.len(), axis);
    assert_eq!(odd.dofs() + axis, free.dofs());
    assert_eq!(odd.nodal(&vec![1.0; odd.dofs()]).iter().filter(|&&v| v == 0.0).count(), axis);
}

#[test]
fn mirror_image_has_the_same_spectrum() {
    // The half mesh is not itself mirror symmetric; its reflection is a different mesh.
    let d = domain(regular_hexagon(1.0));
    let mesh = triangulate_half(&half_domain(&d), 0.15).unwrap();
    let a = eigs_generalized_sym(&assemble(&mesh, false).unwrap().pair, 5).unwrap().values;
    let b = eigs_generalized_sym(&assemble(&mesh.mirror(), false).unwrap().pair, 5).unwrap().values;
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()), "{x} vs {y}");
    }
}

#[test]
fn symmetry_split_reproduces_the_full_mesh() {
    let d = domain(lens());
    let half = triangulate_half(&half_domain(&d), 0.2).unwrap();
    let full = half.mirror_union().unwrap();
    let whole = eigs_generalized_sym(&assemble(&full, false).unwrap().pair, 6).unwrap().values;
    let mut split = eigs_generalized_sym(&assemble(&half, false).unwrap().pair, 6).unwrap().values;
    split.extend(eigs_generalized_sym(&assemble(&half, true).unwrap().pair, 6).unwrap().values);
    split.sort_by(f64::total_cmp);
    for (x, y) in whole.iter().zip(&split) {
        assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "{x} vs {y}");
    }
}

#[test]
fn rectangle_spectrum_is_the_sum_of_interval_spectra() {
    let (a, b) = (1.0, 0.5);
    let k = 6;
    let s = neumann_spectrum(&domain(DomainSpec::Rectangle { a, b }), 0.05, k).unwrap();
    let (ex, ey) = (interval_neumann(a, 30.0), interval_neumann(b, 30.0));
    let mut sums: Vec<f64> = ex.iter().flat_map(|x| ey.iter().map(move |y| x + y)).collect();
    sums.sort_by(f64::total_cmp);
    assert!(s.values[0].abs() <= 1e-8);
    for i in 1..k {
        let got = s.best(i);
        assert!(((got - sums[i]) / sums[i]).abs() < 2e-3, "index {i}: {got} vs {}", sums[i]);
    }
}

#[test]
fn neumann_ground_state_is_constant() {
    let s = neumann_spectrum(&domain(regular_hexagon(1.0)), 0.1, 2).unwrap();
    let v = &s.modes.as_ref().unwrap().vectors[0];
    let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
    assert!((hi - lo) / hi.abs().max(lo.abs()) < 1e-6);
}

#[test]
fn square_first_eigenvalue_is_double() {
    let s = neumann_spectrum(&domain(DomainSpec::Rectangle { a: 1.0, b: 1.0 }), 0.05, 3).unwrap();
    assert!((s.values[1] - s.values[2]).abs() <= 1e-3);
    assert!((s.best(1) - 3.0).abs() < 3e-3 && (s.best(2) - 3.0).abs() < 3e-3);
}

#[test]
fn odd_ground_state_on_rectangles() {
    for (a, b) in [(1.0, 1.0), (0.5, 1.0)] {
        let got = mu1_odd(&domain(DomainSpec::Rectangle { a, b }), 0.05).unwrap().mu1();
        let want = mu1_interval(-a, a, 2048).unwrap().value;
        assert!(((got - want) / want).abs() < 1e-3, "({a}, {b}): {got} vs {want}");
    }
    let tall = mu1_odd(&domain(DomainSpec::Rectangle { a: 1.0, b: 12.0 }), 0.1).unwrap().mu1();
    assert!((tall - 3.0).abs() < 3e-3, "tall rectangle {tall}");
}

#[test]
fn odd_ground_state_on_disks_matches_the_radial_mode() {
    for r in [1.0, 2.0] {
        let s = mu1_odd(&domain(DomainSpec::Disk { r }), 0.05).unwrap();
        let radial = disk_radial_eigenvalue(r, 1, 2048).unwrap().value;
        assert!(((s.mu1() - radial) / radial).abs() < 2e-3, "R = {r}: {} vs {radial}", s.mu1());
    }
}

#[test]
fn nested_refinement_only_lowers_odd_values() {
    for spec in [regular_hexagon(1.0), DomainSpec::ConvexPolygon { vertices: vec![[0.0, 1.0], [-1.0, -0.5], [1.0, -0.5]] }] {
        let s = mu1_odd(&domain(spec), 0.08).unwrap();
        for w in s.levels.windows(2) {
            assert!(w[1].values[0] <= w[0].values[0] + 1e-9);
        }
    }
}

#[test]
fn plane_surrogate_spectrum() {
    let s = neumann_spectrum(&domain(DomainSpec::Disk { r: 12.0 }), 0.2, 6).unwrap();
    for (i, want) in [1.0, 1.0, 2.0, 2.0, 2.0].into_iter().enumerate() {
        assert!((s.best(i + 1) - want).abs() < 2e-2, "level {}: {}", i + 1, s.best(i + 1));
    }
}

#[test]
fn t_domain_truncation() {
    let t = domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 });
    let sol = solve_unbounded(&t, &UnboundedOptions { full: true, ..Default::default() }).unwrap();
    let odd = sol.odd.spectrum.mu1();
    let full = sol.full.as_ref().unwrap().spectrum.mu1();
    assert!((odd - 3.0).abs() < 0.03 && (full - 2.0).abs() < 0.02, "odd {odd}, full {full}");
    let samples = &sol.full.as_ref().unwrap().record.samples;
    let steps: Vec<f64> = samples.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    assert!(steps.windows(2).all(|w| w[1] < w[0]), "{samples:?}");
    assert!(sol.odd.record.converged && sol.odd.spectrum.truncation_n.is_some());
}

#[test]
fn half_strips_attain_the_interval_bound() {
    for (a, top) in [(0.5, 0.0), (2.0, 1.0)] {
        let sol = solve_unbounded(&domain(DomainSpec::HalfStrip { a, top }), &UnboundedOptions::default()).unwrap();
        let want = mu1_interval(-a, a, 2048).unwrap().value;
        let got = sol.odd.spectrum.mu1();
        assert!(((got - want) / want).abs() < 1e-2, "({a}, {top}): {got} vs {want}");
    }
}

#[test]
fn rayleigh_bound() {
    let plane = rayleigh_upper_bound(&domain(DomainSpec::Disk { r: 12.0 })).unwrap();
    assert!((plane - 1.0).abs() < 1e-12);

    // Product oracle: γ₂ / ∫x² dγ₂ = γ(−1,1) / ∫_{−1}^{1} x² dγ by Simpson.
    let simpson = |f: &dyn Fn(f64) -> f64| {
        let m = 2000;
        let h = 2.0 / m as f64;
        (0..=m)
            .map(|i| {
                let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * f(-1.0 + i as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0
    };
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let want = simpson(&pdf) / simpson(&|x| x * x * pdf(x));
    let square = DomainSpec::ConvexPolygon { vertices: vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]] };
    assert!((rayleigh_upper_bound(&domain(square)).unwrap() - want).abs() < 1e-9);
    assert!((rayleigh_upper_bound(&domain(DomainSpec::Rectangle { a: 1.0, b: 1.0 })).unwrap() - want).abs() < 1e-9);

    for spec in [regular_hexagon(1.0), lens()] {
        let d = domain(spec);
        assert!(mu1_odd(&d, 0.08).unwrap().mu1() <= rayleigh_upper_bound(&d).unwrap() + 1e-6);
    }
    let t = domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 });
    assert!(rayleigh_upper_bound(&t).unwrap() >= 3.0);
}

#[test]
fn unbounded_and_bounded_entry_points_are_kept_apart() {
    let t = domain(DomainSpec::HalfStrip { a: 1.0, top: 0.0 });
    assert!(mu1_odd(&t, 0.1).is_err());
    assert!(solve_unbounded(&domain(DomainSpec::Disk { r: 1.0 }), &UnboundedOptions::default()).is_err());
    assert!(neumann_spectrum(&domain(DomainSpec::Disk { r: 1.0 }), 0.1, 1).is_err());
}

#[test]
fn polygon_vertices_off_by_rounding_still_refine() {
    // Edge slopes put the shared vertex at y = −0.43268699999999993 from one
    // side and −0.432687 from the other.
    let d = domain(DomainSpec::ConvexPolygon {
        vertices: vec![
            [-1.362212, 0.252139],
            [-0.846335, -0.432687],
            [-0.136117, -0.859856],
            [0.136117, -0.859856],
            [0.846335, -0.432687],
            [1.362212, 0.252139],
            [1.145513, 0.654441],
            [0.172768, 1.324272],
            [-0.172768, 1.324272],
            [-1.145513, 0.654441],
        ],
    });
    let base = triangulate_half(&half_domain(&d), 0.2).unwrap();
    let smallest = (0..base.triangles.len()).map(|t| base.signed_area(t)).fold(f64::INFINITY, f64::min);
    assert!(smallest > 1e-4, "sliver of area {smallest:e}");
    base.refine().unwrap().refine().unwrap();
}
