use std::time::Instant;

use hermite_gap::geometry::{build_domain, regular_hexagon, slice_above, slice_equal_gaussian, StripWeight};
use hermite_gap::solver1d::{
    lambda1_interval, mu1_interval, shoot_profile, shooting_eigenvalue, transform_check, weighted_mu1, Bc,
    SLProblem, Unit, Weight,
};

/// φ(x) = γ₁(0, p(x)) for the top half of the regular hexagon of half-width a.
fn hexagon_top_half(a: f64) -> StripWeight {
    let d = build_domain(&regular_hexagon(a)).unwrap();
    slice_above(&d, 0.0, 0).unwrap().strips.remove(0).phi
}

#[test]
fn neumann_dirichlet_shift_by_one() {
    let t = Instant::now();
    for a in [0.5, 1.0, 2.0, 5.0] {
        let mu = mu1_interval(-a, a, 2048).unwrap();
        let la = lambda1_interval(-a, a, 2048).unwrap();
        assert!((mu.value - la.value - 1.0).abs() <= 1e-8, "a = {a}: {} − {} − 1", mu.value, la.value);
    }
    assert!(t.elapsed().as_secs_f64() < 1.0, "{:?}", t.elapsed());
}

#[test]
fn small_interval_approaches_the_laplacian() {
    let a = 0.05;
    let mu = mu1_interval(-a, a, 256).unwrap().value;
    let scaled = mu * (2.0 * a / std::f64::consts::PI).powi(2);
    assert!((scaled - 1.0).abs() < 5e-3, "{scaled}");
}

#[test]
fn dirichlet_monotone_and_vanishing() {
    let vals: Vec<f64> = [0.5, 1.0, 2.0, 4.0].iter().map(|&a| lambda1_interval(-a, a, 1024).unwrap().value).collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    let far = lambda1_interval(-12.0, 12.0, 2048).unwrap().value;
    assert!(far.abs() <= 1e-4, "{far}");
}

#[test]
fn mu1_decreasing_and_above_one() {
    let mut last = f64::INFINITY;
    for a in [0.25, 0.5, 1.0, 2.0, 3.0, 6.0] {
        let mu = mu1_interval(-a, a, 1024).unwrap().value;
        assert!(mu < last && mu - 1.0 >= -1e-9, "a = {a}: {mu}");
        last = mu;
    }
}

#[test]
fn shooting_matches_flux_form_on_twelve_cases() {
    for bc in [Bc::Neumann, Bc::Dirichlet] {
        for a in [0.5, 1.0, 2.0] {
            let hex = hexagon_top_half(a);
            let weights: [&dyn Weight; 2] = [&Unit, &hex];
            for w in weights {
                let fd = SLProblem::new(-a, a, bc, w, 2048).solve().unwrap();
                let p = fd.extrapolation.order.unwrap();
                assert!(p > 1.8 && p < 2.2, "{bc} a = {a}: order {p}");
                let br = (fd.value * (1.0 - 1e-4), fd.value * (1.0 + 1e-4));
                let sh = shooting_eigenvalue(-a, a, bc, w, br).unwrap();
                assert!(((sh - fd.value) / sh).abs() <= 1e-8, "{bc} a = {a}: shooting {sh} vs {}", fd.value);
            }
        }
    }
}

#[test]
fn first_neumann_mode_is_odd() {
    let mu = mu1_interval(-1.0, 1.0, 1024).unwrap().value;
    let mu = shooting_eigenvalue(-1.0, 1.0, Bc::Neumann, &Unit, (mu - 1e-6, mu + 1e-6)).unwrap();
    let pts: Vec<f64> = (0..=40).map(|i| -1.0 + i as f64 * 0.05).collect();
    let prof = shoot_profile(-1.0, 1.0, Bc::Neumann, &Unit, mu, &pts).unwrap();
    let big = prof.iter().fold(0.0f64, |m, v| m.max(v[0].abs()));
    assert!(prof[20][0].abs() / big < 1e-9, "{}", prof[20][0]);
}

#[test]
fn thin_hexagon_slices_respect_the_parent_bound() {
    let d = build_domain(&regular_hexagon(1.0)).unwrap();
    let bound = mu1_interval(-1.0, 1.0, 2048).unwrap().value;
    let s = slice_equal_gaussian(&d, 4).unwrap();
    for (k, strip) in s.strips.iter().enumerate() {
        let lam = weighted_mu1(-strip.a_k, strip.a_k, &strip.phi, 1024).unwrap();
        assert!(lam.value >= bound - 1e-6, "strip {k}: {} < {bound}", lam.value);
    }
}

#[test]
fn zero_mean_defects_vanish() {
    let d = build_domain(&regular_hexagon(1.0)).unwrap();
    let s = slice_equal_gaussian(&d, 2).unwrap();
    for strip in &s.strips {
        let p = SLProblem::new(-strip.a_k, strip.a_k, Bc::Neumann, &strip.phi, 512).eigenpair().unwrap();
        assert!(p.zero_mean_defect.unwrap() <= 1e-8);
    }
}

#[test]
fn transform_residual_on_hexagon_slices() {
    let d = build_domain(&regular_hexagon(1.0)).unwrap();
    for phi in [hexagon_top_half(1.0), slice_above(&d, 0.0, 1).unwrap().strips.remove(0).phi] {
        let r: Vec<f64> = [512, 1024, 2048]
            .iter()
            .map(|&n| {
                let p = SLProblem::new(-phi.a_k, phi.a_k, Bc::Neumann, &phi, n).eigenpair().unwrap();
                transform_check(&p, &phi).unwrap().residual
            })
            .collect();
        for w in r.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 1.8 && order < 2.2, "{r:?}");
        }
        assert!(r[2] <= 1e-3, "{r:?}");
    }
}

#[test]
#[ignore = "diagnostic: prints the transform residual on strips whose weight vanishes at the ends"]
fn transform_residual_with_vanishing_weight() {
    let d = build_domain(&regular_hexagon(1.0)).unwrap();
    let s = slice_equal_gaussian(&d, 2).unwrap();
    for strip in &s.strips {
        let r: Vec<f64> = [512, 1024, 2048]
            .iter()
            .map(|&n| {
                let p = SLProblem::new(-strip.a_k, strip.a_k, Bc::Neumann, &strip.phi, n).eigenpair().unwrap();
                transform_check(&p, &strip.phi).unwrap().residual
            })
            .collect();
        println!("d_k = {:.4}: {r:?}", strip.d_k);
    }
}

#[test]
fn flat_slice_has_no_weight_terms() {
    let d = build_domain(&hermite_gap::geometry::DomainSpec::Rectangle { a: 1.0, b: 1.0 }).unwrap();
    let s = slice_above(&d, 0.0, 2).unwrap();
    for strip in &s.strips {
        for i in 0..=20 {
            let x = -0.99 + 0.099 * i as f64;
            assert_eq!(strip.phi.d1(x), 0.0);
            assert_eq!(strip.phi.d2(x), 0.0);
        }
    }
}
