//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured slack (run with `-- --nocapture` to see them).

use std::time::Instant;

use grunsky::analysis::polynomial_comparison;
use grunsky::beltrami::{
    make_teichmueller_mu, solve_beltrami, solve_beltrami_with, BeltramiGrid, QuadDifferential,
    SolveOptions,
};
use grunsky::beltrami::{moment_matrix, Grid};
use grunsky::domains::{domain_basis, DomainKind, QuadResolution};
use grunsky::extremal::{grunsky_curve, outer_limit_norm, quasiinvariants};
use grunsky::grunsky::{disk_inversion, grunsky_matrix, grunsky_norm, CoeffSeries};
use grunsky::poly::Poly;
use grunsky::schwarzian::{ahlfors_weill_mu, schwarzian, RationalMap};
use grunsky::series::TruncSeries;
use grunsky::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn criterion_01_exact_diagonal_family() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 1..=9 {
        let t = i as f64 / 10.0;
        let f = CoeffSeries::new(vec![c(0.0), c(t)]).padded(15);
        let est = grunsky_norm(&f, 8).unwrap();
        worst = worst.max((est.value - t).abs());
    }
    let elapsed = start.elapsed();
    assert!(worst <= 1e-12, "max deviation {worst:.3e}");
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("acceptance 1: diagonal family norm exact: PASS (dev {worst:.2e}, {elapsed:?})");
}

#[test]
fn criterion_02_even_odd_root_dichotomy() {
    let t = 0.5f64;
    let n = 24;
    // even case: disk coefficients of z/(1 + t z^2)
    let mut even = vec![Complex64::default(); 2 * n + 1];
    for j in 0..=(n - 1) {
        if 2 * j + 1 <= 2 * n {
            even[2 * j] = c((-t).powi(j as i32)); // coefficient of z^{2j+1}
        }
    }
    let f_even = disk_inversion(&even).unwrap().padded(2 * n - 1);
    let kappa_even = grunsky_norm(&f_even, n).unwrap().value;
    assert!(
        (kappa_even - t).abs() <= 1e-10,
        "even case: {kappa_even} vs {t}"
    );

    // odd case: disk coefficients of z (1 + t z^3)^{-2/3}
    let series = {
        let mut coeffs = vec![0.0; 2 * n + 1];
        coeffs[0] = 1.0;
        coeffs[3] = t;
        TruncSeries::from_real(&coeffs).pow_rational(-2, 3).unwrap()
    };
    let odd: Vec<Complex64> = (0..=2 * n).map(|k| series.coeff(k)).collect();
    let f_odd = disk_inversion(&odd).unwrap().padded(2 * n - 1);
    let kappa_odd = grunsky_norm(&f_odd, n).unwrap().value;
    assert!(
        kappa_odd < t - 1e-3,
        "odd case: {kappa_odd} not below {t} - 1e-3"
    );
    println!(
        "acceptance 2: even/odd root dichotomy: PASS (even {kappa_even:.12}, odd {kappa_odd:.6})"
    );
}

#[test]
fn criterion_03_constant_coefficient_solver() {
    let start = Instant::now();
    let mut details = Vec::new();
    for &t in &[0.2, 0.4, 0.6] {
        let mu = BeltramiGrid::constant(512, c(t)).unwrap();
        let (_, f, _) = solve_beltrami(&mu, 1e-10, None).unwrap();
        let b1_dev = (f.b(1) - c(t)).norm();
        let tail: f64 = (2..=16).map(|k| f.b(k).norm()).sum();
        assert!(b1_dev <= 2e-3, "t = {t}: b_1 deviates by {b1_dev:.3e}");
        assert!(tail < 1e-2, "t = {t}: tail {tail:.3e}");
        details.push(format!("t={t}: db1 {b1_dev:.1e} tail {tail:.1e}"));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "acceptance 3: constant-coefficient solver oracle: PASS ({}; {elapsed:?})",
        details.join(", ")
    );
}

#[test]
fn criterion_04_norm_curve_for_linear_differential() {
    let alpha = 2.0 * 2.0f64.sqrt() / 3.0;
    let mut results = Vec::new();
    for &t in &[0.1, 0.2, 0.3] {
        let mu = BeltramiGrid::from_fn(512, |z| z.conj() / z.norm() * t).unwrap();
        let (_, f, _) = solve_beltrami(&mu, 1e-10, None).unwrap();
        let kappa = grunsky_norm(&f, 16).unwrap().value;
        let target = grunsky_curve(alpha, c(t)).unwrap();
        results.push((t, kappa, target, (kappa - target).abs()));
    }
    for &(t, kappa, target, dev) in &results {
        let status = if dev < 5e-3 { "within" } else { "OUTSIDE" };
        println!(
            "acceptance 4: t = {t}: solver {kappa:.6} vs curve {target:.6} (dev {dev:.2e}, {status} 5e-3)"
        );
    }
    // The curve is a Schwarz-Pick upper bound on the norm along the disk
    // t -> f^{t mu_0}. For this odd-zero direction the computed norm has no
    // quadratic term: the exterior coefficients of the solution are
    // b_2 = 2t/3, b_5 = -t^2/9, b_8 = 4t^3/81 (closed-form series, matched
    // by the solver to 5 digits), and the induced matrix entries at order
    // t^2 do not couple to the top singular pair, which lives on indices
    // {1,2}. The measured norm is alpha t + O(t^3), so the curve's
    // quadratic excess (1 - alpha^2) t^2 = t^2/9 pushes the t = 0.3 case
    // beyond the stated tolerance for any faithful implementation.
    for &(t, kappa, target, dev) in &results {
        assert!(
            dev < 5e-3,
            "t = {t}: solver {kappa:.6} vs curve {target:.6}: the curve bound is not \
             attained at second order (measured gap {dev:.2e} vs tolerance 5e-3)"
        );
    }
    println!("acceptance 4: norm curve for the linear differential: PASS");
}

#[test]
fn criterion_05_even_zero_differentials_attain_k() {
    let k = 0.3;
    let cases: [(&str, Poly); 3] = [
        ("1", Poly::from_real(&[1.0])),
        ("z^2", Poly::from_real(&[0.0, 0.0, 1.0])),
        (
            "(z^2-1/4)^2",
            Poly::from_real(&[1.0 / 16.0, 0.0, -0.5, 0.0, 1.0]),
        ),
    ];
    let mut details = Vec::new();
    for (name, poly) in cases {
        let psi = QuadDifferential::polynomial(poly).unwrap();
        assert!(psi.in_even_class(), "{name} should be in the even class");
        let mu = make_teichmueller_mu(&psi, k, 512).unwrap();
        let (_, f, _) = solve_beltrami(&mu, 1e-10, None).unwrap();
        let kappa = grunsky_norm(&f, 16).unwrap().value;
        let dev = (kappa - k).abs();
        assert!(dev <= 5e-3, "psi = {name}: norm {kappa} vs k = {k}");
        details.push(format!("psi={name}: dev {dev:.1e}"));
    }
    println!(
        "acceptance 5: even-zero differentials attain k: PASS ({})",
        details.join(", ")
    );
}

#[test]
fn criterion_06_kuehnau_inequality_on_random_smooth_coefficients() {
    let k = 0.5;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        // random smooth field: low-order trigonometric polynomial times a
        // boundary-vanishing bump, rescaled to sup exactly k
        let a: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let raw = Grid::from_fn(192, |z| {
            let bump = 1.0 - z.norm_sqr();
            Complex64::new(
                bump * (a[0] + a[1] * (2.0 * z.re).cos() + a[2] * (3.0 * z.im).sin()),
                bump * (a[3] + a[4] * (2.0 * z.im).cos() + a[5] * (a[6] + 2.0 * z.re).sin()),
            ) * (1.0 + a[7] * z.re)
        });
        let sup = raw.sup_norm();
        let mu = BeltramiGrid::new(raw.scaled(c(k / sup))).unwrap();
        let (_, f, _) = solve_beltrami(&mu, 1e-8, None).unwrap();
        let kappa = grunsky_norm(&f, 12).unwrap().value;
        worst = worst.max(kappa - k);
        assert!(kappa <= k + 5e-3, "norm {kappa} above k = {k}");
    }
    println!(
        "acceptance 6: Kuehnau inequality on 50 random coefficients: PASS (max excess {worst:.2e})"
    );
}

#[test]
fn criterion_07_outer_limit_recovery() {
    let k = 0.3;
    let mu = BeltramiGrid::from_fn(512, |z| z.conj() / z.norm() * k).unwrap();
    let out = outer_limit_norm(&mu, 2, &[0.9, 0.99, 0.9995], 16).unwrap();
    assert!(
        (out.value - k).abs() <= 5e-3,
        "outer limit {} vs {k}",
        out.value
    );
    let (_, f, _) = solve_beltrami(&mu, 1e-10, None).unwrap();
    let kappa = grunsky_norm(&f, 16).unwrap().value;
    assert!(kappa <= 0.295, "norm {kappa} not below 0.295");
    assert!(kappa <= out.value + 5e-3, "chain lower link violated");
    assert!(out.value <= mu.k_sup() + 5e-3, "chain upper link violated");
    println!(
        "acceptance 7: outer-limit recovery: PASS (outer {:.6} at p={} r={}, kappa {kappa:.6})",
        out.value, out.argmax_p, out.argmax_r
    );
}

#[test]
fn criterion_08_first_order_variation() {
    let n = 6;
    let ts = [0.01, 0.02, 0.04];
    let mut worst_ratio = 1.0f64;
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let a: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let raw = Grid::from_fn(256, |z| {
            let bump = 1.0 - z.norm_sqr();
            Complex64::new(
                bump * (a[0] + a[1] * (2.0 * z.re).cos()),
                bump * (a[2] + a[3] * (a[4] + 3.0 * z.im).sin()) * (1.0 + a[5] * z.im),
            )
        });
        let mu = BeltramiGrid::new(raw.scaled(c(0.8 / raw.sup_norm()))).unwrap();
        let a_matrix = moment_matrix(mu.grid(), n);
        let mut constants = Vec::new();
        for &t in &ts {
            let scaled = BeltramiGrid::new(mu.grid().scaled(c(t))).unwrap();
            let (_, f, _) = solve_beltrami(&scaled, 1e-12, None).unwrap();
            let g = grunsky_matrix(&f, n).unwrap();
            let mut err = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    err = err.max((g.matrix()[(i, j)] - a_matrix[(i, j)] * t).norm());
                }
            }
            constants.push(err / (t * t));
        }
        let cmax = constants.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let cmin = constants.iter().cloned().fold(f64::INFINITY, f64::min);
        let ratio = if cmin > 1e-12 { cmax / cmin } else { 1.0 };
        worst_ratio = worst_ratio.max(ratio);
        assert!(
            ratio < 4.0,
            "seed {seed}: Richardson constants unstable: {constants:?}"
        );
        assert!(cmax < 20.0, "seed {seed}: constant blew up: {constants:?}");
    }
    println!(
        "acceptance 8: first-order variation gradient check: PASS (worst constant ratio {worst_ratio:.2})"
    );
}

#[test]
fn criterion_09_quasiinvariant_algebra() {
    let q = quasiinvariants(1.0 / 3.0).unwrap();
    assert!(
        (q.reflection_q - 0.6).abs() < 1e-15,
        "reflection {}",
        q.reflection_q
    );
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=9 {
        let q = quasiinvariants(i as f64 / 10.0).unwrap();
        worst = worst.max(1.0 / q.fredholm_rho - q.reflection_q);
        assert!(1.0 / q.fredholm_rho <= q.reflection_q + 1e-14);
    }
    println!("acceptance 9: quasiinvariant algebra: PASS (max 1/rho - q = {worst:.2e})");
}

#[test]
fn criterion_10_ellipse_basis_gram_identity() {
    let basis = domain_basis(
        DomainKind::Ellipse { a: 1.25, b: 0.75 },
        8,
        QuadResolution::default(),
    )
    .unwrap();
    assert!(
        basis.gram_deviation <= 1e-6,
        "Gram deviation {:.3e}",
        basis.gram_deviation
    );
    println!(
        "acceptance 10: ellipse basis Gram identity: PASS (deviation {:.2e})",
        basis.gram_deviation
    );
}

#[test]
fn criterion_11_harmonic_extension_round_trip() {
    let t = 0.1;
    let map = RationalMap::new(Poly::from_real(&[t, 0.0, 1.0]), Poly::from_real(&[0.0, 1.0]))
        .unwrap();
    let s = schwarzian(&map).unwrap();
    let mu = ahlfors_weill_mu(&s, 512).unwrap();
    let opts = SolveOptions {
        tol: 1e-10,
        max_iter: None,
        coeff_count: 16,
    };
    let (_, f, _) = solve_beltrami_with(&mu, &opts).unwrap();
    let dev = (f.b(1) - c(t)).norm();
    assert!(dev <= 5e-3, "b_1 = {} vs {t}", f.b(1));
    println!("acceptance 11: harmonic extension round trip: PASS (b_1 dev {dev:.2e})");
}

#[test]
fn criterion_12_polynomial_comparison_table() {
    let p = Poly::from_real(&[0.0, 1.0, 0.0, -1.0 / 3.0]);
    let cmp = polynomial_comparison(&p, 16).unwrap();
    assert!(
        (cmp.max_c2 - 1.5).abs() <= 1e-9,
        "max |c_j| = {}",
        cmp.max_c2
    );
    let kappa = cmp.kappa.as_ref().expect("norm column present");
    assert!(cmp.b_norm_interior > 0.0, "hyperbolic norm column present");
    // the three columns are reported side by side; no relation is asserted
    println!(
        "acceptance 12: polynomial comparison table: PASS (max|c| {:.9}, kappa {:.6}, b-norm {:.4})",
        cmp.max_c2, kappa.value, cmp.b_norm_interior
    );
}
