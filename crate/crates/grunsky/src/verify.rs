//! Runtime property suites. Each suite re-derives a set of identities and
//! inequalities at desk scale and reports the measured slack against its
//! bound; suites are deterministic for a fixed seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::beltrami::{
    beurling_transform, make_teichmueller_mu, moment_matrix, solve_beltrami, BeltramiGrid, Grid,
    QuadDifferential,
};
use crate::domains::{domain_basis, polygon_bound, DomainKind, QuadResolution};
use crate::error::Result;
use crate::extremal::{alpha_functional, grunsky_curve, outer_limit_norm, quasiinvariants};
use crate::grunsky::{grunsky_matrix, grunsky_norm, homotopy, CoeffSeries};
use crate::poly::Poly;
use crate::schwarzian::{
    ahlfors_weill_mu, b_norm, critical_partial_fractions, mobius_compose, schwarzian, RationalMap,
    Side,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Grunsky,
    Beltrami,
    Extremal,
    Schwarzian,
    Domains,
    Chain,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "grunsky" => Some(Suite::Grunsky),
            "beltrami" => Some(Suite::Beltrami),
            "extremal" => Some(Suite::Extremal),
            "schwarzian" => Some(Suite::Schwarzian),
            "domains" => Some(Suite::Domains),
            "chain" => Some(Suite::Chain),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Grunsky => "grunsky",
            Suite::Beltrami => "beltrami",
            Suite::Extremal => "extremal",
            Suite::Schwarzian => "schwarzian",
            Suite::Domains => "domains",
            Suite::Chain => "chain",
        }
    }

    pub fn all() -> [Suite; 6] {
        [
            Suite::Grunsky,
            Suite::Beltrami,
            Suite::Extremal,
            Suite::Schwarzian,
            Suite::Domains,
            Suite::Chain,
        ]
    }
}

/// One property with its measured slack; `measured <= bound` passes.
#[derive(Debug, Clone)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub measured: f64,
    pub bound: f64,
}

impl PropertyCheck {
    pub fn pass(&self) -> bool {
        self.measured <= self.bound
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<PropertyCheck>> {
    match suite {
        Suite::Grunsky => grunsky_suite(seed),
        Suite::Beltrami => beltrami_suite(seed),
        Suite::Extremal => extremal_suite(seed),
        Suite::Schwarzian => schwarzian_suite(seed),
        Suite::Domains => domains_suite(seed),
        Suite::Chain => chain_suite(seed),
    }
}

fn random_coeffs(rng: &mut ChaCha8Rng, order: usize, scale: f64) -> CoeffSeries {
    CoeffSeries::new(
        (0..=order)
            .map(|k| {
                let s = scale / (1 + k * k) as f64;
                Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s))
            })
            .collect(),
    )
}

fn grunsky_suite(seed: u64) -> Result<Vec<PropertyCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let n = 8;
    let f = random_coeffs(&mut rng, 2 * n - 1, 0.3);
    let g = grunsky_matrix(&f, n)?;

    let mut asym = 0.0f64;
    let mut row1 = 0.0f64;
    for m in 1..=n {
        for k in 1..=n {
            asym = asym.max((g.entry(m, k) - g.entry(k, m)).norm());
        }
        row1 = row1.max((g.entry(m, 1) - f.b(m) * (m as f64).sqrt()).norm());
    }
    checks.push(PropertyCheck {
        name: "matrix symmetry",
        measured: asym,
        bound: 1e-12,
    });
    checks.push(PropertyCheck {
        name: "first-column identity sqrt(m) b_m",
        measured: row1,
        bound: 1e-12,
    });

    let mut shifted = f.coeffs().to_vec();
    shifted[0] += Complex64::new(0.7, -0.3);
    let g2 = grunsky_matrix(&CoeffSeries::new(shifted), n)?;
    let b0_dev = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (g.matrix()[(i, j)] - g2.matrix()[(i, j)]).norm())
        .fold(0.0, f64::max);
    checks.push(PropertyCheck {
        name: "independence of the constant coefficient",
        measured: b0_dev,
        bound: 1e-12,
    });

    let rotated = homotopy(&f, Complex64::from_polar(1.0, rng.gen_range(0.0..6.28)))?;
    let norm_dev =
        (grunsky_norm(&f, n)?.value - grunsky_norm(&rotated, n)?.value).abs();
    checks.push(PropertyCheck {
        name: "rotation invariance of the norm",
        measured: norm_dev,
        bound: 1e-11,
    });

    let est = grunsky_norm(&f, n)?;
    let monotone_violation = est
        .per_size
        .windows(2)
        .map(|w| (w[0].1 - w[1].1).max(0.0))
        .fold(0.0, f64::max);
    checks.push(PropertyCheck {
        name: "truncation sweep monotone",
        measured: monotone_violation,
        bound: 1e-12,
    });

    let t = 0.1 + 0.8 * rng.gen::<f64>();
    let one_pole = CoeffSeries::new(vec![Complex64::default(), Complex64::new(t, 0.0)]).padded(15);
    checks.push(PropertyCheck {
        name: "one-pole family norm equals t",
        measured: (grunsky_norm(&one_pole, 8)?.value - t).abs(),
        bound: 1e-12,
    });
    Ok(checks)
}

fn beltrami_suite(seed: u64) -> Result<Vec<PropertyCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let m = 256;

    let t = 0.2 + 0.4 * rng.gen::<f64>();
    let mu = BeltramiGrid::constant(m, Complex64::new(t, 0.0))?;
    let (_, f, diag) = solve_beltrami(&mu, 1e-10, None)?;
    checks.push(PropertyCheck {
        name: "constant coefficient: b_1 recovers t",
        measured: (f.b(1) - Complex64::new(t, 0.0)).norm(),
        bound: 2e-3,
    });
    checks.push(PropertyCheck {
        name: "constant coefficient: higher moments vanish",
        measured: (2..=16).map(|k| f.b(k).norm()).sum::<f64>(),
        bound: 1e-2,
    });
    let hist = &diag.residual_history;
    let geo = if hist.len() >= 4 {
        (hist[hist.len() - 1] / hist[1]).powf(1.0 / (hist.len() - 2) as f64)
    } else {
        0.0
    };
    checks.push(PropertyCheck {
        name: "geometric contraction rate <= k (1 + eps)",
        measured: geo,
        bound: mu.k_sup() * 1.05 + 1e-6,
    });

    let chi = Grid::from_fn(m, |_| Complex64::new(1.0, 0.0));
    let pi = beurling_transform(&chi);
    let h = chi.cell_size();
    let mut interior = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            if chi.center(i, j).norm() < 0.7 {
                interior = interior.max(pi.samples()[i * m + j].norm());
            }
        }
    }
    checks.push(PropertyCheck {
        name: "transform of the disk indicator vanishes inside",
        measured: interior,
        bound: 12.0 * h,
    });

    // first-order variation: G(f^{t mu}) = t A(mu) + O(t^2)
    let smooth = BeltramiGrid::from_fn(m, |z| {
        Complex64::new(
            0.7 * (1.0 - z.norm_sqr()) * (2.0 * z.re + rng_stable(seed)).cos(),
            0.5 * (1.0 - z.norm_sqr()) * (3.0 * z.im).sin(),
        )
    })?;
    let a = moment_matrix(smooth.grid(), 6);
    let mut constants = Vec::new();
    for &tv in &[0.01, 0.02] {
        let scaled = BeltramiGrid::new(smooth.grid().scaled(Complex64::new(tv, 0.0)))?;
        let (_, ft, _) = solve_beltrami(&scaled, 1e-12, None)?;
        let gm = grunsky_matrix(&ft, 6)?;
        let mut err = 0.0f64;
        for i in 0..6 {
            for j in 0..6 {
                err = err.max((gm.matrix()[(i, j)] - a[(i, j)] * tv).norm());
            }
        }
        constants.push(err / (tv * tv));
    }
    checks.push(PropertyCheck {
        name: "first-order variation Richardson stability",
        measured: (constants[0] / constants[1]).max(constants[1] / constants[0]),
        bound: 4.0,
    });

    let dir = Grid::from_fn(m, |z| z.conj() / z.norm());
    let am = moment_matrix(&dir, 3);
    let expect = 2.0 * 2.0f64.sqrt() / 3.0;
    checks.push(PropertyCheck {
        name: "moment oracle for the linear direction",
        measured: (am[(0, 1)] - Complex64::new(expect, 0.0)).norm(),
        bound: 5e-3,
    });
    Ok(checks)
}

fn rng_stable(seed: u64) -> f64 {
    // small deterministic phase so distinct seeds vary the smooth field
    (seed % 7) as f64 * 0.1
}

fn extremal_suite(seed: u64) -> Result<Vec<PropertyCheck>> {
    let _ = seed;
    let mut checks = Vec::new();
    let m = 256;

    let mu = BeltramiGrid::constant(m, Complex64::new(0.4, 0.0))?;
    checks.push(PropertyCheck {
        name: "pairing value of the constant direction",
        measured: (alpha_functional(&mu, 6)? - 1.0).abs(),
        bound: 2e-3,
    });

    let psi = QuadDifferential::polynomial(Poly::from_real(&[0.0, 1.0]))?;
    let lin = make_teichmueller_mu(&psi, 0.5, m)?;
    checks.push(PropertyCheck {
        name: "pairing value of the linear direction",
        measured: (alpha_functional(&lin, 6)? - 2.0 * 2.0f64.sqrt() / 3.0).abs(),
        bound: 5e-3,
    });

    let q = quasiinvariants(1.0 / 3.0)?;
    checks.push(PropertyCheck {
        name: "reflection coefficient at one third",
        measured: (q.reflection_q - 0.6).abs(),
        bound: 1e-14,
    });

    let mut worst = 0.0f64;
    for i in 1..=9 {
        let q = quasiinvariants(i as f64 / 10.0)?;
        worst = worst.max(1.0 / q.fredholm_rho - q.reflection_q);
    }
    checks.push(PropertyCheck {
        name: "eigenvalue reciprocal below reflection coefficient",
        measured: worst,
        bound: 1e-14,
    });

    // sandwich for an even-zero direction at k = 0.3
    let psi2 = QuadDifferential::polynomial(Poly::from_real(&[0.0, 0.0, 1.0]))?;
    let mu2 = make_teichmueller_mu(&psi2, 0.3, m)?;
    let (_, f2, _) = solve_beltrami(&mu2, 1e-9, None)?;
    let kappa = grunsky_norm(&f2, 10)?.value;
    let khat = outer_limit_norm(&mu2, 2, &[0.9, 0.99, 0.999], 10)?.value;
    checks.push(PropertyCheck {
        name: "sandwich: kappa <= outer limit",
        measured: kappa - khat,
        bound: 5e-3,
    });
    checks.push(PropertyCheck {
        name: "sandwich: outer limit <= dilatation",
        measured: khat - mu2.k_sup(),
        bound: 5e-3,
    });
    Ok(checks)
}

fn schwarzian_suite(seed: u64) -> Result<Vec<PropertyCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let g = RationalMap::new(Poly::from_real(&[0.25, 0.0, 1.0]), Poly::from_real(&[0.0, 1.0]))?;
    let s_g = schwarzian(&g)?;
    let m_of_g = mobius_compose(
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(3.0, 0.0),
        &g,
    )?;
    let s_mg = schwarzian(&m_of_g)?;
    let mut dev = 0.0f64;
    for k in 0..=s_g.map().num().degree().max(s_mg.map().num().degree()) {
        dev = dev.max((s_g.map().num().coeff(k) - s_mg.map().num().coeff(k)).norm());
    }
    for k in 0..=s_g.map().den().degree().max(s_mg.map().den().degree()) {
        dev = dev.max((s_g.map().den().coeff(k) - s_mg.map().den().coeff(k)).norm());
    }
    checks.push(PropertyCheck {
        name: "Moebius invariance (reduced rational forms)",
        measured: dev,
        bound: 1e-9,
    });

    // closed-form pole coefficients against ring residues
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let deg = rng.gen_range(3..=6);
        let p = Poly::new(
            (0..=deg)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        );
        if p.degree() < 2 {
            continue;
        }
        let s = schwarzian(&RationalMap::from_poly(p.clone()))?;
        for cp in critical_partial_fractions(&p)? {
            if cp.multiplicity != 1 {
                continue;
            }
            if let Some(pole) = s.poles().iter().min_by(|a, b| {
                (a.location - cp.location)
                    .norm()
                    .partial_cmp(&(b.location - cp.location).norm())
                    .unwrap()
            }) {
                worst = worst.max((pole.c2 - Complex64::new(cp.c2, 0.0)).norm());
            }
        }
    }
    checks.push(PropertyCheck {
        name: "pole coefficients match ring residues",
        measured: worst,
        bound: 1e-8,
    });

    let t = 0.1;
    let s = schwarzian(&RationalMap::new(
        Poly::from_real(&[t, 0.0, 1.0]),
        Poly::from_real(&[0.0, 1.0]),
    )?)?;
    let bn = b_norm(&s, Side::Exterior, 64, 64);
    checks.push(PropertyCheck {
        name: "hyperbolic norm below six times the dilatation",
        measured: bn - 6.0 * t,
        bound: 1e-12,
    });

    let mu = ahlfors_weill_mu(&s, 128)?;
    checks.push(PropertyCheck {
        name: "harmonic extension center value 3t",
        measured: (mu.grid().value_at(Complex64::new(0.004, 0.002)) - Complex64::new(3.0 * t, 0.0))
            .norm(),
        bound: 2e-3,
    });
    Ok(checks)
}

fn domains_suite(seed: u64) -> Result<Vec<PropertyCheck>> {
    let _ = seed;
    let mut checks = Vec::new();
    let basis = domain_basis(
        DomainKind::Ellipse { a: 1.25, b: 0.75 },
        8,
        QuadResolution::default(),
    )?;
    checks.push(PropertyCheck {
        name: "ellipse Gram identity",
        measured: basis.gram_deviation,
        bound: 1e-6,
    });

    let lem = domain_basis(DomainKind::Lemniscate, 4, QuadResolution::default())?;
    checks.push(PropertyCheck {
        name: "lemniscate Gram identity",
        measured: lem.gram_deviation,
        bound: 1e-6,
    });

    let disk = domain_basis(
        DomainKind::Starlike { h: Poly::var() },
        6,
        QuadResolution::default(),
    )?;
    checks.push(PropertyCheck {
        name: "disk basis Gram identity",
        measured: disk.gram_deviation,
        bound: 1e-10,
    });

    let b = polygon_bound(&[0.5, 0.5], 0.9)?;
    checks.push(PropertyCheck {
        name: "polygon bound at right angles",
        measured: (b.value - 0.5).abs(),
        bound: 1e-15,
    });
    let smooth = polygon_bound(&[], -0.4)?;
    checks.push(PropertyCheck {
        name: "smooth convex case equals 1 - |alpha|",
        measured: (smooth.value - 0.6).abs(),
        bound: 1e-15,
    });
    Ok(checks)
}

fn chain_suite(seed: u64) -> Result<Vec<PropertyCheck>> {
    let _ = seed;
    // norm-curve comparison end to end for three differentials; the curve
    // is exact for even-zero directions and an upper bound attained only to
    // first order for the linear one, so the parameter stays where the
    // bound is tight enough for a 5e-3 comparison
    let m = 512;
    let n = 16;
    let t = 0.2;
    let mut checks = Vec::new();
    let cases: [(&'static str, Poly); 3] = [
        ("constant differential", Poly::from_real(&[1.0])),
        ("linear differential", Poly::from_real(&[0.0, 1.0])),
        ("quadratic differential", Poly::from_real(&[0.0, 0.0, 1.0])),
    ];
    for (name, poly) in cases {
        let psi = QuadDifferential::polynomial(poly)?;
        let direction = make_teichmueller_mu(&psi, 0.999_999, m)?;
        let alpha = alpha_functional(&direction, n)?.min(1.0);
        let mu = BeltramiGrid::new(direction.grid().scaled(Complex64::new(t, 0.0)))?;
        let (_, f, _) = solve_beltrami(&mu, 1e-10, None)?;
        let kappa = grunsky_norm(&f, n)?.value;
        let curve = grunsky_curve(alpha, Complex64::new(t, 0.0))?;
        checks.push(PropertyCheck {
            name: match name {
                "constant differential" => "norm curve vs solver: constant differential",
                "linear differential" => "norm curve vs solver: linear differential",
                _ => "norm curve vs solver: quadratic differential",
            },
            measured: (kappa - curve).abs(),
            bound: 5e-3,
        });
    }
    Ok(checks)
}
