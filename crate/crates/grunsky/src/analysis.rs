//! Declarative problem specifications, the end-to-end analysis pipeline,
//! and structured reports.
//!
//! A problem names one coefficient source (explicit exterior coefficients,
//! a disk function to invert, or a Beltrami coefficient to solve) plus grid
//! and truncation parameters. The pipeline produces the norm sweep, the
//! root-transform sweep, the outer-limit norm, and the derived
//! quasiinvariants, serialized as a TOML report with stable field names.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beltrami::{
    make_teichmueller_mu, read_grid, solve_beltrami_with, BeltramiGrid, QuadDifferential,
    SolveOptions,
};
use crate::error::{Error, Result};
use crate::extremal::{outer_limit_norm, quasiinvariants, Quasiinvariants};
use crate::grunsky::{grunsky_norm, root_transform, CoeffSeries, NormEstimate};
use crate::poly::Poly;
use crate::schwarzian::{
    ahlfors_weill_mu, b_norm, critical_partial_fractions, harmonic_mu_from_rational, schwarzian,
    CriticalPoint, RationalMap, Side,
};

/// One coefficient source; exactly one variant is present in a spec file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    /// Exterior coefficients `b_0, b_1, ...` of `z + b_0 + b_1/z + ...`,
    /// taken as exact (zero tail).
    Coeffs { b: Vec<Complex64> },
    /// Disk coefficients `a_1, a_2, ...` of `a_1 z + a_2 z^2 + ...` with
    /// `a_1 = 1`, inverted to the exterior form.
    DiskFunction { a: Vec<Complex64> },
    /// Constant coefficient `t` on the unit disk.
    BeltramiConstant { t: Complex64 },
    /// Teichmueller form `k |psi|/psi` for a polynomial `psi` given by
    /// ascending coefficients.
    BeltramiTeichmueller { psi: Vec<Complex64>, k: f64 },
    /// Harmonic coefficient generated by a rational function with double
    /// poles on the unit circle, `sum c2/(z-a)^2 + c1/(z-a)`.
    BeltramiHarmonic { poles: Vec<HarmonicPole>, t: Complex64 },
    /// Harmonic extension coefficient of the map `num/den` (coefficients
    /// ascending), through its Schwarzian.
    BeltramiAhlforsWeill {
        num: Vec<Complex64>,
        den: Vec<Complex64>,
    },
    /// Grid file in the documented text format.
    BeltramiGridFile { path: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicPole {
    pub location: Complex64,
    pub c2: Complex64,
    pub c1: Complex64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Grid cells per side for Beltrami sources.
    pub grid_size: usize,
    /// Grunsky truncation size `N`.
    pub matrix_size: usize,
    /// Highest root order `P` in the sweeps.
    pub root_orders: usize,
    /// Truncation radii for the outer-limit norm.
    pub radius_grid: Vec<f64>,
    /// Solver sup-norm tolerance.
    pub solver_tol: f64,
    /// Optional solver iteration cap.
    pub max_iter: Option<usize>,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            grid_size: 512,
            matrix_size: 16,
            root_orders: 4,
            radius_grid: vec![0.90, 0.95, 0.99],
            solver_tol: 1e-10,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub source: Source,
    #[serde(default)]
    pub params: Params,
}

impl ProblemSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ProblemSpec =
            toml::from_str(text).map_err(|e| Error::Usage(format!("spec does not validate: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        if p.grid_size < 16 {
            return Err(Error::usage(format!("params.grid_size {} too small", p.grid_size)));
        }
        if p.matrix_size < 1 {
            return Err(Error::usage("params.matrix_size must be at least 1"));
        }
        if p.root_orders < 1 {
            return Err(Error::usage("params.root_orders must be at least 1"));
        }
        if p.radius_grid.is_empty() {
            return Err(Error::usage("params.radius_grid must not be empty"));
        }
        for &r in &p.radius_grid {
            if !(0.0 < r && r < 1.0) {
                return Err(Error::usage(format!("params.radius_grid entry {r} outside (0,1)")));
            }
        }
        if !(p.solver_tol > 0.0) {
            return Err(Error::usage("params.solver_tol must be positive"));
        }
        match &self.source {
            Source::Coeffs { b } => {
                if b.is_empty() {
                    return Err(Error::usage("source.b must contain at least b_0"));
                }
            }
            Source::DiskFunction { a } => {
                if a.is_empty() {
                    return Err(Error::usage("source.a must contain at least a_1"));
                }
                if (a[0] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                    return Err(Error::usage("source.a[0] must equal 1 (normalized map)"));
                }
            }
            Source::BeltramiConstant { t } => {
                if t.norm() >= 1.0 {
                    return Err(Error::usage(format!(
                        "source.t must have modulus < 1, got {}",
                        t.norm()
                    )));
                }
            }
            Source::BeltramiTeichmueller { psi, k } => {
                if psi.iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::usage("source.psi must not vanish identically"));
                }
                if !(0.0..1.0).contains(k) {
                    return Err(Error::usage(format!("source.k must lie in [0,1), got {k}")));
                }
            }
            Source::BeltramiHarmonic { poles, t } => {
                if poles.is_empty() {
                    return Err(Error::usage("source.poles must not be empty"));
                }
                if t.norm() >= 1.0 {
                    return Err(Error::usage(format!(
                        "source.t must have modulus < 1, got {}",
                        t.norm()
                    )));
                }
            }
            Source::BeltramiAhlforsWeill { num, den } => {
                if num.is_empty() || den.iter().all(|c| c.norm() == 0.0) {
                    return Err(Error::usage("source.num/den must describe a nonconstant map"));
                }
            }
            Source::BeltramiGridFile { path } => {
                if path.is_empty() {
                    return Err(Error::usage("source.path must not be empty"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaP {
    pub p: usize,
    pub matrix_size: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaHat {
    /// Lower estimate of the outer-limit norm. The finite radius grid caps
    /// it: a coefficient of dilatation `k` loses about `k (1 - r_max^2)`
    /// against the `r -> 1` limit, so chain comparisons need that slack.
    pub value: f64,
    /// `outer_limit` when a coefficient was available, `root_sweep` when
    /// only exterior coefficients were given.
    pub method: String,
    pub argmax_p: Option<usize>,
    pub argmax_r: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KBounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    pub solver_iterations: Option<usize>,
    pub solver_residual: Option<f64>,
    pub grid_size: Option<usize>,
    pub cell_size: Option<f64>,
    pub coefficient_sup: Option<f64>,
    pub matrix_size: usize,
    pub coeff_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub inputs: ProblemSpec,
    pub kappa: NormEstimate,
    pub kappa_p: Vec<KappaP>,
    pub kappa_hat: KappaHat,
    pub k_bounds: Option<KBounds>,
    pub quasiinvariants: Quasiinvariants,
    pub diagnostics: Diagnostics,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Format(format!("report serialization: {e}")))
    }

    /// Tab-separated truncation sweep, one `N sigma` row per size.
    pub fn convergence_table(&self) -> String {
        let mut out = String::from("N\tsigma_max\n");
        for &(n, s) in &self.kappa.per_size {
            out.push_str(&format!("{n}\t{s:.17e}\n"));
        }
        out
    }
}

/// Run the full pipeline for a validated problem spec.
pub fn run_analysis(spec: &ProblemSpec) -> Result<Report> {
    spec.validate()?;
    let p = &spec.params;
    let n = p.matrix_size;
    let needed = 2 * n - 1;

    let mut solver_iterations = None;
    let mut solver_residual = None;
    let mut grid_size = None;
    let mut cell_size = None;
    let mut coefficient_sup = None;

    let mu: Option<BeltramiGrid> = match &spec.source {
        Source::Coeffs { .. } | Source::DiskFunction { .. } => None,
        Source::BeltramiConstant { t } => Some(BeltramiGrid::constant(p.grid_size, *t)?),
        Source::BeltramiTeichmueller { psi, k } => {
            let q = QuadDifferential::polynomial(Poly::new(psi.clone()))?;
            Some(make_teichmueller_mu(&q, *k, p.grid_size)?)
        }
        Source::BeltramiHarmonic { poles, t } => {
            let r = rational_from_poles(poles)?;
            Some(harmonic_mu_from_rational(&r, *t, p.grid_size)?.mu)
        }
        Source::BeltramiAhlforsWeill { num, den } => {
            let map = RationalMap::new(Poly::new(num.clone()), Poly::new(den.clone()))?;
            let s = schwarzian(&map)?;
            Some(ahlfors_weill_mu(&s, p.grid_size)?)
        }
        Source::BeltramiGridFile { path } => Some(read_grid(std::path::Path::new(path))?),
    };

    let f: CoeffSeries = match (&spec.source, &mu) {
        (Source::Coeffs { b }, _) => CoeffSeries::new(b.clone()).padded(needed),
        (Source::DiskFunction { a }, _) => {
            // finite coefficient data is exact; extend with its zero tail
            let mut a = a.clone();
            if a.len() < needed + 2 {
                a.resize(needed + 2, Complex64::default());
            }
            crate::grunsky::disk_inversion(&a)?.padded(needed)
        }
        (_, Some(mu)) => {
            let opts = SolveOptions {
                tol: p.solver_tol,
                max_iter: p.max_iter,
                coeff_count: needed.max(33),
            };
            let (_, f, diag) = solve_beltrami_with(mu, &opts)?;
            solver_iterations = Some(diag.iterations);
            solver_residual = Some(diag.residual_sup);
            grid_size = Some(mu.size());
            cell_size = Some(mu.cell_size());
            coefficient_sup = Some(mu.k_sup());
            f
        }
        _ => unreachable!("beltrami sources always produce a coefficient"),
    };

    let kappa = grunsky_norm(&f, n)?;

    let mut kappa_p = vec![KappaP {
        p: 1,
        matrix_size: n,
        value: kappa.value,
    }];
    for order in 2..=p.root_orders {
        let fp = root_transform(&f, order)?;
        // the transform spreads matrix mass to indices ~order times higher
        let np = (order * n).min((fp.order() + 1) / 2);
        kappa_p.push(KappaP {
            p: order,
            matrix_size: np,
            value: grunsky_norm(&fp, np)?.value,
        });
    }

    let kappa_hat = match &mu {
        Some(mu) => {
            let out = outer_limit_norm(mu, p.root_orders, &p.radius_grid, n)?;
            KappaHat {
                value: out.value,
                method: "outer_limit".to_string(),
                argmax_p: Some(out.argmax_p),
                argmax_r: Some(out.argmax_r),
            }
        }
        None => {
            let best = kappa_p
                .iter()
                .max_by(|a, b| a.value.partial_cmp(&b.value).unwrap())
                .expect("sweep is non-empty");
            KappaHat {
                value: best.value,
                method: "root_sweep".to_string(),
                argmax_p: Some(best.p),
                argmax_r: None,
            }
        }
    };

    let k_bounds = mu.as_ref().map(|mu| KBounds {
        lower: kappa_hat.value,
        upper: mu.k_sup(),
    });

    let quasi = quasiinvariants(kappa_hat.value.min(1.0 - 1e-12))?;

    Ok(Report {
        inputs: spec.clone(),
        kappa,
        kappa_p,
        kappa_hat,
        k_bounds,
        quasiinvariants: quasi,
        diagnostics: Diagnostics {
            solver_iterations,
            solver_residual,
            grid_size,
            cell_size,
            coefficient_sup,
            matrix_size: n,
            coeff_count: f.order(),
        },
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp(),
        },
    })
}

fn rational_from_poles(poles: &[HarmonicPole]) -> Result<RationalMap> {
    // sum over poles of c2/(z-a)^2 + c1/(z-a), over the common denominator
    let mut den = Poly::one();
    for p in poles {
        let lin = Poly::new(vec![-p.location, Complex64::new(1.0, 0.0)]);
        den = den.mul(&lin).mul(&lin);
    }
    let mut num = Poly::zero();
    for p in poles {
        let lin = Poly::new(vec![-p.location, Complex64::new(1.0, 0.0)]);
        let mut rest = Poly::one();
        for q in poles {
            if !std::ptr::eq(p, q) {
                let l = Poly::new(vec![-q.location, Complex64::new(1.0, 0.0)]);
                rest = rest.mul(&l).mul(&l);
            }
        }
        num = num.add(&rest.scale(p.c2));
        num = num.add(&rest.mul(&lin).scale(p.c1));
    }
    RationalMap::new(num, den)
}

/// UTC timestamp, honoring `SOURCE_DATE_EPOCH` for reproducible output.
fn timestamp() -> String {
    let secs = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<i64>().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs() as i64)
                .unwrap_or(0)
        });
    format_utc(secs)
}

fn format_utc(secs: i64) -> String {
    let days = secs.div_euclid(86_400);
    let rem = secs.rem_euclid(86_400);
    let (h, m, s) = (rem / 3600, (rem % 3600) / 60, rem % 60);
    // civil-from-days (Gregorian), days since 1970-01-01
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let month = if mp < 10 { mp + 3 } else { mp - 9 };
    let year = if month <= 2 { y + 1 } else { y };
    format!("{year:04}-{month:02}-{d:02}T{h:02}:{m:02}:{s:02}Z")
}

/// Side-by-side comparison of polynomial quasiinvariant candidates: the
/// largest second-order pole coefficient of the Schwarzian, the Grunsky
/// norm of the exterior inversion, and the interior hyperbolic norm
/// (the polynomial acts on the disk, where its Schwarzian lives; the
/// exterior weight diverges for polynomial Schwarzians, which only decay
/// like `z^{-2}`). Reported without asserting any relation between them.
#[derive(Debug, Clone)]
pub struct PolynomialComparison {
    pub critical_points: Vec<CriticalPoint>,
    pub max_c2: f64,
    pub kappa: Option<NormEstimate>,
    pub b_norm_interior: f64,
    pub notes: Vec<String>,
}

pub fn polynomial_comparison(p: &Poly, n: usize) -> Result<PolynomialComparison> {
    if p.degree() < 1 || p.coeff(1).norm() < 1e-300 {
        return Err(Error::usage(
            "polynomial must be nonconstant with a nonzero linear coefficient",
        ));
    }
    let mut notes = Vec::new();
    // affine normalization (p - p(0))/p'(0) moves no critical point and
    // changes neither the Schwarzian nor the Grunsky norm
    let a1 = p.coeff(1);
    let normalized = if (a1 - Complex64::new(1.0, 0.0)).norm() > 1e-12 || p.coeff(0).norm() > 0.0 {
        notes.push("input normalized to p(0) = 0, p'(0) = 1".to_string());
        let shifted = p.sub(&Poly::constant(p.coeff(0)));
        shifted.scale(Complex64::new(1.0, 0.0) / a1)
    } else {
        p.clone()
    };

    let critical_points = if normalized.degree() >= 2 {
        critical_partial_fractions(&normalized)?
    } else {
        Vec::new()
    };
    for cp in &critical_points {
        if (cp.location.norm() - 1.0).abs() > 1e-6 {
            notes.push(format!(
                "critical point {} lies off the unit circle (hypothesis violated)",
                cp.location
            ));
        }
        if cp.location.norm() < 1.0 - 1e-9 {
            notes.push(format!(
                "critical point {} lies inside the disk; the map is not univalent there",
                cp.location
            ));
        }
    }
    let max_c2 = critical_points
        .iter()
        .map(|cp| cp.c2.abs())
        .fold(0.0, f64::max);

    let mut a = normalized.coeffs()[1..].to_vec();
    if a.len() < 2 * n + 1 {
        a.resize(2 * n + 1, Complex64::default());
    }
    let kappa = match crate::grunsky::disk_inversion(&a)
        .and_then(|f| grunsky_norm(&f.padded(2 * n - 1), n))
    {
        Ok(est) => Some(est),
        Err(e) => {
            notes.push(format!("Grunsky norm unavailable: {e}"));
            None
        }
    };

    let b_norm_interior = if normalized.degree() >= 2 {
        let s = schwarzian(&RationalMap::from_poly(normalized.clone()))?;
        b_norm(&s, Side::Interior, 64, 64)
    } else {
        0.0
    };

    Ok(PolynomialComparison {
        critical_points,
        max_c2,
        kappa,
        b_norm_interior,
        notes,
    })
}
