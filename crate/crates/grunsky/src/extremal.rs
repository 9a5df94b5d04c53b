//! Extremal functionals of Beltrami coefficients: the pairing supremum over
//! even-zero quadratic differentials, the induced Grunsky-norm curve along a
//! Teichmueller disk, the outer-limit norm over root orders and boundary
//! truncations, and the closed-form quasiinvariants it determines.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beltrami::{moment_matrix, root_transform_mu, truncate_mu, BeltramiGrid, Grid};
use crate::error::{Error, Result};
use crate::linalg::quadratic_form_norm;
use crate::par;

/// Pairing supremum `sup |<mu/|mu|_inf, psi>|` over unit-norm even-zero
/// differentials, computed as the form norm of the normalized moment matrix.
///
/// The value is attached to the supplied coefficient; whether that
/// coefficient is extremal in its equivalence class is the caller's claim.
pub fn alpha_functional(mu: &BeltramiGrid, n: usize) -> Result<f64> {
    let dir = mu.direction()?;
    quadratic_form_norm(&moment_matrix(&dir, n))
}

/// Grunsky norm along the disk `t -> f^{t mu_0}` for a direction with
/// pairing value `alpha`: `|t| (|t| + alpha) / (1 + alpha |t|)`.
pub fn grunsky_curve(alpha: f64, t: Complex64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&alpha) {
        return Err(Error::domain(format!("alpha must lie in [0,1], got {alpha}")));
    }
    let r = t.norm();
    if r >= 1.0 {
        return Err(Error::domain(format!("curve parameter needs |t| < 1, got {r}")));
    }
    Ok(r * (r + alpha) / (1.0 + alpha * r))
}

/// Argmax record of [`outer_limit_norm`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OuterLimit {
    pub value: f64,
    pub argmax_p: usize,
    pub argmax_r: f64,
}

/// Outer-limit norm: max over root orders `p = 1..=p_max` and truncation
/// radii of the pairing supremum of the transformed, truncated coefficient.
///
/// The supremum over the full equivalence class is not computable; this
/// evaluates the inner supremum for the one supplied representative. The
/// boundary limit is replaced by the supplied finite radius grid, and the
/// argmax is reported so the boundary behavior stays visible.
pub fn outer_limit_norm(
    mu: &BeltramiGrid,
    p_max: usize,
    r_grid: &[f64],
    n: usize,
) -> Result<OuterLimit> {
    if r_grid.is_empty() {
        return Err(Error::usage("radius grid must not be empty"));
    }
    if p_max < 1 {
        return Err(Error::usage("need at least root order p = 1"));
    }
    for &r in r_grid {
        if !(0.0 < r && r < 1.0) {
            return Err(Error::domain(format!("truncation radius {r} outside (0,1)")));
        }
    }
    let cases: Vec<(usize, f64)> = (1..=p_max)
        .flat_map(|p| r_grid.iter().map(move |&r| (p, r)))
        .collect();
    let evaluated = par::map_collect(cases.len(), |idx| -> Result<(f64, usize, f64)> {
        let (p, r) = cases[idx];
        let truncated = truncate_mu(mu, r)?;
        let transformed = if p == 1 {
            truncated
        } else {
            root_transform_mu(&truncated, p)?
        };
        let value = quadratic_form_norm(&moment_matrix(transformed.grid(), n))?;
        Ok((value, p, r))
    });
    let mut best: Option<(f64, usize, f64)> = None;
    for case in evaluated {
        let case = case?;
        if best.map_or(true, |b| case.0 > b.0) {
            best = Some(case);
        }
    }
    let (value, argmax_p, argmax_r) = best.expect("case list is non-empty");
    Ok(OuterLimit {
        value,
        argmax_p,
        argmax_r,
    })
}

/// Quasiinvariants determined by the outer-limit Grunsky norm through
/// closed formulas: reciprocal Fredholm eigenvalue, reflection coefficient,
/// hyperbolic Green value, and Teichmueller distance to the origin.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Quasiinvariants {
    pub kappa_hat: f64,
    pub fredholm_rho: f64,
    pub reflection_q: f64,
    pub green_value: f64,
    pub teich_distance: f64,
}

/// Evaluate the closed formulas at a given norm value in `[0, 1)`.
///
/// At `kappa_hat = 0` the eigenvalue and Green value degenerate; they are
/// reported as infinite sentinels.
pub fn quasiinvariants(kappa_hat: f64) -> Result<Quasiinvariants> {
    if !(0.0..1.0).contains(&kappa_hat) {
        return Err(Error::domain(format!(
            "norm value must lie in [0,1), got {kappa_hat}"
        )));
    }
    let big_k = ((1.0 + kappa_hat) / (1.0 - kappa_hat)).powi(2);
    Ok(Quasiinvariants {
        kappa_hat,
        fredholm_rho: if kappa_hat > 0.0 { 1.0 / kappa_hat } else { f64::INFINITY },
        reflection_q: (big_k - 1.0) / (big_k + 1.0),
        green_value: if kappa_hat > 0.0 { kappa_hat.ln() } else { f64::NEG_INFINITY },
        teich_distance: kappa_hat.atanh(),
    })
}

/// Reciprocal of the least positive Fredholm eigenvalue of the image curve
/// of the map with coefficient `t * direction`, via the norm curve: the
/// supremum over differentials is absorbed into the pairing value because
/// the curve is increasing in it.
pub fn fredholm_reciprocal(direction: &Grid, t: f64, n: usize) -> Result<f64> {
    let sup = direction.sup_norm();
    if (sup - 1.0).abs() > 1e-9 {
        return Err(Error::usage(format!(
            "direction must have sup norm 1, got {sup}"
        )));
    }
    if !(0.0..1.0).contains(&t) {
        return Err(Error::domain(format!("parameter t must lie in [0,1), got {t}")));
    }
    let alpha = quadratic_form_norm(&moment_matrix(direction, n))?.min(1.0);
    grunsky_curve(alpha, Complex64::new(t, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beltrami::{make_teichmueller_mu, QuadDifferential};
    use crate::poly::Poly;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn linear_direction(m: usize) -> BeltramiGrid {
        let psi = QuadDifferential::polynomial(Poly::from_real(&[0.0, 1.0])).unwrap();
        make_teichmueller_mu(&psi, 0.999_999, m).unwrap()
    }

    #[test]
    fn alpha_of_constant_coefficient_is_one() {
        let mu = BeltramiGrid::constant(256, c(0.4)).unwrap();
        let a = alpha_functional(&mu, 6).unwrap();
        assert!((a - 1.0).abs() < 2e-3, "alpha {a}");
    }

    #[test]
    fn alpha_of_linear_direction() {
        let mu = linear_direction(256);
        let a = alpha_functional(&mu, 6).unwrap();
        let expect = 2.0 * 2.0f64.sqrt() / 3.0;
        assert!((a - expect).abs() < 5e-3, "alpha {a} vs {expect}");
    }

    #[test]
    fn alpha_of_even_quadratic_direction_is_one() {
        let psi = QuadDifferential::polynomial(Poly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let mu = make_teichmueller_mu(&psi, 0.5, 256).unwrap();
        let a = alpha_functional(&mu, 6).unwrap();
        assert!((a - 1.0).abs() < 5e-3, "alpha {a}");
    }

    #[test]
    fn alpha_rejects_zero_coefficient() {
        let mu = BeltramiGrid::constant(32, c(0.0)).unwrap();
        assert!(matches!(alpha_functional(&mu, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn curve_values() {
        assert_eq!(grunsky_curve(1.0, c(0.37)).unwrap(), 0.37);
        assert_eq!(grunsky_curve(0.5, c(0.0)).unwrap(), 0.0);
        let alpha = 2.0 * 2.0f64.sqrt() / 3.0;
        let v = grunsky_curve(alpha, c(0.3)).unwrap();
        assert!((v - 0.290637).abs() < 1e-6, "curve {v}");
        assert!(matches!(grunsky_curve(0.5, c(1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn outer_limit_of_zero_is_zero() {
        let mu = BeltramiGrid::constant(64, c(0.0)).unwrap();
        let out = outer_limit_norm(&mu, 2, &[0.9], 4).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn outer_limit_of_constant_approaches_t_at_p1() {
        let t = 0.4;
        let mu = BeltramiGrid::constant(256, c(t)).unwrap();
        let out = outer_limit_norm(&mu, 1, &[0.8, 0.95, 0.999], 6).unwrap();
        // value r^2 t at radius r, so the top radius wins
        assert_eq!(out.argmax_r, 0.999);
        assert!((out.value - t).abs() < 5e-3, "value {}", out.value);
    }

    #[test]
    fn outer_limit_recovers_sup_norm_of_odd_direction_at_p2() {
        // direction conj(z)/|z| pairs below its sup at p = 1 but reaches it
        // at p = 2, where the transformed direction has an even-zero shape
        let k = 0.3;
        let psi = QuadDifferential::polynomial(Poly::from_real(&[0.0, 1.0])).unwrap();
        let mu = make_teichmueller_mu(&psi, k, 256).unwrap();
        let out = outer_limit_norm(&mu, 2, &[0.9, 0.99, 0.999], 8).unwrap();
        assert_eq!(out.argmax_p, 2);
        assert!((out.value - k).abs() < 5e-3, "value {}", out.value);

        let p1_only = outer_limit_norm(&mu, 1, &[0.9, 0.99, 0.999], 8).unwrap();
        assert!(p1_only.value < out.value);
    }

    #[test]
    fn outer_limit_monotone_in_p_and_radius() {
        let psi = QuadDifferential::polynomial(Poly::from_real(&[0.0, 1.0])).unwrap();
        let mu = make_teichmueller_mu(&psi, 0.3, 128).unwrap();
        let narrow = outer_limit_norm(&mu, 1, &[0.8], 6).unwrap();
        let wider_p = outer_limit_norm(&mu, 2, &[0.8], 6).unwrap();
        let wider_r = outer_limit_norm(&mu, 2, &[0.8, 0.95], 6).unwrap();
        assert!(wider_p.value >= narrow.value - 1e-12);
        assert!(wider_r.value >= wider_p.value - 1e-12);
    }

    #[test]
    fn outer_limit_rejects_empty_radius_grid() {
        let mu = BeltramiGrid::constant(32, c(0.2)).unwrap();
        assert!(matches!(
            outer_limit_norm(&mu, 2, &[], 4),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn quasiinvariant_algebra() {
        let q = quasiinvariants(1.0 / 3.0).unwrap();
        assert!((q.reflection_q - 0.6).abs() < 1e-15);

        let q = quasiinvariants(0.5).unwrap();
        assert!((q.fredholm_rho - 2.0).abs() < 1e-15);
        assert!((q.teich_distance - 0.5f64.atanh()).abs() < 1e-15);
        assert!((q.green_value - 0.5f64.ln()).abs() < 1e-15);

        let q0 = quasiinvariants(0.0).unwrap();
        assert!(q0.fredholm_rho.is_infinite());
        assert!(q0.green_value == f64::NEG_INFINITY);
        assert_eq!(q0.reflection_q, 0.0);

        assert!(matches!(quasiinvariants(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn ahlfors_inequality_holds_across_range() {
        for i in 1..=9 {
            let kh = i as f64 / 10.0;
            let q = quasiinvariants(kh).unwrap();
            assert!(
                1.0 / q.fredholm_rho <= q.reflection_q + 1e-14,
                "violated at {kh}"
            );
        }
    }

    #[test]
    fn fredholm_reciprocal_examples() {
        // ellipse case: constant direction, alpha = 1, reciprocal = t
        let dir = BeltramiGrid::constant(256, c(0.5)).unwrap().direction().unwrap();
        let v = fredholm_reciprocal(&dir, 0.4, 6).unwrap();
        assert!((v - 0.4).abs() < 5e-3, "value {v}");

        let dir = linear_direction(256).direction().unwrap();
        let v = fredholm_reciprocal(&dir, 0.3, 6).unwrap();
        assert!((v - 0.290637).abs() < 5e-3, "value {v}");

        let v0 = fredholm_reciprocal(&dir, 0.0, 6).unwrap();
        assert_eq!(v0, 0.0);
    }

    #[test]
    fn fredholm_reciprocal_requires_unit_direction() {
        let half = BeltramiGrid::constant(64, c(0.5)).unwrap();
        assert!(matches!(
            fredholm_reciprocal(half.grid(), 0.3, 4),
            Err(Error::Usage(_))
        ));
    }
}
