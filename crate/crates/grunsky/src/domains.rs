//! Orthonormal polynomial bases of Bergman spaces on special quasidisks,
//! and the closed-form lower bound for curvilinear polygons.
//!
//! Each basis is validated by its Gram matrix under a parametric-cover
//! quadrature; the normalizing constants are calibrated from the quadrature
//! itself, which is the defining property.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::poly::Poly;
use crate::quadrature::{gauss_legendre, rescale};

/// Gram deviation above which construction is rejected.
pub const GRAM_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone)]
pub enum DomainKind {
    /// Ellipse with foci at -1 and 1 and semiaxes `a > b` (`a^2 - b^2 = 1`).
    Ellipse { a: f64, b: f64 },
    /// Right lobe of the lemniscate `|z^2 - 1| = 1`.
    Lemniscate,
    /// Starlike domain `|h(z)| < 1` for a polynomial `h` with `h(0) = 0`,
    /// univalent onto the disk (caller-asserted).
    Starlike { h: Poly },
}

/// Quadrature resolution of the parametric cover.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadResolution {
    pub radial: usize,
    pub angular: usize,
}

impl Default for QuadResolution {
    fn default() -> Self {
        QuadResolution {
            radial: 64,
            angular: 256,
        }
    }
}

/// Orthonormal basis `P_0 .. P_n` with its Gram diagnostic.
#[derive(Debug, Clone)]
pub struct DomainBasis {
    pub kind: DomainKind,
    pub polynomials: Vec<Poly>,
    /// Gram matrix of the returned basis under the cover quadrature.
    pub gram: DMatrix<Complex64>,
    /// Largest deviation of the Gram matrix from the identity.
    pub gram_deviation: f64,
    /// Human-readable statement of the normalization in force.
    pub convention: String,
}

/// Quadrature points and weights covering the domain.
fn cover(kind: &DomainKind, quad: QuadResolution) -> Result<Vec<(Complex64, f64)>> {
    let two_pi = 2.0 * std::f64::consts::PI;
    match kind {
        DomainKind::Ellipse { a, b } => {
            // z = (w + 1/w)/2 maps the annulus 1 < |w| < a + b onto the
            // slit ellipse interior; area element |J'(w)|^2 rho drho dtheta
            let big_r = a + b;
            let (xs, ws) = gauss_legendre(quad.radial);
            let (xs, ws) = rescale(&xs, &ws, 1.0, big_r);
            let mut pts = Vec::with_capacity(quad.radial * quad.angular);
            let dtheta = two_pi / quad.angular as f64;
            for (&rho, &wr) in xs.iter().zip(&ws) {
                for j in 0..quad.angular {
                    let w = Complex64::from_polar(rho, dtheta * j as f64);
                    let z = (w + 1.0 / w) * 0.5;
                    let jac = (1.0 - 1.0 / (w * w)) * 0.5;
                    pts.push((z, wr * dtheta * rho * jac.norm_sqr()));
                }
            }
            Ok(pts)
        }
        DomainKind::Lemniscate => {
            // w = z^2 - 1 maps the right lobe onto the unit disk;
            // dA(z) = dA(w) / (4 |1 + w|)
            let (xs, ws) = gauss_legendre(quad.radial);
            let (xs, ws) = rescale(&xs, &ws, 0.0, 1.0);
            let mut pts = Vec::with_capacity(quad.radial * quad.angular);
            let dtheta = two_pi / quad.angular as f64;
            for (&s, &wr) in xs.iter().zip(&ws) {
                for j in 0..quad.angular {
                    let w = Complex64::from_polar(s, dtheta * j as f64);
                    let z = (w + 1.0).sqrt();
                    pts.push((z, wr * dtheta * s / (4.0 * (w + 1.0).norm())));
                }
            }
            Ok(pts)
        }
        DomainKind::Starlike { h } => {
            // polar cover with the ray boundary |h(r e^{i theta})| = 1;
            // |h| is strictly increasing along rays of a starlike map
            let (xs, ws) = gauss_legendre(quad.radial);
            let mut pts = Vec::with_capacity(quad.radial * quad.angular);
            let dtheta = two_pi / quad.angular as f64;
            for j in 0..quad.angular {
                let theta = dtheta * j as f64;
                let dir = Complex64::from_polar(1.0, theta);
                let rmax = ray_boundary(h, dir)?;
                let (rs, wr) = rescale(&xs, &ws, 0.0, rmax);
                for (&r, &w) in rs.iter().zip(&wr) {
                    pts.push((dir * r, w * dtheta * r));
                }
            }
            Ok(pts)
        }
    }
}

fn ray_boundary(h: &Poly, dir: Complex64) -> Result<f64> {
    let value = |r: f64| h.eval(dir * r).norm() - 1.0;
    let mut hi = 1.0;
    let mut tries = 0;
    while value(hi) < 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::Numeric(
                "starlike boundary not found along a ray; is |h| < 1 bounded?".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if value(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn gram_matrix(polys: &[Poly], pts: &[(Complex64, f64)]) -> DMatrix<Complex64> {
    let n = polys.len();
    let values: Vec<Vec<Complex64>> = polys
        .iter()
        .map(|p| par::map_collect(pts.len(), |k| p.eval(pts[k].0)))
        .collect();
    DMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex64::default();
        for (k, &(_, w)) in pts.iter().enumerate() {
            acc += values[i][k] * values[j][k].conj() * w;
        }
        acc
    })
}

/// Construct the orthonormal basis `P_0 .. P_{n_max}` for the domain.
///
/// The ellipse basis is built on Chebyshev polynomials of the second kind
/// with the normalizing divisor calibrated per degree from the quadrature
/// norm (the calibrated constants match `2 sqrt((n+1)/pi) / sqrt(r^{n+1} -
/// r^{-n-1})` with `r = (a+b)^2`). The lemniscate and starlike bases use
/// their closed forms directly.
pub fn domain_basis(kind: DomainKind, n_max: usize, quad: QuadResolution) -> Result<DomainBasis> {
    let convention;
    let polys: Vec<Poly> = match &kind {
        DomainKind::Ellipse { a, b } => {
            if !(*a > *b && *b > 0.0) {
                return Err(Error::usage(format!(
                    "ellipse needs a > b > 0, got a = {a}, b = {b}"
                )));
            }
            if (a * a - b * b - 1.0).abs() > 1e-9 {
                return Err(Error::usage(format!(
                    "foci must sit at -1 and 1 (a^2 - b^2 = 1), got a^2 - b^2 = {}",
                    a * a - b * b
                )));
            }
            let big_r: f64 = a + b;
            convention = format!(
                "U_n / sqrt(pi (R^(2n+2) - R^(-2n-2)) / (4(n+1))), R = a + b = {big_r}, \
                 calibrated per degree from the quadrature norm"
            );
            let pts = cover(&kind, quad)?;
            let mut u_prev = Poly::one();
            let mut u_curr = Poly::from_real(&[0.0, 2.0]);
            let mut out = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                let u_n = match n {
                    0 => u_prev.clone(),
                    1 => u_curr.clone(),
                    _ => {
                        let next = Poly::from_real(&[0.0, 2.0]).mul(&u_curr).sub(&u_prev);
                        u_prev = std::mem::replace(&mut u_curr, next.clone());
                        next
                    }
                };
                let norm_sq: f64 = pts
                    .iter()
                    .map(|&(z, w)| u_n.eval(z).norm_sqr() * w)
                    .sum();
                if norm_sq <= 0.0 {
                    return Err(Error::Construction(format!(
                        "degenerate quadrature norm at degree {n}"
                    )));
                }
                out.push(u_n.scale(Complex64::new(1.0 / norm_sq.sqrt(), 0.0)));
            }
            out
        }
        DomainKind::Lemniscate => {
            convention = "2 sqrt((n+1)/pi) z (z^2 - 1)^n on the right lobe".to_string();
            let base = Poly::from_real(&[-1.0, 0.0, 1.0]);
            let mut power = Poly::one();
            let mut out = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                let c = 2.0 * ((n as f64 + 1.0) / std::f64::consts::PI).sqrt();
                out.push(Poly::from_real(&[0.0, c]).mul(&power));
                power = power.mul(&base);
            }
            out
        }
        DomainKind::Starlike { h } => {
            if h.eval(Complex64::default()).norm() > 1e-12 {
                return Err(Error::usage("starlike map must fix the origin"));
            }
            convention = "sqrt((n+1)/pi) h(z)^n h'(z)".to_string();
            let dh = h.derivative();
            let mut power = Poly::one();
            let mut out = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                let c = ((n as f64 + 1.0) / std::f64::consts::PI).sqrt();
                out.push(power.mul(&dh).scale(Complex64::new(c, 0.0)));
                power = power.mul(h);
            }
            out
        }
    };
    let pts = cover(&kind, quad)?;
    let gram = gram_matrix(&polys, &pts);
    let mut deviation = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let expect = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((gram[(i, j)] - Complex64::new(expect, 0.0)).norm());
        }
    }
    if deviation > GRAM_TOLERANCE {
        return Err(Error::Construction(format!(
            "Gram matrix deviates from identity by {deviation:.3e}"
        )));
    }
    Ok(DomainBasis {
        kind,
        polynomials: polys,
        gram,
        gram_deviation: deviation,
        convention,
    })
}

impl DomainBasis {
    /// Residual norm of projecting `g` onto the span of `P_0 .. P_n`.
    pub fn projection_residual(
        &self,
        g: impl Fn(Complex64) -> Complex64,
        n: usize,
        quad: QuadResolution,
    ) -> Result<f64> {
        let pts = cover(&self.kind, quad)?;
        let norm_sq: f64 = pts.iter().map(|&(z, w)| g(z).norm_sqr() * w).sum();
        let mut captured = 0.0;
        for p in self.polynomials.iter().take(n + 1) {
            let coeff: Complex64 = pts
                .iter()
                .map(|&(z, w)| g(z) * p.eval(z).conj() * w)
                .sum();
            captured += coeff.norm_sqr();
        }
        Ok((norm_sq - captured).max(0.0).sqrt())
    }
}

/// Result of the curvilinear-polygon bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PolygonBound {
    /// `1 - |alpha| = max(sup_j (1 - alpha_j), 1 - |alpha_inf|)`.
    pub value: f64,
    /// Set when `|alpha_inf| < alpha_j` for every finite vertex, the regime
    /// where the norm chain collapses to equalities.
    pub all_equalities: bool,
}

/// Lower bound shared by the Grunsky norm, Teichmueller norm, reflection
/// coefficient, and reciprocal Fredholm eigenvalue of an unbounded convex
/// curvilinear polygon with interior angles `pi alpha_j` and opening
/// `-pi alpha_inf` at infinity.
pub fn polygon_bound(finite_angles: &[f64], alpha_inf: f64) -> Result<PolygonBound> {
    for &a in finite_angles {
        if !(0.0 < a && a < 1.0) {
            return Err(Error::domain(format!("vertex angle {a} outside (0,1)")));
        }
    }
    let ai = alpha_inf.abs();
    if !(0.0 < ai && ai <= 1.0) {
        return Err(Error::domain(format!(
            "angle at infinity needs 0 < |alpha| <= 1, got {alpha_inf}"
        )));
    }
    let sup_finite = finite_angles
        .iter()
        .map(|&a| 1.0 - a)
        .fold(f64::NEG_INFINITY, f64::max);
    let value = (1.0 - ai).max(if finite_angles.is_empty() {
        f64::NEG_INFINITY
    } else {
        sup_finite
    });
    let value = if value == f64::NEG_INFINITY { 1.0 - ai } else { value };
    let all_equalities = finite_angles.iter().all(|&a| ai < a);
    Ok(PolygonBound {
        value,
        all_equalities,
    })
}
