//! Schwarzian derivatives of rational maps, their pole data, hyperbolic
//! sup norms, and the harmonic Beltrami coefficients they generate.

use num_complex::Complex64;

use crate::beltrami::BeltramiGrid;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Quotient of two polynomials, denominator monic, common factors
/// cancelled up to numerical tolerance.
#[derive(Debug, Clone)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
}

impl RationalMap {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::usage("denominator is identically zero"));
        }
        let (num, den) = reduce(num, den);
        let lead = den.leading();
        Ok(RationalMap {
            num: num.scale(Complex64::new(1.0, 0.0) / lead),
            den: den.scale(Complex64::new(1.0, 0.0) / lead),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalMap {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Evaluate, switching to reversed-coefficient form beyond the unit
    /// circle so large arguments stay well-scaled.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.norm() <= 1.0 {
            self.num.eval(z) / self.den.eval(z)
        } else {
            let x = Complex64::new(1.0, 0.0) / z;
            let dn = self.num.degree() as i32;
            let dd = self.den.degree() as i32;
            let nrev = eval_reversed(&self.num, x);
            let drev = eval_reversed(&self.den, x);
            z.powi(dn - dd) * nrev / drev
        }
    }

    /// `f(z) * z^4`, stable as `z -> infinity`; the natural scale for
    /// Schwarzians of exterior-normalized maps.
    pub fn eval_times_z4(&self, z: Complex64) -> Complex64 {
        if z.norm() <= 1.0 {
            self.num.eval(z) / self.den.eval(z) * z.powu(4)
        } else {
            let x = Complex64::new(1.0, 0.0) / z;
            let dn = self.num.degree() as i32;
            let dd = self.den.degree() as i32;
            z.powi(dn - dd + 4) * eval_reversed(&self.num, x) / eval_reversed(&self.den, x)
        }
    }
}

fn eval_reversed(p: &Poly, x: Complex64) -> Complex64 {
    let mut acc = Complex64::default();
    for &c in p.coeffs() {
        acc = acc * x + c;
    }
    acc
}

/// Cancel common roots of `num` and `den` (within tolerance), dividing out
/// linear factors found by matching denominator roots against numerator
/// values.
fn reduce(num: Poly, den: Poly) -> (Poly, Poly) {
    if num.is_zero() {
        return (Poly::zero(), Poly::one());
    }
    if den.degree() == 0 {
        return (num, den);
    }
    let roots = match den.roots(1e-5) {
        Ok(r) => r,
        Err(_) => return (num, den),
    };
    let mut num = num;
    let mut den = den;
    let num_scale = num.coeff_scale();
    let den_scale = den.coeff_scale();
    for (root, mult) in roots {
        for _ in 0..mult {
            let zsc = (1.0 + root.norm()).powi(num.degree() as i32);
            if num.eval(root).norm() > 1e-9 * num_scale * zsc {
                break;
            }
            let (qn, _) = num.div_rem(&Poly::new(vec![-root, Complex64::new(1.0, 0.0)]));
            let (qd, rd) = den.div_rem(&Poly::new(vec![-root, Complex64::new(1.0, 0.0)]));
            if rd.coeff_scale() > 1e-8 * den_scale {
                break;
            }
            num = qn;
            den = qd;
            if den.degree() == 0 {
                return (num, den);
            }
        }
    }
    (num, den)
}

/// A double pole of a Schwarzian with its Laurent data
/// `c2/(z - z_j)^2 + c1/(z - z_j) + holomorphic`.
#[derive(Debug, Clone, Copy)]
pub struct SchwarzianPole {
    pub location: Complex64,
    /// Second-order coefficient `c_j`.
    pub c2: Complex64,
    /// First-order coefficient `c_j'`.
    pub c1: Complex64,
}

/// A Schwarzian derivative in rational form with pole data and a default
/// exterior hyperbolic-norm estimate.
#[derive(Debug, Clone)]
pub struct SchwarzianData {
    map: RationalMap,
    poles: Vec<SchwarzianPole>,
    b_norm_exterior: f64,
}

impl SchwarzianData {
    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn poles(&self) -> &[SchwarzianPole] {
        &self.poles
    }

    /// Exterior hyperbolic norm estimated at construction resolution.
    pub fn b_norm_exterior(&self) -> f64 {
        self.b_norm_exterior
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.map.eval(z)
    }
}

/// Schwarzian derivative `(f''/f')' - (f''/f')^2 / 2` of a rational map.
///
/// With `f = P/Q`, the Wronskian `W = P'Q - PQ'` gives
/// `f''/f' = (W'Q - 2WQ')/(QW)`, and the Schwarzian is `(U'V - UV' -
/// U^2/2)/V^2` for `U = W'Q - 2WQ'`, `V = QW` -- exact polynomial algebra.
pub fn schwarzian(f: &RationalMap) -> Result<SchwarzianData> {
    let p = f.num();
    let q = f.den();
    let w = p.derivative().mul(q).sub(&p.mul(&q.derivative()));
    if w.is_zero() {
        return Err(Error::domain("Schwarzian of a constant map is undefined"));
    }
    let u = w.derivative().mul(q).sub(&w.mul(&q.derivative()).scale(Complex64::new(2.0, 0.0)));
    let v = q.mul(&w);
    let num = u
        .derivative()
        .mul(&v)
        .sub(&u.mul(&v.derivative()))
        .sub(&u.mul(&u).scale(Complex64::new(0.5, 0.0)));
    let map = RationalMap::new(num, v.mul(&v))?;
    let poles = extract_poles(&map)?;
    let b_norm_exterior = if map.is_zero() {
        0.0
    } else {
        let data = SchwarzianData {
            map: map.clone(),
            poles: poles.clone(),
            b_norm_exterior: 0.0,
        };
        b_norm(&data, Side::Exterior, 64, 64)
    };
    Ok(SchwarzianData {
        map,
        poles,
        b_norm_exterior,
    })
}

/// Laurent data of each double pole by exact ring averages: the mean of
/// `(z - z_j)^2 S` over a small symmetric ring is `c2` up to `eps^N`, and
/// the mean of `(z - z_j) S` is `c1`.
fn extract_poles(map: &RationalMap) -> Result<Vec<SchwarzianPole>> {
    if map.is_zero() || map.den().degree() == 0 {
        return Ok(Vec::new());
    }
    let roots = map.den().roots(1e-5)?;
    let mut out = Vec::new();
    const RING: usize = 16;
    for (i, &(z_j, _)) in roots.iter().enumerate() {
        let mut eps = 1e-2 * (1.0 + z_j.norm());
        for (k, &(other, _)) in roots.iter().enumerate() {
            if k != i {
                eps = eps.min((z_j - other).norm() * 0.25);
            }
        }
        if eps < 1e-12 {
            return Err(Error::Numeric(format!(
                "pole cluster too tight near {z_j} for Laurent extraction"
            )));
        }
        let mut c2 = Complex64::default();
        let mut c1 = Complex64::default();
        for k in 0..RING {
            let dz = Complex64::from_polar(eps, 2.0 * std::f64::consts::PI * k as f64 / RING as f64);
            let s = map.eval(z_j + dz);
            c2 += s * dz * dz;
            c1 += s * dz;
        }
        c2 /= RING as f64;
        c1 /= RING as f64;
        // a root of the unreduced denominator that cancelled upstream shows
        // up with negligible Laurent data; drop it
        if c2.norm() < 1e-7 && c1.norm() < 1e-7 {
            continue;
        }
        out.push(SchwarzianPole {
            location: z_j,
            c2,
            c1,
        });
    }
    Ok(out)
}

/// Critical point of a polynomial with its multiplicity and the induced
/// second-order Schwarzian coefficient.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub location: Complex64,
    pub multiplicity: usize,
    /// `-m(m+2)/2` for multiplicity `m`.
    pub c2: f64,
}

/// Finite critical points of `p` (zeros of `p'`), each with the closed-form
/// second-order coefficient of `S_p` there.
pub fn critical_partial_fractions(p: &Poly) -> Result<Vec<CriticalPoint>> {
    if p.degree() < 2 {
        return Err(Error::usage(format!(
            "need degree >= 2 to have critical points, got {}",
            p.degree()
        )));
    }
    let dp = p.derivative();
    let roots = dp.roots(1e-6)?;
    // polish simple roots to tight residuals
    let ddp = dp.derivative();
    let scale = dp.coeff_scale();
    let mut out = Vec::new();
    for (mut z, m) in roots {
        if m == 1 {
            for _ in 0..6 {
                let d = ddp.eval(z);
                if d.norm() < 1e-200 {
                    break;
                }
                let step = dp.eval(z) / d;
                z -= step;
                if step.norm() < 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
            let residual = dp.eval(z).norm();
            if residual > 1e-10 * scale * (1.0 + z.norm()).powi(dp.degree() as i32) {
                return Err(Error::Numeric(format!(
                    "critical point refinement stalled at {z} (residual {residual:.3e})"
                )));
            }
        }
        let mf = m as f64;
        out.push(CriticalPoint {
            location: z,
            multiplicity: m,
            c2: -mf * (mf + 2.0) / 2.0,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

/// Grid-estimated hyperbolic sup norm: `sup (1-|z|^2)^2 |S|` over the disk
/// or `sup (|z|^2-1)^2 |S|` over its exterior, with one radial
/// golden-section refinement around the grid argmax. A lower estimate of
/// the true supremum.
pub fn b_norm(s: &SchwarzianData, side: Side, radial: usize, angular: usize) -> f64 {
    if s.map.is_zero() {
        return 0.0;
    }
    let value_at = |r: f64, theta: f64| -> Option<f64> {
        let z = Complex64::from_polar(r, theta);
        if near_pole(s, z) {
            log::debug!("skipping sample at {z} near a pole");
            return None;
        }
        let weight = match side {
            Side::Interior => (1.0 - r * r).powi(2),
            Side::Exterior => (r * r - 1.0).powi(2),
        };
        Some(weight * s.map.eval(z).norm())
    };
    let radius_of = |i: usize| -> f64 {
        let x = (i as f64 + 0.5) / radial as f64;
        match side {
            Side::Interior => x,
            // map (0,1) onto (1, inf) so the far field is covered
            Side::Exterior => 1.0 / x,
        }
    };
    let mut best = 0.0f64;
    let mut arg = (0usize, 0.0f64);
    for i in 0..radial {
        let r = radius_of(i);
        for j in 0..angular {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / angular as f64;
            if let Some(v) = value_at(r, theta) {
                if v > best {
                    best = v;
                    arg = (i, theta);
                }
            }
        }
    }
    // one radial refinement pass around the argmax
    let (i_star, theta_star) = arg;
    let lo = radius_of((i_star + 1).min(radial - 1)).min(radius_of(i_star.saturating_sub(1)));
    let hi = radius_of((i_star + 1).min(radial - 1)).max(radius_of(i_star.saturating_sub(1)));
    let golden = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - golden * (b - a);
    let mut x2 = a + golden * (b - a);
    let mut f1 = value_at(x1, theta_star).unwrap_or(0.0);
    let mut f2 = value_at(x2, theta_star).unwrap_or(0.0);
    for _ in 0..48 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = value_at(x2, theta_star).unwrap_or(0.0);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = value_at(x1, theta_star).unwrap_or(0.0);
        }
    }
    best.max(f1).max(f2)
}

fn near_pole(s: &SchwarzianData, z: Complex64) -> bool {
    s.poles.iter().any(|p| (z - p.location).norm() < 1e-9)
}

/// Boundary profile `sup_theta (r^2 - 1)^2 |S(r e^{i theta})|` at the given
/// exterior radii; tends to zero as `r -> 1+` exactly for asymptotically
/// conformal boundary behavior.
pub fn conformality_indicator(s: &SchwarzianData, radii: &[f64], angular: usize) -> Vec<f64> {
    radii
        .iter()
        .map(|&r| {
            let weight = (r * r - 1.0).powi(2);
            (0..angular)
                .filter_map(|j| {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / angular as f64;
                    let z = Complex64::from_polar(r, theta);
                    if near_pole(s, z) {
                        None
                    } else {
                        Some(weight * s.map.eval(z).norm())
                    }
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Harmonic Beltrami coefficient of the reflected Schwarzian,
/// `-(1/2) (1-|z|^2)^2 S(1/conj(z)) / conj(z)^4`, defined when the exterior
/// hyperbolic norm is below 2.
pub fn ahlfors_weill_mu(s: &SchwarzianData, m: usize) -> Result<BeltramiGrid> {
    let bn = s.b_norm_exterior;
    if bn >= 2.0 {
        return Err(Error::domain(format!(
            "harmonic extension needs exterior hyperbolic norm < 2, got {bn:.6}"
        )));
    }
    BeltramiGrid::from_fn(m, |z| {
        let w = Complex64::new(1.0, 0.0) / z.conj();
        // S(1/conj z)/conj(z)^4 = S(w) w^4
        let val = s.map.eval_times_z4(w);
        val * (-0.5) * (1.0 - z.norm_sqr()).powi(2)
    })
}

/// Harmonic coefficient grid with its boundary-attainment diagnostic.
#[derive(Debug, Clone)]
pub struct HarmonicCoefficient {
    pub mu: BeltramiGrid,
    /// Largest modulus over cells within 6 cells of the unit circle; near a
    /// boundary pole the discrete argmax sits a few cells inside because no
    /// center lies on the approach ray.
    pub boundary_ring_max: f64,
    pub global_max: f64,
}

/// Coefficient `-(t/2) (1-|z|^2)^2 r(conj z)` generated by a rational `r`
/// whose poles all sit on the unit circle.
pub fn harmonic_mu_from_rational(
    r: &RationalMap,
    t: Complex64,
    m: usize,
) -> Result<HarmonicCoefficient> {
    if t.norm() >= 1.0 {
        return Err(Error::domain(format!("needs |t| < 1, got {}", t.norm())));
    }
    if r.den().degree() > 0 {
        for (z, _) in r.den().roots(1e-6)? {
            if (z.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::usage(format!(
                    "pole at {z} lies off the unit circle"
                )));
            }
        }
    }
    let mu = BeltramiGrid::from_fn(m, |z| {
        r.eval(z.conj()) * t * (-0.5) * (1.0 - z.norm_sqr()).powi(2)
    })?;
    let grid = mu.grid();
    let h = grid.cell_size();
    let mut ring = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let z = grid.center(i, j);
            if z.norm() > 1.0 - 6.0 * h && z.norm() <= 1.0 {
                ring = ring.max(grid.samples()[i * m + j].norm());
            }
        }
    }
    let global_max = mu.k_sup();
    Ok(HarmonicCoefficient {
        mu,
        boundary_ring_max: ring,
        global_max,
    })
}

/// Compose a Moebius map `(a z + b)/(c z + d)` with a rational map.
pub fn mobius_compose(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    g: &RationalMap,
) -> Result<RationalMap> {
    if (a * d - b * c).norm() < 1e-14 {
        return Err(Error::usage("Moebius coefficients are degenerate"));
    }
    let num = g.num().scale(a).add(&g.den().scale(b));
    let den = g.num().scale(c).add(&g.den().scale(d));
    RationalMap::new(num, den)
}
