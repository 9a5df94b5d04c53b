//! Dense complex polynomials with root finding.
//!
//! Roots come from the Durand-Kerner simultaneous iteration followed by a
//! Newton polish of the simple roots; clustered roots are merged into
//! (centroid, multiplicity) pairs. Double precision limits reliable use to
//! the moderate degrees this crate needs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIM_EPS: f64 = 1e-300;

/// Polynomial with coefficients in ascending order, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() <= TRIM_EPS) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::default());
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly {
            coeffs: vec![Complex64::default()],
        }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// The monomial `z`.
    pub fn var() -> Self {
        Poly {
            coeffs: vec![Complex64::default(), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.degree() < divisor.degree() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dn = divisor.degree();
        let lead = divisor.leading();
        let mut quot = vec![Complex64::default(); rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dn] / lead;
            quot[k] = q;
            if q != Complex64::default() {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= q * d;
                }
            }
        }
        rem.truncate(dn.max(1));
        (Poly::new(quot), Poly::new(rem))
    }

    /// Scale of the coefficient vector, for relative tolerances.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All complex roots with multiplicity, as (representative, multiplicity)
    /// pairs; clusters within `cluster_tol` are merged at their centroid.
    ///
    /// A root of multiplicity `m` is a simple root of the `(m-1)`-th
    /// derivative, so each cluster centroid gets a Newton polish there;
    /// plain iteration only reaches multiple roots to `O(eps^{1/m})`.
    pub fn roots(&self, cluster_tol: f64) -> Result<Vec<(Complex64, usize)>> {
        let raw = self.raw_roots()?;
        let mut clusters = cluster(raw, cluster_tol);
        for (z, m) in clusters.iter_mut() {
            if *m < 2 {
                continue;
            }
            let mut target = self.clone();
            for _ in 0..(*m - 1) {
                target = target.derivative();
            }
            let deriv = target.derivative();
            let mut w = *z;
            let mut ok = true;
            for _ in 0..12 {
                let d = deriv.eval(w);
                if d.norm() < 1e-200 {
                    ok = false;
                    break;
                }
                let step = target.eval(w) / d;
                w -= step;
                if (w - *z).norm() > 10.0 * cluster_tol.max(1e-9) {
                    ok = false;
                    break;
                }
                if step.norm() < 1e-16 * (1.0 + w.norm()) {
                    break;
                }
            }
            if ok {
                *z = w;
            }
        }
        Ok(clusters)
    }

    fn raw_roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() {
            return Err(Error::usage("zero polynomial has no well-defined roots"));
        }
        let n = self.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        // monic normalization
        let lead = self.leading();
        let monic: Vec<Complex64> = self.coeffs.iter().map(|&c| c / lead).collect();
        if n == 1 {
            return Ok(vec![-monic[0]]);
        }
        // Cauchy bound for the root radius
        let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let seed = Complex64::from_polar(1.0, 0.93);
        let mut w: Vec<Complex64> = (0..n)
            .map(|k| seed.powu(k as u32 + 1) * radius * 0.7)
            .collect();
        let eval = |z: Complex64| {
            let mut acc = Complex64::new(1.0, 0.0);
            for &c in monic[..n].iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        let mut converged = false;
        for _ in 0..400 {
            let mut max_move = 0.0f64;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        denom *= w[i] - w[j];
                    }
                }
                if denom.norm() < 1e-280 {
                    // nudge coincident iterates apart
                    w[i] += Complex64::new(1e-8, 1e-8);
                    max_move = f64::INFINITY;
                    continue;
                }
                let step = eval(w[i]) / denom;
                w[i] -= step;
                max_move = max_move.max(step.norm());
            }
            if max_move < 1e-14 * radius.max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            // Durand-Kerner stalls near multiple roots; the cluster pass
            // still recovers them, so only reject wildly bad iterates.
            let worst = w.iter().map(|&z| eval(z).norm()).fold(0.0, f64::max);
            if worst > 1e-6 * radius.powi(n as i32).max(1.0) {
                return Err(Error::Numeric(format!(
                    "root iteration did not converge (worst residual {worst:.3e})"
                )));
            }
        }
        // Newton polish
        let deriv = self.derivative();
        for z in w.iter_mut() {
            for _ in 0..8 {
                let d = deriv.eval(*z);
                if d.norm() < 1e-200 {
                    break;
                }
                let step = self.eval(*z) / d;
                *z -= step;
                if step.norm() < 1e-16 * (1.0 + z.norm()) {
                    break;
                }
            }
        }
        Ok(w)
    }
}

fn cluster(mut roots: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    while let Some(z) = roots.pop() {
        let mut members = vec![z];
        let mut i = 0;
        while i < roots.len() {
            if (roots[i] - z).norm() <= tol {
                members.push(roots.swap_remove(i));
            } else {
                i += 1;
            }
        }
        let centroid = members.iter().sum::<Complex64>() / members.len() as f64;
        out.push((centroid, members.len()));
    }
    out.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    out
}
