//! Exact truncated power-series algebra, univariate and bivariate.
//!
//! Every operation is exact on retained coefficients: the coefficients
//! 0..N of a result equal the true coefficients of the infinite-series
//! operation applied to the inputs. Truncation order is preserved or
//! explicitly reduced, never silently extended.

use num_complex::Complex64;

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-13;

/// Truncated univariate power series `a_0 + a_1 x + ... + a_N x^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries {
    coeffs: Vec<Complex64>,
}

impl TruncSeries {
    /// Build from coefficients in ascending order; the truncation order is
    /// `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        TruncSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// The constant series `1` at truncation order `n`.
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![Complex64::default(); n + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        TruncSeries { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        TruncSeries {
            coeffs: vec![Complex64::default(); n + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Drop coefficients above order `n`.
    pub fn truncated(&self, n: usize) -> Self {
        let end = (n + 1).min(self.coeffs.len());
        TruncSeries {
            coeffs: self.coeffs[..end].to_vec(),
        }
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::usage(format!(
                "mismatched truncation orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    fn check_unit_constant(&self, what: &str) -> Result<()> {
        let c0 = self.coeffs[0];
        if (c0 - Complex64::new(1.0, 0.0)).norm() > UNIT_TOL {
            return Err(Error::domain(format!(
                "{what} requires constant term 1, got {c0}"
            )));
        }
        Ok(())
    }

    /// Cauchy product truncated to the shared order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let n = self.order();
        let mut out = vec![Complex64::default(); n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(TruncSeries { coeffs: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Reciprocal of a series with unit constant term.
    pub fn recip(&self) -> Result<Self> {
        self.check_unit_constant("reciprocal")?;
        let n = self.order();
        let mut r = vec![Complex64::default(); n + 1];
        r[0] = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            let mut acc = Complex64::default();
            for j in 1..=k {
                acc += self.coeffs[j] * r[k - j];
            }
            r[k] = -acc;
        }
        Ok(TruncSeries { coeffs: r })
    }

    /// Logarithm of a series with unit constant term, via the
    /// integrated-derivative recurrence (O(N^2), exact on retained terms).
    pub fn log(&self) -> Result<Self> {
        self.check_unit_constant("log")?;
        let n = self.order();
        let mut l = vec![Complex64::default(); n + 1];
        for k in 1..=n {
            let mut acc = self.coeffs[k] * k as f64;
            for j in 1..k {
                acc -= l[j] * j as f64 * self.coeffs[k - j];
            }
            l[k] = acc / k as f64;
        }
        Ok(TruncSeries { coeffs: l })
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0].norm() > UNIT_TOL {
            return Err(Error::domain(format!(
                "exp requires constant term 0, got {}",
                self.coeffs[0]
            )));
        }
        let n = self.order();
        let mut e = vec![Complex64::default(); n + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            let mut acc = Complex64::default();
            for j in 1..=k {
                acc += self.coeffs[j] * j as f64 * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Ok(TruncSeries { coeffs: e })
    }

    /// Binomial power `a^e` for a series with unit constant term and an
    /// arbitrary real exponent (J.C.P. Miller recurrence).
    pub fn pow(&self, e: f64) -> Result<Self> {
        self.check_unit_constant("pow")?;
        let n = self.order();
        let mut p = vec![Complex64::default(); n + 1];
        p[0] = Complex64::new(1.0, 0.0);
        for k in 1..=n {
            let mut acc = Complex64::default();
            for j in 1..=k {
                let w = (e + 1.0) * j as f64 - k as f64;
                acc += self.coeffs[j] * p[k - j] * w;
            }
            p[k] = acc / k as f64;
        }
        Ok(TruncSeries { coeffs: p })
    }

    /// Rational power `a^{q/p}` with `p >= 1`.
    pub fn pow_rational(&self, q: i64, p: i64) -> Result<Self> {
        if p < 1 {
            return Err(Error::usage(format!("rational exponent needs p >= 1, got {p}")));
        }
        self.pow(q as f64 / p as f64)
    }
}

/// Truncated bivariate power series with coefficients `c[i][j]` of `u^i v^j`,
/// `0 <= i <= nu`, `0 <= j <= nv`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSeries {
    nu: usize,
    nv: usize,
    // row-major: coeffs[i * (nv + 1) + j]
    coeffs: Vec<Complex64>,
}

impl BivariateSeries {
    pub fn zero(nu: usize, nv: usize) -> Self {
        BivariateSeries {
            nu,
            nv,
            coeffs: vec![Complex64::default(); (nu + 1) * (nv + 1)],
        }
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.nu, self.nv)
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        if i > self.nu || j > self.nv {
            Complex64::default()
        } else {
            self.coeffs[i * (self.nv + 1) + j]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: Complex64) {
        assert!(i <= self.nu && j <= self.nv);
        self.coeffs[i * (self.nv + 1) + j] = c;
    }

    fn is_unit_constant(&self) -> bool {
        (self.coeff(0, 0) - Complex64::new(1.0, 0.0)).norm() <= UNIT_TOL
    }

    /// Reciprocal, requiring a unit constant term.
    pub fn recip(&self) -> Result<Self> {
        if !self.is_unit_constant() {
            return Err(Error::domain(format!(
                "reciprocal requires constant term 1, got {}",
                self.coeff(0, 0)
            )));
        }
        let (nu, nv) = (self.nu, self.nv);
        let mut r = BivariateSeries::zero(nu, nv);
        for i in 0..=nu {
            for j in 0..=nv {
                if i == 0 && j == 0 {
                    r.set_coeff(0, 0, Complex64::new(1.0, 0.0));
                    continue;
                }
                // sum over (k,l) <= (i,j), (k,l) != (0,0): a[k][l] r[i-k][j-l]
                let mut acc = Complex64::default();
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        let a = self.coeff(k, l);
                        if a != Complex64::default() {
                            acc += a * r.coeff(i - k, j - l);
                        }
                    }
                }
                r.set_coeff(i, j, -acc);
            }
        }
        Ok(r)
    }

    /// Logarithm of a bivariate series with unit constant term.
    ///
    /// Works one `v`-derivative at a time: `d/dv log a = (d/dv a) / a`, then
    /// integrates back in `v`. The `v = 0` slice must itself have constant
    /// term 1; its univariate log seeds column 0.
    pub fn log(&self) -> Result<Self> {
        if !self.is_unit_constant() {
            return Err(Error::domain(format!(
                "log requires constant term 1, got {}",
                self.coeff(0, 0)
            )));
        }
        let (nu, nv) = (self.nu, self.nv);
        let recip = self.recip()?;

        // dv = (d/dv a) * (1/a)
        let mut dv = BivariateSeries::zero(nu, nv);
        for i in 0..=nu {
            for j in 0..nv {
                dv.set_coeff(i, j, self.coeff(i, j + 1) * (j + 1) as f64);
            }
        }
        let dv = dv.mul(&recip);

        let mut l = BivariateSeries::zero(nu, nv);
        for i in 0..=nu {
            for j in 1..=nv {
                l.set_coeff(i, j, dv.coeff(i, j - 1) / j as f64);
            }
        }
        // column j = 0 is log of the v=0 slice
        let slice0 = TruncSeries::new((0..=nu).map(|i| self.coeff(i, 0)).collect());
        let log0 = slice0.log()?;
        for i in 0..=nu {
            l.set_coeff(i, 0, log0.coeff(i));
        }
        Ok(l)
    }

    /// Product truncated to the shared orders.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.nu, self.nv), (other.nu, other.nv));
        let (nu, nv) = (self.nu, self.nv);
        let mut out = BivariateSeries::zero(nu, nv);
        for i in 0..=nu {
            for j in 0..=nv {
                let a = self.coeff(i, j);
                if a == Complex64::default() {
                    continue;
                }
                for k in 0..=(nu - i) {
                    for l in 0..=(nv - j) {
                        let b = other.coeff(k, l);
                        if b != Complex64::default() {
                            let c = out.coeff(i + k, j + l) + a * b;
                            out.set_coeff(i + k, j + l, c);
                        }
                    }
                }
            }
        }
        out
    }
}
