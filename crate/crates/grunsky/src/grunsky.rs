//! Grunsky matrices and norms of univalent-function coefficient data, with
//! the root transform, complex homotopy, disk inversion, and the two-term
//! model norm.
//!
//! Conventions. A `CoeffSeries` holds `(b_0, b_1, ..., b_M)` for
//! `f(z) = z + b_0 + b_1/z + ...` on `|z| > 1`. The matrix entries are
//! `G[m][n] = sqrt(mn) a_mn` where the `a_mn` come from the double expansion
//! of `log[(f(z) - f(zeta))/(z - zeta)]` in `u = 1/z`, `v = 1/zeta`, with the
//! sign fixed so that `a_mm(z + t/z) = t^m / m`. Under this convention
//! `a_m1 = b_m` and the matrix is independent of `b_0`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::quadratic_form_norm;
use crate::series::{BivariateSeries, TruncSeries};

/// Stopping gap for the truncation sweep in [`grunsky_norm`].
pub const NORM_CONVERGENCE_GAP: f64 = 1e-8;

/// Coefficients `(b_0, ..., b_M)` of a hydrodynamically normalized function
/// `f(z) = z + b_0 + b_1 z^{-1} + ...` on the exterior disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffSeries {
    b: Vec<Complex64>,
}

impl CoeffSeries {
    pub fn new(b: Vec<Complex64>) -> Self {
        assert!(!b.is_empty(), "need at least b_0");
        CoeffSeries { b }
    }

    pub fn from_real(b: &[f64]) -> Self {
        Self::new(b.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The identity map `f(z) = z`, retaining `order + 1` zero coefficients.
    pub fn identity(order: usize) -> Self {
        CoeffSeries {
            b: vec![Complex64::default(); order + 1],
        }
    }

    /// Highest retained index `M`.
    pub fn order(&self) -> usize {
        self.b.len() - 1
    }

    /// Coefficient `b_k`, zero beyond the retained range.
    pub fn b(&self, k: usize) -> Complex64 {
        self.b.get(k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.b
    }

    /// Extend with explicit zeros up to order `m` (asserting a finite tail).
    pub fn padded(&self, m: usize) -> Self {
        let mut b = self.b.clone();
        b.resize(m + 1, Complex64::default());
        CoeffSeries { b }
    }
}

/// `N x N` matrix with entries `sqrt(mn) a_mn`, symmetric and independent
/// of `b_0`.
#[derive(Debug, Clone)]
pub struct GrunskyMatrix {
    entries: DMatrix<Complex64>,
}

impl GrunskyMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// Entry for 1-based indices `m, n`.
    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m - 1, n - 1)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Leading `n x n` principal block.
    pub fn leading_block(&self, n: usize) -> DMatrix<Complex64> {
        self.entries.view((0, 0), (n, n)).into_owned()
    }

    /// Largest entry modulus, `sup_{m,n} sqrt(mn) |a_mn|`.
    pub fn sup_entry(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Truncation sweep of the operator norm: `per_size[k] = (N, sigma_max of
/// the leading N x N block)`, nondecreasing in `N`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub per_size: Vec<(usize, f64)>,
    pub converged: bool,
    pub tail_gap: f64,
}

/// Grunsky matrix of `f` at truncation size `N`.
///
/// Needs `b_1 ... b_{2N-1}`: the entry at `(m, n)` depends on exactly
/// `b_1 ... b_{m+n-1}`.
pub fn grunsky_matrix(f: &CoeffSeries, n: usize) -> Result<GrunskyMatrix> {
    if n == 0 {
        return Err(Error::usage("matrix size must be at least 1"));
    }
    if f.order() < 2 * n - 1 {
        return Err(Error::usage(format!(
            "size {n} needs coefficients through b_{}, have b_{}",
            2 * n - 1,
            f.order()
        )));
    }
    // (f(z) - f(zeta))/(z - zeta) = 1 - uv sum_k b_k sum_{i+j=k-1} u^i v^j,
    // which leaves F[i][j] = -b_{i+j-1} for i, j >= 1.
    let mut big_f = BivariateSeries::zero(n, n);
    big_f.set_coeff(0, 0, Complex64::new(1.0, 0.0));
    for i in 1..=n {
        for j in 1..=n {
            big_f.set_coeff(i, j, -f.b(i + j - 1));
        }
    }
    let log = big_f.log()?;
    let entries = DMatrix::from_fn(n, n, |i, j| {
        let (m, k) = (i + 1, j + 1);
        -log.coeff(m, k) * ((m * k) as f64).sqrt()
    });
    Ok(GrunskyMatrix { entries })
}

/// Supremum of the Grunsky quadratic form over the unit sphere, swept over
/// truncation sizes `1..=n_max`.
pub fn grunsky_norm(f: &CoeffSeries, n_max: usize) -> Result<NormEstimate> {
    let g = grunsky_matrix(f, n_max)?;
    let mut per_size = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let sigma = quadratic_form_norm(&g.leading_block(n))?;
        per_size.push((n, sigma));
    }
    let value = per_size.last().map(|&(_, s)| s).unwrap_or(0.0);
    let tail_gap = if per_size.len() >= 2 {
        (per_size[per_size.len() - 1].1 - per_size[per_size.len() - 2].1).abs()
    } else {
        f64::INFINITY
    };
    Ok(NormEstimate {
        value,
        converged: tail_gap < NORM_CONVERGENCE_GAP,
        tail_gap,
        per_size,
    })
}

/// Rotational conjugation `f(z) -> f(z^p)^{1/p}` on coefficient data.
///
/// The output retains every coefficient determined by `b_0 ... b_M`, which
/// is order `p(M + 2) - 2`: an unknown `b_{M+1}` would first enter at the
/// `z^{-(p(M+2)-1)}` term.
pub fn root_transform(f: &CoeffSeries, p: usize) -> Result<CoeffSeries> {
    if p < 2 {
        return Err(Error::usage(format!("root transform needs p >= 2, got {p}")));
    }
    let m = f.order();
    let inner_order = p * (m + 2) - 1;
    let mut inner = TruncSeries::zero(inner_order);
    let mut coeffs = vec![Complex64::default(); inner_order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for k in 0..=m {
        let e = p * (k + 1);
        if e <= inner_order {
            coeffs[e] = f.b(k);
        }
    }
    inner = TruncSeries::new(coeffs).add(&inner)?;
    let root = inner.pow_rational(1, p as i64)?;
    // z (1 + c_1/z + c_2/z^2 + ...) = z + c_1 + c_2/z + ...
    let out_order = p * (m + 2) - 2;
    let b = (0..=out_order).map(|j| root.coeff(j + 1)).collect();
    Ok(CoeffSeries::new(b))
}

/// Complex homotopy `f_t(z) = t f(z/t)`, acting as `b_k -> t^{k+1} b_k`.
pub fn homotopy(f: &CoeffSeries, t: Complex64) -> Result<CoeffSeries> {
    if t.norm() > 1.0 + 1e-12 {
        return Err(Error::domain(format!("homotopy needs |t| <= 1, got {}", t.norm())));
    }
    let mut tk = t;
    let b = f
        .coeffs()
        .iter()
        .map(|&bk| {
            tk *= t;
            bk * tk / t
        })
        .collect();
    Ok(CoeffSeries::new(b))
}

/// Exterior coefficients of `f(z) = 1/F(1/z)` for a disk function
/// `F(z) = z + a_2 z^2 + ...` given as `(a_1, a_2, ..., a_M)`.
pub fn disk_inversion(disk_coeffs: &[Complex64]) -> Result<CoeffSeries> {
    if disk_coeffs.is_empty() {
        return Err(Error::usage("need at least the linear coefficient a_1"));
    }
    let a1 = disk_coeffs[0];
    if (a1 - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::domain(format!(
            "disk inversion requires a_1 = 1 (got {a1}); renormalize first"
        )));
    }
    // F(1/z) = (1/z) g(1/z) with g(x) = 1 + a_2 x + ...; f(z) = z / g(1/z).
    let m = disk_coeffs.len();
    let g = TruncSeries::new(disk_coeffs.to_vec());
    let r = g.recip()?;
    let out_order = m.saturating_sub(2);
    let b = (0..=out_order).map(|k| r.coeff(k + 1)).collect();
    Ok(CoeffSeries::new(b))
}

/// Two-term model norm `sup_{m,n} |G[m][n]| + quadratic_form_norm(G)`.
pub fn model_norm(g: &GrunskyMatrix) -> Result<f64> {
    Ok(g.sup_entry() + quadratic_form_norm(g.matrix())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn polar(r: f64, theta: f64) -> Complex64 {
        Complex64::from_polar(r, theta)
    }

    #[test]
    fn identity_map_has_zero_matrix() {
        let f = CoeffSeries::identity(9);
        let g = grunsky_matrix(&f, 5).unwrap();
        assert_eq!(g.sup_entry(), 0.0);
    }

    #[test]
    fn one_pole_family_is_diagonal_with_powers() {
        // f = z + t/z: G[m][m] = t^m, off-diagonal zero
        let t = 0.5;
        let f = CoeffSeries::from_real(&[0.0, t]).padded(9);
        let g = grunsky_matrix(&f, 5).unwrap();
        for m in 1..=5 {
            for n in 1..=5 {
                let expect = if m == n { c(t.powi(m as i32)) } else { c(0.0) };
                assert!((g.entry(m, n) - expect).norm() < 1e-14);
            }
        }
        assert!((g.entry(2, 2) - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn constant_term_is_irrelevant() {
        // f = z + 2t + t^2/z (inversion of z/(1+tz)^2): diagonal t^{2m}
        let t = 0.6;
        let f = CoeffSeries::from_real(&[2.0 * t, t * t]).padded(7);
        let g = grunsky_matrix(&f, 4).unwrap();
        for m in 1..=4 {
            assert!((g.entry(m, m) - c(t.powi(2 * m as i32))).norm() < 1e-13);
        }
        let without_b0 = CoeffSeries::from_real(&[0.0, t * t]).padded(7);
        let g2 = grunsky_matrix(&without_b0, 4).unwrap();
        for m in 1..=4 {
            for n in 1..=4 {
                assert!((g.entry(m, n) - g2.entry(m, n)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn insufficient_coefficients_is_usage_error() {
        let f = CoeffSeries::from_real(&[0.0, 0.5]);
        assert!(matches!(grunsky_matrix(&f, 2), Err(Error::Usage(_))));
    }

    #[test]
    fn matrix_is_symmetric_with_first_row_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 6;
        let b: Vec<Complex64> = (0..=(2 * n - 1))
            .map(|_| Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)))
            .collect();
        let f = CoeffSeries::new(b);
        let g = grunsky_matrix(&f, n).unwrap();
        for m in 1..=n {
            for k in 1..=n {
                assert!((g.entry(m, k) - g.entry(k, m)).norm() < 1e-13);
            }
            // a_m1 = b_m, so G[m][1] = sqrt(m) b_m
            let expect = f.b(m) * (m as f64).sqrt();
            assert!((g.entry(m, 1) - expect).norm() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn norm_of_one_pole_family_is_t() {
        let f = CoeffSeries::from_real(&[0.0, 0.5]);
        let est = grunsky_norm(&f, 1).unwrap();
        assert!((est.value - 0.5).abs() < 1e-15);
        let padded = f.padded(15);
        let est = grunsky_norm(&padded, 8).unwrap();
        assert!((est.value - 0.5).abs() < 1e-14);
        assert!(est.converged);
    }

    #[test]
    fn per_size_is_nondecreasing() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let b: Vec<Complex64> = (0..=15)
            .map(|_| Complex64::new(rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15)))
            .collect();
        let est = grunsky_norm(&CoeffSeries::new(b), 8).unwrap();
        for w in est.per_size.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-12);
        }
    }

    #[test]
    fn even_root_family_norm_equals_t() {
        // inversion of z/(1 + t z^2) is exactly z + t/z
        let t = 0.5;
        let f = CoeffSeries::from_real(&[0.0, t]).padded(2 * 12 - 1);
        let est = grunsky_norm(&f, 12).unwrap();
        assert!((est.value - t).abs() < 1e-12);
    }

    #[test]
    fn odd_root_family_norm_is_strictly_smaller() {
        // inversion of z/(1 + t z^3)^{2/3} is z (1 + t z^{-3})^{2/3}
        let t = 0.5;
        let n = 12;
        let series = TruncSeries::from_real(
            &std::iter::once(1.0)
                .chain(std::iter::repeat(0.0).take(2 * n))
                .collect::<Vec<_>>(),
        );
        let mut coeffs = series.coeffs().to_vec();
        coeffs[3] = c(t);
        let g = TruncSeries::new(coeffs).pow_rational(2, 3).unwrap();
        let b: Vec<Complex64> = (0..2 * n).map(|k| g.coeff(k + 1)).collect();
        let est = grunsky_norm(&CoeffSeries::new(b), n).unwrap();
        assert!(est.value < t - 1e-3, "norm {}", est.value);
    }

    #[test]
    fn root_transform_fixes_identity() {
        let f = CoeffSeries::identity(4);
        for p in [2, 3, 5] {
            let fp = root_transform(&f, p).unwrap();
            assert!(fp.coeffs().iter().all(|&b| b == Complex64::default()));
        }
    }

    #[test]
    fn root_transform_binomial_example() {
        // f = z + t/z, p = 2: z (1 + t z^{-4})^{1/2} = z + (t/2) z^{-3} - (t^2/8) z^{-7} + ...
        let t = 0.4;
        let f = CoeffSeries::from_real(&[0.0, t]).padded(6);
        let fp = root_transform(&f, 2).unwrap();
        assert_eq!(fp.order(), 2 * (6 + 2) - 2);
        assert!((fp.b(3) - c(t / 2.0)).norm() < 1e-15);
        assert!((fp.b(7) - c(-t * t / 8.0)).norm() < 1e-15);
        for k in [0usize, 1, 2, 4, 5, 6, 8] {
            assert!(fp.b(k).norm() < 1e-15, "b_{k} = {}", fp.b(k));
        }
    }

    #[test]
    fn root_transform_rejects_small_p() {
        let f = CoeffSeries::identity(3);
        assert!(matches!(root_transform(&f, 1), Err(Error::Usage(_))));
    }

    #[test]
    fn root_transform_does_not_decrease_norm() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let b: Vec<Complex64> = (0..=7)
                .map(|k| {
                    let scale = 0.3 / (1 + k * k) as f64;
                    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
                })
                .collect();
            let f = CoeffSeries::new(b).padded(15);
            let base = grunsky_norm(&f, 8).unwrap().value;
            for p in [2usize, 3] {
                // the transform spreads matrix mass to ~p times higher
                // indices, so the truncation size must scale with p
                let fp = root_transform(&f, p).unwrap();
                let np = grunsky_norm(&fp, 8 * p).unwrap().value;
                assert!(np >= base - 1e-6, "p = {p}: {np} < {base}");
            }
        }
    }

    #[test]
    fn homotopy_identity_and_quadratic_action() {
        let f = CoeffSeries::from_real(&[0.3, 0.7, 0.1]);
        let same = homotopy(&f, c(1.0)).unwrap();
        assert_eq!(same, f);
        let t = 0.5;
        let ft = homotopy(&f, c(t)).unwrap();
        assert!((ft.b(1) - c(0.7 * t * t)).norm() < 1e-15);
        assert!((ft.b(0) - c(0.3 * t)).norm() < 1e-15);
        assert!(matches!(homotopy(&f, c(1.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn homotopy_norm_monotone_in_radius() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let b: Vec<Complex64> = (0..=11)
            .map(|_| Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)))
            .collect();
        let f = CoeffSeries::new(b);
        let mut prev = 0.0;
        for i in 1..=10 {
            let t = i as f64 / 10.0;
            let nt = grunsky_norm(&homotopy(&f, c(t)).unwrap(), 6).unwrap().value;
            assert!(nt >= prev - 1e-12, "t = {t}");
            prev = nt;
        }
    }

    #[test]
    fn disk_inversion_examples() {
        // F = z
        let f = disk_inversion(&[c(1.0)]).unwrap();
        assert!(f.coeffs().iter().all(|&b| b.norm() == 0.0));

        // F = z/(1+tz)^2 has a_{k+1} = (k+1)(-t)^k; inversion is z + 2t + t^2/z
        let t = 0.45f64;
        let a: Vec<Complex64> = (0..8i32).map(|k| c((k + 1) as f64 * (-t).powi(k))).collect();
        let f = disk_inversion(&a).unwrap();
        assert!((f.b(0) - c(2.0 * t)).norm() < 1e-12);
        assert!((f.b(1) - c(t * t)).norm() < 1e-12);
        for k in 2..=f.order() {
            assert!(f.b(k).norm() < 1e-12, "b_{k} = {}", f.b(k));
        }

        // Koebe: a_{k+1} = k+1 gives z - 2 + 1/z with norm 1
        let a: Vec<Complex64> = (0..12).map(|k| c((k + 1) as f64)).collect();
        let f = disk_inversion(&a).unwrap();
        assert!((f.b(0) - c(-2.0)).norm() < 1e-10);
        assert!((f.b(1) - c(1.0)).norm() < 1e-10);
        let est = grunsky_norm(&f.padded(9), 5).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn disk_inversion_requires_normalization() {
        assert!(matches!(disk_inversion(&[c(2.0), c(0.0)]), Err(Error::Domain(_))));
    }

    #[test]
    fn model_norm_examples() {
        let zero = grunsky_matrix(&CoeffSeries::identity(9), 5).unwrap();
        assert_eq!(model_norm(&zero).unwrap(), 0.0);

        let t = 0.5;
        let f = CoeffSeries::from_real(&[0.0, t]).padded(9);
        let g = grunsky_matrix(&f, 5).unwrap();
        assert!((model_norm(&g).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rotation_leaves_norms_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let b: Vec<Complex64> = (0..=9)
            .map(|_| Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)))
            .collect();
        let f = CoeffSeries::new(b);
        // rotation f_theta(z) = e^{-i theta} f(e^{i theta} z) is the
        // homotopy at the unimodular parameter t = e^{-i theta}
        let rotated = homotopy(&f, polar(1.0, 0.83)).unwrap();
        let g0 = grunsky_matrix(&f, 5).unwrap();
        let g1 = grunsky_matrix(&rotated, 5).unwrap();
        for m in 1..=5 {
            for n in 1..=5 {
                assert!((g0.entry(m, n).norm() - g1.entry(m, n).norm()).abs() < 1e-13);
            }
        }
        let n0 = grunsky_norm(&f, 5).unwrap().value;
        let n1 = grunsky_norm(&rotated, 5).unwrap().value;
        assert!((n0 - n1).abs() < 1e-12);
        let m0 = model_norm(&g0).unwrap();
        let m1 = model_norm(&g1).unwrap();
        assert!((m0 - m1).abs() < 1e-12);
    }
}
