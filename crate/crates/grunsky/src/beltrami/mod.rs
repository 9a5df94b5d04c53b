//! Beltrami coefficients on a uniform grid, the fast Beurling transform,
//! and the Neumann-series solver that manufactures univalent functions
//! with prescribed quasiconformal extension.
//!
//! Grids sample the square `[-1,1]^2` at `m x m` cell centers, row-major
//! with the row index running over `y` and the column index over `x`.
//! Beltrami coefficients vanish outside the closed unit disk and satisfy
//! `sup |mu| < 1`.

mod fft;
mod solve;

pub use fft::{beurling_transform, BeurlingTransform};
pub use solve::{solve_beltrami, solve_beltrami_with, SolveDiagnostics, SolveOptions};

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;
use crate::poly::Poly;

/// Complex samples over `[-1,1]^2` at cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    m: usize,
    samples: Vec<Complex64>,
}

impl Grid {
    pub fn zeros(m: usize) -> Self {
        assert!(m >= 2, "grid needs at least 2 cells per side");
        Grid {
            m,
            samples: vec![Complex64::default(); m * m],
        }
    }

    /// Sample `f` at cell centers inside the closed unit disk, zero outside.
    pub fn from_fn(m: usize, f: impl Fn(Complex64) -> Complex64 + Sync) -> Self {
        let mut g = Grid::zeros(m);
        let h = g.cell_size();
        par::for_each_row_mut(&mut g.samples, m, |i, row| {
            let y = -1.0 + (i as f64 + 0.5) * h;
            for (j, cell) in row.iter_mut().enumerate() {
                let z = Complex64::new(-1.0 + (j as f64 + 0.5) * h, y);
                if z.norm() <= 1.0 {
                    *cell = f(z);
                }
            }
        });
        g
    }

    /// Wrap raw row-major samples (no support masking).
    pub fn from_samples(m: usize, samples: Vec<Complex64>) -> Self {
        assert_eq!(samples.len(), m * m);
        Grid { m, samples }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn cell_size(&self) -> f64 {
        2.0 / self.m as f64
    }

    /// Center of cell `(row i, column j)`.
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        let h = self.cell_size();
        Complex64::new(-1.0 + (j as f64 + 0.5) * h, -1.0 + (i as f64 + 0.5) * h)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `L^2` norm with the cell-area measure.
    pub fn l2_norm(&self) -> f64 {
        let h2 = self.cell_size() * self.cell_size();
        (self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * h2).sqrt()
    }

    /// Bilinear interpolation between cell centers; zero beyond the sampled
    /// hull, matching the compact support of the data.
    pub fn value_at(&self, z: Complex64) -> Complex64 {
        let h = self.cell_size();
        let jf = (z.re + 1.0) / h - 0.5;
        let (j0, tx) = split_index(jf);
        let if_ = (z.im + 1.0) / h - 0.5;
        let (i0, ty) = split_index(if_);
        let at = |i: i64, j: i64| -> Complex64 {
            if i < 0 || j < 0 || i >= self.m as i64 || j >= self.m as i64 {
                Complex64::default()
            } else {
                self.samples[i as usize * self.m + j as usize]
            }
        };
        at(i0, j0) * ((1.0 - tx) * (1.0 - ty))
            + at(i0, j0 + 1) * (tx * (1.0 - ty))
            + at(i0 + 1, j0) * ((1.0 - tx) * ty)
            + at(i0 + 1, j0 + 1) * (tx * ty)
    }

    pub fn scaled(&self, c: Complex64) -> Grid {
        Grid {
            m: self.m,
            samples: self.samples.iter().map(|&s| s * c).collect(),
        }
    }
}

fn split_index(x: f64) -> (i64, f64) {
    let f = x.floor();
    (f as i64, x - f)
}

/// A Beltrami coefficient: disk-supported samples with `sup |mu| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeltramiGrid {
    grid: Grid,
    k_sup: f64,
}

impl BeltramiGrid {
    pub fn new(grid: Grid) -> Result<Self> {
        let k_sup = grid.sup_norm();
        if k_sup >= 1.0 {
            return Err(Error::domain(format!(
                "Beltrami coefficient needs sup |mu| < 1, got {k_sup}"
            )));
        }
        Ok(BeltramiGrid { grid, k_sup })
    }

    pub fn from_fn(m: usize, f: impl Fn(Complex64) -> Complex64 + Sync) -> Result<Self> {
        Self::new(Grid::from_fn(m, f))
    }

    /// Constant coefficient `t` on the unit disk.
    pub fn constant(m: usize, t: Complex64) -> Result<Self> {
        Self::from_fn(m, |_| t)
    }

    pub fn k_sup(&self) -> f64 {
        self.k_sup
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.grid.size()
    }

    pub fn cell_size(&self) -> f64 {
        self.grid.cell_size()
    }

    /// Direction `mu / sup|mu|`, a plain grid of sup norm 1.
    pub fn direction(&self) -> Result<Grid> {
        if self.k_sup == 0.0 {
            return Err(Error::domain("zero coefficient has no direction"));
        }
        Ok(self.grid.scaled(Complex64::new(1.0 / self.k_sup, 0.0)))
    }
}

/// Holomorphic quadratic differential data: a polynomial or rational
/// function with its interior zero multiplicities.
#[derive(Debug, Clone)]
pub struct QuadDifferential {
    num: Poly,
    den: Option<Poly>,
    zeros: Vec<(Complex64, usize)>,
    even_class: bool,
}

impl QuadDifferential {
    pub fn polynomial(p: Poly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::usage("quadratic differential must not vanish identically"));
        }
        let zeros = interior_zeros(&p)?;
        let even_class = zeros.iter().all(|&(_, m)| m % 2 == 0);
        Ok(QuadDifferential {
            num: p,
            den: None,
            zeros,
            even_class,
        })
    }

    pub fn rational(num: Poly, den: Poly) -> Result<Self> {
        if num.is_zero() {
            return Err(Error::usage("quadratic differential must not vanish identically"));
        }
        if den.is_zero() {
            return Err(Error::usage("denominator must not vanish identically"));
        }
        let zeros = interior_zeros(&num)?;
        let even_class = zeros.iter().all(|&(_, m)| m % 2 == 0);
        Ok(QuadDifferential {
            num,
            den: Some(den),
            zeros,
            even_class,
        })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.num.eval(z);
        match &self.den {
            Some(d) => n / d.eval(z),
            None => n,
        }
    }

    /// Interior zeros with multiplicities.
    pub fn zero_multiplicities(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    /// True when every interior zero has even order (the differential is a
    /// square of a holomorphic function).
    pub fn in_even_class(&self) -> bool {
        self.even_class
    }
}

fn interior_zeros(p: &Poly) -> Result<Vec<(Complex64, usize)>> {
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let roots = p.roots(1e-5)?;
    Ok(roots
        .into_iter()
        .filter(|(z, _)| z.norm() < 1.0 - 1e-9)
        .collect())
}

/// Teichmueller-form coefficient `k |psi| / psi` sampled on an `m x m` grid.
///
/// Cells containing a zero of `psi` sample as 0; the phase is discontinuous
/// there and the cell set has measure zero.
pub fn make_teichmueller_mu(psi: &QuadDifferential, k: f64, m: usize) -> Result<BeltramiGrid> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(format!("dilatation k must lie in [0,1), got {k}")));
    }
    let zeros = psi.zero_multiplicities().to_vec();
    let half_cell = 1.0 / m as f64;
    let grid = Grid::from_fn(m, |z| {
        if zeros
            .iter()
            .any(|&(zr, _)| (z.re - zr.re).abs() <= half_cell && (z.im - zr.im).abs() <= half_cell)
        {
            return Complex64::default();
        }
        let v = psi.eval(z);
        let norm = v.norm();
        if norm < 1e-280 {
            Complex64::default()
        } else {
            v.conj() / norm * k
        }
    });
    BeltramiGrid::new(grid)
}

/// Rescale the support into radius `r`: `result(z) = mu(z / r)` for
/// `|z| < r`, zero on the annulus `r <= |z|`.
pub fn truncate_mu(mu: &BeltramiGrid, r: f64) -> Result<BeltramiGrid> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::domain(format!("truncation radius must lie in (0,1), got {r}")));
    }
    let grid = Grid::from_fn(mu.size(), |z| {
        if z.norm() < r {
            mu.grid().value_at(z / r)
        } else {
            Complex64::default()
        }
    });
    BeltramiGrid::new(grid)
}

/// Root-transform action `mu(z^p) (conj(z)/z)^{p-1}`; preserves the sup norm
/// up to interpolation error.
pub fn root_transform_mu(mu: &BeltramiGrid, p: usize) -> Result<BeltramiGrid> {
    if p < 2 {
        return Err(Error::usage(format!("root transform needs p >= 2, got {p}")));
    }
    let grid = Grid::from_fn(mu.size(), |z| {
        let w = z.powu(p as u32);
        let phase = (z.conj() / z).powu(p as u32 - 1);
        mu.grid().value_at(w) * phase
    });
    BeltramiGrid::new(grid)
}

/// Area moments `s_d = (1/pi) integral g(z) z^d dxdy` for `d = 0..=max_power`,
/// by the midpoint rule over cells.
pub fn disk_moments(g: &Grid, max_power: usize) -> Vec<Complex64> {
    let m = g.size();
    let h = g.cell_size();
    let weight = h * h / std::f64::consts::PI;
    let sums = par::map_reduce_rows(
        g.samples(),
        m,
        vec![Complex64::default(); max_power + 1],
        |i, row| {
            let mut acc = vec![Complex64::default(); max_power + 1];
            let y = -1.0 + (i as f64 + 0.5) * h;
            for (j, &s) in row.iter().enumerate() {
                if s == Complex64::default() {
                    continue;
                }
                let z = Complex64::new(-1.0 + (j as f64 + 0.5) * h, y);
                let mut zp = Complex64::new(1.0, 0.0);
                for a in acc.iter_mut() {
                    *a += s * zp;
                    zp *= z;
                }
            }
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    sums.into_iter().map(|s| s * weight).collect()
}

/// `(1/pi) integral g(z) / z dxdy`; cell centers never sit at the origin.
pub fn inverse_moment(g: &Grid) -> Complex64 {
    let m = g.size();
    let h = g.cell_size();
    let weight = h * h / std::f64::consts::PI;
    par::map_reduce_rows(
        g.samples(),
        m,
        Complex64::default(),
        |i, row| {
            let y = -1.0 + (i as f64 + 0.5) * h;
            let mut acc = Complex64::default();
            for (j, &s) in row.iter().enumerate() {
                if s != Complex64::default() {
                    let z = Complex64::new(-1.0 + (j as f64 + 0.5) * h, y);
                    acc += s / z;
                }
            }
            acc
        },
        |a, b| a + b,
    ) * weight
}

/// Moment matrix `A[m][n] = sqrt(mn)/pi * integral g(z) z^{m+n-2} dxdy`
/// (1-based indices), symmetric by construction.
pub fn moment_matrix(g: &Grid, n: usize) -> DMatrix<Complex64> {
    assert!(n >= 1);
    let moments = disk_moments(g, 2 * n - 2);
    DMatrix::from_fn(n, n, |i, j| {
        let (mi, ni) = (i + 1, j + 1);
        moments[mi + ni - 2] * ((mi * ni) as f64).sqrt()
    })
}

const GRID_MAGIC: &str = "grunsky-grid v1";

/// Write a coefficient grid as text: a header with the side length and cell
/// size, then `m*m` row-major `re im` lines at full precision.
pub fn write_grid(mu: &BeltramiGrid, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{GRID_MAGIC}")?;
    writeln!(out, "m {}", mu.size())?;
    writeln!(out, "cell_size {:.17e}", mu.cell_size())?;
    for s in mu.grid().samples() {
        writeln!(out, "{:.17e} {:.17e}", s.re, s.im)?;
    }
    Ok(())
}

/// Read a grid written by [`write_grid`], revalidating the invariants.
pub fn read_grid(path: &Path) -> Result<BeltramiGrid> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut lines = reader.lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Format("unexpected end of grid file".into()))?
            .map_err(Error::from)
    };
    let magic = next()?;
    if magic.trim() != GRID_MAGIC {
        return Err(Error::Format(format!("bad header line {magic:?}")));
    }
    let m_line = next()?;
    let m: usize = m_line
        .strip_prefix("m ")
        .ok_or_else(|| Error::Format(format!("expected 'm <size>', got {m_line:?}")))?
        .trim()
        .parse()
        .map_err(|e| Error::Format(format!("bad grid size: {e}")))?;
    if m < 2 {
        return Err(Error::Format(format!("grid size {m} too small")));
    }
    let cs_line = next()?;
    let cell_size: f64 = cs_line
        .strip_prefix("cell_size ")
        .ok_or_else(|| Error::Format(format!("expected 'cell_size <v>', got {cs_line:?}")))?
        .trim()
        .parse()
        .map_err(|e| Error::Format(format!("bad cell size: {e}")))?;
    if (cell_size - 2.0 / m as f64).abs() > 1e-12 {
        return Err(Error::Format(format!(
            "cell_size {cell_size} inconsistent with m = {m}"
        )));
    }
    let mut samples = Vec::with_capacity(m * m);
    for _ in 0..m * m {
        let line = next()?;
        let mut parts = line.split_whitespace();
        let re: f64 = parts
            .next()
            .ok_or_else(|| Error::Format("missing real part".into()))?
            .parse()
            .map_err(|e| Error::Format(format!("bad sample: {e}")))?;
        let im: f64 = parts
            .next()
            .ok_or_else(|| Error::Format("missing imaginary part".into()))?
            .parse()
            .map_err(|e| Error::Format(format!("bad sample: {e}")))?;
        samples.push(Complex64::new(re, im));
    }
    BeltramiGrid::new(Grid::from_samples(m, samples))
}
