//! Neumann-series solution of the Beltrami equation.
//!
//! The normalized quasiconformal map is `w = z + T rho` where `rho` solves
//! `rho = mu + mu Pi rho`; the series converges geometrically because
//! `|mu Pi| <= sup|mu| < 1`. Exterior coefficients come from area moments
//! of `rho`, so the Cauchy transform is never evaluated on the grid.


use crate::error::{Error, Result};
use crate::grunsky::CoeffSeries;

use super::{disk_moments, fft::BeurlingTransform, inverse_moment, BeltramiGrid, Grid};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Sup-norm fixed-point tolerance.
    pub tol: f64,
    /// Iteration cap; `None` derives `ceil(log tol / log k_sup) + 20`.
    pub max_iter: Option<usize>,
    /// Number of exterior coefficients `b_1 ... b_K` to extract.
    pub coeff_count: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-10,
            max_iter: None,
            coeff_count: 33,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub residual_sup: f64,
    /// Sup-norm update sizes per iteration, for contraction checks.
    pub residual_history: Vec<f64>,
}

/// Solve `rho = mu + mu Pi rho` and extract the conformal restriction's
/// coefficients `f(z) = z + b_0 + b_1/z + ...` (normalized by `w(0) = 0`).
pub fn solve_beltrami(
    mu: &BeltramiGrid,
    tol: f64,
    max_iter: Option<usize>,
) -> Result<(Grid, CoeffSeries, SolveDiagnostics)> {
    solve_beltrami_with(
        mu,
        &SolveOptions {
            tol,
            max_iter,
            ..SolveOptions::default()
        },
    )
}

pub fn solve_beltrami_with(
    mu: &BeltramiGrid,
    opts: &SolveOptions,
) -> Result<(Grid, CoeffSeries, SolveDiagnostics)> {
    let k = mu.k_sup();
    let m = mu.size();
    let max_iter = opts.max_iter.unwrap_or_else(|| {
        if k < 1e-6 {
            20
        } else {
            (opts.tol.ln() / k.ln()).ceil().max(1.0) as usize + 20
        }
    });

    let mut op = BeurlingTransform::new(m);
    let mut rho = mu.grid().clone();
    let mut history = Vec::new();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let pi = op.apply(&rho);
        let mut next = pi;
        let mut step = 0.0f64;
        for ((n, &muv), &old) in next
            .samples_mut()
            .iter_mut()
            .zip(mu.grid().samples())
            .zip(rho.samples())
        {
            *n = muv + muv * *n;
            step = step.max((*n - old).norm());
        }
        rho = next;
        residual = step;
        history.push(step);
        if residual < opts.tol {
            break;
        }
    }
    if residual >= opts.tol {
        return Err(Error::IterationLimit {
            iterations,
            residual,
        });
    }

    let moments = disk_moments(&rho, opts.coeff_count.saturating_sub(1));
    let b0 = inverse_moment(&rho);
    let mut b = Vec::with_capacity(opts.coeff_count + 1);
    b.push(b0);
    b.extend(moments);
    let f = CoeffSeries::new(b);
    Ok((
        rho,
        f,
        SolveDiagnostics {
            iterations,
            residual_sup: residual,
            residual_history: history,
        },
    ))
}
