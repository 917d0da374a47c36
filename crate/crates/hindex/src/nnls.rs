//! Lawson-Hanson active-set solver for min ||Au - b|| subject to u >= 0.
//!
//! Used to certify the nonnegative-solution criterion: a PSD matrix with
//! nonnegative entries has equal minimal and spectral indexes exactly when
//! Au = p admits a nonnegative solution.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::matrix::EPS_RANGE;

/// Outcome of a nonnegative least-squares solve of Au = p.
#[derive(Debug, Clone, Serialize)]
pub struct NnlsOutcome {
    pub feasible: bool,
    pub u: Vec<f64>,
    pub residual: f64,
}

/// Solves min ||a u - b||_2 with u >= 0 by the Lawson-Hanson active-set
/// iteration. Entries that come out in [-1e-10, 0) are clipped to zero.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let (m, n) = a.shape();
    assert!(m > 0 && n > 0, "empty nnls problem");

    let mut passive = vec![false; n];
    let mut x = DVector::zeros(n);
    let scale = a.amax().max(1.0) * b.amax().max(1.0);
    let wtol = 1e-12 * scale;
    let max_outer = 6 * n + 12;

    for _ in 0..max_outer {
        let w = a.transpose() * (b - a * &x);
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if !passive[j] && w[j] > wtol {
                if best.map_or(true, |(_, bw)| w[j] > bw) {
                    best = Some((j, w[j]));
                }
            }
        }
        let Some((enter, _)) = best else {
            break;
        };
        passive[enter] = true;

        loop {
            let support: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let z = lstsq_on(a, b, &support);
            if z.iter().all(|&v| v > 1e-14) {
                x.fill(0.0);
                for (slot, &j) in support.iter().enumerate() {
                    x[j] = z[slot];
                }
                break;
            }
            // step back toward the last feasible point
            let mut alpha = f64::INFINITY;
            for (slot, &j) in support.iter().enumerate() {
                if z[slot] <= 1e-14 {
                    let denom = x[j] - z[slot];
                    if denom > 1e-300 {
                        alpha = alpha.min(x[j] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (slot, &j) in support.iter().enumerate() {
                x[j] += alpha * (z[slot] - x[j]);
                if x[j] <= 1e-12 {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }

    for v in x.iter_mut() {
        if *v < 0.0 && *v >= -1e-10 {
            *v = 0.0;
        }
    }
    let residual = (b - a * &x).norm();
    (x, residual)
}

fn lstsq_on(a: &DMatrix<f64>, b: &DVector<f64>, support: &[usize]) -> Vec<f64> {
    let m = a.nrows();
    let k = support.len();
    let sub = DMatrix::from_fn(m, k, |i, slot| a[(i, support[slot])]);
    let svd = sub.svd(true, true);
    let sol = svd.solve(b, 1e-13).expect("svd solve");
    sol.iter().copied().collect()
}

/// Feasibility wrapper for the square system Au = p: feasible exactly when
/// the residual is within EPS_RANGE * sqrt(n).
pub fn nonneg_solve(a: &DMatrix<f64>) -> NnlsOutcome {
    let n = a.nrows();
    let p = DVector::from_element(n, 1.0);
    let (u, residual) = nnls(a, &p);
    let feasible = residual <= EPS_RANGE * (n as f64).sqrt();
    NnlsOutcome {
        feasible,
        u: u.iter().copied().collect(),
        residual,
    }
}
