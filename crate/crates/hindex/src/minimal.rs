//! The Hadamard minimal index I(A) = max { lambda >= 0 : A - lambda P >= 0 }.
//!
//! Three independent routes: the range-membership pseudo-solve (the
//! authoritative one), the hyperplane quadratic program, and the
//! determinant ratio for well-conditioned invertible input.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::{c, kronecker, ones, C64, HermitianMatrix, VectorC, EPS_PSD, EPS_RANGE};
use crate::oracle::{restart_rng, run_indexed, OracleConfig};

#[derive(Debug, Clone)]
pub struct MinimalIndexResult {
    pub value: f64,
    /// A solution of Ay = p when p lies in the range of A.
    pub witness_y: Option<VectorC>,
    pub in_range: bool,
}

/// I(A) by the range test: p = (1,...,1)* is pseudo-solved against A and
/// the index is 1/<Ay, y> when the relative residual is within EPS_RANGE,
/// zero otherwise.
pub fn minimal_index(a: &HermitianMatrix) -> Result<MinimalIndexResult> {
    minimal_index_with_tol(a, EPS_RANGE)
}

pub fn minimal_index_with_tol(a: &HermitianMatrix, eps_range: f64) -> Result<MinimalIndexResult> {
    a.require_psd()?;
    let n = a.dim();
    let p = ones(n);
    let y = a.pseudo_solve(&p);
    let resid = (a.as_matrix() * &y - &p).norm() / (n as f64).sqrt();
    if resid > eps_range {
        return Ok(MinimalIndexResult {
            value: 0.0,
            witness_y: None,
            in_range: false,
        });
    }
    let ay = a.as_matrix() * &y;
    let quad = y.dotc(&ay).re;
    Ok(MinimalIndexResult {
        value: 1.0 / quad,
        witness_y: Some(y),
        in_range: true,
    })
}

/// I(A) as the minimum of <Az, z> over the affine hyperplane sum z = 1.
/// Exact complex KKT solve; singular systems fall back to multi-start
/// projected descent (the problem is convex, so every start converges).
pub fn minimal_index_simplex(a: &HermitianMatrix, cfg: &OracleConfig) -> Result<f64> {
    a.require_psd()?;
    if let Some(v) = complex_hyperplane_kkt(a.as_matrix()) {
        return Ok(v);
    }
    Ok(complex_hyperplane_descent(a.as_matrix(), cfg))
}

fn complex_hyperplane_kkt(a: &DMatrix<C64>) -> Option<f64> {
    let n = a.nrows();
    let mut kkt = DMatrix::from_element(n + 1, n + 1, c(0.0));
    kkt.view_mut((0, 0), (n, n)).copy_from(a);
    for i in 0..n {
        kkt[(i, n)] = c(-1.0);
        kkt[(n, i)] = c(1.0);
    }
    let mut rhs = DVector::from_element(n + 1, c(0.0));
    rhs[n] = c(1.0);
    let sol = kkt.clone().full_piv_lu().solve(&rhs)?;
    let resid = (&kkt * &sol - &rhs).norm();
    if !resid.is_finite() || resid > 1e-8 * a.norm().max(1.0) {
        return None;
    }
    let z = DVector::from_fn(n, |i, _| sol[i]);
    let az = a * &z;
    let value = z.dotc(&az).re;
    Some(value)
}

fn complex_hyperplane_descent(a: &DMatrix<C64>, cfg: &OracleConfig) -> f64 {
    let n = a.nrows();
    let quad = |z: &VectorC| -> f64 { z.dotc(&(a * z)).re };
    let runs = run_indexed(cfg.restarts.min(16).max(1), |k| {
        let mut z = DVector::from_element(n, c(1.0 / n as f64));
        if k > 0 {
            let mut rng = restart_rng(cfg.seed ^ 0xc0, k as u64);
            let mut pert = crate::oracle::random_complex_unit(n, &mut rng);
            let mean = pert.sum() / c(n as f64);
            pert.iter_mut().for_each(|t| *t -= mean);
            z += pert;
        }
        let mut fz = quad(&z);
        let mut step = 0.5;
        for _ in 0..cfg.max_iters.max(4000) {
            let mut g = a * &z;
            let mean = g.sum() / c(n as f64);
            g.iter_mut().for_each(|t| *t -= mean);
            if g.norm() < 1e-14 {
                break;
            }
            let mut moved = false;
            let mut trial = step;
            while trial > cfg.step_tol {
                let cand = &z - g.map(|t| t * trial);
                let fc = quad(&cand);
                if fc < fz {
                    z = cand;
                    fz = fc;
                    step = (trial * 2.0).min(1.0);
                    moved = true;
                    break;
                }
                trial *= 0.5;
            }
            if !moved {
                break;
            }
        }
        fz
    });
    runs.into_iter().fold(f64::INFINITY, f64::min)
}

/// Condition-number cap beyond which the determinant route refuses.
pub const DET_COND_CAP: f64 = 1e10;

/// I(A) = det(A) / (det(A+P) - det(A)) for invertible, well-conditioned A.
pub fn minimal_index_determinant(a: &HermitianMatrix) -> Result<f64> {
    a.require_psd()?;
    let min_eig = a.min_eigenvalue();
    let max_eig = a.max_eigenvalue();
    if min_eig <= EPS_PSD * a.trace_real().abs().max(1.0) {
        return Err(Error::IllConditioned {
            cond: if min_eig > 0.0 {
                max_eig / min_eig
            } else {
                f64::INFINITY
            },
        });
    }
    let cond = max_eig / min_eig;
    if cond > DET_COND_CAP {
        return Err(Error::IllConditioned { cond });
    }
    let det_a = a.as_matrix().determinant().re;
    let ap = a.as_matrix() + DMatrix::from_element(a.dim(), a.dim(), c(1.0));
    let det_ap = ap.determinant().re;
    Ok(det_a / (det_ap - det_a))
}

/// Multiplicativity check for the Kronecker product: returns
/// (I(A) * I(B), I(A (x) B)); the two agree within 1e-8 because the
/// range formula is multiplicative across Kronecker factors.
pub fn kronecker_index_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<(f64, f64)> {
    let ia = minimal_index(a)?.value;
    let ib = minimal_index(b)?.value;
    let iab = minimal_index(&kronecker(a, b))?.value;
    Ok((ia * ib, iab))
}
