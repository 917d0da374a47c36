//! The spectral index I(sp, A): exact subset enumeration for PSD matrices
//! with nonnegative entries, rank-one sphere search for general PSD input,
//! the diagonal-relaxation value, and the factored-form objective.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{c, C64, HermitianMatrix, VectorC};
use crate::nnls::{nonneg_solve, NnlsOutcome};
use crate::oracle::{restart_rng, run_indexed, OracleConfig};

/// Cap for the 2^n subset enumeration.
pub const N_MAX_COMBINATORIAL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMethod {
    Combinatorial,
    RankOneSearch,
    DiagonalOnly,
}

#[derive(Debug, Clone)]
pub struct SpectralIndexResult {
    pub value: f64,
    pub method: SpectralMethod,
    /// Subset J0 whose principal submatrix attains the index (0-based).
    pub witness_subset: Option<Vec<usize>>,
    /// Nonnegative solution of A_J u = p_J.
    pub witness_u: Option<Vec<f64>>,
    /// Unit vector with ||A o xx*|| equal to the index.
    pub witness_x: Option<VectorC>,
}

/// All nonempty subsets of {0..n-1} in increasing cardinality and
/// lexicographic order within each cardinality.
pub fn subsets_by_cardinality(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.clone());
            // advance to the next k-combination
            let mut i = k as isize - 1;
            while i >= 0 && idx[i as usize] == n - k + i as usize {
                i -= 1;
            }
            if i < 0 {
                break;
            }
            let i = i as usize;
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

fn real_part(a: &HermitianMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(a.dim(), a.dim(), |i, j| a.entry(i, j).re)
}

/// Nonnegative-solution certificate for a PSD matrix with nonnegative
/// entries and strictly positive diagonal.
pub fn nonneg_solution(a: &HermitianMatrix) -> Result<NnlsOutcome> {
    a.require_entrywise_nonneg()?;
    a.require_psd()?;
    for (i, d) in a.diagonal_real().iter().enumerate() {
        if *d <= 0.0 {
            return Err(Error::ZeroDiagonal { index: i });
        }
    }
    Ok(nonneg_solve(&real_part(a)))
}

/// Exact spectral index for PSD matrices with nonnegative entries: the
/// minimum of 1/sum(u) over subsets J whose principal submatrix admits a
/// nonnegative solution of A_J u = p_J. Ties keep the first subset in
/// (cardinality, lexicographic) order.
pub fn spectral_index_combinatorial(a: &HermitianMatrix) -> Result<SpectralIndexResult> {
    a.require_entrywise_nonneg()?;
    a.require_psd()?;
    let n = a.dim();
    if n > N_MAX_COMBINATORIAL {
        return Err(Error::TooLarge {
            n,
            max: N_MAX_COMBINATORIAL,
        });
    }

    let diag = a.diagonal_real();
    if let Some(i) = diag.iter().position(|&d| d <= 0.0) {
        // a zero diagonal entry forces every norm index to zero
        let mut x = DVector::from_element(n, c(0.0));
        x[i] = c(1.0);
        return Ok(SpectralIndexResult {
            value: 0.0,
            method: SpectralMethod::Combinatorial,
            witness_subset: Some(vec![i]),
            witness_u: None,
            witness_x: Some(x),
        });
    }

    let am = real_part(a);
    let subsets = subsets_by_cardinality(n);
    let candidates = run_indexed(subsets.len(), |k| {
        let j = &subsets[k];
        let sub = DMatrix::from_fn(j.len(), j.len(), |r, s| am[(j[r], j[s])]);
        let out = nonneg_solve(&sub);
        if out.feasible {
            let total: f64 = out.u.iter().sum();
            Some((1.0 / total, out.u))
        } else {
            None
        }
    });

    let mut best: Option<(f64, usize)> = None;
    for (k, cand) in candidates.iter().enumerate() {
        if let Some((value, _)) = cand {
            if best.map_or(true, |(bv, _)| *value < bv) {
                best = Some((*value, k));
            }
        }
    }
    let (value, at) = best.expect("singleton subsets always qualify");
    let subset = subsets[at].clone();
    let u = candidates[at].as_ref().expect("winning candidate").1.clone();

    // Unit witness x with ||A o xx*|| = value: x_i = sqrt(value * u_i) on J.
    let mut x = DVector::from_element(n, c(0.0));
    for (slot, &i) in subset.iter().enumerate() {
        x[i] = c((value * u[slot]).max(0.0).sqrt());
    }
    Ok(SpectralIndexResult {
        value,
        method: SpectralMethod::Combinatorial,
        witness_subset: Some(subset),
        witness_u: Some(u),
        witness_x: Some(x),
    })
}

fn top_eigenpair(m: &DMatrix<C64>) -> (f64, VectorC) {
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let mut best = 0usize;
    for k in 1..se.eigenvalues.len() {
        if se.eigenvalues[k] > se.eigenvalues[best] {
            best = k;
        }
    }
    (se.eigenvalues[best], se.eigenvectors.column(best).into())
}

fn hadamard_rank_one(a: &HermitianMatrix, x: &VectorC) -> DMatrix<C64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a.entry(i, j) * x[i] * x[j].conj())
}

/// One projected-subgradient descent run of lambda_max(A o xx*) on the
/// complex unit sphere.
fn descend_spectral(a: &HermitianMatrix, mut x: VectorC, cfg: &OracleConfig) -> (f64, VectorC) {
    let conj_a = a.as_matrix().map(|z| z.conj());
    let mut fx = top_eigenpair(&hadamard_rank_one(a, &x)).0;
    let mut step = 0.25;
    for _ in 0..cfg.max_iters {
        let (_, v) = top_eigenpair(&hadamard_rank_one(a, &x));
        // Wirtinger subgradient: g = v o (conj(A) (x o conj(v)))
        let t = DVector::from_fn(x.len(), |i, _| x[i] * v[i].conj());
        let at = &conj_a * &t;
        let mut g = DVector::from_fn(x.len(), |i, _| v[i] * at[i]);
        let radial = g.dotc(&x).re;
        g -= x.map(|z| z * radial);
        let gn = g.norm();
        if gn < 1e-14 {
            break;
        }
        let mut moved = false;
        let mut trial = step;
        while trial > cfg.step_tol {
            let mut cand = &x - g.map(|z| z * (trial / gn));
            let cn = cand.norm();
            if cn < 1e-300 {
                break;
            }
            cand /= c(cn);
            let fc = top_eigenpair(&hadamard_rank_one(a, &cand)).0;
            if fc < fx {
                x = cand;
                fx = fc;
                step = (trial * 2.0).min(0.5);
                moved = true;
                break;
            }
            trial *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (fx, x)
}

const BATCH: usize = 8;
const IMPROVE_TOL: f64 = 1e-10;

/// Multi-start rank-one minimization of the spectral norm objective.
/// An upper bound on I(sp, A) by construction; the authoritative method for
/// matrices with negative or complex entries.
pub fn spectral_index_search(a: &HermitianMatrix, cfg: &OracleConfig) -> Result<SpectralIndexResult> {
    a.require_psd()?;
    let n = a.dim();

    let start_for = |index: usize| -> VectorC {
        if index < n {
            let mut e = DVector::from_element(n, c(0.0));
            e[index] = c(1.0);
            e
        } else if index == n {
            DVector::from_element(n, c(1.0 / (n as f64).sqrt()))
        } else {
            let mut rng = restart_rng(cfg.seed, index as u64);
            crate::oracle::random_complex_unit(n, &mut rng)
        }
    };

    let total = cfg.restarts.max(n + 1);
    let mut runs: Vec<(f64, VectorC)> = Vec::new();
    let mut best = f64::INFINITY;
    let mut batch_start = 0;
    while batch_start < total {
        let batch_end = (batch_start + BATCH).min(total);
        let outcomes = run_indexed(batch_end - batch_start, |k| {
            descend_spectral(a, start_for(batch_start + k), cfg)
        });
        let mut improved = false;
        for o in outcomes {
            if o.0 < best - IMPROVE_TOL {
                improved = true;
            }
            best = best.min(o.0);
            runs.push(o);
        }
        batch_start = batch_end;
        if !improved && batch_start > n + 1 {
            break;
        }
    }

    let (mut value, mut x) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one restart");
    // polish the winner: a fresh step schedule escapes line-search stalls
    for _ in 0..2 {
        let (fv, fx) = descend_spectral(a, x.clone(), cfg);
        if fv < value {
            value = fv;
            x = fx;
        } else {
            break;
        }
    }
    Ok(SpectralIndexResult {
        value,
        method: SpectralMethod::RankOneSearch,
        witness_subset: None,
        witness_u: None,
        witness_x: Some(x),
    })
}

/// Diagonal relaxation inf { I(sp, D) : D diagonal, D >= A }, computed
/// through the equivalent homogeneous form
///     min { lambda_max(sqrt(A) diag(u) sqrt(A)) : u in the simplex },
/// which is convex, attains the infimum even when no finite diagonal D
/// does, and is minimized by annealed projected gradient descent.
pub fn spectral_index_diag_relax(a: &HermitianMatrix, cfg: &OracleConfig) -> Result<f64> {
    a.require_psd()?;
    let n = a.dim();
    if a.diagonal_real().iter().any(|&d| d <= 0.0) {
        return Ok(0.0);
    }
    let root = a.sqrt_psd()?;
    let cols: Vec<VectorC> = (0..n).map(|i| root.as_matrix().column(i).into()).collect();

    let assemble = |u: &DVector<f64>| -> DMatrix<C64> {
        let mut m = DMatrix::from_element(n, n, c(0.0));
        for (i, col) in cols.iter().enumerate() {
            if u[i] > 0.0 {
                m += (col * col.adjoint()).map(|z| z * u[i]);
            }
        }
        m
    };
    let exact = |u: &DVector<f64>| -> f64 {
        let se = nalgebra::SymmetricEigen::new(assemble(u));
        se.eigenvalues.iter().copied().fold(0.0, f64::max)
    };

    // smoothed objective and gradient at temperature mu
    let smooth_grad = |u: &DVector<f64>, mu: f64| -> (f64, DVector<f64>) {
        let se = nalgebra::SymmetricEigen::new(assemble(u));
        let lmax = se.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = se
            .eigenvalues
            .iter()
            .map(|&l| ((l - lmax) / mu).exp())
            .collect();
        let wsum: f64 = weights.iter().sum();
        let fval = lmax + mu * (wsum.ln());
        let mut grad = DVector::zeros(n);
        for (j, w) in weights.iter().enumerate() {
            if *w < 1e-300 {
                continue;
            }
            let vj = se.eigenvectors.column(j);
            for i in 0..n {
                let overlap = vj.dotc(&cols[i]).norm_sqr();
                grad[i] += (w / wsum) * overlap;
            }
        }
        (fval, grad)
    };

    let run_one = |start: DVector<f64>| -> (f64, DVector<f64>) {
        let mut u = start;
        let mut mu = 0.1;
        while mu > 1e-9 {
            let mut step = 0.5;
            for _ in 0..300 {
                let (fu, g) = smooth_grad(&u, mu);
                let mut moved = false;
                let mut trial = step;
                while trial > 1e-13 {
                    let cand = project_simplex(&(&u - &g * trial));
                    let (fc, _) = smooth_grad(&cand, mu);
                    if fc < fu - 1e-15 {
                        u = cand;
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
            mu *= 0.1;
        }
        (exact(&u), u)
    };

    let restarts = cfg.restarts.min(8).max(2);
    let outcomes = run_indexed(restarts, |k| {
        let start = if k == 0 {
            DVector::from_element(n, 1.0 / n as f64)
        } else if k == 1 {
            // weight inversely to the diagonal: exact for diagonal A
            let d = a.diagonal_real();
            let inv: Vec<f64> = d.iter().map(|&x| 1.0 / x.max(1e-12)).collect();
            let s: f64 = inv.iter().sum();
            DVector::from_iterator(n, inv.iter().map(|&x| x / s))
        } else {
            let mut rng = restart_rng(cfg.seed ^ 0xd1a6, k as u64);
            let raw = DVector::from_fn(n, |_, _| rand::Rng::gen_range(&mut rng, 0.01..1.0f64));
            let s = raw.sum();
            raw / s
        };
        run_one(start)
    });

    let mut best = f64::INFINITY;
    for (v, _) in &outcomes {
        best = best.min(*v);
    }
    // vertex values are exact candidates (D supported on one index)
    for i in 0..n {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        best = best.min(exact(&e));
    }
    Ok(best)
}

fn project_simplex(v: &DVector<f64>) -> DVector<f64> {
    let n = v.len();
    let mut u: Vec<f64> = v.iter().copied().collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        css += uk;
        let t = (css - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    DVector::from_fn(n, |i, _| (v[i] - theta).max(0.0))
}

/// min over unit x of ||D_x B||^2 for a rectangular factor B; equals the
/// spectral index of BB*.
pub fn spectral_index_factored(bmat: &DMatrix<C64>, cfg: &OracleConfig) -> f64 {
    let m = bmat.nrows();
    let objective = |x: &VectorC| -> f64 {
        let scaled = DMatrix::from_fn(m, bmat.ncols(), |i, j| x[i] * bmat[(i, j)]);
        let svd = scaled.svd(false, false);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        smax * smax
    };

    let descend = |mut x: VectorC| -> (f64, VectorC) {
        let mut fx = objective(&x);
        let mut step = 0.25;
        for _ in 0..cfg.max_iters {
            let scaled = DMatrix::from_fn(m, bmat.ncols(), |i, j| x[i] * bmat[(i, j)]);
            let svd = scaled.clone().svd(true, true);
            let mut top = 0usize;
            for k in 1..svd.singular_values.len() {
                if svd.singular_values[k] > svd.singular_values[top] {
                    top = k;
                }
            }
            let sigma = svd.singular_values[top];
            let u = svd.u.as_ref().expect("u").column(top).clone_owned();
            let vrow = svd.v_t.as_ref().expect("v_t").row(top).clone_owned();
            let bv = DVector::from_fn(m, |i, _| {
                (0..bmat.ncols())
                    .map(|j| bmat[(i, j)] * vrow[j].conj())
                    .sum::<C64>()
            });
            // d(sigma^2) ascent direction: sigma * u o conj(Bv)
            let mut g = DVector::from_fn(m, |i, _| u[i] * bv[i].conj() * sigma);
            let radial = g.dotc(&x).re;
            g -= x.map(|z| z * radial);
            let gn = g.norm();
            if gn < 1e-14 {
                break;
            }
            let mut moved = false;
            let mut trial = step;
            while trial > cfg.step_tol {
                let mut cand = &x - g.map(|z| z * (trial / gn));
                let cn = cand.norm();
                if cn < 1e-300 {
                    break;
                }
                cand /= c(cn);
                let fc = objective(&cand);
                if fc < fx {
                    x = cand;
                    fx = fc;
                    step = (trial * 2.0).min(0.5);
                    moved = true;
                    break;
                }
                trial *= 0.5;
            }
            if !moved {
                break;
            }
        }
        (fx, x)
    };

    let start_for = |index: usize| -> VectorC {
        if index < m {
            let mut e = DVector::from_element(m, c(0.0));
            e[index] = c(1.0);
            e
        } else if index == m {
            DVector::from_element(m, c(1.0 / (m as f64).sqrt()))
        } else {
            let mut rng = restart_rng(cfg.seed ^ 0xfac, index as u64);
            crate::oracle::random_complex_unit(m, &mut rng)
        }
    };

    let total = cfg.restarts.max(m + 1);
    let mut best = f64::INFINITY;
    let mut batch_start = 0;
    while batch_start < total {
        let batch_end = (batch_start + BATCH).min(total);
        let outcomes = run_indexed(batch_end - batch_start, |k| descend(start_for(batch_start + k)));
        let mut improved = false;
        for (v, _) in outcomes {
            if v < best - IMPROVE_TOL {
                improved = true;
            }
            best = best.min(v);
        }
        batch_start = batch_end;
        if !improved && batch_start > m + 1 {
            break;
        }
    }
    best
}

/// Closed-form 2x2 test for 0 != I(sp, A) = I(A):
/// b real and 0 <= b <= min(a, c) != 0.
pub fn two_by_two_characterization(a: &HermitianMatrix) -> Result<bool> {
    if a.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: a.dim(),
        });
    }
    a.require_psd()?;
    let scale = a.max_abs_entry().max(1.0);
    let b = a.entry(0, 1);
    let amin = a.entry(0, 0).re.min(a.entry(1, 1).re);
    Ok(b.im.abs() <= 1e-12 * scale
        && b.re >= -1e-12 * scale
        && b.re <= amin + 1e-12 * scale
        && amin > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{hadamard, principal_submatrix, EPS_RANGE};
    use crate::minimal::minimal_index;

    fn neg_offdiag_matrix() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![2.0, -1.0], vec![-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn subset_order_is_cardinality_then_lex() {
        let subs = subsets_by_cardinality(3);
        let expect: Vec<Vec<usize>> = vec![
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ];
        assert_eq!(subs, expect);
        assert_eq!(subsets_by_cardinality(5).len(), 31);
    }

    #[test]
    fn combinatorial_on_positive_diagonal() {
        // diag(d): value (sum 1/d_i)^{-1} via the full subset
        let a = HermitianMatrix::diagonal(&[1.0, 2.0, 4.0]);
        let out = spectral_index_combinatorial(&a).unwrap();
        let expect = 1.0 / (1.0 + 0.5 + 0.25);
        assert!((out.value - expect).abs() < 1e-12);
        assert_eq!(out.witness_subset.unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn combinatorial_on_all_ones() {
        // [[1,1],[1,1]]: value 1 with witness {0} (b at the boundary)
        let a = HermitianMatrix::all_ones(2);
        let out = spectral_index_combinatorial(&a).unwrap();
        assert!((out.value - 1.0).abs() < 1e-12);
        assert_eq!(out.witness_subset.unwrap(), vec![0]);
    }

    #[test]
    fn combinatorial_lambda_fixture() {
        // Lambda for x = (2, 1/2): I(sp) = 3.125
        let lam = crate::opineq::lambda_matrix(&[2.0, 0.5]).unwrap();
        let out = spectral_index_combinatorial(lam.matrix()).unwrap();
        assert!((out.value - 3.125).abs() < 1e-10, "got {}", out.value);
    }

    #[test]
    fn combinatorial_witness_invariants() {
        let mut rng = crate::oracle::seeded_rng(71);
        for _ in 0..25 {
            let a = crate::oracle::random_nonneg_psd(4, &mut rng);
            let out = spectral_index_combinatorial(&a).unwrap();
            let subset = out.witness_subset.as_ref().unwrap();
            let u = out.witness_u.as_ref().unwrap();
            assert!(u.iter().all(|&v| v >= 0.0));
            // residual of A_J u = p_J
            let sub = principal_submatrix(&a, subset).unwrap();
            let k = subset.len();
            let mut resid: f64 = 0.0;
            for r in 0..k {
                let mut acc = 0.0;
                for s in 0..k {
                    acc += sub.entry(r, s).re * u[s];
                }
                resid += (acc - 1.0) * (acc - 1.0);
            }
            assert!(resid.sqrt() <= EPS_RANGE * (k as f64).sqrt() * 10.0);
            let total: f64 = u.iter().sum();
            assert!((out.value * total - 1.0).abs() < 1e-8);
            // witness x reproduces the value
            let x = out.witness_x.as_ref().unwrap();
            assert!((x.norm() - 1.0).abs() < 1e-10);
            let norm = hadamard(&a, &HermitianMatrix::rank_one(x))
                .unwrap()
                .spectral_norm();
            assert!((norm - out.value).abs() < 1e-8, "{norm} vs {}", out.value);
        }
    }

    #[test]
    fn zero_diagonal_short_circuits() {
        let a = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let out = spectral_index_combinatorial(&a).unwrap();
        assert_eq!(out.value, 0.0);
        assert_eq!(out.witness_subset.unwrap(), vec![1]);
    }

    #[test]
    fn search_matches_pinned_fixture() {
        let out = spectral_index_search(&neg_offdiag_matrix(), &OracleConfig::with_seed(2)).unwrap();
        assert!((out.value - 1.0).abs() < 1e-7, "got {}", out.value);
        let x = out.witness_x.unwrap();
        assert!((x.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn search_on_identity_halves() {
        let out =
            spectral_index_search(&HermitianMatrix::identity(2), &OracleConfig::quick(3)).unwrap();
        assert!((out.value - 0.5).abs() < 1e-7);
    }

    #[test]
    fn search_agrees_with_combinatorial_on_nonneg() {
        let mut rng = crate::oracle::seeded_rng(73);
        let cfg = OracleConfig::with_seed(73);
        for _ in 0..10 {
            let a = crate::oracle::random_nonneg_psd(4, &mut rng);
            let comb = spectral_index_combinatorial(&a).unwrap().value;
            let search = spectral_index_search(&a, &cfg).unwrap().value;
            assert!(
                (comb - search).abs() < 1e-6,
                "comb {comb} search {search}"
            );
        }
    }

    #[test]
    fn diag_relax_exact_on_diagonal() {
        let a = HermitianMatrix::diagonal(&[1.0, 2.0, 4.0]);
        let val = spectral_index_diag_relax(&a, &OracleConfig::with_seed(5)).unwrap();
        let expect = 1.0 / (1.0 + 0.5 + 0.25);
        assert!((val - expect).abs() < 1e-6, "got {val}, want {expect}");
    }

    #[test]
    fn diag_relax_all_ones_scan_oracle() {
        // one-parameter family D = diag(1+t, 1+1/t) dominates [[1,1],[1,1]]
        // with I(sp, D) = 1 for every t; the relax value must match.
        let mut scan_best = f64::INFINITY;
        for k in 1..200 {
            let t = 0.05 * k as f64;
            let d1: f64 = 1.0 + t;
            let d2: f64 = 1.0 + 1.0 / t;
            scan_best = scan_best.min(1.0 / (1.0 / d1 + 1.0 / d2));
        }
        assert!((scan_best - 1.0).abs() < 1e-12);
        let a = HermitianMatrix::all_ones(2);
        let val = spectral_index_diag_relax(&a, &OracleConfig::with_seed(7)).unwrap();
        assert!((val - 1.0).abs() < 1e-5, "got {val}");
    }

    #[test]
    fn diag_relax_matches_search_on_neg_offdiag_matrix() {
        // the infimum is not attained at any finite diagonal here, but the
        // homogeneous form still reaches the limit value 1
        let val = spectral_index_diag_relax(&neg_offdiag_matrix(), &OracleConfig::with_seed(9)).unwrap();
        assert!((val - 1.0).abs() < 1e-5, "got {val}");
    }

    #[test]
    fn factored_identity() {
        let b = DMatrix::identity(3, 3).map(|x: f64| c(x));
        let val = spectral_index_factored(&b, &OracleConfig::quick(11));
        assert!((val - 1.0 / 3.0).abs() < 1e-7, "got {val}");
    }

    #[test]
    fn factored_matches_search_via_cholesky_like_factor() {
        let a = neg_offdiag_matrix();
        let f = a.psd_factor().unwrap();
        let val = spectral_index_factored(&f, &OracleConfig::with_seed(13));
        assert!((val - 1.0).abs() < 1e-6, "got {val}");
    }

    #[test]
    fn inflation_preserves_spectral_index() {
        let mut rng = crate::oracle::seeded_rng(79);
        let cfg = OracleConfig::with_seed(79);
        let a = crate::oracle::random_psd(3, &mut rng);
        let base = spectral_index_factored(&a.psd_factor().unwrap(), &cfg);
        for m in [2usize, 3] {
            let infl = crate::matrix::inflation(&a, m);
            let val = spectral_index_factored(&infl.psd_factor().unwrap(), &cfg);
            assert!((val - base).abs() < 1e-6, "m={m}: {val} vs {base}");
        }
    }

    #[test]
    fn two_by_two_cases() {
        let yes = HermitianMatrix::from_real_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        assert!(two_by_two_characterization(&yes).unwrap());
        assert!(!two_by_two_characterization(&neg_offdiag_matrix()).unwrap());
        let no = HermitianMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 5.0]]).unwrap();
        assert!(!two_by_two_characterization(&no).unwrap());
        assert!(matches!(
            two_by_two_characterization(&HermitianMatrix::identity(3)),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn two_by_two_matches_numeric_equivalence() {
        let mut rng = crate::oracle::seeded_rng(83);
        let cfg = OracleConfig::quick(83);
        for k in 0..30 {
            let a = if k % 2 == 0 {
                crate::oracle::random_nonneg_psd(2, &mut rng)
            } else {
                crate::oracle::random_real_psd(2, &mut rng)
            };
            let closed = two_by_two_characterization(&a).unwrap();
            let isp = spectral_index_search(&a, &cfg).unwrap().value;
            let imin = minimal_index(&a).unwrap().value;
            let numeric = (isp - imin).abs() <= 1e-7 && isp > 1e-9;
            assert_eq!(closed, numeric, "entries {:?}", a.as_matrix().as_slice());
        }
    }

    #[test]
    fn nonneg_solution_examples() {
        let a = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let out = nonneg_solution(&a).unwrap();
        assert!(out.feasible);
        assert!(out.u[0].abs() < 1e-10 && (out.u[1] - 1.0).abs() < 1e-10);

        let lam = crate::opineq::lambda_matrix(&[1.0, 2.0, 3.0]).unwrap();
        let out = nonneg_solution(lam.matrix()).unwrap();
        assert!(!out.feasible);

        let zero_diag = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert!(matches!(
            nonneg_solution(&zero_diag),
            Err(Error::ZeroDiagonal { index: 1 })
        ));
    }

    #[test]
    fn thm_28_equivalence_on_random_instances() {
        let mut rng = crate::oracle::seeded_rng(89);
        let cfg = OracleConfig::quick(89);
        for _ in 0..30 {
            let a = crate::oracle::random_nonneg_psd(4, &mut rng);
            if a.diagonal_real().iter().any(|&d| d <= 1e-9) {
                continue;
            }
            let feas = nonneg_solution(&a).unwrap().feasible;
            let isp = spectral_index_combinatorial(&a).unwrap().value;
            let imin = minimal_index(&a).unwrap().value;
            let agree = (isp - imin).abs() <= 1e-7;
            assert_eq!(feas, agree, "feasible={feas} isp={isp} imin={imin}");
            let _ = cfg;
        }
    }

    #[test]
    fn submatrix_monotonicity_exhaustive() {
        let mut rng = crate::oracle::seeded_rng(97);
        for _ in 0..10 {
            let a = crate::oracle::random_nonneg_psd(4, &mut rng);
            let full = spectral_index_combinatorial(&a).unwrap().value;
            for j in subsets_by_cardinality(4) {
                let sub = principal_submatrix(&a, &j).unwrap();
                let sval = spectral_index_combinatorial(&sub).unwrap().value;
                assert!(full <= sval + 1e-9, "I(sp,A)={full} > I(sp,A_J)={sval}");
            }
        }
    }

    #[test]
    fn witness_is_eigenvector_of_hadamard_compression() {
        // (A o xx*) x = I(A_J) x for the combinatorial witness
        let mut rng = crate::oracle::seeded_rng(101);
        for _ in 0..10 {
            let a = crate::oracle::random_nonneg_psd(4, &mut rng);
            let out = spectral_index_combinatorial(&a).unwrap();
            let x = out.witness_x.unwrap();
            let m = hadamard(&a, &HermitianMatrix::rank_one(&x)).unwrap();
            let mx = m.as_matrix() * &x;
            let expect = x.map(|z| z * out.value);
            assert!((mx - expect).norm() < 1e-6);
        }
    }

    #[test]
    fn sandwich_bounds_hold() {
        let mut rng = crate::oracle::seeded_rng(103);
        for _ in 0..20 {
            let a = crate::oracle::random_nonneg_psd(4, &mut rng);
            let isp = spectral_index_combinatorial(&a).unwrap().value;
            let imin = minimal_index(&a).unwrap().value;
            let dmin = a
                .diagonal_real()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            let harmonic = 1.0 / a.diagonal_real().iter().map(|d| 1.0 / d).sum::<f64>();
            assert!(imin <= isp + 1e-9);
            assert!(isp <= dmin + 1e-9);
            assert!(harmonic <= isp + 1e-9);
        }
    }
}
