//! Lambda matrices (lambda_i lambda_j + 1/(lambda_i lambda_j)), their
//! closed-form indexes, and the optimal constant M(S) in
//! ||STS + S^-1 T S^-1|| >= M(S) ||T|| for positive T.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{c, hadamard, HermitianMatrix};

/// Relative tolerance for merging equal spectrum values; the closed forms
/// are discontinuous in the number of distinct values.
pub const MERGE_TOL: f64 = 1e-12;

/// Finite multiset of nonzero real eigenvalues of an invertible selfadjoint
/// operator.
#[derive(Debug, Clone)]
pub struct SpectrumList {
    values: Vec<f64>,
}

impl SpectrumList {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if values.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(Error::ZeroEigenvalue);
        }
        Ok(Self { values })
    }

    /// Parse a comma-separated list like "0.5,2,3".
    pub fn parse(s: &str) -> Result<Self> {
        let values: std::result::Result<Vec<f64>, _> =
            s.split(',').map(|tok| tok.trim().parse::<f64>()).collect();
        let values = values.map_err(|e| Error::Parse {
            field: "spectrum".into(),
            message: e.to_string(),
        })?;
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// |lambda| for every value, merged to distinct representatives.
    pub fn distinct_moduli(&self) -> Vec<f64> {
        merge_distinct(&self.values.iter().map(|v| v.abs()).collect::<Vec<_>>())
    }
}

/// Sort and merge values that agree within MERGE_TOL relative tolerance.
pub fn merge_distinct(values: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        match out.last() {
            Some(&last) if (x - last).abs() <= MERGE_TOL * last.abs().max(x.abs()).max(1.0) => {}
            _ => out.push(x),
        }
    }
    out
}

/// The rank <= 2 PSD matrix Lambda_x = (l_i l_j + 1/(l_i l_j)).
#[derive(Debug, Clone)]
pub struct LambdaMatrix {
    matrix: HermitianMatrix,
    lambdas: Vec<f64>,
}

impl LambdaMatrix {
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

pub fn lambda_matrix(x: &[f64]) -> Result<LambdaMatrix> {
    for (i, &v) in x.iter().enumerate() {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::NonPositiveEntry { index: i, value: v });
        }
    }
    if x.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let n = x.len();
    let m = DMatrix::from_fn(n, n, |i, j| c(x[i] * x[j] + 1.0 / (x[i] * x[j])));
    Ok(LambdaMatrix {
        matrix: HermitianMatrix::new(m)?,
        lambdas: x.to_vec(),
    })
}

/// Closed form for I(Lambda_x) by the count of distinct values:
/// one value -> l^2 + l^-2; two -> (l+m)^2/(1+l^2 m^2); three or more -> 0.
pub fn lambda_minimal_index(x: &[f64]) -> Result<f64> {
    let lam = lambda_matrix(x)?;
    let distinct = merge_distinct(lam.lambdas());
    Ok(match distinct.as_slice() {
        [l] => l * l + 1.0 / (l * l),
        [l, m] => (l + m) * (l + m) / (1.0 + l * l * m * m),
        _ => 0.0,
    })
}

fn pair_term(l: f64, m: f64) -> f64 {
    (l + m) * (l + m) / (1.0 + l * l * m * m)
}

/// True when the pair (l < m) satisfies l^2 <= 1/(l m) <= m^2, the
/// admissibility condition for the two-point term.
fn pair_admissible(l: f64, m: f64) -> bool {
    let mid = 1.0 / (l * m);
    l * l <= mid && mid <= m * m
}

/// Closed form I(sp, Lambda_x) = min(M1, M2): M1 over diagonal entries,
/// M2 over admissible distinct pairs.
pub fn lambda_spectral_index(x: &[f64]) -> Result<f64> {
    let lam = lambda_matrix(x)?;
    Ok(spectral_closed_form(&merge_distinct(lam.lambdas())))
}

fn spectral_closed_form(distinct: &[f64]) -> f64 {
    let m1 = distinct
        .iter()
        .map(|&l| l * l + 1.0 / (l * l))
        .fold(f64::INFINITY, f64::min);
    let mut m2 = f64::INFINITY;
    for (i, &l) in distinct.iter().enumerate() {
        for &m in &distinct[i + 1..] {
            if pair_admissible(l, m) {
                m2 = m2.min(pair_term(l, m));
            }
        }
    }
    m1.min(m2)
}

/// The optimal constant M(S) = min(M1(S), M2(S)) for the finite spectrum
/// of an invertible selfadjoint S; signs are dropped first (the polar part
/// commutes away).
pub fn best_constant(s: &SpectrumList) -> f64 {
    spectral_closed_form(&s.distinct_moduli())
}

/// Which spectrum values attain M(S).
#[derive(Debug, Clone)]
pub enum BestConstantArgmin {
    Diagonal(f64),
    Pair(f64, f64),
}

#[derive(Debug, Clone)]
pub struct BestConstantReport {
    pub m: f64,
    pub m1: f64,
    /// None when no admissible pair exists.
    pub m2: Option<f64>,
    pub argmin: BestConstantArgmin,
}

pub fn best_constant_detailed(s: &SpectrumList) -> BestConstantReport {
    let distinct = s.distinct_moduli();
    let mut m1 = f64::INFINITY;
    let mut m1_arg = distinct[0];
    for &l in &distinct {
        let v = l * l + 1.0 / (l * l);
        if v < m1 {
            m1 = v;
            m1_arg = l;
        }
    }
    let mut m2: Option<f64> = None;
    let mut m2_arg = (0.0, 0.0);
    for (i, &l) in distinct.iter().enumerate() {
        for &mu in &distinct[i + 1..] {
            if pair_admissible(l, mu) {
                let v = pair_term(l, mu);
                if m2.map_or(true, |cur| v < cur) {
                    m2 = Some(v);
                    m2_arg = (l, mu);
                }
            }
        }
    }
    match m2 {
        Some(v2) if v2 < m1 => BestConstantReport {
            m: v2,
            m1,
            m2,
            argmin: BestConstantArgmin::Pair(m2_arg.0, m2_arg.1),
        },
        _ => BestConstantReport {
            m: m1,
            m1,
            m2,
            argmin: BestConstantArgmin::Diagonal(m1_arg),
        },
    }
}

/// Evaluates both sides of ||STS + S^-1 T S^-1|| >= M(S) ||T|| for a
/// positive diagonal S (given by its diagonal) and PSD T. Returns
/// (lhs, rhs).
pub fn verify_inequality(s_diag: &[f64], t: &HermitianMatrix) -> Result<(f64, f64)> {
    if s_diag.len() != t.dim() {
        return Err(Error::DimensionMismatch {
            left: s_diag.len(),
            right: t.dim(),
        });
    }
    for (i, &v) in s_diag.iter().enumerate() {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::NonPositiveEntry { index: i, value: v });
        }
    }
    t.require_psd()?;
    let n = t.dim();
    let sts = DMatrix::from_fn(n, n, |i, j| {
        t.entry(i, j) * (s_diag[i] * s_diag[j] + 1.0 / (s_diag[i] * s_diag[j]))
    });
    let combined = HermitianMatrix::new(sts)?;

    // STS + S^-1 T S^-1 is exactly Lambda o T
    let lam = lambda_matrix(s_diag)?;
    let lam_t = hadamard(lam.matrix(), t)?;
    let diff = (combined.as_matrix() - lam_t.as_matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(
        diff <= 1e-10 * combined.max_abs_entry().max(1.0),
        "STS + S^-1 T S^-1 deviates from Lambda o T by {diff}"
    );

    let lhs = combined.spectral_norm();
    let spectrum = SpectrumList::new(s_diag.to_vec())?;
    let rhs = best_constant(&spectrum) * t.spectral_norm();
    Ok((lhs, rhs))
}

/// A PSD witness T making the inequality tight: T = xx* for the rank-one
/// witness of the combinatorial spectral index of Lambda.
pub fn tight_witness(s_diag: &[f64]) -> Result<(HermitianMatrix, f64)> {
    let lam = lambda_matrix(s_diag)?;
    let out = crate::spectral::spectral_index_combinatorial(lam.matrix())?;
    let x = out.witness_x.expect("combinatorial path always yields x");
    Ok((HermitianMatrix::rank_one(&x), out.value))
}
