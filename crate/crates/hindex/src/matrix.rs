//! Hermitian matrix domain type and the Hadamard/Kronecker algebra every
//! index computation is built on.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here can be shared freely across worker threads.

use std::sync::OnceLock;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type VectorC = DVector<C64>;

/// Relative tolerance for the PSD classification:
/// min eigenvalue >= -EPS_PSD * max(1, trace).
pub const EPS_PSD: f64 = 1e-9;

/// Singular values below SV_CUTOFF * sigma_max are treated as zero in
/// pseudo-solves and rank decisions.
pub const SV_CUTOFF: f64 = 1e-10;

/// Relative residual threshold for "p lies in the range of A".
pub const EPS_RANGE: f64 = 1e-8;

pub fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// The all-ones vector p = (1, ..., 1)*.
pub fn ones(n: usize) -> VectorC {
    DVector::from_element(n, c(1.0))
}

/// Square complex matrix kept exactly Hermitian by projection (M + M*)/2
/// at construction.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    mat: DMatrix<C64>,
    min_eig: OnceLock<f64>,
}

impl HermitianMatrix {
    /// Build from an arbitrary square matrix; the Hermitian projection
    /// (M + M*)/2 is applied, which is the identity on Hermitian input.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let adj = m.adjoint();
        let mat = (m + adj).map(|z| z * 0.5);
        Ok(Self {
            mat,
            min_eig: OnceLock::new(),
        })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: rows.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        let m = DMatrix::from_fn(n, n, |i, j| c(rows[i][j]));
        Self::new(m)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is square")
    }

    /// The all-ones matrix P = pp*.
    pub fn all_ones(n: usize) -> Self {
        Self::new(DMatrix::from_element(n, n, c(1.0))).expect("square")
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let v = DVector::from_iterator(d.len(), d.iter().map(|&x| c(x)));
        Self::new(DMatrix::from_diagonal(&v)).expect("square")
    }

    /// Rank-one matrix xx*.
    pub fn rank_one(x: &VectorC) -> Self {
        Self::new(x * x.adjoint()).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace_real(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// True when every entry has negligible imaginary part (relative to the
    /// matrix scale).
    pub fn is_real(&self) -> bool {
        let scale = self.max_abs_entry().max(1.0);
        self.mat.iter().all(|z| z.im.abs() <= 1e-12 * scale)
    }

    /// True when real and every entry is >= 0 up to rounding.
    pub fn is_entrywise_nonneg(&self) -> bool {
        let scale = self.max_abs_entry().max(1.0);
        self.is_real() && self.mat.iter().all(|z| z.re >= -1e-12 * scale)
    }

    /// Checks the entrywise-nonnegative precondition, reporting the first
    /// offending entry.
    pub fn require_entrywise_nonneg(&self) -> Result<()> {
        let scale = self.max_abs_entry().max(1.0);
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                let z = self.mat[(i, j)];
                if z.im.abs() > 1e-12 * scale {
                    return Err(Error::NonRealEntry { row: i, col: j });
                }
                if z.re < -1e-12 * scale {
                    return Err(Error::NegativeEntry { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Smallest eigenvalue, computed once and cached.
    pub fn min_eigenvalue(&self) -> f64 {
        *self.min_eig.get_or_init(|| {
            let se = nalgebra::SymmetricEigen::new(self.mat.clone());
            se.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
        })
    }

    /// PSD classification: min eigenvalue >= -EPS_PSD * max(1, trace).
    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -EPS_PSD * self.trace_real().abs().max(1.0)
    }

    pub fn require_psd(&self) -> Result<()> {
        if self.is_psd() {
            Ok(())
        } else {
            Err(Error::NotPsd {
                min_eig: self.min_eigenvalue(),
            })
        }
    }

    /// Eigendecomposition with eigenvalues sorted ascending.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let se = nalgebra::SymmetricEigen::new(self.mat.clone());
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let vals: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let vecs = DMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
        (vals, vecs)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        let se = nalgebra::SymmetricEigen::new(self.mat.clone());
        se.eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Spectral norm (largest singular value); for a Hermitian matrix this
    /// is the largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        let se = nalgebra::SymmetricEigen::new(self.mat.clone());
        se.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = {
            let se = nalgebra::SymmetricEigen::new(self.mat.clone());
            se.eigenvalues.iter().map(|v| v.abs()).collect()
        };
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// A factor B with BB* = A (eigenvalues clipped at zero).
    pub fn psd_factor(&self) -> Result<DMatrix<C64>> {
        self.require_psd()?;
        let (vals, vecs) = self.eigen();
        let n = self.dim();
        let root = DVector::from_iterator(n, vals.iter().map(|&v| c(v.max(0.0).sqrt())));
        Ok(&vecs * DMatrix::from_diagonal(&root))
    }

    /// Hermitian square root of a PSD matrix.
    pub fn sqrt_psd(&self) -> Result<HermitianMatrix> {
        self.require_psd()?;
        let (vals, vecs) = self.eigen();
        let n = self.dim();
        let root = DVector::from_iterator(n, vals.iter().map(|&v| c(v.max(0.0).sqrt())));
        HermitianMatrix::new(&vecs * DMatrix::from_diagonal(&root) * vecs.adjoint())
    }

    /// Orthogonal projector onto ker A (eigenvectors whose eigenvalue is
    /// below the relative cutoff).
    pub fn kernel_projector(&self) -> HermitianMatrix {
        let (vals, vecs) = self.eigen();
        let n = self.dim();
        let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let mut q = DMatrix::zeros(n, n);
        for (k, &v) in vals.iter().enumerate() {
            if v.abs() <= SV_CUTOFF * scale {
                let u = vecs.column(k);
                q += &u * u.adjoint();
            }
        }
        HermitianMatrix::new(q).expect("square")
    }

    /// Least-squares/pseudo-inverse solve of Ax = b through the spectral
    /// decomposition, treating eigenvalues below SV_CUTOFF * sigma_max as
    /// zero. Returns the minimum-norm solution.
    pub fn pseudo_solve(&self, b: &VectorC) -> VectorC {
        let (vals, vecs) = self.eigen();
        let n = self.dim();
        let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let cutoff = SV_CUTOFF * scale;
        let mut x = DVector::from_element(n, c(0.0));
        for (k, &v) in vals.iter().enumerate() {
            if v.abs() > cutoff {
                let u = vecs.column(k);
                let coef = u.dotc(b) / c(v);
                x += u * coef;
            }
        }
        x
    }
}

impl PartialEq for HermitianMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

/// Entrywise (Hadamard) product. PSD inputs give a PSD output by the Schur
/// product theorem.
pub fn hadamard(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    HermitianMatrix::new(a.as_matrix().component_mul(b.as_matrix()))
}

/// Kronecker product A (x) B in block layout (A_ij * B).
pub fn kronecker(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::new(a.as_matrix().kronecker(b.as_matrix())).expect("square")
}

/// Inflation A^(m): the Kronecker product of the m x m all-ones matrix
/// with A.
pub fn inflation(a: &HermitianMatrix, m: usize) -> HermitianMatrix {
    kronecker(&HermitianMatrix::all_ones(m), a)
}

/// Principal submatrix A_J. Indices are 0-based and returned in ascending
/// order.
pub fn principal_submatrix(a: &HermitianMatrix, indices: &[usize]) -> Result<HermitianMatrix> {
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let n = a.dim();
    let mut idx: Vec<usize> = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    for &i in &idx {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
    }
    let k = idx.len();
    HermitianMatrix::from_fn(k, |r, s| a.entry(idx[r], idx[s]))
}

/// ww* o C = D_w C D_w* for a unimodular vector w; every Schatten norm is
/// preserved since D_w is unitary.
pub fn unimodular_conjugate(cm: &HermitianMatrix, w: &VectorC) -> Result<HermitianMatrix> {
    if w.len() != cm.dim() {
        return Err(Error::DimensionMismatch {
            left: cm.dim(),
            right: w.len(),
        });
    }
    for (i, z) in w.iter().enumerate() {
        if (z.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnimodular {
                index: i,
                modulus: z.norm(),
            });
        }
    }
    let p = HermitianMatrix::rank_one(w);
    hadamard(&p, cm)
}
