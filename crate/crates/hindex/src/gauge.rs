//! Unitarily invariant norms through their symmetric gauge functions.
//!
//! A descriptor names a gauge (Schatten-p or Ky Fan k) and applies it to the
//! singular values of a matrix. Descriptors are normalized so that the norm
//! of E_11 is exactly 1, which both families already satisfy.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{C64, HermitianMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeKind {
    /// Schatten p-norm, 1 <= p <= infinity. p = 1 is the trace norm,
    /// p = 2 the Frobenius norm, p = infinity the spectral norm.
    Schatten(f64),
    /// Ky Fan k-norm: sum of the k largest singular values.
    KyFan(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormDescriptor {
    kind: GaugeKind,
    normalization: f64,
}

impl NormDescriptor {
    pub fn schatten(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::BadNorm(format!("schatten exponent {p} not in [1, inf]")));
        }
        let mut d = Self {
            kind: GaugeKind::Schatten(p),
            normalization: 1.0,
        };
        // gauge of e_1 is 1 for every member of the family; keep the
        // normalization explicit anyway so N(E_11) = 1 holds by construction.
        d.normalization = 1.0 / d.raw_gauge(&[1.0]);
        Ok(d)
    }

    pub fn ky_fan(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadNorm("ky fan order must be >= 1".into()));
        }
        let mut d = Self {
            kind: GaugeKind::KyFan(k),
            normalization: 1.0,
        };
        d.normalization = 1.0 / d.raw_gauge(&[1.0]);
        Ok(d)
    }

    pub fn spectral() -> Self {
        Self::schatten(f64::INFINITY).expect("valid")
    }

    pub fn frobenius() -> Self {
        Self::schatten(2.0).expect("valid")
    }

    pub fn trace_norm() -> Self {
        Self::schatten(1.0).expect("valid")
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn label(&self) -> String {
        match self.kind {
            GaugeKind::Schatten(p) if p.is_infinite() => "schatten:inf".into(),
            GaugeKind::Schatten(p) => format!("schatten:{p}"),
            GaugeKind::KyFan(k) => format!("kyfan:{k}"),
        }
    }

    /// Parse "schatten:p" (p a number or "inf") or "kyfan:k".
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::BadNorm(format!("{m}: {s}"));
        let (family, arg) = s.split_once(':').ok_or_else(|| bad("expected family:arg"))?;
        match family {
            "schatten" | "p" => {
                let p = if arg == "inf" || arg == "sp" {
                    f64::INFINITY
                } else {
                    arg.parse::<f64>().map_err(|_| bad("bad exponent"))?
                };
                Self::schatten(p)
            }
            "kyfan" | "k" => {
                let k = arg.parse::<usize>().map_err(|_| bad("bad order"))?;
                Self::ky_fan(k)
            }
            _ => Err(bad("unknown norm family")),
        }
    }

    fn raw_gauge(&self, sv: &[f64]) -> f64 {
        match self.kind {
            GaugeKind::Schatten(p) => {
                if p.is_infinite() {
                    sv.iter().fold(0.0, |m, &s| m.max(s.abs()))
                } else if (p - 1.0).abs() < f64::EPSILON {
                    sv.iter().map(|s| s.abs()).sum()
                } else {
                    sv.iter().map(|s| s.abs().powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
            GaugeKind::KyFan(k) => {
                let mut v: Vec<f64> = sv.iter().map(|s| s.abs()).collect();
                v.sort_by(|a, b| b.total_cmp(a));
                v.iter().take(k).sum()
            }
        }
    }

    /// The symmetric gauge applied to a vector of singular values.
    pub fn gauge(&self, sv: &[f64]) -> f64 {
        self.normalization * self.raw_gauge(sv)
    }

    /// Norm of a general complex matrix via its singular values.
    pub fn evaluate(&self, m: &DMatrix<C64>) -> f64 {
        let svd = m.clone().svd(false, false);
        self.gauge(svd.singular_values.as_slice())
    }

    /// Norm of a Hermitian matrix (singular values = |eigenvalues|).
    pub fn eval_hermitian(&self, a: &HermitianMatrix) -> f64 {
        self.gauge(&a.singular_values())
    }

    /// Dual gauge evaluated at a real vector: the l_q norm for schatten(p)
    /// with 1/p + 1/q = 1, and max(max|v_i|, sum|v_i|/k) for kyfan(k).
    pub fn dual_gauge(&self, v: &[f64]) -> f64 {
        match self.kind {
            GaugeKind::Schatten(p) => {
                let q = conjugate_exponent(p);
                if q.is_infinite() {
                    v.iter().fold(0.0, |m, &s| m.max(s.abs()))
                } else if (q - 1.0).abs() < f64::EPSILON {
                    v.iter().map(|s| s.abs()).sum()
                } else {
                    v.iter().map(|s| s.abs().powf(q)).sum::<f64>().powf(1.0 / q)
                }
            }
            GaugeKind::KyFan(k) => {
                let max = v.iter().fold(0.0f64, |m, &s| m.max(s.abs()));
                let sum: f64 = v.iter().map(|s| s.abs()).sum();
                max.max(sum / k as f64)
            }
        }
    }

    /// The dual descriptor, defined within the family only for Schatten
    /// norms (the Ky Fan dual is not a Ky Fan norm).
    pub fn dual(&self) -> Option<NormDescriptor> {
        match self.kind {
            GaugeKind::Schatten(p) => Some(Self::schatten(conjugate_exponent(p)).expect("valid")),
            GaugeKind::KyFan(_) => None,
        }
    }
}

/// q with 1/p + 1/q = 1.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if (p - 1.0).abs() < f64::EPSILON {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}
