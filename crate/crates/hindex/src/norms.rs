//! Indexes for general unitarily invariant norms: the trace-norm and
//! Frobenius closed forms, diagonal and rank-one formulas, certified lower
//! bounds, the sampling oracle for arbitrary norms, and the hunt for
//! matrices where the diagonal-domination formula fails for the 2-norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::NormDescriptor;
use crate::matrix::{c, HermitianMatrix, VectorC};
use crate::oracle::{random_psd_probe, restart_rng, OracleConfig, ProbeArgmin};
use crate::spectral::{spectral_index_combinatorial, spectral_index_search, N_MAX_COMBINATORIAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormIndexMethod {
    TraceFormula,
    FrobeniusViaSpectral,
    DiagonalDual,
    RankOne,
    SpectralCombinatorial,
    SpectralSearch,
    SearchUpperBound,
    ZeroDiagonal,
}

#[derive(Debug, Clone)]
pub struct NormIndexResult {
    pub value: f64,
    pub norm: NormDescriptor,
    pub method: NormIndexMethod,
    /// True when the value is an exact index, false for upper-bound
    /// estimates from the sampling oracle.
    pub exact: bool,
    pub witness_x: Option<VectorC>,
}

/// I(1, A) = min_i A_ii.
pub fn trace_index(a: &HermitianMatrix) -> Result<f64> {
    a.require_psd()?;
    Ok(a.diagonal_real()
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

/// The matrix conj(A) o A = (|A_ij|^2), always real with nonnegative
/// entries.
pub fn abs_squared(a: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::from_fn(a.dim(), |i, j| c(a.entry(i, j).norm_sqr()))
        .expect("square")
}

/// I(2, A) = sqrt(I(sp, conj(A) o A)). Defined for any selfadjoint A whose
/// squared-modulus matrix is PSD (automatic when A itself is PSD).
pub fn frobenius_index(a: &HermitianMatrix) -> Result<NormIndexResult> {
    let b = abs_squared(a);
    if !b.is_psd() {
        return Err(Error::ExtensionInapplicable);
    }
    let spectral = spectral_index_combinatorial(&b)?;
    Ok(NormIndexResult {
        value: spectral.value.max(0.0).sqrt(),
        norm: NormDescriptor::frobenius(),
        method: NormIndexMethod::FrobeniusViaSpectral,
        exact: true,
        witness_x: spectral.witness_x,
    })
}

/// I(N, D) = N'(D^-1)^-1 for a positive diagonal matrix given by its
/// diagonal entries.
pub fn diagonal_index(norm: &NormDescriptor, diag: &[f64]) -> Result<f64> {
    for (i, &d) in diag.iter().enumerate() {
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NonPositiveEntry { index: i, value: d });
        }
    }
    let inv: Vec<f64> = diag.iter().map(|&d| 1.0 / d).collect();
    Ok(1.0 / norm.dual_gauge(&inv))
}

/// I(N, xx*) = min_i |x_i|^2, independent of the norm.
pub fn rank_one_index(_norm: &NormDescriptor, x: &VectorC) -> f64 {
    x.iter().map(|z| z.norm_sqr()).fold(f64::INFINITY, f64::min)
}

/// Certified lower bound I(N, A) >= I(N, D(A)) from the diagonal part.
pub fn norm_index_lower_bound(norm: &NormDescriptor, a: &HermitianMatrix) -> Result<f64> {
    a.require_psd()?;
    let diag = a.diagonal_real();
    if diag.iter().any(|&d| d <= 0.0) {
        return Ok(0.0);
    }
    diagonal_index(norm, &diag)
}

/// Sampling oracle for I(N, A): minimizes N(A o B)/N(B) over random PSD B
/// of all ranks plus rank-one sphere descent. Always an upper bound.
pub fn norm_index_search(
    norm: &NormDescriptor,
    a: &HermitianMatrix,
    cfg: &OracleConfig,
) -> Result<NormIndexResult> {
    a.require_psd()?;
    let objective = |b: &HermitianMatrix| -> f64 {
        let nb = norm.eval_hermitian(b);
        if nb < 1e-300 {
            return f64::INFINITY;
        }
        let ab = crate::matrix::hadamard(a, b).expect("same dim");
        norm.eval_hermitian(&ab) / nb
    };
    let probe = random_psd_probe(&objective, a.dim(), cfg);
    let witness_x = match &probe.argmin {
        ProbeArgmin::RankOne(x) => Some(x.clone()),
        ProbeArgmin::FullRank(_) => None,
    };
    Ok(NormIndexResult {
        value: probe.value,
        norm: *norm,
        method: NormIndexMethod::SearchUpperBound,
        exact: false,
        witness_x,
    })
}

/// Exact-where-proven dispatcher used by the CLI: closed forms for the
/// trace, Frobenius and spectral norms and for diagonal or rank-one input;
/// everything else falls back to the sampling oracle (upper bound).
pub fn norm_index(
    norm: &NormDescriptor,
    a: &HermitianMatrix,
    cfg: &OracleConfig,
) -> Result<NormIndexResult> {
    a.require_psd()?;
    let diag = a.diagonal_real();
    let scale = a.max_abs_entry().max(1.0);

    if diag.iter().any(|&d| d <= 0.0) {
        return Ok(NormIndexResult {
            value: 0.0,
            norm: *norm,
            method: NormIndexMethod::ZeroDiagonal,
            exact: true,
            witness_x: None,
        });
    }

    let off_diag_max = {
        let mut m = 0.0f64;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if i != j {
                    m = m.max(a.entry(i, j).norm());
                }
            }
        }
        m
    };
    if off_diag_max <= 1e-13 * scale {
        return Ok(NormIndexResult {
            value: diagonal_index(norm, &diag)?,
            norm: *norm,
            method: NormIndexMethod::DiagonalDual,
            exact: true,
            witness_x: None,
        });
    }

    let sv = a.singular_values();
    if sv.len() > 1 && sv[1] <= 1e-12 * sv[0] {
        // rank one: recover x from the top eigenpair
        let (vals, vecs) = a.eigen();
        let top = vals.len() - 1;
        let x = vecs.column(top).map(|z| z * c(vals[top].max(0.0).sqrt()));
        return Ok(NormIndexResult {
            value: rank_one_index(norm, &x),
            norm: *norm,
            method: NormIndexMethod::RankOne,
            exact: true,
            witness_x: None,
        });
    }

    match norm.kind() {
        crate::gauge::GaugeKind::Schatten(p) if (p - 1.0).abs() < f64::EPSILON => {
            Ok(NormIndexResult {
                value: trace_index(a)?,
                norm: *norm,
                method: NormIndexMethod::TraceFormula,
                exact: true,
                witness_x: None,
            })
        }
        crate::gauge::GaugeKind::Schatten(p) if (p - 2.0).abs() < f64::EPSILON => {
            frobenius_index(a)
        }
        crate::gauge::GaugeKind::Schatten(p) if p.is_infinite() => {
            if a.is_entrywise_nonneg() && a.dim() <= N_MAX_COMBINATORIAL {
                let out = spectral_index_combinatorial(a)?;
                Ok(NormIndexResult {
                    value: out.value,
                    norm: *norm,
                    method: NormIndexMethod::SpectralCombinatorial,
                    exact: true,
                    witness_x: out.witness_x,
                })
            } else {
                let out = spectral_index_search(a, cfg)?;
                Ok(NormIndexResult {
                    value: out.value,
                    norm: *norm,
                    method: NormIndexMethod::SpectralSearch,
                    exact: false,
                    witness_x: out.witness_x,
                })
            }
        }
        _ => norm_index_search(norm, a, cfg),
    }
}

// ---------------------------------------------------------------------------
// Failure of the diagonal-domination formula for the Frobenius norm
// ---------------------------------------------------------------------------

/// A matrix where inf { I(2, D) : D diagonal, D >= A } exceeds I(2, A).
#[derive(Debug, Clone)]
pub struct Inf2Witness {
    pub matrix: HermitianMatrix,
    pub relax_value: f64,
    pub frobenius_value: f64,
    pub gap: f64,
}

/// inf { I(2, D) : D diagonal, D >= A } for n <= 3, by exact boundary
/// parametrization of the domination constraint (dense scan plus local
/// refinement). The infimum lives on the boundary because I(2, D) is
/// strictly increasing in every diagonal entry.
pub fn diag_dominating_relax2(a: &HermitianMatrix) -> Result<f64> {
    a.require_psd()?;
    let n = a.dim();
    match n {
        1 => Ok(a.entry(0, 0).re),
        2 => Ok(relax2_dim2(
            a.entry(0, 0).re,
            a.entry(1, 1).re,
            a.entry(0, 1).norm(),
        )),
        3 => Ok(relax2_dim3(a)),
        _ => Err(Error::TooLarge { n, max: 3 }),
    }
}

fn i2_of_diag(d: &[f64]) -> f64 {
    1.0 / d.iter().map(|&x| x.powi(-2)).sum::<f64>().sqrt()
}

/// n = 2: boundary (d1-a11)(d2-a22) = |a12|^2, swept over t = d2 - a22.
fn relax2_dim2(a11: f64, a22: f64, off: f64) -> f64 {
    let b2 = off * off;
    let scale = a11.max(a22).max(1e-12);
    let eval = |t: f64| -> f64 { i2_of_diag(&[a11 + b2 / t, a22 + t]) };
    // one-index-at-infinity limits
    let mut best = a11.min(a22);
    let mut best_t = scale;
    let lo = 1e-9 * scale;
    let hi = 1e9 * scale;
    let steps = 4000;
    for k in 0..=steps {
        let t = lo * (hi / lo).powf(k as f64 / steps as f64);
        let v = eval(t);
        if v < best {
            best = v;
            best_t = t;
        }
    }
    // golden-section refinement around the grid minimum
    let (mut a_t, mut b_t) = (best_t / 1.2, best_t * 1.2);
    let phi = 0.5 * (5.0f64.sqrt() - 1.0);
    for _ in 0..200 {
        let m1 = b_t - phi * (b_t - a_t);
        let m2 = a_t + phi * (b_t - a_t);
        if eval(m1) < eval(m2) {
            b_t = m2;
        } else {
            a_t = m1;
        }
    }
    best.min(eval(0.5 * (a_t + b_t)))
}

/// n = 3: boundary via the Schur complement. For surplus e1, e2 on the
/// first two diagonal entries (with e1 e2 >= |a12|^2), the minimal third
/// surplus is w* M^-1 w; one-index-at-infinity limits reduce to the 2x2
/// subproblems.
fn relax2_dim3(a: &HermitianMatrix) -> f64 {
    let d = a.diagonal_real();
    let a12 = a.entry(0, 1);
    let a13 = a.entry(0, 2);
    let a23 = a.entry(1, 2);

    let e3_min = |e1: f64, e2: f64| -> Option<f64> {
        let det = e1 * e2 - a12.norm_sqr();
        if det <= 1e-300 {
            return None;
        }
        // w = (a13, a23); e3 = w* M^{-1} w with M = [[e1, -a12],[-conj(a12), e2]]
        let w1 = a13;
        let w2 = a23;
        let q = (e2 * w1.norm_sqr()
            + e1 * w2.norm_sqr()
            + 2.0 * (a12 * w2 * w1.conj()).re)
            / det;
        Some(q.max(0.0))
    };
    let eval = |e1: f64, e2: f64| -> f64 {
        match e3_min(e1, e2) {
            Some(e3) => i2_of_diag(&[d[0] + e1, d[1] + e2, d[2] + e3]),
            None => f64::INFINITY,
        }
    };

    let scale = d.iter().copied().fold(1e-12, f64::max) + a.max_abs_entry();
    let lo = 1e-6 * scale;
    let hi = 1e6 * scale;
    let steps = 120;
    let grid_pt = |k: usize| lo * (hi / lo).powf(k as f64 / steps as f64);
    let mut best = f64::INFINITY;
    let mut best_pt = (scale, scale);
    for k1 in 0..=steps {
        for k2 in 0..=steps {
            let (e1, e2) = (grid_pt(k1), grid_pt(k2));
            let v = eval(e1, e2);
            if v < best {
                best = v;
                best_pt = (e1, e2);
            }
        }
    }
    // compass refinement in log coordinates
    let (mut e1, mut e2) = best_pt;
    let mut step = 1.3f64;
    while step > 1.0 + 1e-9 {
        let mut moved = false;
        for (f1, f2) in [
            (step, 1.0),
            (1.0 / step, 1.0),
            (1.0, step),
            (1.0, 1.0 / step),
        ] {
            let v = eval(e1 * f1, e2 * f2);
            if v < best {
                best = v;
                e1 *= f1;
                e2 *= f2;
                moved = true;
            }
        }
        if !moved {
            step = step.sqrt();
        }
    }
    // limits: one or two diagonal entries pushed to infinity
    let two_by_two = [
        relax2_dim2(d[1], d[2], a23.norm()),
        relax2_dim2(d[0], d[2], a13.norm()),
        relax2_dim2(d[0], d[1], a12.norm()),
    ];
    for v in two_by_two {
        best = best.min(v);
    }
    for &di in &d {
        best = best.min(di);
    }
    best
}

#[derive(Debug, Clone)]
pub struct HuntOutcome {
    pub witness: Option<Inf2Witness>,
    pub samples_scanned: usize,
}

/// Random search for a PSD matrix where the diagonal-domination infimum
/// strictly exceeds I(2, A) by more than `gap_threshold`. Returns the first
/// witness found within the sample budget.
pub fn counterexample_search_inf2(cfg: &OracleConfig) -> Result<HuntOutcome> {
    counterexample_search_inf2_with_threshold(cfg, 1e-3)
}

pub fn counterexample_search_inf2_with_threshold(
    cfg: &OracleConfig,
    gap_threshold: f64,
) -> Result<HuntOutcome> {
    for k in 0..cfg.sample_budget {
        let mut rng = restart_rng(cfg.seed ^ 0x1f2, k as u64);
        let n = 2 + (k % 2);
        let a = crate::oracle::random_real_psd(n, &mut rng);
        if a.diagonal_real().iter().any(|&d| d <= 1e-9) {
            continue;
        }
        let fro = frobenius_index(&a)?.value;
        let relax = diag_dominating_relax2(&a)?;
        let gap = relax - fro;
        if gap > gap_threshold {
            return Ok(HuntOutcome {
                witness: Some(Inf2Witness {
                    matrix: a,
                    relax_value: relax,
                    frobenius_value: fro,
                    gap,
                }),
                samples_scanned: k + 1,
            });
        }
    }
    Ok(HuntOutcome {
        witness: None,
        samples_scanned: cfg.sample_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hadamard;
    use crate::oracle::sphere_minimize_complex;
    use nalgebra::DVector;

    fn neg_offdiag_matrix() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![2.0, -1.0], vec![-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn trace_index_examples() {
        let a = HermitianMatrix::diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(trace_index(&a).unwrap(), 1.0);
        assert_eq!(trace_index(&neg_offdiag_matrix()).unwrap(), 1.0);
        let z = HermitianMatrix::diagonal(&[2.0, 0.0]);
        assert_eq!(trace_index(&z).unwrap(), 0.0);
    }

    #[test]
    fn frobenius_on_positive_diagonal() {
        let d = [1.0, 2.0, 4.0];
        let a = HermitianMatrix::diagonal(&d);
        let out = frobenius_index(&a).unwrap();
        let expect = 1.0 / d.iter().map(|x| x.powi(-2)).sum::<f64>().sqrt();
        assert!((out.value - expect).abs() < 1e-12);
        assert!(out.exact);
    }

    #[test]
    fn frobenius_on_rank_one() {
        let x = DVector::from_vec(vec![c(0.6), c(0.8), c(1.2)]);
        let a = HermitianMatrix::rank_one(&x);
        let out = frobenius_index(&a).unwrap();
        assert!((out.value - 0.36).abs() < 1e-10, "got {}", out.value);
    }

    #[test]
    fn frobenius_matches_sphere_search_oracle() {
        let mut rng = crate::oracle::seeded_rng(173);
        let fro = NormDescriptor::frobenius();
        let cfg = OracleConfig::with_seed(173);
        for _ in 0..6 {
            let a = crate::oracle::random_psd(4, &mut rng);
            let exact = frobenius_index(&a).unwrap().value;
            let obj = |x: &VectorC| {
                fro.eval_hermitian(&hadamard(&a, &HermitianMatrix::rank_one(x)).unwrap())
            };
            let (search, _, _) = sphere_minimize_complex(&obj, 4, &cfg);
            assert!(
                (exact - search).abs() < 1e-6,
                "exact {exact} search {search}"
            );
        }
    }

    #[test]
    fn frobenius_witness_consistency() {
        let mut rng = crate::oracle::seeded_rng(179);
        let fro = NormDescriptor::frobenius();
        for _ in 0..10 {
            let a = crate::oracle::random_psd(4, &mut rng);
            let out = frobenius_index(&a).unwrap();
            let x = out.witness_x.unwrap();
            let val = fro.eval_hermitian(&hadamard(&a, &HermitianMatrix::rank_one(&x)).unwrap());
            assert!((val - out.value).abs() < 1e-7, "{val} vs {}", out.value);
        }
    }

    #[test]
    fn frobenius_extension_for_selfadjoint_input() {
        // selfadjoint but indefinite A with PSD squared-modulus matrix
        let a = HermitianMatrix::from_real_rows(&[vec![1.0, 0.4], vec![0.4, -1.0]]).unwrap();
        assert!(!a.is_psd());
        let b = abs_squared(&a);
        assert!(b.is_psd());
        let out = frobenius_index(&a).unwrap();
        // direct sphere check of min ||A o xx*||_2
        let fro = NormDescriptor::frobenius();
        let cfg = OracleConfig::with_seed(7);
        let obj =
            |x: &VectorC| fro.eval_hermitian(&hadamard(&a, &HermitianMatrix::rank_one(x)).unwrap());
        let (search, _, _) = sphere_minimize_complex(&obj, 2, &cfg);
        assert!((out.value - search).abs() < 1e-6);
    }

    #[test]
    fn frobenius_extension_rejects_indefinite_b() {
        let a = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            frobenius_index(&a),
            Err(Error::ExtensionInapplicable)
        ));
    }

    #[test]
    fn diagonal_index_closed_forms() {
        let two = NormDescriptor::frobenius();
        let v = diagonal_index(&two, &[1.0, 2.0]).unwrap();
        assert!((v - 2.0 / 5.0f64.sqrt()).abs() < 1e-12);

        let sp = NormDescriptor::spectral();
        let d = [1.0, 2.0, 4.0];
        let v = diagonal_index(&sp, &d).unwrap();
        let harmonic = 1.0 / d.iter().map(|x| 1.0 / x).sum::<f64>();
        assert!((v - harmonic).abs() < 1e-12);

        let tr = NormDescriptor::trace_norm();
        assert!((diagonal_index(&tr, &[3.0, 1.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);

        assert!(matches!(
            diagonal_index(&tr, &[1.0, 0.0]),
            Err(Error::NonPositiveEntry { .. })
        ));
    }

    #[test]
    fn rank_one_examples() {
        let sp = NormDescriptor::spectral();
        let n = 4;
        let flat = DVector::from_element(n, c(1.0 / (n as f64).sqrt()));
        assert!((rank_one_index(&sp, &flat) - 0.25).abs() < 1e-12);
        let withzero = DVector::from_vec(vec![c(1.0), c(0.0)]);
        assert_eq!(rank_one_index(&sp, &withzero), 0.0);
    }

    #[test]
    fn rank_one_lower_bounds_random_probes() {
        let mut rng = crate::oracle::seeded_rng(181);
        let cfg = OracleConfig {
            sample_budget: 300,
            ..OracleConfig::quick(181)
        };
        for desc in [NormDescriptor::frobenius(), NormDescriptor::spectral()] {
            let x = crate::oracle::random_complex_unit(3, &mut rng).map(|z| z * c(1.3));
            let a = HermitianMatrix::rank_one(&x);
            let expect = rank_one_index(&desc, &x);
            let probe = norm_index_search(&desc, &a, &cfg).unwrap();
            assert!(
                probe.value >= expect - 1e-6,
                "{}: probe {} under bound {expect}",
                desc.label(),
                probe.value
            );
        }
    }

    #[test]
    fn lower_bound_examples() {
        let sp = NormDescriptor::spectral();
        // diagonal: bound is tight
        let d = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let lb = norm_index_lower_bound(&sp, &d).unwrap();
        assert!((lb - 2.0 / 3.0).abs() < 1e-12);
        // all-ones: 1/2 <= I(sp) = 1
        let p = HermitianMatrix::all_ones(2);
        let lb = norm_index_lower_bound(&sp, &p).unwrap();
        assert!((lb - 0.5).abs() < 1e-12);
        let isp = spectral_index_combinatorial(&p).unwrap().value;
        assert!(lb <= isp);
        // zero diagonal: bound collapses to 0
        let z = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert_eq!(norm_index_lower_bound(&sp, &z).unwrap(), 0.0);
    }

    #[test]
    fn lower_bound_below_frobenius_on_random() {
        let mut rng = crate::oracle::seeded_rng(191);
        let two = NormDescriptor::frobenius();
        for _ in 0..20 {
            let a = crate::oracle::random_psd(4, &mut rng);
            let lb = norm_index_lower_bound(&two, &a).unwrap();
            let v = frobenius_index(&a).unwrap().value;
            assert!(lb <= v + 1e-8, "bound {lb} above value {v}");
        }
    }

    #[test]
    fn search_recovers_known_values() {
        let cfg = OracleConfig {
            sample_budget: 500,
            ..OracleConfig::with_seed(193)
        };
        // schatten(1): min over B of ratio is min A_ii
        let a = neg_offdiag_matrix();
        let tr = NormDescriptor::trace_norm();
        let probe = norm_index_search(&tr, &a, &cfg).unwrap();
        assert!((probe.value - 1.0).abs() < 1e-6, "got {}", probe.value);
        // schatten(inf) on the fixture: 1
        let sp = NormDescriptor::spectral();
        let probe = norm_index_search(&sp, &a, &cfg).unwrap();
        assert!((probe.value - 1.0).abs() < 1e-6, "got {}", probe.value);
    }

    #[test]
    fn search_matches_frobenius_on_random() {
        let mut rng = crate::oracle::seeded_rng(197);
        let two = NormDescriptor::frobenius();
        let cfg = OracleConfig {
            sample_budget: 400,
            ..OracleConfig::with_seed(197)
        };
        for _ in 0..4 {
            let a = crate::oracle::random_psd(3, &mut rng);
            let exact = frobenius_index(&a).unwrap().value;
            let probe = norm_index_search(&two, &a, &cfg).unwrap();
            assert!(
                (probe.value - exact).abs() < 1e-5,
                "probe {} exact {exact}",
                probe.value
            );
            assert!(probe.value >= exact - 1e-9, "oracle went below the index");
        }
    }

    #[test]
    fn probe_on_all_ones_never_below_one() {
        // P o B = B, so every ratio is exactly 1
        let p = HermitianMatrix::all_ones(3);
        let cfg = OracleConfig {
            sample_budget: 200,
            ..OracleConfig::quick(199)
        };
        for desc in [
            NormDescriptor::trace_norm(),
            NormDescriptor::frobenius(),
            NormDescriptor::spectral(),
            NormDescriptor::ky_fan(2).unwrap(),
        ] {
            let probe = norm_index_search(&desc, &p, &cfg).unwrap();
            assert!(
                (probe.value - 1.0).abs() < 1e-6,
                "{}: {}",
                desc.label(),
                probe.value
            );
        }
    }

    #[test]
    fn dispatcher_picks_exact_paths() {
        let cfg = OracleConfig::quick(211);
        let d = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let out = norm_index(&NormDescriptor::ky_fan(2).unwrap(), &d, &cfg).unwrap();
        assert_eq!(out.method, NormIndexMethod::DiagonalDual);
        assert!(out.exact);

        let a = neg_offdiag_matrix();
        let out = norm_index(&NormDescriptor::trace_norm(), &a, &cfg).unwrap();
        assert_eq!(out.method, NormIndexMethod::TraceFormula);
        assert!((out.value - 1.0).abs() < 1e-12);

        let out = norm_index(&NormDescriptor::spectral(), &a, &cfg).unwrap();
        assert_eq!(out.method, NormIndexMethod::SpectralSearch);
        assert!((out.value - 1.0).abs() < 1e-6);

        let nn = HermitianMatrix::from_real_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let out = norm_index(&NormDescriptor::spectral(), &nn, &cfg).unwrap();
        assert_eq!(out.method, NormIndexMethod::SpectralCombinatorial);

        let p = HermitianMatrix::all_ones(2);
        let out = norm_index(&NormDescriptor::spectral(), &p, &cfg).unwrap();
        assert_eq!(out.method, NormIndexMethod::RankOne);
        assert!((out.value - 1.0).abs() < 1e-12);

        let z = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let out = norm_index(&NormDescriptor::frobenius(), &z, &cfg).unwrap();
        assert_eq!(out.method, NormIndexMethod::ZeroDiagonal);
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn relax2_diagonal_matrix_has_no_gap() {
        let a = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let relax = diag_dominating_relax2(&a).unwrap();
        let fro = frobenius_index(&a).unwrap().value;
        assert!((relax - fro).abs() < 1e-8, "relax {relax} fro {fro}");
    }

    #[test]
    fn relax2_never_below_frobenius() {
        let mut rng = crate::oracle::seeded_rng(223);
        for k in 0..30 {
            let n = 2 + k % 2;
            let a = crate::oracle::random_real_psd(n, &mut rng);
            let relax = diag_dominating_relax2(&a).unwrap();
            let fro = frobenius_index(&a).unwrap().value;
            assert!(
                relax >= fro - 1e-7,
                "domination relaxation below the index: {relax} < {fro}"
            );
        }
    }

    #[test]
    fn relax2_known_two_by_two_gap() {
        // A = [[1, 0.3],[0.3, 1]]: I(2,A) = sqrt((1+0.09)/2), while the
        // dominating-diagonal infimum stays near 0.919
        let a = HermitianMatrix::from_real_rows(&[vec![1.0, 0.3], vec![0.3, 1.0]]).unwrap();
        let fro = frobenius_index(&a).unwrap().value;
        assert!((fro - (1.09f64 / 2.0).sqrt()).abs() < 1e-10);
        let relax = diag_dominating_relax2(&a).unwrap();
        assert!(relax - fro > 0.1, "expected a visible gap, got {}", relax - fro);
        // 1-d hand scan of the boundary agrees
        let mut scan = f64::INFINITY;
        for k in 1..20000 {
            let t = 1e-3 * k as f64;
            scan = scan.min(i2_of_diag(&[1.0 + 0.09 / t, 1.0 + t]));
        }
        assert!((relax - scan).abs() < 1e-5, "relax {relax} scan {scan}");
    }

    #[test]
    fn hunt_with_zero_budget_returns_none() {
        let cfg = OracleConfig {
            sample_budget: 0,
            ..OracleConfig::with_seed(227)
        };
        assert!(counterexample_search_inf2(&cfg).unwrap().witness.is_none());
    }

    #[test]
    fn hunt_finds_witness_quickly() {
        let cfg = OracleConfig {
            sample_budget: 200,
            ..OracleConfig::with_seed(229)
        };
        let out = counterexample_search_inf2(&cfg).unwrap();
        let w = out.witness.expect("a witness should appear within 200 samples");
        assert!(out.samples_scanned <= 200);
        assert!(w.gap > 1e-3);
        assert!(w.matrix.is_psd());
        assert!((w.relax_value - w.frobenius_value - w.gap).abs() < 1e-12);
    }

    #[test]
    fn zero_criterion_via_bounds() {
        let mut rng = crate::oracle::seeded_rng(233);
        let sp = NormDescriptor::spectral();
        for _ in 0..10 {
            let a = crate::oracle::random_psd(3, &mut rng);
            let lb = norm_index_lower_bound(&sp, &a).unwrap();
            let min_diag = a
                .diagonal_real()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            assert!(lb > 0.0);
            assert!(min_diag > 0.0);
        }
        // zero diagonal entry forces both bounds to zero
        let x = DVector::from_vec(vec![c(1.0), c(0.0), c(0.5)]);
        let a = HermitianMatrix::rank_one(&x);
        assert_eq!(norm_index_lower_bound(&sp, &a).unwrap(), 0.0);
        assert_eq!(
            rank_one_index(&sp, &x),
            0.0
        );
    }

    #[test]
    fn psd_order_monotonicity_of_frobenius() {
        let mut rng = crate::oracle::seeded_rng(239);
        for _ in 0..10 {
            let a = crate::oracle::random_psd(4, &mut rng);
            let x = crate::oracle::random_complex_unit(4, &mut rng);
            let bump = HermitianMatrix::rank_one(&x);
            let b = HermitianMatrix::new(a.as_matrix() + bump.as_matrix()).unwrap();
            let va = frobenius_index(&a).unwrap().value;
            let vb = frobenius_index(&b).unwrap().value;
            assert!(va <= vb + 1e-9, "I(2,A)={va} > I(2,B)={vb}");
        }
    }
}
