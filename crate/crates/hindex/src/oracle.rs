//! Brute-force minimizers and seeded generators used by the invariant
//! suites: sphere descent for rank-one objectives, random-PSD sampling for
//! general-B objectives, and the simplex QP for the minimal index.
//!
//! Everything is deterministic under a fixed `OracleConfig`: restarts draw
//! from per-index generators (chacha8 streams derived with a splitmix64
//! mix), so results do not depend on the worker-thread count.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matrix::{c, C64, HermitianMatrix, VectorC};

/// Identifier of the pseudo-random scheme, quoted in CLI reports.
pub const RNG_ALGORITHM: &str = "chacha8+splitmix64";

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub sample_budget: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed_cafe,
            restarts: 64,
            max_iters: 2000,
            step_tol: 1e-12,
            sample_budget: 10_000,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Lighter settings for inner loops and quick scans.
    pub fn quick(seed: u64) -> Self {
        Self {
            seed,
            restarts: 16,
            max_iters: 600,
            step_tol: 1e-12,
            sample_budget: 1000,
        }
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for restart `index` of a run with seed `seed`.
pub fn restart_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index.wrapping_add(1))))
}

// ---------------------------------------------------------------------------
// Random test-instance generators
// ---------------------------------------------------------------------------

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; two uniforms per normal keeps the stream layout simple.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u1.ln()).sqrt() * u2.cos()
}

pub fn random_complex_gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(gaussian(rng), gaussian(rng))
    })
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    HermitianMatrix::new(random_complex_gaussian_matrix(n, n, rng)).expect("square")
}

/// Random complex PSD matrix GG*/n.
pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = random_complex_gaussian_matrix(n, n, rng);
    let m = (&g * g.adjoint()).map(|z| z / n as f64);
    HermitianMatrix::new(m).expect("square")
}

/// Random real PSD matrix.
pub fn random_real_psd(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let m = (&g * g.transpose()).map(|x| c(x / n as f64));
    HermitianMatrix::new(m).expect("square")
}

/// Random PSD matrix with nonnegative entries, alternating between the two
/// constructions G o G (for real PSD G, Schur-positive with squared entries)
/// and C^T C with entrywise-nonnegative C.
pub fn random_nonneg_psd(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    if rng.gen_bool(0.5) {
        let g = random_real_psd(n, rng);
        crate::matrix::hadamard(&g, &g).expect("same dim")
    } else {
        let cmat = DMatrix::from_fn(n, n, |_, _| rng.gen_range(0.0..1.0));
        let m = (cmat.transpose() * &cmat).map(|x: f64| c(x / n as f64));
        HermitianMatrix::new(m).expect("square")
    }
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let g = random_complex_gaussian_matrix(n, n, rng);
    g.qr().q()
}

/// Vector of unit-modulus entries e^{i theta}.
pub fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> VectorC {
    DVector::from_fn(n, |_, _| {
        let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Complex::new(th.cos(), th.sin())
    })
}

pub fn random_complex_unit(n: usize, rng: &mut ChaCha8Rng) -> VectorC {
    let mut v = DVector::from_fn(n, |_, _| Complex::new(gaussian(rng), gaussian(rng)));
    let nrm = v.norm();
    if nrm > 1e-14 {
        v /= c(nrm);
    } else {
        v[0] = c(1.0);
    }
    v
}

pub fn random_positive(n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

// ---------------------------------------------------------------------------
// Deterministic parallel restart runner
// ---------------------------------------------------------------------------

/// Worker count: HINDEX_THREADS if set, otherwise available parallelism.
pub fn worker_threads() -> usize {
    if let Ok(v) = std::env::var("HINDEX_THREADS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            return k.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|k| k.get())
        .unwrap_or(1)
}

/// Runs `job` for every index in `0..count`, possibly across threads, and
/// returns results in index order. The outcome never depends on the thread
/// count.
pub fn run_indexed<T: Send>(count: usize, job: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = worker_threads().min(count.max(1));
    if threads <= 1 || count <= 1 {
        return (0..count).map(job).collect();
    }
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<(usize, &mut [Option<T>])> = {
            let mut out = Vec::new();
            let mut rest = slots.as_mut_slice();
            let base = count / threads;
            let extra = count % threads;
            let mut start = 0;
            for t in 0..threads {
                let len = base + usize::from(t < extra);
                let (head, tail) = rest.split_at_mut(len);
                out.push((start, head));
                start += len;
                rest = tail;
            }
            out
        };
        for (start, chunk) in chunks {
            let job = &job;
            scope.spawn(move || {
                for (off, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(job(start + off));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("job ran")).collect()
}

// ---------------------------------------------------------------------------
// Sphere minimization
// ---------------------------------------------------------------------------

/// Result of a multi-start minimization.
#[derive(Debug, Clone)]
pub struct SphereOutcome {
    pub value: f64,
    pub argmin: Vec<f64>,
    /// Fraction of executed restarts that came within 1e-9 of the best value.
    pub saturation: f64,
    pub restarts_run: usize,
}

/// Restart batch size; saturation is decided on whole batches so the stop
/// point is identical for every worker-thread count.
const BATCH: usize = 8;
const IMPROVE_TOL: f64 = 1e-10;

/// Multi-start projected descent on the real unit sphere in R^dim with
/// numerical (central-difference) gradients, so the routine stays
/// independent of any analytic structure of the objective it audits.
///
/// Deterministic starts come first: the +/- coordinate axes and the flat
/// vector, then seeded random directions.
pub fn sphere_minimize(
    objective: &(dyn Fn(&[f64]) -> f64 + Sync),
    dim: usize,
    cfg: &OracleConfig,
) -> SphereOutcome {
    assert!(dim >= 1, "sphere dimension must be >= 1");
    let start_for = |index: usize| -> Vec<f64> {
        if index < dim {
            let mut e = vec![0.0; dim];
            e[index] = 1.0;
            e
        } else if index == dim {
            vec![1.0 / (dim as f64).sqrt(); dim]
        } else {
            let mut rng = restart_rng(cfg.seed, index as u64);
            let mut v: Vec<f64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
            let nrm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if nrm < 1e-14 {
                v[0] = 1.0;
            } else {
                v.iter_mut().for_each(|t| *t /= nrm);
            }
            v
        }
    };

    let total = cfg.restarts.max(dim + 1);
    let mut finished: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut best = f64::INFINITY;
    let mut batch_start = 0;
    while batch_start < total {
        let batch_end = (batch_start + BATCH).min(total);
        let outcomes = run_indexed(batch_end - batch_start, |k| {
            let x0 = start_for(batch_start + k);
            descend_on_sphere(objective, x0, cfg)
        });
        let mut improved = false;
        for o in outcomes {
            if o.0 < best - IMPROVE_TOL {
                improved = true;
            }
            best = best.min(o.0);
            finished.push(o);
        }
        batch_start = batch_end;
        // stop once a whole batch stops improving, but never before the
        // deterministic starts have all run
        if !improved && batch_start > dim + 1 {
            break;
        }
    }

    let mut value = f64::INFINITY;
    let mut argmin = vec![0.0; dim];
    for (v, x) in &finished {
        if *v < value {
            value = *v;
            argmin = x.clone();
        }
    }
    let near = finished
        .iter()
        .filter(|(v, _)| *v <= value + 1e-9)
        .count();
    SphereOutcome {
        value,
        argmin,
        saturation: near as f64 / finished.len() as f64,
        restarts_run: finished.len(),
    }
}

fn normalize(x: &mut [f64]) {
    let nrm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
    if nrm > 1e-300 {
        x.iter_mut().for_each(|t| *t /= nrm);
    }
}

fn descend_on_sphere(
    objective: &(dyn Fn(&[f64]) -> f64 + Sync),
    mut x: Vec<f64>,
    cfg: &OracleConfig,
) -> (f64, Vec<f64>) {
    let dim = x.len();
    let mut fx = objective(&x);
    let mut step = 0.25;
    let mut stall = 0;
    for _ in 0..cfg.max_iters {
        // central-difference gradient in the ambient space
        let h = 1e-6;
        let mut grad = vec![0.0; dim];
        for i in 0..dim {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            normalize(&mut xp);
            normalize(&mut xm);
            grad[i] = (objective(&xp) - objective(&xm)) / (2.0 * h);
        }
        // tangent projection
        let radial: f64 = grad.iter().zip(&x).map(|(g, t)| g * t).sum();
        for i in 0..dim {
            grad[i] -= radial * x[i];
        }
        let gnorm = grad.iter().map(|t| t * t).sum::<f64>().sqrt();
        if gnorm < 1e-13 {
            break;
        }
        let mut moved = false;
        let mut trial = step;
        while trial > cfg.step_tol {
            let mut cand: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(t, g)| t - trial * g / gnorm)
                .collect();
            normalize(&mut cand);
            let fc = objective(&cand);
            if fc < fx {
                x = cand;
                fx = fc;
                moved = true;
                // allow the step to grow back so long plateaus traverse fast
                step = (trial * 2.0).min(0.5);
                break;
            }
            trial *= 0.5;
        }
        if !moved {
            break;
        }
        if step < 1e-10 {
            stall += 1;
            if stall > 8 {
                break;
            }
        } else {
            stall = 0;
        }
    }
    (fx, x)
}

/// Minimizes an objective over complex unit vectors by mapping C^n onto
/// R^(2n); returns the best value and the complex argmin.
pub fn sphere_minimize_complex(
    objective: &(dyn Fn(&VectorC) -> f64 + Sync),
    n: usize,
    cfg: &OracleConfig,
) -> (f64, VectorC, SphereOutcome) {
    let wrapped = move |x: &[f64]| {
        let v = reals_to_complex(x);
        objective(&v)
    };
    let out = sphere_minimize(&wrapped, 2 * n, cfg);
    let arg = reals_to_complex(&out.argmin);
    (out.value, arg, out.clone())
}

pub fn reals_to_complex(x: &[f64]) -> VectorC {
    let n = x.len() / 2;
    DVector::from_fn(n, |i, _| Complex::new(x[2 * i], x[2 * i + 1]))
}

pub fn complex_to_reals(v: &VectorC) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    for z in v.iter() {
        out.push(z.re);
        out.push(z.im);
    }
    out
}

// ---------------------------------------------------------------------------
// Random-PSD probe
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum ProbeArgmin {
    FullRank(HermitianMatrix),
    RankOne(VectorC),
}

#[derive(Debug, Clone)]
pub struct ProbeOutcome {
    pub value: f64,
    pub argmin: ProbeArgmin,
}

/// Audits a minimum over all PSD B: evaluates the objective on seeded
/// random full-rank samples B = GG* and on the rank-one family (both
/// random and sphere-descended). The closure must be scale-invariant.
pub fn random_psd_probe(
    objective: &(dyn Fn(&HermitianMatrix) -> f64 + Sync),
    n: usize,
    cfg: &OracleConfig,
) -> ProbeOutcome {
    let sample_values = run_indexed(cfg.sample_budget, |k| {
        let mut rng = restart_rng(cfg.seed ^ 0xb0b, k as u64);
        let b = random_psd(n, &mut rng);
        (objective(&b), k)
    });
    let mut best_val = f64::INFINITY;
    let mut best_idx = 0usize;
    for (v, k) in &sample_values {
        if *v < best_val {
            best_val = *v;
            best_idx = *k;
        }
    }

    let rank_one = move |x: &VectorC| {
        let b = HermitianMatrix::rank_one(x);
        objective(&b)
    };
    let (r1_val, r1_arg, _) = sphere_minimize_complex(&rank_one, n, cfg);

    if r1_val < best_val || cfg.sample_budget == 0 {
        ProbeOutcome {
            value: r1_val,
            argmin: ProbeArgmin::RankOne(r1_arg),
        }
    } else {
        let mut rng = restart_rng(cfg.seed ^ 0xb0b, best_idx as u64);
        ProbeOutcome {
            value: best_val,
            argmin: ProbeArgmin::FullRank(random_psd(n, &mut rng)),
        }
    }
}

// ---------------------------------------------------------------------------
// Simplex / hyperplane QP
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub value: f64,
    pub argmin: DVector<f64>,
}

/// Exact KKT solve of min z^T B z subject to sum z = 1 over real z.
/// Returns None when the KKT system is numerically singular.
pub fn hyperplane_kkt(b: &DMatrix<f64>) -> Option<SimplexOutcome> {
    let n = b.nrows();
    let mut kkt = DMatrix::zeros(n + 1, n + 1);
    kkt.view_mut((0, 0), (n, n)).copy_from(b);
    for i in 0..n {
        kkt[(i, n)] = 1.0;
        kkt[(n, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(n + 1);
    rhs[n] = 1.0;
    let lu = kkt.clone().full_piv_lu();
    let sol = lu.solve(&rhs)?;
    let z = DVector::from_fn(n, |i, _| sol[i]);
    let resid = (&kkt * &sol - &rhs).norm();
    let scale = b.norm().max(1.0);
    if !resid.is_finite() || resid > 1e-8 * scale {
        return None;
    }
    let value = (z.transpose() * b * &z)[(0, 0)];
    Some(SimplexOutcome { value, argmin: z })
}

/// Projected-descent fallback for the hyperplane problem (convex for PSD B,
/// so every start converges to the global minimum).
pub fn hyperplane_descent(b: &DMatrix<f64>, cfg: &OracleConfig) -> SimplexOutcome {
    let n = b.nrows();
    let runs = run_indexed(cfg.restarts.min(16).max(1), |k| {
        let mut rng = restart_rng(cfg.seed ^ 0x51e, k as u64);
        let mut z = DVector::from_element(n, 1.0 / n as f64);
        if k > 0 {
            for i in 0..n {
                z[i] += 0.5 * gaussian(&mut rng);
            }
            let shift = (z.sum() - 1.0) / n as f64;
            for i in 0..n {
                z[i] -= shift;
            }
        }
        let mut fz = (z.transpose() * b * &z)[(0, 0)];
        let mut step = 0.5;
        for _ in 0..cfg.max_iters.max(4000) {
            let mut g = b * &z * 2.0;
            let mean = g.sum() / n as f64;
            g.add_scalar_mut(-mean);
            if g.norm() < 1e-14 {
                break;
            }
            let mut moved = false;
            let mut trial = step;
            while trial > cfg.step_tol {
                let cand = &z - &g * trial;
                let fc = (cand.transpose() * b * &cand)[(0, 0)];
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
        (fz, z)
    });
    let (value, argmin) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one run");
    SimplexOutcome { value, argmin }
}

/// min z^T B z over the hyperplane sum z = 1: exact KKT with descent
/// fallback for singular systems.
pub fn simplex_qp(b: &DMatrix<f64>, cfg: &OracleConfig) -> SimplexOutcome {
    match hyperplane_kkt(b) {
        Some(out) => out,
        None => hyperplane_descent(b, cfg),
    }
}

/// Cap for the 2^n zero-pattern enumeration in the positive-simplex solve.
pub const SIMPLEX_PATTERN_CAP: usize = 12;

/// min z^T B z over the positive simplex (z >= 0, sum z = 1) via active-set
/// enumeration of zero patterns for n <= SIMPLEX_PATTERN_CAP, with a
/// projected-descent backstop (also the only path for larger n).
pub fn positive_simplex_qp(b: &DMatrix<f64>, cfg: &OracleConfig) -> SimplexOutcome {
    let n = b.nrows();
    let mut best: Option<SimplexOutcome> = None;

    if n <= SIMPLEX_PATTERN_CAP {
        for support in crate::spectral::subsets_by_cardinality(n) {
            let bs = DMatrix::from_fn(support.len(), support.len(), |i, j| {
                b[(support[i], support[j])]
            });
            let Some(out) = hyperplane_kkt(&bs) else {
                continue;
            };
            if out.argmin.iter().any(|&zi| zi < -1e-10) {
                continue;
            }
            let mut full = DVector::zeros(n);
            for (slot, &i) in support.iter().enumerate() {
                full[i] = out.argmin[slot].max(0.0);
            }
            let value = (full.transpose() * b * &full)[(0, 0)];
            if best.as_ref().map_or(true, |cur| value < cur.value - 1e-15) {
                best = Some(SimplexOutcome {
                    value,
                    argmin: full,
                });
            }
        }
    }

    let descent = positive_simplex_descent(b, cfg);
    match best {
        Some(cur) if cur.value <= descent.value + 1e-9 => cur,
        _ => descent,
    }
}

fn project_simplex(v: &DVector<f64>) -> DVector<f64> {
    // Euclidean projection onto { z >= 0, sum z = 1 }
    let n = v.len();
    let mut u: Vec<f64> = v.iter().copied().collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut rho = 0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        css += uk;
        let t = (css - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            rho = k + 1;
            theta = t;
        }
    }
    let _ = rho;
    DVector::from_fn(n, |i, _| (v[i] - theta).max(0.0))
}

fn positive_simplex_descent(b: &DMatrix<f64>, cfg: &OracleConfig) -> SimplexOutcome {
    let n = b.nrows();
    let runs = run_indexed(cfg.restarts.min(16).max(1), |k| {
        let mut rng = restart_rng(cfg.seed ^ 0x5109, k as u64);
        let mut z = if k == 0 {
            DVector::from_element(n, 1.0 / n as f64)
        } else {
            let raw = DVector::from_fn(n, |_, _| rng.gen_range(0.0..1.0f64));
            let s = raw.sum();
            raw / s
        };
        let mut fz = (z.transpose() * b * &z)[(0, 0)];
        let mut step = 0.5;
        for _ in 0..cfg.max_iters.max(4000) {
            let g = b * &z * 2.0;
            let mut moved = false;
            let mut trial = step;
            while trial > cfg.step_tol {
                let cand = project_simplex(&(&z - &g * trial));
                let fc = (cand.transpose() * b * &cand)[(0, 0)];
                if fc < fz - 1e-18 {
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
        (fz, z)
    });
    let (value, argmin) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one run");
    SimplexOutcome { value, argmin }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::NormDescriptor;
    use crate::matrix::hadamard;

    #[test]
    fn determinism_repeated_runs_bit_identical() {
        let a = HermitianMatrix::from_real_rows(&[vec![2.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let cfg = OracleConfig::quick(42);
        let obj = |x: &VectorC| {
            hadamard(&a, &HermitianMatrix::rank_one(x))
                .unwrap()
                .spectral_norm()
        };
        let (v1, a1, _) = sphere_minimize_complex(&obj, 2, &cfg);
        let (v2, a2, _) = sphere_minimize_complex(&obj, 2, &cfg);
        assert_eq!(v1.to_bits(), v2.to_bits());
        assert_eq!(a1, a2);
    }

    #[test]
    fn sphere_finds_spectral_index_of_neg_offdiag_matrix() {
        // I(sp, [[2,-1],[-1,1]]) = 1
        let a = HermitianMatrix::from_real_rows(&[vec![2.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let cfg = OracleConfig::with_seed(1);
        let obj = |x: &VectorC| {
            hadamard(&a, &HermitianMatrix::rank_one(x))
                .unwrap()
                .spectral_norm()
        };
        let (v, _, out) = sphere_minimize_complex(&obj, 2, &cfg);
        assert!((v - 1.0).abs() < 1e-7, "got {v}");
        assert!(
            out.saturation >= 0.25,
            "saturation {} too low",
            out.saturation
        );
    }

    #[test]
    fn sphere_constant_objective() {
        let cfg = OracleConfig::quick(3);
        let obj = |_: &[f64]| 7.5;
        let out = sphere_minimize(&obj, 4, &cfg);
        assert_eq!(out.value, 7.5);
        assert_eq!(out.saturation, 1.0);
    }

    #[test]
    fn sphere_matches_diagonal_frobenius_index() {
        // I(2, diag(1,2)) = (1 + 1/4)^{-1/2} = 2/sqrt(5)
        let d = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let fro = NormDescriptor::frobenius();
        let cfg = OracleConfig::with_seed(5);
        let obj = |x: &VectorC| fro.eval_hermitian(&hadamard(&d, &HermitianMatrix::rank_one(x)).unwrap());
        let (v, _, _) = sphere_minimize_complex(&obj, 2, &cfg);
        let expect = 2.0 / 5.0f64.sqrt();
        assert!((v - expect).abs() < 1e-7, "got {v}, want {expect}");
    }

    #[test]
    fn hyperplane_kkt_identity() {
        let b = DMatrix::identity(2, 2);
        let out = hyperplane_kkt(&b).unwrap();
        assert!((out.value - 0.5).abs() < 1e-12);
        assert!((out.argmin[0] - 0.5).abs() < 1e-12);
        assert!((out.argmin[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hyperplane_kkt_neg_offdiag_matrix() {
        // min z^T B z on the hyperplane = 1/5, stationarity Bz = p/5
        let b = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 1.0]);
        let out = hyperplane_kkt(&b).unwrap();
        assert!((out.value - 0.2).abs() < 1e-12, "value {}", out.value);
        let bz = &b * &out.argmin;
        for i in 0..2 {
            assert!((bz[i] - 0.2).abs() < 1e-10);
        }
    }

    #[test]
    fn stationarity_of_hyperplane_argmin() {
        let mut rng = seeded_rng(51);
        let cfg = OracleConfig::quick(51);
        for _ in 0..20 {
            let a = random_real_psd(4, &mut rng);
            let b = DMatrix::from_fn(4, 4, |i, j| a.entry(i, j).re);
            let out = simplex_qp(&b, &cfg);
            let lam = out.value;
            let resid = (&b * &out.argmin
                - DVector::from_element(4, lam))
            .norm();
            assert!(resid < 1e-7, "Bz != lambda p: {resid}");
        }
    }

    #[test]
    fn descent_fallback_handles_singular_matrix() {
        // B = diag(1, 0): minimum over the hyperplane is 0 at z = (0, 1)
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let cfg = OracleConfig::quick(7);
        let out = hyperplane_descent(&b, &cfg);
        assert!(out.value.abs() < 1e-10, "value {}", out.value);
    }

    #[test]
    fn positive_simplex_on_identity() {
        let b = DMatrix::identity(3, 3);
        let cfg = OracleConfig::quick(9);
        let out = positive_simplex_qp(&b, &cfg);
        assert!((out.value - 1.0 / 3.0).abs() < 1e-10);
        assert!(out.argmin.iter().all(|&z| z >= -1e-12));
    }

    #[test]
    fn positive_simplex_respects_sign_constraint() {
        // unconstrained hyperplane argmin of this B has a negative entry;
        // the simplex solution must not.
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 5.0]);
        let cfg = OracleConfig::quick(11);
        let free = hyperplane_kkt(&b).unwrap();
        assert!(free.argmin.iter().any(|&z| z < 0.0));
        let out = positive_simplex_qp(&b, &cfg);
        assert!(out.argmin.iter().all(|&z| z >= -1e-12));
        assert!(out.value >= free.value - 1e-12);
        // boundary solution: z = (1, 0), value = B_11 = 1
        assert!((out.value - 1.0).abs() < 1e-9, "value {}", out.value);
    }

    #[test]
    fn positive_simplex_reproduces_squared_frobenius_index() {
        // min over the positive simplex of z^T B z with B = conj(A) o A
        // equals I(2, A)^2
        let mut rng = seeded_rng(53);
        let cfg = OracleConfig::quick(53);
        for _ in 0..10 {
            let a = random_psd(4, &mut rng);
            let b = crate::norms::abs_squared(&a);
            let bm = DMatrix::from_fn(4, 4, |i, j| b.entry(i, j).re);
            let out = positive_simplex_qp(&bm, &cfg);
            let fro = crate::norms::frobenius_index(&a).unwrap().value;
            assert!(
                (out.value - fro * fro).abs() < 1e-7,
                "simplex {} vs I(2,A)^2 {}",
                out.value,
                fro * fro
            );
        }
    }

    #[test]
    fn project_simplex_basic() {
        let v = DVector::from_vec(vec![0.8, 0.8]);
        let p = project_simplex(&v);
        assert!((p.sum() - 1.0).abs() < 1e-12);
        assert!((p[0] - 0.5).abs() < 1e-12);
        let v2 = DVector::from_vec(vec![2.0, -1.0]);
        let p2 = project_simplex(&v2);
        assert!((p2[0] - 1.0).abs() < 1e-12);
        assert_eq!(p2[1], 0.0);
    }

    #[test]
    fn run_indexed_is_order_preserving() {
        let out = run_indexed(17, |i| i * i);
        assert_eq!(out, (0..17).map(|i| i * i).collect::<Vec<_>>());
    }
}
