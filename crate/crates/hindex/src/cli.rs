//! Command-line surface: parse matrix/spectrum inputs, dispatch to the
//! index computations, and emit JSON reports or fixed-width tables.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::gauge::NormDescriptor;
use crate::io::{json_num, matrix_to_json, parse_matrix, sha256_hex, vector_to_json};
use crate::matrix::HermitianMatrix;
use crate::minimal::{minimal_index_determinant, minimal_index_simplex, minimal_index_with_tol};
use crate::norms::{counterexample_search_inf2, norm_index, norm_index_lower_bound};
use crate::opineq::{
    best_constant_detailed, verify_inequality, BestConstantArgmin, SpectrumList,
};
use crate::oracle::{OracleConfig, RNG_ALGORITHM};
use crate::selftest::{CheckStatus, SelftestConfig};
use crate::spectral::{
    spectral_index_combinatorial, spectral_index_diag_relax, spectral_index_search,
    N_MAX_COMBINATORIAL,
};

#[derive(Parser, Debug)]
#[command(
    name = "hindex",
    version,
    about = "Hadamard-product indexes of positive semidefinite matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every randomized search
    #[arg(long, global = true, default_value_t = 0x5eed_cafe)]
    seed: u64,

    /// Restart count for multi-start searches
    #[arg(long, global = true, default_value_t = 64)]
    restarts: usize,

    /// Relative residual tolerance for "p lies in the range of A"
    #[arg(long = "tol-range", global = true, default_value_t = 1e-8)]
    tol_range: f64,

    /// Emit the report as JSON (default)
    #[arg(long, global = true)]
    json: bool,

    /// Emit the report as a fixed-width table
    #[arg(long, global = true, conflicts_with = "json")]
    table: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal index I(A) with its three computation routes
    Minimal {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = MinimalMethod::All)]
        method: MinimalMethod,
    },
    /// Spectral index I(sp, A)
    Spectral {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = SpectralMethodArg::Auto)]
        method: SpectralMethodArg,
    },
    /// Frobenius index I(2, A) through the spectral identity
    Frobenius { matrix: PathBuf },
    /// Index for a Schatten or Ky Fan norm: --norm schatten:p | kyfan:k
    Norm {
        matrix: PathBuf,
        #[arg(long)]
        norm: String,
        /// Force the sampling oracle even when a closed form exists
        #[arg(long)]
        search: bool,
    },
    /// Optimal constant M(S) from a comma-separated spectrum
    Mconst {
        #[arg(long)]
        spectrum: String,
    },
    /// Check ||STS + S^-1 T S^-1|| >= M(S) ||T|| for concrete S and T
    VerifyOp { s: PathBuf, t: PathBuf },
    /// Hunt for a matrix where the diagonal-domination formula fails
    /// for the Frobenius norm
    HuntInf2 {
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Search for counterexamples to "I(A) = I(sp,A) implies nonnegative
    /// entries" (reporting only)
    ProbeConjecture {
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Run the full verification suite
    Selftest {
        /// Smaller instance counts, a few seconds total
        #[arg(long)]
        quick: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum MinimalMethod {
    Pinv,
    Simplex,
    Det,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum SpectralMethodArg {
    Auto,
    Comb,
    Search,
    Relax,
}

/// Exit codes: 0 success, 1 computation error, 2 usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    match dispatch(&cli) {
        Ok((name, inputs, results)) => {
            let report = json!({
                "command": name,
                "inputs": inputs,
                "config": {
                    "seed": cli.seed,
                    "restarts": cli.restarts,
                    "tol_range": cli.tol_range,
                    "rng": RNG_ALGORITHM,
                    "threads": crate::oracle::worker_threads(),
                },
                "results": results,
                "wall_time_ms": (started.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3,
            });
            if cli.table {
                print_table(&report);
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("valid json"));
            }
            // selftest propagates failures through the exit code
            if let Some(status) = report["results"]["all_passed"].as_bool() {
                if !status {
                    return 1;
                }
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::BadNorm(_) => 2,
                _ => 1,
            }
        }
    }
}

fn oracle_config(cli: &Cli) -> OracleConfig {
    OracleConfig {
        seed: cli.seed,
        restarts: cli.restarts,
        ..OracleConfig::default()
    }
}

fn load_matrix(path: &Path) -> Result<(HermitianMatrix, Value), Error> {
    let bytes = std::fs::read(path).map_err(|e| Error::Parse {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let m = parse_matrix(&text)?;
    let meta = json!({
        "path": path.display().to_string(),
        "sha256": sha256_hex(&bytes),
    });
    Ok((m, meta))
}

fn dispatch(cli: &Cli) -> Result<(&'static str, Value, Value), Error> {
    let cfg = oracle_config(cli);
    match &cli.command {
        Command::Minimal { matrix, method } => {
            let (a, meta) = load_matrix(matrix)?;
            let out = minimal_index_with_tol(&a, cli.tol_range)?;
            let mut methods = serde_json::Map::new();
            if matches!(method, MinimalMethod::Pinv | MinimalMethod::All) {
                methods.insert("pinv".into(), json_num(out.value));
            }
            if matches!(method, MinimalMethod::Simplex | MinimalMethod::All) {
                methods.insert(
                    "simplex".into(),
                    json_num(minimal_index_simplex(&a, &cfg)?),
                );
            }
            if matches!(method, MinimalMethod::Det | MinimalMethod::All) {
                match minimal_index_determinant(&a) {
                    Ok(v) => {
                        methods.insert("det".into(), json_num(v));
                    }
                    Err(Error::IllConditioned { .. }) if *method == MinimalMethod::All => {
                        methods.insert("det".into(), Value::String("refused: singular or ill-conditioned".into()));
                    }
                    Err(e) => return Err(e),
                }
            }
            let results = json!({
                "value": json_num(out.value),
                "in_range": out.in_range,
                "witness_y": out.witness_y.as_ref().map(vector_to_json),
                "methods": Value::Object(methods),
            });
            Ok(("minimal", json!({ "matrix": meta }), results))
        }
        Command::Spectral { matrix, method } => {
            let (a, meta) = load_matrix(matrix)?;
            let chosen = match method {
                SpectralMethodArg::Auto => {
                    if a.is_entrywise_nonneg() && a.dim() <= N_MAX_COMBINATORIAL {
                        SpectralMethodArg::Comb
                    } else {
                        SpectralMethodArg::Search
                    }
                }
                other => *other,
            };
            let results = match chosen {
                SpectralMethodArg::Comb => {
                    let out = spectral_index_combinatorial(&a)?;
                    json!({
                        "value": json_num(out.value),
                        "method": "combinatorial",
                        "exact": true,
                        "witness_subset": out.witness_subset,
                        "witness_u": out.witness_u.map(|u| u.into_iter().map(json_num).collect::<Vec<_>>()),
                        "witness_x": out.witness_x.as_ref().map(vector_to_json),
                    })
                }
                SpectralMethodArg::Search => {
                    let out = spectral_index_search(&a, &cfg)?;
                    json!({
                        "value": json_num(out.value),
                        "method": "rank_one_search",
                        "exact": false,
                        "note": "upper bound; certified tight only by restart saturation",
                        "witness_x": out.witness_x.as_ref().map(vector_to_json),
                    })
                }
                SpectralMethodArg::Relax => {
                    let value = spectral_index_diag_relax(&a, &cfg)?;
                    json!({
                        "value": json_num(value),
                        "method": "diagonal_only",
                        "exact": false,
                    })
                }
                SpectralMethodArg::Auto => unreachable!(),
            };
            Ok(("spectral", json!({ "matrix": meta }), results))
        }
        Command::Frobenius { matrix } => {
            let (a, meta) = load_matrix(matrix)?;
            let out = crate::norms::frobenius_index(&a)?;
            let results = json!({
                "value": json_num(out.value),
                "method": "frobenius_via_spectral",
                "exact": out.exact,
                "witness_x": out.witness_x.as_ref().map(vector_to_json),
            });
            Ok(("frobenius", json!({ "matrix": meta }), results))
        }
        Command::Norm {
            matrix,
            norm,
            search,
        } => {
            let (a, meta) = load_matrix(matrix)?;
            let desc = NormDescriptor::parse(norm)?;
            if let crate::gauge::GaugeKind::KyFan(k) = desc.kind() {
                if k > a.dim() {
                    return Err(Error::BadNorm(format!(
                        "ky fan order {k} exceeds dimension {}",
                        a.dim()
                    )));
                }
            }
            let out = if *search {
                crate::norms::norm_index_search(&desc, &a, &cfg)?
            } else {
                norm_index(&desc, &a, &cfg)?
            };
            let lower = norm_index_lower_bound(&desc, &a)?;
            let results = json!({
                "norm": desc.label(),
                "value": json_num(out.value),
                "method": out.method,
                "exact": out.exact,
                "kind": if out.exact { "exact" } else { "upper_bound" },
                "lower_bound": json_num(lower),
                "witness_x": out.witness_x.as_ref().map(vector_to_json),
            });
            Ok(("norm", json!({ "matrix": meta }), results))
        }
        Command::Mconst { spectrum } => {
            let s = SpectrumList::parse(spectrum)?;
            let report = best_constant_detailed(&s);
            let argmin = match report.argmin {
                BestConstantArgmin::Diagonal(l) => json!({ "kind": "diagonal", "lambda": json_num(l) }),
                BestConstantArgmin::Pair(l, m) => {
                    json!({ "kind": "pair", "lambda": json_num(l), "mu": json_num(m) })
                }
            };
            let results = json!({
                "M": json_num(report.m),
                "M1": json_num(report.m1),
                "M2": report.m2.map(json_num).unwrap_or(Value::Null),
                "argmin": argmin,
            });
            Ok(("mconst", json!({ "spectrum": spectrum }), results))
        }
        Command::VerifyOp { s, t } => {
            let (smat, smeta) = load_matrix(s)?;
            let (tmat, tmeta) = load_matrix(t)?;
            let n = smat.dim();
            let scale = smat.max_abs_entry().max(1.0);
            for i in 0..n {
                for j in 0..n {
                    if i != j && smat.entry(i, j).norm() > 1e-12 * scale {
                        return Err(Error::Parse {
                            field: format!("{}", s.display()),
                            message: "S must be a diagonal matrix".into(),
                        });
                    }
                }
            }
            let sdiag = smat.diagonal_real();
            let (lhs, rhs) = verify_inequality(&sdiag, &tmat)?;
            let m = rhs / tmat.spectral_norm().max(1e-300);
            let results = json!({
                "lhs": json_num(lhs),
                "rhs": json_num(rhs),
                "M_S": json_num(m),
                "satisfied": lhs >= rhs - 1e-9,
            });
            Ok((
                "verify-op",
                json!({ "S": smeta, "T": tmeta }),
                results,
            ))
        }
        Command::HuntInf2 { budget } => {
            let hunt_cfg = OracleConfig {
                sample_budget: *budget,
                ..cfg
            };
            let out = counterexample_search_inf2(&hunt_cfg)?;
            let results = match out.witness {
                Some(w) => json!({
                    "found": true,
                    "samples_scanned": out.samples_scanned,
                    "witness": {
                        "matrix": matrix_to_json(&w.matrix),
                        "diag_relaxation": json_num(w.relax_value),
                        "frobenius_index": json_num(w.frobenius_value),
                        "gap": json_num(w.gap),
                    },
                }),
                None => json!({
                    "found": false,
                    "samples_scanned": out.samples_scanned,
                }),
            };
            Ok(("hunt-inf2", Value::Null, results))
        }
        Command::ProbeConjecture { budget } => {
            let results = probe_conjecture(*budget, &cfg)?;
            Ok(("probe-conjecture", Value::Null, results))
        }
        Command::Selftest { quick } => {
            let stcfg = SelftestConfig {
                seed: cli.seed,
                quick: *quick,
            };
            let checks = crate::selftest::run_all(&stcfg);
            let all_passed = checks.iter().all(|c| c.passed());
            for c in &checks {
                let tag = match c.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Inconclusive => "INCONCLUSIVE",
                };
                eprintln!("{:<4} {:<12} [{:>6} ms] {} — {}", c.id, tag, c.millis, c.name, c.detail);
            }
            let results = json!({
                "all_passed": all_passed,
                "checks": checks.iter().map(|c| json!({
                    "id": c.id,
                    "name": c.name,
                    "status": match c.status {
                        CheckStatus::Pass => "pass",
                        CheckStatus::Fail => "fail",
                        CheckStatus::Inconclusive => "inconclusive",
                    },
                    "detail": c.detail,
                    "millis": c.millis,
                })).collect::<Vec<_>>(),
            });
            Ok(("selftest", Value::Null, results))
        }
    }
}

/// Random probe of the still-open question whether I(A) = I(sp, A) forces
/// nonnegative entries: reports any near-equality instance with a negative
/// entry, asserting nothing.
fn probe_conjecture(budget: usize, cfg: &OracleConfig) -> Result<Value, Error> {
    let mut candidates = Vec::new();
    let mut closest_gap = f64::INFINITY;
    let mut tested = 0usize;
    for k in 0..budget {
        let mut rng = crate::oracle::restart_rng(cfg.seed ^ 0xc07, k as u64);
        let n = 2 + k % 3;
        let a = crate::oracle::random_real_psd(n, &mut rng);
        let min_entry = a
            .as_matrix()
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min);
        if min_entry >= -1e-9 {
            continue;
        }
        tested += 1;
        let imin = crate::minimal::minimal_index(&a)?.value;
        if imin <= 1e-12 {
            continue;
        }
        let quick = OracleConfig {
            restarts: 24,
            ..*cfg
        };
        let isp = spectral_index_search(&a, &quick)?.value;
        let gap = (isp - imin).abs();
        closest_gap = closest_gap.min(gap);
        if gap <= 1e-7 {
            candidates.push(json!({
                "matrix": matrix_to_json(&a),
                "minimal_index": json_num(imin),
                "spectral_index": json_num(isp),
                "min_entry": json_num(min_entry),
            }));
        }
    }
    Ok(json!({
        "budget": budget,
        "instances_with_negative_entries": tested,
        "candidates_found": candidates.len(),
        "candidates": candidates,
        "closest_gap_seen": if closest_gap.is_finite() { json_num(closest_gap) } else { Value::Null },
        "note": "reporting only; no invariant asserts the conjecture either way",
    }))
}

fn print_table(report: &Value) {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, val, out);
            }
        }
        Value::Array(items) => {
            if items.iter().all(|x| x.is_number()) && items.len() <= 32 {
                let joined = items
                    .iter()
                    .map(render_scalar)
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push((prefix.to_string(), format!("[{joined}]")));
            } else {
                for (i, item) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), item, out);
                }
            }
        }
        scalar => out.push((prefix.to_string(), render_scalar(scalar))),
    }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if f == f.trunc() && f.abs() < 1e15 {
                    format!("{f}")
                } else {
                    format!("{f:.11e}")
                }
            } else {
                n.to_string()
            }
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
