//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation or I/O failure,
//! 3 property or reference-value failure.

mod scan;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::measures::{
    check_properties, luo_uncertainty, q_alpha, q_star, von_neumann, Alpha, MeasureReport, PropertyConfig,
    PropertyLedger, Sample,
};
use crate::observables::Observable;
use crate::random;
use crate::states::{hansen, maximally_mixed, pure, werner, DensityMatrix, StateFile};
use crate::{Error, Result};

pub use scan::{fmt_float, linspace, werner_scan, ScanGrid, ScanRow, SurfacePoint, WernerScan, DEGENERATE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

pub const OUT_ENV: &str = "QUMETRICS_OUT";
pub const DEFAULT_OUT: &str = "qumetrics-out";

/// Values printed for the 4x4 worked example, with the tolerance they are held to.
pub const HANSEN_LUO: f64 = 1.5385;
pub const HANSEN_Q_QUARTER: f64 = 1.2213;
pub const HANSEN_Q_STAR: f64 = 1.0748;
pub const HANSEN_ENTROPY_PRINTED: f64 = 0.60319;
pub const HANSEN_TOL: f64 = 5e-4;

#[derive(Debug, Parser)]
#[command(name = "qumetrics", version, about = "Wigner-Yanase-Dyson uncertainty measures for density matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every measure for one state file, optionally against an observable.
    Measure {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        observable: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 0.75])]
        alpha: Vec<f64>,
        /// Rényi and Tsallis index.
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 4x4 worked example against its printed values.
    Hansen,
    /// Sweep the Werner family into fig1/fig2/fig3 CSVs and gnuplot scripts.
    WernerScan {
        #[arg(long, default_value_t = 51)]
        lambda_steps: usize,
        #[arg(long, default_value_t = 99)]
        alpha_steps: usize,
        #[arg(long, default_value_t = 0.25)]
        lambda_min: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suite on seeded random and named states.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per dimension.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4, 6])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `--out`, then `$QUMETRICS_OUT`, then `qumetrics-out`.
pub fn output_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Format(format!("{}: {e}", path.display()))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Measure { state, observable, alpha, q, out } => {
            cmd_measure(&state, observable.as_deref(), &alpha, q, &output_dir(out))
        }
        Command::Hansen => cmd_hansen(),
        Command::WernerScan { lambda_steps, alpha_steps, lambda_min, lambda_max, out } => {
            let grid = ScanGrid { lambda_min, lambda_max, lambda_steps, alpha_steps, ..Default::default() };
            cmd_werner_scan(&grid, &output_dir(out))
        }
        Command::Verify { seed, samples, dims, tol, out } => {
            cmd_verify(&VerifyConfig { seed, samples, dims, tol }, &output_dir(out))
        }
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn read_state(path: &Path) -> Result<DensityMatrix> {
    StateFile::read(path)?.to_density()
}

pub fn cmd_measure(state: &Path, observable: Option<&Path>, alphas: &[f64], q: f64, out: &Path) -> Result<bool> {
    let rho = read_state(state)?;
    let x = observable.map(|p| StateFile::read(p).and_then(|f| Observable::from_file(&f))).transpose()?;
    let alphas = alphas.iter().map(|&a| Alpha::new(a)).collect::<Result<Vec<_>>>()?;
    let report = MeasureReport::compute(&rho, &alphas, q, x.as_ref())?;

    println!("n                  {}", report.n);
    println!("rank               {}", report.rank);
    println!("S (nats)           {:.10}", report.entropies.von_neumann);
    println!("S_renyi(q={q})     {:.10}", report.entropies.renyi);
    println!("S_tsallis(q={q})   {:.10}", report.entropies.tsallis);
    println!("I_BZ               {:.10}", report.entropies.brukner_zeilinger);
    println!("purity             {:.10}", report.entropies.purity);
    println!("L                  {:.10}", report.luo);
    for v in &report.q_alpha {
        println!("Q_{:<16} {:.10}", v.alpha, v.value);
    }
    println!("Q*                 {:.10}", report.q_star);
    match report.critical_alpha {
        Some(a) => println!("alpha_c            {a:.10}"),
        None => println!("alpha_c            {DEGENERATE}"),
    }
    if let Some(obs) = &report.observable {
        println!("V                  {:.10}", obs.variance);
        for v in &obs.wyd_info {
            println!("I_{:<16} {:.10}", v.alpha, v.value);
        }
    }

    let stem = state.file_stem().and_then(|s| s.to_str()).unwrap_or("state");
    let path = write_file(out, &format!("{stem}.report.json"), &to_json(&report))?;
    println!("wrote {}", path.display());
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HansenRow {
    pub name: &'static str,
    pub computed: f64,
    pub printed: f64,
    pub diff: f64,
    /// `false` for rows that are reported but not held to the printed value.
    pub checked: bool,
}

pub fn hansen_rows() -> Vec<HansenRow> {
    let rho = hansen();
    let row = |name, computed: f64, printed: f64, checked| HansenRow {
        name,
        computed,
        printed,
        diff: (computed - printed).abs(),
        checked,
    };
    vec![
        row("L", luo_uncertainty(&rho), HANSEN_LUO, true),
        row("Q_1/4", q_alpha(&rho, Alpha::new(0.25).expect("in range")), HANSEN_Q_QUARTER, true),
        row("Q*", q_star(&rho), HANSEN_Q_STAR, true),
        row("S", von_neumann(&rho), HANSEN_ENTROPY_PRINTED, false),
    ]
}

pub fn cmd_hansen() -> Result<bool> {
    let rho = hansen();
    let eig: Vec<String> = rho.eigenvalues().iter().map(|l| format!("{:.8}", l * 26.0)).collect();
    println!("eigenvalues x 26: {}", eig.join(", "));
    println!("{:<6} {:>14} {:>10} {:>12}  status", "", "computed", "printed", "|diff|");
    let mut ok = true;
    for r in hansen_rows() {
        let status = if !r.checked {
            "DISCREPANCY (printed value not reproducible from the eigenvalues; not checked)"
        } else if r.diff <= HANSEN_TOL {
            "ok"
        } else {
            ok = false;
            "FAIL"
        };
        println!("{:<6} {:>14.10} {:>10} {:>12.3e}  {status}", r.name, r.computed, r.printed, r.diff);
    }
    Ok(ok)
}

pub fn cmd_werner_scan(grid: &ScanGrid, out: &Path) -> Result<bool> {
    let scan = werner_scan(grid)?;
    for (name, contents) in scan.files() {
        let path = write_file(out, name, &contents)?;
        println!("wrote {}", path.display());
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub dims: Vec<usize>,
    pub tol: f64,
}

/// α values every property is checked at.
pub const VERIFY_ALPHAS: [f64; 7] = [0.05, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.75, 0.9];

/// Seeded random samples per dimension (every fourth one of rank `n - 1`),
/// followed by the named states.
pub fn verify_samples(cfg: &VerifyConfig) -> Result<Vec<Sample>> {
    let mut rng = random::rng(cfg.seed);
    let mut samples = Vec::new();
    for &n in &cfg.dims {
        if n == 0 {
            return Err(Error::DimensionMismatch("dimension must be positive".into()));
        }
        for k in 0..cfg.samples {
            let rho = if k % 4 == 3 && n > 1 {
                random::rank_density_with(n, n - 1, &mut rng)
            } else {
                random::ginibre_density_with(n, &mut rng)
            };
            samples.push(Sample::new(rho, random::observable_with(n, &mut rng)));
        }
        let psi = random::pure_vector_with(n, &mut rng);
        samples.push(Sample::new(pure(&psi)?, random::observable_with(n, &mut rng)));
        samples.push(Sample::new(maximally_mixed(n), random::observable_with(n, &mut rng)));
    }
    for lambda in linspace(0.25, 1.0, 7) {
        samples.push(Sample::new(werner(lambda)?, random::observable_with(4, &mut rng)));
    }
    samples.push(Sample::new(hansen(), random::observable_with(4, &mut rng)));
    Ok(samples)
}

#[derive(Debug, Serialize)]
struct VerifyReport<'a> {
    config: &'a VerifyConfig,
    samples: usize,
    alphas: &'a [f64],
    werner_half_q_half: f64,
    passed: bool,
    ledger: &'a PropertyLedger,
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<PropertyLedger> {
    if cfg.samples == 0 {
        return Err(Error::Format("--samples must be at least 1".into()));
    }
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::Format("--tol must be positive".into()));
    }
    let samples = verify_samples(cfg)?;
    let alphas = VERIFY_ALPHAS.iter().map(|&a| Alpha::new(a)).collect::<Result<Vec<_>>>()?;
    let pcfg = PropertyConfig { tol: cfg.tol, seed: cfg.seed, ..Default::default() };
    Ok(check_properties(&samples, &alphas, &pcfg))
}

pub fn cmd_verify(cfg: &VerifyConfig, out: &Path) -> Result<bool> {
    let ledger = run_verify(cfg)?;
    println!("{:<30} {:>8} {:>8} {:>14}", "property", "checks", "failed", "worst excess");
    for t in ledger.tallies() {
        println!("{:<30} {:>8} {:>8} {:>14.3e}", t.property.name(), t.checks, t.failures, t.worst_excess);
    }
    for f in ledger.failures.iter().take(20) {
        println!(
            "FAIL {} sample {} alpha {:?}: residual {:.3e} > {:.3e}",
            f.property, f.sample, f.alpha, f.residual, f.tolerance
        );
    }
    let q_half = q_alpha(&werner(0.5)?, Alpha::HALF);
    println!("werner(1/2) Q_1/2 = {q_half:.10}");
    let passed = ledger.passed();
    println!("{} checks, {} failures", ledger.total_checks(), ledger.failures.len());

    let report = VerifyReport {
        config: cfg,
        samples: verify_samples(cfg)?.len(),
        alphas: &VERIFY_ALPHAS,
        werner_half_q_half: q_half,
        passed,
        ledger: &ledger,
    };
    let path = write_file(out, "verify.json", &to_json(&report))?;
    println!("wrote {}", path.display());
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from(["qumetrics", "measure", "--state", "s.json", "--alpha", "0.1,0.2"]).unwrap();
        match cli.command {
            Command::Measure { alpha, q, .. } => {
                assert_eq!(alpha, vec![0.1, 0.2]);
                assert_eq!(q, 2.0);
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from(["qumetrics", "verify"]).unwrap();
        match cli.command {
            Command::Verify { dims, samples, tol, .. } => {
                assert_eq!(dims, vec![2, 3, 4, 6]);
                assert_eq!(samples, 200);
                assert_eq!(tol, 1e-8);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["qumetrics", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["qumetrics", "werner-scan", "--lambda-steps", "x"]), EXIT_USAGE);
    }

    #[test]
    fn explicit_out_wins() {
        assert_eq!(output_dir(Some(PathBuf::from("a"))), PathBuf::from("a"));
    }

    #[test]
    fn hansen_reference_rows() {
        let rows = hansen_rows();
        assert!(rows.iter().filter(|r| r.checked).all(|r| r.diff <= HANSEN_TOL));
        let s = rows.iter().find(|r| r.name == "S").unwrap();
        assert!(s.diff > 0.02);
    }

    #[test]
    fn small_verify_passes() {
        let cfg = VerifyConfig { seed: 4, samples: 4, dims: vec![2, 3], tol: 1e-8 };
        let ledger = run_verify(&cfg).unwrap();
        assert!(ledger.passed(), "{:#?}", ledger.failures);
        assert!(run_verify(&VerifyConfig { samples: 0, ..cfg }).is_err());
    }
}
