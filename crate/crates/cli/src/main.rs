//! `jconf`: run verification suites and print their reports.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use jconf::report::{report_emit, Format};
use jconf::suites::{catalog_algebra, run_suite, SuiteConfig, CATALOG, SUITES};

#[derive(Parser, Debug)]
#[command(
    name = "jconf",
    version,
    about = "Exact verification suites for Jordan and Lie conformal superalgebras"
)]
struct Args {
    /// One of jn, js1, kn, ck6, jck4, kkm, brackets, tkk, bridge, derivations, mutation, all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Restrict to a single n; by default each suite runs its own range.
    #[arg(long)]
    n: Option<usize>,
    /// Laurent window for coefficient indices.
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    tmin: i64,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    tmax: i64,
    /// Enumerate monomials with t-degree in [-max-tdeg, max-tdeg].
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    max_tdeg: i32,
    /// ∂-degree bound for span closures.
    #[arg(long)]
    max_ddeg: Option<u8>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Random triples drawn for K_6.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value = "text")]
    format: Format,
    /// Skip remaining sections after the first failure.
    #[arg(long)]
    fail_fast: bool,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Print the catalog JSON of a built algebra (J0..J3, JS1, K0..K6, CK6, JCK4, JCK4-J3) instead of running a suite.
    #[arg(long)]
    catalog: Option<String>,
    /// Record wall time in the report (breaks run-to-run identity).
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(name) = &args.catalog {
        return match catalog_algebra(name) {
            Ok(alg) => emit(&alg.to_catalog_json()),
            Err(e) => {
                eprintln!("error: {e}; known: {}", CATALOG.join(", "));
                ExitCode::from(2)
            }
        };
    }
    if !SUITES.contains(&args.suite.as_str()) {
        eprintln!(
            "unknown suite `{}`; expected one of {}",
            args.suite,
            SUITES.join(", ")
        );
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build_global()
    {
        eprintln!("thread pool: {e}");
        return ExitCode::from(2);
    }
    let cfg = SuiteConfig {
        n: args.n,
        tmin: args.tmin,
        tmax: args.tmax,
        max_tdeg: args.max_tdeg,
        max_ddeg: args.max_ddeg,
        seed: args.seed,
        samples: args.samples,
        fail_fast: args.fail_fast,
    };
    let start = Instant::now();
    let mut report = match run_suite(&args.suite, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if args.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let code = emit(&report_emit(&report, args.format));
    if code != ExitCode::SUCCESS || report.summary.fail > 0 {
        return if code == ExitCode::SUCCESS {
            ExitCode::FAILURE
        } else {
            code
        };
    }
    ExitCode::SUCCESS
}

fn emit(doc: &str) -> ExitCode {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{doc}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("error writing output: {e}");
            ExitCode::from(2)
        }
        _ => ExitCode::SUCCESS,
    }
}
