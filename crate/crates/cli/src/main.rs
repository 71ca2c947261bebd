use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ah_core::{compute_table, AHTable, CheckName, Config, Error, VerificationReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "ah-lab", version, about = "Artin-Hasse coefficient tables and congruence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print u_n and a_n = u_n mod p for n <= max-n.
    Coeffs(CoeffsArgs),
    /// Run the check registry over a range of primes.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    pmin: u64,
    #[arg(long, default_value_t = 31)]
    pmax: u64,
    /// Comma-separated check names; all checks when omitted.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<CheckName>>,
    /// Table depth N for table-based checks.
    #[arg(long)]
    max_n: Option<usize>,
    /// Upper k for the even-index sums.
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long, allow_negative_numbers = true, requires = "xmax")]
    xmin: Option<i64>,
    #[arg(long, allow_negative_numbers = true, requires = "xmin")]
    xmax: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Table-based checks are skipped above this prime.
    #[arg(long, default_value_t = 31)]
    table_pmax: u64,
    /// Per-check wall-time budget in milliseconds.
    #[arg(long)]
    budget_ms: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open_out(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_coeffs_json(table: &AHTable, out: &mut dyn Write) -> io::Result<()> {
    let rows: Vec<_> = (0..=table.max_n())
        .map(|n| {
            let u = table.u(n);
            json!({
                "n": n,
                "num": u.numer().to_string(),
                "den": u.denom().to_string(),
                "a_n": table.a(n).value(),
            })
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &json!({ "p": table.p(), "rows": rows }))?;
    writeln!(out)
}

fn cmd_coeffs(args: CoeffsArgs) -> ExitCode {
    let table = match compute_table(args.p, args.max_n) {
        Ok(t) => t,
        Err(e @ (Error::InvalidArgument(_) | Error::Range { .. })) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let written = open_out(&args.out).and_then(|mut out| {
        match args.format {
            Format::Csv => table.write_csv(&mut out)?,
            Format::Json => write_coeffs_json(&table, &mut out)?,
        }
        out.flush()
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: writing output: {e}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn write_report_csv(report: &VerificationReport, out: &mut dyn Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "name", "status", "what", "at", "lhs", "rhs", "elapsed_ms", "note"])?;
    for c in report.checks() {
        let (what, at, lhs, rhs) = match &c.witness {
            Some(wit) => (
                wit.what.clone().unwrap_or_default(),
                wit.at
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";"),
                wit.lhs.to_string(),
                wit.rhs.to_string(),
            ),
            None => Default::default(),
        };
        w.write_record([
            c.prime.to_string(),
            c.name.to_string(),
            c.status.as_str().to_owned(),
            what,
            at,
            lhs,
            rhs,
            c.elapsed_ms.to_string(),
            c.note.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let config = Config {
        pmin: args.pmin,
        pmax: args.pmax,
        checks: args.checks.unwrap_or_else(|| CheckName::ALL.to_vec()),
        max_n: args.max_n,
        kmax: args.kmax,
        xmin: args.xmin,
        xmax: args.xmax,
        seed: args.seed,
        parallel: args.parallel,
        table_pmax: args.table_pmax,
        budget_ms: args.budget_ms,
        ..Config::default()
    };
    let report = match ah_core::run_all(&config) {
        Ok(r) => r,
        Err(e @ Error::InvalidArgument(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    let written = open_out(&args.out).and_then(|mut out| {
        match args.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            }
            Format::Csv => write_report_csv(&report, &mut out)?,
        }
        out.flush()
    });
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    let t = &report.totals;
    eprintln!(
        "{} checks: {} pass, {} fail, {} refuted-instance, {} skipped",
        t.total(),
        t.pass,
        t.fail,
        t.refuted_instance,
        t.skipped
    );
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Verify(args) => cmd_verify(args),
    }
}
