use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use jlparity::division::Case;
use jlparity::galois::TowerSpec;
use jlparity::harness::{
    dieudonne_suite, framework_suite, run_sweep, tower_spec, verify_suite, write_records, write_report, Format,
    GridPoint, RunConfig,
};
use jlparity::report::Report;
use jlparity::Error;

/// Parity of conjugate self-dual simple supercuspidals: sweeps and verification suites.
#[derive(Parser, Debug)]
#[command(name = "jlparity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Evaluate every conjugate self-dual parameter triple in range.
    Sweep,
    /// Twist axioms, cocycle, irreducibility and GL-side identities.
    Verify,
    /// Dieudonne and formal-module identities for n <= 6, q <= 9.
    Dieudonne,
    /// Finite-group framework checks on the built-in models.
    Framework,
    /// Print the field towers used for each (case, q, n).
    Tower,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum CaseArg {
    Split,
    Ramified,
    Unramified,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Table,
    Jsonl,
    Csv,
}

#[derive(Args, Debug)]
struct Opts {
    /// Cases to include (default: all).
    #[arg(long, global = true, value_delimiter = ',', env = "JLPARITY_CASE")]
    case: Vec<CaseArg>,
    /// Residue field sizes q.
    #[arg(long, global = true, value_delimiter = ',', env = "JLPARITY_Q")]
    q: Vec<u64>,
    /// q' for the unramified case (q = q'^2).
    #[arg(long, global = true, value_delimiter = ',', env = "JLPARITY_QPRIME")]
    qprime: Vec<u64>,
    /// Degrees n.
    #[arg(long, global = true, value_delimiter = ',', env = "JLPARITY_N")]
    n: Vec<u32>,
    /// Truncation of the division algebra model.
    #[arg(long, global = true, default_value_t = 2, env = "JLPARITY_M")]
    m: usize,
    /// Order N of the roots of unity c (default 4(q-1)).
    #[arg(long, global = true, env = "JLPARITY_C_ORDER")]
    c_order: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0, env = "JLPARITY_SEED")]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "table", env = "JLPARITY_FORMAT")]
    format: FormatArg,
    /// Output file (default: stdout).
    #[arg(long, global = true, env = "JLPARITY_OUT")]
    out: Option<PathBuf>,
    /// Add per-instance wall time to sweep records.
    #[arg(long, global = true, env = "JLPARITY_TIMING")]
    timing: bool,
    /// Run deliberately broken checks; verify must then fail.
    #[arg(long, global = true, env = "JLPARITY_INJECT_FAULT")]
    inject_fault: bool,
}

impl Opts {
    fn config(&self) -> RunConfig {
        let nonempty = |v: &Vec<u64>| (!v.is_empty()).then(|| v.clone());
        let cases = if self.case.is_empty() {
            RunConfig::default().cases
        } else {
            self.case
                .iter()
                .map(|c| match c {
                    CaseArg::Split => Case::Split,
                    CaseArg::Ramified => Case::Ramified,
                    CaseArg::Unramified => Case::Unramified,
                })
                .collect()
        };
        RunConfig {
            cases,
            q: nonempty(&self.q),
            qprime: nonempty(&self.qprime),
            n: (!self.n.is_empty()).then(|| self.n.clone()),
            m: self.m,
            c_order: self.c_order,
            seed: self.seed,
            timing: self.timing,
            inject_fault: self.inject_fault,
        }
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Table => Format::Table,
            FormatArg::Jsonl => Format::Jsonl,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Serialize)]
struct TowerRow {
    #[serde(flatten)]
    point: GridPoint,
    tower: TowerSpec,
}

fn run(cli: &Cli, out: &mut dyn Write) -> jlparity::Result<bool> {
    let cfg = cli.opts.config();
    let format = cli.opts.format();
    let emit = |r: &Report, out: &mut dyn Write| -> jlparity::Result<bool> {
        write_report(r, format, out)?;
        Ok(r.passed())
    };
    match cli.command {
        Command::Sweep => {
            let s = run_sweep(&cfg)?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            write_records(&s.records, format, out)?;
            Ok(s.all_consistent())
        }
        Command::Verify => emit(&verify_suite(&cfg)?, out),
        Command::Dieudonne => emit(&dieudonne_suite(6, 9)?, out),
        Command::Framework => emit(&framework_suite()?, out),
        Command::Tower => {
            for point in cfg.grid()? {
                let row = TowerRow { point, tower: tower_spec(point)? };
                let text = match format {
                    Format::Table => serde_json::to_string_pretty(&row),
                    _ => serde_json::to_string(&row),
                }
                .map_err(|e| Error::InvalidParameters(e.to_string()))?;
                writeln!(out, "{text}").map_err(|e| Error::InvalidParameters(e.to_string()))?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.opts.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = run(&cli, &mut out);
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
