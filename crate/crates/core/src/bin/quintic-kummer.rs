use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quintic_kummer::cli_reports::{
    check_table, oracle_summary, render_json, render_oracle, render_symbols, render_table_check,
    render_text, report_document, CliError,
};

#[derive(Parser)]
#[command(
    name = "quintic-kummer",
    version,
    about = "5-class rank bounds for Q(zeta5, n^(1/5))"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank bounds, generators, C1 and descent for one radicand.
    Report {
        n: u64,
        #[arg(long)]
        assume_strongly_ambiguous: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check one of the four bundled tables row by row.
    TableCheck {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        table: u8,
    },
    /// Verify the filtration rank formulas on all exponent multisets up to max_t.
    Oracle {
        #[arg(value_parser = clap::value_parser!(u64).range(3..=7))]
        ell: u64,
        max_t: usize,
    },
    /// Dump every C1 entry with the symbol it came from.
    Symbols { n: u64 },
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Report {
            n,
            assume_strongly_ambiguous,
            json,
        } => {
            let doc = report_document(n, assume_strongly_ambiguous)?;
            if json {
                println!("{}", render_json(&doc)?);
            } else {
                print!("{}", render_text(&doc));
            }
            Ok(0)
        }
        Cmd::TableCheck { table } => {
            let c = check_table(table)?;
            print!("{}", render_table_check(&c));
            Ok(if c.passed() { 0 } else { 2 })
        }
        Cmd::Oracle { ell, max_t } => {
            if ell == 4 || ell == 6 {
                eprintln!("ell must be 3, 5 or 7");
                return Ok(1);
            }
            let s = oracle_summary(ell, max_t)?;
            print!("{}", render_oracle(&s));
            Ok(if s.failures.is_empty() { 0 } else { 2 })
        }
        Cmd::Symbols { n } => {
            print!("{}", render_symbols(n)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
