use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;
use thiele_cli::commands::{
    self, ConvertFrom, ConvertTo, Property, RuleArg, SolveMode, VariantArg,
};
use thiele_cli::CliError;

/// Exact Thiele committee solver and domain toolkit.
///
/// Exit codes: 0 ok, 2 malformed input, 3 domain violation or bad witness,
/// 4 weights unsupported by the chosen mode, 5 unsupported conversion,
/// 6 instance too large for exhaustive search.
#[derive(Parser)]
#[command(name = "thiele", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an optimal committee.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum)]
        rule: Option<RuleArg>,
        #[arg(long)]
        weights_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "algorithm")]
        mode: SolveMode,
        /// Require the residual matrix to have the consecutive-ones property.
        #[arg(long)]
        validate_domain: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Test a structural property of an approval matrix.
    Check {
        input: PathBuf,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long)]
        order_file: Option<PathBuf>,
    },
    /// Translate between interval, tree, order and matrix representations.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        from: ConvertFrom,
        #[arg(long, value_enum)]
        to: ConvertTo,
        #[arg(long)]
        order_file: Option<PathBuf>,
    },
    /// Build a set-cover gadget election on a star.
    Gen {
        #[arg(long)]
        set_cover: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Dummy voters per leaf in the all-vertex variant; defaults to the universe size.
        #[arg(long)]
        dummy_multiplier: Option<usize>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Brute-force optimum over all committees.
    Oracle {
        input: PathBuf,
        #[arg(long, value_enum)]
        rule: Option<RuleArg>,
        #[arg(long)]
        weights_file: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Value, CliError> {
    match cli.command {
        Command::Solve {
            input,
            rule,
            weights_file,
            mode,
            validate_domain,
            trace,
        } => {
            let (e, w) = commands::load_election(&input, rule, weights_file.as_deref())?;
            commands::solve(&e, &w, mode, validate_domain, trace)
        }
        Command::Check {
            input,
            property,
            order_file,
        } => commands::check(&input, property, order_file.as_deref()),
        Command::Convert {
            input,
            from,
            to,
            order_file,
        } => commands::convert(&input, from, to, order_file.as_deref()),
        Command::Gen {
            set_cover,
            variant,
            dummy_multiplier,
            out_dir,
        } => commands::gen(&set_cover, variant, dummy_multiplier, &out_dir),
        Command::Oracle {
            input,
            rule,
            weights_file,
        } => {
            let (e, w) = commands::load_election(&input, rule, weights_file.as_deref())?;
            commands::oracle(&e, &w)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                thiele_cli::EXIT_MALFORMED
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(doc) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("json values serialize")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
