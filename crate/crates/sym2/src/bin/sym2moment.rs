use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sym2_moment::harness::{
    cmd_moment, cmd_plotdata, cmd_verify, exit_code_for, log_event, render_checks, render_moment, Format, RunConfig, Suite,
    EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK,
};
use sym2_moment::lvalues::LhsRoute;
use sym2_moment::modforms::cache_dir_from_env;
use sym2_moment::Error;

#[derive(Parser)]
#[command(name = "sym2moment", version, about = "First moment of L(1/2, sym^2 f) over level-one eigenforms")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, default_value_t = 12)]
    k_min: u32,
    #[arg(long, global = true, default_value_t = 60)]
    k_max: u32,
    #[arg(long, global = true, default_value_t = 50)]
    digits: u32,
    #[arg(long, global = true, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Kernel-sum cutoff; 0 picks the smallest certified one.
    #[arg(long, global = true, default_value_t = 0)]
    n_cutoff: u64,
    /// Kloosterman modulus cutoff for the Petersson suite; 0 picks certified ones.
    #[arg(long, global = true, default_value_t = 0)]
    c_max: u64,
    #[arg(long, global = true, value_enum, default_value_t = Route::Oracle)]
    route: Route,
    /// Overrides SYM2_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Oracle,
    Afe,
}

#[derive(Subcommand)]
enum Command {
    /// Left side, main terms and residual for every even weight in range.
    Moment,
    /// Run one verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Plotting columns derived from a finished moment table.
    Plotdata {
        /// Moment table written by `sym2moment moment`.
        #[arg(long)]
        input: PathBuf,
    },
}

fn config_from(opts: &Opts, suite: Option<Suite>) -> RunConfig {
    RunConfig {
        k_min: opts.k_min,
        k_max: opts.k_max,
        digits: opts.digits,
        sigma: opts.sigma,
        n_cutoff: opts.n_cutoff,
        c_max: opts.c_max,
        route: match opts.route {
            Route::Oracle => LhsRoute::Oracle,
            Route::Afe => LhsRoute::Afe,
        },
        format: opts.format,
        suite,
        cache_dir: opts.cache_dir.clone().or_else(cache_dir_from_env),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Moment => {
            let config = config_from(&cli.opts, None);
            let rows = cmd_moment(&config)?;
            emit(&render_moment(&rows, &config)?, &cli.opts.out)?;
            let failed = rows.iter().filter(|r| !r.is_done()).count();
            log_event(serde_json::json!({"event": "moment_finished", "rows": rows.len(), "failed": failed}));
            Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Verify { suite } => {
            let config = config_from(&cli.opts, Some(*suite));
            let checks = cmd_verify(&config, *suite)?;
            emit(&render_checks(&checks, &config)?, &cli.opts.out)?;
            let failed = checks.iter().filter(|c| !c.passed()).count();
            log_event(serde_json::json!({"event": "verify_finished", "suite": suite.name(), "checks": checks.len(), "failed": failed}));
            Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Plotdata { input } => {
            let config = config_from(&cli.opts, None);
            emit(&cmd_plotdata(input, &config)?, &cli.opts.out)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(&cli).unwrap_or_else(|e| {
        log_event(serde_json::json!({"event": "error", "error": e.to_string()}));
        match e {
            Error::Config(_) => EXIT_CONFIG,
            ref other => exit_code_for(other),
        }
    });
    ExitCode::from(code as u8)
}
