mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use adhm_core::adhm::{AdhmParams, Strategy};
use adhm_core::Error;
use clap::{Args, Parser, Subcommand};

use commands::{Grid, Settings, TangentSource};

#[derive(Parser, Debug)]
#[command(name = "adhm-blowup-kit", version, about = "Exact ADHM data and monads on blow-ups of the projective plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for sampling and scans (defaults to the config's seed, then 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample count per chart for rank-drop scans.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Solve the minor system exactly when the matrix dimension is below this.
    #[arg(long = "exact-below", global = true)]
    exact_below: Option<usize>,
    /// Print the full JSON report.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[arg(short = 'r')]
    r: usize,
    /// Comma-separated aᵢ; may be empty.
    #[arg(short = 'a', num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
    a: Vec<String>,
    #[arg(short = 'k', allow_negative_numbers = true)]
    k: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a configuration and its monad.
    Validate { config: PathBuf },
    /// Monad dimensions for (r, a, k).
    Dims {
        #[arg(short = 'r', allow_negative_numbers = true)]
        r: i64,
        #[arg(short = 'a', num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        a: Vec<String>,
        #[arg(short = 'k', allow_negative_numbers = true)]
        k: i64,
    },
    /// Euler characteristic of O(p, q).
    Chi {
        #[arg(short = 'p', allow_negative_numbers = true)]
        p: i64,
        #[arg(short = 'q', num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        q: Vec<String>,
    },
    /// Sample a valid configuration.
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "auto")]
        strategy: String,
        /// Also write the configuration file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank-drop loci of α and β.
    Scan { config: PathBuf },
    /// Empirical moduli dimension at a configuration, or at a sampled one.
    Tangent {
        config: Option<PathBuf>,
        #[arg(short = 'r', requires = "k")]
        r: Option<usize>,
        #[arg(short = 'a', num_args = 0.., value_delimiter = ',', allow_negative_numbers = true)]
        a: Vec<String>,
        #[arg(short = 'k', allow_negative_numbers = true)]
        k: Option<i64>,
        #[arg(long, default_value = "auto")]
        strategy: String,
    },
    /// Check c2 = witness·c1, or print witness·c1.
    Orbit {
        #[arg(long)]
        witness: PathBuf,
        c1: PathBuf,
        c2: Option<PathBuf>,
    },
    /// Full report for a configuration, or the moduli dimension over a grid.
    Report {
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_r: usize,
        #[arg(long, default_value_t = 1)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_k: i64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "-1,1")]
        a_values: Vec<i64>,
    },
}

fn int_list(raw: &[String]) -> anyhow::Result<Vec<i64>> {
    raw.iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| anyhow::anyhow!("not an integer: {s:?}")))
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<commands::Outcome> {
    let settings = Settings { seed: cli.seed, samples: cli.samples, exact_below: cli.exact_below };
    match cli.command {
        Command::Validate { config } => commands::validate(&config, &settings),
        Command::Dims { r, a, k } => commands::dims(r, &int_list(&a)?, k),
        Command::Chi { p, q } => commands::chi(p, &int_list(&q)?),
        Command::Sample { params, strategy, out } => {
            let p = AdhmParams::new(params.r, int_list(&params.a)?, params.k);
            commands::sample(p, strategy.parse::<Strategy>()?, out.as_deref(), &settings)
        }
        Command::Scan { config } => commands::scan(&config, &settings),
        Command::Tangent { config, r, a, k, strategy } => match (config, r, k) {
            (Some(path), None, None) => commands::tangent(TangentSource::File(&path), &settings),
            (None, Some(r), Some(k)) => {
                let p = AdhmParams::new(r, int_list(&a)?, k);
                commands::tangent(TangentSource::Sample(p, strategy.parse()?), &settings)
            }
            _ => anyhow::bail!("tangent takes either a config file or -r/-a/-k"),
        },
        Command::Orbit { witness, c1, c2 } => commands::orbit(&witness, &c1, c2.as_deref()),
        Command::Report { config: Some(path), .. } => commands::report_config(&path, &settings),
        Command::Report { config: None, max_r, max_n, max_k, a_values } => {
            commands::report_grid(&Grid { max_r, max_n, max_k, a_values }, &settings)
        }
    }
}

/// `-a -1,2` → `-a=-1,2`, so that lists starting with a minus sign are not read as flags.
fn join_list_values(args: Vec<String>) -> Vec<String> {
    let is_list = |s: &str| {
        s.split(',').all(|x| {
            let digits = x.strip_prefix('-').unwrap_or(x);
            !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
        })
    };
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter().peekable();
    while let Some(a) = it.next() {
        if (a == "-a" || a == "-q") && it.peek().is_some_and(|v| v.starts_with('-') && is_list(v)) {
            let v = it.next().unwrap_or_default();
            out.push(format!("{a}={v}"));
        } else {
            out.push(a);
        }
    }
    out
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::InfeasibleParameters(_)) => 2,
        Some(Error::SamplingFailure(_)) => 3,
        _ => 1,
    }
}


fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(join_list_values(std::env::args().collect())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let as_json = cli.json;
    match run(cli) {
        Ok(out) => {
            match (&out.text, as_json) {
                (Some(t), false) => println!("{t}"),
                _ => println!("{}", report::render(&out.report, as_json)),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
