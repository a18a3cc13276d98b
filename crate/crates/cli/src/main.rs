use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcluster::commands::{self, Report};
use qcluster::error::CliError;
use qcluster::exec::RayonExecutor;
use qcluster::json::ElementInput;

#[derive(Parser)]
#[command(name = "qcluster", version, about = "Quantum cluster seeds, mutation and universal polynomiality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Frozen,
    Gmatrix,
    Transport,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Sl2,
    AnChain,
    Markov,
    Sl2Coproduct,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Seed,
    Elements,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed along a path and print the result.
    Mutate {
        /// Seed JSON file, `-` for stdin, or a built-in label.
        #[arg(long)]
        seed: String,
        #[arg(long, default_value = "")]
        path: String,
    },
    /// Breadth-first exchange graph up to a depth.
    Enumerate {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// C-matrix at the end of a path.
    Cvec {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value = "")]
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// G-matrix at the end of a path.
    Gvec {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value = "")]
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Extended G-matrix at the end of a path.
    Gtilde {
        #[arg(long)]
        seed: String,
        #[arg(long, default_value = "")]
        path: String,
        #[arg(long)]
        json: bool,
    },
    /// Is the monomial with this exponent vector universally monomial?
    CheckMono {
        #[arg(long)]
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Universal polynomiality of an element or a bundle of elements.
    CheckPoly {
        #[arg(long, default_value = "-")]
        element: String,
        /// Seed for elements that do not name one.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, value_enum, default_value = "transport")]
        mode: ModeArg,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Fold an invariant seed along orbits written like `0,2|1`.
    Fold {
        #[arg(long)]
        seed: String,
        #[arg(long)]
        orbits: String,
    },
    /// Glue seeds; `--gluing` lists the global index of each part's vertices.
    Amalgamate {
        #[arg(long = "seed", required = true)]
        seeds: Vec<String>,
        #[arg(long)]
        gluing: String,
        #[arg(long, default_value = "")]
        defrost: String,
    },
    /// Print a built-in seed or its distinguished elements.
    Scenario {
        #[arg(value_enum)]
        which: ScenarioArg,
        #[arg(long, value_enum, default_value = "elements")]
        emit: EmitArg,
        /// Rank for `an-chain`.
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Run the built-in property suite.
    Verify,
    /// Transport random frozen-sufficient polynomials and report sizes.
    Bench {
        #[arg(long, default_value_t = 8)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        frozen: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long = "rng-seed", default_value_t = 1)]
        rng_seed: u64,
        /// Include wall-clock times, which makes the output nondeterministic.
        #[arg(long)]
        timings: bool,
    },
    /// Serve the session API on localhost.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

fn run(cmd: Command) -> Result<Report, CliError> {
    use commands::*;
    match cmd {
        Command::Mutate { seed, path } => mutate(&load_seed(&seed)?, &parse_list(&path)?),
        Command::Enumerate { seed, depth, threads } => enumerate(&load_seed(&seed)?, depth, &RayonExecutor::new(threads)),
        Command::Cvec { seed, path, json } => matrix(&load_seed(&seed)?, &parse_list(&path)?, MatrixKind::C, json),
        Command::Gvec { seed, path, json } => matrix(&load_seed(&seed)?, &parse_list(&path)?, MatrixKind::G, json),
        Command::Gtilde { seed, path, json } => {
            matrix(&load_seed(&seed)?, &parse_list(&path)?, MatrixKind::GTilde, json)
        }
        Command::CheckMono { seed, vector } => check_mono(&load_seed(&seed)?, &parse_vector(&vector)?),
        Command::CheckPoly { element, seed, mode, depth, threads } => {
            let input: ElementInput = serde_json::from_str(&read_text(&element)?)?;
            let context = seed.as_deref().map(load_seed).transpose()?;
            let mode = match mode {
                ModeArg::Frozen => Mode::Frozen,
                ModeArg::Gmatrix => Mode::Gmatrix,
                ModeArg::Transport => Mode::Transport,
            };
            let limits = limits_from_env()?;
            check_poly(input, context.as_ref(), mode, depth, &RayonExecutor::new(threads), &limits)
        }
        Command::Fold { seed, orbits } => fold(&load_seed(&seed)?, parse_blocks(&orbits)?),
        Command::Amalgamate { seeds, gluing, defrost } => {
            let parts = seeds.iter().map(|s| load_seed(s)).collect::<Result<_, _>>()?;
            amalgamate_seeds(parts, parse_blocks(&gluing)?, parse_list(&defrost)?)
        }
        Command::Scenario { which, emit, n } => {
            let which = match which {
                ScenarioArg::Sl2 => Scenario::Sl2,
                ScenarioArg::AnChain => Scenario::AnChain,
                ScenarioArg::Markov => Scenario::Markov,
                ScenarioArg::Sl2Coproduct => Scenario::Sl2Coproduct,
            };
            let emit = match emit {
                EmitArg::Seed => Emit::Seed,
                EmitArg::Elements => Emit::Elements,
            };
            scenario(which, emit, n)
        }
        Command::Verify => {
            let (text, passed) = qcluster::verify::run();
            Ok(Report { text, passed })
        }
        Command::Bench { rank, frozen, depth, samples, rng_seed, timings } => {
            bench(&BenchParams { rank, frozen, depth, samples, rng_seed, timings }, &limits_from_env()?)
        }
        Command::Serve { port, threads } => {
            let limits = limits_from_env()?;
            let mut rt = tokio::runtime::Builder::new_multi_thread();
            if threads > 0 {
                rt.worker_threads(threads);
            }
            let rt = rt.enable_all().build()?;
            rt.block_on(qcluster::server::serve(port, limits))?;
            Ok(Report::ok(String::new()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| run(cli.command))
        .unwrap_or_else(|_| Err(CliError::Internal("the engine panicked".into())));
    match result {
        Ok(report) => {
            print!("{}", report.text);
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
