use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vershik_ga::bench::{format_summary, run_suite, summarize, write_csv, Grouping, Suite};
use vershik_ga::instance_gen::{generate, InstanceSpec, Layout};
use vershik_ga::traceback::{format_trace, trace};
use vershik_ga::word::{normal_form, pseudo_normal_form};
use vershik_ga::{
    ga, is_solution, Error, GaConfig, GroupSpec, InstanceFile, Outcome, ParameterSet, RngSource,
    SubstitutionMode,
};

#[derive(Parser)]
#[command(name = "vershik-ga", version, about = "Double coset search in Vershik groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of a word, or of every line of a file.
    Reduce {
        #[arg(long)]
        rank: usize,
        /// Geodesic cancellation only, without reordering.
        #[arg(long)]
        pseudo: bool,
        /// A word such as "3 -2 5", or a path to a file with one word per line.
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Generate a random instance with a known solution.
    Gen(GenArgs),
    /// Solve an instance file with the genetic algorithm.
    Solve(SolveArgs),
    /// Run a benchmark suite and write per-run CSV records.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Override the suite's grouping for the printed summary.
        #[arg(long, value_enum)]
        group: Option<GroupArg>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    la: usize,
    #[arg(long)]
    lx: usize,
    #[arg(long)]
    ly: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use Y = {1..m-1}, Z = {m+2..2m} for rank 2m.
    #[arg(long, conflicts_with_all = ["y_set", "z_set"])]
    problem_p: bool,
    /// Generator indices of Y, e.g. "1 2 3".
    #[arg(long = "Y", requires = "z_set")]
    y_set: Option<String>,
    #[arg(long = "Z", requires = "y_set")]
    z_set: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long)]
    pop: Option<usize>,
    /// Operator counts "ν_C,ν_M,ν_D,ν_I,ν_S,ν_R".
    #[arg(long)]
    params: Option<ParameterSet>,
    #[arg(long, default_value_t = 20_000)]
    sigma: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    init_len: usize,
    /// Print the traceback of the best chromosome whenever the best cost drops.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t = SubstArg::Random)]
    substitution: SubstArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubstArg {
    Random,
    Recommended,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Instance,
    S,
}

type CliResult<T> = std::result::Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn parse_indices(text: &str) -> CliResult<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("bad generator index '{t}'")))
        .collect()
}

fn reduce(rank: usize, pseudo: bool, input: &str) -> CliResult<()> {
    let spec = GroupSpec::new(rank).map_err(|e| e.to_string())?;
    let path = Path::new(input);
    let lines: Vec<String> = if path.is_file() {
        read(path)?.lines().map(str::to_string).collect()
    } else {
        vec![input.to_string()]
    };
    let mut out = io::stdout().lock();
    for (k, line) in lines.iter().enumerate() {
        let w = spec
            .parse_word(line)
            .map_err(|e| if lines.len() > 1 { format!("line {}: {e}", k + 1) } else { e.to_string() })?;
        let r = if pseudo { pseudo_normal_form(&w, &spec) } else { normal_form(&w, &spec) };
        writeln!(out, "{r}").map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn gen(args: GenArgs) -> CliResult<()> {
    let layout = match (args.problem_p, &args.y_set, &args.z_set) {
        (_, Some(y), Some(z)) => Layout::Explicit {
            y: parse_indices(y)?,
            z: parse_indices(z)?,
        },
        (true, _, _) => Layout::ProblemP,
        _ => return Err("choose --problem-p or give both --Y and --Z".into()),
    };
    let g = generate(&InstanceSpec {
        rank: args.rank,
        l_a: args.la,
        l_x: args.lx,
        l_y: args.ly,
        layout,
        seed: args.seed,
    })
    .map_err(|e| e.to_string())?;
    let text = g.to_file().to_string();
    match args.out {
        Some(p) => fs::write(&p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn solve(args: SolveArgs) -> CliResult<ExitCode> {
    let file: InstanceFile = read(&args.file)?
        .parse()
        .map_err(|e: Error| format!("{}: {e}", args.file.display()))?;
    let inst = file.instance;
    let params = args.params.unwrap_or_default();
    if let Some(p) = args.pop {
        if p != params.pop() {
            return Err(format!(
                "--pop {p} does not match the operator counts in --params (total {})",
                params.pop()
            ));
        }
    }
    let config = GaConfig {
        sigma: args.sigma,
        initial_length: args.init_len,
        seed: args.seed,
        substitution: match args.substitution {
            SubstArg::Random => SubstitutionMode::Random,
            SubstArg::Recommended => SubstitutionMode::Recommended,
        },
    };

    let mut best_seen = usize::MAX;
    let result = ga::run_observed(&inst, &params, &config, |i, pop| {
        let best = pop.best();
        if args.trace && best.cost < best_seen {
            best_seen = best.cost;
            // A private source keeps the run's own decision stream untouched.
            let t = trace(&inst, &best.chromosome, &mut RngSource::seeded(0));
            eprintln!("generation {i}: cost {}\n{}", best.cost, format_trace(&t));
        }
    })
    .map_err(|e| e.to_string())?;

    match result.outcome {
        Outcome::Solution(c) => {
            if !is_solution(&inst, &c) {
                return Err("internal error: returned pair does not verify".into());
            }
            println!("x {}", c.chi);
            println!("y {}", c.zeta);
            println!("generations {}", result.generations);
            println!("time_ms {}", result.elapsed.as_millis());
            Ok(ExitCode::SUCCESS)
        }
        Outcome::Timeout => {
            eprintln!(
                "timeout after {} generations (best cost {})",
                result.generations,
                result.final_cost()
            );
            Ok(ExitCode::from(2))
        }
    }
}

fn bench(config: &Path, out: &Path, jobs: usize, group: Option<GroupArg>) -> CliResult<()> {
    let suite = Suite::load(config).map_err(|e| format!("{}: {e}", config.display()))?;
    let records = run_suite(&suite, jobs).map_err(|e| format!("{}: {e}", config.display()))?;
    let file = fs::File::create(out).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    write_csv(io::BufWriter::new(file), &records).map_err(|e| e.to_string())?;
    let grouping = match group {
        Some(GroupArg::Instance) => Grouping::ByInstance,
        Some(GroupArg::S) => Grouping::ByS,
        None => suite.grouping,
    };
    print!("{}", format_summary(&summarize(&records, grouping)));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Reduce { rank, pseudo, input } => reduce(rank, pseudo, &input).map(|_| ExitCode::SUCCESS),
        Command::Gen(args) => gen(args).map(|_| ExitCode::SUCCESS),
        Command::Solve(args) => solve(args),
        Command::Bench { config, out, jobs, group } => bench(&config, &out, jobs, group).map(|_| ExitCode::SUCCESS),
    };
    outcome.unwrap_or_else(|msg| {
        eprintln!("vershik-ga: {msg}");
        ExitCode::from(1)
    })
}
