use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use smooth_fano::Relation;
use smooth_fano_cli::{
    cmd_construct, cmd_enumerate, cmd_graph, cmd_isolate, cmd_moves, cmd_relations, cmd_verify, read_input,
    CommandResult, EnumerateOptions, GraphOutputs, IsolationSource, Pattern, EXIT_USAGE,
};

/// Smooth Fano polytopes: verification, primitive relations, F-/I-moves and
/// equivalence graphs. Polytope files use the catalog text format; `-`
/// reads standard input.
#[derive(Parser)]
#[command(name = "sfano", version)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reflexive / simplicial / smooth Fano / pseudo-symmetric verdicts.
    Verify {
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Primitive collections with their relations and degrees.
    Relations {
        input: String,
        /// One of pic2, pic3, isolated, family.
        #[arg(long)]
        pattern: Option<Pattern>,
        #[arg(long)]
        json: bool,
    },
    /// Print a named polytope: T n | V 2k | Vt 2k | pic3 a b |
    /// family a b k l1..lk | cor45 n rho | remark7d | freesum file1 file2.
    Construct {
        name: String,
        #[arg(allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// F- and I-isolation against a complete catalog, or with additions
    /// searched in a box.
    Isolate {
        input: String,
        #[arg(long, conflicts_with = "bound", required_unless_present = "bound")]
        catalog: Option<String>,
        #[arg(long = "box", id = "bound")]
        bound: Option<i64>,
    },
    /// Equivalence graph of a complete catalog.
    Graph {
        #[arg(long)]
        catalog: String,
        #[arg(long, default_value = "F")]
        relation: Relation,
        /// Graphviz output path.
        #[arg(long)]
        dot: Option<String>,
        /// JSON output path.
        #[arg(long)]
        json: Option<String>,
        #[arg(long)]
        report: bool,
        /// Replay every edge witness against the catalog.
        #[arg(long)]
        verify_witnesses: bool,
    },
    /// List the F-moves or I-moves of a polytope.
    Moves {
        input: String,
        #[arg(long, default_value = "F")]
        relation: Relation,
        /// Box for I-additions.
        #[arg(long = "box", default_value_t = 2)]
        bound: i64,
    },
    /// Enumerate smooth Fano n-polytopes by I-move closure in a growing box.
    Enumerate {
        n: usize,
        /// Use this box only instead of escalating.
        #[arg(long = "box")]
        bound: Option<i64>,
        #[arg(long)]
        max_box: Option<i64>,
        #[arg(long)]
        out: Option<String>,
        /// Allow n > 4.
        #[arg(long)]
        force: bool,
        /// Extra starting polytopes (catalog format).
        #[arg(long)]
        seeds: Option<String>,
    },
}

fn with_input(path: &str, f: impl FnOnce(&str) -> CommandResult) -> CommandResult {
    match read_input(path) {
        Ok(text) => f(&text),
        Err(e) => CommandResult { exit_code: EXIT_USAGE, stdout: String::new(), stderr: e },
    }
}

fn run(cli: Cli) -> CommandResult {
    match cli.command {
        Command::Verify { input, json } => with_input(&input, |t| cmd_verify(t, json)),
        Command::Relations { input, pattern, json } => with_input(&input, |t| cmd_relations(t, pattern, json)),
        Command::Construct { name, params } => cmd_construct(&name, &params),
        Command::Isolate { input, catalog, bound } => {
            let source = match (catalog, bound) {
                (Some(c), _) => IsolationSource::Catalog(c),
                (None, Some(b)) => IsolationSource::Box(b),
                (None, None) => unreachable!("clap requires one of --catalog and --box"),
            };
            with_input(&input, |t| cmd_isolate(t, &source))
        }
        Command::Graph { catalog, relation, dot, json, report, verify_witnesses } => {
            cmd_graph(&catalog, relation, &GraphOutputs { dot, json, report, verify_witnesses })
        }
        Command::Moves { input, relation, bound } => with_input(&input, |t| cmd_moves(t, relation, bound)),
        Command::Enumerate { n, bound, max_box, out, force, seeds } => {
            cmd_enumerate(n, &EnumerateOptions { bound, max_bound: max_box, out, force, seeds })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("sfano: {e}");
        }
    }
    let result = run(cli);
    print!("{}", result.stdout);
    let _ = std::io::stdout().flush();
    if !result.stderr.is_empty() {
        eprintln!("sfano: {}", result.stderr);
    }
    ExitCode::from(result.exit_code as u8)
}
