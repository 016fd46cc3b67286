use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taiko_core::search::GirthFloor;
use taiko_core::Index;

mod commands;
mod output;

/// Exhaustive search for paired-edge partitions of complete bipartite graphs
/// satisfying the orientation, fold, pattern and girth conditions.
#[derive(Parser)]
#[command(name = "taiko-search", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full search or a bounded census.
    Search(SearchArgs),
    /// Check search output against brute force, or re-validate a fixture.
    Verify(VerifyArgs),
    /// Write a fixture's taiko or middle link as Graphviz DOT.
    Export(ExportArgs),
    /// Reproduce a girth-pair existence table.
    Tables(TablesArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    Census,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum EdgeOrderArg {
    Shell,
    Lex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verbosity {
    /// Header and final report only.
    Stats,
    /// Every expanded node and every pruned child as well.
    Full,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    m: Option<Index>,
    #[arg(long)]
    n: Option<Index>,
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Deepest level explored in census mode.
    #[arg(long)]
    max_cells: Option<usize>,
    /// Admissible girth pairs, e.g. `63,44,36`.
    #[arg(long, value_delimiter = ',', value_parser = parse_floor)]
    girth_pairs: Option<Vec<GirthFloor>>,
    #[arg(long)]
    no_theorem1_cap: bool,
    #[arg(long)]
    check_t3: bool,
    #[arg(long, value_enum)]
    smallest_edge: Option<OnOff>,
    #[arg(long, value_enum)]
    edge_order: Option<EdgeOrderArg>,
    /// Skip children whose cell set was already reached.
    #[arg(long)]
    dedupe: bool,
    #[arg(long, env = "TAIKO_SEARCH_THREADS", default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    max_nodes: Option<u64>,
    /// JSONL event stream; a manifest is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Final report as JSON (stdout when absent).
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "stats")]
    verbosity: Verbosity,
    /// Where to save pending work if the node budget runs out.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint; `--workers` and `--max-nodes` may change.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "fixture", requires_all = ["n", "max_cells"])]
    m: Option<Index>,
    #[arg(long, conflicts_with = "fixture")]
    n: Option<Index>,
    #[arg(long, conflicts_with = "fixture")]
    max_cells: Option<usize>,
    /// Use the relabeling sweep instead of cell-order canonical keys.
    #[arg(long)]
    relabel_sweep: bool,
    /// JSON fixture to re-validate.
    #[arg(long, required_unless_present = "m")]
    fixture: Option<PathBuf>,
    /// Also require one of these girth floors.
    #[arg(long, value_delimiter = ',', value_parser = parse_floor)]
    girth_pairs: Option<Vec<GirthFloor>>,
    /// Require this exact `(girthAB, halfGirthL1)`.
    #[arg(long, value_parser = parse_floor)]
    exact_pair: Option<GirthFloor>,
    #[arg(long)]
    no_theorem1_cap: bool,
    /// Skip the repeated-pattern check.
    #[arg(long)]
    no_t3: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Taiko,
    Midlink,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    fixture: PathBuf,
    #[arg(long, value_enum)]
    what: What,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TablesArgs {
    /// Inclusive, e.g. `4..9`.
    #[arg(long, value_parser = parse_range)]
    m_range: RangeInclusive<Index>,
    #[arg(long, value_parser = parse_range)]
    n_range: RangeInclusive<Index>,
    /// Target girth pair, e.g. `33` or `44`.
    #[arg(long, value_parser = parse_floor)]
    pair: GirthFloor,
    /// Node budget per entry.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long, env = "TAIKO_SEARCH_THREADS", default_value_t = 1)]
    workers: usize,
    /// Directory for the CSV and witness fixtures.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

/// `"44"` → `girthAB ≥ 4, halfGirthL1 ≥ 4`.
fn parse_floor(s: &str) -> Result<GirthFloor, String> {
    let digits: Vec<u32> = s.trim().chars().map(|c| c.to_digit(10)).collect::<Option<_>>().ok_or("expected two digits")?;
    match digits.as_slice() {
        [p, q] if *p > 0 && *q > 0 => Ok(GirthFloor { p: *p, q: *q }),
        _ => Err(format!("expected a pair like 44, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<Index>, String> {
    let parse = |x: &str| x.trim().parse::<Index>().map_err(|e| format!("{x:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..=b)
        }
        None => parse(s).map(|x| x..=x),
    }
}

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_COUNTEREXAMPLE: u8 = 2;
pub const EXIT_TRUNCATED: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_IO: u8 = 74;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Search(a) => commands::search(a),
        Command::Verify(a) => commands::verify(a),
        Command::Export(a) => commands::export(a),
        Command::Tables(a) => commands::tables(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floors_and_ranges() {
        assert_eq!(parse_floor("44"), Ok(GirthFloor { p: 4, q: 4 }));
        assert!(parse_floor("4").is_err());
        assert!(parse_floor("x4").is_err());
        assert_eq!(parse_range("4..9"), Ok(4..=9));
        assert_eq!(parse_range("6"), Ok(6..=6));
        assert!(parse_range("9..4").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
