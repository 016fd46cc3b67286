use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use taiko_core::dot::{midlink_dot, taiko_dot};
use taiko_core::fixtures::{FixtureError, FixtureFile};
use taiko_core::horizontal::{HorizontalError, OrientedSkeleton};
use taiko_core::midlink::TripleGirth;
use taiko_core::oracle::{compare_with_search, CanonMethod, LevelComparison, OracleError};
use taiko_core::search::{
    resume_search, run_search_with, table_cell, Checkpoint, CheckpointError, EventSink, GirthFloor, Mode, NullSink,
    ParityChoice, SearchConfig, SearchError, TableStatus, Verdict,
};
use taiko_core::align::EdgeOrder;
use thiserror::Error;

use crate::output::{manifest_path, now, sha256_hex, JsonlSink, Outputs, ReportFile, RunManifest};
use crate::{
    EdgeOrderArg, ExportArgs, ModeArg, OnOff, ParityArg, SearchArgs, TablesArgs, Verbosity, VerifyArgs, What, EXIT_COUNTEREXAMPLE,
    EXIT_FAILED, EXIT_IO, EXIT_TRUNCATED, EXIT_USAGE,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Failed(_) => EXIT_FAILED,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Config(c) => CliError::Usage(c.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<CheckpointError> for CliError {
    fn from(e: CheckpointError) -> Self {
        match e {
            CheckpointError::Io(source) => CliError::Io { context: "checkpoint".into(), source },
            CheckpointError::Json(j) => CliError::Failed(format!("checkpoint format: {j}")),
        }
    }
}

impl From<FixtureError> for CliError {
    fn from(e: FixtureError) -> Self {
        match e {
            FixtureError::Io(source) => CliError::Io { context: "fixture".into(), source },
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => CliError::Usage(e.to_string()),
            OracleError::Search(s) => s.into(),
        }
    }
}

fn build_config(a: &SearchArgs) -> Result<SearchConfig, CliError> {
    let (Some(m), Some(n)) = (a.m, a.n) else {
        return Err(CliError::Usage("--m and --n are required unless --resume is given".into()));
    };
    let mut cfg = match (a.mode, a.max_cells) {
        (ModeArg::Full, None) => SearchConfig::full(m, n),
        (ModeArg::Census, Some(k)) => SearchConfig::census(m, n, k),
        (ModeArg::Full, Some(_)) => return Err(CliError::Usage("--max-cells only applies to --mode census".into())),
        (ModeArg::Census, None) => return Err(CliError::Usage("--mode census needs --max-cells".into())),
    };
    if let Some(p) = a.parity {
        cfg.parity = match p {
            ParityArg::Even => ParityChoice::Even,
            ParityArg::Odd => ParityChoice::Odd,
            ParityArg::Auto => ParityChoice::Auto,
        };
        if matches!(cfg.mode, Mode::Full) {
            cfg.seed_root = SearchConfig { parity: cfg.parity, ..SearchConfig::full(m, n) }.seed_root;
        }
    }
    if let Some(floors) = &a.girth_pairs {
        cfg.girth_floors = floors.clone();
    }
    cfg.theorem1_cap &= !a.no_theorem1_cap;
    cfg.check_t3 |= a.check_t3;
    if let Some(s) = a.smallest_edge {
        cfg.smallest_edge = matches!(s, OnOff::On);
    }
    if let Some(o) = a.edge_order {
        cfg.edge_order = match o {
            EdgeOrderArg::Shell => EdgeOrder::Shell,
            EdgeOrderArg::Lex => EdgeOrder::Lex,
        };
    }
    cfg.dedupe |= a.dedupe;
    cfg.workers = a.workers;
    cfg.max_nodes = a.max_nodes;
    Ok(cfg)
}

fn write_json(path: Option<&Path>, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_err(format!("writing {}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(io_err("stdout")),
    }
}

pub fn search(a: SearchArgs) -> Result<u8, CliError> {
    let started_at = now();
    let (cfg, resume) = match &a.resume {
        Some(path) => {
            let cp = Checkpoint::read(path)?;
            let mut cfg = cp.config.clone();
            cfg.workers = a.workers;
            cfg.max_nodes = a.max_nodes;
            (cfg, Some(cp))
        }
        None => (build_config(&a)?, None),
    };
    cfg.check().map_err(|e| CliError::Usage(e.to_string()))?;

    let mut input = serde_json::to_vec(&cfg).map_err(|e| CliError::Failed(e.to_string()))?;
    if let Some(cp) = &resume {
        input.extend(serde_json::to_vec(&cp.stack).map_err(|e| CliError::Failed(e.to_string()))?);
    }
    let input_sha256 = sha256_hex(&input);
    let manifest = a.out.as_deref().or(a.report.as_deref()).map(manifest_path);

    let sink = match &a.out {
        Some(path) => {
            let s = JsonlSink::create(path, a.verbosity == Verbosity::Full).map_err(io_err(format!("creating {}", path.display())))?;
            s.header(manifest.as_deref().and_then(|m| m.file_name()).map(Path::new), &input_sha256, &cfg);
            Some(s)
        }
        None => None,
    };
    let events: &dyn EventSink = match &sink {
        Some(s) => s,
        None => &NullSink,
    };
    let outcome = match &resume {
        Some(cp) => resume_search(cp, &cfg, events)?,
        None => run_search_with(&cfg, events)?,
    };
    let report = &outcome.report;
    if let Some(s) = sink {
        s.finish(report).map_err(io_err("writing event stream"))?;
    }
    let mut checkpoint_written = None;
    if let (Some(cp), Some(path)) = (&outcome.checkpoint, &a.checkpoint) {
        cp.write(path)?;
        checkpoint_written = Some(path.clone());
    }
    write_json(a.report.as_deref(), &ReportFile { manifest: manifest.as_deref(), report })?;
    if let Some(path) = &manifest {
        let m = RunManifest {
            config: cfg.clone(),
            engine_version: env!("CARGO_PKG_VERSION"),
            started_at,
            finished_at: now(),
            input_sha256,
            outputs: Outputs { jsonl: a.out.clone(), report: a.report.clone(), checkpoint: checkpoint_written },
        };
        m.write(path).map_err(io_err(format!("writing {}", path.display())))?;
    }
    eprintln!(
        "valid per level {:?}; {} completed; {} nodes{}",
        report.valid_counts(),
        report.completed.len(),
        report.nodes_expanded,
        if report.truncated { "; truncated" } else { "" }
    );
    Ok(if !report.completed.is_empty() && cfg.is_full_t4() {
        EXIT_COUNTEREXAMPLE
    } else if report.truncated {
        EXIT_TRUNCATED
    } else {
        0
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FixtureCheck {
    fixture: PathBuf,
    cells: usize,
    full_partition: bool,
    orientable: bool,
    colors: Option<usize>,
    #[serde(flatten)]
    girth: Option<TripleGirth>,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_pair: Option<bool>,
}

fn print_levels(title: &str, levels: &[LevelComparison]) {
    println!("{title}");
    for l in levels {
        println!(
            "  level {}: brute force {} sets / {} classes, search {} nodes / {} classes, max per class {}, missing {}, invalid {}",
            l.level,
            l.oracle_subpartitions,
            l.oracle_classes,
            l.search_nodes,
            l.search_classes,
            l.max_duplicates,
            l.missing.len(),
            l.invalid.len()
        );
        for x in &l.missing {
            println!("    missing {x}");
        }
        for x in &l.invalid {
            println!("    invalid {x}");
        }
    }
}

pub fn verify(a: VerifyArgs) -> Result<u8, CliError> {
    if let Some(path) = &a.fixture {
        let p = FixtureFile::read(path)?.to_subpartition()?;
        let floors: Vec<GirthFloor> = a.girth_pairs.clone().unwrap_or_default();
        let check = taiko_core::search::validate_with(&p, &floors, !a.no_theorem1_cap, !a.no_t3);
        let sk = OrientedSkeleton::from_cells(p.cells());
        let exact_pair = a.exact_pair.map(|f| check.girth.as_ref().is_some_and(|g| f.matches_exactly(g)));
        let ok = check.verdict.is_valid() && exact_pair != Some(false);
        write_json(
            None,
            &FixtureCheck {
                fixture: path.clone(),
                cells: p.len(),
                full_partition: p.is_full_partition(),
                orientable: sk.is_orientable(),
                colors: sk.is_orientable().then(|| sk.color_count()),
                girth: check.girth,
                verdict: check.verdict,
                exact_pair,
            },
        )?;
        return Ok(if ok { 0 } else { EXIT_FAILED });
    }
    let (Some(m), Some(n), Some(k)) = (a.m, a.n, a.max_cells) else {
        return Err(CliError::Usage("verify needs --fixture or --m, --n and --max-cells".into()));
    };
    let method = if a.relabel_sweep { CanonMethod::RelabelSweep } else { CanonMethod::CellOrder };
    let cmp = compare_with_search(m, n, k, method)?;
    print_levels("search without smallest-edge rule vs every valid subpartition:", &cmp.unrestricted);
    print_levels("smallest-edge search vs brute-force smallest-edge family:", &cmp.smallest_edge);
    println!("smallest-edge family classes per level: {:?}", cmp.smallest_edge_class_counts);
    let passed = cmp.passed();
    println!("{}", if passed { "pass" } else { "FAIL" });
    Ok(if passed { 0 } else { EXIT_FAILED })
}

pub fn export(a: ExportArgs) -> Result<u8, CliError> {
    let p = FixtureFile::read(&a.fixture)?.to_subpartition()?;
    let text = match a.what {
        What::Taiko => taiko_dot(&p),
        What::Midlink => midlink_dot(&p).map_err(|HorizontalError::ConflictPresent(c)| {
            let cells: Vec<String> = c.cells.iter().map(ToString::to_string).collect();
            CliError::Failed(format!("fixture is not orientable; conflicting cells {}", cells.join(" ")))
        })?,
    };
    match &a.out {
        Some(path) => std::fs::write(path, text).map_err(io_err(format!("writing {}", path.display())))?,
        None => io::stdout().write_all(text.as_bytes()).map_err(io_err("stdout"))?,
    }
    Ok(0)
}

fn status_name(s: TableStatus) -> &'static str {
    match s {
        TableStatus::Green => "GREEN",
        TableStatus::Red => "RED",
        TableStatus::Unknown => "UNKNOWN",
    }
}

pub fn tables(a: TablesArgs) -> Result<u8, CliError> {
    let code = format!("{}{}", a.pair.p, a.pair.q);
    std::fs::create_dir_all(&a.out_dir).map_err(io_err(format!("creating {}", a.out_dir.display())))?;
    let ns: Vec<_> = a.n_range.clone().collect();
    let csv_path = a.out_dir.join(format!("table_{code}.csv"));
    let mut csv = csv::Writer::from_path(&csv_path).map_err(|e| CliError::Failed(e.to_string()))?;
    let header: Vec<String> = std::iter::once("m\\n".to_string()).chain(ns.iter().map(ToString::to_string)).collect();
    csv.write_record(&header).map_err(|e| CliError::Failed(e.to_string()))?;
    for m in a.m_range.clone() {
        let mut row = vec![m.to_string()];
        for &n in &ns {
            let cell = table_cell(m, n, a.pair, Some(a.budget), a.workers)?;
            let mut line = format!("{m}x{n} {} ({} nodes)", status_name(cell.status), cell.nodes);
            if let Some(w) = &cell.witness {
                let path = a.out_dir.join(format!("witness_{code}_{m}x{n}.json"));
                FixtureFile::from_subpartition(w).write(&path)?;
                line.push_str(&format!(" witness {}", path.display()));
            }
            println!("{line}");
            row.push(status_name(cell.status).to_string());
        }
        csv.write_record(&row).map_err(|e| CliError::Failed(e.to_string()))?;
    }
    csv.flush().map_err(io_err(format!("writing {}", csv_path.display())))?;
    println!("table written to {}", csv_path.display());
    Ok(0)
}
