use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{run_search, GirthFloor, SearchConfig, SearchError};
use crate::partition::{Index, Subpartition};

/// Completed partitions satisfying T1–T3, counted by exact
/// `"girthAB,halfGirthL1"`. T4 is not enforced.
pub fn census_girth_pairs(cfg: &SearchConfig) -> Result<BTreeMap<String, u64>, SearchError> {
    let cfg = SearchConfig { girth_floors: Vec::new(), check_t3: true, stop_at_pair: None, ..cfg.clone() };
    Ok(run_search(&cfg)?.report.girth_pair_census)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TableStatus {
    /// A full partition with exactly the requested pair exists.
    Green,
    /// The search finished without finding one.
    Red,
    /// The node budget ran out first.
    Unknown,
}

#[derive(Debug, Clone)]
pub struct TableCell {
    pub m: Index,
    pub n: Index,
    pub status: TableStatus,
    pub witness: Option<Subpartition>,
    pub nodes: u64,
}

/// Configuration for one table entry: T1–T3, pruning by the pair as a floor,
/// stopping at the first partition whose pair is exactly `pair`.
pub fn table_config(m: Index, n: Index, pair: GirthFloor, budget: Option<u64>) -> SearchConfig {
    SearchConfig {
        girth_floors: vec![pair],
        theorem1_cap: false,
        check_t3: true,
        max_nodes: budget,
        stop_at_pair: Some(pair),
        ..SearchConfig::full(m, n)
    }
}

pub fn table_cell(m: Index, n: Index, pair: GirthFloor, budget: Option<u64>, workers: usize) -> Result<TableCell, SearchError> {
    let cfg = SearchConfig { workers, ..table_config(m, n, pair, budget) };
    let report = run_search(&cfg)?.report;
    let grid = cfg.grid()?;
    let witness = report
        .completed
        .iter()
        .filter_map(|c| Subpartition::parse(grid, cfg.resolved_parity(), &c.cells).ok())
        .find(|p| {
            let v = super::validate(p, &cfg);
            v.girth.is_some_and(|g| pair.matches_exactly(&g)) && v.verdict.is_valid()
        });
    let status = if witness.is_some() {
        TableStatus::Green
    } else if report.truncated {
        TableStatus::Unknown
    } else {
        TableStatus::Red
    };
    Ok(TableCell { m, n, status, witness, nodes: report.nodes_expanded })
}
