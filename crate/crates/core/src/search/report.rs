use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Condition, Mode, SearchConfig};
use crate::midlink::Girth;
use crate::partition::Index;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrunedBy {
    #[serde(rename = "T1")]
    pub t1: u64,
    #[serde(rename = "T2")]
    pub t2: u64,
    #[serde(rename = "T3")]
    pub t3: u64,
    #[serde(rename = "T4")]
    pub t4: u64,
}

impl PrunedBy {
    pub fn bump(&mut self, c: Condition) {
        match c {
            Condition::T1 => self.t1 += 1,
            Condition::T2 => self.t2 += 1,
            Condition::T3 => self.t3 += 1,
            Condition::T4 => self.t4 += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.t1 + self.t2 + self.t3 + self.t4
    }

    fn add(&mut self, o: &PrunedBy) {
        self.t1 += o.t1;
        self.t2 += o.t2;
        self.t3 += o.t3;
        self.t4 += o.t4;
    }
}

/// Counts for subpartitions with a given number of cells.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelStats {
    /// Nodes popped and expanded.
    pub expanded: u64,
    /// Children that passed every check.
    pub valid: u64,
    pub pruned_by: PrunedBy,
    /// Valid children skipped because an equal cell set was already reached.
    pub duplicates: u64,
}

impl LevelStats {
    fn add(&mut self, o: &LevelStats) {
        self.expanded += o.expanded;
        self.valid += o.valid;
        self.pruned_by.add(&o.pruned_by);
        self.duplicates += o.duplicates;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompletedPartition {
    pub cells: String,
    #[serde(rename = "girthAB")]
    pub girth_ab: Girth,
    #[serde(rename = "halfGirthL1")]
    pub half_girth_l1: Girth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoExample {
    pub rule_i: bool,
    pub rule_ii: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the search was cut short; no bound can be derived")]
pub struct PartialReport;

/// `rule_i`: `2h < min(m, n)` rules out every larger size; `rule_ii`:
/// `2h < n` rules out `(m, n')` for all `n' ≥ n`.
pub fn no_example_bound(max_height: usize, complete: bool, m: Index, n: Index) -> Result<NoExample, PartialReport> {
    if !complete {
        return Err(PartialReport);
    }
    let twice = 2 * max_height;
    Ok(NoExample { rule_i: twice < m.min(n) as usize, rule_ii: twice < n as usize })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub config: SearchConfig,
    pub per_level: Vec<LevelStats>,
    pub max_height: usize,
    pub completed: Vec<CompletedPartition>,
    /// `"girthAB,halfGirthL1"` → number of completed partitions.
    pub girth_pair_census: BTreeMap<String, u64>,
    pub no_example: Option<NoExample>,
    pub nodes_expanded: u64,
    /// Stopped by the node budget; nothing can be concluded from absence.
    pub truncated: bool,
    /// Stopped because a partition with the requested girth pair was found.
    pub stopped_at_target: bool,
    /// Candidate sets larger than the aligned-window bound (should stay 0).
    pub bound_violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SearchReport {
    pub fn new(config: SearchConfig) -> Self {
        Self {
            config,
            per_level: Vec::new(),
            max_height: 0,
            completed: Vec::new(),
            girth_pair_census: BTreeMap::new(),
            no_example: None,
            nodes_expanded: 0,
            truncated: false,
            stopped_at_target: false,
            bound_violations: 0,
            wall_time_ms: None,
        }
    }

    pub fn level(&mut self, k: usize) -> &mut LevelStats {
        if self.per_level.len() <= k {
            self.per_level.resize(k + 1, LevelStats::default());
        }
        &mut self.per_level[k]
    }

    pub fn record_completed(&mut self, c: CompletedPartition) {
        *self.girth_pair_census.entry(format!("{},{}", c.girth_ab, c.half_girth_l1)).or_default() += 1;
        self.completed.push(c);
    }

    /// Adds another worker's (or an earlier run's) counts.
    pub fn merge(&mut self, o: &SearchReport) {
        for (k, l) in o.per_level.iter().enumerate() {
            self.level(k).add(l);
        }
        self.max_height = self.max_height.max(o.max_height);
        self.completed.extend(o.completed.iter().cloned());
        for (k, v) in &o.girth_pair_census {
            *self.girth_pair_census.entry(k.clone()).or_default() += v;
        }
        self.nodes_expanded += o.nodes_expanded;
        self.bound_violations += o.bound_violations;
        self.stopped_at_target |= o.stopped_at_target;
    }

    pub fn valid_counts(&self) -> Vec<u64> {
        self.per_level.iter().map(|l| l.valid).collect()
    }

    /// Sorts the completed list and fills in the no-example flags, which only
    /// mean something for a full search that ran to the end.
    pub fn finish(&mut self) {
        self.completed.sort();
        self.completed.dedup();
        let complete = !self.truncated && !self.stopped_at_target && matches!(self.config.mode, Mode::Full);
        self.no_example = no_example_bound(self.max_height, complete, self.config.m, self.config.n).ok();
    }
}
