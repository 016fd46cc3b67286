//! Depth-first enumeration of valid aligned subpartitions.

mod checkpoint;
mod engine;
mod report;
mod tables;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::align::{self, CandidateRule, EdgeOrder};
use crate::horizontal::{Direction, OrientationConflict, OrientedSkeleton, Side};
use crate::midlink::{side_graph, Girth, GirthBound, GirthPair, LinkVertex, MiddleLink, TripleGirth};
use crate::partition::{Cell, Grid, Index, Parity, StructureError, Subpartition, VerticalEdge};

pub use checkpoint::{Checkpoint, CheckpointError};
pub use engine::{resume_search, run_search, run_search_with, EventSink, NullSink, SearchOutcome};
pub use tables::{census_girth_pairs, table_cell, table_config, TableCell, TableStatus};
pub use report::{no_example_bound, CompletedPartition, LevelStats, NoExample, PrunedBy, SearchReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityChoice {
    Even,
    Odd,
    /// Odd exactly when `mn` is odd.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Mode {
    /// Look for full partitions; subpartitions are expanded until no
    /// candidate remains.
    Full,
    /// Enumerate subpartitions up to `max_cells` cells.
    Census {
        #[serde(rename = "maxCells")]
        max_cells: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedRoot {
    Empty,
    /// Start from the 1-cell `{(1,1)}`; odd parity only.
    OneCell,
}

/// A girth requirement `girth(L_AB) ≥ p` and `half-girth(L_1) ≥ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GirthFloor {
    pub p: u32,
    pub q: u32,
}

impl From<GirthPair> for GirthFloor {
    fn from(pair: GirthPair) -> Self {
        let (p, q) = pair.floors();
        Self { p, q }
    }
}

impl GirthFloor {
    pub fn holds(self, girth_ab: GirthBound, girth_l1: GirthBound) -> bool {
        girth_ab.is_at_least(self.p) && girth_l1.is_at_least(2 * self.q)
    }

    pub fn matches_exactly(self, t: &TripleGirth) -> bool {
        t.girth_ab == Girth::Finite(self.p) && t.half_girth_l1 == Girth::Finite(self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchConfig {
    pub m: Index,
    pub n: Index,
    pub parity: ParityChoice,
    pub mode: Mode,
    /// T4 holds when any floor holds. Empty disables T4.
    pub girth_floors: Vec<GirthFloor>,
    /// Treat floors with `q > 4` as unreachable once three 2-cells are placed.
    pub theorem1_cap: bool,
    pub smallest_edge: bool,
    pub edge_order: EdgeOrder,
    pub check_t3: bool,
    pub max_nodes: Option<u64>,
    pub workers: usize,
    pub seed_root: SeedRoot,
    /// Skip nodes whose sorted cell list was already reached.
    pub dedupe: bool,
    /// Stop once a full partition with exactly this girth pair is found.
    pub stop_at_pair: Option<GirthFloor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("grid sides must be at least 1")]
    EmptyGrid,
    #[error("full partitions of {m}x{n} need {expected:?} parity")]
    ParityMismatch { m: Index, n: Index, expected: Parity },
    #[error("a 1-cell root needs odd parity")]
    OneCellRootNeedsOdd,
    #[error("at least one worker is required")]
    NoWorkers,
}

impl SearchConfig {
    pub fn full(m: Index, n: Index) -> Self {
        let odd = (m as usize * n as usize) % 2 == 1;
        Self {
            m,
            n,
            parity: ParityChoice::Auto,
            mode: Mode::Full,
            girth_floors: GirthPair::ALL.into_iter().map(GirthFloor::from).collect(),
            theorem1_cap: true,
            smallest_edge: true,
            edge_order: EdgeOrder::Shell,
            check_t3: false,
            max_nodes: None,
            workers: 1,
            seed_root: if odd { SeedRoot::OneCell } else { SeedRoot::Empty },
            dedupe: false,
            stop_at_pair: None,
        }
    }

    pub fn census(m: Index, n: Index, max_cells: usize) -> Self {
        Self { mode: Mode::Census { max_cells }, parity: ParityChoice::Even, seed_root: SeedRoot::Empty, ..Self::full(m, n) }
    }

    pub fn grid(&self) -> Result<Grid, ConfigError> {
        Grid::new(self.m, self.n).map_err(|_| ConfigError::EmptyGrid)
    }

    pub fn resolved_parity(&self) -> Parity {
        match self.parity {
            ParityChoice::Even => Parity::Even,
            ParityChoice::Odd => Parity::Odd,
            ParityChoice::Auto => Grid { m: self.m, n: self.n }.natural_parity(),
        }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        let grid = self.grid()?;
        let parity = self.resolved_parity();
        if self.mode == Mode::Full && parity != grid.natural_parity() {
            return Err(ConfigError::ParityMismatch { m: self.m, n: self.n, expected: grid.natural_parity() });
        }
        if self.seed_root == SeedRoot::OneCell && parity != Parity::Odd {
            return Err(ConfigError::OneCellRootNeedsOdd);
        }
        if self.workers == 0 {
            return Err(ConfigError::NoWorkers);
        }
        Ok(())
    }

    /// Whether every configured floor is one of the admissible girth pairs,
    /// so that a completed partition is a genuine counterexample candidate.
    pub fn is_full_t4(&self) -> bool {
        !self.girth_floors.is_empty()
            && self.girth_floors.iter().all(|f| GirthPair::ALL.iter().any(|p| GirthFloor::from(*p) == *f))
    }

    pub fn candidate_rule(&self) -> CandidateRule {
        CandidateRule { smallest_edge: self.smallest_edge, order: self.edge_order }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot rebuild checkpoint node: {0}")]
    Replay(#[from] ReplayError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    T1,
    T2,
    T3,
    T4,
}

/// Checkable evidence for a failed condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Witness {
    /// Cells whose direction constraints form an odd cycle.
    Conflict { cells: Vec<Cell> },
    Fold { vertex: String, color: usize, direction: Direction, edges: [String; 2] },
    Pattern { pattern: [String; 2], vertices: [String; 2] },
    Girth {
        #[serde(rename = "girthAB")]
        girth_ab: GirthBound,
        #[serde(rename = "girthL1")]
        girth_l1: GirthBound,
        /// A shortest `L_1` cycle, when the values are exact.
        #[serde(skip_serializing_if = "Option::is_none")]
        cycle: Option<Vec<String>>,
    },
}

impl From<&OrientationConflict> for Witness {
    fn from(c: &OrientationConflict) -> Self {
        Witness::Conflict { cells: c.cells.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "status")]
pub enum Verdict {
    Valid,
    Fails { condition: Condition, witness: Witness },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn condition(&self) -> Option<Condition> {
        match self {
            Verdict::Valid => None,
            Verdict::Fails { condition, .. } => Some(*condition),
        }
    }
}

/// Full verdict with exact girth data, computed from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub verdict: Verdict,
    pub girth: Option<TripleGirth>,
}

fn floors_alive(floors: &[GirthFloor], cap: bool, two_cells: usize) -> impl Iterator<Item = GirthFloor> + '_ {
    floors.iter().copied().filter(move |f| !(cap && two_cells >= 3 && f.q > 4))
}

fn fold_witness(f: &crate::horizontal::Fold) -> Witness {
    let name = |d: &crate::horizontal::DirectedEdge| format!("({},{})", d.tail, d.head);
    Witness::Fold {
        vertex: f.vertex.to_string(),
        color: f.color + 1,
        direction: f.direction,
        edges: [name(&f.edges[0]), name(&f.edges[1])],
    }
}

fn label(x: (usize, Direction)) -> String {
    format!("c{}_{}", x.0 + 1, x.1)
}

/// Checks T1, T2, T3 (if enabled) and T4 from scratch, in that order.
pub fn validate(p: &Subpartition, cfg: &SearchConfig) -> Validation {
    validate_with(p, &cfg.girth_floors, cfg.theorem1_cap, cfg.check_t3)
}

pub fn validate_with(p: &Subpartition, floors: &[GirthFloor], cap: bool, check_t3: bool) -> Validation {
    let sk = OrientedSkeleton::from_cells(p.cells());
    let fails = |condition, witness| Validation { verdict: Verdict::Fails { condition, witness }, girth: None };
    if let Some(c) = sk.conflict() {
        return fails(Condition::T1, c.into());
    }
    if let Some(f) = sk.find_fold().expect("orientable") {
        return fails(Condition::T2, fold_witness(&f));
    }
    if check_t3 {
        if let Some(r) = sk.find_repeated_pattern().expect("orientable") {
            let witness = Witness::Pattern {
                pattern: [label(r.pattern.first), label(r.pattern.second)],
                vertices: [r.vertices.0.to_string(), r.vertices.1.to_string()],
            };
            return fails(Condition::T3, witness);
        }
    }
    let girth = TripleGirth::measure(&sk, p.grid()).expect("orientable");
    if !floors.is_empty() {
        let ab = GirthBound::Exact(girth.girth_ab);
        let l1 = GirthBound::Exact(match girth.half_girth_l1 {
            Girth::Finite(h) => Girth::Finite(2 * h),
            Girth::Infinite => Girth::Infinite,
        });
        if !floors_alive(floors, cap, p.two_cell_count()).any(|f| f.holds(ab, l1)) {
            let link = MiddleLink::build(&sk, p.grid()).expect("orientable");
            let cycle = link.shortest_cycle().map(|c| c.iter().map(LinkVertex::to_string).collect());
            return Validation {
                verdict: Verdict::Fails { condition: Condition::T4, witness: Witness::Girth { girth_ab: ab, girth_l1: l1, cycle } },
                girth: Some(girth),
            };
        }
    }
    Validation { verdict: Verdict::Valid, girth: Some(girth) }
}

/// A search node: the subpartition with its skeleton and the girth bounds
/// accumulated along the path that produced it.
#[derive(Debug, Clone)]
pub struct Node {
    pub p: Subpartition,
    pub sk: OrientedSkeleton,
    pub girth_ab: GirthBound,
    pub girth_l1: GirthBound,
}

#[derive(Debug, Clone)]
pub struct Rejected {
    pub p: Subpartition,
    pub condition: Condition,
    pub witness: Witness,
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("replayed cell {cell} fails {condition:?}")]
    Invalid { cell: Cell, condition: Condition },
}

/// Incremental validity checks for children of search nodes.
#[derive(Debug, Clone)]
pub struct Checker {
    grid: Grid,
    floors: Vec<GirthFloor>,
    cap: bool,
    check_t3: bool,
}

impl Checker {
    pub fn new(cfg: &SearchConfig) -> Result<Self, ConfigError> {
        Ok(Self { grid: cfg.grid()?, floors: cfg.girth_floors.clone(), cap: cfg.theorem1_cap, check_t3: cfg.check_t3 })
    }

    pub fn root(&self, cfg: &SearchConfig) -> Node {
        let mut p = Subpartition::empty(self.grid, cfg.resolved_parity());
        if cfg.seed_root == SeedRoot::OneCell {
            p.push(Cell::one(VerticalEdge::new(1, 1))).expect("odd root");
        }
        let start = if self.floors.is_empty() { GirthBound::AtLeast(0) } else { GirthBound::Exact(Girth::Infinite) };
        Node { sk: OrientedSkeleton::from_cells(p.cells()), p, girth_ab: start, girth_l1: start }
    }

    /// Rebuilds the node reached by adding `cells` to the root in order.
    pub fn replay(&self, cfg: &SearchConfig, cells: &[Cell]) -> Result<Node, ReplayError> {
        let mut node = self.root(cfg);
        for &cell in &cells[node.p.len()..] {
            node = self.child(&node, cell).map_err(|r| match r {
                ChildError::Structure(e) => ReplayError::Structure(e),
                ChildError::Rejected(r) => ReplayError::Invalid { cell, condition: r.condition },
            })?;
        }
        Ok(node)
    }

    /// Validates `parent ∪ {cell}`. Only cycles through the new edges and the
    /// new cell's color class can appear, so girth is probed from those roots
    /// with the smallest threshold that still decides every live floor.
    pub fn child(&self, parent: &Node, cell: Cell) -> Result<Node, ChildError> {
        let p = parent.p.extend(cell).map_err(ChildError::Structure)?;
        let mut sk = parent.sk.clone();
        let Some(effect) = sk.add_cell(cell) else {
            return Ok(Node { p, sk, girth_ab: parent.girth_ab, girth_l1: parent.girth_l1 });
        };
        let reject = |p: Subpartition, condition, witness| Err(ChildError::Rejected(Box::new(Rejected { p, condition, witness })));
        if let Some(c) = sk.conflict() {
            let w = c.into();
            return reject(p, Condition::T1, w);
        }
        if let Some(f) = sk.find_fold_in_class(effect.a_edge).expect("orientable") {
            return reject(p, Condition::T2, fold_witness(&f));
        }
        if self.check_t3 {
            if let Some(r) = sk.find_repeated_pattern().expect("orientable") {
                let witness = Witness::Pattern {
                    pattern: [label(r.pattern.first), label(r.pattern.second)],
                    vertices: [r.vertices.0.to_string(), r.vertices.1.to_string()],
                };
                return reject(p, Condition::T3, witness);
            }
        }
        if self.floors.is_empty() {
            return Ok(Node { p, sk, girth_ab: parent.girth_ab, girth_l1: parent.girth_l1 });
        }
        let live: Vec<GirthFloor> = floors_alive(&self.floors, self.cap, p.two_cell_count())
            .filter(|f| f.holds(parent.girth_ab, parent.girth_l1))
            .collect();
        let fail_t4 = |p: Subpartition, girth_ab, girth_l1| {
            Err(ChildError::Rejected(Box::new(Rejected {
                p,
                condition: Condition::T4,
                witness: Witness::Girth { girth_ab, girth_l1, cycle: None },
            })))
        };
        if live.is_empty() {
            return fail_t4(p, parent.girth_ab, parent.girth_l1);
        }
        let ab_limit = live.iter().map(|f| f.p).max().expect("nonempty");
        let l1_limit = 2 * live.iter().map(|f| f.q).max().expect("nonempty");

        let mut found_ab: Option<u32> = None;
        for (side, is_new, e) in [(Side::A, effect.new_a, effect.a_edge), (Side::B, effect.new_b, effect.b_edge)] {
            if is_new {
                let g = side_graph(&sk, self.grid, side);
                let root = sk.edges()[e].u as usize - 1;
                let limit = found_ab.unwrap_or(ab_limit);
                if let Some(r) = g.cycle_through(&[root], limit) {
                    found_ab = Some(r);
                }
            }
        }
        let girth_ab = if effect.new_a || effect.new_b { parent.girth_ab.refine(found_ab, ab_limit) } else { parent.girth_ab };

        let link = MiddleLink::build(&sk, self.grid).expect("orientable");
        let color = sk.color_ids()[effect.a_edge];
        let roots = [
            link.id(LinkVertex::Middle(color, Direction::In)),
            link.id(LinkVertex::Middle(color, Direction::Out)),
        ];
        let girth_l1 = parent.girth_l1.refine(link.graph().cycle_through(&roots, l1_limit), l1_limit);

        if live.iter().any(|f| f.holds(girth_ab, girth_l1)) {
            Ok(Node { p, sk, girth_ab, girth_l1 })
        } else {
            fail_t4(p, girth_ab, girth_l1)
        }
    }

    /// Aligned children candidates of `node`: 1-cells first, then 2-cells.
    pub fn candidates(&self, node: &Node, rule: CandidateRule) -> Vec<Cell> {
        let mut out = align::aligned_one_cells(&node.p, rule);
        out.extend(align::aligned_candidates(&node.p, rule).into_iter().map(|a| a.cell));
        out
    }
}

#[derive(Debug)]
pub enum ChildError {
    Structure(StructureError),
    Rejected(Box<Rejected>),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg6() -> SearchConfig {
        SearchConfig::census(6, 6, 3)
    }

    #[test]
    fn valid_fixtures_validate() {
        for name in fixtures::VALID_LEVEL3 {
            let v = validate(&fixtures::subpartition(name).unwrap(), &cfg6());
            assert!(v.verdict.is_valid(), "{name}: {:?}", v.verdict);
        }
        let v = validate(&fixtures::subpartition("P115").unwrap(), &cfg6());
        assert_eq!(v.girth.unwrap().half_girth_l1, Girth::Finite(3));
    }

    #[test]
    fn p112_fails_with_four_cycle() {
        let v = validate(&fixtures::subpartition("P112").unwrap(), &cfg6());
        let Verdict::Fails { condition: Condition::T4, witness: Witness::Girth { cycle: Some(cycle), girth_l1, .. } } = v.verdict else {
            panic!("{:?}", v.verdict)
        };
        assert_eq!(girth_l1, GirthBound::Exact(Girth::Finite(4)));
        assert_eq!(cycle.len(), 4);
        assert!(cycle.iter().any(|v| v == "a2") && cycle.iter().any(|v| v == "b2"));
    }

    #[test]
    fn double_matching_fails_t1() {
        let p = Subpartition::from_cells(
            Grid::new(2, 2).unwrap(),
            Parity::Even,
            [Cell::pair(1, 1, 2, 2), Cell::pair(1, 2, 2, 1)],
        )
        .unwrap();
        let v = validate(&p, &SearchConfig::full(2, 2));
        assert_eq!(v.verdict.condition(), Some(Condition::T1));
    }

    #[test]
    fn incremental_agrees_with_scratch_on_fixtures() {
        let cfg = cfg6();
        let checker = Checker::new(&cfg).unwrap();
        for name in fixtures::NAMES {
            let cells = fixtures::cells(name).unwrap();
            let scratch = validate(&fixtures::subpartition(name).unwrap(), &cfg).verdict;
            let mut node = checker.root(&cfg);
            let mut verdict = Verdict::Valid;
            for c in cells {
                match checker.child(&node, c) {
                    Ok(n) => node = n,
                    Err(ChildError::Rejected(r)) => {
                        verdict = Verdict::Fails { condition: r.condition, witness: r.witness };
                        break;
                    }
                    Err(ChildError::Structure(e)) => panic!("{e}"),
                }
            }
            assert_eq!(verdict.condition(), scratch.condition(), "{name}");
        }
    }

    #[test]
    fn config_checks() {
        assert!(SearchConfig::full(4, 4).check().is_ok());
        assert!(SearchConfig::full(3, 3).check().is_ok());
        assert_eq!(SearchConfig::full(3, 3).seed_root, SeedRoot::OneCell);
        let bad = SearchConfig { parity: ParityChoice::Odd, ..SearchConfig::full(4, 4) };
        assert!(matches!(bad.check(), Err(ConfigError::ParityMismatch { .. })));
        let bad = SearchConfig { seed_root: SeedRoot::OneCell, ..SearchConfig::census(4, 4, 2) };
        assert_eq!(bad.check(), Err(ConfigError::OneCellRootNeedsOdd));
        let text = serde_json::to_string(&SearchConfig::census(6, 6, 3)).unwrap();
        assert!(text.contains(r#""mode":{"kind":"census","maxCells":3}"#), "{text}");
        let back: SearchConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, SearchConfig::census(6, 6, 3));
    }
}
