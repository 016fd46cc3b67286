use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Instant;

use super::checkpoint::Checkpoint;
use super::report::{CompletedPartition, SearchReport};
use super::{validate, Checker, ChildError, Mode, Node, Rejected, SearchConfig, SearchError};
use crate::align::{candidate_bound, CandidateRule};
use crate::partition::Cell;

/// Receives every expanded node and, if asked, every rejected child.
pub trait EventSink: Sync {
    fn node(&self, _node: &Node) {}

    fn pruned(&self, _rejected: &Rejected) {}

    fn wants_pruned(&self) -> bool {
        false
    }
}

pub struct NullSink;

impl EventSink for NullSink {}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub report: SearchReport,
    /// Unexplored nodes when the run stopped early, ready to resume.
    pub checkpoint: Option<Checkpoint>,
}

struct Queue {
    items: Vec<Node>,
    done: bool,
}

struct Shared<'a> {
    cfg: &'a SearchConfig,
    checker: Checker,
    rule: CandidateRule,
    sink: &'a dyn EventSink,
    queue: Mutex<Queue>,
    ready: Condvar,
    idle: AtomicUsize,
    expanded: AtomicU64,
    budget: Option<u64>,
    stop: AtomicBool,
    seen: Option<Mutex<HashSet<Vec<Cell>>>>,
}

impl Shared<'_> {
    /// Blocks until work is available or every worker is idle.
    fn take(&self) -> Option<Node> {
        let mut q = self.queue.lock().expect("queue lock");
        self.idle.fetch_add(1, Ordering::SeqCst);
        loop {
            if q.done || self.stop.load(Ordering::SeqCst) {
                q.done = true;
                self.ready.notify_all();
                return None;
            }
            if let Some(n) = q.items.pop() {
                self.idle.fetch_sub(1, Ordering::SeqCst);
                return Some(n);
            }
            if self.idle.load(Ordering::SeqCst) == self.cfg.workers {
                q.done = true;
                self.ready.notify_all();
                return None;
            }
            q = self.ready.wait(q).expect("queue lock");
        }
    }

    fn give(&self, node: Node) {
        self.queue.lock().expect("queue lock").items.push(node);
        self.ready.notify_one();
    }

    fn halt(&self) {
        self.stop.store(true, Ordering::SeqCst);
        let _guard = self.queue.lock().expect("queue lock");
        self.ready.notify_all();
    }

    fn expand(&self, node: Node, stack: &mut Vec<Node>, report: &mut SearchReport) {
        let level = node.p.len();
        report.level(level).expanded += 1;
        report.nodes_expanded += 1;
        report.max_height = report.max_height.max(level);
        self.sink.node(&node);

        if node.p.is_full_partition() {
            self.complete(&node, report);
            return;
        }
        if let Mode::Census { max_cells } = self.cfg.mode {
            if level >= max_cells {
                return;
            }
        }
        let candidates = self.checker.candidates(&node, self.rule);
        if self.rule.smallest_edge && candidates.len() as u64 > candidate_bound(level, self.cfg.m, self.cfg.n) {
            report.bound_violations += 1;
        }
        let first_child = stack.len();
        for cell in candidates {
            match self.checker.child(&node, cell) {
                Ok(child) => {
                    if let Some(seen) = &self.seen {
                        let mut key = child.p.sorted_cells();
                        key.shrink_to_fit();
                        if !seen.lock().expect("seen lock").insert(key) {
                            report.level(level + 1).duplicates += 1;
                            continue;
                        }
                    }
                    report.level(level + 1).valid += 1;
                    stack.push(child);
                }
                Err(ChildError::Rejected(r)) => {
                    report.level(level + 1).pruned_by.bump(r.condition);
                    if self.sink.wants_pruned() {
                        self.sink.pruned(&r);
                    }
                }
                Err(ChildError::Structure(e)) => panic!("aligned candidate {cell} rejected by extend: {e}"),
            }
        }
        // lexicographically first child on top
        stack[first_child..].reverse();
    }

    fn complete(&self, node: &Node, report: &mut SearchReport) {
        let check = validate(&node.p, self.cfg);
        assert!(
            check.verdict.is_valid(),
            "completed partition {} failed re-validation: {:?}",
            node.p,
            check.verdict
        );
        let girth = check.girth.expect("valid partitions carry girth data");
        report.record_completed(CompletedPartition {
            cells: node.p.to_string(),
            girth_ab: girth.girth_ab,
            half_girth_l1: girth.half_girth_l1,
        });
        if let Some(target) = self.cfg.stop_at_pair {
            if target.matches_exactly(&girth) {
                report.stopped_at_target = true;
                self.halt();
            }
        }
    }

    fn work(&self, mut stack: Vec<Node>) -> (SearchReport, Vec<Node>) {
        let mut report = SearchReport::new(self.cfg.clone());
        loop {
            let node = match stack.pop() {
                Some(n) => n,
                None => match self.take() {
                    Some(n) => n,
                    None => break,
                },
            };
            if self.stop.load(Ordering::SeqCst) {
                stack.push(node);
                break;
            }
            let used = self.expanded.fetch_add(1, Ordering::SeqCst);
            if self.budget.is_some_and(|b| used >= b) {
                stack.push(node);
                self.halt();
                break;
            }
            self.expand(node, &mut stack, &mut report);
            if stack.len() > 1 && self.idle.load(Ordering::SeqCst) > 0 {
                // hand the shallowest pending node to an idle worker
                self.give(stack.remove(0));
            }
        }
        (report, stack)
    }
}

fn drive(cfg: &SearchConfig, mut base: SearchReport, start: Vec<Node>, sink: &dyn EventSink) -> Result<SearchOutcome, SearchError> {
    cfg.check()?;
    let began = Instant::now();
    let shared = Shared {
        cfg,
        checker: Checker::new(cfg)?,
        rule: cfg.candidate_rule(),
        sink,
        queue: Mutex::new(Queue { items: Vec::new(), done: false }),
        ready: Condvar::new(),
        idle: AtomicUsize::new(0),
        expanded: AtomicU64::new(0),
        budget: cfg.max_nodes,
        stop: AtomicBool::new(false),
        seen: cfg.dedupe.then(|| Mutex::new(HashSet::new())),
    };
    let results: Vec<(SearchReport, Vec<Node>)> = if cfg.workers == 1 {
        vec![shared.work(start)]
    } else {
        std::thread::scope(|s| {
            let mut first = Some(start);
            let handles: Vec<_> = (0..cfg.workers)
                .map(|_| {
                    let initial = first.take().unwrap_or_default();
                    let shared = &shared;
                    s.spawn(move || shared.work(initial))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut leftover = Vec::new();
    for (r, stack) in &results {
        base.merge(r);
        leftover.extend(stack.iter().map(|n| n.p.cells().to_vec()));
    }
    leftover.extend(shared.queue.into_inner().expect("queue lock").items.iter().map(|n| n.p.cells().to_vec()));
    base.config = cfg.clone();
    base.truncated = !leftover.is_empty() && !base.stopped_at_target;
    base.wall_time_ms = Some(base.wall_time_ms.unwrap_or(0) + began.elapsed().as_millis() as u64);
    base.finish();
    let checkpoint = base.truncated.then(|| Checkpoint { config: cfg.clone(), report: base.clone(), stack: leftover });
    Ok(SearchOutcome { report: base, checkpoint })
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    run_search_with(cfg, &NullSink)
}

pub fn run_search_with(cfg: &SearchConfig, sink: &dyn EventSink) -> Result<SearchOutcome, SearchError> {
    cfg.check()?;
    let checker = Checker::new(cfg)?;
    let root = checker.root(cfg);
    let mut base = SearchReport::new(cfg.clone());
    base.level(root.p.len()).valid += 1;
    drive(cfg, base, vec![root], sink)
}

/// Continues a stopped run. `cfg` may differ from the checkpoint's only in
/// budget and worker count; the returned report includes the earlier counts.
pub fn resume_search(cp: &Checkpoint, cfg: &SearchConfig, sink: &dyn EventSink) -> Result<SearchOutcome, SearchError> {
    cfg.check()?;
    let checker = Checker::new(cfg)?;
    let stack = cp
        .stack
        .iter()
        .map(|cells| checker.replay(cfg, cells))
        .collect::<Result<Vec<_>, _>>()?;
    let mut base = cp.report.clone();
    base.truncated = false;
    base.no_example = None;
    drive(cfg, base, stack, sink)
}
