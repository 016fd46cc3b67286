//! Brute-force ground truth for small grids.
//!
//! Nothing here reuses the search-side machinery: orientations are found by
//! trying every direction assignment, colors by naive closure, girth by
//! deleting each edge and measuring the distance between its ends.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::partition::{Cell, Grid, Index, Parity, Subpartition, VerticalEdge};
use crate::search::{GirthFloor, SearchConfig, SearchError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{what} is too large for brute force ({detail})")]
    TooLarge { what: &'static str, detail: String },
    #[error("search failed: {0}")]
    Search(#[from] SearchError),
}

/// Which conditions a brute-force enumeration filters by.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Conditions {
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
    /// T4 floors; empty means T4 is not checked.
    pub floors: Vec<GirthFloor>,
    pub theorem1_cap: bool,
}

impl Conditions {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn orientation_only() -> Self {
        Self { t1: true, ..Self::default() }
    }

    /// T1, T2 and T4 with every admissible pair, no cap.
    pub fn standard() -> Self {
        Self {
            t1: true,
            t2: true,
            t3: false,
            floors: crate::midlink::GirthPair::ALL.into_iter().map(GirthFloor::from).collect(),
            theorem1_cap: false,
        }
    }
}

/// Size limits for enumeration and relabeling sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_side: Index,
    pub max_cells: usize,
    pub max_orientation_edges: usize,
}

impl Guard {
    pub const DEFAULT: Guard = Guard { max_side: 4, max_cells: 4, max_orientation_edges: 20 };
    /// Enough for three cells on a 6×6 grid.
    pub const EXTENDED: Guard = Guard { max_side: 6, max_cells: 3, max_orientation_edges: 20 };

    /// The smallest built-in guard admitting `(m, n, k)`.
    pub fn for_size(m: Index, n: Index, k: usize) -> Result<Guard, OracleError> {
        [Guard::DEFAULT, Guard::EXTENDED]
            .into_iter()
            .find(|g| m <= g.max_side && n <= g.max_side && k <= g.max_cells)
            .ok_or_else(|| OracleError::TooLarge { what: "enumeration", detail: format!("{m}x{n} with {k} cells") })
    }
}

type HEdge = (u8, Index, Index); // (side 0 = A / 1 = B, smaller, larger)
type Node = (u8, Index); // (side, index)

fn hedges_of(c: &Cell) -> Option<[(HEdge, bool); 2]> {
    // (edge, forward-when-cell-forward): the cell runs a1 -> a2 and b1 -> b2
    let (x, y) = c.as_pair()?;
    let (a1, a2) = (x.a, y.a);
    let (b1, b2) = (x.b, y.b);
    let a = ((0, a1.min(a2), a1.max(a2)), a1 < a2);
    let b = ((1, b1.min(b2), b1.max(b2)), b1 < b2);
    Some([a, b])
}

/// Horizontal edges in order of first appearance.
fn horizontal(cells: &[Cell]) -> Vec<HEdge> {
    let mut out: Vec<HEdge> = Vec::new();
    for c in cells {
        for (e, _) in hedges_of(c).into_iter().flatten() {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

/// Some orientation (true = smaller endpoint to larger) satisfying every
/// cell, by trying all assignments.
pub fn brute_orientation(cells: &[Cell], guard: Guard) -> Result<Option<HashMap<HEdge, bool>>, OracleError> {
    let edges = horizontal(cells);
    if edges.len() > guard.max_orientation_edges {
        return Err(OracleError::TooLarge { what: "orientation", detail: format!("{} horizontal edges", edges.len()) });
    }
    let index: HashMap<HEdge, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let pairs: Vec<[(usize, bool); 2]> = cells
        .iter()
        .filter_map(hedges_of)
        .map(|[(a, fa), (b, fb)]| [(index[&a], fa), (index[&b], fb)])
        .collect();
    for mask in 0u64..(1u64 << edges.len()) {
        let dir = |i: usize| mask >> i & 1 == 1;
        // both edges must run the way the cell does, or both the other way
        if pairs.iter().all(|[(a, fa), (b, fb)]| (dir(*a) == *fa) == (dir(*b) == *fb)) {
            return Ok(Some(edges.iter().enumerate().map(|(i, e)| (*e, dir(i))).collect()));
        }
    }
    Ok(None)
}

/// Color classes by repeated merging until nothing changes.
pub fn naive_colors(cells: &[Cell]) -> Vec<BTreeSet<HEdge>> {
    let mut classes: Vec<BTreeSet<HEdge>> = Vec::new();
    for [(a, _), (b, _)] in cells.iter().filter_map(hedges_of) {
        classes.push([a, b].into_iter().collect());
    }
    loop {
        let mut merged = false;
        'outer: for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                if !classes[i].is_disjoint(&classes[j]) {
                    let moved = classes.remove(j);
                    classes[i].extend(moved);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return classes;
        }
    }
}

/// Directed horizontal edges `(tail, head, color)`.
fn directed(orientation: &HashMap<HEdge, bool>, classes: &[BTreeSet<HEdge>]) -> Vec<(Node, Node, usize)> {
    let mut out = Vec::new();
    for (color, class) in classes.iter().enumerate() {
        for &e in class {
            let (side, u, v) = e;
            let (t, h) = if orientation[&e] { (u, v) } else { (v, u) };
            out.push(((side, t), (side, h), color));
        }
    }
    out
}

/// `(color, out?)` labels per vertex, with multiplicity.
fn labels(d: &[(Node, Node, usize)]) -> BTreeMap<Node, Vec<(usize, bool)>> {
    let mut map: BTreeMap<Node, Vec<(usize, bool)>> = BTreeMap::new();
    for &(t, h, c) in d {
        map.entry(t).or_default().push((c, true));
        map.entry(h).or_default().push((c, false));
    }
    map
}

fn has_fold(d: &[(Node, Node, usize)]) -> bool {
    labels(d).values().any(|ls| {
        let mut s = ls.clone();
        s.sort();
        s.windows(2).any(|w| w[0] == w[1])
    })
}

fn has_repeated_pattern(d: &[(Node, Node, usize)]) -> bool {
    let mut seen: BTreeSet<((usize, bool), (usize, bool))> = BTreeSet::new();
    for ls in labels(d).values() {
        let distinct: BTreeSet<(usize, bool)> = ls.iter().copied().collect();
        let v: Vec<_> = distinct.into_iter().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if !seen.insert((v[i], v[j])) {
                    return true;
                }
            }
        }
    }
    false
}

/// Girth as `min over edges e of dist_{G-e}(u, v) + 1`; `None` for forests.
pub fn naive_girth<N: Ord + Copy>(edges: &BTreeSet<(N, N)>) -> Option<u32> {
    let mut adj: BTreeMap<N, Vec<N>> = BTreeMap::new();
    for &(x, y) in edges {
        adj.entry(x).or_default().push(y);
        adj.entry(y).or_default().push(x);
    }
    let mut best: Option<u32> = None;
    for &(x, y) in edges {
        let mut dist: BTreeMap<N, u32> = BTreeMap::from([(x, 0)]);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[&u] {
                let skip = (u == x && w == y) || (u == y && w == x);
                if !skip && !dist.contains_key(&w) {
                    dist.insert(w, dist[&u] + 1);
                    queue.push_back(w);
                }
            }
        }
        if let Some(d) = dist.get(&y) {
            best = Some(best.map_or(d + 1, |b| b.min(d + 1)));
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum LinkNode {
    Side(Node),
    Middle(usize, bool),
}

/// Independently computed facts about a subpartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub orientable: bool,
    pub fold: bool,
    pub repeated_pattern: bool,
    pub colors: usize,
    /// `None` = infinite.
    pub girth_ab: Option<u32>,
    pub half_girth_l1: Option<u32>,
    pub l1_vertices_used: usize,
    pub l1_edges: usize,
    pub valid: bool,
}

pub fn oracle_validate(p: &Subpartition, cond: &Conditions, guard: Guard) -> Result<OracleVerdict, OracleError> {
    let cells = p.cells();
    let classes = naive_colors(cells);
    let mut v = OracleVerdict {
        orientable: false,
        fold: false,
        repeated_pattern: false,
        colors: classes.len(),
        girth_ab: None,
        half_girth_l1: None,
        l1_vertices_used: 0,
        l1_edges: 0,
        valid: false,
    };
    let Some(orientation) = brute_orientation(cells, guard)? else {
        v.valid = !cond.t1 && !cond.t2 && !cond.t3 && cond.floors.is_empty();
        return Ok(v);
    };
    v.orientable = true;
    let d = directed(&orientation, &classes);
    v.fold = has_fold(&d);
    v.repeated_pattern = has_repeated_pattern(&d);

    let side_edges = |s: u8| -> BTreeSet<(Index, Index)> {
        horizontal(cells).into_iter().filter(|e| e.0 == s).map(|(_, u, w)| (u, w)).collect()
    };
    v.girth_ab = match (naive_girth(&side_edges(0)), naive_girth(&side_edges(1))) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let mut link: BTreeSet<(LinkNode, LinkNode)> = BTreeSet::new();
    for &(t, h, c) in &d {
        link.insert((LinkNode::Side(t), LinkNode::Middle(c, true)));
        link.insert((LinkNode::Side(h), LinkNode::Middle(c, false)));
    }
    v.l1_edges = link.len();
    v.l1_vertices_used = link.iter().flat_map(|(x, y)| [*x, *y]).collect::<BTreeSet<_>>().len();
    v.half_girth_l1 = naive_girth(&link).map(|g| g / 2);

    let t4 = cond.floors.is_empty()
        || cond.floors.iter().any(|f| {
            let capped = cond.theorem1_cap && p.two_cell_count() >= 3 && f.q > 4;
            !capped && v.girth_ab.is_none_or(|g| g >= f.p) && v.half_girth_l1.is_none_or(|h| h >= f.q)
        });
    v.valid = (!cond.t1 || v.orientable)
        && (!cond.t2 || !v.fold)
        && (!cond.t3 || !v.repeated_pattern)
        && t4;
    Ok(v)
}

/// Every 2-cell of the grid in lexicographic order.
pub fn all_two_cells(grid: Grid) -> Vec<Cell> {
    let edges: Vec<VerticalEdge> = grid.edges().collect();
    let mut out = Vec::new();
    for (i, x) in edges.iter().enumerate() {
        for y in &edges[i + 1..] {
            if let Ok(c) = Cell::two(*x, *y) {
                out.push(c);
            }
        }
    }
    out
}

/// Calls `visit` with every set of `k` pairwise disjoint 2-cells (as a
/// subpartition in lexicographic cell order) that passes `cond`. Prefixes
/// failing T1 or T2 are skipped, since any superset fails them too.
pub fn for_each_subpartition(
    m: Index,
    n: Index,
    k: usize,
    cond: &Conditions,
    guard: Guard,
    visit: &mut dyn FnMut(&Subpartition),
) -> Result<(), OracleError> {
    enumerate_from(m, n, k, false, cond, guard, visit)
}

/// Like [`for_each_subpartition`], restricted to sets containing the cell
/// `{(1,1),(2,2)}`. Any one cell of a subpartition can be relabeled onto
/// that cell, so every isomorphism class of nonempty subpartitions is met.
pub fn for_each_anchored(
    m: Index,
    n: Index,
    k: usize,
    cond: &Conditions,
    guard: Guard,
    visit: &mut dyn FnMut(&Subpartition),
) -> Result<(), OracleError> {
    enumerate_from(m, n, k, true, cond, guard, visit)
}

fn enumerate_from(
    m: Index,
    n: Index,
    k: usize,
    anchored: bool,
    cond: &Conditions,
    guard: Guard,
    visit: &mut dyn FnMut(&Subpartition),
) -> Result<(), OracleError> {
    if m > guard.max_side || n > guard.max_side || k > guard.max_cells {
        return Err(OracleError::TooLarge { what: "enumeration", detail: format!("{m}x{n} with {k} cells") });
    }
    let grid = Grid::new(m, n).map_err(|e| OracleError::TooLarge { what: "grid", detail: e.to_string() })?;
    let mut cells = all_two_cells(grid);
    let mut root = Subpartition::empty(grid, Parity::Even);
    if anchored {
        if k == 0 {
            return Ok(());
        }
        let anchor = Cell::pair(1, 1, 2, 2);
        cells.retain(|c| *c != anchor);
        root = root.extend(anchor).map_err(|e| OracleError::TooLarge { what: "grid", detail: e.to_string() })?;
    }

    fn rec(
        cells: &[Cell],
        start: usize,
        p: &Subpartition,
        k: usize,
        cond: &Conditions,
        guard: Guard,
        visit: &mut dyn FnMut(&Subpartition),
    ) -> Result<(), OracleError> {
        if p.len() == k {
            if oracle_validate(p, cond, guard)?.valid {
                visit(p);
            }
            return Ok(());
        }
        for i in start..cells.len() {
            let Ok(next) = p.extend(cells[i]) else { continue };
            if (cond.t1 || cond.t2) && next.len() < k {
                let v = oracle_validate(&next, &Conditions::none(), guard)?;
                if (cond.t1 && !v.orientable) || (cond.t2 && v.orientable && v.fold) {
                    continue;
                }
            }
            rec(cells, i + 1, &next, k, cond, guard, visit)?;
        }
        Ok(())
    }
    rec(&cells, 0, &root, k, cond, guard, visit)
}

pub fn enumerate_all(m: Index, n: Index, k: usize, cond: &Conditions, guard: Guard) -> Result<Vec<Subpartition>, OracleError> {
    let mut out = Vec::new();
    for_each_subpartition(m, n, k, cond, guard, &mut |p| out.push(p.clone()))?;
    Ok(out)
}

/// How isomorphism-class keys are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonMethod {
    /// Minimum over all `(σ, τ) ∈ S_m × S_n` of the sorted relabeled cell list.
    RelabelSweep,
    /// Minimum over all orderings of the cells and of the edges inside each
    /// cell of the first-appearance relabeling.
    CellOrder,
}

pub type IsoKey = Vec<u8>;

fn next_permutation(v: &mut [Index]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn encode(cells: &[Vec<(Index, Index)>]) -> IsoKey {
    let mut out = Vec::new();
    for c in cells {
        out.push(c.len() as u8);
        for &(a, b) in c {
            out.extend_from_slice(&a.to_be_bytes());
            out.extend_from_slice(&b.to_be_bytes());
        }
    }
    out
}

pub fn relabel(c: &Cell, sigma: &[Index], tau: &[Index]) -> Cell {
    let map = |e: VerticalEdge| VerticalEdge::new(sigma[e.a as usize - 1], tau[e.b as usize - 1]);
    let mut edges = c.edges().map(map);
    let first = edges.next().expect("nonempty cell");
    Cell::new(first, edges.next()).expect("relabeling keeps cells valid")
}

pub fn iso_key(p: &Subpartition, method: CanonMethod) -> Result<IsoKey, OracleError> {
    let grid = p.grid();
    match method {
        CanonMethod::RelabelSweep => {
            if grid.m > 6 || grid.n > 6 {
                return Err(OracleError::TooLarge { what: "relabeling sweep", detail: format!("{}x{}", grid.m, grid.n) });
            }
            let mut best: Option<IsoKey> = None;
            let mut sigma: Vec<Index> = (1..=grid.m).collect();
            loop {
                let mut tau: Vec<Index> = (1..=grid.n).collect();
                loop {
                    let mut cells: Vec<Cell> = p.cells().iter().map(|c| relabel(c, &sigma, &tau)).collect();
                    cells.sort();
                    let raw: Vec<Vec<(Index, Index)>> = cells.iter().map(|c| c.edges().map(|e| (e.a, e.b)).collect()).collect();
                    let key = encode(&raw);
                    if best.as_ref().is_none_or(|b| key < *b) {
                        best = Some(key);
                    }
                    if !next_permutation(&mut tau) {
                        break;
                    }
                }
                if !next_permutation(&mut sigma) {
                    break;
                }
            }
            Ok(best.unwrap_or_default())
        }
        CanonMethod::CellOrder => {
            let cells: Vec<Vec<VerticalEdge>> = p.cells().iter().map(|c| c.edges().collect()).collect();
            let k = cells.len();
            if k > 8 {
                return Err(OracleError::TooLarge { what: "cell-order canon", detail: format!("{k} cells") });
            }
            let mut order: Vec<Index> = (0..k as Index).collect();
            let mut best: Option<IsoKey> = None;
            loop {
                for flips in 0u32..(1 << k) {
                    let mut amap: HashMap<Index, Index> = HashMap::new();
                    let mut bmap: HashMap<Index, Index> = HashMap::new();
                    let mut raw = Vec::with_capacity(k);
                    for (pos, &ci) in order.iter().enumerate() {
                        let mut es = cells[ci as usize].clone();
                        if flips >> pos & 1 == 1 {
                            es.reverse();
                        }
                        let mut cell = Vec::new();
                        for e in es {
                            let na = amap.len() as Index + 1;
                            let a = *amap.entry(e.a).or_insert(na);
                            let nb = bmap.len() as Index + 1;
                            let b = *bmap.entry(e.b).or_insert(nb);
                            cell.push((a, b));
                        }
                        raw.push(cell);
                    }
                    let key = encode(&raw);
                    if best.as_ref().is_none_or(|b| key < *b) {
                        best = Some(key);
                    }
                }
                if !next_permutation(&mut order) {
                    break;
                }
            }
            Ok(best.unwrap_or_default())
        }
    }
}

#[derive(Debug, Clone)]
pub struct IsoClass {
    pub representative: Subpartition,
    pub count: usize,
}

pub fn iso_classes<'a>(
    list: impl IntoIterator<Item = &'a Subpartition>,
    method: CanonMethod,
) -> Result<BTreeMap<IsoKey, IsoClass>, OracleError> {
    let mut out: BTreeMap<IsoKey, IsoClass> = BTreeMap::new();
    for p in list {
        let key = iso_key(p, method)?;
        out.entry(key).and_modify(|c| c.count += 1).or_insert(IsoClass { representative: p.clone(), count: 1 });
    }
    Ok(out)
}

/// Whether adding the cells in `order` keeps used indices contiguous and
/// lays out every new cell exactly as left alignment would.
fn aligned_sequence(cells: &[Cell]) -> bool {
    let (mut ip, mut jp) = (0, 0);
    for c in cells {
        let Some((x, y)) = c.as_pair() else { return false };
        let mut next_a = ip;
        for a in [x.a, y.a] {
            if a > ip {
                next_a += 1;
                if a != next_a {
                    return false;
                }
            }
        }
        let mut next_b = jp;
        for b in [x.b, y.b] {
            if b > jp {
                next_b += 1;
                if b != next_b {
                    return false;
                }
            }
        }
        ip = next_a;
        jp = next_b;
    }
    true
}

/// The insertion order a smallest-edge search would use for this cell set,
/// if one exists: each next cell holds the smallest uncovered edge of the
/// window `[1, i_P+2] × [1, j_P+2]` in `(max(i,j), i, j)` order.
pub fn greedy_order(p: &Subpartition) -> Option<Vec<Cell>> {
    let grid = p.grid();
    let mut remaining: Vec<Cell> = p.cells().to_vec();
    let mut placed: Vec<Cell> = Vec::new();
    let (mut ip, mut jp) = (0, 0);
    while !remaining.is_empty() {
        let wa = (ip + 2).min(grid.m);
        let wb = (jp + 2).min(grid.n);
        let covered = |e: VerticalEdge| placed.iter().any(|c| c.contains(e));
        let mut window: Vec<VerticalEdge> = (1..=wa)
            .flat_map(|a| (1..=wb).map(move |b| VerticalEdge::new(a, b)))
            .filter(|e| !covered(*e))
            .collect();
        window.sort_by_key(|e| (e.a.max(e.b), e.a, e.b));
        let target = *window.first()?;
        let pos = remaining.iter().position(|c| c.contains(target))?;
        let c = remaining.remove(pos);
        for e in c.edges() {
            ip = ip.max(e.a);
            jp = jp.max(e.b);
        }
        placed.push(c);
    }
    aligned_sequence(&placed).then_some(placed)
}

/// Outcome of checking search output against brute force at one level.
#[derive(Debug, Clone, Default)]
pub struct LevelComparison {
    pub level: usize,
    pub oracle_subpartitions: usize,
    pub oracle_classes: usize,
    pub search_nodes: usize,
    pub search_classes: usize,
    /// Oracle classes with no isomorphic search node.
    pub missing: Vec<String>,
    /// Search nodes the independent validators reject.
    pub invalid: Vec<String>,
    /// Largest number of search nodes in one class.
    pub max_duplicates: usize,
}

impl LevelComparison {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.invalid.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Comparison {
    /// Search without the smallest-edge rule against every valid subpartition.
    pub unrestricted: Vec<LevelComparison>,
    /// Smallest-edge search against the brute-force family reachable in
    /// smallest-edge order, compared as exact sets.
    pub smallest_edge: Vec<LevelComparison>,
    /// Class counts per level of the smallest-edge family.
    pub smallest_edge_class_counts: Vec<usize>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.unrestricted.iter().chain(&self.smallest_edge).all(LevelComparison::passed)
    }
}

struct Collect(std::sync::Mutex<Vec<Subpartition>>);

impl crate::search::EventSink for Collect {
    fn node(&self, node: &crate::search::Node) {
        self.0.lock().expect("collect lock").push(node.p.clone());
    }
}

fn search_nodes(cfg: &SearchConfig) -> Result<Vec<Subpartition>, OracleError> {
    let sink = Collect(std::sync::Mutex::new(Vec::new()));
    crate::search::run_search_with(cfg, &sink)?;
    Ok(sink.0.into_inner().expect("collect lock"))
}

fn sorted(p: &Subpartition) -> Subpartition {
    Subpartition::from_cells(p.grid(), p.parity(), p.sorted_cells()).expect("same cells")
}

/// Compares census search output with brute-force enumeration for levels
/// `1..=k`: every brute-force isomorphism class must be reached, and every
/// search node must pass the independent validators. Brute force runs over
/// anchored sets only (see [`for_each_anchored`]).
pub fn compare_with_search(m: Index, n: Index, k: usize, method: CanonMethod) -> Result<Comparison, OracleError> {
    let guard = Guard::for_size(m, n, k)?;
    let cond = Conditions::standard();
    let base = SearchConfig { theorem1_cap: false, ..SearchConfig::census(m, n, k) };
    let open = search_nodes(&SearchConfig { smallest_edge: false, ..base.clone() })?;
    let greedy = search_nodes(&SearchConfig { smallest_edge: true, ..base })?;

    let mut out = Comparison::default();
    for level in 1..=k {
        let mut count = 0;
        let mut brute_classes: BTreeMap<IsoKey, Subpartition> = BTreeMap::new();
        let mut family: BTreeMap<String, Subpartition> = BTreeMap::new();
        let mut failure: Option<OracleError> = None;
        for_each_anchored(m, n, level, &cond, guard, &mut |p| {
            if failure.is_some() {
                return;
            }
            count += 1;
            match iso_key(p, method) {
                Ok(key) => {
                    brute_classes.entry(key).or_insert_with(|| p.clone());
                }
                Err(e) => failure = Some(e),
            }
            if in_smallest_edge_family(p, &cond, guard) {
                family.insert(p.to_string(), p.clone());
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }

        let at_level: Vec<&Subpartition> = open.iter().filter(|p| p.len() == level).collect();
        let mut cmp = LevelComparison {
            level,
            oracle_subpartitions: count,
            oracle_classes: brute_classes.len(),
            search_nodes: at_level.len(),
            ..Default::default()
        };
        let mut per_class: BTreeMap<IsoKey, usize> = BTreeMap::new();
        for p in &at_level {
            if !oracle_validate(p, &cond, guard)?.valid {
                cmp.invalid.push(p.to_string());
            }
            *per_class.entry(iso_key(p, method)?).or_default() += 1;
        }
        cmp.search_classes = per_class.len();
        cmp.max_duplicates = per_class.values().copied().max().unwrap_or(0);
        cmp.missing = brute_classes
            .iter()
            .filter(|(key, _)| !per_class.contains_key(*key))
            .map(|(_, p)| p.to_string())
            .collect();
        out.unrestricted.push(cmp);

        let reached: Vec<&Subpartition> = greedy.iter().filter(|p| p.len() == level).collect();
        let reached_set: BTreeSet<String> = reached.iter().map(|p| sorted(p).to_string()).collect();
        let family_set: BTreeSet<String> = family.keys().cloned().collect();
        let classes = iso_classes(family.values(), method)?.len();
        let reached_classes = iso_classes(reached.iter().copied(), method)?;
        out.smallest_edge_class_counts.push(classes);
        out.smallest_edge.push(LevelComparison {
            level,
            oracle_subpartitions: family.len(),
            oracle_classes: classes,
            search_nodes: reached.len(),
            search_classes: reached_classes.len(),
            max_duplicates: reached_classes.values().map(|c| c.count).max().unwrap_or(0),
            missing: family_set.difference(&reached_set).cloned().collect(),
            invalid: reached_set.difference(&family_set).cloned().collect(),
        });
    }
    Ok(out)
}

/// Whether `p` is reachable by adding cells in smallest-edge order with
/// every prefix valid.
pub fn in_smallest_edge_family(p: &Subpartition, cond: &Conditions, guard: Guard) -> bool {
    greedy_order(p).is_some_and(|order| {
        (1..order.len()).all(|j| {
            let prefix = Subpartition::from_cells(p.grid(), p.parity(), order[..j].iter().copied()).expect("subset");
            oracle_validate(&prefix, cond, guard).is_ok_and(|v| v.valid)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tiny_enumerations() {
        let g = Guard::DEFAULT;
        assert_eq!(enumerate_all(2, 2, 1, &Conditions::orientation_only(), g).unwrap().len(), 2);
        assert_eq!(enumerate_all(2, 2, 2, &Conditions::orientation_only(), g).unwrap().len(), 0);
        assert_eq!(enumerate_all(4, 4, 1, &Conditions::none(), g).unwrap().len(), 72);
        assert!(matches!(enumerate_all(5, 5, 1, &Conditions::none(), g), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn naive_girth_basics() {
        let tri: BTreeSet<(u8, u8)> = [(0, 1), (1, 2), (0, 2)].into_iter().collect();
        assert_eq!(naive_girth(&tri), Some(3));
        let path: BTreeSet<(u8, u8)> = [(0, 1), (1, 2)].into_iter().collect();
        assert_eq!(naive_girth(&path), None);
    }

    #[test]
    fn full_4x4_by_brute_force() {
        let v = oracle_validate(&fixtures::full_4x4(), &Conditions::standard(), Guard::DEFAULT).unwrap();
        assert!(v.orientable);
        assert_eq!(v.colors, 4);
        assert_eq!(v.l1_edges, 24);
        assert_eq!(v.girth_ab, Some(3));
    }

    #[test]
    fn canon_methods_agree_on_fixtures() {
        for name in ["P1", "P11", "P12", "P13", "P115", "P127"] {
            let p = fixtures::subpartition_on(name, Grid { m: 4, n: 4 }).unwrap();
            let shuffled = Subpartition::from_cells(p.grid(), p.parity(), p.cells().iter().rev().copied()).unwrap();
            for method in [CanonMethod::RelabelSweep, CanonMethod::CellOrder] {
                assert_eq!(iso_key(&p, method).unwrap(), iso_key(&shuffled, method).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn greedy_order_of_fixtures() {
        for name in fixtures::NAMES {
            let p = fixtures::subpartition(name).unwrap();
            let shuffled = Subpartition::from_cells(p.grid(), p.parity(), p.sorted_cells()).unwrap();
            assert_eq!(greedy_order(&shuffled).as_deref(), Some(p.cells()), "{name}");
        }
    }
}
