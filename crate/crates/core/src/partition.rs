//! Vertices, vertical edges, cells and subpartitions of `A × B`.
//!
//! All indices are 1-based. A vertical edge `(i, j)` joins `a_i` to `b_j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based vertex index on either side.
pub type Index = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("cell edges {0} and {1} share a vertex")]
    SharedVertex(VerticalEdge, VerticalEdge),
    #[error("cell lists edge {0} twice")]
    DuplicateEdge(VerticalEdge),
    #[error("edge {0} is already covered")]
    EdgeOverlap(VerticalEdge),
    #[error("an odd subpartition holds at most one 1-cell")]
    SecondOneCell,
    #[error("even subpartitions contain only 2-cells")]
    OneCellInEven,
    #[error("edge {edge} lies outside the {m}x{n} grid")]
    IndexOutOfRange { edge: VerticalEdge, m: Index, n: Index },
    #[error("grid sides must be at least 1 (got {m}x{n})")]
    EmptyGrid { m: Index, n: Index },
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// A vertex of the taiko: `a_i` or `b_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    A(Index),
    B(Index),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::A(i) => write!(f, "a{i}"),
            Vertex::B(j) => write!(f, "b{j}"),
        }
    }
}

/// An element `(a_i, b_j)` of `A × B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VerticalEdge {
    pub a: Index,
    pub b: Index,
}

impl VerticalEdge {
    pub const fn new(a: Index, b: Index) -> Self {
        Self { a, b }
    }
}

impl fmt::Display for VerticalEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Dimensions `m = |A|`, `n = |B|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub m: Index,
    pub n: Index,
}

impl Grid {
    pub fn new(m: Index, n: Index) -> Result<Self, StructureError> {
        if m == 0 || n == 0 {
            return Err(StructureError::EmptyGrid { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn edge_count(&self) -> usize {
        self.m as usize * self.n as usize
    }

    pub fn contains(&self, e: VerticalEdge) -> bool {
        (1..=self.m).contains(&e.a) && (1..=self.n).contains(&e.b)
    }

    fn slot(&self, e: VerticalEdge) -> usize {
        (e.a as usize - 1) * self.n as usize + (e.b as usize - 1)
    }

    fn check(&self, e: VerticalEdge) -> Result<(), StructureError> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(StructureError::IndexOutOfRange { edge: e, m: self.m, n: self.n })
        }
    }

    /// Every vertical edge in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = VerticalEdge> + '_ {
        (1..=self.m).flat_map(move |a| (1..=self.n).map(move |b| VerticalEdge::new(a, b)))
    }

    /// Whether `mn` is odd, i.e. a full partition needs one 1-cell.
    pub fn natural_parity(&self) -> Parity {
        if self.edge_count() % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Number of 2-cells of `A × B`: `2·C(m,2)·C(n,2)`.
pub fn count_two_cells(m: u64, n: u64) -> u64 {
    let choose2 = |x: u64| x * x.saturating_sub(1) / 2;
    2 * choose2(m) * choose2(n)
}

/// One or two vertical edges with no shared vertex, stored with the smaller
/// A-index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    first: VerticalEdge,
    second: Option<VerticalEdge>,
}

impl Cell {
    /// Builds a 1-cell (`second = None`) or a normalized 2-cell.
    pub fn new(e1: VerticalEdge, e2: Option<VerticalEdge>) -> Result<Self, StructureError> {
        match e2 {
            None => Ok(Self::one(e1)),
            Some(e2) => Self::two(e1, e2),
        }
    }

    pub fn one(e: VerticalEdge) -> Self {
        Self { first: e, second: None }
    }

    pub fn two(e1: VerticalEdge, e2: VerticalEdge) -> Result<Self, StructureError> {
        if e1 == e2 {
            return Err(StructureError::DuplicateEdge(e1));
        }
        if e1.a == e2.a || e1.b == e2.b {
            return Err(StructureError::SharedVertex(e1, e2));
        }
        let (first, second) = if e1.a < e2.a { (e1, e2) } else { (e2, e1) };
        Ok(Self { first, second: Some(second) })
    }

    /// Shorthand for `{(a1,b1),(a2,b2)}`; panics on an invalid cell.
    pub fn pair(a1: Index, b1: Index, a2: Index, b2: Index) -> Self {
        Self::two(VerticalEdge::new(a1, b1), VerticalEdge::new(a2, b2)).expect("valid 2-cell")
    }

    pub fn first(&self) -> VerticalEdge {
        self.first
    }

    pub fn second(&self) -> Option<VerticalEdge> {
        self.second
    }

    /// The two edges of a 2-cell, smaller A-index first.
    pub fn as_pair(&self) -> Option<(VerticalEdge, VerticalEdge)> {
        self.second.map(|s| (self.first, s))
    }

    pub fn is_two_cell(&self) -> bool {
        self.second.is_some()
    }

    pub fn size(&self) -> usize {
        1 + self.second.is_some() as usize
    }

    pub fn edges(&self) -> impl Iterator<Item = VerticalEdge> {
        std::iter::once(self.first).chain(self.second)
    }

    pub fn contains(&self, e: VerticalEdge) -> bool {
        self.first == e || self.second == Some(e)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.second {
            Some(s) => write!(f, "{{{},{}}}", self.first, s),
            None => write!(f, "{{{}}}", self.first),
        }
    }
}

fn parse_edges(s: &str) -> Result<Vec<VerticalEdge>, StructureError> {
    let err = || StructureError::Parse(s.to_string());
    let mut edges = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(',').trim_start();
        if rest.is_empty() {
            break;
        }
        let body = rest.strip_prefix('(').ok_or_else(err)?;
        let close = body.find(')').ok_or_else(err)?;
        let (a, b) = body[..close].split_once(',').ok_or_else(err)?;
        let a = a.trim().parse().map_err(|_| err())?;
        let b = b.trim().parse().map_err(|_| err())?;
        edges.push(VerticalEdge::new(a, b));
        rest = body[close + 1..].trim_start();
    }
    Ok(edges)
}

impl FromStr for Cell {
    type Err = StructureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| StructureError::Parse(s.to_string()))?;
        match parse_edges(inner)?.as_slice() {
            [e] => Ok(Cell::one(*e)),
            [e1, e2] => Cell::two(*e1, *e2),
            _ => Err(StructureError::Parse(s.to_string())),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Even: 2-cells only. Odd: exactly one 1-cell in a full partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// An ordered collection of pairwise disjoint cells over a fixed grid.
///
/// Extension is persistent: [`Subpartition::extend`] returns a new value and
/// leaves the receiver untouched.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subpartition {
    grid: Grid,
    parity: Parity,
    cells: Vec<Cell>,
    covered: Vec<u64>,
    covered_count: usize,
    ip: Index,
    jp: Index,
    has_one_cell: bool,
}

impl Subpartition {
    pub fn empty(grid: Grid, parity: Parity) -> Self {
        Self {
            grid,
            parity,
            cells: Vec::new(),
            covered: vec![0; grid.edge_count().div_ceil(64)],
            covered_count: 0,
            ip: 0,
            jp: 0,
            has_one_cell: false,
        }
    }

    /// Extends the empty subpartition cell by cell, in order.
    pub fn from_cells(
        grid: Grid,
        parity: Parity,
        cells: impl IntoIterator<Item = Cell>,
    ) -> Result<Self, StructureError> {
        cells
            .into_iter()
            .try_fold(Self::empty(grid, parity), |p, c| p.extend(c))
    }

    pub fn extend(&self, cell: Cell) -> Result<Self, StructureError> {
        let mut next = self.clone();
        next.push(cell)?;
        Ok(next)
    }

    /// In-place variant of [`Subpartition::extend`]; leaves `self` unchanged on error.
    pub fn push(&mut self, cell: Cell) -> Result<(), StructureError> {
        for e in cell.edges() {
            self.grid.check(e)?;
            if self.is_covered(e) {
                return Err(StructureError::EdgeOverlap(e));
            }
        }
        if !cell.is_two_cell() {
            match self.parity {
                Parity::Even => return Err(StructureError::OneCellInEven),
                Parity::Odd if self.has_one_cell => return Err(StructureError::SecondOneCell),
                Parity::Odd => self.has_one_cell = true,
            }
        }
        for e in cell.edges() {
            let slot = self.grid.slot(e);
            self.covered[slot / 64] |= 1 << (slot % 64);
            self.covered_count += 1;
            self.ip = self.ip.max(e.a);
            self.jp = self.jp.max(e.b);
        }
        self.cells.push(cell);
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn two_cell_count(&self) -> usize {
        self.cells.len() - self.has_one_cell as usize
    }

    pub fn has_one_cell(&self) -> bool {
        self.has_one_cell
    }

    /// `(i_P, j_P)`: the largest A- and B-index in use, 0 when empty.
    pub fn frontier(&self) -> (Index, Index) {
        (self.ip, self.jp)
    }

    pub fn is_covered(&self, e: VerticalEdge) -> bool {
        if !self.grid.contains(e) {
            return false;
        }
        let slot = self.grid.slot(e);
        self.covered[slot / 64] >> (slot % 64) & 1 == 1
    }

    pub fn covered_count(&self) -> usize {
        self.covered_count
    }

    pub fn covered_edges(&self) -> impl Iterator<Item = VerticalEdge> + '_ {
        self.grid.edges().filter(|e| self.is_covered(*e))
    }

    /// Whether the cells cover `A × B` with the parity pattern of `mn`.
    pub fn is_full_partition(&self) -> bool {
        let total = self.grid.edge_count();
        if self.covered_count != total {
            return false;
        }
        if total % 2 == 0 {
            !self.has_one_cell
        } else {
            self.has_one_cell
        }
    }

    /// Cells in sorted order; the insertion order is irrelevant for identity.
    pub fn sorted_cells(&self) -> Vec<Cell> {
        let mut cells = self.cells.clone();
        cells.sort();
        cells
    }

    /// Parses the textual form `[{(1,1),(2,2)};{(1,2),(2,3)}]`.
    pub fn parse(grid: Grid, parity: Parity, s: &str) -> Result<Self, StructureError> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| StructureError::Parse(s.to_string()))?;
        let cells = inner
            .split(';')
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .map(Cell::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_cells(grid, parity, cells)
    }
}

impl fmt::Display for Subpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: Index, b: Index) -> VerticalEdge {
        VerticalEdge::new(a, b)
    }

    fn grid(m: Index, n: Index) -> Grid {
        Grid::new(m, n).unwrap()
    }

    #[test]
    fn make_cell_normalizes_and_rejects() {
        let c = Cell::new(e(2, 2), Some(e(1, 1))).unwrap();
        assert_eq!(c.to_string(), "{(1,1),(2,2)}");
        assert_eq!(
            Cell::new(e(1, 1), Some(e(1, 2))),
            Err(StructureError::SharedVertex(e(1, 1), e(1, 2)))
        );
        assert!(matches!(Cell::new(e(1, 1), Some(e(2, 1))), Err(StructureError::SharedVertex(..))));
        assert_eq!(Cell::new(e(3, 3), Some(e(3, 3))), Err(StructureError::DuplicateEdge(e(3, 3))));
        let one = Cell::new(e(1, 1), None).unwrap();
        assert!(!one.is_two_cell());
        assert_eq!(one.to_string(), "{(1,1)}");
    }

    #[test]
    fn extend_updates_frontier() {
        let p0 = Subpartition::empty(grid(6, 6), Parity::Even);
        let p1 = p0.extend(Cell::pair(1, 1, 2, 2)).unwrap();
        assert_eq!((p1.len(), p1.frontier()), (1, (2, 2)));
        let p11 = p1.extend(Cell::pair(1, 2, 2, 3)).unwrap();
        assert_eq!(p11.frontier(), (2, 3));
        assert_eq!(p11.to_string(), "[{(1,1),(2,2)};{(1,2),(2,3)}]");
        assert_eq!(p1.extend(Cell::pair(1, 1, 3, 3)), Err(StructureError::EdgeOverlap(e(1, 1))));
        // parent untouched
        assert_eq!(p1.len(), 1);
        assert_eq!(p0.frontier(), (0, 0));
    }

    #[test]
    fn parity_rules() {
        let even = Subpartition::empty(grid(3, 3), Parity::Even);
        assert_eq!(even.extend(Cell::one(e(1, 1))), Err(StructureError::OneCellInEven));
        let odd = Subpartition::empty(grid(3, 3), Parity::Odd)
            .extend(Cell::one(e(1, 1)))
            .unwrap();
        assert_eq!(odd.extend(Cell::one(e(2, 2))), Err(StructureError::SecondOneCell));
        assert!(matches!(
            odd.extend(Cell::pair(1, 2, 4, 3)),
            Err(StructureError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn full_4x4_partition_is_full() {
        let p = Subpartition::parse(
            grid(4, 4),
            Parity::Even,
            "[{(1,1),(2,2)};{(1,2),(3,3)};{(2,1),(3,2)};{(1,3),(4,4)};\
             {(2,3),(4,1)};{(1,4),(3,1)};{(2,4),(4,2)};{(3,4),(4,3)}]",
        )
        .unwrap();
        assert!(p.is_full_partition());
        assert_eq!(p.covered_count(), 16);
        assert!(!Subpartition::empty(grid(2, 2), Parity::Even).is_full_partition());
    }

    /// Brute force: find any cover of the 3x3 grid by four 2-cells and one 1-cell.
    #[test]
    fn odd_three_by_three_cover_exists() {
        fn search(p: &Subpartition, out: &mut Option<Subpartition>) {
            if out.is_some() {
                return;
            }
            if p.covered_count() == 9 {
                *out = Some(p.clone());
                return;
            }
            let g = p.grid();
            let first = g.edges().find(|x| !p.is_covered(*x)).unwrap();
            if !p.has_one_cell() {
                search(&p.extend(Cell::one(first)).unwrap(), out);
            }
            for other in g.edges().filter(|x| !p.is_covered(*x)) {
                if let Ok(c) = Cell::two(first, other) {
                    search(&p.extend(c).unwrap(), out);
                }
            }
        }
        let mut found = None;
        search(&Subpartition::empty(grid(3, 3), Parity::Odd), &mut found);
        let p = found.expect("a 3x3 odd partition exists");
        assert_eq!(p.covered_count(), 9);
        assert_eq!(p.two_cell_count(), 4);
        assert!(p.is_full_partition());
    }

    #[test]
    fn two_cell_counts() {
        // brute force over vertex-disjoint unordered edge pairs
        let brute = |m: Index, n: Index| {
            let g = grid(m, n);
            let edges: Vec<_> = g.edges().collect();
            let mut count = 0u64;
            for (i, x) in edges.iter().enumerate() {
                for y in &edges[i + 1..] {
                    if x.a != y.a && x.b != y.b {
                        count += 1;
                    }
                }
            }
            count
        };
        assert_eq!(count_two_cells(3, 3), 18);
        assert_eq!(count_two_cells(2, 2), 2);
        assert_eq!(brute(4, 4), 72);
        assert_eq!(count_two_cells(4, 4), brute(4, 4));
        assert_eq!(count_two_cells(1, 5), 0);
        for (m, n) in [(2, 5), (3, 4), (5, 5)] {
            assert_eq!(count_two_cells(m as u64, n as u64), brute(m, n));
        }
    }

    #[test]
    fn parse_round_trip() {
        let g = grid(4, 4);
        let s = "[{(1,1),(2,2)};{(1,2),(2,3)}]";
        let p = Subpartition::parse(g, Parity::Even, s).unwrap();
        assert_eq!(p.to_string(), s);
        assert!(Subpartition::parse(g, Parity::Even, "[]").unwrap().is_empty());
        assert!(Subpartition::parse(g, Parity::Even, "{(1,1)}").is_err());
    }
}
