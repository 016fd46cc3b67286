//! Horizontal edges induced by 2-cells, their color classes, and the
//! parity-consistent orientation. Folds and repeated patterns are read off the
//! oriented skeleton.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{Cell, Index, Subpartition, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

/// Direction of an edge as seen from one of its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::In => "in",
            Direction::Out => "out",
        })
    }
}

/// An undirected pair `{u, v}` on one side, stored with `u < v`, together with
/// the indices of the cells that induce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizontalEdge {
    pub side: Side,
    pub u: Index,
    pub v: Index,
    pub cells: Vec<usize>,
}

impl HorizontalEdge {
    fn vertex(&self, i: Index) -> Vertex {
        match self.side {
            Side::A => Vertex::A(i),
            Side::B => Vertex::B(i),
        }
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.vertex(self.u), self.vertex(self.v))
    }
}

/// A cycle of cells whose direction constraints cannot all hold. The last
/// cell is the one that closed the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationConflict {
    pub cells: Vec<Cell>,
}

impl fmt::Display for OrientationConflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        write!(f, "constraint cycle through {}", parts.join(" -> "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HorizontalError {
    #[error("structure is not orientable: {0}")]
    ConflictPresent(OrientationConflict),
}

/// A horizontal edge after orientation, with its color id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectedEdge {
    pub tail: Vertex,
    pub head: Vertex,
    pub color: usize,
    pub edge: usize,
}

/// Two distinct edges of one color with the same direction at `vertex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub vertex: Vertex,
    pub color: usize,
    pub direction: Direction,
    pub edges: [DirectedEdge; 2],
}

/// Unordered pair of distinct `(color, direction)` labels, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub first: (usize, Direction),
    pub second: (usize, Direction),
}

impl Pattern {
    pub fn new(x: (usize, Direction), y: (usize, Direction)) -> Self {
        let (first, second) = if x <= y { (x, y) } else { (y, x) };
        Self { first, second }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatedPattern {
    pub pattern: Pattern,
    pub vertices: (Vertex, Vertex),
}

/// Union-find whose links carry a parity bit: `parity(x) ^ parity(y)` is the
/// relative direction of two edges in the same class.
#[derive(Debug, Clone, Default)]
struct ParityUnionFind {
    parent: Vec<u32>,
    parity: Vec<bool>,
    size: Vec<u32>,
    /// Smallest member of the class, valid at roots.
    rep: Vec<u32>,
    /// Whole-class flip, valid at roots.
    flip: Vec<bool>,
}

impl ParityUnionFind {
    fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id as u32);
        self.parity.push(false);
        self.size.push(1);
        self.rep.push(id as u32);
        self.flip.push(false);
        id
    }

    fn find(&self, mut x: usize) -> (usize, bool) {
        let mut p = false;
        while self.parent[x] as usize != x {
            p ^= self.parity[x];
            x = self.parent[x] as usize;
        }
        (x, p)
    }

    /// Requires `parity(x) ^ parity(y) == rel`. Returns false on contradiction.
    fn union(&mut self, x: usize, y: usize, rel: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == rel;
        }
        let (big, small) = if self.size[rx] >= self.size[ry] { (rx, ry) } else { (ry, rx) };
        self.parent[small] = big as u32;
        self.parity[small] = px ^ py ^ rel;
        self.size[big] += self.size[small];
        if self.rep[small] < self.rep[big] {
            self.rep[big] = self.rep[small];
            // keep the direction of the surviving representative
            self.flip[big] = self.flip[small];
        }
        true
    }

    /// True when `x` points from its smaller to its larger endpoint.
    fn forward(&self, x: usize) -> bool {
        let (root, px) = self.find(x);
        let (_, pr) = self.find(self.rep[root] as usize);
        !(px ^ pr ^ self.flip[root])
    }
}

/// Horizontal edges with color classes and the canonical orientation: the
/// first-inserted edge of each class points from its smaller endpoint to its
/// larger one.
#[derive(Debug, Clone)]
pub struct OrientedSkeleton {
    edges: Vec<HorizontalEdge>,
    uf: ParityUnionFind,
    /// Every 2-cell added so far with its A-edge and B-edge indices.
    cells: Vec<(Cell, usize, usize)>,
    conflict: Option<OrientationConflict>,
}

/// What [`OrientedSkeleton::add_cell`] changed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellEffect {
    pub a_edge: usize,
    pub b_edge: usize,
    pub new_a: bool,
    pub new_b: bool,
}

impl Default for OrientedSkeleton {
    fn default() -> Self {
        Self::new()
    }
}

impl OrientedSkeleton {
    pub fn new() -> Self {
        Self { edges: Vec::new(), uf: ParityUnionFind::default(), cells: Vec::new(), conflict: None }
    }

    pub fn from_cells<'a>(cells: impl IntoIterator<Item = &'a Cell>) -> Self {
        let mut sk = Self::new();
        for c in cells {
            sk.add_cell(*c);
        }
        sk
    }

    fn edge_index(&mut self, side: Side, x: Index, y: Index, cell: usize) -> (usize, bool) {
        let (u, v) = if x < y { (x, y) } else { (y, x) };
        if let Some(i) = self.edges.iter().position(|e| e.side == side && e.u == u && e.v == v) {
            self.edges[i].cells.push(cell);
            return (i, false);
        }
        self.edges.push(HorizontalEdge { side, u, v, cells: vec![cell] });
        let id = self.uf.push();
        debug_assert_eq!(id + 1, self.edges.len());
        (id, true)
    }

    /// Adds the horizontal edges of a 2-cell and its direction constraint.
    /// Returns `None` for 1-cells. The first contradiction is kept as the
    /// conflict witness.
    pub fn add_cell(&mut self, cell: Cell) -> Option<CellEffect> {
        let ((a1, b1), (a2, b2)) = cell.as_pair().map(|(x, y)| ((x.a, x.b), (y.a, y.b)))?;
        let slot = self.cells.len();
        let (ea, new_a) = self.edge_index(Side::A, a1, a2, slot);
        let (eb, new_b) = self.edge_index(Side::B, b1, b2, slot);
        // a1 < a2 always; the B-edge runs backward relative to its stored
        // order exactly when b1 > b2.
        let consistent = self.uf.union(ea, eb, b1 > b2);
        if !consistent && self.conflict.is_none() {
            self.conflict = Some(self.witness(ea, eb, cell));
        }
        self.cells.push((cell, ea, eb));
        Some(CellEffect { a_edge: ea, b_edge: eb, new_a, new_b })
    }

    /// Shortest chain of earlier cells linking the two edges of `closing`.
    fn witness(&self, from: usize, to: usize, closing: Cell) -> OrientationConflict {
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; self.edges.len()];
        seen[from] = true;
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for (ci, &(_, ea, eb)) in self.cells.iter().enumerate() {
                let y = if ea == x {
                    eb
                } else if eb == x {
                    ea
                } else {
                    continue;
                };
                if !seen[y] {
                    seen[y] = true;
                    prev.insert(y, (x, ci));
                    queue.push_back(y);
                }
            }
        }
        let mut cells = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, ci) = prev[&cur];
            cells.push(self.cells[ci].0);
            cur = p;
        }
        cells.reverse();
        cells.push(closing);
        OrientationConflict { cells }
    }

    pub fn conflict(&self) -> Option<&OrientationConflict> {
        self.conflict.as_ref()
    }

    pub fn is_orientable(&self) -> bool {
        self.conflict.is_none()
    }

    fn require_orientable(&self) -> Result<(), HorizontalError> {
        match &self.conflict {
            Some(c) => Err(HorizontalError::ConflictPresent(c.clone())),
            None => Ok(()),
        }
    }

    pub fn edges(&self) -> &[HorizontalEdge] {
        &self.edges
    }

    pub fn edges_on(&self, side: Side) -> impl Iterator<Item = &HorizontalEdge> {
        self.edges.iter().filter(move |e| e.side == side)
    }

    /// Root of the class of edge `e`; stable only until the next merge.
    pub fn class_root(&self, e: usize) -> usize {
        self.uf.find(e).0
    }

    /// Color id per edge, numbered by first appearance.
    pub fn color_ids(&self) -> Vec<usize> {
        let mut id_of_root: HashMap<usize, usize> = HashMap::new();
        (0..self.edges.len())
            .map(|e| {
                let root = self.uf.find(e).0;
                let next = id_of_root.len();
                *id_of_root.entry(root).or_insert(next)
            })
            .collect()
    }

    pub fn color_count(&self) -> usize {
        (0..self.edges.len()).filter(|&e| self.uf.find(e).0 == e).count()
    }

    /// Edge indices grouped by color id.
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let ids = self.color_ids();
        let mut classes = vec![Vec::new(); self.color_count()];
        for (e, c) in ids.into_iter().enumerate() {
            classes[c].push(e);
        }
        classes
    }

    pub fn is_forward(&self, e: usize) -> bool {
        self.uf.forward(e)
    }

    /// Reverses every edge of the class containing edge `e`.
    pub fn flip_class(&mut self, e: usize) {
        let root = self.uf.find(e).0;
        self.uf.flip[root] ^= true;
    }

    fn directed(&self, e: usize, color: usize) -> DirectedEdge {
        let (x, y) = self.edges[e].endpoints();
        let (tail, head) = if self.is_forward(e) { (x, y) } else { (y, x) };
        DirectedEdge { tail, head, color, edge: e }
    }

    /// Oriented edges in insertion order.
    pub fn directed_edges(&self) -> Result<Vec<DirectedEdge>, HorizontalError> {
        self.require_orientable()?;
        let ids = self.color_ids();
        Ok((0..self.edges.len()).map(|e| self.directed(e, ids[e])).collect())
    }

    fn fold_among(edges: &[DirectedEdge]) -> Option<Fold> {
        let mut seen: HashMap<(Vertex, usize, Direction), DirectedEdge> = HashMap::new();
        for d in edges {
            for (vertex, direction) in [(d.tail, Direction::Out), (d.head, Direction::In)] {
                if let Some(other) = seen.insert((vertex, d.color, direction), *d) {
                    return Some(Fold { vertex, color: d.color, direction, edges: [other, *d] });
                }
            }
        }
        None
    }

    pub fn find_fold(&self) -> Result<Option<Fold>, HorizontalError> {
        Ok(Self::fold_among(&self.directed_edges()?))
    }

    /// Fold restricted to the class of edge `e`; the only class a new cell
    /// can change.
    pub fn find_fold_in_class(&self, e: usize) -> Result<Option<Fold>, HorizontalError> {
        self.require_orientable()?;
        let root = self.uf.find(e).0;
        let color = self.color_ids()[e];
        let members: Vec<DirectedEdge> = (0..self.edges.len())
            .filter(|&x| self.uf.find(x).0 == root)
            .map(|x| self.directed(x, color))
            .collect();
        Ok(Self::fold_among(&members))
    }

    /// Labels `(color, direction)` at each vertex touched by a horizontal edge.
    pub fn vertex_labels(&self) -> Result<BTreeMap<Vertex, Vec<(usize, Direction)>>, HorizontalError> {
        let mut labels: BTreeMap<Vertex, Vec<(usize, Direction)>> = BTreeMap::new();
        for d in self.directed_edges()? {
            labels.entry(d.tail).or_default().push((d.color, Direction::Out));
            labels.entry(d.head).or_default().push((d.color, Direction::In));
        }
        for l in labels.values_mut() {
            l.sort();
            l.dedup();
        }
        Ok(labels)
    }

    pub fn find_repeated_pattern(&self) -> Result<Option<RepeatedPattern>, HorizontalError> {
        let mut first_seen: HashMap<Pattern, Vertex> = HashMap::new();
        for (v, labels) in self.vertex_labels()? {
            for (i, x) in labels.iter().enumerate() {
                for y in &labels[i + 1..] {
                    let pattern = Pattern::new(*x, *y);
                    if let Some(&w) = first_seen.get(&pattern) {
                        return Ok(Some(RepeatedPattern { pattern, vertices: (w, v) }));
                    }
                    first_seen.insert(pattern, v);
                }
            }
        }
        Ok(None)
    }
}

/// Horizontal edges of `P` as `(A-side, B-side)` unordered pairs.
pub fn horizontal_edges(p: &Subpartition) -> (Vec<(Index, Index)>, Vec<(Index, Index)>) {
    let sk = OrientedSkeleton::from_cells(p.cells());
    let side = |s| sk.edges_on(s).map(|e| (e.u, e.v)).collect();
    (side(Side::A), side(Side::B))
}

/// Color classes of `P` as lists of horizontal edges.
pub fn color_classes(p: &Subpartition) -> Vec<Vec<HorizontalEdge>> {
    let sk = OrientedSkeleton::from_cells(p.cells());
    sk.color_classes()
        .into_iter()
        .map(|class| class.into_iter().map(|e| sk.edges[e].clone()).collect())
        .collect()
}

pub fn orient(p: &Subpartition) -> OrientedSkeleton {
    OrientedSkeleton::from_cells(p.cells())
}
