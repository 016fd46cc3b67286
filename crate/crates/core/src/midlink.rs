//! The middle link `L_1`, the side graphs `L_A`/`L_B`, and girth queries.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::horizontal::{Direction, HorizontalError, OrientedSkeleton, Side};
use crate::partition::{Grid, Index, Vertex};

/// Girth of an undirected graph; `Infinite` for forests and compares above
/// every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Girth {
    Finite(u32),
    Infinite,
}

impl Girth {
    pub fn is_at_least(self, g: u32) -> bool {
        self >= Girth::Finite(g)
    }

    /// Half of an even girth (`L_1` is bipartite).
    pub fn half(self) -> Girth {
        match self {
            Girth::Finite(g) => Girth::Finite(g / 2),
            Girth::Infinite => Girth::Infinite,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl PartialOrd for Girth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Girth {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Girth::Finite(a), Girth::Finite(b)) => a.cmp(b),
            (Girth::Finite(_), Girth::Infinite) => Ordering::Less,
            (Girth::Infinite, Girth::Finite(_)) => Ordering::Greater,
            (Girth::Infinite, Girth::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u32(*g),
            Girth::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Girth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(g) => Ok(Girth::Finite(g)),
            Raw::Str(s) if s == "inf" => Ok(Girth::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad girth {s:?}"))),
        }
    }
}

/// What is known about a girth after a bounded query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GirthBound {
    Exact(Girth),
    AtLeast(u32),
}

impl GirthBound {
    /// Largest value the girth is known to reach.
    pub fn lower(self) -> Girth {
        match self {
            GirthBound::Exact(g) => g,
            GirthBound::AtLeast(g) => Girth::Finite(g),
        }
    }

    pub fn is_at_least(self, g: u32) -> bool {
        self.lower().is_at_least(g)
    }

    /// Combines the parent's bound with the result of a rooted search that
    /// covered every new cycle. `found` is a closed walk length below `limit`
    /// (an upper bound on the girth), `None` means no new cycle is shorter
    /// than `limit`.
    pub fn refine(self, found: Option<u32>, limit: u32) -> GirthBound {
        match (self, found) {
            (GirthBound::Exact(g), Some(r)) => GirthBound::Exact(g.min(Girth::Finite(r))),
            (GirthBound::AtLeast(p), Some(r)) if r <= p => GirthBound::Exact(Girth::Finite(r)),
            (GirthBound::AtLeast(p), Some(_)) => GirthBound::AtLeast(p),
            (GirthBound::Exact(g), None) if g < Girth::Finite(limit) => GirthBound::Exact(g),
            (GirthBound::Exact(_), None) => GirthBound::AtLeast(limit),
            (GirthBound::AtLeast(p), None) => GirthBound::AtLeast(p.min(limit)),
        }
    }
}

impl fmt::Display for GirthBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GirthBound::Exact(g) => write!(f, "{g}"),
            GirthBound::AtLeast(g) => write!(f, ">={g}"),
        }
    }
}

impl Serialize for GirthBound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GirthBound::Exact(g) => g.serialize(s),
            GirthBound::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// Simple undirected graph with dense vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    pub fn new(vertices: usize) -> Self {
        Self { adj: vec![Vec::new(); vertices], edge_count: 0 }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Adds `{x, y}`; loops and repeated edges are ignored. Returns whether
    /// the edge is new.
    pub fn add_edge(&mut self, x: usize, y: usize) -> bool {
        if x == y || self.adj[x].contains(&(y as u32)) {
            return false;
        }
        self.adj[x].push(y as u32);
        self.adj[y].push(x as u32);
        self.edge_count += 1;
        true
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x].contains(&(y as u32))
    }

    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[x].iter().map(|&y| y as usize)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y as usize)))
            .filter(|(x, y)| x < y)
    }

    /// BFS from `root`: the shortest closed walk found through cross edges,
    /// if shorter than `limit`, with the walk's vertices.
    fn cycle_from(&self, root: usize, limit: u32, want_path: bool) -> Option<(u32, Vec<usize>)> {
        const UNSEEN: u32 = u32::MAX;
        let mut dist = vec![UNSEEN; self.adj.len()];
        let mut parent = vec![usize::MAX; self.adj.len()];
        let mut best: Option<(u32, usize, usize)> = None;
        let mut bound = limit;
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= bound {
                break;
            }
            for y in self.neighbors(x) {
                if dist[y] == UNSEEN {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = dist[x] + dist[y] + 1;
                    if len < bound {
                        bound = len;
                        best = Some((len, x, y));
                    }
                }
            }
        }
        let (len, x, y) = best?;
        let mut path = Vec::new();
        if want_path {
            let walk = |mut v: usize| {
                let mut p = vec![v];
                while v != root {
                    v = parent[v];
                    p.push(v);
                }
                p
            };
            path = walk(x);
            path.reverse();
            let mut back = walk(y);
            back.pop();
            path.extend(back);
        }
        Some((len, path))
    }

    /// Smallest closed-walk length below `limit` found by searching from
    /// `roots`. Every cycle through a root of length `< limit` yields a value
    /// no larger than its length, and every value is at least the girth.
    pub fn cycle_through(&self, roots: &[usize], limit: u32) -> Option<u32> {
        let mut bound = limit;
        let mut found = None;
        for &r in roots {
            if let Some((len, _)) = self.cycle_from(r, bound, false) {
                bound = len;
                found = Some(len);
            }
        }
        found
    }

    /// Girth if it is below `limit`.
    pub fn girth_below(&self, limit: u32) -> Option<u32> {
        let roots: Vec<usize> = (0..self.adj.len()).collect();
        self.cycle_through(&roots, limit)
    }

    pub fn girth(&self) -> Girth {
        match self.girth_below(u32::MAX) {
            Some(g) => Girth::Finite(g),
            None => Girth::Infinite,
        }
    }

    pub fn girth_at_least(&self, g: u32) -> bool {
        self.girth_below(g).is_none()
    }

    /// Vertices of a shortest cycle, or `None` for a forest.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<(u32, Vec<usize>)> = None;
        for r in 0..self.adj.len() {
            let limit = best.as_ref().map_or(u32::MAX, |b| b.0);
            if let Some(found) = self.cycle_from(r, limit, true) {
                best = Some(found);
            }
        }
        best.map(|b| b.1)
    }
}

/// Middle-link vertex names, used for witnesses and DOT output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LinkVertex {
    Side(Vertex),
    Middle(usize, Direction),
}

impl fmt::Display for LinkVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkVertex::Side(v) => write!(f, "{v}"),
            LinkVertex::Middle(c, d) => write!(f, "c{}_{d}", c + 1),
        }
    }
}

/// `L_1` on `A ⊔ B ⊔ (colors × {in, out})`. Every A- and B-vertex is present,
/// isolated ones included.
#[derive(Debug, Clone)]
pub struct MiddleLink {
    grid: Grid,
    colors: usize,
    graph: Graph,
}

impl MiddleLink {
    pub fn build(sk: &OrientedSkeleton, grid: Grid) -> Result<Self, HorizontalError> {
        let directed = sk.directed_edges()?;
        let colors = sk.color_count();
        let mut link = Self { grid, colors, graph: Graph::new(grid.m as usize + grid.n as usize + 2 * colors) };
        for d in directed {
            let out = link.id(LinkVertex::Middle(d.color, Direction::Out));
            let inn = link.id(LinkVertex::Middle(d.color, Direction::In));
            link.graph.add_edge(link.id(LinkVertex::Side(d.tail)), out);
            link.graph.add_edge(link.id(LinkVertex::Side(d.head)), inn);
        }
        Ok(link)
    }

    pub fn id(&self, v: LinkVertex) -> usize {
        let (m, n) = (self.grid.m as usize, self.grid.n as usize);
        match v {
            LinkVertex::Side(Vertex::A(i)) => i as usize - 1,
            LinkVertex::Side(Vertex::B(j)) => m + j as usize - 1,
            LinkVertex::Middle(c, Direction::In) => m + n + 2 * c,
            LinkVertex::Middle(c, Direction::Out) => m + n + 2 * c + 1,
        }
    }

    pub fn vertex(&self, id: usize) -> LinkVertex {
        let (m, n) = (self.grid.m as usize, self.grid.n as usize);
        if id < m {
            LinkVertex::Side(Vertex::A(id as Index + 1))
        } else if id < m + n {
            LinkVertex::Side(Vertex::B((id - m) as Index + 1))
        } else {
            let k = id - m - n;
            let d = if k % 2 == 0 { Direction::In } else { Direction::Out };
            LinkVertex::Middle(k / 2, d)
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn girth(&self) -> Girth {
        self.graph.girth()
    }

    pub fn half_girth(&self) -> Girth {
        self.graph.girth().half()
    }

    /// A shortest cycle as named vertices.
    pub fn shortest_cycle(&self) -> Option<Vec<LinkVertex>> {
        self.graph
            .shortest_cycle()
            .map(|c| c.into_iter().map(|v| self.vertex(v)).collect())
    }
}

/// Undirected `L_A` (or `L_B`) on vertices `1..=m` (or `1..=n`), 0-based ids.
pub fn side_graph(sk: &OrientedSkeleton, grid: Grid, side: Side) -> Graph {
    let size = match side {
        Side::A => grid.m,
        Side::B => grid.n,
    };
    let mut g = Graph::new(size as usize);
    for e in sk.edges_on(side) {
        g.add_edge(e.u as usize - 1, e.v as usize - 1);
    }
    g
}

/// The three admissible `(girth(L_AB), half-girth(L_1))` floors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GirthPair {
    #[serde(rename = "63")]
    P63,
    #[serde(rename = "44")]
    P44,
    #[serde(rename = "36")]
    P36,
}

impl GirthPair {
    pub const ALL: [GirthPair; 3] = [GirthPair::P63, GirthPair::P44, GirthPair::P36];

    /// `(p, q)`: require `girth(L_AB) ≥ p` and `half-girth(L_1) ≥ q`.
    pub fn floors(self) -> (u32, u32) {
        match self {
            GirthPair::P63 => (6, 3),
            GirthPair::P44 => (4, 4),
            GirthPair::P36 => (3, 6),
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            GirthPair::P63 => "63",
            GirthPair::P44 => "44",
            GirthPair::P36 => "36",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.code() == s)
    }
}

/// Exact girth values of a conflict-free skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleGirth {
    #[serde(rename = "girthAB")]
    pub girth_ab: Girth,
    #[serde(rename = "halfGirthL1")]
    pub half_girth_l1: Girth,
}

impl TripleGirth {
    pub fn measure(sk: &OrientedSkeleton, grid: Grid) -> Result<Self, HorizontalError> {
        let link = MiddleLink::build(sk, grid)?;
        let girth_ab = side_graph(sk, grid, Side::A).girth().min(side_graph(sk, grid, Side::B).girth());
        Ok(Self { girth_ab, half_girth_l1: link.half_girth() })
    }

    pub fn satisfies(&self, pair: GirthPair) -> bool {
        let (p, q) = pair.floors();
        self.girth_ab.is_at_least(p) && self.half_girth_l1.is_at_least(q)
    }

    /// `(pair63, pair44, pair36)`.
    pub fn pairs(&self) -> (bool, bool, bool) {
        (self.satisfies(GirthPair::P63), self.satisfies(GirthPair::P44), self.satisfies(GirthPair::P36))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::horizontal::orient;

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    #[test]
    fn basic_girths() {
        assert_eq!(complete(4).girth(), Girth::Finite(3));
        assert!(!complete(4).girth_at_least(4));
        assert!(complete(4).girth_at_least(3));
        assert_eq!(cycle(6).girth(), Girth::Finite(6));
        let mut path = Graph::new(5);
        for i in 0..4 {
            path.add_edge(i, i + 1);
        }
        assert_eq!(path.girth(), Girth::Infinite);
        assert!(path.girth_at_least(1000));
        assert_eq!(Graph::new(0).girth(), Girth::Infinite);
        assert_eq!(cycle(6).shortest_cycle().unwrap().len(), 6);
    }

    #[test]
    fn girth_order_and_serde() {
        assert!(Girth::Infinite > Girth::Finite(1_000_000));
        assert_eq!(serde_json::to_string(&Girth::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<Girth>("7").unwrap(), Girth::Finite(7));
        assert_eq!(serde_json::from_str::<Girth>("\"inf\"").unwrap(), Girth::Infinite);
        assert_eq!(serde_json::to_string(&GirthBound::AtLeast(6)).unwrap(), "\">=6\"");
    }

    #[test]
    fn refine_bounds() {
        let inf = GirthBound::Exact(Girth::Infinite);
        assert_eq!(inf.refine(None, 8), GirthBound::AtLeast(8));
        assert_eq!(inf.refine(Some(6), 8), GirthBound::Exact(Girth::Finite(6)));
        assert_eq!(GirthBound::AtLeast(8).refine(Some(10), 12), GirthBound::AtLeast(8));
        assert_eq!(GirthBound::AtLeast(8).refine(Some(6), 8), GirthBound::Exact(Girth::Finite(6)));
        assert_eq!(GirthBound::Exact(Girth::Finite(6)).refine(None, 8), GirthBound::Exact(Girth::Finite(6)));
    }

    #[test]
    fn single_cell_link_is_acyclic() {
        let p = fixtures::subpartition("P1").unwrap();
        let tg = TripleGirth::measure(&orient(&p), p.grid()).unwrap();
        assert_eq!(tg.girth_ab, Girth::Infinite);
        assert_eq!(tg.half_girth_l1, Girth::Infinite);
        assert_eq!(tg.pairs(), (true, true, true));
    }

    #[test]
    fn one_color_link_of_p11() {
        let p = fixtures::subpartition("P11").unwrap();
        let link = MiddleLink::build(&orient(&p), p.grid()).unwrap();
        assert_eq!(link.colors(), 1);
        assert_eq!(link.graph().edge_count(), 6);
    }

    #[test]
    fn full_4x4_link() {
        let p = fixtures::full_4x4();
        let sk = orient(&p);
        let link = MiddleLink::build(&sk, p.grid()).unwrap();
        assert_eq!(link.graph().vertex_count(), 16);
        assert_eq!(link.graph().edge_count(), 24);
        assert_eq!(side_graph(&sk, p.grid(), Side::A).girth(), Girth::Finite(3));
        assert_eq!(side_graph(&sk, p.grid(), Side::B).girth(), Girth::Finite(3));
    }

    #[test]
    fn p127_half_girth_four() {
        let p = fixtures::subpartition("P127").unwrap();
        let sk = orient(&p);
        let link = MiddleLink::build(&sk, p.grid()).unwrap();
        assert!(link.graph().girth_at_least(8));
        assert!(!link.graph().girth_at_least(10));
        let tg = TripleGirth::measure(&sk, p.grid()).unwrap();
        assert_eq!((tg.girth_ab, tg.half_girth_l1), (Girth::Infinite, Girth::Finite(4)));
        assert_eq!(tg.pairs(), (true, true, false));
    }

    #[test]
    fn p126_fails_all_pairs() {
        let p = fixtures::subpartition("P126").unwrap();
        let tg = TripleGirth::measure(&orient(&p), p.grid()).unwrap();
        assert_eq!((tg.girth_ab, tg.half_girth_l1), (Girth::Finite(3), Girth::Finite(4)));
        assert_eq!(tg.pairs(), (false, false, false));
    }
}
