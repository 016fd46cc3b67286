//! Left alignment of candidate cells and generation of the de-duplicated
//! aligned candidate set for a subpartition.
//!
//! Indices above the frontier `(i_P, j_P)` are interchangeable, so a new cell
//! only ever needs the next one or two unused slots on each side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{Cell, Index, StructureError, Subpartition, VerticalEdge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignError {
    #[error("aligned slot {slot} exceeds side size {size}")]
    IndexOutOfRange { slot: Index, size: Index },
    #[error("left alignment needs a 2-cell")]
    NotTwoCell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlignmentContext {
    pub ip: Index,
    pub jp: Index,
    pub m: Index,
    pub n: Index,
}

impl AlignmentContext {
    pub fn of(p: &Subpartition) -> Self {
        let (ip, jp) = p.frontier();
        let g = p.grid();
        Self { ip, jp, m: g.m, n: g.n }
    }

    /// `(min(i_P+2, m), min(j_P+2, n))`.
    pub fn window(&self) -> (Index, Index) {
        ((self.ip + 2).min(self.m), (self.jp + 2).min(self.n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlignedCell {
    pub cell: Cell,
    pub used_new_a: u8,
    pub used_new_b: u8,
}

/// Relabels the fresh indices of `c` onto the next free slots: fresh A-indices
/// in increasing order, fresh B-indices in the order of their partners'
/// A-indices (not sorted by value).
pub fn left_align(ctx: AlignmentContext, c: Cell) -> Result<AlignedCell, AlignError> {
    let (e1, e2) = c.as_pair().ok_or(AlignError::NotTwoCell)?;
    let remap = |x: [Index; 2], frontier: Index, size: Index| -> Result<([Index; 2], u8), AlignError> {
        let mut next = frontier;
        let mut out = x;
        for v in out.iter_mut() {
            if *v > frontier {
                next += 1;
                if next > size {
                    return Err(AlignError::IndexOutOfRange { slot: next, size });
                }
                *v = next;
            }
        }
        Ok((out, (next - frontier) as u8))
    };
    let ([a1, a2], used_new_a) = remap([e1.a, e2.a], ctx.ip, ctx.m)?;
    let ([b1, b2], used_new_b) = remap([e1.b, e2.b], ctx.jp, ctx.n)?;
    let cell = Cell::two(VerticalEdge::new(a1, b1), VerticalEdge::new(a2, b2))
        .expect("relabeling is injective");
    Ok(AlignedCell { cell, used_new_a, used_new_b })
}

/// Order used to pick the smallest uncovered edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeOrder {
    /// By `(max(i, j), i, j)`: square shells grown from `(1,1)`.
    #[default]
    Shell,
    /// By `(i, j)`.
    Lex,
}

impl EdgeOrder {
    pub fn key(self, e: VerticalEdge) -> (Index, Index, Index) {
        match self {
            EdgeOrder::Shell => (e.a.max(e.b), e.a, e.b),
            EdgeOrder::Lex => (0, e.a, e.b),
        }
    }
}

/// Candidate filtering options.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CandidateRule {
    /// Require the smallest uncovered window edge to lie in the cell.
    pub smallest_edge: bool,
    pub order: EdgeOrder,
}

fn slots_ok(x1: Index, x2: Index, frontier: Index) -> bool {
    let hi = x1.max(x2);
    hi <= frontier + 1 || (x1 == frontier + 1 && x2 == frontier + 2)
}

fn has_new(x1: Index, x2: Index, frontier: Index) -> u8 {
    (x1 > frontier) as u8 + (x2 > frontier) as u8
}

/// Smallest uncovered edge of the alignment window under `order`.
pub fn smallest_uncovered(p: &Subpartition, order: EdgeOrder) -> Option<VerticalEdge> {
    let (wa, wb) = AlignmentContext::of(p).window();
    (1..=wa)
        .flat_map(|a| (1..=wb).map(move |b| VerticalEdge::new(a, b)))
        .filter(|e| !p.is_covered(*e))
        .min_by_key(|e| order.key(*e))
}

/// Aligned 2-cells disjoint from `p`, duplicate-free, in lexicographic order
/// of `(i1, j1, i2, j2)`.
pub fn aligned_candidates(p: &Subpartition, rule: CandidateRule) -> Vec<AlignedCell> {
    let ctx = AlignmentContext::of(p);
    let (wa, wb) = ctx.window();
    let required = if rule.smallest_edge {
        match smallest_uncovered(p, rule.order) {
            Some(e) => Some(e),
            None => return Vec::new(),
        }
    } else {
        None
    };
    let mut out = Vec::new();
    for i1 in 1..=wa {
        for j1 in 1..=wb {
            let e1 = VerticalEdge::new(i1, j1);
            if p.is_covered(e1) {
                continue;
            }
            for i2 in i1 + 1..=wa {
                if !(i2 <= ctx.ip + 1 || (i1 == ctx.ip + 1 && i2 == ctx.ip + 2)) {
                    continue;
                }
                for j2 in 1..=wb {
                    if j2 == j1 || !slots_ok(j1, j2, ctx.jp) {
                        continue;
                    }
                    let e2 = VerticalEdge::new(i2, j2);
                    if p.is_covered(e2) {
                        continue;
                    }
                    if let Some(r) = required {
                        if r != e1 && r != e2 {
                            continue;
                        }
                    }
                    out.push(AlignedCell {
                        cell: Cell::two(e1, e2).expect("distinct indices"),
                        used_new_a: has_new(i1, i2, ctx.ip),
                        used_new_b: has_new(j1, j2, ctx.jp),
                    });
                }
            }
        }
    }
    out
}

/// Aligned 1-cells for odd subpartitions that have not used their 1-cell yet.
pub fn aligned_one_cells(p: &Subpartition, rule: CandidateRule) -> Vec<Cell> {
    if p.has_one_cell() || p.parity() == crate::partition::Parity::Even {
        return Vec::new();
    }
    if rule.smallest_edge {
        return smallest_uncovered(p, rule.order).map(Cell::one).into_iter().collect();
    }
    let ctx = AlignmentContext::of(p);
    let wa = (ctx.ip + 1).min(ctx.m);
    let wb = (ctx.jp + 1).min(ctx.n);
    (1..=wa)
        .flat_map(|a| (1..=wb).map(move |b| VerticalEdge::new(a, b)))
        .filter(|e| !p.is_covered(*e))
        .map(Cell::one)
        .collect()
}

pub fn child(p: &Subpartition, c: &AlignedCell) -> Result<Subpartition, StructureError> {
    p.extend(c.cell)
}

/// Upper bound `C(a,2)·C(b,2)` on the candidate count after `k` cells, with
/// `a = min(2k+2, m)` and `b = min(2k+2, n)`.
pub fn candidate_bound(k: usize, m: Index, n: Index) -> u64 {
    let c2 = |x: u64| x * x.saturating_sub(1) / 2;
    let w = 2 * k as u64 + 2;
    c2(w.min(m as u64)) * c2(w.min(n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::partition::{Grid, Parity};

    fn ctx(ip: Index, jp: Index) -> AlignmentContext {
        AlignmentContext { ip, jp, m: 10, n: 10 }
    }

    #[test]
    fn fresh_cell_aligns_to_origin() {
        let a = left_align(ctx(0, 0), Cell::pair(3, 7, 5, 4)).unwrap();
        assert_eq!(a.cell, Cell::pair(1, 1, 2, 2));
        assert_eq!((a.used_new_a, a.used_new_b), (2, 2));
    }

    #[test]
    fn old_indices_unchanged() {
        let c = Cell::pair(1, 2, 2, 1);
        assert_eq!(left_align(ctx(2, 2), c).unwrap().cell, c);
    }

    #[test]
    fn b_slots_follow_a_order() {
        let a = left_align(ctx(2, 3), Cell::pair(1, 5, 4, 2)).unwrap();
        assert_eq!(a.cell, Cell::pair(1, 4, 3, 2));
        let b = left_align(ctx(0, 0), Cell::pair(1, 9, 2, 3)).unwrap();
        assert_eq!(b.cell, Cell::pair(1, 1, 2, 2));
    }

    #[test]
    fn alignment_out_of_range() {
        let small = AlignmentContext { ip: 3, jp: 0, m: 4, n: 4 };
        assert!(matches!(
            left_align(small, Cell::pair(5, 1, 6, 2)),
            Err(AlignError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn empty_has_one_candidate() {
        let p = Subpartition::empty(Grid::new(6, 6).unwrap(), Parity::Even);
        for smallest_edge in [false, true] {
            let c = aligned_candidates(&p, CandidateRule { smallest_edge, order: EdgeOrder::Shell });
            assert_eq!(c.iter().map(|a| a.cell).collect::<Vec<_>>(), vec![Cell::pair(1, 1, 2, 2)]);
        }
    }

    #[test]
    fn four_children_of_first_cell() {
        let p = fixtures::subpartition("P1").unwrap();
        for order in [EdgeOrder::Shell, EdgeOrder::Lex] {
            let c = aligned_candidates(&p, CandidateRule { smallest_edge: true, order });
            let cells: Vec<Cell> = c.iter().map(|a| a.cell).collect();
            assert_eq!(
                cells,
                vec![Cell::pair(1, 2, 2, 1), Cell::pair(1, 2, 2, 3), Cell::pair(1, 2, 3, 1), Cell::pair(1, 2, 3, 3)]
            );
        }
    }

    #[test]
    fn nine_second_edges_after_p127() {
        let p = fixtures::subpartition_on("P127", Grid::new(4, 6).unwrap()).unwrap();
        let rule = CandidateRule { smallest_edge: true, order: EdgeOrder::Shell };
        assert_eq!(smallest_uncovered(&p, rule.order), Some(VerticalEdge::new(1, 3)));
        let c = aligned_candidates(&p, rule);
        assert_eq!(c.len(), 9);
        assert!(c.iter().all(|a| a.cell.contains(VerticalEdge::new(1, 3))));
    }

    #[test]
    fn children_of_first_cell() {
        let p1 = fixtures::subpartition("P1").unwrap();
        let a = |c| AlignedCell { cell: c, used_new_a: 0, used_new_b: 0 };
        for (name, c) in [
            ("P11", Cell::pair(1, 2, 2, 3)),
            ("P12", Cell::pair(1, 2, 3, 3)),
            ("P13", Cell::pair(3, 1, 1, 2)),
        ] {
            assert_eq!(child(&p1, &a(c)).unwrap(), fixtures::subpartition(name).unwrap());
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(candidate_bound(0, 10, 10), 1);
        assert_eq!(candidate_bound(1, 10, 10), 36);
        assert_eq!(candidate_bound(3, 4, 5), 60);
    }
}
