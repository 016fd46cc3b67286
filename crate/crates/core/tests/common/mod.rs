#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use taiko_core::align::{aligned_candidates, CandidateRule, EdgeOrder};
use taiko_core::oracle::all_two_cells;
use taiko_core::{Cell, Grid, Index, Parity, Subpartition};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Up to `k` pairwise disjoint 2-cells drawn uniformly at random.
pub fn random_subpartition(rng: &mut StdRng, m: Index, n: Index, k: usize) -> Subpartition {
    let grid = Grid::new(m, n).unwrap();
    let mut cells = all_two_cells(grid);
    cells.shuffle(rng);
    let mut p = Subpartition::empty(grid, Parity::Even);
    for c in cells {
        if p.len() == k {
            break;
        }
        if let Ok(next) = p.extend(c) {
            p = next;
        }
    }
    p
}

/// A random left-aligned path of up to `k` cells, valid or not.
pub fn random_aligned(rng: &mut StdRng, m: Index, n: Index, k: usize) -> Subpartition {
    let grid = Grid::new(m, n).unwrap();
    let rule = CandidateRule { smallest_edge: false, order: EdgeOrder::Shell };
    let mut p = Subpartition::empty(grid, Parity::Even);
    while p.len() < k {
        let cands = aligned_candidates(&p, rule);
        let Some(c) = cands.choose(rng) else { break };
        p = p.extend(c.cell).unwrap();
    }
    p
}

pub fn random_perm(rng: &mut StdRng, size: Index) -> Vec<Index> {
    let mut v: Vec<Index> = (1..=size).collect();
    v.shuffle(rng);
    v
}

pub fn relabeled(p: &Subpartition, sigma: &[Index], tau: &[Index]) -> Subpartition {
    let cells: Vec<Cell> = p.cells().iter().map(|c| taiko_core::oracle::relabel(c, sigma, tau)).collect();
    Subpartition::from_cells(p.grid(), p.parity(), cells).unwrap()
}

pub fn coin(rng: &mut StdRng) -> bool {
    rng.gen()
}
