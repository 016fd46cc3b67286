//! Named subpartitions and the JSON fixture format.
//!
//! Small subpartitions are named by their path in the exploration tree: `P1`
//! is the root cell, `P12` its second child, `P127` the seventh child of
//! `P12`, and so on.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{Cell, Grid, Index, Parity, StructureError, Subpartition, VerticalEdge};

/// Every name accepted by [`subpartition`].
pub const NAMES: [&str; 21] = [
    "P1", "P11", "P12", "P13", "P111", "P112", "P113", "P114", "P115", "P121", "P122", "P123",
    "P124", "P125", "P126", "P127", "P131", "P132", "P133", "P134", "P135",
];

/// The five level-3 subpartitions that satisfy every condition.
pub const VALID_LEVEL3: [&str; 5] = ["P115", "P123", "P125", "P127", "P135"];

fn second_cell(name: &str) -> Option<Cell> {
    Some(match name.get(..3)? {
        "P11" => Cell::pair(1, 2, 2, 3),
        "P12" => Cell::pair(1, 2, 3, 3),
        "P13" => Cell::pair(1, 2, 3, 1),
        _ => return None,
    })
}

/// Third cells pair `(2,1)` with the listed edge.
fn third_partner(name: &str) -> Option<(Index, Index)> {
    Some(match name {
        "P111" | "P121" | "P131" => (1, 3),
        "P112" | "P122" | "P132" => (3, 2),
        "P113" | "P133" => (3, 3),
        "P114" | "P123" => (1, 4),
        "P115" | "P124" => (3, 4),
        "P125" | "P134" => (4, 2),
        "P126" | "P135" => (4, 3),
        "P127" => (4, 4),
        _ => return None,
    })
}

pub fn cells(name: &str) -> Option<Vec<Cell>> {
    let mut out = vec![Cell::pair(1, 1, 2, 2)];
    match name.len() {
        2 if name == "P1" => {}
        3 => out.push(second_cell(name)?),
        4 => {
            out.push(second_cell(name)?);
            let (a, b) = third_partner(name)?;
            out.push(Cell::two(VerticalEdge::new(2, 1), VerticalEdge::new(a, b)).ok()?);
        }
        _ => return None,
    }
    Some(out)
}

/// A named subpartition on a 6×6 grid, wide enough that no child is clipped.
pub fn subpartition(name: &str) -> Option<Subpartition> {
    subpartition_on(name, Grid { m: 6, n: 6 })
}

pub fn subpartition_on(name: &str, grid: Grid) -> Option<Subpartition> {
    Subpartition::from_cells(grid, Parity::Even, cells(name)?).ok()
}

/// An orientable even partition of the 4×4 grid into eight 2-cells with four
/// color classes.
pub fn full_4x4_cells() -> Vec<Cell> {
    vec![
        Cell::pair(1, 1, 2, 2),
        Cell::pair(1, 2, 3, 3),
        Cell::pair(2, 1, 3, 2),
        Cell::pair(1, 3, 4, 4),
        Cell::pair(2, 3, 4, 1),
        Cell::pair(1, 4, 3, 1),
        Cell::pair(2, 4, 4, 2),
        Cell::pair(3, 4, 4, 3),
    ]
}

pub fn full_4x4() -> Subpartition {
    Subpartition::from_cells(Grid { m: 4, n: 4 }, Parity::Even, full_4x4_cells()).expect("valid partition")
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("reading fixture: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing fixture: {0}")]
    Json(#[from] serde_json::Error),
    #[error("fixture cell {0:?} must list one or two edges")]
    CellShape(Vec<[Index; 2]>),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// `{"m":4,"n":4,"parity":"even","cells":[[[1,1],[2,2]],...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub m: Index,
    pub n: Index,
    pub parity: Parity,
    pub cells: Vec<Vec<[Index; 2]>>,
}

impl FixtureFile {
    pub fn from_subpartition(p: &Subpartition) -> Self {
        let g = p.grid();
        Self {
            m: g.m,
            n: g.n,
            parity: p.parity(),
            cells: p.cells().iter().map(|c| c.edges().map(|e| [e.a, e.b]).collect()).collect(),
        }
    }

    pub fn to_subpartition(&self) -> Result<Subpartition, FixtureError> {
        let grid = Grid::new(self.m, self.n)?;
        let mut p = Subpartition::empty(grid, self.parity);
        for raw in &self.cells {
            let edge = |x: &[Index; 2]| VerticalEdge::new(x[0], x[1]);
            let cell = match raw.as_slice() {
                [e] => Cell::one(edge(e)),
                [e1, e2] => Cell::two(edge(e1), edge(e2))?,
                _ => return Err(FixtureError::CellShape(raw.clone())),
            };
            p.push(cell)?;
        }
        Ok(p)
    }

    pub fn read(path: &Path) -> Result<Self, FixtureError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FixtureError> {
        std::fs::write(path, serde_json::to_string(self)? + "\n")?;
        Ok(())
    }
}
