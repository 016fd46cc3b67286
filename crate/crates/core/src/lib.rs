//! Enumeration of orientable product substructures of `A × B` and the
//! conditions they must satisfy.

pub mod align;
pub mod dot;
pub mod fixtures;
pub mod horizontal;
pub mod midlink;
pub mod oracle;
pub mod partition;
pub mod search;

pub use partition::{count_two_cells, Cell, Grid, Index, Parity, StructureError, Subpartition, Vertex, VerticalEdge};
