use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::report::SearchReport;
use super::SearchConfig;
use crate::partition::Cell;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint format: {0}")]
    Json(#[from] serde_json::Error),
}

/// Pending nodes (as cell lists in insertion order) plus the counts so far.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config: SearchConfig,
    pub report: SearchReport,
    pub stack: Vec<Vec<Cell>>,
}

impl Checkpoint {
    pub fn write(&self, path: &Path) -> Result<(), CheckpointError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec(self)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CheckpointError> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}
