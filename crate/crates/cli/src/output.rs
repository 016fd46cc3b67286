use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::Serialize;
use sha2::{Digest, Sha256};
use taiko_core::search::{EventSink, Node, Rejected, SearchConfig, SearchReport};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn now() -> String {
    OffsetDateTime::now_utc().format(&Rfc3339).unwrap_or_default()
}

/// `run.jsonl` → `run.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Outputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jsonl: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub config: SearchConfig,
    pub engine_version: &'static str,
    pub started_at: String,
    pub finished_at: String,
    /// Hash of the serialized config, plus the checkpoint when resuming.
    pub input_sha256: String,
    pub outputs: Outputs,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Record<'a> {
    #[serde(rename_all = "camelCase")]
    Header {
        engine_version: &'static str,
        manifest: Option<&'a Path>,
        input_sha256: &'a str,
        config: &'a SearchConfig,
    },
    Node {
        level: usize,
        cells: String,
        #[serde(rename = "girthAB")]
        girth_ab: String,
        #[serde(rename = "girthL1")]
        girth_l1: String,
    },
    Pruned {
        level: usize,
        cells: String,
        condition: taiko_core::search::Condition,
        witness: &'a taiko_core::search::Witness,
    },
    Report(&'a SearchReport),
}

/// Streams search events as JSON lines. Write errors are kept and reported
/// once the run is over.
pub struct JsonlSink {
    out: Mutex<BufWriter<File>>,
    error: Mutex<Option<io::Error>>,
    full: bool,
}

impl JsonlSink {
    pub fn create(path: &Path, full: bool) -> io::Result<Self> {
        Ok(Self { out: Mutex::new(BufWriter::new(File::create(path)?)), error: Mutex::new(None), full })
    }

    fn emit(&self, record: &Record) {
        let mut out = self.out.lock().expect("jsonl lock");
        let result = serde_json::to_writer(&mut *out, record).map_err(io::Error::other).and_then(|_| out.write_all(b"\n"));
        if let Err(e) = result {
            self.error.lock().expect("error lock").get_or_insert(e);
        }
    }

    pub fn header(&self, manifest: Option<&Path>, input_sha256: &str, config: &SearchConfig) {
        self.emit(&Record::Header { engine_version: env!("CARGO_PKG_VERSION"), manifest, input_sha256, config });
    }

    /// Writes the final report (without wall time, so reruns stay identical)
    /// and flushes.
    pub fn finish(self, report: &SearchReport) -> io::Result<()> {
        let report = SearchReport { wall_time_ms: None, ..report.clone() };
        self.emit(&Record::Report(&report));
        let mut out = self.out.into_inner().expect("jsonl lock");
        if let Some(e) = self.error.into_inner().expect("error lock") {
            return Err(e);
        }
        out.flush()
    }
}

impl EventSink for JsonlSink {
    fn node(&self, node: &Node) {
        if self.full {
            self.emit(&Record::Node {
                level: node.p.len(),
                cells: node.p.to_string(),
                girth_ab: node.girth_ab.to_string(),
                girth_l1: node.girth_l1.to_string(),
            });
        }
    }

    fn pruned(&self, r: &Rejected) {
        self.emit(&Record::Pruned { level: r.p.len(), cells: r.p.to_string(), condition: r.condition, witness: &r.witness });
    }

    fn wants_pruned(&self) -> bool {
        self.full
    }
}

/// The report file: the report itself plus a pointer to its manifest.
#[derive(Serialize)]
pub struct ReportFile<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest: Option<&'a Path>,
    #[serde(flatten)]
    pub report: &'a SearchReport,
}
