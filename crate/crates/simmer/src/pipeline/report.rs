//! Deterministic report writing: tab-separated tables, GML graph
//! descriptions, and the run manifest with content checksums.
//!
//! Floats are formatted with the shortest round-trip representation, so a
//! rerun with identical inputs produces byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::PipelineError;
use crate::network::{Partition, WeightedDiGraph};

pub struct ReportWriter {
    dir: PathBuf,
    written: Vec<(String, String, u64)>,
}

impl ReportWriter {
    pub fn new(dir: &Path) -> Result<ReportWriter, PipelineError> {
        fs::create_dir_all(dir).map_err(|e| PipelineError::stage("report", e))?;
        Ok(ReportWriter {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, content: &str) -> Result<(), PipelineError> {
        let path = self.dir.join(name);
        fs::write(&path, content).map_err(|e| PipelineError::stage("report", e))?;
        let digest = Sha256::digest(content.as_bytes());
        self.written.push((
            name.to_string(),
            hex_string(&digest),
            content.len() as u64,
        ));
        Ok(())
    }

    /// Write the manifest last: crate version, config echo, then one row
    /// per written file with its checksum.
    pub fn finish(mut self, config_json: &str) -> Result<(), PipelineError> {
        let mut out = String::new();
        out.push_str(&format!("# simmer {}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# config {config_json}\n"));
        out.push_str("file\tsha256\tbytes\n");
        self.written.sort();
        for (name, digest, bytes) in &self.written {
            out.push_str(&format!("{name}\t{digest}\t{bytes}\n"));
        }
        let path = self.dir.join("manifest.tsv");
        fs::write(path, out).map_err(|e| PipelineError::stage("report", e))
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Edge list: `from<TAB>to<TAB>weight`, one directed edge per line.
pub fn graph_edge_list(graph: &WeightedDiGraph) -> String {
    let mut out = String::from("from\tto\tweight\n");
    for (a, b, w) in graph.edges() {
        out.push_str(&format!(
            "{}\t{}\t{w}\n",
            graph.node_name(a),
            graph.node_name(b)
        ));
    }
    out
}

/// GML graph description with community and centrality node attributes.
pub fn graph_gml(
    graph: &WeightedDiGraph,
    partition: &Partition,
    centralities: &[(&str, Vec<f64>)],
) -> String {
    let mut out = String::from("graph [\n  directed 1\n");
    for i in 0..graph.node_count() {
        out.push_str(&format!(
            "  node [ id {i} label \"{}\" community {}",
            graph.node_name(i),
            partition.assignment[i]
        ));
        for (name, values) in centralities {
            out.push_str(&format!(" {name} {}", values[i]));
        }
        out.push_str(" ]\n");
    }
    for (a, b, w) in graph.edges() {
        out.push_str(&format!("  edge [ source {a} target {b} weight {w} ]\n"));
    }
    out.push_str("]\n");
    out
}

/// A simple aligned table: header row then rows, all tab-separated.
pub fn tsv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join("\t");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn fmt_opt(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "undefined".to_string(),
    }
}
