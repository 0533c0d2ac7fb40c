//! Deterministic serialization of runs and analyses: edge lists, event logs,
//! time series, theory tables, manifests, and DOT export.
//!
//! Formats are deliberately plain: CSV with one header row and comma
//! separators (run fields are all base-10 integers), JSONL for the event log
//! so it can stream, JSON for the manifest and the analysis report. Every
//! file is UTF-8 with LF line endings and ends in a newline. Identical
//! in-memory values produce byte-identical files: field order, number
//! formatting, and row order are all fixed.

pub mod digest;

pub use digest::{fnv1a64, Fnv1a64};

use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{
    child_first_spawn, spawn_interval, verify_tree, NodeRecord, SimConfig, SimResult, SpawnEvent,
};
use crate::error::ExportError;
use crate::stats::AnalysisReport;
use crate::theory::DegreeProbabilityTable;

/// Format version stamped into every manifest.
pub const ARTIFACT_VERSION: &str = "1";

pub const EDGES_FILE: &str = "edges.csv";
pub const EVENTS_FILE: &str = "events.jsonl";
pub const BIRTHS_FILE: &str = "births_per_tick.csv";
pub const DEGREES_FILE: &str = "degree_by_label.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const DOT_FILE: &str = "network.dot";
pub const THEORY_FILE: &str = "theory.csv";
pub const MASTER_TRACE_FILE: &str = "evolve_trace.csv";
pub const REPORT_FILE: &str = "report.json";
pub const SURVIVAL_FILE: &str = "survival.csv";
pub const FRACTIONS_FILE: &str = "degree_fractions.csv";
pub const HISTOGRAM_FILE: &str = "deviates_histogram.csv";
pub const SCAN_FILE: &str = "xmin_scan.csv";
pub const OVERLAY_FILE: &str = "zipf_overlay.csv";
pub const COMPARE_FILE: &str = "compare.csv";

/// Everything needed to identify, validate, and reproduce a written run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub config: SimConfig,
    pub final_tick: u64,
    pub node_count: u64,
    pub event_count: u64,
    /// FNV-1a 64 of the event-log bytes, as 16 lowercase hex digits.
    pub digest: String,
}

/// One comparison row: empirical degree fraction against the theoretical
/// distributions and a fitted Zipf PMF.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CompareRow {
    pub q: u64,
    pub empirical: f64,
    pub p_recursive: f64,
    pub p_asymptotic: f64,
    pub zipf_pmf: f64,
}

/// One checkpoint of a master-equation evolution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MasterTraceRow {
    pub n: u64,
    pub p1: f64,
    pub overflow_mass: f64,
    pub total_mass: f64,
}

/// Wire form of one event-log line; key order is fixed by declaration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EventLine {
    tick: u64,
    parent: u64,
    child: u64,
}

// ---------------------------------------------------------------------------
// Low-level file plumbing
// ---------------------------------------------------------------------------

/// Buffered writer that tags every error with its path.
struct FileSink {
    path: PathBuf,
    writer: BufWriter<fs::File>,
}

impl FileSink {
    fn create(path: PathBuf) -> Result<Self, ExportError> {
        let file = fs::File::create(&path).map_err(|source| ExportError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(FileSink {
            writer: BufWriter::new(file),
            path,
        })
    }

    fn write(&mut self, text: &str) -> Result<(), ExportError> {
        self.writer
            .write_all(text.as_bytes())
            .map_err(|source| ExportError::Io {
                path: self.path.clone(),
                source,
            })
    }

    fn finish(mut self) -> Result<PathBuf, ExportError> {
        self.writer.flush().map_err(|source| ExportError::Io {
            path: self.path.clone(),
            source,
        })?;
        Ok(self.path)
    }
}

fn read_file(path: &Path) -> Result<String, ExportError> {
    if !path.is_file() {
        return Err(ExportError::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn malformed(path: &Path, line: usize, detail: impl Into<String>) -> ExportError {
    ExportError::Malformed {
        path: path.to_path_buf(),
        line,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------------------
// Run serialization
// ---------------------------------------------------------------------------

/// Write a complete run into `directory` and return its manifest.
///
/// Emits `edges.csv`, `events.jsonl`, `births_per_tick.csv`,
/// `degree_by_label.csv`, and `manifest.json`. The manifest's digest covers
/// the exact bytes of `events.jsonl`.
pub fn write_run(result: &SimResult, directory: &Path) -> Result<RunManifest, ExportError> {
    fs::create_dir_all(directory).map_err(|source| ExportError::Io {
        path: directory.to_path_buf(),
        source,
    })?;

    let mut edges = FileSink::create(directory.join(EDGES_FILE))?;
    edges.write("child_id,parent_id,birth_tick\n")?;
    for node in result.nodes.iter().skip(1) {
        let parent = node.parent_id.expect("every node but node 1 has a parent");
        edges.write(&format!("{},{},{}\n", node.id, parent, node.birth_tick))?;
    }
    edges.finish()?;

    let mut events = FileSink::create(directory.join(EVENTS_FILE))?;
    let mut hasher = Fnv1a64::new();
    for ev in &result.events {
        let line = format!(
            "{{\"tick\":{},\"parent\":{},\"child\":{}}}\n",
            ev.tick, ev.parent_id, ev.child_id
        );
        hasher.update(line.as_bytes());
        events.write(&line)?;
    }
    events.finish()?;
    let digest_value = hasher.finish();

    let mut births = FileSink::create(directory.join(BIRTHS_FILE))?;
    births.write("tick,births\n")?;
    for &(tick, count) in &result.births_per_tick {
        births.write(&format!("{tick},{count}\n"))?;
    }
    births.finish()?;

    let mut degrees = FileSink::create(directory.join(DEGREES_FILE))?;
    degrees.write("id,degree\n")?;
    for node in &result.nodes {
        degrees.write(&format!("{},{}\n", node.id, node.degree))?;
    }
    degrees.finish()?;

    let manifest = RunManifest {
        artifact_version: ARTIFACT_VERSION.to_string(),
        config: result.config.clone(),
        final_tick: result.final_tick,
        node_count: result.node_count(),
        event_count: result.events.len() as u64,
        digest: format!("{digest_value:016x}"),
    };
    let mut manifest_sink = FileSink::create(directory.join(MANIFEST_FILE))?;
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    manifest_sink.write(&json)?;
    manifest_sink.write("\n")?;
    manifest_sink.finish()?;

    Ok(manifest)
}

/// Read and parse `manifest.json` from a run directory.
pub fn read_manifest(directory: &Path) -> Result<RunManifest, ExportError> {
    let path = directory.join(MANIFEST_FILE);
    let text = read_file(&path)?;
    serde_json::from_str(&text).map_err(|e| malformed(&path, e.line(), e.to_string()))
}

/// [`read_run_with_warnings`] with the warnings discarded.
pub fn read_run(directory: &Path) -> Result<SimResult, ExportError> {
    read_run_with_warnings(directory).map(|(result, _)| result)
}

/// Reconstruct a full `SimResult` from a run directory.
///
/// The event log's digest is verified against the manifest before anything
/// is parsed; node records (degrees and next spawn ticks) are rebuilt from
/// the events under the manifest's rounding rule and cross-checked against
/// `degree_by_label.csv`. A missing `births_per_tick.csv` is reconstructed
/// from the events and reported as a warning rather than an error.
pub fn read_run_with_warnings(directory: &Path) -> Result<(SimResult, Vec<String>), ExportError> {
    let manifest_path = directory.join(MANIFEST_FILE);
    let manifest = read_manifest(directory)?;
    let expected_digest = u64::from_str_radix(&manifest.digest, 16).map_err(|_| {
        malformed(
            &manifest_path,
            1,
            format!("digest {:?} is not 64-bit hex", manifest.digest),
        )
    })?;

    let events_path = directory.join(EVENTS_FILE);
    let raw_events = read_file(&events_path)?;
    let actual_digest = fnv1a64(raw_events.as_bytes());
    if actual_digest != expected_digest {
        return Err(ExportError::DigestMismatch {
            expected: expected_digest,
            actual: actual_digest,
        });
    }

    let mut lines: Vec<EventLine> = Vec::new();
    for (i, line) in raw_events.lines().enumerate() {
        let parsed: EventLine = serde_json::from_str(line)
            .map_err(|e| malformed(&events_path, i + 1, e.to_string()))?;
        lines.push(parsed);
    }
    if lines.len() as u64 != manifest.event_count {
        return Err(ExportError::CrossCheck(format!(
            "event log has {} records, manifest says {}",
            lines.len(),
            manifest.event_count
        )));
    }

    let (nodes, events) = rebuild_from_events(&manifest, &lines, &events_path)?;
    if nodes.len() as u64 != manifest.node_count {
        return Err(ExportError::CrossCheck(format!(
            "events imply {} nodes, manifest says {}",
            nodes.len(),
            manifest.node_count
        )));
    }

    check_degree_table(&directory.join(DEGREES_FILE), &nodes)?;

    let mut warnings = Vec::new();
    let births_path = directory.join(BIRTHS_FILE);
    let births_per_tick = if births_path.is_file() {
        parse_births(&births_path, &manifest)?
    } else {
        warnings.push(format!(
            "{BIRTHS_FILE} missing; reconstructed the births series from the event log"
        ));
        derive_births(&events, manifest.final_tick)
    };

    let result = SimResult {
        config: manifest.config.clone(),
        final_tick: manifest.final_tick,
        nodes,
        events,
        births_per_tick,
    };
    let tree = verify_tree(&result);
    if let Some(violation) = tree.first_violation() {
        return Err(ExportError::CrossCheck(violation.to_string()));
    }
    Ok((result, warnings))
}

/// Replay parsed event lines into node records, exactly mirroring the
/// engine's state updates so a round trip reproduces the original result.
fn rebuild_from_events(
    manifest: &RunManifest,
    lines: &[EventLine],
    events_path: &Path,
) -> Result<(Vec<NodeRecord>, Vec<SpawnEvent>), ExportError> {
    let rule = manifest.config.rounding_rule;
    let mut nodes = vec![
        NodeRecord {
            id: 1,
            parent_id: None,
            birth_tick: 1,
            degree: 1,
            next_spawn_tick: 3,
        },
        NodeRecord {
            id: 2,
            parent_id: Some(1),
            birth_tick: 2,
            degree: 1,
            next_spawn_tick: 4,
        },
    ];
    let mut events = Vec::with_capacity(lines.len());
    for (i, line) in lines.iter().enumerate() {
        let line_no = i + 1;
        let expected_child = 3 + i as u64;
        if line.child != expected_child {
            return Err(malformed(
                events_path,
                line_no,
                format!(
                    "child ids must be contiguous from 3: found {}, expected {}",
                    line.child, expected_child
                ),
            ));
        }
        if line.parent == 0 || line.parent >= line.child {
            return Err(malformed(
                events_path,
                line_no,
                format!("parent {} must precede child {}", line.parent, line.child),
            ));
        }
        if line.tick < 3 {
            return Err(malformed(
                events_path,
                line_no,
                format!("event ticks start at 3, found {}", line.tick),
            ));
        }
        let child_id = u32::try_from(line.child)
            .map_err(|_| malformed(events_path, line_no, "node label overflows u32"))?;
        let parent_id = line.parent as u32; // parent < child, so this fits
        let parent_idx = (parent_id - 1) as usize;
        let q_prior = nodes[parent_idx].degree;
        nodes[parent_idx].degree = q_prior + 1;
        nodes[parent_idx].next_spawn_tick = line.tick + spawn_interval(line.tick, q_prior, rule)?;
        nodes.push(NodeRecord {
            id: child_id,
            parent_id: Some(parent_id),
            birth_tick: line.tick,
            degree: 1,
            next_spawn_tick: child_first_spawn(line.tick),
        });
        events.push(SpawnEvent {
            tick: line.tick,
            parent_id,
            child_id,
            parent_degree_after: q_prior + 1,
        });
    }
    Ok((nodes, events))
}

/// Validate `degree_by_label.csv` against the degrees implied by the events.
fn check_degree_table(path: &Path, nodes: &[NodeRecord]) -> Result<(), ExportError> {
    let text = read_file(path)?;
    let mut rows = text.lines().enumerate();
    match rows.next() {
        Some((_, "id,degree")) => {}
        _ => return Err(malformed(path, 1, "expected header \"id,degree\"")),
    }
    let mut count = 0usize;
    for (i, row) in rows {
        let (id_text, degree_text) = row
            .split_once(',')
            .ok_or_else(|| malformed(path, i + 1, "expected two comma-separated fields"))?;
        let id: u32 = id_text
            .parse()
            .map_err(|_| malformed(path, i + 1, format!("bad id {id_text:?}")))?;
        let degree: u32 = degree_text
            .parse()
            .map_err(|_| malformed(path, i + 1, format!("bad degree {degree_text:?}")))?;
        if count >= nodes.len() {
            return Err(ExportError::CrossCheck(format!(
                "degree table has more rows than the {} known nodes",
                nodes.len()
            )));
        }
        let node = &nodes[count];
        if node.id != id {
            return Err(ExportError::CrossCheck(format!(
                "degree table row {} is for node {}, expected node {}",
                i + 1,
                id,
                node.id
            )));
        }
        if node.degree != degree {
            return Err(ExportError::CrossCheck(format!(
                "node {}: events imply degree {}, degree table records {}",
                id, node.degree, degree
            )));
        }
        count += 1;
    }
    if count != nodes.len() {
        return Err(ExportError::CrossCheck(format!(
            "degree table has {} rows, expected {}",
            count,
            nodes.len()
        )));
    }
    Ok(())
}

/// Parse `births_per_tick.csv` and check it is dense over 3..=final_tick
/// with a total matching the event count.
fn parse_births(path: &Path, manifest: &RunManifest) -> Result<Vec<(u64, u32)>, ExportError> {
    let text = read_file(path)?;
    let mut rows = text.lines().enumerate();
    match rows.next() {
        Some((_, "tick,births")) => {}
        _ => return Err(malformed(path, 1, "expected header \"tick,births\"")),
    }
    let mut out = Vec::new();
    for (i, row) in rows {
        let (tick_text, births_text) = row
            .split_once(',')
            .ok_or_else(|| malformed(path, i + 1, "expected two comma-separated fields"))?;
        let tick: u64 = tick_text
            .parse()
            .map_err(|_| malformed(path, i + 1, format!("bad tick {tick_text:?}")))?;
        let births: u32 = births_text
            .parse()
            .map_err(|_| malformed(path, i + 1, format!("bad count {births_text:?}")))?;
        out.push((tick, births));
    }
    let expected_len = manifest.final_tick.saturating_sub(2);
    if out.len() as u64 != expected_len {
        return Err(ExportError::CrossCheck(format!(
            "births series has {} rows, expected {} for final tick {}",
            out.len(),
            expected_len,
            manifest.final_tick
        )));
    }
    for (j, &(tick, _)) in out.iter().enumerate() {
        if tick != 3 + j as u64 {
            return Err(ExportError::CrossCheck(format!(
                "births series is not dense: row {} has tick {}, expected {}",
                j + 1,
                tick,
                3 + j as u64
            )));
        }
    }
    let total: u64 = out.iter().map(|&(_, c)| u64::from(c)).sum();
    if total != manifest.event_count {
        return Err(ExportError::CrossCheck(format!(
            "births series sums to {}, but the run has {} events",
            total, manifest.event_count
        )));
    }
    Ok(out)
}

/// Dense births series derived from the event log.
fn derive_births(events: &[SpawnEvent], final_tick: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if final_tick >= 3 {
        out.reserve((final_tick - 2) as usize);
        let mut it = events.iter().peekable();
        for tick in 3..=final_tick {
            let mut count = 0u32;
            while let Some(ev) = it.peek() {
                if ev.tick != tick {
                    break;
                }
                count += 1;
                it.next();
            }
            out.push((tick, count));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

/// Write the first `node_limit` nodes as an undirected DOT graph
/// (`network.dot`). Layout is left to external tools. Returns the path and,
/// when the limit exceeded the run size and was clamped, a warning.
pub fn write_dot(
    result: &SimResult,
    directory: &Path,
    node_limit: u64,
) -> Result<(PathBuf, Option<String>), ExportError> {
    if node_limit < 2 {
        return Err(ExportError::NodeLimitTooSmall(node_limit));
    }
    fs::create_dir_all(directory).map_err(|source| ExportError::Io {
        path: directory.to_path_buf(),
        source,
    })?;
    let available = result.node_count();
    let limit = node_limit.min(available);
    let warning = (node_limit > available)
        .then(|| format!("node limit {node_limit} exceeds the run's {available} nodes; clamped"));

    let mut sink = FileSink::create(directory.join(DOT_FILE))?;
    sink.write("graph spawned_network {\n")?;
    for node in result.nodes.iter().take(limit as usize) {
        sink.write(&format!("  {};\n", node.id))?;
    }
    for node in result.nodes.iter().take(limit as usize).skip(1) {
        let parent = node.parent_id.expect("every node but node 1 has a parent");
        sink.write(&format!("  {} -- {};\n", parent, node.id))?;
    }
    sink.write("}\n")?;
    let path = sink.finish()?;
    Ok((path, warning))
}

// ---------------------------------------------------------------------------
// Theory and analysis tables
// ---------------------------------------------------------------------------

/// Write the three-way degree probability table as `theory.csv`.
pub fn write_theory_table(
    table: &DegreeProbabilityTable,
    directory: &Path,
) -> Result<PathBuf, ExportError> {
    fs::create_dir_all(directory).map_err(|source| ExportError::Io {
        path: directory.to_path_buf(),
        source,
    })?;
    let mut sink = FileSink::create(directory.join(THEORY_FILE))?;
    sink.write("q,p_recursive,p_closed,p_asymptotic\n")?;
    for row in &table.rows {
        sink.write(&format!(
            "{},{},{},{}\n",
            row.q, row.p_recursive, row.p_closed, row.p_asymptotic
        ))?;
    }
    sink.finish()
}

/// Write master-equation evolution checkpoints as `evolve_trace.csv`.
pub fn write_master_trace(
    rows: &[MasterTraceRow],
    directory: &Path,
) -> Result<PathBuf, ExportError> {
    let mut sink = FileSink::create(directory.join(MASTER_TRACE_FILE))?;
    sink.write("n,p1,overflow_mass,total_mass\n")?;
    for row in rows {
        sink.write(&format!(
            "{},{},{},{}\n",
            row.n, row.p1, row.overflow_mass, row.total_mass
        ))?;
    }
    sink.finish()
}

/// Write the analysis report as a single pretty-printed `report.json`.
pub fn write_report(report: &AnalysisReport, directory: &Path) -> Result<PathBuf, ExportError> {
    fs::create_dir_all(directory).map_err(|source| ExportError::Io {
        path: directory.to_path_buf(),
        source,
    })?;
    let mut sink = FileSink::create(directory.join(REPORT_FILE))?;
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    sink.write(&json)?;
    sink.write("\n")?;
    sink.finish()
}

/// Write the report's plot-ready companions: survival curve, degree
/// fractions, deviate histogram, and (when present) the x_min scan curve.
/// Returns the paths written.
pub fn write_analysis_csvs(
    report: &AnalysisReport,
    directory: &Path,
) -> Result<Vec<PathBuf>, ExportError> {
    let mut written = Vec::new();

    let mut survival = FileSink::create(directory.join(SURVIVAL_FILE))?;
    survival.write("degree,survival\n")?;
    for &(q, s) in &report.survival_points {
        survival.write(&format!("{q},{s}\n"))?;
    }
    written.push(survival.finish()?);

    let mut fractions = FileSink::create(directory.join(FRACTIONS_FILE))?;
    fractions.write("degree,fraction\n")?;
    for &(q, f) in &report.degree_fractions {
        fractions.write(&format!("{q},{f}\n"))?;
    }
    written.push(fractions.finish()?);

    let mut histogram = FileSink::create(directory.join(HISTOGRAM_FILE))?;
    histogram.write("value,count\n")?;
    for &(v, c) in &report.deviates_histogram {
        histogram.write(&format!("{v},{c}\n"))?;
    }
    written.push(histogram.finish()?);

    if let Some(fit) = &report.power_law {
        let mut scan = FileSink::create(directory.join(SCAN_FILE))?;
        scan.write("x_min,alpha,ks_distance,tail_count\n")?;
        for point in &fit.scan_curve {
            scan.write(&format!(
                "{},{},{},{}\n",
                point.x_min, point.alpha, point.ks_distance, point.tail_count
            ))?;
        }
        written.push(scan.finish()?);
    }

    Ok(written)
}

/// Write the Zipf survival overlay as `zipf_overlay.csv`.
pub fn write_zipf_overlay(
    rows: &[(u64, f64, f64)],
    directory: &Path,
) -> Result<PathBuf, ExportError> {
    let mut sink = FileSink::create(directory.join(OVERLAY_FILE))?;
    sink.write("degree,empirical_survival,zipf_survival\n")?;
    for &(q, emp, fit) in rows {
        sink.write(&format!("{q},{emp},{fit}\n"))?;
    }
    sink.finish()
}

/// Write the empirical-vs-theory comparison as `compare.csv`.
pub fn write_compare_table(rows: &[CompareRow], directory: &Path) -> Result<PathBuf, ExportError> {
    let mut sink = FileSink::create(directory.join(COMPARE_FILE))?;
    sink.write("q,empirical_fraction,p_recursive,p_asymptotic,zipf_pmf\n")?;
    for row in rows {
        sink.write(&format!(
            "{},{},{},{},{}\n",
            row.q, row.empirical, row.p_recursive, row.p_asymptotic, row.zipf_pmf
        ))?;
    }
    sink.finish()
}
