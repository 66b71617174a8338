//! CSV serialization for every artifact the pipeline writes or reads back.
//!
//! The formats are deliberately plain: comma-separated, one header line,
//! numbers at 6 significant digits. Readers validate headers and name the
//! offending line on parse errors so CLI messages stay actionable.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::evaluation::PredictionReport;
use crate::features::FeatureTable;
use crate::graph::{DirectedGraph, NodeId};
use crate::metrics::{MetricVector, ValidationVector, METRIC_NAMES, VALIDATION_NAMES};
use crate::similarity::SimilarityReport;

/// Formats with 6 significant digits (plain decimal, no exponent).
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn split_line(line: &str) -> Vec<&str> {
    line.split(',').map(str::trim).collect()
}

fn parse_f64(tok: &str, lineno: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::parse(lineno, format!("invalid number `{tok}`")))
}

fn parse_u64(tok: &str, lineno: usize) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| Error::parse(lineno, format!("invalid integer `{tok}`")))
}

fn parse_usize(tok: &str, lineno: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(lineno, format!("invalid index `{tok}`")))
}

/// Writes the per-snapshot score table: `snapshot_index,node_id,score`.
pub fn write_run_csv(
    mut w: impl Write,
    g: &DirectedGraph,
    snapshots: &[crate::engine::Snapshot],
) -> Result<()> {
    writeln!(w, "snapshot_index,node_id,score")?;
    for snap in snapshots {
        for (idx, id) in g.nodes().enumerate() {
            writeln!(w, "{},{},{}", snap.index, id, sig6(snap.scores[idx]))?;
        }
    }
    Ok(())
}

/// Reads a run CSV back into per-snapshot score maps.
pub fn read_run_csv(r: impl BufRead) -> Result<BTreeMap<usize, BTreeMap<NodeId, f64>>> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty run file"))?;
    let header = header?;
    if split_line(&header) != ["snapshot_index", "node_id", "score"] {
        return Err(Error::parse(1, "expected header `snapshot_index,node_id,score`"));
    }
    let mut out: BTreeMap<usize, BTreeMap<NodeId, f64>> = BTreeMap::new();
    for (lineno, line) in lines {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols = split_line(&line);
        if cols.len() != 3 {
            return Err(Error::parse(lineno, "expected 3 columns"));
        }
        let snap = parse_usize(cols[0], lineno)?;
        let node = NodeId(parse_u64(cols[1], lineno)?);
        let score = parse_f64(cols[2], lineno)?;
        out.entry(snap).or_default().insert(node, score);
    }
    if out.is_empty() {
        return Err(Error::parse(2, "run file has no data rows"));
    }
    Ok(out)
}

/// Writes one metric row per snapshot under the canonical 26-name header.
pub fn write_metric_csv(mut w: impl Write, rows: &[MetricVector]) -> Result<()> {
    writeln!(w, "{}", METRIC_NAMES.join(","))?;
    for mv in rows {
        let vals = mv.values().map(sig6);
        writeln!(w, "{}", vals.join(","))?;
    }
    Ok(())
}

pub fn read_metric_csv(r: impl BufRead) -> Result<Vec<MetricVector>> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty metric file"))?;
    let header = header?;
    if split_line(&header) != METRIC_NAMES {
        return Err(Error::parse(1, "metric header does not match the canonical names"));
    }
    let mut out = Vec::new();
    for (lineno, line) in lines {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols = split_line(&line);
        if cols.len() != 26 {
            return Err(Error::parse(lineno, format!("expected 26 columns, got {}", cols.len())));
        }
        let mut vals = [0.0; 26];
        for (k, tok) in cols.iter().enumerate() {
            vals[k] = parse_f64(tok, lineno)?;
        }
        out.push(MetricVector::from_values(&vals));
    }
    if out.is_empty() {
        return Err(Error::parse(2, "metric file has no data rows"));
    }
    Ok(out)
}

/// Writes the single-row 22-entry ground-truth vector.
pub fn write_validation_csv(mut w: impl Write, v: &ValidationVector) -> Result<()> {
    writeln!(w, "{}", VALIDATION_NAMES.join(","))?;
    let vals = v.map(sig6);
    writeln!(w, "{}", vals.join(","))?;
    Ok(())
}

pub fn read_validation_csv(r: impl BufRead) -> Result<ValidationVector> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty validation file"))?;
    let header = header?;
    if split_line(&header) != VALIDATION_NAMES {
        return Err(Error::parse(1, "validation header does not match the canonical names"));
    }
    let (_, row) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing validation row"))?;
    let row = row?;
    let cols = split_line(&row);
    if cols.len() != 22 {
        return Err(Error::parse(2, format!("expected 22 columns, got {}", cols.len())));
    }
    let mut out = [0.0; 22];
    for (k, tok) in cols.iter().enumerate() {
        out[k] = parse_f64(tok, 2)?;
    }
    Ok(out)
}

/// Writes `snapshot,cosine,pearson,spearman,euclidean,degenerate_flags`.
pub fn write_similarity_csv(mut w: impl Write, report: &SimilarityReport) -> Result<()> {
    writeln!(w, "snapshot,cosine,pearson,spearman,euclidean,degenerate_flags")?;
    for &(snapshot, s) in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            snapshot,
            sig6(s.cosine),
            sig6(s.pearson),
            sig6(s.spearman),
            sig6(s.euclidean),
            s.flags.encode()
        )?;
    }
    Ok(())
}

/// Writes the `auc,<value>` record followed by the per-threshold table.
pub fn write_prediction_csv(mut w: impl Write, report: &PredictionReport) -> Result<()> {
    writeln!(w, "auc,{}", sig6(report.auc))?;
    writeln!(w, "t_a,precision,recall,tp,fp,tn,fn")?;
    for &(t_a, row) in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            sig6(t_a),
            sig6(row.precision),
            sig6(row.recall),
            row.counts.true_pos,
            row.counts.false_pos,
            row.counts.true_neg,
            row.counts.false_neg
        )?;
    }
    Ok(())
}

/// Writes the per-node structural feature table.
pub fn write_features_csv(mut w: impl Write, table: &FeatureTable) -> Result<()> {
    writeln!(
        w,
        "node,in_degree,out_degree,degree_ratio,clustering,hub,authority,eigenvector"
    )?;
    for (id, f) in &table.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            id,
            f.in_degree,
            f.out_degree,
            sig6(f.degree_ratio),
            sig6(f.clustering),
            sig6(f.hub),
            sig6(f.authority),
            sig6(f.eigenvector)
        )?;
    }
    Ok(())
}
