//! Vector similarity between simulated and ground-truth change vectors.
//!
//! Degenerate inputs (zero norm for cosine, constant vectors for the
//! correlations) yield 0 plus a flag instead of an error — sparse early
//! snapshots legitimately produce all-zero change vectors.

use crate::error::{Error, Result};
use crate::metrics::ValidationVector;

/// Which measures hit a degenerate input on a given row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DegeneracyFlags {
    pub cosine: bool,
    pub pearson: bool,
    pub spearman: bool,
}

impl DegeneracyFlags {
    pub fn any(self) -> bool {
        self.cosine || self.pearson || self.spearman
    }

    /// Compact CSV form: `-` when clean, else pipe-joined measure names.
    pub fn encode(self) -> String {
        let mut parts = Vec::new();
        if self.cosine {
            parts.push("cosine");
        }
        if self.pearson {
            parts.push("pearson");
        }
        if self.spearman {
            parts.push("spearman");
        }
        if parts.is_empty() {
            "-".to_string()
        } else {
            parts.join("|")
        }
    }
}

fn check_len(u: &[f64], v: &[f64], min: usize) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.len() < min {
        return Err(Error::InvalidParameter(format!(
            "need at least {min} entries, got {}",
            u.len()
        )));
    }
    Ok(())
}

fn cosine_impl(u: &[f64], v: &[f64]) -> (f64, bool) {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        (0.0, true)
    } else {
        ((dot / (nu * nv)).clamp(-1.0, 1.0), false)
    }
}

fn pearson_impl(u: &[f64], v: &[f64]) -> (f64, bool) {
    let n = u.len() as f64;
    let mu: f64 = u.iter().sum::<f64>() / n;
    let mv: f64 = v.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        let (da, db) = (a - mu, b - mv);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        (0.0, true)
    } else {
        ((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0), false)
    }
}

/// 1-based ranks; tied values share the mean of their rank block.
pub(crate) fn avg_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(u, v, 1)?;
    Ok(cosine_impl(u, v).0)
}

pub fn pearson(u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(u, v, 2)?;
    Ok(pearson_impl(u, v).0)
}

pub fn spearman(u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(u, v, 2)?;
    Ok(pearson_impl(&avg_ranks(u), &avg_ranks(v)).0)
}

pub fn euclidean(u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(u, v, 0)?;
    Ok(u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// All four measures for one vector pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub cosine: f64,
    pub pearson: f64,
    pub spearman: f64,
    pub euclidean: f64,
    pub flags: DegeneracyFlags,
}

pub fn measure(u: &[f64], v: &[f64]) -> Result<Similarity> {
    check_len(u, v, 2)?;
    let (cos, cos_d) = cosine_impl(u, v);
    let (pea, pea_d) = pearson_impl(u, v);
    let (spe, spe_d) = pearson_impl(&avg_ranks(u), &avg_ranks(v));
    Ok(Similarity {
        cosine: cos,
        pearson: pea,
        spearman: spe,
        euclidean: euclidean(u, v)?,
        flags: DegeneracyFlags {
            cosine: cos_d,
            pearson: pea_d,
            spearman: spe_d,
        },
    })
}

/// One row per snapshot, T_0 first.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub rows: Vec<(usize, Similarity)>,
}

/// Compares every snapshot's validation vector against the ground truth.
pub fn compare_run(
    run_vectors: &[ValidationVector],
    truth: &ValidationVector,
) -> Result<SimilarityReport> {
    let rows = run_vectors
        .iter()
        .enumerate()
        .map(|(k, v)| Ok((k, measure(v, truth)?)))
        .collect::<Result<_>>()?;
    Ok(SimilarityReport { rows })
}
