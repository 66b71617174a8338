//! Prediction quality of final simulated states against ground truth.
//!
//! The aggressive label is the positive class throughout. AUC is the
//! rank-sum (Mann–Whitney) statistic over the continuous scores, so it
//! needs no threshold; precision/recall are reported per threshold.

use crate::error::{Error, Result};
use crate::similarity::avg_ranks;
use crate::state::Label;

/// Rank-based AUC with average ranks for tied scores.
///
/// `scores` and `labels` are aligned slices over the same nodes.
pub fn auc(scores: &[f64], labels: &[Label]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&l| l == Label::Aggressive).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let ranks = avg_ranks(scores);
    let rank_sum_pos: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l == Label::Aggressive)
        .map(|(r, _)| r)
        .sum();
    let np = n_pos as f64;
    Ok((rank_sum_pos - np * (np + 1.0) / 2.0) / (np * n_neg as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrRow {
    pub precision: f64,
    pub recall: f64,
    pub counts: Confusion,
    /// Set when no node was predicted positive (precision forced to 0).
    pub precision_degenerate: bool,
}

/// Precision/recall of the aggressive class for one binarized prediction.
pub fn precision_recall(pred: &[Label], truth: &[Label]) -> Result<PrRow> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    let mut c = Confusion::default();
    for (&p, &t) in pred.iter().zip(truth) {
        match (p == Label::Aggressive, t == Label::Aggressive) {
            (true, true) => c.true_pos += 1,
            (true, false) => c.false_pos += 1,
            (false, false) => c.true_neg += 1,
            (false, true) => c.false_neg += 1,
        }
    }
    let predicted_pos = c.true_pos + c.false_pos;
    let actual_pos = c.true_pos + c.false_neg;
    Ok(PrRow {
        precision: if predicted_pos > 0 {
            c.true_pos as f64 / predicted_pos as f64
        } else {
            0.0
        },
        recall: if actual_pos > 0 {
            c.true_pos as f64 / actual_pos as f64
        } else {
            0.0
        },
        counts: c,
        precision_degenerate: predicted_pos == 0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionReport {
    pub auc: f64,
    /// (t_a, row) per requested threshold, in input order.
    pub rows: Vec<(f64, PrRow)>,
}

/// AUC once plus a precision/recall row per threshold.
pub fn prediction_report(
    scores: &[f64],
    truth: &[Label],
    thresholds: &[f64],
) -> Result<PredictionReport> {
    if thresholds.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one aggression threshold".into(),
        ));
    }
    let auc = auc(scores, truth)?;
    let mut rows = Vec::with_capacity(thresholds.len());
    for &t_a in thresholds {
        if !(t_a > 0.0 && t_a < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "aggression threshold must be in (0, 1), got {t_a}"
            )));
        }
        let pred: Vec<Label> = scores
            .iter()
            .map(|&s| {
                if s >= t_a {
                    Label::Aggressive
                } else {
                    Label::Normal
                }
            })
            .collect();
        rows.push((t_a, precision_recall(&pred, truth)?));
    }
    Ok(PredictionReport { auc, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Label = Label::Aggressive;
    const N: Label = Label::Normal;

    fn approx(x: f64, want: f64) {
        assert!((x - want).abs() < 1e-12, "{x} vs {want}");
    }

    #[test]
    fn auc_perfect_separation() {
        let scores = [0.9, 0.8, 0.2, 0.1];
        let labels = [A, A, N, N];
        approx(auc(&scores, &labels).unwrap(), 1.0);
        let flipped = [N, N, A, A];
        approx(auc(&scores, &flipped).unwrap(), 0.0);
    }

    #[test]
    fn auc_full_tie_is_half() {
        let scores = [0.4; 6];
        let labels = [A, N, A, N, N, N];
        approx(auc(&scores, &labels).unwrap(), 0.5);
    }

    #[test]
    fn auc_hand_counted() {
        // pairs: (0.9,0.6)+, (0.9,0.1)+, (0.4,0.6)−, (0.4,0.1)+ → 3/4
        let scores = [0.9, 0.4, 0.6, 0.1];
        let labels = [A, A, N, N];
        approx(auc(&scores, &labels).unwrap(), 0.75);
    }

    #[test]
    fn auc_complement_symmetry() {
        let scores = [0.13, 0.77, 0.35, 0.35, 0.92, 0.01];
        let labels = [N, A, A, N, A, N];
        let flipped: Vec<f64> = scores.iter().map(|s| 1.0 - s).collect();
        let sum = auc(&scores, &labels).unwrap() + auc(&flipped, &labels).unwrap();
        approx(sum, 1.0);
    }

    #[test]
    fn auc_rejects_single_class() {
        assert!(matches!(
            auc(&[0.1, 0.9], &[N, N]),
            Err(Error::SingleClass)
        ));
        assert!(matches!(
            auc(&[0.1, 0.9], &[A, A]),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn precision_recall_identity() {
        let t = [A, N, A, N];
        let r = precision_recall(&t, &t).unwrap();
        assert_eq!(r.precision, 1.0);
        assert_eq!(r.recall, 1.0);
        assert_eq!(r.counts.true_pos, 2);
        assert_eq!(r.counts.true_neg, 2);
    }

    #[test]
    fn all_normal_prediction_is_degenerate() {
        let pred = [N, N, N];
        let truth = [A, N, A];
        let r = precision_recall(&pred, &truth).unwrap();
        assert_eq!(r.precision, 0.0);
        assert!(r.precision_degenerate);
        assert_eq!(r.recall, 0.0);
    }

    #[test]
    fn counted_confusion() {
        // tp=3 fp=1 fn=2 tn=4
        let truth = [A, A, A, A, A, N, N, N, N, N];
        let pred = [A, A, A, N, N, A, N, N, N, N];
        let r = precision_recall(&pred, &truth).unwrap();
        approx(r.precision, 0.75);
        approx(r.recall, 0.6);
        assert_eq!(
            r.counts,
            Confusion { true_pos: 3, false_pos: 1, true_neg: 4, false_neg: 2 }
        );
    }

    #[test]
    fn report_shape() {
        let scores = [0.9, 0.1, 0.8, 0.2];
        let truth = [A, N, A, N];
        let rep = prediction_report(&scores, &truth, &[0.1, 0.2]).unwrap();
        assert_eq!(rep.rows.len(), 2);
        approx(rep.auc, 1.0);
    }

    #[test]
    fn gapped_scores_make_thresholds_indistinguishable() {
        let scores = [0.0, 0.04, 0.9, 1.0];
        let truth = [N, N, A, A];
        let rep = prediction_report(&scores, &truth, &[0.05, 0.30]).unwrap();
        assert_eq!(rep.rows[0].1, rep.rows[1].1);
    }

    #[test]
    fn report_validates_inputs() {
        let scores = [0.9, 0.1];
        let truth = [A, N];
        assert!(prediction_report(&scores, &truth, &[]).is_err());
        assert!(prediction_report(&scores, &truth, &[0.0]).is_err());
        assert!(prediction_report(&scores, &[N, N], &[0.5]).is_err());
    }
}
