//! Scoring-quality metrics: confusion matrices, rank-based AUC,
//! cost-minimizing thresholds, repeated-run averaging, centrality
//! baselines and AUC-versus-iterations sweeps.

use crate::centrality::{centrality, CentralityKind};
use crate::component::Component;
use crate::error::{Error, Result};
use crate::graph::{Network, VertexKind};
use crate::iaa::{iaa_run, AssessmentModel, IaaParams, IterationPolicy};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassLabel {
    Fraudster,
    NonFraudster,
    Unlabeled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledScore {
    pub entity: String,
    pub score: f64,
    pub label: ClassLabel,
}

pub type LabeledScores = Vec<LabeledScore>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

/// Entities scoring at or above the threshold are predicted suspicious.
/// Unlabeled entities are ignored.
pub fn confusion_at(scores: &LabeledScores, threshold: f64) -> ConfusionMatrix {
    let mut cm = ConfusionMatrix { tp: 0, fn_: 0, fp: 0, tn: 0 };
    for s in scores {
        let predicted = s.score >= threshold;
        match (s.label, predicted) {
            (ClassLabel::Fraudster, true) => cm.tp += 1,
            (ClassLabel::Fraudster, false) => cm.fn_ += 1,
            (ClassLabel::NonFraudster, true) => cm.fp += 1,
            (ClassLabel::NonFraudster, false) => cm.tn += 1,
            (ClassLabel::Unlabeled, _) => {}
        }
    }
    cm
}

/// Classification metrics; any metric with a zero denominator is None.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub recall: Option<f64>,
    pub precision: Option<f64>,
    pub specificity: Option<f64>,
    pub f1: Option<f64>,
}

pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    let recall = ratio(cm.tp, cm.tp + cm.fn_);
    let precision = ratio(cm.tp, cm.tp + cm.fp);
    let f1 = match (recall, precision) {
        (Some(r), Some(p)) if r + p > 0.0 => Some(2.0 * r * p / (r + p)),
        _ => None,
    };
    Metrics {
        accuracy: ratio(cm.tp + cm.tn, cm.tp + cm.fn_ + cm.fp + cm.tn),
        recall,
        precision,
        specificity: ratio(cm.tn, cm.tn + cm.fp),
        f1,
    }
}

/// Rank-based (Mann-Whitney) AUC: the probability that a random
/// fraudster outscores a random non-fraudster, ties counted half.
pub fn auc(scores: &LabeledScores) -> Result<f64> {
    let pos: Vec<f64> = scores
        .iter()
        .filter(|s| s.label == ClassLabel::Fraudster)
        .map(|s| s.score)
        .collect();
    let neg: Vec<f64> = scores
        .iter()
        .filter(|s| s.label == ClassLabel::NonFraudster)
        .map(|s| s.score)
        .collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::SingleClassScores);
    }
    let mut wins = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (pos.len() * neg.len()) as f64)
}

/// Threshold from the observed scores (plus a catch-all above the
/// maximum) minimizing cost_fn * fn + cost_fp * fp; ties resolved
/// toward the higher threshold.
pub fn min_cost_threshold(scores: &LabeledScores, cost_fp: f64, cost_fn: f64) -> Result<f64> {
    let labeled: Vec<&LabeledScore> = scores
        .iter()
        .filter(|s| s.label != ClassLabel::Unlabeled)
        .collect();
    let has = |l| labeled.iter().any(|s| s.label == l);
    if !has(ClassLabel::Fraudster) || !has(ClassLabel::NonFraudster) {
        return Err(Error::SingleClassScores);
    }
    let mut candidates: Vec<f64> = labeled.iter().map(|s| s.score).collect();
    let above_max = candidates.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    candidates.push(above_max);
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    let mut best = (f64::INFINITY, f64::NEG_INFINITY);
    for &t in &candidates {
        let cm = confusion_at(scores, t);
        let cost = cost_fn * cm.fn_ as f64 + cost_fp * cm.fp as f64;
        if cost < best.0 || (cost == best.0 && t > best.1) {
            best = (cost, t);
        }
    }
    Ok(best.1)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepeatedAuc {
    pub per_run: Vec<f64>,
    pub mean: f64,
}

/// Runs a scoring closure once per derived seed and averages the AUC,
/// matching the repeated-evaluation protocol used throughout.
pub fn repeated_run_auc<F>(mut run: F, repeats: usize, base_seed: u64) -> Result<RepeatedAuc>
where
    F: FnMut(u64) -> Result<LabeledScores>,
{
    assert!(repeats >= 1);
    let mut per_run = Vec::with_capacity(repeats);
    for r in 0..repeats {
        let seed = base_seed.wrapping_add(r as u64);
        per_run.push(auc(&run(seed)?)?);
    }
    let mean = per_run.iter().sum::<f64>() / per_run.len() as f64;
    Ok(RepeatedAuc { per_run, mean })
}

/// Per-participant baseline scores from a classical centrality index.
/// Closeness is negated so larger always means more suspicious, and
/// the component's collision count is applied as the cross-component
/// multiplier.
pub fn baseline_scores(
    net: &Network,
    c: &Component,
    kind: CentralityKind,
    collision_count: usize,
) -> Result<Vec<(String, f64)>> {
    let values = centrality(c, kind)?;
    let mult = collision_count.max(1) as f64;
    let sign = if kind == CentralityKind::CloCen { -1.0 } else { 1.0 };
    Ok(c.members()
        .iter()
        .filter(|&&v| net.label(v).kind == VertexKind::Participant)
        .map(|&v| (net.label(v).key.clone(), sign * values[&v] * mult))
        .collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationSweepPoint {
    pub iterations: usize,
    pub auc: f64,
    /// Marks the point chosen by the dynamic iteration policy.
    pub dynamic: bool,
}

/// AUC as a function of the fixed iteration count, plus the dynamic
/// policy as a marked point. `label_of` assigns class labels to
/// participant keys.
pub fn auc_vs_iterations(
    net: &Network,
    components: &[(Component, usize)],
    model: &AssessmentModel,
    params: &IaaParams,
    k_range: &[usize],
    avg_diameter: f64,
    label_of: &dyn Fn(&str) -> ClassLabel,
) -> Result<Vec<IterationSweepPoint>> {
    let mut series = Vec::new();
    for &k in k_range {
        let scores = scores_at(net, components, model, params, IterationPolicy::Fixed { count: k }, label_of)?;
        series.push(IterationSweepPoint { iterations: k, auc: auc(&scores)?, dynamic: false });
    }
    let scores = scores_at(
        net,
        components,
        model,
        params,
        IterationPolicy::Dynamic { avg_diameter },
        label_of,
    )?;
    series.push(IterationSweepPoint { iterations: 0, auc: auc(&scores)?, dynamic: true });
    Ok(series)
}

fn scores_at(
    net: &Network,
    components: &[(Component, usize)],
    model: &AssessmentModel,
    params: &IaaParams,
    policy: IterationPolicy,
    label_of: &dyn Fn(&str) -> ClassLabel,
) -> Result<LabeledScores> {
    let params = IaaParams { policy, ..params.clone() };
    let mut out = Vec::new();
    for (c, collisions) in components {
        let mut run = iaa_run(net, c, model, &params)?;
        crate::iaa::normalize_across_components(&mut run.scores, (*collisions).max(1));
        for s in run.scores.values() {
            out.push(LabeledScore {
                entity: s.entity.clone(),
                score: s.normalized,
                label: label_of(&s.entity),
            });
        }
    }
    Ok(out)
}
