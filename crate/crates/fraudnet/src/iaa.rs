//! Iterative assessment of suspicion: starting from a unit score on
//! every vertex, repeatedly blend each vertex's score with an
//! assessment of its neighborhood, renormalizing non-bucket entities
//! so the population mean stays at 1.

use crate::attrs::{AttrMap, Condition};
use crate::component::Component;
use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, Network, VertexId, VertexKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One expert-defined intrinsic factor: if every condition holds on an
/// entity of an applicable kind, the factor's virtual value is applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicFactor {
    pub name: String,
    /// Conjunction of attribute conditions.
    pub conditions: Vec<Condition>,
    pub applies_to: Vec<VertexKind>,
    /// Virtual value in (-1, 1); positive raises suspicion.
    pub virtual_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorConfig {
    pub intrinsic: Vec<IntrinsicFactor>,
    /// Virtual values per edge label; missing labels are neutral.
    pub relational: BTreeMap<EdgeLabel, f64>,
}

impl FactorConfig {
    pub fn validate(&self) -> Result<()> {
        for f in &self.intrinsic {
            if f.virtual_value.abs() >= 1.0 {
                return Err(Error::BadVirtualFactor(f.virtual_value));
            }
        }
        for (_, &f) in &self.relational {
            if f.abs() >= 1.0 {
                return Err(Error::BadVirtualFactor(f));
            }
        }
        Ok(())
    }

    /// Stand-in expert configuration; values are development defaults,
    /// overridable from the pipeline config file.
    pub fn default_expert() -> Self {
        use crate::attrs::{AttrValue, Comparator};
        let cond = |attribute: &str, comparator, value| Condition {
            attribute: attribute.into(),
            comparator,
            value,
        };
        FactorConfig {
            intrinsic: vec![
                IntrinsicFactor {
                    name: "night_non_urban".into(),
                    conditions: vec![
                        cond("night", Comparator::Eq, AttrValue::Bool(true)),
                        cond("urban", Comparator::Eq, AttrValue::Bool(false)),
                    ],
                    applies_to: vec![VertexKind::Collision],
                    virtual_value: 0.4,
                },
                IntrinsicFactor {
                    name: "young_male".into(),
                    conditions: vec![
                        cond("age", Comparator::Lt, AttrValue::Int(30)),
                        cond("sex", Comparator::Eq, AttrValue::Text("male".into())),
                    ],
                    applies_to: vec![VertexKind::Participant],
                    virtual_value: 0.2,
                },
                IntrinsicFactor {
                    name: "severe_injury_low_claim".into(),
                    conditions: vec![
                        cond("injury_severity", Comparator::Ge, AttrValue::Int(2)),
                        cond("claimed_amount", Comparator::Lt, AttrValue::Float(2000.0)),
                    ],
                    applies_to: vec![VertexKind::Participant],
                    virtual_value: 0.4,
                },
                IntrinsicFactor {
                    name: "child_passenger".into(),
                    conditions: vec![cond(
                        "min_passenger_age",
                        Comparator::Lt,
                        AttrValue::Int(14),
                    )],
                    applies_to: vec![VertexKind::Collision],
                    virtual_value: -0.6,
                },
            ],
            relational: BTreeMap::from([
                (EdgeLabel::Driver, 0.3),
                (EdgeLabel::Passenger, 0.0),
                (EdgeLabel::VehicleLink, 0.2),
            ]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum AssessmentModel {
    Raw,
    Basic(FactorConfig),
    RawMean,
    BasicMean(FactorConfig),
}

impl AssessmentModel {
    fn factors(&self) -> Option<&FactorConfig> {
        match self {
            AssessmentModel::Basic(f) | AssessmentModel::BasicMean(f) => Some(f),
            _ => None,
        }
    }

    fn mean_smoothed(&self) -> bool {
        matches!(self, AssessmentModel::RawMean | AssessmentModel::BasicMean(_))
    }
}

/// Maps a virtual value into a multiplicative factor: nonnegative f
/// amplifies by 1/(1-f), negative f damps by 1+f, so f and -f are
/// exact reciprocals.
pub fn factor_transform(f: f64) -> Result<f64> {
    if f.abs() >= 1.0 || !f.is_finite() {
        return Err(Error::BadVirtualFactor(f));
    }
    Ok(if f >= 0.0 { 1.0 / (1.0 - f) } else { 1.0 + f })
}

/// Product of transformed virtual values over every intrinsic factor
/// whose conditions all hold; the empty product is 1.
pub fn intrinsic_factor(kind: VertexKind, attrs: &AttrMap, cfg: &FactorConfig) -> Result<f64> {
    let mut product = 1.0;
    for f in &cfg.intrinsic {
        if !f.applies_to.contains(&kind) {
            continue;
        }
        if f.conditions.iter().all(|c| c.holds(attrs)) {
            product *= factor_transform(f.virtual_value)?;
        }
    }
    Ok(product)
}

/// Whole-network statistics feeding the mean-smoothed models.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NetStats {
    pub avg_degree: f64,
}

impl NetStats {
    pub fn of(net: &Network) -> Self {
        let n = net.vertex_count();
        NetStats {
            avg_degree: if n == 0 {
                0.0
            } else {
                2.0 * net.edge_count() as f64 / n as f64
            },
        }
    }
}

/// Assessment of one vertex from the scores at the far ends of its
/// incident edges. Isolated vertices contribute 0.
pub fn assess(
    kind: VertexKind,
    attrs: &AttrMap,
    incident: &[(EdgeLabel, f64)],
    model: &AssessmentModel,
    stats: &NetStats,
) -> Result<f64> {
    if incident.is_empty() {
        return Ok(0.0);
    }
    let base = match model.factors() {
        None => incident.iter().map(|(_, s)| s).sum::<f64>(),
        Some(cfg) => {
            let mut sum = 0.0;
            for &(label, s) in incident {
                let f = cfg.relational.get(&label).copied().unwrap_or(0.0);
                sum += factor_transform(f)? * s;
            }
            intrinsic_factor(kind, attrs, cfg)? * sum
        }
    };
    Ok(if model.mean_smoothed() {
        base * (1.0 + stats.avg_degree / incident.len() as f64) / 2.0
    } else {
        base
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum IterationPolicy {
    Fixed { count: usize },
    /// Iterations follow component size: max of the component diameter
    /// and the ceiling of the population-average diameter.
    Dynamic { avg_diameter: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide non-bucket scores by their mean (default).
    Mean,
    /// Divide by the maximal non-bucket score.
    Max,
    /// Divide by the L2 norm of non-bucket scores.
    L2,
    /// No rescaling; only used by linearity tests.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IaaParams {
    /// Smoothing weight on the previous iterate.
    pub alpha: f64,
    pub policy: IterationPolicy,
    /// Vertex kinds treated as buckets: updated but never renormalized.
    pub bucket_kinds: Vec<VertexKind>,
    pub normalization: Normalization,
    pub keep_trace: bool,
}

impl Default for IaaParams {
    fn default() -> Self {
        IaaParams {
            alpha: 0.75,
            policy: IterationPolicy::Fixed { count: 4 },
            bucket_kinds: vec![VertexKind::Collision],
            normalization: Normalization::Mean,
            keep_trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspicionScore {
    pub entity: String,
    pub score: f64,
    /// Score after the cross-component collision-count multiplier; set
    /// by `normalize_across_components`, initially equal to `score`.
    pub normalized: f64,
    /// True for vertices left stranded by community splitting; their
    /// score stays at the initial 1.
    pub isolated: bool,
    pub trace: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IaaOutcome {
    /// Final scores for non-bucket entities.
    pub scores: BTreeMap<VertexId, SuspicionScore>,
    /// Final unnormalized bucket scores.
    pub bucket_scores: BTreeMap<VertexId, f64>,
    pub iterations: usize,
}

pub fn dynamic_iterations(avg_diameter: f64, component_diameter: u32) -> usize {
    (component_diameter as usize).max(avg_diameter.ceil() as usize).max(1)
}

/// Runs the iterative assessment over one component of `net`. Updates
/// are synchronous: every vertex is assessed against the previous
/// iteration's scores, then non-bucket scores are renormalized.
pub fn iaa_run(
    net: &Network,
    c: &Component,
    model: &AssessmentModel,
    params: &IaaParams,
) -> Result<IaaOutcome> {
    if c.vertex_count() == 0 {
        return Err(Error::EmptyComponent);
    }
    if let Some(cfg) = model.factors() {
        cfg.validate()?;
    }
    assert!((0.0..1.0).contains(&params.alpha), "alpha must be in [0,1)");
    let stats = NetStats::of(net);
    let n = c.vertex_count();
    let members = c.members();
    let adj = c.adjacency();
    let is_bucket: Vec<bool> = members
        .iter()
        .map(|&v| params.bucket_kinds.contains(&net.label(v).kind))
        .collect();
    let labels: Vec<EdgeLabel> = c.edges().iter().map(|e| e.label).collect();
    let iterations = match params.policy {
        IterationPolicy::Fixed { count } => count,
        IterationPolicy::Dynamic { avg_diameter } => {
            dynamic_iterations(avg_diameter, c.largest_connected_piece().diameter()?)
        }
    };

    let mut s = vec![1.0f64; n];
    let mut traces: Vec<Vec<f64>> = if params.keep_trace {
        vec![vec![1.0]; n]
    } else {
        Vec::new()
    };
    let mut incident = vec![0usize; n];
    for i in 0..n {
        incident[i] = adj[i].len();
    }

    for _ in 0..iterations {
        let mut next = vec![0.0f64; n];
        for i in 0..n {
            if incident[i] == 0 {
                next[i] = s[i]; // isolated vertices keep their score
                continue;
            }
            let neigh: Vec<(EdgeLabel, f64)> = adj[i]
                .iter()
                .map(|&(j, e)| (labels[e], s[j]))
                .collect();
            let am = assess(
                net.label(members[i]).kind,
                net.attrs(members[i]),
                &neigh,
                model,
                &stats,
            )?;
            next[i] = params.alpha * s[i] + (1.0 - params.alpha) * am;
        }
        // Renormalize non-bucket, non-isolated scores.
        let pool: Vec<usize> = (0..n)
            .filter(|&i| !is_bucket[i] && incident[i] > 0)
            .collect();
        if !pool.is_empty() {
            let divisor = match params.normalization {
                Normalization::Mean => {
                    pool.iter().map(|&i| next[i]).sum::<f64>() / pool.len() as f64
                }
                Normalization::Max => pool.iter().map(|&i| next[i]).fold(0.0, f64::max),
                Normalization::L2 => {
                    pool.iter().map(|&i| next[i] * next[i]).sum::<f64>().sqrt()
                }
                Normalization::None => 1.0,
            };
            if divisor > 0.0 {
                for &i in &pool {
                    next[i] /= divisor;
                }
            }
        }
        s = next;
        if params.keep_trace {
            for i in 0..n {
                traces[i].push(s[i]);
            }
        }
    }

    let mut scores = BTreeMap::new();
    let mut bucket_scores = BTreeMap::new();
    for i in 0..n {
        let v = members[i];
        if is_bucket[i] {
            bucket_scores.insert(v, s[i]);
        } else {
            scores.insert(
                v,
                SuspicionScore {
                    entity: net.label(v).key.clone(),
                    score: s[i],
                    normalized: s[i],
                    isolated: incident[i] == 0,
                    trace: params.keep_trace.then(|| traces[i].clone()),
                },
            );
        }
    }
    Ok(IaaOutcome { scores, bucket_scores, iterations })
}

/// Cross-component comparability: scores from a component representing
/// more collisions are scaled up proportionally. Ranking within the
/// component is unchanged.
pub fn normalize_across_components(
    scores: &mut BTreeMap<VertexId, SuspicionScore>,
    collision_count: usize,
) {
    assert!(collision_count >= 1);
    for sc in scores.values_mut() {
        sc.normalized = sc.score * collision_count as f64;
    }
}

/// Scores bucket entities by a single assessment over their neighbors'
/// final scores.
pub fn score_secondary(
    net: &Network,
    c: &Component,
    final_scores: &BTreeMap<VertexId, f64>,
    model: &AssessmentModel,
) -> Result<BTreeMap<VertexId, f64>> {
    let stats = NetStats::of(net);
    let adj = c.adjacency();
    let members = c.members();
    let labels: Vec<EdgeLabel> = c.edges().iter().map(|e| e.label).collect();
    let mut out = BTreeMap::new();
    for i in 0..members.len() {
        let v = members[i];
        if net.label(v).kind == VertexKind::Participant {
            continue;
        }
        let neigh: Vec<(EdgeLabel, f64)> = adj[i]
            .iter()
            .map(|&(j, e)| {
                (labels[e], final_scores.get(&members[j]).copied().unwrap_or(1.0))
            })
            .collect();
        let score = assess(net.label(v).kind, net.attrs(v), &neigh, model, &stats)?;
        out.insert(v, score);
    }
    Ok(out)
}

/// Groups of high-scoring participants that are directly connected or
/// connected through bucket vertices. The threshold is a fraction of
/// the top participant score; groups come ordered by summed score,
/// highest first.
pub fn extract_groups(
    net: &Network,
    c: &Component,
    scores: &BTreeMap<VertexId, SuspicionScore>,
    threshold_fraction: f64,
) -> Vec<Vec<VertexId>> {
    assert!((0.0..=1.0).contains(&threshold_fraction));
    let top = scores
        .values()
        .map(|s| s.normalized)
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Vec::new();
    }
    let cutoff = threshold_fraction * top;
    let keep: Vec<bool> = c
        .members()
        .iter()
        .map(|v| match scores.get(v) {
            Some(s) => s.normalized >= cutoff,
            None => net.label(*v).kind != VertexKind::Participant,
        })
        .collect();
    let filtered = c.restrict(&keep);
    let mut groups: Vec<(f64, Vec<VertexId>)> = filtered
        .split_connected()
        .into_iter()
        .filter_map(|piece| {
            let members: Vec<VertexId> = piece
                .members()
                .iter()
                .copied()
                .filter(|v| scores.contains_key(v))
                .collect();
            if members.is_empty() {
                return None;
            }
            let total: f64 = members.iter().map(|v| scores[v].normalized).sum();
            Some((total, members))
        })
        .collect();
    groups.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    groups.into_iter().map(|(_, m)| m).collect()
}
