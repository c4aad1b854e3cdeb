//! The staged analysis pipeline: ingest, network construction,
//! component screening against null models, iterative scoring,
//! evaluation and artifact persistence.

use crate::config::{IterationSetting, ModelKind, PipelineConfig, SCHEMA_VERSION};
use crate::dot::export_dot;
use crate::error::{CliError, Result};
use fraudnet::community::split_communities;
use fraudnet::component::Component;
use fraudnet::evaluate::{
    auc, confusion_at, metrics, min_cost_threshold, ClassLabel, ConfusionMatrix, LabeledScore,
    Metrics,
};
use fraudnet::graph::{Network, VertexKind};
use fraudnet::iaa::{
    extract_groups, iaa_run, normalize_across_components, AssessmentModel, FactorConfig,
    IaaParams, IterationPolicy,
};
use fraudnet::ingest::{
    build_network, component_meta, link_shared_vehicles, parse_collisions, CollisionRecord,
    NetworkKind, SourceFormat,
};
use fraudnet::nullmodel::{
    default_registry, evaluate_indicator, evaluate_statistic, sample_null, IndicatorSpec,
    NullDistribution,
};
use fraudnet::screen::{majority_select, pridit, select_suspicious, IndicatorMatrix, PriditResult};
use fraudnet::synth;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentReport {
    /// Smallest participant key in the component.
    pub id: String,
    pub participants: Vec<String>,
    pub collisions: usize,
    pub drivers: usize,
    pub indicators: Vec<u8>,
    /// Empirical p-values for the null-tested indicators.
    pub p_values: BTreeMap<String, f64>,
    pub ridit: Vec<f64>,
    pub pridit_score: f64,
    pub suspicious: bool,
    pub majority: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScreenOutcome {
    pub indicator_names: Vec<String>,
    pub components: Vec<ComponentReport>,
    pub pridit: PriditResult,
    pub suspicious: BTreeSet<String>,
    pub majority: BTreeSet<String>,
    pub oversized_split: usize,
}

impl ScreenOutcome {
    pub fn suspicious_participants(&self) -> BTreeSet<String> {
        self.participants_of(&self.suspicious)
    }

    pub fn majority_participants(&self) -> BTreeSet<String> {
        self.participants_of(&self.majority)
    }

    fn participants_of(&self, ids: &BTreeSet<String>) -> BTreeSet<String> {
        self.components
            .iter()
            .filter(|c| ids.contains(&c.id))
            .flat_map(|c| c.participants.iter().cloned())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntityScore {
    pub entity: String,
    pub raw: f64,
    pub normalized: f64,
    pub component: String,
    pub isolated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoreOutcome {
    pub participant_scores: BTreeMap<String, EntityScore>,
    pub collision_scores: BTreeMap<String, f64>,
    pub groups: Vec<Vec<String>>,
    /// Iteration count actually used per scored component.
    pub iterations_used: BTreeMap<String, usize>,
    pub average_diameter: f64,
    pub components_scored: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub auc: f64,
    pub threshold: f64,
    pub confusion: ConfusionMatrix,
    pub metrics: Metrics,
    /// AUC when majority voting picks the components instead of PRIDIT.
    pub auc_majority: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub collisions: usize,
    pub participants: usize,
    pub screen: ScreenOutcome,
    pub score: ScoreOutcome,
    pub evaluation: Option<EvalReport>,
}

/// Ingested corpus plus ground-truth labels when available.
pub struct CorpusData {
    pub records: Vec<CollisionRecord>,
    pub labels: BTreeMap<String, ClassLabel>,
}

pub fn load_corpus(cfg: &PipelineConfig) -> Result<CorpusData> {
    let stage = |cause: String| CliError::Stage { stage: "ingest".into(), cause };
    if let Some(input) = &cfg.input {
        let file = std::fs::File::open(&input.collisions).map_err(|e| stage(e.to_string()))?;
        let format = match input.format {
            crate::config::InputFormat::Csv => SourceFormat::Csv,
            crate::config::InputFormat::Json => SourceFormat::Json,
        };
        let records = parse_collisions(file, format).map_err(|e| stage(e.to_string()))?;
        let labels = match &input.labels {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| stage(e.to_string()))?;
                serde_json::from_str(&text).map_err(|e| stage(e.to_string()))?
            }
            None => BTreeMap::new(),
        };
        Ok(CorpusData { records, labels })
    } else {
        let spec = cfg
            .synth
            .as_ref()
            .expect("validated config has a source")
            .to_spec(cfg.seed)?;
        let (records, labels) = synth::generate(&spec).map_err(|e| stage(e.to_string()))?;
        Ok(CorpusData { records, labels })
    }
}

fn model_from_config(cfg: &PipelineConfig) -> AssessmentModel {
    let factors = cfg
        .score
        .factors
        .clone()
        .unwrap_or_else(FactorConfig::default_expert);
    match cfg.score.model {
        ModelKind::Raw => AssessmentModel::Raw,
        ModelKind::RawMean => AssessmentModel::RawMean,
        ModelKind::Basic => AssessmentModel::Basic(factors),
        ModelKind::BasicMean => AssessmentModel::BasicMean(factors),
    }
}

fn participant_keys(net: &Network, c: &Component) -> Vec<String> {
    c.members()
        .iter()
        .filter(|&&v| net.label(v).kind == VertexKind::Participant)
        .map(|&v| net.label(v).key.clone())
        .collect()
}

/// Screens every connected component of the screening network and
/// combines the indicator ensemble into suspicion decisions.
pub fn screen_stage(cfg: &PipelineConfig, corpus: &CorpusData) -> Result<ScreenOutcome> {
    let stage = |cause: String| CliError::Stage { stage: "screen".into(), cause };
    let net = build_network(&corpus.records, cfg.screen.network);
    let mut components = Vec::new();
    let mut oversized_split = 0usize;
    for c in net.connected_components() {
        if c.vertex_count() > cfg.screen.community_max_size {
            oversized_split += 1;
            components.extend(
                split_communities(&c, cfg.screen.community_max_size)
                    .map_err(|e| stage(e.to_string()))?,
            );
        } else {
            components.push(c);
        }
    }

    let registry = cfg
        .screen
        .indicators
        .clone()
        .unwrap_or_else(default_registry);
    let names: Vec<String> = registry.iter().map(|s| s.name.clone()).collect();

    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut ids = Vec::new();
    for c in &components {
        let participants = participant_keys(&net, c);
        let Some(id) = participants.iter().min().cloned() else {
            continue; // vertex-less or participant-free fragment
        };
        let keys: BTreeSet<&str> = participants.iter().map(|s| s.as_str()).collect();
        let meta = component_meta(&corpus.records, &keys);
        let mut indicators = Vec::with_capacity(registry.len());
        let mut p_values = BTreeMap::new();
        for spec in &registry {
            let dist = if spec.mode.is_null() {
                if c.edge_count() >= cfg.screen.null_min_edges {
                    Some(
                        sample_null(c, &meta, spec, cfg.screen.replicates, cfg.seed)
                            .map_err(|e| stage(e.to_string()))?,
                    )
                } else {
                    // Too small to rewire meaningfully; never flagged.
                    indicators.push(0);
                    continue;
                }
            } else {
                None
            };
            let hit = evaluate_indicator(c, &meta, spec, dist.as_ref())
                .map_err(|e| stage(e.to_string()))?;
            indicators.push(hit as u8);
            if let Some(dist) = &dist {
                let observed = evaluate_statistic(c, &meta, spec.statistic)
                    .map_err(|e| stage(e.to_string()))?;
                let p = one_sided_p(spec, dist, observed)?;
                p_values.insert(spec.name.clone(), p);
            }
        }
        rows.push(indicators.clone());
        ids.push(id.clone());
        reports.push(ComponentReport {
            id,
            participants,
            collisions: meta.collisions,
            drivers: meta.drivers,
            indicators,
            p_values,
            ridit: Vec::new(),
            pridit_score: 0.0,
            suspicious: false,
            majority: false,
        });
    }

    let matrix = IndicatorMatrix {
        component_ids: ids,
        indicator_names: names.clone(),
        values: rows,
    };
    let pridit_res = pridit(
        &matrix,
        fraudnet::screen::DEFAULT_PRIDIT_TOL,
        fraudnet::screen::DEFAULT_PRIDIT_MAX_ITER,
    )
    .map_err(|e| stage(e.to_string()))?;
    let selection = resolve_selection(cfg, &reports);
    let suspicious = select_suspicious(&pridit_res, &selection);
    let majority = majority_select(&matrix);

    for (i, report) in reports.iter_mut().enumerate() {
        report.ridit = pridit_res.ridit[i].clone();
        report.pridit_score = pridit_res.scores[i];
        report.suspicious = suspicious.contains(&report.id);
        report.majority = majority.contains(&report.id);
    }

    Ok(ScreenOutcome {
        indicator_names: names,
        components: reports,
        pridit: pridit_res,
        suspicious,
        majority,
        oversized_split,
    })
}

/// Fills in collision counts when the policy needs them.
fn resolve_selection(
    cfg: &PipelineConfig,
    reports: &[ComponentReport],
) -> fraudnet::screen::SelectionPolicy {
    use fraudnet::screen::SelectionPolicy;
    match &cfg.screen.selection {
        SelectionPolicy::TopCollisionFraction { fraction, collision_counts }
            if collision_counts.is_empty() =>
        {
            SelectionPolicy::TopCollisionFraction {
                fraction: *fraction,
                collision_counts: reports.iter().map(|r| r.collisions).collect(),
            }
        }
        other => other.clone(),
    }
}

fn one_sided_p(
    spec: &IndicatorSpec,
    dist: &NullDistribution,
    observed: f64,
) -> Result<f64> {
    use fraudnet::nullmodel::{empirical_p, IndicatorMode, Tail};
    let p = match spec.mode {
        IndicatorMode::NullOneTailed { direction } => empirical_p(dist, observed, direction)?,
        IndicatorMode::NullTwoTailed => empirical_p(dist, observed, Tail::Upper)?
            .min(empirical_p(dist, observed, Tail::Lower)?),
        IndicatorMode::Threshold { .. } => unreachable!("no distribution for thresholds"),
    };
    Ok(p)
}

/// Runs the iterative scorer over every scoring-network component that
/// contains at least one flagged participant.
pub fn score_stage(
    cfg: &PipelineConfig,
    corpus: &CorpusData,
    suspicious_participants: &BTreeSet<String>,
) -> Result<ScoreOutcome> {
    let stage = |cause: String| CliError::Stage { stage: "score".into(), cause };
    let net = scoring_network(cfg, corpus);
    let components = net.connected_components();
    let selected: Vec<&Component> = components
        .iter()
        .filter(|c| {
            participant_keys(&net, c)
                .iter()
                .any(|k| suspicious_participants.contains(k))
        })
        .collect();

    let mut diameters = Vec::new();
    for c in &selected {
        diameters.push(c.diameter().map_err(|e| stage(e.to_string()))? as f64);
    }
    let average_diameter = if diameters.is_empty() {
        0.0
    } else {
        diameters.iter().sum::<f64>() / diameters.len() as f64
    };

    let model = model_from_config(cfg);
    let mut participant_scores = BTreeMap::new();
    let mut collision_scores = BTreeMap::new();
    let mut groups: Vec<(f64, Vec<String>)> = Vec::new();
    let mut iterations_used = BTreeMap::new();

    for c in &selected {
        let participants = participant_keys(&net, c);
        let id = participants.iter().min().cloned().unwrap_or_default();
        let policy = match cfg.score.iterations {
            IterationSetting::Fixed(k) => IterationPolicy::Fixed { count: k },
            IterationSetting::Dynamic => IterationPolicy::Dynamic { avg_diameter: average_diameter },
        };
        let params = IaaParams {
            alpha: cfg.score.alpha,
            policy,
            bucket_kinds: vec![VertexKind::Collision],
            normalization: cfg.score.normalization,
            keep_trace: false,
        };
        let mut run = iaa_run(&net, c, &model, &params).map_err(|e| stage(e.to_string()))?;
        let collisions = c
            .members()
            .iter()
            .filter(|&&v| net.label(v).kind == VertexKind::Collision)
            .count();
        normalize_across_components(&mut run.scores, collisions.max(1));
        iterations_used.insert(id.clone(), run.iterations);

        for score in run.scores.values() {
            participant_scores.insert(
                score.entity.clone(),
                EntityScore {
                    entity: score.entity.clone(),
                    raw: score.score,
                    normalized: score.normalized,
                    component: id.clone(),
                    isolated: score.isolated,
                },
            );
        }
        let finals: BTreeMap<_, _> = run
            .scores
            .iter()
            .map(|(&v, s)| (v, s.score))
            .chain(run.bucket_scores.iter().map(|(&v, &s)| (v, s)))
            .collect();
        let secondary =
            fraudnet::iaa::score_secondary(&net, c, &finals, &model).map_err(|e| stage(e.to_string()))?;
        for (v, s) in secondary {
            if net.label(v).kind == VertexKind::Collision {
                collision_scores.insert(net.label(v).key.clone(), s);
            }
        }
        for group in extract_groups(&net, c, &run.scores, cfg.score.group_threshold) {
            let names: Vec<String> = group
                .iter()
                .map(|v| net.label(*v).key.clone())
                .collect();
            let total: f64 = group
                .iter()
                .map(|v| run.scores[v].normalized)
                .sum();
            groups.push((total, names));
        }
    }
    groups.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    Ok(ScoreOutcome {
        participant_scores,
        collision_scores,
        groups: groups.into_iter().map(|(_, g)| g).collect(),
        iterations_used,
        average_diameter,
        components_scored: selected.len(),
    })
}

pub fn scoring_network(cfg: &PipelineConfig, corpus: &CorpusData) -> Network {
    let net = build_network(&corpus.records, cfg.score.network);
    if cfg.score.vehicle_links && cfg.score.network == NetworkKind::Copta {
        link_shared_vehicles(&net, &corpus.records)
    } else {
        net
    }
}

/// Labeled score list: every labeled entity appears, scored 0 when the
/// pipeline left it unscored.
pub fn labeled_scores(
    labels: &BTreeMap<String, ClassLabel>,
    scores: &BTreeMap<String, EntityScore>,
) -> Vec<LabeledScore> {
    labels
        .iter()
        .map(|(entity, &label)| LabeledScore {
            entity: entity.clone(),
            score: scores.get(entity).map_or(0.0, |s| s.normalized),
            label,
        })
        .collect()
}

pub fn evaluate_stage(
    cfg: &PipelineConfig,
    corpus: &CorpusData,
    score: &ScoreOutcome,
    majority_scores: &BTreeMap<String, EntityScore>,
) -> Result<Option<EvalReport>> {
    let stage = |cause: String| CliError::Stage { stage: "evaluate".into(), cause };
    let has_both = corpus.labels.values().any(|&l| l == ClassLabel::Fraudster)
        && corpus.labels.values().any(|&l| l == ClassLabel::NonFraudster);
    if !has_both {
        return Ok(None);
    }
    let scored = labeled_scores(&corpus.labels, &score.participant_scores);
    let auc_value = auc(&scored).map_err(|e| stage(e.to_string()))?;
    let threshold = min_cost_threshold(&scored, cfg.evaluate.cost_fp, cfg.evaluate.cost_fn)
        .map_err(|e| stage(e.to_string()))?;
    let confusion = confusion_at(&scored, threshold);
    let majority = labeled_scores(&corpus.labels, majority_scores);
    let auc_majority = auc(&majority).map_err(|e| stage(e.to_string()))?;
    Ok(Some(EvalReport {
        auc: auc_value,
        threshold,
        confusion,
        metrics: metrics(&confusion),
        auc_majority,
    }))
}

/// Full pipeline with artifact persistence.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let corpus = load_corpus(cfg)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    persist_corpus(cfg, &corpus)?;

    let screen = match screen_stage(cfg, &corpus) {
        Ok(s) => s,
        Err(e) => {
            mark_failure(cfg, &e)?;
            return Err(e);
        }
    };
    write_json(&cfg.output_dir.join("screen.json"), &screen)?;

    let score = match score_stage(cfg, &corpus, &screen.suspicious_participants()) {
        Ok(s) => s,
        Err(e) => {
            mark_failure(cfg, &e)?;
            return Err(e);
        }
    };
    // Majority-voting comparison scores reuse already-computed entity
    // scores where the components overlap.
    let majority_scores =
        subset_scores(&score.participant_scores, &screen.majority_participants(), cfg, &corpus)?;

    let evaluation = evaluate_stage(cfg, &corpus, &score, &majority_scores)?;

    let participants: BTreeSet<&str> = corpus
        .records
        .iter()
        .flat_map(|r| r.participants.iter().map(|p| p.participant_id.as_str()))
        .collect();
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        config_hash: cfg.digest(),
        seed: cfg.seed,
        collisions: corpus.records.len(),
        participants: participants.len(),
        screen,
        score,
        evaluation,
    };
    persist_report(cfg, &corpus, &report)?;
    Ok(report)
}

/// Scores restricted to components selected by the majority voter. The
/// majority set may include components PRIDIT skipped; those are scored
/// on demand.
fn subset_scores(
    scores: &BTreeMap<String, EntityScore>,
    majority_participants: &BTreeSet<String>,
    cfg: &PipelineConfig,
    corpus: &CorpusData,
) -> Result<BTreeMap<String, EntityScore>> {
    let mut out: BTreeMap<String, EntityScore> = scores
        .iter()
        .filter(|(k, _)| majority_participants.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let missing: BTreeSet<String> = majority_participants
        .iter()
        .filter(|k| !scores.contains_key(*k))
        .cloned()
        .collect();
    if !missing.is_empty() {
        let extra = score_stage(cfg, corpus, &missing)?;
        for (k, v) in extra.participant_scores {
            out.entry(k).or_insert(v);
        }
    }
    Ok(out)
}

fn persist_corpus(cfg: &PipelineConfig, corpus: &CorpusData) -> Result<()> {
    let mut ndjson = Vec::new();
    for r in &corpus.records {
        serde_json::to_writer(&mut ndjson, r)?;
        ndjson.push(b'\n');
    }
    std::fs::write(cfg.output_dir.join("collisions.ndjson"), ndjson)?;
    write_json(&cfg.output_dir.join("labels.json"), &corpus.labels)?;
    Ok(())
}

fn persist_report(cfg: &PipelineConfig, corpus: &CorpusData, report: &RunReport) -> Result<()> {
    write_json(&cfg.output_dir.join("report.json"), report)?;
    write_json(&cfg.output_dir.join("components.json"), &report.screen.components)?;
    write_scores_csv(cfg, corpus, report)?;
    export_suspicious_dots(cfg, corpus, report)?;
    write_manifest(cfg)?;
    Ok(())
}

fn write_scores_csv(
    cfg: &PipelineConfig,
    corpus: &CorpusData,
    report: &RunReport,
) -> Result<()> {
    let mut ranked: Vec<&EntityScore> = report.score.participant_scores.values().collect();
    ranked.sort_by(|a, b| {
        b.normalized
            .partial_cmp(&a.normalized)
            .unwrap()
            .then(a.entity.cmp(&b.entity))
    });
    let mut w = csv::Writer::from_path(cfg.output_dir.join("scores.csv"))
        .map_err(fraudnet::Error::from)?;
    w.write_record(["entity", "raw_score", "normalized_score", "rank", "label"])
        .map_err(fraudnet::Error::from)?;
    for (rank, s) in ranked.iter().enumerate() {
        let label = match corpus.labels.get(&s.entity) {
            Some(ClassLabel::Fraudster) => "fraudster",
            Some(ClassLabel::NonFraudster) => "non-fraudster",
            _ => "",
        };
        w.write_record([
            s.entity.as_str(),
            &format!("{:.9}", s.raw),
            &format!("{:.9}", s.normalized),
            &(rank + 1).to_string(),
            label,
        ])
        .map_err(fraudnet::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

fn export_suspicious_dots(
    cfg: &PipelineConfig,
    corpus: &CorpusData,
    report: &RunReport,
) -> Result<()> {
    let dir = cfg.output_dir.join("dot");
    std::fs::create_dir_all(&dir)?;
    let net = scoring_network(cfg, corpus);
    let scores: BTreeMap<String, f64> = report
        .score
        .participant_scores
        .iter()
        .map(|(k, v)| (k.clone(), v.normalized))
        .collect();
    let flagged = report.screen.suspicious_participants();
    for c in net.connected_components() {
        let participants = participant_keys(&net, &c);
        if !participants.iter().any(|k| flagged.contains(k)) {
            continue;
        }
        let id = participants.iter().min().cloned().unwrap_or_default();
        let dot = export_dot(&net, &c, &scores, 0.0);
        std::fs::write(dir.join(format!("component_{id}.dot")), dot)?;
    }
    Ok(())
}

fn mark_failure(cfg: &PipelineConfig, err: &CliError) -> Result<()> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    write_json(&cfg.output_dir.join("FAILED.json"), &err.report())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Manifest: config digest, seed and a content hash per artifact, so a
/// rerun can be verified end to end.
fn write_manifest(cfg: &PipelineConfig) -> Result<()> {
    use sha2::{Digest, Sha256};
    let mut files = BTreeMap::new();
    for name in [
        "collisions.ndjson",
        "labels.json",
        "screen.json",
        "report.json",
        "components.json",
        "scores.csv",
    ] {
        let path = cfg.output_dir.join(name);
        if let Ok(bytes) = std::fs::read(&path) {
            let mut h = Sha256::new();
            h.update(&bytes);
            files.insert(name.to_string(), format!("{:x}", h.finalize()));
        }
    }
    #[derive(Serialize)]
    struct Manifest {
        schema_version: u32,
        config_hash: String,
        seed: u64,
        files: BTreeMap<String, String>,
    }
    write_json(
        &cfg.output_dir.join("manifest.json"),
        &Manifest {
            schema_version: SCHEMA_VERSION,
            config_hash: cfg.digest(),
            seed: cfg.seed,
            files,
        },
    )
}

/// Staged variant: screening only, persisting its outcome for a later
/// `score` invocation.
pub fn run_screen_only(cfg: &PipelineConfig) -> Result<ScreenOutcome> {
    cfg.validate()?;
    let corpus = load_corpus(cfg)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    persist_corpus(cfg, &corpus)?;
    let screen = screen_stage(cfg, &corpus)?;
    write_json(&cfg.output_dir.join("screen.json"), &screen)?;
    write_manifest(cfg)?;
    Ok(screen)
}

/// Staged variant: resumes from a persisted screening outcome.
pub fn run_score_from(cfg: &PipelineConfig) -> Result<RunReport> {
    let stage = |cause: String| CliError::Stage { stage: "score".into(), cause };
    let screen_path = cfg.output_dir.join("screen.json");
    let text = std::fs::read_to_string(&screen_path).map_err(|e| {
        stage(format!("missing {} (run `screen` first): {e}", screen_path.display()))
    })?;
    let screen: ScreenOutcome = serde_json::from_str(&text)?;
    let corpus = load_persisted_corpus(cfg)?;

    let score = score_stage(cfg, &corpus, &screen.suspicious_participants())?;
    let majority_scores =
        subset_scores(&score.participant_scores, &screen.majority_participants(), cfg, &corpus)?;
    let evaluation = evaluate_stage(cfg, &corpus, &score, &majority_scores)?;
    let participants: BTreeSet<&str> = corpus
        .records
        .iter()
        .flat_map(|r| r.participants.iter().map(|p| p.participant_id.as_str()))
        .collect();
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        config_hash: cfg.digest(),
        seed: cfg.seed,
        collisions: corpus.records.len(),
        participants: participants.len(),
        screen,
        score,
        evaluation,
    };
    persist_report(cfg, &corpus, &report)?;
    Ok(report)
}

pub fn load_persisted_corpus(cfg: &PipelineConfig) -> Result<CorpusData> {
    let stage = |cause: String| CliError::Stage { stage: "ingest".into(), cause };
    let text = std::fs::read_to_string(cfg.output_dir.join("collisions.ndjson"))
        .map_err(|e| stage(format!("missing persisted corpus: {e}")))?;
    let mut records = Vec::new();
    for line in text.lines() {
        if !line.trim().is_empty() {
            records.push(serde_json::from_str(line)?);
        }
    }
    let labels = match std::fs::read_to_string(cfg.output_dir.join("labels.json")) {
        Ok(t) => serde_json::from_str(&t)?,
        Err(_) => BTreeMap::new(),
    };
    Ok(CorpusData { records, labels })
}
