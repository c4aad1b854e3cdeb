//! Pipeline configuration: a TOML document mapping onto the library's
//! parameter types, with every field defaulted so a minimal config can
//! be a seed and an output directory.

use fraudnet::iaa::{FactorConfig, Normalization};
use fraudnet::ingest::NetworkKind;
use fraudnet::nullmodel::IndicatorSpec;
use fraudnet::screen::SelectionPolicy;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub input: Option<InputConfig>,
    pub synth: Option<SynthConfig>,
    pub screen: ScreenConfig,
    pub score: ScoreConfig,
    pub evaluate: EvaluateConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 42,
            output_dir: PathBuf::from("out"),
            input: None,
            synth: None,
            screen: ScreenConfig::default(),
            score: ScoreConfig::default(),
            evaluate: EvaluateConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    pub collisions: PathBuf,
    #[serde(default)]
    pub format: InputFormat,
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    /// Named preset; "paper-shape" is the only one currently defined.
    pub preset: Option<String>,
    pub background_collisions: Option<usize>,
    pub ring_count: Option<usize>,
    pub ring_size: Option<usize>,
    pub ring_collisions: Option<usize>,
    pub ring_reuse: Option<f64>,
    pub red_flag_intensity: Option<f64>,
    pub labeled_non_fraudsters: Option<usize>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            preset: Some("paper-shape".into()),
            background_collisions: None,
            ring_count: None,
            ring_size: None,
            ring_collisions: None,
            ring_reuse: None,
            red_flag_intensity: None,
            labeled_non_fraudsters: None,
        }
    }
}

impl SynthConfig {
    pub fn to_spec(&self, seed: u64) -> Result<fraudnet::synth::SynthSpec> {
        let mut spec = match self.preset.as_deref() {
            None | Some("paper-shape") => fraudnet::synth::paper_shape_preset(),
            Some(other) => {
                return Err(CliError::Config(format!("unknown synth preset '{other}'")))
            }
        };
        if let Some(v) = self.background_collisions {
            spec.background_collisions = v;
        }
        if let Some(v) = self.ring_count {
            spec.ring_count = v;
        }
        if let Some(v) = self.ring_size {
            spec.ring_size = v;
        }
        if let Some(v) = self.ring_collisions {
            spec.ring_collisions = v;
        }
        if let Some(v) = self.ring_reuse {
            spec.ring_reuse = v;
        }
        if let Some(v) = self.red_flag_intensity {
            spec.red_flag_intensity = v;
        }
        if let Some(v) = self.labeled_non_fraudsters {
            spec.labeled_non_fraudsters = v;
        }
        spec.seed = seed;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScreenConfig {
    pub network: NetworkKind,
    pub community_max_size: usize,
    /// Null-model replicates per indicator and component.
    pub replicates: usize,
    /// Components with fewer edges skip null sampling; their null
    /// indicators are 0 (tiny components cannot be rewired into
    /// anything the tests could reject).
    pub null_min_edges: usize,
    pub selection: SelectionPolicy,
    /// Override for the built-in nine-indicator registry.
    pub indicators: Option<Vec<IndicatorSpec>>,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        ScreenConfig {
            network: NetworkKind::Participants,
            community_max_size: fraudnet::community::DEFAULT_MAX_SIZE,
            replicates: fraudnet::nullmodel::DEFAULT_REPLICATES,
            null_min_edges: 4,
            selection: SelectionPolicy::NonnegScore,
            indicators: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Raw,
    Basic,
    RawMean,
    #[default]
    BasicMean,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScoreConfig {
    pub network: NetworkKind,
    /// Add vehicle-link edges between collisions sharing a vehicle.
    pub vehicle_links: bool,
    pub model: ModelKind,
    /// Expert factor overrides; defaults to the built-in config.
    pub factors: Option<FactorConfig>,
    /// "dynamic" or a fixed positive iteration count.
    pub iterations: IterationSetting,
    pub alpha: f64,
    pub normalization: Normalization,
    /// Group extraction keeps participants above this fraction of the
    /// top score.
    pub group_threshold: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig {
            network: NetworkKind::Copta,
            vehicle_links: true,
            model: ModelKind::BasicMean,
            factors: None,
            iterations: IterationSetting::Dynamic,
            alpha: 0.75,
            normalization: Normalization::Mean,
            group_threshold: 0.5,
        }
    }
}

/// Either a fixed positive iteration count or the string "dynamic".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterationSetting {
    Fixed(usize),
    Dynamic,
}

impl IterationSetting {
    pub fn is_dynamic(&self) -> bool {
        matches!(self, IterationSetting::Dynamic)
    }
}

impl Serialize for IterationSetting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            IterationSetting::Fixed(k) => s.serialize_u64(*k as u64),
            IterationSetting::Dynamic => s.serialize_str("dynamic"),
        }
    }
}

impl<'de> Deserialize<'de> for IterationSetting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(usize),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(k) => Ok(IterationSetting::Fixed(k)),
            Raw::Word(w) if w == "dynamic" => Ok(IterationSetting::Dynamic),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "iterations must be a count or \"dynamic\", got \"{w}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluateConfig {
    pub cost_fp: f64,
    pub cost_fn: f64,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        EvaluateConfig { cost_fp: 1.0, cost_fn: 1.0 }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: PipelineConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.is_none() && self.synth.is_none() {
            return Err(CliError::Config(
                "either [input] or [synth] must be present".into(),
            ));
        }
        if let Some(input) = &self.input {
            if !input.collisions.exists() {
                return Err(CliError::Config(format!(
                    "input file {} does not exist",
                    input.collisions.display()
                )));
            }
        }
        if !(0.0..1.0).contains(&self.score.alpha) {
            return Err(CliError::Config(format!(
                "alpha {} outside [0,1)",
                self.score.alpha
            )));
        }
        if let IterationSetting::Fixed(0) = self.score.iterations {
            return Err(CliError::Config("fixed iteration count must be >= 1".into()));
        }
        if let Some(specs) = &self.screen.indicators {
            for s in specs {
                s.validate()?;
            }
        }
        Ok(())
    }

    /// Canonical JSON digest of the full configuration; recorded in the
    /// manifest so reruns can prove they used identical settings.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let mut h = Sha256::new();
        h.update(&canonical);
        format!("{:x}", h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_toml_round_trip() {
        let text = "seed = 7\noutput_dir = \"/tmp/x\"\n[synth]\n";
        let cfg: PipelineConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.seed, 7);
        cfg.validate().unwrap();
        assert_eq!(cfg.screen.network, NetworkKind::Participants);
        assert_eq!(cfg.score.network, NetworkKind::Copta);
    }

    #[test]
    fn digest_changes_with_seed() {
        let mut a = PipelineConfig { synth: Some(SynthConfig::default()), ..Default::default() };
        let d1 = a.digest();
        a.seed += 1;
        assert_ne!(d1, a.digest());
    }

    #[test]
    fn missing_source_rejected() {
        let cfg = PipelineConfig::default();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn fixed_iterations_parse_from_integer() {
        let text = "seed = 1\n[synth]\n[score]\niterations = 5\n";
        let cfg: PipelineConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.score.iterations, IterationSetting::Fixed(5));
        let text = "seed = 1\n[synth]\n[score]\niterations = \"dynamic\"\n";
        let cfg: PipelineConfig = toml::from_str(text).unwrap();
        assert!(cfg.score.iterations.is_dynamic());
        let text = "seed = 1\n[synth]\n[score]\niterations = \"sometimes\"\n";
        assert!(toml::from_str::<PipelineConfig>(text).is_err());
    }
}
