//! `fraudnet` binary: subcommands over the staged pipeline.

use clap::{Parser, Subcommand};
use fraudnet_cli::config::PipelineConfig;
use fraudnet_cli::error::Result;
use fraudnet_cli::pipeline;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fraudnet", version, about = "Collision-network fraud ring detection")]
struct Cli {
    /// TOML configuration file; defaults apply when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Override the configured random seed.
    #[arg(short, long, global = true)]
    seed: Option<u64>,
    /// Override the configured output directory.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic collision corpus and write it to the output directory.
    Simulate,
    /// Parse a collision corpus and report basic counts.
    Ingest,
    /// Screen components against indicator thresholds and null models.
    Screen,
    /// Score previously screened components and write the full report.
    Score,
    /// Run the whole pipeline: ingest, screen, score, evaluate, export.
    Run,
    /// Evaluate the persisted report against ground-truth labels.
    Evaluate,
    /// Export DOT drawings for flagged components from a persisted run.
    Export,
    /// Report ranking quality across a range of iteration counts.
    SweepIterations {
        /// Inclusive upper bound on the fixed iteration count.
        #[arg(long, default_value_t = 12)]
        max: usize,
    },
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig {
            synth: Some(Default::default()),
            ..Default::default()
        },
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(output) = &cli.output {
        cfg.output_dir = output.clone();
    }
    Ok(cfg)
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(&cli) {
        let report = serde_json::to_string(&err.report())
            .unwrap_or_else(|_| format!("{{\"error\":\"{err}\"}}"));
        eprintln!("{report}");
        std::process::exit(1);
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Simulate => simulate(&cfg),
        Command::Ingest => ingest(&cfg),
        Command::Screen => {
            let screen = pipeline::run_screen_only(&cfg)?;
            println!(
                "screened {} components, {} suspicious, {} by majority vote",
                screen.components.len(),
                screen.suspicious.len(),
                screen.majority.len()
            );
            Ok(())
        }
        Command::Score => {
            let report = pipeline::run_score_from(&cfg)?;
            print_summary(&report);
            Ok(())
        }
        Command::Run => {
            let report = pipeline::run_pipeline(&cfg)?;
            print_summary(&report);
            Ok(())
        }
        Command::Evaluate => evaluate(&cfg),
        Command::Export => export(&cfg),
        Command::SweepIterations { max } => sweep(&cfg, *max),
    }
}

fn simulate(cfg: &PipelineConfig) -> Result<()> {
    cfg.validate()?;
    let corpus = pipeline::load_corpus(cfg)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join("collisions.csv");
    let file = std::fs::File::create(&csv_path)?;
    fraudnet::ingest::write_csv(&corpus.records, file)
        .map_err(fraudnet_cli::error::CliError::Engine)?;
    let labels = serde_json::to_string_pretty(&corpus.labels)?;
    std::fs::write(cfg.output_dir.join("labels.json"), labels + "\n")?;
    println!(
        "wrote {} collisions and {} labels to {}",
        corpus.records.len(),
        corpus.labels.len(),
        cfg.output_dir.display()
    );
    Ok(())
}

fn ingest(cfg: &PipelineConfig) -> Result<()> {
    cfg.validate()?;
    let corpus = pipeline::load_corpus(cfg)?;
    let net = pipeline::scoring_network(cfg, &corpus);
    let components = net.connected_components();
    println!(
        "{} collisions, {} vertices, {} edges, {} components",
        corpus.records.len(),
        net.vertex_count(),
        net.edge_count(),
        components.len()
    );
    Ok(())
}

fn evaluate(cfg: &PipelineConfig) -> Result<()> {
    use fraudnet_cli::error::CliError;
    let path = cfg.output_dir.join("report.json");
    let text = std::fs::read_to_string(&path).map_err(|e| {
        CliError::Stage {
            stage: "evaluate".into(),
            cause: format!("missing {} (run `run` first): {e}", path.display()),
        }
    })?;
    let report: pipeline::RunReport = serde_json::from_str(&text)?;
    match &report.evaluation {
        Some(eval) => {
            let show = |m: Option<f64>| m.map_or("n/a".into(), |v| format!("{v:.4}"));
            println!(
                "auc {:.4}  threshold {:.4}  accuracy {}  recall {}  precision {}",
                eval.auc,
                eval.threshold,
                show(eval.metrics.accuracy),
                show(eval.metrics.recall),
                show(eval.metrics.precision)
            );
            Ok(())
        }
        None => Err(CliError::Stage {
            stage: "evaluate".into(),
            cause: "no ground-truth labels with both classes were available".into(),
        }),
    }
}

fn export(cfg: &PipelineConfig) -> Result<()> {
    use fraudnet_cli::error::CliError;
    let path = cfg.output_dir.join("report.json");
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Stage {
        stage: "export".into(),
        cause: format!("missing {} (run `run` first): {e}", path.display()),
    })?;
    let _report: pipeline::RunReport = serde_json::from_str(&text)?;
    let dir = cfg.output_dir.join("dot");
    let count = std::fs::read_dir(&dir)
        .map(|entries| entries.filter_map(|e| e.ok()).count())
        .unwrap_or(0);
    println!("{count} DOT files in {}", dir.display());
    Ok(())
}

fn sweep(cfg: &PipelineConfig, max: usize) -> Result<()> {
    use fraudnet_cli::config::IterationSetting;
    let corpus = pipeline::load_corpus(cfg)?;
    let screen = pipeline::screen_stage(cfg, &corpus)?;
    let flagged = screen.suspicious_participants();
    println!("iterations\tauc");
    for k in 1..=max.max(1) {
        let mut sweep_cfg = cfg.clone();
        sweep_cfg.score.iterations = IterationSetting::Fixed(k);
        let score = pipeline::score_stage(&sweep_cfg, &corpus, &flagged)?;
        let scored = pipeline::labeled_scores(&corpus.labels, &score.participant_scores);
        match fraudnet::evaluate::auc(&scored) {
            Ok(a) => println!("{k}\t{a:.4}"),
            Err(_) => println!("{k}\tn/a"),
        }
    }
    Ok(())
}

fn print_summary(report: &pipeline::RunReport) {
    println!(
        "{} collisions, {} participants, {} components screened, {} suspicious",
        report.collisions,
        report.participants,
        report.screen.components.len(),
        report.screen.suspicious.len()
    );
    println!(
        "{} components scored over avg diameter {:.2}, {} groups extracted",
        report.score.components_scored,
        report.score.average_diameter,
        report.score.groups.len()
    );
    if let Some(eval) = &report.evaluation {
        println!(
            "auc {:.4} (majority voting {:.4}), min-cost threshold {:.4}",
            eval.auc, eval.auc_majority, eval.threshold
        );
    }
}
