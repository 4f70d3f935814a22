//! Thin command-line front end over the simmer library; each subcommand
//! runs one pipeline stage (recomputing its prerequisites in memory) and
//! writes that stage's reports.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use simmer::corpus::{save_corpus, SyntheticConfig};
use simmer::gbt;
use simmer::pipeline::{
    self, feature_stage, load_inputs, mine_stage, network_stage, pairs_stage, parse_stage,
    run_conditions, run_dimension_sweep, run_pipeline, train_stage, CorpusSource, PipelineConfig,
    ReportWriter,
};

#[derive(Parser)]
#[command(
    name = "simmer",
    version,
    about = "Ingredient networks and recipe-pair rating prediction"
)]
struct Cli {
    /// Pipeline config file (JSON); `demo` and `synth` can run without it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the root seed (and a synthetic corpus seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for reports.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads; affects speed, never results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the vocabulary and parsing reports.
    Parse,
    /// Extract modification events and their statistics.
    Mine,
    /// Build the four ingredient networks and their reports.
    Networks,
    /// Generate the labeled recipe-pair dataset.
    Pairs,
    /// Assemble the combined pair-feature matrix.
    Features,
    /// Train the boosted-tree model on the combined features.
    Train,
    /// Re-evaluate a saved model on the held-out split.
    Evaluate {
        /// Model file; defaults to `<out>/model.gbt`.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Accuracy over a grid of SVD ranks and network subsets.
    Sweep,
    /// The five-condition comparison and importance breakdowns.
    Report,
    /// Run the bundled synthetic demonstration end to end.
    Demo,
    /// Generate a synthetic corpus and write it as corpus files.
    Synth,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => match cli.command {
            Command::Demo | Command::Synth => PipelineConfig::demo(),
            _ => bail!("--config is required for this subcommand (or use `demo`)"),
        },
    };
    if let Some(seed) = cli.seed {
        config = config.with_seed(seed);
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    let config = load_config(&cli)?;
    let out = cli.out.clone();

    match cli.command {
        Command::Synth => {
            let synth: SyntheticConfig = match &config.corpus {
                CorpusSource::Synthetic(s) => s.clone(),
                CorpusSource::Files { .. } => {
                    // Allow a bare SyntheticConfig file as well.
                    let path = cli.config.as_ref().context("--config required for synth")?;
                    let text = std::fs::read_to_string(path)?;
                    serde_json::from_str(&text).context(
                        "config is neither a pipeline config with a synthetic corpus \
                         nor a synthetic config",
                    )?
                }
            };
            let corpus = simmer::corpus::generate_synthetic(&synth)?;
            std::fs::create_dir_all(&out)?;
            save_corpus(
                &corpus,
                &out.join("recipes.jsonl"),
                &out.join("reviews.jsonl"),
            )?;
            println!(
                "wrote {} recipes and {} reviews under {}",
                corpus.recipes().len(),
                corpus.reviews().len(),
                out.display()
            );
            return Ok(());
        }
        Command::Demo => {
            let summary = run_pipeline(&config, &out)?;
            println!(
                "demo pipeline complete: {} pairs, coverage {:.3}",
                summary.n_pairs, summary.coverage
            );
            for condition in &summary.conditions {
                println!(
                    "  {:<18} accuracy {:.4}",
                    condition.name, condition.test_accuracy
                );
            }
            println!("reports under {}", out.display());
            return Ok(());
        }
        _ => {}
    }

    let inputs = load_inputs(&config)?;
    let parse = parse_stage(&config, &inputs)?;
    let mut writer = ReportWriter::new(&out)?;

    match cli.command {
        Command::Parse => {
            pipeline::write_parse_reports(&mut writer, &inputs, &parse)?;
            println!(
                "vocabulary of {} ingredients, coverage {:.3}",
                parse.vocab.len(),
                parse.coverage
            );
        }
        Command::Mine => {
            let mine = mine_stage(&config, &inputs, &parse)?;
            pipeline::write_mine_reports(&mut writer, &mine)?;
            println!(
                "{} events; {:.1}% of reviews flagged",
                mine.events.len(),
                100.0 * mine.flagged_fraction
            );
        }
        Command::Pairs => {
            let pair_arts = pairs_stage(&config, &inputs, &parse)?;
            writer.write("pairs.tsv", &pipeline::pairs_table(&pair_arts.pairs))?;
            println!("{} pairs", pair_arts.pairs.len());
        }
        Command::Networks => {
            let mine = mine_stage(&config, &inputs, &parse)?;
            let pair_arts = pairs_stage(&config, &inputs, &parse)?;
            let nets = network_stage(&config, &inputs, &parse, &mine, &pair_arts)?;
            pipeline::write_network_reports(&mut writer, &nets)?;
            println!(
                "networks: cooccurrence {} edges, complement {}, substitute {}, preference {}",
                nets.cooccurrence.edge_count(),
                nets.complement.edge_count(),
                nets.substitute.edge_count(),
                nets.preference.as_ref().map_or(0, |g| g.edge_count()),
            );
        }
        Command::Features => {
            let mine = mine_stage(&config, &inputs, &parse)?;
            let pair_arts = pairs_stage(&config, &inputs, &parse)?;
            let nets = network_stage(&config, &inputs, &parse, &mine, &pair_arts)?;
            let features = feature_stage(&config, &inputs, &parse, &nets, &pair_arts)?;
            writer.write(
                "features_combined.tsv",
                &pipeline::matrix_table(&features.combined),
            )?;
            println!(
                "{} rows x {} features",
                features.combined.rows.len(),
                features.combined.names.len()
            );
        }
        Command::Train => {
            let mine = mine_stage(&config, &inputs, &parse)?;
            let pair_arts = pairs_stage(&config, &inputs, &parse)?;
            let nets = network_stage(&config, &inputs, &parse, &mine, &pair_arts)?;
            let features = feature_stage(&config, &inputs, &parse, &nets, &pair_arts)?;
            let train = train_stage(&config, &features)?;
            writer.write("model.gbt", &gbt::model_to_string(&train.model))?;
            println!(
                "train accuracy {:.4}, test accuracy {:.4} ({} / {} rows)",
                train.train_accuracy, train.test_accuracy, train.train_rows, train.test_rows
            );
        }
        Command::Evaluate { model } => {
            let mine = mine_stage(&config, &inputs, &parse)?;
            let pair_arts = pairs_stage(&config, &inputs, &parse)?;
            let nets = network_stage(&config, &inputs, &parse, &mine, &pair_arts)?;
            let features = feature_stage(&config, &inputs, &parse, &nets, &pair_arts)?;
            let model_path = model.unwrap_or_else(|| out.join("model.gbt"));
            let model = gbt::load_model(&model_path)?;
            let (_, test) =
                gbt::split_train_test(&features.combined, config.train_fraction, config.seed)?;
            let accuracy = model.evaluate(&test.rows, &test.labels)?;
            println!("test accuracy {accuracy:.4} on {} rows", test.rows.len());
        }
        Command::Sweep => {
            let mine = mine_stage(&config, &inputs, &parse)?;
            let pair_arts = pairs_stage(&config, &inputs, &parse)?;
            let nets = network_stage(&config, &inputs, &parse, &mine, &pair_arts)?;
            let rows = run_dimension_sweep(
                &config,
                &inputs,
                &parse,
                &nets,
                &pair_arts,
                &config.sweep_ks,
            )?;
            writer.write("sweep.tsv", &pipeline::sweep_table(&rows))?;
            for row in &rows {
                println!(
                    "k={:<4} networks={:<13} accuracy {:.4}",
                    row.k, row.networks, row.test_accuracy
                );
            }
        }
        Command::Report => {
            let mine = mine_stage(&config, &inputs, &parse)?;
            let pair_arts = pairs_stage(&config, &inputs, &parse)?;
            let nets = network_stage(&config, &inputs, &parse, &mine, &pair_arts)?;
            let features = feature_stage(&config, &inputs, &parse, &nets, &pair_arts)?;
            let train = train_stage(&config, &features)?;
            let conditions = run_conditions(&config, &features, &pair_arts, Some(&train))?;
            writer.write("conditions.tsv", &pipeline::conditions_table(&conditions))?;
            let substitute_basis = &features
                .inputs
                .iter()
                .find(|n| n.name == "substitute")
                .expect("substitute inputs")
                .basis;
            let importance = pipeline::report_importance(
                &train.model,
                &features.combined,
                substitute_basis,
                &parse.vocab,
            )?;
            pipeline::write_importance_reports(&mut writer, &importance)?;
            for condition in &conditions {
                println!(
                    "{:<18} accuracy {:.4}",
                    condition.name, condition.test_accuracy
                );
            }
        }
        Command::Demo | Command::Synth => unreachable!("handled above"),
    }
    Ok(())
}
