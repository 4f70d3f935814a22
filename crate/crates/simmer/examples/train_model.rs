//! Train the gradient-boosted tree classifier on pair features from a
//! synthetic corpus and inspect accuracy and feature-group importance.
//!
//! Run with: `cargo run --example train_model`

use simmer::features::{pair_matrix, FeatureGroup};
use simmer::gbt::{split_train_test, train, GbtConfig};
use simmer::pipeline::{
    feature_stage, load_inputs, mine_stage, network_stage, pairs_stage, parse_stage,
    CorpusSource, PipelineConfig,
};

fn main() {
    // A smaller cousin of the bundled demo corpus.
    let mut synth = simmer::corpus::SyntheticConfig::demo();
    synth.n_recipes = 1200;
    synth.n_users = 300;
    synth.n_reviews = 12_000;
    let mut config = PipelineConfig::from_source(CorpusSource::Synthetic(synth));
    config.svd_k = 25;
    config.gbt = GbtConfig {
        n_trees: 60,
        shrinkage: 0.15,
        seed: 42,
        ..GbtConfig::default()
    };

    let inputs = load_inputs(&config).expect("generator config is valid");
    let parse = parse_stage(&config, &inputs).expect("parse");
    let mine = mine_stage(&config, &inputs, &parse).expect("mine");
    let pair_arts = pairs_stage(&config, &inputs, &parse).expect("pairs");
    let nets = network_stage(&config, &inputs, &parse, &mine, &pair_arts).expect("networks");
    let features = feature_stage(&config, &inputs, &parse, &nets, &pair_arts).expect("features");
    println!(
        "{} pairs, {} combined features",
        pair_arts.pairs.len(),
        features.combined.names.len()
    );

    let matrix = pair_matrix(
        &pair_arts.pairs,
        &features.space,
        &[
            FeatureGroup::Baseline,
            FeatureGroup::Nutrition,
            FeatureGroup::NetPosition,
            FeatureGroup::NetCommunity,
        ],
    );
    let (train_split, test_split) =
        split_train_test(&matrix, 2.0 / 3.0, config.seed).expect("enough rows");
    let gbt_config = GbtConfig {
        seed: config.seed,
        ..config.gbt
    };
    let model = train(
        &train_split.rows,
        &train_split.labels,
        &train_split.names,
        &gbt_config,
    )
    .expect("trainable data");

    println!(
        "train accuracy {:.4}, test accuracy {:.4}",
        model
            .evaluate(&train_split.rows, &train_split.labels)
            .unwrap(),
        model.evaluate(&test_split.rows, &test_split.labels).unwrap()
    );

    println!("\nimportance by feature group:");
    let importance = model.relative_importance().expect("model has splits");
    let mut by_group: std::collections::BTreeMap<&str, f64> = Default::default();
    for ((_, share), group) in importance.iter().zip(&matrix.groups) {
        *by_group.entry(group.name()).or_insert(0.0) += share;
    }
    for (group, share) in &by_group {
        println!("  {group:<15} {share:.3}");
    }

    println!("\ntop 10 features:");
    let mut ranked = importance;
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (name, share) in ranked.iter().take(10) {
        println!("  {share:.4}  {name}");
    }
}
