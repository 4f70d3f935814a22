//! End-to-end orchestration: parse -> mine -> pairs -> networks ->
//! features -> train -> evaluate, the five-condition comparison, the SVD
//! dimension sweep, and machine-readable reports.
//!
//! All randomness downstream of corpus loading flows from the single
//! `seed` through named substreams, so a rerun with the same config
//! produces a byte-identical report bundle.

mod report;

pub use report::{fmt_opt, graph_edge_list, graph_gml, tsv, ReportWriter};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    generate_synthetic_with_ledger, load_corpus, method_region_table, rating_contrast,
    Corpus, MethodRegionTable, RatingContrast, SyntheticConfig, SyntheticLedger,
};
use crate::features::{
    condition_sets, pair_matrix, pmi_rating_correlation, svd_lowrank, FeatureGroup, FeatureSpace,
    LowRankBasis, NetworkFeatureInputs, PairMatrix, PmiRatingCorrelation, SparseMatrix,
};
use crate::gbt::{self, split_train_test, BoostedEnsemble, GbtConfig};
use crate::ingredients::{coverage, recipe_vocab_indices, Vocabulary};
use crate::mining::{
    detect_modification, extract_corpus_events, modification_stats, stats_correlations,
    CorrelationTable, MinerParams, ModificationEvent, ModificationStats,
};
use crate::network::{
    build_preference, build_substitute, centrality, complement_from_cooccurrence,
    cooccurrence_from_sets, detect_communities, edge_correlation, CentralityKind, GraphKind,
    Partition, PresenceCounts, WeightedDiGraph,
};
use crate::pairs::{generate_pairs_from_parts, IdfTable, PairParams, RecipePair};
use crate::rules::RuleSet;
use crate::seeded::substream;

#[derive(Debug)]
pub struct PipelineError {
    pub stage: &'static str,
    pub message: String,
}

impl PipelineError {
    pub fn stage(stage: &'static str, source: impl fmt::Display) -> PipelineError {
        PipelineError {
            stage,
            message: source.to_string(),
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.message)
    }
}

impl std::error::Error for PipelineError {}

/// Where the corpus comes from: files on disk or the synthetic generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusSource {
    Files { recipes: PathBuf, reviews: PathBuf },
    Synthetic(SyntheticConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreferencePairs {
    /// Use the similarity-gated pairs from the pair dataset.
    Gated,
    /// Use every recipe pair ordered by average rating.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplementParams {
    pub min_cooccurrence: u32,
    pub pmi_threshold: f64,
}

impl Default for ComplementParams {
    fn default() -> Self {
        ComplementParams {
            min_cooccurrence: 5,
            pmi_threshold: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub corpus: CorpusSource,
    /// Rule file path; the embedded default rules when absent.
    #[serde(default)]
    pub rules_path: Option<PathBuf>,
    #[serde(default = "default_top_n")]
    pub top_n: usize,
    #[serde(default)]
    pub miner: MinerParams,
    #[serde(default)]
    pub complement: ComplementParams,
    #[serde(default = "default_substitute_min_count")]
    pub substitute_min_count: u32,
    #[serde(default = "default_preference_pairs")]
    pub preference_pairs: PreferencePairs,
    #[serde(default = "default_svd_k")]
    pub svd_k: usize,
    #[serde(default = "default_svd_tol")]
    pub svd_tol: f64,
    #[serde(default)]
    pub pairs: PairParams,
    /// Optional seeded downsample of the pair dataset (desk-scale runtime
    /// control); `None` keeps every pair.
    #[serde(default)]
    pub max_pairs: Option<usize>,
    #[serde(default)]
    pub gbt: GbtConfig,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default = "default_sweep_ks")]
    pub sweep_ks: Vec<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_top_n() -> usize {
    1000
}
fn default_substitute_min_count() -> u32 {
    5
}
fn default_preference_pairs() -> PreferencePairs {
    PreferencePairs::Gated
}
fn default_svd_k() -> usize {
    50
}
fn default_svd_tol() -> f64 {
    1e-8
}
fn default_train_fraction() -> f64 {
    2.0 / 3.0
}
fn default_sweep_ks() -> Vec<usize> {
    vec![5, 10, 25, 50]
}
fn default_seed() -> u64 {
    42
}

impl PipelineConfig {
    pub fn from_source(corpus: CorpusSource) -> PipelineConfig {
        PipelineConfig {
            corpus,
            rules_path: None,
            top_n: default_top_n(),
            miner: MinerParams::default(),
            complement: ComplementParams::default(),
            substitute_min_count: default_substitute_min_count(),
            preference_pairs: default_preference_pairs(),
            svd_k: default_svd_k(),
            svd_tol: default_svd_tol(),
            pairs: PairParams::default(),
            max_pairs: None,
            gbt: GbtConfig::default(),
            train_fraction: default_train_fraction(),
            sweep_ks: default_sweep_ks(),
            seed: default_seed(),
        }
    }

    /// The bundled demonstration config: a 5,000-recipe, 50,000-review
    /// synthetic corpus with quality planted in ingredient communities and
    /// substitutions, sized to run end to end in well under two minutes.
    pub fn demo() -> PipelineConfig {
        let mut config = PipelineConfig::from_source(CorpusSource::Synthetic(
            SyntheticConfig::demo(),
        ));
        config.top_n = 1000;
        config.max_pairs = Some(6000);
        config.gbt = GbtConfig {
            n_trees: 80,
            max_leaves: 8,
            shrinkage: 0.15,
            subsample_fraction: 0.5,
            min_samples_leaf: 5,
            seed: 42,
        };
        config.sweep_ks = vec![5, 15, 50];
        config
    }

    /// Override the root seed, keeping a synthetic corpus in lockstep.
    pub fn with_seed(mut self, seed: u64) -> PipelineConfig {
        self.seed = seed;
        if let CorpusSource::Synthetic(ref mut synth) = self.corpus {
            synth.seed = seed;
        }
        self
    }

    pub fn load(path: &Path) -> Result<PipelineConfig, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::stage("config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| PipelineError::stage("config", format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

// ── Stage artifacts ────────────────────────────────────────────────────

pub struct LoadedInputs {
    pub rules: RuleSet,
    pub corpus: Corpus,
    pub ledger: Option<SyntheticLedger>,
}

pub struct ParseArts {
    pub vocab: Vocabulary,
    pub ingredient_sets: Vec<BTreeSet<usize>>,
    pub presence: PresenceCounts,
    pub coverage: f64,
    pub region_table: Option<MethodRegionTable>,
}

pub struct MineArts {
    pub events: Vec<ModificationEvent>,
    pub stats: ModificationStats,
    pub correlations: Option<CorrelationTable>,
    pub flagged_fraction: f64,
    pub contrast: Option<RatingContrast>,
}

pub struct PairArts {
    pub pairs: Vec<RecipePair>,
}

pub struct NetworkArts {
    pub cooccurrence: WeightedDiGraph,
    pub complement: WeightedDiGraph,
    pub substitute: WeightedDiGraph,
    pub preference: Option<WeightedDiGraph>,
    pub preference_substitute_rho: Option<f64>,
    pub partitions: BTreeMap<GraphKind, Partition>,
    pub pmi_rating: Option<PmiRatingCorrelation>,
}

pub struct FeatureArts {
    pub inputs: Vec<NetworkFeatureInputs>,
    pub space: FeatureSpace,
    pub combined: PairMatrix,
}

pub struct TrainArts {
    pub model: BoostedEnsemble,
    pub train_rows: usize,
    pub test_rows: usize,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone)]
pub struct ConditionResult {
    pub name: &'static str,
    pub n_features: usize,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub k: usize,
    pub networks: String,
    pub n_features: usize,
    pub test_accuracy: f64,
}

// ── Stage functions ────────────────────────────────────────────────────

pub fn load_inputs(config: &PipelineConfig) -> Result<LoadedInputs, PipelineError> {
    let rules = match &config.rules_path {
        Some(path) => RuleSet::from_path(path).map_err(|e| PipelineError::stage("load", e))?,
        None => RuleSet::builtin(),
    };
    let (corpus, ledger) = match &config.corpus {
        CorpusSource::Files { recipes, reviews } => (
            load_corpus(recipes, reviews).map_err(|e| PipelineError::stage("load", e))?,
            None,
        ),
        CorpusSource::Synthetic(synth) => {
            let (corpus, ledger) =
                generate_synthetic_with_ledger(synth).map_err(|e| PipelineError::stage("load", e))?;
            (corpus, Some(ledger))
        }
    };
    Ok(LoadedInputs {
        rules,
        corpus,
        ledger,
    })
}

pub fn parse_stage(
    config: &PipelineConfig,
    inputs: &LoadedInputs,
) -> Result<ParseArts, PipelineError> {
    let vocab = Vocabulary::build(&inputs.corpus, config.top_n, &inputs.rules)
        .map_err(|e| PipelineError::stage("parse", e))?;
    let ingredient_sets: Vec<BTreeSet<usize>> = inputs
        .corpus
        .recipes()
        .iter()
        .map(|r| recipe_vocab_indices(r, &vocab, &inputs.rules))
        .collect();
    let presence = PresenceCounts::from_corpus(&inputs.corpus, &vocab, &inputs.rules);
    let coverage = coverage(&inputs.corpus, &vocab, &inputs.rules);

    // Region-by-method table over the six most used methods.
    let region_table = {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for recipe in inputs.corpus.recipes() {
            for method in
                crate::ingredients::extract_methods(&recipe.directions, &inputs.rules.methods)
            {
                *counts.entry(method).or_insert(0) += 1;
            }
        }
        let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let top: BTreeSet<String> = ranked.into_iter().take(6).map(|(m, _)| m).collect();
        method_region_table(&inputs.corpus, &top, &inputs.rules.methods).ok()
    };

    Ok(ParseArts {
        vocab,
        ingredient_sets,
        presence,
        coverage,
        region_table,
    })
}

pub fn mine_stage(
    config: &PipelineConfig,
    inputs: &LoadedInputs,
    parse: &ParseArts,
) -> Result<MineArts, PipelineError> {
    let events = extract_corpus_events(&inputs.corpus, &parse.vocab, &inputs.rules, &config.miner);
    let stats = modification_stats(&events, &parse.vocab);
    let correlations = stats_correlations(&stats).ok();

    let mut flagged = 0usize;
    let mut flagged_ratings = Vec::new();
    let mut plain_ratings = Vec::new();
    for review in inputs.corpus.reviews() {
        if detect_modification(&review.text, &inputs.rules.signals) {
            flagged += 1;
            flagged_ratings.push(review.rating as f64);
        } else {
            plain_ratings.push(review.rating as f64);
        }
    }
    let n_reviews = inputs.corpus.reviews().len();
    let flagged_fraction = if n_reviews == 0 {
        0.0
    } else {
        flagged as f64 / n_reviews as f64
    };
    let contrast = rating_contrast(&flagged_ratings, &plain_ratings).ok();

    Ok(MineArts {
        events,
        stats,
        correlations,
        flagged_fraction,
        contrast,
    })
}

pub fn pairs_stage(
    config: &PipelineConfig,
    inputs: &LoadedInputs,
    parse: &ParseArts,
) -> Result<PairArts, PipelineError> {
    let idf = IdfTable::from_presence(&parse.presence);
    let mut pairs = generate_pairs_from_parts(
        &inputs.corpus,
        &parse.ingredient_sets,
        &idf,
        &config.pairs,
    );
    if let Some(cap) = config.max_pairs {
        if pairs.len() > cap {
            let mut order: Vec<usize> = (0..pairs.len()).collect();
            order.shuffle(&mut substream(config.seed, "pairs.cap"));
            order.truncate(cap);
            order.sort_unstable();
            pairs = order.into_iter().map(|i| pairs[i].clone()).collect();
        }
    }
    Ok(PairArts { pairs })
}

pub fn network_stage(
    config: &PipelineConfig,
    inputs: &LoadedInputs,
    parse: &ParseArts,
    mine: &MineArts,
    pair_arts: &PairArts,
) -> Result<NetworkArts, PipelineError> {
    let cooccurrence = cooccurrence_from_sets(&parse.ingredient_sets, &parse.vocab);
    let complement = complement_from_cooccurrence(
        &cooccurrence,
        &parse.presence,
        config.complement.pmi_threshold,
        config.complement.min_cooccurrence,
    );
    let substitute = build_substitute(&mine.events, &parse.vocab, config.substitute_min_count);

    let ordered: Vec<(usize, usize)> = match config.preference_pairs {
        PreferencePairs::Gated => pair_arts
            .pairs
            .iter()
            .map(|p| (p.hi_index, p.lo_index))
            .collect(),
        PreferencePairs::All => {
            let ratings = inputs.corpus.average_ratings();
            let ids: Vec<(usize, f64)> = inputs
                .corpus
                .recipes()
                .iter()
                .enumerate()
                .filter_map(|(i, r)| ratings.get(&r.id).map(|&avg| (i, avg)))
                .collect();
            let mut out = Vec::new();
            for (i, &(a, ra)) in ids.iter().enumerate() {
                for &(b, rb) in &ids[i + 1..] {
                    if ra > rb {
                        out.push((a, b));
                    } else if rb > ra {
                        out.push((b, a));
                    }
                }
            }
            out
        }
    };
    let preference = build_preference(
        &ordered,
        &parse.ingredient_sets,
        &parse.presence,
        &parse.vocab,
    )
    .ok();
    let preference_substitute_rho = preference
        .as_ref()
        .and_then(|p| edge_correlation(p, &substitute).ok());

    let mut partitions = BTreeMap::new();
    for graph in [&cooccurrence, &complement, &substitute] {
        partitions.insert(graph.kind(), detect_communities(graph, config.seed));
    }
    if let Some(p) = &preference {
        partitions.insert(p.kind(), detect_communities(p, config.seed));
    }

    let pmi_rating = pmi_rating_correlation(
        &inputs.corpus,
        &parse.ingredient_sets,
        &cooccurrence,
        &parse.presence,
    )
    .ok();

    Ok(NetworkArts {
        cooccurrence,
        complement,
        substitute,
        preference,
        preference_substitute_rho,
        partitions,
        pmi_rating,
    })
}

fn graph_matrix(graph: &WeightedDiGraph) -> SparseMatrix {
    let n = graph.node_count();
    SparseMatrix {
        rows: n,
        cols: n,
        triplets: graph.edges().collect(),
    }
}

/// Centralities and SVD basis for one network, at the given rank.
fn network_inputs(
    graph: &WeightedDiGraph,
    name: &'static str,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<NetworkFeatureInputs, PipelineError> {
    let centralities = CentralityKind::ALL
        .iter()
        .map(|&kind| (kind, centrality(graph, kind)))
        .collect();
    let basis = if graph.edge_count() == 0 {
        // An empty network contributes empty community features.
        LowRankBasis {
            k: 0,
            singular_values: Vec::new(),
            left: Vec::new(),
            right: vec![],
        }
    } else {
        svd_lowrank(&graph_matrix(graph), k, tol, seed)
            .map_err(|e| PipelineError::stage("features", e))?
    };
    Ok(NetworkFeatureInputs {
        name,
        centralities,
        basis,
    })
}

pub fn feature_stage(
    config: &PipelineConfig,
    inputs: &LoadedInputs,
    parse: &ParseArts,
    nets: &NetworkArts,
    pair_arts: &PairArts,
) -> Result<FeatureArts, PipelineError> {
    let k = if config.svd_k > parse.vocab.len() {
        log::warn!(
            "svd_k {} exceeds vocabulary size {}; clamping",
            config.svd_k,
            parse.vocab.len()
        );
        parse.vocab.len()
    } else {
        config.svd_k
    };
    let network_list: [(&'static str, &WeightedDiGraph); 3] = [
        ("cooccurrence", &nets.cooccurrence),
        ("complement", &nets.complement),
        ("substitute", &nets.substitute),
    ];
    let mut feature_inputs = Vec::new();
    for (name, graph) in network_list {
        feature_inputs.push(network_inputs(graph, name, k, config.svd_tol, config.seed)?);
    }
    let space = FeatureSpace::build(&inputs.corpus, &parse.vocab, &inputs.rules, &feature_inputs)
        .map_err(|e| PipelineError::stage("features", e))?;
    let combined = pair_matrix(
        &pair_arts.pairs,
        &space,
        &[
            FeatureGroup::Baseline,
            FeatureGroup::Nutrition,
            FeatureGroup::NetPosition,
            FeatureGroup::NetCommunity,
        ],
    );
    Ok(FeatureArts {
        inputs: feature_inputs,
        space,
        combined,
    })
}

fn train_matrix(
    config: &PipelineConfig,
    matrix: &PairMatrix,
) -> Result<TrainArts, PipelineError> {
    let (train_split, test_split) = split_train_test(matrix, config.train_fraction, config.seed)
        .map_err(|e| PipelineError::stage("train", e))?;
    let gbt_config = GbtConfig {
        seed: config.seed,
        ..config.gbt
    };
    let model = gbt::train(
        &train_split.rows,
        &train_split.labels,
        &train_split.names,
        &gbt_config,
    )
    .map_err(|e| PipelineError::stage("train", e))?;
    let train_accuracy = model
        .evaluate(&train_split.rows, &train_split.labels)
        .map_err(|e| PipelineError::stage("evaluate", e))?;
    let test_accuracy = model
        .evaluate(&test_split.rows, &test_split.labels)
        .map_err(|e| PipelineError::stage("evaluate", e))?;
    Ok(TrainArts {
        model,
        train_rows: train_split.rows.len(),
        test_rows: test_split.rows.len(),
        train_accuracy,
        test_accuracy,
    })
}

pub fn train_stage(
    config: &PipelineConfig,
    features: &FeatureArts,
) -> Result<TrainArts, PipelineError> {
    train_matrix(config, &features.combined)
}

/// Train and evaluate one model per feature-set condition with identical
/// splits (paired comparison). The combined condition reuses `trained`
/// when provided.
pub fn run_conditions(
    config: &PipelineConfig,
    features: &FeatureArts,
    pair_arts: &PairArts,
    trained_combined: Option<&TrainArts>,
) -> Result<Vec<ConditionResult>, PipelineError> {
    let mut results = Vec::new();
    for (name, selection) in condition_sets() {
        if name == "combined" {
            if let Some(arts) = trained_combined {
                results.push(ConditionResult {
                    name,
                    n_features: features.combined.names.len(),
                    train_accuracy: arts.train_accuracy,
                    test_accuracy: arts.test_accuracy,
                });
                continue;
            }
        }
        let matrix = pair_matrix(&pair_arts.pairs, &features.space, &selection);
        let arts = train_matrix(config, &matrix)?;
        results.push(ConditionResult {
            name,
            n_features: matrix.names.len(),
            train_accuracy: arts.train_accuracy,
            test_accuracy: arts.test_accuracy,
        });
    }
    Ok(results)
}

/// Accuracy over a grid of SVD ranks and network subsets, with identical
/// splits everywhere.
pub fn run_dimension_sweep(
    config: &PipelineConfig,
    inputs: &LoadedInputs,
    parse: &ParseArts,
    nets: &NetworkArts,
    pair_arts: &PairArts,
    ks: &[usize],
) -> Result<Vec<SweepRow>, PipelineError> {
    let subsets: [(&'static str, Vec<(&'static str, &WeightedDiGraph)>); 4] = [
        ("cooccurrence", vec![("cooccurrence", &nets.cooccurrence)]),
        ("complement", vec![("complement", &nets.complement)]),
        ("substitute", vec![("substitute", &nets.substitute)]),
        (
            "all",
            vec![
                ("cooccurrence", &nets.cooccurrence),
                ("complement", &nets.complement),
                ("substitute", &nets.substitute),
            ],
        ),
    ];
    let mut rows = Vec::new();
    for &k in ks {
        let k_eff = k.min(parse.vocab.len());
        if k_eff < k {
            log::warn!("sweep k {k} exceeds vocabulary size; clamped to {k_eff}");
        }
        for (subset_name, graphs) in &subsets {
            let mut feature_inputs = Vec::new();
            for (name, graph) in graphs {
                feature_inputs.push(network_inputs(graph, name, k_eff, config.svd_tol, config.seed)?);
            }
            let space =
                FeatureSpace::build(&inputs.corpus, &parse.vocab, &inputs.rules, &feature_inputs)
                    .map_err(|e| PipelineError::stage("sweep", e))?;
            let matrix = pair_matrix(
                &pair_arts.pairs,
                &space,
                &[
                    FeatureGroup::Baseline,
                    FeatureGroup::NetPosition,
                    FeatureGroup::NetCommunity,
                ],
            );
            let arts = train_matrix(config, &matrix)?;
            rows.push(SweepRow {
                k: k_eff,
                networks: subset_name.to_string(),
                n_features: matrix.names.len(),
                test_accuracy: arts.test_accuracy,
            });
        }
    }
    Ok(rows)
}

/// Grouped importance shares, the top-100 features, and the six
/// highest-intensity ingredients of the most influential
/// substitute-network SVD dimensions.
pub struct ImportanceReport {
    pub group_shares: Vec<(FeatureGroup, f64)>,
    /// (feature name, group, share), descending.
    pub top_features: Vec<(String, FeatureGroup, f64)>,
    /// Per influential substitute dimension: (dimension, importance share,
    /// [(ingredient, squared intensity); 6]).
    pub substitution_dimensions: Vec<(usize, f64, Vec<(String, f64)>)>,
}

pub fn report_importance(
    model: &BoostedEnsemble,
    matrix: &PairMatrix,
    substitute_basis: &LowRankBasis,
    vocab: &Vocabulary,
) -> Result<ImportanceReport, PipelineError> {
    let importance = model
        .relative_importance()
        .map_err(|e| PipelineError::stage("report", e))?;

    let mut by_group: BTreeMap<FeatureGroup, f64> = BTreeMap::new();
    for ((_, share), group) in importance.iter().zip(&matrix.groups) {
        *by_group.entry(*group).or_insert(0.0) += share;
    }
    let group_shares: Vec<(FeatureGroup, f64)> = by_group.into_iter().collect();

    let mut ranked: Vec<(String, FeatureGroup, f64)> = importance
        .iter()
        .zip(&matrix.groups)
        .map(|((name, share), group)| (name.clone(), *group, *share))
        .collect();
    ranked.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(100);

    // Importance per substitute-SVD dimension, summed over both sides.
    let mut dim_importance: BTreeMap<usize, f64> = BTreeMap::new();
    for (name, share) in &importance {
        if let Some(rest) = name
            .strip_prefix("a.community_substitute_")
            .or_else(|| name.strip_prefix("b.community_substitute_"))
        {
            if let Ok(dim) = rest.parse::<usize>() {
                *dim_importance.entry(dim).or_insert(0.0) += share;
            }
        }
    }
    let mut dims: Vec<(usize, f64)> = dim_importance.into_iter().collect();
    dims.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    dims.truncate(5);
    let substitution_dimensions = dims
        .into_iter()
        .filter(|&(dim, _)| dim < substitute_basis.k)
        .map(|(dim, share)| {
            let column = &substitute_basis.right[dim];
            let mut intensities: Vec<(String, f64)> = column
                .iter()
                .enumerate()
                .map(|(i, v)| (vocab.name(i).to_string(), v * v))
                .collect();
            intensities.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            intensities.truncate(6);
            (dim, share, intensities)
        })
        .collect();

    Ok(ImportanceReport {
        group_shares,
        top_features: ranked,
        substitution_dimensions,
    })
}

// ── Full pipeline with reports ─────────────────────────────────────────

pub struct RunSummary {
    pub conditions: Vec<ConditionResult>,
    pub train: TrainArts,
    pub n_pairs: usize,
    pub coverage: f64,
}

/// Execute every stage, write the full report bundle into `out_dir`, and
/// return the headline results. Identical config and seed give a
/// byte-identical bundle.
pub fn run_pipeline(config: &PipelineConfig, out_dir: &Path) -> Result<RunSummary, PipelineError> {
    let mut writer = ReportWriter::new(out_dir)?;
    let inputs = load_inputs(config)?;
    let parse = parse_stage(config, &inputs)?;
    write_parse_reports(&mut writer, &inputs, &parse)?;

    let mine = mine_stage(config, &inputs, &parse)?;
    write_mine_reports(&mut writer, &mine)?;

    let pair_arts = pairs_stage(config, &inputs, &parse)?;
    writer.write("pairs.tsv", &pairs_table(&pair_arts.pairs))?;

    let nets = network_stage(config, &inputs, &parse, &mine, &pair_arts)?;
    write_network_reports(&mut writer, &nets)?;

    let features = feature_stage(config, &inputs, &parse, &nets, &pair_arts)?;
    writer.write("features_combined.tsv", &matrix_table(&features.combined))?;

    let train = train_stage(config, &features)?;
    writer.write("model.gbt", &gbt::model_to_string(&train.model))?;
    writer.write(
        "evaluation.tsv",
        &tsv(
            &["metric", "value"],
            &[
                vec!["train_rows".into(), train.train_rows.to_string()],
                vec!["test_rows".into(), train.test_rows.to_string()],
                vec!["train_accuracy".into(), format!("{}", train.train_accuracy)],
                vec!["test_accuracy".into(), format!("{}", train.test_accuracy)],
            ],
        ),
    )?;

    let conditions = run_conditions(config, &features, &pair_arts, Some(&train))?;
    writer.write("conditions.tsv", &conditions_table(&conditions))?;

    let substitute_basis = &features
        .inputs
        .iter()
        .find(|n| n.name == "substitute")
        .expect("substitute network inputs")
        .basis;
    let importance = report_importance(&train.model, &features.combined, substitute_basis, &parse.vocab)?;
    write_importance_reports(&mut writer, &importance)?;

    writer.finish(&config.to_json())?;
    Ok(RunSummary {
        conditions,
        train,
        n_pairs: pair_arts.pairs.len(),
        coverage: parse.coverage,
    })
}

// ── Report assembly ────────────────────────────────────────────────────

pub fn write_parse_reports(
    writer: &mut ReportWriter,
    inputs: &LoadedInputs,
    parse: &ParseArts,
) -> Result<(), PipelineError> {
    let vocab_rows: Vec<Vec<String>> = parse
        .vocab
        .entries()
        .iter()
        .map(|(name, freq)| vec![name.clone(), freq.to_string()])
        .collect();
    writer.write(
        "vocabulary.tsv",
        &tsv(&["ingredient", "recipe_frequency"], &vocab_rows),
    )?;
    writer.write(
        "parse_summary.tsv",
        &tsv(
            &["metric", "value"],
            &[
                vec!["n_recipes".into(), inputs.corpus.recipes().len().to_string()],
                vec!["n_reviews".into(), inputs.corpus.reviews().len().to_string()],
                vec!["vocabulary_size".into(), parse.vocab.len().to_string()],
                vec!["coverage".into(), format!("{}", parse.coverage)],
            ],
        ),
    )?;
    if let Some(table) = &parse.region_table {
        let mut header = vec!["region"];
        for m in &table.methods {
            header.push(m);
        }
        let mut rows: Vec<Vec<String>> = Vec::new();
        for (region, counts) in table.regions.iter().zip(&table.counts) {
            let mut row = vec![region.name().to_string()];
            row.extend(counts.iter().map(|c| c.to_string()));
            rows.push(row);
        }
        let mut out = tsv(&header, &rows);
        out.push_str(&format!(
            "# chi_square {}\tdf {}\n",
            table.chi_square, table.degrees_of_freedom
        ));
        writer.write("region_methods.tsv", &out)?;
    }
    Ok(())
}

pub fn write_mine_reports(writer: &mut ReportWriter, mine: &MineArts) -> Result<(), PipelineError> {
    let mut event_rows = Vec::with_capacity(mine.events.len());
    for e in &mine.events {
        event_rows.push(vec![
            e.review_id.to_string(),
            e.recipe_id.clone(),
            e.kind.name().to_string(),
            e.ingredient_a.clone(),
            e.ingredient_b.clone().unwrap_or_default(),
            e.clause.clone(),
        ]);
    }
    writer.write(
        "events.tsv",
        &tsv(
            &["review_id", "recipe_id", "kind", "ingredient_a", "ingredient_b", "clause"],
            &event_rows,
        ),
    )?;

    let stat_rows: Vec<Vec<String>> = mine
        .stats
        .per_ingredient
        .iter()
        .map(|(name, c)| {
            let rate = |count: u32| {
                ModificationStats::rate(count, c.recipe_frequency)
                    .map(|r| format!("{r}"))
                    .unwrap_or_else(|| "undefined".into())
            };
            vec![
                name.clone(),
                c.recipe_frequency.to_string(),
                c.additions.to_string(),
                c.deletions.to_string(),
                c.increases.to_string(),
                c.decreases.to_string(),
                rate(c.additions),
                rate(c.deletions),
                rate(c.increases),
                rate(c.decreases),
            ]
        })
        .collect();
    writer.write(
        "modification_stats.tsv",
        &tsv(
            &[
                "ingredient",
                "recipe_frequency",
                "additions",
                "deletions",
                "increases",
                "decreases",
                "addition_rate",
                "deletion_rate",
                "increase_rate",
                "decrease_rate",
            ],
            &stat_rows,
        ),
    )?;

    if let Some(table) = &mine.correlations {
        let mut rows = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                rows.push(vec![
                    table.labels[i].to_string(),
                    table.labels[j].to_string(),
                    fmt_opt(table.values[i][j]),
                ]);
            }
        }
        writer.write(
            "modification_correlations.tsv",
            &tsv(&["column_a", "column_b", "pearson"], &rows),
        )?;
    }

    let mut contrast_rows = vec![vec![
        "flagged_fraction".to_string(),
        format!("{}", mine.flagged_fraction),
    ]];
    if let Some(c) = &mine.contrast {
        contrast_rows.push(vec!["mean_modified".into(), format!("{}", c.mean_a)]);
        contrast_rows.push(vec!["mean_unmodified".into(), format!("{}", c.mean_b)]);
        contrast_rows.push(vec!["welch_t".into(), format!("{}", c.welch_t)]);
        contrast_rows.push(vec!["bartlett".into(), format!("{}", c.bartlett)]);
    }
    writer.write(
        "rating_contrast.tsv",
        &tsv(&["metric", "value"], &contrast_rows),
    )?;
    Ok(())
}

pub fn pairs_table(pairs: &[RecipePair]) -> String {
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|p| {
            vec![
                p.recipe_hi.clone(),
                p.recipe_lo.clone(),
                format!("{}", p.similarity),
                p.n_common_raters.to_string(),
                format!("{}", p.majority_fraction),
            ]
        })
        .collect();
    tsv(
        &["recipe_hi", "recipe_lo", "similarity", "n_common", "majority"],
        &rows,
    )
}

pub fn write_network_reports(
    writer: &mut ReportWriter,
    nets: &NetworkArts,
) -> Result<(), PipelineError> {
    let mut graphs: Vec<&WeightedDiGraph> =
        vec![&nets.cooccurrence, &nets.complement, &nets.substitute];
    if let Some(p) = &nets.preference {
        graphs.push(p);
    }
    for graph in graphs {
        let kind = graph.kind().name();
        writer.write(&format!("{kind}.tsv"), &graph_edge_list(graph))?;
        let partition = &nets.partitions[&graph.kind()];
        let centralities: Vec<(&str, Vec<f64>)> = [
            CentralityKind::DegreeTotal,
            CentralityKind::Strength,
            CentralityKind::PageRank,
        ]
        .iter()
        .map(|&k| (k.name(), centrality(graph, k)))
        .collect();
        writer.write(
            &format!("{kind}.gml"),
            &graph_gml(graph, partition, &centralities),
        )?;
        writer.write(
            &format!("communities_{kind}.tsv"),
            &{
                let mut rows: Vec<Vec<String>> = (0..graph.node_count())
                    .map(|i| {
                        vec![
                            graph.node_name(i).to_string(),
                            partition.assignment[i].to_string(),
                        ]
                    })
                    .collect();
                rows.push(vec!["# modularity".into(), format!("{}", partition.quality)]);
                tsv(&["ingredient", "community"], &rows)
            },
        )?;
    }
    writer.write(
        "preference_correlation.tsv",
        &tsv(
            &["metric", "value"],
            &[vec![
                "preference_substitute_pearson".into(),
                fmt_opt(nets.preference_substitute_rho),
            ]],
        ),
    )?;
    if let Some(p) = &nets.pmi_rating {
        writer.write(
            "pmi_rating.tsv",
            &tsv(
                &["metric", "value"],
                &[
                    vec!["rho_min".into(), fmt_opt(p.rho_min)],
                    vec!["rho_avg".into(), fmt_opt(p.rho_avg)],
                    vec!["rho_max".into(), fmt_opt(p.rho_max)],
                    vec!["n_recipes".into(), p.n_recipes.to_string()],
                ],
            ),
        )?;
    }
    Ok(())
}

pub fn matrix_table(matrix: &PairMatrix) -> String {
    let mut out = String::new();
    out.push_str("recipe_hi\trecipe_lo\t");
    out.push_str(&matrix.names.join("\t"));
    out.push_str("\tlabel\n");
    for ((row, label), (hi, lo)) in matrix
        .rows
        .iter()
        .zip(&matrix.labels)
        .zip(&matrix.pair_keys)
    {
        out.push_str(hi);
        out.push('\t');
        out.push_str(lo);
        for value in row {
            out.push('\t');
            out.push_str(&format!("{value}"));
        }
        out.push_str(&format!("\t{label}\n"));
    }
    out
}

pub fn conditions_table(conditions: &[ConditionResult]) -> String {
    let rows: Vec<Vec<String>> = conditions
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                c.n_features.to_string(),
                format!("{}", c.train_accuracy),
                format!("{}", c.test_accuracy),
            ]
        })
        .collect();
    tsv(
        &["condition", "n_features", "train_accuracy", "test_accuracy"],
        &rows,
    )
}

pub fn write_importance_reports(
    writer: &mut ReportWriter,
    importance: &ImportanceReport,
) -> Result<(), PipelineError> {
    let group_rows: Vec<Vec<String>> = importance
        .group_shares
        .iter()
        .map(|(group, share)| vec![group.name().to_string(), format!("{share}")])
        .collect();
    writer.write(
        "importance_groups.tsv",
        &tsv(&["group", "share"], &group_rows),
    )?;

    let top_rows: Vec<Vec<String>> = importance
        .top_features
        .iter()
        .enumerate()
        .map(|(rank, (name, group, share))| {
            vec![
                (rank + 1).to_string(),
                name.clone(),
                group.name().to_string(),
                format!("{share}"),
            ]
        })
        .collect();
    writer.write(
        "importance_top100.tsv",
        &tsv(&["rank", "feature", "group", "share"], &top_rows),
    )?;

    let mut dim_rows = Vec::new();
    for (dim, share, ingredients) in &importance.substitution_dimensions {
        for (rank, (name, intensity)) in ingredients.iter().enumerate() {
            dim_rows.push(vec![
                dim.to_string(),
                format!("{share}"),
                (rank + 1).to_string(),
                name.clone(),
                format!("{intensity}"),
            ]);
        }
    }
    writer.write(
        "substitution_dimensions.tsv",
        &tsv(
            &["dimension", "dimension_share", "rank", "ingredient", "intensity"],
            &dim_rows,
        ),
    )?;
    Ok(())
}

/// Write sweep results; used by the sweep subcommand.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                r.networks.clone(),
                r.n_features.to_string(),
                format!("{}", r.test_accuracy),
            ]
        })
        .collect();
    tsv(&["k", "networks", "n_features", "test_accuracy"], &table)
}
