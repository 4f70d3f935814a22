//! Build the complement and substitute networks from a synthetic corpus,
//! then inspect centralities and the community structure.
//!
//! Run with: `cargo run --example build_networks`

use std::collections::BTreeMap;

use simmer::corpus::{generate_synthetic, PlantedSubstitution, SyntheticConfig};
use simmer::ingredients::Vocabulary;
use simmer::mining::{extract_corpus_events, MinerParams};
use simmer::network::{
    build_complement, build_substitute, centrality, detect_communities, CentralityKind,
};
use simmer::rules::RuleSet;

fn main() {
    let config = SyntheticConfig {
        n_recipes: 600,
        n_users: 150,
        n_reviews: 3000,
        n_ingredients: 40,
        n_communities: 2,
        community_cohesion: 0.92,
        planted_substitutions: vec![
            PlantedSubstitution {
                original: "butter".into(),
                replacement: "applesauce".into(),
                probability: 0.8,
            },
            PlantedSubstitution {
                original: "sugar".into(),
                replacement: "splenda".into(),
                probability: 0.7,
            },
            PlantedSubstitution {
                original: "milk".into(),
                replacement: "coconut milk".into(),
                probability: 0.6,
            },
        ],
        quality_weights: BTreeMap::new(),
        seed: 11,
        ingredients_per_recipe: (4, 8),
        modification_fraction: 0.6,
        substitute_share: 0.4,
        region_fraction: 0.2,
        rating_noise: 0.7,
        recipe_noise: 0.2,
        base_rating: 3.5,
        pod_size: 30,
    };
    let corpus = generate_synthetic(&config).expect("valid config");
    let rules = RuleSet::builtin();
    let vocab = Vocabulary::build(&corpus, 1000, &rules).expect("non-empty corpus");

    println!("corpus: {} recipes, vocabulary {}", corpus.recipes().len(), vocab.len());

    // Complement network: PMI-thresholded co-occurrence.
    let complement = build_complement(&corpus, &vocab, &rules, 0.0, 5);
    println!("\ncomplement network: {} directed edges", complement.edge_count());

    let pagerank = centrality(&complement, CentralityKind::PageRank);
    let betweenness = centrality(&complement, CentralityKind::Betweenness);
    let mut ranked: Vec<usize> = (0..complement.node_count()).collect();
    ranked.sort_by(|&a, &b| pagerank[b].total_cmp(&pagerank[a]));
    println!("top ingredients by PageRank:");
    for &i in ranked.iter().take(5) {
        println!(
            "  {:<22} pagerank {:.5}  betweenness {:.4}",
            complement.node_name(i),
            pagerank[i],
            betweenness[i]
        );
    }

    // The generator plants two ingredient communities; modularity
    // maximization should find them.
    let partition = detect_communities(&complement, config.seed);
    println!(
        "\ncommunities: {} (modularity {:.4})",
        partition.n_communities, partition.quality
    );
    let mut members: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (node, &community) in partition.assignment.iter().enumerate() {
        members.entry(community).or_default().push(complement.node_name(node));
    }
    for (community, names) in &members {
        let preview: Vec<&str> = names.iter().copied().take(6).collect();
        println!("  community {community}: {} members, e.g. {preview:?}", names.len());
    }

    // Substitute network from mined substitution suggestions.
    let events = extract_corpus_events(&corpus, &vocab, &rules, &MinerParams::default());
    let substitute = build_substitute(&events, &vocab, 5);
    println!("\nsubstitute network: {} edges (p(b|a) weights)", substitute.edge_count());
    for (a, b, w) in substitute.edges().take(8) {
        println!(
            "  {} -> {}  {:.3}",
            substitute.node_name(a),
            substitute.node_name(b),
            w
        );
    }
}
