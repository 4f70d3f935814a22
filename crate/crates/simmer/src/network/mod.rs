//! Ingredient networks: co-occurrence, complement (PMI), substitute
//! (p(b|a)), and preference (directed PMI), over a shared weighted
//! digraph representation; plus centrality, community detection, and
//! cross-network correlation.

mod centrality;
mod community;

pub use centrality::{centrality, CentralityKind};
pub use community::{adjusted_rand_index, detect_communities, modularity, Partition};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::corpus::Corpus;
use crate::ingredients::{recipe_vocab_indices, Vocabulary};
use crate::mining::{ModificationEvent, ModificationKind};
use crate::numeric::pearson;
use crate::rules::RuleSet;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("no preference pair counts (zero total)")]
    NoPreferencePairs,
    #[error("graphs share only {0} edges; need at least 3")]
    TooFewCommonEdges(usize),
    #[error("edge weights have zero variance; correlation undefined")]
    ZeroVariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GraphKind {
    Cooccurrence,
    Complement,
    Substitute,
    Preference,
}

impl GraphKind {
    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::Cooccurrence => "cooccurrence",
            GraphKind::Complement => "complement",
            GraphKind::Substitute => "substitute",
            GraphKind::Preference => "preference",
        }
    }
}

/// Weighted directed graph over the ingredient vocabulary.
///
/// Nodes are the full vocabulary (isolated nodes allowed). Symmetric kinds
/// (co-occurrence, complement) store each undirected edge in both
/// directions with equal weight. No self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDiGraph {
    kind: GraphKind,
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), f64>,
}

impl WeightedDiGraph {
    pub fn new(kind: GraphKind, nodes: Vec<String>) -> WeightedDiGraph {
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        WeightedDiGraph {
            kind,
            nodes,
            index,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_vocabulary(kind: GraphKind, vocab: &Vocabulary) -> WeightedDiGraph {
        Self::new(kind, vocab.names().map(String::from).collect())
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.nodes[i]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn node_names(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(String::as_str)
    }

    /// Insert or overwrite a directed edge. Self-loops are forbidden.
    pub fn set_edge(&mut self, from: usize, to: usize, weight: f64) {
        assert_ne!(from, to, "self-loops are not allowed");
        self.edges.insert((from, to), weight);
    }

    /// Insert an undirected edge (both directions, equal weight).
    pub fn set_symmetric_edge(&mut self, a: usize, b: usize, weight: f64) {
        self.set_edge(a, b, weight);
        self.set_edge(b, a, weight);
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<f64> {
        self.edges.get(&(from, to)).copied()
    }

    /// Directed edges in (from, to) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    /// Outgoing edges of one node.
    pub fn out_edges(&self, from: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.edges
            .range((from, usize::MIN)..=(from, usize::MAX))
            .map(|(&(_, to), &w)| (to, w))
    }

    pub fn out_weight_sum(&self, from: usize) -> f64 {
        self.out_edges(from).map(|(_, w)| w).sum()
    }

    /// True when every edge has an equal-weight reverse edge.
    pub fn is_symmetric(&self) -> bool {
        self.edges
            .iter()
            .all(|(&(a, b), &w)| self.weight(b, a) == Some(w))
    }
}

/// Recipe-presence counts behind the probability estimates p(a), p(a,b).
#[derive(Debug, Clone)]
pub struct PresenceCounts {
    pub n_recipes: usize,
    /// Distinct-recipe count per vocabulary ordinal.
    pub presence: Vec<u32>,
}

impl PresenceCounts {
    pub fn from_corpus(corpus: &Corpus, vocab: &Vocabulary, rules: &RuleSet) -> PresenceCounts {
        let mut presence = vec![0u32; vocab.len()];
        for recipe in corpus.recipes() {
            for i in recipe_vocab_indices(recipe, vocab, rules) {
                presence[i] += 1;
            }
        }
        PresenceCounts {
            n_recipes: corpus.recipes().len(),
            presence,
        }
    }

    pub fn probability(&self, ingredient: usize) -> f64 {
        self.presence[ingredient] as f64 / self.n_recipes as f64
    }
}

/// Natural-log pointwise mutual information from recipe-presence counts.
///
/// `None` when the joint count is zero (no edge) or either marginal is
/// zero.
pub fn pmi(joint: u32, count_a: u32, count_b: u32, n_recipes: usize) -> Option<f64> {
    if joint == 0 || count_a == 0 || count_b == 0 || n_recipes == 0 {
        return None;
    }
    let joint_p = joint as f64 / n_recipes as f64;
    let pa = count_a as f64 / n_recipes as f64;
    let pb = count_b as f64 / n_recipes as f64;
    Some((joint_p / (pa * pb)).ln())
}

/// Co-occurrence network: weight(a, b) = number of recipes containing both
/// a and b (each recipe counted once). Zero-count pairs have no edge.
pub fn build_cooccurrence(corpus: &Corpus, vocab: &Vocabulary, rules: &RuleSet) -> WeightedDiGraph {
    let sets: Vec<BTreeSet<usize>> = corpus
        .recipes()
        .iter()
        .map(|r| recipe_vocab_indices(r, vocab, rules))
        .collect();
    cooccurrence_from_sets(&sets, vocab)
}

/// Co-occurrence from precomputed per-recipe vocabulary index sets.
pub fn cooccurrence_from_sets(sets: &[BTreeSet<usize>], vocab: &Vocabulary) -> WeightedDiGraph {
    let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for set in sets {
        let items: Vec<usize> = set.iter().copied().collect();
        for (i, &a) in items.iter().enumerate() {
            for &b in &items[i + 1..] {
                *counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    let mut graph = WeightedDiGraph::from_vocabulary(GraphKind::Cooccurrence, vocab);
    for (&(a, b), &count) in &counts {
        graph.set_symmetric_edge(a, b, count as f64);
    }
    graph
}

/// Complement network: symmetric PMI-weighted edges kept iff the
/// co-occurrence count reaches `min_cooccurrence` and PMI reaches
/// `pmi_threshold`.
pub fn build_complement(
    corpus: &Corpus,
    vocab: &Vocabulary,
    rules: &RuleSet,
    pmi_threshold: f64,
    min_cooccurrence: u32,
) -> WeightedDiGraph {
    let cooccurrence = build_cooccurrence(corpus, vocab, rules);
    let presence = PresenceCounts::from_corpus(corpus, vocab, rules);
    complement_from_cooccurrence(&cooccurrence, &presence, pmi_threshold, min_cooccurrence)
}

/// Complement network from a prebuilt co-occurrence graph.
pub fn complement_from_cooccurrence(
    cooccurrence: &WeightedDiGraph,
    presence: &PresenceCounts,
    pmi_threshold: f64,
    min_cooccurrence: u32,
) -> WeightedDiGraph {
    let mut graph = WeightedDiGraph::new(
        GraphKind::Complement,
        cooccurrence.node_names().map(String::from).collect(),
    );
    for (a, b, count) in cooccurrence.edges() {
        if a >= b {
            continue; // each undirected pair once
        }
        let count = count as u32;
        if count < min_cooccurrence {
            continue;
        }
        if let Some(value) = pmi(
            count,
            presence.presence[a],
            presence.presence[b],
            presence.n_recipes,
        ) {
            if value >= pmi_threshold {
                graph.set_symmetric_edge(a, b, value);
            }
        }
    }
    graph
}

/// Substitute network from extracted substitution events.
///
/// Raw counts below `min_count` are dropped; surviving edges from each
/// node are normalized so out-weights sum to 1 (p(b|a) over survivors).
pub fn build_substitute(
    events: &[ModificationEvent],
    vocab: &Vocabulary,
    min_count: u32,
) -> WeightedDiGraph {
    let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for event in events {
        if event.kind != ModificationKind::Substitute {
            continue;
        }
        let (Some(a), Some(b)) = (
            vocab.get(&event.ingredient_a),
            event
                .ingredient_b
                .as_deref()
                .and_then(|name| vocab.get(name)),
        ) else {
            continue;
        };
        if a == b {
            continue;
        }
        *counts.entry((a, b)).or_insert(0) += 1;
    }
    counts.retain(|_, c| *c >= min_count);

    let mut out_totals: BTreeMap<usize, u32> = BTreeMap::new();
    for (&(a, _), &c) in &counts {
        *out_totals.entry(a).or_insert(0) += c;
    }
    let mut graph = WeightedDiGraph::from_vocabulary(GraphKind::Substitute, vocab);
    for (&(a, b), &c) in &counts {
        graph.set_edge(a, b, c as f64 / out_totals[&a] as f64);
    }
    graph
}

/// Preference network from ordered recipe pairs (higher-rated first).
///
/// Every ingredient `a` unique to the lower-rated recipe and `b` unique to
/// the higher-rated one contributes one directed a -> b pair count; edge
/// weights are the directed PMI log p(a -> b) / (p(a) p(b)).
pub fn build_preference(
    ordered_pairs: &[(usize, usize)],
    ingredient_sets: &[BTreeSet<usize>],
    presence: &PresenceCounts,
    vocab: &Vocabulary,
) -> Result<WeightedDiGraph, NetworkError> {
    let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut total: u64 = 0;
    for &(hi, lo) in ordered_pairs {
        let hi_set = &ingredient_sets[hi];
        let lo_set = &ingredient_sets[lo];
        for &a in lo_set.difference(hi_set) {
            for &b in hi_set.difference(lo_set) {
                *counts.entry((a, b)).or_insert(0) += 1;
                total += 1;
            }
        }
    }
    if total == 0 {
        return Err(NetworkError::NoPreferencePairs);
    }
    let mut graph = WeightedDiGraph::from_vocabulary(GraphKind::Preference, vocab);
    for (&(a, b), &count) in &counts {
        let p_ab = count as f64 / total as f64;
        let pa = presence.probability(a);
        let pb = presence.probability(b);
        if pa > 0.0 && pb > 0.0 {
            graph.set_edge(a, b, (p_ab / (pa * pb)).ln());
        }
    }
    Ok(graph)
}

/// Pearson correlation of edge weights over the directed edges present in
/// both graphs (matched by node name).
pub fn edge_correlation(g1: &WeightedDiGraph, g2: &WeightedDiGraph) -> Result<f64, NetworkError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, b, w1) in g1.edges() {
        let (Some(a2), Some(b2)) = (
            g2.node_index(g1.node_name(a)),
            g2.node_index(g1.node_name(b)),
        ) else {
            continue;
        };
        if let Some(w2) = g2.weight(a2, b2) {
            xs.push(w1);
            ys.push(w2);
        }
    }
    if xs.len() < 3 {
        return Err(NetworkError::TooFewCommonEdges(xs.len()));
    }
    pearson(&xs, &ys).ok_or(NetworkError::ZeroVariance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::testutil::recipe;

    fn rules() -> RuleSet {
        RuleSet::builtin()
    }

    fn corpus_of(recipes: Vec<crate::corpus::Recipe>) -> Corpus {
        Corpus::new(recipes, vec![]).unwrap()
    }

    fn sub_event(i: usize, a: &str, b: &str) -> ModificationEvent {
        ModificationEvent {
            review_id: i,
            recipe_id: format!("r{i}"),
            kind: ModificationKind::Substitute,
            ingredient_a: a.into(),
            ingredient_b: Some(b.into()),
            clause: String::new(),
        }
    }

    #[test]
    fn cooccurrence_counts_recipes_once() {
        let corpus = corpus_of(vec![
            recipe("a", &["salt", "pepper"]),
            recipe("b", &["salt", "pepper", "basil"]),
            recipe("c", &["sugar"]),
        ]);
        let vocab = Vocabulary::build(&corpus, 100, &rules()).unwrap();
        let g = build_cooccurrence(&corpus, &vocab, &rules());
        let salt = g.node_index("salt").unwrap();
        let pepper = g.node_index("pepper").unwrap();
        let sugar = g.node_index("sugar").unwrap();
        let basil = g.node_index("basil").unwrap();
        assert_eq!(g.weight(salt, pepper), Some(2.0));
        assert_eq!(g.weight(pepper, salt), Some(2.0));
        assert_eq!(g.weight(sugar, salt), None);
        assert_eq!(g.weight(basil, pepper), Some(1.0));
    }

    #[test]
    fn cooccurrence_matches_double_loop_oracle() {
        // 5-recipe constructed corpus; oracle is a brute-force double loop
        // over recipe pairs of names.
        let lines: [&[&str]; 5] = [
            &["salt", "pepper", "basil"],
            &["salt", "basil"],
            &["pepper", "sugar"],
            &["salt", "pepper", "sugar", "basil"],
            &["sugar"],
        ];
        let corpus = corpus_of(
            lines
                .iter()
                .enumerate()
                .map(|(i, ls)| recipe(&format!("r{i}"), ls))
                .collect(),
        );
        let vocab = Vocabulary::build(&corpus, 100, &rules()).unwrap();
        let g = build_cooccurrence(&corpus, &vocab, &rules());
        for a in 0..vocab.len() {
            for b in 0..vocab.len() {
                if a == b {
                    continue;
                }
                let oracle = lines
                    .iter()
                    .filter(|ls| {
                        ls.contains(&vocab.name(a)) && ls.contains(&vocab.name(b))
                    })
                    .count() as f64;
                let got = g.weight(a, b).unwrap_or(0.0);
                assert_eq!(got, oracle, "pair {} {}", vocab.name(a), vocab.name(b));
            }
        }
    }

    #[test]
    fn pmi_of_always_joint_pair_is_ln2() {
        // 4 recipes; a, b co-occur in 2 and never apart: PMI = ln 2.
        assert!((pmi(2, 2, 2, 4).unwrap() - 2.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ubiquitous_ingredient_has_zero_pmi() {
        // a in all N recipes: p(a,b) = p(b), PMI = 0.
        assert_eq!(pmi(3, 8, 3, 8).unwrap(), 0.0);
        assert!(pmi(0, 4, 4, 8).is_none());
    }

    #[test]
    fn complement_thresholds_gate_edges() {
        let corpus = corpus_of(vec![
            recipe("a", &["salt", "pepper"]),
            recipe("b", &["salt", "pepper"]),
            recipe("c", &["salt", "basil"]),
            recipe("d", &["basil"]),
        ]);
        let vocab = Vocabulary::build(&corpus, 100, &rules()).unwrap();
        let all = build_complement(&corpus, &vocab, &rules(), f64::NEG_INFINITY, 1);
        assert!(all.edge_count() > 0);
        let none = build_complement(&corpus, &vocab, &rules(), f64::INFINITY, 1);
        assert_eq!(none.edge_count(), 0);
        // min co-occurrence of 2 keeps only salt-pepper.
        let filtered = build_complement(&corpus, &vocab, &rules(), f64::NEG_INFINITY, 2);
        let salt = filtered.node_index("salt").unwrap();
        let pepper = filtered.node_index("pepper").unwrap();
        assert_eq!(filtered.edge_count(), 2);
        assert!(filtered.weight(salt, pepper).is_some());
        assert!(filtered.is_symmetric());
    }

    #[test]
    fn threshold_monotonicity() {
        // Filtering the unthresholded graph just above the top edge's PMI
        // equals rebuilding with that threshold.
        let corpus = corpus_of(vec![
            recipe("a", &["salt", "pepper", "basil"]),
            recipe("b", &["salt", "pepper"]),
            recipe("c", &["basil", "sugar"]),
            recipe("d", &["sugar", "pepper"]),
        ]);
        let vocab = Vocabulary::build(&corpus, 100, &rules()).unwrap();
        let base = build_complement(&corpus, &vocab, &rules(), f64::NEG_INFINITY, 1);
        let max_pmi = base
            .edges()
            .map(|(_, _, w)| w)
            .fold(f64::NEG_INFINITY, f64::max);
        let threshold = max_pmi + 1e-9;
        let rebuilt = build_complement(&corpus, &vocab, &rules(), threshold, 1);
        let filtered: Vec<(usize, usize)> = base
            .edges()
            .filter(|&(_, _, w)| w >= threshold)
            .map(|(a, b, _)| (a, b))
            .collect();
        assert_eq!(
            rebuilt.edges().map(|(a, b, _)| (a, b)).collect::<Vec<_>>(),
            filtered
        );
    }

    #[test]
    fn substitute_weights_are_conditional_proportions() {
        let vocab = Vocabulary::from_entries(vec![
            ("honey".into(), 5),
            ("splenda".into(), 5),
            ("sugar".into(), 9),
        ]);
        let mut events = Vec::new();
        for i in 0..68 {
            events.push(sub_event(i, "sugar", "splenda"));
        }
        for i in 68..100 {
            events.push(sub_event(i, "sugar", "honey"));
        }
        let g = build_substitute(&events, &vocab, 5);
        let sugar = g.node_index("sugar").unwrap();
        let splenda = g.node_index("splenda").unwrap();
        let honey = g.node_index("honey").unwrap();
        assert_eq!(g.weight(sugar, splenda), Some(0.68));
        assert_eq!(g.weight(sugar, honey), Some(0.32));
        assert!((g.out_weight_sum(sugar) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn substitute_threshold_drops_rare_pairs() {
        let vocab = Vocabulary::from_entries(vec![
            ("splenda".into(), 5),
            ("sugar".into(), 9),
        ]);
        let events: Vec<_> = (0..4).map(|i| sub_event(i, "sugar", "splenda")).collect();
        let g = build_substitute(&events, &vocab, 5);
        let sugar = g.node_index("sugar").unwrap();
        assert_eq!(g.out_edges(sugar).count(), 0);
    }

    #[test]
    fn single_surviving_edge_normalizes_to_one() {
        let vocab = Vocabulary::from_entries(vec![
            ("splenda".into(), 5),
            ("sugar".into(), 9),
        ]);
        let events: Vec<_> = (0..5).map(|i| sub_event(i, "sugar", "splenda")).collect();
        let g = build_substitute(&events, &vocab, 5);
        let sugar = g.node_index("sugar").unwrap();
        let splenda = g.node_index("splenda").unwrap();
        assert_eq!(g.weight(sugar, splenda), Some(1.0));
    }

    #[test]
    fn preference_worked_example_two_edges() {
        // X = {beef, ketchup, cheese} rated above Y = {beef, pickles}:
        // exactly pickles -> ketchup and pickles -> cheese.
        let vocab = Vocabulary::from_entries(vec![
            ("beef".into(), 2),
            ("cheese".into(), 1),
            ("ketchup".into(), 1),
            ("pickles".into(), 1),
        ]);
        let beef = vocab.get("beef").unwrap();
        let cheese = vocab.get("cheese").unwrap();
        let ketchup = vocab.get("ketchup").unwrap();
        let pickles = vocab.get("pickles").unwrap();
        let sets = vec![
            [beef, ketchup, cheese].into_iter().collect::<BTreeSet<_>>(),
            [beef, pickles].into_iter().collect::<BTreeSet<_>>(),
        ];
        let presence = PresenceCounts {
            n_recipes: 2,
            presence: vec![2, 1, 1, 1],
        };
        let g = build_preference(&[(0, 1)], &sets, &presence, &vocab).unwrap();
        let edges: Vec<(usize, usize)> = g.edges().map(|(a, b, _)| (a, b)).collect();
        assert_eq!(edges, vec![(pickles, cheese), (pickles, ketchup)]);
    }

    #[test]
    fn symmetric_pair_counts_give_symmetric_directed_pmi() {
        let vocab = Vocabulary::from_entries(vec![("a".into(), 1), ("b".into(), 1)]);
        let sets = vec![
            [0usize].into_iter().collect::<BTreeSet<_>>(),
            [1usize].into_iter().collect::<BTreeSet<_>>(),
        ];
        let presence = PresenceCounts {
            n_recipes: 2,
            presence: vec![1, 1],
        };
        // one pair each way -> equal counts -> equal directed PMI.
        let g = build_preference(&[(0, 1), (1, 0)], &sets, &presence, &vocab).unwrap();
        assert_eq!(g.weight(0, 1), g.weight(1, 0));
    }

    #[test]
    fn preference_matches_brute_force_enumeration() {
        // 3-recipe corpus, all ordered pairs by rating; oracle recomputes
        // every directed count and PMI from scratch.
        let vocab = Vocabulary::from_entries(vec![
            ("basil".into(), 1),
            ("pepper".into(), 2),
            ("salt".into(), 2),
            ("sugar".into(), 1),
        ]);
        let names = ["salt", "pepper", "basil", "sugar"];
        let idx: Vec<usize> = names.iter().map(|n| vocab.get(n).unwrap()).collect();
        let recipe_sets: Vec<BTreeSet<usize>> = vec![
            [idx[0], idx[1]].into_iter().collect(),          // r0: salt pepper
            [idx[0], idx[2]].into_iter().collect(),          // r1: salt basil
            [idx[1], idx[3]].into_iter().collect(),          // r2: pepper sugar
        ];
        let presence = PresenceCounts {
            n_recipes: 3,
            presence: vec![1, 2, 2, 1],
        };
        // ratings r0 > r1 > r2 -> ordered pairs (0,1), (0,2), (1,2)
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        let g = build_preference(&pairs, &recipe_sets, &presence, &vocab).unwrap();

        let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut total = 0u64;
        for &(hi, lo) in &pairs {
            for &a in recipe_sets[lo].difference(&recipe_sets[hi]) {
                for &b in recipe_sets[hi].difference(&recipe_sets[lo]) {
                    *counts.entry((a, b)).or_insert(0) += 1;
                    total += 1;
                }
            }
        }
        for (&(a, b), &c) in &counts {
            let expected = ((c as f64 / total as f64)
                / ((presence.presence[a] as f64 / 3.0) * (presence.presence[b] as f64 / 3.0)))
                .ln();
            let got = g.weight(a, b).unwrap();
            assert!((got - expected).abs() < 1e-12);
        }
        assert_eq!(g.edge_count(), counts.len());
    }

    #[test]
    fn edge_correlation_affine_and_negated() {
        let mut g1 = WeightedDiGraph::new(GraphKind::Substitute, vec!["a".into(), "b".into(), "c".into()]);
        g1.set_edge(0, 1, 0.2);
        g1.set_edge(1, 2, 0.5);
        g1.set_edge(2, 0, 0.9);
        let mut g2 = WeightedDiGraph::new(GraphKind::Preference, vec!["a".into(), "b".into(), "c".into()]);
        for (a, b, w) in g1.edges() {
            g2.set_edge(a, b, 3.0 * w + 1.0);
        }
        assert!((edge_correlation(&g1, &g2).unwrap() - 1.0).abs() < 1e-12);
        let mut g3 = WeightedDiGraph::new(GraphKind::Preference, vec!["a".into(), "b".into(), "c".into()]);
        for (a, b, w) in g1.edges() {
            g3.set_edge(a, b, -w);
        }
        assert!((edge_correlation(&g1, &g3).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn edge_correlation_needs_overlap() {
        let mut g1 = WeightedDiGraph::new(GraphKind::Substitute, vec!["a".into(), "b".into()]);
        g1.set_edge(0, 1, 0.5);
        let g2 = WeightedDiGraph::new(GraphKind::Preference, vec!["a".into(), "b".into()]);
        assert!(matches!(
            edge_correlation(&g1, &g2),
            Err(NetworkError::TooFewCommonEdges(0))
        ));
    }
}
