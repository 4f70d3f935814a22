//! Node centrality: degrees, strength, betweenness (Brandes), PageRank.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::WeightedDiGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CentralityKind {
    DegreeIn,
    DegreeOut,
    DegreeTotal,
    Strength,
    Betweenness,
    PageRank,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 6] = [
        CentralityKind::DegreeIn,
        CentralityKind::DegreeOut,
        CentralityKind::DegreeTotal,
        CentralityKind::Strength,
        CentralityKind::Betweenness,
        CentralityKind::PageRank,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CentralityKind::DegreeIn => "degree_in",
            CentralityKind::DegreeOut => "degree_out",
            CentralityKind::DegreeTotal => "degree_total",
            CentralityKind::Strength => "strength",
            CentralityKind::Betweenness => "betweenness",
            CentralityKind::PageRank => "pagerank",
        }
    }
}

/// One centrality value per node, indexed like the graph's nodes.
pub fn centrality(graph: &WeightedDiGraph, kind: CentralityKind) -> Vec<f64> {
    match kind {
        CentralityKind::DegreeIn => degrees(graph).0,
        CentralityKind::DegreeOut => degrees(graph).1,
        CentralityKind::DegreeTotal => {
            let (inn, out) = degrees(graph);
            inn.iter().zip(&out).map(|(a, b)| a + b).collect()
        }
        CentralityKind::Strength => strength(graph),
        CentralityKind::Betweenness => betweenness(graph),
        CentralityKind::PageRank => pagerank(graph, 0.85, 1e-10),
    }
}

fn degrees(graph: &WeightedDiGraph) -> (Vec<f64>, Vec<f64>) {
    let n = graph.node_count();
    let mut inn = vec![0.0; n];
    let mut out = vec![0.0; n];
    for (a, b, _) in graph.edges() {
        out[a] += 1.0;
        inn[b] += 1.0;
    }
    (inn, out)
}

/// Total incident edge weight (in plus out).
fn strength(graph: &WeightedDiGraph) -> Vec<f64> {
    let n = graph.node_count();
    let mut s = vec![0.0; n];
    for (a, b, w) in graph.edges() {
        s[a] += w;
        s[b] += w;
    }
    s
}

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance via reversed comparison.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Brandes betweenness on the directed graph, with edge length 1/weight
/// (edges with non-positive weight are unreachable). Scores are normalized
/// by (n-1)(n-2); for symmetric graphs this equals the undirected
/// convention.
fn betweenness(graph: &WeightedDiGraph) -> Vec<f64> {
    let n = graph.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    // 1/weight lengths; adjacency once upfront.
    let adj: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|u| {
            graph
                .out_edges(u)
                .filter(|&(_, w)| w > 0.0)
                .map(|(v, w)| (v, 1.0 / w))
                .collect()
        })
        .collect();

    let per_source: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| brandes_from_source(&adj, n, s))
        .collect();

    // Deterministic summation order regardless of thread scheduling.
    let mut scores = vec![0.0; n];
    for partial in &per_source {
        for (i, v) in partial.iter().enumerate() {
            scores[i] += v;
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64;
    for v in &mut scores {
        *v /= norm;
    }
    scores
}

fn brandes_from_source(adj: &[Vec<(usize, f64)>], n: usize, source: usize) -> Vec<f64> {
    const EPS: f64 = 1e-12;
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut settled_order: Vec<usize> = Vec::with_capacity(n);
    let mut settled = vec![false; n];

    dist[source] = 0.0;
    sigma[source] = 1.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapItem {
        dist: 0.0,
        node: source,
    });

    while let Some(HeapItem { dist: d, node: u }) = heap.pop() {
        if settled[u] || d > dist[u] + EPS {
            continue;
        }
        settled[u] = true;
        settled_order.push(u);
        for &(v, len) in &adj[u] {
            let alt = dist[u] + len;
            let tol = EPS * alt.abs().max(1.0);
            if alt < dist[v] - tol {
                dist[v] = alt;
                sigma[v] = sigma[u];
                preds[v].clear();
                preds[v].push(u);
                heap.push(HeapItem { dist: alt, node: v });
            } else if (alt - dist[v]).abs() <= tol && !settled[v] {
                sigma[v] += sigma[u];
                preds[v].push(u);
            }
        }
    }

    let mut delta = vec![0.0f64; n];
    let mut partial = vec![0.0f64; n];
    for &w in settled_order.iter().rev() {
        for &p in &preds[w] {
            delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
        }
        if w != source {
            partial[w] = delta[w];
        }
    }
    partial
}

/// Power-iteration PageRank: out-weight-proportional transitions over
/// positive-weight edges, uniform teleport, dangling mass spread uniformly.
fn pagerank(graph: &WeightedDiGraph, damping: f64, tolerance: f64) -> Vec<f64> {
    let n = graph.node_count();
    if n == 0 {
        return Vec::new();
    }
    let edges: Vec<(usize, usize, f64)> = graph
        .edges()
        .filter(|&(_, _, w)| w > 0.0)
        .collect();
    let mut out_sum = vec![0.0f64; n];
    for &(a, _, w) in &edges {
        out_sum[a] += w;
    }

    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    for _ in 0..10_000 {
        let mut next = vec![0.0f64; n];
        let mut dangling = 0.0;
        for (i, &r) in rank.iter().enumerate() {
            if out_sum[i] == 0.0 {
                dangling += r;
            }
        }
        for &(a, b, w) in &edges {
            next[b] += damping * rank[a] * w / out_sum[a];
        }
        let shared = (1.0 - damping) * uniform + damping * dangling * uniform;
        for value in &mut next {
            *value += shared;
        }
        let change: f64 = next
            .iter()
            .zip(&rank)
            .map(|(a, b)| (a - b).abs())
            .sum();
        rank = next;
        if change < tolerance {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::super::GraphKind;
    use super::*;

    fn graph_with(names: &[&str]) -> WeightedDiGraph {
        WeightedDiGraph::new(
            GraphKind::Cooccurrence,
            names.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn isolated_node_scores_zero() {
        let mut g = graph_with(&["a", "b", "c"]);
        g.set_symmetric_edge(0, 1, 1.0);
        assert_eq!(centrality(&g, CentralityKind::DegreeTotal)[2], 0.0);
        assert_eq!(centrality(&g, CentralityKind::Betweenness)[2], 0.0);
    }

    #[test]
    fn star_center_has_unit_betweenness() {
        // 5-node star, unit weights: 6 leaf pairs all route through the
        // center; normalized betweenness 1.0 at the center, 0 at leaves.
        let mut g = graph_with(&["center", "l1", "l2", "l3", "l4"]);
        for leaf in 1..5 {
            g.set_symmetric_edge(0, leaf, 1.0);
        }
        let scores = centrality(&g, CentralityKind::Betweenness);
        assert!((scores[0] - 1.0).abs() < 1e-12, "center = {}", scores[0]);
        for leaf in 1..5 {
            assert_eq!(scores[leaf], 0.0);
        }
    }

    #[test]
    fn tree_betweenness_matches_component_pair_counts() {
        // Path a-b-c-d: for a tree the raw pair count through v is the
        // product-sum of component sizes after removing v; directed Brandes
        // doubles it.
        let mut g = graph_with(&["a", "b", "c", "d"]);
        g.set_symmetric_edge(0, 1, 1.0);
        g.set_symmetric_edge(1, 2, 1.0);
        g.set_symmetric_edge(2, 3, 1.0);
        let scores = centrality(&g, CentralityKind::Betweenness);
        let norm = (3 * 2) as f64;
        // b separates {a} from {c, d}: 1 * 2 = 2 unordered, 4 ordered.
        assert!((scores[1] - 4.0 / norm).abs() < 1e-12);
        assert!((scores[2] - 4.0 / norm).abs() < 1e-12);
        assert_eq!(scores[0], 0.0);
        assert_eq!(scores[3], 0.0);
    }

    #[test]
    fn weighted_shortest_paths_use_inverse_weight() {
        // a-b strong (w=10), b-c strong (w=10), a-c weak (w=0.1):
        // 1/10 + 1/10 = 0.2 < 10, so a->c routes through b.
        let mut g = graph_with(&["a", "b", "c"]);
        g.set_symmetric_edge(0, 1, 10.0);
        g.set_symmetric_edge(1, 2, 10.0);
        g.set_symmetric_edge(0, 2, 0.1);
        let scores = centrality(&g, CentralityKind::Betweenness);
        assert!(scores[1] > 0.0);
        assert_eq!(scores[0], 0.0);
        assert_eq!(scores[2], 0.0);
    }

    #[test]
    fn directed_cycle_pagerank_is_uniform() {
        let mut g = graph_with(&["a", "b", "c", "d"]);
        g.set_edge(0, 1, 1.0);
        g.set_edge(1, 2, 1.0);
        g.set_edge(2, 3, 1.0);
        g.set_edge(3, 0, 1.0);
        let pr = centrality(&g, CentralityKind::PageRank);
        for value in &pr {
            assert!((value - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn pagerank_sums_to_one() {
        let mut g = graph_with(&["a", "b", "c", "d", "e"]);
        g.set_edge(0, 1, 2.0);
        g.set_edge(1, 2, 1.0);
        g.set_edge(2, 0, 0.5);
        g.set_edge(3, 0, 1.0); // e is dangling
        let pr = centrality(&g, CentralityKind::PageRank);
        let total: f64 = pr.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "sum = {total}");
    }

    #[test]
    fn degree_kinds_distinguish_direction() {
        let mut g = graph_with(&["a", "b", "c"]);
        g.set_edge(0, 1, 1.0);
        g.set_edge(0, 2, 1.0);
        g.set_edge(1, 0, 1.0);
        assert_eq!(centrality(&g, CentralityKind::DegreeOut), vec![2.0, 1.0, 0.0]);
        assert_eq!(centrality(&g, CentralityKind::DegreeIn), vec![1.0, 1.0, 1.0]);
        assert_eq!(
            centrality(&g, CentralityKind::DegreeTotal),
            vec![3.0, 2.0, 1.0]
        );
    }

    #[test]
    fn strength_sums_incident_weights() {
        let mut g = graph_with(&["a", "b", "c"]);
        g.set_edge(0, 1, 2.5);
        g.set_edge(2, 0, 1.5);
        assert_eq!(centrality(&g, CentralityKind::Strength), vec![4.0, 2.5, 1.5]);
    }
}
