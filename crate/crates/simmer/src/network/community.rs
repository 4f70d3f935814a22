//! Community detection by greedy multi-level modularity maximization over
//! the symmetrized weight matrix, with a fixed node-visit order and
//! seed-controlled tie-breaking.

use std::collections::BTreeMap;

use rand::Rng;

use super::WeightedDiGraph;
use crate::seeded::substream;

/// A node-to-community assignment with its modularity score.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community id per node index; ids are dense, 0-based, in order of
    /// first appearance.
    pub assignment: Vec<usize>,
    pub n_communities: usize,
    /// Modularity of the assignment on the symmetrized graph.
    pub quality: f64,
}

/// Symmetrized adjacency with self-loop support (needed for aggregation).
struct LevelGraph {
    adj: Vec<BTreeMap<usize, f64>>,
    /// Self-loop weight per node.
    loops: Vec<f64>,
    /// Sum of all degrees (2m).
    two_m: f64,
}

impl LevelGraph {
    fn from_graph(graph: &WeightedDiGraph) -> LevelGraph {
        let n = graph.node_count();
        let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for (a, b, w) in graph.edges() {
            // w'(a,b) = w(a,b) + w(b,a), accumulated from both directions.
            *adj[a].entry(b).or_insert(0.0) += w;
            *adj[b].entry(a).or_insert(0.0) += w;
        }
        let loops = vec![0.0; n];
        let two_m = adj.iter().map(|m| m.values().sum::<f64>()).sum::<f64>();
        LevelGraph { adj, loops, two_m }
    }

    fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Degree including twice the self-loop.
    fn degree(&self, node: usize) -> f64 {
        self.adj[node].values().sum::<f64>() + 2.0 * self.loops[node]
    }

    fn aggregate(&self, assignment: &[usize], n_communities: usize) -> LevelGraph {
        let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n_communities];
        let mut loops = vec![0.0; n_communities];
        for (node, &community) in assignment.iter().enumerate() {
            loops[community] += self.loops[node];
            for (&other, &w) in &self.adj[node] {
                let other_c = assignment[other];
                if other_c == community {
                    // Each undirected internal edge visited from both ends.
                    loops[community] += w / 2.0;
                } else {
                    *adj[community].entry(other_c).or_insert(0.0) += w;
                }
            }
        }
        LevelGraph {
            adj,
            loops,
            two_m: self.two_m,
        }
    }

    fn modularity(&self, assignment: &[usize]) -> f64 {
        if self.two_m == 0.0 {
            return 0.0;
        }
        let n_communities = assignment.iter().max().map_or(0, |m| m + 1);
        let mut internal = vec![0.0; n_communities];
        let mut total_degree = vec![0.0; n_communities];
        for node in 0..self.node_count() {
            let c = assignment[node];
            total_degree[c] += self.degree(node);
            internal[c] += 2.0 * self.loops[node];
            for (&other, &w) in &self.adj[node] {
                if assignment[other] == c {
                    internal[c] += w;
                }
            }
        }
        let mut q = 0.0;
        for c in 0..n_communities {
            q += internal[c] / self.two_m - (total_degree[c] / self.two_m).powi(2);
        }
        q
    }
}

/// Modularity of an assignment on the symmetrized weights of `graph`.
pub fn modularity(graph: &WeightedDiGraph, assignment: &[usize]) -> f64 {
    LevelGraph::from_graph(graph).modularity(assignment)
}

/// Greedy multi-level modularity maximization (Louvain-style).
///
/// Nodes are visited in ascending index order; among equally best moves the
/// choice is made with the seeded RNG, so the partition is deterministic
/// under a fixed seed. Edgeless graphs yield singleton communities.
pub fn detect_communities(graph: &WeightedDiGraph, seed: u64) -> Partition {
    let n = graph.node_count();
    let mut rng = substream(seed, "community.ties");
    let mut level = LevelGraph::from_graph(graph);
    // assignment of original nodes to current-level nodes
    let mut flat: Vec<usize> = (0..n).collect();

    if level.two_m == 0.0 {
        return Partition {
            assignment: flat,
            n_communities: n,
            quality: 0.0,
        };
    }

    loop {
        let (local, improved) = one_level(&level, &mut rng);
        let (relabeled, n_communities) = relabel(&local);
        if !improved {
            break;
        }
        for entry in &mut flat {
            *entry = relabeled[*entry];
        }
        if n_communities == level.node_count() {
            break;
        }
        level = level.aggregate(&relabeled, n_communities);
    }

    let (assignment, n_communities) = relabel(&flat);
    let quality = LevelGraph::from_graph(graph).modularity(&assignment);
    Partition {
        assignment,
        n_communities,
        quality,
    }
}

/// One local-moving pass sweep until no node improves.
fn one_level(level: &LevelGraph, rng: &mut rand_chacha::ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = level.node_count();
    let two_m = level.two_m;
    let mut assignment: Vec<usize> = (0..n).collect();
    let mut community_degree: Vec<f64> = (0..n).map(|i| level.degree(i)).collect();
    let mut improved = false;

    loop {
        let mut moved = false;
        for node in 0..n {
            let current = assignment[node];
            let k = level.degree(node);
            community_degree[current] -= k;

            // Weight from node to each neighboring community.
            let mut to_community: BTreeMap<usize, f64> = BTreeMap::new();
            to_community.insert(current, 0.0);
            for (&other, &w) in &level.adj[node] {
                if other != node {
                    *to_community.entry(assignment[other]).or_insert(0.0) += w;
                }
            }

            // dQ of joining `community` (node currently detached), up to a
            // factor of 2/two_m shared by all candidates.
            let gain = |community: usize, weight_to: f64| {
                weight_to / two_m - community_degree[community] * k / (two_m * two_m)
            };
            let stay_gain = gain(current, to_community[&current]);
            let mut best_gain = stay_gain;
            let mut best: Vec<usize> = vec![current];
            for (&community, &weight_to) in &to_community {
                if community == current {
                    continue;
                }
                let g = gain(community, weight_to);
                if g > best_gain + 1e-12 {
                    best_gain = g;
                    best = vec![community];
                } else if (g - best_gain).abs() <= 1e-12 && g > stay_gain + 1e-12 {
                    best.push(community);
                }
            }
            let target = if best.len() == 1 {
                best[0]
            } else {
                best[rng.random_range(0..best.len())]
            };
            if target != current {
                moved = true;
                improved = true;
            }
            assignment[node] = target;
            community_degree[target] += k;
        }
        if !moved {
            break;
        }
    }
    (assignment, improved)
}

/// Dense 0-based ids in order of first appearance.
fn relabel(assignment: &[usize]) -> (Vec<usize>, usize) {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(assignment.len());
    for &a in assignment {
        let next = map.len();
        let id = *map.entry(a).or_insert(next);
        out.push(id);
    }
    (out, map.len())
}

/// Adjusted Rand index between two labelings of the same nodes; 1 means
/// identical up to renaming, 0 is chance level.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must align");
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let mut joint: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0) += 1;
        *rows.entry(x).or_insert(0) += 1;
        *cols.entry(y).or_insert(0) += 1;
    }
    let choose2 = |k: u64| (k * k.saturating_sub(1)) as f64 / 2.0;
    let sum_joint: f64 = joint.values().map(|&k| choose2(k)).sum();
    let sum_rows: f64 = rows.values().map(|&k| choose2(k)).sum();
    let sum_cols: f64 = cols.values().map(|&k| choose2(k)).sum();
    let total = choose2(n as u64);
    let expected = sum_rows * sum_cols / total;
    let max_index = (sum_rows + sum_cols) / 2.0;
    if (max_index - expected).abs() < 1e-15 {
        return 1.0;
    }
    (sum_joint - expected) / (max_index - expected)
}

#[cfg(test)]
mod tests {
    use super::super::GraphKind;
    use super::*;

    fn graph(n: usize) -> WeightedDiGraph {
        WeightedDiGraph::new(
            GraphKind::Complement,
            (0..n).map(|i| format!("n{i}")).collect(),
        )
    }

    fn clique(g: &mut WeightedDiGraph, nodes: &[usize], w: f64) {
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                g.set_symmetric_edge(a, b, w);
            }
        }
    }

    /// Exhaustive modularity maximizer over all set partitions
    /// (restricted-growth-string enumeration); independent of the greedy
    /// implementation.
    fn best_partition_exhaustive(g: &WeightedDiGraph) -> (Vec<usize>, f64) {
        let n = g.node_count();
        let mut best: (Vec<usize>, f64) = (vec![0; n], f64::NEG_INFINITY);
        let mut rgs = vec![0usize; n];
        loop {
            let q = oracle_modularity(g, &rgs);
            if q > best.1 {
                best = (rgs.clone(), q);
            }
            // next restricted growth string
            let mut i = n as isize - 1;
            loop {
                if i <= 0 {
                    return best;
                }
                let max_prev = rgs[..i as usize].iter().copied().max().unwrap();
                if rgs[i as usize] <= max_prev {
                    rgs[i as usize] += 1;
                    for j in (i as usize + 1)..n {
                        rgs[j] = 0;
                    }
                    break;
                }
                i -= 1;
            }
        }
    }

    /// Direct Q = (1/2m) sum_ij (w_ij - k_i k_j / 2m) delta(c_i, c_j) on the
    /// symmetrized weights.
    fn oracle_modularity(g: &WeightedDiGraph, assignment: &[usize]) -> f64 {
        let n = g.node_count();
        let mut w = vec![vec![0.0; n]; n];
        for (a, b, weight) in g.edges() {
            w[a][b] += weight;
            w[b][a] += weight;
        }
        let k: Vec<f64> = (0..n).map(|i| w[i].iter().sum()).collect();
        let two_m: f64 = k.iter().sum();
        if two_m == 0.0 {
            return 0.0;
        }
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                if assignment[i] == assignment[j] {
                    q += w[i][j] - k[i] * k[j] / two_m;
                }
            }
        }
        q / two_m
    }

    #[test]
    fn two_cliques_with_weak_bridge_split() {
        let mut g = graph(8);
        clique(&mut g, &[0, 1, 2, 3], 1.0);
        clique(&mut g, &[4, 5, 6, 7], 1.0);
        g.set_symmetric_edge(3, 4, 0.1);

        let partition = detect_communities(&g, 7);
        assert_eq!(partition.n_communities, 2);
        assert_eq!(partition.assignment[0], partition.assignment[3]);
        assert_eq!(partition.assignment[4], partition.assignment[7]);
        assert_ne!(partition.assignment[0], partition.assignment[4]);

        let (oracle_best, oracle_q) = best_partition_exhaustive(&g);
        assert!(
            (partition.quality - oracle_q).abs() < 1e-9,
            "greedy {} vs oracle {} ({oracle_best:?})",
            partition.quality,
            oracle_q
        );
        assert!((adjusted_rand_index(&partition.assignment, &oracle_best) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_clique_is_one_community() {
        let mut g = graph(5);
        clique(&mut g, &[0, 1, 2, 3, 4], 1.0);
        let partition = detect_communities(&g, 1);
        assert_eq!(partition.n_communities, 1);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let g = graph(4);
        let partition = detect_communities(&g, 1);
        assert_eq!(partition.n_communities, 4);
        assert_eq!(partition.assignment, vec![0, 1, 2, 3]);
    }

    #[test]
    fn deterministic_under_seed() {
        let mut g = graph(8);
        clique(&mut g, &[0, 1, 2, 3], 1.0);
        clique(&mut g, &[4, 5, 6, 7], 1.0);
        g.set_symmetric_edge(0, 4, 0.2);
        let p1 = detect_communities(&g, 42);
        let p2 = detect_communities(&g, 42);
        assert_eq!(p1, p2);
    }

    #[test]
    fn reported_quality_matches_oracle_formula() {
        let mut g = graph(6);
        clique(&mut g, &[0, 1, 2], 2.0);
        clique(&mut g, &[3, 4, 5], 2.0);
        g.set_symmetric_edge(2, 3, 0.5);
        let partition = detect_communities(&g, 3);
        let q = oracle_modularity(&g, &partition.assignment);
        assert!((partition.quality - q).abs() < 1e-12);
    }

    #[test]
    fn ari_basics() {
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
        let ari = adjusted_rand_index(&[0, 0, 1, 1], &[0, 1, 0, 1]);
        assert!(ari < 0.5, "crossed labels should score low, got {ari}");
    }
}
