//! Shared generators and oracles for integration tests.

#![allow(dead_code)]

use opf_cliques::cliques::CliqueList;
use opf_cliques::graph::SparsityGraph;
use opf_cliques::merge::{MergeModel, ModelEdge};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rectangular grid graph with a few deterministic long-range chords, standing
/// in for meshed transmission networks.
pub fn grid_like(rows: usize, cols: usize, extra_chords: usize, seed: u64) -> SparsityGraph {
    let n = rows * cols;
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut added = 0;
    while added < extra_chords {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u.min(v), u.max(v)));
            added += 1;
        }
    }
    SparsityGraph::from_edges(n, edges).unwrap()
}

pub fn random_graph(n: usize, density: f64, rng: &mut ChaCha8Rng) -> SparsityGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    SparsityGraph::from_edges(n, edges).unwrap()
}

/// Subset-enumeration oracle for maximal cliques (n <= 16).
pub fn brute_force_maximal_cliques(g: &SparsityGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    assert!(n <= 16);
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    'subset: for mask in 1u32..(1 << n) {
        let nodes: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                if !g.has_edge(a, b) {
                    continue 'subset;
                }
            }
        }
        cliques.push(nodes);
    }
    let mut maximal: Vec<Vec<usize>> = cliques
        .iter()
        .filter(|c| {
            !cliques
                .iter()
                .any(|d| d.len() > c.len() && c.iter().all(|x| d.contains(x)))
        })
        .cloned()
        .collect();
    maximal.sort();
    maximal
}

/// Kruskal oracle for the total clique-forest weight.
pub fn kruskal_weight(l: &CliqueList) -> u64 {
    fn intersection_size(a: &[usize], b: &[usize]) -> usize {
        let (mut i, mut j, mut k) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    k += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        k
    }
    let r = l.len();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..r {
        for b in a + 1..r {
            let w = intersection_size(&l.cliques()[a], &l.cliques()[b]);
            if w > 0 {
                pairs.push((w, a, b));
            }
        }
    }
    pairs.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut parent: Vec<usize> = (0..r).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut total = 0u64;
    for (w, a, b) in pairs {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            total += w as u64;
        }
    }
    total
}

/// Exhaustive matching oracle: best objective and the lexicographically
/// smallest selected-edge set attaining it (edge count <= 16).
pub fn exhaustive_best_matching(model: &MergeModel) -> (u64, Vec<(usize, usize)>) {
    let m = model.edges.len();
    assert!(m <= 16);
    let mut best_weight = 0u64;
    let mut best_set: Vec<(usize, usize)> = Vec::new();
    for mask in 0u32..(1 << m) {
        let ids: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let mut endpoints = std::collections::BTreeSet::new();
        let mut ok = true;
        let mut weight = 0u64;
        for &i in &ids {
            let e = &model.edges[i];
            if !e.feasible(model.s_max) || !endpoints.insert(e.a) || !endpoints.insert(e.b) {
                ok = false;
                break;
            }
            weight += e.weight;
        }
        if !ok {
            continue;
        }
        let mut set: Vec<(usize, usize)> = ids
            .iter()
            .map(|&i| (model.edges[i].a, model.edges[i].b))
            .collect();
        set.sort_unstable();
        if weight > best_weight || (weight == best_weight && set < best_set) {
            best_weight = weight;
            best_set = set;
        }
    }
    (best_weight, best_set)
}

/// Random forest-shaped merge model with arbitrary weights and sizes.
pub fn random_merge_model(rng: &mut ChaCha8Rng) -> MergeModel {
    let n = 2 + rng.gen_range(0..12);
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen_bool(0.85) {
            let parent = rng.gen_range(0..v);
            let shared = 1 + rng.gen_range(0..5usize);
            let shared_u64 = shared as u64;
            edges.push(ModelEdge {
                a: parent.min(v),
                b: parent.max(v),
                shared,
                merged_size: rng.gen_range(2..60),
                weight: shared_u64 * (shared_u64 + 1) / 2,
            });
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    MergeModel {
        n_blocks: n,
        s_max: 50,
        edges,
    }
}

/// Recomputes headline stats from serialized blocks and separators, as a
/// consistency oracle for reports.
pub fn recompute_stats(
    blocks: &[Vec<String>],
    tree: &[opf_cliques::report::TreeEdgeJson],
) -> (usize, u64, usize) {
    let nc = blocks.len();
    let max = blocks.iter().map(Vec::len).max().unwrap_or(0);
    let nlc = tree
        .iter()
        .map(|e| {
            let k = e.separator.len() as u64;
            k * (k + 1) / 2
        })
        .sum();
    (nc, nlc, max)
}

/// The 20 grid-like instances used by the directional and monotonicity
/// checks: 50 to 500 buses.
pub fn acceptance_grids() -> Vec<SparsityGraph> {
    let dims: [(usize, usize); 20] = [
        (5, 10),
        (6, 10),
        (7, 10),
        (8, 10),
        (9, 10),
        (10, 10),
        (10, 11),
        (10, 12),
        (10, 13),
        (10, 14),
        (10, 15),
        (11, 15),
        (12, 15),
        (13, 15),
        (14, 15),
        (15, 15),
        (15, 18),
        (16, 20),
        (18, 22),
        (20, 25),
    ];
    // pure grids: the directional fill expectation is a heuristic regression
    // statement, and sprinkling random chords makes minimum degree noisy
    // enough to flip it on isolated instances
    dims.iter()
        .enumerate()
        .map(|(i, &(r, c))| grid_like(r, c, 0, i as u64))
        .collect()
}
