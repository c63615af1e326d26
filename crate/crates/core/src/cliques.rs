//! Maximal cliques, clique trees and decomposition statistics.
//!
//! For a chordal extension the maximal cliques fall out of the perfect
//! elimination ordering in one pass. The clique graph weights each pair of
//! intersecting cliques by their overlap; a maximum-weight spanning forest of
//! it is a clique tree satisfying the running intersection property, and its
//! separators determine how many linking constraints the decomposed SDP
//! needs: `k(k+1)/2` per separator of `k` real variables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::ChordalExtension;

/// Blocks of a decomposition. Starts out as the maximal cliques of a chordal
/// extension; merging replaces entries by unions, so the general invariant is
/// only that blocks are sorted node sets, pairwise incomparable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueList {
    node_count: usize,
    cliques: Vec<Vec<usize>>,
}

impl CliqueList {
    /// Normalizes: sorts every clique and orders the list lexicographically
    /// (equivalently by smallest-indexed member first).
    pub fn new(node_count: usize, cliques: Vec<Vec<usize>>) -> Self {
        let mut cliques: Vec<Vec<usize>> = cliques
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cliques.sort();
        CliqueList { node_count, cliques }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn max_clique_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Checks the decomposition invariants against an extension: every block
    /// is a clique of the extended graph, no block contains another, and
    /// every edge of the extended graph lies inside some block.
    pub fn is_valid_decomposition_of(&self, h: &ChordalExtension) -> bool {
        let g = h.extended_graph();
        if self.node_count != g.node_count() {
            return false;
        }
        for c in &self.cliques {
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    if !g.has_edge(a, b) {
                        return false;
                    }
                }
            }
        }
        for (i, a) in self.cliques.iter().enumerate() {
            for (j, b) in self.cliques.iter().enumerate() {
                if i != j && is_subset(a, b) {
                    return false;
                }
            }
        }
        g.edges().all(|(u, v)| {
            self.cliques
                .iter()
                .any(|c| c.binary_search(&u).is_ok() && c.binary_search(&v).is_ok())
        })
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Sorted intersection of two sorted slices.
pub(crate) fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// An edge of a clique tree: two block indices and their separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub separator: Vec<usize>,
}

/// A maximum-weight spanning forest of the clique graph, one tree per
/// connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTree {
    pub n_cliques: usize,
    pub components: usize,
    pub edges: Vec<TreeEdge>,
}

impl CliqueTree {
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.separator.len() as u64).sum()
    }
}

/// Enumerates the maximal cliques of a chordal extension along its perfect
/// elimination ordering.
///
/// Every node `v` proposes `{v} ∪ (later neighbors of v)`; the candidate is
/// dropped exactly when some earlier node whose first later neighbor is `v`
/// proposes a superset. Isolated nodes come out as singleton blocks.
pub fn maximal_cliques(h: &ChordalExtension) -> CliqueList {
    let g = h.extended_graph();
    let n = g.node_count();
    let pos = h.peo().positions();

    let mut rn_size = vec![0usize; n];
    let mut follower: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        let later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        rn_size[v] = later.len();
        follower[v] = later.iter().copied().min_by_key(|&u| pos[u]);
    }

    // sub[v]: largest |RN(u)| - 1 among nodes u whose follower is v
    let mut sub: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        if let Some(v) = follower[u] {
            let candidate = rn_size[u] - 1;
            sub[v] = Some(sub[v].map_or(candidate, |s| s.max(candidate)));
        }
    }

    let mut cliques = Vec::new();
    for v in 0..n {
        let subsumed = sub[v].is_some_and(|s| s >= rn_size[v]);
        if subsumed {
            continue;
        }
        let mut clique: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        clique.push(v);
        cliques.push(clique);
    }
    CliqueList::new(n, cliques)
}

/// Builds a clique tree: maximum-weight spanning forest of the clique graph,
/// computed with Prim's algorithm. Ties go to larger weight first, then to
/// the smaller clique-index pair, so the tree is deterministic.
pub fn build_clique_tree(l: &CliqueList) -> CliqueTree {
    let r = l.len();
    let cliques = l.cliques();

    // weight of each intersecting clique pair, via shared vertices
    let mut cliques_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, c) in cliques.iter().enumerate() {
        for &v in c {
            cliques_of.entry(v).or_default().push(ci);
        }
    }
    let mut weights: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for list in cliques_of.values() {
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                *weights.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
    }
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); r];
    for (&(a, b), &w) in &weights {
        adjacency[a].push((b, w));
        adjacency[b].push((a, w));
    }

    let mut in_tree = vec![false; r];
    // best candidate edge from the growing tree to each outside clique
    let mut best: Vec<Option<(usize, usize)>> = vec![None; r]; // (weight, partner)
    let mut edges: Vec<TreeEdge> = Vec::new();
    let mut components = 0;

    let edge_pair = |a: usize, b: usize| (a.min(b), a.max(b));

    for start in 0..r {
        if in_tree[start] {
            continue;
        }
        components += 1;
        in_tree[start] = true;
        for &(other, w) in &adjacency[start] {
            best[other] = Some((w, start));
        }
        loop {
            let mut pick: Option<(usize, usize, usize)> = None; // (weight, j, partner)
            for j in 0..r {
                if in_tree[j] {
                    continue;
                }
                let Some((w, from)) = best[j] else { continue };
                let better = match pick {
                    None => true,
                    Some((bw, bj, bfrom)) => {
                        w > bw || (w == bw && edge_pair(from, j) < edge_pair(bfrom, bj))
                    }
                };
                if better {
                    pick = Some((w, j, from));
                }
            }
            let Some((_, j, from)) = pick else { break };
            in_tree[j] = true;
            best[j] = None;
            let (a, b) = edge_pair(from, j);
            edges.push(TreeEdge {
                a,
                b,
                separator: intersect_sorted(&cliques[a], &cliques[b]),
            });
            for &(other, w) in &adjacency[j] {
                if in_tree[other] {
                    continue;
                }
                let replace = match best[other] {
                    None => true,
                    Some((bw, bfrom)) => {
                        w > bw || (w == bw && edge_pair(j, other) < edge_pair(bfrom, other))
                    }
                };
                if replace {
                    best[other] = Some((w, j));
                }
            }
        }
    }

    edges.sort_by_key(|e| (e.a, e.b));
    debug_assert!(edges.iter().all(|e| !e.separator.is_empty()));
    debug_assert_eq!(edges.len(), r - components.min(r));
    CliqueTree {
        n_cliques: r,
        components,
        edges,
    }
}

/// Number of linking constraints a clique tree induces, counted in real
/// variables: `k(k+1)/2` per separator of `k` real nodes. Separator sizes
/// are doubled when the decomposition lives in complex variables.
pub fn count_linking_constraints(t: &CliqueTree, complex_vars: bool) -> u64 {
    let mult = if complex_vars { 2u64 } else { 1 };
    t.edges
        .iter()
        .map(|e| {
            let k = e.separator.len() as u64 * mult;
            k * (k + 1) / 2
        })
        .sum()
}

/// Checks the running intersection property: for every node, the blocks
/// containing it form a connected subtree.
pub fn verify_rip(l: &CliqueList, t: &CliqueTree) -> bool {
    let mut cliques_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, c) in l.cliques().iter().enumerate() {
        for &v in c {
            cliques_of.entry(v).or_default().push(ci);
        }
    }
    for (&v, members) in &cliques_of {
        if members.len() <= 1 {
            continue;
        }
        // adjacency restricted to blocks containing v
        let local: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut adj = vec![Vec::new(); members.len()];
        for e in &t.edges {
            if e.separator.binary_search(&v).is_ok() {
                let (Some(&a), Some(&b)) = (local.get(&e.a), local.get(&e.b)) else {
                    return false; // separator mentions v but an endpoint lacks it
                };
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; members.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return false;
        }
    }
    true
}

/// Headline numbers of a decomposition. Clique sizes and linking constraints
/// are reported in real variables; the fill count stays in the variable
/// space the extension was computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionStats {
    pub nc: usize,
    pub nlc: u64,
    pub max_clique_size: usize,
    pub fill_count: usize,
}

pub fn decomposition_stats(
    h: &ChordalExtension,
    l: &CliqueList,
    t: &CliqueTree,
    complex_vars: bool,
) -> DecompositionStats {
    let mult = if complex_vars { 2 } else { 1 };
    DecompositionStats {
        nc: l.len(),
        nlc: count_linking_constraints(t, complex_vars),
        max_clique_size: l.max_clique_size() * mult,
        fill_count: h.fill_count(),
    }
}
