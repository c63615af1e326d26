//! Clique combination: trade extra chordal-extension edges for fewer
//! linking constraints.
//!
//! Merging two blocks that are adjacent in the clique tree removes their
//! tree edge and with it the `k(k+1)/2` linking constraints of the shared
//! separator, at the price of one larger PSD block. The selection problem —
//! one binary variable per tree edge, at most one combination per block,
//! merged sizes capped at `s_max`, eliminated linking constraints maximized
//! — has the constraint structure of a matching on a forest, so it is solved
//! exactly by dynamic programming instead of an ILP solver.
//!
//! Among equally good matchings the lexicographically smallest selected-edge
//! set wins, which pins the output down completely.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cliques::{count_linking_constraints, CliqueList, CliqueTree, TreeEdge};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MergeError {
    #[error("invalid merge plan: {0}")]
    InvalidPlan(String),
}

/// One candidate combination: a clique-tree edge with its overlap, the size
/// of the block a merge would create, and the number of linking constraints
/// the merge would eliminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelEdge {
    pub a: usize,
    pub b: usize,
    pub shared: usize,
    pub merged_size: usize,
    pub weight: u64,
}

impl ModelEdge {
    pub fn feasible(&self, s_max: usize) -> bool {
        self.merged_size <= s_max
    }
}

/// The combination model over a clique tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeModel {
    pub n_blocks: usize,
    pub s_max: usize,
    pub edges: Vec<ModelEdge>,
}

impl MergeModel {
    /// Builds the model from a decomposition. When the decomposition lives in
    /// complex variables, sizes and overlaps are doubled so both the size cap
    /// and the objective are expressed in real variables.
    pub fn new(l: &CliqueList, t: &CliqueTree, s_max: usize, complex_vars: bool) -> Self {
        let mult = if complex_vars { 2 } else { 1 };
        let edges = t
            .edges
            .iter()
            .map(|e| {
                let shared = e.separator.len() * mult;
                let size_a = l.cliques()[e.a].len() * mult;
                let size_b = l.cliques()[e.b].len() * mult;
                let shared_u64 = shared as u64;
                ModelEdge {
                    a: e.a,
                    b: e.b,
                    shared,
                    merged_size: size_a + size_b - shared,
                    weight: shared_u64 * (shared_u64 + 1) / 2,
                }
            })
            .collect();
        MergeModel {
            n_blocks: l.len(),
            s_max,
            edges,
        }
    }
}

/// A solved combination: a matching on the clique tree and the number of
/// linking constraints it eliminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergePlan {
    pub selected_edges: Vec<(usize, usize)>,
    pub objective: u64,
}

impl MergePlan {
    pub fn is_empty(&self) -> bool {
        self.selected_edges.is_empty()
    }
}

/// Maximum weight of a matching on the forest that contains every `forced`
/// edge and otherwise uses only `usable` edges. `None` when the forced set
/// itself is not a feasible matching.
fn best_matching_weight(
    n_blocks: usize,
    edges: &[ModelEdge],
    usable: &[bool],
    forced: &[bool],
) -> Option<u64> {
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_blocks]; // (other, edge id)
    for (id, e) in edges.iter().enumerate() {
        adjacency[e.a].push((e.b, id));
        adjacency[e.b].push((e.a, id));
    }

    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n_blocks]; // (parent, edge id)
    let mut visited = vec![false; n_blocks];
    let mut preorder: Vec<usize> = Vec::with_capacity(n_blocks);
    let mut roots = Vec::new();
    for start in 0..n_blocks {
        if visited[start] {
            continue;
        }
        roots.push(start);
        visited[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            preorder.push(v);
            for &(u, id) in &adjacency[v] {
                if !visited[u] {
                    visited[u] = true;
                    parent[u] = Some((v, id));
                    stack.push(u);
                }
            }
        }
    }

    // free[v]: best weight in v's subtree with v unmatched (available upward)
    // used[v]: best weight in v's subtree, v matched or not, no upward claim
    let mut free: Vec<Option<u64>> = vec![None; n_blocks];
    let mut used: Vec<Option<u64>> = vec![None; n_blocks];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_blocks];
    for (v, link) in parent.iter().enumerate() {
        if let Some((p, id)) = link {
            children[*p].push((v, *id));
        }
    }

    let add = |a: Option<u64>, b: Option<u64>| match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };

    for &v in preorder.iter().rev() {
        let kids = &children[v];
        let mut sum_some = 0u64;
        let mut none_count = 0usize;
        let mut forced_kids: Vec<(usize, usize)> = Vec::new();
        for &(c, id) in kids {
            match used[c] {
                Some(w) => sum_some += w,
                None => none_count += 1,
            }
            if forced[id] {
                forced_kids.push((c, id));
            }
        }
        let base = if none_count == 0 { Some(sum_some) } else { None };
        // sum of used over children except `c`
        let sum_except = |c: usize| -> Option<u64> {
            match used[c] {
                Some(w) if none_count == 0 => Some(sum_some - w),
                None if none_count == 1 => Some(sum_some),
                _ => None,
            }
        };

        free[v] = if forced_kids.is_empty() { base } else { None };
        used[v] = match forced_kids.len() {
            0 => {
                let mut best = base;
                for &(c, id) in kids {
                    if !usable[id] {
                        continue;
                    }
                    let candidate = add(add(Some(edges[id].weight), free[c]), sum_except(c));
                    if candidate > best {
                        best = candidate;
                    }
                }
                best
            }
            1 => {
                let (c, id) = forced_kids[0];
                add(add(Some(edges[id].weight), free[c]), sum_except(c))
            }
            _ => None,
        };
    }

    let mut total = Some(0u64);
    for r in roots {
        total = add(total, used[r]);
    }
    total
}

/// Solves the combination model exactly: a maximum-weight matching on the
/// clique forest restricted to edges whose merged block fits in `s_max`.
///
/// Ties are broken by choosing the lexicographically smallest selected-edge
/// set: edges are examined in sorted order, and an edge is kept whenever
/// forcing it preserves the optimal objective.
pub fn solve_merge(model: &MergeModel) -> MergePlan {
    let usable: Vec<bool> = model
        .edges
        .iter()
        .map(|e| e.feasible(model.s_max))
        .collect();
    let mut forced = vec![false; model.edges.len()];
    let objective = best_matching_weight(model.n_blocks, &model.edges, &usable, &forced)
        .expect("the empty matching is always feasible");

    let mut selected = Vec::new();
    if objective > 0 {
        let mut order: Vec<usize> = (0..model.edges.len()).collect();
        order.sort_by_key(|&id| (model.edges[id].a, model.edges[id].b));
        for id in order {
            if !usable[id] {
                continue;
            }
            forced[id] = true;
            match best_matching_weight(model.n_blocks, &model.edges, &usable, &forced) {
                Some(w) if w == objective => {
                    selected.push((model.edges[id].a, model.edges[id].b));
                }
                _ => forced[id] = false,
            }
        }
        debug_assert_eq!(
            selected
                .iter()
                .map(|&(a, b)| {
                    model
                        .edges
                        .iter()
                        .find(|e| (e.a, e.b) == (a, b))
                        .expect("selected edge is a model edge")
                        .weight
                })
                .sum::<u64>(),
            objective
        );
    }
    selected.sort_unstable();
    MergePlan {
        selected_edges: selected,
        objective,
    }
}

/// Contracts `pairs` (pairwise disjoint block pairs that are tree edges) in
/// one pass: merged blocks become unions, surviving edges reattach with
/// their separators untouched.
fn contract(
    blocks: &[Vec<usize>],
    edges: &[TreeEdge],
    pairs: &[(usize, usize)],
) -> (Vec<Vec<usize>>, Vec<TreeEdge>) {
    let n = blocks.len();
    let mut rep: Vec<usize> = (0..n).collect();
    for &(a, b) in pairs {
        let key = a.min(b);
        rep[a] = key;
        rep[b] = key;
    }
    let mut keys: Vec<usize> = (0..n).filter(|&i| rep[i] == i).collect();
    keys.sort_unstable();
    let new_id: std::collections::BTreeMap<usize, usize> =
        keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();

    let mut new_blocks: Vec<Vec<usize>> = vec![Vec::new(); keys.len()];
    for (old, block) in blocks.iter().enumerate() {
        let target = new_id[&rep[old]];
        new_blocks[target].extend(block.iter().copied());
    }
    for block in &mut new_blocks {
        block.sort_unstable();
        block.dedup();
    }

    let contracted: std::collections::BTreeSet<(usize, usize)> = pairs
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    let mut new_edges = Vec::new();
    for e in edges {
        if contracted.contains(&(e.a, e.b)) {
            continue;
        }
        let (na, nb) = (new_id[&rep[e.a]], new_id[&rep[e.b]]);
        debug_assert_ne!(na, nb, "contracting a matching keeps the forest simple");
        new_edges.push(TreeEdge {
            a: na.min(nb),
            b: na.max(nb),
            separator: e.separator.clone(),
        });
    }
    new_edges.sort_by_key(|e| (e.a, e.b));
    (new_blocks, new_edges)
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() < b.len() && a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Applies a merge plan: every selected tree edge is contracted, the two
/// blocks replaced by their union. Any block that ends up inside a tree
/// neighbor is absorbed afterwards, keeping the block list canonical.
pub fn apply_merge(
    l: &CliqueList,
    t: &CliqueTree,
    plan: &MergePlan,
) -> Result<(CliqueList, CliqueTree), MergeError> {
    let edge_set: std::collections::BTreeSet<(usize, usize)> =
        t.edges.iter().map(|e| (e.a, e.b)).collect();
    let mut endpoints = std::collections::BTreeSet::new();
    for &(a, b) in &plan.selected_edges {
        let key = (a.min(b), a.max(b));
        if !edge_set.contains(&key) {
            return Err(MergeError::InvalidPlan(format!(
                "selected pair ({a}, {b}) is not a clique-tree edge"
            )));
        }
        for end in [a, b] {
            if !endpoints.insert(end) {
                return Err(MergeError::InvalidPlan(format!(
                    "block {end} appears in two selected edges"
                )));
            }
        }
    }

    let (mut blocks, mut edges) = contract(l.cliques(), &t.edges, &plan.selected_edges);

    // absorption: a block equal to a tree-edge separator is inside its
    // neighbor; contract that edge too (cannot happen after matching
    // contraction of a RIP tree, but keeps arbitrary inputs canonical)
    loop {
        let mut absorb: Option<(usize, usize)> = None;
        for e in &edges {
            if is_strict_subset(&blocks[e.a], &blocks[e.b])
                || is_strict_subset(&blocks[e.b], &blocks[e.a])
            {
                absorb = Some((e.a, e.b));
                break;
            }
        }
        match absorb {
            Some(pair) => {
                let (nb, ne) = contract(&blocks, &edges, &[pair]);
                blocks = nb;
                edges = ne;
            }
            None => break,
        }
    }

    // renumber blocks into canonical (lexicographic) order and remap edges
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by(|&i, &j| blocks[i].cmp(&blocks[j]));
    let mut rank = vec![0usize; blocks.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let blocks: Vec<Vec<usize>> = order.iter().map(|&old| blocks[old].clone()).collect();
    for e in &mut edges {
        let (a, b) = (rank[e.a], rank[e.b]);
        e.a = a.min(b);
        e.b = a.max(b);
    }
    edges.sort_by_key(|e| (e.a, e.b));

    let node_count = l.node_count();
    let n_blocks = blocks.len();
    Ok((
        CliqueList::new(node_count, blocks),
        CliqueTree {
            n_cliques: n_blocks,
            components: n_blocks - edges.len(),
            edges,
        },
    ))
}

/// Per-round numbers reported by [`merge_rounds`]; sizes and counts are in
/// real variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundStats {
    pub round: usize,
    pub objective: u64,
    pub merged_pairs: usize,
    pub nc: usize,
    pub nlc: u64,
    pub max_block_size: usize,
}

/// Runs solve-then-apply up to `rounds` times, stopping early once a round
/// selects nothing.
pub fn merge_rounds(
    l: &CliqueList,
    t: &CliqueTree,
    s_max: usize,
    rounds: usize,
    complex_vars: bool,
) -> (CliqueList, CliqueTree, Vec<RoundStats>) {
    let mult = if complex_vars { 2 } else { 1 };
    let mut blocks = l.clone();
    let mut tree = t.clone();
    let mut stats = Vec::new();
    for round in 1..=rounds {
        let model = MergeModel::new(&blocks, &tree, s_max, complex_vars);
        let plan = solve_merge(&model);
        if plan.is_empty() {
            break;
        }
        let (next_blocks, next_tree) =
            apply_merge(&blocks, &tree, &plan).expect("solver plans are valid matchings");
        blocks = next_blocks;
        tree = next_tree;
        stats.push(RoundStats {
            round,
            objective: plan.objective,
            merged_pairs: plan.selected_edges.len(),
            nc: blocks.len(),
            nlc: count_linking_constraints(&tree, complex_vars),
            max_block_size: blocks.max_clique_size() * mult,
        });
    }
    (blocks, tree, stats)
}
