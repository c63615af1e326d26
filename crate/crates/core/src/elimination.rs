//! Elimination orderings and symbolic elimination.
//!
//! Chordal extensions are produced in two stages: pick an elimination
//! ordering, then simulate the fill-in of a Cholesky factorization along it.
//! Four ordering heuristics are provided:
//!
//! - [`order_min_degree`]: exact minimum degree, recomputed dynamically on
//!   the elimination graph;
//! - [`order_amd`]: approximate minimum degree on the quotient graph with
//!   supernode absorption of indistinguishable nodes;
//! - [`order_max_degree`] and [`order_random`]: deliberately bad orderings,
//!   useful for studying how decomposition quality degrades.
//!
//! [`symbolic_elimination`] is the single source of truth for fill: ordering
//! heuristics never report fill themselves. Ties are broken by smallest node
//! index everywhere so results are reproducible across runs and platforms.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{ChordalExtension, EliminationOrder, GraphError, SparsityGraph};

/// How to order nodes for elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingStrategy {
    MinDegree,
    Amd,
    Random { seed: u64 },
    MaxDegree,
    Given(EliminationOrder),
}

impl OrderingStrategy {
    /// Produces the ordering for `g`. Only `Given` can fail (length mismatch).
    pub fn ordering(&self, g: &SparsityGraph) -> Result<EliminationOrder, GraphError> {
        match self {
            OrderingStrategy::MinDegree => Ok(order_min_degree(g)),
            OrderingStrategy::Amd => Ok(order_amd(g)),
            OrderingStrategy::Random { seed } => Ok(order_random(g, *seed)),
            OrderingStrategy::MaxDegree => Ok(order_max_degree(g)),
            OrderingStrategy::Given(order) => {
                if order.len() != g.node_count() {
                    Err(GraphError::NotAPermutation(g.node_count()))
                } else {
                    Ok(order.clone())
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderingStrategy::MinDegree => "min_degree",
            OrderingStrategy::Amd => "amd",
            OrderingStrategy::Random { .. } => "random",
            OrderingStrategy::MaxDegree => "max_degree",
            OrderingStrategy::Given(_) => "given",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            OrderingStrategy::Random { seed } => Some(*seed),
            _ => None,
        }
    }
}

/// Greedy dynamic elimination picking extreme-degree nodes; shared by the
/// exact minimum-degree and maximum-degree strategies.
fn greedy_degree_order(g: &SparsityGraph, pick_max: bool) -> EliminationOrder {
    let n = g.node_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut deg: Vec<usize> = (0..n).map(|v| adj[v].len()).collect();
    let mut bucket: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut perm = Vec::with_capacity(n);

    while !bucket.is_empty() {
        let &(d, v) = if pick_max {
            let &(dmax, _) = bucket.iter().next_back().expect("nonempty");
            bucket
                .range((dmax, 0)..)
                .next()
                .expect("max-degree bucket has an entry")
        } else {
            bucket.iter().next().expect("nonempty")
        };
        bucket.remove(&(d, v));
        perm.push(v);

        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for &u in &nbrs {
            bucket.remove(&(deg[u], u));
            adj[u].remove(&v);
        }
        // eliminate v: its remaining neighbors become a clique
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                }
            }
        }
        for &u in &nbrs {
            deg[u] = adj[u].len();
            bucket.insert((deg[u], u));
        }
        adj[v].clear();
    }
    EliminationOrder::new(perm).expect("greedy elimination visits every node once")
}

/// Exact minimum-degree ordering, with the elimination graph updated after
/// every pivot. Ties go to the smallest node index.
pub fn order_min_degree(g: &SparsityGraph) -> EliminationOrder {
    greedy_degree_order(g, false)
}

/// Greedy dynamic maximum-degree elimination. A deliberately bad ordering.
pub fn order_max_degree(g: &SparsityGraph) -> EliminationOrder {
    greedy_degree_order(g, true)
}

/// Uniform random permutation drawn from a seeded ChaCha stream, so the same
/// seed yields the same ordering on every platform.
pub fn order_random(g: &SparsityGraph, seed: u64) -> EliminationOrder {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    EliminationOrder::new(perm).expect("shuffle preserves the permutation")
}

/// Approximate minimum degree on the quotient graph.
///
/// Follows the usual structure: eliminated pivots become elements, external
/// degrees are bounded from above instead of recomputed exactly, and
/// indistinguishable variables are absorbed into supernodes and eliminated
/// together. Multiple elimination and aggressive absorption are left out;
/// exact minimum degree remains the reference point for fill quality.
pub fn order_amd(g: &SparsityGraph) -> EliminationOrder {
    let n = g.node_count();
    if n == 0 {
        return EliminationOrder::new(Vec::new()).expect("empty permutation");
    }

    // Node i is a principal variable while nv[i] > 0 and not yet an element.
    let mut adj_vars: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut adj_elems: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut elem_vars: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut nv: Vec<usize> = vec![1; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut degree: Vec<usize> = (0..n).map(|v| adj_vars[v].len()).collect();
    let mut is_elem = vec![false; n];
    let mut elem_alive = vec![false; n];

    let mut mark = vec![0u64; n];
    let mut stamp = 0u64;
    let mut wval = vec![0usize; n];
    let mut wmark = vec![0u64; n];
    let mut wstamp = 0u64;

    let mut heap: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut remaining = n;

    let live = |v: usize, nv: &[usize], is_elem: &[bool]| nv[v] > 0 && !is_elem[v];

    while let Some(&(d, p)) = heap.iter().next() {
        heap.remove(&(d, p));

        // Lp: variables adjacent to the pivot in the elimination graph
        stamp += 1;
        mark[p] = stamp;
        let mut lp: Vec<usize> = Vec::new();
        for &v in &adj_vars[p] {
            if live(v, &nv, &is_elem) && mark[v] != stamp {
                mark[v] = stamp;
                lp.push(v);
            }
        }
        for &e in &adj_elems[p] {
            if !elem_alive[e] {
                continue;
            }
            for &v in &elem_vars[e] {
                if v != p && live(v, &nv, &is_elem) && mark[v] != stamp {
                    mark[v] = stamp;
                    lp.push(v);
                }
            }
        }
        lp.sort_unstable();
        let lp_weight: usize = lp.iter().map(|&v| nv[v]).sum();

        // the supernode's members are eliminated consecutively
        let mut mem = std::mem::take(&mut members[p]);
        mem.sort_unstable();
        order.extend(mem);
        remaining -= nv[p];

        // pivot becomes an element; the elements it saw are absorbed by it
        for &e in &adj_elems[p] {
            elem_alive[e] = false;
            elem_vars[e] = Vec::new();
        }
        is_elem[p] = true;
        elem_alive[p] = true;
        elem_vars[p] = lp.clone();
        adj_vars[p] = Vec::new();
        adj_elems[p] = Vec::new();

        // |L_e \ Lp| (in original-node units) for every element touching Lp
        wstamp += 1;
        for &i in &lp {
            for &e in &adj_elems[i] {
                if !elem_alive[e] || e == p {
                    continue;
                }
                if wmark[e] != wstamp {
                    // prune dead entries while measuring the live size
                    let vars = std::mem::take(&mut elem_vars[e]);
                    let pruned: Vec<usize> = vars
                        .into_iter()
                        .filter(|&v| live(v, &nv, &is_elem))
                        .collect();
                    wval[e] = pruned.iter().map(|&v| nv[v]).sum();
                    elem_vars[e] = pruned;
                    wmark[e] = wstamp;
                }
                wval[e] = wval[e].saturating_sub(nv[i]);
            }
        }

        // refresh adjacency and approximate degrees of the Lp variables
        stamp += 1;
        for &v in &lp {
            mark[v] = stamp;
        }
        mark[p] = stamp;
        for &i in &lp {
            adj_vars[i].retain(|&v| live(v, &nv, &is_elem) && mark[v] != stamp);
            adj_elems[i].retain(|&e| elem_alive[e] && e != p);
            adj_elems[i].push(p);
            adj_elems[i].sort_unstable();

            let ai_weight: usize = adj_vars[i].iter().map(|&v| nv[v]).sum();
            let elems_weight: usize = adj_elems[i]
                .iter()
                .filter(|&&e| e != p)
                .map(|&e| wval[e])
                .sum();
            let bound_old = degree[i] + lp_weight - nv[i];
            let bound_new = ai_weight + (lp_weight - nv[i]) + elems_weight;
            let d_new = (remaining - nv[i]).min(bound_old).min(bound_new);

            heap.remove(&(degree[i], i));
            degree[i] = d_new;
            heap.insert((d_new, i));
        }

        // supernode detection: absorb indistinguishable variables of Lp
        let mut buckets: std::collections::BTreeMap<u64, Vec<usize>> =
            std::collections::BTreeMap::new();
        for &i in &lp {
            let mut h = 0u64;
            for &v in &adj_vars[i] {
                h = h.wrapping_add(v as u64 + 1);
            }
            for &e in &adj_elems[i] {
                h = h.wrapping_add((e as u64 + 1).wrapping_mul(0x9e37_79b9));
            }
            buckets.entry(h).or_default().push(i);
        }
        for bucket in buckets.values() {
            for (bi, &a) in bucket.iter().enumerate() {
                if nv[a] == 0 {
                    continue;
                }
                for &b in &bucket[bi + 1..] {
                    if nv[b] == 0 {
                        continue;
                    }
                    if indistinguishable(a, b, &adj_vars, &adj_elems) {
                        let absorbed = nv[b];
                        heap.remove(&(degree[b], b));
                        nv[a] += absorbed;
                        nv[b] = 0;
                        let mem_b = std::mem::take(&mut members[b]);
                        members[a].extend(mem_b);
                        adj_vars[b] = Vec::new();
                        adj_elems[b] = Vec::new();
                        heap.remove(&(degree[a], a));
                        degree[a] = degree[a].saturating_sub(absorbed);
                        heap.insert((degree[a], a));
                    }
                }
            }
        }
    }

    debug_assert_eq!(order.len(), n);
    EliminationOrder::new(order).expect("quotient-graph elimination covers every node")
}

/// Variables are indistinguishable when they have identical element lists and
/// identical variable lists apart from one another.
fn indistinguishable(
    a: usize,
    b: usize,
    adj_vars: &[Vec<usize>],
    adj_elems: &[Vec<usize>],
) -> bool {
    if adj_elems[a] != adj_elems[b] {
        return false;
    }
    let va: Vec<usize> = adj_vars[a].iter().copied().filter(|&v| v != b).collect();
    let vb: Vec<usize> = adj_vars[b].iter().copied().filter(|&v| v != a).collect();
    va == vb
}

/// Simulates Cholesky fill-in along `order`: each eliminated node connects
/// its later-ordered neighbors pairwise. The elimination order itself, read
/// as a perfect elimination ordering, witnesses chordality of the result.
pub fn symbolic_elimination(
    g: &SparsityGraph,
    order: &EliminationOrder,
) -> Result<ChordalExtension, GraphError> {
    let n = g.node_count();
    if order.len() != n {
        return Err(GraphError::NotAPermutation(n));
    }
    let pos = order.positions();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut fill: Vec<(usize, usize)> = Vec::new();

    for &v in order.perm() {
        let later: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                    fill.push((a, b)); // a < b: `later` is ascending
                }
            }
        }
    }
    ChordalExtension::new(g.clone(), fill, order.clone())
}
