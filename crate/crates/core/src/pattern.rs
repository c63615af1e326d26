//! Sparsity patterns from network topologies, and complex-to-real doubling.
//!
//! In complex variables the aggregate sparsity pattern of the relaxation is
//! the network graph itself. Rewriting the problem in real variables splits
//! every bus `n` into a real node `n_Re` and an imaginary node `n_Im`; an
//! edge between buses turns into the four cross edges between their halves,
//! while the two halves of a single bus stay non-adjacent in the pattern.
//! Doubling a complex-side clique or chordal extension, by contrast, does
//! connect the halves, which is exactly where the two routes to a real
//! decomposition diverge.

use crate::graph::{ChordalExtension, EliminationOrder, NodeLabel, Part, SparsityGraph};
use crate::ingest::NetworkTopology;

/// The complex-variable sparsity pattern: one node per bus, one edge per
/// in-service branch. Parallel branches collapse to a single edge.
pub fn build_complex_pattern(t: &NetworkTopology) -> SparsityGraph {
    let index_of = |bus: i64| {
        t.buses()
            .iter()
            .position(|&b| b == bus)
            .expect("topology invariants guarantee known endpoints")
    };
    let labels: Vec<NodeLabel> = t.buses().iter().map(|&b| NodeLabel::bus(b)).collect();
    let edges: Vec<(usize, usize)> = t
        .in_service_branches()
        .map(|br| (index_of(br.from), index_of(br.to)))
        .collect();
    SparsityGraph::with_labels(t.buses().len(), edges, labels)
        .expect("validated topology produces a simple graph")
}

/// Index of the real (Re) half of complex node `n`.
pub fn re_index(n: usize) -> usize {
    2 * n
}

/// Index of the imaginary (Im) half of complex node `n`.
pub fn im_index(n: usize) -> usize {
    2 * n + 1
}

/// The real-variable sparsity pattern of a complex pattern: node count
/// doubles, each complex edge becomes four cross edges, and no `(n_Re, n_Im)`
/// edges appear.
pub fn realify_graph(gc: &SparsityGraph) -> SparsityGraph {
    assert!(
        gc.labels().iter().all(|l| l.part.is_none()),
        "realify_graph expects a complex pattern without Re/Im tags"
    );
    let mut labels = Vec::with_capacity(2 * gc.node_count());
    for label in gc.labels() {
        labels.push(NodeLabel::tagged(label.bus, Part::Re));
        labels.push(NodeLabel::tagged(label.bus, Part::Im));
    }
    let mut edges = Vec::with_capacity(4 * gc.edge_count());
    for (i, j) in gc.edges() {
        edges.push((re_index(i), re_index(j)));
        edges.push((re_index(i), im_index(j)));
        edges.push((im_index(i), re_index(j)));
        edges.push((im_index(i), im_index(j)));
    }
    SparsityGraph::with_labels(2 * gc.node_count(), edges, labels)
        .expect("doubling a simple graph stays simple")
}

/// Doubles a complex-side clique into its real-variable support.
pub fn realify_clique(clique: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * clique.len());
    for &n in clique {
        out.push(re_index(n));
        out.push(im_index(n));
    }
    out.sort_unstable();
    out
}

/// Converts a chordal extension of a complex pattern into a chordal extension
/// of the corresponding real pattern.
///
/// The realified chordal graph is the union of the realified cliques: every
/// edge of the extended complex graph contributes its four cross edges, and
/// every non-isolated node contributes its `(n_Re, n_Im)` edge. The perfect
/// elimination ordering expands each complex node into its two halves
/// consecutively; the constructor re-verifies the witness rather than
/// trusting the expansion rule.
pub fn realify_extension(hc: &ChordalExtension) -> ChordalExtension {
    let base_real = realify_graph(hc.base());
    let complex_ext = hc.extended_graph();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, j) in complex_ext.edges() {
        edges.push((re_index(i), re_index(j)));
        edges.push((re_index(i), im_index(j)));
        edges.push((im_index(i), re_index(j)));
        edges.push((im_index(i), im_index(j)));
    }
    for n in 0..complex_ext.node_count() {
        if complex_ext.degree(n) > 0 {
            edges.push((re_index(n), im_index(n)));
        }
    }

    let fill: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(u, v)| (u.min(v), u.max(v)))
        .filter(|&(u, v)| !base_real.has_edge(u, v))
        .collect();

    let perm: Vec<usize> = hc
        .peo()
        .perm()
        .iter()
        .flat_map(|&v| [re_index(v), im_index(v)])
        .collect();
    let peo = EliminationOrder::new(perm).expect("doubling a permutation is a permutation");

    ChordalExtension::new(base_real, fill, peo)
        .expect("doubling a chordal extension is chordal with the expanded ordering")
}
