//! Undirected simple graphs and chordality machinery.
//!
//! Everything downstream works on [`SparsityGraph`]: the nonzero pattern of
//! an SDP problem stored as an undirected simple graph over dense 0-based
//! node indices. Labels carry external identity (bus id plus an optional
//! Re/Im part for patterns expressed in real variables). Chordality is
//! decided by lexicographic BFS followed by a perfect-elimination-ordering
//! check; [`ChordalExtension`] bundles a base graph, its fill edges and the
//! ordering that witnesses chordality of the extended graph.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Errors from graph construction and ordering validation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("node {node} out of range for graph with {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("sequence is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("label count {got} does not match node count {expected}")]
    LabelCountMismatch { expected: usize, got: usize },
    #[error("fill edge ({0}, {1}) already present in the base graph")]
    FillOverlapsBase(usize, usize),
    #[error("ordering does not witness chordality of the extended graph")]
    NotPerfectElimination,
}

/// Which half of a complex variable a realified node represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Part {
    Re,
    Im,
}

/// External identity of a pattern node: bus id plus an optional Re/Im tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeLabel {
    pub bus: i64,
    pub part: Option<Part>,
}

impl NodeLabel {
    pub fn bus(bus: i64) -> Self {
        NodeLabel { bus, part: None }
    }

    pub fn tagged(bus: i64, part: Part) -> Self {
        NodeLabel {
            bus,
            part: Some(part),
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.part {
            None => write!(f, "{}", self.bus),
            Some(Part::Re) => write!(f, "{}_Re", self.bus),
            Some(Part::Im) => write!(f, "{}_Im", self.bus),
        }
    }
}

/// Undirected simple graph with per-node labels.
///
/// Adjacency is stored as sorted neighbor lists, which keeps iteration
/// deterministic and membership tests logarithmic. No self-loops, no
/// duplicate edges; both are enforced at construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityGraph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<NodeLabel>,
}

impl SparsityGraph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected. Labels default to the node
    /// index read as a bus id.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let labels = (0..node_count).map(|i| NodeLabel::bus(i as i64)).collect();
        Self::with_labels(node_count, edges, labels)
    }

    /// Same as [`from_edges`](Self::from_edges) but with explicit labels.
    pub fn with_labels(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        labels: Vec<NodeLabel>,
    ) -> Result<Self, GraphError> {
        if labels.len() != node_count {
            return Err(GraphError::LabelCountMismatch {
                expected: node_count,
                got: labels.len(),
            });
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for node in [u, v] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange {
                        node,
                        count: node_count,
                    });
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(SparsityGraph { adjacency, labels })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn label(&self, v: usize) -> NodeLabel {
        self.labels[v]
    }

    pub fn labels(&self) -> &[NodeLabel] {
        &self.labels
    }

    /// Neighbors of `v` that lie inside `active` (a mask over all nodes).
    pub fn induced_neighbors(&self, v: usize, active: &[bool]) -> Vec<usize> {
        debug_assert_eq!(active.len(), self.node_count());
        debug_assert!(active[v], "node {v} must itself be active");
        self.adjacency[v]
            .iter()
            .copied()
            .filter(|&u| active[u])
            .collect()
    }

    /// Lexicographic BFS visit order, ties broken by smallest node index.
    fn lex_bfs(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut order = Vec::with_capacity(n);
        let mut groups: Vec<Vec<usize>> = if n > 0 {
            vec![(0..n).collect()]
        } else {
            Vec::new()
        };
        let mut is_neighbor = vec![false; n];
        while let Some(first) = groups.first_mut() {
            // groups are kept sorted, so the front element is the tie-break winner
            let v = first.remove(0);
            if first.is_empty() {
                groups.remove(0);
            }
            order.push(v);
            for &u in self.neighbors(v) {
                is_neighbor[u] = true;
            }
            let mut refined = Vec::with_capacity(groups.len() * 2);
            for group in groups.drain(..) {
                let (hit, miss): (Vec<usize>, Vec<usize>) =
                    group.into_iter().partition(|&u| is_neighbor[u]);
                if !hit.is_empty() {
                    refined.push(hit);
                }
                if !miss.is_empty() {
                    refined.push(miss);
                }
            }
            groups = refined;
            for &u in self.neighbors(v) {
                is_neighbor[u] = false;
            }
        }
        order
    }

    /// Returns a perfect elimination ordering if the graph is chordal.
    ///
    /// The reverse of a lex-BFS visit order is a PEO exactly when the graph
    /// is chordal, so one verification pass decides the question.
    pub fn find_peo(&self) -> Option<EliminationOrder> {
        let mut perm = self.lex_bfs();
        perm.reverse();
        let order = EliminationOrder::new(perm).expect("lex-BFS yields a permutation");
        if self.verify_peo(&order) {
            Some(order)
        } else {
            None
        }
    }

    pub fn is_chordal(&self) -> bool {
        self.find_peo().is_some()
    }

    /// Checks that `order` is a perfect elimination ordering: for every node,
    /// its later-ordered neighbors form a clique.
    ///
    /// Uses the follower test: it suffices that the later neighbors minus the
    /// earliest of them are all adjacent to that earliest one.
    pub fn verify_peo(&self, order: &EliminationOrder) -> bool {
        let n = self.node_count();
        if order.len() != n {
            return false;
        }
        let pos = order.positions();
        for v in 0..n {
            let later: Vec<usize> = self.adjacency[v]
                .iter()
                .copied()
                .filter(|&u| pos[u] > pos[v])
                .collect();
            if later.len() <= 1 {
                continue;
            }
            let follower = *later.iter().min_by_key(|&&u| pos[u]).expect("nonempty");
            for &w in &later {
                if w != follower && !self.has_edge(follower, w) {
                    return false;
                }
            }
        }
        true
    }
}

/// An elimination ordering: a permutation of the node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    perm: Vec<usize>,
}

impl EliminationOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self, GraphError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n || seen[v] {
                return Err(GraphError::NotAPermutation(n));
            }
            seen[v] = true;
        }
        Ok(EliminationOrder { perm })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Inverse permutation: `positions()[v]` is the step at which `v` is
    /// eliminated.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// A chordal extension: base graph, disjoint fill edges, and a perfect
/// elimination ordering of the extended graph.
///
/// The constructor verifies the witness, so a value of this type is always a
/// genuine chordal extension.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordalExtension {
    base: SparsityGraph,
    fill_edges: Vec<(usize, usize)>,
    peo: EliminationOrder,
    extended: SparsityGraph,
}

impl ChordalExtension {
    pub fn new(
        base: SparsityGraph,
        fill_edges: impl IntoIterator<Item = (usize, usize)>,
        peo: EliminationOrder,
    ) -> Result<Self, GraphError> {
        let n = base.node_count();
        let mut fill = BTreeSet::new();
        for (u, v) in fill_edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange {
                        node,
                        count: n,
                    });
                }
            }
            let e = (u.min(v), u.max(v));
            if base.has_edge(e.0, e.1) {
                return Err(GraphError::FillOverlapsBase(e.0, e.1));
            }
            fill.insert(e);
        }
        let all_edges: Vec<(usize, usize)> =
            base.edges().chain(fill.iter().copied()).collect();
        let extended = SparsityGraph::with_labels(n, all_edges, base.labels().to_vec())?;
        if !extended.verify_peo(&peo) {
            return Err(GraphError::NotPerfectElimination);
        }
        Ok(ChordalExtension {
            base,
            fill_edges: fill.into_iter().collect(),
            peo,
            extended,
        })
    }

    pub fn base(&self) -> &SparsityGraph {
        &self.base
    }

    /// Fill edges, sorted, disjoint from the base edges.
    pub fn fill_edges(&self) -> &[(usize, usize)] {
        &self.fill_edges
    }

    pub fn fill_count(&self) -> usize {
        self.fill_edges.len()
    }

    pub fn peo(&self) -> &EliminationOrder {
        &self.peo
    }

    /// Base plus fill; chordal by construction.
    pub fn extended_graph(&self) -> &SparsityGraph {
        &self.extended
    }
}
