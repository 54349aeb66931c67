//! Simple undirected graph with dense node ids and edge-list ingestion.
//!
//! Input files are whitespace-separated edge lists (SNAP / Network Repository
//! style). Labels may be arbitrary strings and are remapped to dense ids in
//! first-appearance order; the original labels are kept in a side mapping.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

/// Dense node index, contiguous from 0 to n-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected edge stored normalized with `a < b`. Self-loops are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: NodeId,
    b: NodeId,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId) -> Edge {
        assert!(u != v, "self-loop edge ({u}, {v})");
        if u < v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    #[inline]
    pub fn a(self) -> NodeId {
        self.a
    }

    #[inline]
    pub fn b(self) -> NodeId {
        self.b
    }

    /// The endpoint opposite to `u`. Panics if `u` is not an endpoint.
    pub fn other(self, u: NodeId) -> NodeId {
        if u == self.a {
            self.b
        } else {
            assert!(u == self.b, "node {u} is not an endpoint of {self}");
            self.a
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: data line has {found} token(s), expected at least 2")]
    MalformedLine { line: usize, found: usize },
    #[error("edge ({0}, {1}) is not present in the graph")]
    MissingEdge(NodeId, NodeId),
    #[error("node {0} out of range for graph with {1} nodes")]
    NodeOutOfRange(NodeId, usize),
}

/// Simple undirected graph: symmetric adjacency sets, no self-loops,
/// no duplicate edges. Values are immutable after construction; edge
/// removal produces a new graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<NodeId>>,
    m: usize,
    labels: Vec<String>,
    label_ids: HashMap<String, NodeId>,
}

impl Graph {
    /// Empty graph with `n` isolated nodes labeled by their decimal ids.
    pub fn with_nodes(n: usize) -> Graph {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let label_ids = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), NodeId(i as u32)))
            .collect();
        Graph {
            adj: vec![BTreeSet::new(); n],
            m: 0,
            labels,
            label_ids,
        }
    }

    /// Build from an explicit pair list; ids must be `< n`. Duplicates merge,
    /// self-loops are rejected. Used by fixtures and synthetic generators.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut g = Graph::with_nodes(n);
        for &(u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge ({u}, {v}) out of range");
            g.insert_edge(NodeId(u), NodeId(v));
        }
        g
    }

    fn insert_edge(&mut self, u: NodeId, v: NodeId) {
        assert!(u != v, "self-loop ({u}, {v})");
        if self.adj[u.index()].insert(v) {
            self.adj[v.index()].insert(u);
            self.m += 1;
        }
    }

    /// Parse a line-oriented edge list. Lines starting with `#` or `%` are
    /// comments, blank lines are skipped, tokens beyond the first two
    /// (weights, timestamps) are ignored, directed duplicates merge, and
    /// self-loops are dropped. Labels get dense ids in first-appearance order.
    pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph, io::Error> {
        let mut g = Graph {
            adj: Vec::new(),
            m: 0,
            labels: Vec::new(),
            label_ids: HashMap::new(),
        };
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let (first, second) = match (tokens.next(), tokens.next()) {
                (Some(a), Some(b)) => (a, b),
                (Some(_), None) => {
                    return Err(io::Error::new(
                        io::ErrorKind::InvalidData,
                        GraphError::MalformedLine {
                            line: idx + 1,
                            found: 1,
                        },
                    ))
                }
                _ => unreachable!("non-empty line yields at least one token"),
            };
            let u = g.intern_label(first);
            let v = g.intern_label(second);
            if u != v {
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    fn intern_label(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.label_ids.get(label) {
            return id;
        }
        let id = NodeId(self.adj.len() as u32);
        self.adj.push(BTreeSet::new());
        self.labels.push(label.to_string());
        self.label_ids.insert(label.to_string(), id);
        id
    }

    /// Canonical serialization: one `a b` line per normalized edge, sorted
    /// ascending by (a, b), decimal ids, newline-terminated.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in self.edges() {
            writeln!(w, "{} {}", e.a(), e.b())?;
        }
        Ok(())
    }

    pub fn to_canonical_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.adj.len() as u32).map(NodeId)
    }

    /// Edges in ascending (a, b) order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            let u = NodeId(u as u32);
            nbrs.range(u..).map(move |&v| Edge::new(u, v))
        })
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u != v && u.index() < self.adj.len() && self.adj[u.index()].contains(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.a(), e.b())
    }

    /// Degree and neighbor set of `u`, checked.
    pub fn adjacency(&self, u: NodeId) -> Result<(usize, &BTreeSet<NodeId>), GraphError> {
        let nbrs = self
            .adj
            .get(u.index())
            .ok_or(GraphError::NodeOutOfRange(u, self.adj.len()))?;
        Ok((nbrs.len(), nbrs))
    }

    /// Unchecked neighbor set; panics on out-of-range ids.
    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &BTreeSet<NodeId> {
        &self.adj[u.index()]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u.index()].len()
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u.index()]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.label_ids.get(label).copied()
    }

    /// New graph with `removed` absent; the node set is unchanged. Errors if
    /// any requested edge is missing, which signals a bookkeeping bug upstream.
    pub fn remove_edges<'a, I>(&self, removed: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut g = self.clone();
        for e in removed {
            if !g.adj[e.a().index()].remove(&e.b()) {
                return Err(GraphError::MissingEdge(e.a(), e.b()));
            }
            g.adj[e.b().index()].remove(&e.a());
            g.m -= 1;
        }
        Ok(g)
    }

    /// In-place removal for attack working copies. Public callers go through
    /// `remove_edges`, which keeps the original value intact.
    pub(crate) fn remove_edge_mut(&mut self, e: Edge) {
        let present = self.adj[e.a().index()].remove(&e.b());
        assert!(present, "removing absent edge {e}");
        self.adj[e.b().index()].remove(&e.a());
        self.m -= 1;
    }

    /// Induced subgraph on `keep`: kept nodes are renumbered in ascending id
    /// order and carry their original labels.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> Result<Graph, GraphError> {
        let mut remap: HashMap<NodeId, NodeId> = HashMap::with_capacity(keep.len());
        let mut labels = Vec::with_capacity(keep.len());
        for (i, &u) in keep.iter().enumerate() {
            if u.index() >= self.adj.len() {
                return Err(GraphError::NodeOutOfRange(u, self.adj.len()));
            }
            remap.insert(u, NodeId(i as u32));
            labels.push(self.labels[u.index()].clone());
        }
        let mut adj = vec![BTreeSet::new(); keep.len()];
        let mut m = 0;
        for &u in keep {
            let nu = remap[&u];
            for v in self.adj[u.index()].iter() {
                if let Some(&nv) = remap.get(v) {
                    if adj[nu.index()].insert(nv) && nu < nv {
                        m += 1;
                    }
                }
            }
        }
        let label_ids = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), NodeId(i as u32)))
            .collect();
        Ok(Graph {
            adj,
            m,
            labels,
            label_ids,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::io::Cursor;

    fn parse(text: &str) -> Graph {
        Graph::parse_edge_list(Cursor::new(text)).unwrap()
    }

    #[test]
    fn parse_dedupes_and_drops_self_loops() {
        let g = parse("0 1\n1 0\n1 1\n# c\n0 2\n");
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let edges: Vec<Edge> = g.edges().collect();
        assert_eq!(
            edges,
            vec![
                Edge::new(NodeId(0), NodeId(1)),
                Edge::new(NodeId(0), NodeId(2))
            ]
        );
    }

    #[test]
    fn parse_remaps_labels_in_first_appearance_order() {
        let g = parse("a b\nb c\n");
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.label(NodeId(0)), "a");
        assert_eq!(g.label(NodeId(1)), "b");
        assert_eq!(g.label(NodeId(2)), "c");
        assert!(g.has_edge(NodeId(0), NodeId(1)));
        assert!(g.has_edge(NodeId(1), NodeId(2)));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_ignores_extra_columns_and_percent_comments() {
        let g = parse("% header\n0 1 3.5\n1 2 0.25 extra\n");
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_empty_input_is_empty_graph() {
        let g = parse("");
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parse_reports_malformed_line_number() {
        let err = Graph::parse_edge_list(Cursor::new("0 1\n\n2\n")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "unexpected message: {msg}");
    }

    #[test]
    fn adjacency_matches_fixture() {
        let g = fixtures::fix_b();
        let (deg, nbrs) = g.adjacency(NodeId(4)).unwrap();
        assert_eq!(deg, 3);
        let want: BTreeSet<NodeId> = [0, 1, 5].into_iter().map(NodeId).collect();
        assert_eq!(nbrs, &want);
    }

    #[test]
    fn adjacency_out_of_range_is_an_error() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(
            g.adjacency(NodeId(7)),
            Err(GraphError::NodeOutOfRange(NodeId(7), 3))
        );
    }

    #[test]
    fn adjacency_of_isolated_node() {
        let g = Graph::with_nodes(2);
        let (deg, nbrs) = g.adjacency(NodeId(1)).unwrap();
        assert_eq!(deg, 0);
        assert!(nbrs.is_empty());
    }

    #[test]
    fn remove_bridge_splits_fix_a() {
        let g = fixtures::fix_a();
        let bridge = Edge::new(NodeId(2), NodeId(3));
        let g2 = g.remove_edges([&bridge]).unwrap();
        assert_eq!(g2.edge_count(), 6);
        assert!(!g2.has_edge(NodeId(2), NodeId(3)));
        // two disjoint triangles remain
        for (u, v) in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            assert!(g2.has_edge(NodeId(u), NodeId(v)));
        }
    }

    #[test]
    fn remove_nothing_is_identity() {
        let g = fixtures::fix_a();
        let g2 = g.remove_edges([]).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn remove_missing_edge_errors() {
        let g = Graph::from_edges(3, &[(0, 1)]);
        let e = Edge::new(NodeId(1), NodeId(2));
        assert_eq!(
            g.remove_edges([&e]),
            Err(GraphError::MissingEdge(NodeId(1), NodeId(2)))
        );
    }

    #[test]
    fn induced_on_k4_block_of_fix_b() {
        let g = fixtures::fix_b();
        let keep: BTreeSet<NodeId> = [0, 1, 2, 3].into_iter().map(NodeId).collect();
        let sub = g.induced_subgraph(&keep).unwrap();
        assert_eq!(sub.node_count(), 4);
        assert_eq!(sub.edge_count(), 6);
    }

    #[test]
    fn induced_identity_and_empty() {
        let g = fixtures::fix_b();
        let all: BTreeSet<NodeId> = g.node_ids().collect();
        assert_eq!(g.induced_subgraph(&all).unwrap(), g);
        let none = BTreeSet::new();
        let empty = g.induced_subgraph(&none).unwrap();
        assert_eq!(empty.node_count(), 0);
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn canonical_serialization_is_sorted() {
        let g = parse("5 9\n9 7\n");
        assert_eq!(g.to_canonical_string(), "0 1\n1 2\n");
    }
}
