//! Core decomposition, k-core extraction, and follower cascades.
//!
//! The follower cascade is the inner loop of every attack: removing edges
//! inside the k-core and peeling nodes whose within-core degree falls below
//! k. It runs on a dense snapshot of the k-core so that one evaluation costs
//! O(|E_k|) instead of a full decomposition.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::{Edge, Graph, NodeId};

/// Per-node core numbers plus the maximal core number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreInfo {
    core: Vec<u32>,
    k_max: u32,
}

impl CoreInfo {
    #[inline]
    pub fn core(&self, u: NodeId) -> u32 {
        self.core[u.index()]
    }

    #[inline]
    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn per_node(&self) -> &[u32] {
        &self.core
    }

    /// Nodes with core number exactly `k`, ascending.
    pub fn k_nodes(&self, k: u32) -> BTreeSet<NodeId> {
        self.core
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == k)
            .map(|(u, _)| NodeId(u as u32))
            .collect()
    }
}

/// Exact core numbers by minimum-degree bucket peeling. Among nodes of equal
/// minimum degree the lowest id is extracted first, so peeling traces are
/// deterministic; the resulting core numbers are order-independent anyway.
pub fn core_numbers(g: &Graph) -> CoreInfo {
    let n = g.node_count();
    if n == 0 {
        return CoreInfo {
            core: Vec::new(),
            k_max: 0,
        };
    }
    let mut deg: Vec<usize> = g.node_ids().map(|u| g.degree(u)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); max_deg + 1];
    for (u, &d) in deg.iter().enumerate() {
        buckets[d].insert(u as u32);
    }

    let mut core = vec![0u32; n];
    let mut removed = vec![false; n];
    let mut level = 0usize;
    let mut cursor = 0usize;
    for _ in 0..n {
        while buckets[cursor].is_empty() {
            cursor += 1;
        }
        level = level.max(cursor);
        let u = *buckets[cursor].iter().next().expect("bucket is non-empty");
        buckets[cursor].remove(&u);
        removed[u as usize] = true;
        core[u as usize] = level as u32;
        for &v in g.neighbors(NodeId(u)) {
            let vi = v.index();
            if removed[vi] {
                continue;
            }
            let d = deg[vi];
            buckets[d].remove(&v.0);
            deg[vi] = d - 1;
            buckets[d - 1].insert(v.0);
            if d - 1 < cursor {
                cursor = d - 1;
            }
        }
    }
    let k_max = core.iter().copied().max().unwrap_or(0);
    CoreInfo { core, k_max }
}

/// Node and edge sets of the k-core, expressed over the parent graph's ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCoreView {
    pub k: u32,
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<Edge>,
}

pub fn k_core(g: &Graph, k: u32) -> KCoreView {
    let cores = core_numbers(g);
    k_core_with(g, &cores, k)
}

pub fn k_core_with(g: &Graph, cores: &CoreInfo, k: u32) -> KCoreView {
    let nodes: BTreeSet<NodeId> = g.node_ids().filter(|&u| cores.core(u) >= k).collect();
    let edges: BTreeSet<Edge> = g
        .edges()
        .filter(|e| nodes.contains(&e.a()) && nodes.contains(&e.b()))
        .collect();
    KCoreView { k, nodes, edges }
}

/// Nodes expelled from the k-core by an edge removal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FollowerSet {
    pub k: u32,
    pub members: BTreeSet<NodeId>,
}

impl FollowerSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.members.contains(&u)
    }
}

/// Dense copy of one k-core, built once and queried by many hypothetical
/// removals. `cascade_followers` never touches the parent graph.
#[derive(Debug, Clone)]
pub struct KCoreSnapshot {
    k: u32,
    nodes: Vec<NodeId>,
    pos: HashMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl KCoreSnapshot {
    pub fn build(g: &Graph, cores: &CoreInfo, k: u32) -> KCoreSnapshot {
        let nodes: Vec<NodeId> = g.node_ids().filter(|&u| cores.core(u) >= k).collect();
        let pos: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut edge_count = 0;
        let adj: Vec<Vec<usize>> = nodes
            .iter()
            .map(|&u| {
                let row: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .filter_map(|v| pos.get(v).copied())
                    .collect();
                edge_count += row.len();
                row
            })
            .collect();
        edge_count /= 2;
        KCoreSnapshot {
            k,
            nodes,
            pos,
            adj,
            edge_count,
        }
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.pos.contains_key(&u)
    }

    /// Dense index of `u` within the snapshot, if it lies in the core.
    pub fn position(&self, u: NodeId) -> Option<usize> {
        self.pos.get(&u).copied()
    }

    /// Neighbors of the node at dense index `i`, as dense indices, ascending.
    pub fn local_neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        match (self.pos.get(&e.a()), self.pos.get(&e.b())) {
            (Some(&i), Some(&j)) => self.adj[i].contains(&j),
            _ => false,
        }
    }

    /// Within-core degree of `u`, or None when `u` is outside the core.
    pub fn core_degree(&self, u: NodeId) -> Option<usize> {
        self.pos.get(&u).map(|&i| self.adj[i].len())
    }

    /// Peel the snapshot after deleting `removed`: any node whose remaining
    /// within-core degree falls below k drops out, iteratively. Removed edges
    /// outside the core contribute nothing. Returns the dropped nodes.
    pub fn cascade_followers<'a, I>(&self, removed: I) -> BTreeSet<NodeId>
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let k = self.k as usize;
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut dead: Vec<bool> = vec![false; self.nodes.len()];
        let mut cut: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.nodes.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();

        for e in removed {
            let (i, j) = match (self.pos.get(&e.a()), self.pos.get(&e.b())) {
                (Some(&i), Some(&j)) => (i, j),
                _ => continue,
            };
            if !self.adj[i].contains(&j) || !cut[i].insert(j) {
                continue;
            }
            cut[j].insert(i);
            deg[i] -= 1;
            deg[j] -= 1;
            if deg[i] < k && !dead[i] {
                dead[i] = true;
                queue.push_back(i);
            }
            if deg[j] < k && !dead[j] {
                dead[j] = true;
                queue.push_back(j);
            }
        }

        let mut members = BTreeSet::new();
        while let Some(i) = queue.pop_front() {
            members.insert(self.nodes[i]);
            for &j in &self.adj[i] {
                if dead[j] || cut[i].contains(&j) {
                    continue;
                }
                deg[j] -= 1;
                if deg[j] < k {
                    dead[j] = true;
                    queue.push_back(j);
                }
            }
        }
        members
    }
}

/// Followers of `removed` in `g` at level `k`: the k-core nodes of `g` that
/// are absent from the k-core of `g` minus `removed`.
pub fn followers<'a, I>(g: &Graph, removed: I, k: u32) -> FollowerSet
where
    I: IntoIterator<Item = &'a Edge>,
{
    let cores = core_numbers(g);
    let snapshot = KCoreSnapshot::build(g, &cores, k);
    FollowerSet {
        k,
        members: snapshot.cascade_followers(removed),
    }
}

/// The coarse candidate set P: edges whose smaller endpoint core number is
/// exactly k. Only these edges can expel k-nodes.
pub fn candidate_p(g: &Graph, k: u32) -> BTreeSet<Edge> {
    let cores = core_numbers(g);
    candidate_p_with(g, &cores, k)
}

pub fn candidate_p_with(g: &Graph, cores: &CoreInfo, k: u32) -> BTreeSet<Edge> {
    g.edges()
        .filter(|e| cores.core(e.a()).min(cores.core(e.b())) == k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn edge(a: u32, b: u32) -> Edge {
        Edge::new(NodeId(a), NodeId(b))
    }

    #[test]
    fn complete_graph_cores() {
        let g = fixtures::complete(5);
        let cores = core_numbers(&g);
        assert_eq!(cores.k_max(), 4);
        assert!(g.node_ids().all(|u| cores.core(u) == 4));
    }

    #[test]
    fn fix_b_cores() {
        let cores = core_numbers(&fixtures::fix_b());
        assert_eq!(cores.per_node(), &[3, 3, 3, 3, 2, 2]);
        assert_eq!(cores.k_max(), 3);
    }

    #[test]
    fn isolated_node_has_core_zero() {
        let g = Graph::with_nodes(1);
        let cores = core_numbers(&g);
        assert_eq!(cores.per_node(), &[0]);
        assert_eq!(cores.k_max(), 0);
    }

    #[test]
    fn k_core_of_fix_b() {
        let g = fixtures::fix_b();
        let view = k_core(&g, 3);
        let want: BTreeSet<NodeId> = [0, 1, 2, 3].into_iter().map(NodeId).collect();
        assert_eq!(view.nodes, want);
        assert_eq!(view.edges.len(), 6);
    }

    #[test]
    fn k_core_of_fix_a_is_whole_graph() {
        let g = fixtures::fix_a();
        let view = k_core(&g, 2);
        assert_eq!(view.nodes.len(), 6);
        assert_eq!(view.edges.len(), 7);
    }

    #[test]
    fn k_core_above_k_max_is_empty() {
        let g = fixtures::fix_b();
        let view = k_core(&g, 4);
        assert!(view.nodes.is_empty());
        assert!(view.edges.is_empty());
    }

    #[test]
    fn nested_cores_on_fixtures() {
        for g in [fixtures::fix_a(), fixtures::fix_b(), fixtures::complete(6)] {
            let cores = core_numbers(&g);
            for k in 0..cores.k_max() {
                let outer = k_core(&g, k);
                let inner = k_core(&g, k + 1);
                assert!(inner.nodes.is_subset(&outer.nodes));
            }
        }
    }

    #[test]
    fn bridge_removal_leaves_both_triangles_in_core() {
        let g = fixtures::fix_a();
        let f = followers(&g, [&edge(2, 3)], 2);
        assert!(f.is_empty());
    }

    #[test]
    fn triangle_edge_removal_cascades_through_fix_a() {
        let g = fixtures::fix_a();
        let f = followers(&g, [&edge(0, 1)], 2);
        let want: BTreeSet<NodeId> = [0, 1, 2].into_iter().map(NodeId).collect();
        assert_eq!(f.members, want);
    }

    #[test]
    fn any_edge_collapses_a_complete_core() {
        let g = fixtures::complete(5);
        for e in g.edges() {
            let f = followers(&g, [&e], 4);
            assert_eq!(f.len(), 5, "edge {e} should collapse all of K5");
        }
    }

    #[test]
    fn removal_outside_the_core_contributes_nothing() {
        let g = fixtures::fix_b();
        // (4,5) has min core 2; at k = 3 it is outside the core.
        let f = followers(&g, [&edge(4, 5)], 3);
        assert!(f.is_empty());
    }

    #[test]
    fn candidate_p_examples() {
        let want: BTreeSet<Edge> = [edge(0, 4), edge(1, 4), edge(2, 5), edge(4, 5)]
            .into_iter()
            .collect();
        assert_eq!(candidate_p(&fixtures::fix_b(), 2), want);
        assert_eq!(candidate_p(&fixtures::fix_a(), 2).len(), 7);
        assert_eq!(candidate_p(&fixtures::complete(5), 4).len(), 10);
    }
}
