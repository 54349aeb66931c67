//! Onion-style layering of k-nodes and the backtrack tree built on it.
//!
//! The layering refines peeling inside the k-core: per round, nodes whose
//! working degree dropped below k take priority over nodes sitting exactly
//! at k. Lower layer means earlier collapse. The backtrack tree walks from
//! the targets toward strictly lower layers and is the basis of the reduced
//! candidate edge set H.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::cores::{core_numbers, CoreInfo, KCoreSnapshot, KCoreView};
use crate::graph::{Edge, Graph, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OnionError {
    #[error("the {0}-core is empty; nothing to layer")]
    EmptyKCore(u32),
    #[error("target set is empty")]
    EmptyTargets,
    #[error("targets have mismatched core numbers: {0} has core {1}, {2} has core {3}")]
    MismatchedTargetCores(NodeId, u32, NodeId, u32),
    #[error("target {node} is not a {k}-node (core number {core})")]
    TargetNotKNode { node: NodeId, k: u32, core: u32 },
}

/// Layer assignment for the k-nodes of one graph. Layers are contiguous
/// from 1; the domain is exactly the nodes with core number k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnionLayers {
    k: u32,
    layer: BTreeMap<NodeId, u32>,
    depth: u32,
}

impl OnionLayers {
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn layer(&self, u: NodeId) -> Option<u32> {
        self.layer.get(&u).copied()
    }

    /// Largest assigned layer index.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.layer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layer.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.layer.iter().map(|(&u, &l)| (u, l))
    }
}

pub fn mod_layers(g: &Graph, k: u32) -> Result<OnionLayers, OnionError> {
    let cores = core_numbers(g);
    let snapshot = KCoreSnapshot::build(g, &cores, k);
    mod_layers_with(&snapshot, &cores)
}

/// Layer the k-nodes of the snapshot's core. Each round splits the working
/// graph into `lower` (degree < k) and `equal` (degree = k); `lower` wins
/// when non-empty, otherwise `equal` is assigned. Assigned nodes leave the
/// working graph and the round index becomes their layer.
pub fn mod_layers_with(
    snapshot: &KCoreSnapshot,
    cores: &CoreInfo,
) -> Result<OnionLayers, OnionError> {
    let k = snapshot.k();
    if snapshot.node_count() == 0 {
        return Err(OnionError::EmptyKCore(k));
    }
    let nodes = snapshot.nodes();
    let mut deg: Vec<usize> = (0..nodes.len())
        .map(|i| snapshot.local_neighbors(i).len())
        .collect();
    let mut alive: Vec<bool> = vec![true; nodes.len()];
    let mut remaining_k_nodes = nodes
        .iter()
        .filter(|&&u| cores.core(u) == k)
        .count();

    // Working graph starts at the k-core, so minimum degree is >= k and the
    // candidate pool is exactly the nodes currently at degree <= k. Degrees
    // only fall, so the pool grows monotonically until assignment.
    let mut pool: BTreeSet<usize> = deg
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d <= k as usize)
        .map(|(i, _)| i)
        .collect();

    let mut layer: BTreeMap<NodeId, u32> = BTreeMap::new();
    let mut depth = 0u32;
    while remaining_k_nodes > 0 {
        depth += 1;
        let lower: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&i| deg[i] < k as usize)
            .collect();
        let assigned: Vec<usize> = if lower.is_empty() {
            pool.iter().copied().collect()
        } else {
            lower
        };
        assert!(
            !assigned.is_empty(),
            "layering stalled with {remaining_k_nodes} k-node(s) unassigned"
        );
        for &i in &assigned {
            let u = nodes[i];
            // Starting from the k-core, only k-nodes can reach degree <= k.
            assert_eq!(
                cores.core(u),
                k,
                "layered node {u} has core {} != {k}",
                cores.core(u)
            );
            layer.insert(u, depth);
            alive[i] = false;
            pool.remove(&i);
            remaining_k_nodes -= 1;
        }
        for &i in &assigned {
            for &j in snapshot.local_neighbors(i) {
                if alive[j] {
                    deg[j] -= 1;
                    if deg[j] <= k as usize {
                        pool.insert(j);
                    }
                }
            }
        }
    }
    Ok(OnionLayers { k, layer, depth })
}

/// Directed graph from the targets toward strictly lower layers. Every edge
/// u -> v satisfies layer(v) < layer(u), so the structure is acyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BacktrackTree {
    k: u32,
    roots: BTreeSet<NodeId>,
    nodes: BTreeSet<NodeId>,
    out_edges: BTreeMap<NodeId, Vec<NodeId>>,
    in_degree: BTreeMap<NodeId, u32>,
    edge_count: usize,
}

impl BacktrackTree {
    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn roots(&self) -> &BTreeSet<NodeId> {
        &self.roots
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.nodes.contains(&u)
    }

    pub fn children(&self, u: NodeId) -> &[NodeId] {
        self.out_edges.get(&u).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn in_degree(&self, u: NodeId) -> u32 {
        self.in_degree.get(&u).copied().unwrap_or(0)
    }

    pub(crate) fn in_degrees(&self) -> &BTreeMap<NodeId, u32> {
        &self.in_degree
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Directed edges as (parent, child) pairs, grouped by parent ascending.
    pub fn directed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_edges
            .iter()
            .flat_map(|(&u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// The tree edge matching an undirected edge, if any.
    pub fn directed_counterpart(&self, e: Edge) -> Option<(NodeId, NodeId)> {
        if self.children(e.a()).contains(&e.b()) {
            Some((e.a(), e.b()))
        } else if self.children(e.b()).contains(&e.a()) {
            Some((e.b(), e.a()))
        } else {
            None
        }
    }
}

pub fn backtrack_tree(g: &Graph, targets: &BTreeSet<NodeId>) -> Result<BacktrackTree, OnionError> {
    let cores = core_numbers(g);
    let k = shared_target_core(&cores, targets)?;
    let snapshot = KCoreSnapshot::build(g, &cores, k);
    let layers = mod_layers_with(&snapshot, &cores)?;
    backtrack_tree_with(&snapshot, &cores, &layers, targets)
}

/// Breadth-first backtracking over a prebuilt core snapshot and layering.
/// Targets are enqueued ascending; each dequeued node adds directed edges to
/// every lower-layer k-neighbor and enqueues the unvisited ones.
pub fn backtrack_tree_with(
    snapshot: &KCoreSnapshot,
    cores: &CoreInfo,
    layers: &OnionLayers,
    targets: &BTreeSet<NodeId>,
) -> Result<BacktrackTree, OnionError> {
    if targets.is_empty() {
        return Err(OnionError::EmptyTargets);
    }
    let k = snapshot.k();
    for &t in targets {
        let core = cores.core(t);
        if core != k {
            return Err(OnionError::TargetNotKNode { node: t, k, core });
        }
    }

    let mut nodes: BTreeSet<NodeId> = targets.clone();
    let mut out_edges: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut in_degree: BTreeMap<NodeId, u32> =
        targets.iter().map(|&t| (t, 0)).collect();
    let mut edge_count = 0usize;
    let mut queue: VecDeque<NodeId> = targets.iter().copied().collect();

    while let Some(u) = queue.pop_front() {
        let lu = layers
            .layer(u)
            .expect("every visited node is a k-node with a layer");
        let i = snapshot
            .position(u)
            .expect("every visited node lies in the k-core");
        let mut expansion: Vec<NodeId> = Vec::new();
        for &j in snapshot.local_neighbors(i) {
            let v = snapshot.nodes()[j];
            if cores.core(v) != k {
                continue;
            }
            let lv = layers.layer(v).expect("k-node must be layered");
            if lv < lu {
                expansion.push(v);
            }
        }
        for &v in &expansion {
            *in_degree.entry(v).or_insert(0) += 1;
            edge_count += 1;
            if nodes.insert(v) {
                queue.push_back(v);
            }
        }
        if !expansion.is_empty() {
            let previous = out_edges.insert(u, expansion);
            assert!(previous.is_none(), "node {u} expanded twice");
        }
    }

    Ok(BacktrackTree {
        k,
        roots: targets.clone(),
        nodes,
        out_edges,
        in_degree,
        edge_count,
    })
}

/// Reduced candidate edges: the undirected tree edges plus each target's
/// k-core incident edges that lead outside the tree. Always a subset of P.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateH {
    pub edges: BTreeSet<Edge>,
}

pub fn candidate_h(
    bt: &BacktrackTree,
    targets: &BTreeSet<NodeId>,
    kcore: &KCoreView,
) -> CandidateH {
    let mut edges: BTreeSet<Edge> = bt.directed_edges().map(|(u, v)| Edge::new(u, v)).collect();
    for e in &kcore.edges {
        let (a, b) = (e.a(), e.b());
        let from_a = targets.contains(&a) && !bt.contains(b);
        let from_b = targets.contains(&b) && !bt.contains(a);
        if from_a || from_b {
            edges.insert(*e);
        }
    }
    CandidateH { edges }
}

/// Same augmentation computed against a core snapshot.
pub fn candidate_h_with(
    bt: &BacktrackTree,
    targets: &BTreeSet<NodeId>,
    snapshot: &KCoreSnapshot,
) -> CandidateH {
    let mut edges: BTreeSet<Edge> = bt.directed_edges().map(|(u, v)| Edge::new(u, v)).collect();
    for &t in targets {
        let i = snapshot
            .position(t)
            .expect("target lies in the k-core snapshot");
        for &j in snapshot.local_neighbors(i) {
            let v = snapshot.nodes()[j];
            if !bt.contains(v) {
                edges.insert(Edge::new(t, v));
            }
        }
    }
    CandidateH { edges }
}

pub(crate) fn shared_target_core(
    cores: &CoreInfo,
    targets: &BTreeSet<NodeId>,
) -> Result<u32, OnionError> {
    let mut iter = targets.iter();
    let first = *iter.next().ok_or(OnionError::EmptyTargets)?;
    let k = cores.core(first);
    for &t in iter {
        let c = cores.core(t);
        if c != k {
            return Err(OnionError::MismatchedTargetCores(first, k, t, c));
        }
    }
    Ok(k)
}
