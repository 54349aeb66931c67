//! Small named graphs used across the test suites and benches.

use crate::graph::Graph;

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge (2,3).
/// Every node has core number 2.
pub fn fix_a() -> Graph {
    Graph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])
}

/// K4 on {0,1,2,3} plus edges (0,4), (1,4), (4,5), (2,5).
/// Core numbers 3,3,3,3,2,2.
pub fn fix_b() -> Graph {
    Graph::from_edges(
        6,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
            (0, 4),
            (1, 4),
            (4, 5),
            (2, 5),
        ],
    )
}

/// Complete graph on `n` nodes.
pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}
