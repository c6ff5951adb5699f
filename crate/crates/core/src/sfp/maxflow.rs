//! Maximum flow through the layered graph of a capacity word.
//!
//! Layer `0` holds the supplies, layer `i` is joined to layer `i + 1` by
//! the `i`-th capacity, and the last layer drains into a sink through the
//! target bounds.

use std::collections::VecDeque;

use crate::flow::Capacity;
use crate::wqo::{ExtNat, Fin, Omega};

/// Value of a maximum flow; `Omega` when an all-ω path exists.
pub fn layered_max_flow(supply: &[ExtNat], word: &[&Capacity], sink: &[ExtNat]) -> ExtNat {
    let n = supply.len();
    let layers = word.len() + 1;
    let nodes = layers * n + 2;
    let (src, dst) = (nodes - 2, nodes - 1);
    let node = |layer: usize, q: usize| layer * n + q;

    let mut edges: Vec<(usize, usize, ExtNat)> = Vec::new();
    for (q, &c) in supply.iter().enumerate() {
        edges.push((src, node(0, q), c));
    }
    for (i, cap) in word.iter().enumerate() {
        for p in 0..n {
            for q in cap.successors(p) {
                edges.push((node(i, p), node(i + 1, q), cap.get(p, q)));
            }
        }
    }
    for (q, &c) in sink.iter().enumerate() {
        edges.push((node(layers - 1, q), dst, c));
    }
    edges.retain(|e| !e.2.is_zero());

    if omega_path(nodes, &edges, src, dst) {
        return Omega;
    }
    let big: u64 = 1 + edges.iter().filter_map(|e| e.2.finite()).sum::<u64>();
    let mut residual = vec![vec![0u64; nodes]; nodes];
    for &(u, v, c) in &edges {
        residual[u][v] += c.finite().unwrap_or(big);
    }
    Fin(edmonds_karp(&mut residual, src, dst))
}

fn omega_path(nodes: usize, edges: &[(usize, usize, ExtNat)], src: usize, dst: usize) -> bool {
    let mut seen = vec![false; nodes];
    let mut stack = vec![src];
    seen[src] = true;
    while let Some(u) = stack.pop() {
        for &(a, b, c) in edges {
            if a == u && c.is_omega() && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen[dst]
}

fn edmonds_karp(residual: &mut [Vec<u64>], src: usize, dst: usize) -> u64 {
    let n = residual.len();
    let mut total = 0;
    loop {
        let mut parent = vec![usize::MAX; n];
        parent[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if parent[v] == usize::MAX && residual[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[dst] == usize::MAX {
            return total;
        }
        let mut push = u64::MAX;
        let mut v = dst;
        while v != src {
            push = push.min(residual[parent[v]][v]);
            v = parent[v];
        }
        let mut v = dst;
        while v != src {
            let u = parent[v];
            residual[u][v] -= push;
            residual[v][u] += push;
            v = u;
        }
        total += push;
    }
}

/// Minimum cut of the same layered graph, by exhaustive search over the
/// source side of every layer.
pub fn layered_min_cut(supply: &[ExtNat], word: &[&Capacity], sink: &[ExtNat]) -> ExtNat {
    let n = supply.len();
    assert!(n < 20, "exhaustive cut search is limited to small instances");
    let sets = 1usize << n;
    let members = |s: usize| (0..n).filter(move |q| s >> q & 1 == 1);
    // cost[s]: cheapest cut so far whose current layer's source side is s
    let mut cost: Vec<ExtNat> = (0..sets)
        .map(|s| (0..n).filter(|q| s >> q & 1 == 0).map(|q| supply[q]).sum())
        .collect();
    for cap in word {
        cost = (0..sets)
            .map(|next| {
                (0..sets)
                    .map(|cur| {
                        let crossing: ExtNat = members(cur)
                            .flat_map(|p| {
                                (0..n).filter(move |q| next >> q & 1 == 0).map(move |q| cap.get(p, q))
                            })
                            .sum();
                        cost[cur] + crossing
                    })
                    .min()
                    .unwrap_or(Omega)
            })
            .collect();
    }
    (0..sets)
        .map(|s| cost[s] + members(s).map(|q| sink[q]).sum::<ExtNat>())
        .min()
        .unwrap_or(Omega)
}
