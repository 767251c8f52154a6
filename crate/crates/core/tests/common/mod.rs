#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use pcs::subtree::child_subtrees;
use pcs::{gkt_direct, GpTree, PTree, ProfiledGraph, VertexId};
use rand::Rng;

/// A random subtree of `t`: each node of `t` is kept with probability `p`
/// when its parent was kept (the root when `t` is non-empty).
pub fn random_subtree(t: &PTree, gp: &GpTree, p: f64, rng: &mut impl Rng) -> PTree {
    let mut kept: Vec<_> = Vec::new();
    for &l in gp.preorder() {
        if !t.contains(l) {
            continue;
        }
        let parent_ok = gp.parent(l).is_none_or(|par| kept.contains(&par));
        if parent_ok && rng.gen_bool(p) {
            kept.push(l);
        }
    }
    PTree::from_closed(kept)
}

/// Every subtree of `t`, the empty tree included.
pub fn all_subtrees(t: &PTree, gp: &GpTree) -> Vec<PTree> {
    let mut seen: HashSet<PTree> = HashSet::from([PTree::empty()]);
    let mut queue = VecDeque::from([PTree::empty()]);
    let mut out = Vec::new();
    while let Some(s) = queue.pop_front() {
        for c in child_subtrees(&s, t, gp) {
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
        out.push(s);
    }
    out
}

/// Feasible subtrees of `T(q)` by direct peeling.
pub fn feasible_subtrees(g: &ProfiledGraph, q: VertexId, k: u32) -> Vec<PTree> {
    all_subtrees(g.ptree(q), g.gptree())
        .into_iter()
        .filter(|t| !gkt_direct(g, q, k, t).is_empty())
        .collect()
}

/// Whether `vertices` induce a connected subgraph (checked from `q`).
pub fn connected_from(g: &ProfiledGraph, q: VertexId, vertices: &[VertexId]) -> bool {
    let inside: HashSet<VertexId> = vertices.iter().copied().collect();
    if !inside.contains(&q) {
        return false;
    }
    let mut seen = HashSet::from([q]);
    let mut stack = vec![q];
    while let Some(v) = stack.pop() {
        for &u in g.adjacency().neighbors(v) {
            if inside.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == inside.len()
}

pub fn min_internal_degree(g: &ProfiledGraph, vertices: &[VertexId]) -> usize {
    let inside: HashSet<VertexId> = vertices.iter().copied().collect();
    vertices
        .iter()
        .map(|&v| {
            g.adjacency()
                .neighbors(v)
                .iter()
                .filter(|u| inside.contains(u))
                .count()
        })
        .min()
        .unwrap_or(0)
}

pub fn is_sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}
