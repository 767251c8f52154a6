use std::collections::HashMap;

use crate::error::{PcsError, Result};
use crate::graph::{LabelId, PTree, VertexId};
use crate::index::CpIndex;
use crate::kcore::k_core_component;
use crate::subtree::generate_subtrees;

use super::{normalize, Counters, ResultSet};

/// Index-based enumeration: like `basic`, but each extension `T = T' + x`
/// is verified inside `G_k[T'] ∩ get(k, q, x)`.
pub fn query_incre(idx: &CpIndex, q: VertexId, k: u32) -> Result<ResultSet> {
    if q as usize >= idx.num_vertices() {
        return Err(PcsError::VertexOutOfRange {
            vertex: q,
            n: idx.num_vertices(),
        });
    }
    let gp = idx.gptree();
    let tq = idx.restore_ptree(q);
    let mut counters = Counters::default();

    let gk = idx.k_hat_core(k, q);
    counters.gkt_computations += 1;
    if gk.is_empty() {
        return Ok(ResultSet {
            communities: Vec::new(),
            counters,
        });
    }

    let mut gets: HashMap<LabelId, Vec<VertexId>> = HashMap::new();
    let mut raw = Vec::new();
    let mut stack: Vec<(PTree, Vec<VertexId>)> = vec![(PTree::empty(), gk)];
    while let Some((t_prime, members)) = stack.pop() {
        let mut maximal = true;
        for t in generate_subtrees(&t_prime, &tq, gp) {
            counters.subtrees_generated += 1;
            counters.subtrees_verified += 1;
            counters.gkt_computations += 1;
            let x = added_label(&t_prime, &t);
            let bound = gets.entry(x).or_insert_with(|| idx.get(k, q, x));
            let candidates = intersect(&members, bound);
            counters.candidate_volume += candidates.len() as u64;
            let found = k_core_component(idx.adjacency(), &candidates, k, q);
            if !found.is_empty() {
                maximal = false;
                stack.push((t, found));
            }
        }
        if maximal {
            raw.push((t_prime, members));
        }
    }
    Ok(ResultSet {
        communities: normalize(raw, gp, |v| idx.restore_ptree(v)),
        counters,
    })
}

/// The single label in `bigger` but not in `smaller`.
pub(crate) fn added_label(smaller: &PTree, bigger: &PTree) -> LabelId {
    bigger
        .iter()
        .find(|&l| !smaller.contains(l))
        .expect("bigger has one extra label")
}

/// Intersection of two ascending vertex lists.
pub(crate) fn intersect(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
