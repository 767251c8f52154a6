use crate::error::Result;
use crate::graph::{PTree, ProfiledGraph, VertexId};
use crate::kcore::{gkt_direct, k_core_component};
use crate::subtree::generate_subtrees;

use super::{normalize, Counters, ResultSet};

/// Index-free search: rightmost-extension enumeration of `T(q)`, each
/// candidate verified by peeling inside the k-core of `q`, pruning below
/// infeasible subtrees.
pub fn query_basic(g: &ProfiledGraph, q: VertexId, k: u32) -> Result<ResultSet> {
    g.check_vertex(q)?;
    let gp = g.gptree();
    let tq = g.ptree(q).clone();
    let mut counters = Counters::default();

    let gk = gkt_direct(g, q, k, &PTree::empty());
    counters.gkt_computations += 1;
    counters.candidate_volume += g.num_vertices() as u64;
    if gk.is_empty() {
        return Ok(ResultSet {
            communities: Vec::new(),
            counters,
        });
    }

    let mut raw = Vec::new();
    let mut stack: Vec<(PTree, Vec<VertexId>)> = vec![(PTree::empty(), gk.clone())];
    while let Some((t_prime, members)) = stack.pop() {
        let mut maximal = true;
        for t in generate_subtrees(&t_prime, &tq, gp) {
            counters.subtrees_generated += 1;
            counters.subtrees_verified += 1;
            counters.gkt_computations += 1;
            let candidates: Vec<VertexId> = gk
                .iter()
                .copied()
                .filter(|&v| t.is_subtree_of(g.ptree(v)))
                .collect();
            counters.candidate_volume += candidates.len() as u64;
            let found = k_core_component(g.adjacency(), &candidates, k, q);
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
        communities: normalize(raw, gp, |v| g.ptree(v).clone()),
        counters,
    })
}
