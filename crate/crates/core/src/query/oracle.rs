use std::collections::{HashSet, VecDeque};

use crate::error::{PcsError, Result};
use crate::graph::{PTree, ProfiledGraph, VertexId};
use crate::kcore::gkt_direct;
use crate::subtree::{child_subtrees, count_subtrees};

use super::{normalize, Counters, ResultSet};

/// Environment variable overriding [`oracle_bound`].
pub const ORACLE_BOUND_ENV: &str = "PCS_ORACLE_BOUND";

const DEFAULT_BOUND: u128 = 1 << 16;

/// Largest subtree count of `T(q)` the oracle will enumerate.
pub fn oracle_bound() -> u128 {
    std::env::var(ORACLE_BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BOUND)
}

/// Brute force: every subtree of `T(q)` is checked with a fresh peel of the
/// whole graph, and the feasible ones with no feasible lattice child are kept.
pub fn oracle(g: &ProfiledGraph, q: VertexId, k: u32) -> Result<ResultSet> {
    g.check_vertex(q)?;
    let gp = g.gptree();
    let tq = g.ptree(q).clone();
    let count = count_subtrees(&tq, gp);
    let bound = oracle_bound();
    if count > bound {
        return Err(PcsError::OracleBound { count, bound });
    }

    let mut counters = Counters::default();
    let mut all = Vec::new();
    let mut seen: HashSet<PTree> = HashSet::from([PTree::empty()]);
    let mut queue = VecDeque::from([PTree::empty()]);
    while let Some(t) = queue.pop_front() {
        for c in child_subtrees(&t, &tq, gp) {
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
        all.push(t);
    }
    counters.subtrees_generated = all.len() as u64;

    let feasible: HashSet<&PTree> = all
        .iter()
        .filter(|t| {
            counters.gkt_computations += 1;
            counters.candidate_volume += g.num_vertices() as u64;
            !gkt_direct(g, q, k, t).is_empty()
        })
        .collect();
    counters.subtrees_verified = counters.gkt_computations;

    let raw: Vec<(PTree, Vec<VertexId>)> = feasible
        .iter()
        .filter(|t| {
            child_subtrees(t, &tq, gp)
                .iter()
                .all(|c| !feasible.contains(c))
        })
        .map(|t| ((*t).clone(), gkt_direct(g, q, k, t)))
        .collect();
    Ok(ResultSet {
        communities: normalize(raw, gp, |v| g.ptree(v).clone()),
        counters,
    })
}
