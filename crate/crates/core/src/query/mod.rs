//! Profiled community search queries.
//!
//! Every algorithm produces raw `(subtree, members)` pairs for feasible
//! subtrees it believes maximal; [`normalize`] turns those into the final
//! communities, so all algorithms agree on output shape.

mod advanced;
mod basic;
mod incre;
mod oracle;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use advanced::{
    expand_ptree, find_d, find_i, find_p, query_advanced, Cut, FeasibilityCache, Strategy, Verifier,
};
pub use basic::query_basic;
pub use incre::query_incre;
pub use oracle::{oracle, oracle_bound, ORACLE_BOUND_ENV};

use crate::error::{PcsError, Result};
use crate::graph::{GpTree, PTree, ProfiledGraph, VertexId};
use crate::index::CpIndex;
use crate::subtree::maximal_common_subtree;

/// A profiled community: its members and their maximal common subtree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Community {
    pub vertices: Vec<VertexId>,
    pub mct: PTree,
}

/// Work counters. `subtrees_verified` counts subtrees whose feasibility was
/// computed (not inferred or cached).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub subtrees_generated: u64,
    pub subtrees_verified: u64,
    pub gkt_computations: u64,
    /// Summed sizes of the vertex sets handed to peeling.
    pub candidate_volume: u64,
}

impl Counters {
    pub fn add(&mut self, other: &Counters) {
        self.subtrees_generated += other.subtrees_generated;
        self.subtrees_verified += other.subtrees_verified;
        self.gkt_computations += other.gkt_computations;
        self.candidate_volume += other.candidate_volume;
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ResultSet {
    pub communities: Vec<Community>,
    pub counters: Counters,
}

impl PartialEq for ResultSet {
    /// Results compare by their communities only.
    fn eq(&self, other: &Self) -> bool {
        self.communities == other.communities
    }
}

impl ResultSet {
    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Basic,
    Incre,
    AdvI,
    AdvD,
    AdvP,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Basic,
        Algorithm::Incre,
        Algorithm::AdvI,
        Algorithm::AdvD,
        Algorithm::AdvP,
        Algorithm::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Basic => "basic",
            Algorithm::Incre => "incre",
            Algorithm::AdvI => "adv-i",
            Algorithm::AdvD => "adv-d",
            Algorithm::AdvP => "adv-p",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn needs_index(self) -> bool {
        !matches!(self, Algorithm::Basic | Algorithm::Oracle)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = PcsError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PcsError::UnknownAlgorithm(s.to_string()))
    }
}

/// Runs `algorithm`. Index-based algorithms need `idx`; `basic` and the
/// oracle need `g`.
pub fn run(
    algorithm: Algorithm,
    g: &ProfiledGraph,
    idx: &CpIndex,
    q: VertexId,
    k: u32,
) -> Result<ResultSet> {
    match algorithm {
        Algorithm::Basic => query_basic(g, q, k),
        Algorithm::Incre => query_incre(idx, q, k),
        Algorithm::AdvI => query_advanced(idx, q, k, Strategy::I),
        Algorithm::AdvD => query_advanced(idx, q, k, Strategy::D),
        Algorithm::AdvP => query_advanced(idx, q, k, Strategy::P),
        Algorithm::Oracle => oracle(g, q, k),
    }
}

/// Reduces raw `(subtree, members)` entries to the final communities.
///
/// Each entry's theme is recomputed as the maximal common subtree of its
/// members; entries with equal themes merge, and any entry whose theme is a
/// strict subtree of another's is dropped. Output is sorted by theme in
/// canonical order.
pub fn normalize<F>(raw: Vec<(PTree, Vec<VertexId>)>, gp: &GpTree, ptree_of: F) -> Vec<Community>
where
    F: Fn(VertexId) -> PTree,
{
    let mut by_mct: HashMap<PTree, Vec<VertexId>> = HashMap::new();
    for (_, vertices) in raw {
        if vertices.is_empty() {
            continue;
        }
        let trees: Vec<PTree> = vertices.iter().map(|&v| ptree_of(v)).collect();
        let mct = maximal_common_subtree(&trees).expect("non-empty");
        let slot = by_mct.entry(mct).or_default();
        if vertices.len() > slot.len() {
            *slot = vertices;
        }
    }
    let entries: Vec<(PTree, Vec<VertexId>)> = by_mct.into_iter().collect();
    let mut out: Vec<Community> = entries
        .iter()
        .filter(|(m, _)| {
            !entries
                .iter()
                .any(|(other, _)| other.len() > m.len() && m.is_subtree_of(other))
        })
        .map(|(mct, vertices)| {
            let mut vertices = vertices.clone();
            vertices.sort_unstable();
            Community {
                vertices,
                mct: mct.clone(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        gp.cmp_trees(&a.mct, &b.mct)
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabelId;

    fn t(ids: &[u32]) -> PTree {
        PTree::from_closed(ids.iter().map(|&i| LabelId(i)).collect())
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("adv-x".parse::<Algorithm>().is_err());
    }

    #[test]
    fn normalize_merges_and_recomputes() {
        let gp = GpTree::parse("0 -1 r\n1 0 a\n2 0 b\n3 1 c\n").unwrap();
        let profiles = [t(&[0, 1, 3]), t(&[0, 1, 3, 2]), t(&[0, 2])];
        let of = |v: VertexId| profiles[v as usize].clone();
        // Same members under T'1 ⊂ T'2: one community with the members' theme.
        let raw = vec![(t(&[0]), vec![0, 1]), (t(&[0, 1]), vec![0, 1])];
        let got = normalize(raw, &gp, of);
        assert_eq!(
            got,
            vec![Community {
                vertices: vec![0, 1],
                mct: t(&[0, 1, 3])
            }]
        );

        // Dominated theme dropped.
        let raw = vec![(t(&[0]), vec![0, 1, 2]), (t(&[0, 1]), vec![0, 1])];
        let got = normalize(raw, &gp, of);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].mct, t(&[0, 1, 3]));
    }
}
