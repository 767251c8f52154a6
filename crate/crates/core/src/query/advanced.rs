//! Border search over the subtree lattice of `T(q)`.
//!
//! A cut is a pair of lattice neighbours `(IF, F)` where `F` is feasible and
//! `IF = F + one node` is not. Starting from one cut found by `find-I`,
//! `find-D` or `find-P`, [`expand_ptree`] walks neighbouring cuts and
//! collects every maximal feasible subtree on the way.

use std::collections::{HashMap, HashSet, VecDeque};
use std::rc::Rc;
use std::str::FromStr;

use crate::error::{PcsError, Result};
use crate::graph::{LabelId, PTree, VertexId};
use crate::index::CpIndex;
use crate::kcore::k_core_component;
use crate::subtree::{child_subtrees, generate_subtrees, parent_subtrees};

use super::incre::{added_label, intersect};
use super::{normalize, Counters, ResultSet};

pub type Members = Rc<Vec<VertexId>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    I,
    D,
    P,
}

impl FromStr for Strategy {
    type Err = PcsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "adv-i" => Ok(Strategy::I),
            "d" | "adv-d" => Ok(Strategy::D),
            "p" | "adv-p" => Ok(Strategy::P),
            _ => Err(PcsError::UnknownAlgorithm(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut {
    pub infeasible: PTree,
    pub feasible: PTree,
}

/// Memoized feasibility per subtree: `Some(members)` or `None` (infeasible).
#[derive(Debug, Default)]
pub struct FeasibilityCache {
    memo: HashMap<PTree, Option<Members>>,
}

impl FeasibilityCache {
    pub fn get(&self, t: &PTree) -> Option<&Option<Members>> {
        self.memo.get(t)
    }

    pub fn insert(&mut self, t: PTree, v: Option<Members>) {
        self.memo.insert(t, v);
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PTree, &Option<Members>)> {
        self.memo.iter()
    }
}

/// Index-backed feasibility oracle for one query `(q, k)`.
pub struct Verifier<'a> {
    idx: &'a CpIndex,
    q: VertexId,
    k: u32,
    tq: PTree,
    cache: FeasibilityCache,
    gets: HashMap<LabelId, Members>,
    /// Antichain of maximal subtrees known feasible.
    feasible_max: Vec<PTree>,
    /// Antichain of minimal subtrees known infeasible.
    infeasible_min: Vec<PTree>,
    pub counters: Counters,
}

impl<'a> Verifier<'a> {
    pub fn new(idx: &'a CpIndex, q: VertexId, k: u32) -> Result<Self> {
        if q as usize >= idx.num_vertices() {
            return Err(PcsError::VertexOutOfRange {
                vertex: q,
                n: idx.num_vertices(),
            });
        }
        Ok(Verifier {
            idx,
            q,
            k,
            tq: idx.restore_ptree(q),
            cache: FeasibilityCache::default(),
            gets: HashMap::new(),
            feasible_max: Vec::new(),
            infeasible_min: Vec::new(),
            counters: Counters::default(),
        })
    }

    pub fn index(&self) -> &'a CpIndex {
        self.idx
    }

    pub fn tq(&self) -> &PTree {
        &self.tq
    }

    pub fn cache(&self) -> &FeasibilityCache {
        &self.cache
    }

    fn get(&mut self, l: LabelId) -> Members {
        let (idx, k, q) = (self.idx, self.k, self.q);
        self.gets
            .entry(l)
            .or_insert_with(|| Rc::new(idx.get(k, q, l)))
            .clone()
    }

    /// `G_k[t]`, or `None` when `t` is infeasible. `t` must be a subtree of
    /// `T(q)`.
    ///
    /// A subtree containing a known infeasible subtree is infeasible
    /// outright. Otherwise members are peeled from `G_k[P] ∩ get(x)` for a
    /// known feasible parent `P = t - x`, or from the intersection of `get`
    /// over the leaves of `t`. Results are memoized.
    pub fn verify(&mut self, t: &PTree) -> Option<Members> {
        if let Some(hit) = self.cache.get(t) {
            return hit.clone();
        }
        debug_assert!(t.is_subtree_of(&self.tq));
        self.counters.subtrees_generated += 1;
        let result = if self.known_infeasible(t) {
            None
        } else {
            self.compute(t)
        };
        self.record(t, result.is_some());
        self.cache.insert(t.clone(), result.clone());
        result
    }

    /// Feasibility alone. Subtrees of a known feasible tree are feasible and
    /// supertrees of a known infeasible tree are not; neither is verified.
    pub fn is_feasible(&mut self, t: &PTree) -> bool {
        if let Some(hit) = self.cache.get(t) {
            return hit.is_some();
        }
        if self.feasible_max.iter().any(|s| t.is_subtree_of(s)) {
            return true;
        }
        self.verify(t).is_some()
    }

    fn known_infeasible(&self, t: &PTree) -> bool {
        self.infeasible_min.iter().any(|s| s.is_subtree_of(t))
    }

    fn record(&mut self, t: &PTree, feasible: bool) {
        if feasible {
            if self.feasible_max.iter().any(|s| t.is_subtree_of(s)) {
                return;
            }
            self.feasible_max.retain(|s| !s.is_subtree_of(t));
            self.feasible_max.push(t.clone());
        } else {
            if self.known_infeasible(t) {
                return;
            }
            self.infeasible_min.retain(|s| !t.is_subtree_of(s));
            self.infeasible_min.push(t.clone());
        }
    }

    fn compute(&mut self, t: &PTree) -> Option<Members> {
        let gp = self.idx.gptree();
        if t.is_empty() {
            self.counters.gkt_computations += 1;
            let core = self.idx.k_hat_core(self.k, self.q);
            return (!core.is_empty()).then(|| Rc::new(core));
        }
        self.counters.subtrees_verified += 1;
        let leaves = t.leaves(gp);
        if let [leaf] = leaves.as_slice() {
            // A root path is answered by the index directly.
            let got = self.get(*leaf);
            return (!got.is_empty()).then_some(got);
        }
        let mut context: Option<(PTree, Members)> = None;
        for p in parent_subtrees(t, gp) {
            if let Some(Some(m)) = self.cache.get(&p) {
                if context
                    .as_ref()
                    .is_none_or(|(_, best)| m.len() < best.len())
                {
                    context = Some((p, m.clone()));
                }
            }
        }
        let candidates: Vec<VertexId> = match context {
            Some((p, members)) => {
                let x = added_label(&p, t);
                let bound = self.get(x);
                intersect(&members, &bound)
            }
            None => {
                let mut acc: Option<Vec<VertexId>> = None;
                for l in leaves {
                    let got = self.get(l);
                    acc = Some(match acc {
                        None => got.as_ref().clone(),
                        Some(prev) => intersect(&prev, &got),
                    });
                    if acc.as_ref().is_some_and(Vec::is_empty) {
                        break;
                    }
                }
                acc.unwrap_or_default()
            }
        };
        self.counters.gkt_computations += 1;
        self.counters.candidate_volume += candidates.len() as u64;
        let found = k_core_component(self.idx.adjacency(), &candidates, self.k, self.q);
        (!found.is_empty()).then(|| Rc::new(found))
    }
}

/// Walks the feasible/infeasible border from `cut` and returns every
/// maximal feasible subtree found, with its members. When `trace` is given,
/// each processed cut is appended to it.
pub fn expand_ptree(
    v: &mut Verifier,
    cut: &Cut,
    mut trace: Option<&mut Vec<Cut>>,
) -> Result<Vec<(PTree, Members)>> {
    let gp = v.index().gptree();
    let tq = v.tq().clone();
    let Some(f_members) = v.verify(&cut.feasible) else {
        return Err(PcsError::InvalidCut("feasible side is infeasible".into()));
    };
    if cut.infeasible.is_empty() {
        if cut.feasible != tq {
            return Err(PcsError::InvalidCut(
                "an empty infeasible side requires the feasible side to be T(q)".into(),
            ));
        }
        return Ok(vec![(cut.feasible.clone(), f_members)]);
    }
    if cut.infeasible.len() != cut.feasible.len() + 1
        || !cut.feasible.is_subtree_of(&cut.infeasible)
        || !cut.infeasible.is_subtree_of(&tq)
    {
        return Err(PcsError::InvalidCut(
            "infeasible side must be a lattice child of the feasible side".into(),
        ));
    }

    let mut found: HashMap<PTree, Members> = HashMap::new();
    let mut visited: HashSet<Cut> = HashSet::new();
    let mut queue: VecDeque<Cut> = VecDeque::new();
    visited.insert(cut.clone());
    queue.push_back(cut.clone());
    let push = |c: Cut, queue: &mut VecDeque<Cut>, visited: &mut HashSet<Cut>| {
        if visited.insert(c.clone()) {
            queue.push_back(c);
        }
    };

    while let Some(Cut {
        infeasible,
        feasible,
    }) = queue.pop_front()
    {
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(Cut {
                infeasible: infeasible.clone(),
                feasible: feasible.clone(),
            });
        }
        for y in parent_subtrees(&infeasible, gp) {
            if v.is_feasible(&y) {
                let mut maximal = true;
                for child in child_subtrees(&y, &tq, gp) {
                    if v.is_feasible(&child) {
                        maximal = false;
                        let common = child.union(&infeasible);
                        push(
                            Cut {
                                infeasible: common,
                                feasible: child,
                            },
                            &mut queue,
                            &mut visited,
                        );
                    } else {
                        push(
                            Cut {
                                infeasible: child,
                                feasible: y.clone(),
                            },
                            &mut queue,
                            &mut visited,
                        );
                    }
                }
                if maximal {
                    let members = v.verify(&y).expect("feasible");
                    found.insert(y, members);
                }
            } else {
                for p in parent_subtrees(&y, gp) {
                    if v.is_feasible(&p) {
                        push(
                            Cut {
                                infeasible: y.clone(),
                                feasible: p,
                            },
                            &mut queue,
                            &mut visited,
                        );
                    }
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Initial cut by incremental enumeration. `None` when `q` has no k-core.
pub fn find_i(v: &mut Verifier) -> Option<Cut> {
    if !v.is_feasible(&PTree::empty()) {
        return None;
    }
    let gp = v.index().gptree();
    let tq = v.tq().clone();
    let mut stack = vec![PTree::empty()];
    while let Some(t_prime) = stack.pop() {
        for t in generate_subtrees(&t_prime, &tq, gp) {
            if v.is_feasible(&t) {
                stack.push(t);
            } else {
                return Some(Cut {
                    infeasible: t,
                    feasible: t_prime,
                });
            }
        }
    }
    Some(Cut {
        infeasible: PTree::empty(),
        feasible: tq,
    })
}

/// Initial cut by deleting leaves from `T(q)` until a feasible tree appears.
pub fn find_d(v: &mut Verifier) -> Option<Cut> {
    if !v.is_feasible(&PTree::empty()) {
        return None;
    }
    let gp = v.index().gptree();
    let tq = v.tq().clone();
    if v.is_feasible(&tq) {
        return Some(Cut {
            infeasible: PTree::empty(),
            feasible: tq,
        });
    }
    let mut seen: HashSet<PTree> = HashSet::from([tq.clone()]);
    let mut stack = vec![tq];
    while let Some(t) = stack.pop() {
        for smaller in parent_subtrees(&t, gp) {
            if v.is_feasible(&smaller) {
                return Some(Cut {
                    infeasible: t,
                    feasible: smaller,
                });
            }
            if seen.insert(smaller.clone()) {
                stack.push(smaller);
            }
        }
    }
    unreachable!("the empty tree is feasible, so some deletion sequence reaches a feasible tree")
}

/// Initial cut by root paths: seed with a feasible leaf path, merge further
/// paths while feasible, and on the first failure locate the boundary node
/// on the failing path by bisection.
pub fn find_p(v: &mut Verifier) -> Option<Cut> {
    if !v.is_feasible(&PTree::empty()) {
        return None;
    }
    let gp = v.index().gptree();
    let tq = v.tq().clone();
    if tq.is_empty() {
        return Some(Cut {
            infeasible: PTree::empty(),
            feasible: tq,
        });
    }
    // Every non-empty subtree contains the root: settle it before any path.
    let root = PTree::path(gp, LabelId::ROOT);
    if !v.is_feasible(&root) {
        return Some(Cut {
            infeasible: root,
            feasible: PTree::empty(),
        });
    }
    let leaves = tq.leaves(gp);
    let mut frontier = leaves.clone();
    let seed = loop {
        if let Some(&l) = frontier
            .iter()
            .find(|&&l| v.is_feasible(&PTree::path(gp, l)))
        {
            break l;
        }
        let mut up: Vec<LabelId> = frontier
            .iter()
            .map(|&l| gp.parent(l).unwrap_or(l))
            .collect();
        up.sort_by_key(|&l| gp.rank(l));
        up.dedup();
        frontier = up;
    };

    let mut feasible = PTree::path(gp, seed);
    let order: Vec<LabelId> = if frontier == leaves {
        frontier
    } else {
        frontier.into_iter().chain(leaves).collect()
    };
    for t in order {
        let path = gp.root_path(t);
        let candidate = feasible.union(&PTree::from_closed(path.clone()));
        if candidate == feasible {
            continue;
        }
        if v.is_feasible(&candidate) {
            feasible = candidate;
            continue;
        }
        // path[lo] keeps F feasible, path[hi] does not.
        let mut lo = path
            .iter()
            .rposition(|&x| feasible.contains(x))
            .unwrap_or(0);
        let mut hi = path.len() - 1;
        let extend = |upto: usize| feasible.union(&PTree::from_closed(path[..=upto].to_vec()));
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if v.is_feasible(&extend(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Some(Cut {
            infeasible: extend(hi),
            feasible: extend(hi - 1),
        });
    }
    debug_assert_eq!(feasible, tq);
    Some(Cut {
        infeasible: PTree::empty(),
        feasible,
    })
}

/// Finds an initial cut with `strategy` and expands it.
pub fn query_advanced(idx: &CpIndex, q: VertexId, k: u32, strategy: Strategy) -> Result<ResultSet> {
    let mut v = Verifier::new(idx, q, k)?;
    let cut = match strategy {
        Strategy::I => find_i(&mut v),
        Strategy::D => find_d(&mut v),
        Strategy::P => find_p(&mut v),
    };
    let Some(cut) = cut else {
        return Ok(ResultSet {
            communities: Vec::new(),
            counters: v.counters,
        });
    };
    let raw = expand_ptree(&mut v, &cut, None)?;
    let raw = raw
        .into_iter()
        .map(|(t, m)| (t, m.as_ref().clone()))
        .collect();
    Ok(ResultSet {
        communities: normalize(raw, idx.gptree(), |u| idx.restore_ptree(u)),
        counters: v.counters,
    })
}
