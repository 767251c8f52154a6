//! Seeded synthetic workloads: random taxonomies, random simple graphs, and
//! P-trees derived from vertex text by hashing tokens onto labels.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};
use sha2::{Digest, Sha256};

use crate::error::{PcsError, Result};
use crate::graph::{close_under_parents, Csr, GpTree, LabelId, PTree, ProfiledGraph, VertexId};

/// Label count of the ACM Computing Classification System taxonomy.
pub const CCS_LABELS: usize = 1908;
pub const CCS_DEPTH: u32 = 5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random recursive tree on `labels` nodes whose depth never exceeds
/// `max_depth` (root at depth 1). Each new label picks a uniformly random
/// existing label above the depth limit as its parent.
pub fn random_gptree(labels: usize, max_depth: u32, seed: u64) -> Result<GpTree> {
    if labels == 0 {
        return Err(PcsError::GpTree(
            "a GP-tree needs at least one label".into(),
        ));
    }
    if labels > 1 && max_depth < 2 {
        return Err(PcsError::GpTree(
            "max depth below 2 admits only the root".into(),
        ));
    }
    let mut rng = rng(seed);
    let mut parents = vec![None];
    let mut depth = vec![1u32];
    let mut open: Vec<u32> = vec![0];
    for id in 1..labels as u32 {
        let p = open[rng.gen_range(0..open.len())];
        let d = depth[p as usize] + 1;
        parents.push(Some(p));
        depth.push(d);
        if d < max_depth {
            open.push(id);
        }
    }
    let names = (0..labels)
        .map(|i| {
            if i == 0 {
                "r".to_string()
            } else {
                format!("L{i}")
            }
        })
        .collect();
    GpTree::from_parents(parents, names)
}

pub fn ccs_like_gptree(seed: u64) -> GpTree {
    random_gptree(CCS_LABELS, CCS_DEPTH, seed).expect("valid parameters")
}

/// The star taxonomy: a root with `x - 1` children.
pub fn star_gptree(x: usize) -> Result<GpTree> {
    let parents = (0..x).map(|i| (i > 0).then_some(0)).collect();
    let names = (0..x).map(|i| format!("s{i}")).collect();
    GpTree::from_parents(parents, names)
}

/// Uniform simple graph with exactly `m` distinct edges on `n` vertices.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<Csr> {
    let max = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > max {
        return Err(PcsError::GpTree(format!(
            "{m} edges exceed the {max} possible on {n} vertices"
        )));
    }
    let mut rng = rng(seed);
    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n as VertexId);
        let v = rng.gen_range(0..n as VertexId);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            edges.push(e);
        }
    }
    Ok(Csr::from_edges(n, &edges))
}

/// Per-vertex lists of distinct tokens drawn from a Zipf distribution over
/// a vocabulary of `vocab` words (`per_vertex` is capped at `vocab`).
pub fn zipf_tokens(n: usize, per_vertex: usize, vocab: usize, seed: u64) -> Vec<Vec<String>> {
    let mut rng = rng(seed);
    let vocab = vocab.max(1);
    let zipf = Zipf::new(vocab as u64, 1.0).expect("valid Zipf parameters");
    let want = per_vertex.min(vocab);
    (0..n)
        .map(|_| {
            let mut words: Vec<u64> = Vec::with_capacity(want);
            while words.len() < want {
                let w = zipf.sample(&mut rng) as u64;
                if !words.contains(&w) {
                    words.push(w);
                }
            }
            words.into_iter().map(|w| format!("w{w}")).collect()
        })
        .collect()
}

/// Deterministic label for a token: a seeded digest reduced onto the
/// non-root labels (the root when the taxonomy has no other label).
pub fn token_label(token: &str, gp: &GpTree, seed: u64) -> LabelId {
    if gp.len() <= 1 {
        return LabelId::ROOT;
    }
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(token.as_bytes());
    let digest = h.finalize();
    let x = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"));
    LabelId(1 + (x % (gp.len() as u64 - 1)) as u32)
}

/// Attaches P-trees to `adj`: each vertex's tokens are hashed onto labels
/// and the resulting label set is closed under parents.
pub fn synthesize_ptrees(
    adj: Csr,
    gp: GpTree,
    tokens: &[Vec<String>],
    seed: u64,
) -> Result<ProfiledGraph> {
    if tokens.len() != adj.num_vertices() {
        return Err(PcsError::GpTree(format!(
            "{} token lists for {} vertices",
            tokens.len(),
            adj.num_vertices()
        )));
    }
    let ptrees = tokens
        .iter()
        .map(|ts| {
            let labels: Vec<LabelId> = ts.iter().map(|t| token_label(t, &gp, seed)).collect();
            close_under_parents(&labels, &gp)
        })
        .collect::<Result<Vec<PTree>>>()?;
    ProfiledGraph::new(adj, ptrees, gp)
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub n: usize,
    pub m: usize,
    pub labels: usize,
    pub max_depth: u32,
    pub tokens_per_vertex: usize,
    pub vocab: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 1000,
            m: 5000,
            labels: CCS_LABELS,
            max_depth: CCS_DEPTH,
            tokens_per_vertex: 8,
            vocab: 5000,
            seed: 0,
        }
    }
}

/// A full synthetic profiled graph. Sub-seeds are derived from `seed` so the
/// taxonomy, topology and text are independent streams.
pub fn generate(cfg: &GenConfig) -> Result<ProfiledGraph> {
    let gp = random_gptree(cfg.labels, cfg.max_depth, cfg.seed)?;
    let adj = random_graph(cfg.n, cfg.m, cfg.seed.wrapping_add(1))?;
    let tokens = zipf_tokens(
        cfg.n,
        cfg.tokens_per_vertex,
        cfg.vocab,
        cfg.seed.wrapping_add(2),
    );
    synthesize_ptrees(adj, gp, &tokens, cfg.seed.wrapping_add(3))
}

/// Small random profiled graph for exhaustive cross-checks: 5..=30
/// vertices, at most 120 edges, at most 8 labels, each vertex holding every
/// label independently with probability 1/2 before closure.
pub fn small_instance(seed: u64) -> ProfiledGraph {
    let mut r = rng(seed);
    let n = r.gen_range(5..=30usize);
    let m = r.gen_range(n..=120.min(n * (n - 1) / 2));
    let labels = r.gen_range(1..=8usize);
    let depth = r.gen_range(2..=4u32);
    let gp = random_gptree(labels, depth, r.gen()).expect("valid parameters");
    let adj = random_graph(n, m, r.gen()).expect("m within bounds");
    let ptrees = (0..n)
        .map(|_| {
            let picked: Vec<LabelId> = gp.labels().filter(|_| r.gen_bool(0.5)).collect();
            close_under_parents(&picked, &gp).expect("labels from gp")
        })
        .collect();
    ProfiledGraph::new(adj, ptrees, gp).expect("consistent by construction")
}

/// Restricts a graph to the first `keep` labels of its GP-tree in preorder
/// (a parent-closed prefix), relabelled densely; P-trees are intersected.
pub fn truncate_gptree(g: &ProfiledGraph, keep: usize) -> Result<ProfiledGraph> {
    let gp = g.gptree();
    let keep = keep.clamp(1, gp.len());
    let order = &gp.preorder()[..keep];
    let mut new_id = vec![u32::MAX; gp.len()];
    for (i, &l) in order.iter().enumerate() {
        new_id[l.index()] = i as u32;
    }
    let parents = order
        .iter()
        .map(|&l| gp.parent(l).map(|p| new_id[p.index()]))
        .collect();
    let names = order.iter().map(|&l| gp.name(l).to_string()).collect();
    let small = GpTree::from_parents(parents, names)?;
    let ptrees = g
        .ptrees()
        .iter()
        .map(|t| {
            PTree::from_closed(
                t.iter()
                    .filter(|l| new_id[l.index()] != u32::MAX)
                    .map(|l| LabelId(new_id[l.index()]))
                    .collect(),
            )
        })
        .collect();
    g.with_gptree(small, ptrees)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gptree_respects_depth() {
        let gp = random_gptree(200, 4, 7).unwrap();
        assert_eq!(gp.len(), 200);
        assert!(gp.max_depth() <= 4);
        assert_eq!(gp, random_gptree(200, 4, 7).unwrap());
    }

    #[test]
    fn graph_is_exact_and_seeded() {
        let a = random_graph(100, 300, 1).unwrap();
        assert_eq!(a.num_edges(), 300);
        assert_eq!(a, random_graph(100, 300, 1).unwrap());
        assert!(random_graph(4, 7, 0).is_err());
    }

    #[test]
    fn identical_tokens_give_identical_trees() {
        let gp = random_gptree(50, 4, 3).unwrap();
        let adj = Csr::from_edges(2, &[(0, 1)]);
        let toks = vec![
            vec!["a".to_string(), "b".into()],
            vec!["a".to_string(), "b".into()],
        ];
        let g = synthesize_ptrees(adj, gp, &toks, 9).unwrap();
        assert_eq!(g.ptree(0), g.ptree(1));
        assert!(g.ptree(0).len() >= 2);
    }

    #[test]
    fn ccs_profiles_are_bounded_by_closure() {
        let cfg = GenConfig {
            n: 1000,
            m: 0,
            tokens_per_vertex: 30,
            ..GenConfig::default()
        };
        let g = generate(&cfg).unwrap();
        let mean = g.total_profile_size() as f64 / g.num_vertices() as f64;
        let depth = g.gptree().max_depth() as f64;
        assert!((30.0..=30.0 * depth).contains(&mean), "{mean}");
    }

    #[test]
    fn truncation_keeps_prefix() {
        let cfg = GenConfig {
            n: 50,
            m: 100,
            labels: 40,
            ..GenConfig::default()
        };
        let g = generate(&cfg).unwrap();
        let small = truncate_gptree(&g, 10).unwrap();
        assert_eq!(small.gptree().len(), 10);
        assert!(small.total_profile_size() <= g.total_profile_size());
    }
}
