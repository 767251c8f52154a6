//! Scalability sweeps: index build and query work as the graph, the
//! profiles, the taxonomy, or `k` grow.

use std::fmt::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{PTree, ProfiledGraph, VertexId};
use crate::index::CpIndex;
use crate::query::{run, Algorithm, Counters};
use crate::synth::{rng, truncate_gptree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sweep {
    Vertices,
    Profiles,
    Taxonomy,
    K,
}

impl Sweep {
    pub const ALL: [Sweep; 4] = [Sweep::Vertices, Sweep::Profiles, Sweep::Taxonomy, Sweep::K];

    pub fn name(self) -> &'static str {
        match self {
            Sweep::Vertices => "vertices",
            Sweep::Profiles => "profiles",
            Sweep::Taxonomy => "taxonomy",
            Sweep::K => "k",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sweeps: Vec<Sweep>,
    pub fractions: Vec<f64>,
    pub ks: Vec<u32>,
    /// `k` used by the fraction sweeps.
    pub k: u32,
    pub queries: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sweeps: Sweep::ALL.to_vec(),
            fractions: vec![0.2, 0.4, 0.6, 0.8, 1.0],
            ks: vec![4, 5, 6, 7, 8],
            k: 6,
            queries: 20,
            algorithms: vec![Algorithm::Basic, Algorithm::Incre, Algorithm::AdvP],
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub sweep: Sweep,
    /// Fraction kept, or `k` for the k sweep.
    pub value: f64,
    pub vertices: usize,
    pub edges: usize,
    pub profile_entries: usize,
    pub build_ms: f64,
    pub algorithm: Algorithm,
    pub query_ms: f64,
    pub communities: usize,
    pub counters: Counters,
}

/// Vertices of `g` in a seeded random order; fraction cells take prefixes,
/// so smaller cells are subgraphs of larger ones.
fn vertex_order(n: usize, seed: u64) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.shuffle(&mut rng(seed));
    order
}

fn take(n: usize, f: f64) -> usize {
    ((n as f64 * f).round() as usize).clamp(1.min(n), n)
}

/// The first `f` of the vertices in `order`, as an induced subgraph.
pub fn vertex_fraction(g: &ProfiledGraph, order: &[VertexId], f: f64) -> ProfiledGraph {
    let mut keep = order[..take(order.len(), f)].to_vec();
    keep.sort_unstable();
    g.induced(&keep)
}

/// Each P-tree cut to its first `f` nodes in canonical order (a
/// parent-closed prefix).
pub fn profile_fraction(g: &ProfiledGraph, f: f64) -> ProfiledGraph {
    let gp = g.gptree();
    g.map_ptrees(|_, t| {
        let mut nodes: Vec<_> = t.iter().collect();
        nodes.sort_by_key(|&l| gp.rank(l));
        nodes.truncate(take(nodes.len(), f));
        PTree::from_closed(nodes)
    })
}

pub fn timed_build(g: &ProfiledGraph) -> (CpIndex, f64) {
    let start = Instant::now();
    let idx = CpIndex::build(g);
    (idx, start.elapsed().as_secs_f64() * 1e3)
}

fn cell(
    g: &ProfiledGraph,
    sweep: Sweep,
    value: f64,
    k: u32,
    cfg: &BenchConfig,
    out: &mut Vec<BenchRow>,
) -> Result<()> {
    let (idx, build_ms) = timed_build(g);
    let mut sample = vertex_order(g.num_vertices(), cfg.seed ^ 0x5eed);
    sample.truncate(cfg.queries);
    for &algorithm in &cfg.algorithms {
        let mut counters = Counters::default();
        let mut communities = 0;
        let start = Instant::now();
        for &q in &sample {
            let r = run(algorithm, g, &idx, q, k)?;
            counters.add(&r.counters);
            communities += r.len();
        }
        out.push(BenchRow {
            sweep,
            value,
            vertices: g.num_vertices(),
            edges: g.num_edges(),
            profile_entries: g.total_profile_size(),
            build_ms,
            algorithm,
            query_ms: start.elapsed().as_secs_f64() * 1e3,
            communities,
            counters,
        });
    }
    Ok(())
}

pub fn run_bench(g: &ProfiledGraph, cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    let order = vertex_order(g.num_vertices(), cfg.seed);
    for &sweep in &cfg.sweeps {
        match sweep {
            Sweep::Vertices => {
                for &f in &cfg.fractions {
                    cell(
                        &vertex_fraction(g, &order, f),
                        sweep,
                        f,
                        cfg.k,
                        cfg,
                        &mut rows,
                    )?;
                }
            }
            Sweep::Profiles => {
                for &f in &cfg.fractions {
                    cell(&profile_fraction(g, f), sweep, f, cfg.k, cfg, &mut rows)?;
                }
            }
            Sweep::Taxonomy => {
                for &f in &cfg.fractions {
                    let keep = take(g.gptree().len(), f);
                    cell(&truncate_gptree(g, keep)?, sweep, f, cfg.k, cfg, &mut rows)?;
                }
            }
            Sweep::K => {
                for &k in &cfg.ks {
                    cell(g, sweep, k as f64, k, cfg, &mut rows)?;
                }
            }
        }
    }
    Ok(rows)
}

/// Aligned text table of `rows`.
pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<9} {:>6} {:>8} {:>9} {:>10} {:>10} {:<7} {:>10} {:>6} {:>10} {:>10} {:>8}",
        "sweep",
        "value",
        "n",
        "m",
        "entries",
        "build_ms",
        "algo",
        "query_ms",
        "pcs",
        "generated",
        "verified",
        "gkt"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<9} {:>6} {:>8} {:>9} {:>10} {:>10.1} {:<7} {:>10.1} {:>6} {:>10} {:>10} {:>8}",
            r.sweep.name(),
            r.value,
            r.vertices,
            r.edges,
            r.profile_entries,
            r.build_ms,
            r.algorithm.name(),
            r.query_ms,
            r.communities,
            r.counters.subtrees_generated,
            r.counters.subtrees_verified,
            r.counters.gkt_computations
        );
    }
    out
}
