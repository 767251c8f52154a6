mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use common::{all_subtrees, random_subtree};
use pcs::kcore::k_core_component;
use pcs::metrics::tree_edit_distance;
use pcs::subtree::{child_subtrees, count_subtrees, generate_subtrees, parent_subtrees};
use pcs::synth::{random_gptree, rng, small_instance};
use pcs::{codec, gkt_direct, ClTree, CpIndex, GpTree, PTree, ProfiledGraph, VertexId};

fn enumerate(t: &PTree, gp: &GpTree) -> Vec<PTree> {
    let mut out = Vec::new();
    let mut stack = vec![PTree::empty()];
    while let Some(s) = stack.pop() {
        stack.extend(generate_subtrees(&s, t, gp));
        out.push(s);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_is_complete_and_repeat_free(labels in 1usize..12, depth in 2u32..6, seed: u64) {
        let gp = random_gptree(labels, depth, seed).unwrap();
        let full = PTree::from_closed(gp.labels().collect());
        let listed = enumerate(&full, &gp);
        let distinct: HashSet<&PTree> = listed.iter().collect();
        prop_assert_eq!(distinct.len(), listed.len());
        let bfs: HashSet<PTree> = all_subtrees(&full, &gp).into_iter().collect();
        prop_assert_eq!(&distinct, &bfs.iter().collect());
        prop_assert!(listed.iter().all(|t| t.is_valid(&gp) && t.is_subtree_of(&full)));
        prop_assert_eq!(count_subtrees(&full, &gp), listed.len() as u128);
        prop_assert!(listed.len() as u128 <= (1u128 << (labels - 1)) + 1);
    }

    #[test]
    fn lattice_neighbours_differ_by_one_node(labels in 1usize..12, seed: u64) {
        let gp = random_gptree(labels, 4, seed).unwrap();
        let full = PTree::from_closed(gp.labels().collect());
        let t = random_subtree(&full, &gp, 0.6, &mut rng(seed));
        for p in parent_subtrees(&t, &gp) {
            prop_assert!(p.is_valid(&gp) && p.is_subtree_of(&t) && p.len() + 1 == t.len());
        }
        for c in child_subtrees(&t, &full, &gp) {
            prop_assert!(c.is_valid(&gp) && t.is_subtree_of(&c) && c.len() == t.len() + 1);
        }
    }

    #[test]
    fn ted_is_a_metric(seed: u64) {
        let gp = random_gptree(10, 3, seed).unwrap();
        let full = PTree::from_closed(gp.labels().collect());
        let mut r = rng(seed);
        let [a, b, c] = [0; 3].map(|_| random_subtree(&full, &gp, 0.6, &mut r));
        let d = tree_edit_distance;
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn cltree_matches_direct_cores(seed in 0u64..500, k in 0u32..6) {
        let g = small_instance(seed);
        let adj = g.adjacency();
        let tree = ClTree::build(adj);
        prop_assert!(tree.check_invariants().is_ok());
        let all: Vec<VertexId> = (0..g.num_vertices() as VertexId).collect();
        for q in 0..g.num_vertices() as VertexId {
            prop_assert_eq!(tree.k_hat_core(k, q), k_core_component(adj, &all, k, q));
        }
    }

    #[test]
    fn text_formats_round_trip(seed in 0u64..500) {
        let g = small_instance(seed);
        let back = ProfiledGraph::load(&g.edges_text(), &g.ptrees_text(), &g.gptree().to_text()).unwrap();
        prop_assert_eq!(back.edges_text(), g.edges_text());
        prop_assert_eq!(back.ptrees_text(), g.ptrees_text());
        prop_assert_eq!(back.gptree().to_text(), g.gptree().to_text());
    }

    #[test]
    fn index_round_trips_and_answers_like_peeling(seed in 0u64..500, k in 0u32..5) {
        let g = small_instance(seed);
        let idx = CpIndex::build(&g);
        let back = codec::deserialize(&codec::serialize(&idx)).unwrap();
        prop_assert_eq!(codec::serialize(&back), codec::serialize(&idx));
        let gp = g.gptree();
        for q in 0..g.num_vertices() as VertexId {
            prop_assert_eq!(idx.restore_ptree(q), g.ptree(q).clone());
            for l in g.ptree(q).iter() {
                let path = PTree::path(gp, l);
                prop_assert_eq!(back.get(k, q, l), gkt_direct(&g, q, k, &path));
            }
        }
    }
}

#[test]
fn corrupted_index_is_rejected() {
    let idx = CpIndex::build(&small_instance(3));
    let mut bytes = codec::serialize(&idx);
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    assert!(codec::deserialize(&bytes).is_err());
    assert!(codec::deserialize(b"nope").is_err());
}
