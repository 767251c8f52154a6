//! The CP-tree index: one node per GP-tree label, each holding the CL-tree of
//! the subgraph induced by the vertices whose profile contains that label,
//! plus a head map from each vertex to the leaves of its P-tree.

use crate::error::Result;
use crate::graph::{Csr, GpTree, LabelId, PTree, ProfiledGraph, VertexId};
use crate::kcore::ClTree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ClSlot {
    Owned(ClTree),
    /// Identical vertex set (and so identical CL-tree) to a descendant label.
    SameAs(LabelId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpNode {
    pub label: LabelId,
    pub parent: Option<LabelId>,
    pub children: Vec<LabelId>,
    pub(crate) slot: ClSlot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpIndex {
    pub(crate) gp: GpTree,
    pub(crate) adj: Csr,
    pub(crate) nodes: Vec<Option<CpNode>>,
    pub(crate) head_offsets: Vec<usize>,
    pub(crate) head_labels: Vec<LabelId>,
    pub(crate) global: ClTree,
}

impl CpIndex {
    pub fn build(g: &ProfiledGraph) -> CpIndex {
        let gp = g.gptree().clone();
        let n = g.num_vertices();
        let mut sets: Vec<Vec<VertexId>> = vec![Vec::new(); gp.len()];
        let mut head_offsets = Vec::with_capacity(n + 1);
        let mut head_labels = Vec::new();
        head_offsets.push(0);
        for v in 0..n as VertexId {
            let t = g.ptree(v);
            for x in t.iter() {
                sets[x.index()].push(v);
            }
            head_labels.extend(t.leaves(&gp));
            head_offsets.push(head_labels.len());
        }

        let adj = g.adjacency();
        let mut marker = vec![0u32; n];
        let mut nodes: Vec<Option<CpNode>> = vec![None; gp.len()];
        for l in gp.labels() {
            let verts = std::mem::take(&mut sets[l.index()]);
            if verts.is_empty() {
                continue;
            }
            let sub = adj.induced_with_marker(&verts, &mut marker);
            let tree = ClTree::build_local(&sub, verts);
            nodes[l.index()] = Some(CpNode {
                label: l,
                parent: None,
                children: Vec::new(),
                slot: ClSlot::Owned(tree),
            });
        }
        for l in gp.labels() {
            if nodes[l.index()].is_none() {
                continue;
            }
            let parent = gp.parent(l).filter(|p| nodes[p.index()].is_some());
            let children: Vec<LabelId> = gp
                .children(l)
                .iter()
                .copied()
                .filter(|c| nodes[c.index()].is_some())
                .collect();
            let node = nodes[l.index()].as_mut().unwrap();
            node.parent = parent;
            node.children = children;
        }
        CpIndex {
            global: ClTree::build(adj),
            adj: adj.clone(),
            gp,
            nodes,
            head_offsets,
            head_labels,
        }
    }

    /// Shares CL-trees between a label and a child label holding exactly the
    /// same vertices. Answers are unchanged.
    pub fn compress(&mut self) {
        for &l in self.gp.preorder().iter().rev() {
            let Some(node) = &self.nodes[l.index()] else {
                continue;
            };
            if !matches!(node.slot, ClSlot::Owned(_)) {
                continue;
            }
            let size = self.vertex_set(l).len();
            let same = node
                .children
                .iter()
                .copied()
                .find(|&c| self.vertex_set(c).len() == size);
            if let Some(c) = same {
                let target = self.resolve(c);
                self.nodes[l.index()].as_mut().unwrap().slot = ClSlot::SameAs(target);
            }
        }
    }

    fn resolve(&self, mut l: LabelId) -> LabelId {
        while let Some(CpNode {
            slot: ClSlot::SameAs(next),
            ..
        }) = &self.nodes[l.index()]
        {
            l = *next;
        }
        l
    }

    fn cltree(&self, l: LabelId) -> Option<&ClTree> {
        if !self.gp.contains(l) {
            return None;
        }
        let r = self.resolve(l);
        match &self.nodes[r.index()] {
            Some(CpNode {
                slot: ClSlot::Owned(t),
                ..
            }) => Some(t),
            _ => None,
        }
    }

    pub fn gptree(&self) -> &GpTree {
        &self.gp
    }

    pub fn adjacency(&self) -> &Csr {
        &self.adj
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.num_vertices()
    }

    pub fn node(&self, l: LabelId) -> Option<&CpNode> {
        self.nodes.get(l.index()).and_then(Option::as_ref)
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.iter().flatten().count()
    }

    pub fn global_cltree(&self) -> &ClTree {
        &self.global
    }

    /// Vertices whose P-tree contains `l`, ascending.
    pub fn vertex_set(&self, l: LabelId) -> &[VertexId] {
        self.cltree(l).map_or(&[], ClTree::vertices)
    }

    /// Total vertex entries over all label nodes; equals the summed P-tree
    /// sizes.
    pub fn stored_entries(&self) -> usize {
        self.gp.labels().map(|l| self.vertex_set(l).len()).sum()
    }

    /// Leaves of `T(v)`.
    pub fn head(&self, v: VertexId) -> &[LabelId] {
        let v = v as usize;
        &self.head_labels[self.head_offsets[v]..self.head_offsets[v + 1]]
    }

    /// The connected k-core, among vertices holding `label`, that contains
    /// `q`. Empty when the label is unknown or `q` does not hold it.
    pub fn get(&self, k: u32, q: VertexId, label: LabelId) -> Vec<VertexId> {
        self.cltree(label)
            .map_or_else(Vec::new, |t| t.k_hat_core(k, q))
    }

    /// The connected k-core of the whole graph containing `q`.
    pub fn k_hat_core(&self, k: u32, q: VertexId) -> Vec<VertexId> {
        self.global.k_hat_core(k, q)
    }

    /// `T(q)` rebuilt from the head map by walking each leaf to the root.
    pub fn restore_ptree(&self, q: VertexId) -> PTree {
        let mut nodes = Vec::new();
        for &leaf in self.head(q) {
            let mut cur = Some(leaf);
            while let Some(x) = cur {
                nodes.push(x);
                cur = self.node(x).and_then(|n| n.parent);
            }
        }
        PTree::from_closed(nodes)
    }

    /// The profiled graph the index was built from.
    pub fn to_graph(&self) -> Result<ProfiledGraph> {
        let ptrees = (0..self.num_vertices() as VertexId)
            .map(|v| self.restore_ptree(v))
            .collect();
        ProfiledGraph::new(self.adj.clone(), ptrees, self.gp.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::kcore::gkt_direct;

    #[test]
    fn fixture_index() {
        let g = fixture::graph();
        let idx = CpIndex::build(&g);
        let gp = g.gptree();
        let cm = gp.find("CM").unwrap();
        assert_eq!(idx.vertex_set(cm), &[1, 2, 3]);
        assert_eq!(idx.vertex_set(LabelId::ROOT), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(idx.stored_entries(), g.total_profile_size());
        let d = fixture::vertex("D");
        assert_eq!(idx.get(2, d, cm), vec![1, 2, 3]);
        assert!(idx.get(2, 5, cm).is_empty());
        assert_eq!(idx.get(0, d, LabelId::ROOT), vec![0, 1, 2, 3, 4, 5]);
        let b = fixture::vertex("B");
        assert_eq!(idx.restore_ptree(b), *g.ptree(b));
        for v in 0..6 {
            assert_eq!(idx.restore_ptree(v), *g.ptree(v));
        }
    }

    #[test]
    fn child_sets_nest_in_parent_sets() {
        let g = fixture::graph();
        let idx = CpIndex::build(&g);
        for l in g.gptree().labels() {
            if let Some(n) = idx.node(l) {
                for &c in &n.children {
                    let parent = idx.vertex_set(l);
                    assert!(idx
                        .vertex_set(c)
                        .iter()
                        .all(|v| parent.binary_search(v).is_ok()));
                }
            }
        }
    }

    #[test]
    fn leaf_get_matches_direct_path() {
        let g = fixture::graph();
        let idx = CpIndex::build(&g);
        for q in 0..6 {
            for k in 0..4 {
                for &leaf in idx.head(q) {
                    let path = PTree::path(g.gptree(), leaf);
                    assert_eq!(idx.get(k, q, leaf), gkt_direct(&g, q, k, &path));
                }
            }
        }
    }

    #[test]
    fn compression_keeps_answers() {
        let g = fixture::graph();
        let idx = CpIndex::build(&g);
        let mut small = idx.clone();
        small.compress();
        // CM, ML and AI all hold {B, C, D}.
        let ml = g.gptree().find("ML").unwrap();
        let cm = g.gptree().find("CM").unwrap();
        assert!(matches!(small.node(cm).unwrap().slot, ClSlot::SameAs(_)));
        for q in 0..6 {
            for k in 0..4 {
                for l in g.gptree().labels() {
                    assert_eq!(idx.get(k, q, l), small.get(k, q, l));
                }
            }
        }
        assert_eq!(small.vertex_set(cm), idx.vertex_set(ml));
    }

    #[test]
    fn degenerate_profiles() {
        let gp = GpTree::parse("0 -1 r\n1 0 a\n").unwrap();
        let adj = Csr::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let all_root = ProfiledGraph::new(
            adj.clone(),
            vec![PTree::path(&gp, LabelId::ROOT); 3],
            gp.clone(),
        )
        .unwrap();
        let idx = CpIndex::build(&all_root);
        assert_eq!(idx.num_nodes(), 1);
        assert_eq!(
            idx.cltree(LabelId::ROOT).unwrap().nodes(),
            idx.global_cltree().nodes()
        );

        let empty = ProfiledGraph::new(adj, vec![PTree::empty(); 3], gp).unwrap();
        let idx = CpIndex::build(&empty);
        assert_eq!(idx.num_nodes(), 0);
        assert!(idx.get(0, 0, LabelId::ROOT).is_empty());
    }
}
