//! Core decomposition, the CL-tree of nested connected k-cores, and direct
//! (index-free) computation of `G_k[T]`.

use std::collections::{HashMap, VecDeque};

use crate::graph::{Csr, PTree, ProfiledGraph, VertexId};

/// Per-vertex core numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreDecomposition {
    pub core: Vec<u32>,
}

impl CoreDecomposition {
    pub fn max_core(&self) -> u32 {
        self.core.iter().copied().max().unwrap_or(0)
    }
}

/// Bucket-based peeling, linear in the size of the graph.
pub fn core_decomposition(adj: &Csr) -> CoreDecomposition {
    let n = adj.num_vertices();
    if n == 0 {
        return CoreDecomposition { core: Vec::new() };
    }
    let mut deg: Vec<u32> = (0..n as VertexId).map(|v| adj.degree(v) as u32).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0) as usize;
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d as usize] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0 as VertexId; n];
    for v in 0..n {
        let d = deg[v] as usize;
        pos[v] = bin[d];
        vert[pos[v]] = v as VertexId;
        bin[d] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;
    for i in 0..n {
        let v = vert[i];
        for &u in adj.neighbors(v) {
            let (u, dv) = (u as usize, deg[v as usize]);
            if deg[u] > dv {
                let du = deg[u] as usize;
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw] as usize;
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w as VertexId;
                    pos[w] = pu;
                    vert[pw] = u as VertexId;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    CoreDecomposition { core: deg }
}

struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// A node of the CL-tree. `own` and `subtree` index into [`ClTree::layout`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClNode {
    pub level: u32,
    pub parent: Option<u32>,
    pub children: Vec<u32>,
    pub own: (u32, u32),
    pub subtree_end: u32,
}

/// Tree of nested connected k-cores.
///
/// Node 0 is a synthetic root holding no vertices; every other node at level
/// `k` holds the vertices of core number `k` of one connected k-core, whose
/// remaining vertices live in its descendants. Vertices are stored once, in
/// a preorder layout, so a node's whole k-core is one contiguous slice.
///
/// Vertex ids inside the tree are local (`0..len`); `globals` maps them back
/// to graph ids and is sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClTree {
    pub(crate) nodes: Vec<ClNode>,
    pub(crate) node_of: Vec<u32>,
    pub(crate) layout: Vec<u32>,
    pub(crate) globals: Vec<VertexId>,
    pub(crate) core: Vec<u32>,
}

impl ClTree {
    /// CL-tree of a whole graph.
    pub fn build(adj: &Csr) -> ClTree {
        let n = adj.num_vertices();
        ClTree::build_local(adj, (0..n as VertexId).collect())
    }

    /// CL-tree of a graph whose vertex `i` is global vertex `globals[i]`.
    pub fn build_local(adj: &Csr, globals: Vec<VertexId>) -> ClTree {
        let n = adj.num_vertices();
        debug_assert_eq!(n, globals.len());
        let cd = core_decomposition(adj);
        let kmax = cd.max_core() as usize;

        let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); kmax + 1];
        for v in 0..n {
            by_level[cd.core[v] as usize].push(v as u32);
        }

        struct Proto {
            level: u32,
            vertices: Vec<u32>,
            children: Vec<u32>,
        }
        let mut protos: Vec<Proto> = vec![Proto {
            level: 0,
            vertices: Vec::new(),
            children: Vec::new(),
        }];
        let mut ds = DisjointSet::new(n);
        // (proto id, representative vertex) for components without a parent yet
        let mut tops: Vec<(u32, u32)> = Vec::new();
        let mut group_of: HashMap<u32, u32> = HashMap::new();

        for level in (0..=kmax).rev() {
            let verts = &by_level[level];
            if verts.is_empty() {
                continue;
            }
            for &v in verts {
                for &u in adj.neighbors(v) {
                    if cd.core[u as usize] as usize >= level {
                        ds.union(v, u);
                    }
                }
            }
            group_of.clear();
            for &v in verts {
                let root = ds.find(v);
                let id = *group_of.entry(root).or_insert_with(|| {
                    protos.push(Proto {
                        level: level as u32,
                        vertices: Vec::new(),
                        children: Vec::new(),
                    });
                    (protos.len() - 1) as u32
                });
                protos[id as usize].vertices.push(v);
            }
            let mut still_top = Vec::with_capacity(tops.len());
            for (node, rep) in tops.drain(..) {
                let root = ds.find(rep);
                match group_of.get(&root) {
                    Some(&parent) => protos[parent as usize].children.push(node),
                    None => still_top.push((node, rep)),
                }
            }
            tops = still_top;
            let mut fresh: Vec<(u32, u32)> = group_of
                .values()
                .map(|&id| (id, protos[id as usize].vertices[0]))
                .collect();
            fresh.sort_unstable();
            tops.extend(fresh);
        }
        let mut root_children: Vec<u32> = tops.into_iter().map(|(id, _)| id).collect();
        root_children.sort_unstable();
        protos[0].children = root_children;

        // Preorder layout; renumber nodes in preorder so output is stable.
        let mut nodes: Vec<ClNode> = Vec::with_capacity(protos.len());
        let mut node_of = vec![0u32; n];
        let mut layout: Vec<u32> = Vec::with_capacity(n);
        let mut new_id = vec![u32::MAX; protos.len()];
        // (proto id, parent new id, exiting?)
        let mut stack: Vec<(u32, Option<u32>, bool)> = vec![(0, None, false)];
        while let Some((p, parent, exiting)) = stack.pop() {
            if exiting {
                let id = new_id[p as usize] as usize;
                nodes[id].subtree_end = layout.len() as u32;
                continue;
            }
            let id = nodes.len() as u32;
            new_id[p as usize] = id;
            let proto = &mut protos[p as usize];
            proto.vertices.sort_unstable();
            let start = layout.len() as u32;
            for &v in &proto.vertices {
                node_of[v as usize] = id;
                layout.push(v);
            }
            nodes.push(ClNode {
                level: proto.level,
                parent,
                children: Vec::new(),
                own: (start, layout.len() as u32),
                subtree_end: 0,
            });
            if let Some(par) = parent {
                nodes[par as usize].children.push(id);
            }
            stack.push((p, parent, true));
            let mut kids = proto.children.clone();
            kids.sort_unstable();
            for &c in kids.iter().rev() {
                stack.push((c, Some(id), false));
            }
        }
        ClTree {
            nodes,
            node_of,
            layout,
            globals,
            core: cd.core,
        }
    }

    pub fn len(&self) -> usize {
        self.globals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.globals.is_empty()
    }

    pub fn nodes(&self) -> &[ClNode] {
        &self.nodes
    }

    /// Graph vertices covered by this tree, ascending.
    pub fn vertices(&self) -> &[VertexId] {
        &self.globals
    }

    fn local(&self, v: VertexId) -> Option<u32> {
        self.globals.binary_search(&v).ok().map(|i| i as u32)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.local(v).is_some()
    }

    pub fn core_number(&self, v: VertexId) -> Option<u32> {
        self.local(v).map(|i| self.core[i as usize])
    }

    pub fn node_of(&self, v: VertexId) -> Option<u32> {
        self.local(v).map(|i| self.node_of[i as usize])
    }

    /// The connected k-core containing `q`, as sorted global vertex ids;
    /// empty when `q` is absent or its core number is below `k`.
    pub fn k_hat_core(&self, k: u32, q: VertexId) -> Vec<VertexId> {
        let Some(local) = self.local(q) else {
            return Vec::new();
        };
        if self.core[local as usize] < k {
            return Vec::new();
        }
        let mut node = self.node_of[local as usize];
        while let Some(p) = self.nodes[node as usize].parent {
            if p == 0 || self.nodes[p as usize].level < k {
                break;
            }
            node = p;
        }
        let n = &self.nodes[node as usize];
        let mut out: Vec<VertexId> = self.layout[n.own.0 as usize..n.subtree_end as usize]
            .iter()
            .map(|&l| self.globals[l as usize])
            .collect();
        out.sort_unstable();
        out
    }

    /// Checks the structural invariants; used by tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen = vec![0u32; self.len()];
        for &l in &self.layout {
            seen[l as usize] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return Err("vertex stored more or less than once".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                if p != 0 && self.nodes[p as usize].level >= node.level {
                    return Err(format!("node {i} level not above parent"));
                }
            }
            for &l in &self.layout[node.own.0 as usize..node.own.1 as usize] {
                if self.core[l as usize] != node.level || self.node_of[l as usize] != i as u32 {
                    return Err(format!("node {i} holds a vertex of another level"));
                }
            }
        }
        Ok(())
    }
}

/// Vertices of the connected k-core of `G[members]` containing `q`, sorted.
/// `members` must be sorted and distinct.
pub fn k_core_component(adj: &Csr, members: &[VertexId], k: u32, q: VertexId) -> Vec<VertexId> {
    if members.binary_search(&q).is_err() {
        return Vec::new();
    }
    let local: HashMap<VertexId, u32> = members
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let m = members.len();
    let mut nbrs: Vec<Vec<u32>> = Vec::with_capacity(m);
    for &v in members {
        nbrs.push(
            adj.neighbors(v)
                .iter()
                .filter_map(|u| local.get(u).copied())
                .collect(),
        );
    }
    let mut deg: Vec<u32> = nbrs.iter().map(|l| l.len() as u32).collect();
    let mut alive = vec![true; m];
    let mut queue: Vec<u32> = (0..m as u32).filter(|&i| deg[i as usize] < k).collect();
    for &i in &queue {
        alive[i as usize] = false;
    }
    while let Some(i) = queue.pop() {
        for &j in &nbrs[i as usize] {
            if alive[j as usize] {
                deg[j as usize] -= 1;
                if deg[j as usize] < k {
                    alive[j as usize] = false;
                    queue.push(j);
                }
            }
        }
    }
    let lq = local[&q];
    if !alive[lq as usize] {
        return Vec::new();
    }
    let mut seen = vec![false; m];
    seen[lq as usize] = true;
    let mut bfs = VecDeque::from([lq]);
    let mut out = Vec::new();
    while let Some(i) = bfs.pop_front() {
        out.push(members[i as usize]);
        for &j in &nbrs[i as usize] {
            if alive[j as usize] && !seen[j as usize] {
                seen[j as usize] = true;
                bfs.push_back(j);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `G_k[T]`: the connected subgraph of vertices whose P-tree contains `t`,
/// peeled to minimum degree `k`, that contains `q`.
pub fn gkt_direct(g: &ProfiledGraph, q: VertexId, k: u32, t: &PTree) -> Vec<VertexId> {
    if (q as usize) >= g.num_vertices() || !t.is_subtree_of(g.ptree(q)) {
        return Vec::new();
    }
    let members: Vec<VertexId> = (0..g.num_vertices() as VertexId)
        .filter(|&v| t.is_subtree_of(g.ptree(v)))
        .collect();
    k_core_component(g.adjacency(), &members, k, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csr(n: usize, edges: &[(u32, u32)]) -> Csr {
        Csr::from_edges(n, edges)
    }

    fn fixture_adj() -> Csr {
        // A..F = 0..5
        csr(
            6,
            &[
                (0, 1),
                (0, 3),
                (0, 4),
                (1, 3),
                (1, 4),
                (3, 4),
                (1, 2),
                (2, 3),
                (4, 5),
            ],
        )
    }

    #[test]
    fn core_numbers() {
        let tri = csr(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(core_decomposition(&tri).core, vec![2, 2, 2]);
        let star = csr(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        assert_eq!(core_decomposition(&star).core, vec![1; 6]);
        assert_eq!(
            core_decomposition(&fixture_adj()).core,
            vec![3, 3, 2, 3, 3, 1]
        );
    }

    #[test]
    fn cltree_of_fixture() {
        let t = ClTree::build(&fixture_adj());
        t.check_invariants().unwrap();
        let c = t.node_of(2).unwrap() as usize;
        assert_eq!(t.nodes[c].level, 2);
        let kids = &t.nodes[c].children;
        assert_eq!(kids.len(), 1);
        let child = &t.nodes[kids[0] as usize];
        assert_eq!(child.level, 3);
        assert_eq!(
            &t.layout[child.own.0 as usize..child.own.1 as usize],
            &[0, 1, 3, 4]
        );
        assert_eq!(t.k_hat_core(3, 3), vec![0, 1, 3, 4]);
        assert_eq!(t.k_hat_core(2, 3), vec![0, 1, 2, 3, 4]);
        assert!(t.k_hat_core(4, 3).is_empty());
        assert_eq!(t.k_hat_core(0, 3), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn cltree_edgeless_and_disjoint() {
        let t = ClTree::build(&csr(4, &[]));
        t.check_invariants().unwrap();
        assert_eq!(t.nodes[0].children.len(), 4);
        assert!(t.nodes[1..].iter().all(|n| n.level == 0));
        assert_eq!(t.k_hat_core(0, 2), vec![2]);

        let two = ClTree::build(&csr(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]));
        two.check_invariants().unwrap();
        let level2: Vec<_> = two.nodes.iter().filter(|n| n.level == 2).collect();
        assert_eq!(level2.len(), 2);
        assert_eq!(two.k_hat_core(2, 4), vec![3, 4, 5]);
        assert_eq!(two.k_hat_core(0, 4), vec![3, 4, 5]);
    }

    #[test]
    fn peeling_component() {
        let adj = fixture_adj();
        assert_eq!(k_core_component(&adj, &[1, 2, 3], 2, 3), vec![1, 2, 3]);
        assert_eq!(k_core_component(&adj, &[0, 3, 4, 5], 2, 3), vec![0, 3, 4]);
        assert!(k_core_component(&adj, &[0, 3, 4], 3, 3).is_empty());
        assert!(k_core_component(&adj, &[0, 4], 0, 3).is_empty());
    }
}
