//! Profiled graphs: the GP-tree taxonomy, per-vertex P-trees and the
//! undirected simple graph they hang off, plus the line-oriented text formats
//! used to load and store them.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{PcsError, Result};

pub type VertexId = u32;

/// A node of the GP-tree. Ids are dense, `LabelId::ROOT` is the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
#[repr(transparent)]
pub struct LabelId(pub u32);

impl LabelId {
    pub const ROOT: LabelId = LabelId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The global P-tree: the taxonomy every vertex profile is drawn from.
///
/// Child lists are kept in ascending id order; the preorder walk with that
/// child order is the canonical order used for enumeration and output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpTree {
    parent: Vec<Option<LabelId>>,
    children: Vec<Vec<LabelId>>,
    depth: Vec<u32>,
    names: Vec<String>,
    rank: Vec<u32>,
    preorder: Vec<LabelId>,
}

impl GpTree {
    /// Builds a GP-tree from a parent array. Entry 0 must be the only root.
    pub fn from_parents(parents: Vec<Option<u32>>, names: Vec<String>) -> Result<Self> {
        let n = parents.len();
        if n == 0 {
            return Err(PcsError::GpTree("empty GP-tree".into()));
        }
        if names.len() != n {
            return Err(PcsError::GpTree(format!(
                "{} names for {} labels",
                names.len(),
                n
            )));
        }
        let roots: Vec<usize> = (0..n).filter(|&i| parents[i].is_none()).collect();
        match roots.as_slice() {
            [0] => {}
            [] => {
                return Err(PcsError::GpTree(
                    "no root (cycle through every label)".into(),
                ))
            }
            [r] => return Err(PcsError::GpTree(format!("root must be label 0, found {r}"))),
            many => return Err(PcsError::GpTree(format!("multiple roots: {many:?}"))),
        }
        let mut children = vec![Vec::new(); n];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p as usize >= n {
                    return Err(PcsError::GpTree(format!(
                        "label {i} has parent {p} which does not exist"
                    )));
                }
                if p as usize == i {
                    return Err(PcsError::GpTree(format!("label {i} is its own parent")));
                }
                children[p as usize].push(LabelId(i as u32));
            }
        }
        let mut depth = vec![0u32; n];
        let mut rank = vec![u32::MAX; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![LabelId::ROOT];
        depth[0] = 1;
        while let Some(x) = stack.pop() {
            rank[x.index()] = preorder.len() as u32;
            preorder.push(x);
            for &c in children[x.index()].iter().rev() {
                depth[c.index()] = depth[x.index()] + 1;
                stack.push(c);
            }
        }
        if preorder.len() != n {
            let stray = (0..n).find(|&i| rank[i] == u32::MAX).unwrap_or(0);
            return Err(PcsError::GpTree(format!(
                "label {stray} is not reachable from the root (cycle)"
            )));
        }
        Ok(GpTree {
            parent: parents.into_iter().map(|p| p.map(LabelId)).collect(),
            children,
            depth,
            names,
            rank,
            preorder,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn contains(&self, l: LabelId) -> bool {
        l.index() < self.len()
    }

    pub fn parent(&self, l: LabelId) -> Option<LabelId> {
        self.parent[l.index()]
    }

    pub fn children(&self, l: LabelId) -> &[LabelId] {
        &self.children[l.index()]
    }

    /// Level of a label; the root is level 1.
    pub fn depth(&self, l: LabelId) -> u32 {
        self.depth[l.index()]
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn name(&self, l: LabelId) -> &str {
        &self.names[l.index()]
    }

    /// Position of `l` in the canonical (preorder) walk.
    pub fn rank(&self, l: LabelId) -> u32 {
        self.rank[l.index()]
    }

    pub fn preorder(&self) -> &[LabelId] {
        &self.preorder
    }

    pub fn labels(&self) -> impl Iterator<Item = LabelId> {
        (0..self.len() as u32).map(LabelId)
    }

    /// Looks a label up by name (first match in id order).
    pub fn find(&self, name: &str) -> Option<LabelId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| LabelId(i as u32))
    }

    /// Labels from the root down to `l`, inclusive.
    pub fn root_path(&self, l: LabelId) -> Vec<LabelId> {
        let mut path = vec![l];
        let mut cur = l;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// `r/CM/ML` style rendering of a label's root path.
    pub fn path_string(&self, l: LabelId) -> String {
        let mut out = String::new();
        for (i, x) in self.root_path(l).into_iter().enumerate() {
            if i > 0 {
                out.push('/');
            }
            out.push_str(self.name(x));
        }
        out
    }

    /// Canonical comparison of two trees: lexicographic over their members
    /// listed in preorder.
    pub fn cmp_trees(&self, a: &PTree, b: &PTree) -> Ordering {
        self.canonical_key(a).cmp(&self.canonical_key(b))
    }

    pub fn canonical_key(&self, t: &PTree) -> Vec<u32> {
        let mut key: Vec<u32> = t.iter().map(|l| self.rank(l)).collect();
        key.sort_unstable();
        key
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, u32, Option<u32>, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(3, char::is_whitespace);
            let id = parts
                .next()
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| PcsError::parse("gptree", lineno, "expected `id parent_id name`"))?;
            let parent = parts
                .next()
                .and_then(|s| s.trim().parse::<i64>().ok())
                .ok_or_else(|| PcsError::parse("gptree", lineno, "expected integer parent id"))?;
            let parent = match parent {
                -1 => None,
                p if p >= 0 && p <= u32::MAX as i64 => Some(p as u32),
                p => {
                    return Err(PcsError::parse(
                        "gptree",
                        lineno,
                        format!("bad parent id {p}"),
                    ))
                }
            };
            let name = parts.next().map(str::trim).unwrap_or("").to_string();
            if name.is_empty() {
                return Err(PcsError::parse("gptree", lineno, "missing label name"));
            }
            entries.push((lineno, id, parent, name));
        }
        let n = entries.len();
        let mut parents = vec![None; n];
        let mut names = vec![String::new(); n];
        let mut seen = vec![false; n];
        for (lineno, id, parent, name) in entries {
            let slot = id as usize;
            if slot >= n {
                return Err(PcsError::parse(
                    "gptree",
                    lineno,
                    format!("label ids must be dense 0..{n}, found {id}"),
                ));
            }
            if seen[slot] {
                return Err(PcsError::parse(
                    "gptree",
                    lineno,
                    format!("duplicate label id {id}"),
                ));
            }
            seen[slot] = true;
            parents[slot] = parent;
            names[slot] = name;
        }
        GpTree::from_parents(parents, names)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in self.labels() {
            let p = self.parent(l).map_or(-1, |p| p.0 as i64);
            let _ = writeln!(out, "{} {} {}", l.0, p, self.name(l));
        }
        out
    }
}

/// A profile tree, stored as the set of GP-tree labels it contains.
///
/// The set is always closed under the GP-tree parent relation, so it is an
/// induced rooted subtree of the GP-tree. The empty set is the empty tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PTree {
    nodes: Vec<LabelId>,
}

impl PTree {
    pub fn empty() -> Self {
        PTree { nodes: Vec::new() }
    }

    /// Wraps a label set that is already parent-closed. Sorting and dedup are
    /// applied; closure is the caller's responsibility.
    pub fn from_closed(mut nodes: Vec<LabelId>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        PTree { nodes }
    }

    /// The root path of `l` as a tree.
    pub fn path(gp: &GpTree, l: LabelId) -> Self {
        PTree::from_closed(gp.root_path(l))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, l: LabelId) -> bool {
        self.nodes.binary_search(&l).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = LabelId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn as_slice(&self) -> &[LabelId] {
        &self.nodes
    }

    /// `self ⊆ other` on node sets, which is the induced-rooted-subtree
    /// relation for parent-closed sets.
    pub fn is_subtree_of(&self, other: &PTree) -> bool {
        if self.nodes.len() > other.nodes.len() {
            return false;
        }
        let mut it = other.nodes.iter();
        'outer: for x in &self.nodes {
            for y in it.by_ref() {
                match y.cmp(x) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &PTree) -> PTree {
        let mut nodes = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.nodes.len() && j < other.nodes.len() {
            match self.nodes[i].cmp(&other.nodes[j]) {
                Ordering::Less => {
                    nodes.push(self.nodes[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    nodes.push(other.nodes[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    nodes.push(self.nodes[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        nodes.extend_from_slice(&self.nodes[i..]);
        nodes.extend_from_slice(&other.nodes[j..]);
        PTree { nodes }
    }

    pub fn intersection(&self, other: &PTree) -> PTree {
        let mut nodes = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.nodes.len() && j < other.nodes.len() {
            match self.nodes[i].cmp(&other.nodes[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    nodes.push(self.nodes[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        PTree { nodes }
    }

    /// Number of labels in exactly one of the two trees.
    pub fn symmetric_difference_len(&self, other: &PTree) -> usize {
        self.len() + other.len() - 2 * self.intersection(other).len()
    }

    pub fn with(&self, l: LabelId) -> PTree {
        match self.nodes.binary_search(&l) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut nodes = self.nodes.clone();
                nodes.insert(pos, l);
                PTree { nodes }
            }
        }
    }

    pub fn without(&self, l: LabelId) -> PTree {
        let mut nodes = self.nodes.clone();
        if let Ok(pos) = nodes.binary_search(&l) {
            nodes.remove(pos);
        }
        PTree { nodes }
    }

    /// Members with no child inside the tree, in canonical order.
    pub fn leaves(&self, gp: &GpTree) -> Vec<LabelId> {
        let mut out: Vec<LabelId> = self
            .iter()
            .filter(|&x| !gp.children(x).iter().any(|&c| self.contains(c)))
            .collect();
        out.sort_by_key(|&l| gp.rank(l));
        out
    }

    /// Checks the parent-closure invariant against `gp`.
    pub fn is_valid(&self, gp: &GpTree) -> bool {
        self.iter().all(|x| {
            gp.contains(x)
                && match gp.parent(x) {
                    Some(p) => self.contains(p),
                    None => true,
                }
        })
    }

    /// Comma-separated `r/CM/ML` paths of the leaves.
    pub fn display(&self, gp: &GpTree) -> String {
        if self.is_empty() {
            return "{}".to_string();
        }
        let leaves: Vec<String> = self
            .leaves(gp)
            .into_iter()
            .map(|l| gp.path_string(l))
            .collect();
        leaves.join(", ")
    }
}

/// Minimal parent-closed superset of `labels`.
pub fn close_under_parents(labels: &[LabelId], gp: &GpTree) -> Result<PTree> {
    let mut marked = vec![false; gp.len()];
    let mut nodes = Vec::new();
    for &l in labels {
        if !gp.contains(l) {
            return Err(PcsError::LabelOutOfRange(l));
        }
        let mut cur = Some(l);
        while let Some(x) = cur {
            if marked[x.index()] {
                break;
            }
            marked[x.index()] = true;
            nodes.push(x);
            cur = gp.parent(x);
        }
    }
    Ok(PTree::from_closed(nodes))
}

/// Compressed sparse row adjacency of an undirected simple graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Csr {
    /// Builds from an edge list; duplicates are dropped, self-loops must
    /// already have been rejected.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        // Sort and dedup each list, then compact.
        let mut out_offsets = Vec::with_capacity(n + 1);
        out_offsets.push(0);
        let mut out = Vec::with_capacity(targets.len());
        for v in 0..n {
            let list = &mut targets[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            let start = out.len();
            for &u in list.iter() {
                if out.len() == start || *out.last().unwrap() != u {
                    out.push(u);
                }
            }
            out_offsets.push(out.len());
        }
        Csr {
            offsets: out_offsets,
            targets: out,
        }
    }

    pub fn from_raw(offsets: Vec<usize>, targets: Vec<VertexId>) -> Self {
        Csr { offsets, targets }
    }

    pub fn raw(&self) -> (&[usize], &[VertexId]) {
        (&self.offsets, &self.targets)
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.num_vertices() as VertexId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Induced subgraph on `vertices` (sorted, distinct), relabelled to local
    /// ids `0..vertices.len()` in the same order.
    pub fn induced(&self, vertices: &[VertexId]) -> Csr {
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for &v in vertices {
            for &u in self.neighbors(v) {
                if let Ok(pos) = vertices.binary_search(&u) {
                    targets.push(pos as VertexId);
                }
            }
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    /// Same as [`Csr::induced`] but with a caller-provided dense marker array
    /// (`marker[v]` = local id + 1, or 0). Linear in the touched adjacency.
    pub fn induced_with_marker(&self, vertices: &[VertexId], marker: &mut [u32]) -> Csr {
        for (i, &v) in vertices.iter().enumerate() {
            marker[v as usize] = i as u32 + 1;
        }
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for &v in vertices {
            for &u in self.neighbors(v) {
                let m = marker[u as usize];
                if m != 0 {
                    targets.push(m - 1);
                }
            }
            offsets.push(targets.len());
        }
        for &v in vertices {
            marker[v as usize] = 0;
        }
        Csr { offsets, targets }
    }
}

/// An undirected simple graph whose vertices carry P-trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfiledGraph {
    adj: Csr,
    ptrees: Vec<PTree>,
    gp: GpTree,
}

impl ProfiledGraph {
    pub fn new(adj: Csr, ptrees: Vec<PTree>, gp: GpTree) -> Result<Self> {
        if adj.num_vertices() != ptrees.len() {
            return Err(PcsError::GpTree(format!(
                "{} vertices but {} P-trees",
                adj.num_vertices(),
                ptrees.len()
            )));
        }
        for (v, t) in ptrees.iter().enumerate() {
            if let Some(bad) = t.iter().find(|&x| !gp.contains(x)) {
                return Err(PcsError::UnknownLabel {
                    vertex: v as VertexId,
                    label: bad.0 as u64,
                });
            }
            if !t.is_valid(&gp) {
                return Err(PcsError::GpTree(format!(
                    "P-tree of vertex {v} is not parent-closed"
                )));
            }
        }
        Ok(ProfiledGraph { adj, ptrees, gp })
    }

    pub fn num_vertices(&self) -> usize {
        self.ptrees.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.num_edges()
    }

    pub fn adjacency(&self) -> &Csr {
        &self.adj
    }

    pub fn gptree(&self) -> &GpTree {
        &self.gp
    }

    pub fn ptree(&self, v: VertexId) -> &PTree {
        &self.ptrees[v as usize]
    }

    pub fn ptrees(&self) -> &[PTree] {
        &self.ptrees
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.num_vertices() {
            Ok(())
        } else {
            Err(PcsError::VertexOutOfRange {
                vertex: v,
                n: self.num_vertices(),
            })
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adj.degree(v))
    }

    /// Sum of all P-tree sizes.
    pub fn total_profile_size(&self) -> usize {
        self.ptrees.iter().map(PTree::len).sum()
    }

    /// The subgraph induced by `vertices` (sorted), relabelled densely.
    pub fn induced(&self, vertices: &[VertexId]) -> ProfiledGraph {
        let adj = self.adj.induced(vertices);
        let ptrees = vertices
            .iter()
            .map(|&v| self.ptrees[v as usize].clone())
            .collect();
        ProfiledGraph {
            adj,
            ptrees,
            gp: self.gp.clone(),
        }
    }

    /// Same topology and GP-tree with every P-tree replaced by `f(v, tree)`.
    pub fn map_ptrees(&self, mut f: impl FnMut(VertexId, &PTree) -> PTree) -> ProfiledGraph {
        let ptrees = self
            .ptrees
            .iter()
            .enumerate()
            .map(|(v, t)| f(v as VertexId, t))
            .collect();
        ProfiledGraph {
            adj: self.adj.clone(),
            ptrees,
            gp: self.gp.clone(),
        }
    }

    pub fn with_gptree(&self, gp: GpTree, ptrees: Vec<PTree>) -> Result<ProfiledGraph> {
        ProfiledGraph::new(self.adj.clone(), ptrees, gp)
    }

    /// Parses the three text sources. `n` is one more than the largest vertex
    /// id in the P-tree source; vertices without a line get the empty tree.
    pub fn load(edges: &str, ptrees: &str, gptree: &str) -> Result<Self> {
        let gp = GpTree::parse(gptree)?;
        let ptrees = parse_ptrees(ptrees, &gp)?;
        let n = ptrees.len();
        let edges = parse_edges(edges, n)?;
        let adj = Csr::from_edges(n, &edges);
        ProfiledGraph::new(adj, ptrees, gp)
    }

    pub fn load_files(
        edges: impl AsRef<Path>,
        ptrees: impl AsRef<Path>,
        gptree: impl AsRef<Path>,
    ) -> Result<Self> {
        let e = std::fs::read_to_string(edges)?;
        let p = std::fs::read_to_string(ptrees)?;
        let g = std::fs::read_to_string(gptree)?;
        ProfiledGraph::load(&e, &p, &g)
    }

    pub fn edges_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.adj.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn ptrees_text(&self) -> String {
        let mut out = String::new();
        for (v, t) in self.ptrees.iter().enumerate() {
            let ids: Vec<String> = t.iter().map(|l| l.0.to_string()).collect();
            let _ = writeln!(out, "{v}: {}", ids.join(","));
        }
        out
    }

    /// Writes `<stem>.edges`, `<stem>.ptrees` and `<stem>.gptree`.
    pub fn write_files(&self, dir: impl AsRef<Path>, stem: &str) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{stem}.edges")), self.edges_text())?;
        std::fs::write(dir.join(format!("{stem}.ptrees")), self.ptrees_text())?;
        std::fs::write(dir.join(format!("{stem}.gptree")), self.gp.to_text())?;
        Ok(())
    }
}

fn parse_edges(text: &str, n: usize) -> Result<Vec<(VertexId, VertexId)>> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let u = a.parse::<VertexId>().map_err(|_| {
                    PcsError::parse("edges", lineno, format!("bad vertex id {a:?}"))
                })?;
                let v = b.parse::<VertexId>().map_err(|_| {
                    PcsError::parse("edges", lineno, format!("bad vertex id {b:?}"))
                })?;
                (u, v)
            }
            _ => return Err(PcsError::parse("edges", lineno, "expected `u v`")),
        };
        if u == v {
            return Err(PcsError::parse(
                "edges",
                lineno,
                format!("self-loop on vertex {u}"),
            ));
        }
        for w in [u, v] {
            if w as usize >= n {
                return Err(PcsError::DanglingVertex {
                    line: lineno,
                    vertex: w,
                    n,
                });
            }
        }
        edges.push((u.min(v), u.max(v)));
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(edges)
}

fn parse_ptrees(text: &str, gp: &GpTree) -> Result<Vec<PTree>> {
    let mut rows: Vec<(usize, VertexId, PTree)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, tail) = line
            .split_once(':')
            .ok_or_else(|| PcsError::parse("ptrees", lineno, "expected `v: id,id,...`"))?;
        let v = head
            .trim()
            .parse::<VertexId>()
            .map_err(|_| PcsError::parse("ptrees", lineno, format!("bad vertex id {head:?}")))?;
        let mut labels = Vec::new();
        for tok in tail.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let id = tok
                .parse::<u64>()
                .map_err(|_| PcsError::parse("ptrees", lineno, format!("bad label id {tok:?}")))?;
            if id >= gp.len() as u64 {
                return Err(PcsError::UnknownLabel {
                    vertex: v,
                    label: id,
                });
            }
            labels.push(LabelId(id as u32));
        }
        rows.push((lineno, v, close_under_parents(&labels, gp)?));
    }
    let n = rows
        .iter()
        .map(|(_, v, _)| *v as usize + 1)
        .max()
        .unwrap_or(0);
    let mut out: Vec<Option<PTree>> = vec![None; n];
    for (lineno, v, t) in rows {
        if out[v as usize].is_some() {
            return Err(PcsError::parse(
                "ptrees",
                lineno,
                format!("vertex {v} has more than one P-tree line"),
            ));
        }
        out[v as usize] = Some(t);
    }
    Ok(out.into_iter().map(Option::unwrap_or_default).collect())
}
