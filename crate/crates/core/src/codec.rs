//! Binary `.cpt` format for [`CpIndex`].
//!
//! Layout: magic `CPTI`, one version byte, then tagged sections
//! (`tag: u8, len: u64, payload`) for the GP-tree, adjacency, global CL-tree,
//! label nodes and head map, followed by a CRC-32 of everything before it.
//! All integers are little-endian.

use std::path::Path;

use crate::error::{PcsError, Result};
use crate::graph::{Csr, GpTree, LabelId};
use crate::index::{ClSlot, CpIndex, CpNode};
use crate::kcore::{ClNode, ClTree};

pub const MAGIC: &[u8; 4] = b"CPTI";
pub const VERSION: u8 = 1;

const TAG_GPTREE: u8 = 1;
const TAG_ADJ: u8 = 2;
const TAG_GLOBAL: u8 = 3;
const TAG_NODES: u8 = 4;
const TAG_HEAD: u8 = 5;

const NONE: u32 = u32::MAX;

#[derive(Default)]
struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn u8(&mut self, x: u8) {
        self.buf.push(x);
    }
    fn u32(&mut self, x: u32) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn u64(&mut self, x: u64) {
        self.buf.extend_from_slice(&x.to_le_bytes());
    }
    fn u32s(&mut self, xs: impl ExactSizeIterator<Item = u32>) {
        self.u64(xs.len() as u64);
        for x in xs {
            self.u32(x);
        }
    }
    fn section(&mut self, tag: u8, body: Writer) {
        self.u8(tag);
        self.u64(body.buf.len() as u64);
        self.buf.extend_from_slice(&body.buf);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| PcsError::Format("truncated stream".into()))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self) -> Result<usize> {
        let n = self.u64()?;
        // Every element is at least one byte, so this also bounds allocation.
        if n > (self.buf.len() - self.pos) as u64 {
            return Err(PcsError::Format(format!(
                "length {n} exceeds remaining input"
            )));
        }
        Ok(n as usize)
    }
    fn u32s(&mut self) -> Result<Vec<u32>> {
        let n = self.len()?;
        (0..n).map(|_| self.u32()).collect()
    }
    fn section(&mut self, tag: u8) -> Result<Reader<'a>> {
        let found = self.u8()?;
        if found != tag {
            return Err(PcsError::Format(format!(
                "expected section {tag}, found {found}"
            )));
        }
        let n = self.len()?;
        Ok(Reader {
            buf: self.take(n)?,
            pos: 0,
        })
    }
    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(PcsError::Format("trailing bytes in section".into()));
        }
        Ok(())
    }
}

fn write_cltree(w: &mut Writer, t: &ClTree) {
    w.u32s(t.globals.iter().copied());
    w.u32s(t.core.iter().copied());
    w.u32s(t.node_of.iter().copied());
    w.u32s(t.layout.iter().copied());
    w.u64(t.nodes.len() as u64);
    for n in &t.nodes {
        w.u32(n.level);
        w.u32(n.parent.unwrap_or(NONE));
        w.u32(n.own.0);
        w.u32(n.own.1);
        w.u32(n.subtree_end);
    }
}

fn read_cltree(r: &mut Reader) -> Result<ClTree> {
    let globals = r.u32s()?;
    let core = r.u32s()?;
    let node_of = r.u32s()?;
    let layout = r.u32s()?;
    let count = r.len()?;
    let mut nodes: Vec<ClNode> = Vec::with_capacity(count);
    for i in 0..count {
        let level = r.u32()?;
        let parent = match r.u32()? {
            NONE => None,
            p if (p as usize) < i => Some(p),
            p => return Err(PcsError::Format(format!("CL-node {i} has bad parent {p}"))),
        };
        let own = (r.u32()?, r.u32()?);
        let subtree_end = r.u32()?;
        if own.0 > own.1 || own.1 > subtree_end || subtree_end as usize > layout.len() {
            return Err(PcsError::Format(format!("CL-node {i} has bad ranges")));
        }
        if let Some(p) = parent {
            nodes[p as usize].children.push(i as u32);
        }
        nodes.push(ClNode {
            level,
            parent,
            children: Vec::new(),
            own,
            subtree_end,
        });
    }
    let n = globals.len();
    if core.len() != n || node_of.len() != n || layout.len() != n {
        return Err(PcsError::Format("CL-tree arrays disagree in length".into()));
    }
    if node_of.iter().any(|&x| x as usize >= count) || layout.iter().any(|&x| x as usize >= n) {
        return Err(PcsError::Format("CL-tree reference out of range".into()));
    }
    Ok(ClTree {
        nodes,
        node_of,
        layout,
        globals,
        core,
    })
}

pub fn serialize(idx: &CpIndex) -> Vec<u8> {
    let mut w = Writer::default();
    w.buf.extend_from_slice(MAGIC);
    w.u8(VERSION);

    let mut s = Writer::default();
    s.u64(idx.gp.len() as u64);
    for l in idx.gp.labels() {
        s.u32(idx.gp.parent(l).map_or(NONE, |p| p.0));
        let name = idx.gp.name(l).as_bytes();
        s.u64(name.len() as u64);
        s.buf.extend_from_slice(name);
    }
    w.section(TAG_GPTREE, s);

    let mut s = Writer::default();
    let (offsets, targets) = idx.adj.raw();
    s.u64(offsets.len() as u64);
    for &o in offsets {
        s.u64(o as u64);
    }
    s.u32s(targets.iter().copied());
    w.section(TAG_ADJ, s);

    let mut s = Writer::default();
    write_cltree(&mut s, &idx.global);
    w.section(TAG_GLOBAL, s);

    let mut s = Writer::default();
    let present: Vec<&CpNode> = idx.nodes.iter().flatten().collect();
    s.u64(present.len() as u64);
    for node in present {
        s.u32(node.label.0);
        match &node.slot {
            ClSlot::Owned(t) => {
                s.u8(0);
                write_cltree(&mut s, t);
            }
            ClSlot::SameAs(other) => {
                s.u8(1);
                s.u32(other.0);
            }
        }
    }
    w.section(TAG_NODES, s);

    let mut s = Writer::default();
    s.u64(idx.head_offsets.len() as u64);
    for &o in &idx.head_offsets {
        s.u64(o as u64);
    }
    s.u32s(idx.head_labels.iter().map(|l| l.0));
    w.section(TAG_HEAD, s);

    let crc = crc32fast::hash(&w.buf);
    w.u32(crc);
    w.buf
}

pub fn deserialize(bytes: &[u8]) -> Result<CpIndex> {
    if bytes.len() < MAGIC.len() + 1 + 4 {
        return Err(PcsError::Format("truncated stream".into()));
    }
    if &bytes[..4] != MAGIC {
        return Err(PcsError::Format("not a CP-tree index (bad magic)".into()));
    }
    if bytes[4] != VERSION {
        return Err(PcsError::Version {
            found: bytes[4],
            expected: VERSION,
        });
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(trailer.try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(PcsError::Checksum { stored, computed });
    }
    let mut r = Reader { buf: body, pos: 5 };

    let mut s = r.section(TAG_GPTREE)?;
    let count = s.len()?;
    let mut parents = Vec::with_capacity(count);
    let mut names = Vec::with_capacity(count);
    for _ in 0..count {
        parents.push(match s.u32()? {
            NONE => None,
            p => Some(p),
        });
        let len = s.len()?;
        let name = String::from_utf8(s.take(len)?.to_vec())
            .map_err(|_| PcsError::Format("label name is not UTF-8".into()))?;
        names.push(name);
    }
    s.finish()?;
    let gp = GpTree::from_parents(parents, names)?;

    let mut s = r.section(TAG_ADJ)?;
    let count = s.len()?;
    let offsets = (0..count)
        .map(|_| s.u64().map(|x| x as usize))
        .collect::<Result<Vec<_>>>()?;
    let targets = s.u32s()?;
    s.finish()?;
    let n = offsets.len().saturating_sub(1);
    if offsets.first() != Some(&0)
        || offsets.last() != Some(&targets.len())
        || offsets.windows(2).any(|w| w[0] > w[1])
        || targets.iter().any(|&t| t as usize >= n)
    {
        return Err(PcsError::Format("malformed adjacency".into()));
    }
    let adj = Csr::from_raw(offsets, targets);

    let mut s = r.section(TAG_GLOBAL)?;
    let global = read_cltree(&mut s)?;
    s.finish()?;

    let mut s = r.section(TAG_NODES)?;
    let count = s.len()?;
    let mut nodes: Vec<Option<CpNode>> = vec![None; gp.len()];
    for _ in 0..count {
        let label = LabelId(s.u32()?);
        if !gp.contains(label) || nodes[label.index()].is_some() {
            return Err(PcsError::Format(format!("bad label node {label}")));
        }
        let slot = match s.u8()? {
            0 => ClSlot::Owned(read_cltree(&mut s)?),
            1 => {
                let other = LabelId(s.u32()?);
                if !gp.contains(other) {
                    return Err(PcsError::Format(format!("bad shared label {other}")));
                }
                ClSlot::SameAs(other)
            }
            x => return Err(PcsError::Format(format!("bad node kind {x}"))),
        };
        nodes[label.index()] = Some(CpNode {
            label,
            parent: None,
            children: Vec::new(),
            slot,
        });
    }
    s.finish()?;
    for l in gp.labels() {
        if nodes[l.index()].is_none() {
            continue;
        }
        let parent = gp.parent(l).filter(|p| nodes[p.index()].is_some());
        let children = gp
            .children(l)
            .iter()
            .copied()
            .filter(|c| nodes[c.index()].is_some())
            .collect();
        let node = nodes[l.index()].as_mut().unwrap();
        node.parent = parent;
        node.children = children;
    }

    let mut s = r.section(TAG_HEAD)?;
    let count = s.len()?;
    let head_offsets = (0..count)
        .map(|_| s.u64().map(|x| x as usize))
        .collect::<Result<Vec<_>>>()?;
    let head_labels: Vec<LabelId> = s.u32s()?.into_iter().map(LabelId).collect();
    s.finish()?;
    if head_offsets.len() != n + 1
        || head_offsets.last() != Some(&head_labels.len())
        || head_offsets.windows(2).any(|w| w[0] > w[1])
        || head_labels
            .iter()
            .any(|l| nodes.get(l.index()).is_none_or(Option::is_none))
    {
        return Err(PcsError::Format("malformed head map".into()));
    }
    r.finish()?;

    Ok(CpIndex {
        gp,
        adj,
        nodes,
        head_offsets,
        head_labels,
        global,
    })
}

pub fn save(idx: &CpIndex, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, serialize(idx))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<CpIndex> {
    deserialize(&std::fs::read(path)?)
}
