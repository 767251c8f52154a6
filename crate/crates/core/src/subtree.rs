//! Operations on P-trees viewed as induced rooted subtrees of the GP-tree:
//! the subtree relation, rightmost-path extension, the one-node lattice
//! neighbourhood and maximal common subtrees.

use crate::error::{PcsError, Result};
use crate::graph::{GpTree, LabelId, PTree};

/// A tree together with its rightmost path (root first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtreeCursor {
    pub tree: PTree,
    pub rightmost_path: Vec<LabelId>,
}

impl SubtreeCursor {
    pub fn new(tree: PTree, gp: &GpTree) -> Self {
        let rightmost_path = rightmost_path(&tree, gp);
        SubtreeCursor {
            tree,
            rightmost_path,
        }
    }

    pub fn rightmost_leaf(&self) -> Option<LabelId> {
        self.rightmost_path.last().copied()
    }
}

/// Path from the root to the last node of `t` in canonical order.
pub fn rightmost_path(t: &PTree, gp: &GpTree) -> Vec<LabelId> {
    let mut path = Vec::new();
    if !t.contains(LabelId::ROOT) {
        return path;
    }
    let mut cur = LabelId::ROOT;
    path.push(cur);
    while let Some(&next) = gp.children(cur).iter().rev().find(|&&c| t.contains(c)) {
        path.push(next);
        cur = next;
    }
    path
}

pub fn is_subtree(s: &PTree, t: &PTree) -> bool {
    s.is_subtree_of(t)
}

/// Rightmost extensions of `t_prime` inside `bound`: every tree obtained by
/// adding one node of `bound` that becomes the new rightmost leaf.
pub fn generate_subtrees(t_prime: &PTree, bound: &PTree, gp: &GpTree) -> Vec<PTree> {
    if t_prime.is_empty() {
        return if bound.contains(LabelId::ROOT) {
            vec![PTree::from_closed(vec![LabelId::ROOT])]
        } else {
            Vec::new()
        };
    }
    let path = rightmost_path(t_prime, gp);
    let mut out = Vec::new();
    for (i, &p) in path.iter().enumerate() {
        // Children of p that come after its child on the rightmost path.
        let after = path.get(i + 1).map(|&c| gp.rank(c));
        for &c in gp.children(p) {
            if !bound.contains(c) || t_prime.contains(c) {
                continue;
            }
            if after.is_some_and(|r| gp.rank(c) < r) {
                continue;
            }
            out.push((gp.rank(c), t_prime.with(c)));
        }
    }
    out.sort_by_key(|(r, _)| *r);
    out.into_iter().map(|(_, t)| t).collect()
}

/// Number of subtrees of `t`, counting the empty tree.
pub fn count_subtrees(t: &PTree, gp: &GpTree) -> u128 {
    if t.is_empty() {
        return 1;
    }
    // rooted(x) = number of subtrees of t rooted at x that contain x.
    fn rooted(x: LabelId, t: &PTree, gp: &GpTree) -> u128 {
        gp.children(x)
            .iter()
            .filter(|&&c| t.contains(c))
            .fold(1u128, |acc, &c| acc.saturating_mul(1 + rooted(c, t, gp)))
    }
    rooted(LabelId::ROOT, t, gp).saturating_add(1)
}

/// Lattice parents: `t` minus one leaf. `{root}` has the empty tree as its
/// only parent.
pub fn parent_subtrees(t: &PTree, gp: &GpTree) -> Vec<PTree> {
    if t.is_empty() {
        return Vec::new();
    }
    if t.len() == 1 {
        return vec![PTree::empty()];
    }
    let mut out: Vec<PTree> = t
        .leaves(gp)
        .into_iter()
        .filter(|&l| l != LabelId::ROOT)
        .map(|l| t.without(l))
        .collect();
    out.sort_by_cached_key(|p| gp.canonical_key(p));
    out
}

/// Lattice children inside `bound`: `t` plus one node whose parent is in `t`.
pub fn child_subtrees(t: &PTree, bound: &PTree, gp: &GpTree) -> Vec<PTree> {
    child_labels(t, bound, gp)
        .into_iter()
        .map(|x| t.with(x))
        .collect()
}

/// Labels whose addition to `t` yields a lattice child inside `bound`, in
/// canonical order.
pub fn child_labels(t: &PTree, bound: &PTree, gp: &GpTree) -> Vec<LabelId> {
    if t.is_empty() {
        return if bound.contains(LabelId::ROOT) {
            vec![LabelId::ROOT]
        } else {
            Vec::new()
        };
    }
    let mut out: Vec<LabelId> = t
        .iter()
        .flat_map(|p| gp.children(p).iter().copied())
        .filter(|&c| bound.contains(c) && !t.contains(c))
        .collect();
    out.sort_by_key(|&l| gp.rank(l));
    out
}

/// The common lattice child of two children of one parent: their union.
pub fn common_child(c_i: &PTree, c_j: &PTree) -> PTree {
    c_i.union(c_j)
}

/// The maximal common subtree of a non-empty list of trees.
pub fn maximal_common_subtree<'a, I>(trees: I) -> Result<PTree>
where
    I: IntoIterator<Item = &'a PTree>,
{
    let mut it = trees.into_iter();
    let first = it.next().ok_or(PcsError::EmptyTreeList)?;
    let mut acc = first.clone();
    for t in it {
        if acc.is_empty() {
            break;
        }
        acc = acc.intersection(t);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GpTree;

    fn fig1() -> GpTree {
        GpTree::parse("0 -1 r\n1 0 CM\n2 1 ML\n3 1 AI\n4 0 IS\n5 4 DMS\n6 0 HW\n").unwrap()
    }

    fn t(ids: &[u32]) -> PTree {
        PTree::from_closed(ids.iter().map(|&i| LabelId(i)).collect())
    }

    #[test]
    fn subtree_relation() {
        assert!(is_subtree(&t(&[0]), &t(&[0, 4])));
        assert!(is_subtree(&t(&[0, 1, 2]), &t(&[0, 1, 2, 3])));
        assert!(!is_subtree(&t(&[0, 4]), &t(&[0, 1, 2])));
    }

    #[test]
    fn rightmost_generation() {
        // r with children a=1, b=2
        let gp = GpTree::parse("0 -1 r\n1 0 a\n2 0 b\n").unwrap();
        let bound = t(&[0, 1, 2]);
        assert_eq!(
            generate_subtrees(&PTree::empty(), &bound, &gp),
            vec![t(&[0])]
        );
        assert_eq!(
            generate_subtrees(&t(&[0]), &bound, &gp),
            vec![t(&[0, 1]), t(&[0, 2])]
        );
        assert_eq!(
            generate_subtrees(&t(&[0, 1]), &bound, &gp),
            vec![t(&[0, 1, 2])]
        );
        assert!(generate_subtrees(&t(&[0, 2]), &bound, &gp).is_empty());
    }

    #[test]
    fn rightmost_extension_descends_under_last_child() {
        let gp = fig1();
        let bound = t(&[0, 1, 2, 3, 4, 5, 6]);
        let got = generate_subtrees(&t(&[0, 1]), &bound, &gp);
        assert_eq!(
            got,
            vec![t(&[0, 1, 2]), t(&[0, 1, 3]), t(&[0, 1, 4]), t(&[0, 1, 6])]
        );
        let cur = SubtreeCursor::new(t(&[0, 1, 2, 4]), &gp);
        assert_eq!(cur.rightmost_path, vec![LabelId(0), LabelId(4)]);
        assert_eq!(cur.rightmost_leaf(), Some(LabelId(4)));
    }

    #[test]
    fn counting() {
        let gp = fig1();
        assert_eq!(count_subtrees(&PTree::empty(), &gp), 1);
        // star: r + CM, IS, HW
        assert_eq!(count_subtrees(&t(&[0, 1, 4, 6]), &gp), 9);
        // path r -> CM -> ML
        assert_eq!(count_subtrees(&t(&[0, 1, 2]), &gp), 4);
    }

    #[test]
    fn lattice_neighbours() {
        let gp = fig1();
        assert_eq!(parent_subtrees(&t(&[0]), &gp), vec![PTree::empty()]);
        assert_eq!(
            parent_subtrees(&t(&[0, 1, 2, 3]), &gp),
            vec![t(&[0, 1, 2]), t(&[0, 1, 3])]
        );
        assert_eq!(parent_subtrees(&t(&[0, 1, 2]), &gp), vec![t(&[0, 1])]);

        let gp2 = GpTree::parse("0 -1 r\n1 0 a\n2 0 b\n").unwrap();
        let bound = t(&[0, 1, 2]);
        assert_eq!(
            child_subtrees(&PTree::empty(), &t(&[0, 1]), &gp2),
            vec![t(&[0])]
        );
        assert_eq!(
            child_subtrees(&t(&[0]), &bound, &gp2),
            vec![t(&[0, 1]), t(&[0, 2])]
        );
        assert_eq!(
            child_subtrees(&t(&[0, 1]), &bound, &gp2),
            vec![t(&[0, 1, 2])]
        );
    }

    #[test]
    fn common_child_is_union() {
        assert_eq!(common_child(&t(&[0, 1]), &t(&[0, 2])), t(&[0, 1, 2]));
        assert_eq!(common_child(&t(&[0, 1]), &t(&[0, 1])), t(&[0, 1]));
        assert_eq!(
            common_child(&t(&[0, 1, 2]), &t(&[0, 1, 3])),
            t(&[0, 1, 2, 3])
        );
    }

    #[test]
    fn mct() {
        let a = t(&[0, 4, 5, 6]);
        let d = t(&[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(maximal_common_subtree([&a]).unwrap(), a);
        assert_eq!(maximal_common_subtree([&a, &d, &a]).unwrap(), a);
        let b = t(&[0, 1, 2, 3]);
        assert_eq!(maximal_common_subtree([&b, &b, &d]).unwrap(), b);
        assert!(maximal_common_subtree(std::iter::empty::<&PTree>()).is_err());
    }
}
