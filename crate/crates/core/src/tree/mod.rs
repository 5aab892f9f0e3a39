//! Rooted labeled trees.
//!
//! Nodes are numbered `0..n` in preorder, so the root is always node 0 and
//! every parent has a smaller id than its children. Children keep the order
//! they were given in; the kernels never depend on it.

mod level_ancestor;
mod random;
mod rmq;
mod text;

use std::collections::HashMap;

use crate::{Error, Result};

pub use level_ancestor::LevelAncestorIndex;
pub use random::{path_tree, random_tree, star_tree};
pub use rmq::RmqIndex;
pub use text::{parse_corpus, parse_tree, serialize_tree};

pub type NodeId = usize;

/// Marks "no node" in the packed `u32` parent arrays.
pub(crate) const NIL: u32 = u32::MAX;

/// An interned node label. Ordinary labels are dense ids `0..σ`; the terminal
/// symbols used when trees are merged live in a separate reserved range of
/// the suffix-array alphabet and never appear in a [`Tree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

/// Interning table shared by every tree that is compared with another.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    ids: HashMap<String, Label>,
    names: Vec<String>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Alphabet with `sigma` generated spellings: `a`..`z`, then `l26`, `l27`, ...
    pub fn synthetic(sigma: usize) -> Self {
        let mut alphabet = Self::new();
        for k in 0..sigma {
            alphabet.intern(&synthetic_name(k));
        }
        alphabet
    }

    pub fn intern(&mut self, name: &str) -> Label {
        if let Some(&label) = self.ids.get(name) {
            return label;
        }
        let label = Label(self.names.len() as u32);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), label);
        label
    }

    pub fn get(&self, name: &str) -> Option<Label> {
        self.ids.get(name).copied()
    }

    /// Spelling of `label`; labels outside the table fall back to a generated name.
    pub fn name(&self, label: Label) -> std::borrow::Cow<'_, str> {
        match self.names.get(label.0 as usize) {
            Some(name) => std::borrow::Cow::Borrowed(name),
            None => std::borrow::Cow::Owned(synthetic_name(label.0 as usize)),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

fn synthetic_name(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("l{k}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    labels: Vec<Label>,
    parent: Vec<u32>,
    depth: Vec<u32>,
    child_start: Vec<u32>,
    child_list: Vec<u32>,
}

impl Tree {
    /// Builds a tree from preorder-numbered parts. Callers guarantee that node
    /// 0 is the only root and `parent[v] < v` for every other node.
    pub(crate) fn from_preorder(labels: Vec<Label>, parent: Vec<u32>) -> Tree {
        let n = labels.len();
        debug_assert_eq!(parent.len(), n);
        debug_assert!(n > 0 && parent[0] == NIL);
        let mut depth = vec![0u32; n];
        let mut child_start = vec![0u32; n + 1];
        for v in 1..n {
            let p = parent[v] as usize;
            debug_assert!(p < v);
            depth[v] = depth[p] + 1;
            child_start[p + 1] += 1;
        }
        for v in 0..n {
            child_start[v + 1] += child_start[v];
        }
        let mut fill = child_start.clone();
        let mut child_list = vec![0u32; n.saturating_sub(1)];
        for (v, &p) in parent.iter().enumerate().skip(1) {
            child_list[fill[p as usize] as usize] = v as u32;
            fill[p as usize] += 1;
        }
        Tree {
            labels,
            parent,
            depth,
            child_start,
            child_list,
        }
    }

    /// Builds a tree from an arbitrary parent array (`None` marks the root).
    /// Nodes are renumbered into preorder, visiting children in increasing
    /// original id.
    pub fn from_parents(labels: Vec<Label>, parent: &[Option<NodeId>]) -> Result<Tree> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one node".into()));
        }
        if parent.len() != n {
            return Err(Error::InvalidTree(format!(
                "{} labels but {} parent entries",
                n,
                parent.len()
            )));
        }
        let mut root = None;
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if root.is_some() => return Err(Error::InvalidTree("more than one root".into())),
                None => root = Some(v),
                Some(p) if p >= n => return Err(Error::InvalidTree(format!("parent {p} of node {v} out of range"))),
                Some(p) => children[p].push(v),
            }
        }
        let root = root.ok_or_else(|| Error::InvalidTree("no root".into()))?;
        Self::from_child_lists(&labels, &children, root)
    }

    fn from_child_lists(labels: &[Label], children: &[Vec<NodeId>], root: NodeId) -> Result<Tree> {
        let n = labels.len();
        let mut new_labels = Vec::with_capacity(n);
        let mut new_parent = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        // (old id, new parent id)
        let mut stack = vec![(root, NIL)];
        while let Some((v, p)) = stack.pop() {
            if seen[v] {
                return Err(Error::InvalidTree("cycle in parent array".into()));
            }
            seen[v] = true;
            let id = new_labels.len() as u32;
            new_labels.push(labels[v]);
            new_parent.push(p);
            stack.extend(children[v].iter().rev().map(|&c| (c, id)));
        }
        if new_labels.len() != n {
            return Err(Error::InvalidTree(
                "parent array is not connected (cycle detached from the root)".into(),
            ));
        }
        Ok(Tree::from_preorder(new_labels, new_parent))
    }

    /// Returns a copy of this tree whose children lists have been rearranged
    /// by `f`, renumbered into preorder. `f` receives each node and a mutable
    /// slice of its children (old ids) and may permute it.
    pub fn reorder_children(&self, mut f: impl FnMut(NodeId, &mut [NodeId])) -> Tree {
        let mut children: Vec<Vec<NodeId>> = (0..self.len()).map(|v| self.children(v).collect()).collect();
        for (v, list) in children.iter_mut().enumerate() {
            f(v, list);
        }
        Self::from_child_lists(&self.labels, &children, 0).expect("permuting children keeps a valid tree")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn label(&self, v: NodeId) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        match self.parent[v] {
            NIL => None,
            p => Some(p as NodeId),
        }
    }

    pub(crate) fn parent_raw(&self) -> &[u32] {
        &self.parent
    }

    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v] as usize
    }

    pub(crate) fn depth_raw(&self) -> &[u32] {
        &self.depth
    }

    pub fn children(&self, v: NodeId) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        let range = self.child_start[v] as usize..self.child_start[v + 1] as usize;
        self.child_list[range].iter().map(|&c| c as NodeId)
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        self.child_start[v] == self.child_start[v + 1]
    }

    /// Number of leaves (L).
    pub fn leaf_count(&self) -> usize {
        (0..self.len()).filter(|&v| self.is_leaf(v)).count()
    }

    /// Number of nodes on the longest root-to-leaf path (H = max depth + 1).
    pub fn height(&self) -> usize {
        self.depth.iter().max().map_or(0, |&d| d as usize + 1)
    }

    /// Label sequence read from `v` up to the root.
    pub fn suffix(&self, v: NodeId) -> Vec<Label> {
        let mut out = Vec::with_capacity(self.depth(v) + 1);
        let mut cur = Some(v);
        while let Some(u) = cur {
            out.push(self.labels[u]);
            cur = self.parent(u);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ids: &[u32]) -> Vec<Label> {
        ids.iter().map(|&i| Label(i)).collect()
    }

    #[test]
    fn from_parents_renumbers_into_preorder() {
        // 0 -> {2, 1}, 2 -> {3}; original ids are not preorder.
        let t = Tree::from_parents(labels(&[0, 1, 2, 3]), &[None, Some(0), Some(0), Some(2)]).unwrap();
        assert_eq!(t.len(), 4);
        // children visited in increasing original id: 1 first, then 2 and its child 3
        assert_eq!(t.labels(), &labels(&[0, 1, 2, 3])[..]);
        assert_eq!(t.parent(3), Some(2));
        assert_eq!(t.depth(3), 2);

        let u = Tree::from_parents(labels(&[0, 3, 1, 2]), &[None, Some(3), Some(0), Some(0)]).unwrap();
        assert_eq!(u.labels(), &labels(&[0, 1, 2, 3])[..]);
        assert_eq!(u.parent(3), Some(2));
    }

    #[test]
    fn rejects_bad_parent_arrays() {
        assert!(Tree::from_parents(vec![], &[]).is_err());
        assert!(Tree::from_parents(labels(&[0, 0]), &[None, None]).is_err());
        assert!(Tree::from_parents(labels(&[0, 0]), &[Some(1), Some(0)]).is_err());
        assert!(Tree::from_parents(labels(&[0, 0, 0]), &[None, Some(2), Some(1)]).is_err());
        assert!(Tree::from_parents(labels(&[0, 0]), &[None, Some(7)]).is_err());
    }

    #[test]
    fn derived_shape_quantities() {
        let t = Tree::from_parents(labels(&[0, 0, 0, 0, 0]), &[None, Some(0), Some(1), Some(0), Some(3)]).unwrap();
        assert_eq!(t.leaf_count(), 2);
        assert_eq!(t.height(), 3);
        for v in 1..t.len() {
            assert_eq!(t.depth(v), t.depth(t.parent(v).unwrap()) + 1);
            assert!(t.children(t.parent(v).unwrap()).any(|c| c == v));
        }
    }

    #[test]
    fn reorder_children_reverses() {
        let t = Tree::from_parents(labels(&[0, 1, 2]), &[None, Some(0), Some(0)]).unwrap();
        let r = t.reorder_children(|_, c| c.reverse());
        assert_eq!(r.labels(), &labels(&[0, 2, 1])[..]);
    }

    #[test]
    fn synthetic_alphabet_names() {
        let a = Alphabet::synthetic(28);
        assert_eq!(a.name(Label(0)), "a");
        assert_eq!(a.name(Label(25)), "z");
        assert_eq!(a.name(Label(27)), "l27");
        assert_eq!(a.get("l26"), Some(Label(26)));
    }
}
