//! Enhanced suffix arrays over trees.
//!
//! The suffix of node `v` is the label string read from `v` up to its root.
//! A [`TreeSuffixArray`] lists nodes in lexicographic order of their suffixes
//! (a suffix that ends sorts before any extension of it; identical suffixes
//! are ordered by node id) together with the lcp array of rank-adjacent
//! suffixes and the inverse permutation.
//!
//! Two builders produce bit-identical arrays: [`build_esa_reference`] sorts
//! with multikey quicksort, [`build_esa_linear`] runs the skew recursion of
//! [`linear`].

pub(crate) mod linear;
pub(crate) mod reference;

use std::fmt;
use std::str::FromStr;

use crate::tree::{Label, NodeId, Tree, NIL};
use crate::Error;

/// Which construction algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Builder {
    /// Linear-time skew construction.
    #[default]
    Linear,
    /// Multikey quicksort over upward paths.
    Reference,
}

impl fmt::Display for Builder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Builder::Linear => "linear",
            Builder::Reference => "reference",
        })
    }
}

impl FromStr for Builder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "linear" | "proposed" => Ok(Builder::Linear),
            "reference" | "multikey" => Ok(Builder::Reference),
            _ => Err(Error::InvalidParameter(format!(
                "unknown builder {s:?} (expected linear or reference)"
            ))),
        }
    }
}

/// Packed forest the builders operate on. Labels are `>= 1`; `0` is reserved
/// for "suffix ended", which sorts below every label. Node ids need not be
/// topologically ordered.
#[derive(Debug, Clone)]
pub(crate) struct Forest {
    pub parent: Vec<u32>,
    pub label: Vec<u32>,
    pub depth: Vec<u32>,
}

impl Forest {
    pub fn from_tree(tree: &Tree) -> Forest {
        Forest {
            parent: tree.parent_raw().to_vec(),
            label: tree.labels().iter().map(|l| l.0 + 1).collect(),
            depth: tree.depth_raw().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.label.len()
    }

    /// Suffix array and lcp array, ties by ascending node id.
    pub fn sort(&self, builder: Builder) -> (Vec<u32>, Vec<i32>) {
        match builder {
            Builder::Linear => linear::build(self),
            Builder::Reference => reference::build(self),
        }
    }
}

/// Suffix array, lcp array and inverse suffix array of a tree or forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSuffixArray {
    sa: Vec<u32>,
    lcp: Vec<i32>,
    rsa: Vec<u32>,
    suffix_len: Vec<u32>,
}

impl TreeSuffixArray {
    pub(crate) fn from_parts(sa: Vec<u32>, lcp: Vec<i32>, suffix_len: Vec<u32>) -> Self {
        let mut rsa = vec![NIL; sa.len()];
        for (i, &v) in sa.iter().enumerate() {
            rsa[v as usize] = i as u32;
        }
        Self {
            sa,
            lcp,
            rsa,
            suffix_len,
        }
    }

    pub(crate) fn build_forest(forest: &Forest, builder: Builder) -> Self {
        let (sa, lcp) = forest.sort(builder);
        let suffix_len = forest.depth.iter().map(|d| d + 1).collect();
        Self::from_parts(sa, lcp, suffix_len)
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    /// Nodes in suffix order.
    pub fn sa(&self) -> &[u32] {
        &self.sa
    }

    /// `lcp[i]` is the common prefix length of ranks `i` and `i + 1`; the
    /// last entry is `-1`.
    pub fn lcp(&self) -> &[i32] {
        &self.lcp
    }

    /// Rank of each node.
    pub fn rsa(&self) -> &[u32] {
        &self.rsa
    }

    /// Number of labels on each node's suffix.
    pub fn suffix_len(&self) -> &[u32] {
        &self.suffix_len
    }

    pub fn node_at(&self, rank: usize) -> NodeId {
        self.sa[rank] as NodeId
    }

    pub fn rank_of(&self, v: NodeId) -> usize {
        self.rsa[v] as usize
    }
}

pub fn build_esa_reference(tree: &Tree) -> TreeSuffixArray {
    TreeSuffixArray::build_forest(&Forest::from_tree(tree), Builder::Reference)
}

pub fn build_esa_linear(tree: &Tree) -> TreeSuffixArray {
    TreeSuffixArray::build_forest(&Forest::from_tree(tree), Builder::Linear)
}

pub fn build_esa(tree: &Tree, builder: Builder) -> TreeSuffixArray {
    TreeSuffixArray::build_forest(&Forest::from_tree(tree), builder)
}

/// Labels on the path from `v` to the root.
pub fn suffix(tree: &Tree, v: NodeId) -> Vec<Label> {
    tree.suffix(v)
}

/// Longest common prefix of the suffixes of `u` and `v`, by direct comparison.
pub fn naive_lcp(tree: &Tree, u: NodeId, v: NodeId) -> usize {
    let (mut a, mut b) = (Some(u), Some(v));
    let mut n = 0;
    while let (Some(x), Some(y)) = (a, b) {
        if tree.label(x) != tree.label(y) {
            break;
        }
        n += 1;
        a = tree.parent(x);
        b = tree.parent(y);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_tree, random_tree, Alphabet, RmqIndex};

    fn tree(s: &str) -> Tree {
        parse_tree(s, &mut Alphabet::new()).unwrap()
    }

    #[test]
    fn suffix_strings() {
        let mut a = Alphabet::new();
        let t = parse_tree("a(b(c))", &mut a).unwrap();
        assert_eq!(suffix(&t, 0), vec![a.get("a").unwrap()]);
        let names: Vec<_> = suffix(&t, 2).iter().map(|&l| a.name(l).into_owned()).collect();
        assert_eq!(names, ["c", "b", "a"]);

        let r = random_tree(30, 3, 5).unwrap();
        for v in 0..r.len() {
            let s = suffix(&r, v);
            assert_eq!(s.len(), r.depth(v) + 1);
            let mut cur = v;
            for (k, &l) in s.iter().enumerate() {
                assert_eq!(l, r.label(cur));
                if k + 1 < s.len() {
                    cur = r.parent(cur).unwrap();
                }
            }
        }
    }

    #[test]
    fn naive_lcp_basics() {
        let t = tree("a(b)");
        assert_eq!(naive_lcp(&t, 0, 1), 0);
        assert_eq!(naive_lcp(&t, 1, 1), 2);
        let t = tree("a(b,b)");
        assert_eq!(naive_lcp(&t, 1, 2), 2);
    }

    #[test]
    fn naive_lcp_matches_rmq_characterization() {
        for seed in 0..20 {
            let t = random_tree(32, 2, seed).unwrap();
            let esa = build_esa_linear(&t);
            let rmq = RmqIndex::new(esa.lcp());
            for u in 0..t.len() {
                for v in 0..t.len() {
                    let expect = naive_lcp(&t, u, v);
                    if u == v {
                        assert_eq!(expect, t.depth(u) + 1);
                        continue;
                    }
                    let (x, y) = {
                        let (a, b) = (esa.rank_of(u), esa.rank_of(v));
                        (a.min(b), a.max(b))
                    };
                    assert_eq!(rmq.query(x, y - 1).unwrap() as usize, expect);
                }
            }
        }
    }

    #[test]
    fn builder_names() {
        assert_eq!("multikey".parse::<Builder>().unwrap(), Builder::Reference);
        assert_eq!("linear".parse::<Builder>().unwrap(), Builder::Linear);
        assert!("dc3".parse::<Builder>().is_err());
    }
}
