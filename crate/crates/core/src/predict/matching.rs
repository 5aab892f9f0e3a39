//! Matching statistics of an input tree against a [`MasterIndex`].
//!
//! Nodes are visited children first. A node's suffix is its child's suffix
//! without the first label, so the match of the best child, shortened by one
//! label, is a valid starting point: it is reached by one suffix link from
//! the child's locus followed by a skip-count descent, after which matching
//! resumes label by label.
//!
//! A locus is a suffix-tree node `y` and a length `l` with
//! `depth(parent(y)) < l <= depth(y)`. Inside an edge the next label to
//! compare is read from a master-forest node `q`, the `l`-th ancestor of some
//! master suffix below `y`. Dropping the first label of a match moves the
//! occurrence one step up the master forest without moving `q`, so `q`
//! carries over from child to parent unchanged.

use super::MasterIndex;
use crate::tree::{Tree, NIL};

/// How a node's match is seeded from its best child.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SkipStrategy {
    /// Follow one suffix link from the child's locus.
    #[default]
    SuffixLink,
    /// Skip-count down from the root.
    Redescent,
}

/// Per input node: matched length and the suffix-tree node where the match
/// ends. Also records the traversal work spent.
#[derive(Debug, Clone)]
pub struct MatchStats {
    len: Vec<u32>,
    locus: Vec<u32>,
    work: u64,
}

impl MatchStats {
    pub fn len(&self) -> usize {
        self.len.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_empty()
    }

    /// Matched length of every node.
    pub fn lengths(&self) -> &[u32] {
        &self.len
    }

    /// `(suffix-tree node, matched length)` of input node `i`.
    pub fn locus(&self, i: usize) -> (usize, usize) {
        (self.locus[i] as usize, self.len[i] as usize)
    }

    /// Child lookups, in-edge label comparisons, suffix links and skip steps.
    pub fn work(&self) -> u64 {
        self.work
    }
}

pub(crate) fn run(idx: &MasterIndex, t: &Tree, strategy: SkipStrategy) -> MatchStats {
    let n = t.len();
    let root = idx.root() as u32;
    let master = &idx.master;
    let symbol: Vec<u32> = t.labels().iter().map(|&l| idx.symbol_of(l)).collect();
    let mut len = vec![0u32; n];
    let mut locus = vec![root; n];
    let mut next = vec![NIL; n];
    let mut work = 0u64;

    let mut path = vec![0u32; t.height()];
    let mut stack = vec![(t.root(), t.children(t.root()))];
    path[0] = t.root() as u32;
    while let Some((v, children)) = stack.last_mut() {
        if let Some(c) = children.next() {
            path[t.depth(c)] = c as u32;
            stack.push((c, t.children(c)));
            continue;
        }
        let v = *v;
        stack.pop();

        let d = t.depth(v);
        // k-th label of the suffix of v.
        let s = |k: usize| symbol[path[d - k] as usize];

        let best = t.children(v).fold(None, |best: Option<usize>, c| match best {
            Some(b) if len[b] >= len[c] => Some(b),
            _ => Some(c),
        });
        let target = best.map_or(0, |c| len[c].saturating_sub(1));
        let (mut y, mut l, mut q) = (root, 0u32, NIL);
        if target > 0 {
            let c = best.unwrap();
            let (yc, lc) = (locus[c], len[c]);
            // Deepest node at or above the child's locus.
            let full = if lc == idx.depth[yc as usize] {
                yc
            } else {
                idx.parent[yc as usize]
            };
            let (mut u, mut du) = match strategy {
                SkipStrategy::SuffixLink if full != root => {
                    work += 1;
                    (idx.link_raw(full), idx.depth[full as usize] - 1)
                }
                _ => (root, 0),
            };
            y = u;
            while du < target {
                work += 1;
                let z = idx
                    .child(u, s(du as usize))
                    .expect("a shortened match occurs in the master");
                y = z;
                if idx.depth[z as usize] > target {
                    break;
                }
                u = z;
                du = idx.depth[z as usize];
            }
            l = target;
            q = next[c];
        }

        while (l as usize) <= d {
            let want = s(l as usize);
            work += 1;
            if l == idx.depth[y as usize] {
                match idx.child(y, want) {
                    Some(z) => {
                        y = z;
                        q = master.forest().parent[idx.head[z as usize] as usize];
                    }
                    None => break,
                }
            } else {
                if master.symbol(q as usize) != want {
                    break;
                }
                q = master.forest().parent[q as usize];
            }
            l += 1;
        }
        len[v] = l;
        locus[v] = y;
        next[v] = q;
    }
    MatchStats { len, locus, work }
}
