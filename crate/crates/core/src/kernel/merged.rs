use crate::esa::{Builder, Forest, TreeSuffixArray};
use crate::tree::{Label, NodeId, Tree, NIL};

/// Several trees joined into one forest, each hung below its own terminal.
///
/// Ordinary nodes come first, component by component in input order, each
/// component keeping its tree's preorder numbering; the terminals follow.
/// Terminals rank below every ordinary label and in component order, so
/// every ordinary suffix ends with its component's terminal and no suffix of
/// one component is a prefix of a suffix of another.
#[derive(Debug, Clone)]
pub struct MergedTree {
    forest: Forest,
    ordinary: usize,
    offsets: Vec<usize>,
    source: Vec<u32>,
    base: u32,
}

impl MergedTree {
    pub fn new(trees: &[&Tree]) -> Self {
        let ranks: Vec<u32> = (1..=trees.len() as u32).collect();
        Self::with_terminal_ranks(trees, &ranks)
    }

    /// As [`MergedTree::new`] with explicit terminal symbols. `ranks` must be
    /// distinct and nonzero; ordinary labels are placed above the largest.
    pub(crate) fn with_terminal_ranks(trees: &[&Tree], ranks: &[u32]) -> Self {
        assert_eq!(trees.len(), ranks.len());
        debug_assert!(ranks.iter().all(|&r| r > 0));
        let base = ranks.iter().copied().max().unwrap_or(0) + 1;
        let ordinary: usize = trees.iter().map(|t| t.len()).sum();
        let total = ordinary + trees.len();
        let mut parent = Vec::with_capacity(total);
        let mut label = Vec::with_capacity(total);
        let mut depth = Vec::with_capacity(total);
        let mut offsets = Vec::with_capacity(trees.len() + 1);
        let mut source = Vec::with_capacity(ordinary);
        let mut offset = 0u32;
        for (c, t) in trees.iter().enumerate() {
            offsets.push(offset as usize);
            let terminal = (ordinary + c) as u32;
            parent.extend(
                t.parent_raw()
                    .iter()
                    .map(|&p| if p == NIL { terminal } else { p + offset }),
            );
            label.extend(t.labels().iter().map(|l| l.0 + base));
            depth.extend(t.depth_raw().iter().map(|d| d + 1));
            source.extend(std::iter::repeat_n(c as u32, t.len()));
            offset += t.len() as u32;
        }
        offsets.push(ordinary);
        parent.extend(std::iter::repeat_n(NIL, trees.len()));
        label.extend_from_slice(ranks);
        depth.extend(std::iter::repeat_n(0, trees.len()));
        Self {
            forest: Forest { parent, label, depth },
            ordinary,
            offsets,
            source,
            base,
        }
    }

    /// All nodes, terminals included.
    pub fn len(&self) -> usize {
        self.forest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forest.len() == 0
    }

    pub fn ordinary_len(&self) -> usize {
        self.ordinary
    }

    pub fn component_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of ordinary nodes in component `c`.
    pub fn component_len(&self, c: usize) -> usize {
        self.offsets[c + 1] - self.offsets[c]
    }

    /// Component an ordinary node came from.
    #[inline]
    pub fn source(&self, v: NodeId) -> usize {
        self.source[v] as usize
    }

    /// Merged id of node `v` of component `c`.
    pub fn node_of(&self, c: usize, v: NodeId) -> NodeId {
        self.offsets[c] + v
    }

    pub fn terminal(&self, c: usize) -> NodeId {
        self.ordinary + c
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        match self.forest.parent[v] {
            NIL => None,
            p => Some(p as NodeId),
        }
    }

    /// Symbol of `v` in the merged alphabet (terminals below ordinary labels).
    pub fn symbol(&self, v: NodeId) -> u32 {
        self.forest.label[v]
    }

    /// Symbol an ordinary label is stored under.
    pub fn symbol_of(&self, label: Label) -> u32 {
        label.0.saturating_add(self.base)
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        v >= self.ordinary
    }

    /// Whether a symbol belongs to a terminal rather than an ordinary label.
    pub fn is_terminal_symbol(&self, symbol: u32) -> bool {
        symbol < self.base
    }

    pub(crate) fn forest(&self) -> &Forest {
        &self.forest
    }

    /// Suffix array over the ordinary nodes only. The terminals' own one-label
    /// suffixes sort first and are dropped.
    pub fn suffix_array(&self, builder: Builder) -> TreeSuffixArray {
        let (sa, lcp) = self.forest.sort(builder);
        let m = self.component_count();
        debug_assert!(sa[..m].iter().all(|&v| v as usize >= self.ordinary));
        debug_assert!(lcp[..m].iter().all(|&l| l == 0) || self.ordinary == 0);
        let suffix_len = self.forest.depth[..self.ordinary].iter().map(|d| d + 1).collect();
        TreeSuffixArray::from_parts(sa[m..].to_vec(), lcp[m..].to_vec(), suffix_len)
    }
}

/// Joins two trees under terminals `$1 < $2`.
pub fn merge_trees(t1: &Tree, t2: &Tree) -> MergedTree {
    MergedTree::new(&[t1, t2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_tree, Alphabet};

    #[test]
    fn two_single_nodes() {
        let mut a = Alphabet::new();
        let t = parse_tree("a", &mut a).unwrap();
        let m = merge_trees(&t, &t);
        assert_eq!(m.len(), 4);
        assert_eq!(m.ordinary_len(), 2);
        assert_eq!(m.parent(0), Some(m.terminal(0)));
        assert_eq!(m.parent(1), Some(m.terminal(1)));
        assert_eq!(m.parent(m.terminal(0)), None);
        assert!(m.symbol(m.terminal(0)) < m.symbol(m.terminal(1)));
        assert!(m.symbol(m.terminal(1)) < m.symbol(0));
        assert_eq!((m.source(0), m.source(1)), (0, 1));
    }

    #[test]
    fn component_sizes() {
        let mut a = Alphabet::new();
        let t1 = parse_tree("a(b(c),b)", &mut a).unwrap();
        let t2 = parse_tree("b(a,c,d)", &mut a).unwrap();
        let m = merge_trees(&t1, &t2);
        assert_eq!(m.len(), t1.len() + t2.len() + 2);
        assert_eq!(m.component_len(0) + 1, t1.len() + 1);
        assert_eq!(m.component_len(1), t2.len());
        assert_eq!(m.node_of(1, 0), 4);
        // every ordinary suffix ends at its own terminal
        for v in 0..m.ordinary_len() {
            let mut u = v;
            while let Some(p) = m.parent(u) {
                u = p;
            }
            assert_eq!(u, m.terminal(m.source(v)));
        }
    }

    #[test]
    fn suffix_array_drops_terminals() {
        let mut a = Alphabet::new();
        let t1 = parse_tree("a(b,b)", &mut a).unwrap();
        let t2 = parse_tree("a(b)", &mut a).unwrap();
        let m = merge_trees(&t1, &t2);
        for builder in [Builder::Linear, Builder::Reference] {
            let esa = m.suffix_array(builder);
            assert_eq!(esa.len(), 5);
            // a$1 (0) < a$2 (3) < ba$1 (1) = ba$1 (2) < ba$2 (4)
            assert_eq!(esa.sa(), &[0, 3, 1, 2, 4]);
            assert_eq!(esa.lcp(), &[1, 0, 3, 2, -1]);
            assert_eq!(esa.suffix_len(), &[2, 3, 3, 2, 3]);
        }
    }
}
