use super::matching::{self, MatchStats, SkipStrategy};
use super::SupportSet;
use crate::esa::{Builder, TreeSuffixArray};
use crate::kernel::{KernelParams, MergedTree, WeightTable};
use crate::tree::{Label, LevelAncestorIndex, NodeId, Tree, NIL};

/// Suffix tree of all support trees, simulated over their joint suffix array.
///
/// Nodes are lcp-intervals plus one leaf per suffix that ends strictly below
/// its enclosing interval; identical suffixes of one support tree share an
/// interval. Node ids are in breadth-first order from the root (id 0), so
/// the shallow nodes every match passes through are packed together.
#[derive(Debug, Clone)]
pub struct MasterIndex {
    pub(crate) master: MergedTree,
    pub(crate) esa: TreeSuffixArray,
    pub(crate) weights: WeightTable,
    bias: f64,
    pub(crate) lb: Vec<u32>,
    pub(crate) rb: Vec<u32>,
    pub(crate) depth: Vec<u32>,
    pub(crate) parent: Vec<u32>,
    child_start: Vec<u32>,
    child_list: Vec<u32>,
    /// Branching symbol of each entry of `child_list`.
    child_symbol: Vec<u32>,
    /// First entry of each node's children that branches on an ordinary
    /// symbol; terminal symbols sort before all ordinary ones.
    child_ordinary: Vec<u32>,
    /// For small alphabets, `table[v * width + (symbol - base)]` is the child
    /// of `v` on ordinary `symbol`, or `NIL`.
    child_table: Vec<u32>,
    table_width: u32,
    /// Master node holding a node's first edge label (`NIL` for the root).
    pub(crate) head: Vec<u32>,
    pub(crate) wv: Vec<f64>,
    pub(crate) val: Vec<f64>,
    link: Vec<u32>,
    /// Node each rank belongs to directly.
    owner: Vec<u32>,
}

/// Alphabets up to this many ordinary symbols get a direct child table.
const CHILD_TABLE_WIDTH: u32 = 16;

struct Open {
    depth: u32,
    lb: u32,
    children: Vec<u32>,
    owned: Vec<u32>,
}

#[derive(Default)]
struct Nodes {
    lb: Vec<u32>,
    rb: Vec<u32>,
    depth: Vec<u32>,
    children: Vec<Vec<u32>>,
}

impl Nodes {
    fn push(&mut self, lb: u32, rb: u32, depth: u32, children: Vec<u32>) -> u32 {
        self.lb.push(lb);
        self.rb.push(rb);
        self.depth.push(depth);
        self.children.push(children);
        (self.lb.len() - 1) as u32
    }
}

impl MasterIndex {
    pub fn build(sv: &SupportSet, params: KernelParams) -> MasterIndex {
        Self::build_with(sv, params, Builder::Linear)
    }

    pub fn build_with(sv: &SupportSet, params: KernelParams, builder: Builder) -> MasterIndex {
        let trees: Vec<&Tree> = sv.trees().collect();
        let master = MergedTree::new(&trees);
        let esa = master.suffix_array(builder);
        let n = esa.len();
        let sa = esa.sa();
        let lcp = esa.lcp();
        let suffix_len = esa.suffix_len();

        // One sweep over the lcp array enumerates the intervals bottom-up.
        let mut nodes = Nodes::default();
        let mut owner = vec![NIL; n];
        let mut stack = vec![Open {
            depth: 0,
            lb: 0,
            children: Vec::new(),
            owned: Vec::new(),
        }];
        let finish = |o: Open, rb: u32, nodes: &mut Nodes, owner: &mut [u32]| {
            let id = nodes.push(o.lb, rb, o.depth, o.children);
            for r in o.owned {
                owner[r as usize] = id;
            }
            id
        };
        for i in 1..=n {
            let r = (i - 1) as u32;
            let h = if i < n { lcp[i - 1] as u32 } else { 0 };
            if h > stack.last().unwrap().depth {
                stack.push(Open {
                    depth: h,
                    lb: r,
                    children: Vec::new(),
                    owned: Vec::new(),
                });
            }
            // Rank r goes to the current top, as a leaf unless it ends there.
            let len = suffix_len[sa[r as usize] as usize];
            let top = stack.last_mut().unwrap();
            if len == top.depth {
                top.owned.push(r);
            } else {
                let leaf = nodes.push(r, r, len, Vec::new());
                owner[r as usize] = leaf;
                top.children.push(leaf);
            }

            let mut lb = r;
            let mut last = None;
            while h < stack.last().unwrap().depth {
                let o = stack.pop().unwrap();
                lb = o.lb;
                let id = finish(o, r, &mut nodes, &mut owner);
                let top = stack.last_mut().unwrap();
                if h <= top.depth {
                    top.children.push(id);
                } else {
                    last = Some(id);
                }
            }
            if let Some(id) = last {
                stack.push(Open {
                    depth: h,
                    lb,
                    children: vec![id],
                    owned: Vec::new(),
                });
            }
        }
        let root = stack.pop().unwrap();
        debug_assert!(stack.is_empty());
        finish(root, n as u32 - 1, &mut nodes, &mut owner);

        let count = nodes.lb.len();
        let mut parent = vec![NIL; count];
        let mut child_start = Vec::with_capacity(count + 1);
        let mut child_list = Vec::with_capacity(count);
        child_start.push(0u32);
        for (v, ch) in nodes.children.iter().enumerate() {
            for &c in ch {
                parent[c as usize] = v as u32;
            }
            child_list.extend_from_slice(ch);
            child_start.push(child_list.len() as u32);
        }

        let forest = LevelAncestorIndex::from_parents(&master.forest().parent, &master.forest().depth);
        let mut head = vec![NIL; count];
        for v in 0..count {
            if parent[v] != NIL {
                let p = parent[v] as usize;
                head[v] = forest.ancestor(sa[nodes.lb[v] as usize], nodes.depth[p]);
            }
        }
        let child_symbol: Vec<u32> = child_list
            .iter()
            .map(|&c| master.symbol(head[c as usize] as usize))
            .collect();

        let alphas: Vec<f64> = sv.alphas().collect();
        let mut wv = vec![0.0; count];
        for r in 0..n {
            wv[owner[r] as usize] += alphas[master.source(sa[r] as usize)];
        }
        for v in 0..count {
            if parent[v] != NIL {
                wv[parent[v] as usize] += wv[v];
            }
        }

        let max_len = nodes.depth.iter().copied().max().unwrap_or(0) as usize;
        let weights = WeightTable::new(params, max_len);
        let mut val = vec![0.0; count];
        for v in (0..count).rev() {
            if parent[v] != NIL {
                let p = parent[v] as usize;
                val[v] = val[p] + (weights.get(nodes.depth[v] as usize) - weights.get(nodes.depth[p] as usize)) * wv[v];
            }
        }

        let link = suffix_links(&master, &esa, &nodes.lb, &nodes.depth, &parent, &owner);

        // Renumber breadth-first.
        let mut order = Vec::with_capacity(count);
        order.push(count as u32 - 1);
        let mut k = 0;
        while k < order.len() {
            let v = order[k] as usize;
            order.extend_from_slice(&child_list[child_start[v] as usize..child_start[v + 1] as usize]);
            k += 1;
        }
        let mut new_id = vec![0u32; count];
        for (u, &v) in order.iter().enumerate() {
            new_id[v as usize] = u as u32;
        }
        let renumber = |x: u32| if x == NIL { NIL } else { new_id[x as usize] };
        let permute = |xs: &[u32]| order.iter().map(|&v| xs[v as usize]).collect::<Vec<u32>>();
        let permute_f = |xs: &[f64]| order.iter().map(|&v| xs[v as usize]).collect::<Vec<f64>>();
        let mut new_start = Vec::with_capacity(count + 1);
        let mut new_list = Vec::with_capacity(count);
        let mut new_symbol = Vec::with_capacity(count);
        new_start.push(0u32);
        for &v in &order {
            let range = child_start[v as usize] as usize..child_start[v as usize + 1] as usize;
            new_list.extend(child_list[range.clone()].iter().map(|&c| new_id[c as usize]));
            new_symbol.extend_from_slice(&child_symbol[range]);
            new_start.push(new_list.len() as u32);
        }

        let child_ordinary: Vec<u32> = (0..count)
            .map(|u| {
                let (lo, hi) = (new_start[u] as usize, new_start[u + 1] as usize);
                (lo + new_symbol[lo..hi].partition_point(|&x| master.is_terminal_symbol(x))) as u32
            })
            .collect();

        let base = master.symbol_of(Label(0));
        let width = new_symbol
            .iter()
            .filter(|&&x| x >= base)
            .map(|&x| x - base + 1)
            .max()
            .unwrap_or(0);
        let child_table = if width <= CHILD_TABLE_WIDTH {
            let mut table = vec![NIL; count * width as usize];
            for u in 0..count {
                for k in child_ordinary[u] as usize..new_start[u + 1] as usize {
                    table[u * width as usize + (new_symbol[k] - base) as usize] = new_list[k];
                }
            }
            table
        } else {
            Vec::new()
        };

        MasterIndex {
            lb: permute(&nodes.lb),
            rb: permute(&nodes.rb),
            depth: permute(&nodes.depth),
            parent: order.iter().map(|&v| renumber(parent[v as usize])).collect(),
            child_start: new_start,
            child_list: new_list,
            child_symbol: new_symbol,
            child_ordinary,
            child_table,
            table_width: width,
            head: permute(&head),
            wv: permute_f(&wv),
            val: permute_f(&val),
            link: order.iter().map(|&v| renumber(link[v as usize])).collect(),
            owner: owner.iter().map(|&v| new_id[v as usize]).collect(),
            master,
            esa,
            weights,
            bias: sv.bias(),
        }
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn master(&self) -> &MergedTree {
        &self.master
    }

    pub fn esa(&self) -> &TreeSuffixArray {
        &self.esa
    }

    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    /// Number of suffix-tree nodes, leaves included.
    pub fn node_count(&self) -> usize {
        self.lb.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    /// String depth of a node.
    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v] as usize
    }

    /// Inclusive range of suffix-array ranks below a node.
    pub fn rank_range(&self, v: NodeId) -> (usize, usize) {
        (self.lb[v] as usize, self.rb[v] as usize)
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        match self.parent[v] {
            NIL => None,
            p => Some(p as NodeId),
        }
    }

    /// Children in increasing order of their branching symbol.
    pub fn children(&self, v: NodeId) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        let range = self.child_start[v] as usize..self.child_start[v + 1] as usize;
        self.child_list[range].iter().map(|&c| c as NodeId)
    }

    /// α-weighted number of suffixes below a node.
    pub fn wv(&self, v: NodeId) -> f64 {
        self.wv[v]
    }

    /// Sum over the node's proper prefixes `s` (root excluded) of
    /// `λ^|s| · Σ_i α_i · num_i(s)`.
    pub fn val(&self, v: NodeId) -> f64 {
        self.val[v]
    }

    /// Node spelling this node's string without its first symbol. `None` for
    /// the root and for strings that run through a terminal after one symbol.
    pub fn suffix_link(&self, v: NodeId) -> Option<NodeId> {
        match self.link[v] {
            NIL => None,
            w => Some(w as NodeId),
        }
    }

    /// Node that holds rank `r` directly.
    pub fn owner_of_rank(&self, r: usize) -> NodeId {
        self.owner[r] as NodeId
    }

    /// The node's string as merged-forest symbols.
    pub fn node_string(&self, v: NodeId) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.depth[v] as usize);
        let mut u = self.esa.node_at(self.lb[v] as usize);
        for _ in 0..self.depth[v] {
            out.push(self.master.symbol(u));
            match self.master.parent(u) {
                Some(p) => u = p,
                None => break,
            }
        }
        out
    }

    /// Child of `v` whose edge starts with the ordinary symbol `symbol`.
    #[inline]
    pub(crate) fn child(&self, v: u32, symbol: u32) -> Option<u32> {
        if !self.child_table.is_empty() {
            let k = symbol.wrapping_sub(self.master.symbol_of(Label(0)));
            if k >= self.table_width {
                return None;
            }
            return match self.child_table[v as usize * self.table_width as usize + k as usize] {
                NIL => None,
                c => Some(c),
            };
        }
        let lo = self.child_ordinary[v as usize] as usize;
        let hi = self.child_start[v as usize + 1] as usize;
        let symbols = &self.child_symbol[lo..hi];
        symbols.binary_search(&symbol).ok().map(|k| self.child_list[lo + k])
    }

    #[inline]
    pub(crate) fn link_raw(&self, v: u32) -> u32 {
        self.link[v as usize]
    }

    #[inline]
    pub(crate) fn symbol_of(&self, label: Label) -> u32 {
        self.master.symbol_of(label)
    }

    pub fn matching_statistics(&self, t: &Tree) -> MatchStats {
        matching::run(self, t, SkipStrategy::SuffixLink)
    }

    pub fn matching_statistics_with(&self, t: &Tree, strategy: SkipStrategy) -> MatchStats {
        matching::run(self, t, strategy)
    }

    /// `bias + Σ_i α_i K(T_i, t)`.
    pub fn predict(&self, t: &Tree) -> f64 {
        self.predict_from(&self.matching_statistics(t))
    }

    pub fn predict_with(&self, t: &Tree, strategy: SkipStrategy) -> f64 {
        self.predict_from(&self.matching_statistics_with(t, strategy))
    }

    /// Prediction from precomputed matching statistics: every input node adds
    /// the values of all prefixes of its matched string.
    pub fn predict_from(&self, stats: &MatchStats) -> f64 {
        let w = self.weights.as_slice();
        let mut total = 0.0;
        for i in 0..stats.len() {
            let (y, l) = stats.locus(i);
            if l == 0 {
                continue;
            }
            let full = if l == self.depth[y] as usize {
                y
            } else {
                self.parent[y] as usize
            };
            total += self.val[full] + (w[l] - w[self.depth[full] as usize]) * self.wv[y];
        }
        self.bias + total
    }
}

fn suffix_links(
    master: &MergedTree,
    esa: &TreeSuffixArray,
    lb: &[u32],
    depth: &[u32],
    parent: &[u32],
    owner: &[u32],
) -> Vec<u32> {
    let count = lb.len();
    let root = (count - 1) as u32;
    let levels = (usize::BITS - count.leading_zeros()) as usize;
    let mut up = vec![parent
        .iter()
        .map(|&p| if p == NIL { root } else { p })
        .collect::<Vec<u32>>()];
    for k in 1..levels {
        let prev = &up[k - 1];
        let next = prev.iter().map(|&a| prev[a as usize]).collect();
        up.push(next);
    }

    let mut link = vec![NIL; count];
    for v in 0..count {
        let k = depth[v];
        if k == 0 {
            continue;
        }
        if k == 1 {
            link[v] = root;
            continue;
        }
        let r = esa.node_at(lb[v] as usize);
        let pr = master.parent(r).expect("ordinary nodes hang below a terminal");
        if master.is_terminal(pr) {
            continue;
        }
        let mut x = owner[esa.rank_of(pr)];
        for table in up.iter().rev() {
            let a = table[x as usize];
            if depth[a as usize] >= k - 1 {
                x = a;
            }
        }
        debug_assert_eq!(depth[x as usize], k - 1);
        link[v] = x;
    }
    link
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predict::predict_direct;
    use crate::tree::{parse_tree, random_tree, Alphabet};

    fn support(specs: &[(&str, f64)], alphabet: &mut Alphabet) -> SupportSet {
        let items = specs
            .iter()
            .map(|&(s, a)| (parse_tree(s, alphabet).unwrap(), a))
            .collect();
        SupportSet::new(items, 0.0).unwrap()
    }

    fn random_support(seed: u64, m: usize, sigma: usize) -> SupportSet {
        let items = (0..m)
            .map(|k| {
                let n = 1 + (seed as usize * 31 + k * 17) % 40;
                let alpha = ((seed + k as u64) % 9) as f64 / 2.0 - 2.0;
                (random_tree(n, sigma, seed * 1000 + k as u64).unwrap(), alpha)
            })
            .collect();
        SupportSet::new(items, 0.0).unwrap()
    }

    #[test]
    fn single_node_support() {
        let mut a = Alphabet::new();
        let idx = MasterIndex::build(&support(&[("a", 1.0)], &mut a), KernelParams::new(1.0).unwrap());
        assert_eq!(idx.node_count(), 2);
        let root = idx.root();
        let leaf = idx.children(root).next().unwrap();
        assert_eq!(idx.depth(leaf), 2);
        assert_eq!(idx.wv(leaf), 1.0);
        assert_eq!(idx.wv(root), 1.0);
        assert_eq!(idx.suffix_link(leaf), None);
    }

    #[test]
    fn worked_example() {
        let mut a = Alphabet::new();
        let sv = support(&[("a(b)", 1.0), ("a", 2.0)], &mut a);
        let idx = MasterIndex::build(&sv, KernelParams::new(1.0).unwrap());
        let t = parse_tree("a(b)", &mut a).unwrap();
        assert!((idx.predict(&t) - 5.0).abs() < 1e-12);
        for strategy in [SkipStrategy::SuffixLink, SkipStrategy::Redescent] {
            assert!((idx.predict_with(&t, strategy) - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_alphas_give_bias() {
        let mut a = Alphabet::new();
        let items = vec![
            (parse_tree("a(b,c)", &mut a).unwrap(), 0.0),
            (parse_tree("b(a)", &mut a).unwrap(), 0.0),
        ];
        let sv = SupportSet::new(items, 0.75).unwrap();
        let idx = MasterIndex::build(&sv, KernelParams::new(0.5).unwrap());
        assert!((0..idx.node_count()).all(|v| idx.wv(v) == 0.0 && idx.val(v) == 0.0));
        assert_eq!(idx.predict(&parse_tree("a(b(c))", &mut a).unwrap()), 0.75);
    }

    #[test]
    fn structure_invariants() {
        for seed in 0..40 {
            let sv = random_support(seed, 1 + seed as usize % 6, 1 + seed as usize % 3);
            let idx = MasterIndex::build(&sv, KernelParams::new(0.5).unwrap());
            let n = idx.esa().len();
            assert!(idx.node_count() <= 2 * n);

            let root = idx.root();
            assert_eq!(idx.rank_range(root), (0, n - 1));
            assert_eq!(idx.depth(root), 0);
            let total: f64 = sv.items().iter().map(|(t, a)| a * t.len() as f64).sum();
            assert!((idx.wv(root) - total).abs() <= 1e-9 * (1.0 + total.abs()));

            let alphas: Vec<f64> = sv.alphas().collect();
            for v in 0..idx.node_count() {
                let (lb, rb) = idx.rank_range(v);
                // children partition the range at greater depth
                let mut next = lb;
                let mut owned = 0.0;
                for c in idx.children(v) {
                    let (clb, crb) = idx.rank_range(c);
                    assert!(clb >= next && idx.depth(c) > idx.depth(v));
                    for r in next..clb {
                        assert_eq!(idx.owner_of_rank(r), v);
                        owned += 1.0;
                    }
                    assert_eq!(idx.parent(c), Some(v));
                    next = crb + 1;
                }
                for r in next..=rb {
                    assert_eq!(idx.owner_of_rank(r), v);
                    owned += 1.0;
                }
                if idx.children(v).len() == 0 {
                    assert!(owned >= 1.0);
                }
                // wv by direct scan of the rank range
                let scan: f64 = (lb..=rb)
                    .map(|r| alphas[idx.master().source(idx.esa().node_at(r))])
                    .sum();
                assert!((idx.wv(v) - scan).abs() <= 1e-9 * (1.0 + scan.abs()));

                // the node string is shared by all ranks in range
                let s = idx.node_string(v);
                assert_eq!(s.len(), idx.depth(v));
                for r in lb..=rb {
                    let mut u = idx.esa().node_at(r);
                    for &x in &s {
                        assert_eq!(idx.master().symbol(u), x);
                        if let Some(p) = idx.master().parent(u) {
                            u = p;
                        }
                    }
                }

                if let Some(w) = idx.suffix_link(v) {
                    assert_eq!(idx.depth(w) + 1, idx.depth(v));
                    assert_eq!(idx.node_string(w), s[1..]);
                } else if v != root {
                    // only strings continuing into a terminal lack a link
                    assert!(s.len() >= 2 && idx.master().is_terminal(u_at(&idx, v, 1)));
                }
            }
        }
    }

    fn u_at(idx: &MasterIndex, v: NodeId, k: usize) -> NodeId {
        let mut u = idx.esa().node_at(idx.rank_range(v).0);
        for _ in 0..k {
            u = idx.master().parent(u).unwrap();
        }
        u
    }

    #[test]
    fn matches_direct_prediction() {
        for seed in 0..40 {
            let sv = random_support(seed, 1 + seed as usize % 8, 1 + seed as usize % 4);
            let lambda = [0.25, 0.5, 1.0][seed as usize % 3];
            let params = KernelParams::new(lambda).unwrap();
            for builder in [Builder::Linear, Builder::Reference] {
                let idx = MasterIndex::build_with(&sv, params, builder);
                let t = random_tree(1 + seed as usize * 3 % 60, 1 + seed as usize % 4, seed + 99).unwrap();
                let direct = predict_direct(&sv, &t, params);
                let fast = idx.predict(&t);
                assert!(
                    (fast - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                    "{fast} vs {direct}"
                );
            }
        }
    }
}
