//! Linear-time suffix array and lcp construction for trees (skew recursion).
//!
//! Suffixes read upward, so node depth plays the role a string position plays
//! in the difference-cover construction for strings:
//!
//! 1. Pick the depth class `d` (mod 3) holding the most nodes. Nodes in the
//!    other two classes form the sample. Each sample node is named by the rank
//!    of its first `K >= 3` labels (`K` as large as fits one machine word,
//!    exactly three for wide labels); the contracted forest links every sample
//!    node to its third ancestor, which lies in the same class. The contracted
//!    suffix of a sample node lists the names found every third label along
//!    its original suffix, so sorting the contracted forest (recursively,
//!    unless the names already decide the order) sorts the sample.
//! 2. Non-sample nodes have a sample parent and are radix sorted by
//!    `(label, rank of parent)`.
//! 3. The two sorted lists are merged; a sample/non-sample comparison needs at
//!    most two labels plus one sample-rank comparison.
//! 4. Lcp values come back from the recursion in contracted units together
//!    with the first mismatching contracted labels. Unpacking those names
//!    gives exact lcp values, in original labels, between rank-adjacent sample
//!    suffixes. Any adjacent pair of the merged order reaches two sample nodes
//!    after at most two label comparisons, and their lcp is a range minimum
//!    over those values.
//!
//! Identical suffixes come out of the recursion in an unspecified order and
//! are put in node-id order by a final bucket pass.

use std::cmp::Ordering;

use super::{reference, Forest};
use crate::tree::NIL;

/// Forests at or below this size are sorted by the reference builder.
pub(crate) const BASE_CASE: usize = 16;

pub(crate) fn build(f: &Forest) -> (Vec<u32>, Vec<i32>) {
    build_with_levels(f, &mut Vec::new())
}

/// As [`build`], also recording the forest size at every recursion level.
pub(crate) fn build_with_levels(f: &Forest, levels: &mut Vec<usize>) -> (Vec<u32>, Vec<i32>) {
    let Sorted { mut sa, lcp, .. } = skew(f, false, levels);
    canonicalize_ties(f, &mut sa, &lcp);
    (sa, lcp)
}

/// Sorted suffixes of one recursion level. `mis[i]` holds the labels of
/// `sa[i]` and `sa[i + 1]` at offset `lcp[i]`, 0 where a suffix has ended.
/// It is only filled when asked for.
pub(crate) struct Sorted {
    pub sa: Vec<u32>,
    pub lcp: Vec<i32>,
    pub mis: Vec<[u32; 2]>,
}

pub(crate) fn skew(f: &Forest, want_mis: bool, levels: &mut Vec<usize>) -> Sorted {
    let n = f.len();
    levels.push(n);
    if n <= BASE_CASE {
        return base_case(f, want_mis);
    }
    let d = choose_depth_class(&f.depth);
    let sample = Sample::new(f, d);
    let names = name_sample(f, &sample);

    let (sa1, adjacent) = if let Some(adjacent) = names.adjacent {
        (names.order, adjacent)
    } else {
        let sub = skew(&build_contracted(f, &sample, &names.rank), true, levels);
        let adjacent = adjacent_from_recursion(f, &sample, &names, &sub);
        (sub.sa, adjacent)
    };
    let mut rsa1 = vec![0u32; sa1.len()];
    for (i, &s) in sa1.iter().enumerate() {
        rsa1[s as usize] = i as u32;
    }

    let sa2 = sort_nonsample(f, d, &sample, &rsa1);
    let (sa, probes) = merge_sample_nonsample(f, &sample, &sa1, &sa2);
    let (lcp, mis) = lift_lcp(f, &sa, &probes, &adjacent, want_mis);
    Sorted { sa, lcp, mis }
}

fn base_case(f: &Forest, want_mis: bool) -> Sorted {
    let (sa, lcp) = reference::build(f);
    let mut mis = Vec::new();
    if want_mis {
        for i in 0..sa.len().saturating_sub(1) {
            let (mut a, mut b) = (sa[i], sa[i + 1]);
            for _ in 0..lcp[i] {
                a = f.parent[a as usize];
                b = f.parent[b as usize];
            }
            mis.push([label_or_end(f, a), label_or_end(f, b)]);
        }
        mis.push([0, 0]);
    }
    Sorted { sa, lcp, mis }
}

#[inline]
fn label_or_end(f: &Forest, v: u32) -> u32 {
    if v == NIL {
        0
    } else {
        f.label[v as usize]
    }
}

/// Depth class (mod 3) with the most nodes; ties go to the smallest class.
pub(crate) fn choose_depth_class(depth: &[u32]) -> u32 {
    let mut count = [0usize; 3];
    for &x in depth {
        count[(x % 3) as usize] += 1;
    }
    let mut best = 0;
    for c in 1..3 {
        if count[c] > count[best] {
            best = c;
        }
    }
    best as u32
}

/// Nodes whose depth is not in the chosen class, in increasing node id.
pub(crate) struct Sample {
    pub nodes: Vec<u32>,
    /// Sample index of each forest node, `NIL` for non-sample nodes.
    pub index: Vec<u32>,
}

impl Sample {
    pub fn new(f: &Forest, d: u32) -> Sample {
        let mut nodes = Vec::with_capacity(f.len() * 2 / 3 + 1);
        let mut index = vec![NIL; f.len()];
        for (v, &x) in f.depth.iter().enumerate() {
            if x % 3 != d {
                index[v] = nodes.len() as u32;
                nodes.push(v as u32);
            }
        }
        Sample { nodes, index }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Layout of a packed prefix: `width` labels of `bits` bits each, the first
/// label in the most significant digit and 0 past the end of the suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Packing {
    pub bits: u32,
    pub width: u32,
}

impl Packing {
    pub fn for_labels(max_label: u32) -> Packing {
        let bits = (u32::BITS - max_label.leading_zeros()).max(1);
        let width = (u64::BITS / bits).max(3);
        Packing { bits, width }
    }

    fn total_bits(self) -> u32 {
        self.bits * self.width
    }

    /// Number of leading labels two packed prefixes share.
    #[inline]
    fn common(self, x: u128, y: u128) -> u32 {
        let z = x ^ y;
        if z == 0 {
            self.width
        } else {
            (z.leading_zeros() - (u128::BITS - self.total_bits())) / self.bits
        }
    }

    #[inline]
    fn digit(self, key: u128, k: u32) -> u32 {
        let mask = (1u128 << self.bits) - 1;
        ((key >> (self.bits * (self.width - 1 - k))) & mask) as u32
    }
}

/// Names of the sample nodes.
pub(crate) struct Names {
    /// Sample indices sorted by their packed prefix.
    pub order: Vec<u32>,
    /// Dense rank (from 1) of each sample index's prefix.
    pub rank: Vec<u32>,
    /// Packed prefix of each rank; entry 0 is the empty prefix.
    pub keys: Vec<u128>,
    pub packing: Packing,
    /// Present when equal names only ever belong to identical suffixes, so
    /// the name order already is the suffix order.
    pub adjacent: Option<Adjacent>,
}

/// Ranks every sample node by its first `K` labels.
pub(crate) fn name_sample(f: &Forest, sample: &Sample) -> Names {
    let max_label = f.label.iter().copied().max().unwrap_or(0);
    let packing = Packing::for_labels(max_label);
    if packing.total_bits() > u64::BITS {
        return rank_sample_triples(f, sample, packing.bits);
    }
    let keys = packed_prefixes(f, packing);
    let mut pairs: Vec<(u64, u32)> = sample
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &v)| (keys[v as usize], i as u32))
        .collect();
    radix_sort_pairs(&mut pairs, packing.total_bits());

    let sorted = pairs.into_iter().map(|(k, i)| (k as u128, i));
    finish_names(f, sample, packing, sorted)
}

/// Dense ranks from sample indices listed in key order. Adjacent lcp values
/// are collected on the way in case the names turn out to decide the order.
fn finish_names(
    f: &Forest,
    sample: &Sample,
    packing: Packing,
    sorted: impl ExactSizeIterator<Item = (u128, u32)>,
) -> Names {
    let ns = sorted.len();
    let mut order = Vec::with_capacity(ns);
    let mut rank = vec![0u32; ns];
    let mut by_rank = vec![0u128];
    let mut lcp = Vec::with_capacity(ns);
    let mut mis = Vec::with_capacity(ns);
    let mut resolved = true;
    let mut prev: Option<(u128, u32)> = None;
    for (key, i) in sorted {
        match prev {
            Some((k, _)) if k != key => {
                let c = packing.common(k, key);
                lcp.push(c);
                mis.push([packing.digit(k, c), packing.digit(key, c)]);
                by_rank.push(key);
            }
            Some((_, j)) => {
                let (u, v) = (sample.nodes[j as usize], sample.nodes[i as usize]);
                if resolved {
                    resolved = same_suffix(f, u, v, packing.width);
                }
                lcp.push(f.depth[v as usize] + 1);
                mis.push([0, 0]);
            }
            None => by_rank.push(key),
        }
        order.push(i);
        rank[i as usize] = (by_rank.len() - 1) as u32;
        prev = Some((key, i));
    }
    lcp.push(0);
    mis.push([0, 0]);
    Names {
        order,
        rank,
        keys: by_rank,
        packing,
        adjacent: resolved.then_some(Adjacent { lcp, mis }),
    }
}

/// Whether two nodes whose first `width` labels agree have identical
/// suffixes, as far as a cheap check can tell: either the suffixes end within
/// those labels, or the two paths join within `width` steps.
fn same_suffix(f: &Forest, u: u32, v: u32, width: u32) -> bool {
    let d = f.depth[u as usize];
    if d != f.depth[v as usize] {
        return false;
    }
    if d < width {
        return true;
    }
    let (mut a, mut b) = (u, v);
    for _ in 0..width {
        if a == b {
            return true;
        }
        a = f.parent[a as usize];
        b = f.parent[b as usize];
    }
    a == b
}

/// Packed first `width` labels of every node, each computed from its
/// parent's.
fn packed_prefixes(f: &Forest, p: Packing) -> Vec<u64> {
    let n = f.len();
    let top = p.bits * (p.width - 1);
    let mut keys = vec![0u64; n];
    let set = |v: usize, keys: &mut [u64]| {
        let own = (f.label[v] as u64) << top;
        keys[v] = match f.parent[v] {
            NIL => own,
            q => own | (keys[q as usize] >> p.bits),
        };
    };
    let parents_first = (0..n).all(|v| {
        let q = f.parent[v];
        q == NIL || (q as usize) < v || f.parent[q as usize] == NIL
    });
    if parents_first {
        for v in (0..n).filter(|&v| f.parent[v] == NIL) {
            set(v, &mut keys);
        }
        for v in (0..n).filter(|&v| f.parent[v] != NIL) {
            set(v, &mut keys);
        }
    } else {
        let max_depth = f.depth.iter().copied().max().unwrap_or(0);
        let all: Vec<u32> = (0..n as u32).collect();
        for v in sort_by_key(&all, |v| f.depth[v as usize], max_depth) {
            set(v as usize, &mut keys);
        }
    }
    keys
}

/// Stable LSD radix sort on the low `bits` bits of the keys.
fn radix_sort_pairs(pairs: &mut Vec<(u64, u32)>, bits: u32) {
    let digit = if pairs.len() >= 1 << 16 { 16 } else { 8 };
    let buckets = 1usize << digit;
    let mask = (buckets - 1) as u64;
    let mut scratch = vec![(0u64, 0u32); pairs.len()];
    let mut count = vec![0u32; buckets];
    let mut shift = 0;
    while shift < bits {
        count.iter_mut().for_each(|c| *c = 0);
        for &(k, _) in pairs.iter() {
            count[((k >> shift) & mask) as usize] += 1;
        }
        if count.iter().any(|&c| c as usize == pairs.len()) {
            shift += digit;
            continue;
        }
        let mut sum = 0;
        for c in count.iter_mut() {
            let x = *c;
            *c = sum;
            sum += x;
        }
        for &pair in pairs.iter() {
            let slot = &mut count[((pair.0 >> shift) & mask) as usize];
            scratch[*slot as usize] = pair;
            *slot += 1;
        }
        std::mem::swap(pairs, &mut scratch);
        shift += digit;
    }
}

/// Naming for wide labels: radix sorts the sample by
/// `(label(v), label(anc(v,1)), label(anc(v,2)))`, missing ancestors keyed 0.
pub(crate) fn rank_sample_triples(f: &Forest, sample: &Sample, bits: u32) -> Names {
    let ns = sample.len();
    let mut keys = vec![[0u32; 3]; ns];
    let mut bound = 0;
    for (i, &v) in sample.nodes.iter().enumerate() {
        let mut u = v;
        for slot in keys[i].iter_mut() {
            if u == NIL {
                break;
            }
            *slot = f.label[u as usize];
            bound = bound.max(*slot);
            u = f.parent[u as usize];
        }
    }
    let identity: Vec<u32> = (0..ns as u32).collect();
    let order = sort_by_key(&identity, |i| keys[i as usize][2], bound);
    let order = sort_by_key(&order, |i| keys[i as usize][1], bound);
    let order = sort_by_key(&order, |i| keys[i as usize][0], bound);

    let packing = Packing { bits, width: 3 };
    let pack = |k: [u32; 3]| ((k[0] as u128) << (2 * bits)) | ((k[1] as u128) << bits) | k[2] as u128;
    let sorted = order.iter().map(|&i| (pack(keys[i as usize]), i));
    finish_names(f, sample, packing, sorted)
}

/// Contracted forest over the sample: labels are name ranks and each node's
/// parent is its third ancestor.
pub(crate) fn build_contracted(f: &Forest, sample: &Sample, rank: &[u32]) -> Forest {
    let ns = sample.len();
    let mut parent = Vec::with_capacity(ns);
    let mut depth = Vec::with_capacity(ns);
    for &v in &sample.nodes {
        let mut u = v;
        for _ in 0..3 {
            if u == NIL {
                break;
            }
            u = f.parent[u as usize];
        }
        parent.push(if u == NIL { NIL } else { sample.index[u as usize] });
        depth.push(f.depth[v as usize] / 3);
    }
    Forest {
        parent,
        label: rank.to_vec(),
        depth,
    }
}

/// Lcp in original labels between rank-adjacent sample suffixes, with the
/// labels found at that offset.
pub(crate) struct Adjacent {
    pub lcp: Vec<u32>,
    pub mis: Vec<[u32; 2]>,
}

/// Converts the contracted lcp array into original labels: `m` matching
/// names cover `3m` labels, and the first mismatching pair of names shares a
/// few more.
fn adjacent_from_recursion(f: &Forest, sample: &Sample, names: &Names, sub: &Sorted) -> Adjacent {
    let ns = sub.sa.len();
    let mut lcp = Vec::with_capacity(ns);
    let mut mis = Vec::with_capacity(ns);
    for j in 0..ns.saturating_sub(1) {
        let [x, y] = sub.mis[j];
        if x == 0 && y == 0 {
            lcp.push(f.depth[sample.nodes[sub.sa[j] as usize] as usize] + 1);
            mis.push([0, 0]);
        } else {
            let (c, pair) = unpack_mismatch(names, x, y);
            lcp.push(3 * sub.lcp[j] as u32 + c);
            mis.push(pair);
        }
    }
    lcp.push(0);
    mis.push([0, 0]);
    Adjacent { lcp, mis }
}

/// Shared leading labels of two different names, and the labels after them.
#[inline]
fn unpack_mismatch(names: &Names, x: u32, y: u32) -> (u32, [u32; 2]) {
    let p = names.packing;
    let (kx, ky) = (names.keys[x as usize], names.keys[y as usize]);
    let c = p.common(kx, ky);
    (c, [p.digit(kx, c), p.digit(ky, c)])
}

/// Orders the non-sample nodes by `(label(v), rank of parent)`, roots first.
pub(crate) fn sort_nonsample(f: &Forest, d: u32, sample: &Sample, rsa1: &[u32]) -> Vec<u32> {
    let nodes: Vec<u32> = (0..f.len() as u32).filter(|&v| f.depth[v as usize] % 3 == d).collect();
    let parent_key = |v: u32| match f.parent[v as usize] {
        NIL => 0,
        p => rsa1[sample.index[p as usize] as usize] + 1,
    };
    let by_parent = counting_sort(&nodes, parent_key, sample.len() as u32);
    let bound = nodes.iter().map(|&v| f.label[v as usize]).max().unwrap_or(0);
    sort_by_key(&by_parent, |v| f.label[v as usize], bound)
}

/// What the merge and the lcp pass need to know about a node: its first two
/// labels and the sample ranks (plus one) of itself and its first two
/// ancestors. Labels and ranks are 0 where the suffix has ended, and ranks
/// are 0 for non-sample nodes.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Probe {
    label: [u32; 2],
    rank: [u32; 3],
}

fn probe(f: &Forest, rank: &[u32], v: u32) -> Probe {
    let rank_of = |u: u32| if u == NIL { 0 } else { rank[u as usize] };
    let p = f.parent[v as usize];
    let g = if p == NIL { NIL } else { f.parent[p as usize] };
    Probe {
        label: [f.label[v as usize], label_or_end(f, p)],
        rank: [rank[v as usize], rank_of(p), rank_of(g)],
    }
}

/// Compares sample node `u` with non-sample node `v` by their suffixes. When
/// the parent of `u` is a sample node both sides are decided by one label and
/// the ranks of their parents; otherwise by two labels and the ranks of their
/// grandparents. A missing parent makes both ways agree.
#[inline]
fn compare_mixed(u: &Probe, v: &Probe) -> Ordering {
    if u.rank[1] != 0 {
        (u.label[0], u.rank[1]).cmp(&(v.label[0], v.rank[1]))
    } else {
        (u.label, u.rank[2]).cmp(&(v.label, v.rank[2]))
    }
}

/// Merges the sorted sample (`sa1`, sample indices) with the sorted
/// non-sample nodes (`sa2`, forest ids) into the full suffix array, returning
/// the probes of the merged order alongside.
pub(crate) fn merge_sample_nonsample(f: &Forest, sample: &Sample, sa1: &[u32], sa2: &[u32]) -> (Vec<u32>, Vec<Probe>) {
    let n1: Vec<u32> = sa1.iter().map(|&s| sample.nodes[s as usize]).collect();
    let mut rank = vec![0u32; f.len()];
    for (r, &v) in n1.iter().enumerate() {
        rank[v as usize] = r as u32 + 1;
    }
    let all: Vec<Probe> = (0..f.len() as u32).map(|v| probe(f, &rank, v)).collect();
    let p1: Vec<Probe> = n1.iter().map(|&v| all[v as usize]).collect();
    let p2: Vec<Probe> = sa2.iter().map(|&v| all[v as usize]).collect();
    let n = n1.len() + sa2.len();
    let mut sa = Vec::with_capacity(n);
    let mut probes = Vec::with_capacity(n);
    let (mut i, mut j) = (0, 0);
    while i < n1.len() && j < sa2.len() {
        if compare_mixed(&p1[i], &p2[j]) != Ordering::Greater {
            sa.push(n1[i]);
            probes.push(p1[i]);
            i += 1;
        } else {
            sa.push(sa2[j]);
            probes.push(p2[j]);
            j += 1;
        }
    }
    sa.extend_from_slice(&n1[i..]);
    probes.extend_from_slice(&p1[i..]);
    sa.extend_from_slice(&sa2[j..]);
    probes.extend_from_slice(&p2[j..]);
    (sa, probes)
}

/// Lcp array of the merged order, plus mismatch labels when `want_mis`.
pub(crate) fn lift_lcp(
    f: &Forest,
    sa: &[u32],
    probes: &[Probe],
    adjacent: &Adjacent,
    want_mis: bool,
) -> (Vec<i32>, Vec<[u32; 2]>) {
    let n = sa.len();
    let mut lcp = vec![-1i32; n];
    let mut mis = if want_mis { vec![[0u32; 2]; n] } else { Vec::new() };
    let rmq = ArgminIndex::new(&adjacent.lcp, want_mis);

    for i in 0..n.saturating_sub(1) {
        let (a, b) = (&probes[i], &probes[i + 1]);
        // Some step s <= 2 reaches sample nodes on both sides.
        let (len, pair) = 'walk: {
            for s in 0..3 {
                let (ra, rb) = (a.rank[s], b.rank[s]);
                if ra != 0 && rb != 0 {
                    if ra == rb {
                        break 'walk (f.depth[sa[i] as usize] + 1, [0, 0]);
                    }
                    let (lo, hi) = (ra.min(rb) as usize - 1, ra.max(rb) as usize - 2);
                    if !want_mis {
                        break 'walk (s as u32 + rmq.min(lo, hi), [0, 0]);
                    }
                    let (m, left, right) = rmq.argmins(lo, hi);
                    let pair = if ra < rb {
                        [adjacent.mis[left][0], adjacent.mis[right][1]]
                    } else {
                        [adjacent.mis[right][1], adjacent.mis[left][0]]
                    };
                    break 'walk (s as u32 + m, pair);
                }
                if s == 2 {
                    // A grandparent is missing.
                    break;
                }
                let (la, lb) = (a.label[s], b.label[s]);
                if la != lb || la == 0 {
                    break 'walk (s as u32, [la, lb]);
                }
            }
            let at = |v: u32| label_or_end(f, f.parent[f.parent[v as usize] as usize]);
            (2, [at(sa[i]), at(sa[i + 1])])
        };
        lcp[i] = len as i32;
        if want_mis {
            mis[i] = pair;
        }
    }
    (lcp, mis)
}

const BLOCK: usize = 32;

/// Range minimum over `u32` values. A sparse table covers whole blocks of
/// [`BLOCK`] entries and block fragments are scanned. Besides the minimum it
/// reports its leftmost and rightmost positions.
pub(crate) struct ArgminIndex<'a> {
    values: &'a [u32],
    /// `left[k][b]`: leftmost position of the minimum of blocks `b..b + 2^k`.
    left: Vec<Vec<u32>>,
    /// As `left` with rightmost positions; empty unless requested.
    right: Vec<Vec<u32>>,
}

impl<'a> ArgminIndex<'a> {
    pub fn new(values: &'a [u32], with_right: bool) -> Self {
        let left = Self::table(values, false);
        let right = if with_right {
            Self::table(values, true)
        } else {
            Vec::new()
        };
        Self { values, left, right }
    }

    fn table(values: &[u32], rightmost: bool) -> Vec<Vec<u32>> {
        let blocks = values.len() / BLOCK;
        let better = |x: u32, y: u32| {
            let (vx, vy) = (values[x as usize], values[y as usize]);
            if vy < vx || (rightmost && vy == vx) {
                y
            } else {
                x
            }
        };
        let first = (0..blocks)
            .map(|b| (b * BLOCK + 1..(b + 1) * BLOCK).fold((b * BLOCK) as u32, |x, k| better(x, k as u32)))
            .collect();
        let mut table: Vec<Vec<u32>> = vec![first];
        let mut width = 1;
        while 2 * width <= blocks {
            let prev = table.last().unwrap();
            let next = (0..=blocks - 2 * width)
                .map(|b| better(prev[b], prev[b + width]))
                .collect();
            table.push(next);
            width *= 2;
        }
        table
    }

    /// Minimum of `values[x..=y]`.
    #[inline]
    pub fn min(&self, x: usize, y: usize) -> u32 {
        let v = self.values;
        if y - x < 2 * BLOCK {
            return *v[x..=y].iter().min().unwrap();
        }
        let (bx, by) = (x.div_ceil(BLOCK), (y + 1) / BLOCK);
        let (l, r) = Self::cover(&self.left, bx, by);
        let head = v[x..bx * BLOCK].iter().copied().min().unwrap_or(u32::MAX);
        let tail = v[by * BLOCK..=y].iter().copied().min().unwrap_or(u32::MAX);
        head.min(tail).min(v[l as usize]).min(v[r as usize])
    }

    /// Minimum of `values[x..=y]` with its leftmost and rightmost positions.
    pub fn argmins(&self, x: usize, y: usize) -> (u32, usize, usize) {
        let v = self.values;
        let mut best = (u32::MAX, x, x);
        let offer = |best: &mut (u32, usize, usize), m: u32, l: usize, r: usize| {
            if m < best.0 {
                *best = (m, l, r);
            } else if m == best.0 {
                best.2 = r;
            }
        };
        let scan = |best: &mut (u32, usize, usize), lo: usize, hi: usize| {
            for (k, &m) in v.iter().enumerate().take(hi).skip(lo) {
                offer(best, m, k, k);
            }
        };
        if y - x < 2 * BLOCK {
            scan(&mut best, x, y + 1);
            return best;
        }
        let (bx, by) = (x.div_ceil(BLOCK), (y + 1) / BLOCK);
        scan(&mut best, x, bx * BLOCK);
        let (l, l2) = Self::cover(&self.left, bx, by);
        let (r1, r) = Self::cover(&self.right, bx, by);
        let l = if v[l2 as usize] < v[l as usize] { l2 } else { l };
        let r = if v[r1 as usize] < v[r as usize] { r1 } else { r };
        offer(&mut best, v[l as usize], l as usize, r as usize);
        scan(&mut best, by * BLOCK, y + 1);
        best
    }

    /// The two overlapping table entries covering blocks `[bx, by)`.
    #[inline]
    fn cover(table: &[Vec<u32>], bx: usize, by: usize) -> (u32, u32) {
        let k = (usize::BITS - 1 - (by - bx).leading_zeros()) as usize;
        (table[k][bx], table[k][by - (1 << k)])
    }
}

/// Stable sort of `items` by `key`, keys in `0..=bound`: counting sort for
/// small bounds, radix sort otherwise.
fn sort_by_key(items: &[u32], key: impl Fn(u32) -> u32, bound: u32) -> Vec<u32> {
    if bound as usize <= 2 * items.len() + 256 {
        return counting_sort(items, key, bound);
    }
    let mut pairs: Vec<(u64, u32)> = items.iter().map(|&x| (key(x) as u64, x)).collect();
    radix_sort_pairs(&mut pairs, u32::BITS - bound.leading_zeros());
    pairs.into_iter().map(|(_, x)| x).collect()
}

/// Stable counting sort of `items` by `key`, keys in `0..=bound`.
fn counting_sort(items: &[u32], key: impl Fn(u32) -> u32, bound: u32) -> Vec<u32> {
    let mut count = vec![0u32; bound as usize + 2];
    for &x in items {
        count[key(x) as usize + 1] += 1;
    }
    for k in 0..=bound as usize {
        count[k + 1] += count[k];
    }
    let mut out = vec![0u32; items.len()];
    for &x in items {
        let slot = &mut count[key(x) as usize];
        out[*slot as usize] = x;
        *slot += 1;
    }
    out
}

/// Puts every run of identical suffixes into ascending node id.
fn canonicalize_ties(f: &Forest, sa: &mut [u32], lcp: &[i32]) {
    let n = sa.len();
    let identical = |sa: &[u32], i: usize| {
        let len = f.depth[sa[i] as usize] as i32 + 1;
        lcp[i] == len && len == f.depth[sa[i + 1] as usize] as i32 + 1
    };
    let mut i = 0;
    while i + 1 < n {
        if !identical(sa, i) {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < n && identical(sa, i) {
            i += 1;
        }
        let run = &mut sa[start..=i];
        if run.len() <= 32 {
            run.sort_unstable();
        } else {
            let mut pairs: Vec<(u64, u32)> = run.iter().map(|&v| (v as u64, v)).collect();
            radix_sort_pairs(&mut pairs, u32::BITS - (n as u32).leading_zeros());
            for (slot, (_, v)) in run.iter_mut().zip(pairs) {
                *slot = v;
            }
        }
    }
}
