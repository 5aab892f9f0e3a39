//! Multikey quicksort over upward paths.
//!
//! Every slot carries its node and a cursor `anc(node, k)` so the character
//! at offset `k` is one load away. All suffixes inside a range handled at
//! offset `k` share their first `k` labels, so every partition boundary has
//! lcp exactly `k`.

use super::Forest;
use crate::tree::NIL;

pub(crate) fn build(f: &Forest) -> (Vec<u32>, Vec<i32>) {
    let n = f.len();
    // (node, cursor)
    let mut slots: Vec<(u32, u32)> = (0..n as u32).map(|v| (v, v)).collect();
    let mut lcp = vec![0i32; n];
    if n > 0 {
        lcp[n - 1] = -1;
    }
    let key = |c: u32| if c == NIL { 0 } else { f.label[c as usize] };

    let mut stack = vec![(0usize, n, 0u32)];
    while let Some((lo, hi, k)) = stack.pop() {
        if hi - lo < 2 {
            continue;
        }
        let pivot = median3(key(slots[lo].1), key(slots[lo + (hi - lo) / 2].1), key(slots[hi - 1].1));
        let (mut lt, mut i, mut gt) = (lo, lo, hi);
        while i < gt {
            let c = key(slots[i].1);
            if c < pivot {
                slots.swap(lt, i);
                lt += 1;
                i += 1;
            } else if c > pivot {
                gt -= 1;
                slots.swap(i, gt);
            } else {
                i += 1;
            }
        }
        if lt > lo {
            lcp[lt - 1] = k as i32;
            stack.push((lo, lt, k));
        }
        if gt < hi {
            lcp[gt - 1] = k as i32;
            stack.push((gt, hi, k));
        }
        if pivot == 0 {
            // Identical suffixes of length k.
            slots[lt..gt].sort_unstable_by_key(|s| s.0);
            for l in &mut lcp[lt..gt - 1] {
                *l = k as i32;
            }
        } else {
            for s in &mut slots[lt..gt] {
                s.1 = f.parent[s.1 as usize];
            }
            stack.push((lt, gt, k + 1));
        }
    }
    (slots.into_iter().map(|s| s.0).collect(), lcp)
}

fn median3(a: u32, b: u32, c: u32) -> u32 {
    a.max(b).min(a.min(b).max(c))
}
