//! The subpath kernel.
//!
//! `K(T1, T2) = Σ_s λ^|s| · num1(s) · num2(s)` where `s` ranges over the
//! prefixes of node suffixes (equivalently, reversed subpaths) and `numk(s)`
//! counts the nodes of `Tk` whose suffix starts with `s`.
//!
//! The fast path merges both trees under distinct terminal labels, builds one
//! suffix array over all ordinary nodes and sums, for every internal node of
//! the implied suffix tree, `(W[depth] - W[parent depth]) · leaves1 · leaves2`
//! with one stack sweep over the lcp array.

mod gram;
mod merged;
mod oracle;

use crate::esa::{Builder, TreeSuffixArray};
use crate::tree::Tree;
use crate::{Error, Result};

pub use gram::{gram_matrix, gram_matrix_with_threads, GramMatrix};
pub use merged::{merge_trees, MergedTree};
pub use oracle::{oracle_coefficients, subpath_kernel_oracle};

/// Decay factor `λ` in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    lambda: f64,
}

impl KernelParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 && lambda <= 1.0 {
            Ok(Self { lambda })
        } else {
            Err(Error::InvalidParameter(format!(
                "lambda must lie in (0, 1], got {lambda}"
            )))
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Cumulative decay weights: `w[0] = 0`, `w[n] = Σ_{i=1..n} λ^i`.
#[derive(Debug, Clone)]
pub struct WeightTable {
    w: Vec<f64>,
}

impl WeightTable {
    pub fn new(params: KernelParams, max_len: usize) -> Self {
        let mut w = Vec::with_capacity(max_len + 1);
        w.push(0.0);
        let mut power = 1.0;
        let mut total = 0.0;
        for _ in 0..max_len {
            power *= params.lambda;
            total += power;
            w.push(total);
        }
        Self { w }
    }

    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.w[n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Kernel value computed with the linear-time suffix array builder.
pub fn subpath_kernel(t1: &Tree, t2: &Tree, params: KernelParams) -> f64 {
    subpath_kernel_with(t1, t2, params, Builder::Linear)
}

/// Kernel value using the given suffix array builder.
pub fn subpath_kernel_with(t1: &Tree, t2: &Tree, params: KernelParams, builder: Builder) -> f64 {
    kernel_of_merged(&merge_trees(t1, t2), params, builder)
}

pub(crate) fn kernel_of_merged(merged: &MergedTree, params: KernelParams, builder: Builder) -> f64 {
    let esa = merged.suffix_array(builder);
    let max_len = esa.suffix_len().iter().copied().max().unwrap_or(0) as usize;
    let weights = WeightTable::new(params, max_len);
    sweep(&esa, |v| merged.source(v) == 0, &weights)
}

/// Stack entry `(l1, l2, x, h)`: leaves from each tree, left rank, depth.
#[derive(Debug, Clone, Copy)]
struct Frame {
    l1: u64,
    l2: u64,
    x: i64,
    h: i64,
}

/// Bottom-up traversal of the suffix tree simulated by `esa`. Every popped
/// frame is an internal node (or a leaf, whose product is 0) and contributes
/// `(W[h] - W[parent depth]) · l1 · l2`, its counts folding into the parent.
fn sweep(esa: &TreeSuffixArray, from_first: impl Fn(usize) -> bool, weights: &WeightTable) -> f64 {
    let w = weights.as_slice();
    let sa = esa.sa();
    let lcp = esa.lcp();
    let len = esa.suffix_len();
    let mut kernel = 0.0;
    let mut stack = vec![Frame {
        l1: 0,
        l2: 0,
        x: -1,
        h: -1,
    }];

    for i in 0..sa.len() {
        let v = sa[i] as usize;
        let (a1, a2) = if from_first(v) { (1, 0) } else { (0, 1) };
        let h_leaf = len[v] as i64;
        let top = stack.last_mut().expect("sentinel frame");
        if top.h == h_leaf {
            top.l1 += a1;
            top.l2 += a2;
        } else {
            stack.push(Frame {
                l1: a1,
                l2: a2,
                x: i as i64,
                h: h_leaf,
            });
        }

        let h_i = lcp[i] as i64;
        while stack.last().expect("sentinel frame").h > h_i {
            let popped = stack.pop().expect("non-sentinel frame");
            let top = stack.last_mut().expect("sentinel frame");
            let parent_h = top.h.max(h_i).max(0) as usize;
            if popped.l1 != 0 && popped.l2 != 0 {
                kernel += (w[popped.h as usize] - w[parent_h]) * (popped.l1 * popped.l2) as f64;
            }
            if top.h >= h_i {
                top.l1 += popped.l1;
                top.l2 += popped.l2;
            } else {
                stack.push(Frame {
                    l1: popped.l1,
                    l2: popped.l2,
                    x: popped.x,
                    h: h_i,
                });
            }
        }
    }
    debug_assert_eq!(stack.len(), 1);
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_tree, random_tree, Alphabet};

    fn pair(a: &str, b: &str) -> (Tree, Tree) {
        let mut alphabet = Alphabet::new();
        (
            parse_tree(a, &mut alphabet).unwrap(),
            parse_tree(b, &mut alphabet).unwrap(),
        )
    }

    fn k(a: &str, b: &str, lambda: f64) -> f64 {
        let (x, y) = pair(a, b);
        subpath_kernel(&x, &y, KernelParams::new(lambda).unwrap())
    }

    #[test]
    fn params_range() {
        assert!(KernelParams::new(1.0).is_ok());
        assert!(KernelParams::new(1e-9).is_ok());
        for bad in [0.0, -0.5, 1.0000001, f64::NAN, f64::INFINITY] {
            assert!(matches!(KernelParams::new(bad), Err(Error::InvalidParameter(_))));
        }
    }

    #[test]
    fn weight_table() {
        let w = WeightTable::new(KernelParams::new(1.0).unwrap(), 5);
        assert_eq!(w.as_slice(), &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let w = WeightTable::new(KernelParams::new(0.5).unwrap(), 3);
        assert_eq!(w.get(3), 0.875);
        let lambda: f64 = 0.9;
        let w = WeightTable::new(KernelParams::new(lambda).unwrap(), 50);
        for n in 0..=50 {
            let closed = lambda * (1.0 - lambda.powi(n as i32)) / (1.0 - lambda);
            assert!((w.get(n) - closed).abs() <= 1e-12, "n={n}");
        }
        for n in 1..=50 {
            assert!(((w.get(n) - w.get(n - 1)) - lambda.powi(n as i32)).abs() < 1e-15);
        }
        assert_eq!(WeightTable::new(KernelParams::new(0.3).unwrap(), 0).len(), 1);
    }

    #[test]
    fn hand_examples() {
        assert_eq!(k("a", "a", 1.0), 1.0);
        assert_eq!(k("a", "b", 0.7), 0.0);
        assert!(k("a", "b", 0.7).is_sign_positive());
        assert!((k("a(b)", "a(b)", 0.5) - 1.25).abs() < 1e-12);
        assert!((k("a(b,b)", "a(b)", 1.0) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn both_builders_agree() {
        let params = KernelParams::new(0.5).unwrap();
        for seed in 0..30 {
            let a = random_tree(120, 3, seed).unwrap();
            let b = random_tree(90, 3, seed + 1000).unwrap();
            let x = subpath_kernel_with(&a, &b, params, Builder::Linear);
            let y = subpath_kernel_with(&a, &b, params, Builder::Reference);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn matches_oracle_on_small_random_pairs() {
        for seed in 0..200u64 {
            let sigma = [1, 2, 5, 26][(seed % 4) as usize];
            let lambda = [0.25, 0.5, 1.0][(seed % 3) as usize];
            let params = KernelParams::new(lambda).unwrap();
            let a = random_tree(1 + (seed as usize * 7) % 40, sigma, seed).unwrap();
            let b = random_tree(1 + (seed as usize * 13) % 40, sigma, seed + 77).unwrap();
            let fast = subpath_kernel(&a, &b, params);
            let slow = subpath_kernel_oracle(&a, &b, params);
            assert!((fast - slow).abs() <= 1e-9 * slow.abs().max(1.0), "{fast} vs {slow}");
        }
    }
}
