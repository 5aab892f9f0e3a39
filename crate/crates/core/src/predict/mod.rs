//! Kernel-machine prediction `f(T) = bias + Σ_i α_i K(T_i, T)`.
//!
//! [`predict_direct`] evaluates one kernel per support tree. [`MasterIndex`]
//! instead indexes all support trees once, as components of a single merged
//! forest, and annotates the suffix tree simulated by its suffix array with
//! α-weighted counts. A prediction then costs one matching-statistics pass
//! over the input tree, independent of the number of support trees.

mod index;
mod matching;
mod model;

use std::collections::HashSet;

use crate::kernel::{subpath_kernel, KernelParams};
use crate::tree::{Label, Tree};
use crate::{Error, Result};

pub use index::MasterIndex;
pub use matching::{MatchStats, SkipStrategy};
pub use model::Model;

/// Support trees with their coefficients, plus a bias.
#[derive(Debug, Clone)]
pub struct SupportSet {
    items: Vec<(Tree, f64)>,
    bias: f64,
}

impl SupportSet {
    pub fn new(items: Vec<(Tree, f64)>, bias: f64) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Model("support set is empty".into()));
        }
        if let Some(i) = items.iter().position(|(_, a)| !a.is_finite()) {
            return Err(Error::Model(format!("alpha of support tree {i} is not finite")));
        }
        if !bias.is_finite() {
            return Err(Error::Model("bias is not finite".into()));
        }
        Ok(Self { items, bias })
    }

    pub fn items(&self) -> &[(Tree, f64)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn trees(&self) -> impl Iterator<Item = &Tree> {
        self.items.iter().map(|(t, _)| t)
    }

    pub fn alphas(&self) -> impl Iterator<Item = f64> + '_ {
        self.items.iter().map(|&(_, a)| a)
    }
}

/// `bias + Σ_i α_i K(T_i, t)`, one kernel evaluation per support tree.
pub fn predict_direct(sv: &SupportSet, t: &Tree, params: KernelParams) -> f64 {
    sv.bias
        + sv.items
            .iter()
            .map(|(s, a)| a * subpath_kernel(s, t, params))
            .sum::<f64>()
}

/// Matching statistics by brute force: for every node of `t`, the longest
/// prefix of its suffix that is a prefix of some support-tree suffix.
pub fn naive_matching_statistics(sv: &SupportSet, t: &Tree) -> Vec<usize> {
    let mut prefixes: HashSet<Vec<Label>> = HashSet::new();
    for s in sv.trees() {
        for v in 0..s.len() {
            let suffix = s.suffix(v);
            for k in 1..=suffix.len() {
                prefixes.insert(suffix[..k].to_vec());
            }
        }
    }
    (0..t.len())
        .map(|v| {
            let suffix = t.suffix(v);
            (1..=suffix.len())
                .take_while(|&k| prefixes.contains(&suffix[..k]))
                .last()
                .unwrap_or(0)
        })
        .collect()
}
