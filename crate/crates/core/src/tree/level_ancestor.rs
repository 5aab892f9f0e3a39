use super::{Tree, NIL};
use crate::{Error, Result};

/// Binary-lifting jump tables: `up[k][v]` is the `2^k`-th ancestor of `v`.
///
/// Works on any forest given as a packed parent array, so it serves both
/// plain trees and the merged forests built for kernels and prediction.
#[derive(Debug, Clone)]
pub struct LevelAncestorIndex {
    up: Vec<Vec<u32>>,
    depth: Vec<u32>,
}

impl LevelAncestorIndex {
    pub fn new(tree: &Tree) -> Self {
        Self::from_parents(tree.parent_raw(), tree.depth_raw())
    }

    pub(crate) fn from_parents(parent: &[u32], depth: &[u32]) -> Self {
        let max_depth = depth.iter().copied().max().unwrap_or(0);
        let levels = (u32::BITS - max_depth.leading_zeros()).max(1) as usize;
        let mut up: Vec<Vec<u32>> = Vec::with_capacity(levels);
        up.push(parent.to_vec());
        for k in 1..levels {
            let prev = &up[k - 1];
            let next = prev
                .iter()
                .map(|&a| if a == NIL { NIL } else { prev[a as usize] })
                .collect();
            up.push(next);
        }
        Self {
            up,
            depth: depth.to_vec(),
        }
    }

    /// The ancestor of `v` reached by `j` parent steps.
    pub fn query(&self, v: usize, j: usize) -> Result<usize> {
        if v >= self.depth.len() {
            return Err(Error::OutOfRange {
                what: "node",
                detail: format!("{v} >= {}", self.depth.len()),
            });
        }
        if j > self.depth[v] as usize {
            return Err(Error::OutOfRange {
                what: "ancestor distance",
                detail: format!("{j} > depth {} of node {v}", self.depth[v]),
            });
        }
        Ok(self.ancestor(v as u32, j as u32) as usize)
    }

    /// Unchecked variant; `j` must not exceed the depth of `v`.
    #[inline]
    pub(crate) fn ancestor(&self, mut v: u32, mut j: u32) -> u32 {
        let mut k = 0;
        while j != 0 {
            if j & 1 != 0 {
                v = self.up[k][v as usize];
            }
            j >>= 1;
            k += 1;
        }
        v
    }
}
