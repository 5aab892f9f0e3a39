use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Label, Tree, NIL};
use crate::{Error, Result};

/// Random recursive tree: node `i > 0` attaches to a uniformly chosen earlier
/// node, labels are uniform over `0..sigma`. Deterministic for a given seed.
pub fn random_tree(n: usize, sigma: usize, seed: u64) -> Result<Tree> {
    if n == 0 {
        return Err(Error::InvalidParameter("tree size must be at least 1".into()));
    }
    if sigma == 0 {
        return Err(Error::InvalidParameter("label count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Label> = (0..n).map(|_| Label(rng.gen_range(0..sigma as u32))).collect();
    let parent: Vec<Option<usize>> = (0..n)
        .map(|i| if i == 0 { None } else { Some(rng.gen_range(0..i)) })
        .collect();
    Tree::from_parents(labels, &parent)
}

/// A single chain; `labels[0]` is the root.
pub fn path_tree(labels: &[Label]) -> Result<Tree> {
    if labels.is_empty() {
        return Err(Error::InvalidParameter("tree size must be at least 1".into()));
    }
    let parent = (0..labels.len())
        .map(|i| if i == 0 { NIL } else { i as u32 - 1 })
        .collect();
    Ok(Tree::from_preorder(labels.to_vec(), parent))
}

/// A root with every other label as a direct child.
pub fn star_tree(root: Label, leaves: &[Label]) -> Tree {
    let mut labels = Vec::with_capacity(leaves.len() + 1);
    labels.push(root);
    labels.extend_from_slice(leaves);
    let parent = (0..labels.len()).map(|i| if i == 0 { NIL } else { 0 }).collect();
    Tree::from_preorder(labels, parent)
}
