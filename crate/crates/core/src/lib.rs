//! Subpath kernel for rooted, labeled, unordered trees.
//!
//! The crate is organised bottom-up:
//!
//! - [`tree`]: the tree model, bracket text format, random generators and the
//!   two classical helpers used by suffix array construction (level ancestor
//!   and range-minimum queries).
//! - [`esa`]: enhanced suffix arrays (suffix array, lcp array, inverse) over
//!   the upward paths of a tree or forest, with a multikey-quicksort reference
//!   builder and a linear-time skew builder.
//! - [`kernel`]: the subpath kernel itself, computed by a bottom-up sweep over
//!   the suffix array of two merged trees, plus a brute-force enumeration used
//!   as an oracle and a Gram-matrix helper.
//! - [`predict`]: kernel-machine prediction whose cost does not depend on the
//!   number of support trees, driven by matching statistics against a single
//!   index built over all of them.
//! - [`bench`]: the scaling studies exposed by the command-line tool.

pub mod bench;
pub mod error;
pub mod esa;
pub mod fmt;
pub mod kernel;
pub mod predict;
pub mod tree;

pub use error::{Error, Result};
pub use esa::{build_esa_linear, build_esa_reference, Builder, TreeSuffixArray};
pub use kernel::{
    gram_matrix, merge_trees, subpath_kernel, subpath_kernel_oracle, subpath_kernel_with, GramMatrix, KernelParams,
    MergedTree, WeightTable,
};
pub use predict::{predict_direct, MasterIndex, MatchStats, Model, SkipStrategy, SupportSet};
pub use tree::{parse_tree, random_tree, serialize_tree, Alphabet, Label, Tree};
