use rayon::prelude::*;

use super::{subpath_kernel_with, KernelParams};
use crate::esa::Builder;
use crate::tree::Tree;
use crate::{Error, Result};

/// Dense symmetric kernel matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    data: Vec<f64>,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `K(i, j) / sqrt(K(i, i) · K(j, j))`, with `0 / 0` taken as 0.
    pub fn normalized(&self) -> GramMatrix {
        let diag: Vec<f64> = (0..self.n).map(|i| self.get(i, i)).collect();
        let mut data = self.data.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let d = (diag[i] * diag[j]).sqrt();
                let x = &mut data[i * self.n + j];
                *x = if d == 0.0 { 0.0 } else { *x / d };
            }
        }
        GramMatrix { n: self.n, data }
    }
}

/// Kernel matrix over `trees`, computed on the global rayon pool.
pub fn gram_matrix(trees: &[Tree], params: KernelParams) -> GramMatrix {
    compute(trees, params)
}

/// As [`gram_matrix`] on a dedicated pool of `threads` workers.
pub fn gram_matrix_with_threads(trees: &[Tree], params: KernelParams, threads: usize) -> Result<GramMatrix> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(|| compute(trees, params)))
}

fn compute(trees: &[Tree], params: KernelParams) -> GramMatrix {
    let n = trees.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| subpath_kernel_with(&trees[i], &trees[j], params, Builder::Linear))
        .collect();
    let mut data = vec![0.0; n * n];
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        data[i * n + j] = v;
        data[j * n + i] = v;
    }
    GramMatrix { n, data }
}
