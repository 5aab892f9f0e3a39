use crate::{Error, Result};

/// Sparse table for range-minimum queries: `table[k][i]` is the minimum of
/// `values[i..i + 2^k]`. O(n log n) build, two lookups per query.
#[derive(Debug, Clone)]
pub struct RmqIndex {
    table: Vec<Vec<i32>>,
}

impl RmqIndex {
    pub fn new(values: &[i32]) -> Self {
        let n = values.len();
        let mut table = vec![values.to_vec()];
        let mut width = 1;
        while 2 * width <= n {
            let prev = table.last().unwrap();
            let next: Vec<i32> = (0..=n - 2 * width).map(|i| prev[i].min(prev[i + width])).collect();
            table.push(next);
            width *= 2;
        }
        Self { table }
    }

    pub fn len(&self) -> usize {
        self.table[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.table[0].is_empty()
    }

    /// Minimum of the inclusive range `x..=y`.
    pub fn query(&self, x: usize, y: usize) -> Result<i32> {
        if x > y || y >= self.len() {
            return Err(Error::OutOfRange {
                what: "rmq range",
                detail: format!("[{x}, {y}] over {} values", self.len()),
            });
        }
        Ok(self.min(x, y))
    }

    #[inline]
    pub(crate) fn min(&self, x: usize, y: usize) -> i32 {
        let k = (y - x + 1).ilog2() as usize;
        let row = &self.table[k];
        row[x].min(row[y + 1 - (1 << k)])
    }
}
