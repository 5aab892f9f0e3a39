use std::collections::HashMap;

use super::KernelParams;
use crate::tree::{Label, Tree};

fn prefix_counts(t: &Tree) -> HashMap<Vec<Label>, u64> {
    let mut counts = HashMap::new();
    for v in 0..t.len() {
        let s = t.suffix(v);
        for k in 1..=s.len() {
            *counts.entry(s[..k].to_vec()).or_insert(0) += 1;
        }
    }
    counts
}

/// `c[k] = Σ_{|s| = k} num1(s) · num2(s)`, exact. `c[0]` is always 0.
pub fn oracle_coefficients(t1: &Tree, t2: &Tree) -> Vec<u128> {
    let a = prefix_counts(t1);
    let b = prefix_counts(t2);
    let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    let mut c = vec![0u128; t1.height().min(t2.height()) + 1];
    for (s, &n) in small {
        if let Some(&m) = large.get(s) {
            c[s.len()] += n as u128 * m as u128;
        }
    }
    c
}

/// Kernel by explicit enumeration of every suffix prefix. Quadratic in tree
/// height; meant for checking.
pub fn subpath_kernel_oracle(t1: &Tree, t2: &Tree, params: KernelParams) -> f64 {
    let mut power = 1.0;
    let mut total = 0.0;
    for &c in oracle_coefficients(t1, t2).iter().skip(1) {
        power *= params.lambda();
        total += power * c as f64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_tree, Alphabet};

    #[test]
    fn hand_examples() {
        let mut a = Alphabet::new();
        let t1 = parse_tree("a(b,b)", &mut a).unwrap();
        let t2 = parse_tree("a(b)", &mut a).unwrap();
        // length 1: a 1·1 + b 2·1; length 2: ba 2·1
        assert_eq!(oracle_coefficients(&t1, &t2), vec![0, 3, 2]);
        let p = KernelParams::new(1.0).unwrap();
        assert_eq!(subpath_kernel_oracle(&t1, &t2, p), 5.0);
        let x = parse_tree("c", &mut a).unwrap();
        assert_eq!(subpath_kernel_oracle(&t1, &x, p), 0.0);
    }
}
