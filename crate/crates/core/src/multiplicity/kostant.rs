//! Kostant partition function.

use std::collections::HashMap;

use crate::rootsys::{Family, RootSystem};

/// Counts decompositions into positive roots, memoized on `(sigma, first root)`.
#[derive(Debug)]
pub struct KostantCounter {
    roots: Vec<Vec<i64>>,
    memo: HashMap<(Vec<i64>, usize), u128>,
    b2: bool,
}

impl KostantCounter {
    pub fn new(rs: &RootSystem) -> Self {
        // highest roots first keeps the recursion shallow
        let mut roots = rs.positive_roots_simple().to_vec();
        roots.reverse();
        KostantCounter {
            roots,
            memo: HashMap::new(),
            b2: rs.family() == Family::B && rs.rank() == 2,
        }
    }

    /// Number of ways to write `sigma` (simple-root coordinates) as a
    /// nonnegative integer combination of positive roots.
    pub fn count(&mut self, sigma: &[i64]) -> u128 {
        if sigma.iter().any(|&c| c < 0) {
            return 0;
        }
        if self.b2 {
            return b2_partition(sigma[0], sigma[1]);
        }
        self.count_from(sigma.to_vec(), 0)
    }

    fn count_from(&mut self, sigma: Vec<i64>, k: usize) -> u128 {
        if sigma.iter().all(|&c| c == 0) {
            return 1;
        }
        if k == self.roots.len() {
            return 0;
        }
        if k == self.roots.len() - sigma.len() {
            // only simple roots remain, and they are listed last
            return 1;
        }
        let key = (sigma, k);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let (sigma, k) = key;
        let mut total = 0u128;
        let mut rest = sigma.clone();
        loop {
            total += self.count_from(rest.clone(), k + 1);
            let root = &self.roots[k];
            for (x, a) in rest.iter_mut().zip(root) {
                *x -= a;
            }
            if rest.iter().any(|&c| c < 0) {
                break;
            }
        }
        self.memo.insert((sigma, k), total);
        total
    }
}

/// `B2` partition count for `a alpha_1 + b alpha_2`.
///
/// With `d` copies of `alpha_1 + 2 alpha_2` and `c` of `alpha_1 + alpha_2`, the
/// simple roots fill the rest whenever `c + d <= a` and `c + 2d <= b`.
pub fn b2_partition(a: i64, b: i64) -> u128 {
    if a < 0 || b < 0 {
        return 0;
    }
    let mut total = 0u128;
    let mut d = 0;
    while d <= a && 2 * d <= b {
        total += ((a - d).min(b - 2 * d) + 1) as u128;
        d += 1;
    }
    total
}
