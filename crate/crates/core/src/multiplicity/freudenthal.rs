//! Freudenthal's recursion for weight multiplicities.

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;

use crate::rational::{lcm_of_denominators, qi, Rational};
use crate::rootsys::{Labels, RootSystem};

/// Weight system of an irreducible module.
///
/// Only dominant weights are stored; every other weight takes the multiplicity
/// of its dominant conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMultiplicityTable {
    pub highest_weight: Labels,
    pub dominant: BTreeMap<Labels, u64>,
}

impl WeightMultiplicityTable {
    pub fn mult(&self, rs: &RootSystem, l: &[i64]) -> u64 {
        let d = rs.dominant_of(l);
        self.dominant.get(&d).copied().unwrap_or(0)
    }

    /// Every weight with its multiplicity.
    pub fn entries(&self, rs: &RootSystem) -> BTreeMap<Labels, u64> {
        let mut out = BTreeMap::new();
        for (d, &m) in &self.dominant {
            for w in rs.orbit(d) {
                out.insert(w, m);
            }
        }
        out
    }

    /// Sum of all multiplicities, the dimension of the module.
    pub fn total(&self, rs: &RootSystem) -> u128 {
        self.dominant
            .iter()
            .map(|(d, &m)| rs.orbit_size(d) as u128 * m as u128)
            .sum()
    }
}

/// Integer multiple of the invariant form on Dynkin labels.
pub(crate) struct ScaledForm {
    m: Vec<Vec<i64>>,
}

impl ScaledForm {
    pub(crate) fn new(rs: &RootSystem) -> Self {
        let r = rs.rank();
        // (omega_i, omega_j) = (A^-1)_ji |alpha_i|^2 / 2
        let f: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| &rs.cartan_inverse()[j][i] * &rs.simple_root_norms()[i] / qi(2))
                    .collect()
            })
            .collect();
        let scale = Rational::from_integer(lcm_of_denominators(f.iter().flatten()));
        let m = f
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (x * &scale).to_integer().to_i64().expect("small form"))
                    .collect()
            })
            .collect();
        ScaledForm { m }
    }

    pub(crate) fn pair(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut s = 0i128;
        for (i, row) in self.m.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let inner: i128 = row.iter().zip(y).map(|(&a, &b)| (a * b) as i128).sum();
            s += x[i] as i128 * inner;
        }
        s
    }
}

/// Weight multiplicities of `V_lambda`, `lambda` dominant (not re-checked).
pub fn freudenthal(rs: &RootSystem, lambda: &[i64]) -> WeightMultiplicityTable {
    let r = rs.rank();
    let form = ScaledForm::new(rs);
    let roots: Vec<(Labels, i64)> = rs
        .positive_roots_simple()
        .iter()
        .map(|c| {
            let labels: Labels = (0..r)
                .map(|j| (0..r).map(|i| c[i] * rs.cartan_matrix()[i][j]).sum())
                .collect();
            (labels, c.iter().sum())
        })
        .collect();

    // dominant weights below lambda, reached by subtracting positive roots
    let mut depth: HashMap<Labels, i64> = HashMap::new();
    depth.insert(lambda.to_vec(), 0);
    let mut stack = vec![lambda.to_vec()];
    while let Some(mu) = stack.pop() {
        let h = depth[&mu];
        for (a, ha) in &roots {
            let nu: Labels = mu.iter().zip(a).map(|(x, y)| x - y).collect();
            if nu.iter().all(|&x| x >= 0) && !depth.contains_key(&nu) {
                depth.insert(nu.clone(), h + ha);
                stack.push(nu);
            }
        }
    }
    let mut order: Vec<(i64, Labels)> = depth.into_iter().map(|(k, h)| (h, k)).collect();
    order.sort();

    let rho = rs.rho_labels();
    let shift = |x: &[i64]| -> Labels { x.iter().zip(&rho).map(|(a, b)| a + b).collect() };
    let lr = shift(lambda);
    let top = form.pair(&lr, &lr);

    let mut mult: BTreeMap<Labels, u64> = BTreeMap::new();
    let mut dom_cache: HashMap<Labels, Labels> = HashMap::new();
    for (_, mu) in order {
        if mu == lambda {
            mult.insert(mu, 1);
            continue;
        }
        let mr = shift(&mu);
        let denom = top - form.pair(&mr, &mr);
        let mut num = 0i128;
        for (a, _) in &roots {
            let mut w: Labels = mu.clone();
            loop {
                for (x, y) in w.iter_mut().zip(a) {
                    *x += y;
                }
                let d = dom_cache
                    .entry(w.clone())
                    .or_insert_with(|| rs.dominant_of(&w))
                    .clone();
                match mult.get(&d) {
                    Some(&m) if m > 0 => num += m as i128 * form.pair(&w, a),
                    _ => break,
                }
            }
        }
        let m = 2 * num / denom;
        debug_assert_eq!(2 * num % denom, 0);
        mult.insert(mu, m as u64);
    }
    mult.retain(|_, m| *m > 0);
    WeightMultiplicityTable {
        highest_weight: lambda.to_vec(),
        dominant: mult,
    }
}
