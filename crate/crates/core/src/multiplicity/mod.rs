//! Tensor product multiplicities `C_{lambda mu}^nu` of simple Lie algebras.
//!
//! Three independent routes are provided: Klimyk's formula on top of
//! Freudenthal weight multiplicities, Steinberg's formula on top of the
//! Kostant partition function, and (for `B2`) lattice points of the
//! Berenstein–Zelevinsky polygon in [`crate::bzpolytope`].
//!
//! These are Lie algebra multiplicities. For types `B` and `D` they describe
//! representations of `Spin(n)`, which include the spinor modules absent
//! from `SO(n)`.

mod freudenthal;
mod kostant;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;

pub use freudenthal::{freudenthal, WeightMultiplicityTable};
pub use kostant::{b2_partition, KostantCounter};

use crate::error::{Error, Result};
use crate::rootsys::{Family, Labels, RootSystem, Weight, WeylGroup};

/// Default cap on the dimension of a module whose weights are listed.
pub const DEFAULT_MAX_DIM: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityConfig {
    pub max_dim: u128,
}

impl Default for MultiplicityConfig {
    fn default() -> Self {
        MultiplicityConfig {
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

/// Multiplicity calculator for one root system with shared caches.
///
/// Weight tables and partition counts are memoized behind locks, so one
/// engine can serve parallel sweeps.
#[derive(Debug)]
pub struct LrEngine {
    rs: RootSystem,
    weyl: WeylGroup,
    config: MultiplicityConfig,
    tables: Mutex<HashMap<Labels, Arc<WeightMultiplicityTable>>>,
    kostant: Mutex<KostantCounter>,
}

impl LrEngine {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        LrEngine::with_config(rs, MultiplicityConfig::default())
    }

    pub fn with_config(rs: &RootSystem, config: MultiplicityConfig) -> Result<Self> {
        if matches!(rs.family(), Family::E7 | Family::E8) {
            return Err(Error::Unsupported(format!(
                "no multiplicity support for {}",
                rs.name()
            )));
        }
        Ok(LrEngine {
            rs: rs.clone(),
            weyl: WeylGroup::new(rs)?,
            config,
            tables: Mutex::new(HashMap::new()),
            kostant: Mutex::new(KostantCounter::new(rs)),
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn config(&self) -> MultiplicityConfig {
        self.config
    }

    fn dim(&self, l: &[i64]) -> u128 {
        self.rs.dim_of_labels(l).to_u128().unwrap_or(u128::MAX)
    }

    /// Freudenthal table for `V_lambda`, subject to the size guard.
    pub fn weights(&self, lambda: &[i64]) -> Result<Arc<WeightMultiplicityTable>> {
        self.rs.check_dominant(lambda)?;
        if let Some(t) = self.tables.lock().expect("table lock").get(lambda) {
            return Ok(t.clone());
        }
        let dim = self.dim(lambda);
        if dim > self.config.max_dim {
            return Err(Error::SizeGuard {
                dim,
                cap: self.config.max_dim,
            });
        }
        let t = Arc::new(freudenthal(&self.rs, lambda));
        self.tables
            .lock()
            .expect("table lock")
            .insert(lambda.to_vec(), t.clone());
        Ok(t)
    }

    fn check3(&self, a: &[i64], b: &[i64], c: &[i64]) -> Result<()> {
        self.rs.check_dominant(a)?;
        self.rs.check_dominant(b)?;
        self.rs.check_dominant(c)
    }

    /// `C = sum_w eps(w) mult_mu(w(nu + rho) - lambda - rho)`, using the
    /// weights of whichever of `lambda`, `mu` is smaller.
    pub fn klimyk(&self, lambda: &[i64], mu: &[i64], nu: &[i64]) -> Result<u64> {
        self.check3(lambda, mu, nu)?;
        if !self.rs.is_compatible(lambda, mu, nu) {
            return Ok(0);
        }
        let (big, small) = if self.dim(mu) <= self.dim(lambda) {
            (lambda, mu)
        } else {
            (mu, lambda)
        };
        let table = self.weights(small)?;
        let rho = self.rs.rho_labels();
        let nu_rho: Labels = nu.iter().zip(&rho).map(|(a, b)| a + b).collect();
        let mut total = 0i128;
        for w in self.weyl.elements() {
            let x = w.act_labels(&nu_rho);
            let tau: Labels = (0..x.len()).map(|i| x[i] - big[i] - rho[i]).collect();
            let m = table.mult(&self.rs, &tau);
            if m > 0 {
                total += w.sign() as i128 * m as i128;
            }
        }
        debug_assert!(total >= 0);
        Ok(total as u64)
    }

    pub fn kostant(&self, sigma_simple: &[i64]) -> u128 {
        self.kostant.lock().expect("kostant lock").count(sigma_simple)
    }

    /// `sum_(w, w') eps(w) eps(w') P(w(lambda + rho) + w'(mu + rho) - nu - 2 rho)`.
    pub fn steinberg(&self, lambda: &[i64], mu: &[i64], nu: &[i64]) -> Result<u64> {
        self.check3(lambda, mu, nu)?;
        if !self.rs.is_compatible(lambda, mu, nu) {
            return Ok(0);
        }
        let r = self.rs.rank();
        let rho = self.rs.rho_labels();
        let add = |x: &[i64], y: &[i64]| -> Labels { x.iter().zip(y).map(|(a, b)| a + b).collect() };
        let lr = add(lambda, &rho);
        let mr = add(mu, &rho);
        let target: Labels = (0..r).map(|i| nu[i] + 2 * rho[i]).collect();
        let lam_images: Vec<(Labels, i32)> = self
            .weyl
            .elements()
            .iter()
            .map(|w| (w.act_labels(&lr), w.sign()))
            .collect();
        let mu_images: Vec<(Labels, i32)> = self
            .weyl
            .elements()
            .iter()
            .map(|w| (w.act_labels(&mr), w.sign()))
            .collect();
        let mut counter = self.kostant.lock().expect("kostant lock");
        let mut total = 0i128;
        for (a, sa) in &lam_images {
            for (b, sb) in &mu_images {
                let sigma: Labels = (0..r).map(|i| a[i] + b[i] - target[i]).collect();
                let Some(c) = self.rs.simple_coords_int(&sigma) else {
                    continue;
                };
                let p = counter.count(&c);
                if p > 0 {
                    total += (*sa * *sb) as i128 * p as i128;
                }
            }
        }
        debug_assert!(total >= 0);
        Ok(total as u64)
    }

    /// All `nu` with `C_{lambda mu}^nu > 0`, by Racah–Speiser over the
    /// weights of the smaller factor.
    pub fn tensor_decompose(&self, lambda: &[i64], mu: &[i64]) -> Result<BTreeMap<Labels, u64>> {
        self.rs.check_dominant(lambda)?;
        self.rs.check_dominant(mu)?;
        let (big, small) = if self.dim(mu) <= self.dim(lambda) {
            (lambda, mu)
        } else {
            (mu, lambda)
        };
        let table = self.weights(small)?;
        let rho = self.rs.rho_labels();
        let mut acc: BTreeMap<Labels, i128> = BTreeMap::new();
        for (d, &m) in &table.dominant {
            for tau in self.rs.orbit(d) {
                let mut x: Labels = (0..rho.len()).map(|i| big[i] + tau[i] + rho[i]).collect();
                let s = self.rs.reflect_to_dominant(&mut x);
                if s != 0 {
                    for (xi, ri) in x.iter_mut().zip(&rho) {
                        *xi -= ri;
                    }
                    *acc.entry(x).or_insert(0) += s as i128 * m as i128;
                }
            }
        }
        Ok(acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| {
                debug_assert!(c > 0);
                (k, c as u64)
            })
            .collect())
    }

    /// `sum_tau C_{lambda mu}^tau C_{tau kappa}^nu`.
    pub fn triple(&self, lambda: &[i64], mu: &[i64], kappa: &[i64], nu: &[i64]) -> Result<u64> {
        self.rs.check_dominant(kappa)?;
        self.rs.check_dominant(nu)?;
        let sum: Labels = (0..lambda.len()).map(|i| lambda[i] + mu[i] + kappa[i] - nu[i]).collect();
        if !self.rs.in_root_lattice(&sum) {
            return Ok(0);
        }
        let mut total = 0u64;
        for (tau, c) in self.tensor_decompose(lambda, mu)? {
            let d = self.klimyk(&tau, kappa, nu)?;
            total += c * d;
        }
        Ok(total)
    }
}

fn labels3(rs: &RootSystem, ws: [&Weight; 3]) -> Result<[Labels; 3]> {
    Ok([
        rs.dominant_labels(ws[0])?,
        rs.dominant_labels(ws[1])?,
        rs.dominant_labels(ws[2])?,
    ])
}

pub fn freudenthal_weights(rs: &RootSystem, lambda: &Weight) -> Result<WeightMultiplicityTable> {
    let l = rs.dominant_labels(lambda)?;
    Ok((*LrEngine::new(rs)?.weights(&l)?).clone())
}

pub fn lr_klimyk(rs: &RootSystem, lambda: &Weight, mu: &Weight, nu: &Weight) -> Result<u64> {
    let [l, m, n] = labels3(rs, [lambda, mu, nu])?;
    LrEngine::new(rs)?.klimyk(&l, &m, &n)
}

pub fn lr_steinberg(rs: &RootSystem, lambda: &Weight, mu: &Weight, nu: &Weight) -> Result<u64> {
    let [l, m, n] = labels3(rs, [lambda, mu, nu])?;
    LrEngine::new(rs)?.steinberg(&l, &m, &n)
}

/// Kostant partition function of a weight; zero off the root lattice.
pub fn kostant_partition(rs: &RootSystem, sigma: &Weight) -> Result<u128> {
    let simple = rs.convert(sigma, crate::rootsys::Basis::SimpleRoot)?;
    let coords: Option<Vec<i64>> = simple.coords.iter().map(crate::rational::to_i64).collect();
    Ok(match coords {
        Some(c) => KostantCounter::new(rs).count(&c),
        None => 0,
    })
}

pub fn tensor_decompose(
    rs: &RootSystem,
    lambda: &Weight,
    mu: &Weight,
) -> Result<BTreeMap<Labels, u64>> {
    let l = rs.dominant_labels(lambda)?;
    let m = rs.dominant_labels(mu)?;
    LrEngine::new(rs)?.tensor_decompose(&l, &m)
}

pub fn lr_triple(
    rs: &RootSystem,
    lambda: &Weight,
    mu: &Weight,
    kappa: &Weight,
    nu: &Weight,
) -> Result<u64> {
    let [l, m, k] = labels3(rs, [lambda, mu, kappa])?;
    let n = rs.dominant_labels(nu)?;
    LrEngine::new(rs)?.triple(&l, &m, &k, &n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Basis;
    use proptest::prelude::*;

    fn w(l: &[i64]) -> Weight {
        Weight::dynkin(l)
    }

    /// Kostant's multiplicity formula, independent of Freudenthal.
    fn kostant_mult(rs: &RootSystem, lambda: &[i64], mu: &[i64]) -> i128 {
        let g = WeylGroup::new(rs).unwrap();
        let mut k = KostantCounter::new(rs);
        let r = rs.rank();
        let mut total = 0;
        for e in g.elements() {
            let x = e.act_labels(&(0..r).map(|i| lambda[i] + 1).collect::<Vec<_>>());
            let sigma: Labels = (0..r).map(|i| x[i] - mu[i] - 1).collect();
            if let Some(c) = rs.simple_coords_int(&sigma) {
                total += e.sign() as i128 * k.count(&c) as i128;
            }
        }
        total
    }

    #[test]
    fn freudenthal_small_cases() {
        let b2 = RootSystem::b2();
        let spin = freudenthal_weights(&b2, &w(&[0, 1])).unwrap();
        let all = spin.entries(&b2);
        assert_eq!(all.len(), 4);
        assert!(all.values().all(|&m| m == 1));
        let adj = freudenthal_weights(&b2, &w(&[0, 2])).unwrap();
        assert_eq!(adj.mult(&b2, &[0, 0]), 2);
        assert_eq!(adj.total(&b2), 10);
        let triv = freudenthal_weights(&b2, &w(&[0, 0])).unwrap();
        assert_eq!(triv.entries(&b2).into_iter().collect::<Vec<_>>(), vec![(vec![0, 0], 1)]);
    }

    #[test]
    fn freudenthal_matches_kostant_formula() {
        let cases: Vec<(Family, usize, Vec<Labels>)> = vec![
            (Family::B, 2, vec![vec![2, 3], vec![3, 1], vec![0, 4]]),
            (Family::A, 2, vec![vec![2, 2], vec![3, 1]]),
            (Family::B, 3, vec![vec![1, 1, 1], vec![0, 2, 1]]),
            (Family::C, 3, vec![vec![1, 0, 1], vec![2, 1, 0]]),
            (Family::G2, 2, vec![vec![1, 1], vec![2, 0]]),
        ];
        for (f, r, lams) in cases {
            let rs = RootSystem::new(f, r).unwrap();
            for lam in lams {
                let t = freudenthal(&rs, &lam);
                assert_eq!(t.total(&rs), rs.dim_of_labels(&lam).to_u128().unwrap());
                for (mu, &m) in &t.dominant {
                    assert_eq!(kostant_mult(&rs, &lam, mu), m as i128, "{f}{r} {lam:?} {mu:?}");
                }
            }
        }
    }

    #[test]
    fn entries_are_weyl_invariant() {
        let rs = RootSystem::new(Family::B, 3).unwrap();
        let g = WeylGroup::new(&rs).unwrap();
        let t = freudenthal(&rs, &[1, 0, 1]);
        let all = t.entries(&rs);
        for (wt, m) in &all {
            for e in g.elements() {
                assert_eq!(all.get(&e.act_labels(wt)), Some(m));
            }
        }
    }

    #[test]
    fn e6_and_f4_weights() {
        let e6 = RootSystem::new(Family::E6, 6).unwrap();
        let t = freudenthal(&e6, &[1, 0, 0, 0, 0, 0]);
        assert_eq!(t.total(&e6), 27);
        let f4 = RootSystem::new(Family::F4, 4).unwrap();
        let t = freudenthal(&f4, &[0, 0, 0, 1]);
        assert_eq!(t.total(&f4), 26);
        assert_eq!(t.mult(&f4, &[0, 0, 0, 0]), 2);
    }

    #[test]
    fn known_multiplicities() {
        let rs = RootSystem::b2();
        let e = LrEngine::new(&rs).unwrap();
        let cases = [
            ([5, 6], [3, 4], [5, 6], 10),
            ([5, 6], [3, 4], [6, 4], 10),
            ([5, 6], [3, 4], [2, 10], 8),
            ([5, 6], [3, 4], [0, 10], 3),
            ([4, 7], [5, 3], [2, 4], 5),
            ([1, 0], [1, 0], [1, 0], 0),
            ([2, 0], [2, 0], [2, 0], 1),
            ([0, 1], [0, 1], [0, 1], 0),
        ];
        for (l, m, n, c) in cases {
            assert_eq!(e.klimyk(&l, &m, &n).unwrap(), c, "{l:?} {m:?} {n:?}");
            assert_eq!(e.steinberg(&l, &m, &n).unwrap(), c, "{l:?} {m:?} {n:?}");
        }
    }

    #[test]
    fn decompositions() {
        let rs = RootSystem::b2();
        let d = tensor_decompose(&rs, &w(&[1, 0]), &w(&[1, 0])).unwrap();
        let expect: BTreeMap<Labels, u64> =
            [(vec![0, 0], 1), (vec![0, 2], 1), (vec![2, 0], 1)].into_iter().collect();
        assert_eq!(d, expect);
        let d = tensor_decompose(&rs, &w(&[3, 6]), &w(&[4, 2])).unwrap();
        assert_eq!(d.get(&vec![1, 4]), Some(&3));
        let d = tensor_decompose(&rs, &w(&[0, 0]), &w(&[2, 5])).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(vec![2, 5], 1)]);
    }

    #[test]
    fn dimension_sum_rule() {
        for (f, r, pairs) in [
            (Family::B, 2, vec![(vec![2, 3], vec![1, 4]), (vec![3, 6], vec![4, 2])]),
            (Family::B, 3, vec![(vec![1, 0, 1], vec![0, 1, 1])]),
            (Family::G2, 2, vec![(vec![1, 1], vec![2, 0])]),
            (Family::D, 4, vec![(vec![1, 0, 0, 1], vec![0, 1, 0, 0])]),
        ] {
            let rs = RootSystem::new(f, r).unwrap();
            let e = LrEngine::new(&rs).unwrap();
            for (l, m) in pairs {
                let d = e.tensor_decompose(&l, &m).unwrap();
                let lhs: u128 = d.iter().map(|(n, &c)| c as u128 * e.dim(n)).sum();
                assert_eq!(lhs, e.dim(&l) * e.dim(&m));
                for (n, &c) in &d {
                    assert_eq!(e.klimyk(&l, &m, n).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn triple_products() {
        let rs = RootSystem::b2();
        let e = LrEngine::new(&rs).unwrap();
        assert_eq!(e.triple(&[3, 6], &[4, 2], &[0, 1], &[1, 3]).unwrap(), 7);
        assert_eq!(
            e.triple(&[3, 6], &[4, 2], &[0, 0], &[1, 4]).unwrap(),
            e.klimyk(&[3, 6], &[4, 2], &[1, 4]).unwrap()
        );
        assert_eq!(e.triple(&[3, 6], &[4, 2], &[0, 1], &[1, 4]).unwrap(), 0);
    }

    #[test]
    fn kostant_examples() {
        use crate::rational::qi;
        let rs = RootSystem::b2();
        let simple = |a, b| Weight::new(vec![qi(a), qi(b)], Basis::SimpleRoot);
        assert_eq!(kostant_partition(&rs, &simple(0, 0)).unwrap(), 1);
        assert_eq!(kostant_partition(&rs, &simple(1, 1)).unwrap(), 2);
        assert_eq!(kostant_partition(&rs, &w(&[0, 1])).unwrap(), 0);
    }

    #[test]
    fn guards() {
        let rs = RootSystem::b2();
        let e = LrEngine::with_config(&rs, MultiplicityConfig { max_dim: 100 }).unwrap();
        assert!(matches!(e.weights(&[5, 5]), Err(Error::SizeGuard { .. })));
        assert!(e.klimyk(&[-1, 0], &[0, 0], &[0, 0]).is_err());
        let e7 = RootSystem::new(Family::E7, 7).unwrap();
        assert!(LrEngine::new(&e7).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_and_unit(l1 in 0i64..6, l2 in 0i64..6, m1 in 0i64..6, m2 in 0i64..6, n1 in 0i64..8, n2 in 0i64..8) {
            let rs = RootSystem::b2();
            let e = LrEngine::new(&rs).unwrap();
            let (l, m, n) = ([l1, l2], [m1, m2], [n1, n2]);
            prop_assert_eq!(e.klimyk(&l, &m, &n).unwrap(), e.klimyk(&m, &l, &n).unwrap());
            prop_assert_eq!(e.klimyk(&l, &[0, 0], &n).unwrap(), u64::from(l == n));
            prop_assert_eq!(e.steinberg(&[0, 0], &m, &n).unwrap(), u64::from(m == n));
        }
    }
}
