//! Root systems of the simple Lie algebras, weights and basis changes.
//!
//! Every family is realized with rational simple roots in an orthonormal
//! basis `e_i`:
//!
//! | family | ambient | simple roots | long root length² |
//! |--------|---------|--------------|-------------------|
//! | `A_r`  | R^(r+1) | `e_i - e_(i+1)` | 2 |
//! | `B_r`  | R^r     | `e_i - e_(i+1)`, `e_r` | 2 |
//! | `C_r`  | R^r     | `e_i - e_(i+1)`, `2 e_r` | 4 |
//! | `D_r`  | R^r     | `e_i - e_(i+1)`, `e_(r-1) + e_r` | 2 |
//! | `G2`   | R^3     | `e1 - e2`, `-2 e1 + e2 + e3` | 6 |
//! | `F4`   | R^4     | `e2 - e3`, `e3 - e4`, `e4`, `(e1 - e2 - e3 - e4)/2` | 2 |
//! | `E6..E8` | R^8   | Bourbaki numbering | 2 |
//!
//! For `B2` this is `alpha_1 = e1 - e2`, `alpha_2 = e2`, so that `omega_1 = e1`
//! and `omega_2 = (e1 + e2)/2`. Quantities that depend on the normalization
//! ([`RootSystem::delta_g`]) use the stored realization;
//! [`constants::kappa_constants`] rescales to long roots of length² 2.
//!
//! Positive roots are generated from the Cartan matrix by root strings, and
//! are stored both in simple-root coordinates (integers) and in the
//! orthonormal basis.

pub mod constants;
pub mod weyl;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{inverse, qi, Rational};

pub use weyl::{B2Weyl, WeylElement, WeylGroup};

/// Dynkin labels of an integral weight.
pub type Labels = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    pub fn parse(s: &str) -> Result<(Family, Option<usize>)> {
        let s = s.trim();
        let (head, tail) = s.split_at(1.min(s.len()));
        let rank: Option<usize> = if tail.is_empty() {
            None
        } else {
            Some(
                tail.parse()
                    .map_err(|_| Error::Parse(format!("bad algebra {s:?}")))?,
            )
        };
        let fam = match (head.to_ascii_uppercase().as_str(), rank) {
            ("A", _) => Family::A,
            ("B", _) => Family::B,
            ("C", _) => Family::C,
            ("D", _) => Family::D,
            ("E", Some(6)) => Family::E6,
            ("E", Some(7)) => Family::E7,
            ("E", Some(8)) => Family::E8,
            ("F", Some(4) | None) => Family::F4,
            ("G", Some(2) | None) => Family::G2,
            _ => return Err(Error::Parse(format!("unknown algebra {s:?}"))),
        };
        Ok((fam, rank))
    }

    pub fn is_exceptional(self) -> bool {
        matches!(
            self,
            Family::E6 | Family::E7 | Family::E8 | Family::F4 | Family::G2
        )
    }

    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }

    fn letter(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 | Family::E7 | Family::E8 => "E",
            Family::F4 => "F",
            Family::G2 => "G",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Fundamental weights `omega_i`.
    Dynkin,
    /// Simple roots `alpha_i`.
    SimpleRoot,
    /// The ambient orthonormal `e_i`.
    Orthonormal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<Rational>,
    pub basis: Basis,
}

impl Weight {
    pub fn new(coords: Vec<Rational>, basis: Basis) -> Self {
        Weight { coords, basis }
    }

    pub fn dynkin(labels: &[i64]) -> Self {
        Weight::new(labels.iter().map(|&x| qi(x)).collect(), Basis::Dynkin)
    }

    pub fn orthonormal(coords: Vec<Rational>) -> Self {
        Weight::new(coords, Basis::Orthonormal)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    ambient_dim: usize,
    simple_roots: Vec<Vec<Rational>>,
    positive_roots: Vec<Vec<Rational>>,
    positive_roots_simple: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    cartan_inv: Vec<Vec<Rational>>,
    /// `cartan_inv` as integers over the common denominator `inv_den`.
    inv_num: Vec<Vec<i64>>,
    inv_den: i64,
    /// Integers proportional to `simple_norms`.
    norm_int: Vec<i64>,
    /// `<alpha_i, alpha_i>` per simple root.
    simple_norms: Vec<Rational>,
    long_norm: Rational,
    dual_coxeter: i64,
    exponents: Vec<i64>,
}

fn ortho_unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn add_scaled(v: &mut [Rational], w: &[Rational], s: &Rational) {
    for (a, b) in v.iter_mut().zip(w) {
        *a += b * s;
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn from_ints(n: usize, pairs: &[(usize, i64)], den: i64) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    for &(i, c) in pairs {
        v[i] = Rational::new(BigInt::from(c), BigInt::from(den));
    }
    v
}

fn simple_roots_for(family: Family, rank: usize) -> Result<(usize, Vec<Vec<Rational>>)> {
    let bad = || Error::UnsupportedRootSystem {
        family: family.to_string(),
        rank,
    };
    if let Some(r) = family.fixed_rank() {
        if r != rank {
            return Err(bad());
        }
    }
    let diff = |n: usize, i: usize| from_ints(n, &[(i, 1), (i + 1, -1)], 1);
    let roots = match family {
        Family::A => {
            if rank < 1 {
                return Err(bad());
            }
            let n = rank + 1;
            (n, (0..rank).map(|i| diff(n, i)).collect())
        }
        Family::B | Family::C | Family::D => {
            let min = if family == Family::D { 3 } else { 2 };
            if rank < min {
                return Err(bad());
            }
            let n = rank;
            let mut v: Vec<_> = (0..rank - 1).map(|i| diff(n, i)).collect();
            v.push(match family {
                Family::B => ortho_unit(n, n - 1),
                Family::C => from_ints(n, &[(n - 1, 2)], 1),
                _ => from_ints(n, &[(n - 2, 1), (n - 1, 1)], 1),
            });
            (n, v)
        }
        Family::G2 => (
            3,
            vec![
                from_ints(3, &[(0, 1), (1, -1)], 1),
                from_ints(3, &[(0, -2), (1, 1), (2, 1)], 1),
            ],
        ),
        Family::F4 => (
            4,
            vec![
                from_ints(4, &[(1, 1), (2, -1)], 1),
                from_ints(4, &[(2, 1), (3, -1)], 1),
                ortho_unit(4, 3),
                from_ints(4, &[(0, 1), (1, -1), (2, -1), (3, -1)], 2),
            ],
        ),
        Family::E6 | Family::E7 | Family::E8 => {
            let n = 8;
            let mut v = vec![
                from_ints(
                    n,
                    &[
                        (0, 1),
                        (1, -1),
                        (2, -1),
                        (3, -1),
                        (4, -1),
                        (5, -1),
                        (6, -1),
                        (7, 1),
                    ],
                    2,
                ),
                from_ints(n, &[(0, 1), (1, 1)], 1),
                from_ints(n, &[(0, -1), (1, 1)], 1),
            ];
            for i in 1..rank - 2 {
                v.push(from_ints(n, &[(i, -1), (i + 1, 1)], 1));
            }
            (n, v)
        }
    };
    Ok(roots)
}

fn exponents_for(family: Family, rank: usize) -> Vec<i64> {
    let r = rank as i64;
    match family {
        Family::A => (1..=r).collect(),
        Family::B | Family::C => (1..=r).map(|i| 2 * i - 1).collect(),
        Family::D => {
            let mut e: Vec<i64> = (1..r).map(|i| 2 * i - 1).collect();
            e.push(r - 1);
            e.sort_unstable();
            e
        }
        Family::E6 => vec![1, 4, 5, 7, 8, 11],
        Family::E7 => vec![1, 5, 7, 9, 11, 13, 17],
        Family::E8 => vec![1, 7, 11, 13, 17, 19, 23, 29],
        Family::F4 => vec![1, 5, 7, 11],
        Family::G2 => vec![1, 5],
    }
}

fn dual_coxeter_for(family: Family, rank: usize) -> i64 {
    let r = rank as i64;
    match family {
        Family::A => r + 1,
        Family::B => 2 * r - 1,
        Family::C => r + 1,
        Family::D => 2 * r - 2,
        Family::E6 => 12,
        Family::E7 => 18,
        Family::E8 => 30,
        Family::F4 => 9,
        Family::G2 => 4,
    }
}

/// Positive roots in simple-root coordinates, generated by root strings.
fn positive_roots_from_cartan(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut seen: HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut queue: VecDeque<usize> = (0..r).collect();
    while let Some(idx) = queue.pop_front() {
        let beta = roots[idx].clone();
        for i in 0..r {
            // p: how far the alpha_i string extends downwards from beta
            let mut p = 0;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if seen.contains(&down) {
                    p += 1;
                } else {
                    break;
                }
            }
            let pairing: i64 = (0..r).map(|j| beta[j] * cartan[j][i]).sum();
            if p - pairing > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if seen.insert(up.clone()) {
                    roots.push(up);
                    queue.push_back(roots.len() - 1);
                }
            }
        }
    }
    roots.sort_by_key(|c| (c.iter().sum::<i64>(), std::cmp::Reverse(c.clone())));
    roots
}

impl RootSystem {
    /// Builds the root system of the given family and rank.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let (ambient_dim, simple_roots) = simple_roots_for(family, rank)?;
        let simple_norms: Vec<Rational> = simple_roots.iter().map(|a| dot(a, a)).collect();
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let v = qi(2) * dot(&simple_roots[i], &simple_roots[j]) / &simple_norms[j];
                        crate::rational::to_i64(&v).expect("Cartan entries are integers")
                    })
                    .collect()
            })
            .collect();
        let cartan_q: Vec<Vec<Rational>> = cartan
            .iter()
            .map(|row| row.iter().map(|&x| qi(x)).collect())
            .collect();
        let cartan_inv = inverse(&cartan_q).expect("Cartan matrix is invertible");
        let inv_den = cartan_inv
            .iter()
            .flatten()
            .fold(1i64, |d, x| num_integer::lcm(d, x.denom().to_i64().expect("small denominator")));
        let inv_num = cartan_inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| crate::rational::to_i64(&(x * qi(inv_den))).expect("integral"))
                    .collect()
            })
            .collect();
        let norm_den = simple_norms
            .iter()
            .fold(1i64, |d, x| num_integer::lcm(d, x.denom().to_i64().expect("small denominator")));
        let norm_int = simple_norms
            .iter()
            .map(|x| crate::rational::to_i64(&(x * qi(norm_den))).expect("integral"))
            .collect();
        let positive_roots_simple = positive_roots_from_cartan(&cartan);
        let positive_roots: Vec<Vec<Rational>> = positive_roots_simple
            .iter()
            .map(|c| {
                let mut v = vec![Rational::zero(); ambient_dim];
                for (i, &ci) in c.iter().enumerate() {
                    add_scaled(&mut v, &simple_roots[i], &qi(ci));
                }
                v
            })
            .collect();
        let long_norm = positive_roots
            .iter()
            .map(|a| dot(a, a))
            .max()
            .expect("at least one root");
        Ok(RootSystem {
            family,
            rank,
            ambient_dim,
            simple_roots,
            positive_roots,
            positive_roots_simple,
            cartan,
            cartan_inv,
            inv_num,
            inv_den,
            norm_int,
            simple_norms,
            long_norm,
            dual_coxeter: dual_coxeter_for(family, rank),
            exponents: exponents_for(family, rank),
        })
    }

    pub fn b2() -> Self {
        RootSystem::new(Family::B, 2).expect("B2 is supported")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn simple_roots(&self) -> &[Vec<Rational>] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Vec<Rational>] {
        &self.positive_roots
    }

    /// Positive roots in simple-root coordinates, simple roots first.
    pub fn positive_roots_simple(&self) -> &[Vec<i64>] {
        &self.positive_roots_simple
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn cartan_inverse(&self) -> &[Vec<Rational>] {
        &self.cartan_inv
    }

    pub fn dual_coxeter_number(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn coxeter_exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn simple_root_norms(&self) -> &[Rational] {
        &self.simple_norms
    }

    /// `<theta, theta>` for a long root in the stored realization.
    pub fn long_root_norm(&self) -> &Rational {
        &self.long_norm
    }

    /// Weyl vector, Dynkin labels `(1, ..., 1)`.
    pub fn weyl_vector(&self) -> Weight {
        Weight::dynkin(&self.rho_labels())
    }

    pub fn rho_labels(&self) -> Labels {
        vec![1; self.rank]
    }

    /// Dynkin labels of the simple root `alpha_i` (row `i` of the Cartan matrix).
    pub fn simple_root_labels(&self, i: usize) -> &[i64] {
        &self.cartan[i]
    }

    fn check_len(&self, w: &Weight) -> Result<()> {
        let expected = match w.basis {
            Basis::Orthonormal => self.ambient_dim,
            _ => self.rank,
        };
        if w.coords.len() != expected {
            return Err(Error::RankMismatch {
                expected,
                got: w.coords.len(),
            });
        }
        Ok(())
    }

    /// Re-expresses `w` in `basis`.
    ///
    /// Orthonormal vectors are projected onto the span of the roots (only
    /// relevant for `A_r`, whose ambient space has one extra dimension).
    pub fn convert(&self, w: &Weight, basis: Basis) -> Result<Weight> {
        self.check_len(w)?;
        if w.basis == basis {
            return Ok(w.clone());
        }
        let r = self.rank;
        let dynkin: Vec<Rational> = match w.basis {
            Basis::Dynkin => w.coords.clone(),
            Basis::SimpleRoot => (0..r)
                .map(|j| (0..r).map(|i| &w.coords[i] * qi(self.cartan[i][j])).sum())
                .collect(),
            Basis::Orthonormal => (0..r)
                .map(|j| qi(2) * dot(&w.coords, &self.simple_roots[j]) / &self.simple_norms[j])
                .collect(),
        };
        let coords = match basis {
            Basis::Dynkin => dynkin,
            Basis::SimpleRoot => (0..r)
                .map(|j| (0..r).map(|i| &dynkin[i] * &self.cartan_inv[i][j]).sum())
                .collect(),
            Basis::Orthonormal => {
                let simple: Vec<Rational> = (0..r)
                    .map(|j| (0..r).map(|i| &dynkin[i] * &self.cartan_inv[i][j]).sum())
                    .collect();
                let mut v = vec![Rational::zero(); self.ambient_dim];
                for (i, c) in simple.iter().enumerate() {
                    add_scaled(&mut v, &self.simple_roots[i], c);
                }
                v
            }
        };
        Ok(Weight::new(coords, basis))
    }

    pub fn to_orthonormal(&self, w: &Weight) -> Result<Vec<Rational>> {
        Ok(self.convert(w, Basis::Orthonormal)?.coords)
    }

    /// Integral Dynkin labels of `w`.
    pub fn labels(&self, w: &Weight) -> Result<Labels> {
        let d = self.convert(w, Basis::Dynkin)?;
        d.coords
            .iter()
            .map(|x| {
                crate::rational::to_i64(x).ok_or_else(|| {
                    Error::NonIntegral(
                        d.coords
                            .iter()
                            .map(crate::rational::fmt)
                            .collect::<Vec<_>>()
                            .join(","),
                    )
                })
            })
            .collect()
    }

    /// Labels of a dominant integral weight, or an error naming the problem.
    pub fn dominant_labels(&self, w: &Weight) -> Result<Labels> {
        let l = self.labels(w)?;
        self.check_dominant(&l)?;
        Ok(l)
    }

    pub fn check_dominant(&self, l: &[i64]) -> Result<()> {
        if l.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: l.len(),
            });
        }
        if l.iter().any(|&x| x < 0) {
            return Err(Error::NonDominant(format!("{l:?}")));
        }
        Ok(())
    }

    /// Simple-root coordinates of a weight given by Dynkin labels.
    pub fn labels_to_simple(&self, l: &[i64]) -> Vec<Rational> {
        let r = self.rank;
        (0..r)
            .map(|j| (0..r).map(|i| qi(l[i]) * &self.cartan_inv[i][j]).sum())
            .collect()
    }

    /// `<alpha, lambda>` for a positive root in simple coordinates and a
    /// weight in Dynkin labels, in the stored normalization.
    pub fn pair_root_labels(&self, root_simple: &[i64], l: &[Rational]) -> Rational {
        root_simple
            .iter()
            .enumerate()
            .map(|(i, &c)| qi(c) * &l[i] * &self.simple_norms[i] / qi(2))
            .sum()
    }

    /// Weyl dimension formula, `prod <alpha, lambda + rho> / <alpha, rho>`.
    pub fn weyl_dimension(&self, w: &Weight) -> Result<BigInt> {
        let l = self.dominant_labels(w)?;
        Ok(self.dim_of_labels(&l))
    }

    /// Dimension of `V_lambda` for dominant labels (not re-checked).
    pub fn dim_of_labels(&self, l: &[i64]) -> BigInt {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for a in &self.positive_roots_simple {
            let pair = |x: &dyn Fn(usize) -> i64| -> i64 {
                a.iter().enumerate().map(|(i, &c)| c * self.norm_int[i] * x(i)).sum()
            };
            num *= pair(&|i| l[i] + 1);
            den *= pair(&|_| 1);
        }
        debug_assert!((&num % &den).is_zero());
        num / den
    }

    /// `prod_{alpha > 0} <alpha, x>` in the stored realization.
    pub fn delta_g(&self, x: &Weight) -> Result<Rational> {
        let v = self.to_orthonormal(x)?;
        Ok(self.positive_roots.iter().map(|a| dot(a, &v)).product())
    }

    /// Whether `lambda + mu - nu` lies in the root lattice.
    pub fn is_compatible(&self, lambda: &[i64], mu: &[i64], nu: &[i64]) -> bool {
        let sigma: Vec<i64> = (0..self.rank).map(|i| lambda[i] + mu[i] - nu[i]).collect();
        self.in_root_lattice(&sigma)
    }

    pub fn in_root_lattice(&self, l: &[i64]) -> bool {
        self.simple_coords_int(l).is_some()
    }

    pub fn is_simply_laced(&self) -> bool {
        self.simple_norms.iter().all(|n| n == &self.long_norm)
    }

    /// Simple-root coordinates of `l` if it lies in `Q`.
    pub fn simple_coords_int(&self, l: &[i64]) -> Option<Vec<i64>> {
        let r = self.rank;
        (0..r)
            .map(|j| {
                let n: i64 = (0..r).map(|i| l[i] * self.inv_num[i][j]).sum();
                (n % self.inv_den == 0).then(|| n / self.inv_den)
            })
            .collect()
    }

    /// `true` if all simple-root coordinates of `l` are nonnegative.
    pub fn is_nonneg_in_q(&self, l: &[i64]) -> bool {
        self.labels_to_simple(l).iter().all(|c| !c.is_negative())
    }
}

/// Row of the table of root-system statistics (`N_r`, `f_r`, `d_r`, and the
/// tabulated squared covolume).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n_r: u64,
    pub f_r: u64,
    pub d_r: u64,
    #[serde(with = "crate::rational::serde_bigint")]
    pub delta_r: BigInt,
}

pub fn table_row(family: Family, rank: usize) -> TableRow {
    let r = rank as u64;
    let p = |b: u64, e: u64| num_traits::pow(BigInt::from(b), e as usize);
    let pow2 = |e: i64| {
        if e >= 0 {
            p(2, e as u64)
        } else {
            BigInt::zero()
        }
    };
    match family {
        Family::A => TableRow {
            n_r: r * (r + 1) / 2,
            f_r: r * (r + 5) / 2,
            d_r: r * (r - 1) / 2,
            delta_r: p(r + 1, r - 1),
        },
        Family::B => TableRow {
            n_r: r * r,
            f_r: r * (r + 2),
            d_r: r * (r - 1),
            delta_r: p(2 * r - 1, r),
        },
        Family::C => TableRow {
            n_r: r * r,
            f_r: r * (r + 2),
            d_r: r * (r - 1),
            delta_r: pow2(r as i64 - 2) * p(r + 1, r),
        },
        Family::D => TableRow {
            n_r: r * (r - 1),
            f_r: r * (1 + r),
            d_r: r * (r - 2),
            delta_r: pow2(r as i64 - 2) * p(r - 1, r),
        },
        Family::E6 => TableRow {
            n_r: 36,
            f_r: 48,
            d_r: 30,
            delta_r: p(2, 12) * p(3, 5),
        },
        Family::E7 => TableRow {
            n_r: 63,
            f_r: 77,
            d_r: 56,
            delta_r: p(2, 6) * p(3, 14),
        },
        Family::E8 => TableRow {
            n_r: 120,
            f_r: 136,
            d_r: 112,
            delta_r: p(2, 8) * p(3, 8) * p(5, 8),
        },
        Family::F4 => TableRow {
            n_r: 24,
            f_r: 32,
            d_r: 20,
            delta_r: p(2, 2) * p(3, 8),
        },
        Family::G2 => TableRow {
            n_r: 6,
            f_r: 10,
            d_r: 4,
            delta_r: p(2, 4) * BigInt::from(3),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn all_small() -> Vec<RootSystem> {
        let mut v = vec![];
        for r in 1..=8 {
            v.push(RootSystem::new(Family::A, r).unwrap());
        }
        for r in 2..=8 {
            v.push(RootSystem::new(Family::B, r).unwrap());
            v.push(RootSystem::new(Family::C, r).unwrap());
        }
        for r in 3..=8 {
            v.push(RootSystem::new(Family::D, r).unwrap());
        }
        for (f, r) in [
            (Family::E6, 6),
            (Family::E7, 7),
            (Family::E8, 8),
            (Family::F4, 4),
            (Family::G2, 2),
        ] {
            v.push(RootSystem::new(f, r).unwrap());
        }
        v
    }

    #[test]
    fn b2_roots_and_rho() {
        let b2 = RootSystem::b2();
        let roots: Vec<Vec<Rational>> = b2.positive_roots().to_vec();
        let expect = [
            vec![qi(1), qi(-1)],
            vec![qi(0), qi(1)],
            vec![qi(1), qi(0)],
            vec![qi(1), qi(1)],
        ];
        assert_eq!(roots.len(), 4);
        for e in &expect {
            assert!(roots.contains(e), "missing {e:?}");
        }
        let rho = b2.convert(&b2.weyl_vector(), Basis::SimpleRoot).unwrap();
        assert_eq!(rho.coords, vec![q(3, 2), qi(2)]);
        assert_eq!(b2.cartan_matrix(), &[vec![2, -2], vec![-1, 2]]);
    }

    #[test]
    fn unsupported_ranks() {
        assert!(RootSystem::new(Family::A, 0).is_err());
        assert!(RootSystem::new(Family::B, 1).is_err());
        assert!(RootSystem::new(Family::C, 1).is_err());
        assert!(RootSystem::new(Family::D, 2).is_err());
        assert!(RootSystem::new(Family::E6, 5).is_err());
        assert!(RootSystem::new(Family::G2, 3).is_err());
    }

    #[test]
    fn a1_has_one_root() {
        let a1 = RootSystem::new(Family::A, 1).unwrap();
        assert_eq!(a1.num_positive_roots(), 1);
    }

    #[test]
    fn counts_match_table() {
        for rs in all_small() {
            let row = table_row(rs.family(), rs.rank());
            assert_eq!(rs.num_positive_roots() as u64, row.n_r, "{}", rs.name());
            assert_eq!(row.n_r - rs.rank() as u64, row.d_r, "{}", rs.name());
            assert_eq!(row.f_r, row.n_r + 2 * rs.rank() as u64);
        }
        let b3 = RootSystem::new(Family::B, 3).unwrap();
        assert_eq!(b3.num_positive_roots(), 9);
        assert_eq!(table_row(Family::B, 3).d_r, 6);
    }

    #[test]
    fn cartan_matches_stored_roots_and_rho_is_ones() {
        for rs in all_small() {
            let r = rs.rank();
            for i in 0..r {
                for j in 0..r {
                    let v = qi(2) * dot(&rs.simple_roots()[i], &rs.simple_roots()[j])
                        / dot(&rs.simple_roots()[j], &rs.simple_roots()[j]);
                    assert_eq!(v, qi(rs.cartan_matrix()[i][j]));
                }
            }
            // rho = half sum of positive roots has Dynkin labels (1..1)
            let mut half = vec![Rational::zero(); rs.ambient_dim()];
            for a in rs.positive_roots() {
                add_scaled(&mut half, a, &q(1, 2));
            }
            let l = rs
                .convert(&Weight::orthonormal(half), Basis::Dynkin)
                .unwrap();
            assert!(l.coords.iter().all(|c| c == &qi(1)), "{}", rs.name());
        }
    }

    #[test]
    fn weyl_dimensions() {
        let b2 = RootSystem::b2();
        assert_eq!(b2.weyl_dimension(&Weight::dynkin(&[0, 0])).unwrap(), 1.into());
        assert_eq!(b2.weyl_dimension(&Weight::dynkin(&[1, 0])).unwrap(), 5.into());
        assert_eq!(b2.weyl_dimension(&Weight::dynkin(&[0, 1])).unwrap(), 4.into());
        assert_eq!(b2.weyl_dimension(&Weight::dynkin(&[0, 2])).unwrap(), 10.into());
        let b3 = RootSystem::new(Family::B, 3).unwrap();
        let dims: Vec<BigInt> = [
            [0, 0, 0],
            [1, 0, 0],
            [0, 1, 0],
            [2, 0, 0],
            [0, 0, 2],
            [1, 1, 0],
            [1, 0, 2],
        ]
        .iter()
        .map(|l| b3.dim_of_labels(l))
        .collect();
        let expect: Vec<BigInt> = [1, 7, 21, 27, 35, 105, 189]
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        assert_eq!(dims, expect);
        assert!(b2.weyl_dimension(&Weight::dynkin(&[-1, 0])).is_err());
        assert!(b2
            .weyl_dimension(&Weight::new(vec![q(1, 2), qi(0)], Basis::Dynkin))
            .is_err());
        let e8 = RootSystem::new(Family::E8, 8).unwrap();
        // adjoint of E8 is 248-dimensional; with Bourbaki numbering it is omega_8
        assert_eq!(e8.dim_of_labels(&[0, 0, 0, 0, 0, 0, 0, 1]), 248.into());
        let g2 = RootSystem::new(Family::G2, 2).unwrap();
        assert_eq!(g2.dim_of_labels(&[1, 0]), 7.into());
        assert_eq!(g2.dim_of_labels(&[0, 1]), 14.into());
    }

    #[test]
    fn delta_on_wall_and_rho() {
        let b2 = RootSystem::b2();
        let wall = Weight::orthonormal(vec![q(3, 2), q(3, 2)]);
        assert_eq!(b2.delta_g(&wall).unwrap(), qi(0));
        let rho = b2.delta_g(&b2.weyl_vector()).unwrap();
        let lam = b2.delta_g(&Weight::dynkin(&[2, 1])).unwrap();
        assert_eq!(lam / rho, qi(5));
        let a2 = RootSystem::new(Family::A, 2).unwrap();
        assert_eq!(a2.delta_g(&a2.weyl_vector()).unwrap(), qi(2));
    }

    #[test]
    fn compatibility() {
        let b2 = RootSystem::b2();
        assert!(!b2.is_compatible(&[0, 1], &[0, 1], &[0, 1]));
        assert!(b2.is_compatible(&[1, 0], &[1, 0], &[1, 0]));
        assert!(b2.is_compatible(&[3, 2], &[1, 5], &[4, 7]));
        let e6 = RootSystem::new(Family::E6, 6).unwrap();
        assert!(e6.is_compatible(&[1, 0, 0, 0, 0, 2], &[0; 6], &[1, 0, 0, 0, 0, 2]));
    }

    #[test]
    fn b2_fundamental_weights() {
        let b2 = RootSystem::b2();
        let w1 = b2.to_orthonormal(&Weight::dynkin(&[1, 0])).unwrap();
        let w2 = b2.to_orthonormal(&Weight::dynkin(&[0, 1])).unwrap();
        assert_eq!(w1, vec![qi(1), qi(0)]);
        assert_eq!(w2, vec![q(1, 2), q(1, 2)]);
        let l = b2.to_orthonormal(&Weight::dynkin(&[4, 7])).unwrap();
        assert_eq!(l, vec![q(15, 2), q(7, 2)]);
    }

    #[test]
    fn family_parsing() {
        assert_eq!(Family::parse("B2").unwrap(), (Family::B, Some(2)));
        assert_eq!(Family::parse("G2").unwrap(), (Family::G2, Some(2)));
        assert_eq!(Family::parse("E7").unwrap(), (Family::E7, Some(7)));
        assert_eq!(Family::parse("F").unwrap(), (Family::F4, None));
        assert!(Family::parse("X3").is_err());
    }
}
