//! Weyl group actions.
//!
//! General ranks enumerate the group from simple reflections acting on Dynkin
//! labels. `B2` also has an explicit 8-element form acting on orthonormal
//! coordinates: `(x1, x2)` goes to `(s1 * x_p(1), s2 * x_p(2))` where `p`
//! optionally swaps the two components.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::rational::{qi, Rational};

use super::{Basis, Labels, RootSystem, Weight};

/// Largest group [`WeylGroup::new`] is willing to list.
pub const MAX_WEYL_ORDER: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    /// `w = s_(word[0]) s_(word[1]) ...`, a reduced word.
    pub word: Vec<usize>,
    /// Action on Dynkin labels: `w(l) = matrix * l`.
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: vec![],
            matrix: (0..rank)
                .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn sign(&self) -> i32 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn act_labels(&self, l: &[i64]) -> Labels {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(l).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn act_rational(&self, l: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(l).map(|(a, b)| qi(*a) * b).sum())
            .collect()
    }
}

/// The full Weyl group of a root system, listed by breadth-first search.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let order = rs.weyl_order();
        if order > MAX_WEYL_ORDER {
            return Err(Error::WeylGroupTooLarge(order));
        }
        let r = rs.rank();
        let rho = rs.rho_labels();
        let id = WeylElement::identity(r);
        let mut seen: HashSet<Labels> = HashSet::new();
        seen.insert(rho.clone());
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 0..r {
                let cur = &elements[k];
                // s_i * w: apply s_i after w
                let matrix: Vec<Vec<i64>> = (0..r)
                    .map(|j| {
                        (0..r)
                            .map(|c| cur.matrix[j][c] - cur.matrix[i][c] * rs.cartan[i][j])
                            .collect()
                    })
                    .collect();
                let e = WeylElement {
                    word: std::iter::once(i).chain(cur.word.iter().copied()).collect(),
                    matrix,
                };
                if seen.insert(e.act_labels(&rho)) {
                    elements.push(e);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        debug_assert_eq!(elements.len() as u128, order);
        Ok(WeylGroup { elements })
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Element of the `B2` Weyl group in orthonormal coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct B2Weyl {
    pub swap: bool,
    pub sign1: i8,
    pub sign2: i8,
}

impl B2Weyl {
    pub const IDENTITY: B2Weyl = B2Weyl {
        swap: false,
        sign1: 1,
        sign2: 1,
    };

    /// All 8 elements, identity first.
    pub fn all() -> [B2Weyl; 8] {
        let mut out = [B2Weyl::IDENTITY; 8];
        let mut k = 0;
        for swap in [false, true] {
            for sign1 in [1, -1] {
                for sign2 in [1, -1] {
                    out[k] = B2Weyl { swap, sign1, sign2 };
                    k += 1;
                }
            }
        }
        out
    }

    pub fn sign(&self) -> i32 {
        let s = i32::from(self.sign1) * i32::from(self.sign2);
        if self.swap {
            -s
        } else {
            s
        }
    }

    pub fn apply<T>(&self, x: &[T; 2]) -> [T; 2]
    where
        T: Clone + std::ops::Neg<Output = T>,
    {
        let (a, b) = if self.swap {
            (x[1].clone(), x[0].clone())
        } else {
            (x[0].clone(), x[1].clone())
        };
        let a = if self.sign1 < 0 { -a } else { a };
        let b = if self.sign2 < 0 { -b } else { b };
        [a, b]
    }

    pub fn compose(&self, other: &B2Weyl) -> B2Weyl {
        // (self o other)(x); find by evaluating on a generic vector
        let probe = [3i64, 7];
        let y = self.apply(&other.apply(&probe));
        let swap = y[0].abs() == 7;
        B2Weyl {
            swap,
            sign1: y[0].signum() as i8,
            sign2: y[1].signum() as i8,
        }
    }
}

impl RootSystem {
    /// `|W| = prod (l_i + 1)` over the Coxeter exponents.
    pub fn weyl_order(&self) -> u128 {
        self.coxeter_exponents()
            .iter()
            .map(|&e| (e + 1) as u128)
            .product()
    }

    /// Simple reflection `s_i` on Dynkin labels.
    pub fn reflect(&self, i: usize, l: &mut [i64]) {
        let li = l[i];
        if li != 0 {
            for (j, x) in l.iter_mut().enumerate() {
                *x -= li * self.cartan[i][j];
            }
        }
    }

    /// Moves `l` into the dominant chamber in place and returns the sign of the
    /// Weyl element used, or 0 if `l` ends on a wall (some label zero).
    ///
    /// Intended for `rho`-shifted weights, where wall weights contribute
    /// nothing to alternating sums.
    pub fn reflect_to_dominant(&self, l: &mut [i64]) -> i32 {
        let mut sign = 1;
        while let Some(i) = l.iter().position(|&x| x < 0) {
            self.reflect(i, l);
            sign = -sign;
        }
        if l.contains(&0) {
            0
        } else {
            sign
        }
    }

    /// Dominant representative of the orbit of `l`.
    pub fn dominant_of(&self, l: &[i64]) -> Labels {
        let mut v = l.to_vec();
        while let Some(i) = v.iter().position(|&x| x < 0) {
            self.reflect(i, &mut v);
        }
        v
    }

    /// The Weyl orbit of `l` (any integral weight).
    pub fn orbit(&self, l: &[i64]) -> Vec<Labels> {
        let start = self.dominant_of(l);
        let mut seen: HashSet<Labels> = HashSet::new();
        seen.insert(start.clone());
        let mut out = vec![start];
        let mut k = 0;
        while k < out.len() {
            for i in 0..self.rank {
                if out[k][i] > 0 {
                    let mut v = out[k].clone();
                    self.reflect(i, &mut v);
                    if seen.insert(v.clone()) {
                        out.push(v);
                    }
                }
            }
            k += 1;
        }
        out
    }

    /// Size of the orbit of a dominant weight.
    pub fn orbit_size(&self, dominant: &[i64]) -> usize {
        self.orbit(dominant).len()
    }

    /// `w . x` for any basis. The result is in the basis of `x`.
    pub fn apply_weyl(&self, w: &WeylElement, x: &Weight) -> Result<Weight> {
        let d = self.convert(x, Basis::Dynkin)?;
        let moved = Weight::new(w.act_rational(&d.coords), Basis::Dynkin);
        self.convert(&moved, x.basis)
    }

    /// Explicit `B2` action on a weight in any basis.
    pub fn apply_b2(&self, w: &B2Weyl, x: &Weight) -> Result<Weight> {
        if self.family != super::Family::B || self.rank != 2 {
            return Err(Error::Unsupported("explicit table is for B2".into()));
        }
        let o = self.to_orthonormal(x)?;
        let y = w.apply(&[o[0].clone(), o[1].clone()]);
        self.convert(&Weight::orthonormal(y.to_vec()), x.basis)
    }
}

/// Orthonormal `B2` coordinates of the Dynkin labels `(a, b)`.
pub fn b2_dynkin_to_ortho(a: &Rational, b: &Rational) -> [Rational; 2] {
    let half = b / qi(2);
    [a + &half, half]
}

/// Memoized lookup from a weight to its dominant representative.
#[derive(Debug, Default)]
pub struct DominantCache {
    map: HashMap<Labels, Labels>,
}

impl DominantCache {
    pub fn get(&mut self, rs: &RootSystem, l: &[i64]) -> Labels {
        if let Some(d) = self.map.get(l) {
            return d.clone();
        }
        let d = rs.dominant_of(l);
        self.map.insert(l.to_vec(), d.clone());
        d
    }
}

#[cfg(test)]
mod tests {
    use super::super::Family;
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn orders() {
        let cases = [
            (Family::A, 1, 2),
            (Family::A, 3, 24),
            (Family::B, 2, 8),
            (Family::B, 3, 48),
            (Family::C, 3, 48),
            (Family::D, 4, 192),
            (Family::G2, 2, 12),
            (Family::F4, 4, 1152),
        ];
        for (f, r, n) in cases {
            let rs = RootSystem::new(f, r).unwrap();
            assert_eq!(WeylGroup::new(&rs).unwrap().order(), n, "{f}{r}");
        }
        let e8 = RootSystem::new(Family::E8, 8).unwrap();
        assert!(matches!(
            WeylGroup::new(&e8),
            Err(Error::WeylGroupTooLarge(696_729_600))
        ));
    }

    #[test]
    fn b2_table_matches_generated_group() {
        let rs = RootSystem::b2();
        let g = WeylGroup::new(&rs).unwrap();
        let x = Weight::orthonormal(vec![q(7, 3), q(2, 5)]);
        let mut from_words: Vec<(Vec<Rational>, i32)> = g
            .elements()
            .iter()
            .map(|w| (rs.apply_weyl(w, &x).unwrap().coords, w.sign()))
            .collect();
        let mut from_table: Vec<(Vec<Rational>, i32)> = B2Weyl::all()
            .iter()
            .map(|w| (rs.apply_b2(w, &x).unwrap().coords, w.sign()))
            .collect();
        from_words.sort();
        from_table.sort();
        assert_eq!(from_words, from_table);
    }

    #[test]
    fn b2_examples() {
        let x = [qi(17), qi(4)];
        assert_eq!(B2Weyl::IDENTITY.apply(&x), x);
        let swap = B2Weyl {
            swap: true,
            sign1: 1,
            sign2: 1,
        };
        assert_eq!(swap.apply(&x), [qi(4), qi(17)]);
        assert_eq!(swap.sign(), -1);
        let flip = B2Weyl {
            swap: false,
            sign1: -1,
            sign2: 1,
        };
        assert_eq!(flip.apply(&x), [qi(-17), qi(4)]);
        assert_eq!(flip.sign(), -1);
        for a in B2Weyl::all() {
            assert_eq!(a.sign() * a.sign(), 1);
            for b in B2Weyl::all() {
                assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
            }
        }
    }

    #[test]
    fn reflect_to_dominant_signs() {
        let rs = RootSystem::b2();
        let mut l = vec![-1, 3];
        assert_eq!(rs.reflect_to_dominant(&mut l), -1);
        assert_eq!(l, vec![1, 1]);
        let mut wall = vec![-1, 2];
        assert_eq!(rs.reflect_to_dominant(&mut wall), 0);
        assert_eq!(rs.orbit(&[1, 0]).len(), 4);
        assert_eq!(rs.orbit(&[1, 1]).len(), 8);
    }

    proptest! {
        #[test]
        fn delta_is_skew(a in -50i64..50, b in -50i64..50, d in 1i64..9) {
            let rs = RootSystem::b2();
            let x = Weight::orthonormal(vec![q(a, d), q(b, d + 1)]);
            let base = rs.delta_g(&x).unwrap();
            for w in B2Weyl::all() {
                let y = rs.apply_b2(&w, &x).unwrap();
                prop_assert_eq!(rs.delta_g(&y).unwrap(), &base * qi(w.sign() as i64));
            }
        }

        #[test]
        fn delta_is_skew_b3(a in -20i64..20, b in -20i64..20, c in -20i64..20) {
            let rs = RootSystem::new(Family::B, 3).unwrap();
            let g = WeylGroup::new(&rs).unwrap();
            let x = Weight::new(vec![q(a, 3), qi(b), q(c, 2)], Basis::Dynkin);
            let base = rs.delta_g(&x).unwrap();
            for w in g.elements() {
                let y = rs.apply_weyl(w, &x).unwrap();
                prop_assert_eq!(rs.delta_g(&y).unwrap(), &base * qi(w.sign() as i64));
            }
        }

        #[test]
        fn conversions_round_trip(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in 1i64..7) {
            for (f, r) in [(Family::B, 3), (Family::C, 3), (Family::A, 3), (Family::G2, 2)] {
                let rs = RootSystem::new(f, r).unwrap();
                let coords: Vec<Rational> = [a, b, c].iter().take(r).map(|&x| q(x, d)).collect();
                for basis in [Basis::Dynkin, Basis::SimpleRoot] {
                    let w = Weight::new(coords.clone(), basis);
                    for via in [Basis::Dynkin, Basis::SimpleRoot, Basis::Orthonormal] {
                        let there = rs.convert(&w, via).unwrap();
                        let back = rs.convert(&there, basis).unwrap();
                        prop_assert_eq!(&back, &w);
                    }
                }
            }
        }

        #[test]
        fn dimension_is_one_only_at_zero(a in 0i64..6, b in 0i64..6, c in 0i64..6) {
            let rs = RootSystem::new(Family::B, 3).unwrap();
            let d = rs.dim_of_labels(&[a, b, c]);
            prop_assert!(d >= 1.into());
            prop_assert_eq!(d == 1.into(), a == 0 && b == 0 && c == 0);
        }
    }
}
