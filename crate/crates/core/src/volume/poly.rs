//! Bivariate polynomials with exact coefficients and their integrals over
//! polygons.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bzpolytope::Point;
use crate::rational::{qi, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    /// `(i, j) -> c` for `c x^i y^j`.
    pub terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Poly2 { terms }
    }

    /// `a x + b y + c`.
    pub fn linear(a: &Rational, b: &Rational, c: &Rational) -> Self {
        Poly2::monomial(a.clone(), 1, 0) + Poly2::monomial(b.clone(), 0, 1) + Poly2::constant(c.clone())
    }

    /// `c0 + c1 x + c2 y + c3 x^2 + c4 x y + c5 y^2`.
    pub fn quadratic(c: &[Rational; 6]) -> Self {
        let idx = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        idx.iter()
            .zip(c)
            .fold(Poly2::zero(), |acc, (&(i, j), k)| acc + Poly2::monomial(k.clone(), i, j))
    }

    /// Inverse of [`Poly2::quadratic`] for polynomials of degree at most 2.
    pub fn quadratic_coeffs(&self) -> [Rational; 6] {
        let g = |i, j| self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero);
        [g(0, 0), g(1, 0), g(0, 1), g(2, 0), g(1, 1), g(0, 2)]
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn scale(&self, k: &Rational) -> Poly2 {
        let mut out = Poly2::zero();
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(*e, c * k);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        (0..n).fold(Poly2::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .sum()
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| crate::rational::to_f64(c) * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    /// `p(x(u, w), y(u, w))` for affine `x`, `y` given as polynomials in `(u, w)`.
    pub fn compose(&self, x: &Poly2, y: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            out = out + (&x.pow(i) * &y.pow(j)).scale(c);
        }
        out
    }

    /// Integral over the unit simplex `u, w >= 0, u + w <= 1`.
    fn integrate_unit_simplex(&self) -> Rational {
        let fact = |n: u32| (1..=n).fold(BigInt::one(), |a, k| a * k);
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * Rational::new(fact(a) * fact(b), fact(a + b + 2)))
            .sum()
    }

    /// Exact integral over a triangle.
    pub fn integrate_triangle(&self, p: &Point, q: &Point, r: &Point) -> Rational {
        let x = Poly2::linear(&(&q[0] - &p[0]), &(&r[0] - &p[0]), &p[0]);
        let y = Poly2::linear(&(&q[1] - &p[1]), &(&r[1] - &p[1]), &p[1]);
        let jac = (&q[0] - &p[0]) * (&r[1] - &p[1]) - (&r[0] - &p[0]) * (&q[1] - &p[1]);
        let jac = if jac < Rational::zero() { -jac } else { jac };
        self.compose(&x, &y).integrate_unit_simplex() * jac
    }

    /// Exact integral over a convex polygon, by a fan from its first vertex.
    pub fn integrate_polygon(&self, vertices: &[Point]) -> Rational {
        let mut total = Rational::zero();
        for k in 1..vertices.len().saturating_sub(1) {
            total += self.integrate_triangle(&vertices[0], &vertices[k], &vertices[k + 1]);
        }
        total
    }

    /// Floating integral over a convex polygon with the same monomial rule.
    pub fn integrate_polygon_f64(&self, vertices: &[[f64; 2]]) -> f64 {
        let coeffs: Vec<((u32, u32), f64)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, crate::rational::to_f64(c)))
            .collect();
        let mut total = 0.0;
        for k in 1..vertices.len().saturating_sub(1) {
            total += integrate_triangle_f64(&coeffs, &vertices[0], &vertices[k], &vertices[k + 1]);
        }
        total
    }
}

/// Numeric version of [`Poly2::integrate_triangle`] via the monomial rule in
/// barycentric form.
fn integrate_triangle_f64(coeffs: &[((u32, u32), f64)], p: &[f64; 2], q: &[f64; 2], r: &[f64; 2]) -> f64 {
    let (ax, bx, cx) = (q[0] - p[0], r[0] - p[0], p[0]);
    let (ay, by, cy) = (q[1] - p[1], r[1] - p[1], p[1]);
    let jac = (ax * by - bx * ay).abs();
    if jac == 0.0 {
        return 0.0;
    }
    // expand each monomial in (u, w); degrees here are small
    let mut acc: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let lin = |a: f64, b: f64, c: f64| -> BTreeMap<(u32, u32), f64> {
        [((1, 0), a), ((0, 1), b), ((0, 0), c)].into_iter().collect()
    };
    let mul = |x: &BTreeMap<(u32, u32), f64>, y: &BTreeMap<(u32, u32), f64>| {
        let mut out: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for (&(i, j), a) in x {
            for (&(k, l), b) in y {
                *out.entry((i + k, j + l)).or_insert(0.0) += a * b;
            }
        }
        out
    };
    let xl = lin(ax, bx, cx);
    let yl = lin(ay, by, cy);
    for &((i, j), c) in coeffs {
        let mut t: BTreeMap<(u32, u32), f64> = [((0, 0), c)].into_iter().collect();
        for _ in 0..i {
            t = mul(&t, &xl);
        }
        for _ in 0..j {
            t = mul(&t, &yl);
        }
        for (e, v) in t {
            *acc.entry(e).or_insert(0.0) += v;
        }
    }
    let fact = |n: u32| (1..=n).fold(1.0f64, |a, k| a * k as f64);
    acc.iter()
        .map(|(&(a, b), v)| v * fact(a) * fact(b) / fact(a + b + 2))
        .sum::<f64>()
        * jac
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(mut self, rhs: Poly2) -> Poly2 {
        for (e, c) in rhs.terms {
            let v = self.terms.remove(&e).unwrap_or_else(Rational::zero) + c;
            if !v.is_zero() {
                self.terms.insert(e, v);
            }
        }
        self
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        self + rhs.scale(&qi(-1))
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut terms: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                *terms.entry((i + k, j + l)).or_insert_with(Rational::zero) += a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly2 { terms }
    }
}
