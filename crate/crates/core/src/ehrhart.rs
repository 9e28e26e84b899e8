//! Stretching quasi-polynomials `P(s) = C_{s lambda, s mu}^{s nu}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::bzpolytope::RationalPolygon;
use crate::error::{Error, Result};
use crate::multiplicity::LrEngine;
use crate::rational::{fmt, qi, solve, Rational};

/// Polynomial in `s` per residue class of `s` modulo `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub period: usize,
    /// `coeffs[r][k]` multiplies `s^k` when `s = r (mod period)`.
    pub coeffs: Vec<Vec<Rational>>,
}

impl QuasiPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn class_of(&self, s: i64) -> usize {
        s.rem_euclid(self.period as i64) as usize
    }

    pub fn eval(&self, s: i64) -> Rational {
        let c = &self.coeffs[self.class_of(s)];
        let x = qi(s);
        c.iter().rev().fold(Rational::zero(), |acc, k| acc * &x + k)
    }

    /// The common top coefficient of all classes.
    pub fn leading_coefficient(&self) -> Result<Rational> {
        let d = self.degree();
        let first = &self.coeffs[0][d];
        if self.coeffs.iter().any(|c| &c[d] != first) {
            return Err(Error::NonConstantLeading);
        }
        Ok(first.clone())
    }

    /// Top coefficient of one residue class.
    pub fn class_leading(&self, class: usize) -> Rational {
        self.coeffs[class][self.degree()].clone()
    }

    /// Human-readable form of one class, e.g. `7/4 s^2 + 5/2 s + 1`.
    pub fn class_string(&self, class: usize) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs[class].iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = match k {
                0 => fmt(c),
                _ => {
                    let head = if c == &Rational::one() {
                        String::new()
                    } else if c == &-Rational::one() {
                        "-".into()
                    } else {
                        format!("{} ", fmt(c))
                    };
                    if k == 1 {
                        format!("{head}s")
                    } else {
                        format!("{head}s^{k}")
                    }
                }
            };
            parts.push(term);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

impl Serialize for QuasiPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Classes<'a>(&'a [Vec<Rational>]);
        impl Serialize for Classes<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (r, c) in self.0.iter().enumerate() {
                    let v: Vec<String> = c.iter().map(fmt).collect();
                    m.serialize_entry(&r.to_string(), &v)?;
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("QuasiPolynomial", 2)?;
        st.serialize_field("period", &self.period)?;
        st.serialize_field("residue_classes", &Classes(&self.coeffs))?;
        st.end()
    }
}

/// Default fitting window `0..=period * (degree + 2) - 1`: `degree + 2`
/// samples per class, so every class has one sample checking the fit.
pub fn default_sample_range(degree: usize, period: usize) -> std::ops::RangeInclusive<i64> {
    0..=(period * (degree + 2)) as i64 - 1
}

/// Exact fit of a quasi-polynomial of the given degree and period.
///
/// Each class is solved from its first `degree + 1` samples and checked on
/// the rest.
pub fn fit_quasi_polynomial(
    samples: &BTreeMap<i64, Rational>,
    degree: usize,
    period: usize,
) -> Result<QuasiPolynomial> {
    if period == 0 {
        return Err(Error::Precondition("period must be positive".into()));
    }
    let mut coeffs = Vec::with_capacity(period);
    for class in 0..period {
        let pts: Vec<(i64, &Rational)> = samples
            .iter()
            .filter(|(s, _)| s.rem_euclid(period as i64) as usize == class)
            .map(|(s, v)| (*s, v))
            .collect();
        if pts.len() < degree + 1 {
            return Err(Error::InsufficientSamples {
                class,
                need: degree + 1,
                have: pts.len(),
            });
        }
        let (head, tail) = pts.split_at(degree + 1);
        let a: Vec<Vec<Rational>> = head
            .iter()
            .map(|(s, _)| (0..=degree).map(|k| num_traits::pow(qi(*s), k)).collect())
            .collect();
        let b: Vec<Rational> = head.iter().map(|(_, v)| (*v).clone()).collect();
        let c = solve(a, b).expect("distinct nodes give a regular Vandermonde matrix");
        for (s, v) in tail {
            let x = qi(*s);
            let got = c.iter().rev().fold(Rational::zero(), |acc, k| acc * &x + k);
            if &got != *v {
                return Err(Error::InconsistentSamples {
                    degree,
                    period,
                    s: *s,
                });
            }
        }
        coeffs.push(c);
    }
    Ok(QuasiPolynomial { period, coeffs })
}

/// [`fit_quasi_polynomial`] for integer samples.
pub fn fit_counts(
    samples: &BTreeMap<i64, u64>,
    degree: usize,
    period: usize,
) -> Result<QuasiPolynomial> {
    let q: BTreeMap<i64, Rational> = samples.iter().map(|(&s, &v)| (s, qi(v as i64))).collect();
    fit_quasi_polynomial(&q, degree, period)
}

fn scale(l: &[i64], s: i64) -> Vec<i64> {
    l.iter().map(|x| x * s).collect()
}

/// `C_{s lambda, s mu}^{s nu}` for each `s`, evaluated in parallel.
pub fn stretched_samples(
    engine: &LrEngine,
    lambda: &[i64],
    mu: &[i64],
    nu: &[i64],
    range: impl IntoIterator<Item = i64>,
) -> Result<BTreeMap<i64, u64>> {
    let ss: Vec<i64> = range.into_iter().collect();
    ss.par_iter()
        .map(|&s| {
            engine
                .klimyk(&scale(lambda, s), &scale(mu, s), &scale(nu, s))
                .map(|c| (s, c))
        })
        .collect()
}

/// Lattice counts of the dilations `s P` of a polygon.
pub fn polygon_samples(
    poly: &RationalPolygon,
    range: impl IntoIterator<Item = i64>,
) -> Result<BTreeMap<i64, u64>> {
    range
        .into_iter()
        .map(|s| {
            poly.dilate(s)
                .lattice_point_count(crate::bzpolytope::LatticeMode::Bz)
                .map(|c| (s, c))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReciprocityReport {
    #[serde(with = "crate::rational::serde_rational")]
    pub q_at_minus_one: Rational,
    pub dim: usize,
    pub interior: u64,
    /// `(-1)^dim Q(-1)` equals the interior count.
    pub holds: bool,
}

/// Ehrhart–Macdonald reciprocity against the polygon's interior count.
pub fn reciprocity_check(q: &QuasiPolynomial, poly: &RationalPolygon) -> Result<ReciprocityReport> {
    let (_, interior) = poly.boundary_interior_counts()?;
    let dim = poly.dim().unwrap_or(0);
    let v = q.eval(-1);
    let signed = if dim.is_multiple_of(2) { v.clone() } else { -v.clone() };
    Ok(ReciprocityReport {
        holds: signed == qi(interior as i64),
        q_at_minus_one: v,
        dim,
        interior,
    })
}
