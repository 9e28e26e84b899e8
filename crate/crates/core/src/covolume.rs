//! Squared covolume `delta_r` of the lattice in the partition polytope's
//! span, by a Gram determinant and by a closed formula.
//!
//! Both assume the fundamental domain is spanned by the vectors used below;
//! agreement is evidence for that assumption, not a proof.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::rational::{det_bigint, fmt, qi, Rational};
use crate::rootsys::{table_row, Family, RootSystem};

/// `det G`, `G = I + A A^T`, `A` the non-simple positive roots in the
/// simple-root basis (one row per root).
pub fn gram_delta(rs: &RootSystem) -> BigInt {
    let rows: Vec<&Vec<i64>> = rs
        .positive_roots_simple()
        .iter()
        .filter(|c| c.iter().sum::<i64>() > 1)
        .collect();
    gram_delta_of(&rows)
}

fn gram_delta_of(rows: &[&Vec<i64>]) -> BigInt {
    let n = rows.len();
    let g: Vec<Vec<BigInt>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let s: i64 = rows[a].iter().zip(rows[b]).map(|(x, y)| x * y).sum();
                    BigInt::from(s + i64::from(a == b))
                })
                .collect()
        })
        .collect();
    if n == 0 {
        return BigInt::one();
    }
    det_bigint(g)
}

/// `(h^vee)^r / det C * prod_i <theta,theta>/<alpha_i,alpha_i>`.
pub fn formula_delta(rs: &RootSystem) -> Rational {
    let r = rs.rank();
    let cartan: Vec<Vec<BigInt>> = rs
        .cartan_matrix()
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let det_c = Rational::from_integer(det_bigint(cartan));
    let h = num_traits::pow(qi(rs.dual_coxeter_number()), r);
    let ratios: Rational = rs
        .simple_root_norms()
        .iter()
        .map(|n| rs.long_root_norm() / n)
        .product();
    h / det_c * ratios
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CovolumeReport {
    pub family: String,
    pub rank: usize,
    #[serde(with = "crate::rational::serde_bigint")]
    pub delta_gram: BigInt,
    #[serde(with = "crate::rational::serde_rational")]
    pub delta_formula: Rational,
    #[serde(serialize_with = "ser_opt_bigint")]
    pub table1_value: Option<BigInt>,
    pub agree: bool,
}

fn ser_opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn covolume_report(rs: &RootSystem) -> CovolumeReport {
    let gram = gram_delta(rs);
    let formula = formula_delta(rs);
    let table = Some(table_row(rs.family(), rs.rank()).delta_r);
    let agree = Rational::from_integer(gram.clone()) == formula
        && table.as_ref().is_none_or(|t| t == &gram);
    CovolumeReport {
        family: rs.family().to_string(),
        rank: rs.rank(),
        delta_gram: gram,
        delta_formula: formula,
        table1_value: table,
        agree,
    }
}

/// Reports for the listed `(family, rank)` pairs, computed in parallel and
/// returned in input order.
pub fn covolume_table(specs: &[(Family, usize)]) -> Result<Vec<CovolumeReport>> {
    specs
        .par_iter()
        .map(|&(f, r)| RootSystem::new(f, r).map(|rs| covolume_report(&rs)))
        .collect()
}

pub fn markdown_table(reports: &[CovolumeReport]) -> String {
    let mut s = String::from("| algebra | delta (Gram) | delta (formula) | Table 1 | agree |\n|---|---|---|---|---|\n");
    for r in reports {
        let _ = writeln!(
            s,
            "| {}{} | {} | {} | {} | {} |",
            r.family,
            r.rank,
            r.delta_gram,
            fmt(&r.delta_formula),
            r.table1_value.as_ref().map_or("-".to_string(), |v| v.to_string()),
            if r.agree { "yes" } else { "NO" }
        );
    }
    s
}
