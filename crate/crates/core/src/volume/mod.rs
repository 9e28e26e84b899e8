//! The `B2` volume function `J(alpha, beta; gamma)` and its relatives.
//!
//! Arguments of [`j_b2`] are orthonormal coordinates. Dynkin-label helpers
//! convert at the call boundary; a primed weight is always `lambda + rho`.

pub mod piecewise;
pub mod poly;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bzpolytope::{HalfPlane, Point, RationalPolygon};
use crate::ehrhart::{default_sample_range, fit_counts, stretched_samples, QuasiPolynomial};
use crate::error::{Error, Result};
use crate::multiplicity::LrEngine;
use crate::rational::{abs, fmt, q, qi, sign, to_f64, Rational};
use crate::rootsys::weyl::b2_dynkin_to_ortho;
use crate::rootsys::{B2Weyl, Family, Labels, RootSystem};

pub use piecewise::{
    c1_check, piecewise_analyze_b2, C1Sample, Cell, LoopCheck, PiecewiseQuadratic, Wall, WallClass,
};
pub use poly::Poly2;

/// `(4 s1|s1| - 4 s2|s2| - 2 (s1-s2)|s1-s2|) sign(s1+s2)`, with `sign(0) = 0`.
fn kernel(s: &Point) -> Rational {
    let sg = sign(&(&s[0] + &s[1]));
    if sg == 0 {
        return Rational::zero();
    }
    let d = &s[0] - &s[1];
    let v = qi(4) * &s[0] * abs(&s[0]) - qi(4) * &s[1] * abs(&s[1]) - qi(2) * &d * abs(&d);
    if sg > 0 {
        v
    } else {
        -v
    }
}

fn orbit_signed(x: &Point) -> Vec<(Point, i32)> {
    B2Weyl::all().iter().map(|w| (w.apply(x), w.sign())).collect()
}

/// Exact `J(alpha, beta; gamma)` by the Weyl-group sum.
///
/// The sum over the third group element is folded into a factor 8.
pub fn j_b2(alpha: &Point, beta: &Point, gamma: &Point) -> Rational {
    let oa = orbit_signed(alpha);
    let ob = orbit_signed(beta);
    let mut total = Rational::zero();
    for (x, ex) in &oa {
        for (y, ey) in &ob {
            let s = [&x[0] + &y[0] - &gamma[0], &x[1] + &y[1] - &gamma[1]];
            let t = kernel(&s);
            if ex * ey > 0 {
                total += t;
            } else {
                total -= t;
            }
        }
    }
    total / qi(32)
}

/// Floating-point [`j_b2`].
pub fn j_b2_f64(alpha: [f64; 2], beta: [f64; 2], gamma: [f64; 2]) -> f64 {
    let k = |s: [f64; 2]| -> f64 {
        let t = s[0] + s[1];
        if t == 0.0 {
            return 0.0;
        }
        let d = s[0] - s[1];
        (4.0 * s[0] * s[0].abs() - 4.0 * s[1] * s[1].abs() - 2.0 * d * d.abs()) * t.signum()
    };
    let mut total = 0.0;
    for w in B2Weyl::all() {
        let x = w.apply(&alpha);
        for v in B2Weyl::all() {
            let y = v.apply(&beta);
            let e = f64::from(w.sign() * v.sign());
            total += e * k([x[0] + y[0] - gamma[0], x[1] + y[1] - gamma[1]]);
        }
    }
    total / 32.0
}

/// Orthonormal coordinates of `B2` Dynkin labels.
pub fn b2_point(labels: &[i64]) -> Point {
    b2_dynkin_to_ortho(&qi(labels[0]), &qi(labels[1]))
}

/// `J(lambda', mu'; nu')` for Dynkin labels, primes meaning `+ rho`.
pub fn j_b2_shifted_labels(lambda: &[i64], mu: &[i64], nu: &[i64]) -> Rational {
    let sh = |l: &[i64]| b2_point(&[l[0] + 1, l[1] + 1]);
    j_b2(&sh(lambda), &sh(mu), &sh(nu))
}

/// `J(lambda, mu; nu)` for Dynkin labels, no shift.
pub fn j_b2_labels(lambda: &[i64], mu: &[i64], nu: &[i64]) -> Rational {
    j_b2(&b2_point(lambda), &b2_point(mu), &b2_point(nu))
}

/// `x1 x2 (x1^2 - x2^2)`, the product of the positive roots.
pub fn delta_b2(x: &Point) -> Rational {
    &x[0] * &x[1] * (&x[0] * &x[0] - &x[1] * &x[1])
}

fn check_regular(x: &Point, name: &str) -> Result<()> {
    if x[0] > x[1] && x[1].is_positive() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{name} = ({}, {}) must satisfy {name}1 > {name}2 > 0",
            fmt(&x[0]),
            fmt(&x[1])
        )))
    }
}

fn ge(a: i64, b: i64, c: Rational) -> HalfPlane {
    HalfPlane::ints(a, b, c)
}

fn le(a: i64, b: i64, c: Rational) -> HalfPlane {
    HalfPlane::ints(-a, -b, -c)
}

/// Half-planes of the Horn polygon, chamber conditions included.
pub fn horn_halfplanes_b2(alpha: &Point, beta: &Point) -> Vec<HalfPlane> {
    let (a1, a2) = (&alpha[0], &alpha[1]);
    let (b1, b2) = (&beta[0], &beta[1]);
    let d1 = abs(&(a1 - b1));
    let d2 = abs(&(a2 - b2));
    let total = a1 + a2 + b1 + b2;
    vec![
        ge(1, 0, d1.clone()),
        ge(1, 0, d2.clone()),
        le(1, 0, a1 + b1),
        ge(0, 1, a2 - b1),
        ge(0, 1, b2 - a1),
        le(0, 1, a1 + b2),
        le(0, 1, a2 + b1),
        ge(1, 1, &d1 + &d2),
        le(1, 1, total),
        ge(1, -1, a1 - a2 - b1 - b2),
        ge(1, -1, b1 - b2 - a1 - a2),
        le(1, -1, a1 + b1 - d2),
        ge(0, 1, Rational::zero()),
        ge(1, -1, Rational::zero()),
    ]
}

pub fn horn_polygon_b2(alpha: &Point, beta: &Point) -> Result<RationalPolygon> {
    check_regular(alpha, "alpha")?;
    check_regular(beta, "beta")?;
    Ok(RationalPolygon::new(horn_halfplanes_b2(alpha, beta)))
}

/// Closed Horn inequalities for `gamma`.
pub fn horn_contains_b2(alpha: &Point, beta: &Point, gamma: &Point) -> Result<bool> {
    check_regular(alpha, "alpha")?;
    check_regular(beta, "beta")?;
    if !(gamma[0] >= gamma[1] && !gamma[1].is_negative()) {
        return Err(Error::Precondition("gamma must satisfy gamma1 >= gamma2 >= 0".into()));
    }
    Ok(horn_halfplanes_b2(alpha, beta).iter().all(|h| h.holds_closed(gamma)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LineKind {
    /// `gamma1 = c`
    G1,
    /// `gamma2 = c`
    G2,
    /// `gamma1 + gamma2 = c`
    Sum,
    /// `gamma1 - gamma2 = c`
    Diff,
}

impl LineKind {
    pub fn normal(self) -> (i64, i64) {
        match self {
            LineKind::G1 => (1, 0),
            LineKind::G2 => (0, 1),
            LineKind::Sum => (1, 1),
            LineKind::Diff => (1, -1),
        }
    }

    /// `w` with `(1/2) Delta^2 = w (l - c)^2`, `Delta` the Euclidean distance.
    pub fn half_square_weight(self) -> Rational {
        match self {
            LineKind::G1 | LineKind::G2 => q(1, 2),
            LineKind::Sum | LineKind::Diff => q(1, 4),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LineKind::G1 => "g1",
            LineKind::G2 => "g2",
            LineKind::Sum => "g1+g2",
            LineKind::Diff => "g1-g2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularLine {
    pub kind: LineKind,
    #[serde(with = "crate::rational::serde_rational")]
    pub level: Rational,
    /// Positions (0..5) in the candidate list for `kind` giving this level.
    pub sources: Vec<usize>,
}

impl SingularLine {
    /// `l(p) - c`.
    pub fn eval(&self, p: &Point) -> Rational {
        let (a, b) = self.kind.normal();
        qi(a) * &p[0] + qi(b) * &p[1] - &self.level
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).is_zero()
    }
}

/// The 20 candidate levels, five per kind, in a fixed order.
pub fn candidate_levels_b2(alpha: &Point, beta: &Point) -> [(LineKind, [Rational; 5]); 4] {
    let (a1, a2) = (&alpha[0], &alpha[1]);
    let (b1, b2) = (&beta[0], &beta[1]);
    [
        (
            LineKind::G1,
            [a1 + b2, a2 + b1, a2 + b2, abs(&(a1 - b2)), abs(&(a2 - b1))],
        ),
        (
            LineKind::G2,
            [a2 + b2, abs(&(a1 - b2)), abs(&(a2 - b1)), abs(&(a2 - b2)), abs(&(a1 - b1))],
        ),
        (
            LineKind::Sum,
            [
                a1 + a2 + b1 - b2,
                abs(&(a1 + a2 - b1 + b2)),
                a1 - a2 + b1 + b2,
                abs(&(-a1 + a2 + b1 + b2)),
                a1 - a2 + b1 - b2,
            ],
        ),
        (
            LineKind::Diff,
            [
                abs(&(-a1 + a2 + b1 + b2)),
                abs(&(a1 + a2 - b1 + b2)),
                a1 - a2 + b1 - b2,
                abs(&(a1 - a2 - b1 + b2)),
                abs(&(a1 + a2 - b1 - b2)),
            ],
        ),
    ]
}

/// Candidate lines of non-`C^2` behaviour, coincident levels merged.
pub fn singular_lines_b2(alpha: &Point, beta: &Point) -> Vec<SingularLine> {
    let mut out: Vec<SingularLine> = Vec::new();
    for (kind, levels) in candidate_levels_b2(alpha, beta) {
        let mut merged: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for (i, c) in levels.into_iter().enumerate() {
            merged.entry(c).or_default().push(i);
        }
        out.extend(merged.into_iter().map(|(level, sources)| SingularLine { kind, level, sources }));
    }
    out
}

/// Lines of [`singular_lines_b2`] meeting the closed Horn polygon.
pub fn singular_lines_in_horn_b2(alpha: &Point, beta: &Point) -> Result<Vec<SingularLine>> {
    let poly = horn_polygon_b2(alpha, beta)?;
    Ok(singular_lines_b2(alpha, beta)
        .into_iter()
        .filter(|l| {
            let vals: Vec<Rational> = poly.vertices.iter().map(|v| l.eval(v)).collect();
            vals.iter().any(|v| !v.is_positive()) && vals.iter().any(|v| !v.is_negative())
        })
        .collect())
}

/// `(alpha, beta)` ordered so that `|beta1 - alpha2| >= |alpha1 - beta2|`.
pub fn prong_order(alpha: &Point, beta: &Point) -> (Point, Point, bool) {
    if abs(&(&beta[0] - &alpha[1])) >= abs(&(&alpha[0] - &beta[1])) {
        (alpha.clone(), beta.clone(), false)
    } else {
        (beta.clone(), alpha.clone(), true)
    }
}

/// The vertices `I, J, K, L` where four candidate lines meet, after the
/// reordering of [`prong_order`].
pub fn four_prong_vertices_b2(alpha: &Point, beta: &Point) -> [(char, Point); 4] {
    let (a, b, _) = prong_order(alpha, beta);
    let (a1, a2) = (&a[0], &a[1]);
    let (b1, b2) = (&b[0], &b[1]);
    [
        ('I', [a1 + b2, abs(&(a2 - b1))]),
        ('J', [a2 + b1, abs(&(a1 - b2))]),
        ('K', [abs(&(b1 - a2)), abs(&(a1 - b2))]),
        ('L', [a2 + b2, abs(&(a1 - b1))]),
    ]
}

/// `(3/2) |Delta(gamma)| / (|Delta(alpha)| |Delta(beta)|) J(alpha, beta; gamma)`.
pub fn pdf_b2(alpha: &Point, beta: &Point, gamma: &Point) -> Result<Rational> {
    check_regular(alpha, "alpha")?;
    check_regular(beta, "beta")?;
    let dg = abs(&delta_b2(gamma));
    if dg.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(q(3, 2) * dg / (abs(&delta_b2(alpha)) * abs(&delta_b2(beta))) * j_b2(alpha, beta, gamma))
}

/// The polynomial `(3/2) Delta(gamma) / (|Delta(alpha)| |Delta(beta)|)` in `gamma`.
pub fn pdf_prefactor_b2(alpha: &Point, beta: &Point) -> Poly2 {
    let x = Poly2::monomial(qi(1), 1, 0);
    let y = Poly2::monomial(qi(1), 0, 1);
    let d = &(&(&x * &y) * &(x.clone() + y.clone())) * &(x - y);
    let k = q(3, 2) / (abs(&delta_b2(alpha)) * abs(&delta_b2(beta)));
    d.scale(&k)
}

/// Exact integral of [`pdf_b2`] over the Horn polygon, cell by cell.
pub fn pdf_integral_b2(pq: &PiecewiseQuadratic) -> Rational {
    let pre = pdf_prefactor_b2(&pq.alpha, &pq.beta);
    pq.cells
        .iter()
        .map(|c| (&pre * &Poly2::quadratic(&c.coeffs)).integrate_polygon(&c.polygon.vertices))
        .sum()
}

/// Characters entering the `J`-LR relations: `(kappa, c_kappa)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaData {
    pub k: Vec<(Labels, Rational)>,
    pub k_hat: Vec<(Labels, Rational)>,
}

/// Tabulated `K`, `K-hat` data; available for `A2`, `A3`, `B2`, `B3`.
pub fn kappa_data(rs: &RootSystem) -> Result<KappaData> {
    let pairs = |ks: &[&[i64]], cs: &[i64], den: i64| -> Vec<(Labels, Rational)> {
        ks.iter().zip(cs).map(|(k, &c)| (k.to_vec(), q(c, den))).collect()
    };
    match (rs.family(), rs.rank()) {
        (Family::A, 2) => Ok(KappaData {
            k: pairs(&[&[0, 0]], &[1], 1),
            k_hat: pairs(&[&[0, 0]], &[1], 1),
        }),
        (Family::A, 3) => Ok(KappaData {
            k: pairs(&[&[0, 0, 0], &[1, 0, 1]], &[9, 1], 24),
            k_hat: pairs(&[&[0, 1, 0]], &[1], 6),
        }),
        (Family::B, 2) => Ok(KappaData {
            k: pairs(&[&[0, 0], &[1, 0]], &[3, 1], 8),
            k_hat: pairs(&[&[0, 1]], &[1], 4),
        }),
        (Family::B, 3) => Ok(KappaData {
            k: pairs(
                &[
                    &[0, 0, 0],
                    &[1, 0, 0],
                    &[0, 1, 0],
                    &[2, 0, 0],
                    &[0, 0, 2],
                    &[1, 1, 0],
                    &[1, 0, 2],
                ],
                &[7230, 3995, 1651, 85, 479, 29, 1],
                92160,
            ),
            k_hat: pairs(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1]], &[190, 26, 1], 2880),
        }),
        _ => Err(Error::Unsupported(format!("no tabulated K data for {}", rs.name()))),
    }
}

/// `sum_kappa c_kappa dim V_kappa` for `K` and `K-hat`; both should be 1.
pub fn kappa_dimension_sums(rs: &RootSystem) -> Result<(Rational, Rational)> {
    let d = kappa_data(rs)?;
    let sum = |v: &[(Labels, Rational)]| -> Rational {
        v.iter()
            .map(|(k, c)| c * Rational::from_integer(rs.dim_of_labels(k)))
            .sum()
    };
    Ok((sum(&d.k), sum(&d.k_hat)))
}

/// `sum_{kappa in K} c_kappa C_{lambda mu kappa}^nu`, equal to `J(lambda', mu'; nu')`.
pub fn j_lr_shifted(engine: &LrEngine, lambda: &[i64], mu: &[i64], nu: &[i64]) -> Result<Rational> {
    let rs = engine.root_system();
    for l in [lambda, mu, nu] {
        rs.check_dominant(l)?;
    }
    if !rs.is_compatible(lambda, mu, nu) {
        return Err(Error::Incompatible);
    }
    let data = kappa_data(rs)?;
    let mut total = Rational::zero();
    for (kappa, c) in &data.k {
        total += c * qi(engine.triple(lambda, mu, kappa, nu)? as i64);
    }
    Ok(total)
}

fn minus_rho(rs: &RootSystem, l: &[i64]) -> Result<Labels> {
    let out: Labels = l.iter().map(|x| x - 1).collect();
    rs.check_dominant(&out)
        .map_err(|_| Error::Precondition(format!("{l:?} - rho is not dominant")))?;
    Ok(out)
}

/// `sum_{kappa in K-hat} c-hat_kappa C_{(lambda-rho)(mu-rho) kappa}^{nu-rho}`,
/// equal to `J(lambda, mu; nu)`.
pub fn j_lr_unshifted(engine: &LrEngine, lambda: &[i64], mu: &[i64], nu: &[i64]) -> Result<Rational> {
    let rs = engine.root_system();
    if !rs.is_compatible(lambda, mu, nu) {
        return Err(Error::Incompatible);
    }
    let (l, m, n) = (minus_rho(rs, lambda)?, minus_rho(rs, mu)?, minus_rho(rs, nu)?);
    let data = kappa_data(rs)?;
    let mut total = Rational::zero();
    for (kappa, c) in &data.k_hat {
        total += c * qi(engine.triple(&l, &m, kappa, &n)? as i64);
    }
    Ok(total)
}

/// `B2` shortcut `J = 1/4 sum_k C_{(lambda-rho)(mu-rho)}^{nu-k}`, valid when
/// `nu` is deep enough in the chamber for every `nu - k` to be dominant.
pub fn j_deep_nu_b2(engine: &LrEngine, lambda: &[i64], mu: &[i64], nu: &[i64]) -> Result<Rational> {
    let rs = engine.root_system();
    if rs.family() != Family::B || rs.rank() != 2 {
        return Err(Error::Unsupported("deep-nu formula is for B2".into()));
    }
    let (l, m) = (minus_rho(rs, lambda)?, minus_rho(rs, mu)?);
    let mut total = Rational::zero();
    for k in [[2, 0], [1, 2], [1, 0], [0, 2]] {
        let t = [nu[0] - k[0], nu[1] - k[1]];
        if t.iter().any(|&x| x < 0) {
            return Err(Error::Precondition(format!("nu = {nu:?} is not deep enough")));
        }
        total += qi(engine.klimyk(&l, &m, &t)? as i64);
    }
    Ok(total / qi(4))
}

#[derive(Debug, Clone, Serialize)]
pub struct KissingerFit {
    pub kappa: Labels,
    pub samples: BTreeMap<i64, u64>,
    pub quasi_polynomial: QuasiPolynomial,
    /// Top coefficient of the residue class of `s = 0`.
    #[serde(with = "crate::rational::serde_rational")]
    pub value: Rational,
}

/// `c_kappa = J(rho, rho; kappa + rho)` as the leading coefficient of
/// `s -> C_{s rho, s rho}^{s (kappa + rho)}`.
pub fn c_kappa_via_kissinger(
    engine: &LrEngine,
    kappa: &[i64],
    period: usize,
    degree: usize,
    range: Option<std::ops::RangeInclusive<i64>>,
) -> Result<KissingerFit> {
    let rs = engine.root_system();
    rs.check_dominant(kappa)?;
    let rho = rs.rho_labels();
    let nu: Labels = kappa.iter().zip(&rho).map(|(k, r)| k + r).collect();
    let range = range.unwrap_or_else(|| default_sample_range(degree, period));
    let samples = stretched_samples(engine, &rho, &rho, &nu, range)?;
    let qp = fit_counts(&samples, degree, period)?;
    let value = qp.class_leading(0);
    Ok(KissingerFit {
        kappa: kappa.to_vec(),
        samples,
        quasi_polynomial: qp,
        value,
    })
}

/// Cases with `C_{lambda mu}^nu = 1` and the stretched values `s = 1..=smax`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitStretchRow {
    pub triple: [Labels; 3],
    pub values: Vec<u64>,
    pub all_one: bool,
}

/// Diagnostic sweep over `B2` triples with labels up to `max_label`; whether
/// `C = 1` persists under stretching is reported, never assumed.
pub fn unit_stretch_sweep_b2(max_label: i64, smax: i64) -> Vec<UnitStretchRow> {
    let mut triples = Vec::new();
    let r = 0..=max_label;
    for l0 in r.clone() {
        for l1 in r.clone() {
            for m0 in r.clone() {
                for m1 in r.clone() {
                    for n0 in r.clone() {
                        for n1 in r.clone() {
                            triples.push([vec![l0, l1], vec![m0, m1], vec![n0, n1]]);
                        }
                    }
                }
            }
        }
    }
    triples
        .into_par_iter()
        .filter(|t| crate::bzpolytope::lr_bz_b2(&t[0], &t[1], &t[2]) == 1)
        .map(|t| {
            let values: Vec<u64> = (1..=smax)
                .map(|s| {
                    let sc = |l: &Labels| -> Labels { l.iter().map(|x| x * s).collect() };
                    crate::bzpolytope::lr_bz_b2(&sc(&t[0]), &sc(&t[1]), &sc(&t[2]))
                })
                .collect();
            let all_one = values.iter().all(|&v| v == 1);
            UnitStretchRow { triple: t, values, all_one }
        })
        .collect()
}

/// Value returned by [`j_so2_symmetric`] exactly at the support endpoints.
pub const SO2_ENDPOINT_SENTINEL: f64 = f64::INFINITY;

/// `(2/pi^2) sqrt(a b g / (((a+b)^2 - g^2)(g^2 - (a-b)^2)))` on `[|a-b|, a+b]`.
pub fn j_so2_symmetric(a: &Rational, b: &Rational, g: &Rational) -> Result<f64> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Precondition("SO(2) arguments must be positive".into()));
    }
    let lo = abs(&(a - b));
    let hi = a + b;
    if g < &lo || g > &hi {
        return Ok(0.0);
    }
    if g == &lo || g == &hi {
        return Ok(SO2_ENDPOINT_SENTINEL);
    }
    let (fa, fb, fg) = (to_f64(a), to_f64(b), to_f64(g));
    Ok(so2_j(fa, fb, fg))
}

fn so2_j(a: f64, b: f64, g: f64) -> f64 {
    let den = ((a + b).powi(2) - g * g) * (g * g - (a - b).powi(2));
    2.0 / (std::f64::consts::PI.powi(2)) * (a * b * g / den).sqrt()
}

/// Density of `gamma_12`: `pi sqrt(g / (a b)) J`.
pub fn pdf_so2(a: f64, b: f64, g: f64) -> f64 {
    let (lo, hi) = ((a - b).abs(), a + b);
    if g <= lo || g >= hi {
        return 0.0;
    }
    std::f64::consts::PI * (g / (a * b)).sqrt() * so2_j(a, b, g)
}

/// Distribution function of [`pdf_so2`] by Simpson's rule after the
/// substitution `g = lo + (hi - lo)(1 - cos t)/2`, which removes the
/// endpoint singularities.
pub fn cdf_so2(a: f64, b: f64, g: f64) -> f64 {
    let (lo, hi) = ((a - b).abs(), a + b);
    if g <= lo {
        return 0.0;
    }
    if g >= hi {
        return 1.0;
    }
    let half = (hi - lo) / 2.0;
    let t_end = (1.0 - (g - lo) / half).clamp(-1.0, 1.0).acos();
    // integrand pdf(g(t)) g'(t); its t -> 0 limit is finite
    let f = |t: f64| -> f64 {
        if t == 0.0 {
            return 2.0 * (lo * half).sqrt() / (std::f64::consts::PI * (hi * hi - lo * lo).sqrt());
        }
        pdf_so2(a, b, lo + half * (1.0 - t.cos())) * half * t.sin()
    };
    let n = 2000;
    let h = t_end / n as f64;
    let mut s = f(0.0) + f(t_end);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    (s * h / 3.0).clamp(0.0, 1.0)
}

/// Rational lattice `origin + (i, j) step` for `0 <= i < n1`, `0 <= j < n2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub origin: Point,
    pub step: Rational,
    pub n1: usize,
    pub n2: usize,
}

impl GridSpec {
    /// Square lattice over `[0, alpha1 + beta1]^2` with `n` steps per side.
    pub fn covering(alpha: &Point, beta: &Point, n: usize) -> Self {
        let n = n.max(1);
        GridSpec {
            origin: [Rational::zero(), Rational::zero()],
            step: (&alpha[0] + &beta[0]) / qi(n as i64),
            n1: n + 1,
            n2: n + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridRow {
    #[serde(with = "crate::rational::serde_rational")]
    pub g1: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub g2: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub j: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub pdf: Rational,
}

/// Exact `J` and density over a lattice, row-major in `(i, j)`. Both are
/// reported as zero off the closed chamber `gamma1 >= gamma2 >= 0`, where
/// `J` itself only repeats its Weyl images up to sign.
pub fn grid_b2(alpha: &Point, beta: &Point, spec: &GridSpec) -> Result<Vec<GridRow>> {
    check_regular(alpha, "alpha")?;
    check_regular(beta, "beta")?;
    let pts: Vec<Point> = (0..spec.n1)
        .flat_map(|i| (0..spec.n2).map(move |j| (i, j)))
        .map(|(i, j)| {
            [
                &spec.origin[0] + &spec.step * qi(i as i64),
                &spec.origin[1] + &spec.step * qi(j as i64),
            ]
        })
        .collect();
    pts.into_par_iter()
        .map(|g| {
            let in_chamber = g[0] >= g[1] && !g[1].is_negative();
            if !in_chamber {
                return Ok(GridRow { g1: g[0].clone(), g2: g[1].clone(), j: Rational::zero(), pdf: Rational::zero() });
            }
            let j = j_b2(alpha, beta, &g);
            let pdf = pdf_b2(alpha, beta, &g)?;
            Ok(GridRow { g1: g[0].clone(), g2: g[1].clone(), j, pdf })
        })
        .collect()
}

pub fn grid_csv(rows: &[GridRow]) -> String {
    let mut s = String::from("gamma1,gamma2,J,pdf\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{}", fmt(&r.g1), fmt(&r.g2), fmt(&r.j), fmt(&r.pdf));
    }
    s
}
