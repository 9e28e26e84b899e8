//! Berenstein–Zelevinsky polygons for `B2` and exact planar polygon tools.
//!
//! The `B2` BZ polytope has four parameters `t_0^(0), t_1^(1), t_-1^(1), t_0^(1)`
//! tied by `sigma = lambda + mu - nu = (t_1^(1) + t_-1^(1)) alpha_1 +
//! (t_0^(0) + t_0^(1)) alpha_2`. Eliminating the last two leaves a polygon in
//! `(x, y) = (t_0^(0), t_1^(1))`, with `t_-1^(1) = s_a - y` and `t_0^(1) = s_b - x`
//! where `(s_a, s_b)` are the simple-root coordinates of `sigma`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt, qi, Rational};

pub type Point = [Rational; 2];

/// `a x + b y >= c`, or `> c` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfPlane {
    #[serde(with = "crate::rational::serde_rational")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub b: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub c: Rational,
    pub strict: bool,
    pub label: String,
}

impl HalfPlane {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        assert!(!(a.is_zero() && b.is_zero()), "degenerate half-plane");
        HalfPlane {
            a,
            b,
            c,
            strict: false,
            label: String::new(),
        }
    }

    pub fn ints(a: i64, b: i64, c: Rational) -> Self {
        HalfPlane::new(qi(a), qi(b), c)
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p[0] + &self.b * &p[1]
    }

    /// Membership in the closed half-plane.
    pub fn holds_closed(&self, p: &Point) -> bool {
        self.eval(p) >= self.c
    }

    pub fn holds(&self, p: &Point) -> bool {
        let v = self.eval(p);
        if self.strict {
            v > self.c
        } else {
            v >= self.c
        }
    }

    pub fn is_tight(&self, p: &Point) -> bool {
        self.eval(p) == self.c
    }
}

/// Affine form `a x + b y + c` that must be an integer at counted points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralForm {
    #[serde(with = "crate::rational::serde_rational")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub b: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub c: Rational,
}

impl IntegralForm {
    fn at(&self, x: &Rational, y: &Rational) -> Rational {
        &self.a * x + &self.b * y + &self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LatticeMode {
    /// Points of `Z^2` whose eliminated parameters are also integers.
    #[default]
    Bz,
    /// All points of `Z^2`.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Degeneracy {
    Empty,
    Point,
    /// Segment with its length relative to the lattice on its line.
    Segment(#[serde(with = "crate::rational::serde_rational")] Rational),
    Full,
}

/// Intersection of half-planes with its derived vertex cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolygon {
    pub halfplanes: Vec<HalfPlane>,
    /// Extreme points, counter-clockwise for full polygons.
    pub vertices: Vec<Point>,
    pub bounded: bool,
    pub integrality: Vec<IntegralForm>,
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Andrew's monotone chain, dropping collinear points.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Length of `p -> q` relative to the lattice points on its line.
pub fn relative_length(p: &Point, q: &Point) -> Rational {
    let dx = &q[0] - &p[0];
    let dy = &q[1] - &p[1];
    let m = dx.denom().lcm(dy.denom());
    let ix = (&dx * Rational::from_integer(m.clone())).to_integer();
    let iy = (&dy * Rational::from_integer(m.clone())).to_integer();
    let g = ix.gcd(&iy);
    Rational::new(g, m)
}

impl RationalPolygon {
    pub fn new(halfplanes: Vec<HalfPlane>) -> Self {
        RationalPolygon::with_integrality(halfplanes, vec![])
    }

    pub fn with_integrality(halfplanes: Vec<HalfPlane>, integrality: Vec<IntegralForm>) -> Self {
        let mut cands: Vec<Point> = Vec::new();
        let n = halfplanes.len();
        for i in 0..n {
            for j in i + 1..n {
                let (p, q) = (&halfplanes[i], &halfplanes[j]);
                let det = &p.a * &q.b - &q.a * &p.b;
                if det.is_zero() {
                    continue;
                }
                let x = (&p.c * &q.b - &q.c * &p.b) / &det;
                let y = (&p.a * &q.c - &q.a * &p.c) / &det;
                let pt = [x, y];
                if halfplanes.iter().all(|h| h.holds_closed(&pt)) {
                    cands.push(pt);
                }
            }
        }
        let vertices = convex_hull(cands);
        let recession = halfplanes.iter().flat_map(|h| {
            let d1 = [-h.b.clone(), h.a.clone()];
            let d2 = [h.b.clone(), -h.a.clone()];
            [d1, d2]
        });
        let mut unbounded_dir = false;
        for d in recession {
            if halfplanes
                .iter()
                .all(|h| !(&h.a * &d[0] + &h.b * &d[1]).is_negative())
            {
                unbounded_dir = true;
                break;
            }
        }
        let nonempty_without_vertices = vertices.is_empty() && Self::contains_line(&halfplanes);
        let bounded = !halfplanes.is_empty()
            && !(unbounded_dir && (!vertices.is_empty() || nonempty_without_vertices));
        RationalPolygon {
            halfplanes,
            vertices,
            bounded,
            integrality,
        }
    }

    /// Feasibility when all normals are parallel (so the set, if any, is a strip).
    fn contains_line(hs: &[HalfPlane]) -> bool {
        let Some(first) = hs.first() else {
            return true;
        };
        if hs.iter().any(|h| !(&h.a * &first.b - &first.a * &h.b).is_zero()) {
            return false;
        }
        // project on the common normal n: h.(a,b) = k n, constraint k t >= c
        let nn = &first.a * &first.a + &first.b * &first.b;
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for h in hs {
            let k = (&h.a * &first.a + &h.b * &first.b) / &nn;
            let bound = &h.c / &k;
            if k.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| crate::rational::max(l, bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |u| crate::rational::min(u, bound)));
            }
        }
        match (lo, hi) {
            (Some(l), Some(u)) => l <= u,
            _ => true,
        }
    }

    pub fn degeneracy(&self) -> Degeneracy {
        match self.vertices.len() {
            0 => Degeneracy::Empty,
            1 => Degeneracy::Point,
            2 => Degeneracy::Segment(relative_length(&self.vertices[0], &self.vertices[1])),
            _ => Degeneracy::Full,
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self.vertices.len() {
            0 => None,
            1 => Some(0),
            2 => Some(1),
            _ => Some(2),
        }
    }

    /// The polygon `s P` (integrality offsets scale too). An empty polygon
    /// stays empty, `s = 0` included.
    pub fn dilate(&self, s: i64) -> RationalPolygon {
        if self.vertices.is_empty() {
            return self.clone();
        }
        let k = qi(s);
        let hs = self
            .halfplanes
            .iter()
            .map(|h| HalfPlane {
                c: &h.c * &k,
                ..h.clone()
            })
            .collect();
        let forms = self
            .integrality
            .iter()
            .map(|f| IntegralForm {
                c: &f.c * &k,
                ..f.clone()
            })
            .collect();
        RationalPolygon::with_integrality(hs, forms)
    }

    fn x_range(&self) -> Option<(BigInt, BigInt)> {
        let xs = self.vertices.iter().map(|v| &v[0]);
        let lo = xs.clone().min()?;
        let hi = xs.max()?;
        Some((ceil(lo), floor(hi)))
    }

    /// Integer `y` range at column `x`. `open` makes every constraint strict;
    /// otherwise constraints keep their own strictness, or none when `closed`.
    fn y_range(&self, x: &Rational, mode: Strictness) -> Option<(BigInt, BigInt)> {
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for h in &self.halfplanes {
            let strict = match mode {
                Strictness::Closed => false,
                Strictness::Open => true,
                Strictness::AsGiven => h.strict,
            };
            let rhs = &h.c - &h.a * x;
            if h.b.is_zero() {
                let ok = if strict { rhs.is_negative() } else { !rhs.is_positive() };
                if !ok {
                    return None;
                }
                continue;
            }
            let v = &rhs / &h.b;
            if h.b.is_positive() {
                let l = if strict { floor(&v) + 1 } else { ceil(&v) };
                lo = Some(lo.map_or(l.clone(), |o| o.max(l)));
            } else {
                let u = if strict { ceil(&v) - 1 } else { floor(&v) };
                hi = Some(hi.map_or(u.clone(), |o| o.min(u)));
            }
        }
        match (lo, hi) {
            (Some(l), Some(u)) if l <= u => Some((l, u)),
            (Some(_), Some(_)) => None,
            _ => unreachable!("bounded polygon has finite columns"),
        }
    }

    fn column_count(&self, x: &BigInt, mode: Strictness, lattice: LatticeMode) -> BigInt {
        let xq = Rational::from_integer(x.clone());
        let Some((lo, hi)) = self.y_range(&xq, mode) else {
            return BigInt::zero();
        };
        if lattice == LatticeMode::Raw || self.integrality.is_empty() {
            return hi - lo + 1;
        }
        let simple = self
            .integrality
            .iter()
            .all(|f| f.a.is_integer() && f.b.is_integer());
        if simple {
            if self.integrality.iter().all(|f| f.c.is_integer()) {
                hi - lo + 1
            } else {
                BigInt::zero()
            }
        } else {
            let mut n = BigInt::zero();
            let mut y = lo;
            while y <= hi {
                let yq = Rational::from_integer(y.clone());
                if self.integrality.iter().all(|f| f.at(&xq, &yq).is_integer()) {
                    n += 1;
                }
                y += 1;
            }
            n
        }
    }

    fn count(&self, mode: Strictness, lattice: LatticeMode) -> Result<BigInt> {
        if !self.bounded {
            return Err(Error::Unbounded);
        }
        let Some((lo, hi)) = self.x_range() else {
            return Ok(BigInt::zero());
        };
        let mut n = BigInt::zero();
        let mut x = lo;
        while x <= hi {
            n += self.column_count(&x, mode, lattice);
            x += 1;
        }
        Ok(n)
    }

    /// Lattice points, honoring each constraint's strictness.
    pub fn lattice_point_count(&self, lattice: LatticeMode) -> Result<u64> {
        Ok(self
            .count(Strictness::AsGiven, lattice)?
            .to_u64()
            .expect("count fits in u64"))
    }

    pub fn area(&self) -> Result<Rational> {
        if self.vertices.len() < 3 {
            return Err(Error::Degenerate(self.dim().unwrap_or(0)));
        }
        let n = self.vertices.len();
        let mut twice = Rational::zero();
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            twice += &p[0] * &q[1] - &q[0] * &p[1];
        }
        Ok(twice.abs() / qi(2))
    }

    /// Sum of relative edge lengths.
    pub fn relative_perimeter(&self) -> Rational {
        let n = self.vertices.len();
        match n {
            0 | 1 => Rational::zero(),
            2 => qi(2) * relative_length(&self.vertices[0], &self.vertices[1]),
            _ => (0..n)
                .map(|i| relative_length(&self.vertices[i], &self.vertices[(i + 1) % n]))
                .sum(),
        }
    }

    fn is_counted(&self, p: &Point) -> bool {
        p[0].is_integer()
            && p[1].is_integer()
            && self.integrality.iter().all(|f| f.at(&p[0], &p[1]).is_integer())
    }

    /// `(b, i)`: counted points on the relative boundary and in the relative interior.
    pub fn boundary_interior_counts(&self) -> Result<(u64, u64)> {
        if !self.bounded {
            return Err(Error::Unbounded);
        }
        let to = |x: BigInt| x.to_u64().expect("count fits in u64");
        match self.degeneracy() {
            Degeneracy::Empty => Ok((0, 0)),
            Degeneracy::Point => Ok((0, to(self.count(Strictness::Closed, LatticeMode::Bz)?))),
            Degeneracy::Segment(_) => {
                let all = to(self.count(Strictness::Closed, LatticeMode::Bz)?);
                let ends = self.vertices.iter().filter(|v| self.is_counted(v)).count() as u64;
                Ok((ends, all - ends))
            }
            Degeneracy::Full => {
                let all = self.count(Strictness::Closed, LatticeMode::Bz)?;
                let inner = self.count(Strictness::Open, LatticeMode::Bz)?;
                Ok((to(all - &inner), to(inner)))
            }
        }
    }

    pub fn report(&self) -> PolygonReport {
        let count = self.lattice_point_count(LatticeMode::Bz).ok();
        let (b, i) = self.boundary_interior_counts().ok().unzip();
        PolygonReport {
            schema_version: 1,
            halfplanes: self.halfplanes.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| [fmt(&v[0]), fmt(&v[1])])
                .collect(),
            bounded: self.bounded,
            degeneracy: self.degeneracy(),
            lattice_points: count,
            boundary_points: b,
            interior_points: i,
            area: self.area().ok().map(|a| fmt(&a)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Strictness {
    AsGiven,
    Closed,
    Open,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolygonReport {
    pub schema_version: u32,
    pub halfplanes: Vec<HalfPlane>,
    pub vertices: Vec<[String; 2]>,
    pub bounded: bool,
    pub degeneracy: Degeneracy,
    pub lattice_points: Option<u64>,
    pub boundary_points: Option<u64>,
    pub interior_points: Option<u64>,
    pub area: Option<String>,
}

/// The `B2` BZ polygon in the `(t_0^(0), t_1^(1))` plane; weights in Dynkin labels.
pub fn bz_polygon_b2(lambda: &[Rational], mu: &[Rational], nu: &[Rational]) -> RationalPolygon {
    let s1 = &lambda[0] + &mu[0] - &nu[0];
    let s2 = &lambda[1] + &mu[1] - &nu[1];
    let sa = (qi(2) * &s1 + &s2) / qi(2);
    let sb = &s1 + &s2;
    let (l1, l2) = (&lambda[0], &lambda[1]);
    let (m1, m2) = (&mu[0], &mu[1]);
    let two = qi(2);
    let hs = vec![
        HalfPlane::ints(1, -2, &sb - &two * &sa),
        HalfPlane::ints(-1, -2, -sb.clone()),
        HalfPlane::ints(0, 1, qi(0)),
        HalfPlane::ints(1, 0, qi(0)),
        HalfPlane::ints(0, -1, -l1.clone()),
        HalfPlane::ints(1, -1, &sb - &sa - l1),
        HalfPlane::ints(1, 1, &sa - l1),
        HalfPlane::ints(-1, 0, -l2.clone()),
        HalfPlane::ints(-1, -1, &sa - &sb - m1),
        HalfPlane::ints(0, -1, -m1.clone()),
        HalfPlane::ints(1, 0, &two * &sb - &two * &sa - m2),
        HalfPlane::ints(1, 2, &sb - m2),
    ];
    let forms = vec![
        IntegralForm {
            a: qi(0),
            b: qi(-1),
            c: sa,
        },
        IntegralForm {
            a: qi(-1),
            b: qi(0),
            c: sb,
        },
    ];
    RationalPolygon::with_integrality(hs, forms)
}

/// [`bz_polygon_b2`] for integral Dynkin labels.
pub fn bz_polygon_b2_labels(lambda: &[i64], mu: &[i64], nu: &[i64]) -> RationalPolygon {
    let f = |l: &[i64]| l.iter().map(|&x| qi(x)).collect::<Vec<_>>();
    bz_polygon_b2(&f(lambda), &f(mu), &f(nu))
}

/// `C_{lambda mu}^nu` for `B2` as the BZ lattice-point count.
///
/// Counts columns of the same system as [`bz_polygon_b2`] in machine
/// integers; the rational polygon is only needed for geometry.
pub fn lr_bz_b2(lambda: &[i64], mu: &[i64], nu: &[i64]) -> u64 {
    let s1 = lambda[0] + mu[0] - nu[0];
    let s2 = lambda[1] + mu[1] - nu[1];
    if s2.rem_euclid(2) != 0 {
        return 0;
    }
    let (sa, sb) = (s1 + s2 / 2, s1 + s2);
    let (l1, l2, m1, m2) = (lambda[0], lambda[1], mu[0], mu[1]);
    // a x + b y >= c
    let hs = [
        (1, -2, sb - 2 * sa),
        (-1, -2, -sb),
        (0, 1, 0),
        (1, 0, 0),
        (0, -1, -l1),
        (1, -1, sb - sa - l1),
        (1, 1, sa - l1),
        (-1, 0, -l2),
        (-1, -1, sa - sb - m1),
        (0, -1, -m1),
        (1, 0, 2 * sb - 2 * sa - m2),
        (1, 2, sb - m2),
    ];
    let mut total = 0u64;
    for x in 0..=l2 {
        let (mut lo, mut hi, mut empty) = (i64::MIN, i64::MAX, false);
        for &(a, b, c) in &hs {
            let r = c - a * x;
            match b.signum() {
                1 => lo = lo.max(Integer::div_ceil(&r, &b)),
                -1 => hi = hi.min(Integer::div_floor(&r, &b)),
                _ => empty |= r > 0,
            }
        }
        if !empty && hi >= lo {
            total += (hi - lo + 1) as u64;
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PickReport {
    pub c: u64,
    #[serde(with = "crate::rational::serde_rational")]
    pub v: Rational,
    /// Relative boundary length.
    #[serde(with = "crate::rational::serde_rational")]
    pub l: Rational,
    pub b: u64,
    pub i: u64,
    /// From `2C - 2V - L = 2(2p - 1)`.
    #[serde(with = "crate::rational::serde_rational")]
    pub p: Rational,
    pub l_equals_b: bool,
    /// `p = 1` and `V = i + b/2 - 1`.
    pub pick_holds: bool,
}

pub fn pick_relation_check(poly: &RationalPolygon) -> Result<PickReport> {
    let v = poly.area()?;
    let c = poly.lattice_point_count(LatticeMode::Bz)?;
    let (b, i) = poly.boundary_interior_counts()?;
    let l = poly.relative_perimeter();
    let lhs = qi(2 * c as i64) - qi(2) * &v - &l;
    let p = (lhs / qi(2) + Rational::one()) / qi(2);
    let pick = v == (qi(i as i64) + qi(b as i64) / qi(2) - Rational::one());
    Ok(PickReport {
        c,
        l_equals_b: l == qi(b as i64),
        pick_holds: p == Rational::one() && pick,
        v,
        l,
        b,
        i,
        p,
    })
}

impl PartialOrd for Degeneracy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let rank = |d: &Degeneracy| match d {
            Degeneracy::Empty => 0,
            Degeneracy::Point => 1,
            Degeneracy::Segment(_) => 2,
            Degeneracy::Full => 3,
        };
        Some(rank(self).cmp(&rank(other)))
    }
}
