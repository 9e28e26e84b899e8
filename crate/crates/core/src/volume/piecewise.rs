//! Cell decomposition of the Horn polygon and the quadratic pieces of `J`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::poly::Poly2;
use super::{horn_polygon_b2, j_b2, prong_order, singular_lines_b2, LineKind};
use crate::bzpolytope::{HalfPlane, Point, RationalPolygon};
use crate::error::{Error, Result};
use crate::rational::{fmt, q, qi, solve, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    #[serde(rename = "vertices", serialize_with = "ser_polygon")]
    pub polygon: RationalPolygon,
    /// `c0 + c1 g1 + c2 g2 + c3 g1^2 + c4 g1 g2 + c5 g2^2`.
    #[serde(serialize_with = "ser_coeffs")]
    pub coeffs: [Rational; 6],
}

impl Cell {
    pub fn poly(&self) -> Poly2 {
        Poly2::quadratic(&self.coeffs)
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.polygon.vertices)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WallClass {
    /// Adjacent pieces agree.
    Inactive,
    /// Jump `k (1/2) Delta^2` with `Delta` the distance to the wall.
    QuadraticRamp,
    /// Chamber wall where `J` vanishes to first order only.
    BoundaryLinear,
    /// None of the above.
    Irregular,
}

/// Edge shared by two cells, or by a cell and the outside of the polygon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub kind: LineKind,
    #[serde(serialize_with = "ser_rational")]
    pub level: Rational,
    #[serde(serialize_with = "ser_points")]
    pub segment: [Point; 2],
    /// Cell on the side `l > c`; `None` outside the Horn polygon.
    pub pos: Option<usize>,
    /// Cell on the side `l < c`.
    pub neg: Option<usize>,
    /// Level is one of the candidate singular lines.
    pub on_candidate: bool,
    /// Line is `g2 = 0` or `g1 = g2`.
    pub chamber_wall: bool,
    /// Multiple of `(1/2) Delta^2` in `q_pos - q_neg`, when of that form.
    #[serde(serialize_with = "ser_opt_rational")]
    pub k: Option<Rational>,
    pub class: WallClass,
}

impl Wall {
    pub fn is_interior(&self) -> bool {
        self.pos.is_some() && self.neg.is_some()
    }

    /// `k w (l - c)^2`, the reconstructed jump `q_pos - q_neg`.
    pub fn jump(&self) -> Option<Poly2> {
        let k = self.k.as_ref()?;
        let l = line_poly(self.kind, &self.level);
        Some((&l * &l).scale(&(k * self.kind.half_square_weight())))
    }
}

/// Cyclic consistency of jumps around an interior vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopCheck {
    #[serde(serialize_with = "ser_point")]
    pub vertex: Point,
    pub cells: usize,
    /// Walls at the vertex with non-zero jump.
    pub active_walls: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiecewiseQuadratic {
    #[serde(serialize_with = "ser_point")]
    pub alpha: Point,
    #[serde(serialize_with = "ser_point")]
    pub beta: Point,
    /// Inputs were exchanged to put them in prong order.
    pub swapped: bool,
    pub cells: Vec<Cell>,
    pub walls: Vec<Wall>,
    pub loops: Vec<LoopCheck>,
}

impl PiecewiseQuadratic {
    /// Value of the piece containing `gamma`, zero outside every cell.
    pub fn eval(&self, gamma: &Point) -> Rational {
        self.cells
            .iter()
            .find(|c| c.polygon.halfplanes.iter().all(|h| h.holds_closed(gamma)))
            .map(|c| c.poly().eval(&gamma[0], &gamma[1]))
            .unwrap_or_else(Rational::zero)
    }

    /// Interior walls with a non-zero jump.
    pub fn active_walls(&self) -> impl Iterator<Item = &Wall> {
        self.walls
            .iter()
            .filter(|w| w.is_interior() && w.class != WallClass::Inactive)
    }

    pub fn irregular_walls(&self) -> impl Iterator<Item = &Wall> {
        self.walls.iter().filter(|w| w.class == WallClass::Irregular)
    }

    /// Distinct `(kind, level)` pairs carrying an interior jump.
    pub fn active_lines(&self) -> Vec<(LineKind, Rational)> {
        let mut v: Vec<(LineKind, Rational)> = self
            .active_walls()
            .map(|w| (w.kind, w.level.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["schema_version"] = serde_json::json!(1);
        v
    }
}

fn line_poly(kind: LineKind, level: &Rational) -> Poly2 {
    let (a, b) = kind.normal();
    Poly2::linear(&qi(a), &qi(b), &-level.clone())
}

fn line_eval(kind: LineKind, level: &Rational, p: &Point) -> Rational {
    let (a, b) = kind.normal();
    qi(a) * &p[0] + qi(b) * &p[1] - level
}

fn centroid(vs: &[Point]) -> Point {
    let n = qi(vs.len() as i64);
    let sx: Rational = vs.iter().map(|v| v[0].clone()).sum();
    let sy: Rational = vs.iter().map(|v| v[1].clone()).sum();
    [sx / &n, sy / n]
}

fn lerp(u: &Point, v: &Point, t: &Rational) -> Point {
    [&u[0] + (&v[0] - &u[0]) * t, &u[1] + (&v[1] - &u[1]) * t]
}

/// Part of a convex counter-clockwise polygon where `side * f >= 0`.
fn clip(poly: &[Point], kind: LineKind, level: &Rational, side: i32) -> Vec<Point> {
    let n = poly.len();
    let f: Vec<Rational> = poly
        .iter()
        .map(|p| line_eval(kind, level, p) * qi(side as i64))
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        if !f[i].is_negative() {
            out.push(poly[i].clone());
        }
        if (f[i].is_negative() && f[j].is_positive()) || (f[i].is_positive() && f[j].is_negative()) {
            let t = &f[i] / (&f[i] - &f[j]);
            out.push(lerp(&poly[i], &poly[j], &t));
        }
    }
    out
}

/// Polygon from counter-clockwise vertices, one half-plane per edge.
fn polygon_from_vertices(vs: Vec<Point>) -> RationalPolygon {
    let n = vs.len();
    let halfplanes = (0..n)
        .map(|i| {
            let (u, v) = (&vs[i], &vs[(i + 1) % n]);
            let a = &u[1] - &v[1];
            let b = &v[0] - &u[0];
            let c = &a * &u[0] + &b * &u[1];
            HalfPlane::new(a, b, c)
        })
        .collect();
    RationalPolygon {
        halfplanes,
        vertices: vs,
        bounded: true,
        integrality: vec![],
    }
}

fn quad_row(p: &Point) -> Vec<Rational> {
    let (x, y) = (&p[0], &p[1]);
    vec![qi(1), x.clone(), y.clone(), x * x, x * y, y * y]
}

/// Exact quadratic through six interior points, checked on further points.
fn fit_cell(alpha: &Point, beta: &Point, vs: &[Point]) -> Result<[Rational; 6]> {
    let c = centroid(vs);
    let n = vs.len();
    let mut eps: Option<Rational> = None;
    for i in 0..n {
        let (u, v) = (&vs[i], &vs[(i + 1) % n]);
        let (dx, dy) = (&v[0] - &u[0], &v[1] - &u[1]);
        let slack = &dx * (&c[1] - &u[1]) - &dy * (&c[0] - &u[0]);
        let e = slack / (qi(4) * (dx.abs() + dy.abs()));
        eps = Some(match eps {
            Some(x) if x <= e => x,
            _ => e,
        });
    }
    let eps = eps.ok_or(Error::Degenerate(0))?;
    let nodes: Vec<Point> = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        .iter()
        .map(|&(i, j)| [&c[0] + &eps * qi(i), &c[1] + &eps * qi(j)])
        .collect();
    let a: Vec<Vec<Rational>> = nodes.iter().map(quad_row).collect();
    let b: Vec<Rational> = nodes.iter().map(|p| j_b2(alpha, beta, p)).collect();
    let sol = solve(a, b).ok_or_else(|| Error::FitInconsistency("singular fit system".into()))?;
    let coeffs: [Rational; 6] = sol.try_into().expect("six coefficients");
    let poly = Poly2::quadratic(&coeffs);
    let mut checks: Vec<Point> = Vec::new();
    for i in 0..n {
        let (u, v) = (&vs[i], &vs[(i + 1) % n]);
        checks.push(lerp(&c, u, &q(1, 2)));
        checks.push(lerp(&c, u, &q(7, 8)));
        checks.push(lerp(&c, &lerp(u, v, &q(1, 2)), &q(3, 4)));
        checks.push(lerp(&c, &lerp(u, v, &q(1, 5)), &q(9, 10)));
    }
    for p in &checks {
        let want = j_b2(alpha, beta, p);
        if poly.eval(&p[0], &p[1]) != want {
            return Err(Error::FitInconsistency(format!(
                "quadratic fit fails at ({}, {})",
                fmt(&p[0]),
                fmt(&p[1])
            )));
        }
    }
    Ok(coeffs)
}

/// Kind and level of the line through an edge, if it has one of the four
/// admissible directions.
fn edge_line(u: &Point, v: &Point) -> Option<(LineKind, Rational)> {
    let (dx, dy) = (&v[0] - &u[0], &v[1] - &u[1]);
    if dy.is_zero() {
        Some((LineKind::G2, u[1].clone()))
    } else if dx.is_zero() {
        Some((LineKind::G1, u[0].clone()))
    } else if dx == dy {
        Some((LineKind::Diff, &u[0] - &u[1]))
    } else if dx == -dy.clone() {
        Some((LineKind::Sum, &u[0] + &u[1]))
    } else {
        None
    }
}

/// Coordinate along a line of the given kind.
fn param(kind: LineKind, p: &Point) -> Rational {
    match kind {
        LineKind::G1 => p[1].clone(),
        _ => p[0].clone(),
    }
}

fn at_param(kind: LineKind, level: &Rational, t: &Rational) -> Point {
    match kind {
        LineKind::G1 => [level.clone(), t.clone()],
        LineKind::G2 => [t.clone(), level.clone()],
        LineKind::Sum => [t.clone(), level - t],
        LineKind::Diff => [t.clone(), t - level],
    }
}

fn classify(kind: LineKind, level: &Rational, jump: &Poly2, reference: &Point, segment: &[Point; 2], chamber: bool) -> (Option<Rational>, WallClass) {
    if jump.is_zero() {
        return (Some(Rational::zero()), WallClass::Inactive);
    }
    let l = line_poly(kind, level);
    let sq = (&l * &l).scale(&kind.half_square_weight());
    let k = jump.eval(&reference[0], &reference[1]) / sq.eval(&reference[0], &reference[1]);
    if sq.scale(&k) == *jump {
        return (Some(k), WallClass::QuadraticRamp);
    }
    if chamber {
        let mid = lerp(&segment[0], &segment[1], &q(1, 2));
        let vanishes = [&segment[0], &segment[1], &mid]
            .iter()
            .all(|p| jump.eval(&p[0], &p[1]).is_zero());
        if vanishes {
            return (None, WallClass::BoundaryLinear);
        }
    }
    (None, WallClass::Irregular)
}

/// Split the Horn polygon along every candidate line, fit the quadratic
/// piece of `J` on each cell, and classify the walls between cells.
///
/// `alpha` and `beta` are exchanged first when needed so that
/// `|beta1 - alpha2| >= |alpha1 - beta2|`; `J` is symmetric in them.
pub fn piecewise_analyze_b2(alpha: &Point, beta: &Point) -> Result<PiecewiseQuadratic> {
    let (alpha, beta, swapped) = prong_order(alpha, beta);
    let horn = horn_polygon_b2(&alpha, &beta)?;
    if horn.vertices.len() < 3 {
        return Err(Error::Degenerate(horn.vertices.len()));
    }
    let lines = singular_lines_b2(&alpha, &beta);
    let mut cells: Vec<Vec<Point>> = vec![horn.vertices.clone()];
    for line in &lines {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in cells {
            let vals: Vec<Rational> = cell.iter().map(|p| line.eval(p)).collect();
            let cuts = vals.iter().any(|v| v.is_negative()) && vals.iter().any(|v| v.is_positive());
            if cuts {
                next.push(clip(&cell, line.kind, &line.level, 1));
                next.push(clip(&cell, line.kind, &line.level, -1));
            } else {
                next.push(cell);
            }
        }
        cells = next;
    }

    let fitted: Vec<[Rational; 6]> = cells
        .par_iter()
        .map(|vs| fit_cell(&alpha, &beta, vs))
        .collect::<Result<_>>()?;
    let cells: Vec<Cell> = cells
        .into_iter()
        .zip(fitted)
        .map(|(vs, coeffs)| Cell {
            polygon: polygon_from_vertices(vs),
            coeffs,
        })
        .collect();
    let centroids: Vec<Point> = cells.iter().map(Cell::centroid).collect();
    let polys: Vec<Poly2> = cells.iter().map(Cell::poly).collect();

    // edges grouped by supporting line
    type EdgeRec = (usize, Rational, Rational);
    let mut groups: BTreeMap<(LineKind, Rational), Vec<EdgeRec>> = BTreeMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        let vs = &cell.polygon.vertices;
        for i in 0..vs.len() {
            let (u, v) = (&vs[i], &vs[(i + 1) % vs.len()]);
            let (kind, level) = edge_line(u, v)
                .ok_or_else(|| Error::FitInconsistency("cell edge off the admissible directions".into()))?;
            let (a, b) = (param(kind, u), param(kind, v));
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            groups.entry((kind, level)).or_default().push((ci, lo, hi));
        }
    }

    let is_candidate = |kind: LineKind, level: &Rational| {
        lines.iter().any(|l| l.kind == kind && &l.level == level)
    };
    let mut walls = Vec::new();
    for ((kind, level), edges) in &groups {
        let chamber = level.is_zero() && matches!(kind, LineKind::G2 | LineKind::Diff);
        let mut partnered = vec![false; edges.len()];
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (ci, ref lo_i, ref hi_i) = edges[i];
                let (cj, ref lo_j, ref hi_j) = edges[j];
                if ci == cj {
                    continue;
                }
                let lo = if lo_i > lo_j { lo_i } else { lo_j };
                let hi = if hi_i < hi_j { hi_i } else { hi_j };
                if lo >= hi {
                    continue;
                }
                partnered[i] = true;
                partnered[j] = true;
                let (pos, neg) = if line_eval(*kind, level, &centroids[ci]).is_positive() {
                    (ci, cj)
                } else {
                    (cj, ci)
                };
                let segment = [at_param(*kind, level, lo), at_param(*kind, level, hi)];
                let jump = polys[pos].clone() - polys[neg].clone();
                let (k, class) = classify(*kind, level, &jump, &centroids[pos], &segment, chamber);
                walls.push(Wall {
                    kind: *kind,
                    level: level.clone(),
                    segment,
                    pos: Some(pos),
                    neg: Some(neg),
                    on_candidate: is_candidate(*kind, level),
                    chamber_wall: chamber,
                    k,
                    class,
                });
            }
        }
        for (i, (ci, lo, hi)) in edges.iter().enumerate() {
            if partnered[i] {
                continue;
            }
            let inside_pos = line_eval(*kind, level, &centroids[*ci]).is_positive();
            let jump = if inside_pos {
                polys[*ci].clone()
            } else {
                Poly2::zero() - polys[*ci].clone()
            };
            let segment = [at_param(*kind, level, lo), at_param(*kind, level, hi)];
            let (k, class) = classify(*kind, level, &jump, &centroids[*ci], &segment, chamber);
            walls.push(Wall {
                kind: *kind,
                level: level.clone(),
                segment,
                pos: inside_pos.then_some(*ci),
                neg: (!inside_pos).then_some(*ci),
                on_candidate: is_candidate(*kind, level),
                chamber_wall: chamber,
                k,
                class,
            });
        }
    }

    let loops = loop_checks(&horn, &cells, &centroids, &walls);
    Ok(PiecewiseQuadratic {
        alpha,
        beta,
        swapped,
        cells,
        walls,
        loops,
    })
}

/// Around each interior vertex, the reconstructed jumps must sum to zero.
fn loop_checks(horn: &RationalPolygon, cells: &[Cell], centroids: &[Point], walls: &[Wall]) -> Vec<LoopCheck> {
    let mut by_pair: HashMap<(usize, usize), &Wall> = HashMap::new();
    for w in walls {
        if let (Some(a), Some(b)) = (w.pos, w.neg) {
            by_pair.insert((a.min(b), a.max(b)), w);
        }
    }
    let mut vertices: Vec<Point> = cells
        .iter()
        .flat_map(|c| c.polygon.vertices.iter().cloned())
        .filter(|v| horn.halfplanes.iter().all(|h| h.eval(v) > h.c))
        .collect();
    vertices.sort();
    vertices.dedup();

    vertices
        .into_iter()
        .map(|v| {
            let mut around: Vec<(f64, usize)> = cells
                .iter()
                .enumerate()
                .filter(|(_, c)| c.polygon.vertices.contains(&v))
                .map(|(i, _)| {
                    let d = [to_f64(&(&centroids[i][0] - &v[0])), to_f64(&(&centroids[i][1] - &v[1]))];
                    (d[1].atan2(d[0]), i)
                })
                .collect();
            around.sort_by(|a, b| a.0.total_cmp(&b.0));
            let n = around.len();
            let mut total = Poly2::zero();
            let mut ok = n >= 2;
            let mut active = 0;
            for t in 0..n {
                let (cur, nxt) = (around[t].1, around[(t + 1) % n].1);
                match by_pair.get(&(cur.min(nxt), cur.max(nxt))).and_then(|w| w.jump().map(|j| (w, j))) {
                    Some((w, j)) => {
                        if w.class != WallClass::Inactive {
                            active += 1;
                        }
                        total = if w.pos == Some(nxt) { total + j } else { total - j };
                    }
                    None => ok = false,
                }
            }
            LoopCheck {
                vertex: v,
                cells: n,
                active_walls: active,
                holds: ok && total.is_zero(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C1Sample {
    pub kind: LineKind,
    #[serde(serialize_with = "ser_rational")]
    pub level: Rational,
    #[serde(serialize_with = "ser_point")]
    pub point: Point,
    /// Largest gap between one-sided difference quotients along the axes.
    pub discrepancy: f64,
}

/// One-sided difference quotients of [`j_b2`] with step `h` at the midpoint
/// of every interior wall.
pub fn c1_check(pq: &PiecewiseQuadratic, h: &Rational) -> Vec<C1Sample> {
    pq.walls
        .par_iter()
        .filter(|w| w.is_interior())
        .map(|w| {
            let m = lerp(&w.segment[0], &w.segment[1], &q(1, 2));
            let j0 = j_b2(&pq.alpha, &pq.beta, &m);
            let mut worst = 0.0f64;
            for e in [[qi(1), qi(0)], [qi(0), qi(1)]] {
                let fwd = [&m[0] + h * &e[0], &m[1] + h * &e[1]];
                let bwd = [&m[0] - h * &e[0], &m[1] - h * &e[1]];
                let dp = (j_b2(&pq.alpha, &pq.beta, &fwd) - &j0) / h;
                let dm = (&j0 - j_b2(&pq.alpha, &pq.beta, &bwd)) / h;
                worst = worst.max(to_f64(&(dp - dm).abs()));
            }
            C1Sample {
                kind: w.kind,
                level: w.level.clone(),
                point: m,
                discrepancy: worst,
            }
        })
        .collect()
}

fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt(x))
}

fn ser_opt_rational<S: Serializer>(x: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&fmt(v)),
        None => s.serialize_none(),
    }
}

fn ser_point<S: Serializer>(p: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
    [fmt(&p[0]), fmt(&p[1])].serialize(s)
}

fn ser_points<S: Serializer>(ps: &[Point; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
    ps.iter()
        .map(|p| [fmt(&p[0]), fmt(&p[1])])
        .collect::<Vec<_>>()
        .serialize(s)
}

fn ser_polygon<S: Serializer>(p: &RationalPolygon, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.vertices
        .iter()
        .map(|v| [fmt(&v[0]), fmt(&v[1])])
        .collect::<Vec<_>>()
        .serialize(s)
}

fn ser_coeffs<S: Serializer>(c: &[Rational; 6], s: S) -> std::result::Result<S::Ok, S::Error> {
    c.iter().map(fmt).collect::<Vec<_>>().serialize(s)
}
