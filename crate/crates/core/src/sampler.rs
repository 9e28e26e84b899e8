//! Monte Carlo spectra of sums of random orbit points, for checking the
//! `B2` Horn density and the `SO(2)` closed form against sampled data.

use std::fmt::Write as _;

use nalgebra::{Matrix5, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bzpolytope::Point;
use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::volume::{cdf_so2, horn_polygon_b2, pdf_prefactor_b2, Poly2, PiecewiseQuadratic};

/// Independent streams per run; fixed so results do not depend on the
/// thread count.
const STREAMS: u64 = 256;

/// Slack allowed in support membership of floating samples.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
}

impl Axis {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn index(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x <= self.hi) {
            return None;
        }
        Some((((x - self.lo) / self.width()) as usize).min(self.bins - 1))
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.lo + self.width() * i as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + self.width() * (i as f64 + 0.5)
    }
}

/// Counts on a 1- or 2-dimensional grid, row-major in the axes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HornHistogram {
    pub axes: Vec<Axis>,
    pub counts: Vec<u64>,
    pub sample_count: u64,
    pub rng_seed: u64,
    /// Samples violating a support inequality by more than the tolerance.
    pub outside_support: u64,
    /// Largest violation seen, tolerance or not.
    pub max_violation: f64,
}

impl HornHistogram {
    fn empty(axes: Vec<Axis>, seed: u64) -> Self {
        let cells = axes.iter().map(|a| a.bins).product();
        HornHistogram {
            axes,
            counts: vec![0; cells],
            sample_count: 0,
            rng_seed: seed,
            outside_support: 0,
            max_violation: 0.0,
        }
    }

    fn add(&mut self, x: &[f64], violation: f64) {
        self.sample_count += 1;
        self.max_violation = self.max_violation.max(violation);
        if violation > MEMBERSHIP_TOL {
            self.outside_support += 1;
        }
        let mut idx = 0;
        for (a, &v) in self.axes.iter().zip(x) {
            match a.index(v) {
                Some(i) => idx = idx * a.bins + i,
                None => return,
            }
        }
        self.counts[idx] += 1;
    }

    fn merge(mut self, other: HornHistogram) -> HornHistogram {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.sample_count += other.sample_count;
        self.outside_support += other.outside_support;
        self.max_violation = self.max_violation.max(other.max_violation);
        self
    }

    pub fn binned_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn bin_volume(&self) -> f64 {
        self.axes.iter().map(Axis::width).product()
    }

    /// CSV with a JSON header line echoing the seed and sample count.
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# {}\n",
            serde_json::json!({"schema_version": 1, "seed": self.rng_seed, "N": self.sample_count})
        );
        let names: Vec<String> = (1..=self.axes.len()).map(|i| format!("bin_center{i}")).collect();
        let _ = writeln!(s, "{},count,density", names.join(","));
        let norm = self.sample_count.max(1) as f64 * self.bin_volume();
        for (flat, &c) in self.counts.iter().enumerate() {
            let mut rest = flat;
            let mut centers = vec![0.0; self.axes.len()];
            for (k, a) in self.axes.iter().enumerate().rev() {
                centers[k] = a.center(rest % a.bins);
                rest /= a.bins;
            }
            let cs: Vec<String> = centers.iter().map(|x| format!("{x}")).collect();
            let _ = writeln!(s, "{},{},{}", cs.join(","), c, c as f64 / norm);
        }
        s
    }
}

/// Haar-distributed element of `SO(5)`: QR of a Gaussian matrix with the
/// diagonal of `R` made positive, then a column flip if the determinant is
/// negative.
pub fn haar_so5<R: Rng + ?Sized>(rng: &mut R) -> Matrix5<f64> {
    let g = Matrix5::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..5 {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Block-diagonal skew matrix with frequencies `x1`, `x2`.
pub fn skew_block(x: [f64; 2]) -> Matrix5<f64> {
    let mut m = Matrix5::zeros();
    m[(0, 1)] = x[0];
    m[(1, 0)] = -x[0];
    m[(2, 3)] = x[1];
    m[(3, 2)] = -x[1];
    m
}

/// Frequencies `g1 >= g2 >= 0` of a `5 x 5` skew matrix, from the
/// eigenvalues of `-M^2`, which come in equal pairs plus a zero.
pub fn skew_frequencies(m: &Matrix5<f64>) -> [f64; 2] {
    let s = -(m * m);
    let sym = (s + s.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    let g1 = ((ev[0] + ev[1]) / 2.0).max(0.0).sqrt();
    let g2 = ((ev[2] + ev[3]) / 2.0).max(0.0).sqrt();
    [g1, g2]
}

fn check_regular(x: &[f64; 2]) -> Result<()> {
    if x[0] > x[1] && x[1] > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "({}, {}) is not regular: need x1 > x2 > 0",
            x[0], x[1]
        )))
    }
}

fn chunks(n: u64) -> Vec<(u64, u64)> {
    let per = n.div_ceil(STREAMS);
    (0..STREAMS)
        .map(|k| (k, per.min(n.saturating_sub(k * per))))
        .filter(|&(_, c)| c > 0)
        .collect()
}

fn stream(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Bounding box of the Horn polygon as histogram axes.
pub fn horn_axes(alpha: &Point, beta: &Point, bins: usize) -> Result<Vec<Axis>> {
    let poly = horn_polygon_b2(alpha, beta)?;
    let xs: Vec<f64> = poly.vertices.iter().map(|v| to_f64(&v[0])).collect();
    let ys: Vec<f64> = poly.vertices.iter().map(|v| to_f64(&v[1])).collect();
    let ax = |v: &[f64]| Axis {
        lo: v.iter().copied().fold(f64::INFINITY, f64::min),
        hi: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        bins,
    };
    Ok(vec![ax(&xs), ax(&ys)])
}

/// Histogram of the ordered spectrum of `g1 A g1^T + g2 B g2^T` for Haar
/// `g1, g2` in `SO(5)`.
pub fn sample_b2_spectrum(alpha: &Point, beta: &Point, n: u64, seed: u64, bins: usize) -> Result<HornHistogram> {
    if n == 0 {
        return Err(Error::Precondition("sample count must be positive".into()));
    }
    let axes = horn_axes(alpha, beta, bins)?;
    let hp: Vec<(f64, f64, f64)> = horn_polygon_b2(alpha, beta)?
        .halfplanes
        .iter()
        .map(|h| (to_f64(&h.a), to_f64(&h.b), to_f64(&h.c)))
        .collect();
    let fa = [to_f64(&alpha[0]), to_f64(&alpha[1])];
    let fb = [to_f64(&beta[0]), to_f64(&beta[1])];
    check_regular(&fa)?;
    check_regular(&fb)?;
    let (a, b) = (skew_block(fa), skew_block(fb));
    let hist = chunks(n)
        .into_par_iter()
        .map(|(k, count)| {
            let mut rng = stream(seed, k);
            let mut h = HornHistogram::empty(axes.clone(), seed);
            for _ in 0..count {
                let g1 = haar_so5(&mut rng);
                let g2 = haar_so5(&mut rng);
                let m = g1 * a * g1.transpose() + g2 * b * g2.transpose();
                let g = skew_frequencies(&m);
                let viol = hp
                    .iter()
                    .map(|&(ha, hb, hc)| hc - (ha * g[0] + hb * g[1]))
                    .fold(0.0, f64::max);
                h.add(&g, viol);
            }
            h
        })
        .reduce(|| HornHistogram::empty(axes.clone(), seed), HornHistogram::merge);
    Ok(hist)
}

/// `sqrt(a^2 + b^2 + 2 a b cos 2 phi)` for uniform `phi`.
fn so2_draws(a: f64, b: f64, n: u64, seed: u64) -> Vec<Vec<f64>> {
    chunks(n)
        .into_par_iter()
        .map(|(k, count)| {
            let mut rng = stream(seed, k);
            (0..count)
                .map(|_| {
                    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    (a * a + b * b + 2.0 * a * b * (2.0 * phi).cos()).max(0.0).sqrt()
                })
                .collect()
        })
        .collect()
}

fn so2_check(a: f64, b: f64, n: u64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Precondition("SO(2) arguments must be positive".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("sample count must be positive".into()));
    }
    Ok(())
}

/// Histogram of `gamma_12` over `[|a - b|, a + b]`.
pub fn sample_so2_symmetric(a: f64, b: f64, n: u64, seed: u64, bins: usize) -> Result<HornHistogram> {
    so2_check(a, b, n)?;
    let (lo, hi) = ((a - b).abs(), a + b);
    let axes = vec![Axis { lo, hi, bins }];
    let mut h = HornHistogram::empty(axes, seed);
    for chunk in so2_draws(a, b, n, seed) {
        for g in chunk {
            h.add(&[g], (lo - g).max(g - hi).max(0.0));
        }
    }
    Ok(h)
}

/// Distribution function of `gamma_12` tabulated in the variable `t` of
/// `g = lo + (hi - lo)(1 - cos t)/2` and interpolated linearly.
struct So2CdfTable {
    lo: f64,
    half: f64,
    step: f64,
    values: Vec<f64>,
}

impl So2CdfTable {
    fn new(a: f64, b: f64, panels: usize) -> Self {
        let (lo, hi) = ((a - b).abs(), a + b);
        let half = (hi - lo) / 2.0;
        let step = std::f64::consts::PI / panels as f64;
        let values = (0..=panels)
            .map(|i| {
                let t = i as f64 * step;
                cdf_so2(a, b, lo + half * (1.0 - t.cos()))
            })
            .collect();
        So2CdfTable { lo, half, step, values }
    }

    fn eval(&self, g: f64) -> f64 {
        let t = (1.0 - (g - self.lo) / self.half).clamp(-1.0, 1.0).acos();
        let x = t / self.step;
        let i = (x as usize).min(self.values.len() - 2);
        let f = x - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub n: u64,
    pub distance: f64,
}

/// Kolmogorov-Smirnov distance between sampled `gamma_12` and the analytic
/// distribution function.
pub fn ks_so2(a: f64, b: f64, n: u64, seed: u64) -> Result<KsReport> {
    so2_check(a, b, n)?;
    let mut xs: Vec<f64> = so2_draws(a, b, n, seed).into_iter().flatten().collect();
    xs.par_sort_unstable_by(|x, y| x.total_cmp(y));
    let table = So2CdfTable::new(a, b, 4096);
    let nf = xs.len() as f64;
    let distance = xs
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = table.eval(x);
            (f - i as f64 / nf).abs().max(((i + 1) as f64 / nf - f).abs())
        })
        .reduce(|| 0.0, f64::max);
    Ok(KsReport { n, distance })
}

/// Sample mean of `g_11^2` for Haar `g` in `SO(5)`; tends to `1/5`.
pub fn haar_mean_g11_sq(n: u64, seed: u64) -> f64 {
    let total: f64 = chunks(n)
        .into_par_iter()
        .map(|(k, count)| {
            let mut rng = stream(seed, k);
            (0..count).map(|_| haar_so5(&mut rng)[(0, 0)].powi(2)).sum::<f64>()
        })
        .sum();
    total / n as f64
}

fn clip_f64(poly: &[[f64; 2]], f: impl Fn(&[f64; 2]) -> f64) -> Vec<[f64; 2]> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        let (fp, fq) = (f(p), f(q));
        if fp >= 0.0 {
            out.push(*p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Expected probability of every bin of a 2-D histogram under the density,
/// integrating each quadratic piece times the prefactor over bin-cell
/// intersections.
pub fn expected_bin_masses(pq: &PiecewiseQuadratic, axes: &[Axis]) -> Vec<f64> {
    let pre = pdf_prefactor_b2(&pq.alpha, &pq.beta);
    let pieces: Vec<(Poly2, Vec<[f64; 2]>)> = pq
        .cells
        .iter()
        .map(|c| {
            let vs = c.polygon.vertices.iter().map(|v| [to_f64(&v[0]), to_f64(&v[1])]).collect();
            (&pre * &c.poly(), vs)
        })
        .collect();
    let (ax, ay) = (axes[0], axes[1]);
    (0..ax.bins * ay.bins)
        .into_par_iter()
        .map(|flat| {
            let (i, j) = (flat / ay.bins, flat % ay.bins);
            let (x0, x1, y0, y1) = (ax.edge(i), ax.edge(i + 1), ay.edge(j), ay.edge(j + 1));
            pieces
                .iter()
                .map(|(p, vs)| {
                    let mut c = vs.clone();
                    c = clip_f64(&c, |v| v[0] - x0);
                    c = clip_f64(&c, |v| x1 - v[0]);
                    c = clip_f64(&c, |v| v[1] - y0);
                    c = clip_f64(&c, |v| y1 - v[1]);
                    if c.len() < 3 {
                        0.0
                    } else {
                        p.integrate_polygon_f64(&c)
                    }
                })
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chi2Report {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bins tested on their own.
    pub bins_used: usize,
    /// Bins merged into one pooled class for having small expectation.
    pub bins_pooled: usize,
}

fn chi2_p(stat: f64, dof: usize) -> f64 {
    ChiSquared::new(dof.max(1) as f64)
        .map(|d| d.sf(stat))
        .unwrap_or(f64::NAN)
}

/// Pearson test of a 2-D histogram against [`expected_bin_masses`]; bins
/// expecting fewer than `min_expected` counts are pooled.
pub fn chi2_against_pdf(h: &HornHistogram, pq: &PiecewiseQuadratic, min_expected: f64) -> Chi2Report {
    let masses = expected_bin_masses(pq, &h.axes);
    let n = h.sample_count as f64;
    let (mut stat, mut used, mut pooled) = (0.0, 0usize, 0usize);
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &m) in h.counts.iter().zip(&masses) {
        let e = m * n;
        if e >= min_expected {
            stat += (o as f64 - e).powi(2) / e;
            used += 1;
        } else {
            pool_o += o as f64;
            pool_e += e;
            pooled += 1;
        }
    }
    let mut classes = used;
    if pooled > 0 && pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        classes += 1;
    }
    let dof = classes.saturating_sub(1);
    Chi2Report {
        statistic: stat,
        dof,
        p_value: chi2_p(stat, dof),
        bins_used: used,
        bins_pooled: pooled,
    }
}

/// Two-sample Pearson test on histograms with identical axes.
pub fn chi2_two_sample(h1: &HornHistogram, h2: &HornHistogram) -> Chi2Report {
    let (n1, n2) = (h1.binned_total() as f64, h2.binned_total() as f64);
    let (k1, k2) = ((n2 / n1).sqrt(), (n1 / n2).sqrt());
    let (mut stat, mut used) = (0.0, 0usize);
    for (&a, &b) in h1.counts.iter().zip(&h2.counts) {
        if a + b == 0 {
            continue;
        }
        let (a, b) = (a as f64, b as f64);
        stat += (k1 * a - k2 * b).powi(2) / (a + b);
        used += 1;
    }
    let dof = used.saturating_sub(1);
    Chi2Report {
        statistic: stat,
        dof,
        p_value: chi2_p(stat, dof),
        bins_used: used,
        bins_pooled: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use crate::volume::piecewise_analyze_b2;

    fn p(a: i64, b: i64) -> Point {
        [qi(a), qi(b)]
    }

    #[test]
    fn haar_is_orthogonal() {
        let mut rng = stream(1, 0);
        let g = haar_so5(&mut rng);
        assert!((g * g.transpose() - Matrix5::identity()).norm() < 1e-12);
        assert!((g.determinant() - 1.0).abs() < 1e-12);
        let m = haar_mean_g11_sq(200_000, 3);
        // variance of g11^2 is 2/35 for SO(5)
        assert!((m - 0.2).abs() < 5.0 * (2.0f64 / 35.0 / 200_000.0).sqrt(), "{m}");
    }

    #[test]
    fn frequencies_of_block_matrix() {
        let g = skew_frequencies(&skew_block([3.0, 5.0]));
        assert!((g[0] - 5.0).abs() < 1e-12 && (g[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_supported() {
        let (a, b) = (p(17, 4), p(15, 9));
        let h1 = sample_b2_spectrum(&a, &b, 20_000, 11, 10).unwrap();
        let h2 = sample_b2_spectrum(&a, &b, 20_000, 11, 10).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1.sample_count, 20_000);
        assert_eq!(h1.binned_total(), 20_000);
        assert_eq!(h1.outside_support, 0, "max violation {}", h1.max_violation);
        assert!(sample_b2_spectrum(&a, &p(3, 3), 10, 1, 4).is_err());
        assert!(sample_b2_spectrum(&a, &b, 0, 1, 4).is_err());
        let csv = h1.to_csv();
        assert!(csv.starts_with("# {"));
        assert_eq!(csv.lines().count(), 2 + 100);
    }

    #[test]
    fn swap_symmetry() {
        let (a, b) = (p(17, 4), p(15, 9));
        let h1 = sample_b2_spectrum(&a, &b, 50_000, 5, 8).unwrap();
        let h2 = sample_b2_spectrum(&b, &a, 50_000, 6, 8).unwrap();
        let r = chi2_two_sample(&h1, &h2);
        assert!(r.p_value > 1e-3, "{r:?}");
    }

    #[test]
    fn small_chi2() {
        let (a, b) = (p(17, 4), p(15, 9));
        let pq = piecewise_analyze_b2(&a, &b).unwrap();
        let h = sample_b2_spectrum(&a, &b, 100_000, 2, 20).unwrap();
        let masses = expected_bin_masses(&pq, &h.axes);
        let total: f64 = masses.iter().sum();
        assert!((total - 1.0).abs() < 1e-9, "{total}");
        let r = chi2_against_pdf(&h, &pq, 5.0);
        assert!(r.p_value > 1e-3, "{r:?}");
    }

    #[test]
    fn so2_support_and_ks() {
        let h = sample_so2_symmetric(1.0, 2.0, 50_000, 9, 20).unwrap();
        assert_eq!(h.axes[0].lo, 1.0);
        assert_eq!(h.axes[0].hi, 3.0);
        assert_eq!(h.outside_support, 0);
        // the density diverges at both ends
        let c = &h.counts;
        assert!(c[0] > c[10] && c[19] > c[10]);
        let ks = ks_so2(1.0, 2.0, 50_000, 9).unwrap();
        assert!(ks.distance < 0.01, "{ks:?}");
        assert!(sample_so2_symmetric(0.0, 2.0, 10, 1, 4).is_err());
        assert!(ks_so2(1.0, 2.0, 0, 1).is_err());
    }
}
