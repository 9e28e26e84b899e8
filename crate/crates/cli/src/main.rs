//! `hornvol`: command-line front end.
//!
//! Exit codes: 0 when every internal cross-check agrees, 1 when two methods
//! or routes disagree, 2 on invalid input or an unsupported request.

mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hornvol::bzpolytope::{bz_polygon_b2_labels, lr_bz_b2, Degeneracy, Point};
use hornvol::covolume::{covolume_table, markdown_table};
use hornvol::ehrhart::{default_sample_range, fit_counts, stretched_samples};
use hornvol::multiplicity::{LrEngine, MultiplicityConfig, DEFAULT_MAX_DIM};
use hornvol::rational::{fmt, parse as parse_rational, parse_list, Rational};
use hornvol::rootsys::weyl::b2_dynkin_to_ortho;
use hornvol::sampler::{chi2_against_pdf, ks_so2, sample_b2_spectrum, sample_so2_symmetric};
use hornvol::volume::{grid_b2, grid_csv, j_b2_labels, j_lr_unshifted, piecewise_analyze_b2, GridSpec};
use hornvol::{Family, RootSystem};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "hornvol", version, about = "Horn problem volumes, LR coefficients and BZ polytopes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tensor-product multiplicity C_{lambda mu}^nu.
    Lr {
        algebra: String,
        lambda: String,
        mu: String,
        nu: String,
        #[arg(long, value_enum, default_value_t = Method::Klimyk)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Largest module dimension whose weights may be listed.
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: u128,
    },
    /// Volume function J(lambda, mu; nu) along one or more routes.
    Volume {
        algebra: String,
        lambda: String,
        mu: String,
        nu: String,
        #[arg(long, value_enum, default_value_t = Route::All)]
        route: Route,
        #[arg(long, default_value_t = 2)]
        period: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: u128,
    },
    /// J and its density on a grid over the B2 gamma-plane.
    Grid {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Steps per side.
        #[arg(long, default_value_t = 64)]
        res: usize,
        #[arg(long, value_enum, default_value_t = Basis::Dynkin)]
        basis: Basis,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stretching quasi-polynomial s -> C_{s lambda, s mu}^{s nu}.
    Ehrhart {
        algebra: String,
        lambda: String,
        mu: String,
        nu: String,
        #[arg(long, default_value_t = 2)]
        period: usize,
        /// Largest stretch sampled; defaults to one check sample per class.
        #[arg(long)]
        smax: Option<i64>,
        /// Defaults to the number of positive roots minus the rank.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: u128,
    },
    /// Squared covolumes by Gram determinant and by closed formula.
    Covolume {
        /// A, B, C, D, E6, E7, E8, F4, G2 or all.
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Monte Carlo histogram of the Horn spectrum compared with the density.
    Sample {
        #[arg(long, value_enum, default_value_t = Group::B2)]
        group: Group,
        /// B2: two coordinates; SO(2): one positive number.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(short = 'n', long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bins per axis.
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = Basis::Dynkin)]
        basis: Basis,
        /// Histogram CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Klimyk,
    Steinberg,
    Bz,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Lr,
    Ehrhart,
    Polytope,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Svg,
    Md,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    Dynkin,
    Orthonormal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    B2,
    So2,
}

/// Outcome of a command that ran to completion.
struct Report {
    stdout: String,
    consistent: bool,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report { stdout, consistent: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(r) => {
            print!("{}", r.stdout);
            if r.consistent {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: cross-check disagreement");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<Report> {
    match cmd {
        Cmd::Lr { algebra, lambda, mu, nu, method, format, max_dim } => {
            cmd_lr(&algebra, [&lambda, &mu, &nu], method, format, max_dim)
        }
        Cmd::Volume { algebra, lambda, mu, nu, route, period, format, max_dim } => {
            cmd_volume(&algebra, [&lambda, &mu, &nu], route, period, format, max_dim)
        }
        Cmd::Grid { alpha, beta, res, basis, format, out } => cmd_grid(&alpha, &beta, res, basis, format, out),
        Cmd::Ehrhart { algebra, lambda, mu, nu, period, smax, degree, max_dim } => {
            cmd_ehrhart(&algebra, [&lambda, &mu, &nu], period, smax, degree, max_dim)
        }
        Cmd::Covolume { family, max_rank, format } => cmd_covolume(&family, max_rank, format),
        Cmd::Sample { group, alpha, beta, samples, seed, bins, basis, out } => {
            cmd_sample(group, &alpha, &beta, samples, seed, bins, basis, out)
        }
    }
}

fn parse_algebra(s: &str) -> Result<RootSystem> {
    let (family, rank) = Family::parse(s)?;
    let rank = rank
        .or(family.fixed_rank())
        .ok_or_else(|| anyhow!("algebra {s:?} needs a rank, e.g. B2"))?;
    Ok(RootSystem::new(family, rank)?)
}

fn parse_labels(rs: &RootSystem, s: &str) -> Result<Vec<i64>> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("weight {s:?} must be comma-separated integer Dynkin labels"))?;
    if v.len() != rs.rank() {
        bail!("weight {s:?} has {} labels, {} needs {}", v.len(), rs.name(), rs.rank());
    }
    rs.check_dominant(&v)?;
    Ok(v)
}

fn parse_triple(rs: &RootSystem, w: [&String; 3]) -> Result<[Vec<i64>; 3]> {
    Ok([parse_labels(rs, w[0])?, parse_labels(rs, w[1])?, parse_labels(rs, w[2])?])
}

fn engine(rs: &RootSystem, max_dim: u128) -> Result<LrEngine> {
    Ok(LrEngine::with_config(rs, MultiplicityConfig { max_dim })?)
}

fn is_b2(rs: &RootSystem) -> bool {
    rs.family() == Family::B && rs.rank() == 2
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn cmd_lr(alg: &str, w: [&String; 3], method: Method, format: Format, max_dim: u128) -> Result<Report> {
    let rs = parse_algebra(alg)?;
    let [l, m, n] = parse_triple(&rs, w)?;
    let methods: Vec<Method> = match method {
        Method::All if is_b2(&rs) => vec![Method::Klimyk, Method::Steinberg, Method::Bz],
        Method::All => vec![Method::Klimyk, Method::Steinberg],
        Method::Bz if !is_b2(&rs) => bail!("the BZ method is implemented for B2 only"),
        m => vec![m],
    };
    let e = engine(&rs, max_dim)?;
    let mut values = Vec::new();
    for m_ in &methods {
        let (name, v) = match m_ {
            Method::Klimyk => ("klimyk", e.klimyk(&l, &m, &n)?),
            Method::Steinberg => ("steinberg", e.steinberg(&l, &m, &n)?),
            _ => ("bz", lr_bz_b2(&l, &m, &n)),
        };
        values.push((name, v));
    }
    let agree = values.windows(2).all(|p| p[0].1 == p[1].1);
    let stdout = match format {
        Format::Json => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "algebra": rs.name(),
            "lambda": l, "mu": m, "nu": n,
            "compatible": rs.is_compatible(&l, &m, &n),
            "values": values.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "agree": agree,
        })),
        _ => values.iter().map(|(_, v)| v.to_string()).collect::<Vec<_>>().join(",") + "\n",
    };
    Ok(Report { stdout, consistent: agree })
}

fn positive_root_count(rs: &RootSystem) -> usize {
    rs.positive_roots_simple().len()
}

fn ehrhart_leading(e: &LrEngine, t: &[Vec<i64>; 3], period: usize) -> Result<Rational> {
    let rs = e.root_system();
    let degree = positive_root_count(rs) - rs.rank();
    let samples = stretched_samples(e, &t[0], &t[1], &t[2], default_sample_range(degree, period))?;
    Ok(fit_counts(&samples, degree, period)?.leading_coefficient()?)
}

fn cmd_volume(alg: &str, w: [&String; 3], route: Route, period: usize, format: Format, max_dim: u128) -> Result<Report> {
    let rs = parse_algebra(alg)?;
    let t = parse_triple(&rs, w)?;
    let b2 = is_b2(&rs);
    let routes: Vec<Route> = match route {
        Route::All if b2 => vec![Route::Direct, Route::Lr, Route::Ehrhart, Route::Polytope],
        Route::All => vec![Route::Lr, Route::Ehrhart],
        Route::Direct | Route::Polytope if !b2 => bail!("routes direct and polytope are implemented for B2 only"),
        r => vec![r],
    };
    let needs_compatible = routes.iter().any(|r| matches!(r, Route::Lr | Route::Ehrhart));
    if needs_compatible && !rs.is_compatible(&t[0], &t[1], &t[2]) {
        bail!("routes lr and ehrhart need a compatible triple");
    }
    let e = engine(&rs, max_dim)?;
    let mut values: Vec<(&str, Rational)> = Vec::new();
    let mut degeneracy = None;
    for r in routes {
        let v = match r {
            Route::Direct => ("direct", j_b2_labels(&t[0], &t[1], &t[2])),
            Route::Lr => ("lr", j_lr_unshifted(&e, &t[0], &t[1], &t[2])?),
            Route::Ehrhart => ("ehrhart", ehrhart_leading(&e, &t, period)?),
            _ => {
                let poly = bz_polygon_b2_labels(&t[0], &t[1], &t[2]);
                let d = poly.degeneracy();
                let area = match d {
                    Degeneracy::Full => poly.area()?,
                    _ => Rational::default(),
                };
                degeneracy = Some(d);
                ("polytope", area)
            }
        };
        values.push(v);
    }
    let agree = values.windows(2).all(|p| p[0].1 == p[1].1);
    let degen_text = |d: &Degeneracy| match d {
        Degeneracy::Full => None,
        Degeneracy::Empty => Some("empty".to_string()),
        Degeneracy::Point => Some("point".to_string()),
        Degeneracy::Segment(len) => Some(format!("segment of relative length {}", fmt(len))),
    };
    let stdout = match format {
        Format::Json => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "algebra": rs.name(),
            "lambda": t[0], "mu": t[1], "nu": t[2],
            "routes": values.iter().map(|(k, v)| (k.to_string(), json!(fmt(v)))).collect::<serde_json::Map<_, _>>(),
            "degenerate": degeneracy.as_ref().and_then(degen_text),
            "agree": agree,
        })),
        _ => {
            let mut s = String::new();
            for (k, v) in &values {
                s += &format!("{k} {}", fmt(v));
                if *k == "polytope" {
                    if let Some(d) = degeneracy.as_ref().and_then(degen_text) {
                        s += &format!(" (degenerate: {d})");
                    }
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Report { stdout, consistent: agree })
}

/// Two rational coordinates, converted to the orthonormal frame.
fn parse_b2_point(s: &str, basis: Basis) -> Result<Point> {
    let v = parse_list(s)?;
    let [a, b] = <[Rational; 2]>::try_from(v).map_err(|_| anyhow!("{s:?} must have two coordinates"))?;
    Ok(match basis {
        Basis::Dynkin => b2_dynkin_to_ortho(&a, &b),
        Basis::Orthonormal => [a, b],
    })
}

fn write_or_print(out: Option<PathBuf>, body: String) -> Result<String> {
    match out {
        Some(p) => {
            fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn cmd_grid(alpha: &str, beta: &str, res: usize, basis: Basis, format: Format, out: Option<PathBuf>) -> Result<Report> {
    let a = parse_b2_point(alpha, basis)?;
    let b = parse_b2_point(beta, basis)?;
    let spec = GridSpec::covering(&a, &b, res);
    let rows = grid_b2(&a, &b, &spec)?;
    let body = match format {
        Format::Csv => grid_csv(&rows),
        Format::Svg => svg::render(&a, &b, &spec, &rows)?,
        _ => bail!("grid writes csv or svg"),
    };
    Ok(Report::ok(write_or_print(out, body)?))
}

fn cmd_ehrhart(
    alg: &str,
    w: [&String; 3],
    period: usize,
    smax: Option<i64>,
    degree: Option<usize>,
    max_dim: u128,
) -> Result<Report> {
    let rs = parse_algebra(alg)?;
    let [l, m, n] = parse_triple(&rs, w)?;
    if period == 0 {
        bail!("period must be positive");
    }
    if !rs.is_compatible(&l, &m, &n) {
        bail!("stretching needs a compatible triple");
    }
    let degree = degree.unwrap_or(positive_root_count(&rs) - rs.rank());
    let range = match smax {
        Some(s) => 0..=s,
        None => default_sample_range(degree, period),
    };
    let e = engine(&rs, max_dim)?;
    let samples = stretched_samples(&e, &l, &m, &n, range)?;
    let qp = fit_counts(&samples, degree, period)?;
    let v = json!({
        "schema_version": SCHEMA_VERSION,
        "algebra": rs.name(),
        "lambda": l, "mu": m, "nu": n,
        "degree": degree,
        "samples": samples.iter().map(|(s, c)| (s.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
        "quasi_polynomial": qp,
        "classes": (0..period).map(|r| qp.class_string(r)).collect::<Vec<_>>(),
        "leading_coefficient": qp.leading_coefficient().ok().map(|x| fmt(&x)),
    });
    Ok(Report::ok(pretty(&v)))
}

fn covolume_specs(family: &str, max_rank: usize) -> Result<Vec<(Family, usize)>> {
    let classical = |f: Family, min: usize| (min..=max_rank).map(move |r| (f, r));
    let exceptional = [(Family::G2, 2), (Family::F4, 4), (Family::E6, 6), (Family::E7, 7), (Family::E8, 8)];
    if family.eq_ignore_ascii_case("all") {
        let mut v: Vec<_> = classical(Family::A, 1)
            .chain(classical(Family::B, 2))
            .chain(classical(Family::C, 3))
            .chain(classical(Family::D, 4))
            .collect();
        v.extend(exceptional);
        return Ok(v);
    }
    let (f, rank) = Family::parse(family)?;
    Ok(match (f, rank) {
        (_, Some(r)) => vec![(f, r)],
        (Family::A, None) => classical(f, 1).collect(),
        (Family::B, None) => classical(f, 2).collect(),
        (Family::C, None) => classical(f, 3).collect(),
        (Family::D, None) => classical(f, 4).collect(),
        (_, None) => vec![(f, f.fixed_rank().expect("exceptional families have a fixed rank"))],
    })
}

fn cmd_covolume(family: &str, max_rank: usize, format: Format) -> Result<Report> {
    let reports = covolume_table(&covolume_specs(family, max_rank)?)?;
    let agree = reports.iter().all(|r| r.agree);
    let stdout = match format {
        Format::Json => pretty(&json!({ "schema_version": SCHEMA_VERSION, "reports": reports })),
        Format::Md | Format::Text => markdown_table(&reports),
        _ => bail!("covolume writes md or json"),
    };
    Ok(Report { stdout, consistent: agree })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    group: Group,
    alpha: &str,
    beta: &str,
    n: u64,
    seed: u64,
    bins: usize,
    basis: Basis,
    out: Option<PathBuf>,
) -> Result<Report> {
    if n == 0 {
        bail!("sample count must be positive");
    }
    if bins == 0 {
        bail!("bins must be positive");
    }
    let summary = match group {
        Group::B2 => {
            let a = parse_b2_point(alpha, basis)?;
            let b = parse_b2_point(beta, basis)?;
            let h = sample_b2_spectrum(&a, &b, n, seed, bins)?;
            let pq = piecewise_analyze_b2(&a, &b)?;
            let chi = chi2_against_pdf(&h, &pq, 5.0);
            if let Some(p) = &out {
                fs::write(p, h.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            json!({
                "schema_version": SCHEMA_VERSION,
                "group": "B2",
                "alpha": [fmt(&a[0]), fmt(&a[1])],
                "beta": [fmt(&b[0]), fmt(&b[1])],
                "samples": n,
                "seed": seed,
                "bins": bins,
                "outside_support": h.outside_support,
                "max_violation": h.max_violation,
                "chi2": chi,
            })
        }
        Group::So2 => {
            let a = hornvol::rational::to_f64(&parse_rational(alpha)?);
            let b = hornvol::rational::to_f64(&parse_rational(beta)?);
            let h = sample_so2_symmetric(a, b, n, seed, bins)?;
            let ks = ks_so2(a, b, n, seed)?;
            let first = h.counts.iter().position(|&c| c > 0);
            let last = h.counts.iter().rposition(|&c| c > 0);
            let axis = &h.axes[0];
            let detected = first.zip(last).map(|(i, j)| [axis.edge(i), axis.edge(j + 1)]);
            if let Some(p) = &out {
                fs::write(p, h.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            json!({
                "schema_version": SCHEMA_VERSION,
                "group": "SO2",
                "alpha": a,
                "beta": b,
                "samples": n,
                "seed": seed,
                "bins": bins,
                "support": [axis.lo, axis.hi],
                "support_detected": detected,
                "outside_support": h.outside_support,
                "ks": ks,
            })
        }
    };
    Ok(Report::ok(pretty(&summary)))
}
