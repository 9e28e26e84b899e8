//! Static SVG of the B2 gamma-plane: J as a heat map, the Horn polygon,
//! candidate lines (faint), the segments where J changes determination
//! (solid) and the chamber walls (dashed).

use std::fmt::Write as _;

use anyhow::Result;
use hornvol::bzpolytope::Point;
use hornvol::rational::{fmt, to_f64};
use hornvol::volume::{horn_polygon_b2, piecewise_analyze_b2, singular_lines_in_horn_b2, GridRow, GridSpec};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;

struct Frame {
    x0: f64,
    y0: f64,
    span: f64,
}

impl Frame {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let s = (SIZE - 2.0 * MARGIN) / self.span;
        (MARGIN + (x - self.x0) * s, SIZE - MARGIN - (y - self.y0) * s)
    }

    fn scale(&self) -> f64 {
        (SIZE - 2.0 * MARGIN) / self.span
    }
}

/// Portion of `n . x = level` inside `a x + b y >= c` for every half-plane.
fn clip_line(n: (f64, f64), level: f64, hs: &[(f64, f64, f64)]) -> Option<[(f64, f64); 2]> {
    let d = (-n.1, n.0);
    let nn = n.0 * n.0 + n.1 * n.1;
    let p0 = (n.0 * level / nn, n.1 * level / nn);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for &(a, b, c) in hs {
        let slope = a * d.0 + b * d.1;
        let rest = c - (a * p0.0 + b * p0.1);
        if slope.abs() < 1e-12 {
            if rest > 1e-9 {
                return None;
            }
        } else if slope > 0.0 {
            lo = lo.max(rest / slope);
        } else {
            hi = hi.min(rest / slope);
        }
    }
    (hi > lo + 1e-12).then_some([(p0.0 + lo * d.0, p0.1 + lo * d.1), (p0.0 + hi * d.0, p0.1 + hi * d.1)])
}

pub fn render(alpha: &Point, beta: &Point, spec: &GridSpec, rows: &[GridRow]) -> Result<String> {
    let horn = horn_polygon_b2(alpha, beta)?;
    let step = to_f64(&spec.step);
    let f = Frame {
        x0: to_f64(&spec.origin[0]),
        y0: to_f64(&spec.origin[1]),
        span: step * (spec.n1.max(spec.n2) - 1).max(1) as f64,
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">
<title>J for alpha = ({}, {}), beta = ({}, {})</title>
<rect width="100%" height="100%" fill="white"/>"#,
        fmt(&alpha[0]),
        fmt(&alpha[1]),
        fmt(&beta[0]),
        fmt(&beta[1])
    );

    let jmax = rows.iter().map(|r| to_f64(&r.j)).fold(0.0, f64::max);
    if jmax > 0.0 {
        let w = step * f.scale();
        s.push_str("<g id=\"heat\" stroke=\"none\">\n");
        for r in rows {
            let j = to_f64(&r.j);
            if j <= 0.0 {
                continue;
            }
            let (cx, cy) = f.px(to_f64(&r.g1), to_f64(&r.g2));
            let t = j / jmax;
            let shade = |full: f64| (255.0 - t * (255.0 - full)).round() as u8;
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{w:.2}" height="{w:.2}" fill="rgb({},{},{})"/>"#,
                cx - w / 2.0,
                cy - w / 2.0,
                shade(40.0),
                shade(90.0),
                shade(200.0)
            );
        }
        s.push_str("</g>\n");
    }

    let pts: Vec<String> = horn
        .vertices
        .iter()
        .map(|v| {
            let (x, y) = f.px(to_f64(&v[0]), to_f64(&v[1]));
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        s,
        r#"<polygon id="horn" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        pts.join(" ")
    );

    let hs: Vec<(f64, f64, f64)> = horn
        .halfplanes
        .iter()
        .map(|h| (to_f64(&h.a), to_f64(&h.b), to_f64(&h.c)))
        .collect();
    s.push_str("<g id=\"candidates\" stroke=\"#bbbbbb\" stroke-width=\"0.6\">\n");
    for line in singular_lines_in_horn_b2(alpha, beta)? {
        let (a, b) = line.kind.normal();
        let Some([p, q]) = clip_line((a as f64, b as f64), to_f64(&line.level), &hs) else {
            continue;
        };
        let (x1, y1) = f.px(p.0, p.1);
        let (x2, y2) = f.px(q.0, q.1);
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"><title>{} = {}</title></line>"#,
            line.kind.label(),
            fmt(&line.level)
        );
    }
    s.push_str("</g>\n<g id=\"singular\" stroke=\"#b00000\" stroke-width=\"2\">\n");
    let pq = piecewise_analyze_b2(alpha, beta)?;
    for w in pq.active_walls() {
        let (x1, y1) = f.px(to_f64(&w.segment[0][0]), to_f64(&w.segment[0][1]));
        let (x2, y2) = f.px(to_f64(&w.segment[1][0]), to_f64(&w.segment[1][1]));
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
        );
    }
    s.push_str("</g>\n");

    let top = f.x0 + f.span;
    let (ox, oy) = f.px(0.0, 0.0);
    let (ax, ay) = f.px(top, 0.0);
    let (dx, dy) = f.px(top, top);
    let _ = writeln!(
        s,
        r##"<g id="chamber" stroke="#555555" stroke-width="1" stroke-dasharray="6,4">
<line x1="{ox:.2}" y1="{oy:.2}" x2="{ax:.2}" y2="{ay:.2}"><title>g2 = 0</title></line>
<line x1="{ox:.2}" y1="{oy:.2}" x2="{dx:.2}" y2="{dy:.2}"><title>g1 = g2</title></line>
</g>
<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="end">gamma1</text>
<text x="{:.2}" y="{:.2}" font-size="14">gamma2</text>
</svg>"##,
        SIZE - MARGIN,
        SIZE - MARGIN / 3.0,
        MARGIN / 4.0,
        MARGIN / 1.5
    );
    Ok(s)
}
