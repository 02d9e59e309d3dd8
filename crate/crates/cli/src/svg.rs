//! SVG alcove diagrams for rank one and two.
//!
//! A point `x` (coefficients of `π·H_i`) is drawn at `y = √D·Lᵀx`, where
//! `G⁻¹ = L·D·Lᵀ`, so Euclidean lengths in the picture are the true ones.

use std::fmt::Write;

use hermann_core::alcove::{fundamental_alcove, AlcovePoint};
use hermann_core::exact::{fmt_rational, ldl};
use hermann_core::geometry::{OrbitReport, TriState};
use hermann_core::roots::type_string;
use hermann_core::{Error, GradedRootDatum, Rational, RealInterval, RootVector};

const PALETTE: [&str; 6] = ["#1f5fa8", "#b8432f", "#2f8a4a", "#8a5fb0", "#b07a1f", "#4a4a4a"];
const DASHES: [&str; 6] = ["none", "6 3", "2 3", "8 3 2 3", "1 2", "10 4"];

fn to_f64(q: &Rational) -> f64 {
    RealInterval::from_rational(q, 64).to_f64()
}

/// Marker class, by priority TG > WR* > austere > arid*-only > plain.
pub fn marker_kind(r: &OrbitReport) -> &'static str {
    if r.totally_geodesic {
        "tg"
    } else if r.weakly_reflective_sufficient {
        "wr"
    } else if r.austere == TriState::Yes {
        "austere"
    } else if r.arid_sufficient {
        "arid"
    } else {
        "plain"
    }
}

struct Embedding {
    /// `y = e·x`, row-major `rank × rank`.
    e: Vec<Vec<f64>>,
    /// `x = t·y`.
    t: Vec<Vec<f64>>,
}

impl Embedding {
    fn new(d: &GradedRootDatum) -> Result<Self, Error> {
        let ginv = d.gram().dual_basis()?;
        let (l, dg) = ldl(&ginv).ok_or(Error::SingularGram)?;
        let r = d.rank();
        let e: Vec<Vec<f64>> = (0..r)
            .map(|k| {
                let s = to_f64(&dg[k]).sqrt();
                (0..r).map(|i| s * to_f64(&l[i][k])).collect()
            })
            .collect();
        let t = invert_f64(&e);
        Ok(Self { e, t })
    }

    fn map(&self, x: &[f64]) -> Vec<f64> {
        self.e.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    fn map_point(&self, p: &AlcovePoint) -> Vec<f64> {
        let x: Vec<f64> = p.coeffs().iter().map(to_f64).collect();
        self.map(&x)
    }
}

fn invert_f64(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    match m.len() {
        1 => vec![vec![1.0 / m[0][0]]],
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            vec![vec![m[1][1] / det, -m[0][1] / det], vec![-m[1][0] / det, m[0][0] / det]]
        }
        _ => unreachable!("diagrams are rank one or two"),
    }
}

struct View {
    min: [f64; 2],
    max: [f64; 2],
    scale: f64,
    margin: f64,
    height: f64,
}

impl View {
    fn px(&self, y: &[f64]) -> (f64, f64) {
        let y1 = y.get(1).copied().unwrap_or(0.0);
        (self.margin + (y[0] - self.min[0]) * self.scale, self.height - self.margin - (y1 - self.min[1]) * self.scale)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders the alcove, sector walls and one marker per report.
pub fn render_svg(d: &GradedRootDatum, reports: &[OrbitReport], width: u32) -> Result<String, Error> {
    let r = d.rank();
    if r > 2 {
        return Err(Error::RankTooHigh(r));
    }
    let alc = fundamental_alcove(d)?;
    let emb = Embedding::new(d)?;
    let verts: Vec<Vec<f64>> = alc.vertices().iter().map(|v| emb.map_point(v)).collect();

    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for v in &verts {
        for k in 0..2 {
            let c = v.get(k).copied().unwrap_or(0.0);
            min[k] = min[k].min(c);
            max[k] = max[k].max(c);
        }
    }
    let span = (max[0] - min[0]).max(max[1] - min[1]).max(1e-12);
    let pad = 0.08 * span;
    for k in 0..2 {
        min[k] -= pad;
        max[k] += pad;
    }
    let margin = 40.0;
    let width = f64::from(width.max(200));
    let scale = (width - 2.0 * margin) / (max[0] - min[0]);
    let height = if r == 1 { 2.0 * margin + 80.0 } else { 2.0 * margin + (max[1] - min[1]) * scale };
    let mut view = View { min, max, scale, margin, height };
    if r == 1 {
        view.min[1] = -(height / 2.0 - margin) / scale;
    }

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    )
    .unwrap();
    writeln!(s, "  <title>{}</title>", escape(d.name())).unwrap();
    writeln!(
        s,
        "  <style>.alcove{{fill:#f2f0e6;stroke:#222;stroke-width:1.5}} .wall{{fill:none;stroke-width:1}} .marker{{stroke:#000;stroke-width:1}} text{{font-family:sans-serif;font-size:11px}}</style>"
    )
    .unwrap();

    // alcove
    if r == 2 {
        let c = centroid(&verts);
        let mut order: Vec<usize> = (0..verts.len()).collect();
        order.sort_by(|&a, &b| {
            let ta = (verts[a][1] - c[1]).atan2(verts[a][0] - c[0]);
            let tb = (verts[b][1] - c[1]).atan2(verts[b][0] - c[0]);
            ta.total_cmp(&tb)
        });
        let pts: Vec<String> = order
            .iter()
            .map(|&i| {
                let (x, y) = view.px(&verts[i]);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        writeln!(s, r#"  <polygon class="alcove" points="{}"/>"#, pts.join(" ")).unwrap();
    } else {
        let (x0, y0) = view.px(&verts[0]);
        let (x1, y1) = view.px(&verts[verts.len() - 1]);
        writeln!(
            s,
            r#"  <line class="alcove" x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="3"/>"#,
            num(x0),
            num(y0),
            num(x1),
            num(y1)
        )
        .unwrap();
    }

    // walls
    for (k, sec) in d.sectors().iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let dash = DASHES[k % DASHES.len()];
        writeln!(
            s,
            r#"  <g class="sector" data-phi="{}" stroke="{color}" stroke-dasharray="{dash}">"#,
            fmt_rational(sec.phi().coeff())
        )
        .unwrap();
        for (a, _) in sec.positive() {
            for seg in wall_segments(&emb, &view, a, sec.phi().coeff(), r) {
                writeln!(
                    s,
                    r#"    <line class="wall" x1="{}" y1="{}" x2="{}" y2="{}"><title>{}</title></line>"#,
                    num(seg.0),
                    num(seg.1),
                    num(seg.2),
                    num(seg.3),
                    escape(&seg.4)
                )
                .unwrap();
            }
        }
        writeln!(s, "  </g>").unwrap();
    }

    // markers
    for rep in reports {
        let (x, y) = view.px(&emb.map_point(&rep.point));
        let kind = marker_kind(rep);
        let glyph = match kind {
            "tg" => {
                format!(r##"<rect x="{}" y="{}" width="10" height="10" fill="#222"/>"##, num(x - 5.0), num(y - 5.0))
            }
            "wr" => format!(
                r#"<polygon points="{},{} {},{} {},{} {},{}" fill="{}"/>"#,
                num(x),
                num(y - 7.0),
                num(x + 7.0),
                num(y),
                num(x),
                num(y + 7.0),
                num(x - 7.0),
                num(y),
                PALETTE[0]
            ),
            "austere" => format!(r#"<circle cx="{}" cy="{}" r="6" fill="{}"/>"#, num(x), num(y), PALETTE[2]),
            "arid" => format!(
                r#"<polygon points="{},{} {},{} {},{}" fill="{}"/>"#,
                num(x),
                num(y - 7.0),
                num(x + 6.5),
                num(y + 5.0),
                num(x - 6.5),
                num(y + 5.0),
                PALETTE[1]
            ),
            _ => format!(
                r#"<path d="M{} {} L{} {} M{} {} L{} {}" fill="none"/>"#,
                num(x - 5.0),
                num(y - 5.0),
                num(x + 5.0),
                num(y + 5.0),
                num(x - 5.0),
                num(y + 5.0),
                num(x + 5.0),
                num(y - 5.0)
            ),
        };
        writeln!(
            s,
            r#"  <g class="marker {kind}" data-point="{}"><title>{} {} austere={} WR*={}</title>{glyph}</g>"#,
            escape(&rep.point.to_string()),
            escape(&rep.point.to_string()),
            escape(&type_string(&rep.sigma_type)),
            rep.austere,
            if rep.weakly_reflective_sufficient { "yes" } else { "no" },
        )
        .unwrap();
    }

    // legend
    let legend =
        [("tg", "totally geodesic"), ("wr", "WR*"), ("austere", "austere"), ("arid", "arid* only"), ("plain", "other")];
    let ly = height - 12.0;
    let mut lx = margin;
    for (kind, text) in legend {
        writeln!(s, r#"  <text x="{}" y="{}" class="legend {kind}">{text}</text>"#, num(lx), num(ly)).unwrap();
        lx += 100.0;
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn centroid(v: &[Vec<f64>]) -> [f64; 2] {
    let n = v.len() as f64;
    [v.iter().map(|p| p[0]).sum::<f64>() / n, v.iter().map(|p| p[1]).sum::<f64>() / n]
}

type Segment = (f64, f64, f64, f64, String);

/// Visible pieces of the walls `c·x = n − φ` of one root.
fn wall_segments(emb: &Embedding, view: &View, alpha: &RootVector, phi_q: &Rational, rank: usize) -> Vec<Segment> {
    let phi = to_f64(phi_q);
    let c = alpha.coords();
    let cf: Vec<f64> = c.iter().map(|&k| k as f64).collect();
    // normal in picture coordinates: (tᵀc)·y = level
    let normal: Vec<f64> = (0..rank).map(|j| (0..rank).map(|i| emb.t[i][j] * cf[i]).sum()).collect();
    let corners: Vec<[f64; 2]> = if rank == 2 {
        vec![
            [view.min[0], view.min[1]],
            [view.max[0], view.min[1]],
            [view.max[0], view.max[1]],
            [view.min[0], view.max[1]],
        ]
    } else {
        vec![[view.min[0], 0.0], [view.max[0], 0.0]]
    };
    let vals: Vec<f64> = corners.iter().map(|p| (0..rank).map(|j| normal[j] * p[j]).sum()).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    let n_lo = (lo + phi).ceil() as i64;
    let n_hi = (hi + phi).floor() as i64;
    for n in n_lo..=n_hi.min(n_lo + 64) {
        let level = n as f64 - phi;
        let label = format!("<{alpha},H> = {}·π", fmt_rational(&(Rational::from_integer(n.into()) - phi_q)));
        if rank == 1 {
            let y = level / normal[0];
            let (x, yc) = view.px(&[y]);
            out.push((x, yc - 14.0, x, yc + 14.0, label));
            continue;
        }
        let mut pts: Vec<[f64; 2]> = Vec::new();
        for k in 0..4 {
            let a = corners[k];
            let b = corners[(k + 1) % 4];
            let fa = normal[0] * a[0] + normal[1] * a[1] - level;
            let fb = normal[0] * b[0] + normal[1] * b[1] - level;
            if (fa <= 0.0 && fb > 0.0) || (fa > 0.0 && fb <= 0.0) {
                let t = fa / (fa - fb);
                pts.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        if pts.len() >= 2 {
            let (x1, y1) = view.px(&pts[0]);
            let (x2, y2) = view.px(&pts[1]);
            out.push((x1, y1, x2, y2, label));
        }
    }
    out
}
