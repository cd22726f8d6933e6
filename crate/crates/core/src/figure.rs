//! Figure data: band tables in the shape plane, spectrum polylines with
//! their ΔL gaps, and a dependency-free SVG renderer for both.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::action_angle::TrajectorySample;
use crate::error::Result;
use crate::orbit::{band_catalog, shape_projection, BandCatalog, BandKind, Extremum, Intersection, Stability};
use crate::poisson::WeightVector;
use crate::quantize::{spectrum_table, PiSequence, SpectrumRow};

/// One row of the band table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub band: BandKind,
    pub l: f64,
    pub p: f64,
    pub q: f64,
    pub eig: [f64; 3],
    pub beta: f64,
    pub gamma: f64,
    pub x: f64,
    pub y: f64,
    pub e_factor: f64,
    pub stability: Stability,
}

/// Band states on `steps` points per segment, sorted by (L, band).
pub fn band_rows(cat: &BandCatalog, steps: usize) -> Vec<BandRow> {
    let mut rows: Vec<BandRow> = cat
        .sample(steps)
        .into_iter()
        .map(|pt| {
            let (x, y) = shape_projection(&pt.eig);
            BandRow {
                band: pt.kind,
                l: pt.l,
                p: pt.p,
                q: pt.q,
                eig: pt.eig.p,
                beta: pt.eig.beta,
                gamma: pt.eig.gamma,
                x,
                y,
                e_factor: pt.e_factor,
                stability: pt.stability,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.l.total_cmp(&b.l).then(band_order(a.band).cmp(&band_order(b.band))));
    rows
}

fn band_order(k: BandKind) -> u8 {
    match k {
        BandKind::S3 => 0,
        BandKind::PMinus => 1,
        BandKind::S2 => 2,
        BandKind::PPlus => 3,
        BandKind::S1 => 4,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineStyle {
    Solid,
    Dashed,
}

/// Line style of a band in the spectrum figure: P₋ and S₁ solid, P₊ and S₃
/// dashed.
pub fn band_style(kind: BandKind) -> LineStyle {
    match kind {
        BandKind::PMinus | BandKind::S1 => LineStyle::Solid,
        _ => LineStyle::Dashed,
    }
}

/// Continuous band curve in the (L, Q) plane. Endpoints are the segment
/// bounds of the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePolyline {
    pub band: BandKind,
    pub style: LineStyle,
    pub points: Vec<(f64, f64)>,
}

/// Quantized levels that follow one band edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelPolyline {
    pub band: BandKind,
    pub style: LineStyle,
    /// L mod 2 when the edge levels split into parity bands.
    pub parity: Option<u32>,
    /// Whether these levels sit exactly on the classical band curve.
    pub on_curve: bool,
    /// (L, k, Q).
    pub points: Vec<(u32, u32, f64)>,
    /// Spacing between consecutive L values.
    pub delta_l: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFigure {
    pub orbit: WeightVector,
    pub s: f64,
    pub rows: Vec<SpectrumRow>,
    pub curves: Vec<CurvePolyline>,
    pub levels: Vec<LevelPolyline>,
    pub pi: Option<PiSequence>,
    /// Π members joined through the L = 0 singlet.
    pub pi_polyline: Vec<(f64, f64)>,
    pub intersections: Vec<Intersection>,
}

impl SpectrumFigure {
    pub fn levels_of(&self, band: BandKind) -> impl Iterator<Item = &LevelPolyline> {
        self.levels.iter().filter(move |p| p.band == band)
    }

    pub fn curve(&self, band: BandKind) -> Option<&CurvePolyline> {
        self.curves.iter().find(|c| c.band == band)
    }
}

const FIGURE_BANDS: [BandKind; 4] = [BandKind::PMinus, BandKind::PPlus, BandKind::S3, BandKind::S1];

fn curve_polyline(cat: &BandCatalog, band: BandKind, steps: usize) -> CurvePolyline {
    let b = cat.band(band);
    let steps = steps.max(2);
    let mut points = Vec::new();
    for seg in &b.segments {
        for i in 0..steps {
            let l = seg.l_lo + (seg.l_hi - seg.l_lo) * i as f64 / (steps - 1) as f64;
            let (_, q) = b.curve(&cat.orbit, l);
            // Q̄_σ is singular at L = 0 but S curves are constant there.
            if q.is_finite() {
                points.push((l, q));
            }
        }
    }
    CurvePolyline { band, style: band_style(band), points }
}

fn min_gap(ls: &[u32]) -> u32 {
    ls.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(0)
}

/// Edge levels of a band: the lowest level (k = 1) for S₃/P₋ and the highest
/// for S₁/P₊, over the integer L in the band's range. They form one
/// polyline when every one of them lies on the curve, otherwise they split
/// by the parity of L.
fn level_polylines(cat: &BandCatalog, rows: &[SpectrumRow], band: BandKind) -> Vec<LevelPolyline> {
    let (lo, hi) = cat.band(band).l_range();
    let upper = matches!(band, BandKind::S1 | BandKind::PPlus);
    let mut ls: Vec<u32> = rows.iter().map(|r| r.l).filter(|&l| l > 0).collect();
    ls.dedup();
    let edge: Vec<(u32, u32, f64, bool)> = ls
        .into_iter()
        .filter(|&l| f64::from(l) >= lo && f64::from(l) <= hi)
        .filter_map(|l| {
            let at_l = rows.iter().filter(|x| x.l == l);
            if upper { at_l.max_by_key(|x| x.k) } else { at_l.min_by_key(|x| x.k) }
        })
        .map(|x| {
            // Compare against the curve itself: at a band end the row is
            // tagged with the neighbouring band that shares the point.
            let (_, q) = cat.band(band).curve(&cat.orbit, f64::from(x.l));
            (x.l, x.k, x.q, (x.q - q).abs() <= 1e-9 * cat.orbit.scale())
        })
        .collect();
    let style = band_style(band);
    let make = |pts: Vec<(u32, u32, f64, bool)>, parity, on_curve| {
        let ls: Vec<u32> = pts.iter().map(|p| p.0).collect();
        LevelPolyline {
            band,
            style,
            parity,
            on_curve,
            delta_l: min_gap(&ls),
            points: pts.into_iter().map(|(l, k, q, _)| (l, k, q)).collect(),
        }
    };
    if edge.iter().all(|e| e.3) {
        return vec![make(edge, None, true)];
    }
    let mut out = Vec::new();
    for parity in 0..2 {
        let pts: Vec<_> = edge.iter().copied().filter(|e| e.0 % 2 == parity).collect();
        if pts.is_empty() {
            continue;
        }
        let on = pts.iter().all(|e| e.3);
        out.push(make(pts, Some(parity), on));
    }
    out
}

/// Spectrum with band polylines, Π sequence and intersections for integer
/// gaps and s ∈ [−1, 1].
pub fn spectrum_figure(wv: &WeightVector, s: f64, steps: usize) -> Result<SpectrumFigure> {
    let table = spectrum_table(wv, s)?;
    let cat = band_catalog(wv, 1.0, 0.0)?;
    let curves = FIGURE_BANDS.iter().map(|&b| curve_polyline(&cat, b, steps)).collect();
    let levels = FIGURE_BANDS.iter().flat_map(|&b| level_polylines(&cat, &table.rows, b)).collect();
    let mut pi_polyline: Vec<(f64, f64)> = table.rows.iter().filter(|r| r.l == 0).map(|r| (0.0, r.q)).collect();
    if let Some(pi) = &table.pi {
        pi_polyline.extend(pi.members.iter().map(|&(l, q)| (f64::from(l), q)));
    }
    Ok(SpectrumFigure {
        orbit: *wv,
        s,
        rows: table.rows,
        curves,
        levels,
        pi: table.pi,
        pi_polyline,
        intersections: cat.intersections,
    })
}

/// Linear map from data coordinates to an SVG viewport with a margin.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    w: f64,
    h: f64,
    pad: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>, w: f64, h: f64) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points.filter(|p| p.0.is_finite() && p.1.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !(x1 > x0) {
            (x0, x1) = (x0 - 1.0, x0 + 1.0);
        }
        if !(y1 > y0) {
            (y0, y1) = (y0 - 1.0, y0 + 1.0);
        }
        Frame { x0, x1, y0, y1, w, h, pad: 40.0 }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let u = self.pad + (x - self.x0) / (self.x1 - self.x0) * (self.w - 2.0 * self.pad);
        let v = self.h - self.pad - (y - self.y0) / (self.y1 - self.y0) * (self.h - 2.0 * self.pad);
        (u, v)
    }

    fn points(&self, pts: impl IntoIterator<Item = (f64, f64)>) -> String {
        let mut s = String::new();
        for p in pts {
            let (u, v) = self.map(p);
            let _ = write!(s, "{u:.2},{v:.2} ");
        }
        s.trim_end().to_string()
    }

    fn open(&self, title: &str) -> String {
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
            w = self.w,
            h = self.h
        );
        let _ = writeln!(
            s,
            "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>"
        );
        let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"20\" font-size=\"14\">{title}</text>", self.pad);
        let (a, b) = (self.map((self.x0, self.y0)), self.map((self.x1, self.y1)));
        let _ = writeln!(
            s,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#999\"/>",
            a.0,
            b.1,
            b.0 - a.0,
            a.1 - b.1
        );
        s
    }
}

fn dash(style: LineStyle) -> &'static str {
    match style {
        LineStyle::Solid => "",
        LineStyle::Dashed => " stroke-dasharray=\"6,4\"",
    }
}

fn color(kind: BandKind) -> &'static str {
    match kind {
        BandKind::S1 => "#1f77b4",
        BandKind::S2 => "#7f7f7f",
        BandKind::S3 => "#2ca02c",
        BandKind::PPlus => "#d62728",
        BandKind::PMinus => "#9467bd",
    }
}

/// Spectrum figure: level markers, band curves, edge-level polylines with
/// ΔL labels, the Π polyline and the labelled intersections.
pub fn spectrum_svg(fig: &SpectrumFigure) -> String {
    let frame = Frame::fit(
        fig.rows.iter().map(|r| (f64::from(r.l), r.q)).chain(fig.curves.iter().flat_map(|c| c.points.iter().copied())),
        900.0,
        600.0,
    );
    let p = fig.orbit.p();
    let mut s = frame.open(&format!("[{}, {}, {}]  s = {}", p[0], p[1], p[2], fig.s));
    for r in &fig.rows {
        let (u, v) = frame.map((f64::from(r.l), r.q));
        let _ = writeln!(s, "<circle cx=\"{u:.2}\" cy=\"{v:.2}\" r=\"1.2\" fill=\"#444\"/>");
    }
    for c in &fig.curves {
        let _ = writeln!(
            s,
            "<polyline class=\"curve {}\" fill=\"none\" stroke=\"{}\" stroke-opacity=\"0.4\" stroke-width=\"4\"{} points=\"{}\"/>",
            c.band.name(),
            color(c.band),
            dash(c.style),
            frame.points(c.points.iter().copied())
        );
    }
    for lv in &fig.levels {
        let pts: Vec<(f64, f64)> = lv.points.iter().map(|&(l, _, q)| (f64::from(l), q)).collect();
        let _ = writeln!(
            s,
            "<polyline class=\"levels {}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>",
            lv.band.name(),
            color(lv.band),
            dash(lv.style),
            frame.points(pts.iter().copied())
        );
        if let Some(&mid) = pts.get(pts.len() / 2) {
            let (u, v) = frame.map(mid);
            let _ = writeln!(
                s,
                "<text x=\"{u:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"{}\">{} ΔL={}</text>",
                v - 6.0,
                color(lv.band),
                lv.band.name(),
                lv.delta_l
            );
        }
    }
    if fig.pi_polyline.len() > 1 {
        let _ = writeln!(
            s,
            "<polyline class=\"pi\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" points=\"{}\"/>",
            frame.points(fig.pi_polyline.iter().copied())
        );
    }
    for x in &fig.intersections {
        let (u, v) = frame.map((x.l, x.q));
        let _ = writeln!(s, "<circle cx=\"{u:.2}\" cy=\"{v:.2}\" r=\"3\" fill=\"black\"/>");
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">({})</text>", u + 4.0, v - 4.0, x.label);
    }
    s.push_str("</svg>\n");
    s
}

/// Shape-plane figure: the admissible region shaded between the lower
/// chain S₃, P₋ (and the S₂ saddle when it is a Q minimum) and the upper
/// chain S₁, P₊ (S₂ when it is a maximum), with arrows along increasing L.
pub fn bands_svg(cat: &BandCatalog, rows: &[BandRow]) -> String {
    let frame = Frame::fit(rows.iter().map(|r| (r.x, r.y)).chain([(0.0, 0.0)]), 700.0, 600.0);
    let p = cat.orbit.p();
    let mut s = frame.open(&format!("[{}, {}, {}]  (x, y) = β(cos Γ, sin Γ)", p[0], p[1], p[2]));
    let chain = |kinds: &[BandKind], ext: Extremum| -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for &k in kinds {
            pts.extend(rows.iter().filter(|r| r.band == k).map(|r| (r.x, r.y)));
        }
        let saddle = cat.band(BandKind::S2).segments.iter().find(|g| g.stability == Stability::Saddle);
        if saddle.is_some_and(|g| g.extremum == Some(ext)) {
            pts.extend(
                rows.iter()
                    .filter(|r| r.band == BandKind::S2 && r.stability == Stability::Saddle)
                    .map(|r| (r.x, r.y)),
            );
        }
        pts
    };
    let mut region = chain(&[BandKind::S3, BandKind::PMinus], Extremum::Min);
    let mut upper = chain(&[BandKind::S1, BandKind::PPlus], Extremum::Max);
    upper.reverse();
    region.extend(upper);
    let _ = writeln!(s, "<polygon fill=\"#dde6f0\" stroke=\"none\" points=\"{}\"/>", frame.points(region));
    for band in &cat.bands {
        let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.band == band.kind).map(|r| (r.x, r.y)).collect();
        if pts.len() < 2 {
            continue;
        }
        let _ = writeln!(
            s,
            "<polyline class=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>",
            band.kind.name(),
            color(band.kind),
            frame.points(pts.iter().copied())
        );
        let i = pts.len() / 2;
        let (a, b) = (frame.map(pts[i - 1]), frame.map(pts[i]));
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" marker-end=\"url(#arrow)\"/>",
            a.0,
            a.1,
            b.0,
            b.1,
            color(band.kind)
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{}\">{}</text>",
            b.0 + 5.0,
            b.1 - 5.0,
            color(band.kind),
            band.kind.name()
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Phase portrait (γ, p) of a sampled trajectory, with optional oracle
/// points.
pub fn trajectory_svg(samples: &[TrajectorySample], oracle: Option<&[(f64, f64)]>) -> String {
    let pts: Vec<(f64, f64)> = samples.iter().map(|t| (t.gamma, t.p)).collect();
    let frame = Frame::fit(pts.iter().copied().chain(oracle.unwrap_or(&[]).iter().copied()), 700.0, 600.0);
    let mut s = frame.open("(gamma, p) phase portrait");
    let _ = writeln!(
        s,
        "<polyline class=\"closed-form\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{}\"/>",
        frame.points(pts)
    );
    for &q in oracle.unwrap_or(&[]) {
        let (u, v) = frame.map(q);
        let _ = writeln!(s, "<circle class=\"oracle\" cx=\"{u:.2}\" cy=\"{v:.2}\" r=\"1.5\" fill=\"#d62728\"/>");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_rows_are_sorted_by_l() {
        let wv = WeightVector::from_gaps(50.0, 15.0, 100.0).unwrap();
        let cat = band_catalog(&wv, 1.0, 0.0).unwrap();
        let rows = band_rows(&cat, 20);
        assert!(rows.windows(2).all(|w| w[0].l <= w[1].l));
        assert!(rows.iter().all(|r| r.eig[0] >= r.eig[1] && r.eig[1] >= r.eig[2]));
    }

    #[test]
    fn curve_endpoints_are_segment_bounds() {
        let wv = WeightVector::new(60.0, 20.0, 0.0).unwrap();
        let cat = band_catalog(&wv, 1.0, 0.0).unwrap();
        let c = curve_polyline(&cat, BandKind::PMinus, 10);
        assert_eq!(c.points.first().unwrap().0, 40.0);
        assert_eq!(c.points.last().unwrap().0, 60.0);
    }

    #[test]
    fn gaps_between_levels() {
        assert_eq!(min_gap(&[2, 4, 6]), 2);
        assert_eq!(min_gap(&[41, 42, 44]), 1);
        assert_eq!(min_gap(&[7]), 0);
    }

    #[test]
    fn svg_is_self_contained() {
        let wv = WeightVector::from_gaps(6.0, 4.0, 0.0).unwrap();
        let fig = spectrum_figure(&wv, 1.0, 20).unwrap();
        let svg = spectrum_svg(&fig);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("href=\"http"));
        assert!(svg.contains("ΔL="));
    }
}
