//! Deterministic SVG figures for planar artifacts. Coordinates are printed
//! with 12 significant digits; the JSON artifacts stay exact.

use std::fmt::Write;

use num_traits::Signed;

use crate::certify::containers_for_mask;
use crate::constructions::PointGrid;
use crate::error::{Error, Result};
use crate::exact::point::cross2;
use crate::exact::{scalar, HPolyhedron, Halfspace, Point, Scalar, VPolytope};
use crate::separating::{AuxiliaryGraph, DisjointFamily, IncidenceKind, IncidenceRecord, SeparatingSystem};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn num(x: f64) -> String {
    scalar::format_sig(x, 12)
}

/// Screen coordinates: y grows downward.
fn xy(p: &Point) -> (f64, f64) {
    (scalar::to_f64(&p[0]), -scalar::to_f64(&p[1]))
}

fn pt(p: &Point) -> String {
    let (x, y) = xy(p);
    format!("{},{}", num(x), num(y))
}

struct Canvas {
    body: String,
    min: (f64, f64),
    max: (f64, f64),
}

impl Canvas {
    fn new<'a>(points: impl IntoIterator<Item = &'a Point>) -> Result<Self> {
        let mut min = (f64::INFINITY, f64::INFINITY);
        let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            if p.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: p.dim(),
                });
            }
            let (x, y) = xy(p);
            min = (min.0.min(x), min.1.min(y));
            max = (max.0.max(x), max.1.max(y));
        }
        if !min.0.is_finite() {
            return Err(Error::EmptyInput("nothing to draw"));
        }
        let pad = ((max.0 - min.0).max(max.1 - min.1) * 0.08).max(1e-9);
        Ok(Canvas {
            body: String::new(),
            min: (min.0 - pad, min.1 - pad),
            max: (max.0 + pad, max.1 + pad),
        })
    }

    fn unit(&self) -> f64 {
        (self.max.0 - self.min.0).max(self.max.1 - self.min.1) / 400.0
    }

    /// The drawing window as a polygon in model coordinates.
    fn window(&self) -> Vec<Point> {
        let f = |x: f64, y: f64| {
            Point::new(vec![
                Scalar::from_float(x).expect("finite"),
                Scalar::from_float(-y).expect("finite"),
            ])
        };
        vec![
            f(self.min.0, self.min.1),
            f(self.max.0, self.min.1),
            f(self.max.0, self.max.1),
            f(self.min.0, self.max.1),
        ]
    }

    fn polygon(&mut self, pts: &[Point], fill: &str, opacity: f64, stroke: &str) {
        let list: Vec<String> = pts.iter().map(pt).collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" fill-opacity="{}" stroke="{stroke}" stroke-width="{}"/>"#,
            list.join(" "),
            num(opacity),
            num(self.unit())
        );
    }

    fn line(&mut self, a: &Point, b: &Point, stroke: &str, dashed: bool) {
        let (x1, y1) = xy(a);
        let (x2, y2) = xy(b);
        let dash = if dashed { format!(r#" stroke-dasharray="{}""#, num(self.unit() * 4.0)) } else { String::new() };
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"{dash}/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            num(self.unit())
        );
    }

    fn dot(&mut self, p: &Point, fill: &str, size: f64) {
        let (x, y) = xy(p);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
            num(x),
            num(y),
            num(self.unit() * size)
        );
    }

    fn label(&mut self, p: &Point, text: &str) {
        let (x, y) = xy(p);
        let u = self.unit();
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-size="{}" font-family="sans-serif">{text}</text>"#,
            num(x + 3.0 * u),
            num(y - 3.0 * u),
            num(12.0 * u)
        );
    }

    fn finish(self) -> String {
        let (w, h) = (self.max.0 - self.min.0, self.max.1 - self.min.1);
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"{}\">\n<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n{}</svg>\n",
            num(self.min.0),
            num(self.min.1),
            num(w),
            num(h),
            num(800.0 * h / w),
            num(self.min.0),
            num(self.min.1),
            num(w),
            num(h),
            self.body
        )
    }
}

/// Exact planar convex hull, counterclockwise, collinear points dropped.
pub fn planar_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Point, a: &Point, b: &Point| cross2(&(a - o), &(b - o));
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Clips a convex polygon by a closed halfplane.
fn clip(poly: &[Point], h: &Halfspace) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        let (sa, sb) = (h.slack(a), h.slack(b));
        if !sa.is_negative() {
            out.push(a.clone());
        }
        if (sa.is_negative() && sb.is_positive()) || (sa.is_positive() && sb.is_negative()) {
            let t = &sa / (&sa - &sb);
            out.push(a + &(b - a).scale(&t));
        }
    }
    out
}

fn hpoly_in_window(p: &HPolyhedron, window: &[Point]) -> Vec<Point> {
    p.constraints().iter().fold(window.to_vec(), |acc, h| clip(&acc, h))
}

fn draw_hull(c: &mut Canvas, v: &VPolytope, colour: &str) {
    let hull = planar_hull(v.generators());
    match hull.len() {
        0 => {}
        1 => c.dot(&hull[0], colour, 3.0),
        2 => c.line(&hull[0], &hull[1], colour, false),
        _ => c.polygon(&hull, colour, 0.25, colour),
    }
}

/// The scalloped grid: one dashed arc per row through its points. With a
/// partition mask (bit set = second part) the row hulls of the first part
/// and the column hulls of the second part are overlaid.
pub fn render_grid(grid: &PointGrid, partition: Option<u64>) -> Result<String> {
    let mut c = Canvas::new(grid.points.iter().flatten())?;
    let r = scalar::to_f64(&grid.radius);
    for (i, row) in grid.points.iter().enumerate() {
        let (first, last) = (&row[0], &row[row.len() - 1]);
        let colour = PALETTE[i % PALETTE.len()];
        if row.len() >= 2 {
            let (px, py) = xy(first);
            let (qx, qy) = xy(last);
            let (cx, cy) = xy(&grid.centers[i]);
            let sweep = u8::from((qx - px) * (cy - py) - (qy - py) * (cx - px) > 0.0);
            let _ = writeln!(
                c.body,
                r#"<path d="M {} A {} {} 0 0 {sweep} {}" fill="none" stroke="{colour}" stroke-width="{}" stroke-dasharray="{}"/>"#,
                pt(first),
                num(r),
                num(r),
                pt(last),
                num(c.unit()),
                num(c.unit() * 4.0)
            );
        }
    }
    if let Some(mask) = partition {
        let (rows, groups) = containers_for_mask(grid, mask)?;
        for (i, h) in rows.iter().enumerate() {
            if let Some(h) = h {
                draw_hull(&mut c, h, PALETTE[i % PALETTE.len()]);
            }
        }
        for h in groups.iter().flatten() {
            draw_hull(&mut c, h, "#000000");
        }
    }
    for (i, row) in grid.points.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let second = partition.is_some_and(|m| m >> grid.flat_index(i, j) & 1 == 1);
            c.dot(p, if second { "#000000" } else { PALETTE[i % PALETTE.len()] }, 2.0);
        }
    }
    Ok(c.finish())
}

/// A separating system clipped to a window around its sets, with its
/// incidences labelled and, optionally, the auxiliary graph drawn on top.
pub fn render_system(
    system: &SeparatingSystem,
    family: &DisjointFamily,
    incidences: &[IncidenceRecord],
    graph: Option<&AuxiliaryGraph>,
) -> Result<String> {
    let mut anchors: Vec<Point> = family.sets().iter().flat_map(|s| s.generators().iter().cloned()).collect();
    anchors.extend(incidences.iter().map(IncidenceRecord::anchor_point));
    if let Some(g) = graph {
        anchors.extend(g.anchors.iter().cloned());
    }
    let mut c = Canvas::new(anchors.iter())?;
    let window = c.window();
    for (i, p) in system.polyhedra.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let clipped = hpoly_in_window(p, &window);
        if clipped.len() >= 3 {
            c.polygon(&clipped, colour, 0.15, colour);
        }
    }
    for (i, s) in family.sets().iter().enumerate() {
        draw_hull(&mut c, s, PALETTE[i % PALETTE.len()]);
    }
    for (n, r) in incidences.iter().enumerate() {
        let y = r.anchor_point();
        c.dot(&y, if r.kind == IncidenceKind::Type1 { "#000000" } else { "#555555" }, 2.5);
        c.label(&y, &format!("I{}", n + 1));
    }
    if let Some(g) = graph {
        for e in &g.edges {
            c.line(&g.anchors[e.i], &e.via, "#000000", true);
            c.line(&e.via, &g.anchors[e.j], "#000000", true);
        }
        for (i, a) in g.anchors.iter().enumerate() {
            c.dot(a, "#000000", 3.0);
            c.label(a, &format!("x{}", i + 1));
        }
    }
    Ok(c.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{choose_params, generate_scalloped};
    use crate::separating::{build_auxiliary_graph, extract_incidences, naive_separating_system};

    #[test]
    fn hull_of_square_with_centre() {
        let pts: Vec<Point> = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)].iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect();
        assert_eq!(planar_hull(&pts).len(), 4);
    }

    #[test]
    fn grid_figure_is_deterministic() {
        let g = generate_scalloped(&choose_params(4, 128).unwrap()).unwrap();
        let a = render_grid(&g, Some(0b1010_0110_0101_1001)).unwrap();
        assert_eq!(a, render_grid(&g, Some(0b1010_0110_0101_1001)).unwrap());
        assert_eq!(a.matches("<path").count(), 4);
        assert!(render_grid(&g, Some(0)).unwrap().contains("<polygon"));
    }

    #[test]
    fn system_figure() {
        let f = DisjointFamily::random(4, 3).unwrap();
        let s = naive_separating_system(&f).unwrap();
        let inc = extract_incidences(&s);
        let g = build_auxiliary_graph(&s, &inc).unwrap();
        let svg = render_system(&s, &f, &inc, Some(&g)).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<text").count(), inc.len() + 4);
    }
}
