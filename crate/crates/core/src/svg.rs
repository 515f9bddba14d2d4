//! Deterministic SVG drawing of a polygon and its guards.

use std::fmt::Write;

use crate::formula::Placement;
use crate::geom::{rat, to_f64, Point, Rational};
use crate::guards::Wedge;
use crate::polygon::{bbox, clip_left, Polygon};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const WIDTH: f64 = 800.0;

struct View {
    lo: Point,
    hi: Point,
    scale: f64,
    height: f64,
}

impl View {
    fn map(&self, p: &Point) -> (f64, f64) {
        let x = (to_f64(&p.x) - to_f64(&self.lo.x)) * self.scale;
        let y = (to_f64(&self.hi.y) - to_f64(&p.y)) * self.scale;
        (x, y)
    }

    fn path(&self, ring: &[Point]) -> String {
        let mut s = String::new();
        for (k, p) in ring.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(s, "{}{:.3},{:.3} ", if k == 0 { "M" } else { "L" }, x, y);
        }
        s.push('Z');
        s
    }

    fn frame(&self) -> Vec<Point> {
        vec![
            self.lo.clone(),
            Point::new(self.hi.x.clone(), self.lo.y.clone()),
            self.hi.clone(),
            Point::new(self.lo.x.clone(), self.hi.y.clone()),
        ]
    }
}

/// Parts of the view covered by the wedge, as convex rings.
fn cone_pieces(view: &View, w: &Wedge) -> Vec<Vec<Point>> {
    let frame = view.frame();
    let a = &w.apex;
    let (p1, p2) = (a + &w.ray1, a + &w.ray2);
    if w.reflex || w.is_halfplane() {
        let left1 = clip_left(&frame, a, &p1);
        let right2 = clip_left(&frame, &p2, a);
        if w.is_halfplane() {
            return vec![left1];
        }
        vec![left1, right2]
    } else {
        vec![clip_left(&clip_left(&frame, a, &p1), &p2, a)]
    }
    .into_iter()
    .filter(|r| r.len() >= 3)
    .collect()
}

/// Point where the ray from `a` along `d` leaves the view.
fn ray_end(view: &View, a: &Point, d: &Point) -> (f64, f64) {
    let (ax, ay, dx, dy) = (to_f64(&a.x), to_f64(&a.y), to_f64(&d.x), to_f64(&d.y));
    let (x0, y0, x1, y1) = (
        to_f64(&view.lo.x),
        to_f64(&view.lo.y),
        to_f64(&view.hi.x),
        to_f64(&view.hi.y),
    );
    let mut t = f64::INFINITY;
    for (o, v, lo, hi) in [(ax, dx, x0, x1), (ay, dy, y0, y1)] {
        if v > 0.0 {
            t = t.min((hi - o) / v);
        } else if v < 0.0 {
            t = t.min((lo - o) / v);
        }
    }
    let t = t.max(0.0);
    ((ax + t * dx - x0) * view.scale, (y1 - (ay + t * dy)) * view.scale)
}

pub fn render_svg(p: &Polygon, pl: Option<&Placement>) -> String {
    let mut pts: Vec<Point> = p.vertices();
    if let Some(pl) = pl {
        pts.extend(pl.guards.wedges().map(|w| w.apex.clone()));
    }
    let (lo, hi) = bbox(pts.iter());
    let span = std::cmp::max(&hi.x - &lo.x, &hi.y - &lo.y);
    let margin: Rational = std::cmp::max(span.clone() / rat(10), rat(1));
    let lo = Point::new(&lo.x - &margin, &lo.y - &margin);
    let hi = Point::new(&hi.x + &margin, &hi.y + &margin);
    let w = to_f64(&(&hi.x - &lo.x));
    let scale = WIDTH / w;
    let height = to_f64(&(&hi.y - &lo.y)) * scale;
    let view = View { lo, hi, scale, height };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{:.0}" viewBox="0 0 {WIDTH:.3} {:.3}">"#,
        view.height.ceil(),
        view.height
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let mut d = view.path(&p.outer);
    for h in &p.holes {
        d.push(' ');
        d.push_str(&view.path(h));
    }
    let _ = writeln!(
        s,
        r##"<path d="{d}" fill="#e8e8e8" fill-rule="evenodd" stroke="#000000" stroke-width="2"/>"##
    );
    if let Some(pl) = pl {
        for (k, (label, w)) in pl.guards.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let _ = writeln!(s, r#"<g class="guard" id="guard-{label}">"#);
            for piece in cone_pieces(&view, w) {
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="{color}" fill-opacity="0.12" stroke="none"/>"#,
                    view.path(&piece)
                );
            }
            let (ax, ay) = view.map(&w.apex);
            for r in [&w.ray1, &w.ray2] {
                let (ex, ey) = ray_end(&view, &w.apex, r);
                let _ = writeln!(
                    s,
                    r#"<line x1="{ax:.3}" y1="{ay:.3}" x2="{ex:.3}" y2="{ey:.3}" stroke="{color}" stroke-width="1"/>"#
                );
            }
            let _ = writeln!(s, r#"<circle cx="{ax:.3}" cy="{ay:.3}" r="4" fill="{color}"/>"#);
            let _ = writeln!(
                s,
                r#"<text x="{:.3}" y="{:.3}" font-size="12" fill="{color}">{label}</text>"#,
                ax + 6.0,
                ay - 6.0
            );
            let _ = writeln!(s, "</g>");
        }
    }
    s.push_str("</svg>\n");
    s
}
