//! Polygons with holes: validation, point location, hulls, kernels.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geom::{on_segment, orient, rat, ratio, segments_touch, signed_area2, DirectedLine, Point, Rational};

/// Outer ring (counter-clockwise) plus hole rings (clockwise).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    pub outer: Vec<Point>,
    pub holes: Vec<Vec<Point>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    TooFewVertices,
    RepeatedVertex,
    ZeroLengthEdge,
    SelfIntersection,
    Orientation,
    HoleOutside,
    RingsIntersect,
    HolesNested,
}

/// First invariant violation found by [`Polygon::validate`]. `ring` 0 is the
/// outer ring, `k >= 1` is hole `k - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ring: usize,
    pub edges: Vec<usize>,
    pub point: Option<Point>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in ring {} (edges {:?})", self.kind, self.ring, self.edges)?;
        if let Some(p) = &self.point {
            write!(f, " at {p:?}")?;
        }
        Ok(())
    }
}

fn violation(kind: ViolationKind, ring: usize, edges: Vec<usize>, point: Option<Point>) -> Violation {
    Violation {
        kind,
        ring,
        edges,
        point,
    }
}

/// A point shared by two segments, used to report where a crossing happens.
fn touch_point(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    for p in [c, d] {
        if on_segment(a, b, p) {
            return Some(p.clone());
        }
    }
    for p in [a, b] {
        if on_segment(c, d, p) {
            return Some(p.clone());
        }
    }
    let l1 = DirectedLine::through(a, b).ok()?;
    let l2 = DirectedLine::through(c, d).ok()?;
    match crate::geom::line_intersection(&l1, &l2) {
        crate::geom::LineIntersection::Point(p) => Some(p),
        _ => None,
    }
}

fn check_ring(ring: &[Point], idx: usize) -> Option<Violation> {
    let n = ring.len();
    if n < 3 {
        return Some(violation(ViolationKind::TooFewVertices, idx, vec![], None));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if ring[i] == ring[j] {
                let kind = if j == i + 1 || (i == 0 && j == n - 1) {
                    ViolationKind::ZeroLengthEdge
                } else {
                    ViolationKind::RepeatedVertex
                };
                return Some(violation(kind, idx, vec![i, j], Some(ring[i].clone())));
            }
        }
    }
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (&ring[j], &ring[(j + 1) % n]);
            let adjacent_fwd = j == i + 1;
            let adjacent_wrap = i == 0 && j == n - 1;
            if adjacent_fwd || adjacent_wrap {
                // Adjacent edges share one endpoint; they must not fold back.
                let (p, q, r) = if adjacent_fwd { (a, b, d) } else { (c, a, b) };
                if orient(p, q, r) == 0 && (q - p).dot(&(r - q)).is_negative() {
                    return Some(violation(
                        ViolationKind::SelfIntersection,
                        idx,
                        vec![i, j],
                        Some(q.clone()),
                    ));
                }
                if n == 3 && orient(&ring[0], &ring[1], &ring[2]) == 0 {
                    return Some(violation(ViolationKind::SelfIntersection, idx, vec![i, j], None));
                }
                continue;
            }
            if segments_touch(a, b, c, d) {
                return Some(violation(
                    ViolationKind::SelfIntersection,
                    idx,
                    vec![i, j],
                    touch_point(a, b, c, d),
                ));
            }
        }
    }
    None
}

impl Polygon {
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Self {
        Polygon { outer, holes }
    }

    pub fn simple(outer: Vec<Point>) -> Self {
        Polygon { outer, holes: vec![] }
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_ints(outer: &[(i64, i64)]) -> Self {
        Polygon::simple(outer.iter().map(|&(x, y)| Point::int(x, y)).collect())
    }

    /// Validates and returns the polygon, or an error naming the violation.
    pub fn validated(self) -> Result<Self> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(v) => Err(Error::InvalidPolygon(v.to_string())),
        }
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Point>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    /// Total vertex count over all rings.
    pub fn n(&self) -> usize {
        self.rings().map(|r| r.len()).sum()
    }

    pub fn h(&self) -> usize {
        self.holes.len()
    }

    /// All vertices, outer ring first then holes in order.
    pub fn vertices(&self) -> Vec<Point> {
        self.rings().flat_map(|r| r.iter().cloned()).collect()
    }

    /// Every directed boundary edge `(a, b)`; the polygon interior is on the
    /// left of each.
    pub fn edges(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::with_capacity(self.n());
        for ring in self.rings() {
            let n = ring.len();
            for i in 0..n {
                out.push((ring[i].clone(), ring[(i + 1) % n].clone()));
            }
        }
        out
    }

    /// Ring and position of a global vertex index.
    pub fn locate_vertex(&self, index: usize) -> Result<(usize, usize)> {
        let mut k = index;
        for (r, ring) in self.rings().enumerate() {
            if k < ring.len() {
                return Ok((r, k));
            }
            k -= ring.len();
        }
        Err(Error::Index { index, len: self.n() })
    }

    pub fn ring(&self, r: usize) -> &[Point] {
        if r == 0 {
            &self.outer
        } else {
            &self.holes[r - 1]
        }
    }

    /// Previous, current and next vertex around the ring of vertex `index`.
    pub fn corner(&self, index: usize) -> Result<(Point, Point, Point)> {
        let (r, k) = self.locate_vertex(index)?;
        let ring = self.ring(r);
        let n = ring.len();
        Ok((
            ring[(k + n - 1) % n].clone(),
            ring[k].clone(),
            ring[(k + 1) % n].clone(),
        ))
    }

    /// Interior angle above 180 degrees.
    pub fn is_reflex(&self, index: usize) -> Result<bool> {
        let (p, v, q) = self.corner(index)?;
        Ok(orient(&p, &v, &q) < 0)
    }

    /// Twice the enclosed area (outer minus holes), exact.
    pub fn area2(&self) -> Rational {
        self.rings().map(|r| signed_area2(r)).sum()
    }

    pub fn is_convex(&self) -> bool {
        if !self.holes.is_empty() {
            return false;
        }
        let n = self.outer.len();
        (0..n).all(|i| orient(&self.outer[(i + n - 1) % n], &self.outer[i], &self.outer[(i + 1) % n]) > 0)
    }

    pub fn is_orthogonal(&self) -> bool {
        self.edges().iter().all(|(a, b)| a.x == b.x || a.y == b.y)
    }

    /// Checks ring sizes, simplicity, orientation and hole placement.
    #[allow(clippy::result_large_err)]
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for (idx, ring) in self.rings().enumerate() {
            if let Some(v) = check_ring(ring, idx) {
                return Err(v);
            }
            let a = signed_area2(ring);
            let want_ccw = idx == 0;
            if (want_ccw && !a.is_positive()) || (!want_ccw && !a.is_negative()) {
                return Err(violation(ViolationKind::Orientation, idx, vec![], None));
            }
        }
        let rings: Vec<&Vec<Point>> = self.rings().collect();
        for r1 in 0..rings.len() {
            for r2 in (r1 + 1)..rings.len() {
                let (ra, rb) = (rings[r1], rings[r2]);
                for i in 0..ra.len() {
                    let (a, b) = (&ra[i], &ra[(i + 1) % ra.len()]);
                    for j in 0..rb.len() {
                        let (c, d) = (&rb[j], &rb[(j + 1) % rb.len()]);
                        if segments_touch(a, b, c, d) {
                            return Err(violation(
                                ViolationKind::RingsIntersect,
                                r2,
                                vec![i, j],
                                touch_point(a, b, c, d),
                            ));
                        }
                    }
                }
            }
        }
        let outer_only = Polygon::simple(self.outer.clone());
        for (k, hole) in self.holes.iter().enumerate() {
            if outer_only.locate(&hole[0]) != Location::Inside {
                return Err(violation(
                    ViolationKind::HoleOutside,
                    k + 1,
                    vec![],
                    Some(hole[0].clone()),
                ));
            }
            for (l, other) in self.holes.iter().enumerate() {
                if l != k && ring_contains(other, &hole[0]) {
                    return Err(violation(
                        ViolationKind::HolesNested,
                        k + 1,
                        vec![],
                        Some(hole[0].clone()),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Classifies `q` against the closed region (outer ring minus open holes).
    pub fn locate(&self, q: &Point) -> Location {
        for ring in self.rings() {
            let n = ring.len();
            for i in 0..n {
                if on_segment(&ring[i], &ring[(i + 1) % n], q) {
                    return Location::Boundary;
                }
            }
        }
        let crossings: usize = self.rings().map(|r| crossing_count(r, q)).sum();
        if crossings % 2 == 1 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Reverses rings as needed so the outer ring is CCW and holes are CW.
    pub fn normalized(mut self) -> Self {
        if signed_area2(&self.outer).is_negative() {
            self.outer.reverse();
        }
        for h in &mut self.holes {
            if signed_area2(h).is_positive() {
                h.reverse();
            }
        }
        self
    }

    /// Axis-aligned bounding box `(min, max)` of all vertices.
    pub fn bbox(&self) -> (Point, Point) {
        bbox(self.outer.iter())
    }
}

pub fn bbox<'a>(pts: impl Iterator<Item = &'a Point>) -> (Point, Point) {
    let mut it = pts;
    let first = it.next().expect("bbox of empty point set");
    let (mut lo, mut hi) = (first.clone(), first.clone());
    for p in it {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    (lo, hi)
}

/// Crossings of the upward-closed horizontal ray from `q` with the ring.
fn crossing_count(ring: &[Point], q: &Point) -> usize {
    let n = ring.len();
    let mut c = 0;
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        // half-open rule on y avoids double counting at vertices
        if (a.y > q.y) != (b.y > q.y) {
            let o = orient(a, b, q);
            if (b.y > a.y && o > 0) || (b.y < a.y && o < 0) {
                c += 1;
            }
        }
    }
    c
}

/// Even-odd test of a single ring, boundary counted as inside.
pub fn ring_contains(ring: &[Point], q: &Point) -> bool {
    let n = ring.len();
    (0..n).any(|i| on_segment(&ring[i], &ring[(i + 1) % n], q)) || crossing_count(ring, q) % 2 == 1
}

/// Convex hull, counter-clockwise, collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::Degenerate("convex hull needs at least 3 distinct points".into()));
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::Degenerate("all points collinear".into()));
    }
    Ok(lower)
}

/// Clips a convex ring by the closed left halfplane of `a -> b`.
pub(crate) fn clip_left(ring: &[Point], a: &Point, b: &Point) -> Vec<Point> {
    let line = DirectedLine::through(a, b).expect("clip edge is non-degenerate");
    let n = ring.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (p, q) = (&ring[i], &ring[(i + 1) % n]);
        let (sp, sq) = (line.side(p), line.side(q));
        if sp >= 0 {
            out.push(p.clone());
        }
        if (sp > 0 && sq < 0) || (sp < 0 && sq > 0) {
            let seg = DirectedLine::through(p, q).expect("distinct ring points");
            if let crate::geom::LineIntersection::Point(x) = crate::geom::line_intersection(&seg, &line) {
                out.push(x);
            }
        }
    }
    cleanup_ring(out)
}

/// Drops repeated and collinear vertices from a ring.
pub fn cleanup_ring(mut ring: Vec<Point>) -> Vec<Point> {
    ring.dedup();
    while ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    let mut changed = true;
    while changed && ring.len() >= 3 {
        changed = false;
        let n = ring.len();
        for i in 0..n {
            let (p, v, q) = (&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n]);
            if orient(p, v, q) == 0 {
                ring.remove(i);
                changed = true;
                break;
            }
        }
    }
    ring
}

/// Intersection of the inner closed halfplanes of all edges, as a convex
/// ring; `None` when the polygon is not star-shaped with a kernel of
/// positive area.
pub fn kernel(p: &Polygon) -> Option<Vec<Point>> {
    let (lo, hi) = p.bbox();
    let one = rat(1);
    let (x0, y0, x1, y1) = (&lo.x - &one, &lo.y - &one, &hi.x + &one, &hi.y + &one);
    let mut ring = vec![
        Point::new(x0.clone(), y0.clone()),
        Point::new(x1.clone(), y0),
        Point::new(x1, y1.clone()),
        Point::new(x0, y1),
    ];
    for (a, b) in p.edges() {
        ring = clip_left(&ring, &a, &b);
        if ring.len() < 3 {
            return None;
        }
    }
    if signed_area2(&ring).is_zero() {
        None
    } else {
        Some(ring)
    }
}

/// Vertex centroid of a ring (exact).
pub fn vertex_centroid(ring: &[Point]) -> Point {
    let n = ratio(1, ring.len() as i64);
    let mut sx = Rational::zero();
    let mut sy = Rational::zero();
    for p in ring {
        sx += &p.x;
        sy += &p.y;
    }
    Point::new(sx * &n, sy * &n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    #[test]
    fn validate_examples() {
        assert!(square().validate().is_ok());
        let bow = Polygon::from_ints(&[(0, 0), (2, 2), (2, 0), (0, 2)]);
        let v = bow.validate().unwrap_err();
        assert_eq!(v.kind, ViolationKind::SelfIntersection);
        assert_eq!(v.point, Some(Point::int(1, 1)));
        let cw = Polygon::from_ints(&[(0, 0), (0, 1), (1, 1), (1, 0)]);
        assert_eq!(cw.validate().unwrap_err().kind, ViolationKind::Orientation);
    }

    #[test]
    fn validate_holes() {
        let outer: Vec<Point> = [(0, 0), (4, 0), (4, 4), (0, 4)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        let hole: Vec<Point> = [(1, 1), (1, 2), (2, 2), (2, 1)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        assert!(Polygon::new(outer.clone(), vec![hole.clone()]).validate().is_ok());
        let ccw_hole: Vec<Point> = hole.iter().rev().cloned().collect();
        assert_eq!(
            Polygon::new(outer.clone(), vec![ccw_hole]).validate().unwrap_err().kind,
            ViolationKind::Orientation
        );
        let far: Vec<Point> = [(5, 5), (5, 6), (6, 6), (6, 5)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        assert_eq!(
            Polygon::new(outer.clone(), vec![far]).validate().unwrap_err().kind,
            ViolationKind::HoleOutside
        );
        let touching: Vec<Point> = [(0, 1), (1, 2), (1, 1)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        assert_eq!(
            Polygon::new(outer.clone(), vec![touching]).validate().unwrap_err().kind,
            ViolationKind::RingsIntersect
        );
        let big: Vec<Point> = [(1, 1), (1, 3), (3, 3), (3, 1)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        let nested: Vec<Point> = [(3, 3), (5, 4), (4, 5)]
            .iter()
            .map(|&(x, y)| Point::new(ratio(x, 2), ratio(y, 2)))
            .collect();
        let nested: Vec<Point> = nested.into_iter().rev().collect();
        assert_eq!(
            Polygon::new(outer, vec![big, nested]).validate().unwrap_err().kind,
            ViolationKind::HolesNested
        );
    }

    #[test]
    fn point_location() {
        let s = square();
        assert_eq!(s.locate(&Point::new(ratio(1, 2), ratio(1, 2))), Location::Inside);
        assert_eq!(s.locate(&Point::new(rat(1), ratio(1, 2))), Location::Boundary);
        assert_eq!(s.locate(&Point::int(2, 0)), Location::Outside);
        // vertex-aligned ray
        let tri = Polygon::from_ints(&[(0, 0), (4, 0), (2, 2)]);
        assert_eq!(tri.locate(&Point::new(rat(1), ratio(1, 2))), Location::Inside);
        assert_eq!(tri.locate(&Point::int(-1, 2)), Location::Outside);
    }

    #[test]
    fn hull_examples() {
        let pts: Vec<Point> = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        assert_eq!(convex_hull(&pts).unwrap().len(), 4);
        let pent: Vec<Point> = [(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        assert_eq!(convex_hull(&pent).unwrap().len(), 5);
        let line: Vec<Point> = [(0, 0), (1, 1), (2, 2)]
            .iter()
            .map(|&(x, y)| Point::int(x, y))
            .collect();
        assert!(convex_hull(&line).is_err());
    }

    #[test]
    fn kernel_of_convex_is_itself() {
        let s = square();
        let k = kernel(&s).unwrap();
        assert_eq!(signed_area2(&k), s.area2());
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn u_shape_has_no_kernel() {
        let u = Polygon::from_ints(&[(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)]);
        assert!(u.validate().is_ok());
        assert!(kernel(&u).is_none());
    }
}
