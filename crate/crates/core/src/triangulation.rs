//! Ear-clipping triangulation. Holes are bridged into the outer ring first,
//! so the result is always a triangulation of a single (weakly simple) ring
//! and its dual graph is a tree.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geom::{on_segment, orient, segment_properly_intersects, signed_area2, Point, Rational};
use crate::polygon::{Location, Polygon};

#[derive(Clone, Debug)]
pub struct Triangulation {
    /// Coordinates of the merged ring. Bridge endpoints appear twice.
    pub points: Vec<Point>,
    /// Merged ring position -> global vertex index of the source polygon.
    pub origin: Vec<usize>,
    /// Counter-clockwise triangles over merged ring positions.
    pub triangles: Vec<[usize; 3]>,
    /// Dual adjacency: triangles sharing an edge of the merged ring.
    pub dual: Vec<Vec<usize>>,
}

impl Triangulation {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.points[a].clone(), self.points[b].clone(), self.points[c].clone()]
    }

    /// Triangles as triples of source-polygon vertex indices.
    pub fn vertex_triples(&self) -> Vec<[usize; 3]> {
        self.triangles
            .iter()
            .map(|t| [self.origin[t[0]], self.origin[t[1]], self.origin[t[2]]])
            .collect()
    }

    pub fn area2(&self) -> Rational {
        (0..self.len()).map(|t| signed_area2(&self.triangle_points(t))).sum()
    }

    pub fn is_tree(&self) -> bool {
        let m = self.len();
        if m == 0 {
            return false;
        }
        let edges: usize = self.dual.iter().map(|d| d.len()).sum::<usize>() / 2;
        if edges != m - 1 {
            return false;
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for &u in &self.dual[t] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// O'Rourke's in-cone test: is `b` strictly inside the interior angle at `a`
/// whose ring neighbours are `prev` and `next`?
fn in_cone(prev: &Point, a: &Point, next: &Point, b: &Point) -> bool {
    if orient(prev, a, next) >= 0 {
        orient(a, b, prev) > 0 && orient(b, a, next) > 0
    } else {
        !(orient(a, b, next) >= 0 && orient(b, a, prev) >= 0)
    }
}

fn in_closed_triangle(a: &Point, b: &Point, c: &Point, p: &Point) -> bool {
    orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
}

/// Splices every hole into the outer ring along bridge segments.
/// Returns merged coordinates and the origin map.
pub fn bridge_holes(p: &Polygon) -> Result<(Vec<Point>, Vec<usize>)> {
    let mut ring: Vec<Point> = p.outer.clone();
    let mut origin: Vec<usize> = (0..ring.len()).collect();
    let mut offsets = Vec::new();
    let mut off = p.outer.len();
    for h in &p.holes {
        offsets.push(off);
        off += h.len();
    }
    let mut all_edges = p.edges();
    let all_vertices = p.vertices();
    let mut remaining: Vec<usize> = (0..p.holes.len()).collect();
    while !remaining.is_empty() {
        // (ring point, hole point, ring position, hole index, hole position)
        let mut best: Option<(Point, Point, usize, usize, usize)> = None;
        for &hk in &remaining {
            let hole = &p.holes[hk];
            for (j, hp) in hole.iter().enumerate() {
                for i in 0..ring.len() {
                    let rp = &ring[i];
                    if let Some((bp, bh, ..)) = &best {
                        if (rp, hp) >= (bp, bh) {
                            continue;
                        }
                    }
                    let n = ring.len();
                    if !in_cone(&ring[(i + n - 1) % n], rp, &ring[(i + 1) % n], hp) {
                        continue;
                    }
                    if bridge_ok(p, &all_edges, &all_vertices, rp, hp)? {
                        best = Some((rp.clone(), hp.clone(), i, hk, j));
                    }
                }
            }
        }
        let (_, _, i, hk, j) = best.ok_or_else(|| Error::Construction("no visible bridge for a hole".into()))?;
        let hole = &p.holes[hk];
        let m = hole.len();
        let mut ins_pts = Vec::with_capacity(m + 2);
        let mut ins_org = Vec::with_capacity(m + 2);
        for t in 0..=m {
            ins_pts.push(hole[(j + t) % m].clone());
            ins_org.push(offsets[hk] + (j + t) % m);
        }
        all_edges.push((ring[i].clone(), hole[j].clone()));
        ins_pts.push(ring[i].clone());
        ins_org.push(origin[i]);
        ring.splice(i + 1..i + 1, ins_pts);
        origin.splice(i + 1..i + 1, ins_org);
        remaining.retain(|&x| x != hk);
    }
    Ok((ring, origin))
}

fn bridge_ok(p: &Polygon, edges: &[(Point, Point)], vertices: &[Point], a: &Point, b: &Point) -> Result<bool> {
    for v in vertices {
        if v != a && v != b && on_segment(a, b, v) {
            return Ok(false);
        }
    }
    for (c, d) in edges {
        if segment_properly_intersects((a, b), (c, d))? {
            return Ok(false);
        }
    }
    Ok(p.locate(&a.midpoint(b)) == Location::Inside)
}

/// Is the segment between ring positions `i` and `j` an internal diagonal
/// of the simple ring?
pub fn is_diagonal(ring: &[Point], i: usize, j: usize) -> bool {
    let n = ring.len();
    if i == j || (i + 1) % n == j || (j + 1) % n == i {
        return false;
    }
    let (a, b) = (&ring[i], &ring[j]);
    if !in_cone(&ring[(i + n - 1) % n], a, &ring[(i + 1) % n], b) {
        return false;
    }
    for (k, v) in ring.iter().enumerate() {
        if k != i && k != j && on_segment(a, b, v) {
            return false;
        }
    }
    (0..n).all(|k| !segment_properly_intersects((a, b), (&ring[k], &ring[(k + 1) % n])).unwrap_or(true))
}

/// Triangulates a valid polygon; `n + 2(h - 1)` triangles.
pub fn triangulate(p: &Polygon) -> Result<Triangulation> {
    p.validate().map_err(|v| Error::InvalidPolygon(v.to_string()))?;
    let (points, origin) = bridge_holes(p)?;
    let triangles = ear_clip(&points)?;
    let dual = dual_graph(&triangles);
    Ok(Triangulation {
        points,
        origin,
        triangles,
        dual,
    })
}

/// Ear clipping over a counter-clockwise, weakly simple ring.
pub fn ear_clip(points: &[Point]) -> Result<Vec<[usize; 3]>> {
    let mut live: Vec<usize> = (0..points.len()).collect();
    let mut out = Vec::with_capacity(points.len().saturating_sub(2));
    while live.len() > 3 {
        let m = live.len();
        let pos = (0..m)
            .find(|&k| is_ear(points, &live, k))
            .ok_or_else(|| Error::Construction("ear clipping found no ear".into()))?;
        let (a, b, c) = (live[(pos + m - 1) % m], live[pos], live[(pos + 1) % m]);
        out.push([a, b, c]);
        live.remove(pos);
    }
    if live.len() == 3 {
        let [a, b, c] = [live[0], live[1], live[2]];
        if signed_area2(&[points[a].clone(), points[b].clone(), points[c].clone()]).is_zero() {
            return Err(Error::Construction("degenerate final triangle".into()));
        }
        out.push([a, b, c]);
    }
    Ok(out)
}

fn is_ear(points: &[Point], live: &[usize], k: usize) -> bool {
    let m = live.len();
    let (ia, ib, ic) = (live[(k + m - 1) % m], live[k], live[(k + 1) % m]);
    let (a, b, c) = (&points[ia], &points[ib], &points[ic]);
    if orient(a, b, c) <= 0 {
        return false;
    }
    for &j in live {
        let q = &points[j];
        if j == ia || j == ib || j == ic || q == a || q == b || q == c {
            continue;
        }
        if in_closed_triangle(a, b, c, q) {
            return false;
        }
    }
    if m > 3 {
        let before_a = &points[live[(k + m - 2) % m]];
        let after_c = &points[live[(k + 2) % m]];
        if !in_cone(before_a, a, b, c) || !in_cone(b, c, after_c, a) {
            return false;
        }
    }
    for e in 0..m {
        let (u, v) = (&points[live[e]], &points[live[(e + 1) % m]]);
        if segment_properly_intersects((a, c), (u, v)).unwrap_or(true) {
            return false;
        }
    }
    true
}

pub fn dual_graph(triangles: &[[usize; 3]]) -> Vec<Vec<usize>> {
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for e in 0..3 {
            let (u, v) = (tri[e], tri[(e + 1) % 3]);
            by_edge.entry((u.min(v), u.max(v))).or_default().push(t);
        }
    }
    let mut dual = vec![Vec::new(); triangles.len()];
    for ts in by_edge.values() {
        if let [s, t] = ts[..] {
            dual[s].push(t);
            dual[t].push(s);
        }
    }
    for d in &mut dual {
        d.sort_unstable();
    }
    dual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::int(x, y)).collect()
    }

    #[test]
    fn quad_two_triangles() {
        let t = triangulate(&Polygon::from_ints(&[(0, 0), (2, 0), (3, 2), (0, 1)])).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.is_tree());
    }

    #[test]
    fn square_with_hole() {
        let p = Polygon::new(
            pts(&[(0, 0), (4, 0), (4, 4), (0, 4)]),
            vec![pts(&[(1, 1), (1, 3), (3, 3), (3, 1)])],
        );
        let t = triangulate(&p).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t.area2(), p.area2());
        assert!(t.is_tree());
    }

    #[test]
    fn seven_gon_five_triangles() {
        // oracle: any triangulation of a simple 7-gon has 5 triangles whose
        // areas sum to the polygon's
        let p = Polygon::from_ints(&[(0, 0), (6, 0), (6, 4), (4, 2), (3, 5), (2, 2), (0, 4)]);
        let t = triangulate(&p).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.area2(), p.area2());
        assert!(t.dual.iter().all(|d| d.len() <= 3));
    }

    #[test]
    fn two_holes() {
        let p = Polygon::new(
            pts(&[(0, 0), (10, 0), (10, 6), (0, 6)]),
            vec![
                pts(&[(1, 1), (1, 5), (4, 5), (4, 1)]),
                pts(&[(6, 1), (6, 5), (9, 5), (9, 1)]),
            ],
        );
        let t = triangulate(&p).unwrap();
        assert_eq!(t.len(), 12 + 2);
        assert_eq!(t.area2(), p.area2());
        assert!(t.is_tree());
        assert_eq!(p.area2(), rat(2 * (60 - 24)));
    }

    #[test]
    fn collinear_vertex() {
        let p = Polygon::from_ints(&[(0, 0), (1, 0), (2, 0), (1, 1)]);
        let t = triangulate(&p).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.area2(), p.area2());
    }
}
