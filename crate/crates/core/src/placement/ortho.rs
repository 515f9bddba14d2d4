//! Orthogonal polygons: partition into rectangles and L-shapes, then two or
//! three right-angle guards per piece.

use crate::error::{Error, Result};
use crate::formula::{Formula, Placement};
use crate::geom::{orient, sign, Point, Rational};
use crate::guards::{natural_guard, GuardSet};
use crate::polygon::{cleanup_ring, Polygon};

use super::{union_of, valid};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoPartition {
    pub pieces: Vec<Polygon>,
}

impl OrthoPartition {
    pub fn rectangles(&self) -> usize {
        self.pieces.iter().filter(|p| p.n() == 4).count()
    }
}

fn piece_bound(n: usize) -> usize {
    n.saturating_sub(2).div_ceil(4).max(1)
}

/// Parameter `t > 0` of the first boundary point hit by the ray `v + t d`,
/// with the point itself. Edges through `v` are skipped.
fn first_hit(ring: &[Point], i: usize, d: &Point) -> Option<(Rational, Point)> {
    let v = &ring[i];
    let n = ring.len();
    let mut best: Option<(Rational, Point)> = None;
    let mut consider = |t: Rational, p: Point| {
        if sign(&t) > 0 && best.as_ref().is_none_or(|b| t < b.0) {
            best = Some((t, p));
        }
    };
    for e in 0..n {
        let (a, b) = (&ring[e], &ring[(e + 1) % n]);
        if e == i || (e + 1) % n == i {
            continue;
        }
        // parameter of a point along the ray, for points on its line
        let along = |p: &Point| (p - v).dot(d);
        let off_a = d.cross(&(a - v));
        let off_b = d.cross(&(b - v));
        match (sign(&off_a), sign(&off_b)) {
            (0, 0) => {
                consider(along(a), a.clone());
                consider(along(b), b.clone());
            }
            (sa, sb) if sa * sb <= 0 => {
                // crossing point: a + s (b - a) with s = off_a / (off_a - off_b)
                let s = &off_a / (&off_a - &off_b);
                let p = a + &(b - a).scale(&s);
                consider(along(&p), p);
            }
            _ => {}
        }
    }
    best
}

/// Splits the ring along the segment from vertex `i` to boundary point
/// `h`. Both halves keep counter-clockwise orientation.
fn split(ring: &[Point], i: usize, h: &Point) -> Option<(Vec<Point>, Vec<Point>)> {
    let n = ring.len();
    let mut r: Vec<Point> = Vec::with_capacity(n + 1);
    let mut j = None;
    for e in 0..n {
        r.push(ring[e].clone());
        if &ring[e] == h {
            j = Some(r.len() - 1);
        }
        let (a, b) = (&ring[e], &ring[(e + 1) % n]);
        if j.is_none() && h != a && h != b && orient(a, b, h) == 0 && crate::geom::on_segment(a, b, h) {
            r.push(h.clone());
            j = Some(r.len() - 1);
        }
    }
    let j = j?;
    let i = if j <= i && r.len() > n { i + 1 } else { i };
    let (lo, hi) = (i.min(j), i.max(j));
    let first: Vec<Point> = r[lo..=hi].to_vec();
    let second: Vec<Point> = r[hi..].iter().chain(r[..=lo].iter()).cloned().collect();
    Some((cleanup_ring(first), cleanup_ring(second)))
}

/// All cuts along extensions of edges at reflex vertices.
fn cuts(ring: &[Point]) -> Vec<(Vec<Point>, Vec<Point>)> {
    let n = ring.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (prev, v, next) = (&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n]);
        if orient(prev, v, next) >= 0 {
            continue;
        }
        for d in [v - prev, v - next] {
            if let Some((_, h)) = first_hit(ring, i, &d) {
                if let Some((a, b)) = split(ring, i, &h) {
                    if a.len() >= 4 && b.len() >= 4 {
                        out.push((a, b));
                    }
                }
            }
        }
    }
    out
}

fn search(ring: Vec<Point>, budget: usize, need_rect: bool) -> Option<Vec<Vec<Point>>> {
    if ring.len() <= 6 && budget >= 1 && (!need_rect || ring.len() == 4) {
        return Some(vec![ring]);
    }
    for (a, b) in cuts(&ring) {
        let (ba, bb) = (piece_bound(a.len()), piece_bound(b.len()));
        if ba + bb > budget {
            continue;
        }
        for rect_in_a in [true, false] {
            if !need_rect && !rect_in_a {
                break;
            }
            let ra = need_rect && rect_in_a;
            let rb = need_rect && !rect_in_a;
            let Some(pa) = search(a.clone(), budget - bb, ra) else {
                continue;
            };
            let Some(pb) = search(b.clone(), budget - pa.len(), rb) else {
                continue;
            };
            let mut out = pa;
            out.extend(pb);
            return Some(out);
        }
    }
    None
}

/// Rectangles and L-shapes tiling `p`, at most `ceil((n - 2) / 4)` of them,
/// with a rectangle among them when `(n - 2) / 2` is odd.
pub fn ortho_partition(p: &Polygon) -> Result<OrthoPartition> {
    valid(p)?;
    if !p.holes.is_empty() || !p.is_orthogonal() {
        return Err(Error::Precondition(
            "ortho_partition needs a simple orthogonal polygon".into(),
        ));
    }
    let n = p.n();
    let need_rect = ((n - 2) / 2) % 2 == 1;
    let pieces = search(p.outer.clone(), piece_bound(n), need_rect)
        .ok_or_else(|| Error::Construction("no rectangle/L partition within the piece bound".into()))?;
    Ok(OrthoPartition {
        pieces: pieces.into_iter().map(Polygon::simple).collect(),
    })
}

fn place_rectangle(q: &Polygon) -> Result<Placement> {
    let mut g = GuardSet::new();
    g.push("v0", natural_guard(q, 0)?)?;
    g.push("v2", natural_guard(q, 2)?)?;
    Placement::new("rectangle", g, Formula::and_labels(&["v0", "v2"]), Some(2))
}

/// Guard at the corner shared by both rectangles of the L and at the
/// far corner of each rectangle.
fn place_l(q: &Polygon) -> Result<Placement> {
    let r = (0..6)
        .find(|&i| matches!(q.is_reflex(i), Ok(true)))
        .ok_or_else(|| Error::Construction("L piece without a reflex vertex".into()))?;
    let (c, m1, m2) = ((r + 3) % 6, (r + 5) % 6, (r + 1) % 6);
    let mut g = GuardSet::new();
    let name = |i: usize| format!("v{i}");
    for i in [c, m1, m2] {
        g.push(name(i), natural_guard(q, i)?)?;
    }
    let f = Formula::or(vec![
        Formula::and_labels(&[name(c), name(m1)]),
        Formula::and_labels(&[name(c), name(m2)]),
    ]);
    Placement::new("l", g, f, Some(2))
}

pub fn place_orthogonal(p: &Polygon) -> Result<Placement> {
    let part = ortho_partition(p)?;
    let parts = part
        .pieces
        .iter()
        .map(|q| if q.n() == 4 { place_rectangle(q) } else { place_l(q) })
        .collect::<Result<Vec<_>>>()?;
    union_of("orthogonal", parts, Some(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_random, RandomKind};
    use crate::verify::{exact_equivalence, Equivalence};

    fn exact(q: &Polygon, pl: &Placement) -> bool {
        matches!(exact_equivalence(q, pl).unwrap(), Equivalence::Ok { .. })
    }

    #[test]
    fn rectangle_and_l() {
        let rect = Polygon::from_ints(&[(0, 0), (3, 0), (3, 2), (0, 2)]);
        let pl = place_orthogonal(&rect).unwrap();
        assert_eq!(pl.guard_count(), 2);
        assert!(exact(&rect, &pl));
        let l = Polygon::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        assert_eq!(ortho_partition(&l).unwrap().pieces.len(), 1);
        let pl = place_orthogonal(&l).unwrap();
        assert_eq!(pl.guard_count(), 3);
        assert_eq!(pl.guards.get("v0").unwrap().apex, Point::int(0, 0));
        assert!(exact(&l, &pl));
    }

    #[test]
    fn staircase() {
        let p = Polygon::from_ints(&[
            (0, 0),
            (5, 0),
            (5, 1),
            (4, 1),
            (4, 2),
            (3, 2),
            (3, 3),
            (2, 3),
            (2, 4),
            (1, 4),
            (1, 5),
            (0, 5),
        ]);
        let part = ortho_partition(&p).unwrap();
        assert!(part.pieces.len() <= 3);
        assert!(part.rectangles() >= 1);
        let pl = place_orthogonal(&p).unwrap();
        assert!(pl.guard_count() <= 8);
        assert!(exact(&p, &pl));
    }

    #[test]
    fn partition_tiles_random_polygons() {
        for n in [8usize, 10, 14, 20] {
            for seed in 0..5 {
                let p = gen_random(RandomKind::Orthogonal, n, seed).unwrap();
                let part = ortho_partition(&p).unwrap();
                assert!(part.pieces.len() <= piece_bound(n));
                if ((n - 2) / 2) % 2 == 1 {
                    assert!(part.rectangles() >= 1);
                }
                let area: Rational = part.pieces.iter().map(|q| q.area2()).sum();
                assert_eq!(area, p.area2());
                for q in &part.pieces {
                    assert!(q.validate().is_ok() && q.is_orthogonal() && (q.n() == 4 || q.n() == 6));
                }
                let pl = place_orthogonal(&p).unwrap();
                assert!(pl.guard_count() <= (3 * (n - 2)).div_ceil(4));
                assert!(exact(&p, &pl), "{p:?}");
            }
        }
    }

    #[test]
    fn rejects_slanted() {
        let t = Polygon::from_ints(&[(0, 0), (2, 0), (0, 2)]);
        assert!(matches!(place_orthogonal(&t), Err(Error::Precondition(_))));
    }
}
