//! Leaf trimming of the dual tree into tetragons, pentagons and at most one
//! star hexagon.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::polygon::Polygon;
use crate::triangulation::Triangulation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    Triangle,
    Tetragon,
    Pentagon,
    HexagonStar,
}

impl PieceKind {
    fn of(triangles: usize) -> PieceKind {
        match triangles {
            1 => PieceKind::Triangle,
            2 => PieceKind::Tetragon,
            3 => PieceKind::Pentagon,
            _ => PieceKind::HexagonStar,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub kind: PieceKind,
    /// Triangle indices of the source triangulation.
    pub triangles: Vec<usize>,
    /// Counter-clockwise boundary as merged ring positions.
    pub ring: Vec<usize>,
    pub polygon: Polygon,
}

#[derive(Clone, Debug)]
pub struct SubpolygonPartition {
    pub pieces: Vec<Piece>,
}

impl SubpolygonPartition {
    pub fn kinds(&self) -> Vec<PieceKind> {
        self.pieces.iter().map(|p| p.kind).collect()
    }
}

/// Boundary of a union of triangles, as merged ring positions.
pub fn piece_ring(t: &Triangulation, tris: &[usize]) -> Result<Vec<usize>> {
    let mut directed: HashMap<usize, usize> = HashMap::new();
    let mut all = Vec::new();
    for &k in tris {
        let tri = t.triangles[k];
        for e in 0..3 {
            all.push((tri[e], tri[(e + 1) % 3]));
        }
    }
    for &(u, v) in &all {
        if !all.contains(&(v, u)) {
            directed.insert(u, v);
        }
    }
    let start = *directed
        .keys()
        .min()
        .ok_or_else(|| Error::Construction("empty piece".into()))?;
    let mut ring = vec![start];
    let mut cur = directed[&start];
    while cur != start {
        ring.push(cur);
        cur = *directed
            .get(&cur)
            .ok_or_else(|| Error::Construction("piece boundary is not a cycle".into()))?;
        if ring.len() > directed.len() {
            return Err(Error::Construction("piece boundary is not a cycle".into()));
        }
    }
    if ring.len() != directed.len() {
        return Err(Error::Construction("piece boundary has several cycles".into()));
    }
    Ok(ring)
}

fn make_piece(t: &Triangulation, mut tris: Vec<usize>) -> Result<Piece> {
    tris.sort_unstable();
    let ring = piece_ring(t, &tris)?;
    let outer: Vec<Point> = ring.iter().map(|&i| t.points[i].clone()).collect();
    Ok(Piece {
        kind: PieceKind::of(tris.len()),
        triangles: tris,
        ring,
        polygon: Polygon::simple(outer),
    })
}

/// Trims the dual tree leaf by leaf. Requires a tree with at least two
/// nodes; a single triangle is returned as one triangle piece.
pub fn trim_partition(t: &Triangulation) -> Result<SubpolygonPartition> {
    let m = t.len();
    if m == 0 {
        return Err(Error::Precondition("trim_partition needs n >= 4".into()));
    }
    if !t.is_tree() {
        return Err(Error::Precondition("dual graph is not a tree".into()));
    }
    let mut alive = vec![true; m];
    let deg = |alive: &[bool], v: usize| t.dual[v].iter().filter(|&&u| alive[u]).count();
    let nbrs = |alive: &[bool], v: usize| -> Vec<usize> { t.dual[v].iter().copied().filter(|&u| alive[u]).collect() };
    let mut pieces = Vec::new();
    loop {
        let live: Vec<usize> = (0..m).filter(|&v| alive[v]).collect();
        if live.is_empty() {
            break;
        }
        let star = live.len() == 4 && live.iter().any(|&v| deg(&alive, v) == 3);
        if live.len() <= 3 || star {
            pieces.push(make_piece(t, live)?);
            break;
        }
        let mut chosen: Option<Vec<usize>> = None;
        for &v in &live {
            if deg(&alive, v) != 1 {
                continue;
            }
            let u = nbrs(&alive, v)[0];
            let un = nbrs(&alive, u);
            if un.len() == 2 {
                let w = if un[0] == v { un[1] } else { un[0] };
                if deg(&alive, w) > 1 {
                    chosen = Some(vec![v, u]);
                    break;
                }
            } else if un.len() == 3 {
                let others: Vec<usize> = un.iter().copied().filter(|&x| x != v).collect();
                let leaves: Vec<usize> = others.iter().copied().filter(|&x| deg(&alive, x) == 1).collect();
                if leaves.len() == 1 {
                    chosen = Some(vec![v, u, leaves[0]]);
                    break;
                }
            }
        }
        let chosen = chosen.ok_or_else(|| Error::Construction("no trimmable leaf".into()))?;
        for &x in &chosen {
            alive[x] = false;
        }
        pieces.push(make_piece(t, chosen)?);
    }
    Ok(SubpolygonPartition { pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::triangulate;

    fn tri_count(p: &SubpolygonPartition) -> usize {
        p.pieces.iter().map(|x| x.triangles.len()).sum()
    }

    #[test]
    fn quad_is_one_tetragon() {
        let t = triangulate(&Polygon::from_ints(&[(0, 0), (2, 0), (2, 2), (0, 2)])).unwrap();
        let p = trim_partition(&t).unwrap();
        assert_eq!(p.kinds(), vec![PieceKind::Tetragon]);
    }

    #[test]
    fn path_of_five() {
        // zigzag strip: the dual tree is a path of five triangles
        let poly = Polygon::from_ints(&[(0, 0), (2, 0), (4, 0), (6, 1), (5, 3), (3, 3), (1, 3)]);
        let t = triangulate(&poly).unwrap();
        assert_eq!(t.len(), 5);
        assert!(t.dual.iter().all(|d| d.len() <= 2));
        let p = trim_partition(&t).unwrap();
        let mut kinds = p.kinds();
        kinds.sort_by_key(|k| *k as u8);
        assert_eq!(kinds, vec![PieceKind::Tetragon, PieceKind::Pentagon]);
        assert_eq!(tri_count(&p), 5);
    }

    #[test]
    fn star_hexagon() {
        // three reflex vertices around a central triangle
        let poly = Polygon::from_ints(&[(4, -3), (4, 2), (12, 6), (6, 5), (-4, 12), (2, 5)]);
        let t = triangulate(&poly).unwrap();
        let p = trim_partition(&t).unwrap();
        assert_eq!(p.kinds(), vec![PieceKind::HexagonStar]);
        assert_eq!(p.pieces[0].ring.len(), 6);
    }
}
