//! Concise placements: split the dual tree of a triangulation at centroid
//! edges until every part has at most `c` triangles, then place each part
//! with a base strategy.

use crate::error::{Error, Result};
use crate::formula::Placement;
use crate::partition::piece_ring;
use crate::polygon::Polygon;
use crate::triangulation::{triangulate, Triangulation};

use super::{general_place, is_convex_ring, place_convex, union_of, valid};

/// Sizes of the two sides of every tree edge inside `part`, as
/// `(child, size of the child side)` with the parent implied by `parent`.
fn subtree_sizes(t: &Triangulation, part: &[usize], root: usize) -> (Vec<usize>, Vec<Option<usize>>, Vec<usize>) {
    let n = t.len();
    let mut inside = vec![false; n];
    for &k in part {
        inside[k] = true;
    }
    let mut parent = vec![None; n];
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in &t.dual[u] {
            if inside[w] && !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                order.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &u in order.iter().rev() {
        if let Some(p) = parent[u] {
            size[p] += size[u];
        }
    }
    (order, parent, size)
}

/// Parts of at most `c` triangles each.
fn centroid_split(t: &Triangulation, part: Vec<usize>, c: usize, out: &mut Vec<Vec<usize>>) {
    if part.len() <= c {
        out.push(part);
        return;
    }
    let root = *part.iter().min().expect("nonempty part");
    let (order, parent, size) = subtree_sizes(t, &part, root);
    let total = part.len();
    // child whose subtree is closest to half; ties to the smallest index
    let cut = order
        .iter()
        .filter(|&&u| parent[u].is_some())
        .min_by_key(|&&u| ((2 * size[u]).abs_diff(total), u))
        .copied()
        .expect("a part with two triangles has an edge");
    let mut below = vec![false; t.len()];
    for &u in &order {
        below[u] = u == cut || parent[u].is_some_and(|p| below[p]);
    }
    let (mut a, mut b): (Vec<usize>, Vec<usize>) = part.into_iter().partition(|&u| below[u]);
    a.sort_unstable();
    b.sort_unstable();
    centroid_split(t, a, c, out);
    centroid_split(t, b, c, out);
}

/// Subpolygons of at most `c + 2` vertices along triangulation diagonals.
pub fn concise_pieces(p: &Polygon, c: usize) -> Result<Vec<Polygon>> {
    let t = triangulate(p)?;
    let mut parts = Vec::new();
    centroid_split(&t, (0..t.len()).collect(), c, &mut parts);
    parts
        .iter()
        .map(|tris| {
            let ring = piece_ring(&t, tris)?;
            Ok(Polygon::simple(ring.iter().map(|&i| t.points[i].clone()).collect()))
        })
        .collect()
}

pub fn place_concise(p: &Polygon, c: usize, base: &str) -> Result<Placement> {
    valid(p)?;
    if c < 2 {
        return Err(Error::Precondition("concise placement needs c >= 2".into()));
    }
    if !p.holes.is_empty() {
        return Err(Error::Precondition("concise placement needs a simple polygon".into()));
    }
    let place: fn(&Polygon) -> Result<Placement> = match base {
        "convex" if is_convex_ring(p) => place_convex,
        "convex" => {
            return Err(Error::Precondition(
                "convex base strategy needs a convex polygon".into(),
            ))
        }
        "general" => general_place,
        _ => return Err(Error::Precondition(format!("unsupported base strategy `{base}`"))),
    };
    let pieces = if c >= p.n().saturating_sub(2) {
        vec![p.clone()]
    } else {
        concise_pieces(p, c)?
    };
    let parts = pieces.iter().map(place).collect::<Result<Vec<_>>>()?;
    let bound = parts.iter().filter_map(|pl| pl.certificate_bound).max();
    let mut pl = union_of("concise", parts, bound)?;
    pl.certificate_bound = bound;
    Ok(pl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{rat, Point};
    use crate::verify::{exact_equivalence, Equivalence};

    /// Convex polygon on the parabola y = x^2.
    fn parabola(n: i64) -> Polygon {
        let mut v: Vec<Point> = (0..n).map(|i| Point::new(rat(i), rat(i * i))).collect();
        v.reverse();
        v.rotate_left(n as usize - 1);
        let p = Polygon::simple(v).normalized();
        p.validate().unwrap();
        p
    }

    #[test]
    fn pieces_bounded() {
        let p = parabola(16);
        for c in [2usize, 4, 8] {
            let pieces = concise_pieces(&p, c).unwrap();
            assert!(pieces.iter().all(|q| q.n() <= c + 2 && q.validate().is_ok()));
            let area: crate::geom::Rational = pieces.iter().map(|q| q.area2()).sum();
            assert_eq!(area, p.area2());
        }
    }

    #[test]
    fn convex_sixteen() {
        let p = parabola(16);
        let pl = place_concise(&p, 4, "convex").unwrap();
        assert!(pl.max_clause().unwrap() <= 3);
        assert!(matches!(exact_equivalence(&p, &pl).unwrap(), Equivalence::Ok { .. }));
        let whole = place_concise(&p, 16, "convex").unwrap();
        assert_eq!(whole.formula, place_convex(&p).unwrap().formula);
        assert!(place_concise(&p, 1, "convex").is_err());
    }
}
