//! Edge guards on every distinct edge halfplane, combined by a convex hull
//! tree: hull edges are literals, pockets recurse with the dual operator.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Placement};
use crate::geom::{on_segment, sign, DirectedLine, Point, Rational};
use crate::guards::{edge_guard, GuardSet};
use crate::polygon::{convex_hull, Polygon};

use super::valid;

type HalfplaneKey = (Rational, Rational, Rational, i8);

fn halfplane_key(a: &Point, b: &Point) -> Result<HalfplaneKey> {
    let l = DirectedLine::through(a, b)?;
    let d = b - a;
    let lead = if sign(&d.y) != 0 { -sign(&d.y) } else { sign(&d.x) };
    let (x, y, c) = l.key();
    Ok((x, y, c, lead))
}

/// One label per distinct inner halfplane, and the label of every edge.
fn halfplane_guards(p: &Polygon) -> Result<(GuardSet, Vec<String>)> {
    let mut g = GuardSet::new();
    let mut seen: HashMap<HalfplaneKey, String> = HashMap::new();
    let mut labels = Vec::new();
    for (e, (a, b)) in p.edges().iter().enumerate() {
        let key = halfplane_key(a, b)?;
        let l = match seen.get(&key) {
            Some(l) => l.clone(),
            None => {
                let l = format!("h{}", seen.len());
                g.push(l.clone(), edge_guard(p, e)?)?;
                seen.insert(key, l.clone());
                l
            }
        };
        labels.push(l);
    }
    Ok((g, labels))
}

/// Number of distinct inner halfplanes of the edges.
pub fn halfplane_count(p: &Polygon) -> Result<usize> {
    Ok(halfplane_guards(p)?.0.len())
}

struct Tree<'a> {
    edge_label: HashMap<(Point, Point), &'a str>,
}

impl Tree<'_> {
    fn label(&self, a: &Point, b: &Point) -> Option<&str> {
        self.edge_label
            .get(&(a.clone(), b.clone()))
            .or_else(|| self.edge_label.get(&(b.clone(), a.clone())))
            .copied()
    }

    /// Formula for a region bounded by `ring` (counter-clockwise). At even
    /// depth the region is part of the polygon and the result is its
    /// indicator; at odd depth it is a pocket and the result is the
    /// indicator of its complement. Either is exact inside the hull of
    /// `ring`. `lid` is the closing edge that is not a polygon edge.
    fn build(&self, ring: &[Point], lid: Option<usize>, depth: usize) -> Result<Formula> {
        let n = ring.len();
        let hull = convex_hull(ring)?;
        let h = hull.len();
        let on_hull = |q: &Point| (0..h).any(|k| on_segment(&hull[k], &hull[(k + 1) % h], q));
        let marked: Vec<usize> = (0..n).filter(|&i| on_hull(&ring[i])).collect();
        let mut terms = Vec::new();
        for (k, &i) in marked.iter().enumerate() {
            let j = marked[(k + 1) % marked.len()];
            if (i + 1) % n == j {
                if lid == Some(i) {
                    continue;
                }
                let l = self
                    .label(&ring[i], &ring[j])
                    .ok_or_else(|| Error::Construction("hull edge is not a polygon edge".into()))?;
                terms.push(Formula::leaf(l));
            } else {
                // pocket: the chain i..j, closed by the lid j -> i, reversed
                // to counter-clockwise
                let mut chain: Vec<Point> = Vec::new();
                let mut t = i;
                loop {
                    chain.push(ring[t].clone());
                    if t == j {
                        break;
                    }
                    t = (t + 1) % n;
                }
                chain.reverse();
                let m = chain.len();
                terms.push(self.build(&chain, Some(m - 1), depth + 1)?);
            }
        }
        Ok(if depth.is_multiple_of(2) {
            Formula::and(terms)
        } else {
            Formula::or(terms)
        })
    }
}

pub fn place_approx2(p: &Polygon) -> Result<Placement> {
    valid(p)?;
    if !p.holes.is_empty() {
        return Err(Error::Precondition("place_approx2 needs a simple polygon".into()));
    }
    let (g, labels) = halfplane_guards(p)?;
    let edges = p.edges();
    let tree = Tree {
        edge_label: edges
            .iter()
            .zip(&labels)
            .map(|((a, b), l)| ((a.clone(), b.clone()), l.as_str()))
            .collect(),
    };
    let f = tree.build(&p.outer, None, 0)?;
    let bound = f.max_clause(crate::formula::DEFAULT_DNF_CAP).ok();
    Placement::new("approx2", g, f, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_random, gen_zigzag, RandomKind};
    use crate::verify::{exact_equivalence, Equivalence};

    fn exact(q: &Polygon, pl: &Placement) -> bool {
        matches!(exact_equivalence(q, pl).unwrap(), Equivalence::Ok { .. })
    }

    #[test]
    fn square() {
        let sq = Polygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let pl = place_approx2(&sq).unwrap();
        assert_eq!(pl.guard_count(), 4);
        assert_eq!(pl.formula.to_string(), "(h0 & h1 & h2 & h3)");
        assert!(exact(&sq, &pl));
    }

    #[test]
    fn nested_pockets() {
        // a spiral-like polygon whose pocket contains a pocket
        let p = Polygon::from_ints(&[
            (0, 0),
            (10, 0),
            (10, 10),
            (2, 10),
            (2, 3),
            (7, 3),
            (7, 7),
            (5, 7),
            (5, 5),
            (4, 5),
            (4, 8),
            (8, 8),
            (8, 2),
            (0, 2),
        ]);
        p.validate().unwrap();
        let pl = place_approx2(&p).unwrap();
        assert!(exact(&p, &pl));
    }

    #[test]
    fn read_once_on_random_simple() {
        for n in [5usize, 9, 16, 25] {
            for seed in 0..4 {
                let p = gen_random(RandomKind::Simple, n, seed).unwrap();
                let pl = place_approx2(&p).unwrap();
                assert_eq!(pl.guard_count(), n);
                assert_eq!(pl.formula.leaf_count(), n);
                assert!(exact(&p, &pl), "{p:?}");
            }
        }
    }

    #[test]
    fn zigzag_shares_lines() {
        let (p, _) = gen_zigzag(2).unwrap();
        let pl = place_approx2(&p).unwrap();
        assert!(pl.guard_count() <= 32);
        assert!(exact(&p, &pl));
    }
}
