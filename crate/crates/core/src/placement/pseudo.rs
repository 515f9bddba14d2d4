//! Pseudo-triangles: three fans around a point of the kernel.

use crate::error::{Error, Result};
use crate::formula::{Formula, Placement};
use crate::guards::{natural_guard, GuardSet, Wedge};
use crate::polygon::{kernel, vertex_centroid, Polygon};

use super::valid;

/// Indices of the convex vertices, or an error unless there are exactly three.
fn convex_corners(p: &Polygon) -> Result<Vec<usize>> {
    if !p.holes.is_empty() {
        return Err(Error::Precondition("a pseudo-triangle has no holes".into()));
    }
    let mut corners = Vec::new();
    for i in 0..p.n() {
        if !p.is_reflex(i)? {
            corners.push(i);
        }
    }
    if corners.len() != 3 {
        return Err(Error::Precondition(format!(
            "a pseudo-triangle has exactly 3 convex vertices, found {}",
            corners.len()
        )));
    }
    Ok(corners)
}

/// Guard positions covering every edge of the chain from corner `c` through
/// `reflex` to the next corner: every other reflex vertex, plus the last
/// one when the count is even. A chain without reflex vertices uses `c`.
fn chain_guards(c: usize, reflex: &[usize]) -> Vec<usize> {
    if reflex.is_empty() {
        return vec![c];
    }
    let mut out: Vec<usize> = reflex.iter().step_by(2).copied().collect();
    if reflex.len().is_multiple_of(2) {
        out.push(reflex[reflex.len() - 1]);
    }
    out
}

pub fn place_pseudo_triangle(p: &Polygon) -> Result<Placement> {
    valid(p)?;
    let corners = convex_corners(p)?;
    let k = kernel(p).ok_or_else(|| Error::Precondition("pseudo-triangle has an empty kernel".into()))?;
    let v = vertex_centroid(&k);
    let n = p.n();
    let ring = &p.outer;
    let mut g = GuardSet::new();
    let mut fans = Vec::new();
    for f in 0..3 {
        let (c, d) = (corners[f], corners[(f + 1) % 3]);
        let reflex: Vec<usize> = (1..(d + n - c) % n).map(|s| (c + s) % n).collect();
        let s = format!("s{f}");
        g.push(s.clone(), Wedge::spanning(&v, &ring[c], &ring[d])?)?;
        let mut alts = Vec::new();
        for i in chain_guards(c, &reflex) {
            let l = format!("v{i}");
            if g.index_of(&l).is_none() {
                g.push(l.clone(), natural_guard(p, i)?)?;
            }
            alts.push(Formula::leaf(l));
        }
        fans.push(Formula::and(vec![Formula::leaf(s), Formula::or(alts)]));
    }
    Placement::new("pseudo", g, Formula::or(fans), Some(2))
}
