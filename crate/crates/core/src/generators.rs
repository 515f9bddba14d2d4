//! Named instances and seeded random polygon families.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Formula, Placement};
use crate::geom::{ratio, Point};
use crate::guards::{natural_guard, GuardSet};
use crate::polygon::{kernel, vertex_centroid, Polygon};
use crate::triangulation::triangulate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RandomKind {
    Convex,
    Orthogonal,
    Simple,
    PseudoTriangle,
}

impl FromStr for RandomKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(RandomKind::Convex),
            "orthogonal" => Ok(RandomKind::Orthogonal),
            "simple" => Ok(RandomKind::Simple),
            "pseudo_triangle" | "pseudo" => Ok(RandomKind::PseudoTriangle),
            _ => Err(Error::Parse(format!("unknown polygon kind `{s}`"))),
        }
    }
}

impl fmt::Display for RandomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomKind::Convex => "convex",
            RandomKind::Orthogonal => "orthogonal",
            RandomKind::Simple => "simple",
            RandomKind::PseudoTriangle => "pseudo_triangle",
        })
    }
}

type P = (i64, i64);

fn orient_i(a: P, b: P, c: P) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn area2_i(ring: &[P]) -> i64 {
    (0..ring.len())
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

fn to_polygon(ring: &[P]) -> Polygon {
    Polygon::from_ints(ring)
}

const ATTEMPTS: usize = 10_000;

/// Valid polygon of `kind` with exactly `n` vertices, reproducible per seed.
pub fn gen_random(kind: RandomKind, n: usize, seed: u64) -> Result<Polygon> {
    let min = match kind {
        RandomKind::Orthogonal => 4,
        RandomKind::PseudoTriangle => 6,
        _ => 3,
    };
    if n < min || (kind == RandomKind::Orthogonal && n % 2 == 1) {
        return Err(Error::Precondition(format!("no {kind} polygon with {n} vertices")));
    }
    if n > 10_000 {
        return Err(Error::Precondition(format!("n = {n} is too large")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let ring = match kind {
            RandomKind::Convex => random_convex(n, &mut rng),
            RandomKind::Simple => random_simple(n, &mut rng),
            RandomKind::Orthogonal => random_orthogonal(n, &mut rng),
            RandomKind::PseudoTriangle => random_pseudo_triangle(n, &mut rng),
        };
        let Some(ring) = ring else { continue };
        let p = to_polygon(&ring);
        if p.validate().is_err() {
            continue;
        }
        let ok = match kind {
            RandomKind::Convex => p.is_convex(),
            RandomKind::Orthogonal => p.is_orthogonal(),
            RandomKind::Simple => true,
            RandomKind::PseudoTriangle => is_pseudo_triangle(&p) && kernel(&p).is_some(),
        };
        if ok {
            return Ok(p);
        }
    }
    Err(Error::Construction(format!(
        "no {kind} polygon with {n} vertices after {ATTEMPTS} attempts"
    )))
}

pub fn is_pseudo_triangle(p: &Polygon) -> bool {
    p.holes.is_empty() && (0..p.n()).filter(|&i| matches!(p.is_reflex(i), Ok(false))).count() == 3
}

/// Valtr's construction on integer vectors: two random chains per axis,
/// vectors paired at random and sorted by angle.
/// Random simple polygon with `n` outer vertices and `h` triangular holes.
/// Each hole is a triangle of the outer triangulation shrunk towards its
/// centroid, so holes are disjoint and interior.
pub fn gen_holed(n: usize, h: usize, seed: u64) -> Result<Polygon> {
    let outer = gen_random(RandomKind::Simple, n, seed)?;
    let t = triangulate(&outer)?;
    if h > t.len() {
        return Err(Error::Precondition(format!(
            "at most {} holes fit in {n} vertices",
            t.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_401e);
    let mut picks: Vec<usize> = (0..t.len()).collect();
    picks.shuffle(&mut rng);
    let quarter = ratio(1, 4);
    let holes = picks[..h]
        .iter()
        .map(|&k| {
            let tri = t.triangle_points(k);
            let c = vertex_centroid(&tri);
            tri.iter().map(|v| &c + &(v - &c).scale(&quarter)).collect()
        })
        .collect();
    Polygon::new(outer.outer, holes).normalized().validated()
}

fn random_convex(n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<P>> {
    let range = 40 * n as i64;
    let chains = |rng: &mut ChaCha8Rng| -> Vec<i64> {
        let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(0..range)).collect();
        v.sort_unstable();
        let (lo, hi) = (v[0], v[n - 1]);
        let (mut last1, mut last2) = (lo, lo);
        let mut d = Vec::with_capacity(n);
        for &x in &v[1..n - 1] {
            if rng.gen_bool(0.5) {
                d.push(x - last1);
                last1 = x;
            } else {
                d.push(last2 - x);
                last2 = x;
            }
        }
        d.push(hi - last1);
        d.push(last2 - hi);
        d
    };
    let dx = chains(rng);
    let mut dy = chains(rng);
    dy.shuffle(rng);
    let mut vecs: Vec<P> = dx.into_iter().zip(dy).collect();
    if vecs.iter().any(|&(x, y)| x == 0 && y == 0) {
        return None;
    }
    vecs.sort_by(|a, b| {
        let (ha, hb) = (half(*a), half(*b));
        ha.cmp(&hb).then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
    });
    let mut ring = Vec::with_capacity(n);
    let mut cur = (0, 0);
    for v in vecs {
        ring.push(cur);
        cur = (cur.0 + v.0, cur.1 + v.1);
    }
    Some(ring)
}

fn half(v: P) -> u8 {
    if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
        0
    } else {
        1
    }
}

fn properly_cross(a: P, b: P, c: P, d: P) -> bool {
    orient_i(a, b, c) * orient_i(a, b, d) < 0 && orient_i(c, d, a) * orient_i(c, d, b) < 0
}

/// Random points in general position, untangled by 2-opt moves.
fn random_simple(n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<P>> {
    let range = 20 * n as i64;
    let mut pts: Vec<P> = Vec::with_capacity(n);
    let mut tries = 0;
    while pts.len() < n {
        tries += 1;
        if tries > 100 * n {
            return None;
        }
        let p = (rng.gen_range(0..range), rng.gen_range(0..range));
        let clash =
            pts.contains(&p) || (0..pts.len()).any(|i| (i + 1..pts.len()).any(|j| orient_i(pts[i], pts[j], p) == 0));
        if !clash {
            pts.push(p);
        }
    }
    pts.shuffle(rng);
    // each 2-opt move strictly shortens the tour, so this terminates
    'outer: loop {
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if properly_cross(pts[i], pts[i + 1], pts[j], pts[(j + 1) % n]) {
                    pts[i + 1..=j].reverse();
                    continue 'outer;
                }
            }
        }
        break;
    }
    if area2_i(&pts) < 0 {
        pts.reverse();
    }
    Some(pts)
}

/// Boundary of a union of unit cells, counter-clockwise with collinear
/// vertices removed. `None` on pinched vertices.
fn cell_boundary(cells: &BTreeSet<P>) -> Option<Vec<P>> {
    let mut edges: HashSet<(P, P)> = HashSet::new();
    for &(i, j) in cells {
        let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
        for k in 0..4 {
            let (a, b) = (c[k], c[(k + 1) % 4]);
            if !edges.remove(&(b, a)) {
                edges.insert((a, b));
            }
        }
    }
    let mut next: HashMap<P, P> = HashMap::new();
    for &(a, b) in &edges {
        if next.insert(a, b).is_some() {
            return None;
        }
    }
    let start = *next.keys().min()?;
    let mut ring = vec![start];
    let mut cur = next[&start];
    while cur != start {
        ring.push(cur);
        cur = *next.get(&cur)?;
        if ring.len() > edges.len() {
            return None;
        }
    }
    if ring.len() != edges.len() {
        // several boundary cycles: holes or disconnected cells
        return None;
    }
    let m = ring.len();
    let corners: Vec<P> = (0..m)
        .filter(|&k| orient_i(ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]) != 0)
        .map(|k| ring[k])
        .collect();
    Some(corners)
}

/// Polyomino grown one cell at a time until it has `n` corners, then
/// stretched by random gaps between grid lines.
fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<P>> {
    let mut cells: BTreeSet<P> = [(0, 0)].into_iter().collect();
    let mut count = 4;
    let mut stalls = 0;
    while count != n {
        if stalls > 50 * n {
            return None;
        }
        let frontier: Vec<P> = cells
            .iter()
            .flat_map(|&(i, j)| [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)])
            .filter(|c| !cells.contains(c))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let c = *frontier.choose(rng)?;
        cells.insert(c);
        match cell_boundary(&cells) {
            Some(r) if r.len() <= n => {
                count = r.len();
                stalls = 0;
            }
            _ => {
                cells.remove(&c);
                stalls += 1;
            }
        }
    }
    let ring = cell_boundary(&cells)?;
    let stretch = |vals: Vec<i64>, rng: &mut ChaCha8Rng| -> BTreeMap<i64, i64> {
        let mut at = 0;
        vals.into_iter()
            .map(|v| {
                at += rng.gen_range(1..=5);
                (v, at)
            })
            .collect()
    };
    let xs = stretch(
        ring.iter().map(|p| p.0).collect::<BTreeSet<_>>().into_iter().collect(),
        rng,
    );
    let ys = stretch(
        ring.iter().map(|p| p.1).collect::<BTreeSet<_>>().into_iter().collect(),
        rng,
    );
    Some(ring.iter().map(|p| (xs[&p.0], ys[&p.1])).collect())
}

/// Triangle whose sides are replaced by inward-bulging parabolic chains.
fn random_pseudo_triangle(n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<P>> {
    let scale = 100_000.0;
    let mut corners = Vec::new();
    let base: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    for k in 0..3 {
        let a = base + k as f64 * std::f64::consts::TAU / 3.0 + rng.gen_range(-0.25..0.25);
        corners.push((scale * a.cos(), scale * a.sin()));
    }
    let mut counts = [0usize; 3];
    for _ in 0..n - 3 {
        counts[rng.gen_range(0..3)] += 1;
    }
    let mut ring = Vec::with_capacity(n);
    for k in 0..3 {
        let (p, q) = (corners[k], corners[(k + 1) % 3]);
        ring.push((p.0.round() as i64, p.1.round() as i64));
        let (dx, dy) = (q.0 - p.0, q.1 - p.1);
        // inward normal of a counter-clockwise triangle
        let (nx, ny) = (-dy, dx);
        let depth = rng.gen_range(0.05..0.2);
        let mut ts: Vec<f64> = (0..counts[k]).map(|_| rng.gen_range(0.05..0.95)).collect();
        ts.sort_by(|a, b| a.total_cmp(b));
        for t in ts {
            let s = 4.0 * t * (1.0 - t) * depth;
            ring.push((
                (p.0 + t * dx + s * nx).round() as i64,
                (p.1 + t * dy + s * ny).round() as i64,
            ));
        }
    }
    Some(ring)
}

/// Pentagon with points `p_in` inside and `q_out` outside on which all five
/// natural guards agree: guards at `a` and `e` (vertices 0 and 4) contain
/// neither point, the other three contain both.
pub fn gen_counterexample_pentagon() -> (Polygon, Point, Point) {
    let p = Polygon::from_ints(&[(1, 10), (4, 9), (10, 2), (5, 8), (9, 9)]);
    (
        p,
        Point::new(ratio(79, 14), ratio(78, 11)),
        Point::new(ratio(-41, 7), ratio(453, 22)),
    )
}

/// Square-wave serpentine polygon on a grid of `4k` vertical and `4k`
/// horizontal unit-spaced lines, with one guard per side of every grid
/// line and a formula of at most four guards per point.
pub fn gen_zigzag(k: usize) -> Result<(Polygon, Placement)> {
    if k == 0 {
        return Err(Error::Precondition("zigzag needs k >= 1".into()));
    }
    if k > 64 {
        return Err(Error::Precondition(format!("k = {k} is too large")));
    }
    let cells = zigzag_cells(k);
    let ring =
        cell_boundary(&cells).ok_or_else(|| Error::Construction("zigzag boundary is not a single cycle".into()))?;
    let poly = to_polygon(&ring);
    poly.validate()
        .map_err(|v| Error::Construction(format!("zigzag polygon invalid: {v}")))?;

    let grid = Grid::new(4 * k as i64 - 1);
    let inside = grid.set(|c| cells.contains(&c));
    // cell sets of the natural guard at every vertex
    let regions: Vec<Vec<u64>> = ring
        .iter()
        .map(|&v| grid.set(|c| corner_covers(&cells, v, c)))
        .collect();

    let mut g = GuardSet::new();
    let mut role_regions = Vec::new();
    for a in 0..4 * k as i64 {
        for axis in ['x', 'y'] {
            for side in [1i64, -1] {
                let coord = |c: P| if axis == 'x' { c.0 } else { c.1 };
                let strip = grid.set(|c| cells.contains(&c) && coord(c) == if side > 0 { a } else { a - 1 });
                let half = grid.set(|c| if side > 0 { coord(c) >= a } else { coord(c) < a });
                let best = (0..ring.len())
                    .filter(|&i| coord(ring[i]) == a)
                    .map(|i| {
                        let score =
                            10 * count(&and(&regions[i], &strip)) as i64 - count(&minus(&regions[i], &half)) as i64;
                        (score, i)
                    })
                    .fold(None, |acc: Option<(i64, usize)>, x| match acc {
                        Some(b) if b.0 >= x.0 => Some(b),
                        _ => Some(x),
                    })
                    .ok_or_else(|| Error::Construction(format!("no vertex on grid line {axis}={a}")))?;
                let label = format!("{axis}{a}{}", if side > 0 { "p" } else { "m" });
                g.push(label, natural_guard(&poly, best.1)?)?;
                role_regions.push(regions[best.1].clone());
            }
        }
    }

    let labels: Vec<String> = g.labels().map(String::from).collect();
    let mut clauses: BTreeSet<Vec<usize>> = BTreeSet::new();
    for &c in &cells {
        let covering: Vec<usize> = (0..role_regions.len())
            .filter(|&r| grid.has(&role_regions[r], c))
            .collect();
        let clause = smallest_conjunction(&grid, &covering, &role_regions, &inside, 4)
            .ok_or_else(|| Error::Construction(format!("cell {c:?} needs more than four guards")))?;
        clauses.insert(clause);
    }
    let f = Formula::or(
        clauses
            .into_iter()
            .map(|cl| Formula::and_labels(&cl.iter().map(|&r| labels[r].as_str()).collect::<Vec<_>>()))
            .collect(),
    );
    let pl = Placement::new("zigzag", g, f, Some(4))?;
    Ok((poly, pl))
}

fn zigzag_cells(k: usize) -> BTreeSet<P> {
    let n = 4 * k as i64 - 1;
    let mut cells = BTreeSet::new();
    for m in 0..k as i64 {
        let (l, r) = (4 * m, 4 * m + 3);
        for j in 0..n {
            let a = l + j % 2;
            let b = r - (j + 1) % 2;
            cells.extend((a..b).map(|i| (i, j)));
        }
    }
    // connectors alternate between the top and bottom rows
    for m in 0..k as i64 - 1 {
        let j = if m % 2 == 0 { n - 1 } else { 0 };
        cells.extend((4 * m + 2..4 * m + 6).map(|i| (i, j)));
    }
    cells
}

/// Whether the closed interior angle at grid vertex `v` covers cell `c`.
fn corner_covers(cells: &BTreeSet<P>, v: P, c: P) -> bool {
    let (x, y) = v;
    // quadrants SW, SE, NW, NE
    let quads = [(x - 1, y - 1), (x, y - 1), (x - 1, y), (x, y)];
    let filled: Vec<bool> = quads.iter().map(|q| cells.contains(q)).collect();
    let convex = filled.iter().filter(|&&f| f).count() == 1;
    let q = if convex {
        filled.iter().position(|&f| f)
    } else {
        filled.iter().position(|&f| !f)
    }
    .expect("corner");
    let (dx, dy) = ([-1, 1, -1, 1][q], [-1, -1, 1, 1][q]);
    let inx = if dx > 0 { c.0 >= x } else { c.0 < x };
    let iny = if dy > 0 { c.1 >= y } else { c.1 < y };
    (inx && iny) == convex
}

/// Cells `-1..=n` on both axes as a bitset; the outer ring stands in for
/// the unbounded parts of the plane.
struct Grid {
    n: i64,
}

impl Grid {
    fn new(n: i64) -> Self {
        Grid { n }
    }

    fn width(&self) -> i64 {
        self.n + 2
    }

    fn index(&self, c: P) -> usize {
        ((c.0 + 1) * self.width() + c.1 + 1) as usize
    }

    fn set(&self, f: impl Fn(P) -> bool) -> Vec<u64> {
        let w = self.width();
        let mut s = vec![0u64; ((w * w) as usize).div_ceil(64)];
        for i in -1..=self.n {
            for j in -1..=self.n {
                if f((i, j)) {
                    let k = self.index((i, j));
                    s[k / 64] |= 1 << (k % 64);
                }
            }
        }
        s
    }

    fn has(&self, s: &[u64], c: P) -> bool {
        let k = self.index(c);
        s[k / 64] >> (k % 64) & 1 == 1
    }
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn minus(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & !y).collect()
}

fn count(a: &[u64]) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn smallest_conjunction(
    grid: &Grid,
    covering: &[usize],
    regions: &[Vec<u64>],
    inside: &[u64],
    max: usize,
) -> Option<Vec<usize>> {
    let full = grid.set(|_| true);
    fn rec(
        start: usize,
        left: usize,
        acc: &[u64],
        chosen: &mut Vec<usize>,
        covering: &[usize],
        regions: &[Vec<u64>],
        inside: &[u64],
    ) -> bool {
        if left == 0 {
            return subset(acc, inside);
        }
        for i in start..covering.len() {
            chosen.push(covering[i]);
            if rec(
                i + 1,
                left - 1,
                &and(acc, &regions[covering[i]]),
                chosen,
                covering,
                regions,
                inside,
            ) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    (1..=max).find_map(|r| {
        let mut chosen = Vec::new();
        rec(0, r, &full, &mut chosen, covering, regions, inside).then_some(chosen)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guards::GuardSet;
    use crate::verify::{exact_equivalence, separation_check, Equivalence};

    #[test]
    fn random_kinds_are_valid_and_reproducible() {
        for kind in [
            RandomKind::Convex,
            RandomKind::Simple,
            RandomKind::Orthogonal,
            RandomKind::PseudoTriangle,
        ] {
            for n in [6usize, 8, 12, 20] {
                for seed in 0..3 {
                    let p = gen_random(kind, n, seed).unwrap();
                    assert_eq!(p.n(), n, "{kind} {n}");
                    assert!(p.validate().is_ok());
                    assert_eq!(p, gen_random(kind, n, seed).unwrap());
                    match kind {
                        RandomKind::Convex => assert!(p.is_convex()),
                        RandomKind::Orthogonal => assert!(p.is_orthogonal()),
                        RandomKind::PseudoTriangle => assert!(is_pseudo_triangle(&p) && kernel(&p).is_some()),
                        RandomKind::Simple => {}
                    }
                }
            }
        }
    }

    #[test]
    fn holed_polygons_are_valid() {
        for seed in 0..10 {
            let p = gen_holed(12, 2, seed).unwrap();
            assert_eq!((p.h(), p.n()), (2, 18));
            assert_eq!(p, gen_holed(12, 2, seed).unwrap());
        }
        assert!(gen_holed(4, 3, 0).is_err());
    }

    #[test]
    fn infeasible_parameters() {
        assert!(gen_random(RandomKind::Orthogonal, 7, 0).is_err());
        assert!(gen_random(RandomKind::Convex, 2, 0).is_err());
        assert!(gen_random(RandomKind::PseudoTriangle, 5, 0).is_err());
    }

    #[test]
    fn counterexample_pentagon() {
        let (p, a, b) = gen_counterexample_pentagon();
        assert!(p.validate().is_ok());
        let mut g = GuardSet::new();
        for i in 0..5 {
            g.push(format!("{}", (b'a' + i as u8) as char), natural_guard(&p, i).unwrap())
                .unwrap();
        }
        assert_eq!(g.signature(&a), vec![false, true, true, true, false]);
        assert_eq!(g.signature(&a), g.signature(&b));
        assert!(separation_check(&p, &g).is_err());
    }

    #[test]
    fn zigzag_small() {
        let (p, pl) = gen_zigzag(1).unwrap();
        assert_eq!(p.n(), 12);
        assert_eq!(pl.guard_count(), 16);
        assert!(pl.max_clause().unwrap() <= 4);
        assert!(matches!(exact_equivalence(&p, &pl).unwrap(), Equivalence::Ok { .. }));
        assert_eq!(gen_zigzag(2).unwrap().0.n(), 52);
    }
}
