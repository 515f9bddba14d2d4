//! Small pieces: tetragons (2 guards), pentagons (3) and star hexagons (3 or 4).

use super::search::search_placement;
use crate::error::{Error, Result};
use crate::formula::{Formula, Placement};
use crate::geom::{line_intersection, orient, signed_area2, DirectedLine, LineIntersection, Point};
use crate::guards::{corner_guard, GuardSet, Wedge};
use crate::polygon::{Location, Polygon};
use crate::triangulation::is_diagonal;
use crate::verify::{exact_equivalence, Equivalence};

fn simple_ring(q: &Polygon, k: usize, what: &str) -> Result<()> {
    if !q.holes.is_empty() || q.outer.len() != k {
        return Err(Error::Precondition(format!(
            "expected a simple {what} with {k} vertices"
        )));
    }
    q.validate()
        .map_err(|v| Error::Precondition(format!("not a simple {what}: {v}")))
}

fn corner(ring: &[Point], i: usize) -> Result<Wedge> {
    let n = ring.len();
    corner_guard(&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n])
}

/// Positions of the two natural guards that cut out a tetragon: the reflex
/// vertex and its opposite, or corners 0 and 2 when convex.
fn tetragon_positions(ring: &[Point]) -> [usize; 2] {
    match (0..4).find(|&i| orient(&ring[(i + 3) % 4], &ring[i], &ring[(i + 1) % 4]) < 0) {
        Some(r) => [r.min((r + 2) % 4), r.max((r + 2) % 4)],
        None => [0, 2],
    }
}

pub fn place_tetragon(q: &Polygon) -> Result<Placement> {
    simple_ring(q, 4, "tetragon")?;
    let mut g = GuardSet::new();
    let mut labels = Vec::new();
    for i in tetragon_positions(&q.outer) {
        let l = format!("v{i}");
        g.push(l.clone(), corner(&q.outer, i)?)?;
        labels.push(l);
    }
    Placement::new("tetragon", g, Formula::and_labels(&labels), Some(2))
}

/// A containing tetragon of a pentagon and the third guard.
struct PentagonPlan {
    t: Vec<Point>,
    third: (String, Wedge),
}

/// Candidate plans, most natural first.
fn pentagon_plans(v: &[Point]) -> Result<Vec<PentagonPlan>> {
    let n = 5;
    let reflex: Vec<usize> = (0..n)
        .filter(|&i| orient(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]) < 0)
        .collect();
    let mut plans = Vec::new();
    if reflex.is_empty() {
        // drop edge j; the lines of edges j-1 and j+1 meet beyond it
        let mut best: Option<(crate::geom::Rational, usize, Point)> = None;
        for j in 0..n {
            let l0 = DirectedLine::through(&v[(j + n - 1) % n], &v[j])?;
            let l1 = DirectedLine::through(&v[(j + 1) % n], &v[(j + 2) % n])?;
            if let LineIntersection::Point(f) = line_intersection(&l0, &l1) {
                if orient(&v[j], &v[(j + 1) % n], &f) < 0 {
                    let t = [
                        v[(j + 2) % n].clone(),
                        v[(j + 3) % n].clone(),
                        v[(j + 4) % n].clone(),
                        f.clone(),
                    ];
                    let area = signed_area2(&t);
                    if best.as_ref().is_none_or(|(a, _, _)| &area < a) {
                        best = Some((area, j, f));
                    }
                }
            }
        }
        if let Some((_, j, f)) = best {
            let t = vec![
                v[(j + 2) % n].clone(),
                v[(j + 3) % n].clone(),
                v[(j + 4) % n].clone(),
                f,
            ];
            plans.push(PentagonPlan {
                t,
                third: (format!("v{j}"), corner(v, j)?),
            });
        }
        return Ok(plans);
    }
    // drop one reflex vertex lying inside the tetragon of the other four
    for &d in &reflex {
        let t: Vec<Point> = (1..5).map(|k| v[(d + k) % n].clone()).collect();
        let tp = Polygon::simple(t.clone());
        if tp.validate().is_ok() && tp.locate(&v[d]) == Location::Inside {
            plans.push(PentagonPlan {
                t,
                third: (format!("v{d}"), corner(v, d)?),
            });
        }
    }
    Ok(plans)
}

/// Natural and edge guards plus every wedge at a vertex spanned by two
/// other vertices.
fn pentagon_pool(v: &[Point]) -> Result<GuardSet> {
    let mut g = GuardSet::new();
    for i in 0..5 {
        g.push(format!("v{i}"), corner(v, i)?)?;
        g.push(format!("e{i}"), Wedge::halfplane(&v[i], &v[(i + 1) % 5])?)?;
    }
    for i in 0..5 {
        for j in 0..5 {
            for k in (j + 1)..5 {
                if i == j || i == k || orient(&v[i], &v[j], &v[k]) == 0 {
                    continue;
                }
                let w = if orient(&v[i], &v[j], &v[k]) > 0 {
                    Wedge::spanning(&v[i], &v[j], &v[k])?
                } else {
                    Wedge::spanning(&v[i], &v[k], &v[j])?
                };
                g.push(format!("w{i}_{j}{k}"), w)?;
            }
        }
    }
    Ok(g)
}

pub fn place_pentagon(q: &Polygon) -> Result<Placement> {
    simple_ring(q, 5, "pentagon")?;
    for plan in pentagon_plans(&q.outer)? {
        let mut g = GuardSet::new();
        let mut labels = Vec::new();
        for i in tetragon_positions(&plan.t) {
            let l = format!("t{i}");
            g.push(l.clone(), corner(&plan.t, i)?)?;
            labels.push(l);
        }
        labels.push(plan.third.0.clone());
        g.push(plan.third.0, plan.third.1)?;
        let pl = Placement::new("pentagon", g, Formula::and_labels(&labels), Some(3))?;
        if matches!(exact_equivalence(q, &pl)?, Equivalence::Ok { .. }) {
            return Ok(pl);
        }
    }
    // with two adjacent reflex vertices the natural wedge at the dropped
    // one reaches past its reflex neighbour back into the pentagon
    let pool = pentagon_pool(&q.outer)?;
    for k in 3..=4 {
        if let Some(pl) = search_placement(q, &pool, k, 3, "pentagon")? {
            return Ok(pl);
        }
    }
    Err(Error::Construction("no exact pentagon placement".into()))
}

/// First long diagonal `(i, i + 3)` that lies inside the hexagon.
pub fn hexagon_long_diagonal(ring: &[Point]) -> Option<usize> {
    (0..3).find(|&i| is_diagonal(ring, i, i + 3))
}

/// Which vertex region of triangle `bdf` (counter-clockwise) holds `p`:
/// the region beyond both sides through that vertex.
fn vertex_region(tri: [&Point; 3], p: &Point) -> Option<usize> {
    (0..3).find(|&k| {
        let (prev, at, next) = (tri[(k + 2) % 3], tri[k], tri[(k + 1) % 3]);
        orient(prev, at, p) < 0 && orient(at, next, p) < 0
    })
}

struct HexCandidate {
    guards: Vec<(String, Wedge)>,
    formula: Formula,
}

pub fn place_hexagon_star(q: &Polygon) -> Result<Placement> {
    simple_ring(q, 6, "hexagon")?;
    let v = &q.outer;
    if let Some(i) = hexagon_long_diagonal(v) {
        return Err(Error::Precondition(format!(
            "hexagon splits into two tetragons along diagonal {i}-{}; place them separately",
            i + 3
        )));
    }
    // centre triangle on every other vertex
    let o = (0..2)
        .find(|&o| (0..3).all(|k| is_diagonal(v, o + 2 * k, (o + 2 * k + 2) % 6)))
        .ok_or_else(|| Error::Construction("hexagon has no central triangle".into()))?;
    let at = |k: usize| v[(o + k) % 6].clone();
    let name = |k: usize| format!("v{}", (o + k) % 6);
    // ring positions relative to o: B=0 C=1 D=2 E=3 F=4 A=5
    let centre = [at(0), at(2), at(4)];
    let regions: Vec<Option<usize>> = [5, 1, 3]
        .iter()
        .map(|&k| vertex_region([&centre[0], &centre[1], &centre[2]], &at(k)))
        .collect();

    let mut cands: Vec<HexCandidate> = Vec::new();
    let case1 = HexCandidate {
        guards: [0, 2, 4]
            .iter()
            .map(|&k| Ok((name(k), corner(v, (o + k) % 6)?)))
            .collect::<Result<_>>()?,
        formula: Formula::and_labels(&[name(0), name(2), name(4)]),
    };
    let distinct = regions.iter().all(Option::is_some)
        && regions[0] != regions[1]
        && regions[1] != regions[2]
        && regions[0] != regions[2];
    // case 2: two ears share the region of the centre vertex between them;
    // rotate so that vertex is B, then try both mirror images
    for r in [0usize, 2, 4] {
        let p = |k: usize| (r + k) % 6;
        let (a, c, d, e, f) = (p(5), p(1), p(2), p(3), p(4));
        let (pd, pe, pf) = (at(d), at(e), at(f));
        let ga = (name(a), corner(v, (o + a) % 6)?);
        let gc = (name(c), corner(v, (o + c) % 6)?);
        // edge guard on EF and wedge at D over triangle DEF
        let ef = (format!("e{}", (o + e) % 6), Wedge::halfplane(&pe, &pf)?);
        let dw = (format!("w{}", (o + d) % 6), Wedge::spanning(&pd, &pe, &pf)?);
        // mirror: edge guard on DE and wedge at F
        let de = (format!("e{}", (o + d) % 6), Wedge::halfplane(&pd, &pe)?);
        let fw = (format!("w{}", (o + f) % 6), Wedge::spanning(&pf, &pd, &pe)?);
        for (edge, wedge) in [(ef, dw), (de, fw)] {
            let formula = Formula::or(vec![
                Formula::and_labels(&[ga.0.clone(), gc.0.clone(), edge.0.clone()]),
                Formula::and_labels(&[edge.0.clone(), wedge.0.clone()]),
            ]);
            cands.push(HexCandidate {
                guards: vec![ga.clone(), gc.clone(), edge, wedge],
                formula,
            });
        }
    }
    if distinct {
        cands.insert(0, case1);
    } else {
        cands.push(case1);
    }
    for c in cands {
        let g = GuardSet::from_vec(c.guards)?;
        let pl = Placement::new("hexagon", g, c.formula, Some(3))?;
        if matches!(exact_equivalence(q, &pl)?, Equivalence::Ok { .. }) {
            return Ok(pl);
        }
    }
    // the ray through an ear can cut back into the centre triangle; search
    // natural, edge and triangle-corner guards for four that still work
    let tris: Vec<[usize; 3]> = std::iter::once([o, o + 2, o + 4])
        .chain([1, 3, 5].iter().map(|&k| [o + k - 1, o + k, o + k + 1]))
        .map(|t| t.map(|i| i % 6))
        .collect();
    let pool = hexagon_pool(v, &tris)?;
    if let Some(pl) = search_placement(q, &pool, 4, 3, "hexagon")? {
        return Ok(pl);
    }
    // last resort: the four triangles, two guards each
    let mut g = GuardSet::new();
    let mut fs = Vec::new();
    for (k, t) in tris.iter().enumerate() {
        let (x, y, z) = (&v[t[0]], &v[t[1]], &v[t[2]]);
        let (l1, l2) = (format!("t{k}a"), format!("t{k}b"));
        g.push(l1.clone(), Wedge::spanning(x, y, z)?)?;
        g.push(l2.clone(), Wedge::spanning(y, z, x)?)?;
        fs.push(Formula::and_labels(&[l1, l2]));
    }
    let pl = Placement::new("hexagon", g, Formula::or(fs), Some(2))?;
    match exact_equivalence(q, &pl)? {
        Equivalence::Ok { .. } => Ok(pl),
        Equivalence::Counterexample(_) => Err(Error::Construction("no exact star-hexagon placement".into())),
    }
}

fn hexagon_pool(v: &[Point], tris: &[[usize; 3]]) -> Result<GuardSet> {
    let mut g = GuardSet::new();
    for i in 0..6 {
        g.push(format!("v{i}"), corner(v, i)?)?;
    }
    for i in 0..6 {
        g.push(format!("e{i}"), Wedge::halfplane(&v[i], &v[(i + 1) % 6])?)?;
    }
    for (k, t) in tris.iter().enumerate().skip(1).chain(tris.iter().enumerate().take(1)) {
        for r in 0..3 {
            let (x, y, z) = (&v[t[r]], &v[t[(r + 1) % 3]], &v[t[(r + 2) % 3]]);
            let w = if orient(x, y, z) > 0 {
                Wedge::spanning(x, y, z)?
            } else {
                Wedge::spanning(x, z, y)?
            };
            g.push(format!("w{k}_{}", t[r]), w)?;
        }
    }
    Ok(g)
}

/// Two tetragons joined by OR, for hexagons with an internal long diagonal.
pub fn place_hexagon_split(q: &Polygon, i: usize) -> Result<Placement> {
    let v = &q.outer;
    let t1 = Polygon::simple((0..4).map(|k| v[(i + k) % 6].clone()).collect());
    let t2 = Polygon::simple((3..7).map(|k| v[(i + k) % 6].clone()).collect());
    let (p1, p2) = (place_tetragon(&t1)?, place_tetragon(&t2)?);
    let mut g = GuardSet::new();
    g.extend_prefixed(&p1.guards, "a_")?;
    g.extend_prefixed(&p2.guards, "b_")?;
    let f = Formula::or(vec![
        p1.formula.relabel(&|l| format!("a_{l}")),
        p2.formula.relabel(&|l| format!("b_{l}")),
    ]);
    Placement::new("hexagon", g, f, Some(2))
}
