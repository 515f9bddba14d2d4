//! Exact verification by sampling every face of the line arrangement formed
//! by guard boundary lines and polygon edge lines.
//!
//! Vertical slab lines are placed strictly between consecutive x-coordinates
//! of arrangement vertices. Along one slab the lines are crossed in sorted
//! order, so each step flips exactly one side bit; guard predicates and
//! polygon membership are updated incrementally instead of being recomputed
//! from scratch at every sample.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::formula::{Compiled, Placement};
use crate::geom::{rat, sign, to_f64, DirectedLine, Point, Rational};
use crate::guards::{GuardSet, Wedge};
use crate::polygon::{Location, Polygon};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSample {
    pub point: Point,
    pub signature: Vec<bool>,
    pub inside: bool,
}

/// Interior and exterior points that no guard tells apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub p_in: Point,
    pub q_out: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Ok { faces_checked: usize },
    Counterexample(FaceSample),
}

/// Line `a x + b y = c`, scaled so the first non-zero of `a, b` is 1.
#[derive(Clone, Debug)]
struct Line {
    a: Rational,
    b: Rational,
    c: Rational,
    af: f64,
    bf: f64,
    cf: f64,
}

impl Line {
    fn vertical(&self) -> bool {
        self.b.is_zero()
    }

    fn y_at(&self, x: &Rational) -> Rational {
        (&self.c - &self.a * x) / &self.b
    }
}

/// Side test of a guard boundary: arrangement line index and the sign that
/// converts the canonical side into the directed side.
#[derive(Clone, Copy, Debug)]
struct Side {
    line: usize,
    flip: i8,
}

#[derive(Clone, Debug)]
struct GuardTest {
    s1: Side,
    s2: Option<Side>,
    reflex: bool,
}

impl GuardTest {
    fn eval(&self, sides: &[i8]) -> bool {
        let a = sides[self.s1.line] * self.s1.flip >= 0;
        match self.s2 {
            None => a,
            Some(s2) => {
                let b = sides[s2.line] * s2.flip <= 0;
                if self.reflex {
                    a || b
                } else {
                    a && b
                }
            }
        }
    }
}
/// Non-vertical polygon edge: its line and the open x-range, given as the
/// slab indices `lo..hi` that lie strictly inside it.
#[derive(Clone, Debug)]
struct EdgeSpan {
    line: usize,
    x0: Rational,
    x1: Rational,
    lo: usize,
    hi: usize,
}

/// The arrangement of all supporting lines of a polygon and a guard set.
#[derive(Clone, Debug)]
pub struct Arrangement {
    lines: Vec<Line>,
    guards: Vec<GuardTest>,
    /// Guards that read each line.
    readers: Vec<Vec<usize>>,
    edges: Vec<EdgeSpan>,
    slabs: Vec<Rational>,
}

/// Sweep callback: `(sides, signature, inside, sample)`.
type Visit<'a, T> = dyn FnMut(&[i8], &[bool], bool, &SampleRef) -> Option<T> + 'a;

/// First inside and first outside sample seen with one signature.
type InOut = (Option<Point>, Option<Point>);

/// One sample on one slab.
struct SampleRef<'a> {
    slab: usize,
    below: Option<(usize, &'a SlabOrder)>,
    above: Option<(usize, &'a SlabOrder)>,
}

/// Non-vertical lines of one slab in bottom-to-top order, with float
/// ordinates and lazily computed exact ones.
struct SlabOrder {
    x: Rational,
    order: Vec<usize>,
    exact: Vec<std::cell::OnceCell<Rational>>,
}

impl SlabOrder {
    fn y(&self, lines: &[Line], k: usize) -> &Rational {
        let i = self.order[k];
        self.exact[i].get_or_init(|| lines[i].y_at(&self.x))
    }
}

impl Arrangement {
    pub fn new(p: &Polygon, g: &GuardSet) -> Arrangement {
        let mut arr = Arrangement::empty();
        let mut index: HashMap<(Rational, Rational, Rational), usize> = HashMap::new();
        for w in g.wedges() {
            let ls = w.lines();
            let s1 = arr.side_of(&ls[0], &mut index);
            let s2 = ls.get(1).map(|l| arr.side_of(l, &mut index));
            arr.guards.push(GuardTest {
                s1,
                s2,
                reflex: w.reflex,
            });
        }
        for (a, b) in p.edges() {
            let l = DirectedLine::through(&a, &b).expect("valid polygon edge");
            let s = arr.side_of(&l, &mut index);
            if a.x != b.x {
                let (x0, x1) = if a.x < b.x { (a.x, b.x) } else { (b.x, a.x) };
                arr.edges.push(EdgeSpan {
                    line: s.line,
                    x0,
                    x1,
                    lo: 0,
                    hi: 0,
                });
            }
        }
        arr.readers = vec![Vec::new(); arr.lines.len()];
        for (k, t) in arr.guards.iter().enumerate() {
            arr.readers[t.s1.line].push(k);
            if let Some(s2) = t.s2 {
                if s2.line != t.s1.line {
                    arr.readers[s2.line].push(k);
                }
            }
        }
        let extra: Vec<Rational> = p.vertices().into_iter().map(|v| v.x).collect();
        arr.build_slabs(extra);
        arr
    }

    fn empty() -> Arrangement {
        Arrangement {
            lines: Vec::new(),
            guards: Vec::new(),
            readers: Vec::new(),
            edges: Vec::new(),
            slabs: Vec::new(),
        }
    }

    /// Arrangement of bare lines, no polygon and no guards.
    pub fn from_lines(lines: &[DirectedLine]) -> Arrangement {
        let mut arr = Arrangement::empty();
        let mut index = HashMap::new();
        for l in lines {
            arr.side_of(l, &mut index);
        }
        arr.readers = vec![Vec::new(); arr.lines.len()];
        arr.build_slabs(Vec::new());
        arr
    }

    fn side_of(&mut self, l: &DirectedLine, index: &mut HashMap<(Rational, Rational, Rational), usize>) -> Side {
        let key = l.key();
        // key() divides by the first non-zero of (a, b); undo that sign to
        // recover the left side of `l`.
        let raw_first = if !l.direction.y.is_zero() {
            -&l.direction.y
        } else {
            l.direction.x.clone()
        };
        let flip = if raw_first.is_negative() { -1 } else { 1 };
        let next = self.lines.len();
        let line = *index.entry(key.clone()).or_insert(next);
        if line == next {
            let (a, b, c) = key;
            let (af, bf, cf) = (to_f64(&a), to_f64(&b), to_f64(&c));
            self.lines.push(Line { a, b, c, af, bf, cf });
        }
        Side { line, flip }
    }

    fn build_slabs(&mut self, mut xs: Vec<Rational>) {
        let n = self.lines.len();
        for i in 0..n {
            let li = &self.lines[i];
            if li.vertical() {
                xs.push(li.c.clone());
            }
            for j in (i + 1)..n {
                let lj = &self.lines[j];
                let det = &li.a * &lj.b - &lj.a * &li.b;
                if !det.is_zero() {
                    xs.push((&li.c * &lj.b - &lj.c * &li.b) / det);
                }
            }
        }
        xs.sort();
        xs.dedup();
        let one = rat(1);
        let mut slabs = Vec::with_capacity(xs.len() + 1);
        match (xs.first(), xs.last()) {
            (Some(lo), Some(hi)) => {
                slabs.push(lo - &one);
                for w in xs.windows(2) {
                    slabs.push((&w[0] + &w[1]) / rat(2));
                }
                slabs.push(hi + &one);
            }
            _ => slabs.push(Rational::zero()),
        }
        for e in &mut self.edges {
            e.lo = slabs.partition_point(|s| s <= &e.x0);
            e.hi = slabs.partition_point(|s| s < &e.x1);
        }
        self.slabs = slabs;
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn slab_count(&self) -> usize {
        self.slabs.len()
    }

    /// Bottom-to-top order of the non-vertical lines on a slab. Floats
    /// decide when two ordinates are clearly apart, exact arithmetic
    /// otherwise, so the order is always the true one.
    fn slab_order(&self, slab: usize) -> SlabOrder {
        let x = self.slabs[slab].clone();
        let xf = to_f64(&x);
        let mut approx: Vec<(f64, f64)> = vec![(0.0, f64::INFINITY); self.lines.len()];
        let mut order = Vec::new();
        for (i, l) in self.lines.iter().enumerate() {
            if !l.vertical() {
                let y = (l.cf - l.af * xf) / l.bf;
                let err = 1e-9 * (l.cf.abs() + (l.af * xf).abs() + 1.0) / l.bf.abs();
                approx[i] = if y.is_finite() && err.is_finite() {
                    (y, err)
                } else {
                    (0.0, f64::INFINITY)
                };
                order.push(i);
            }
        }
        let exact: Vec<std::cell::OnceCell<Rational>> =
            (0..self.lines.len()).map(|_| std::cell::OnceCell::new()).collect();
        let y = |i: usize| exact[i].get_or_init(|| self.lines[i].y_at(&x)).clone();
        order.sort_by(|&i, &j| {
            let ((yi, ei), (yj, ej)) = (approx[i], approx[j]);
            if (yi - yj).abs() > ei + ej {
                yi.partial_cmp(&yj).unwrap_or(Ordering::Equal)
            } else {
                y(i).cmp(&y(j))
            }
        });
        SlabOrder { x, order, exact }
    }

    /// Sweeps one slab bottom to top, calling `visit(sides, signature,
    /// inside, sample)` for every sample; stops at the first `Some`.
    fn sweep<T>(&self, slab: usize, visit: &mut Visit<'_, T>) -> Option<T> {
        let so = self.slab_order(slab);
        let x = &so.x;
        let mut sides: Vec<i8> = vec![0; self.lines.len()];
        for (i, l) in self.lines.iter().enumerate() {
            sides[i] = if l.vertical() {
                sign(&(x - &l.c))
            } else {
                // far below the line the canonical value has the sign of -b
                -sign(&l.b)
            };
        }
        let mut sig: Vec<bool> = self.guards.iter().map(|g| g.eval(&sides)).collect();
        // parity of edges active on this slab, per line
        let mut odd = vec![false; self.lines.len()];
        for e in &self.edges {
            if e.lo <= slab && slab < e.hi {
                odd[e.line] = !odd[e.line];
            }
        }
        let mut inside = false;
        let n = so.order.len();
        let s = SampleRef {
            slab,
            below: None,
            above: (n > 0).then_some((0, &so)),
        };
        if let Some(t) = visit(&sides, &sig, inside, &s) {
            return Some(t);
        }
        for k in 0..n {
            let li = so.order[k];
            sides[li] = -sides[li];
            for &g in &self.readers[li] {
                sig[g] = self.guards[g].eval(&sides);
            }
            if odd[li] {
                inside = !inside;
            }
            let s = SampleRef {
                slab,
                below: Some((k, &so)),
                above: (k + 1 < n).then_some((k + 1, &so)),
            };
            if let Some(t) = visit(&sides, &sig, inside, &s) {
                return Some(t);
            }
        }
        None
    }

    fn point(&self, s: &SampleRef) -> Point {
        let one = rat(1);
        let y = match (s.below, s.above) {
            (None, None) => Rational::zero(),
            (None, Some((k, so))) => so.y(&self.lines, k) - &one,
            (Some((k, so)), None) => so.y(&self.lines, k) + &one,
            (Some((k, so)), Some((m, _))) => (so.y(&self.lines, k) + so.y(&self.lines, m)) / rat(2),
        };
        Point::new(self.slabs[s.slab].clone(), y)
    }

    /// Every sample with its guard signature and membership.
    pub fn samples(&self) -> Vec<FaceSample> {
        let mut out = Vec::new();
        for slab in 0..self.slabs.len() {
            self.sweep::<()>(slab, &mut |_, sig, inside, s| {
                out.push(FaceSample {
                    point: self.point(s),
                    signature: sig.to_vec(),
                    inside,
                });
                None
            });
        }
        out
    }

    /// Distinct sign vectors over all lines, i.e. the faces met.
    pub fn distinct_line_signatures(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        for slab in 0..self.slabs.len() {
            self.sweep::<()>(slab, &mut |sides, _, _, _| {
                seen.insert(sides.to_vec());
                None
            });
        }
        seen.len()
    }

    /// Number of samples the sweep visits.
    pub fn sample_count(&self) -> usize {
        self.slabs.len() * (self.lines.iter().filter(|l| !l.vertical()).count() + 1)
    }

    /// First sample (by slab order) where the compiled formula disagrees
    /// with membership.
    fn mismatch(&self, f: &Compiled) -> Option<FaceSample> {
        (0..self.slabs.len()).into_par_iter().find_map_first(|slab| {
            self.sweep(slab, &mut |_, sig, inside, s| {
                if f.eval(sig) != inside {
                    Some(FaceSample {
                        point: self.point(s),
                        signature: sig.to_vec(),
                        inside,
                    })
                } else {
                    None
                }
            })
        })
    }

    /// A pair of samples with equal guard signature and different
    /// membership.
    fn collision(&self) -> Option<Witness> {
        let per_slab: Vec<HashMap<Vec<bool>, InOut>> = (0..self.slabs.len())
            .into_par_iter()
            .map(|slab| {
                let mut m: HashMap<Vec<bool>, (Option<Point>, Option<Point>)> = HashMap::new();
                self.sweep::<()>(slab, &mut |_, sig, inside, s| {
                    let e = m.entry(sig.to_vec()).or_default();
                    let slot = if inside { &mut e.0 } else { &mut e.1 };
                    if slot.is_none() {
                        *slot = Some(self.point(s));
                    }
                    None
                });
                m
            })
            .collect();
        let mut all: HashMap<Vec<bool>, (Option<Point>, Option<Point>)> = HashMap::new();
        for m in per_slab {
            for (k, (i, o)) in m {
                let e = all.entry(k).or_default();
                if e.0.is_none() {
                    e.0 = i;
                }
                if e.1.is_none() {
                    e.1 = o;
                }
            }
        }
        let mut hits: Vec<Witness> = all
            .into_values()
            .filter_map(|(i, o)| Some(Witness { p_in: i?, q_out: o? }))
            .collect();
        hits.sort_by(|a, b| a.p_in.cmp(&b.p_in).then_with(|| a.q_out.cmp(&b.q_out)));
        hits.into_iter().next()
    }
}

/// Number of distinct lines the verifier would sweep, without building the
/// arrangement.
pub fn arrangement_line_count(p: &Polygon, g: &GuardSet) -> usize {
    let mut keys = std::collections::HashSet::new();
    for l in g.wedges().flat_map(Wedge::lines) {
        keys.insert(l.key());
    }
    for (a, b) in p.edges() {
        keys.insert(DirectedLine::through(&a, &b).expect("valid polygon edge").key());
    }
    keys.len()
}

pub fn face_samples(p: &Polygon, g: &GuardSet) -> Vec<FaceSample> {
    Arrangement::new(p, g).samples()
}

pub fn exact_equivalence(p: &Polygon, pl: &Placement) -> crate::Result<Equivalence> {
    let f = Compiled::new(&pl.formula, &pl.guards)?;
    let arr = Arrangement::new(p, &pl.guards);
    Ok(match arr.mismatch(&f) {
        Some(s) => Equivalence::Counterexample(s),
        None => Equivalence::Ok {
            faces_checked: arr.sample_count(),
        },
    })
}

/// `Ok(())` when inside and outside faces never share a guard signature.
#[allow(clippy::result_large_err)]
pub fn separation_check(p: &Polygon, g: &GuardSet) -> std::result::Result<(), Witness> {
    match Arrangement::new(p, g).collision() {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// Uncovered-edge construction first, then the exhaustive signature scan.
pub fn witness_finder(p: &Polygon, g: &GuardSet) -> Option<Witness> {
    edge_witness(p, g).or_else(|| Arrangement::new(p, g).collision())
}

fn edge_witness(p: &Polygon, g: &GuardSet) -> Option<Witness> {
    let guard_lines: Vec<DirectedLine> = g.wedges().flat_map(Wedge::lines).collect();
    let edge_lines: Vec<DirectedLine> = p
        .edges()
        .iter()
        .map(|(a, b)| DirectedLine::through(a, b).expect("valid polygon edge"))
        .collect();
    for (a, b) in p.edges() {
        let e = DirectedLine::through(&a, &b).expect("valid polygon edge");
        if guard_lines.iter().any(|l| l.collinear_with(&e)) {
            continue;
        }
        let others: Vec<&DirectedLine> = guard_lines
            .iter()
            .chain(edge_lines.iter())
            .filter(|l| !l.collinear_with(&e))
            .collect();
        // a point in the relative interior of the edge that avoids every
        // other line; finitely many parameters are bad
        let m = (2..).find_map(|den: i64| {
            (1..den).find_map(|num| {
                let t = Rational::new(num.into(), den.into());
                let q = e.point_at(&t);
                others.iter().all(|l| !l.contains(&q)).then_some(q)
            })
        })?;
        let normal = Point::new(-&e.direction.y, e.direction.x.clone());
        let mut delta = rat(1);
        loop {
            let step = normal.scale(&delta);
            let (pi, qo) = (&m + &step, &m - &step);
            let stable = others
                .iter()
                .all(|l| l.side(&pi) == l.side(&m) && l.side(&qo) == l.side(&m));
            if stable {
                if p.locate(&pi) == Location::Inside && p.locate(&qo) == Location::Outside {
                    return Some(Witness { p_in: pi, q_out: qo });
                }
                break;
            }
            delta /= rat(2);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub guards: usize,
    /// n <= g(2g - 1): necessary for any valid placement.
    pub necessary: bool,
    pub strategy_bound: Option<usize>,
    pub within_strategy_bound: bool,
}

pub fn count_bound_check(p: &Polygon, pl: &Placement) -> CountReport {
    let n = p.n();
    let g = pl.guard_count();
    let bound = crate::placement::strategy_bound(&pl.strategy, p);
    CountReport {
        n,
        guards: g,
        necessary: n <= g * (2 * g).saturating_sub(1),
        strategy_bound: bound,
        within_strategy_bound: bound.is_none_or(|b| g <= b),
    }
}

/// Analytic face count of `l` lines in general position.
pub fn simple_arrangement_faces(l: usize) -> usize {
    1 + l + l * l.saturating_sub(1) / 2
}

/// Exact distance-free check that `q` lies on none of the lines.
pub fn off_all_lines(q: &Point, lines: &[DirectedLine]) -> bool {
    lines.iter().all(|l| !l.contains(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::guards::natural_guard;

    fn square() -> Polygon {
        Polygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    fn corners(p: &Polygon, idx: &[usize]) -> GuardSet {
        let mut g = GuardSet::new();
        for &i in idx {
            g.push(format!("g{i}"), natural_guard(p, i).unwrap()).unwrap();
        }
        g
    }

    #[test]
    fn square_opposite_corners() {
        let p = square();
        let g = corners(&p, &[0, 2]);
        let samples = face_samples(&p, &g);
        assert!(samples.iter().any(|s| s.inside));
        for s in &samples {
            assert_eq!(s.inside, s.signature == vec![true, true]);
            assert_eq!(p.locate(&s.point) == Location::Inside, s.inside);
            assert_eq!(s.signature, g.signature(&s.point));
        }
        let pl = Placement::new("t", g.clone(), Formula::parse("g0 & g2").unwrap(), Some(2)).unwrap();
        assert!(matches!(exact_equivalence(&p, &pl).unwrap(), Equivalence::Ok { .. }));
        assert!(separation_check(&p, &g).is_ok());
        assert!(witness_finder(&p, &g).is_none());
    }

    #[test]
    fn single_corner_overcovers() {
        let p = square();
        let g = corners(&p, &[0]);
        let pl = Placement::new("t", g, Formula::leaf("g0"), Some(1)).unwrap();
        match exact_equivalence(&p, &pl).unwrap() {
            Equivalence::Counterexample(s) => {
                assert!(!s.inside);
                assert!(pl.evaluate(&s.point).unwrap());
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn empty_guards_split_by_membership() {
        let p = square();
        let samples = face_samples(&p, &GuardSet::new());
        assert!(samples.iter().any(|s| s.inside) && samples.iter().any(|s| !s.inside));
        let w = witness_finder(&p, &GuardSet::new()).unwrap();
        assert_eq!(p.locate(&w.p_in), Location::Inside);
        assert_eq!(p.locate(&w.q_out), Location::Outside);
    }

    #[test]
    fn one_line_two_faces() {
        let l = DirectedLine::through(&Point::int(0, 0), &Point::int(1, 2)).unwrap();
        let arr = Arrangement::from_lines(&[l]);
        assert_eq!(arr.distinct_line_signatures(), 2);
    }

    #[test]
    fn three_lines_seven_faces() {
        let ls = [
            DirectedLine::through(&Point::int(0, 0), &Point::int(1, 0)).unwrap(),
            DirectedLine::through(&Point::int(0, 0), &Point::int(0, 1)).unwrap(),
            DirectedLine::through(&Point::int(3, 0), &Point::int(0, 3)).unwrap(),
        ];
        assert_eq!(
            Arrangement::from_lines(&ls).distinct_line_signatures(),
            simple_arrangement_faces(3)
        );
    }

    #[test]
    fn incremental_sweep_matches_direct_evaluation() {
        let p = Polygon::from_ints(&[(0, 0), (4, 0), (5, 3), (2, 2), (3, 5), (-1, 4)]);
        let mut g = corners(&p, &[0, 1, 2, 3, 4, 5]);
        g.push(
            "h",
            crate::guards::Wedge::halfplane(&Point::int(3, 0), &Point::int(0, 2)).unwrap(),
        )
        .unwrap();
        for s in face_samples(&p, &g) {
            assert_eq!(s.signature, g.signature(&s.point));
            assert_eq!(s.inside, p.locate(&s.point) == Location::Inside);
        }
    }
}
