//! Exact rational points, lines and the orientation/intersection predicates
//! everything else is built on.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact division; a zero divisor is an error rather than a panic.
pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Parses `"a/b"`, `"a"` or a plain decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    BigInt::from_str(t).map(Rational::from_integer).map_err(|_| bad())
}

/// Canonical text form: `"a"` for integers, `"a/b"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn dot(&self, other: &Point) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(&self, other: &Point) -> Rational {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = ratio(1, 2);
        Point::new((&self.x + &other.x) * &half, (&self.y + &other.y) * &half)
    }

    /// Lexicographic (x, then y) comparison.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_rational(&self.x), format_rational(&self.y))
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl Mul<&Rational> for &Point {
    type Output = Point;
    fn mul(self, s: &Rational) -> Point {
        self.scale(s)
    }
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Orientation of the triple: +1 for a left turn (counter-clockwise),
/// -1 for a right turn, 0 when collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    sign(&(b - a).cross(&(c - a)))
}

/// A line through `origin` with a non-zero `direction`. The left side of the
/// direction is the "inner" side wherever a halfplane is meant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedLine {
    pub origin: Point,
    pub direction: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineIntersection {
    Point(Point),
    Parallel,
    Coincident,
}

impl DirectedLine {
    pub fn new(origin: Point, direction: Point) -> Result<Self> {
        if direction.is_zero() {
            return Err(Error::Degenerate("zero line direction".into()));
        }
        Ok(DirectedLine { origin, direction })
    }

    pub fn through(a: &Point, b: &Point) -> Result<Self> {
        DirectedLine::new(a.clone(), b - a)
    }

    /// Which side of the line `p` lies on: +1 left, -1 right, 0 on it.
    pub fn side(&self, p: &Point) -> i8 {
        sign(&self.direction.cross(&(p - &self.origin)))
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.side(p) == 0
    }

    /// True when both lines describe the same point set.
    pub fn collinear_with(&self, other: &DirectedLine) -> bool {
        self.direction.cross(&other.direction).is_zero() && self.contains(&other.origin)
    }

    /// Canonical key for the underlying undirected line: `(a, b, c)` with
    /// `a x + b y = c`, scaled so the first non-zero of `a, b` is 1.
    pub fn key(&self) -> (Rational, Rational, Rational) {
        let a = -&self.direction.y;
        let b = self.direction.x.clone();
        let c = &a * &self.origin.x + &b * &self.origin.y;
        let s = if !a.is_zero() { a.clone() } else { b.clone() };
        (a / &s, b / &s, c / &s)
    }

    pub fn point_at(&self, t: &Rational) -> Point {
        &self.origin + &self.direction.scale(t)
    }
}

pub fn line_intersection(l1: &DirectedLine, l2: &DirectedLine) -> LineIntersection {
    let den = l1.direction.cross(&l2.direction);
    if den.is_zero() {
        return if l1.contains(&l2.origin) {
            LineIntersection::Coincident
        } else {
            LineIntersection::Parallel
        };
    }
    let t = (&l2.origin - &l1.origin).cross(&l2.direction) / den;
    LineIntersection::Point(l1.point_at(&t))
}

/// Is `p` on the closed segment `a`-`b`?
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == 0
        && (&a.x).min(&b.x) <= &p.x
        && &p.x <= (&a.x).max(&b.x)
        && (&a.y).min(&b.y) <= &p.y
        && &p.y <= (&a.y).max(&b.y)
}

/// Is `p` strictly inside the segment `a`-`b` (not at an endpoint)?
pub fn in_segment_interior(a: &Point, b: &Point, p: &Point) -> bool {
    on_segment(a, b, p) && p != a && p != b
}

/// True when the segments cross at interior points, or an endpoint of one
/// lies in the interior of the other, or they overlap collinearly in more
/// than a point. Sharing an endpoint alone is not a proper intersection.
pub fn segment_properly_intersects(s1: (&Point, &Point), s2: (&Point, &Point)) -> Result<bool> {
    let (a, b) = s1;
    let (c, d) = s2;
    if a == b || c == d {
        return Err(Error::Degenerate("zero-length segment".into()));
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return Ok(true);
    }
    if o1 == 0 && o2 == 0 {
        // Collinear: overlap of positive length, or one contains the other's
        // endpoint in its interior.
        return Ok(in_segment_interior(a, b, c)
            || in_segment_interior(a, b, d)
            || in_segment_interior(c, d, a)
            || in_segment_interior(c, d, b)
            || (a == c && b == d)
            || (a == d && b == c));
    }
    Ok(in_segment_interior(a, b, c)
        || in_segment_interior(a, b, d)
        || in_segment_interior(c, d, a)
        || in_segment_interior(c, d, b))
}

/// Closed segments share at least one point.
pub fn segments_touch(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Twice the signed area of a ring (positive when counter-clockwise).
pub fn signed_area2(ring: &[Point]) -> Rational {
    let n = ring.len();
    let mut s = Rational::zero();
    for i in 0..n {
        s += ring[i].cross(&ring[(i + 1) % n]);
    }
    s
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(2, 0)), 0);
        assert_eq!(orient(&p(0, 0), &p(0, 1), &p(1, 1)), -1);
    }

    #[test]
    fn line_intersection_examples() {
        let xaxis = DirectedLine::new(p(0, 0), p(1, 0)).unwrap();
        let yaxis = DirectedLine::new(p(0, 0), p(0, 1)).unwrap();
        assert_eq!(line_intersection(&xaxis, &yaxis), LineIntersection::Point(p(0, 0)));
        let y1 = DirectedLine::new(p(0, 1), p(1, 0)).unwrap();
        let y2 = DirectedLine::new(p(0, 2), p(1, 0)).unwrap();
        assert_eq!(line_intersection(&y1, &y2), LineIntersection::Parallel);
        let d1 = DirectedLine::new(p(0, 0), p(1, 1)).unwrap();
        let d2 = DirectedLine::new(p(3, 3), p(2, 2)).unwrap();
        assert_eq!(line_intersection(&d1, &d2), LineIntersection::Coincident);
        assert!(d1.collinear_with(&d2));
    }

    #[test]
    fn segment_examples() {
        assert!(segment_properly_intersects((&p(0, 0), &p(2, 2)), (&p(0, 2), &p(2, 0))).unwrap());
        assert!(!segment_properly_intersects((&p(0, 0), &p(1, 0)), (&p(2, 0), &p(3, 0))).unwrap());
        assert!(!segment_properly_intersects((&p(0, 0), &p(1, 0)), (&p(1, 0), &p(2, 1))).unwrap());
        assert!(segment_properly_intersects((&p(0, 0), &p(1, 0)), (&p(1, 0), &p(1, 0))).is_err());
        // T-junction: endpoint in the other's interior
        assert!(segment_properly_intersects((&p(0, 0), &p(2, 0)), (&p(1, 0), &p(1, 3))).unwrap());
    }

    #[test]
    fn rational_text_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(matches!(parse_rational("1/0"), Err(Error::DivisionByZero)));
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat(5)), "5");
        assert!(checked_div(&rat(1), &rat(0)).is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| ratio(n, d))
    }

    fn small_pt() -> impl Strategy<Value = Point> {
        (small_rat(), small_rat()).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn addition_associative(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            let s = format_rational(&a);
            prop_assert_eq!(parse_rational(&s).unwrap(), a);
        }

        #[test]
        fn orient_antisymmetric(a in small_pt(), b in small_pt(), c in small_pt()) {
            let o = orient(&a, &b, &c);
            prop_assert_eq!(orient(&b, &a, &c), -o);
            prop_assert_eq!(orient(&a, &c, &b), -o);
            prop_assert_eq!(orient(&c, &b, &a), -o);
        }

        #[test]
        fn intersection_on_both_lines(a in small_pt(), da in small_pt(), b in small_pt(), db in small_pt()) {
            prop_assume!(!da.is_zero() && !db.is_zero());
            let l1 = DirectedLine::new(a, da).unwrap();
            let l2 = DirectedLine::new(b, db).unwrap();
            if let LineIntersection::Point(q) = line_intersection(&l1, &l2) {
                prop_assert!(l1.contains(&q));
                prop_assert!(l2.contains(&q));
            }
        }
    }
}
