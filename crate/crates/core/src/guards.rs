//! Angle guards (wedges) and labelled guard sets.

use crate::error::{Error, Result};
use crate::geom::{orient, sign, DirectedLine, Point};
use crate::polygon::Polygon;

/// Closed cone at `apex` sweeping counter-clockwise from `ray1` to `ray2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wedge {
    pub apex: Point,
    pub ray1: Point,
    pub ray2: Point,
    pub reflex: bool,
}

impl Wedge {
    pub fn new(apex: Point, ray1: Point, ray2: Point, reflex: bool) -> Result<Wedge> {
        if ray1.is_zero() || ray2.is_zero() {
            return Err(Error::Degenerate("wedge ray has zero direction".into()));
        }
        match sign(&ray1.cross(&ray2)) {
            1 if reflex => return Err(Error::Degenerate("reflex flag set on a convex wedge".into())),
            -1 if !reflex => return Err(Error::Degenerate("reflex wedge without reflex flag".into())),
            0 if sign(&ray1.dot(&ray2)) > 0 => return Err(Error::Degenerate("wedge rays point the same way".into())),
            _ => {}
        }
        Ok(Wedge {
            apex,
            ray1,
            ray2,
            reflex,
        })
    }

    /// Wedge at `apex` from the direction of `p1` counter-clockwise to `p2`.
    pub fn spanning(apex: &Point, p1: &Point, p2: &Point) -> Result<Wedge> {
        let (r1, r2) = (p1 - apex, p2 - apex);
        let reflex = sign(&r1.cross(&r2)) < 0;
        Wedge::new(apex.clone(), r1, r2, reflex)
    }

    /// Closed left halfplane of the directed segment `a -> b`, apex at its
    /// midpoint.
    pub fn halfplane(a: &Point, b: &Point) -> Result<Wedge> {
        let d = b - a;
        Wedge::new(a.midpoint(b), d.clone(), -&d, false)
    }

    pub fn contains(&self, p: &Point) -> bool {
        let d = p - &self.apex;
        let s1 = sign(&self.ray1.cross(&d)) >= 0;
        let s2 = sign(&self.ray2.cross(&d)) <= 0;
        if self.reflex {
            s1 || s2
        } else {
            s1 && s2
        }
    }

    pub fn is_halfplane(&self) -> bool {
        sign(&self.ray1.cross(&self.ray2)) == 0
    }

    /// Supporting lines of the two boundary rays (one line for 180 degrees).
    pub fn lines(&self) -> Vec<DirectedLine> {
        let l1 = DirectedLine::new(self.apex.clone(), self.ray1.clone()).expect("nonzero ray");
        if self.is_halfplane() {
            return vec![l1];
        }
        let l2 = DirectedLine::new(self.apex.clone(), self.ray2.clone()).expect("nonzero ray");
        vec![l1, l2]
    }
}

/// Wedge equal to the interior angle at `v` between ring neighbours.
pub fn corner_guard(prev: &Point, v: &Point, next: &Point) -> Result<Wedge> {
    let reflex = orient(prev, v, next) < 0;
    Wedge::new(v.clone(), next - v, prev - v, reflex)
}

pub fn natural_guard(p: &Polygon, vertex_index: usize) -> Result<Wedge> {
    let (prev, v, next) = p.corner(vertex_index)?;
    corner_guard(&prev, &v, &next)
}

pub fn edge_guard(p: &Polygon, edge_index: usize) -> Result<Wedge> {
    let edges = p.edges();
    let (a, b) = edges.get(edge_index).ok_or(Error::Index {
        index: edge_index,
        len: edges.len(),
    })?;
    Wedge::halfplane(a, b)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GuardSet {
    guards: Vec<(String, Wedge)>,
}

impl GuardSet {
    pub fn new() -> Self {
        GuardSet::default()
    }

    pub fn from_vec(guards: Vec<(String, Wedge)>) -> Result<Self> {
        let mut g = GuardSet::new();
        for (l, w) in guards {
            g.push(l, w)?;
        }
        Ok(g)
    }

    pub fn push(&mut self, label: impl Into<String>, w: Wedge) -> Result<()> {
        let label = label.into();
        if !valid_label(&label) {
            return Err(Error::Parse(format!("invalid guard label `{label}`")));
        }
        if self.index_of(&label).is_some() {
            return Err(Error::Parse(format!("duplicate guard label `{label}`")));
        }
        self.guards.push((label, w));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, Wedge)> {
        self.guards.iter()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.guards.iter().position(|(l, _)| l == label)
    }

    pub fn get(&self, label: &str) -> Option<&Wedge> {
        self.guards.iter().find(|(l, _)| l == label).map(|(_, w)| w)
    }

    pub fn wedges(&self) -> impl Iterator<Item = &Wedge> {
        self.guards.iter().map(|(_, w)| w)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.guards.iter().map(|(l, _)| l.as_str())
    }

    /// Predicate values of every guard at `p`, in guard order.
    pub fn signature(&self, p: &Point) -> Vec<bool> {
        self.guards.iter().map(|(_, w)| w.contains(p)).collect()
    }

    /// Without the guard at position `i`.
    pub fn without(&self, i: usize) -> GuardSet {
        let mut g = self.clone();
        g.guards.remove(i);
        g
    }

    /// Appends all guards of `other`, prefixing their labels.
    pub fn extend_prefixed(&mut self, other: &GuardSet, prefix: &str) -> Result<()> {
        for (l, w) in other.iter() {
            self.push(format!("{prefix}{l}"), w.clone())?;
        }
        Ok(())
    }
}

pub fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-')
}
