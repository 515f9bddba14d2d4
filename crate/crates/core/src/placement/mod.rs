//! Guard placement strategies.

pub mod approx2;
pub mod concise;
pub mod ortho;
pub mod pieces;
pub mod pseudo;
pub mod search;

use crate::error::{Error, Result};
use crate::formula::{Formula, Placement};
use crate::geom::orient;
use crate::guards::{natural_guard, GuardSet};
use crate::partition::{trim_partition, PieceKind};
use crate::polygon::Polygon;
use crate::triangulation::triangulate;

pub use approx2::{halfplane_count, place_approx2};
pub use concise::{concise_pieces, place_concise};
pub use ortho::{ortho_partition, place_orthogonal, OrthoPartition};
pub use pieces::{place_hexagon_split, place_hexagon_star, place_pentagon, place_tetragon};
pub use pseudo::place_pseudo_triangle;

/// Stable strategy identifiers.
pub const STRATEGIES: [&str; 6] = ["general", "convex", "pseudo", "orthogonal", "approx2", "concise"];

/// Guard-count upper bound promised by a strategy, when it has one.
pub fn strategy_bound(strategy: &str, p: &Polygon) -> Option<usize> {
    let n = p.n();
    let h = p.h();
    match strategy {
        "general" => Some((n + 2 * h).saturating_sub(2).max(2)),
        "convex" => Some(n.div_ceil(2)),
        "pseudo" => Some(n.div_ceil(2) + 4),
        "orthogonal" => Some((3 * (n - 2)).div_ceil(4)),
        _ => None,
    }
}

fn valid(p: &Polygon) -> Result<()> {
    p.validate().map_err(|v| Error::InvalidPolygon(v.to_string()))
}

/// Disjunction of piece placements; guard labels get a `p{k}_` prefix.
pub fn union_of(strategy: &str, parts: Vec<Placement>, bound: Option<usize>) -> Result<Placement> {
    let single = parts.len() == 1;
    let mut g = GuardSet::new();
    let mut fs = Vec::new();
    for (k, part) in parts.into_iter().enumerate() {
        let prefix = if single { String::new() } else { format!("p{k}_") };
        g.extend_prefixed(&part.guards, &prefix)?;
        fs.push(part.formula.relabel(&|l| format!("{prefix}{l}")));
    }
    Placement::new(strategy, g, Formula::or(fs), bound)
}

/// Two natural guards on a triangle.
fn place_triangle(q: &Polygon) -> Result<Placement> {
    let mut g = GuardSet::new();
    g.push("v0", natural_guard(q, 0)?)?;
    g.push("v1", natural_guard(q, 1)?)?;
    Placement::new("triangle", g, Formula::and_labels(&["v0", "v1"]), Some(2))
}

/// Triangulate, trim into small pieces and OR their placements.
pub fn general_place(p: &Polygon) -> Result<Placement> {
    valid(p)?;
    if p.holes.is_empty() && p.outer.len() == 3 {
        let mut pl = place_triangle(p)?;
        pl.strategy = "general".into();
        pl.certificate_bound = Some(3);
        return Ok(pl);
    }
    let t = triangulate(p)?;
    let part = trim_partition(&t)?;
    let mut parts = Vec::with_capacity(part.pieces.len());
    for piece in &part.pieces {
        let q = &piece.polygon;
        let pl = match piece.kind {
            PieceKind::Triangle => place_triangle(q)?,
            PieceKind::Tetragon => place_tetragon(q)?,
            PieceKind::Pentagon => place_pentagon(q)?,
            PieceKind::HexagonStar => match pieces::hexagon_long_diagonal(&q.outer) {
                Some(i) => place_hexagon_split(q, i)?,
                None => place_hexagon_star(q)?,
            },
        };
        parts.push(pl);
    }
    union_of("general", parts, Some(3))
}

/// Weakly convex: no reflex vertex.
pub fn is_convex_ring(p: &Polygon) -> bool {
    let v = &p.outer;
    let n = v.len();
    p.holes.is_empty() && (0..n).all(|i| orient(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]) >= 0)
}

/// Natural guards on every other vertex.
pub fn place_convex(p: &Polygon) -> Result<Placement> {
    valid(p)?;
    if !is_convex_ring(p) {
        return Err(Error::Precondition("place_convex needs a convex polygon".into()));
    }
    let n = p.outer.len();
    let mut g = GuardSet::new();
    let mut labels = Vec::new();
    for i in (0..n).step_by(2) {
        let l = format!("v{i}");
        g.push(l.clone(), natural_guard(p, i)?)?;
        labels.push(l);
    }
    let k = labels.len();
    Placement::new("convex", g, Formula::and_labels(&labels), Some(k))
}
