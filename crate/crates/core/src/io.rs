//! JSON file formats. Every coordinate is a rational string.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Placement};
use crate::geom::{format_rational, parse_rational, Point, Rational};
use crate::guards::{GuardSet, Wedge};
use crate::polygon::Polygon;
use crate::verify::{Equivalence, Witness};

/// A coordinate as written in a file: a rational string, or a bare JSON
/// integer on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Text(String),
    Int(i64),
}

impl Coord {
    fn value(&self) -> Result<Rational> {
        match self {
            Coord::Text(s) => parse_rational(s),
            Coord::Int(i) => Ok(Rational::from_integer((*i).into())),
        }
    }
}

pub type PointFile = [Coord; 2];

pub fn point_to_file(p: &Point) -> PointFile {
    [Coord::Text(format_rational(&p.x)), Coord::Text(format_rational(&p.y))]
}

pub fn point_from_file(p: &PointFile) -> Result<Point> {
    Ok(Point::new(p[0].value()?, p[1].value()?))
}

/// Parses `"x,y"` with rational or decimal components.
pub fn parse_point(s: &str) -> Result<Point> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected `x,y`, got `{s}`")))?;
    Ok(Point::new(parse_rational(x)?, parse_rational(y)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub outer: Vec<PointFile>,
    #[serde(default)]
    pub holes: Vec<Vec<PointFile>>,
}

impl PolygonFile {
    pub fn from_polygon(p: &Polygon) -> Self {
        PolygonFile {
            outer: p.outer.iter().map(point_to_file).collect(),
            holes: p.holes.iter().map(|h| h.iter().map(point_to_file).collect()).collect(),
        }
    }

    /// The polygon, validated.
    pub fn to_polygon(&self) -> Result<Polygon> {
        let ring = |r: &[PointFile]| r.iter().map(point_from_file).collect::<Result<Vec<_>>>();
        let holes = self.holes.iter().map(|h| ring(h)).collect::<Result<Vec<_>>>()?;
        Polygon::new(ring(&self.outer)?, holes).validated()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuardFile {
    pub label: String,
    pub apex: PointFile,
    pub ray1: PointFile,
    pub ray2: PointFile,
    pub reflex: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementFile {
    pub strategy: String,
    pub guards: Vec<GuardFile>,
    pub formula: String,
    pub certificate_bound: Option<usize>,
}

impl PlacementFile {
    pub fn from_placement(pl: &Placement) -> Self {
        PlacementFile {
            strategy: pl.strategy.clone(),
            guards: pl
                .guards
                .iter()
                .map(|(l, w)| GuardFile {
                    label: l.clone(),
                    apex: point_to_file(&w.apex),
                    ray1: point_to_file(&w.ray1),
                    ray2: point_to_file(&w.ray2),
                    reflex: w.reflex,
                })
                .collect(),
            formula: pl.formula.to_string(),
            certificate_bound: pl.certificate_bound,
        }
    }

    pub fn to_placement(&self) -> Result<Placement> {
        let mut g = GuardSet::new();
        for gf in &self.guards {
            let w = Wedge::new(
                point_from_file(&gf.apex)?,
                point_from_file(&gf.ray1)?,
                point_from_file(&gf.ray2)?,
                gf.reflex,
            )?;
            g.push(gf.label.clone(), w)?;
        }
        Placement::new(
            &self.strategy,
            g,
            Formula::parse(&self.formula)?,
            self.certificate_bound,
        )
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("file types serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub point: PointFile,
    pub inside: bool,
    pub formula_value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Certificate bound declared by the placement.
    pub claimed: Option<usize>,
    /// Largest DNF clause of the formula, when the expansion fits.
    pub observed: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub status: String,
    pub counterexample: Option<CounterexampleReport>,
    pub faces_checked: usize,
    pub lines: usize,
    pub guard_count: usize,
    pub bounds: Bounds,
}

impl VerifyReport {
    pub fn new(eq: &Equivalence, lines: usize, pl: &Placement) -> Self {
        let (status, counterexample, faces_checked) = match eq {
            Equivalence::Ok { faces_checked } => ("ok", None, *faces_checked),
            Equivalence::Counterexample(s) => (
                "counterexample",
                Some(CounterexampleReport {
                    point: point_to_file(&s.point),
                    inside: s.inside,
                    formula_value: !s.inside,
                }),
                0,
            ),
        };
        VerifyReport {
            status: status.into(),
            counterexample,
            faces_checked,
            lines,
            guard_count: pl.guard_count(),
            bounds: Bounds {
                claimed: pl.certificate_bound,
                observed: pl.max_clause().ok(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub p_in: PointFile,
    pub q_out: PointFile,
}

impl WitnessFile {
    pub fn new(w: &Witness) -> Self {
        WitnessFile {
            p_in: point_to_file(&w.p_in),
            q_out: point_to_file(&w.q_out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_random, RandomKind};
    use crate::geom::ratio;
    use crate::placement::general_place;
    use proptest::prelude::*;

    #[test]
    fn polygon_round_trip() {
        let p = Polygon::new(
            vec![
                Point::int(0, 0),
                Point::new(ratio(9, 2), rat0()),
                Point::int(4, 4),
                Point::int(0, 4),
            ],
            vec![vec![
                Point::int(1, 1),
                Point::int(1, 2),
                Point::new(ratio(5, 3), ratio(3, 2)),
            ]],
        );
        let f = PolygonFile::from_polygon(&p);
        let text = to_json(&f);
        assert!(text.contains("\"9/2\""));
        let back: PolygonFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_polygon().unwrap(), p);
    }

    fn rat0() -> Rational {
        Rational::from_integer(0.into())
    }

    #[test]
    fn integers_and_decimals_accepted() {
        let f: PolygonFile = serde_json::from_str(r#"{"outer": [[0, 0], ["1.5", 0], ["1", "2/3"]]}"#).unwrap();
        let p = f.to_polygon().unwrap();
        assert_eq!(p.outer[1].x, ratio(3, 2));
        assert!(serde_json::from_str::<PolygonFile>(r#"{"outer": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn invalid_polygon_rejected() {
        let f: PolygonFile = serde_json::from_str(r#"{"outer": [[0, 0], [1, 1], [1, 0], [0, 1]]}"#).unwrap();
        assert!(f.to_polygon().is_err());
    }

    #[test]
    fn placement_with_bad_label_rejected() {
        let sq = Polygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let mut f = PlacementFile::from_placement(&general_place(&sq).unwrap());
        f.formula = "(v0 & nope)".into();
        assert!(matches!(f.to_placement(), Err(Error::UnknownLabel(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn placement_round_trip(n in 3usize..14, seed in 0u64..1000) {
            let p = gen_random(RandomKind::Simple, n, seed).unwrap();
            let pf = PolygonFile::from_polygon(&p);
            prop_assert_eq!(pf.to_polygon().unwrap(), p.clone());
            let pl = general_place(&p).unwrap();
            let f = PlacementFile::from_placement(&pl);
            let text = to_json(&f);
            let back: PlacementFile = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &f);
            let pl2 = back.to_placement().unwrap();
            prop_assert_eq!(&pl2.formula, &pl.formula);
            prop_assert_eq!(&pl2.guards, &pl.guards);
            prop_assert_eq!(to_json(&PlacementFile::from_placement(&pl2)), text);
        }
    }
}
