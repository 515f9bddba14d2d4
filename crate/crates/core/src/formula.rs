//! Monotone AND/OR formulas over guard labels, DNF expansion and
//! certificates.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::guards::{valid_label, GuardSet};

pub const DEFAULT_DNF_CAP: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Leaf(String),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

pub type Clause = BTreeSet<String>;

impl Formula {
    pub fn leaf(label: impl Into<String>) -> Formula {
        Formula::Leaf(label.into())
    }

    /// Conjunction; nested ANDs are flattened and a single operand is
    /// returned unchanged.
    pub fn and(parts: Vec<Formula>) -> Formula {
        Formula::join(parts, true)
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        Formula::join(parts, false)
    }

    fn join(parts: Vec<Formula>, is_and: bool) -> Formula {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Formula::And(xs) if is_and => flat.extend(xs),
                Formula::Or(xs) if !is_and => flat.extend(xs),
                x => flat.push(x),
            }
        }
        assert!(!flat.is_empty(), "empty formula");
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        if is_and {
            Formula::And(flat)
        } else {
            Formula::Or(flat)
        }
    }

    pub fn and_labels<S: AsRef<str>>(labels: &[S]) -> Formula {
        Formula::and(labels.iter().map(|l| Formula::leaf(l.as_ref())).collect())
    }

    /// Distinct labels in first-occurrence order.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |l| {
            if !out.iter().any(|x: &String| x == l) {
                out.push(l.to_string());
            }
        });
        out
    }

    pub fn leaf_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    fn walk(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Leaf(l) => f(l),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.walk(f)),
        }
    }

    /// Applies `f` to every label.
    pub fn relabel(&self, f: &impl Fn(&str) -> String) -> Formula {
        match self {
            Formula::Leaf(l) => Formula::Leaf(f(l)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.relabel(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.relabel(f)).collect()),
        }
    }

    pub fn eval_with(&self, truth: &impl Fn(&str) -> bool) -> bool {
        match self {
            Formula::Leaf(l) => truth(l),
            Formula::And(xs) => xs.iter().all(|x| x.eval_with(truth)),
            Formula::Or(xs) => xs.iter().any(|x| x.eval_with(truth)),
        }
    }

    pub fn check_labels(&self, g: &GuardSet) -> Result<()> {
        for l in self.labels() {
            if g.index_of(&l).is_none() {
                return Err(Error::UnknownLabel(l));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, g: &GuardSet, p: &Point) -> Result<bool> {
        let c = Compiled::new(self, g)?;
        Ok(c.eval(&g.signature(p)))
    }

    /// Equivalent DNF with absorbed clauses, sorted by size then labels.
    pub fn to_dnf(&self, cap: usize) -> Result<Vec<Clause>> {
        let mut out = self.dnf_rec(cap)?;
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn dnf_rec(&self, cap: usize) -> Result<Vec<Clause>> {
        match self {
            Formula::Leaf(l) => Ok(vec![std::iter::once(l.clone()).collect()]),
            Formula::Or(xs) => {
                let mut all = Vec::new();
                for x in xs {
                    all.extend(x.dnf_rec(cap)?);
                    if all.len() > cap {
                        all = absorb(all);
                        if all.len() > cap {
                            return Err(Error::ClauseExplosion(cap));
                        }
                    }
                }
                Ok(absorb(all))
            }
            Formula::And(xs) => {
                let mut acc: Vec<Clause> = vec![Clause::new()];
                for x in xs {
                    let rhs = x.dnf_rec(cap)?;
                    if acc.len().saturating_mul(rhs.len()) > cap.saturating_mul(4) {
                        return Err(Error::ClauseExplosion(cap));
                    }
                    let mut next = Vec::with_capacity(acc.len() * rhs.len());
                    for a in &acc {
                        for b in &rhs {
                            next.push(a.union(b).cloned().collect());
                        }
                    }
                    acc = absorb(next);
                    if acc.len() > cap {
                        return Err(Error::ClauseExplosion(cap));
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Largest clause of the absorbed DNF.
    pub fn max_clause(&self, cap: usize) -> Result<usize> {
        Ok(self.to_dnf(cap)?.iter().map(|c| c.len()).max().unwrap_or(0))
    }

    pub fn parse(s: &str) -> Result<Formula> {
        let toks = tokenize(s)?;
        let mut pos = 0;
        let f = parse_or(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Parse(format!("trailing input in formula `{s}`")));
        }
        Ok(f)
    }
}

/// Removes duplicate clauses and clauses that contain another clause.
pub fn absorb(mut clauses: Vec<Clause>) -> Vec<Clause> {
    clauses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    clauses.dedup();
    let mut kept: Vec<Clause> = Vec::with_capacity(clauses.len());
    for c in clauses {
        if !kept.iter().any(|k| k.is_subset(&c)) {
            kept.push(c);
        }
    }
    kept
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Leaf(l) => write!(f, "{l}"),
            Formula::And(xs) | Formula::Or(xs) => {
                let op = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    And,
    Or,
    Label(String),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            '&' => {
                chars.next();
                out.push(Tok::And);
            }
            '|' => {
                chars.next();
                out.push(Tok::Or);
            }
            _ => {
                let mut l = String::new();
                while let Some(&c) = chars.peek() {
                    if "()&| \t\n".contains(c) {
                        break;
                    }
                    l.push(c);
                    chars.next();
                }
                if !valid_label(&l) {
                    return Err(Error::Parse(format!("invalid label `{l}`")));
                }
                out.push(Tok::Label(l));
            }
        }
    }
    Ok(out)
}

// `&` binds tighter than `|`; the printer always parenthesizes, so this only
// matters for hand-written input.
fn parse_or(t: &[Tok], pos: &mut usize) -> Result<Formula> {
    let mut parts = vec![parse_and(t, pos)?];
    while t.get(*pos) == Some(&Tok::Or) {
        *pos += 1;
        parts.push(parse_and(t, pos)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Formula::Or(parts)
    })
}

fn parse_and(t: &[Tok], pos: &mut usize) -> Result<Formula> {
    let mut parts = vec![parse_atom(t, pos)?];
    while t.get(*pos) == Some(&Tok::And) {
        *pos += 1;
        parts.push(parse_atom(t, pos)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Formula::And(parts)
    })
}

fn parse_atom(t: &[Tok], pos: &mut usize) -> Result<Formula> {
    match t.get(*pos) {
        Some(Tok::Label(l)) => {
            *pos += 1;
            Ok(Formula::Leaf(l.clone()))
        }
        Some(Tok::Open) => {
            *pos += 1;
            let f = parse_or(t, pos)?;
            if t.get(*pos) != Some(&Tok::Close) {
                return Err(Error::Parse("missing `)` in formula".into()));
            }
            *pos += 1;
            Ok(f)
        }
        _ => Err(Error::Parse("unexpected token in formula".into())),
    }
}

/// Formula with leaves resolved to guard indices, for fast repeated
/// evaluation over signatures.
#[derive(Clone, Debug)]
pub enum Compiled {
    Leaf(usize),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    pub fn new(f: &Formula, g: &GuardSet) -> Result<Compiled> {
        let index: HashMap<&str, usize> = g.labels().enumerate().map(|(i, l)| (l, i)).collect();
        Compiled::build(f, &index)
    }

    fn build(f: &Formula, index: &HashMap<&str, usize>) -> Result<Compiled> {
        Ok(match f {
            Formula::Leaf(l) => Compiled::Leaf(*index.get(l.as_str()).ok_or_else(|| Error::UnknownLabel(l.clone()))?),
            Formula::And(xs) => Compiled::And(xs.iter().map(|x| Compiled::build(x, index)).collect::<Result<_>>()?),
            Formula::Or(xs) => Compiled::Or(xs.iter().map(|x| Compiled::build(x, index)).collect::<Result<_>>()?),
        })
    }

    pub fn eval(&self, sig: &[bool]) -> bool {
        match self {
            Compiled::Leaf(i) => sig[*i],
            Compiled::And(xs) => xs.iter().all(|x| x.eval(sig)),
            Compiled::Or(xs) => xs.iter().any(|x| x.eval(sig)),
        }
    }
}

/// Greedy prime implicant among the guards true at `p`; `None` when F(p)
/// is false.
pub fn extract_certificate(f: &Formula, g: &GuardSet, p: &Point) -> Result<Option<Vec<String>>> {
    let c = Compiled::new(f, g)?;
    let mut sig = g.signature(p);
    if !c.eval(&sig) {
        return Ok(None);
    }
    for i in 0..sig.len() {
        if sig[i] {
            sig[i] = false;
            if !c.eval(&sig) {
                sig[i] = true;
            }
        }
    }
    Ok(Some(
        g.labels()
            .zip(sig)
            .filter(|(_, s)| *s)
            .map(|(l, _)| l.to_string())
            .collect(),
    ))
}

/// Guards, formula and the construction that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub strategy: String,
    pub guards: GuardSet,
    pub formula: Formula,
    /// Claimed maximum certificate size; `None` means unbounded.
    pub certificate_bound: Option<usize>,
}

impl Placement {
    pub fn new(
        strategy: &str,
        guards: GuardSet,
        formula: Formula,
        certificate_bound: Option<usize>,
    ) -> Result<Placement> {
        formula.check_labels(&guards)?;
        Ok(Placement {
            strategy: strategy.to_string(),
            guards,
            formula,
            certificate_bound,
        })
    }

    pub fn guard_count(&self) -> usize {
        self.guards.len()
    }

    pub fn evaluate(&self, p: &Point) -> Result<bool> {
        self.formula.evaluate(&self.guards, p)
    }

    pub fn certificate(&self, p: &Point) -> Result<Option<Vec<String>>> {
        extract_certificate(&self.formula, &self.guards, p)
    }

    pub fn max_clause(&self) -> Result<usize> {
        self.formula.max_clause(DEFAULT_DNF_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guards::Wedge;
    use proptest::prelude::*;

    fn set(xs: &[&str]) -> Clause {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn text_round_trip() {
        let f = Formula::parse("(d & ((a & b) | c))").unwrap();
        assert_eq!(f.to_string(), "(d & ((a & b) | c))");
        assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
        assert!(Formula::parse("(a & b").is_err());
        assert!(Formula::parse("a & & b").is_err());
        assert_eq!(Formula::parse("a & b | c").unwrap().to_string(), "((a & b) | c)");
    }

    #[test]
    fn dnf_examples() {
        let f = Formula::parse("d & (a & b | c)").unwrap();
        assert_eq!(f.to_dnf(100).unwrap(), vec![set(&["c", "d"]), set(&["a", "b", "d"])]);
        let k = Formula::and_labels(&["a", "b", "c", "d"]);
        assert_eq!(k.to_dnf(100).unwrap(), vec![set(&["a", "b", "c", "d"])]);
        let fan = Formula::parse("v1 & (a | b) | v2 & (c | d) | v3 & (e | f)").unwrap();
        let d = fan.to_dnf(100).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn dnf_cap() {
        let parts: Vec<Formula> = (0..20)
            .map(|i| Formula::parse(&format!("(x{i} | y{i})")).unwrap())
            .collect();
        assert!(matches!(
            Formula::and(parts).to_dnf(1000),
            Err(Error::ClauseExplosion(_))
        ));
    }

    #[test]
    fn certificate_prunes() {
        // d and c hold, a does not: the certificate must be {c, d}
        let mut g = GuardSet::new();
        let all = Wedge::halfplane(&Point::int(0, 0), &Point::int(1, 0)).unwrap();
        let none = Wedge::halfplane(&Point::int(1, 0), &Point::int(0, 0)).unwrap();
        g.push("a", none).unwrap();
        g.push("b", all.clone()).unwrap();
        g.push("c", all.clone()).unwrap();
        g.push("d", all).unwrap();
        let f = Formula::parse("(d & ((a & b) | c))").unwrap();
        let cert = extract_certificate(&f, &g, &Point::int(0, 1)).unwrap().unwrap();
        assert_eq!(cert, vec!["c".to_string(), "d".to_string()]);
        assert_eq!(extract_certificate(&f, &g, &Point::int(0, -1)).unwrap(), None);
        assert!(matches!(
            Formula::leaf("zz").evaluate(&g, &Point::int(0, 0)),
            Err(Error::UnknownLabel(_))
        ));
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = (0..6usize).prop_map(|i| Formula::leaf(format!("g{i}")));
        leaf.prop_recursive(4, 12, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
                prop::collection::vec(inner, 2..4).prop_map(Formula::or),
            ]
        })
        .prop_filter("at most 12 leaves", |f| f.leaf_count() <= 12)
    }

    fn assignment(mask: u32) -> impl Fn(&str) -> bool {
        move |l: &str| {
            let i: u32 = l[1..].parse().unwrap();
            mask & (1 << i) != 0
        }
    }

    proptest! {
        #[test]
        fn monotone(f in arb_formula()) {
            for mask in 0u32..64 {
                if f.eval_with(&assignment(mask)) {
                    for bit in 0..6 {
                        prop_assert!(f.eval_with(&assignment(mask | (1 << bit))));
                    }
                }
            }
        }

        #[test]
        fn dnf_equivalent(f in arb_formula()) {
            let d = f.to_dnf(DEFAULT_DNF_CAP).unwrap();
            for mask in 0u32..64 {
                let t = assignment(mask);
                let dv = d.iter().any(|c| c.iter().all(|l| t(l)));
                prop_assert_eq!(dv, f.eval_with(&t));
            }
        }

        #[test]
        fn parse_print(f in arb_formula()) {
            let g = Formula::parse(&f.to_string()).unwrap();
            prop_assert_eq!(g.to_string(), f.to_string());
        }
    }
}
