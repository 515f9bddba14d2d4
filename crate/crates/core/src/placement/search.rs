//! Exhaustive search for a small monotone placement over a pool of
//! candidate guards.

use std::collections::HashSet;

use crate::error::Result;
use crate::formula::{Formula, Placement};
use crate::guards::GuardSet;
use crate::polygon::Polygon;
use crate::verify::{exact_equivalence, face_samples, Equivalence};

/// Minimal inside signatures when no inside face is dominated by an
/// outside one, i.e. when membership is a monotone function of `masks`.
fn monotone_cover(masks: &HashSet<(u64, bool)>) -> Option<Vec<u64>> {
    let ins: Vec<u64> = masks.iter().filter(|m| m.1).map(|m| m.0).collect();
    let outs: Vec<u64> = masks.iter().filter(|m| !m.1).map(|m| m.0).collect();
    if ins.iter().any(|&a| outs.iter().any(|&o| a & o == a)) {
        return None;
    }
    let mut min: Vec<u64> = ins
        .iter()
        .copied()
        .filter(|&a| !ins.iter().any(|&b| b != a && a & b == b))
        .collect();
    min.sort_unstable();
    min.dedup();
    Some(min)
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f)
}

/// Smallest subset of `pool` (at most `max_guards`, first in lexicographic
/// index order) whose membership is a monotone DNF with clauses of at most
/// `max_clause` literals, checked exactly on the refined arrangement.
pub fn search_placement(
    q: &Polygon,
    pool: &GuardSet,
    max_guards: usize,
    max_clause: usize,
    strategy: &str,
) -> Result<Option<Placement>> {
    let samples = face_samples(q, pool);
    let labels: Vec<&str> = pool.labels().collect();
    let mut found = None;
    for k in 1..=max_guards.min(pool.len()).min(63) {
        let mut err = None;
        combinations(pool.len(), k, &mut |idx| {
            let masks: HashSet<(u64, bool)> = samples
                .iter()
                .map(|s| {
                    let m = idx
                        .iter()
                        .enumerate()
                        .fold(0u64, |m, (b, &i)| m | (u64::from(s.signature[i]) << b));
                    (m, s.inside)
                })
                .collect();
            let Some(cover) = monotone_cover(&masks) else {
                return false;
            };
            if cover.is_empty() || cover.iter().any(|m| m.count_ones() as usize > max_clause) {
                return false;
            }
            let mut g = GuardSet::new();
            for &i in idx {
                let (l, w) = pool.iter().nth(i).expect("index in pool");
                if let Err(e) = g.push(l.clone(), w.clone()) {
                    err = Some(e);
                    return true;
                }
            }
            let f = Formula::or(
                cover
                    .iter()
                    .map(|m| {
                        Formula::and_labels(
                            &(0..k)
                                .filter(|b| m >> b & 1 == 1)
                                .map(|b| labels[idx[b]])
                                .collect::<Vec<_>>(),
                        )
                    })
                    .collect(),
            );
            let pl = match Placement::new(strategy, g, f, Some(max_clause)) {
                Ok(pl) => pl,
                Err(e) => {
                    err = Some(e);
                    return true;
                }
            };
            match exact_equivalence(q, &pl) {
                Ok(Equivalence::Ok { .. }) => {
                    found = Some(pl);
                    true
                }
                Ok(_) => false,
                Err(e) => {
                    err = Some(e);
                    true
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guards::natural_guard;

    #[test]
    fn square_needs_two_corners() {
        let q = Polygon::from_ints(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let mut pool = GuardSet::new();
        for i in 0..4 {
            pool.push(format!("v{i}"), natural_guard(&q, i).unwrap()).unwrap();
        }
        let pl = search_placement(&q, &pool, 3, 2, "search").unwrap().unwrap();
        assert_eq!(pl.formula.to_string(), "(v0 & v2)");
    }

    #[test]
    fn cover_rejects_dominated_inside() {
        let m: HashSet<(u64, bool)> = [(0b01, true), (0b11, false)].into_iter().collect();
        assert!(monotone_cover(&m).is_none());
        let m: HashSet<(u64, bool)> = [(0b11, true), (0b01, false), (0b111, true)].into_iter().collect();
        assert_eq!(monotone_cover(&m), Some(vec![0b11]));
    }
}
