use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::Structure;

/// The structural items characterizing models of `henson_phi` among
/// tournaments, evaluated for the best witness found, and the number of
/// directed 3-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HensonReport {
    /// Item `i + 1` of the characterization.
    pub items: [bool; 6],
    pub three_cycles: usize,
    /// The witnesses `(s1, s2, s3, t1, t2, t3)` the items refer to.
    pub witness: Option<[usize; 6]>,
}

impl HensonReport {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|&b| b)
    }
}

/// The directed 3-cycles of a digraph, each listed once as `(a, b, c)` with
/// `a` the smallest vertex.
pub fn henson_cycles(t: &Structure) -> Vec<[usize; 3]> {
    let n = t.size();
    let e = |a: usize, b: usize| t.holds("E", &[a, b]);
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in a + 1..=n {
                if b != c && e(a, b) && e(b, c) && e(c, a) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn require_tournament(t: &Structure) -> Result<()> {
    let fail = |m: String| Err(Error::Precondition(format!("not a tournament: {m}")));
    if t.signature().arity("E") != Some(2) || t.signature().len() != 1 {
        return Err(Error::SignatureMismatch("expected the signature {E/2}".into()));
    }
    let n = t.size();
    for u in 1..=n {
        if t.holds("E", &[u, u]) {
            return fail(format!("loop at {u}"));
        }
        for v in u + 1..=n {
            match (t.holds("E", &[u, v]), t.holds("E", &[v, u])) {
                (true, true) => return fail(format!("both arcs between {u} and {v}")),
                (false, false) => return fail(format!("no arc between {u} and {v}")),
                _ => {}
            }
        }
    }
    Ok(())
}

/// Evaluates the six items in polynomial time.
///
/// 1. `s1 s2 s3` and `t1 t2 t3` are directed 3-cycles.
/// 2. `t3, t, s1` is a directed cycle for every `t` outside `{s1, s2, t2, t3}`.
/// 3. `E(t2, t)` for every `t` outside `{t1, t2}` and `E(s, s2)` for every
///    `s` outside `{s2, s3}`.
/// 4. Every arc other than `(s1, t3)` lies on at most two 3-cycles.
/// 5. Every 3-cycle has at most two arcs that lie on at least two 3-cycles.
/// 6. Every 3-cycle avoiding the arc `(s1, t3)` has exactly two such arcs.
///
/// Witnesses range over all rotations of all pairs of 3-cycles; the report
/// shows the first witness satisfying the most items.
pub fn check_henson_properties(t: &Structure) -> Result<HensonReport> {
    require_tournament(t)?;
    let n = t.size();
    let e = |a: usize, b: usize| t.holds("E", &[a, b]);
    let cycles = henson_cycles(t);
    let mut on: HashMap<(usize, usize), usize> = HashMap::new();
    for c in &cycles {
        for i in 0..3 {
            *on.entry((c[i], c[(i + 1) % 3])).or_default() += 1;
        }
    }
    let count = |a: usize, b: usize| on.get(&(a, b)).copied().unwrap_or(0);
    let busy = |c: &[usize; 3]| (0..3).filter(|&i| count(c[i], c[(i + 1) % 3]) >= 2).count();
    let has_arc = |c: &[usize; 3], a: usize, b: usize| (0..3).any(|i| (c[i], c[(i + 1) % 3]) == (a, b));

    let item5 = cycles.iter().all(|c| busy(c) <= 2);
    let items_for = |w: [usize; 6]| -> [bool; 6] {
        let [s1, s2, s3, t1, t2, t3] = w;
        let item2 = (1..=n)
            .filter(|v| ![s1, s2, t2, t3].contains(v))
            .all(|v| e(t3, v) && e(v, s1) && e(s1, t3));
        let item3 = (1..=n).filter(|v| ![t1, t2].contains(v)).all(|v| e(t2, v))
            && (1..=n).filter(|v| ![s2, s3].contains(v)).all(|v| e(v, s2));
        let item4 = on.iter().all(|(&arc, &k)| arc == (s1, t3) || k <= 2);
        let item6 = cycles
            .iter()
            .filter(|c| !has_arc(c, s1, t3))
            .all(|c| busy(c) == 2);
        [true, item2, item3, item4, item5, item6]
    };

    let rotations: Vec<[usize; 3]> = cycles
        .iter()
        .flat_map(|&[a, b, c]| [[a, b, c], [b, c, a], [c, a, b]])
        .collect();
    let mut best: Option<([bool; 6], [usize; 6])> = None;
    'search: for s in &rotations {
        for u in &rotations {
            let w = [s[0], s[1], s[2], u[0], u[1], u[2]];
            let items = items_for(w);
            let score = items.iter().filter(|&&b| b).count();
            if best.is_none_or(|(b, _)| score > b.iter().filter(|&&x| x).count()) {
                best = Some((items, w));
                if score == 6 {
                    break 'search;
                }
            }
        }
    }
    Ok(match best {
        Some((items, w)) => HensonReport {
            items,
            three_cycles: cycles.len(),
            witness: Some(w),
        },
        None => {
            // without 3-cycles items 4 to 6 hold vacuously
            HensonReport {
                items: [false, false, false, true, true, true],
                three_cycles: 0,
                witness: None,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::gen_structure;

    #[test]
    fn henson_eight() {
        let t = gen_structure("henson", 8, None).unwrap();
        let r = check_henson_properties(&t).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert_eq!(r.three_cycles, 10);
    }

    #[test]
    fn transitive_tournament_has_no_cycle() {
        let edges: Vec<(usize, usize)> = (1..=5)
            .flat_map(|i| (i + 1..=5).map(move |j| (i, j)))
            .collect();
        let t = Structure::digraph(5, &edges).unwrap();
        let r = check_henson_properties(&t).unwrap();
        assert!(!r.items[0]);
        assert_eq!(r.three_cycles, 0);
    }

    #[test]
    fn rejects_non_tournaments() {
        assert!(check_henson_properties(&gen_structure("dcycle", 4, None).unwrap()).is_err());
        assert!(check_henson_properties(&gen_structure("complete", 3, None).unwrap()).is_err());
    }
}
