use rayon::prelude::*;

use super::{require_signature, HerStats, HerVerdict, Method};
use crate::certificate::Certificate;
use crate::error::Result;
use crate::eval::SentenceEvaluator;
use crate::formula::PrenexSentence;
use crate::structure::{Structure, Subsets};

/// Subsets evaluated per parallel batch.
const BATCH: usize = 1 << 12;

/// Outcome of checking every subset up to `max_size` elements.
pub(super) struct Scan {
    pub first_failure: Option<Vec<usize>>,
    pub checked: u64,
}

/// Evaluates `eval` on subsets in canonical order (size, then lexicographic)
/// and reports the first failing one. Batches are evaluated in parallel;
/// the earliest failure within a batch wins, so the result does not depend
/// on scheduling.
pub(super) fn scan_subsets(s: &Structure, eval: &SentenceEvaluator, max_size: Option<usize>) -> Scan {
    let mut subsets = Subsets::new(s.size(), max_size);
    let mut checked = 0u64;
    loop {
        let batch: Vec<Vec<usize>> = subsets.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return Scan {
                first_failure: None,
                checked,
            };
        }
        let failure = if batch.len() < 64 {
            batch.iter().position(|sub| !eval.holds_on(s, sub))
        } else {
            batch.par_iter().position_first(|sub| !eval.holds_on(s, sub))
        };
        match failure {
            Some(i) => {
                checked += i as u64 + 1;
                return Scan {
                    first_failure: Some(batch[i].clone()),
                    checked,
                };
            }
            None => checked += batch.len() as u64,
        }
    }
}

/// Checks every non-empty substructure, smallest first. A negative verdict
/// carries the first failing subset in canonical order, which is of minimum
/// size.
pub fn her_bruteforce(s: &Structure, p: &PrenexSentence) -> Result<HerVerdict> {
    her_bruteforce_with(s, p, None)
}

/// [`her_bruteforce`] restricted to substructures with at most `max_size`
/// elements.
pub fn her_bruteforce_with(s: &Structure, p: &PrenexSentence, max_size: Option<usize>) -> Result<HerVerdict> {
    require_signature(s, p)?;
    let eval = SentenceEvaluator::new(p, s.signature())?;
    let scan = scan_subsets(s, &eval, max_size);
    let bound = max_size.unwrap_or(s.size()).min(s.size());
    Ok(verdict(scan, bound, Method::Bruteforce))
}

pub(super) fn verdict(scan: Scan, bound: usize, method: Method) -> HerVerdict {
    let stats = HerStats {
        substructures: scan.checked,
        ..HerStats::default()
    };
    match scan.first_failure {
        Some(subset) => HerVerdict {
            hereditary: false,
            certificate: Certificate::Counterexample { subset },
            method,
            stats,
        },
        None => HerVerdict {
            hereditary: true,
            certificate: Certificate::Exhaustive { bound },
            method,
            stats,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;
    use crate::syntax::parse_sentence;

    #[test]
    fn sink_on_path_and_cycle() {
        let sink = parse_sentence("exists x. forall y. ~E(x,y)", &Signature::digraph()).unwrap();
        let p3 = Structure::digraph(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(her_bruteforce(&p3, &sink).unwrap().hereditary);
        let c3 = Structure::digraph(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let v = her_bruteforce(&c3, &sink).unwrap();
        assert!(!v.hereditary);
        assert_eq!(
            v.certificate,
            Certificate::Counterexample {
                subset: vec![1, 2, 3]
            }
        );
        assert_eq!(v.stats.substructures, 7);
    }

    #[test]
    fn first_failure_is_smallest() {
        // the loop at 2 is found before the 3-cycle
        let sink = parse_sentence("exists x. forall y. ~E(x,y)", &Signature::digraph()).unwrap();
        let d = Structure::digraph(3, &[(1, 2), (2, 3), (3, 1), (2, 2)]).unwrap();
        let v = her_bruteforce(&d, &sink).unwrap();
        assert_eq!(v.certificate, Certificate::Counterexample { subset: vec![2] });
    }

    #[test]
    fn batches_agree_with_sequential_order() {
        // 13 vertices give batches larger than the parallel threshold
        let sink = parse_sentence("exists x. forall y. ~E(x,y)", &Signature::digraph()).unwrap();
        let mut edges: Vec<(usize, usize)> = (1..13).map(|i| (i, i + 1)).collect();
        edges.push((13, 7));
        let d = Structure::digraph(13, &edges).unwrap();
        let v = her_bruteforce(&d, &sink).unwrap();
        assert_eq!(
            v.certificate,
            Certificate::Counterexample {
                subset: (7..=13).collect()
            }
        );
    }
}
