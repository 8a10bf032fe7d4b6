use std::collections::HashMap;

use super::bruteforce::{scan_subsets, verdict};
use super::{monadic_bound, require_signature, HerVerdict, Method};
use crate::error::{Error, Result};
use crate::eval::SentenceEvaluator;
use crate::formula::{Formula, PrenexSentence, Quantifier, Var};
use crate::structure::Structure;
use crate::syntax::prenex::FreshVars;

fn require_forall_exists(p: &PrenexSentence) -> Result<usize> {
    let q = p.quantifier_prefix();
    if q.is_forall_exists() {
        Ok(q.leading_universals())
    } else {
        Err(Error::WrongPrefix {
            expected: "∀*∃*".into(),
            found: q.to_string(),
        })
    }
}

/// The universal sentence obtained from `∀x̄ ∃ȳ. psi` by letting every `y_j`
/// range over `{x_1..x_k}` only: a disjunction over all `k^l` substitutions.
/// A structure satisfies the result iff it hereditarily satisfies `p`.
///
/// With no universal variables at all a single fresh universal variable
/// stands in for every `y_j`, which expresses that every one-element
/// substructure satisfies the existential sentence.
pub fn collapse_rewrite(p: &PrenexSentence) -> Result<PrenexSentence> {
    let k = require_forall_exists(p)?;
    let vars = p.variables();
    let (universals, existentials) = vars.split_at(k);
    if existentials.is_empty() {
        return Ok(p.clone());
    }
    let universals: Vec<Var> = if universals.is_empty() {
        let taken = p.matrix().all_vars().into_iter().chain(vars.iter().cloned()).collect();
        let x = Var::from("x");
        vec![if vars.contains(&x) {
            FreshVars::new("x", taken).fresh()
        } else {
            x
        }]
    } else {
        universals.to_vec()
    };
    let mut disjuncts = Vec::new();
    let mut choice = vec![0usize; existentials.len()];
    loop {
        let map: HashMap<Var, Var> = existentials
            .iter()
            .zip(&choice)
            .map(|(y, &i)| (y.clone(), universals[i].clone()))
            .collect();
        disjuncts.push(p.matrix().substitute(&map));
        // next choice, last existential varying fastest
        let mut i = choice.len();
        loop {
            if i == 0 {
                let prefix = universals.iter().map(|x| (Quantifier::Forall, x.clone())).collect();
                return PrenexSentence::new(p.signature().clone(), prefix, Formula::or(disjuncts));
            }
            i -= 1;
            if choice[i] + 1 < universals.len() {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Hereditary check for `∀^k ∃^l` sentences: every substructure with at most
/// `max(k, 1)` elements must satisfy `p`.
pub fn collapse_check(s: &Structure, p: &PrenexSentence) -> Result<HerVerdict> {
    require_signature(s, p)?;
    let k = require_forall_exists(p)?;
    let bound = k.max(1).min(s.size());
    let eval = SentenceEvaluator::new(p, s.signature())?;
    Ok(verdict(scan_subsets(s, &eval, Some(bound)), bound, Method::Collapse))
}

/// Hereditary check over a monadic signature: every substructure with at
/// most [`monadic_bound`] elements must satisfy `p`.
pub fn monadic_check(s: &Structure, p: &PrenexSentence) -> Result<HerVerdict> {
    require_signature(s, p)?;
    if p.signature().is_empty() || !p.signature().is_monadic() {
        return Err(Error::SignatureMismatch(format!(
            "{{{}}} is not a monadic signature",
            p.signature()
        )));
    }
    let bound = monadic_bound(p).min(s.size());
    let eval = SentenceEvaluator::new(p, s.signature())?;
    Ok(verdict(scan_subsets(s, &eval, Some(bound)), bound, Method::Monadic))
}
