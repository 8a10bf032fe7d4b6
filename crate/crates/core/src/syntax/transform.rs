//! Relativization of sentences to a guard and the disjunction `chi` built
//! from two relativized sentences.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::formula::{Formula, GuardFormula, PrenexSentence, Quantifier, Var};
use crate::structure::Signature;
use crate::syntax::prenex::{rename_apart, to_prenex, FreshVars};

/// Instantiates the guard at `v`, renaming the guard's bound variables away
/// from `avoid` first so nothing is captured.
fn guard_at(guard: &GuardFormula, v: &Var, avoid: &BTreeSet<Var>) -> Formula {
    let g = guard.formula();
    if g.is_quantifier_free() {
        return guard.apply(v);
    }
    let mut taken = avoid.clone();
    taken.extend(g.all_vars());
    taken.insert(v.clone());
    let mut fresh = FreshVars::new("_g", taken);
    let renamed = rename_binders(g, &mut fresh);
    let map = HashMap::from([(guard.var().clone(), v.clone())]);
    renamed.substitute(&map)
}

fn rename_binders(f: &Formula, fresh: &mut FreshVars) -> Formula {
    match f {
        Formula::Quant(q, vs, body) => {
            let map: HashMap<Var, Var> = vs.iter().map(|v| (v.clone(), fresh.fresh())).collect();
            let new_vs = vs.iter().map(|v| map[v].clone()).collect();
            let body = rename_binders(&body.substitute(&map), fresh);
            Formula::Quant(*q, new_vs, Box::new(body))
        }
        Formula::Not(g) => Formula::not(rename_binders(g, fresh)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_binders(g, fresh)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_binders(g, fresh)).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(rename_binders(a, fresh), rename_binders(b, fresh))
        }
        Formula::Iff(a, b) => Formula::iff(rename_binders(a, fresh), rename_binders(b, fresh)),
        other => other.clone(),
    }
}

/// The relativization `p_xi`: a structure satisfies it iff no element
/// satisfies the guard, or the substructure on the guard's elements
/// satisfies `p`.
///
/// All-existential sentences use `forall y. ~xi(y) | exists x. (/\ xi(x_i) & psi)`;
/// otherwise each quantifier keeps its position, universal positions guard
/// the matrix by implication and existential positions are conjoined, so
/// the prefix is unchanged whenever the guard is quantifier-free.
pub fn relativize(p: &PrenexSentence, guard: &GuardFormula) -> Result<PrenexSentence> {
    let signature = p.signature().union(&guard_signature(guard)?)?;
    let vars: BTreeSet<Var> = p.variables().into_iter().collect();
    let all_exists = p.prefix().iter().all(|(q, _)| *q == Quantifier::Exists);
    let formula = if all_exists {
        let mut taken = vars.clone();
        taken.extend(guard.formula().all_vars());
        let y = if taken.contains(&Var::from("y")) {
            FreshVars::new("y", taken.clone()).fresh()
        } else {
            Var::from("y")
        };
        let mut avoid = vars.clone();
        avoid.insert(y.clone());
        let mut conj: Vec<Formula> = p
            .variables()
            .iter()
            .map(|x| guard_at(guard, x, &avoid))
            .collect();
        conj.push(p.matrix().clone());
        Formula::quant(
            Quantifier::Forall,
            vec![y.clone()],
            Formula::Or(vec![
                Formula::not(guard_at(guard, &y, &avoid)),
                Formula::quant(Quantifier::Exists, p.variables(), Formula::and(conj)),
            ]),
        )
    } else {
        let mut universal = Vec::new();
        let mut existential = Vec::new();
        for (q, x) in p.prefix() {
            let g = guard_at(guard, x, &vars);
            match q {
                Quantifier::Forall => universal.push(g),
                Quantifier::Exists => existential.push(g),
            }
        }
        existential.push(p.matrix().clone());
        let mut body = Formula::implies(Formula::and(universal), Formula::and(existential));
        for (q, x) in p.prefix().iter().rev() {
            body = Formula::Quant(*q, vec![x.clone()], Box::new(body));
        }
        body
    };
    to_prenex(&formula, &signature)
}

fn guard_signature(guard: &GuardFormula) -> Result<Signature> {
    crate::syntax::parse::infer_signature(guard.formula())
}

/// The sentence `chi = (~phi)_U | psi_{~U}` over `tau ∪ sigma ∪ {U}` where
/// `phi` is over `tau` and `psi` over `sigma`.
///
/// The two relativized sentences have disjoint variables, so their
/// quantifiers may be interleaved freely; they are merged along a shortest
/// common supersequence of the two quantifier words. When both words have
/// the same block pattern (for instance when the prefix of `phi` is dual to
/// that of `psi`) the result has that block pattern too.
pub fn build_chi(phi: &PrenexSentence, psi: &PrenexSentence, u: &str) -> Result<PrenexSentence> {
    let tau = phi.signature();
    let sigma = psi.signature();
    if tau.contains(u) || sigma.contains(u) {
        return Err(Error::SignatureMismatch(format!(
            "guard symbol `{u}` already in use"
        )));
    }
    if let Some((clash, _)) = sigma.symbols().find(|(name, _)| tau.contains(name)) {
        return Err(Error::SignatureMismatch(format!(
            "symbol `{clash}` occurs in both sentences"
        )));
    }
    let guard = GuardFormula::predicate(u);
    let left = relativize(&phi.negate(), &guard)?;
    let right = relativize(psi, &guard.negated())?;
    let signature = tau.union(sigma)?.with_symbol(u, 1)?;

    // rename the right-hand variables apart from the left-hand ones
    let joined = rename_apart(&Formula::Or(vec![left.to_formula(), right.to_formula()]));
    let Formula::Or(mut parts) = joined else {
        unreachable!("rename_apart keeps the top-level disjunction")
    };
    let right = to_prenex(&parts.pop().unwrap(), &right.signature().clone())?;
    let left = to_prenex(&parts.pop().unwrap(), &left.signature().clone())?;

    let prefix = merge_prefixes(left.prefix(), right.prefix());
    let matrix = Formula::Or(vec![left.matrix().clone(), right.matrix().clone()]);
    PrenexSentence::new(signature, prefix, matrix)
}

/// A shortest interleaving of two prefixes that keeps each one's order.
fn merge_prefixes(a: &[(Quantifier, Var)], b: &[(Quantifier, Var)]) -> Vec<(Quantifier, Var)> {
    let (n, m) = (a.len(), b.len());
    // scs[i][j]: length of a shortest common supersequence of a[i..] and b[j..]
    let mut scs = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            scs[i][j] = if i == n {
                m - j
            } else if j == m {
                n - i
            } else if a[i].0 == b[j].0 {
                1 + scs[i + 1][j + 1]
            } else {
                1 + scs[i + 1][j].min(scs[i][j + 1])
            };
        }
    }
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(n + m);
    while i < n || j < m {
        if i < n && j < m && a[i].0 == b[j].0 {
            // both letters land in the same position of the word
            out.push(a[i].clone());
            out.push(b[j].clone());
            i += 1;
            j += 1;
        } else if j == m || (i < n && scs[i + 1][j] <= scs[i][j + 1]) {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out
}

/// Collapses a quantifier word into its block pattern, e.g. `∃∃∀∃` to `∃∀∃`.
pub fn block_pattern(word: &[Quantifier]) -> Vec<Quantifier> {
    let mut out: Vec<Quantifier> = Vec::new();
    for &q in word {
        if out.last() != Some(&q) {
            out.push(q);
        }
    }
    out
}
