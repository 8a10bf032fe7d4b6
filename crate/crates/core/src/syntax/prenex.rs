//! Macro expansion, renaming apart and prenex conversion.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::formula::{Formula, PrenexSentence, Quantifier, QuantifierPrefix, Var};
use crate::structure::Signature;

/// Generates variable names `{prefix}1, {prefix}2, ...` avoiding `taken`.
#[derive(Debug, Clone)]
pub struct FreshVars {
    prefix: String,
    next: usize,
    taken: BTreeSet<Var>,
}

impl FreshVars {
    pub fn new(prefix: &str, taken: BTreeSet<Var>) -> FreshVars {
        FreshVars {
            prefix: prefix.to_string(),
            next: 1,
            taken,
        }
    }

    pub fn fresh(&mut self) -> Var {
        loop {
            let v = Var::new(format!("{}{}", self.prefix, self.next));
            self.next += 1;
            if self.taken.insert(v.clone()) {
                return v;
            }
        }
    }

    pub fn reserve(&mut self, v: &Var) {
        self.taken.insert(v.clone());
    }
}

/// Replaces every `deg_R(x) = k` / `deg_R(x) != k` by plain first-order logic.
///
/// `deg_R(x) = k` says that exactly `k` elements `y != x` satisfy
/// `R(x,y) | R(y,x)`. Fresh variables are named `_d1, _d2, ...`.
pub fn expand_macros(f: &Formula) -> Formula {
    let mut fresh = FreshVars::new("_d", f.all_vars());
    expand_with(f, &mut fresh)
}

fn expand_with(f: &Formula, fresh: &mut FreshVars) -> Formula {
    match f {
        Formula::Degree {
            rel,
            var,
            k,
            negated,
        } => {
            let exact = degree_exactly(rel, var, *k, fresh);
            if *negated {
                Formula::not(exact)
            } else {
                exact
            }
        }
        Formula::Not(g) => Formula::not(expand_with(g, fresh)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| expand_with(g, fresh)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| expand_with(g, fresh)).collect()),
        Formula::Implies(a, b) => {
            Formula::implies(expand_with(a, fresh), expand_with(b, fresh))
        }
        Formula::Iff(a, b) => Formula::iff(expand_with(a, fresh), expand_with(b, fresh)),
        Formula::Quant(q, vs, body) => {
            Formula::Quant(*q, vs.clone(), Box::new(expand_with(body, fresh)))
        }
        other => other.clone(),
    }
}

fn neighbour(rel: &str, x: &Var, y: &Var) -> Formula {
    Formula::and(vec![
        Formula::neq(y.clone(), x.clone()),
        Formula::or(vec![
            Formula::atom_vars(rel, vec![x.clone(), y.clone()]),
            Formula::atom_vars(rel, vec![y.clone(), x.clone()]),
        ]),
    ])
}

fn degree_exactly(rel: &str, x: &Var, k: usize, fresh: &mut FreshVars) -> Formula {
    let ys: Vec<Var> = (0..k).map(|_| fresh.fresh()).collect();
    let z = fresh.fresh();
    let mut parts = Vec::new();
    for (i, yi) in ys.iter().enumerate() {
        parts.push(neighbour(rel, x, yi));
        for yj in &ys[..i] {
            parts.push(Formula::neq(yj.clone(), yi.clone()));
        }
    }
    let covered = Formula::or(ys.iter().map(|y| Formula::eq(z.clone(), y.clone())).collect());
    parts.push(Formula::quant(
        Quantifier::Forall,
        vec![z.clone()],
        Formula::implies(neighbour(rel, x, &z), covered),
    ));
    Formula::quant(Quantifier::Exists, ys, Formula::and(parts))
}

/// Rewrites `->` and `<->` with `~`, `&`, `|`.
pub fn eliminate_implications(f: &Formula) -> Formula {
    match f {
        Formula::Implies(a, b) => Formula::Or(vec![
            Formula::not(eliminate_implications(a)),
            eliminate_implications(b),
        ]),
        Formula::Iff(a, b) => {
            let (a, b) = (eliminate_implications(a), eliminate_implications(b));
            Formula::And(vec![
                Formula::Or(vec![Formula::not(a.clone()), b.clone()]),
                Formula::Or(vec![a, Formula::not(b)]),
            ])
        }
        Formula::Not(g) => Formula::not(eliminate_implications(g)),
        Formula::And(gs) => Formula::And(gs.iter().map(eliminate_implications).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(eliminate_implications).collect()),
        Formula::Quant(q, vs, body) => {
            Formula::Quant(*q, vs.clone(), Box::new(eliminate_implications(body)))
        }
        other => other.clone(),
    }
}

/// Renames bound variables so that no two binders share a name and no bound
/// name is also free. A binder keeps its name unless it clashes; clashing
/// binders get fresh names `v1, v2, ...` unused anywhere in `f`.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut fresh = FreshVars::new("v", f.all_vars());
    let mut used: BTreeSet<Var> = f.free_vars();
    rename_with(f, &mut used, &mut fresh)
}

fn rename_with(f: &Formula, used: &mut BTreeSet<Var>, fresh: &mut FreshVars) -> Formula {
    match f {
        Formula::Quant(q, vs, body) => {
            let mut map = HashMap::new();
            let mut new_vs = Vec::with_capacity(vs.len());
            for v in vs {
                if used.contains(v) || map.contains_key(v) {
                    let w = fresh.fresh();
                    used.insert(w.clone());
                    map.insert(v.clone(), w.clone());
                    new_vs.push(w);
                } else {
                    used.insert(v.clone());
                    new_vs.push(v.clone());
                }
            }
            let body = if map.is_empty() {
                (**body).clone()
            } else {
                body.substitute(&map)
            };
            Formula::Quant(*q, new_vs, Box::new(rename_with(&body, used, fresh)))
        }
        Formula::Not(g) => Formula::not(rename_with(g, used, fresh)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_with(g, used, fresh)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_with(g, used, fresh)).collect()),
        Formula::Implies(a, b) => {
            let a = rename_with(a, used, fresh);
            Formula::implies(a, rename_with(b, used, fresh))
        }
        Formula::Iff(a, b) => {
            let a = rename_with(a, used, fresh);
            Formula::iff(a, rename_with(b, used, fresh))
        }
        other => other.clone(),
    }
}

fn pull(f: &Formula) -> (Vec<(Quantifier, Var)>, Formula) {
    match f {
        Formula::Quant(q, vs, body) => {
            let (mut prefix, matrix) = pull(body);
            let mut out: Vec<(Quantifier, Var)> = vs.iter().map(|v| (*q, v.clone())).collect();
            out.append(&mut prefix);
            (out, matrix)
        }
        Formula::Not(g) => {
            let (prefix, matrix) = pull(g);
            (
                prefix.into_iter().map(|(q, v)| (q.dual(), v)).collect(),
                Formula::not(matrix),
            )
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let mut prefix = Vec::new();
            let mut parts = Vec::with_capacity(gs.len());
            for g in gs {
                let (mut p, m) = pull(g);
                prefix.append(&mut p);
                parts.push(m);
            }
            let matrix = if matches!(f, Formula::And(_)) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            };
            (prefix, matrix)
        }
        other => (Vec::new(), other.clone()),
    }
}

/// Converts a sentence to prenex form.
///
/// Degree macros are expanded, implications eliminated, bound variables
/// renamed apart, and quantifiers pulled out left to right over the tree.
/// A sentence that is already prenex comes back unchanged.
pub fn to_prenex(f: &Formula, signature: &Signature) -> Result<PrenexSentence> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::FreeVariable(v.name().to_string()));
    }
    f.check_signature(signature)?;
    let g = rename_apart(&eliminate_implications(&expand_macros(f)));
    let (prefix, matrix) = pull(&g);
    PrenexSentence::new(signature.clone(), prefix, matrix)
}

/// The quantifier word of a prenex sentence.
pub fn extract_prefix(p: &PrenexSentence) -> QuantifierPrefix {
    p.quantifier_prefix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse::parse_formula_untyped;
    use crate::syntax::print::print_sentence;

    fn prenex(text: &str) -> PrenexSentence {
        let f = parse_formula_untyped(text).unwrap();
        let sig = crate::syntax::parse::infer_signature(&f).unwrap();
        to_prenex(&f, &sig).unwrap()
    }

    #[test]
    fn prenex_input_unchanged() {
        let p = prenex("exists x. forall y. ~E(x,y)");
        assert_eq!(print_sentence(&p), "exists x. forall y. ~E(x,y)");
        assert_eq!(extract_prefix(&p).to_string(), "∃∀");
    }

    #[test]
    fn disjunction_of_existentials() {
        let p = prenex("(exists x. E(x,x)) | (exists y. E(y,y))");
        assert_eq!(print_sentence(&p), "exists x,y. E(x,x) | E(y,y)");
    }

    #[test]
    fn clashing_binders_are_renamed() {
        let p = prenex("(exists x. E(x,x)) & (forall x. E(x,x))");
        assert_eq!(print_sentence(&p), "exists x. forall v1. E(x,x) & E(v1,v1)");
    }

    #[test]
    fn negation_flips_quantifiers() {
        let p = prenex("~(exists x. forall y. E(x,y)) -> forall z. E(z,z)");
        assert_eq!(extract_prefix(&p).to_string(), "∃∀∀");
    }

    #[test]
    fn free_variables_rejected() {
        let f = parse_formula_untyped("E(x,x)").unwrap();
        assert_eq!(
            to_prenex(&f, &Signature::digraph()).unwrap_err(),
            Error::FreeVariable("x".into())
        );
    }

    #[test]
    fn degree_macro_shape() {
        let f = expand_macros(&parse_formula_untyped("deg_E(x) = 2").unwrap());
        let Formula::Quant(Quantifier::Exists, ys, _) = &f else {
            panic!("{f}")
        };
        assert_eq!(ys.len(), 2);
        assert_eq!(f.free_vars(), BTreeSet::from([Var::from("x")]));
    }
}
