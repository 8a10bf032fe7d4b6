//! First-order model checking over finite structures.
//!
//! Formulas are compiled to slot-indexed trees. The default compiler puts the
//! formula in negation normal form and pushes quantifiers inward
//! (miniscoping); [`CompiledFormula::naive`] keeps the formula exactly as
//! written and serves as the baseline the optimized route is tested against.
//! Evaluation runs over a slice of domain elements, so a substructure is
//! evaluated in place without being materialized.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, PrenexSentence, Quantifier, Var};
use crate::structure::{Signature, Structure};
use crate::syntax::prenex::expand_macros;

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Atom { rel: usize, slots: Vec<usize> },
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
}

/// Step counter for budgeted evaluation.
trait Meter {
    fn tick(&mut self) -> bool;
}

struct Unlimited;

impl Meter for Unlimited {
    #[inline(always)]
    fn tick(&mut self) -> bool {
        true
    }
}

struct Budget(u64);

impl Meter for Budget {
    #[inline]
    fn tick(&mut self) -> bool {
        if self.0 == 0 {
            false
        } else {
            self.0 -= 1;
            true
        }
    }
}

/// A formula compiled against a structure signature, with designated free
/// variables occupying the first slots.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    root: Node,
    free: Vec<Var>,
    slots: usize,
}

impl CompiledFormula {
    /// Compiles with negation normal form and miniscoping.
    pub fn new(f: &Formula, free: &[Var], signature: &Signature) -> Result<CompiledFormula> {
        let f = expand_macros(f);
        let f = miniscope(&nnf(&f, false));
        Self::compile(&f, free, signature)
    }

    /// Compiles the formula as written (macros are still expanded).
    pub fn naive(f: &Formula, free: &[Var], signature: &Signature) -> Result<CompiledFormula> {
        Self::compile(&expand_macros(f), free, signature)
    }

    fn compile(f: &Formula, free: &[Var], signature: &Signature) -> Result<CompiledFormula> {
        let mut scope: Vec<(Var, usize)> = free
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        if let Some(v) = f.free_vars().into_iter().find(|v| !free.contains(v)) {
            return Err(Error::Unassigned(v.name().to_string()));
        }
        let mut slots = free.len();
        let root = compile_node(f, signature, &mut scope, &mut slots)?;
        Ok(CompiledFormula {
            root,
            free: free.to_vec(),
            slots,
        })
    }

    pub fn free_vars(&self) -> &[Var] {
        &self.free
    }

    /// Truth value in the substructure on `domain` (elements of `s`, sorted or
    /// not, non-empty) with the free variables set to `args`.
    pub fn eval(&self, s: &Structure, domain: &[usize], args: &[usize]) -> bool {
        let mut vals = self.frame(args);
        eval_node(&self.root, s, domain, &mut vals, &mut Unlimited).unwrap_or(false)
    }

    /// Like [`eval`](Self::eval) but gives up after `budget` quantifier steps.
    pub fn eval_budgeted(
        &self,
        s: &Structure,
        domain: &[usize],
        args: &[usize],
        budget: u64,
    ) -> Option<bool> {
        let mut vals = self.frame(args);
        eval_node(&self.root, s, domain, &mut vals, &mut Budget(budget))
    }

    fn frame(&self, args: &[usize]) -> Vec<usize> {
        assert_eq!(args.len(), self.free.len(), "one value per free variable");
        let mut vals = vec![0usize; self.slots.max(1)];
        vals[..args.len()].copy_from_slice(args);
        vals
    }
}

fn compile_node(
    f: &Formula,
    sig: &Signature,
    scope: &mut Vec<(Var, usize)>,
    slots: &mut usize,
) -> Result<Node> {
    let lookup = |scope: &Vec<(Var, usize)>, v: &Var| -> Result<usize> {
        scope
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::Unassigned(v.name().to_string()))
    };
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Atom { rel, args } => {
            let idx = sig
                .index_of(rel)
                .ok_or_else(|| Error::UnknownSymbol(rel.clone()))?;
            let arity = sig.arity(rel).unwrap();
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    name: rel.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            Node::Atom {
                rel: idx,
                slots: args
                    .iter()
                    .map(|a| lookup(scope, a))
                    .collect::<Result<_>>()?,
            }
        }
        Formula::Eq(a, b) => Node::Eq(lookup(scope, a)?, lookup(scope, b)?),
        Formula::Degree { .. } => {
            unreachable!("degree macros are expanded before compilation")
        }
        Formula::Not(g) => Node::Not(Box::new(compile_node(g, sig, scope, slots)?)),
        Formula::And(gs) => Node::And(
            gs.iter()
                .map(|g| compile_node(g, sig, scope, slots))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(gs) => Node::Or(
            gs.iter()
                .map(|g| compile_node(g, sig, scope, slots))
                .collect::<Result<_>>()?,
        ),
        Formula::Implies(a, b) => Node::Implies(
            Box::new(compile_node(a, sig, scope, slots)?),
            Box::new(compile_node(b, sig, scope, slots)?),
        ),
        Formula::Iff(a, b) => Node::Iff(
            Box::new(compile_node(a, sig, scope, slots)?),
            Box::new(compile_node(b, sig, scope, slots)?),
        ),
        Formula::Quant(q, vars, body) => {
            let before = scope.len();
            let mut ids = Vec::with_capacity(vars.len());
            for v in vars {
                scope.push((v.clone(), *slots));
                ids.push(*slots);
                *slots += 1;
            }
            let mut node = compile_node(body, sig, scope, slots)?;
            scope.truncate(before);
            for &id in ids.iter().rev() {
                node = match q {
                    Quantifier::Exists => Node::Exists(id, Box::new(node)),
                    Quantifier::Forall => Node::Forall(id, Box::new(node)),
                };
            }
            node
        }
    })
}

fn eval_node<M: Meter>(
    n: &Node,
    s: &Structure,
    dom: &[usize],
    vals: &mut [usize],
    meter: &mut M,
) -> Option<bool> {
    Some(match n {
        Node::Const(b) => *b,
        Node::Atom { rel, slots } => s
            .relation_at(*rel)
            .contains_iter(slots.iter().map(|&i| vals[i])),
        Node::Eq(a, b) => vals[*a] == vals[*b],
        Node::Not(g) => !eval_node(g, s, dom, vals, meter)?,
        Node::And(gs) => {
            for g in gs {
                if !eval_node(g, s, dom, vals, meter)? {
                    return Some(false);
                }
            }
            true
        }
        Node::Or(gs) => {
            for g in gs {
                if eval_node(g, s, dom, vals, meter)? {
                    return Some(true);
                }
            }
            false
        }
        Node::Implies(a, b) => !eval_node(a, s, dom, vals, meter)? || eval_node(b, s, dom, vals, meter)?,
        Node::Iff(a, b) => eval_node(a, s, dom, vals, meter)? == eval_node(b, s, dom, vals, meter)?,
        Node::Exists(slot, body) => {
            for &e in dom {
                if !meter.tick() {
                    return None;
                }
                vals[*slot] = e;
                if eval_node(body, s, dom, vals, meter)? {
                    return Some(true);
                }
            }
            false
        }
        Node::Forall(slot, body) => {
            for &e in dom {
                if !meter.tick() {
                    return None;
                }
                vals[*slot] = e;
                if !eval_node(body, s, dom, vals, meter)? {
                    return Some(false);
                }
            }
            true
        }
    })
}

/// Negation normal form: implications removed, negations on atoms only.
pub fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::True => Formula::from_bool(!negate),
        Formula::False => Formula::from_bool(negate),
        Formula::Atom { .. } | Formula::Eq(..) | Formula::Degree { .. } => {
            if negate {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(g) => nnf(g, !negate),
        Formula::And(gs) | Formula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf(g, negate)).collect();
            if matches!(f, Formula::And(_)) != negate {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if negate {
                // ~(a -> b) = a & ~b
                Formula::And(vec![nnf(a, false), nnf(b, true)])
            } else {
                Formula::Or(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            let (pa, na, pb, nb) = (nnf(a, false), nnf(a, true), nnf(b, false), nnf(b, true));
            if negate {
                Formula::Or(vec![Formula::And(vec![pa, nb]), Formula::And(vec![na, pb])])
            } else {
                Formula::Or(vec![Formula::And(vec![pa, pb]), Formula::And(vec![na, nb])])
            }
        }
        Formula::Quant(q, vars, body) => {
            let q = if negate { q.dual() } else { *q };
            Formula::Quant(q, vars.clone(), Box::new(nnf(body, negate)))
        }
    }
}

impl Formula {
    pub fn from_bool(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }
}

/// Pushes quantifiers inward over a formula in negation normal form.
/// Valid on non-empty domains.
pub fn miniscope(f: &Formula) -> Formula {
    match f {
        Formula::And(gs) => flatten(true, gs.iter().map(miniscope).collect()),
        Formula::Or(gs) => flatten(false, gs.iter().map(miniscope).collect()),
        Formula::Quant(q, vars, body) => {
            let mut out = miniscope(body);
            for v in vars.iter().rev() {
                out = push_quantifier(*q, v, out);
            }
            out
        }
        other => other.clone(),
    }
}

fn flatten(conj: bool, parts: Vec<Formula>) -> Formula {
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        match p {
            Formula::And(inner) if conj => out.extend(inner),
            Formula::Or(inner) if !conj => out.extend(inner),
            other => out.push(other),
        }
    }
    if conj {
        Formula::and(out)
    } else {
        Formula::or(out)
    }
}

fn push_quantifier(q: Quantifier, v: &Var, f: Formula) -> Formula {
    if !f.has_free_var(v) {
        return f;
    }
    let (conj, parts) = match f {
        Formula::And(gs) => (true, gs),
        Formula::Or(gs) => (false, gs),
        other => return Formula::Quant(q, vec![v.clone()], Box::new(other)),
    };
    // forall over & and exists over | distribute
    if conj == (q == Quantifier::Forall) {
        return flatten(conj, parts.into_iter().map(|g| push_quantifier(q, v, g)).collect());
    }
    let (with, without): (Vec<Formula>, Vec<Formula>) =
        parts.into_iter().partition(|g| g.has_free_var(v));
    if without.is_empty() {
        let inner = if conj { Formula::And(with) } else { Formula::Or(with) };
        return Formula::Quant(q, vec![v.clone()], Box::new(inner));
    }
    let inner = if conj { Formula::and(with) } else { Formula::or(with) };
    let mut out = without;
    out.push(push_quantifier(q, v, inner));
    flatten(conj, out)
}

fn free_list(f: &Formula, assignment: &BTreeMap<Var, usize>) -> Result<(Vec<Var>, Vec<usize>)> {
    let mut vars = Vec::new();
    let mut vals = Vec::new();
    for v in f.free_vars() {
        match assignment.get(&v) {
            Some(&e) => {
                vars.push(v);
                vals.push(e);
            }
            None => return Err(Error::Unassigned(v.name().to_string())),
        }
    }
    Ok((vars, vals))
}

/// Tarskian truth of `f` in `s` under `assignment` (1-based elements).
pub fn eval_fo(s: &Structure, f: &Formula, assignment: &BTreeMap<Var, usize>) -> Result<bool> {
    let (vars, vals) = free_list(f, assignment)?;
    if let Some(&bad) = vals.iter().find(|&&e| e == 0 || e > s.size()) {
        return Err(Error::OutOfRange {
            element: bad,
            size: s.size(),
        });
    }
    let c = CompiledFormula::new(f, &vars, s.signature())?;
    Ok(c.eval(s, &s.domain(), &vals))
}

/// Baseline evaluation of `f` as written, without normalization.
pub fn eval_fo_naive(
    s: &Structure,
    f: &Formula,
    assignment: &BTreeMap<Var, usize>,
) -> Result<bool> {
    let (vars, vals) = free_list(f, assignment)?;
    let c = CompiledFormula::naive(f, &vars, s.signature())?;
    Ok(c.eval(s, &s.domain(), &vals))
}

fn check_signature(s: &Structure, p: &PrenexSentence) -> Result<()> {
    if p.signature().is_subsignature_of(s.signature()) {
        Ok(())
    } else {
        Err(Error::SignatureMismatch(format!(
            "sentence over {{{}}} but structure over {{{}}}",
            p.signature(),
            s.signature()
        )))
    }
}

/// Truth of a prenex sentence in `s`.
pub fn eval_sentence(s: &Structure, p: &PrenexSentence) -> Result<bool> {
    Ok(SentenceEvaluator::new(p, s.signature())?.holds(s))
}

/// A sentence compiled once for repeated evaluation on substructures of
/// structures over one signature.
#[derive(Debug, Clone)]
pub struct SentenceEvaluator {
    compiled: CompiledFormula,
}

impl SentenceEvaluator {
    pub fn new(p: &PrenexSentence, signature: &Signature) -> Result<SentenceEvaluator> {
        if !p.signature().is_subsignature_of(signature) {
            return Err(Error::SignatureMismatch(format!(
                "sentence over {{{}}} but structure over {{{signature}}}",
                p.signature()
            )));
        }
        Ok(SentenceEvaluator {
            compiled: CompiledFormula::new(&p.to_formula(), &[], signature)?,
        })
    }

    /// Nested loops over the prefix, matrix evaluated as written.
    pub fn naive(p: &PrenexSentence, signature: &Signature) -> Result<SentenceEvaluator> {
        if !p.signature().is_subsignature_of(signature) {
            return Err(Error::SignatureMismatch(format!(
                "sentence over {{{}}} but structure over {{{signature}}}",
                p.signature()
            )));
        }
        Ok(SentenceEvaluator {
            compiled: CompiledFormula::naive(&p.to_formula(), &[], signature)?,
        })
    }

    pub fn holds(&self, s: &Structure) -> bool {
        self.compiled.eval(s, &s.domain(), &[])
    }

    /// Truth in the substructure induced on `subset` (non-empty).
    pub fn holds_on(&self, s: &Structure, subset: &[usize]) -> bool {
        debug_assert!(!subset.is_empty());
        self.compiled.eval(s, subset, &[])
    }

    pub fn holds_budgeted(&self, s: &Structure, subset: &[usize], budget: u64) -> Option<bool> {
        self.compiled.eval_budgeted(s, subset, &[], budget)
    }
}

/// Naive evaluation of a prenex sentence; the trusted baseline.
pub fn eval_sentence_naive(s: &Structure, p: &PrenexSentence) -> Result<bool> {
    check_signature(s, p)?;
    Ok(SentenceEvaluator::naive(p, s.signature())?.holds(s))
}

/// Builds an assignment from `(variable, element)` pairs.
pub fn assignment<const N: usize>(pairs: [(&str, usize); N]) -> BTreeMap<Var, usize> {
    pairs.iter().map(|&(v, e)| (Var::from(v), e)).collect()
}
