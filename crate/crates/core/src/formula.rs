//! First-order syntax: variables, formulas, quantifier prefixes and prenex
//! sentences.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::structure::Signature;

/// A variable name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Var {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var(s.to_string())
    }
}

impl From<String> for Var {
    fn from(s: String) -> Var {
        Var(s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Quantifier::Exists => '∃',
            Quantifier::Forall => '∀',
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

/// First-order formulas over a relational signature with equality.
///
/// `Degree` is the macro `deg_R(x) = k` (or `!= k` when `negated`): `x` has
/// exactly `k` distinct `R`-neighbours other than itself, in either direction.
/// It is expanded to plain first-order logic before prenexing or evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom { rel: String, args: Vec<Var> },
    Eq(Var, Var),
    Degree {
        rel: String,
        var: Var,
        k: usize,
        negated: bool,
    },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: &str, args: &[&str]) -> Formula {
        Formula::Atom {
            rel: rel.to_string(),
            args: args.iter().map(|&a| Var::from(a)).collect(),
        }
    }

    pub fn atom_vars(rel: &str, args: Vec<Var>) -> Formula {
        Formula::Atom {
            rel: rel.to_string(),
            args,
        }
    }

    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    pub fn neq(a: impl Into<Var>, b: impl Into<Var>) -> Formula {
        Formula::not(Formula::eq(a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; the empty conjunction is `true`, a singleton is unwrapped.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; the empty disjunction is `false`, a singleton is unwrapped.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn quant(q: Quantifier, vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Quant(q, vars, Box::new(body))
        }
    }

    pub fn exists(vars: &[&str], body: Formula) -> Formula {
        Formula::quant(
            Quantifier::Exists,
            vars.iter().map(|&v| Var::from(v)).collect(),
            body,
        )
    }

    pub fn forall(vars: &[&str], body: Formula) -> Formula {
        Formula::quant(
            Quantifier::Forall,
            vars.iter().map(|&v| Var::from(v)).collect(),
            body,
        )
    }

    /// Free variables in sorted order.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        let mut note = |v: &'a Var, bound: &Vec<&'a Var>| {
            if !bound.contains(&v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => args.iter().for_each(|v| note(v, bound)),
            Formula::Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Degree { var, .. } => note(var, bound),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, vars, body) => {
                let before = bound.len();
                bound.extend(vars.iter());
                body.collect_free(bound, out);
                bound.truncate(before);
            }
        }
    }

    pub fn has_free_var(&self, v: &Var) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom { args, .. } => args.contains(v),
            Formula::Eq(a, b) => a == v || b == v,
            Formula::Degree { var, .. } => var == v,
            Formula::Not(f) => f.has_free_var(v),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.has_free_var(v)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.has_free_var(v) || b.has_free_var(v),
            Formula::Quant(_, vars, body) => !vars.contains(v) && body.has_free_var(v),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Quant(..) | Formula::Degree { .. } => false,
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
        }
    }

    /// Whether an equality atom occurs (degree macros count, since they
    /// expand to equalities).
    pub fn uses_equality(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Degree { .. } => true,
            Formula::True | Formula::False | Formula::Atom { .. } => false,
            Formula::Not(f) | Formula::Quant(_, _, f) => f.uses_equality(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(Formula::uses_equality),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.uses_equality() || b.uses_equality(),
        }
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Degree { var, .. } => {
                out.insert(var.clone());
            }
            Formula::Quant(_, vars, _) => out.extend(vars.iter().cloned()),
            _ => {}
        });
        out
    }

    /// Relation symbols used, with the number of arguments at each use.
    pub fn relation_uses(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.visit(&mut |f| match f {
            Formula::Atom { rel, args } => out.push((rel.clone(), args.len())),
            Formula::Degree { rel, .. } => out.push((rel.clone(), 2)),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Quant(_, _, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Checks that every relation symbol exists in `sig` with matching arity.
    pub fn check_signature(&self, sig: &Signature) -> Result<()> {
        for (rel, found) in self.relation_uses() {
            match sig.arity(&rel) {
                None => return Err(Error::UnknownSymbol(rel)),
                Some(expected) if expected != found => {
                    return Err(Error::ArityMismatch {
                        name: rel,
                        expected,
                        found,
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Replaces free occurrences of variables according to `map`.
    ///
    /// Binders are not renamed; callers must ensure the replacement variables
    /// are not captured (true for the quantifier-free matrices this is used on).
    pub fn substitute(&self, map: &HashMap<Var, Var>) -> Formula {
        let sub = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom { rel, args } => Formula::Atom {
                rel: rel.clone(),
                args: args.iter().map(sub).collect(),
            },
            Formula::Eq(a, b) => Formula::Eq(sub(a), sub(b)),
            Formula::Degree {
                rel,
                var,
                k,
                negated,
            } => Formula::Degree {
                rel: rel.clone(),
                var: sub(var),
                k: *k,
                negated: *negated,
            },
            Formula::Not(f) => Formula::not(f.substitute(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(map), b.substitute(map)),
            Formula::Quant(q, vars, body) => {
                let inner: HashMap<Var, Var> = map
                    .iter()
                    .filter(|(k, _)| !vars.contains(k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                Formula::Quant(*q, vars.clone(), Box::new(body.substitute(&inner)))
            }
        }
    }
}

/// A word over `{∃, ∀}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QuantifierPrefix(Vec<Quantifier>);

impl QuantifierPrefix {
    pub fn new(word: Vec<Quantifier>) -> QuantifierPrefix {
        QuantifierPrefix(word)
    }

    pub fn quantifiers(&self) -> &[Quantifier] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word with `∃` and `∀` exchanged.
    pub fn dual(&self) -> QuantifierPrefix {
        QuantifierPrefix(self.0.iter().map(|q| q.dual()).collect())
    }

    /// Number of leading universal quantifiers.
    pub fn leading_universals(&self) -> usize {
        self.0
            .iter()
            .take_while(|&&q| q == Quantifier::Forall)
            .count()
    }

    /// `∀^k ∃^l` for some `k, l`.
    pub fn is_forall_exists(&self) -> bool {
        let k = self.leading_universals();
        self.0[k..].iter().all(|&q| q == Quantifier::Exists)
    }

    /// `∀^k ∃ ∀^m` for some `k, m`.
    pub fn is_forall_exists_forall(&self) -> bool {
        let k = self.leading_universals();
        self.0.get(k) == Some(&Quantifier::Exists)
            && self.0[k + 1..].iter().all(|&q| q == Quantifier::Forall)
    }

    pub fn contains_subword(&self, word: &[Quantifier]) -> bool {
        // scattered subword: the letters occur in order, not necessarily adjacent
        let mut it = self.0.iter();
        word.iter().all(|w| it.any(|q| q == w))
    }

    pub fn contains_universal(&self) -> bool {
        self.0.contains(&Quantifier::Forall)
    }
}

impl std::str::FromStr for QuantifierPrefix {
    type Err = Error;

    /// Accepts `E`/`A`, `∃`/`∀`, ignoring whitespace, commas and `*`-free text.
    fn from_str(s: &str) -> Result<QuantifierPrefix> {
        let mut word = Vec::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                'E' | 'e' | '∃' => word.push(Quantifier::Exists),
                'A' | 'a' | '∀' => word.push(Quantifier::Forall),
                c if c.is_whitespace() || c == ',' => {}
                other => {
                    return Err(Error::Syntax {
                        line: 1,
                        column: i + 1,
                        message: format!("unexpected `{other}` in quantifier prefix"),
                    })
                }
            }
        }
        Ok(QuantifierPrefix(word))
    }
}

impl fmt::Display for QuantifierPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.0 {
            write!(f, "{}", q.symbol())?;
        }
        Ok(())
    }
}

/// A sentence `Q1 x1 ... Qn xn. matrix` with a quantifier-free matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrenexSentence {
    signature: Signature,
    prefix: Vec<(Quantifier, Var)>,
    matrix: Formula,
}

impl PrenexSentence {
    pub fn new(
        signature: Signature,
        prefix: Vec<(Quantifier, Var)>,
        matrix: Formula,
    ) -> Result<PrenexSentence> {
        if !matrix.is_quantifier_free() {
            return Err(Error::Precondition(
                "matrix of a prenex sentence must be quantifier-free".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for (_, v) in &prefix {
            if !seen.insert(v.clone()) {
                return Err(Error::Precondition(format!(
                    "variable `{v}` quantified twice"
                )));
            }
        }
        if let Some(v) = matrix.free_vars().into_iter().find(|v| !seen.contains(v)) {
            return Err(Error::FreeVariable(v.name().to_string()));
        }
        matrix.check_signature(&signature)?;
        Ok(PrenexSentence {
            signature,
            prefix,
            matrix,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn prefix(&self) -> &[(Quantifier, Var)] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn variables(&self) -> Vec<Var> {
        self.prefix.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn quantifier_prefix(&self) -> QuantifierPrefix {
        QuantifierPrefix(self.prefix.iter().map(|(q, _)| *q).collect())
    }

    /// The sentence as an ordinary formula, one quantifier node per block.
    pub fn to_formula(&self) -> Formula {
        let mut body = self.matrix.clone();
        let mut i = self.prefix.len();
        while i > 0 {
            let q = self.prefix[i - 1].0;
            let mut j = i;
            while j > 0 && self.prefix[j - 1].0 == q {
                j -= 1;
            }
            let vars = self.prefix[j..i].iter().map(|(_, v)| v.clone()).collect();
            body = Formula::Quant(q, vars, Box::new(body));
            i = j;
        }
        body
    }

    /// The negation, with dual prefix and negated matrix. A negated matrix
    /// loses its negation instead of gaining a second one.
    pub fn negate(&self) -> PrenexSentence {
        let matrix = match &self.matrix {
            Formula::Not(inner) => (**inner).clone(),
            m => Formula::not(m.clone()),
        };
        PrenexSentence {
            signature: self.signature.clone(),
            prefix: self.prefix.iter().map(|(q, v)| (q.dual(), v.clone())).collect(),
            matrix,
        }
    }

    /// Same sentence over a larger signature.
    pub fn with_signature(&self, signature: Signature) -> Result<PrenexSentence> {
        if !self.signature.is_subsignature_of(&signature) {
            return Err(Error::SignatureMismatch(format!(
                "{{{}}} is not contained in {{{signature}}}",
                self.signature
            )));
        }
        Ok(PrenexSentence {
            signature,
            ..self.clone()
        })
    }
}

/// A formula with exactly one free variable, used to relativize sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardFormula {
    var: Var,
    formula: Formula,
}

impl GuardFormula {
    pub fn new(formula: Formula) -> Result<GuardFormula> {
        let free = formula.free_vars();
        if free.len() != 1 {
            return Err(Error::Precondition(format!(
                "guard must have exactly one free variable, found {}",
                free.len()
            )));
        }
        let var = free.into_iter().next().unwrap();
        Ok(GuardFormula { var, formula })
    }

    /// The guard `name(x)` for a unary predicate.
    pub fn predicate(name: &str) -> GuardFormula {
        GuardFormula {
            var: Var::from("x"),
            formula: Formula::atom(name, &["x"]),
        }
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// The guard applied to `v`; bound variables of the guard are assumed
    /// not to clash with `v`.
    pub fn apply(&self, v: &Var) -> Formula {
        let map = HashMap::from([(self.var.clone(), v.clone())]);
        self.formula.substitute(&map)
    }

    pub fn negated(&self) -> GuardFormula {
        GuardFormula {
            var: self.var.clone(),
            formula: Formula::not(self.formula.clone()),
        }
    }
}
