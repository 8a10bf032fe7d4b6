use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use super::{require_signature, split_forall_exists_forall, HerStats, HerVerdict, Method};
use crate::certificate::{next_tuple, Certificate, ParamOrder};
use crate::error::Result;
use crate::eval::CompiledFormula;
use crate::formula::{Formula, PrenexSentence, Quantifier, Var};
use crate::structure::{Signature, Structure};
use crate::syntax::prenex::FreshVars;
use crate::syntax::print_formula;

/// The SNP sentence `exists L forall x̄, y, x̄', u, v, w. matrix` equivalent
/// to hereditary satisfaction of a `∀^k ∃ ∀^m` sentence.
///
/// The matrix is `Lin(x̄) & (/\_i L(x̄, y, x_i) -> psi)` where `i` ranges
/// over all `k + m` variables other than `y`, and `Lin(x̄)` states with the
/// extra universal variables `u, v, w` that `L(x̄, ., .)` is a reflexive
/// linear order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnpSentence {
    pub relation: String,
    pub arity: usize,
    pub universals: Vec<Var>,
    pub matrix: Formula,
    signature: Signature,
}

impl SnpSentence {
    /// The first-order part as a universal sentence over `τ ∪ {L}`.
    pub fn first_order_part(&self) -> Result<PrenexSentence> {
        let prefix = self
            .universals
            .iter()
            .map(|v| (Quantifier::Forall, v.clone()))
            .collect();
        PrenexSentence::new(self.signature.clone(), prefix, self.matrix.clone())
    }
}

impl fmt::Display for SnpSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<&str> = self.universals.iter().map(|v| v.name()).collect();
        write!(
            f,
            "exists {}/{}. forall {}. {}",
            self.relation,
            self.arity,
            vars.join(","),
            print_formula(&self.matrix)
        )
    }
}

/// Builds the SNP sentence for a `∀^k ∃ ∀^m` sentence; `L` has arity `k + 2`.
pub fn build_snp(p: &PrenexSentence) -> Result<SnpSentence> {
    let (params, y, rest) = split_forall_exists_forall(p)?;
    let mut relation = "L".to_string();
    let mut i = 0;
    while p.signature().contains(&relation) {
        i += 1;
        relation = format!("L{i}");
    }
    let arity = params.len() + 2;
    let signature = p.signature().with_symbol(&relation, arity)?;

    let taken: BTreeSet<Var> = p.variables().into_iter().chain(p.matrix().all_vars()).collect();
    let mut fresh = FreshVars::new("u", taken);
    let (u, v, w) = (fresh.fresh(), fresh.fresh(), fresh.fresh());
    let l = |b: &Var, c: &Var| {
        let mut args = params.clone();
        args.push(b.clone());
        args.push(c.clone());
        Formula::atom_vars(&relation, args)
    };
    let lin = Formula::and(vec![
        l(&u, &u),
        Formula::or(vec![l(&u, &v), l(&v, &u)]),
        Formula::implies(
            Formula::and(vec![l(&u, &v), l(&v, &u)]),
            Formula::Eq(u.clone(), v.clone()),
        ),
        Formula::implies(Formula::and(vec![l(&u, &v), l(&v, &w)]), l(&u, &w)),
    ]);
    let guard = Formula::and(params.iter().chain(&rest).map(|x| l(&y, x)).collect());
    let matrix = Formula::and(vec![lin, Formula::implies(guard, p.matrix().clone())]);

    let mut universals = params.clone();
    universals.push(y);
    universals.extend(rest);
    universals.extend([u, v, w]);
    Ok(SnpSentence {
        relation,
        arity,
        universals,
        matrix,
        signature,
    })
}

enum Outcome {
    Order(Vec<usize>),
    Counterexample(Vec<usize>),
}

/// The repeat loop for one parameter tuple: repeatedly remove the least
/// witness for `y` from the remaining elements, until a parameter itself
/// is removed or nothing is left. No witness means the remaining elements
/// induce a counterexample.
fn run_params(s: &Structure, phi: &CompiledFormula, params: &[usize], steps: &mut u64) -> Outcome {
    let n = s.size();
    let mut removed = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut args = params.to_vec();
    args.push(0);
    loop {
        let remaining: Vec<usize> = (1..=n).filter(|&e| !removed[e]).collect();
        *steps += 1;
        let witness = remaining.iter().copied().find(|&b| {
            args[params.len()] = b;
            phi.eval(s, &remaining, &args)
        });
        let Some(b) = witness else {
            return Outcome::Counterexample(remaining);
        };
        removed[b] = true;
        order.push(b);
        if params.contains(&b) || order.len() == n {
            break;
        }
    }
    order.extend((1..=n).filter(|&e| !removed[e]));
    Outcome::Order(order)
}

/// The certifying algorithm for `∀^k ∃ ∀^m` sentences.
///
/// Returns a counterexample subset for the first parameter tuple (in
/// lexicographic order) whose loop fails, and otherwise an order
/// certificate with one order per tuple. Witnesses are always the least
/// eligible element, so the output is deterministic; tuples are processed
/// in parallel.
pub fn algorithm1(s: &Structure, p: &PrenexSentence) -> Result<HerVerdict> {
    require_signature(s, p)?;
    let (params, y, rest) = split_forall_exists_forall(p)?;
    let k = params.len();
    let mut free = params;
    free.push(y);
    let body = Formula::quant(Quantifier::Forall, rest, p.matrix().clone());
    let phi = CompiledFormula::new(&body, &free, s.signature())?;

    let n = s.size();
    let mut tuples = Vec::new();
    let mut t = vec![1usize; k];
    loop {
        tuples.push(t.clone());
        if !next_tuple(&mut t, n) {
            break;
        }
    }
    let outcomes: Vec<(Outcome, u64)> = tuples
        .par_iter()
        .map(|a| {
            let mut steps = 0;
            let o = run_params(s, &phi, a, &mut steps);
            (o, steps)
        })
        .collect();

    let substructures = outcomes.iter().map(|(_, st)| st).sum();
    let mut orders = Vec::with_capacity(tuples.len());
    for ((outcome, _), params) in outcomes.into_iter().zip(tuples) {
        match outcome {
            Outcome::Order(order) => orders.push(ParamOrder { params, order }),
            Outcome::Counterexample(subset) => {
                return Ok(HerVerdict {
                    hereditary: false,
                    certificate: Certificate::Counterexample { subset },
                    method: Method::Alg1,
                    stats: HerStats {
                        substructures,
                        orders: orders.len() as u64,
                        warning: None,
                    },
                })
            }
        }
    }
    Ok(HerVerdict {
        hereditary: true,
        stats: HerStats {
            substructures,
            orders: orders.len() as u64,
            warning: None,
        },
        certificate: Certificate::Order { k, orders },
        method: Method::Alg1,
    })
}
