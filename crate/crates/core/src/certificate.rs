//! Certificates for hereditary model checking and their verification.
//!
//! A negative verdict ships the subset of a falsifying substructure. A
//! positive verdict of the `∀*∃∀*` algorithm ships one linear order of the
//! domain per tuple of universal parameters; the relation
//! `L(a, b, c) :<=> b <=_a c` derived from the orders satisfies the
//! first-order part of the SNP sentence built by
//! [`build_snp`](crate::hereditary::build_snp). Positive verdicts of the
//! exhaustive methods record the size bound up to which every substructure
//! was checked.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::eval::{CompiledFormula, SentenceEvaluator};
use crate::formula::{Formula, PrenexSentence, Quantifier};
use crate::hereditary::{monadic_bound, split_forall_exists_forall};
use crate::structure::{Structure, Subsets};
use crate::syntax::print_sentence;

/// The order for one tuple of parameters, listed from least to greatest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamOrder {
    pub params: Vec<usize>,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Certificate {
    /// A non-empty subset inducing a substructure that falsifies the sentence.
    Counterexample { subset: Vec<usize> },
    /// One order per `k`-tuple over the domain, tuples in lexicographic order.
    Order { k: usize, orders: Vec<ParamOrder> },
    /// Every substructure with at most `bound` elements satisfies the sentence.
    Exhaustive { bound: usize },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Counterexample { .. } => "counterexample",
            Certificate::Order { .. } => "order",
            Certificate::Exhaustive { .. } => "exhaustive",
        }
    }

    /// Checks the certificate against `s` and `p`.
    pub fn verify(&self, s: &Structure, p: &PrenexSentence) -> Result<bool> {
        match self {
            Certificate::Counterexample { subset } => verify_counterexample(s, p, subset),
            Certificate::Order { .. } => verify_order_certificate(s, p, self),
            Certificate::Exhaustive { bound } => verify_exhaustive(s, p, *bound),
        }
    }

    /// The tuples `(a, b, c)` of the relation `L` encoded by an order
    /// certificate: `b` is at or before `c` in the order for `a`.
    pub fn l_relation(&self) -> Result<Vec<Vec<usize>>> {
        let Certificate::Order { orders, .. } = self else {
            return Err(Error::Certificate("not an order certificate".into()));
        };
        let mut tuples = Vec::new();
        for entry in orders {
            for (i, &b) in entry.order.iter().enumerate() {
                for &c in &entry.order[i..] {
                    let mut t = entry.params.clone();
                    t.push(b);
                    t.push(c);
                    tuples.push(t);
                }
            }
        }
        Ok(tuples)
    }
}

/// True iff the substructure induced on `subset` falsifies `p`.
pub fn verify_counterexample(s: &Structure, p: &PrenexSentence, subset: &[usize]) -> Result<bool> {
    let subset = s.normalize_subset(subset)?;
    let eval = SentenceEvaluator::naive(p, s.signature())?;
    Ok(!eval.holds(&s.induced_substructure(&subset)?))
}

/// Checks the shape invariants of an order certificate: all `n^k` tuples
/// present once in lexicographic order, each order a permutation.
fn check_order_shape(n: usize, k: usize, orders: &[ParamOrder]) -> Result<()> {
    let expected = n
        .checked_pow(k as u32)
        .ok_or_else(|| Error::Certificate("too many parameter tuples".into()))?;
    if orders.len() != expected {
        return Err(Error::Certificate(format!(
            "expected {expected} parameter tuples, found {}",
            orders.len()
        )));
    }
    let mut params = vec![1usize; k];
    for (idx, entry) in orders.iter().enumerate() {
        if entry.params != params {
            return Err(Error::Certificate(format!(
                "entry {idx} has parameters {:?}, expected {params:?}",
                entry.params
            )));
        }
        let distinct: BTreeSet<usize> = entry.order.iter().copied().collect();
        if entry.order.len() != n || distinct.len() != n || distinct.iter().any(|&e| e == 0 || e > n) {
            return Err(Error::Certificate(format!(
                "order for {:?} is not a permutation of 1..={n}",
                entry.params
            )));
        }
        next_tuple(&mut params, n);
    }
    Ok(())
}

/// Advances `t` to the next tuple over `1..=n` in lexicographic order.
/// Returns false after the last tuple.
pub(crate) fn next_tuple(t: &mut [usize], n: usize) -> bool {
    for i in (0..t.len()).rev() {
        if t[i] < n {
            t[i] += 1;
            return true;
        }
        t[i] = 1;
    }
    false
}

/// Checks the first-order part of the SNP sentence on the expansion of `s`
/// by the orders in `c`: for every parameter tuple `a` and every `b`, if
/// `b` precedes all remaining variables' values then the matrix holds.
///
/// Evaluated as: for each `a` and each `b` no later than every coordinate
/// of `a`, the formula `forall x_{k+1}..x_n. psi(a, b, x)` must hold with
/// the universal variables ranging over the elements at or after `b`.
pub fn verify_order_certificate(s: &Structure, p: &PrenexSentence, c: &Certificate) -> Result<bool> {
    let Certificate::Order { k, orders } = c else {
        return Err(Error::Certificate("not an order certificate".into()));
    };
    let (params, y, rest) = split_forall_exists_forall(p)?;
    if params.len() != *k {
        return Err(Error::Certificate(format!(
            "certificate has {k} parameters but the sentence has {}",
            params.len()
        )));
    }
    let n = s.size();
    check_order_shape(n, *k, orders)?;
    let mut free = params.clone();
    free.push(y.clone());
    let body = Formula::quant(Quantifier::Forall, rest.clone(), p.matrix().clone());
    let phi = CompiledFormula::naive(&body, &free, s.signature())?;
    let mut args = vec![0usize; k + 1];
    let mut pos = vec![0usize; n + 1];
    for entry in orders {
        for (i, &e) in entry.order.iter().enumerate() {
            pos[e] = i;
        }
        args[..*k].copy_from_slice(&entry.params);
        for (i, &b) in entry.order.iter().enumerate() {
            if entry.params.iter().any(|&a| pos[a] < i) {
                continue;
            }
            args[*k] = b;
            if !phi.eval(s, &entry.order[i..], &args) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The number of elements up to which substructures must be checked for a
/// positive exhaustive verdict to be conclusive.
pub fn required_bound(s: &Structure, p: &PrenexSentence) -> usize {
    let q = p.quantifier_prefix();
    let n = s.size();
    if !p.signature().is_empty() && p.signature().is_monadic() {
        monadic_bound(p).min(n)
    } else if q.is_forall_exists() {
        q.leading_universals().max(1).min(n)
    } else {
        n
    }
}

/// Re-checks all substructures up to `bound` elements, after checking that
/// `bound` suffices for the sentence.
pub fn verify_exhaustive(s: &Structure, p: &PrenexSentence, bound: usize) -> Result<bool> {
    if bound < required_bound(s, p) {
        return Ok(false);
    }
    let eval = SentenceEvaluator::new(p, s.signature())?;
    Ok(Subsets::new(s.size(), Some(bound)).all(|sub| eval.holds_on(s, &sub)))
}

/// SHA-256 (hex) of the printed sentence; ties a certificate file to it.
pub fn formula_hash(p: &PrenexSentence) -> String {
    hex::encode(Sha256::digest(print_sentence(p).as_bytes()))
}

/// The serialized form: the certificate plus the domain size and formula
/// hash it was issued for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    #[serde(flatten)]
    pub certificate: Certificate,
    pub domain_size: usize,
    pub formula_hash: String,
}

impl CertificateFile {
    pub fn new(certificate: Certificate, s: &Structure, p: &PrenexSentence) -> CertificateFile {
        CertificateFile {
            certificate,
            domain_size: s.size(),
            formula_hash: formula_hash(p),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<CertificateFile> {
        serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))
    }

    /// Verifies against `s` and `p`, rejecting a file issued for a different
    /// sentence or domain size.
    pub fn verify(&self, s: &Structure, p: &PrenexSentence) -> Result<bool> {
        if self.formula_hash != formula_hash(p) {
            return Err(Error::Certificate(
                "formula hash does not match the sentence".into(),
            ));
        }
        if self.domain_size != s.size() {
            return Err(Error::Certificate(format!(
                "issued for a domain of size {}, structure has {}",
                self.domain_size,
                s.size()
            )));
        }
        self.certificate.verify(s, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;
    use crate::syntax::parse_sentence;

    fn sink() -> PrenexSentence {
        parse_sentence("exists x. forall y. ~E(x,y)", &Signature::digraph()).unwrap()
    }

    fn order(o: &[usize]) -> Certificate {
        Certificate::Order {
            k: 0,
            orders: vec![ParamOrder {
                params: vec![],
                order: o.to_vec(),
            }],
        }
    }

    #[test]
    fn sink_orders_on_a_single_arc() {
        let p2 = Structure::digraph(2, &[(1, 2)]).unwrap();
        assert!(verify_order_certificate(&p2, &sink(), &order(&[2, 1])).unwrap());
        assert!(!verify_order_certificate(&p2, &sink(), &order(&[1, 2])).unwrap());
        let one = Structure::digraph(1, &[]).unwrap();
        assert!(verify_order_certificate(&one, &sink(), &order(&[1])).unwrap());
    }

    #[test]
    fn malformed_orders_are_rejected() {
        let p2 = Structure::digraph(2, &[(1, 2)]).unwrap();
        assert!(verify_order_certificate(&p2, &sink(), &order(&[2, 2])).is_err());
        assert!(verify_order_certificate(&p2, &sink(), &order(&[1])).is_err());
    }

    #[test]
    fn counterexamples_on_c3() {
        let c3 = Structure::digraph(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert!(verify_counterexample(&c3, &sink(), &[1, 2, 3]).unwrap());
        assert!(!verify_counterexample(&c3, &sink(), &[1, 2]).unwrap());
        assert!(verify_counterexample(&c3, &sink(), &[]).is_err());
        assert!(verify_counterexample(&c3, &sink(), &[4]).is_err());
    }

    #[test]
    fn l_relation_is_reflexive_order() {
        let l = order(&[2, 1, 3]).l_relation().unwrap();
        assert_eq!(
            l,
            vec![vec![2, 2], vec![2, 1], vec![2, 3], vec![1, 1], vec![1, 3], vec![3, 3]]
        );
    }

    #[test]
    fn json_round_trip_and_field_names() {
        let c3 = Structure::digraph(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let file = CertificateFile::new(
            Certificate::Counterexample {
                subset: vec![1, 2, 3],
            },
            &c3,
            &sink(),
        );
        let json = file.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["type"], "counterexample");
        assert_eq!(value["domain_size"], 3);
        assert_eq!(value["subset"], serde_json::json!([1, 2, 3]));
        assert_eq!(value["formula_hash"].as_str().unwrap().len(), 64);
        assert_eq!(CertificateFile::from_json(&json).unwrap(), file);
        assert!(file.verify(&c3, &sink()).unwrap());

        let other = parse_sentence("exists x. forall y. ~E(y,x)", &Signature::digraph()).unwrap();
        assert!(file.verify(&c3, &other).is_err());
    }

    #[test]
    fn exhaustive_bound_must_suffice() {
        let p3 = Structure::digraph(3, &[(1, 2), (2, 3)]).unwrap();
        assert!(verify_exhaustive(&p3, &sink(), 3).unwrap());
        assert!(!verify_exhaustive(&p3, &sink(), 2).unwrap());
    }
}
