//! Hereditary model checking: a structure `A` is in `HER(phi)` when every
//! non-empty induced substructure of `A` satisfies `phi`.
//!
//! [`her_check`] dispatches on the quantifier prefix:
//!
//! | prefix / signature | method |
//! |---|---|
//! | monadic signature | all substructures up to [`monadic_bound`] elements |
//! | `∀^k ∃^l` | all substructures up to `max(k, 1)` elements |
//! | `∀^k ∃ ∀^m` | the certifying order algorithm, [`algorithm1`] |
//! | anything else | exhaustive search, refused above a size cap |

mod alg1;
mod bruteforce;
mod collapse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::formula::{PrenexSentence, Quantifier, QuantifierPrefix, Var};
use crate::structure::{Signature, Structure};

pub use alg1::{algorithm1, build_snp, SnpSentence};
pub use bruteforce::{her_bruteforce, her_bruteforce_with};
pub use collapse::{collapse_check, collapse_rewrite, monadic_check};

/// Default largest structure the exhaustive fallback accepts.
pub const DEFAULT_MAX_BRUTE: usize = 22;

/// Environment variable overriding [`DEFAULT_MAX_BRUTE`].
pub const MAX_BRUTE_ENV: &str = "HERMC_MAX_BRUTE";

/// The case of the prefix classification a sentence falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TractabilityClass {
    /// Monadic signature: hereditary satisfaction is universally definable.
    PTimeMonadic,
    /// `∀*∃*`: collapses to small substructures.
    PTimeCollapse,
    /// `∀*∃∀*`: certifying polynomial-time algorithm.
    PTimeAlg1,
    /// Contains `∃∃∀` or `∃∀∃` as a subword; coNP-complete instances exist.
    HardPrefix,
}

impl TractabilityClass {
    /// The case of the classification that applies, in words.
    pub fn explanation(self) -> &'static str {
        match self {
            TractabilityClass::PTimeMonadic => {
                "monadic signature: it suffices to check substructures with at most 2^|τ| elements"
            }
            TractabilityClass::PTimeCollapse => {
                "prefix of the form ∀*∃*: hereditary satisfaction is universally definable"
            }
            TractabilityClass::PTimeAlg1 => {
                "prefix of the form ∀*∃∀*: polynomial time with an SNP order certificate"
            }
            TractabilityClass::HardPrefix => {
                "prefix contains ∃∃∀ or ∃∀∃: there are sentences with this prefix whose hereditary model checking is coNP-complete"
            }
        }
    }
}

impl fmt::Display for TractabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Classifies a prefix over a signature.
///
/// The empty signature counts as non-monadic here, so pure equality
/// sentences go through the prefix cases.
pub fn classify_prefix(q: &QuantifierPrefix, sig: &Signature) -> TractabilityClass {
    if !sig.is_empty() && sig.is_monadic() {
        TractabilityClass::PTimeMonadic
    } else if q.is_forall_exists() {
        TractabilityClass::PTimeCollapse
    } else if q.is_forall_exists_forall() {
        TractabilityClass::PTimeAlg1
    } else {
        use Quantifier::*;
        debug_assert!(
            q.contains_subword(&[Exists, Exists, Forall]) || q.contains_subword(&[Exists, Forall, Exists])
        );
        TractabilityClass::HardPrefix
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Collapse,
    Alg1,
    Monadic,
    Bruteforce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Collapse => "collapse",
            Method::Alg1 => "alg1",
            Method::Monadic => "monadic",
            Method::Bruteforce => "bruteforce",
        })
    }
}

/// Work counters attached to a verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HerStats {
    /// Substructures on which the sentence (or its `∃∀*` part) was evaluated.
    pub substructures: u64,
    /// Parameter tuples for which an order was built.
    pub orders: u64,
    /// Set when the verdict came from the exponential fallback.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerVerdict {
    pub hereditary: bool,
    pub certificate: Certificate,
    pub method: Method,
    pub stats: HerStats,
}

/// Knobs for [`her_check_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerOptions {
    /// Largest domain the exhaustive fallback accepts.
    pub max_brute: usize,
    /// Run the exhaustive fallback regardless of size.
    pub force: bool,
}

impl Default for HerOptions {
    /// Reads the cap from `HERMC_MAX_BRUTE` when set to a number.
    fn default() -> Self {
        let max_brute = std::env::var(MAX_BRUTE_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_BRUTE);
        HerOptions {
            max_brute,
            force: false,
        }
    }
}

/// Number of substructure sizes that must be checked for a monadic
/// sentence: `2^|τ|`, times the number of variables if equality occurs.
///
/// Without equality a substructure satisfies the same sentences as its
/// restriction to one element per atomic type. With equality, a sentence
/// with `q` variables cannot distinguish `q` elements of a type from more,
/// so `q` representatives per type suffice.
pub fn monadic_bound(p: &PrenexSentence) -> usize {
    let types = 1usize
        .checked_shl(p.signature().len() as u32)
        .unwrap_or(usize::MAX);
    if p.matrix().uses_equality() {
        types.saturating_mul(p.prefix().len().max(1))
    } else {
        types
    }
}

fn require_signature(s: &Structure, p: &PrenexSentence) -> Result<()> {
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

/// Splits a `∀^k ∃ ∀^m` sentence into its parameters, the existential
/// variable and the trailing universal variables.
pub fn split_forall_exists_forall(p: &PrenexSentence) -> Result<(Vec<Var>, Var, Vec<Var>)> {
    let q = p.quantifier_prefix();
    if !q.is_forall_exists_forall() {
        return Err(Error::WrongPrefix {
            expected: "∀*∃∀*".into(),
            found: q.to_string(),
        });
    }
    let k = q.leading_universals();
    let vars = p.variables();
    Ok((vars[..k].to_vec(), vars[k].clone(), vars[k + 1..].to_vec()))
}

/// Decides hereditary satisfaction with default options.
pub fn her_check(s: &Structure, p: &PrenexSentence) -> Result<HerVerdict> {
    her_check_with(s, p, &HerOptions::default())
}

/// Decides hereditary satisfaction, choosing the method by
/// [`classify_prefix`].
pub fn her_check_with(s: &Structure, p: &PrenexSentence, options: &HerOptions) -> Result<HerVerdict> {
    require_signature(s, p)?;
    match classify_prefix(&p.quantifier_prefix(), p.signature()) {
        TractabilityClass::PTimeMonadic => monadic_check(s, p),
        TractabilityClass::PTimeCollapse => collapse_check(s, p),
        TractabilityClass::PTimeAlg1 => algorithm1(s, p),
        TractabilityClass::HardPrefix => {
            if s.size() > options.max_brute && !options.force {
                return Err(Error::ScaleRefused {
                    size: s.size(),
                    limit: options.max_brute,
                });
            }
            let mut verdict = her_bruteforce(s, p)?;
            verdict.stats.warning = Some(format!(
                "prefix {} has no polynomial-time method; used exhaustive search over {} elements",
                p.quantifier_prefix(),
                s.size()
            ));
            Ok(verdict)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sentence;

    fn prefix(s: &str) -> QuantifierPrefix {
        s.parse().unwrap()
    }

    #[test]
    fn classification_examples() {
        let e = Signature::digraph();
        assert_eq!(classify_prefix(&prefix("AAEE"), &e), TractabilityClass::PTimeCollapse);
        assert_eq!(classify_prefix(&prefix("EAA"), &e), TractabilityClass::PTimeAlg1);
        assert_eq!(classify_prefix(&prefix("EEA"), &e), TractabilityClass::HardPrefix);
        assert_eq!(classify_prefix(&prefix("EAE"), &e), TractabilityClass::HardPrefix);
        assert_eq!(classify_prefix(&prefix("AE"), &e), TractabilityClass::PTimeCollapse);
        let u = Signature::new([("U", 1)]).unwrap();
        assert_eq!(classify_prefix(&prefix("EEA"), &u), TractabilityClass::PTimeMonadic);
        assert_eq!(
            classify_prefix(&prefix("A"), &Signature::default()),
            TractabilityClass::PTimeCollapse
        );
    }

    #[test]
    fn dispatch() {
        let e = Signature::digraph();
        let sink = parse_sentence("exists x. forall y. ~E(x,y)", &e).unwrap();
        let p3 = Structure::digraph(3, &[(1, 2), (2, 3)]).unwrap();
        let v = her_check(&p3, &sink).unwrap();
        assert!(v.hereditary);
        assert_eq!(v.method, Method::Alg1);

        let refl = parse_sentence("forall x. x = x", &Signature::default()).unwrap();
        let v = her_check(&p3, &refl).unwrap();
        assert!(v.hereditary);
        assert_eq!(v.method, Method::Collapse);
    }

    #[test]
    fn hard_prefix_respects_cap() {
        let e = Signature::digraph();
        let p = parse_sentence("exists x,y. forall a. ~E(x,a) | E(x,y) & E(y,x)", &e).unwrap();
        let big = Structure::digraph(5, &[]).unwrap();
        let opts = HerOptions {
            max_brute: 4,
            force: false,
        };
        assert_eq!(
            her_check_with(&big, &p, &opts).unwrap_err(),
            Error::ScaleRefused { size: 5, limit: 4 }
        );
        let forced = HerOptions { force: true, ..opts };
        let v = her_check_with(&big, &p, &forced).unwrap();
        assert!(v.hereditary);
        assert!(v.stats.warning.is_some());
    }

    #[test]
    fn monadic_bound_counts_types() {
        let u = Signature::new([("U", 1), ("W", 1)]).unwrap();
        let p = parse_sentence("exists x. U(x)", &u).unwrap();
        assert_eq!(monadic_bound(&p), 4);
        let p = parse_sentence("exists x,y. x != y & U(x)", &u).unwrap();
        assert_eq!(monadic_bound(&p), 8);
    }
}
