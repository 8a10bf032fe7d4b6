//! Hereditary first-order model checking.
//!
//! A finite structure `A` hereditarily satisfies a sentence `phi` when every
//! non-empty induced substructure of `A` satisfies `phi`. The decision
//! procedure depends on the quantifier prefix of `phi`:
//!
//! * `∀*∃*` sentences collapse to a check of all substructures with at most
//!   `k` elements, `k` the number of universal quantifiers;
//! * `∀*∃∀*` sentences are decided by a certifying polynomial-time algorithm
//!   that outputs either a falsifying substructure or a family of linear
//!   orders;
//! * over monadic signatures it suffices to look at substructures with at
//!   most `2^|τ|` elements (more with equality, see [`hereditary::monadic_bound`]);
//! * prefixes containing `∃∃∀` or `∃∀∃` admit coNP-complete instances and
//!   fall back to exhaustive search.
//!
//! ```
//! use hermc::{her_check, parse_sentence, Signature, Structure};
//!
//! let sink = parse_sentence("exists x. forall y. ~E(x,y)", &Signature::digraph()).unwrap();
//! let path = Structure::digraph(3, &[(1, 2), (2, 3)]).unwrap();
//! let cycle = Structure::digraph(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
//! assert!(her_check(&path, &sink).unwrap().hereditary);
//! assert!(!her_check(&cycle, &sink).unwrap().hereditary);
//! ```

pub mod certificate;
pub mod corpus;
pub mod cycles;
pub mod error;
pub mod eval;
pub mod formula;
pub mod hereditary;
pub mod hom;
pub mod reductions;
pub mod structure;
pub mod syntax;

pub use certificate::{Certificate, CertificateFile};
pub use cycles::every_cycle_has_symmetric_edge;
pub use error::{Error, Result};
pub use eval::{eval_fo, eval_sentence, CompiledFormula, SentenceEvaluator};
pub use formula::{Formula, GuardFormula, PrenexSentence, Quantifier, QuantifierPrefix, Var};
pub use hereditary::{
    algorithm1, classify_prefix, collapse_check, her_bruteforce, her_check, monadic_check,
    HerOptions, HerVerdict, Method, TractabilityClass,
};
pub use hom::find_homomorphism;
pub use reductions::CnfInstance;
pub use structure::{Signature, Structure};
pub use syntax::{parse_formula, parse_sentence, parse_structure, print_formula, to_prenex};
