//! Surface syntax: parsing, printing, prenex conversion and the sentence
//! transformations (relativization, `chi`).

pub mod parse;
pub mod prenex;
pub mod print;
pub mod transform;

pub use parse::{
    infer_signature, parse_formula, parse_formula_file, parse_formula_untyped, parse_signature,
    parse_structure,
};
pub use prenex::{expand_macros, extract_prefix, to_prenex};
pub use print::{print_formula, print_sentence, print_structure};
pub use transform::{build_chi, relativize};

use crate::error::Result;
use crate::formula::PrenexSentence;
use crate::structure::Signature;

/// Parses a sentence and converts it to prenex form.
pub fn parse_sentence(text: &str, signature: &Signature) -> Result<PrenexSentence> {
    to_prenex(&parse_formula(text, signature)?, signature)
}
