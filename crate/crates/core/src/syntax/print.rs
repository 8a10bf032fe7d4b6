//! Printing formulas in the surface syntax accepted by the parser.

use std::fmt::{self, Write};

use crate::formula::{Formula, PrenexSentence};
use crate::structure::Structure;

// Binding strength; quantifiers bind weakest because their body extends to
// the right as far as possible.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Quant(..) => QUANT,
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(_) => OR,
        Formula::And(_) => AND,
        Formula::Not(inner) if matches!(**inner, Formula::Eq(..)) => ATOM,
        Formula::Not(_) => UNARY,
        _ => ATOM,
    }
}

/// Prints `f` so that parsing the output yields `f` again.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f).expect("writing to a String");
    out
}

/// Prints a prenex sentence in block form, e.g. `exists x. forall y. ~E(x,y)`.
pub fn print_sentence(p: &PrenexSentence) -> String {
    print_formula(&p.to_formula())
}

fn child(out: &mut String, f: &Formula, min: u8) -> fmt::Result {
    if level(f) < min {
        out.push('(');
        write_formula(out, f)?;
        out.push(')');
        Ok(())
    } else {
        write_formula(out, f)
    }
}

fn write_formula(out: &mut String, f: &Formula) -> fmt::Result {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom { rel, args } => {
            write!(out, "{rel}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(a.name());
            }
            out.push(')');
        }
        Formula::Eq(a, b) => write!(out, "{a} = {b}")?,
        Formula::Degree {
            rel,
            var,
            k,
            negated,
        } => write!(out, "deg_{rel}({var}) {} {k}", if *negated { "!=" } else { "=" })?,
        Formula::Not(inner) => match &**inner {
            Formula::Eq(a, b) => write!(out, "{a} != {b}")?,
            g => {
                out.push('~');
                child(out, g, UNARY)?;
            }
        },
        Formula::And(parts) | Formula::Or(parts) => {
            let (op, lvl) = if matches!(f, Formula::And(_)) {
                (" & ", AND)
            } else {
                (" | ", OR)
            };
            if parts.is_empty() {
                out.push_str(if lvl == AND { "true" } else { "false" });
            }
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(op);
                }
                // same-operator children are parenthesized to keep the tree shape
                child(out, p, lvl + 1)?;
            }
        }
        Formula::Implies(a, b) => {
            child(out, a, IMPLIES + 1)?;
            out.push_str(" -> ");
            child(out, b, IMPLIES + 1)?;
        }
        Formula::Iff(a, b) => {
            child(out, a, IFF + 1)?;
            out.push_str(" <-> ");
            child(out, b, IFF + 1)?;
        }
        Formula::Quant(q, vars, body) => {
            write!(out, "{} ", q.keyword())?;
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(v.name());
            }
            out.push_str(". ");
            write_formula(out, body)?;
        }
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for PrenexSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_sentence(self))
    }
}

/// Prints a structure in the structure file format, optionally preceded by
/// `#` comment lines.
pub fn print_structure(s: &Structure, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    let _ = writeln!(out, "signature {}", s.signature());
    let _ = writeln!(out, "domain {}", s.size());
    for (name, rel) in s.relations() {
        for t in rel.tuples() {
            out.push_str(name);
            for e in t {
                let _ = write!(out, " {e}");
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse::{parse_formula_untyped, parse_structure};

    #[test]
    fn structure_round_trip() {
        let s = Structure::digraph(3, &[(1, 2), (3, 1)]).unwrap();
        let text = print_structure(&s, &["c3 minus one arc".into()]);
        assert_eq!(text, "# c3 minus one arc\nsignature E/2\ndomain 3\nE 1 2\nE 3 1\n");
        assert_eq!(parse_structure(&text).unwrap(), s);
    }

    fn round_trip(text: &str) {
        let f = parse_formula_untyped(text).unwrap();
        let printed = print_formula(&f);
        assert_eq!(parse_formula_untyped(&printed).unwrap(), f, "{printed}");
    }

    #[test]
    fn sink_prints_canonically() {
        let f = parse_formula_untyped("exists x.forall y.~E(x,y)").unwrap();
        assert_eq!(print_formula(&f), "exists x. forall y. ~E(x,y)");
    }

    #[test]
    fn round_trips() {
        for text in [
            "exists x,y. forall a. (~E(x,a) | (E(x,y) & E(y,x)))",
            "(exists x. E(x,x)) | (exists y. E(y,y))",
            "a = b -> c = d -> e = f",
            "(a = b -> c = d) -> e = f",
            "(a = b <-> c = d) <-> e = f",
            "~~(x != y) & ~(exists z. E(z,z))",
            "(A(x) & B(x)) & C(x)",
            "(A(x) | B(x)) | (C(x) & D(x))",
            "deg_EQ(x) != 1 | deg_EQ(y) = 2",
            "true & ~false",
        ] {
            round_trip(text);
        }
    }
}
