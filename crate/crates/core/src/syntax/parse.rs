//! Recursive-descent parser for formulas, plus the structure and formula
//! file formats.

use crate::error::{Error, Result};
use crate::formula::{Formula, Quantifier, Var};
use crate::structure::{Signature, Structure};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    Exists,
    Forall,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    LParen,
    RParen,
    Comma,
    Dot,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::End => "end of input".into(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| Error::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            });
            *i += width;
            *col += width;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '~' | '¬' => push(Tok::Not, 1, &mut i, &mut col),
            '&' | '∧' => push(Tok::And, 1, &mut i, &mut col),
            '|' | '∨' => push(Tok::Or, 1, &mut i, &mut col),
            '→' => push(Tok::Implies, 1, &mut i, &mut col),
            '↔' => push(Tok::Iff, 1, &mut i, &mut col),
            '∃' => push(Tok::Exists, 1, &mut i, &mut col),
            '∀' => push(Tok::Forall, 1, &mut i, &mut col),
            '≠' => push(Tok::Neq, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '-' if next == Some('>') => push(Tok::Implies, 2, &mut i, &mut col),
            '!' if next == Some('=') => push(Tok::Neq, 2, &mut i, &mut col),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3, &mut i, &mut col)
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| err(l0, c0, format!("number `{s}` out of range")))?;
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Num(n),
                    line: l0,
                    column: c0,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                let tok = match s.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(s),
                };
                out.push(Spanned {
                    tok,
                    line: l0,
                    column: c0,
                });
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line_offset: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> Error {
        let s = &self.toks[self.pos];
        Error::Syntax {
            line: s.line + self.line_offset,
            column: s.column,
            message,
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => {
                let q = if self.bump() == Tok::Exists {
                    Quantifier::Exists
                } else {
                    Quantifier::Forall
                };
                let mut vars = vec![Var::new(self.ident()?)];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    vars.push(Var::new(self.ident()?));
                }
                self.expect(Tok::Dot)?;
                // the body extends as far to the right as possible
                let body = self.formula()?;
                Ok(Formula::Quant(q, vars, Box::new(body)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = vec![Var::new(self.ident()?)];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(Var::new(self.ident()?));
                    }
                    self.expect(Tok::RParen)?;
                    if let Some(rel) = name.strip_prefix("deg_") {
                        if matches!(self.peek(), Tok::Eq | Tok::Neq) {
                            return self.degree(rel, args);
                        }
                    }
                    return Ok(Formula::Atom { rel: name, args });
                }
                let negated = match self.peek() {
                    Tok::Eq => false,
                    Tok::Neq => true,
                    other => {
                        return Err(self.error(format!(
                            "expected `(`, `=` or `!=` after `{name}`, found {}",
                            other.describe()
                        )))
                    }
                };
                self.bump();
                let rhs = Var::new(self.ident()?);
                let eq = Formula::Eq(Var::new(name), rhs);
                Ok(if negated { Formula::not(eq) } else { eq })
            }
            other => Err(self.error(format!("unexpected {}", other.describe()))),
        }
    }

    fn degree(&mut self, rel: &str, mut args: Vec<Var>) -> Result<Formula> {
        if args.len() != 1 {
            return Err(self.error("degree macro takes exactly one variable".into()));
        }
        let negated = self.bump() == Tok::Neq;
        let k = match self.bump() {
            Tok::Num(k) => k,
            other => {
                self.pos -= 1;
                return Err(self.error(format!("expected a number, found {}", other.describe())));
            }
        };
        Ok(Formula::Degree {
            rel: rel.to_string(),
            var: args.pop().unwrap(),
            k,
            negated,
        })
    }
}

fn parse_with_offset(text: &str, line_offset: usize) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        line_offset,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.error(format!("trailing input {}", p.peek().describe())));
    }
    Ok(f)
}

/// Parses a formula without consulting a signature.
pub fn parse_formula_untyped(text: &str) -> Result<Formula> {
    parse_with_offset(text, 0)
}

/// Parses a formula and checks its atoms against `signature`.
pub fn parse_formula(text: &str, signature: &Signature) -> Result<Formula> {
    let f = parse_formula_untyped(text)?;
    f.check_signature(signature)?;
    Ok(f)
}

/// The signature implied by the atoms of `f` (first use fixes the arity).
pub fn infer_signature(f: &Formula) -> Result<Signature> {
    let mut sig = Signature::default();
    for (rel, arity) in f.relation_uses() {
        match sig.arity(&rel) {
            Some(a) if a != arity => {
                return Err(Error::ArityMismatch {
                    name: rel,
                    expected: a,
                    found: arity,
                })
            }
            Some(_) => {}
            None => sig = sig.with_symbol(&rel, arity)?,
        }
    }
    Ok(sig)
}

/// Parses `NAME/ARITY, NAME/ARITY, ...`.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut symbols = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, arity) = part.split_once('/').ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected NAME/ARITY, found `{part}`"),
        })?;
        let name = name.trim();
        if name.is_empty()
            || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
            || name.starts_with(|c: char| c.is_ascii_digit())
        {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("invalid relation name `{name}`"),
            });
        }
        let arity: usize = arity.trim().parse().map_err(|_| Error::Syntax {
            line: 1,
            column: 1,
            message: format!("invalid arity in `{part}`"),
        })?;
        symbols.push((name.to_string(), arity));
    }
    Signature::new(symbols)
}

/// Parses a formula file: an optional header line `sig NAME/ARITY, ...`
/// followed by one sentence. Without a header the signature is `fallback`
/// if given, otherwise inferred from the atoms.
pub fn parse_formula_file(text: &str, fallback: Option<&Signature>) -> Result<(Signature, Formula)> {
    let mut header = None;
    let mut body_start = 0usize;
    let mut offset = 0usize;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("sig ") {
            header = Some(parse_signature(rest).map_err(|e| at_line(e, i + 1))?);
            body_start = text
                .lines()
                .take(i + 1)
                .map(|l| l.len() + 1)
                .sum::<usize>()
                .min(text.len());
            offset = i + 1;
        }
        break;
    }
    let f = parse_with_offset(&text[body_start..], offset)?;
    let sig = match (header, fallback) {
        (Some(h), _) => h,
        (None, Some(s)) => s.clone(),
        (None, None) => infer_signature(&f)?,
    };
    f.check_signature(&sig)?;
    Ok((sig, f))
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Syntax {
            column, message, ..
        } => Error::Syntax {
            line,
            column,
            message,
        },
        other => other,
    }
}

/// Parses the structure file format:
///
/// ```text
/// signature E/2, U/1
/// domain 3
/// E 1 2
/// U 3
/// ```
pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut signature: Option<Signature> = None;
    let mut size: Option<usize> = None;
    let mut tuples: Vec<(String, Vec<Vec<usize>>)> = Vec::new();
    let syntax = |line: usize, message: String| Error::Syntax {
        line,
        column: 1,
        message,
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "signature" => {
                if signature.is_some() {
                    return Err(syntax(line_no, "repeated signature line".into()));
                }
                let rest = line["signature".len()..].trim();
                signature = Some(parse_signature(rest).map_err(|e| at_line(e, line_no))?);
            }
            "domain" => {
                if size.is_some() {
                    return Err(syntax(line_no, "repeated domain line".into()));
                }
                let n = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| syntax(line_no, "expected `domain N`".into()))?;
                if words.next().is_some() {
                    return Err(syntax(line_no, "trailing input after domain size".into()));
                }
                size = Some(n);
            }
            name => {
                let sig = signature
                    .as_ref()
                    .ok_or_else(|| syntax(line_no, "tuple before signature line".into()))?;
                if size.is_none() {
                    return Err(syntax(line_no, "tuple before domain line".into()));
                }
                if !sig.contains(name) {
                    return Err(Error::UnknownSymbol(name.to_string()));
                }
                let tuple = words
                    .map(|w| {
                        w.parse::<usize>()
                            .map_err(|_| syntax(line_no, format!("invalid element `{w}`")))
                    })
                    .collect::<Result<Vec<usize>>>()?;
                match tuples.iter_mut().find(|(n, _)| n == name) {
                    Some((_, ts)) => ts.push(tuple),
                    None => tuples.push((name.to_string(), vec![tuple])),
                }
            }
        }
    }
    let signature = signature.ok_or_else(|| syntax(1, "missing signature line".into()))?;
    let size = size.ok_or_else(|| syntax(1, "missing domain line".into()))?;
    Structure::new(signature, size, tuples)
}
