//! The modal formula language: parsing, sort checking and evaluation.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! formula := or
//! or      := and { "or" and }
//! and     := unary { "and" unary }
//! unary   := "not" unary | "[[" NAME "]]" unary | "[" NAME "]" unary
//!          | "<" NAME ">" unary | atom
//! atom    := "true" | "false" | NAME | "(" formula ")"
//! NAME    := [A-Za-z_][A-Za-z0-9_]*        (keywords are reserved)
//! ```
//!
//! `[R] f` is the believes modality (every `R`-successor satisfies `f`),
//! `<R> f` its possibility dual, and `[[R]] f` the assumes modality: the
//! `R`-image is exactly the extension of `f`. Negation and disjunction
//! are included so that diagonal predicates such as `not q` are
//! expressible; [`Formula::is_regular`] identifies the fragment built
//! from `true`, atoms, `and` and `<R>` only.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{BeliefStructure, Predicate};

/// Abstract syntax of the modal language. Atoms name predicates of the
/// structure under evaluation; modalities name its relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(String, Box<Formula>),
    Diamond(String, Box<Formula>),
    BoxPlus(String, Box<Formula>),
}

impl Formula {
    /// True for formulas in the regular fragment: `true`, atoms,
    /// conjunction and the existential modality.
    pub fn is_regular(&self) -> bool {
        match self {
            Formula::True | Formula::Atom(_) => true,
            Formula::And(f, g) => f.is_regular() && g.is_regular(),
            Formula::Diamond(_, f) => f.is_regular(),
            Formula::False
            | Formula::Not(_)
            | Formula::Or(_, _)
            | Formula::Box(_, _)
            | Formula::BoxPlus(_, _) => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(_, _) => 0,
            Formula::And(_, _) => 1,
            _ => 2,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let me = self.precedence();
        if me < parent {
            write!(f, "(")?;
        }
        match self {
            Formula::True => write!(f, "true")?,
            Formula::False => write!(f, "false")?,
            Formula::Atom(name) => write!(f, "{name}")?,
            Formula::Not(g) => {
                write!(f, "not ")?;
                g.fmt_prec(f, 2)?;
            }
            Formula::And(g, h) => {
                g.fmt_prec(f, 2)?;
                write!(f, " and ")?;
                h.fmt_prec(f, 2)?;
            }
            Formula::Or(g, h) => {
                g.fmt_prec(f, 1)?;
                write!(f, " or ")?;
                h.fmt_prec(f, 1)?;
            }
            Formula::Box(r, g) => {
                write!(f, "[{r}] ")?;
                g.fmt_prec(f, 2)?;
            }
            Formula::Diamond(r, g) => {
                write!(f, "<{r}> ")?;
                g.fmt_prec(f, 2)?;
            }
            Formula::BoxPlus(r, g) => {
                write!(f, "[[{r}]] ")?;
                g.fmt_prec(f, 2)?;
            }
        }
        if me < parent {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    KwTrue,
    KwFalse,
    KwNot,
    KwAnd,
    KwOr,
    Name(String),
    LBracket,
    RBracket,
    LLBracket,
    RRBracket,
    Lt,
    Gt,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::KwTrue => write!(f, "`true`"),
            Token::KwFalse => write!(f, "`false`"),
            Token::KwNot => write!(f, "`not`"),
            Token::KwAnd => write!(f, "`and`"),
            Token::KwOr => write!(f, "`or`"),
            Token::Name(n) => write!(f, "name `{n}`"),
            Token::LBracket => write!(f, "`[`"),
            Token::RBracket => write!(f, "`]`"),
            Token::LLBracket => write!(f, "`[[`"),
            Token::RRBracket => write!(f, "`]]`"),
            Token::Lt => write!(f, "`<`"),
            Token::Gt => write!(f, "`>`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'[' => {
                if bytes.get(i + 1) == Some(&b'[') {
                    tokens.push((Token::LLBracket, i));
                    i += 2;
                } else {
                    tokens.push((Token::LBracket, i));
                    i += 1;
                }
            }
            b']' => {
                if bytes.get(i + 1) == Some(&b']') {
                    tokens.push((Token::RRBracket, i));
                    i += 2;
                } else {
                    tokens.push((Token::RBracket, i));
                    i += 1;
                }
            }
            b'<' => {
                tokens.push((Token::Lt, i));
                i += 1;
            }
            b'>' => {
                tokens.push((Token::Gt, i));
                i += 1;
            }
            b'(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            b')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "true" => Token::KwTrue,
                    "false" => Token::KwFalse,
                    "not" => Token::KwNot,
                    "and" => Token::KwAnd,
                    "or" => Token::KwOr,
                    _ => Token::Name(word.to_string()),
                };
                tokens.push((tok, start));
            }
            _ => {
                return Err(Error::FormulaSyntax {
                    pos: i,
                    message: format!(
                        "unexpected character `{}`",
                        text[i..].chars().next().unwrap()
                    ),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::FormulaSyntax {
                pos: self.tokens[self.pos - 1].1,
                message: format!("expected {want}, found {t}"),
            }),
            None => Err(Error::FormulaSyntax {
                pos: self.end,
                message: format!("expected {want} at end of input"),
            }),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.bump() {
            Some(Token::Name(n)) => Ok(n),
            Some(t) => Err(Error::FormulaSyntax {
                pos: self.tokens[self.pos - 1].1,
                message: format!("expected a name, found {t}"),
            }),
            None => Err(Error::FormulaSyntax {
                pos: self.end,
                message: "expected a name at end of input".into(),
            }),
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.peek() == Some(&Token::KwOr) {
            self.bump();
            let g = self.and()?;
            f = Formula::Or(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Token::KwAnd) {
            self.bump();
            let g = self.unary()?;
            f = Formula::And(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Token::KwNot) => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Token::LLBracket) => {
                self.bump();
                let r = self.name()?;
                self.expect(Token::RRBracket)?;
                Ok(Formula::BoxPlus(r, Box::new(self.unary()?)))
            }
            Some(Token::LBracket) => {
                self.bump();
                let r = self.name()?;
                self.expect(Token::RBracket)?;
                Ok(Formula::Box(r, Box::new(self.unary()?)))
            }
            Some(Token::Lt) => {
                self.bump();
                let r = self.name()?;
                self.expect(Token::Gt)?;
                Ok(Formula::Diamond(r, Box::new(self.unary()?)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.bump() {
            Some(Token::KwTrue) => Ok(Formula::True),
            Some(Token::KwFalse) => Ok(Formula::False),
            Some(Token::Name(n)) => Ok(Formula::Atom(n)),
            Some(Token::LParen) => {
                let f = self.or()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            Some(t) => Err(Error::FormulaSyntax {
                pos: self.tokens[self.pos - 1].1,
                message: format!("expected a formula, found {t}"),
            }),
            None => Err(Error::FormulaSyntax {
                pos: self.end,
                message: "expected a formula at end of input".into(),
            }),
        }
    }
}

/// Parses the surface syntax into an AST.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = p.or()?;
    if let Some(t) = p.peek() {
        return Err(Error::FormulaSyntax {
            pos: p.here(),
            message: format!("unexpected {t} after formula"),
        });
    }
    Ok(f)
}

/// A formula together with the unique sort it speaks about. Can only be
/// built by [`sort_check`], which resolves every atom to a predicate of
/// the right sort and types every modality against its relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedFormula {
    formula: Formula,
    sort: String,
}

impl SortedFormula {
    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn sort(&self) -> &str {
        &self.sort
    }
}

/// Infers the sort a subformula speaks about; `None` means the formula
/// mentions no atom and no modality and is sort-polymorphic.
fn infer_sort(f: &Formula, m: &BeliefStructure) -> Result<Option<String>> {
    match f {
        Formula::True | Formula::False => Ok(None),
        Formula::Atom(name) => Ok(Some(m.predicate(name)?.sort().to_string())),
        Formula::Not(g) => infer_sort(g, m),
        Formula::And(g, h) | Formula::Or(g, h) => {
            let a = infer_sort(g, m)?;
            let b = infer_sort(h, m)?;
            match (a, b) {
                (Some(x), Some(y)) if x != y => Err(Error::SortConflict(format!(
                    "connective joins sort `{x}` with sort `{y}`"
                ))),
                (Some(x), _) => Ok(Some(x)),
                (None, y) => Ok(y),
            }
        }
        Formula::Box(r, g) | Formula::Diamond(r, g) | Formula::BoxPlus(r, g) => {
            let rel = m.relation(r)?;
            if let Some(body) = infer_sort(g, m)? {
                if body != rel.to_sort() {
                    return Err(Error::SortConflict(format!(
                        "modality over `{r}` needs a body on sort `{}`, found `{body}`",
                        rel.to_sort()
                    )));
                }
            }
            Ok(Some(rel.from_sort().to_string()))
        }
    }
}

/// Sort-checks a formula against a structure. A `hint` is required only
/// when the formula mentions no atom and no modality; when inference
/// succeeds, a conflicting hint is an error.
pub fn sort_check(f: &Formula, m: &BeliefStructure, hint: Option<&str>) -> Result<SortedFormula> {
    let inferred = infer_sort(f, m)?;
    let sort = match (inferred, hint) {
        (Some(s), Some(h)) if s != h => {
            return Err(Error::SortConflict(format!(
                "formula is on sort `{s}` but the hint says `{h}`"
            )))
        }
        (Some(s), _) => s,
        (None, Some(h)) => {
            if m.sort_size(h).is_none() {
                return Err(Error::UnknownSort {
                    name: h.to_string(),
                    context: "sort hint".into(),
                });
            }
            h.to_string()
        }
        (None, None) => return Err(Error::AmbiguousSort),
    };
    Ok(SortedFormula {
        formula: f.clone(),
        sort,
    })
}

fn eval_at(f: &Formula, m: &BeliefStructure, x: usize) -> Result<bool> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Atom(name) => Ok(m.predicate(name)?.contains(x)),
        Formula::Not(g) => Ok(!eval_at(g, m, x)?),
        Formula::And(g, h) => Ok(eval_at(g, m, x)? && eval_at(h, m, x)?),
        Formula::Or(g, h) => Ok(eval_at(g, m, x)? || eval_at(h, m, x)?),
        Formula::Box(r, g) => {
            let rel = m.relation(r)?;
            for y in 0..rel.to_size() {
                if rel.contains(x, y) && !eval_at(g, m, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Diamond(r, g) => {
            let rel = m.relation(r)?;
            for y in 0..rel.to_size() {
                if rel.contains(x, y) && eval_at(g, m, y)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::BoxPlus(r, g) => {
            let rel = m.relation(r)?;
            for y in 0..rel.to_size() {
                if rel.contains(x, y) != eval_at(g, m, y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Evaluates a sorted formula at one state of its sort. The structure
/// must be the one the formula was sort-checked against.
pub fn eval(f: &SortedFormula, m: &BeliefStructure, x: usize) -> Result<bool> {
    let size = m.sort_size(f.sort()).ok_or_else(|| Error::UnknownSort {
        name: f.sort().to_string(),
        context: "formula evaluation".into(),
    })?;
    if x >= size {
        return Err(Error::StateOutOfRange {
            sort: f.sort().to_string(),
            size,
            state: x,
            context: "formula evaluation".into(),
        });
    }
    eval_at(&f.formula, m, x)
}

/// The set of states satisfying the formula.
pub fn extension(f: &SortedFormula, m: &BeliefStructure) -> Result<Predicate> {
    let size = m.sort_size(f.sort()).ok_or_else(|| Error::UnknownSort {
        name: f.sort().to_string(),
        context: "formula extension".into(),
    })?;
    let mut bits = Vec::with_capacity(size);
    for x in 0..size {
        bits.push(eval_at(&f.formula, m, x)?);
    }
    Ok(Predicate::from_fn(f.sort(), size, |x| bits[x]))
}
