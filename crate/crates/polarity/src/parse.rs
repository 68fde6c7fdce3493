//! Concrete syntax for formulas and sequents.
//!
//! Grammar (loosest to tightest): `->` is right-associative; `|` and `&`
//! are left-associative; `~` binds tightest; `forall x.` and `exists x.`
//! scope to the end of the enclosing group. Unicode aliases for the
//! connectives and quantifiers are accepted on input.

use std::collections::HashMap;
use std::fmt;

use crate::formula::{Formula, Term};
use crate::proof::Sequent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

#[derive(Clone, Copy)]
enum Namespace {
    Predicate,
    Function,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Comma,
    Dot,
    Turnstile,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((pos, Tok::RParen));
                i += 1;
            }
            ',' => {
                toks.push((pos, Tok::Comma));
                i += 1;
            }
            '.' => {
                toks.push((pos, Tok::Dot));
                i += 1;
            }
            '~' | '¬' => {
                toks.push((pos, Tok::Not));
                i += 1;
            }
            '&' | '∧' => {
                toks.push((pos, Tok::And));
                i += 1;
            }
            '∨' => {
                toks.push((pos, Tok::Or));
                i += 1;
            }
            '⇒' | '→' => {
                toks.push((pos, Tok::Arrow));
                i += 1;
            }
            '∀' => {
                toks.push((pos, Tok::Forall));
                i += 1;
            }
            '∃' => {
                toks.push((pos, Tok::Exists));
                i += 1;
            }
            '⊢' => {
                toks.push((pos, Tok::Turnstile));
                i += 1;
            }
            '|' => {
                if matches!(chars.get(i + 1), Some((_, '-'))) {
                    toks.push((pos, Tok::Turnstile));
                    i += 2;
                } else {
                    toks.push((pos, Tok::Or));
                    i += 1;
                }
            }
            '-' => {
                if matches!(chars.get(i + 1), Some((_, '>'))) {
                    toks.push((pos, Tok::Arrow));
                    i += 2;
                } else {
                    return err(pos, "expected '->'");
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && {
                    let ch = chars[i].1;
                    ch.is_alphanumeric() || ch == '_' || ch == '\''
                } {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|(_, ch)| ch).collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word),
                };
                toks.push((pos, tok));
            }
            _ => return err(pos, format!("unexpected character '{}'", c)),
        }
    }
    Ok(Lexer {
        toks,
        end: text.len(),
    })
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    bound: Vec<String>,
    pred_arity: HashMap<String, usize>,
    fun_arity: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let at = self.here();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => err(at, format!("expected {}", what)),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if matches!(self.peek(), Some(Tok::Arrow)) {
            self.next();
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while matches!(self.peek(), Some(Tok::Or)) {
            self.next();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while matches!(self.peek(), Some(Tok::And)) {
            self.next();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        match self.peek() {
            Some(Tok::Not) => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let is_forall = matches!(self.peek(), Some(Tok::Forall));
                self.next();
                let vat = self.here();
                let var = match self.next() {
                    Some(Tok::Ident(name)) => name,
                    _ => return err(vat, "expected a variable name after the quantifier"),
                };
                self.expect(Tok::Dot, "'.' after the quantified variable")?;
                self.bound.push(var.clone());
                let body = self.formula();
                self.bound.pop();
                let body = body?;
                Ok(if is_forall {
                    Formula::Forall(var, Box::new(body))
                } else {
                    Formula::Exists(var, Box::new(body))
                })
            }
            Some(Tok::LParen) => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => err(at, "expected a formula"),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        let name = match self.next() {
            Some(Tok::Ident(name)) => name,
            _ => return err(at, "expected a predicate"),
        };
        let args = if matches!(self.peek(), Some(Tok::LParen)) {
            self.next();
            let mut args = vec![self.term()?];
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.next();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "')' after predicate arguments")?;
            args
        } else {
            vec![]
        };
        self.check_arity(Namespace::Predicate, &name, args.len(), at)?;
        Ok(Formula::Atom(name, args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.here();
        let name = match self.next() {
            Some(Tok::Ident(name)) => name,
            _ => return err(at, "expected a term"),
        };
        if matches!(self.peek(), Some(Tok::LParen)) {
            self.next();
            let mut args = vec![self.term()?];
            while matches!(self.peek(), Some(Tok::Comma)) {
                self.next();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "')' after function arguments")?;
            self.check_arity(Namespace::Function, &name, args.len(), at)?;
            Ok(Term::App(name, args))
        } else if self.bound.iter().rev().any(|b| *b == name) {
            Ok(Term::Var(name))
        } else {
            self.check_arity(Namespace::Function, &name, 0, at)?;
            Ok(Term::Const(name))
        }
    }

    fn check_arity(
        &mut self,
        ns: Namespace,
        name: &str,
        arity: usize,
        at: usize,
    ) -> Result<(), ParseError> {
        let table = match ns {
            Namespace::Predicate => &mut self.pred_arity,
            Namespace::Function => &mut self.fun_arity,
        };
        match table.insert(name.to_owned(), arity) {
            Some(prev) if prev != arity => err(
                at,
                format!("arity mismatch for '{}': used with {} and {} arguments", name, prev, arity),
            ),
            _ => Ok(()),
        }
    }
}

fn parser_for(text: &str) -> Result<Parser, ParseError> {
    let lexer = lex(text)?;
    Ok(Parser {
        toks: lexer.toks,
        pos: 0,
        end: lexer.end,
        bound: Vec::new(),
        pred_arity: HashMap::new(),
        fun_arity: HashMap::new(),
    })
}

/// Parses a formula from its concrete syntax.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = parser_for(text)?;
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return err(p.here(), "trailing input after formula");
    }
    Ok(f)
}

/// Parses a term (used for rule witnesses in proof files).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = parser_for(text)?;
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return err(p.here(), "trailing input after term");
    }
    Ok(t)
}

/// Parses `A, B |- C, D`. A bare formula `F` is read as `|- F`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = parser_for(text)?;
    let mut left = Vec::new();
    let has_turnstile = p.toks.iter().any(|(_, t)| *t == Tok::Turnstile);
    if has_turnstile && !matches!(p.peek(), Some(Tok::Turnstile)) {
        left.push(p.formula()?);
        while matches!(p.peek(), Some(Tok::Comma)) {
            p.next();
            left.push(p.formula()?);
        }
    }
    if has_turnstile {
        p.expect(Tok::Turnstile, "'|-'")?;
    }
    let mut right = Vec::new();
    if p.pos != p.toks.len() {
        right.push(p.formula()?);
        while matches!(p.peek(), Some(Tok::Comma)) {
            p.next();
            right.push(p.formula()?);
        }
    }
    if p.pos != p.toks.len() {
        return err(p.here(), "trailing input after sequent");
    }
    Ok(Sequent { left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::print_formula;

    #[test]
    fn precedence() {
        let f = parse_formula("P & Q -> P | Q").unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::and(Formula::atom("P"), Formula::atom("Q")),
                Formula::or(Formula::atom("P"), Formula::atom("Q")),
            )
        );
    }

    #[test]
    fn nested_negation() {
        assert_eq!(
            parse_formula("~~P").unwrap(),
            Formula::not(Formula::not(Formula::atom("P")))
        );
    }

    #[test]
    fn quantifier_scopes_right() {
        let f = parse_formula("forall x. P(x) -> Q").unwrap();
        assert_eq!(
            f,
            Formula::forall(
                "x",
                Formula::implies(
                    Formula::pred("P", vec![Term::var("x")]),
                    Formula::atom("Q"),
                ),
            )
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse_formula("¬P ∧ Q").unwrap(), parse_formula("~P & Q").unwrap());
        assert_eq!(
            parse_formula("∀x. P(x) ⇒ Q").unwrap(),
            parse_formula("forall x. P(x) -> Q").unwrap()
        );
    }

    #[test]
    fn unbound_identifiers_are_constants() {
        let f = parse_formula("P(a) & exists y. Q(y)").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::pred("P", vec![Term::constant("a")]),
                Formula::exists("y", Formula::pred("Q", vec![Term::var("y")])),
            )
        );
    }

    #[test]
    fn arity_mismatch_rejected() {
        assert!(parse_formula("P(a) & P(a,b)").is_err());
        assert!(parse_formula("Q(f(a), f(a,b))").is_err());
        assert!(parse_formula("P & P(a)").is_err());
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_formula("P & ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_formula("P @ Q").unwrap_err();
        assert_eq!(e.position, 2);
    }

    #[test]
    fn print_examples() {
        let f = Formula::not(Formula::not(Formula::atom("P")));
        assert_eq!(print_formula(&f), "~~P");
        let g = Formula::implies(
            Formula::and(Formula::atom("P"), Formula::atom("Q")),
            Formula::or(Formula::atom("P"), Formula::atom("Q")),
        );
        assert_eq!(print_formula(&g), "P & Q -> P | Q");
        let h = Formula::forall("x", Formula::not(Formula::pred("P", vec![Term::var("x")])));
        assert_eq!(print_formula(&h), "forall x. ~P(x)");
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("P, Q |- R").unwrap();
        assert_eq!(s.left.len(), 2);
        assert_eq!(s.right.len(), 1);
        let s = parse_sequent("P | ~P").unwrap();
        assert!(s.left.is_empty());
        assert_eq!(s.right, vec![parse_formula("P | ~P").unwrap()]);
        let s = parse_sequent("P |-").unwrap();
        assert_eq!(s.left.len(), 1);
        assert!(s.right.is_empty());
    }
}
