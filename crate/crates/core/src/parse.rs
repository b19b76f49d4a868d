//! Recursive-descent parser for the formula surface syntax.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! form ::= iff
//! iff  ::= imp ("<->" imp)?          -- non-associative
//! imp  ::= or ("->" imp)?            -- right-associative
//! or   ::= and ("|" and)*
//! and  ::= not ("&" not)*
//! not  ::= "!" not | atom
//! atom ::= ident | "T" | "F" | "(" form ")"
//! ```
//!
//! Unicode connectives are accepted as input aliases: `¬ ∧ ∨ → ↔ ⊤ ⊥`.

use crate::error::{Error, Result};
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::True => "`T`".into(),
            Tok::False => "`F`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

// (token, 1-based column of its first character)
fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            '!' | '¬' => {
                toks.push((Tok::Not, col));
                i += 1;
            }
            '&' | '∧' => {
                toks.push((Tok::And, col));
                i += 1;
            }
            '|' | '∨' => {
                toks.push((Tok::Or, col));
                i += 1;
            }
            '→' => {
                toks.push((Tok::Implies, col));
                i += 1;
            }
            '↔' => {
                toks.push((Tok::Iff, col));
                i += 1;
            }
            '⊤' => {
                toks.push((Tok::True, col));
                i += 1;
            }
            '⊥' => {
                toks.push((Tok::False, col));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((Tok::Implies, col));
                    i += 2;
                } else {
                    return Err(Error::Syntax {
                        column: col,
                        message: "stray `-`; did you mean `->`?".into(),
                    });
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    toks.push((Tok::Iff, col));
                    i += 3;
                } else {
                    return Err(Error::Syntax {
                        column: col,
                        message: "stray `<`; did you mean `<->`?".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                toks.push((
                    match word.as_str() {
                        "T" => Tok::True,
                        "F" => Tok::False,
                        _ => Tok::Ident(word),
                    },
                    col,
                ));
            }
            other => {
                return Err(Error::Syntax {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, c)| c)
            .unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        self.pos += 1;
        t
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".into(),
        };
        Error::Syntax {
            column: self.col(),
            message: format!("expected {expected}, found {found}"),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let left = self.imp()?;
        if self.peek() == Some(&Tok::Iff) {
            self.bump();
            let right = self.imp()?;
            if self.peek() == Some(&Tok::Iff) {
                return Err(Error::Syntax {
                    column: self.col(),
                    message: "`<->` is non-associative; parenthesize one side".into(),
                });
            }
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.not()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            f = Formula::and(f, self.not()?);
        }
        Ok(f)
    }

    fn not(&mut self) -> Result<Formula> {
        if self.peek() == Some(&Tok::Not) {
            self.bump();
            return Ok(Formula::not(self.not()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                if let Tok::Ident(name) = self.bump() {
                    Ok(Formula::Var(name))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::True) => {
                self.bump();
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.bump();
                Ok(Formula::False)
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.iff()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.bump();
                    Ok(f)
                } else {
                    Err(self.error("`)`"))
                }
            }
            _ => Err(self.error("a formula (identifier, `T`, `F`, `!`, or `(`)")),
        }
    }
}

/// Parses the ASCII/Unicode surface syntax into a [`Formula`].
pub fn parse_formula(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let f = parser.iff()?;
    if parser.peek().is_some() {
        return Err(parser.error("end of input"));
    }
    Ok(f)
}
