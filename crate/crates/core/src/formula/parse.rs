use super::{var, Formula, PredicateEnv, Term};
use crate::arith::Int;
use crate::error::{Error, Result};
use num_traits::One;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Nat(Int),
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Not,
    Arrow,
    DArrow,
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Eof,
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = (line, col);
        let rest = |k: usize| chars.get(i + k).copied();
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            (Tok::Nat(s.parse().expect("digits")), j - i)
        } else {
            match (c, rest(1), rest(2)) {
                ('<', Some('-'), Some('>')) => (Tok::DArrow, 3),
                ('<', Some('='), _) => (Tok::Le, 2),
                ('<', _, _) => (Tok::Lt, 1),
                ('>', Some('='), _) => (Tok::Ge, 2),
                ('>', _, _) => (Tok::Gt, 1),
                ('-', Some('>'), _) => (Tok::Arrow, 2),
                ('-', _, _) => (Tok::Minus, 1),
                ('!', Some('='), _) => (Tok::Ne, 2),
                ('!', _, _) => (Tok::Not, 1),
                ('=', _, _) => (Tok::Eq, 1),
                ('+', _, _) => (Tok::Plus, 1),
                ('*', _, _) => (Tok::Star, 1),
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                (',', _, _) => (Tok::Comma, 1),
                ('.', _, _) => (Tok::Dot, 1),
                ('&', _, _) => (Tok::And, 1),
                ('|', _, _) => (Tok::Or, 1),
                _ => {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!("unexpected character '{c}'"),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line: start.0,
            col: start.1,
        });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["E", "A", "mod", "true", "false"];

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    env: Option<&'a PredicateEnv>,
    arities: BTreeMap<String, usize>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Parse {
            line: s.line,
            col: s.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut left = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let right = self.implication()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula> {
        let left = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.implication()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if let Tok::Ident(q) = self.peek().clone() {
            if (q == "E" || q == "A")
                && matches!(self.peek_at(1), Tok::Ident(_))
                && *self.peek_at(2) == Tok::Dot
            {
                self.bump();
                let v = self.variable()?;
                self.bump();
                let body = self.formula()?;
                return Ok(if q == "E" {
                    Formula::exists(&v, body)
                } else {
                    Formula::forall(&v, body)
                });
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) if name == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(name) if name == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen, "')' after predicate arguments")?;
                self.check_arity(&name, args.len())?;
                Ok(Formula::Pred(var(&name), args))
            }
            _ => self.comparison(),
        }
    }

    fn check_arity(&mut self, name: &str, found: usize) -> Result<()> {
        let expected = match self.env.and_then(|e| e.get(name)) {
            Some(def) => def.arity(),
            None => *self.arities.entry(name.to_string()).or_insert(found),
        };
        if expected != found {
            return Err(Error::Arity {
                name: name.to_string(),
                expected,
                found,
            });
        }
        Ok(())
    }

    fn comparison(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        let rel = self.bump();
        let rhs = self.term()?;
        Ok(match rel {
            Tok::Eq => {
                if matches!(self.peek(), Tok::Ident(k) if k == "mod") {
                    self.bump();
                    let m = match self.bump() {
                        Tok::Nat(m) => m,
                        _ => {
                            self.pos -= 1;
                            return self.err("expected modulus after 'mod'");
                        }
                    };
                    if m < Int::one() {
                        self.pos -= 1;
                        return self.err("modulus must be at least 1");
                    }
                    Formula::Cong(lhs - rhs, m)
                } else {
                    Formula::Eq(lhs - rhs)
                }
            }
            Tok::Ne => Formula::not(Formula::Eq(lhs - rhs)),
            Tok::Le => Formula::Le(lhs - rhs),
            Tok::Lt => Formula::Lt(lhs - rhs),
            Tok::Ge => Formula::Le(rhs - lhs),
            Tok::Gt => Formula::Lt(rhs - lhs),
            _ => {
                self.pos -= 1;
                return self.err("expected relation (=, !=, <=, <, >=, >)");
            }
        })
    }

    fn variable(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(name)
            }
            other => self.err(format!("expected variable, found {other:?}")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.item()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    t = t + self.item()?;
                }
                Tok::Minus => {
                    self.bump();
                    t = t - self.item()?;
                }
                _ => return Ok(t),
            }
        }
    }

    fn item(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(-self.item()?)
            }
            Tok::Nat(n) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    let v = self.variable()?;
                    Ok(Term::scaled_var(&v, n))
                } else {
                    Ok(Term::constant(n))
                }
            }
            Tok::Ident(_) => {
                let v = self.variable()?;
                Ok(Term::var(&v))
            }
            other => self.err(format!("expected term, found {other:?}")),
        }
    }
}

fn run(text: &str, env: Option<&PredicateEnv>) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        env,
        arities: BTreeMap::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected trailing input {:?}", p.peek()));
    }
    Ok(f)
}

/// Parses a formula; predicate arities must be used consistently.
pub fn parse(text: &str) -> Result<Formula> {
    run(text, None)
}

/// Parses a formula, checking predicate arities against `env`.
pub fn parse_with_env(text: &str, env: &PredicateEnv) -> Result<Formula> {
    run(text, Some(env))
}
