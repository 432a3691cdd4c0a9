//! Terms of the untyped call-by-value λ-calculus with naturals, and their
//! concrete syntax.
//!
//! ```text
//! e ::= \x. e | e e | x | <nat> | suc e
//! ```
//!
//! Application is left-associative and a λ extends as far right as
//! possible. `suc` takes a single atom (`suc f x` is `(suc f) x`). Several
//! binders may share one λ: `\x y. e` is `\x. \y. e`. `#` starts a comment
//! that runs to the end of the line.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

/// A term with de Bruijn indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Lam(Rc<Term>),
    App(Rc<Term>, Rc<Term>),
    Lit(u64),
    Suc(Rc<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(Rc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Rc::new(f), Rc::new(a))
    }

    pub fn lit(n: u64) -> Term {
        Term::Lit(n)
    }

    pub fn suc(e: Term) -> Term {
        Term::Suc(Rc::new(e))
    }

    /// `(\x. x x) (\x. x x)`
    pub fn omega() -> Term {
        let w = Term::lam(Term::app(Term::var(0), Term::var(0)));
        Term::app(w.clone(), w)
    }

    /// Whether every variable is bound by an enclosing λ.
    pub fn is_closed(&self) -> bool {
        self.closed_under(0)
    }

    fn closed_under(&self, depth: usize) -> bool {
        match self {
            Term::Var(i) => *i < depth,
            Term::Lam(b) => b.closed_under(depth + 1),
            Term::App(f, a) => f.closed_under(depth) && a.closed_under(depth),
            Term::Lit(_) => true,
            Term::Suc(e) => e.closed_under(depth),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Lit(_) => 1,
            Term::Lam(b) | Term::Suc(b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Position {
    Top,
    Head,
    Operand,
}

fn write_term(t: &Term, depth: usize, pos: Position, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(i) if *i < depth => write!(f, "x{}", depth - 1 - i),
        Term::Var(i) => write!(f, "#{}", i - depth),
        Term::Lit(n) => write!(f, "{n}"),
        Term::Suc(e) => {
            f.write_str("suc ")?;
            write_term(e, depth, Position::Operand, f)
        }
        Term::Lam(b) => {
            let paren = pos != Position::Top;
            if paren {
                f.write_str("(")?;
            }
            write!(f, "\\x{depth}. ")?;
            write_term(b, depth + 1, Position::Top, f)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::App(fun, arg) => {
            let paren = pos == Position::Operand;
            if paren {
                f.write_str("(")?;
            }
            write_term(fun, depth, Position::Head, f)?;
            f.write_str(" ")?;
            write_term(arg, depth, Position::Operand, f)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

/// Prints with generated names `x0, x1, ...` (by binding depth). Free
/// variables print as `#k` and do not parse back.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, Position::Top, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("number literal too large")]
    NumberTooLarge,
}

/// A syntax or scope error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn is_scope_error(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Unbound(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Open,
    Close,
    Suc,
    Ident(String),
    Nat(u64),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::Suc => f.write_str("`suc`"),
            Tok::Ident(x) => write!(f, "`{x}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let err = |kind| ParseError {
            line: l,
            column: col,
            kind,
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '\\' | 'λ' => {
                bump(&mut chars);
                Tok::Lambda
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            '(' => {
                bump(&mut chars);
                Tok::Open
            }
            ')' => {
                bump(&mut chars);
                Tok::Close
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    digits.push(bump(&mut chars).unwrap());
                }
                Tok::Nat(
                    digits
                        .parse()
                        .map_err(|_| err(ParseErrorKind::NumberTooLarge))?,
                )
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while chars
                    .peek()
                    .is_some_and(|&c| c.is_alphanumeric() || c == '_' || c == '\'')
                {
                    name.push(bump(&mut chars).unwrap());
                }
                if name == "suc" {
                    Tok::Suc
                } else {
                    Tok::Ident(name)
                }
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
        };
        out.push(Lexed {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Lexed {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> &Lexed {
        let t = &self.toks[self.pos];
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        self.error_here(ParseErrorKind::Unexpected {
            expected,
            found: self.peek().to_string(),
        })
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Tok::Lambda {
            return self.lambda();
        }
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Tok::Lambda => return Ok(Term::app(t, self.lambda()?)),
                Tok::Ident(_) | Tok::Nat(_) | Tok::Open | Tok::Suc => {
                    t = Term::app(t, self.atom()?);
                }
                _ => return Ok(t),
            }
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.advance();
        let mut binders = 0;
        while let Tok::Ident(x) = self.peek() {
            let x = x.clone();
            self.advance();
            self.scope.push(x);
            binders += 1;
        }
        if binders == 0 {
            return Err(self.unexpected("a variable name"));
        }
        if *self.peek() != Tok::Dot {
            return Err(self.unexpected("`.`"));
        }
        self.advance();
        let body = self.expr();
        self.scope.truncate(self.scope.len() - binders);
        Ok((0..binders).fold(body?, |b, _| Term::lam(b)))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.advance();
                Ok(Term::lit(n))
            }
            Tok::Ident(x) => {
                let index = self.scope.iter().rev().position(|y| *y == x);
                match index {
                    Some(i) => {
                        self.advance();
                        Ok(Term::var(i))
                    }
                    None => Err(self.error_here(ParseErrorKind::Unbound(x))),
                }
            }
            Tok::Suc => {
                self.advance();
                Ok(Term::suc(self.atom()?))
            }
            Tok::Open => {
                self.advance();
                let t = self.expr()?;
                if *self.peek() != Tok::Close {
                    return Err(self.unexpected("`)`"));
                }
                self.advance();
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

/// Parse a closed term.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        scope: Vec::new(),
    };
    let t = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_identity_application() {
        assert_eq!(
            parse("(\\x. x) 5").unwrap(),
            Term::app(Term::lam(Term::var(0)), Term::lit(5))
        );
    }

    #[test]
    fn unbound_variable_is_a_scope_error() {
        let err = parse("x").unwrap_err();
        assert!(err.is_scope_error());
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse("\\x. y").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        assert_eq!(err.to_string(), "1:5: unbound variable `y`");
    }

    #[test]
    fn de_bruijn_indices() {
        assert_eq!(
            parse("\\x y. x").unwrap(),
            Term::lam(Term::lam(Term::var(1)))
        );
        assert_eq!(
            parse("\\x. \\x. x").unwrap(),
            Term::lam(Term::lam(Term::var(0)))
        );
    }

    #[test]
    fn precedence() {
        let (f, x, y) = (Term::var(2), Term::var(1), Term::var(0));
        let wrap = |t| Term::lam(Term::lam(Term::lam(t)));
        assert_eq!(
            parse("\\f x y. f x y").unwrap(),
            wrap(Term::app(Term::app(f.clone(), x.clone()), y.clone()))
        );
        assert_eq!(
            parse("\\f x y. f (x y)").unwrap(),
            wrap(Term::app(f.clone(), Term::app(x.clone(), y.clone())))
        );
        assert_eq!(
            parse("\\f x y. suc f x").unwrap(),
            wrap(Term::app(Term::suc(f.clone()), x.clone()))
        );
        assert_eq!(
            parse("\\f x y. f \\z. z y").unwrap(),
            wrap(Term::app(
                f,
                Term::lam(Term::app(Term::var(0), Term::var(1)))
            ))
        );
        assert_eq!(
            parse("suc suc 1").unwrap(),
            Term::suc(Term::suc(Term::lit(1)))
        );
    }

    #[test]
    fn omega_and_comments() {
        let src = "# the looping term\n(\\x. x x) (\\x. x x)\n";
        assert_eq!(parse(src).unwrap(), Term::omega());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse("(\\x. x").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
        let err = parse("\n  \\. 1").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
        let err = parse("1 $").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('$'));
        assert!(parse("").is_err());
        assert!(parse("1 )").is_err());
        assert!(parse("99999999999999999999999").is_err());
    }

    #[test]
    fn display_parses_back() {
        let terms = [
            Term::omega(),
            parse("\\f x. f (f (suc x))").unwrap(),
            parse("(\\x. x) (suc ((\\y. y) 3))").unwrap(),
            parse("\\a. a (\\b. b) a").unwrap(),
            parse("suc (\\x. x) 1").unwrap(),
        ];
        for t in terms {
            assert_eq!(parse(&t.to_string()).unwrap(), t, "{t}");
        }
        assert_eq!(Term::omega().to_string(), "(\\x0. x0 x0) (\\x0. x0 x0)");
    }

    #[test]
    fn closedness() {
        assert!(Term::omega().is_closed());
        assert!(!Term::lam(Term::var(1)).is_closed());
        assert_eq!(Term::omega().size(), 9);
    }
}
