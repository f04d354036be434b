//! Text form of Dirichlet polynomials.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := ('+' | '-') unary | primary
//! primary := INT '^' exp | REAL | REAL 'i' | 'i' | '(' expr ')'
//! exp     := '-' 's' | '(' '-' 's' ')'
//! ```
//!
//! A literal stands for a constant series, `n^-s` for the monomial with index
//! `n`, and `*` is the Dirichlet product. A complex coefficient with both
//! parts is written in parentheses, as in `(1.5-2i)*3^-s`.

use dirimul::arith::MAX_INDEX;
use dirimul::{Complex64, DirichletPoly, Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { text: String, imag: bool },
    Unit,
    S,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let start = i;
        let tok = match ch {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            's' => Tok::S,
            'i' => Tok::Unit,
            c if c.is_ascii_digit() || c == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                    let sign = usize::from(matches!(chars.get(i + 1), Some('+' | '-')));
                    if chars.get(i + 1 + sign).is_some_and(|c| c.is_ascii_digit()) {
                        i += 1 + sign;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let imag = chars.get(i) == Some(&'i');
                if imag {
                    i += 1;
                }
                out.push((start, Tok::Num { text, imag }));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character '{other}'"))),
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<DirichletPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DirichletPoly> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            let (pos, _) = self.bump();
            let rhs = self.unary()?;
            acc = acc.checked_product(&rhs).map_err(|_| syntax(pos, "product index exceeds 2^63 - 1"))?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<DirichletPoly> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<DirichletPoly> {
        let (pos, tok) = self.bump();
        match tok {
            Tok::Unit => Ok(DirichletPoly::constant(Complex64::new(0.0, 1.0))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Num { text, imag } => {
                if !imag && *self.peek() == Tok::Caret {
                    self.bump();
                    self.exponent()?;
                    let n = index(&text, pos)?;
                    return Ok(DirichletPoly::monomial(n, Complex64::new(1.0, 0.0)));
                }
                let v: f64 = text.parse().map_err(|_| syntax(pos, format!("malformed number '{text}'")))?;
                if !v.is_finite() {
                    return Err(syntax(pos, format!("number '{text}' is out of range")));
                }
                let c = if imag { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) };
                Ok(DirichletPoly::constant(c))
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            _ => Err(syntax(pos, "expected a number, 'i', or '('")),
        }
    }

    /// `-s` or `(-s)` after the caret.
    fn exponent(&mut self) -> Result<()> {
        if *self.peek() == Tok::LParen {
            self.bump();
            self.expect(Tok::Minus, "'-s'")?;
            self.expect(Tok::S, "'s'")?;
            self.expect(Tok::RParen, "')'")
        } else {
            self.expect(Tok::Minus, "'-s'")?;
            self.expect(Tok::S, "'s'")
        }
    }
}

fn index(text: &str, pos: usize) -> Result<u64> {
    if !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(pos, format!("base '{text}' of n^-s must be a positive integer")));
    }
    let n: u64 = text.parse().map_err(|_| syntax(pos, format!("index {text} exceeds 2^63 - 1")))?;
    if n == 0 {
        return Err(syntax(pos, "index n = 0 is not allowed"));
    }
    if n > MAX_INDEX {
        return Err(syntax(pos, format!("index {text} exceeds 2^63 - 1")));
    }
    Ok(n)
}

/// Parses an expression into its canonical polynomial. Error positions are
/// character offsets into `text`.
pub fn parse_series(text: &str) -> Result<DirichletPoly> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    if *p.peek() == Tok::End {
        return Err(syntax(0, "empty expression"));
    }
    let d = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(d)
}

/// Parses an expression that must reduce to a constant.
pub fn parse_constant(text: &str) -> Result<Complex64> {
    let d = parse_series(text)?;
    if !d.is_constant() {
        return Err(Error::Format(format!("'{text}' is not a constant")));
    }
    Ok(d.coeff(1))
}

/// Shortest decimal that reads back to the same `f64`, with exponent
/// notation outside `[1e-5, 1e16)`.
fn real(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Coefficient as `(negative, body)` so the sign can join the sum.
fn coefficient(c: Complex64) -> (bool, String) {
    let imag = |v: f64| {
        if v == 1.0 {
            "i".to_string()
        } else {
            format!("{}i", real(v))
        }
    };
    if c.im == 0.0 {
        (c.re < 0.0, real(c.re.abs()))
    } else if c.re == 0.0 {
        (c.im < 0.0, imag(c.im.abs()))
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        (false, format!("({}{sign}{})", real(c.re), imag(c.im.abs())))
    }
}

/// Canonical text: terms by increasing `n`, so that
/// `parse_series(&print_series(d)) == d` holds exactly.
pub fn print_series(d: &DirichletPoly) -> String {
    let mut out = String::new();
    for (k, (n, c)) in d.terms().enumerate() {
        let (neg, body) = coefficient(c);
        let term = match (n, body.as_str()) {
            (1, _) => body,
            (_, "1") => format!("{n}^-s"),
            _ => format!("{body}*{n}^-s"),
        };
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
