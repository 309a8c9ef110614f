//! Reader for the plain-text system format.
//!
//! ```text
//! # comment
//! variables: x1 x2 x3
//! (x1 + x3)^2 + x2^2
//! ```
//!
//! Lines end at a newline or `;`. Multiplication is always explicit; `i` is
//! the imaginary unit and cannot be declared as a variable.

use num_complex::Complex64;

use super::{Polynomial, PolynomialSystem, C64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

/// One logical line with its physical starting position.
struct Segment<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn segments(text: &str) -> Vec<Segment<'_>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut col = 1;
        for piece in body.split(';') {
            if !piece.trim().is_empty() {
                out.push(Segment { text: piece, line: ln + 1, column: col });
            }
            col += piece.chars().count() + 1;
        }
    }
    out
}

fn tokenize(seg: &Segment<'_>) -> Result<Vec<Token>> {
    let chars: Vec<char> = seg.text.chars().collect();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let column = seg.column + k;
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            toks.push(Token { tok, line: seg.line, column });
            k += 1;
        } else if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            // Optional exponent, only when followed by a digit.
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let lit: String = chars[start..k].iter().collect();
            let v: f64 = lit
                .parse()
                .map_err(|_| syntax(seg.line, column, format!("malformed number `{lit}`")))?;
            toks.push(Token { tok: Tok::Num(v), line: seg.line, column });
        } else if ch.is_alphabetic() || ch == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_' || chars[k] == '\'') {
                k += 1;
            }
            let name: String = chars[start..k].iter().collect();
            toks.push(Token { tok: Tok::Ident(name), line: seg.line, column });
        } else {
            return Err(syntax(seg.line, column, format!("unexpected character `{ch}`")));
        }
    }
    let column = seg.column + chars.len();
    toks.push(Token { tok: Tok::End, line: seg.line, column });
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let slash = self.bump();
                    let d = self.unary()?;
                    if d.degree() != 0 {
                        return Err(syntax(slash.line, slash.column, "division by a non-constant expression"));
                    }
                    acc = acc.scale(C64::new(1.0, 0.0) / d.constant_term());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.primary()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let t = self.bump();
            match t.tok {
                Tok::Num(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                    return Ok(base.pow(v as u32));
                }
                _ => return Err(syntax(t.line, t.column, "exponent must be a nonnegative integer literal")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial> {
        let t = self.bump();
        let p = match t.tok {
            Tok::Num(v) => Polynomial::constant(self.n(), C64::new(v, 0.0)),
            Tok::Ident(ref name) if name == "i" => Polynomial::constant(self.n(), Complex64::i()),
            Tok::Ident(ref name) => match self.vars.iter().position(|v| v == name) {
                Some(k) => Polynomial::var(self.n(), k),
                None => {
                    return Err(Error::UndeclaredVariable { name: name.clone(), line: t.line, column: t.column })
                }
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(syntax(close.line, close.column, "expected `)`"));
                }
                inner
            }
            Tok::End => return Err(syntax(t.line, t.column, "unexpected end of expression")),
            ref other => return Err(syntax(t.line, t.column, format!("unexpected {}", describe(other)))),
        };
        // Juxtaposition is not multiplication.
        let next = self.peek();
        if matches!(next.tok, Tok::Num(_) | Tok::Ident(_) | Tok::LParen) {
            return Err(syntax(next.line, next.column, format!("expected an operator before {}", describe(&next.tok))));
        }
        Ok(p)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number `{v}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of line".into(),
    }
}

/// Parses a polynomial expression over already-declared variables.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial> {
    let seg = Segment { text, line: 1, column: 1 };
    parse_segment(&seg, vars)
}

fn parse_segment(seg: &Segment<'_>, vars: &[String]) -> Result<Polynomial> {
    let toks = tokenize(seg)?;
    let mut p = Parser { toks, pos: 0, vars };
    let poly = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(t.line, t.column, format!("unexpected {}", describe(&t.tok))));
    }
    Ok(poly)
}

/// Parses a full system file: a `variables:` header then one polynomial
/// per line.
pub fn parse_system(text: &str) -> Result<PolynomialSystem> {
    let segs = segments(text);
    let Some(header) = segs.first() else {
        return Err(syntax(1, 1, "missing `variables:` header"));
    };
    let trimmed = header.text.trim_start();
    let lead = header.text.len() - trimmed.len();
    let Some(rest) = trimmed.strip_prefix("variables:") else {
        return Err(syntax(header.line, header.column + lead, "expected `variables:` header"));
    };
    let mut vars: Vec<String> = Vec::new();
    for name in rest.split_whitespace() {
        let ok = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if !ok || name == "i" {
            return Err(syntax(header.line, header.column, format!("invalid variable name `{name}`")));
        }
        if vars.iter().any(|v| v == name) {
            return Err(syntax(header.line, header.column, format!("duplicate variable `{name}`")));
        }
        vars.push(name.to_string());
    }
    if vars.is_empty() {
        return Err(syntax(header.line, header.column, "no variables declared"));
    }
    let polys = segs[1..].iter().map(|s| parse_segment(s, &vars)).collect::<Result<Vec<_>>>()?;
    PolynomialSystem::new(vars, polys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_hypersurface() {
        let sys = parse_system("variables: x1 x2 x3 ; (x1+x3)^2 + x2^2").unwrap();
        assert_eq!(sys.nvars(), 3);
        assert_eq!(sys.len(), 1);
        assert_eq!(sys.polys()[0].degree(), 2);
        assert_eq!(sys.polys()[0].num_terms(), 4);
    }

    #[test]
    fn zero_polynomial() {
        let sys = parse_system("variables: x ; 0").unwrap();
        assert!(sys.polys()[0].is_zero());
        assert_eq!(sys.polys()[0].degree(), -1);
    }

    #[test]
    fn malformed_reports_position_of_star() {
        match parse_system("variables: x ; x +* 2") {
            Err(Error::Syntax { line: 1, column, .. }) => assert_eq!(column, 19),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_undeclared_and_empty() {
        assert!(matches!(
            parse_system("variables: x\nx + y"),
            Err(Error::UndeclaredVariable { ref name, line: 2, column: 5 }) if name == "y"
        ));
        assert!(matches!(parse_system("variables: x y\n# nothing\n"), Err(Error::EmptySystem)));
        assert!(parse_system("x + 1").is_err());
    }

    #[test]
    fn rejects_juxtaposition() {
        assert!(parse_system("variables: x\n2x").is_err());
        assert!(parse_system("variables: x\n2 x").is_err());
        assert!(parse_system("variables: x\n(x)(x)").is_err());
    }

    #[test]
    fn complex_and_rational_literals() {
        let sys = parse_system("variables: x\n(1/2 - i/5)*x + 3/8 # trailing comment").unwrap();
        let v = sys.evaluate(&[C64::new(1.0, 0.0)]).unwrap()[0];
        assert!((v - C64::new(0.5 + 0.375, -0.2)).norm() < 1e-15);
        let sys = parse_system("variables: x\n1.5e-3*x^2 - .25").unwrap();
        let v = sys.evaluate(&[C64::new(10.0, 0.0)]).unwrap()[0];
        assert!((v.re - (0.15 - 0.25)).abs() < 1e-15);
    }

    #[test]
    fn precedence() {
        let sys = parse_system("variables: x\n-x^2 + 2*3^2 - 8/4/2").unwrap();
        let v = sys.evaluate(&[C64::new(3.0, 0.0)]).unwrap()[0];
        assert_eq!(v, C64::new(-9.0 + 18.0 - 1.0, 0.0));
    }
}
