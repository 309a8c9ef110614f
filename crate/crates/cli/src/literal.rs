//! Command-line number literals: `3/8`, `-0.25`, `2+3i`, `1/2-1/5i`, `i`.

use realwitness::C64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("bad literal {text:?}: {message}")]
pub struct LiteralError {
    pub text: String,
    pub message: String,
}

fn fail(text: &str, message: &str) -> LiteralError {
    LiteralError { text: text.to_string(), message: message.to_string() }
}

/// A decimal or a fraction `p/q` of two decimals.
pub fn parse_real(text: &str) -> Result<f64, LiteralError> {
    let s = text.trim();
    let num = |part: &str| -> Result<f64, LiteralError> {
        let v: f64 = part.trim().parse().map_err(|_| fail(text, "not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fail(text, "not finite"))
        }
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = num(q)?;
            if q == 0.0 {
                return Err(fail(text, "zero denominator"));
            }
            Ok(num(p)? / q)
        }
        None => num(s),
    }
}

/// Position of the sign separating the real and imaginary parts, skipping a
/// leading sign and exponent signs.
fn split_point(s: &str) -> Option<usize> {
    let b = s.as_bytes();
    (1..b.len()).rev().find(|&k| (b[k] == b'+' || b[k] == b'-') && !matches!(b[k - 1], b'e' | b'E' | b'/'))
}

pub fn parse_complex(text: &str) -> Result<C64, LiteralError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(fail(text, "empty"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(parse_real(&s)?, 0.0));
    };
    let coeff = |part: &str| -> Result<f64, LiteralError> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            p => parse_real(p).map_err(|e| fail(text, &e.message)),
        }
    };
    match split_point(body) {
        Some(k) => Ok(C64::new(parse_real(&body[..k]).map_err(|e| fail(text, &e.message))?, coeff(&body[k..])?)),
        None => Ok(C64::new(0.0, coeff(body)?)),
    }
}

pub fn parse_real_vector(text: &str) -> Result<Vec<f64>, LiteralError> {
    text.split(',').map(parse_real).collect()
}

pub fn parse_complex_vector(text: &str) -> Result<Vec<C64>, LiteralError> {
    text.split(',').map(parse_complex).collect()
}
