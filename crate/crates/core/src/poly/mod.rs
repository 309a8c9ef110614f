//! Sparse multivariate polynomials with complex double coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration order is canonical and printing is
//! deterministic.

mod compiled;
mod parse;
mod system;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

pub use compiled::CompiledPoly;
pub use parse::{parse_polynomial, parse_system};
pub use system::{homogenize, sum_of_squares, PolynomialSystem};

pub type C64 = Complex64;

/// Exponent vector of a single term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Total degree restricted to the listed variables.
    pub fn degree_in(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&v| self.0[v]).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn evaluate(&self, point: &[C64]) -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for (x, &e) in point.iter().zip(self.0.iter()) {
            if e > 0 {
                acc *= x.powu(e);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: higher total degree first, ties broken by
    /// the first variable with differing exponent.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in a fixed number of variables.
///
/// No stored coefficient is zero; the zero polynomial has no terms and
/// degree -1.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, C64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range for {nvars} variables");
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, index), C64::new(1.0, 0.0));
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, collecting
    /// duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C64)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            p.add_term(Monomial::from_exponents(e), c);
        }
        p
    }

    /// Affine linear form `coeffs[0]*x_0 + ... + constant`.
    pub fn linear(coeffs: &[C64], constant: C64) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, constant);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C64)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, m: Monomial, c: C64) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c == C64::new(0.0, 0.0) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == C64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    /// Degree in the given subset of variables; -1 for the zero polynomial.
    pub fn degree_in(&self, vars: &[usize]) -> i64 {
        self.terms.keys().map(|m| m.degree_in(vars) as i64).max().unwrap_or(-1)
    }

    pub fn constant_term(&self) -> C64 {
        self.terms.get(&Monomial::one(self.nvars)).copied().unwrap_or_default()
    }

    pub fn scale(&self, c: C64) -> Self {
        if c == C64::new(0.0, 0.0) {
            return Self::zero(self.nvars);
        }
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v *= c;
        }
        p.terms.retain(|_, v| *v != C64::new(0.0, 0.0));
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C64::new(1.0, 0.0));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.to_vec();
            exps[var] -= 1;
            p.add_term(Monomial::from_exponents(exps), c * e as f64);
        }
        p
    }

    /// Direct sparse evaluation.
    pub fn evaluate(&self, point: &[C64]) -> C64 {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().map(|(m, &c)| c * m.evaluate(point)).sum()
    }

    /// Substitutes polynomials (all over a common variable set) for every
    /// variable.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Polynomial::zero(target);
        for (m, &c) in &self.terms {
            let mut term = Polynomial::constant(target, c);
            for (img, &e) in images.iter().zip(m.0.iter()) {
                if e > 0 {
                    term = &term * &img.pow(e);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Re-indexes variables: variable `i` of `self` becomes variable
    /// `map[i]` of a polynomial in `nvars` variables.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(nvars);
        for (m, &c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial::from_exponents(e), c);
        }
        out
    }

    /// Substitutes a value for one variable, keeping the variable count.
    pub fn substitute(&self, var: usize, value: C64) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.to_vec();
            exps[var] = 0;
            out.add_term(Monomial::from_exponents(exps), c * value.powu(e));
        }
        out
    }

    /// Homogenizes with respect to `group`, using variable `hom` (which must
    /// not occur in `self`) to pad every term to `degree`, the group-degree.
    pub fn homogenize_in(&self, group: &[usize], hom: usize, degree: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, &c) in &self.terms {
            let gd = m.degree_in(group);
            assert!(gd <= degree, "term group-degree {gd} exceeds target {degree}");
            let mut exps = m.0.to_vec();
            exps[hom] += degree - gd;
            out.add_term(Monomial::from_exponents(exps), c);
        }
        out
    }

    /// Adds `extra` trailing variables that do not occur.
    pub fn extend_vars(&self, extra: usize) -> Polynomial {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap(self.nvars + extra, &map)
    }

    /// True when every term has the same total degree in `group`.
    pub fn is_homogeneous_in(&self, group: &[usize]) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree_in(group));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Largest coefficient modulus; zero for the zero polynomial.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly::new(self)
    }

    /// Writes the polynomial in the system-file grammar.
    pub fn fmt_with(&self, names: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let (sign, c) = if c.im == 0.0 && c.re < 0.0 { ("-", -*c) } else { ("+", *c) };
            if k == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let is_one = c == C64::new(1.0, 0.0);
            let mut first = true;
            if !is_one || m.degree() == 0 {
                write_coefficient(c, f)?;
                first = false;
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(&names[v])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }

    pub(crate) fn terms_map(&self) -> &BTreeMap<Monomial, C64> {
        &self.terms
    }
}

fn write_coefficient(c: C64, f: &mut impl fmt::Write) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else if c.re == 0.0 {
        write!(f, "({}*i)", c.im)
    } else {
        let sign = if c.im < 0.0 { "-" } else { "+" };
        write!(f, "({}{}{}*i)", c.re, sign, c.im.abs())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(C64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn zero_polynomial_has_degree_minus_one() {
        let z = Polynomial::zero(3);
        assert_eq!(z.degree(), -1);
        assert!(z.is_zero());
        let x = Polynomial::var(3, 0);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::from_exponents(vec![0, 2]);
        let b = Monomial::from_exponents(vec![1, 0]);
        let d = Monomial::from_exponents(vec![1, 1]);
        assert!(a > b);
        assert!(a < Monomial::from_exponents(vec![2, 0]));
        assert!(d > Monomial::from_exponents(vec![0, 2]));
    }

    #[test]
    fn multiplication_and_derivative() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = (&(&x + &y)).pow(2);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.degree(), 2);
        let dp = p.derivative(0);
        let pt = [c(1.5), c(-0.5)];
        assert!((dp.evaluate(&pt) - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn homogenize_pads_with_fresh_variable() {
        // x^2 + x + 1 over (x, h)
        let p = Polynomial::from_terms(2, vec![(vec![2, 0], c(1.0)), (vec![1, 0], c(1.0)), (vec![0, 0], c(1.0))]);
        let h = p.homogenize_in(&[0], 1, 2);
        let expected =
            Polynomial::from_terms(2, vec![(vec![2, 0], c(1.0)), (vec![1, 1], c(1.0)), (vec![0, 2], c(1.0))]);
        assert_eq!(h, expected);
        assert!(h.is_homogeneous_in(&[0, 1]));
    }

    #[test]
    fn compose_substitutes_parametrization() {
        // x2 - x1^2 on (s, s^2) vanishes identically
        let p = Polynomial::from_terms(2, vec![(vec![0, 1], c(1.0)), (vec![2, 0], c(-1.0))]);
        let s = Polynomial::var(1, 0);
        let img = [s.clone(), s.pow(2)];
        assert!(p.compose(&img).is_zero());
    }
}
