use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use super::compiled::{CompiledPoly, PowerTable};
use super::{Polynomial, C64};
use crate::error::{Error, Result};

/// An ordered list of polynomials over named variables.
///
/// Evaluation data (flattened polynomials and their symbolic partial
/// derivatives) is built on first use and shared read-only afterwards.
pub struct PolynomialSystem {
    variables: Vec<String>,
    polys: Vec<Polynomial>,
    compiled: OnceLock<Compiled>,
}

struct Compiled {
    values: Vec<CompiledPoly>,
    /// Nonzero partial derivatives as `(row, col, poly)`.
    partials: Vec<(usize, usize, CompiledPoly)>,
    max_exp: Vec<u32>,
}

impl Clone for PolynomialSystem {
    fn clone(&self) -> Self {
        PolynomialSystem {
            variables: self.variables.clone(),
            polys: self.polys.clone(),
            compiled: OnceLock::new(),
        }
    }
}

impl fmt::Debug for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolynomialSystem")
            .field("variables", &self.variables)
            .field("polys", &self.polys.len())
            .finish()
    }
}

impl PartialEq for PolynomialSystem {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables && self.polys == other.polys
    }
}

impl PolynomialSystem {
    pub fn new(variables: Vec<String>, polys: Vec<Polynomial>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::EmptySystem);
        }
        for p in &polys {
            if p.nvars() != variables.len() {
                return Err(Error::DimensionMismatch { expected: variables.len(), found: p.nvars() });
            }
        }
        Ok(PolynomialSystem { variables, polys, compiled: OnceLock::new() })
    }

    /// System over anonymous variables `x1..xN`.
    pub fn from_polys(polys: Vec<Polynomial>) -> Result<Self> {
        let n = polys.first().map(Polynomial::nvars).unwrap_or(0);
        Self::new(default_names("x", n), polys)
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<Polynomial> {
        self.polys
    }

    pub fn max_degree(&self) -> i64 {
        self.polys.iter().map(Polynomial::degree).max().unwrap_or(-1)
    }

    fn compiled(&self) -> &Compiled {
        self.compiled.get_or_init(|| {
            let n = self.nvars();
            let values: Vec<CompiledPoly> = self.polys.iter().map(Polynomial::compile).collect();
            let mut partials = Vec::new();
            for (i, p) in self.polys.iter().enumerate() {
                for j in 0..n {
                    let d = p.derivative(j);
                    if !d.is_zero() {
                        partials.push((i, j, d.compile()));
                    }
                }
            }
            let mut max_exp = vec![0; n];
            for v in &values {
                v.merge_max_exponents(&mut max_exp);
            }
            Compiled { values, partials, max_exp }
        })
    }

    fn check_len(&self, point: &[C64]) -> Result<()> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: point.len() });
        }
        Ok(())
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<Vec<C64>> {
        self.check_len(point)?;
        let c = self.compiled();
        let pw = PowerTable::new(point, &c.max_exp);
        Ok(c.values.iter().map(|p| p.eval(&pw)).collect())
    }

    /// Values computed in double-double arithmetic, for residuals near
    /// singular points where cancellation swamps the double result.
    /// Panics on a length mismatch.
    pub fn evaluate_wide(&self, point: &[C64]) -> DVector<C64> {
        assert_eq!(point.len(), self.nvars());
        let c = self.compiled();
        let pw = PowerTable::wide(point, &c.max_exp);
        DVector::from_iterator(c.values.len(), c.values.iter().map(|p| p.eval_wide(&pw)))
    }

    /// The `n x N` matrix of partial derivatives at `point`.
    pub fn jacobian(&self, point: &[C64]) -> Result<DMatrix<C64>> {
        self.check_len(point)?;
        Ok(self.eval_with_jacobian(point).1)
    }

    /// Values and Jacobian in one pass. Panics on a length mismatch.
    pub fn eval_with_jacobian(&self, point: &[C64]) -> (DVector<C64>, DMatrix<C64>) {
        assert_eq!(point.len(), self.nvars());
        let c = self.compiled();
        let pw = PowerTable::new(point, &c.max_exp);
        let values = DVector::from_iterator(c.values.len(), c.values.iter().map(|p| p.eval(&pw)));
        let mut jac = DMatrix::zeros(self.len(), self.nvars());
        for (i, j, p) in &c.partials {
            jac[(*i, *j)] = p.eval(&pw);
        }
        (values, jac)
    }

    /// Per-row `sum |c| |monomial|` at `point`, used to scale residuals.
    pub fn eval_abs(&self, point: &[C64]) -> Vec<f64> {
        assert_eq!(point.len(), self.nvars());
        let c = self.compiled();
        let pw = PowerTable::new(point, &c.max_exp);
        c.values.iter().map(|p| p.eval_abs(&pw)).collect()
    }

    /// Fixes variable `var` to `value` and drops it from the variable list.
    pub fn specialize(&self, var: usize, value: C64) -> Result<PolynomialSystem> {
        let n = self.nvars();
        let map: Vec<usize> = (0..n).map(|i| if i < var { i } else { i.saturating_sub(1) }).collect();
        let polys = self.polys.iter().map(|p| p.substitute(var, value).remap(n - 1, &map)).collect();
        let mut names = self.variables.clone();
        names.remove(var);
        PolynomialSystem::new(names, polys)
    }
}

impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables: {}", self.variables.join(" "))?;
        for p in &self.polys {
            p.fmt_with(&self.variables, f)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// `g = f_1^2 + ... + f_n^2` as a one-polynomial system on the same
/// variables.
pub fn sum_of_squares(sys: &PolynomialSystem) -> PolynomialSystem {
    let mut g = Polynomial::zero(sys.nvars());
    for p in sys.polys() {
        g = &g + &(p * p);
    }
    PolynomialSystem::new(sys.variables().to_vec(), vec![g]).expect("nonempty by construction")
}

/// Appends a fresh homogenizing variable for `group` and pads every
/// polynomial to its degree in the group.
pub fn homogenize(sys: &PolynomialSystem, group: &[usize]) -> PolynomialSystem {
    assert!(!group.is_empty(), "homogenizing group must be nonempty");
    let n = sys.nvars();
    let mut name = String::from("h");
    while sys.variables().contains(&name) {
        name.push('_');
    }
    let mut names = sys.variables().to_vec();
    names.push(name);
    let polys = sys
        .polys()
        .iter()
        .map(|p| {
            let d = p.degree_in(group).max(0) as u32;
            p.extend_vars(1).homogenize_in(group, n, d)
        })
        .collect();
    PolynomialSystem::new(names, polys).expect("nonempty by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn evaluate_examples() {
        let sys = parse_system("variables: x1 x2 x3 ; (x1+x3)^2 + x2^2").unwrap();
        assert_eq!(sys.evaluate(&[re(1.0), re(0.0), re(-1.0)]).unwrap(), vec![re(0.0)]);
        assert_eq!(sys.evaluate(&[re(1.0), re(1.0), re(0.0)]).unwrap(), vec![re(2.0)]);
        let circle = parse_system("variables: x1 x2\nx1^2 + x2^2 - 1").unwrap();
        assert_eq!(circle.evaluate(&[re(2.0), re(0.0)]).unwrap(), vec![re(3.0)]);
        assert!(matches!(
            circle.evaluate(&[re(1.0)]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn jacobian_examples() {
        let sys = parse_system("variables: x1 x2 x3 ; (x1+x3)^2 + x2^2").unwrap();
        let j = sys.jacobian(&[re(1.0), re(1.0), re(0.0)]).unwrap();
        assert_eq!(j.row(0).iter().copied().collect::<Vec<_>>(), vec![re(2.0); 3]);

        let lin = parse_system("variables: x y\n2*x - 3*y + 1\n x + 5*y - 2").unwrap();
        for pt in [[re(0.0), re(0.0)], [re(3.0), C64::new(-1.0, 2.0)]] {
            let j = lin.jacobian(&pt).unwrap();
            assert_eq!(j[(0, 0)], re(2.0));
            assert_eq!(j[(0, 1)], re(-3.0));
            assert_eq!(j[(1, 0)], re(1.0));
            assert_eq!(j[(1, 1)], re(5.0));
        }
    }

    #[test]
    fn sum_of_squares_examples() {
        let f = parse_system("variables: x1 x2\nx1\nx2").unwrap();
        let g = sum_of_squares(&f);
        let expect = parse_system("variables: x1 x2\nx1^2 + x2^2").unwrap();
        assert_eq!(g, expect);

        let f = parse_system("variables: x1\nx1 - 1\nx1 + 1").unwrap();
        let expect = parse_system("variables: x1\n2*x1^2 + 2").unwrap();
        assert_eq!(sum_of_squares(&f), expect);
        assert_eq!(sum_of_squares(&f).max_degree(), 2 * f.max_degree());
    }

    #[test]
    fn homogenize_examples() {
        let p = parse_system("variables: x\nx^2 + x + 1").unwrap();
        let h = homogenize(&p, &[0]);
        let expect = parse_system("variables: x h\nx^2 + x*h + h^2").unwrap();
        assert_eq!(h, expect);

        let q = parse_system("variables: x1 x2\nx1*x2").unwrap();
        let h = homogenize(&q, &[0, 1]);
        assert_eq!(h.polys()[0].degree_in(&[2]), 0);
        assert_eq!(h.polys()[0].num_terms(), 1);
    }

    #[test]
    fn specialize_drops_variable() {
        let sys = parse_system("variables: x t\nx^2 - 4 + 3*t").unwrap();
        let at1 = sys.specialize(1, re(1.0)).unwrap();
        assert_eq!(at1.nvars(), 1);
        assert_eq!(at1.evaluate(&[re(1.0)]).unwrap(), vec![re(0.0)]);
    }
}
