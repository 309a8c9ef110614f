use nalgebra::DVector;

use crate::linalg;
use crate::poly::{PolynomialSystem, C64};

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub point: Vec<C64>,
    pub converged: bool,
    /// `||sys(point)||` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Plain (undamped) Newton iteration on a square system.
///
/// Converges when an update is below `tol` relative to the point norm, or
/// when the residual reaches `tol` relative to the row scale. A singular
/// linear solve stops the iteration with `converged = false`.
pub fn newton_correct(sys: &PolynomialSystem, x0: &[C64], tol: f64, maxit: usize) -> NewtonOutcome {
    assert_eq!(sys.len(), sys.nvars(), "newton_correct needs a square system");
    let mut x = x0.to_vec();
    let residual_of = |x: &[C64]| -> (f64, f64) {
        let v = sys.evaluate(x).expect("length checked");
        let abs = sys.eval_abs(x);
        let r = linalg::norm(&v);
        let scaled = v.iter().zip(&abs).map(|(v, a)| v.norm() / (1.0 + a)).fold(0.0, f64::max);
        (r, scaled)
    };
    for it in 1..=maxit {
        let (f, j) = sys.eval_with_jacobian(&x);
        let Some(dx) = linalg::solve(j, &(-f)) else {
            let (r, _) = residual_of(&x);
            return NewtonOutcome { point: x, converged: false, residual: r, iterations: it };
        };
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi += d;
        }
        let (r, scaled) = residual_of(&x);
        let scale = linalg::norm(&x).max(1.0);
        if dx.norm() < tol * scale || scaled < tol {
            return NewtonOutcome { point: x, converged: true, residual: r, iterations: it };
        }
    }
    let (r, _) = residual_of(&x);
    NewtonOutcome { point: x, converged: false, residual: r, iterations: maxit }
}

/// Newton on values and Jacobians supplied by `eval`; used by the tracker's
/// corrector. Fails when the first update exceeds `first_bound`.
///
/// Near singular points rounding in the double residual keeps updates above
/// `tol`. When tiny updates stop contracting the residual is switched to
/// `wide`, a more accurate evaluation, for up to `maxit` further iterations.
pub(crate) fn correct<F, W>(eval: F, wide: W, x: &mut [C64], tol: f64, maxit: usize, first_bound: f64) -> bool
where
    F: Fn(&[C64]) -> (DVector<C64>, nalgebra::DMatrix<C64>),
    W: Fn(&[C64]) -> DVector<C64>,
{
    let mut last = first_bound;
    let mut refined = false;
    let mut budget = maxit;
    let mut k = 0;
    while k < budget {
        let (mut f, j) = eval(x);
        if refined {
            f = wide(x);
        }
        let Some(dx) = linalg::solve(j, &(-f)) else { return false };
        let step = dx.norm();
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi += d;
        }
        let scale = linalg::norm(x).max(1.0);
        if step < tol * scale {
            return true;
        }
        if !refined && k > 0 && step > 0.5 * last && last < STAGNATION * scale {
            refined = true;
            budget = k + 1 + maxit;
            last = f64::INFINITY;
        } else {
            if step > last {
                return false;
            }
            last = step;
        }
        k += 1;
    }
    false
}

/// Relative update size below which stagnation is blamed on rounding.
const STAGNATION: f64 = 1e-6;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn linear_system_in_one_iteration() {
        let sys = parse_system("variables: x y\n2*x + y - 3\nx - y").unwrap();
        let out = newton_correct(&sys, &[re(0.0), re(0.0)], 1e-12, 5);
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert!((out.point[0] - re(1.0)).norm() < 1e-14);
    }

    #[test]
    fn quadratic_convergence_to_two() {
        let sys = parse_system("variables: x\nx^2 - 4").unwrap();
        let out = newton_correct(&sys, &[re(3.0)], 1e-12, 6);
        assert!(out.converged);
        assert!(out.iterations <= 6);
        assert!((out.point[0] - re(2.0)).norm() < 1e-12);
    }

    #[test]
    fn singular_root_fails_tolerance() {
        let sys = parse_system("variables: x\nx^2").unwrap();
        let out = newton_correct(&sys, &[re(0.1)], 1e-10, 3);
        assert!(!out.converged);
        assert!((out.point[0] - re(0.0125)).norm() < 1e-15);
    }

    #[test]
    fn singular_jacobian_is_reported() {
        let sys = parse_system("variables: x\nx^2 + 1").unwrap();
        let out = newton_correct(&sys, &[re(0.0)], 1e-10, 3);
        assert!(!out.converged);
        assert_eq!(out.point, vec![re(0.0)]);
    }
}
