//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::poly::C64;

/// Solves `a x = b` by partial-pivot LU; `None` when a pivot vanishes or the
/// result is not finite.
pub fn solve(a: DMatrix<C64>, b: &DVector<C64>) -> Option<DVector<C64>> {
    let x = a.lu().solve(b)?;
    x.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(x)
}

/// Smallest singular value after scaling every nonzero row to unit norm.
pub fn min_singular_value_row_scaled(a: &DMatrix<C64>) -> f64 {
    let mut m = a.clone();
    for mut row in m.row_iter_mut() {
        let n = row.norm();
        if n > 0.0 {
            row /= C64::new(n, 0.0);
        }
    }
    let sv = m.singular_values();
    sv.iter().copied().fold(f64::INFINITY, f64::min)
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
