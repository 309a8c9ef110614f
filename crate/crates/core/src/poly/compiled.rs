use num_complex::Complex;
use twofloat::TwoFloat;

use super::{Polynomial, C64};

/// Complex double-double scalar.
pub(crate) type C128 = Complex<TwoFloat>;

fn widen(z: C64) -> C128 {
    C128::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn narrow(z: C128) -> C64 {
    C64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

/// Flat, cache-friendly form of a polynomial for repeated evaluation.
#[derive(Clone, Debug, Default)]
pub struct CompiledPoly {
    coefs: Vec<C64>,
    /// `starts[k]..starts[k+1]` indexes the factors of term `k`.
    starts: Vec<u32>,
    factors: Vec<(u32, u32)>,
}

impl CompiledPoly {
    pub fn new(p: &Polynomial) -> Self {
        let mut out = CompiledPoly { starts: vec![0], ..Default::default() };
        for (m, &c) in p.terms_map() {
            out.coefs.push(c);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    out.factors.push((v as u32, e));
                }
            }
            out.starts.push(out.factors.len() as u32);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.coefs.is_empty()
    }

    /// Largest exponent of each variable, merged into `max`.
    pub(crate) fn merge_max_exponents(&self, max: &mut [u32]) {
        for &(v, e) in &self.factors {
            let slot = &mut max[v as usize];
            *slot = (*slot).max(e);
        }
    }

    #[inline]
    pub fn eval(&self, pw: &PowerTable) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..self.coefs.len() {
            let mut t = self.coefs[k];
            for &(v, e) in &self.factors[self.starts[k] as usize..self.starts[k + 1] as usize] {
                t *= pw.get(v as usize, e);
            }
            acc += t;
        }
        acc
    }

    /// [`CompiledPoly::eval`] carried out in double-double and rounded at
    /// the end. Coefficients are the stored doubles.
    pub fn eval_wide(&self, pw: &PowerTable<C128>) -> C64 {
        let mut acc = widen(C64::new(0.0, 0.0));
        for k in 0..self.coefs.len() {
            let mut t = widen(self.coefs[k]);
            for &(v, e) in &self.factors[self.starts[k] as usize..self.starts[k + 1] as usize] {
                t = t * pw.get(v as usize, e);
            }
            acc = acc + t;
        }
        narrow(acc)
    }

    /// Sum of `|c| * |monomial|`, the natural scale of the value.
    pub fn eval_abs(&self, pw: &PowerTable) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.coefs.len() {
            let mut t = self.coefs[k].norm();
            for &(v, e) in &self.factors[self.starts[k] as usize..self.starts[k + 1] as usize] {
                t *= pw.get(v as usize, e).norm();
            }
            acc += t;
        }
        acc
    }
}

/// Powers `x_v^e` for `e <= max_exp[v]`, computed once per point.
pub struct PowerTable<T = C64> {
    offsets: Vec<usize>,
    data: Vec<T>,
}

impl PowerTable<C64> {
    pub fn new(point: &[C64], max_exp: &[u32]) -> Self {
        Self::build(point.iter().copied(), max_exp, C64::new(1.0, 0.0))
    }
}

impl PowerTable<C128> {
    pub fn wide(point: &[C64], max_exp: &[u32]) -> Self {
        Self::build(point.iter().map(|&z| widen(z)), max_exp, widen(C64::new(1.0, 0.0)))
    }
}

impl<T: Copy + std::ops::Mul<Output = T>> PowerTable<T> {
    fn build(point: impl Iterator<Item = T>, max_exp: &[u32], one: T) -> Self {
        let mut offsets = Vec::with_capacity(max_exp.len());
        let mut data = Vec::new();
        for (x, &m) in point.zip(max_exp) {
            offsets.push(data.len());
            let mut p = one;
            data.push(p);
            for _ in 0..m {
                p = p * x;
                data.push(p);
            }
        }
        PowerTable { offsets, data }
    }

    #[inline]
    pub fn get(&self, var: usize, exp: u32) -> T {
        self.data[self.offsets[var] + exp as usize]
    }
}
