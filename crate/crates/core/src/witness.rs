//! Witness sets and the homotopy membership test.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{parse_system, Polynomial, PolynomialSystem, C64};
use crate::rng::{self, stream};
use crate::tracker::{newton_correct, track_all, Homotopy, TrackOptions};

/// `{f, L, W}` for a pure `d`-dimensional set `V` inside `Var(f)`: `L` holds
/// `d` affine linear forms and `W = V ∩ Var(L)`.
#[derive(Clone, Debug)]
pub struct WitnessSet {
    system: PolynomialSystem,
    dimension: usize,
    degree: usize,
    /// One row per linear form: `N` coefficients then the constant.
    slice: Vec<Vec<C64>>,
    points: Vec<Vec<C64>>,
}

impl WitnessSet {
    pub fn new(
        system: PolynomialSystem,
        dimension: usize,
        degree: usize,
        slice: Vec<Vec<C64>>,
        points: Vec<Vec<C64>>,
    ) -> Result<Self> {
        let n = system.nvars();
        if dimension == 0 || dimension >= n {
            return Err(Error::InvalidWitness(format!("dimension {dimension} outside 1..{n}")));
        }
        if slice.len() != dimension {
            return Err(Error::InvalidWitness(format!("{} slice rows for dimension {dimension}", slice.len())));
        }
        if let Some(row) = slice.iter().find(|r| r.len() != n + 1) {
            return Err(Error::DimensionMismatch { expected: n + 1, found: row.len() });
        }
        let a = DMatrix::from_fn(dimension, n, |i, j| slice[i][j]);
        if a.singular_values().iter().copied().fold(f64::INFINITY, f64::min) < 1e-10 {
            return Err(Error::InvalidWitness("slice does not have full row rank".into()));
        }
        if points.len() != degree {
            return Err(Error::InvalidWitness(format!("{} points for degree {degree}", points.len())));
        }
        let ws = WitnessSet { system, dimension, degree, slice, points };
        for (k, w) in ws.points.iter().enumerate() {
            if w.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: w.len() });
            }
            let fr = linalg::norm(&ws.system.evaluate(w)?);
            let lr = linalg::norm(&ws.slice_values(w));
            if !(fr < 1e-8 && lr < 1e-10) {
                return Err(Error::InvalidWitness(format!(
                    "point {k} has residuals |f| = {fr:e}, |L| = {lr:e}"
                )));
            }
        }
        Ok(ws)
    }

    pub fn system(&self) -> &PolynomialSystem {
        &self.system
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn slice(&self) -> &[Vec<C64>] {
        &self.slice
    }

    pub fn points(&self) -> &[Vec<C64>] {
        &self.points
    }

    pub fn slice_values(&self, x: &[C64]) -> Vec<C64> {
        self.slice
            .iter()
            .map(|row| row[..x.len()].iter().zip(x).map(|(a, b)| a * b).sum::<C64>() + row[x.len()])
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: WitnessFile = serde_json::from_str(text)?;
        let system = parse_system(&raw.system)?;
        Self::new(system, raw.dimension, raw.degree, raw.slice, raw.points)
    }

    pub fn to_json(&self) -> String {
        let raw = WitnessFile {
            system: self.system.to_string(),
            dimension: self.dimension,
            degree: self.degree,
            slice: self.slice.clone(),
            points: self.points.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessFile {
    system: String,
    dimension: usize,
    degree: usize,
    slice: Vec<Vec<C64>>,
    points: Vec<Vec<C64>>,
}

/// Outcome of [`membership_test`].
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    /// Endpoints of the slice-moving paths that converged.
    pub endpoints: Vec<Vec<C64>>,
    pub failures: usize,
    /// Smallest distance from an endpoint to the query point.
    pub nearest: f64,
}

/// Moves the witness slice through `point` and reports whether a tracked
/// witness point lands within `tol` of it. `seed` draws the target slopes
/// and `gamma1`.
pub fn membership_test(
    ws: &WitnessSet,
    point: &[C64],
    tol: f64,
    seed: u64,
    opts: &TrackOptions,
) -> Result<Membership> {
    let n = ws.system.nvars();
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: point.len() });
    }
    let codim = n - ws.dimension;
    let mut r = rng::seeded(seed, stream::MEMBERSHIP);
    let f = square_up(&ws.system, codim, &mut r);
    let gamma1 = rng::unit_complex(&mut r);

    let t = Polynomial::var(n + 1, n);
    let one = Polynomial::constant(n + 1, C64::new(1.0, 0.0));
    let mut rows: Vec<Polynomial> = f.iter().map(|p| p.extend_vars(1)).collect();
    for row in &ws.slice {
        let slopes: Vec<C64> = (0..n).map(|_| rng::unit_complex(&mut r)).collect();
        let c: C64 = -slopes.iter().zip(point).map(|(a, b)| a * b).sum::<C64>();
        let mut target = slopes.clone();
        target.push(C64::new(0.0, 0.0));
        let l_target = Polynomial::linear(&target, c);
        let mut current = row[..n].to_vec();
        current.push(C64::new(0.0, 0.0));
        let l_current = Polynomial::linear(&current, row[n]);
        rows.push(&(&(&one - &t) * &l_target) + &(&t * &l_current).scale(gamma1));
    }
    let mut names = ws.system.variables().to_vec();
    names.push(fresh_name(&names));
    let h = Homotopy::new(PolynomialSystem::new(names, rows)?, seed)?;

    let results = track_all(&h, &ws.points, opts);
    let failures = results.iter().filter(|p| !p.status.is_converged()).count();
    if failures == results.len() {
        return Err(Error::Inconclusive(failures));
    }
    let endpoints: Vec<Vec<C64>> = results.into_iter().filter_map(|p| p.endpoint).collect();
    let nearest = endpoints.iter().map(|e| linalg::distance(e, point)).fold(f64::INFINITY, f64::min);
    Ok(Membership { member: nearest < tol, endpoints, failures, nearest })
}

fn fresh_name(names: &[String]) -> String {
    let mut s = String::from("t");
    while names.contains(&s) {
        s.push('_');
    }
    s
}

/// `codim` equations cutting out `Var(f)` near `V`: `f` itself when already
/// square, otherwise random combinations of its rows.
fn square_up<R: Rng>(f: &PolynomialSystem, codim: usize, r: &mut R) -> Vec<Polynomial> {
    if f.len() == codim {
        return f.polys().to_vec();
    }
    (0..codim)
        .map(|_| {
            let mut acc = Polynomial::zero(f.nvars());
            for p in f.polys() {
                acc = &acc + &p.scale(rng::unit_complex(r));
            }
            acc
        })
        .collect()
}

/// Builds a witness set for the curve `s -> (c_1(s), ..., c_N(s))` inside
/// `Var(f)` with a random slice.
pub fn witness_from_parametrization(curve: &[Polynomial], f: &PolynomialSystem, seed: u64) -> Result<WitnessSet> {
    check_curve(curve, f, seed)?;
    let n = f.nvars();
    let mut r = rng::seeded(seed, stream::SLICE);
    let mut last = Error::InvalidWitness("no slice drawn".into());
    for _ in 0..5 {
        let slice: Vec<C64> = (0..=n).map(|_| rng::unit_complex(&mut r)).collect();
        match witness_with_slice(curve, f, slice) {
            Ok(ws) => return Ok(ws),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// As [`witness_from_parametrization`] with the slice `a . x + b` given as
/// `[a..., b]`.
pub fn witness_with_slice(curve: &[Polynomial], f: &PolynomialSystem, slice: Vec<C64>) -> Result<WitnessSet> {
    let n = f.nvars();
    if curve.len() != n || slice.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n, found: curve.len() });
    }
    if let Some(c) = curve.iter().find(|c| c.nvars() != 1) {
        return Err(Error::InvalidWitness(format!("curve component in {} variables", c.nvars())));
    }
    let mut u = Polynomial::constant(1, slice[n]);
    for (c, a) in curve.iter().zip(&slice) {
        u = &u + &c.scale(*a);
    }
    let deg = u.degree();
    if deg < 1 {
        return Err(Error::InvalidWitness("slice restricted to the curve is constant".into()));
    }
    let deg = deg as usize;
    let mut coeffs = vec![C64::new(0.0, 0.0); deg + 1];
    for (m, c) in u.terms() {
        coeffs[m.degree() as usize] = *c;
    }
    let roots = univariate_roots(&coeffs);
    for (i, a) in roots.iter().enumerate() {
        if roots[..i].iter().any(|b| (a - b).norm() < 1e-8 * a.norm().max(1.0)) {
            return Err(Error::InvalidWitness("repeated slice parameter".into()));
        }
    }
    let points: Vec<Vec<C64>> = roots.iter().map(|s| curve.iter().map(|c| c.evaluate(&[*s])).collect()).collect();
    WitnessSet::new(f.clone(), 1, deg, vec![slice], points)
}

fn check_curve(curve: &[Polynomial], f: &PolynomialSystem, seed: u64) -> Result<()> {
    if curve.iter().all(|c| c.degree() < 1) {
        return Err(Error::InvalidWitness("curve is a point".into()));
    }
    let mut r = rng::seeded(seed, stream::CONFIG);
    for _ in 0..10 {
        let s = rng::unit_complex(&mut r) * r.gen_range(0.5..1.5);
        let x: Vec<C64> = curve.iter().map(|c| c.evaluate(&[s])).collect();
        let res = linalg::norm(&f.evaluate(&x)?);
        if !(res < 1e-8) {
            return Err(Error::InvalidWitness(format!("curve leaves Var(f): residual {res:e}")));
        }
    }
    Ok(())
}

/// Roots of `sum_k c[k] s^k` as eigenvalues of the companion matrix,
/// followed by Newton polishing.
pub fn univariate_roots(c: &[C64]) -> Vec<C64> {
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg] == C64::new(0.0, 0.0) {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let comp = DMatrix::from_fn(deg, deg, |i, j| {
        if i == 0 {
            -c[deg - 1 - j] / lead
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let eig = comp.schur().eigenvalues().expect("complex Schur form is triangular");
    let sys = PolynomialSystem::from_polys(vec![Polynomial::from_terms(
        1,
        c.iter()
            .enumerate()
            .map(|(k, v)| (vec![k as u32], *v)),
    )])
    .expect("one polynomial");
    eig.iter()
        .map(|&s| {
            let out = newton_correct(&sys, &[s], 1e-15, 8);
            if out.point[0].re.is_finite() && out.point[0].im.is_finite() {
                out.point[0]
            } else {
                s
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cplx(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn roots_of_known_cubic() {
        // (s - 1)(s + 2)(s - 3i)
        let p = parse_system("variables: s\n(s - 1)*(s + 2)*(s - 3*i)").unwrap();
        let mut c = vec![C64::new(0.0, 0.0); 4];
        for (m, v) in p.polys()[0].terms() {
            c[m.degree() as usize] = *v;
        }
        let roots = univariate_roots(&c);
        for want in [cplx(1.0), cplx(-2.0), C64::new(0.0, 3.0)] {
            assert!(roots.iter().any(|r| (r - want).norm() < 1e-12), "{want} missing from {roots:?}");
        }
    }

    #[test]
    fn line_witness() {
        let f = parse_system("variables: x1 x2 x3\nx1 - x2\nx2 - x3").unwrap();
        let s = Polynomial::var(1, 0);
        let ws = witness_with_slice(&[s.clone(), s.clone(), s], &f, vec![cplx(1.0), cplx(0.0), cplx(0.0), cplx(-1.0)])
            .unwrap();
        assert_eq!(ws.degree(), 1);
        for v in &ws.points()[0] {
            assert!((v - cplx(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_wrong_point_count() {
        let f = parse_system("variables: x y\nx - y").unwrap();
        let slice = vec![vec![cplx(1.0), cplx(1.0), cplx(-2.0)]];
        let err = WitnessSet::new(f, 1, 2, slice, vec![vec![cplx(1.0), cplx(1.0)]]).unwrap_err();
        assert!(matches!(err, Error::InvalidWitness(_)));
    }

    #[test]
    fn json_round_trip() {
        let f = parse_system("variables: x y\nx - y").unwrap();
        let slice = vec![vec![cplx(1.0), cplx(1.0), cplx(-2.0)]];
        let ws = WitnessSet::new(f, 1, 1, slice, vec![vec![cplx(1.0), cplx(1.0)]]).unwrap();
        let back = WitnessSet::from_json(&ws.to_json()).unwrap();
        assert_eq!(back.points(), ws.points());
        assert_eq!(back.system(), ws.system());
    }
}
