//! Critical points of the squared distance to `y` on a deformed variety.
//!
//! For `f` with `N - d` equations the homotopy in `(x, lambda, t)` is
//!
//! ```text
//! f(x) - t*gamma*z
//! lambda_0 (x - y) + sum_i lambda_i grad f_i(x)
//! alpha . lambda - 1
//! ```
//!
//! At `t = 0` its solutions are the patched Fritz John points of
//! `min |x - y|^2` over `Var(f)`.

mod points;
mod run;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use points::{classify_real, cluster_points, dedup_points, Approximation, RealClassification};
pub use run::{fritz_john_sigma, run_real, Component, RealOptions, RealRunReport, RunCounts, Timings};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Polynomial, PolynomialSystem, C64};
use crate::rng::{self, stream};
use crate::tracker::{CriticalMeta, GroupRole, Homotopy};

/// Parameters `(z, gamma, y, alpha)` of the critical homotopy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalConfig {
    pub z: Vec<f64>,
    pub gamma: C64,
    pub y: Vec<f64>,
    pub alpha: Vec<C64>,
    /// Seeds the start system, patches and anything auto-drawn.
    pub seed: u64,
}

impl CriticalConfig {
    /// Checks lengths, `z_i != 0` and `|f(y)| > 1e-8`.
    pub fn validate(&self, f: &PolynomialSystem, d: usize) -> Result<()> {
        let n = f.nvars();
        if d == 0 || d >= n {
            return Err(Error::InvalidConfig(format!("dimension must satisfy 0 < d < N = {n}, got {d}")));
        }
        if f.len() != n - d {
            return Err(Error::DimensionMismatch { expected: n - d, found: f.len() });
        }
        check_len("z", self.z.len(), n - d)?;
        check_len("y", self.y.len(), n)?;
        check_len("alpha", self.alpha.len(), n - d + 1)?;
        if self.z.iter().any(|&v| v == 0.0 || !v.is_finite()) {
            return Err(Error::InvalidConfig("every entry of z must be nonzero".into()));
        }
        if !(self.gamma.norm() > 0.0 && self.gamma.norm().is_finite()) {
            return Err(Error::InvalidConfig("gamma must be finite and nonzero".into()));
        }
        if self.alpha.iter().all(|a| a.norm() == 0.0) {
            return Err(Error::InvalidConfig("alpha must be nonzero".into()));
        }
        let fy = linalg::norm(&f.evaluate(&real_point(&self.y))?);
        if !(fy > 1e-8) {
            return Err(Error::InvalidConfig(format!("y lies on the real zero set (|f(y)| = {fy:e})")));
        }
        Ok(())
    }
}

fn check_len(name: &str, found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::InvalidConfig(format!("{name} has length {found}, expected {expected}")));
    }
    Ok(())
}

pub(crate) fn real_point(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// User-pinned parameters; `None` entries are drawn by [`draw_generic`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigTemplate {
    pub z: Option<Vec<f64>>,
    pub gamma: Option<C64>,
    pub y: Option<Vec<f64>>,
    pub alpha: Option<Vec<C64>>,
}

const MAX_DRAWS: usize = 100;

/// Fills the unpinned parameters of `template` from `seed`: complex values
/// on the unit circle, real vectors uniform in `[-1, 1]` then normalized.
/// A unit sphere can lie inside `Var(f)`, so after a rejected draw `y` is
/// also given a random length in `[1/2, 3/2]`.
pub fn draw_generic(f: &PolynomialSystem, d: usize, template: &ConfigTemplate, seed: u64) -> Result<CriticalConfig> {
    let n = f.nvars();
    if d == 0 || d >= n {
        return Err(Error::InvalidConfig(format!("dimension must satisfy 0 < d < N = {n}, got {d}")));
    }
    let mut r = rng::seeded(seed, stream::CONFIG);
    let gamma = template.gamma.unwrap_or_else(|| rng::unit_complex(&mut r));
    let alpha = template.alpha.clone().unwrap_or_else(|| rng::unit_phase_vector(&mut r, n - d + 1));
    let mut last = None;
    for attempt in 0..MAX_DRAWS {
        let z = template.z.clone().unwrap_or_else(|| rng::unit_real_vector(&mut r, n - d));
        let y = template.y.clone().unwrap_or_else(|| {
            let u = rng::unit_real_vector(&mut r, n);
            let len = if attempt == 0 { 1.0 } else { r.gen_range(0.5..=1.5) };
            u.into_iter().map(|x| x * len).collect()
        });
        let cfg = CriticalConfig { z, gamma, y, alpha: alpha.clone(), seed };
        match cfg.validate(f, d) {
            Ok(()) => return Ok(cfg),
            Err(e @ Error::DimensionMismatch { .. }) => return Err(e),
            Err(e) => last = Some(e),
        }
        if template.z.is_some() && template.y.is_some() {
            break;
        }
    }
    Err(last.unwrap_or_else(|| Error::InvalidConfig("no admissible parameters".into())))
}

/// Builds the square critical homotopy in `N + (N - d + 1)` unknowns
/// `(x, lambda)` with `t` last. `x` is the primary variable group and
/// `lambda` the auxiliary one.
pub fn build_critical_homotopy(f: &PolynomialSystem, d: usize, cfg: &CriticalConfig) -> Result<Homotopy> {
    cfg.validate(f, d)?;
    let n = f.nvars();
    let k = n - d;
    let nv = n + k + 2;
    let t_idx = nv - 1;
    let lift = |p: &Polynomial| -> Polynomial {
        let map: Vec<usize> = (0..n).collect();
        p.remap(nv, &map)
    };
    let lam = |i: usize| Polynomial::var(nv, n + i);
    let t = Polynomial::var(nv, t_idx);

    let mut rows = Vec::with_capacity(n + k + 1);
    for (i, fi) in f.polys().iter().enumerate() {
        let shift = t.scale(cfg.gamma * cfg.z[i]);
        rows.push(&lift(fi) - &shift);
    }
    let grads: Vec<Vec<Polynomial>> =
        f.polys().iter().map(|fi| (0..n).map(|j| lift(&fi.derivative(j))).collect()).collect();
    for j in 0..n {
        let xj = &Polynomial::var(nv, j) - &Polynomial::constant(nv, C64::new(cfg.y[j], 0.0));
        let mut row = &lam(0) * &xj;
        for (i, g) in grads.iter().enumerate() {
            row = &row + &(&lam(i + 1) * &g[j]);
        }
        rows.push(row);
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); nv];
    coeffs[n..n + k + 1].copy_from_slice(&cfg.alpha);
    rows.push(Polynomial::linear(&coeffs, C64::new(-1.0, 0.0)));

    let mut names = f.variables().to_vec();
    for i in 0..=k {
        let name = fresh(&names, &format!("lambda{i}"));
        names.push(name);
    }
    let name = fresh(&names, "t");
    names.push(name);
    let affine = PolynomialSystem::new(names, rows)?;
    let groups = vec![(GroupRole::Primary, (0..n).collect()), (GroupRole::Auxiliary, (n..n + k + 1).collect())];
    let mut h = Homotopy::with_groups(affine, groups, cfg.seed)?;
    h.meta = Some(CriticalMeta { z: cfg.z.clone(), gamma: cfg.gamma, y: cfg.y.clone(), alpha: cfg.alpha.clone() });
    Ok(h)
}

fn fresh(names: &[String], base: &str) -> String {
    let mut s = base.to_string();
    while names.contains(&s) {
        s.push('_');
    }
    s
}
