//! Multihomogeneous Bezout counts and linear-product start systems.
//!
//! A structure assigns each equation a degree in every variable group. The
//! matching start system replaces equation `i` by a product of `D[i][j]`
//! generic affine linear forms in the variables of group `j`, for every `j`.
//! Its roots are enumerated exactly: pick one vanishing factor per equation
//! so that group `j` receives exactly `n_j` of them, then solve one small
//! linear system per group.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Polynomial, PolynomialSystem, C64};
use crate::rng::{self, stream};
use crate::tracker::{newton_correct, track_all, GroupRole, Homotopy, PathStatus, TrackOptions};

/// Variable groups and the per-equation degree matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiHomStructure {
    /// Unknown indices of each group, in order.
    pub groups: Vec<Vec<usize>>,
    /// `degrees[i][j]`: degree of equation `i` in group `j`.
    pub degrees: Vec<Vec<u32>>,
}

impl MultiHomStructure {
    pub fn new(groups: Vec<Vec<usize>>, degrees: Vec<Vec<u32>>) -> Result<Self> {
        let total: usize = groups.iter().map(Vec::len).sum();
        if degrees.len() != total {
            return Err(Error::DimensionMismatch { expected: total, found: degrees.len() });
        }
        if let Some(row) = degrees.iter().find(|r| r.len() != groups.len()) {
            return Err(Error::DimensionMismatch { expected: groups.len(), found: row.len() });
        }
        let mut seen = vec![false; total];
        for &v in groups.iter().flatten() {
            if v >= total || seen[v] {
                return Err(Error::InvalidConfig("groups must partition the unknowns".into()));
            }
            seen[v] = true;
        }
        Ok(MultiHomStructure { groups, degrees })
    }

    /// Structure read off the equations of `sys` (a square system).
    pub fn from_system(sys: &PolynomialSystem, groups: Vec<Vec<usize>>) -> Result<Self> {
        let degrees = sys
            .polys()
            .iter()
            .map(|p| groups.iter().map(|g| p.degree_in(g).max(0) as u32).collect())
            .collect();
        Self::new(groups, degrees)
    }

    /// Structure of `H(., 1)` with the homotopy's own variable groups.
    pub fn from_homotopy(h: &Homotopy) -> Result<Self> {
        let groups: Vec<Vec<usize>> = h.groups().iter().map(|g| g.members.clone()).collect();
        Self::from_system(&h.at(C64::new(1.0, 0.0)), groups)
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn num_unknowns(&self) -> usize {
        self.degrees.len()
    }
}

/// Coefficient of `prod_j a_j^{n_j}` in `prod_i (sum_j D[i][j] a_j)`, by
/// exact truncated polynomial multiplication.
pub fn multihomog_bezout(structure: &MultiHomStructure) -> Result<u64> {
    let sizes = structure.group_sizes();
    let mut states: HashMap<Vec<u32>, u128> = HashMap::new();
    states.insert(vec![0; sizes.len()], 1);
    for row in &structure.degrees {
        let mut next: HashMap<Vec<u32>, u128> = HashMap::new();
        for (state, &coef) in &states {
            for (j, &d) in row.iter().enumerate() {
                if d == 0 || state[j] as usize >= sizes[j] {
                    continue;
                }
                let mut s = state.clone();
                s[j] += 1;
                let add = coef.checked_mul(d as u128).ok_or(Error::Overflow("Bezout count"))?;
                let slot = next.entry(s).or_insert(0);
                *slot = slot.checked_add(add).ok_or(Error::Overflow("Bezout count"))?;
            }
        }
        states = next;
    }
    let target: Vec<u32> = sizes.iter().map(|&n| n as u32).collect();
    let count = states.get(&target).copied().unwrap_or(0);
    if count > i64::MAX as u128 {
        return Err(Error::Overflow("Bezout count"));
    }
    Ok(count as u64)
}

/// `N * 2k * (2k - 1)^(N - 1)`, the two-group count for a degree-`2k`
/// hypersurface in `N` variables.
pub fn k_bound(n: u32, k: u32) -> Result<u64> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidConfig("N and k must be positive".into()));
    }
    let two_k = 2u64.checked_mul(k as u64).ok_or(Error::Overflow("K(N,2k)"))?;
    let pow = (two_k - 1).checked_pow(n - 1).ok_or(Error::Overflow("K(N,2k)"))?;
    let v = (n as u64)
        .checked_mul(two_k)
        .and_then(|x| x.checked_mul(pow))
        .ok_or(Error::Overflow("K(N,2k)"))?;
    if v > i64::MAX as u64 {
        return Err(Error::Overflow("K(N,2k)"));
    }
    Ok(v)
}

/// An affine linear form over one group's variables.
#[derive(Clone, Debug)]
pub struct LinearForm {
    pub coeffs: Vec<C64>,
    pub constant: C64,
}

/// A linear-product system and all of its roots.
#[derive(Clone, Debug)]
pub struct StartSystem {
    pub structure: MultiHomStructure,
    /// `factors[i][j]`: the `D[i][j]` forms of equation `i` in group `j`.
    pub factors: Vec<Vec<Vec<LinearForm>>>,
    pub start_points: Vec<Vec<C64>>,
    /// Seed that produced the accepted draw.
    pub seed: u64,
}

impl StartSystem {
    /// The product system expanded into polynomials over all unknowns.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        let n = self.structure.num_unknowns();
        self.factors
            .iter()
            .map(|row| {
                let mut p = Polynomial::constant(n, C64::new(1.0, 0.0));
                for (j, forms) in row.iter().enumerate() {
                    for f in forms {
                        p = &p * &form_polynomial(n, &self.structure.groups[j], f);
                    }
                }
                p
            })
            .collect()
    }

    pub fn system(&self) -> PolynomialSystem {
        PolynomialSystem::from_polys(self.polynomials()).expect("square structure is nonempty")
    }
}

fn form_polynomial(n: usize, group: &[usize], f: &LinearForm) -> Polynomial {
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    for (&v, &c) in group.iter().zip(&f.coeffs) {
        coeffs[v] = c;
    }
    Polynomial::linear(&coeffs, f.constant)
}

const MAX_DRAWS: u32 = 5;

/// Draws generic unit-modulus linear forms for `structure` and enumerates
/// every root of the product system.
pub fn build_start_system(structure: &MultiHomStructure, seed: u64) -> Result<StartSystem> {
    let expected = multihomog_bezout(structure)?;
    for attempt in 0..MAX_DRAWS {
        let draw_seed = seed.wrapping_add(attempt as u64);
        if let Some(sys) = try_build(structure, draw_seed, expected) {
            return Ok(sys);
        }
    }
    Err(Error::DegenerateStartSystem { attempts: MAX_DRAWS })
}

fn try_build(structure: &MultiHomStructure, seed: u64, expected: u64) -> Option<StartSystem> {
    let mut r = rng::seeded(seed, stream::START_SYSTEM);
    let factors: Vec<Vec<Vec<LinearForm>>> = structure
        .degrees
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &d)| {
                    (0..d)
                        .map(|_| LinearForm {
                            coeffs: (0..structure.groups[j].len()).map(|_| rng::unit_complex(&mut r)).collect(),
                            constant: rng::unit_complex(&mut r),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut sys = StartSystem { structure: structure.clone(), factors, start_points: Vec::new(), seed };

    let n = structure.num_unknowns();
    let sizes = structure.group_sizes();
    let mut choice: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut cap = sizes.clone();
    let mut points = Vec::new();
    if !enumerate(&sys, 0, &mut cap, &mut choice, &mut points) {
        return None;
    }
    if points.len() as u64 != expected {
        return None;
    }
    let product = sys.system();
    for p in points.iter_mut() {
        let out = newton_correct(&product, p, 1e-14, 3);
        if !(scaled_residual(&product, &out.point) < 1e-12) {
            return None;
        }
        let jac = product.jacobian(&out.point).ok()?;
        if linalg::min_singular_value_row_scaled(&jac) <= 1e-8 {
            return None;
        }
        *p = out.point;
    }
    sys.start_points = points;
    Some(sys)
}

/// `max_i |p_i(x)| / (1 + sum |c| |m(x)|)` over the terms of each `p_i`.
pub fn scaled_residual(sys: &PolynomialSystem, x: &[C64]) -> f64 {
    let vals = sys.evaluate(x).expect("length matches");
    let abs = sys.eval_abs(x);
    vals.iter().zip(&abs).map(|(v, a)| v.norm() / (1.0 + a)).fold(0.0, f64::max)
}

/// Depth-first over equations; `choice[i] = (group, factor)`. Returns false
/// when a selected factor set is singular.
fn enumerate(
    sys: &StartSystem,
    row: usize,
    cap: &mut [usize],
    choice: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<C64>>,
) -> bool {
    let st = &sys.structure;
    if row == st.num_unknowns() {
        return match solve_selection(sys, choice) {
            Some(p) => {
                out.push(p);
                true
            }
            None => false,
        };
    }
    for j in 0..st.groups.len() {
        let d = st.degrees[row][j] as usize;
        if d == 0 || cap[j] == 0 {
            continue;
        }
        cap[j] -= 1;
        for k in 0..d {
            choice.push((j, k));
            let ok = enumerate(sys, row + 1, cap, choice, out);
            choice.pop();
            if !ok {
                cap[j] += 1;
                return false;
            }
        }
        cap[j] += 1;
    }
    true
}

fn solve_selection(sys: &StartSystem, choice: &[(usize, usize)]) -> Option<Vec<C64>> {
    let st = &sys.structure;
    let mut x = vec![C64::new(0.0, 0.0); st.num_unknowns()];
    for (j, group) in st.groups.iter().enumerate() {
        let rows: Vec<&LinearForm> = choice
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 == j)
            .map(|(i, c)| &sys.factors[i][j][c.1])
            .collect();
        let m = group.len();
        let a = DMatrix::from_fn(m, m, |r, c| rows[r].coeffs[c]);
        if linalg::min_singular_value_row_scaled(&a) <= 1e-8 {
            return None;
        }
        let b = DVector::from_iterator(m, rows.iter().map(|f| -f.constant));
        let sol = linalg::solve(a, &b)?;
        for (k, &v) in group.iter().enumerate() {
            x[v] = sol[k];
        }
    }
    Some(x)
}

/// Outcome of solving `H(., 1) = 0` from linear-product starts.
#[derive(Clone, Debug)]
pub struct StartSolve {
    /// Nonsingular finite solutions, deduplicated and polished, in order of
    /// discovery.
    pub solutions: Vec<Vec<C64>>,
    /// Start paths per run (the Bezout count).
    pub paths: usize,
    /// Independent runs performed.
    pub runs: usize,
    /// Whether the last run found nothing outside the earlier runs' union.
    pub agreed: bool,
    /// Totals over all runs.
    pub stalled: usize,
    pub at_infinity: usize,
    /// Finite endpoints discarded as singular.
    pub singular: usize,
    /// Converged endpoints merged into an earlier solution.
    pub duplicates: usize,
}

/// Upper limit on independent runs in [`solve_start`].
pub const MAX_START_RUNS: usize = 4;

const DEDUP_TOL: f64 = 1e-8;

/// The homotopy `(1 - s) H(., 1) + s gamma0 P` in the unknowns of `H` with
/// `s` last, together with the linear-product system `P`.
pub fn start_homotopy(h: &Homotopy, structure: &MultiHomStructure, seed: u64) -> Result<(Homotopy, StartSystem)> {
    let target = h.at(C64::new(1.0, 0.0));
    if target.len() != structure.num_unknowns() || target.nvars() != structure.num_unknowns() {
        return Err(Error::DimensionMismatch { expected: structure.num_unknowns(), found: target.nvars() });
    }
    let start = build_start_system(structure, seed)?;
    let gamma0 = rng::unit_complex(&mut rng::seeded(seed, stream::START_GAMMA));
    let m = structure.num_unknowns();
    let s = Polynomial::var(m + 1, m);
    let one_minus_s = &Polynomial::constant(m + 1, C64::new(1.0, 0.0)) - &s;
    let gs = s.scale(gamma0);
    let rows: Vec<Polynomial> = target
        .polys()
        .iter()
        .zip(start.polynomials())
        .map(|(t, p)| &(&t.extend_vars(1) * &one_minus_s) + &(&p.extend_vars(1) * &gs))
        .collect();
    let mut names = target.variables().to_vec();
    names.push("s".into());
    let combined = PolynomialSystem::new(names, rows)?;
    let roles: Vec<(GroupRole, Vec<usize>)> = if h.groups().len() == structure.groups.len() {
        h.groups().iter().zip(&structure.groups).map(|(g, members)| (g.role, members.clone())).collect()
    } else {
        structure.groups.iter().map(|g| (GroupRole::Primary, g.clone())).collect()
    };
    let hs = Homotopy::with_groups(combined, roles, seed ^ 0x5eed)?;
    Ok((hs, start))
}

/// Solves `H(., 1) = 0` by tracking every start path of a linear-product
/// system without an endgame. Paths that stall are taken to end on singular
/// solutions. Runs with fresh start systems and `gamma0` (seeds `seed`,
/// `seed + 1`, ...) repeat until one finds no solution missed by the earlier
/// ones, at least twice and at most [`MAX_START_RUNS`] times.
pub fn solve_start(h: &Homotopy, structure: &MultiHomStructure, seed: u64, opts: &TrackOptions) -> Result<StartSolve> {
    let target = h.at(C64::new(1.0, 0.0));
    let opts = TrackOptions { endgame: false, ..opts.clone() };
    let mut out = StartSolve {
        solutions: Vec::new(),
        paths: 0,
        runs: 0,
        agreed: false,
        stalled: 0,
        at_infinity: 0,
        singular: 0,
        duplicates: 0,
    };
    while out.runs < MAX_START_RUNS {
        let found = start_run(h, &target, structure, seed.wrapping_add(out.runs as u64), &opts, &mut out)?;
        out.runs += 1;
        out.agreed = out.runs > 1 && found == 0;
        if out.agreed {
            break;
        }
    }
    Ok(out)
}

/// One run of [`solve_start`]; returns how many new solutions it added.
fn start_run(
    h: &Homotopy,
    target: &PolynomialSystem,
    structure: &MultiHomStructure,
    seed: u64,
    opts: &TrackOptions,
    out: &mut StartSolve,
) -> Result<usize> {
    let (hs, start) = start_homotopy(h, structure, seed)?;
    out.paths = start.start_points.len();
    let mut results = track_all(&hs, &start.start_points, opts);

    // Paths landing on a solution another path reached may have jumped;
    // retrack them once with smaller steps.
    let suspects = duplicated_paths(&results, target);
    if !suspects.is_empty() {
        let tight = TrackOptions {
            initial_step: opts.initial_step / 8.0,
            max_step: opts.max_step / 8.0,
            max_steps: opts.max_steps * 8,
            ..opts.clone()
        };
        let redo: Vec<Vec<C64>> = suspects.iter().map(|&i| start.start_points[i].clone()).collect();
        for (k, mut r) in track_all(&hs, &redo, &tight).into_iter().enumerate() {
            r.start_index = suspects[k];
            results[suspects[k]] = r;
        }
    }

    let mut found = 0;
    for r in &results {
        match r.status {
            PathStatus::Converged | PathStatus::ConvergedSingular => {
                let Some(p) = polished(target, r) else {
                    out.singular += 1;
                    continue;
                };
                if out.solutions.iter().any(|q| linalg::distance(q, &p) < DEDUP_TOL * linalg::norm(&p).max(1.0)) {
                    out.duplicates += 1;
                } else {
                    out.solutions.push(p);
                    found += 1;
                }
            }
            PathStatus::AtInfinity | PathStatus::XConvergedLambdaDiverged => out.at_infinity += 1,
            PathStatus::Failed => out.stalled += 1,
        }
    }
    Ok(found)
}

fn polished(target: &PolynomialSystem, r: &crate::tracker::PathResult) -> Option<Vec<C64>> {
    let e = r.endpoint.as_ref()?;
    let out = newton_correct(target, e, 1e-14, 4);
    let p = if out.point.iter().all(|z| z.re.is_finite() && z.im.is_finite()) { out.point } else { e.clone() };
    (relative_sigma(target, &p)? > START_SINGULAR_TOL).then_some(p)
}

/// Start solutions with [`relative_sigma`] at or below this are singular.
pub const START_SINGULAR_TOL: f64 = 1e-8;

/// Row-normalized smallest singular value of the Jacobian of `sys` at `p`
/// with column `j` scaled by `max(1, |p_j|)`. Large coordinates next to tiny
/// ones make the plain affine Jacobian look singular.
pub fn relative_sigma(sys: &PolynomialSystem, p: &[C64]) -> Option<f64> {
    let mut jac = sys.jacobian(p).ok()?;
    for (mut col, z) in jac.column_iter_mut().zip(p) {
        col *= C64::new(z.norm().max(1.0), 0.0);
    }
    Some(linalg::min_singular_value_row_scaled(&jac))
}

fn duplicated_paths(results: &[crate::tracker::PathResult], target: &PolynomialSystem) -> Vec<usize> {
    let mut bad = Vec::new();
    let mut seen: Vec<(usize, Vec<C64>)> = Vec::new();
    for r in results.iter().filter(|r| matches!(r.status, PathStatus::Converged | PathStatus::ConvergedSingular)) {
        let Some(p) = polished(target, r) else { continue };
        let tol = DEDUP_TOL * linalg::norm(&p).max(1.0);
        if let Some((first, _)) = seen.iter().find(|(_, q)| linalg::distance(q, &p) < tol) {
            bad.push(*first);
            bad.push(r.start_index);
        } else {
            seen.push((r.start_index, p));
        }
    }
    bad.sort_unstable();
    bad.dedup();
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hypersurface_structure(n: usize, k: u32) -> MultiHomStructure {
        let mut degrees = vec![vec![2 * k, 0]];
        degrees.extend((0..n).map(|_| vec![2 * k - 1, 1]));
        degrees.push(vec![0, 1]);
        MultiHomStructure::new(vec![(0..n).collect(), (n..n + 2).collect()], degrees).unwrap()
    }

    #[test]
    fn k_bound_examples() {
        assert_eq!(k_bound(3, 1).unwrap(), 6);
        assert_eq!(k_bound(4, 2).unwrap(), 432);
        assert_eq!(k_bound(2, 1).unwrap(), 4);
        assert!(matches!(k_bound(40, 1000), Err(Error::Overflow(_))));
    }

    #[test]
    fn bezout_matches_k_bound_on_hypersurfaces() {
        for n in 1..=6 {
            for k in 1..=4 {
                let s = hypersurface_structure(n, k);
                assert_eq!(multihomog_bezout(&s).unwrap(), k_bound(n as u32, k).unwrap(), "N={n} k={k}");
            }
        }
    }

    #[test]
    fn bezout_small_example() {
        // (a + b) * a over groups of size 1, 1
        let s = MultiHomStructure::new(vec![vec![0], vec![1]], vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(multihomog_bezout(&s).unwrap(), 1);
        let st = build_start_system(&s, 4).unwrap();
        assert_eq!(st.start_points.len(), 1);
    }

    #[test]
    fn bezout_overflow_is_rejected() {
        let n = 40;
        let degrees = (0..n).map(|_| vec![60u32]).collect();
        let s = MultiHomStructure::new(vec![(0..n).collect()], degrees).unwrap();
        assert!(matches!(multihomog_bezout(&s), Err(Error::Overflow(_))));
    }

    #[test]
    fn start_points_solve_product_system() {
        let s = hypersurface_structure(3, 1);
        let st = build_start_system(&s, 9).unwrap();
        assert_eq!(st.start_points.len(), 6);
        let sys = st.system();
        for p in &st.start_points {
            let r = scaled_residual(&sys, p);
            assert!(r < 1e-12, "residual {r}");
            let j = sys.jacobian(p).unwrap();
            assert!(linalg::min_singular_value_row_scaled(&j) > 1e-8);
        }
    }
}
