use std::f64::consts::TAU;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::endgame::cauchy_endgame_projective;
use super::homotopy::{GroupRole, Homotopy};
use super::newton::correct;
use super::options::TrackOptions;
use crate::linalg;
use crate::poly::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathStatus {
    Converged,
    ConvergedSingular,
    AtInfinity,
    XConvergedLambdaDiverged,
    Failed,
}

impl PathStatus {
    pub fn is_converged(self) -> bool {
        matches!(self, PathStatus::Converged | PathStatus::ConvergedSingular)
    }
}

/// Outcome of tracking one path from `t = 1` to `t = 0`.
#[derive(Clone, Debug)]
pub struct PathResult {
    pub status: PathStatus,
    pub start_index: usize,
    /// Affine endpoint, present when every group stayed finite.
    pub endpoint: Option<Vec<C64>>,
    /// The endgame's previous estimate of the endpoint, for a second
    /// approximation of the same limit.
    pub previous: Option<Vec<C64>>,
    /// Limit of the primary group's affine coordinates when finite.
    pub x_endpoint: Option<Vec<C64>>,
    pub x_previous: Option<Vec<C64>>,
    pub projective: Vec<C64>,
    pub winding: usize,
    pub residual: f64,
    pub sigma_min: f64,
    pub steps: usize,
}

/// Where `t` travels while the path parameter `s` goes from 0 to 1.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Segment {
    Line { from: C64, to: C64 },
    /// `t = radius * exp(i * theta)` with theta from `theta0` to `theta1`.
    Arc { radius: f64, theta0: f64, theta1: f64 },
}

impl Segment {
    fn t(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { radius, theta0, theta1 } => C64::from_polar(radius, theta0 + (theta1 - theta0) * s),
        }
    }

    fn dt(&self, s: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, theta0, theta1 } => {
                let th = theta0 + (theta1 - theta0) * s;
                C64::new(0.0, theta1 - theta0) * C64::from_polar(radius, th)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SegmentError {
    StepUnderflow,
    TooManySteps,
    Diverged,
}

/// Tracks `v` along `seg` with RK4 prediction on the Davidenko equation and
/// Newton correction. `step` is carried across calls.
pub(crate) fn track_segment(
    h: &Homotopy,
    v: &mut Vec<C64>,
    seg: Segment,
    step: &mut f64,
    opts: &TrackOptions,
    steps_taken: &mut usize,
) -> Result<(), SegmentError> {
    let mut s = 0.0_f64;
    let mut successes = 0usize;
    let mut local_steps = 0usize;
    let primary: Vec<usize> =
        (0..h.groups().len()).filter(|&g| h.groups()[g].role == GroupRole::Primary).collect();
    while s < 1.0 {
        if local_steps >= opts.max_steps {
            return Err(SegmentError::TooManySteps);
        }
        local_steps += 1;
        let hstep = step.min(1.0 - s).min(opts.max_step);
        let last = hstep >= 1.0 - s;
        let s_next = if last { 1.0 } else { s + hstep };
        let ok = match predict(h, v, seg, s, s_next - s) {
            Some(mut cand) => {
                let t1 = seg.t(s_next);
                // A first correction comparable to the predicted move means
                // the predictor left the path's basin.
                let moved = linalg::distance(&cand, v);
                let bound = 0.25 * moved + 1e-8 * linalg::norm(v).max(1.0);
                let converged = correct(
                    |x| {
                        let e = h.eval(x, t1);
                        (e.value, e.jac)
                    },
                    |x| h.value_wide(x, t1),
                    &mut cand,
                    opts.corrector_tol,
                    opts.max_corrector_iters,
                    bound,
                );
                if converged {
                    *v = cand;
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if ok {
            s = s_next;
            *steps_taken += 1;
            successes += 1;
            if successes >= opts.expand_after {
                *step = (*step * opts.step_expand).min(opts.max_step);
                successes = 0;
            }
            for &g in &primary {
                if h.hom_ratio(v, g) * opts.infinity_threshold < 1.0 {
                    return Err(SegmentError::Diverged);
                }
            }
        } else {
            successes = 0;
            *step *= opts.step_contract;
            if *step < opts.min_step {
                return Err(SegmentError::StepUnderflow);
            }
        }
    }
    Ok(())
}

fn tangent(h: &Homotopy, v: &[C64], seg: Segment, s: f64) -> Option<DVector<C64>> {
    let e = h.eval(v, seg.t(s));
    let rhs = -(e.dt * seg.dt(s));
    linalg::solve(e.jac, &rhs)
}

fn predict(h: &Homotopy, v: &[C64], seg: Segment, s: f64, ds: f64) -> Option<Vec<C64>> {
    let x0 = DVector::from_column_slice(v);
    let k1 = tangent(h, v, seg, s)?;
    let x1 = &x0 + &k1 * C64::new(ds / 2.0, 0.0);
    let k2 = tangent(h, x1.as_slice(), seg, s + ds / 2.0)?;
    let x2 = &x0 + &k2 * C64::new(ds / 2.0, 0.0);
    let k3 = tangent(h, x2.as_slice(), seg, s + ds / 2.0)?;
    let x3 = &x0 + &k3 * C64::new(ds, 0.0);
    let k4 = tangent(h, x3.as_slice(), seg, s + ds)?;
    let incr = (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(ds / 6.0, 0.0);
    Some((x0 + incr).iter().copied().collect())
}

/// Tracks a path between two real values of `t` without an endgame.
pub fn track_between(h: &Homotopy, start: &[C64], from: f64, to: f64, opts: &TrackOptions) -> Option<Vec<C64>> {
    let mut v = h.lift(start);
    let mut step = opts.initial_step;
    let mut n = 0;
    let seg = Segment::Line { from: C64::new(from, 0.0), to: C64::new(to, 0.0) };
    track_segment(h, &mut v, seg, &mut step, opts, &mut n).ok()?;
    Some(h.dehomogenize(&v))
}

/// Polishes a patch-coordinate point at fixed `t`.
pub(crate) fn refine(h: &Homotopy, v: &mut Vec<C64>, t: C64, iters: usize) -> bool {
    let mut ok = false;
    for _ in 0..iters {
        let e = h.eval(v, t);
        let Some(dx) = linalg::solve(e.jac, &(-e.value)) else { return ok };
        let small = dx.norm() < 1e-14 * linalg::norm(v).max(1.0);
        for (a, d) in v.iter_mut().zip(dx.iter()) {
            *a += d;
        }
        ok = true;
        if small {
            break;
        }
    }
    ok
}

/// Smallest row-scaled singular value of the projective Jacobian.
/// Row-normalized smallest singular value, capped by the smallest
/// coefficient-scaled row norm so that a row whose gradient vanishes (as
/// for `x^2` at 0) is not rescaled into looking regular.
pub(crate) fn sigma_min(h: &Homotopy, v: &[C64], t: C64) -> f64 {
    let rows = linalg::min_singular_value_row_scaled(&h.eval(v, t).jac);
    let flat = h.coefficient_scaled_jacobian(v, t).row_iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
    rows.min(flat)
}

/// Tracks the path through the affine start point `start` of `H(., 1)` to
/// `t = 0`: adaptive predictor-corrector down to the endgame boundary, then
/// the Cauchy endgame.
pub fn track_path(h: &Homotopy, start: &[C64], opts: &TrackOptions) -> PathResult {
    track_path_indexed(h, start, 0, opts)
}

pub fn track_path_indexed(h: &Homotopy, start: &[C64], start_index: usize, opts: &TrackOptions) -> PathResult {
    let mut v = h.lift(start);
    let mut steps = 0usize;
    let fail = |v: Vec<C64>, steps: usize| PathResult {
        status: PathStatus::Failed,
        start_index,
        endpoint: None,
        previous: None,
        x_endpoint: None,
        x_previous: None,
        projective: v,
        winding: 0,
        residual: f64::INFINITY,
        sigma_min: 0.0,
        steps,
    };
    // Starting points must be solutions; polish them first.
    refine(h, &mut v, C64::new(1.0, 0.0), 3);
    if h.scaled_residual(&v, C64::new(1.0, 0.0)) > 1e-8 {
        return fail(v, steps);
    }
    let mut step = opts.initial_step;
    let seg = Segment::Line { from: C64::new(1.0, 0.0), to: C64::new(opts.endgame_start, 0.0) };
    match track_segment(h, &mut v, seg, &mut step, opts, &mut steps) {
        Ok(()) => {}
        Err(SegmentError::Diverged) => {
            return classify(h, v.clone(), v, 1, false, start_index, steps, opts);
        }
        Err(_) => return fail(v, steps),
    }
    // Paths ending at nonsingular roots can be followed straight into t = 0.
    let zero = C64::new(0.0, 0.0);
    let mut direct = v.clone();
    let mut direct_step = step;
    let seg = Segment::Line { from: C64::new(opts.endgame_start, 0.0), to: zero };
    // Without an endgame a singular endpoint is useless, and the steps
    // shrink geometrically on the way into it; give up early.
    let budget = if opts.endgame { opts.clone() } else { TrackOptions { max_steps: opts.max_steps / 100, ..opts.clone() } };
    let reached = track_segment(h, &mut direct, seg, &mut direct_step, &budget, &mut steps).is_ok();
    if reached && sigma_min(h, &direct, zero) > opts.singular_tol {
        return classify(h, direct.clone(), direct, 1, true, start_index, steps, opts);
    }
    if !opts.endgame {
        return classify(h, direct.clone(), direct, 1, reached, start_index, steps, opts);
    }
    let eg = cauchy_endgame_projective(h, &v, opts.endgame_start, opts, &mut steps);
    classify(h, eg.endpoint, eg.previous, eg.winding, eg.ok, start_index, steps, opts)
}

#[allow(clippy::too_many_arguments)]
fn classify(
    h: &Homotopy,
    mut end: Vec<C64>,
    prev: Vec<C64>,
    winding: usize,
    endgame_ok: bool,
    start_index: usize,
    steps: usize,
    opts: &TrackOptions,
) -> PathResult {
    let zero = C64::new(0.0, 0.0);
    let inf_ratio = 1.0 / opts.endpoint_infinity_norm;
    let mut primary_finite = true;
    let mut aux_finite = true;
    for (g, grp) in h.groups().iter().enumerate() {
        let finite = h.hom_ratio(&end, g) > inf_ratio;
        match grp.role {
            GroupRole::Primary => primary_finite &= finite,
            GroupRole::Auxiliary => aux_finite &= finite,
        }
    }
    let x_of = |w: &[C64]| -> Vec<C64> {
        let x = h.dehomogenize(w);
        let mut out = Vec::new();
        for grp in h.groups().iter().filter(|g| g.role == GroupRole::Primary) {
            out.extend(grp.members.iter().map(|&i| x[i]));
        }
        out
    };
    let mut result = PathResult {
        status: PathStatus::Failed,
        start_index,
        endpoint: None,
        previous: None,
        x_endpoint: None,
        x_previous: None,
        projective: end.clone(),
        winding,
        residual: f64::INFINITY,
        sigma_min: 0.0,
        steps,
    };
    if !primary_finite {
        result.status = PathStatus::AtInfinity;
        return result;
    }
    if !endgame_ok {
        return result;
    }
    if !aux_finite {
        result.status = PathStatus::XConvergedLambdaDiverged;
        result.x_endpoint = Some(x_of(&end));
        result.x_previous = Some(x_of(&prev));
        return result;
    }
    let mut sig = sigma_min(h, &end, zero);
    let nonsingular = winding == 1 && sig > opts.singular_tol;
    if nonsingular {
        let mut polished = end.clone();
        if refine(h, &mut polished, zero, 3)
            && h.scaled_residual(&polished, zero) <= h.scaled_residual(&end, zero)
        {
            end = polished;
            sig = sigma_min(h, &end, zero);
        }
    }
    let residual = h.scaled_residual(&end, zero);
    result.residual = residual;
    result.sigma_min = sig;
    result.projective = end.clone();
    if residual >= opts.endpoint_residual_tol {
        return result;
    }
    result.status = if nonsingular { PathStatus::Converged } else { PathStatus::ConvergedSingular };
    result.endpoint = Some(h.dehomogenize(&end));
    result.previous = Some(h.dehomogenize(&prev));
    result.x_endpoint = Some(x_of(&end));
    result.x_previous = Some(x_of(&prev));
    result
}

pub(crate) const FULL_TURN: f64 = TAU;
