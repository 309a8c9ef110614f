//! Cauchy endgame.
//!
//! Near `t = 0` a path with winding number `c` is a convergent power series
//! in `t^(1/c)`. Following the path around `|t| = r` until it closes up
//! yields `c * K` equally spaced samples of that series, and their mean is
//! its constant term, which is the endpoint. Estimates at shrinking radii
//! are compared until two agree.

use super::homotopy::Homotopy;
use super::options::TrackOptions;
use super::track::{track_segment, Segment, FULL_TURN};
use crate::linalg;
use crate::poly::C64;

/// Result in patch coordinates.
pub(crate) struct ProjectiveEndgame {
    pub endpoint: Vec<C64>,
    pub previous: Vec<C64>,
    pub winding: usize,
    pub ok: bool,
}

/// Result of [`cauchy_endgame`] in affine coordinates.
#[derive(Clone, Debug)]
pub struct EndgameResult {
    pub endpoint: Vec<C64>,
    pub previous: Vec<C64>,
    pub winding: usize,
    pub ok: bool,
}

/// Runs the endgame from the affine point `approach`, which lies on a path
/// at `t = t_e`.
pub fn cauchy_endgame(h: &Homotopy, approach: &[C64], t_e: f64, opts: &TrackOptions) -> EndgameResult {
    let mut v = h.lift(approach);
    super::track::refine(h, &mut v, C64::new(t_e, 0.0), 3);
    let mut steps = 0;
    let eg = cauchy_endgame_projective(h, &v, t_e, opts, &mut steps);
    EndgameResult {
        endpoint: h.dehomogenize(&eg.endpoint),
        previous: h.dehomogenize(&eg.previous),
        winding: eg.winding,
        ok: eg.ok,
    }
}

/// One trip around the circle of radius `r`: returns the samples and the
/// winding number, or `None` when tracking fails or the loop does not close.
fn loop_samples(
    h: &Homotopy,
    v: &[C64],
    r: f64,
    opts: &TrackOptions,
    steps: &mut usize,
) -> Option<(Vec<Vec<C64>>, usize)> {
    let k = opts.samples_per_loop;
    let dtheta = FULL_TURN / k as f64;
    let mut samples = Vec::with_capacity(k);
    let mut cur = v.to_vec();
    let base = linalg::norm(v).max(1.0);
    let mut step = 1.0;
    for c in 1..=opts.max_endgame_cycles {
        for j in 0..k {
            samples.push(cur.clone());
            let seg = Segment::Arc { radius: r, theta0: dtheta * j as f64, theta1: dtheta * (j + 1) as f64 };
            track_segment(h, &mut cur, seg, &mut step, opts, steps).ok()?;
            step = step.max(0.25);
        }
        if linalg::distance(&cur, v) < 1e-7 * base {
            return Some((samples, c));
        }
    }
    None
}

fn mean(samples: &[Vec<C64>]) -> Vec<C64> {
    let n = samples[0].len();
    let w = 1.0 / samples.len() as f64;
    let mut m = vec![C64::new(0.0, 0.0); n];
    for s in samples {
        for (a, b) in m.iter_mut().zip(s) {
            *a += b * w;
        }
    }
    m
}

pub(crate) fn cauchy_endgame_projective(
    h: &Homotopy,
    approach: &[C64],
    t_e: f64,
    opts: &TrackOptions,
    steps: &mut usize,
) -> ProjectiveEndgame {
    let mut r = t_e;
    let mut v = approach.to_vec();
    let mut prev: Option<Vec<C64>> = None;
    let mut winding = 0;
    let mut shrink_step = opts.initial_step;
    for _ in 0..opts.max_endgame_rounds {
        // A loop that fails to close usually encircles a nearby branch
        // point; move inward and try again.
        let mut factor = opts.endgame_shrink;
        if let Some((samples, c)) = loop_samples(h, &v, r, opts, steps) {
            winding = c;
            let est = mean(&samples);
            if let Some(p) = &prev {
                let scale = linalg::norm(&est).max(1.0);
                // A loop around branch points other than 0 averages several
                // endpoints; such means agree across radii but are not
                // roots, and the branch points may lie far inside.
                if linalg::distance(&est, p) < opts.endgame_tol * scale {
                    if h.scaled_residual(&est, C64::new(0.0, 0.0)) <= opts.endpoint_residual_tol {
                        return ProjectiveEndgame { endpoint: est, previous: p.clone(), winding, ok: true };
                    }
                    factor = opts.endgame_shrink.powi(4);
                }
            }
            prev = Some(est);
        }
        let seg = Segment::Line { from: C64::new(r, 0.0), to: C64::new(r * factor, 0.0) };
        if track_segment(h, &mut v, seg, &mut shrink_step, opts, steps).is_err() {
            break;
        }
        shrink_step = shrink_step.max(0.25);
        r *= factor;
    }
    let last = prev.unwrap_or_else(|| v.clone());
    ProjectiveEndgame { endpoint: last.clone(), previous: last, winding, ok: false }
}
