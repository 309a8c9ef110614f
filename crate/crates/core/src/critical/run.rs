use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::points::{classify_real, cluster_points, mean_of, Approximation};
use super::{build_critical_homotopy, real_point, CriticalConfig};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{PolynomialSystem, C64};
use crate::start::{multihomog_bezout, relative_sigma, scaled_residual, solve_start, MultiHomStructure, START_SINGULAR_TOL};
use crate::tracker::{track_all, PathResult, PathStatus, TrackOptions};
use crate::witness::{membership_test, WitnessSet};

/// Which part of `Var(f)` the real points are wanted on.
#[derive(Clone, Copy, Debug)]
pub enum Component<'a> {
    /// `V = Var(f)`; no membership filtering.
    FullVariety,
    Witness(&'a WitnessSet),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealOptions {
    pub track: TrackOptions,
    /// Largest imaginary part accepted as real.
    pub tol_real: f64,
    /// Clustering radius for `E` and `E1`.
    pub tol_dedup: f64,
    /// Distance threshold of the membership test.
    pub tol_member: f64,
}

impl Default for RealOptions {
    fn default() -> Self {
        RealOptions { track: TrackOptions::default(), tol_real: 1e-6, tol_dedup: 1e-6, tol_member: 1e-6 }
    }
}

/// Wall-clock seconds per stage.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub start: f64,
    pub track: f64,
    pub membership: f64,
    pub total: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunCounts {
    /// Start paths of the linear-product stage (the Bezout count).
    pub paths: u64,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "E1")]
    pub e1: usize,
    /// Points of `E1` classified real.
    pub real: usize,
    #[serde(rename = "R")]
    pub r: usize,
    pub borderline: usize,
    /// Independent start runs and their stalled paths in total.
    pub start_runs: usize,
    pub start_stalled: usize,
    pub start_singular: usize,
    pub start_at_infinity: usize,
    pub failures: usize,
    pub at_infinity: usize,
    pub lambda_diverged: usize,
    /// Real points dropped because `|f|`, relative to the size of its terms,
    /// exceeded `1e-6`.
    pub off_variety: usize,
}

/// Output of [`run_real`].
#[derive(Clone, Debug)]
pub struct RealRunReport {
    pub verified: bool,
    /// Why `verified` is false.
    pub reason: Option<String>,
    pub config: CriticalConfig,
    pub dimension: usize,
    pub s: Vec<Vec<C64>>,
    /// Step-3 paths in start-index order.
    pub paths: Vec<PathResult>,
    pub e: Vec<Vec<C64>>,
    pub e1: Vec<Approximation>,
    /// `E1` intersected with real space.
    pub real: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub borderline: Vec<Vec<C64>>,
    /// Membership verdict for each entry of `real`, when a witness set was given.
    pub membership: Vec<Option<bool>>,
    /// Largest smallest-singular-value of the column-normalized Fritz John
    /// matrix over `E`.
    pub fritz_john: f64,
    pub counts: RunCounts,
    pub timings: Timings,
}

impl RealRunReport {
    /// The point of `R` closest to `y`.
    pub fn nearest_to_y(&self) -> Option<&[f64]> {
        let y = &self.config.y;
        let d = |p: &[f64]| p.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        self.r.iter().min_by(|a, b| d(a).total_cmp(&d(b))).map(Vec::as_slice)
    }
}

const OFF_VARIETY: f64 = 1e-6;

/// Smallest singular value of `[x - y, grad f_1(x), ..., grad f_k(x)]` with
/// each column scaled to unit norm. A column below `1e-8` in norm counts as
/// zero and gives zero.
pub fn fritz_john_sigma(f: &PolynomialSystem, y: &[f64], x: &[C64]) -> f64 {
    let n = f.nvars();
    let jac = f.jacobian(x).expect("length matches");
    let cols = f.len() + 1;
    let mut m = DMatrix::from_fn(n, cols, |i, j| if j == 0 { x[i] - y[i] } else { jac[(j - 1, i)] });
    for mut col in m.column_iter_mut() {
        let nrm = col.norm();
        if nrm < 1e-8 {
            return 0.0;
        }
        col /= C64::new(nrm, 0.0);
    }
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Runs the four steps: build `H`, solve `H(., 1) = 0`, track to `t = 0`,
/// filter the real limits by membership in the requested component.
pub fn run_real(
    f: &PolynomialSystem,
    d: usize,
    component: Component<'_>,
    cfg: &CriticalConfig,
    opts: &RealOptions,
) -> Result<RealRunReport> {
    opts.track.validate().map_err(Error::InvalidConfig)?;
    if let Component::Witness(ws) = component {
        if ws.dimension() != d || ws.system().nvars() != f.nvars() {
            return Err(Error::InvalidWitness(format!(
                "witness set of dimension {} in {} variables for d = {d}, N = {}",
                ws.dimension(),
                ws.system().nvars(),
                f.nvars()
            )));
        }
    }
    let clock = Instant::now();
    let h = build_critical_homotopy(f, d, cfg)?;
    let structure = MultiHomStructure::from_homotopy(&h)?;
    let bezout = multihomog_bezout(&structure)?;

    let mut report = RealRunReport {
        verified: false,
        reason: None,
        config: cfg.clone(),
        dimension: d,
        s: Vec::new(),
        paths: Vec::new(),
        e: Vec::new(),
        e1: Vec::new(),
        real: Vec::new(),
        r: Vec::new(),
        borderline: Vec::new(),
        membership: Vec::new(),
        fritz_john: 0.0,
        counts: RunCounts { paths: bezout, ..RunCounts::default() },
        timings: Timings::default(),
    };

    // Step 2
    let stage = solve_start(&h, &structure, cfg.seed, &opts.track)?;
    report.counts.start_runs = stage.runs;
    report.counts.start_stalled = stage.stalled;
    report.counts.start_singular = stage.singular;
    report.counts.start_at_infinity = stage.at_infinity;
    report.s = stage.solutions;
    report.counts.s = report.s.len();
    report.timings.start = clock.elapsed().as_secs_f64();
    let h1 = h.at(C64::new(1.0, 0.0));
    let singular_start = report.s.iter().filter(|s| relative_sigma(&h1, s).is_none_or(|v| v <= START_SINGULAR_TOL)).count();
    if !stage.agreed || singular_start > 0 {
        report.reason = Some(if stage.agreed {
            format!("start solutions not verified: {singular_start} are singular")
        } else {
            format!("start solutions not verified: {} runs of {} paths did not agree", stage.runs, stage.paths)
        });
        report.timings.total = clock.elapsed().as_secs_f64();
        return Ok(report);
    }

    // Step 3
    let t3 = Instant::now();
    report.paths = track_all(&h, &report.s, &opts.track);
    report.timings.track = t3.elapsed().as_secs_f64();
    let mut full = Vec::new();
    let mut x_best = Vec::new();
    let mut x_prev = Vec::new();
    let mut e_x = Vec::new();
    for p in &report.paths {
        match p.status {
            PathStatus::Converged | PathStatus::ConvergedSingular => {
                full.push(p.endpoint.clone().expect("converged paths carry endpoints"));
                e_x.push(p.x_endpoint.clone().expect("converged paths carry endpoints"));
            }
            PathStatus::XConvergedLambdaDiverged => report.counts.lambda_diverged += 1,
            PathStatus::AtInfinity => report.counts.at_infinity += 1,
            PathStatus::Failed => report.counts.failures += 1,
        }
        if let (Some(b), Some(q)) = (&p.x_endpoint, &p.x_previous) {
            x_best.push(b.clone());
            x_prev.push(q.clone());
        }
    }
    let tol = opts.tol_dedup;
    report.e = cluster_points(&full, tol).iter().map(|c| mean_of(&full, c)).collect();
    report.e1 = cluster_points(&x_best, tol)
        .iter()
        .map(|c| Approximation { best: mean_of(&x_best, c), previous: mean_of(&x_prev, c) })
        .collect();
    report.counts.e = report.e.len();
    report.counts.e1 = report.e1.len();
    report.fritz_john = report.e.iter().map(|p| fritz_john_sigma(f, &cfg.y, &p[..f.nvars()])).fold(0.0, f64::max);

    let e1_points: Vec<Vec<C64>> = report.e1.iter().map(|a| a.best.clone()).collect();
    let pi_e: Vec<Vec<C64>> = cluster_points(&e_x, tol).iter().map(|c| mean_of(&e_x, c)).collect();
    let consistent = same_set(&pi_e, &e1_points, tol);

    // Step 4
    let classes = classify_real(&report.e1, opts.tol_real);
    report.borderline = classes.borderline.iter().map(|&i| report.e1[i].best.clone()).collect();
    report.counts.borderline = report.borderline.len();
    report.real = classes.real;
    report.counts.real = report.real.len();

    if report.counts.failures > 0 {
        report.reason = Some(format!("{} paths failed", report.counts.failures));
    } else if !consistent {
        report.reason = Some(format!("pi(E) has {} points but E1 has {}", pi_e.len(), e1_points.len()));
    }
    if report.reason.is_some() {
        report.timings.total = clock.elapsed().as_secs_f64();
        return Ok(report);
    }

    let t4 = Instant::now();
    let mut r = Vec::new();
    for x in &report.real {
        let xc = real_point(x);
        let verdict = match component {
            Component::FullVariety => None,
            Component::Witness(ws) => match membership_test(ws, &xc, opts.tol_member, cfg.seed, &opts.track) {
                Ok(m) => Some(m.member),
                Err(Error::Inconclusive(_)) => {
                    report.reason = Some("membership test inconclusive".into());
                    None
                }
                Err(e) => return Err(e),
            },
        };
        report.membership.push(verdict);
        if verdict == Some(false) {
            continue;
        }
        if scaled_residual(f, &xc) < OFF_VARIETY {
            r.push(x.clone());
        } else {
            report.counts.off_variety += 1;
        }
    }
    report.timings.membership = t4.elapsed().as_secs_f64();
    if report.reason.is_none() {
        report.verified = true;
        report.r = r;
        report.counts.r = report.r.len();
    }
    report.timings.total = clock.elapsed().as_secs_f64();
    Ok(report)
}

fn same_set(a: &[Vec<C64>], b: &[Vec<C64>], tol: f64) -> bool {
    let covered = |x: &[Vec<C64>], y: &[Vec<C64>]| x.iter().all(|p| y.iter().any(|q| linalg::distance(p, q) < tol));
    a.len() == b.len() && covered(a, b) && covered(b, a)
}
