//! JSON shapes written by the commands. Complex numbers are `[re, im]`.

use realwitness::critical::{CriticalConfig, RealRunReport, RunCounts, Timings};
use realwitness::tracker::{PathResult, PathStatus};
use realwitness::witness::Membership;
use realwitness::C64;
use serde::Serialize;

pub type Pair = [f64; 2];

pub fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

pub fn pairs(p: &[C64]) -> Vec<Pair> {
    p.iter().copied().map(pair).collect()
}

#[derive(Serialize)]
pub struct Counts {
    pub paths: u64,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "E1")]
    pub e1: usize,
    pub real: usize,
    #[serde(rename = "R")]
    pub r: usize,
}

#[derive(Serialize)]
pub struct ConfigOut {
    pub dim: usize,
    pub z: Vec<f64>,
    pub gamma: Pair,
    pub y: Vec<f64>,
    pub alpha: Vec<Pair>,
    pub seed: u64,
}

impl ConfigOut {
    pub fn new(cfg: &CriticalConfig, dim: usize) -> Self {
        ConfigOut {
            dim,
            z: cfg.z.clone(),
            gamma: pair(cfg.gamma),
            y: cfg.y.clone(),
            alpha: pairs(&cfg.alpha),
            seed: cfg.seed,
        }
    }
}

#[derive(Serialize)]
pub struct RealOut {
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub counts: Counts,
    #[serde(rename = "R")]
    pub r: Vec<Vec<Pair>>,
    #[serde(rename = "R_real")]
    pub r_real: Vec<Vec<f64>>,
    #[serde(rename = "E1")]
    pub e1: Vec<Vec<Pair>>,
    pub borderline: Vec<Vec<Pair>>,
    pub diagnostics: RunCounts,
    pub config: ConfigOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl RealOut {
    pub fn new(rep: &RealRunReport, timings: bool) -> Self {
        let c = &rep.counts;
        RealOut {
            verified: rep.verified,
            reason: rep.reason.clone(),
            counts: Counts { paths: c.paths, s: c.s, e: c.e, e1: c.e1, real: c.real, r: c.r },
            r: rep.r.iter().map(|p| p.iter().map(|&x| [x, 0.0]).collect()).collect(),
            r_real: rep.r.clone(),
            e1: rep.e1.iter().map(|a| pairs(&a.best)).collect(),
            borderline: rep.borderline.iter().map(|p| pairs(p)).collect(),
            diagnostics: c.clone(),
            config: ConfigOut::new(&rep.config, rep.dimension),
            timings: timings.then(|| rep.timings.clone()),
        }
    }
}

#[derive(Serialize)]
pub struct PathOut {
    pub start_index: usize,
    pub status: PathStatus,
    pub endpoint: Option<Vec<Pair>>,
    pub winding: usize,
    pub residual: f64,
    pub sigma_min: f64,
    pub steps: usize,
}

impl From<&PathResult> for PathOut {
    fn from(p: &PathResult) -> Self {
        PathOut {
            start_index: p.start_index,
            status: p.status,
            endpoint: p.endpoint.as_deref().map(pairs),
            winding: p.winding,
            residual: p.residual,
            sigma_min: p.sigma_min,
            steps: p.steps,
        }
    }
}

#[derive(Serialize)]
pub struct TrackOut {
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub counts: Counts,
    pub paths: Vec<PathOut>,
    pub config: ConfigOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Serialize)]
pub struct CountOut {
    pub variables: usize,
    pub dim: usize,
    pub paths: u64,
    /// Present for a single equation of even degree.
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
}

#[derive(Serialize)]
pub struct MemberOut {
    pub verdict: &'static str,
    pub point: Vec<Pair>,
    pub nearest: Option<f64>,
    pub failures: usize,
    pub endpoints: Vec<Vec<Pair>>,
}

impl MemberOut {
    pub fn new(point: &[C64], m: &Membership) -> Self {
        MemberOut {
            verdict: if m.member { "true" } else { "false" },
            point: pairs(point),
            nearest: Some(m.nearest),
            failures: m.failures,
            endpoints: m.endpoints.iter().map(|e| pairs(e)).collect(),
        }
    }
}
