//! Command-line driver: `real`, `track`, `count` and `member`.
//!
//! Each command writes one JSON document to stdout or `--json OUT` and
//! reports problems on stderr. Exit codes: 0 success (verified run or a
//! membership verdict), 1 invalid input, 2 unverified run, 3 inconclusive
//! membership.

pub mod literal;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use realwitness::critical::{draw_generic, run_real, Component, ConfigTemplate, CriticalConfig, RealOptions};
use realwitness::start::{k_bound, multihomog_bezout, MultiHomStructure};
use realwitness::witness::{membership_test, WitnessSet};
use realwitness::{critical, parse_system, Error, PolynomialSystem};
use serde::Serialize;

use literal::{parse_complex, parse_complex_vector, parse_real_vector};
use report::{ConfigOut, Counts, CountOut, MemberOut, PathOut, RealOut, TrackOut};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNVERIFIED: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "realwitness", version, about = "Real points on every connected component of a real algebraic set")]
pub struct Cli {
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long = "json", value_name = "OUT", global = true)]
    pub json: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute real points on V, filtered by a witness set or on all of Var(f).
    Real(RealArgs),
    /// Track the critical homotopy and print every path's endpoint.
    Track(RealArgs),
    /// Print the number of start paths and, for even-degree hypersurfaces, K(N,2k).
    Count(CountArgs),
    /// Test whether a point lies on the component of a witness set.
    Member(MemberArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Comma-separated nonzero reals, one per equation.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Complex literal such as `2+3i`.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Comma-separated reals, one per variable.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Comma-separated complex literals, one per multiplier.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, env = "REALWITNESS_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct TolArgs {
    /// Relative Newton update accepted as converged.
    #[arg(long)]
    pub tol_newton: Option<f64>,
    /// Largest imaginary part treated as zero.
    #[arg(long)]
    pub tol_real: Option<f64>,
    /// Clustering radius for endpoints.
    #[arg(long)]
    pub tol_dedup: Option<f64>,
    /// Distance threshold of the membership test.
    #[arg(long)]
    pub tol_member: Option<f64>,
    /// Value of t where the endgame starts.
    #[arg(long)]
    pub t_endgame: Option<f64>,
}

impl TolArgs {
    fn apply(&self, o: &mut RealOptions) {
        if let Some(v) = self.tol_newton {
            o.track.corrector_tol = v;
        }
        if let Some(v) = self.tol_real {
            o.tol_real = v;
        }
        if let Some(v) = self.tol_dedup {
            o.tol_dedup = v;
        }
        if let Some(v) = self.tol_member {
            o.tol_member = v;
        }
        if let Some(v) = self.t_endgame {
            o.track.endgame_start = v;
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RealArgs {
    /// System file.
    pub system: PathBuf,
    /// Witness set (JSON) for the component V.
    #[arg(long, conflicts_with = "full_variety")]
    pub witness: Option<PathBuf>,
    /// Take V to be all of Var(f); requires --dim.
    #[arg(long)]
    pub full_variety: bool,
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CountArgs {
    pub system: PathBuf,
    /// Defaults to the number of variables minus the number of equations.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct MemberArgs {
    #[arg(long)]
    pub witness: PathBuf,
    /// Comma-separated complex literals.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, env = "REALWITNESS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub tol: TolArgs,
}

/// A failure that ends the command with the given exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Inconclusive(_)) { EXIT_INCONCLUSIVE } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

impl From<literal::LiteralError> for Failure {
    fn from(e: literal::LiteralError) -> Self {
        invalid(e.to_string())
    }
}

/// A JSON document and the exit code that goes with it.
pub struct Outcome {
    pub json: String,
    pub code: i32,
}

fn outcome<T: Serialize>(value: &T, code: i32) -> Outcome {
    let mut json = serde_json::to_string_pretty(value).expect("report serializes");
    json.push('\n');
    Outcome { json, code }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn load_system(path: &Path) -> Result<PolynomialSystem, Failure> {
    parse_system(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn load_witness(path: &Path) -> Result<WitnessSet, Failure> {
    WitnessSet::from_json(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn template(p: &ParamArgs) -> Result<ConfigTemplate, Failure> {
    Ok(ConfigTemplate {
        z: p.z.as_deref().map(parse_real_vector).transpose()?,
        gamma: p.gamma.as_deref().map(parse_complex).transpose()?,
        y: p.y.as_deref().map(parse_real_vector).transpose()?,
        alpha: p.alpha.as_deref().map(parse_complex_vector).transpose()?,
    })
}

fn options(tol: &TolArgs) -> Result<RealOptions, Failure> {
    let mut o = RealOptions::default();
    tol.apply(&mut o);
    o.track.validate().map_err(invalid)?;
    for (name, v) in [("tol-real", o.tol_real), ("tol-dedup", o.tol_dedup), ("tol-member", o.tol_member)] {
        if !(v > 0.0) {
            return Err(invalid(format!("--{name} must be positive")));
        }
    }
    Ok(o)
}

struct Prepared {
    f: PolynomialSystem,
    d: usize,
    witness: Option<WitnessSet>,
    cfg: CriticalConfig,
    opts: RealOptions,
}

fn prepare(a: &RealArgs, need_component: bool) -> Result<Prepared, Failure> {
    let f = load_system(&a.system)?;
    let witness = a.witness.as_deref().map(load_witness).transpose()?;
    let d = match (&witness, a.dim) {
        (Some(ws), Some(d)) if d != ws.dimension() => {
            return Err(invalid(format!("--dim {d} disagrees with the witness dimension {}", ws.dimension())))
        }
        (Some(ws), _) => ws.dimension(),
        (None, Some(d)) if a.full_variety || !need_component => d,
        (None, Some(_)) => return Err(invalid("give --witness FILE or --full-variety")),
        (None, None) => return Err(invalid("--dim is required without a witness set")),
    };
    let cfg = draw_generic(&f, d, &template(&a.params)?, a.params.seed)?;
    Ok(Prepared { f, d, witness, cfg, opts: options(&a.tol)? })
}

pub fn cmd_real(a: &RealArgs) -> Result<Outcome, Failure> {
    let p = prepare(a, true)?;
    let component = p.witness.as_ref().map_or(Component::FullVariety, Component::Witness);
    let rep = run_real(&p.f, p.d, component, &p.cfg, &p.opts)?;
    if let Some(reason) = &rep.reason {
        eprintln!("not verified: {reason}");
    }
    let code = if rep.verified { EXIT_OK } else { EXIT_UNVERIFIED };
    Ok(outcome(&RealOut::new(&rep, a.timings), code))
}

pub fn cmd_track(a: &RealArgs) -> Result<Outcome, Failure> {
    let p = prepare(a, false)?;
    let rep = run_real(&p.f, p.d, Component::FullVariety, &p.cfg, &p.opts)?;
    let c = &rep.counts;
    let out = TrackOut {
        verified: rep.verified,
        reason: rep.reason.clone(),
        counts: Counts { paths: c.paths, s: c.s, e: c.e, e1: c.e1, real: c.real, r: c.r },
        paths: rep.paths.iter().map(PathOut::from).collect(),
        config: ConfigOut::new(&rep.config, rep.dimension),
        timings: a.timings.then(|| rep.timings.clone()),
    };
    let code = if rep.verified { EXIT_OK } else { EXIT_UNVERIFIED };
    Ok(outcome(&out, code))
}

pub fn cmd_count(a: &CountArgs) -> Result<Outcome, Failure> {
    let f = load_system(&a.system)?;
    let n = f.nvars();
    let d = match a.dim {
        Some(d) => d,
        None => n.checked_sub(f.len()).filter(|&d| d > 0).ok_or_else(|| invalid("cannot infer --dim"))?,
    };
    let cfg = draw_generic(&f, d, &ConfigTemplate::default(), 0)?;
    let h = critical::build_critical_homotopy(&f, d, &cfg)?;
    let paths = multihomog_bezout(&MultiHomStructure::from_homotopy(&h)?)?;
    let k = match f.polys() {
        [p] if p.degree() > 0 && p.degree() % 2 == 0 => Some(k_bound(n as u32, (p.degree() / 2) as u32)?),
        _ => None,
    };
    Ok(outcome(&CountOut { variables: n, dim: d, paths, k }, EXIT_OK))
}

pub fn cmd_member(a: &MemberArgs) -> Result<Outcome, Failure> {
    let ws = load_witness(&a.witness)?;
    let point = parse_complex_vector(&a.point)?;
    let opts = options(&a.tol)?;
    match membership_test(&ws, &point, opts.tol_member, a.seed, &opts.track) {
        Ok(m) => Ok(outcome(&MemberOut::new(&point, &m), EXIT_OK)),
        Err(Error::Inconclusive(failures)) => {
            eprintln!("membership inconclusive: all {failures} paths failed");
            let out = MemberOut {
                verdict: "inconclusive",
                point: report::pairs(&point),
                nearest: None,
                failures,
                endpoints: Vec::new(),
            };
            Ok(outcome(&out, EXIT_INCONCLUSIVE))
        }
        Err(e) => Err(e.into()),
    }
}

/// Runs the parsed command line and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return EXIT_INVALID;
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Real(a) => cmd_real(a),
        Command::Track(a) => cmd_track(a),
        Command::Count(a) => cmd_count(a),
        Command::Member(a) => cmd_member(a),
    });
    match result {
        Ok(out) => {
            let written = match &cli.json {
                Some(path) => fs::write(path, &out.json).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", out.json);
                    Ok(())
                }
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_INVALID
                }
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
