//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! with the measured values; failures are reported, not hidden.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realwitness::critical::{run_real, Component, CriticalConfig, RealOptions};
use realwitness::fixtures::{cubic_witness, system, HYPERSURF};
use realwitness::start::{k_bound, multihomog_bezout, MultiHomStructure};
use realwitness::tracker::{cauchy_endgame, Homotopy, TrackOptions};
use realwitness::witness::membership_test;
use realwitness::{linalg, parse_system, Polynomial, PolynomialSystem, C64};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

struct Run {
    code: Option<i32>,
    json: Value,
    secs: f64,
}

fn cli(args: &[&str]) -> Run {
    let clock = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_realwitness"))
        .args(args)
        .env_remove("REALWITNESS_SEED")
        .output()
        .expect("binary runs");
    let secs = clock.elapsed().as_secs_f64();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    Run { code: out.status.code(), json, secs }
}

fn count(v: &Value, key: &str) -> i64 {
    v["counts"][key].as_i64().unwrap_or(-1)
}

fn diag(v: &Value, key: &str) -> i64 {
    v["diagnostics"][key].as_i64().unwrap_or(-1)
}

fn real_points(v: &Value) -> Vec<Vec<f64>> {
    let Some(rows) = v["R_real"].as_array() else { return Vec::new() };
    rows.iter().map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()).collect()
}

fn complex_points(v: &Value) -> Vec<Vec<C64>> {
    let Some(rows) = v.as_array() else { return Vec::new() };
    rows.iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|z| C64::new(z[0].as_f64().unwrap(), z[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

struct Report {
    passed: usize,
    total: usize,
}

impl Report {
    fn line(&mut self, n: usize, ok: bool, detail: String) {
        self.total += 1;
        self.passed += ok as usize;
        println!("criterion {n}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn near(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

fn hypersurface(rep: &mut Report) {
    let r = cli(&[
        "--jobs", "1", "real", &fixture("hypersurf.sys"), "--full-variety", "--dim", "2", "--z", "1", "--gamma",
        "2+3i", "--y", "3/8,5/9,1/3", "--alpha", "1/2-1/5i,6/7+2/3i",
    ]);
    let v = &r.json;
    let (s, e, e1) = (count(v, "S"), count(v, "E"), count(v, "E1"));
    let pts = real_points(v);
    let r_ok = pts.len() == 1 && near(&pts[0], &[1.0 / 48.0, 0.0, -1.0 / 48.0], 1e-8);
    let e1_pts = complex_points(&v["E1"]);
    let complex_ok = [1.0, -1.0].iter().all(|&sg| {
        let p = [C64::new(-1.0 / 3.0, sg * 5.0 / 9.0), C64::new(10.0 / 9.0, sg * 17.0 / 24.0), C64::new(-3.0 / 8.0, sg * 5.0 / 9.0)];
        e1_pts.iter().any(|q| linalg::distance(q, &p) < 1e-8)
    });
    let ok = r.code == Some(0) && (s, e, e1) == (4, 3, 3) && r_ok && complex_ok && r.secs < 5.0;
    rep.line(1, ok, format!("hypersurface: S={s} E={e} E1={e1} R={pts:?} complex E1 found={complex_ok} time={:.2}s", r.secs));
}

fn cubic(rep: &mut Report) {
    let r = cli(&[
        "--jobs", "8", "real", &fixture("cubicurve.sys"), "--witness", &fixture("cubic_witness.json"), "--z",
        "1/5,1/9", "--gamma", "3/11-1/13i", "--y", "1/4,1/6,-3/2", "--alpha", "1/3-1/7i,6/11+3/4i,2/3-7/8i",
    ]);
    let v = &r.json;
    let (paths, s, real, rr) = (count(v, "paths"), count(v, "S"), count(v, "real"), count(v, "R"));
    let y = [0.25, 1.0 / 6.0, -1.5];
    let d = |p: &[f64]| p.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    let pts = real_points(v);
    let nearest = pts.iter().min_by(|a, b| d(a).total_cmp(&d(b))).cloned().unwrap_or_default();
    let nearest_ok = near(&nearest, &[0.168, 0.028, 0.005], 1e-3);
    let ok = paths == 300 && s == 95 && real == 15 && rr == 7 && nearest_ok && r.secs < 60.0;
    rep.line(
        2,
        ok,
        format!(
            "twisted cubic: paths={paths} S={s} E1 real={real} (want 15) R={rr} (want 7) nearest={nearest:.4?} time={:.1}s (want < 60 s)",
            r.secs
        ),
    );
}

fn seeded_runs(n: usize, label: &str, args: &[&str], seeds: &[u64], want: (i64, i64, i64), budget: f64, rep: &mut Report) {
    let mut ok = true;
    let mut parts = Vec::new();
    for seed in seeds {
        let seed_s = seed.to_string();
        let mut a: Vec<&str> = vec!["--jobs", "8", "real"];
        a.extend(args);
        a.extend(["--seed", &seed_s]);
        let r = cli(&a);
        let v = &r.json;
        let got = (count(v, "paths"), count(v, "S"), count(v, "R"));
        let lost = diag(v, "failures") + diag(v, "at_infinity") + diag(v, "lambda_diverged");
        ok &= r.code == Some(0) && got == want && lost == 0 && r.secs < budget;
        parts.push(format!("seed {seed}: paths={} S={} R={} unconverged={lost} {:.1}s", got.0, got.1, got.2, r.secs));
    }
    rep.line(n, ok, format!("{label}: {}", parts.join("; ")));
}

fn bezout(rep: &mut Report) {
    let mut got = Vec::new();
    for name in ["hypersurf.sys", "cubicurve.sys", "quartic.sys", "f633.sys"] {
        got.push(cli(&["count", &fixture(name)]).json["paths"].as_i64().unwrap_or(-1));
    }
    let mut identity = true;
    for n in 1..=6usize {
        for k in 1..=4u32 {
            let mut degrees = vec![vec![2 * k, 0]];
            degrees.extend((0..n).map(|_| vec![2 * k - 1, 1]));
            degrees.push(vec![0, 1]);
            let s = MultiHomStructure::new(vec![(0..n).collect(), (n..n + 2).collect()], degrees).unwrap();
            identity &= multihomog_bezout(&s).ok() == k_bound(n as u32, k).ok();
        }
    }
    let ok = got == [6, 300, 432, 1792] && identity;
    rep.line(5, ok, format!("Bezout counts {got:?} (want [6, 300, 432, 1792]); K(N,2k) identity for N<=6, k<=4: {identity}"));
}

fn random_system(r: &mut ChaCha8Rng) -> PolynomialSystem {
    let n = r.gen_range(1..=6usize);
    let rows = r.gen_range(1..=n);
    let polys = (0..rows)
        .map(|_| {
            let terms = (0..r.gen_range(1..=6)).map(|_| {
                let mut e = vec![0u32; n];
                for _ in 0..r.gen_range(0..=4) {
                    e[r.gen_range(0..n)] += 1;
                }
                (e, C64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)))
            });
            Polynomial::from_terms(n, terms)
        })
        .collect();
    PolynomialSystem::from_polys(polys).unwrap()
}

fn jacobian_agrees(f: &PolynomialSystem, r: &mut ChaCha8Rng) -> bool {
    let x: Vec<C64> = (0..f.nvars()).map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    let jac = f.jacobian(&x).unwrap();
    let h = 1e-6;
    (0..f.nvars()).all(|j| {
        let (mut xp, mut xm) = (x.clone(), x.clone());
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f.evaluate(&xp).unwrap(), f.evaluate(&xm).unwrap());
        (0..f.len()).all(|i| ((fp[i] - fm[i]) / (2.0 * h) - jac[(i, j)]).norm() < 1e-6 * jac[(i, j)].norm().max(1.0))
    })
}

fn properties(rep: &mut Report) {
    let mut notes = Vec::new();
    let mut r = ChaCha8Rng::seed_from_u64(2024);
    let fd = (0..100).all(|_| jacobian_agrees(&random_system(&mut r), &mut r));
    notes.push(format!("finite differences={fd}"));

    let opts = RealOptions::default();
    let hyp = system(HYPERSURF);
    let base = CriticalConfig {
        z: vec![1.0],
        gamma: C64::new(2.0, 3.0),
        y: vec![3.0 / 8.0, 5.0 / 9.0, 1.0 / 3.0],
        alpha: vec![C64::new(0.5, -0.2), C64::new(6.0 / 7.0, 2.0 / 3.0)],
        seed: 0,
    };
    let e1 = |cfg: &CriticalConfig| -> Vec<Vec<C64>> {
        run_real(&hyp, 2, Component::FullVariety, cfg, &opts).unwrap().e1.into_iter().map(|a| a.best).collect()
    };
    let a = e1(&CriticalConfig { gamma: C64::from_polar(1.0, 0.4), ..base.clone() });
    let b = e1(&CriticalConfig { gamma: C64::from_polar(1.0, 2.9), ..base.clone() });
    let gamma = a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| linalg::distance(p, q) < 1e-6));
    notes.push(format!("gamma invariance={gamma}"));

    let two = cli(&["real", &fixture("two_circles.sys"), "--full-variety", "--dim", "1", "--seed", "1"]);
    let on = |p: &[f64], c: f64| (((p[0] - c).powi(2) + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-6;
    let pts = real_points(&two.json);
    let circles = [3.0, -3.0].iter().all(|&c| pts.iter().any(|p| on(p, c)));
    notes.push(format!("two circles={circles}"));

    let circ = cli(&["real", &fixture("circle.sys"), "--full-variety", "--dim", "1", "--y", "2,0", "--seed", "1"]);
    let mut pts = real_points(&circ.json);
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]));
    let circle = pts.len() == 2 && near(&pts[0], &[-1.0, 0.0], 1e-8) && near(&pts[1], &[1.0, 0.0], 1e-8);
    notes.push(format!("circle y=(2,0)={circle}"));

    let ws = cubic_witness().unwrap();
    let identity = ws.points().iter().all(|w| {
        membership_test(&ws, w, opts.tol_member, 0, &opts.track).map(|m| m.member).unwrap_or(false)
    });
    notes.push(format!("membership identity={identity}"));

    let h = Homotopy::new(parse_system("variables: x t\nx^2 - t").unwrap(), 0).unwrap();
    let te: f64 = 0.01;
    let eg = cauchy_endgame(&h, &[C64::new(te.sqrt(), 0.0)], te, &TrackOptions::default());
    let endgame = eg.ok && eg.winding == 2 && eg.endpoint[0].norm() < 1e-10;
    notes.push(format!("x^2 - t winding={} |x|={:.1e}", eg.winding, eg.endpoint[0].norm()));

    let ok = fd && gamma && circles && circle && identity && endgame;
    rep.line(6, ok, format!("properties: {}", notes.join(", ")));
}

fn out_of_scope(rep: &mut Report) {
    let text = std::fs::read_to_string(fixture("README.md")).unwrap_or_default();
    let ok = text.contains("out of scope") && ["1536", "283", "24"].iter().all(|n| text.contains(n));
    rep.line(7, ok, "twelve-bar linkage documented as out of scope in fixtures/README.md".into());
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut rep = Report { passed: 0, total: 0 };
    hypersurface(&mut rep);
    cubic(&mut rep);
    seeded_runs(
        3,
        "quartic",
        &[&fixture("quartic.sys"), "--full-variety", "--dim", "3", "--z", "1", "--y", "4/3,-9/5,-5/7,8/9"],
        &[0, 1, 2],
        (432, 151, 28),
        120.0,
        &mut rep,
    );
    seeded_runs(
        4,
        "F633",
        &[&fixture("f633.sys"), "--full-variety", "--dim", "2", "--y", "1/5,-3/4,-2/3,7/9,-4/7,12/13,1/2,-10/11"],
        &[7, 8, 9],
        (1792, 274, 36),
        600.0,
        &mut rep,
    );
    bezout(&mut rep);
    properties(&mut rep);
    out_of_scope(&mut rep);
    println!("acceptance: {} of {} criteria passed", rep.passed, rep.total);
}
