//! Regenerates `fixtures/cubic_witness.json` (pass a seed, default 1).

use realwitness::fixtures::{system, twisted_cubic, CUBICURVE};
use realwitness::witness::witness_from_parametrization;

fn main() {
    let seed = std::env::args().nth(1).map_or(1, |s| s.parse().expect("seed must be an integer"));
    let ws = witness_from_parametrization(&twisted_cubic(), &system(CUBICURVE), seed).expect("witness set");
    println!("{}", ws.to_json());
}
