//! Bundled systems and witness sets from `fixtures/`.

use crate::error::Result;
use crate::poly::{parse_system, Polynomial, PolynomialSystem};
use crate::witness::WitnessSet;

pub const HYPERSURF: &str = include_str!("../../../fixtures/hypersurf.sys");
pub const CUBICURVE: &str = include_str!("../../../fixtures/cubicurve.sys");
pub const QUARTIC: &str = include_str!("../../../fixtures/quartic.sys");
pub const F633: &str = include_str!("../../../fixtures/f633.sys");
pub const CIRCLE: &str = include_str!("../../../fixtures/circle.sys");
pub const TWO_CIRCLES: &str = include_str!("../../../fixtures/two_circles.sys");
pub const CUBIC_WITNESS: &str = include_str!("../../../fixtures/cubic_witness.json");

pub fn system(text: &str) -> PolynomialSystem {
    parse_system(text).expect("bundled fixtures parse")
}

/// `s -> (s, s^2, s^3)`.
pub fn twisted_cubic() -> Vec<Polynomial> {
    let s = Polynomial::var(1, 0);
    vec![s.clone(), s.pow(2), s.pow(3)]
}

pub fn cubic_witness() -> Result<WitnessSet> {
    WitnessSet::from_json(CUBIC_WITNESS)
}
