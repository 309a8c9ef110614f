//! Predictor-corrector continuation of homotopy paths.
//!
//! Paths are tracked from `t = 1` to the endgame boundary with RK4 steps on
//! the Davidenko equation `H_v dv/dt = -H_t` and a Newton corrector, then
//! finished with a Cauchy endgame. All tracking happens in patch
//! coordinates (see [`Homotopy`]).

mod endgame;
mod homotopy;
mod newton;
mod options;
mod track;

use rayon::prelude::*;

pub use endgame::{cauchy_endgame, EndgameResult};
pub use homotopy::{CriticalMeta, GroupRole, Homotopy, HomotopyEval, VarGroup};
pub use newton::{newton_correct, NewtonOutcome};
pub use options::TrackOptions;
pub use track::{track_between, track_path, track_path_indexed, PathResult, PathStatus};

use crate::poly::C64;

/// Tracks every start point, in parallel on the current rayon pool. The
/// result is ordered by start index.
pub fn track_all(h: &Homotopy, starts: &[Vec<C64>], opts: &TrackOptions) -> Vec<PathResult> {
    starts
        .par_iter()
        .enumerate()
        .map(|(i, s)| track_path_indexed(h, s, i, opts))
        .collect()
}
