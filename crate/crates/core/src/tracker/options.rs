use serde::{Deserialize, Serialize};

/// Step control, endgame and classification settings for path tracking.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackOptions {
    /// First step, as a fraction of the segment being tracked.
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Newton update norm (relative to the point norm) accepted as converged.
    pub corrector_tol: f64,
    pub max_corrector_iters: usize,
    pub step_expand: f64,
    pub step_contract: f64,
    /// Consecutive successes before the step grows.
    pub expand_after: usize,
    /// Value of `t` where the endgame takes over.
    pub endgame_start: f64,
    pub endgame_shrink: f64,
    /// Largest winding number the endgame will try before giving up.
    pub max_endgame_cycles: usize,
    /// Radius shrinks before the endgame gives up.
    pub max_endgame_rounds: usize,
    pub samples_per_loop: usize,
    /// Agreement required between two consecutive endgame estimates.
    pub endgame_tol: f64,
    /// Affine norm beyond which a path is stopped as diverging.
    pub infinity_threshold: f64,
    /// Affine norm beyond which an endpoint estimate counts as infinite.
    pub endpoint_infinity_norm: f64,
    /// Smallest row-scaled singular value of a nonsingular endpoint.
    pub singular_tol: f64,
    /// Bound on the norm-scaled residual of converged endpoints.
    pub endpoint_residual_tol: f64,
    pub max_steps: usize,
    /// Run the Cauchy endgame when a path cannot be followed straight into
    /// a nonsingular endpoint. Without it such paths end where direct
    /// tracking stopped.
    #[serde(default = "yes")]
    pub endgame: bool,
}

fn yes() -> bool {
    true
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            initial_step: 0.1,
            min_step: 1e-14,
            max_step: 0.2,
            corrector_tol: 1e-10,
            max_corrector_iters: 3,
            step_expand: 2.0,
            step_contract: 0.5,
            expand_after: 5,
            endgame_start: 0.01,
            endgame_shrink: 0.5,
            max_endgame_cycles: 8,
            max_endgame_rounds: 14,
            samples_per_loop: 16,
            endgame_tol: 1e-9,
            infinity_threshold: 1e12,
            endpoint_infinity_norm: 1e7,
            singular_tol: 1e-8,
            endpoint_residual_tol: 1e-8,
            max_steps: 20_000,
            endgame: true,
        }
    }
}

impl TrackOptions {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0 < self.min_step && self.min_step < self.initial_step && self.initial_step < 1.0) {
            return Err("step sizes must satisfy 0 < min_step < initial_step < 1".into());
        }
        if !(0.0 < self.endgame_start && self.endgame_start < 1.0) {
            return Err("endgame start must lie in (0, 1)".into());
        }
        if !(0.0 < self.endgame_shrink && self.endgame_shrink < 1.0) {
            return Err("endgame shrink factor must lie in (0, 1)".into());
        }
        if self.max_corrector_iters == 0 || self.samples_per_loop < 3 || self.max_endgame_cycles == 0 {
            return Err("iteration counts must be positive (at least 3 samples per loop)".into());
        }
        Ok(())
    }
}
