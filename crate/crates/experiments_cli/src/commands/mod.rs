use std::time::Instant;

use crate::config::{ExperimentConfig, Resolver};
use crate::output::Artifacts;
use crate::summary::{Check, Timings};

pub mod bounds;
pub mod bump;
pub mod convergence;
pub mod expsum;
pub mod reconstruct;
pub mod signcount;
pub mod spectrum;

/// What a pipeline hands back before the shared files are added.
pub struct Produced {
    pub checks: Vec<Check>,
    pub artifacts: Artifacts,
}

pub(crate) struct Env<'a> {
    pub res: &'a Resolver,
    pub cfg: &'a mut ExperimentConfig,
    pub timings: &'a mut Timings,
}

impl Env<'_> {
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.timings.stages_ms.push((stage.to_string(), t0.elapsed().as_secs_f64() * 1e3));
        out
    }
}

pub(crate) fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// Label used in file names, e.g. 10 → "10", 20.7 → "20.7".
pub(crate) fn omega_tag(omega: f64) -> String {
    format!("w{omega}")
}
