use speclab_numerics::{QuadError, RootError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid potential: {0}")]
    Potential(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("grid too coarse: Prüfer phase jumped {jump:.3} rad in one step near x = {x}")]
    Resolution { x: f64, jump: f64 },
    #[error("mode {mode}: bracket [{lo}, {hi}] failed ({reason})")]
    Bracket { mode: usize, lo: f64, hi: f64, reason: String },
    #[error("mode {mode}: normalization integral not finite")]
    Normalization { mode: usize },
    #[error("Picard series does not converge at k = {k} (term ratio {ratio})")]
    Picard { k: String, ratio: f64 },
    #[error("Jost function needs k != 0 with Im k >= 0, got {0}")]
    BadK(String),
    #[error("omega = {0} needs to exceed pi/2 for a square-well bound state")]
    NoBoundState(f64),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Root(#[from] RootError),
}
