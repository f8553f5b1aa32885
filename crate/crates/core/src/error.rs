use thiserror::Error;

use crate::BudgetMode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("channel probability p{index} = {value} must be a finite value in [0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("parameters exceed simplex: p1 + p2 + p3 = {sum} > 1")]
    OutsideSimplex { sum: f64 },

    #[error("Bloch vector norm {norm} exceeds 1")]
    InvalidBlochVector { norm: f64 },

    #[error("measured probability P{index} = {value} must lie in [0, 1]")]
    InvalidMeasuredProbability { index: usize, value: f64 },

    #[error("{what} must be at least 1")]
    ZeroResource { what: &'static str },

    #[error("count i{index} = {count} exceeds the {per_state} qubits measured per reference state")]
    CountOutOfRange { index: usize, count: u64, per_state: u64 },

    #[error("{} budget must be divisible by {}, got {total}", mode.noun(), mode.divisor())]
    BudgetNotDivisible { mode: BudgetMode, total: u64 },

    #[error("{what} = {value} exceeds the enumeration cap of {cap}")]
    EnumerationCap { what: &'static str, value: u64, cap: u64 },

    #[error("grid-steps must be ≥ 2, got {0}")]
    InvalidGrid(u64),

    #[error("slice value p2 = {0} must lie in [0, 1]")]
    InvalidSlice(f64),

    #[error("trials must be at least 1")]
    InvalidTrials,

    #[error("{0}")]
    IncompatibleResource(String),
}
