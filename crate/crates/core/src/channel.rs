//! The Pauli channel acting on Bloch vectors and on one half of a Bell pair.
//!
//! Density operators are never built as matrices. A single-qubit state is
//! its Bloch vector, and the channel is a diagonal contraction of it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `p1 + p2 + p3 <= 1`.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Slack allowed on `|s| <= 1`.
pub const BLOCH_NORM_TOLERANCE: f64 = 1e-9;

/// Error probabilities `(p1, p2, p3)` of the `σ1`, `σ2` and `σ3` flips.
///
/// The no-error probability `p4 = 1 - p1 - p2 - p3` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ChannelParams {
    p1: f64,
    p2: f64,
    p3: f64,
}

#[derive(Deserialize)]
struct RawParams {
    p1: f64,
    p2: f64,
    p3: f64,
}

impl TryFrom<RawParams> for ChannelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.p1, raw.p2, raw.p3)
    }
}

impl ChannelParams {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        for (index, value) in [(1, p1), (2, p2), (3, p3)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum = p1 + p2 + p3;
        if sum > 1.0 + SIMPLEX_TOLERANCE {
            return Err(Error::OutsideSimplex { sum });
        }
        Ok(Self { p1, p2, p3 })
    }

    pub fn from_array(p: [f64; 3]) -> Result<Self> {
        Self::new(p[0], p[1], p[2])
    }

    /// The noiseless channel.
    pub fn identity() -> Self {
        Self {
            p1: 0.0,
            p2: 0.0,
            p3: 0.0,
        }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    /// Probability that the qubit passes unchanged, clamped at 0 within the
    /// simplex tolerance.
    pub fn p4(&self) -> f64 {
        (1.0 - self.p1 - self.p2 - self.p3).max(0.0)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p1, self.p2, self.p3]
    }

    /// Total error probability `p1 + p2 + p3`.
    pub fn total(&self) -> f64 {
        self.p1 + self.p2 + self.p3
    }

    /// Factor multiplying the Bloch component along `axis`.
    pub fn shrink_factor(&self, axis: PauliAxis) -> f64 {
        1.0 - 2.0 * measurement_down_probability(self, axis)
    }
}

/// The Pauli operators `σ1`, `σ2`, `σ3`, in that fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// 1-based index, `X = 1`, `Y = 2`, `Z = 3`.
    pub fn index(self) -> usize {
        match self {
            PauliAxis::X => 1,
            PauliAxis::Y => 2,
            PauliAxis::Z => 3,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        match index {
            1 => Some(PauliAxis::X),
            2 => Some(PauliAxis::Y),
            3 => Some(PauliAxis::Z),
            _ => None,
        }
    }

    /// Unit Bloch vector pointing along this axis, the reference state
    /// prepared for measuring this operator.
    pub fn reference_state(self) -> BlochVector {
        let mut s = [0.0; 3];
        s[self.index() - 1] = 1.0;
        BlochVector { s }
    }
}

/// A single-qubit state `ρ = (1 + s·σ) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    s: [f64; 3],
}

impl BlochVector {
    pub fn new(s1: f64, s2: f64, s3: f64) -> Result<Self> {
        let norm = (s1 * s1 + s2 * s2 + s3 * s3).sqrt();
        if !norm.is_finite() || norm * norm > 1.0 + BLOCH_NORM_TOLERANCE {
            return Err(Error::InvalidBlochVector { norm });
        }
        Ok(Self { s: [s1, s2, s3] })
    }

    pub fn components(&self) -> [f64; 3] {
        self.s
    }

    pub fn component(&self, axis: PauliAxis) -> f64 {
        self.s[axis.index() - 1]
    }

    pub fn norm(&self) -> f64 {
        self.s.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Sends a qubit in state `s` through the channel.
///
/// Each Bloch component is scaled by `1 - 2 P_i`, where `P_i` is the
/// probability of an error anticommuting with `σ_i`. The identity part of the
/// state is left alone, so the map is trace preserving.
pub fn apply_channel_bloch(p: &ChannelParams, s: &BlochVector) -> BlochVector {
    let mut out = s.s;
    for axis in PauliAxis::ALL {
        out[axis.index() - 1] *= p.shrink_factor(axis);
    }
    BlochVector { s: out }
}

/// Probability of reading eigenvalue `-1` when the `+1` eigenstate of
/// `axis` is sent through the channel and `σ_axis` is measured.
///
/// Only the two Pauli errors anticommuting with `σ_axis` flip the outcome.
pub fn measurement_down_probability(p: &ChannelParams, axis: PauliAxis) -> f64 {
    let flip = match axis {
        PauliAxis::X => p.p2 + p.p3,
        PauliAxis::Y => p.p1 + p.p3,
        PauliAxis::Z => p.p1 + p.p2,
    };
    flip.min(1.0)
}

/// The four Bell states, ordered by the Pauli error that produces each from
/// the singlet: `σ1 → φ⁻`, `σ2 → φ⁺`, `σ3 → ψ⁺`, no error `→ ψ⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellState {
    PhiMinus,
    PhiPlus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiMinus,
        BellState::PhiPlus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    /// State shared before Alice's half goes through the channel.
    pub const INPUT: BellState = BellState::PsiMinus;

    fn slot(self) -> usize {
        self as usize
    }
}

/// Outcome probabilities of a Bell measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BellDistribution {
    probs: [f64; 4],
}

impl BellDistribution {
    pub fn probability(&self, state: BellState) -> f64 {
        self.probs[state.slot()]
    }

    /// Probabilities in `BellState::ALL` order.
    pub fn as_array(&self) -> [f64; 4] {
        self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (BellState, f64)> + '_ {
        BellState::ALL.into_iter().zip(self.probs)
    }
}

/// Bell-measurement statistics after one half of `|ψ⁻⟩` crosses the
/// channel.
pub fn bell_output_distribution(p: &ChannelParams) -> BellDistribution {
    BellDistribution {
        probs: [p.p1, p.p2, p.p3, p.p4()],
    }
}
