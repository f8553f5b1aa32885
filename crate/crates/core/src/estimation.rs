//! The two estimation schemes: outcome counts in, parameter estimates out.
//!
//! Estimates are never projected back onto the probability simplex. The
//! separable estimator can go negative, and the expected-error formulas
//! average exactly that unclipped estimator.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{bell_output_distribution, measurement_down_probability, ChannelParams, PauliAxis};
use crate::error::{Error, Result};
use crate::sampling::{draw_binomial, draw_multinomial};

/// Numbers of `-1` outcomes for the `σ1`, `σ2`, `σ3` measurements, each made
/// on `per_state` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparableCounts {
    counts: [u64; 3],
    per_state: u64,
}

impl SeparableCounts {
    pub fn new(i1: u64, i2: u64, i3: u64, per_state: u64) -> Result<Self> {
        if per_state == 0 {
            return Err(Error::ZeroResource {
                what: "qubits per reference state",
            });
        }
        for (index, count) in [(1, i1), (2, i2), (3, i3)] {
            if count > per_state {
                return Err(Error::CountOutOfRange {
                    index,
                    count,
                    per_state,
                });
            }
        }
        Ok(Self {
            counts: [i1, i2, i3],
            per_state,
        })
    }

    pub fn counts(&self) -> [u64; 3] {
        self.counts
    }

    pub fn per_state(&self) -> u64 {
        self.per_state
    }
}

/// Occurrences of `φ⁻`, `φ⁺`, `ψ⁺`, `ψ⁻` over `n_prime` Bell measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellCounts {
    counts: [u64; 4],
}

impl BellCounts {
    pub fn new(i1: u64, i2: u64, i3: u64, i4: u64) -> Result<Self> {
        if i1 + i2 + i3 + i4 == 0 {
            return Err(Error::ZeroResource {
                what: "number of ebits",
            });
        }
        Ok(Self {
            counts: [i1, i2, i3, i4],
        })
    }

    pub fn counts(&self) -> [u64; 4] {
        self.counts
    }

    pub fn n_prime(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Outcome probabilities `P_i` of the three single-qubit measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasuredProbabilities {
    probs: [f64; 3],
}

impl MeasuredProbabilities {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        for (index, value) in [(1, p1), (2, p2), (3, p3)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidMeasuredProbability { index, value });
            }
        }
        Ok(Self { probs: [p1, p2, p3] })
    }

    /// The probabilities a channel with parameters `p` produces.
    pub fn of_channel(p: &ChannelParams) -> Self {
        Self {
            probs: PauliAxis::ALL.map(|axis| measurement_down_probability(p, axis)),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.probs
    }
}

/// An estimated parameter vector, optionally scored against the truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub p_est: [f64; 3],
    pub quadratic_error: Option<f64>,
}

impl EstimateResult {
    fn unscored(p_est: [f64; 3]) -> Self {
        Self {
            p_est,
            quadratic_error: None,
        }
    }

    /// Attaches the quadratic deviation from `truth`.
    pub fn scored(mut self, truth: &ChannelParams) -> Self {
        self.quadratic_error = Some(quadratic_deviation(truth, &self.p_est));
        self
    }
}

/// `Σ_j (p_j - p_j^est)²`.
pub fn quadratic_deviation(truth: &ChannelParams, estimate: &[f64; 3]) -> f64 {
    truth
        .as_array()
        .iter()
        .zip(estimate)
        .map(|(p, e)| (p - e) * (p - e))
        .sum()
}

/// Solves `P1 = p2 + p3`, `P2 = p1 + p3`, `P3 = p1 + p2` for `p`.
pub fn invert_probabilities(measured: &MeasuredProbabilities) -> [f64; 3] {
    let [a, b, c] = measured.probs;
    [0.5 * (c - a + b), 0.5 * (a - b + c), 0.5 * (b - c + a)]
}

/// Plugs the observed frequencies `i_j / M` into the linear inversion.
pub fn estimate_separable(counts: &SeparableCounts) -> EstimateResult {
    let [i1, i2, i3] = counts.counts.map(|c| c as f64);
    let scale = 2.0 * counts.per_state as f64;
    EstimateResult::unscored([(i3 - i1 + i2) / scale, (i1 - i2 + i3) / scale, (i2 - i3 + i1) / scale])
}

/// Bell-outcome frequencies of `φ⁻`, `φ⁺`, `ψ⁺` are the estimates.
pub fn estimate_entangled(counts: &BellCounts) -> EstimateResult {
    let n = counts.n_prime() as f64;
    let [i1, i2, i3, _] = counts.counts;
    EstimateResult::unscored([i1 as f64 / n, i2 as f64 / n, i3 as f64 / n])
}

/// Simulates `per_state` qubits for each of the three reference states.
pub fn sample_separable_counts<R: Rng + ?Sized>(
    p: &ChannelParams,
    per_state: u64,
    rng: &mut R,
) -> Result<SeparableCounts> {
    if per_state == 0 {
        return Err(Error::ZeroResource {
            what: "qubits per reference state",
        });
    }
    let counts = PauliAxis::ALL.map(|axis| draw_binomial(rng, per_state, measurement_down_probability(p, axis)));
    Ok(SeparableCounts { counts, per_state })
}

/// Simulates `n_prime` singlets with one half sent through the channel,
/// each followed by a Bell measurement.
pub fn sample_bell_counts<R: Rng + ?Sized>(p: &ChannelParams, n_prime: u64, rng: &mut R) -> Result<BellCounts> {
    if n_prime == 0 {
        return Err(Error::ZeroResource {
            what: "number of ebits",
        });
    }
    let probs = bell_output_distribution(p).as_array();
    Ok(BellCounts {
        counts: draw_multinomial(rng, n_prime, probs),
    })
}
