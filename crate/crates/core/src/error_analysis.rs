//! Expected quadratic estimation errors of both schemes and the advantage
//! of the entangled one.
//!
//! Every expected error is available two ways: by summing over all outcome
//! counts, and by its closed form. The two are kept independent so each can
//! check the other.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{measurement_down_probability, ChannelParams, PauliAxis};
use crate::error::{Error, Result};
use crate::estimation::{estimate_separable, quadratic_deviation, SeparableCounts};
use crate::lattice::{Lattice, Slice};
use crate::pmf::{binomial_pmf, ln_factorials, multinomial_mass};

/// Largest per-state count or ebit number accepted by the enumerations.
pub const ENUMERATION_CAP: u64 = 64;

/// How the two schemes are put on an equal footing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BudgetMode {
    /// `N` qubits in total: `M = N/3` per reference state, `N' = N/2` ebits.
    Qubits,
    /// `K` channel uses: `M = K/3` per reference state, `N' = K` ebits.
    ChannelUses,
}

impl BudgetMode {
    pub fn divisor(self) -> u64 {
        match self {
            BudgetMode::Qubits => 6,
            BudgetMode::ChannelUses => 3,
        }
    }

    pub(crate) fn noun(self) -> &'static str {
        match self {
            BudgetMode::Qubits => "qubit",
            BudgetMode::ChannelUses => "channel-use",
        }
    }
}

impl fmt::Display for BudgetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetMode::Qubits => "qubits",
            BudgetMode::ChannelUses => "uses",
        })
    }
}

/// A resource total shared fairly between the two schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceBudget {
    mode: BudgetMode,
    total: u64,
}

impl ResourceBudget {
    pub fn new(mode: BudgetMode, total: u64) -> Result<Self> {
        if total == 0 {
            return Err(Error::ZeroResource { what: "budget" });
        }
        if !total.is_multiple_of(mode.divisor()) {
            return Err(Error::BudgetNotDivisible { mode, total });
        }
        Ok(Self { mode, total })
    }

    pub fn qubits(n: u64) -> Result<Self> {
        Self::new(BudgetMode::Qubits, n)
    }

    pub fn channel_uses(k: u64) -> Result<Self> {
        Self::new(BudgetMode::ChannelUses, k)
    }

    pub fn mode(&self) -> BudgetMode {
        self.mode
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Qubits sent per reference state in the separable scheme.
    pub fn per_state(&self) -> u64 {
        self.total / 3
    }

    /// Ebits consumed by the entangled scheme.
    pub fn ebits(&self) -> u64 {
        match self.mode {
            BudgetMode::Qubits => self.total / 2,
            BudgetMode::ChannelUses => self.total,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    Separable,
    Entangled,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Separable, Scheme::Entangled];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Separable => "separable",
            Scheme::Entangled => "entangled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Enumeration,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumeration => "enumeration",
            Method::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub scheme: Scheme,
    pub expected_error: f64,
    pub method: Method,
}

fn check_resource(value: u64, what: &'static str) -> Result<()> {
    if value == 0 {
        Err(Error::ZeroResource { what })
    } else {
        Ok(())
    }
}

fn check_cap(value: u64, what: &'static str) -> Result<()> {
    check_resource(value, what)?;
    if value > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            what,
            value,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// Expected quadratic error of the separable scheme, summed over all
/// `(M + 1)^3` outcome triples.
pub fn exact_error_separable_enum(p: &ChannelParams, per_state: u64) -> Result<f64> {
    check_cap(per_state, "qubits per reference state")?;
    let pmfs = PauliAxis::ALL.map(|axis| binomial_pmf(per_state, measurement_down_probability(p, axis)));
    let mut total = 0.0;
    for (i1, &w1) in pmfs[0].iter().enumerate() {
        if w1 == 0.0 {
            continue;
        }
        for (i2, &w2) in pmfs[1].iter().enumerate() {
            if w2 == 0.0 {
                continue;
            }
            for (i3, &w3) in pmfs[2].iter().enumerate() {
                if w3 == 0.0 {
                    continue;
                }
                let counts = SeparableCounts::new(i1 as u64, i2 as u64, i3 as u64, per_state)?;
                let estimate = estimate_separable(&counts).p_est;
                total += w1 * w2 * w3 * quadratic_deviation(p, &estimate);
            }
        }
    }
    Ok(total)
}

/// `f̄(M, p) = 3/(2M) [Σ p_i(1 - p_i) - p1 p2 - p2 p3 - p1 p3]`.
pub fn exact_error_separable_closed(p: &ChannelParams, per_state: u64) -> Result<f64> {
    check_resource(per_state, "qubits per reference state")?;
    Ok(separable_bracket(p) * 1.5 / per_state as f64)
}

/// Expected quadratic error of the entangled scheme, summed over every
/// composition `i1 + i2 + i3 + i4 = N'`.
pub fn exact_error_entangled_enum(p: &ChannelParams, n_prime: u64) -> Result<f64> {
    check_cap(n_prime, "number of ebits")?;
    let probs = [p.p1(), p.p2(), p.p3(), p.p4()];
    let truth = p.as_array();
    let ln_fact = ln_factorials(n_prime);
    let n = n_prime as f64;
    let mut total = 0.0;
    for i1 in 0..=n_prime {
        for i2 in 0..=n_prime - i1 {
            for i3 in 0..=n_prime - i1 - i2 {
                let counts = [i1, i2, i3, n_prime - i1 - i2 - i3];
                let mass = multinomial_mass(&counts, &probs, &ln_fact);
                if mass == 0.0 {
                    continue;
                }
                let deviation: f64 = truth
                    .iter()
                    .zip(&counts)
                    .map(|(t, &c)| (t - c as f64 / n).powi(2))
                    .sum();
                total += mass * deviation;
            }
        }
    }
    Ok(total)
}

/// `ḡ(N', p) = (1/N') Σ p_i(1 - p_i)`.
pub fn exact_error_entangled_closed(p: &ChannelParams, n_prime: u64) -> Result<f64> {
    check_resource(n_prime, "number of ebits")?;
    Ok(entangled_bracket(p) / n_prime as f64)
}

fn separable_bracket(p: &ChannelParams) -> f64 {
    let [a, b, c] = p.as_array();
    a * (1.0 - a) + b * (1.0 - b) + c * (1.0 - c) - a * b - b * c - a * c
}

fn entangled_bracket(p: &ChannelParams) -> f64 {
    let [a, b, c] = p.as_array();
    a * (1.0 - a) + b * (1.0 - b) + c * (1.0 - c)
}

/// `(1/2) [w_s (1 - s) s + w_e (p1 p2 + p1 p3 + p2 p3)]` with `s = p1 + p2 + p3`.
///
/// Shared by the advantage functions and the lattice search so that both
/// round identically.
#[inline(always)]
fn advantage_bracket(weight_total: f64, weight_pairs: f64, p1: f64, p2: f64, p3: f64) -> f64 {
    let pair = p1 + p2;
    let s = pair + p3;
    0.5 * (weight_total * (1.0 - s) * s + weight_pairs * (p1 * p2 + p3 * pair))
}

fn advantage_weights(mode: BudgetMode) -> (f64, f64) {
    match mode {
        BudgetMode::Qubits => (5.0, 1.0),
        BudgetMode::ChannelUses => (7.0, 5.0),
    }
}

/// Budget-independent advantage: `N Δ(N, p)` for [`BudgetMode::Qubits`],
/// `K Δ̃(K, p)` for [`BudgetMode::ChannelUses`].
pub fn scaled_delta(mode: BudgetMode, p: &ChannelParams) -> f64 {
    let (wt, wp) = advantage_weights(mode);
    advantage_bracket(wt, wp, p.p1(), p.p2(), p.p3())
}

fn delta(budget: ResourceBudget, p: &ChannelParams) -> Result<f64> {
    let value = scaled_delta(budget.mode(), p) / budget.total() as f64;
    let difference =
        exact_error_separable_closed(p, budget.per_state())? - exact_error_entangled_closed(p, budget.ebits())?;
    debug_assert!(
        (value - difference).abs() <= 1e-12 * value.abs().max(difference.abs()).max(1e-3),
        "advantage {value} disagrees with error difference {difference}"
    );
    Ok(value)
}

/// `Δ(N, p) = f̄(N/3, p) - ḡ(N/2, p)`, the advantage at equal qubit count.
pub fn delta_qubit_budget(p: &ChannelParams, n: u64) -> Result<f64> {
    delta(ResourceBudget::qubits(n)?, p)
}

/// `Δ̃(K, p) = f̄(K/3, p) - ḡ(K, p)`, the advantage at equal channel uses.
pub fn delta_channel_uses(p: &ChannelParams, k: u64) -> Result<f64> {
    delta(ResourceBudget::channel_uses(k)?, p)
}

/// Best lattice point of a scaled advantage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaMaximum {
    pub argmax: [f64; 3],
    pub value: f64,
    pub grid_steps: u64,
}

/// Exhaustive lattice search for the maximum of [`scaled_delta`].
///
/// Ties go to the lexicographically smallest lattice index.
pub fn find_delta_maximum(mode: BudgetMode, grid_steps: u64, slice: Slice) -> Result<DeltaMaximum> {
    let lattice = Lattice::new(slice, grid_steps)?;
    let (wt, wp) = advantage_weights(mode);
    let coords: Vec<f64> = (0..=grid_steps).map(|j| lattice.coordinate(j)).collect();

    // (value, [p1, p2, p3]); first strict improvement wins.
    type Best = (f64, [f64; 3]);
    let better = |a: Best, b: Best| if b.0 > a.0 { b } else { a };

    let best = match slice.fixed_p2() {
        None => coords
            .par_iter()
            .enumerate()
            .map(|(j1, &p1)| {
                let mut best: Best = (f64::NEG_INFINITY, [0.0; 3]);
                for (j2, &p2) in coords[..=grid_steps as usize - j1].iter().enumerate() {
                    for &p3 in &coords[..=grid_steps as usize - j1 - j2] {
                        let v = advantage_bracket(wt, wp, p1, p2, p3);
                        if v > best.0 {
                            best = (v, [p1, p2, p3]);
                        }
                    }
                }
                best
            })
            .collect::<Vec<_>>()
            .into_iter()
            .reduce(better),
        Some(p2) => {
            let budget = lattice.slice_budget(p2) as usize;
            coords[..=budget]
                .par_iter()
                .enumerate()
                .map(|(j1, &p1)| {
                    coords[..=budget - j1]
                        .iter()
                        .fold((f64::NEG_INFINITY, [0.0; 3]), |best, &p3| {
                            better(best, (advantage_bracket(wt, wp, p1, p2, p3), [p1, p2, p3]))
                        })
                })
                .collect::<Vec<_>>()
                .into_iter()
                .reduce(better)
        }
    };
    let (value, argmax) = best.expect("lattice has at least one point");
    Ok(DeltaMaximum {
        argmax,
        value,
        grid_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(p1: f64, p2: f64, p3: f64) -> ChannelParams {
        ChannelParams::new(p1, p2, p3).unwrap()
    }

    fn rel_close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()) || (a - b).abs() < 1e-300
    }

    // Independent route to f̄: each estimate component sums three independent
    // frequencies with weights ±1/2, so its variance is Σ_j P_j(1 - P_j)/(4M).
    fn separable_variance_oracle(p: &ChannelParams, m: u64) -> f64 {
        let var: f64 = PauliAxis::ALL
            .iter()
            .map(|&axis| {
                let q = measurement_down_probability(p, axis);
                q * (1.0 - q)
            })
            .sum();
        3.0 * var / (4.0 * m as f64)
    }

    prop_compose! {
        fn valid_params()(a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64) -> ChannelParams {
            let mut cuts = [a, b, c];
            cuts.sort_by(f64::total_cmp);
            params(cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1])
        }
    }

    #[test]
    fn budget_allocation() {
        let b = ResourceBudget::qubits(60).unwrap();
        assert_eq!((b.per_state(), b.ebits()), (20, 30));
        let b = ResourceBudget::channel_uses(9).unwrap();
        assert_eq!((b.per_state(), b.ebits()), (3, 9));
        let err = ResourceBudget::qubits(7).unwrap_err();
        assert_eq!(err.to_string(), "qubit budget must be divisible by 6, got 7");
        let err = ResourceBudget::channel_uses(10).unwrap_err();
        assert_eq!(err.to_string(), "channel-use budget must be divisible by 3, got 10");
        assert!(ResourceBudget::qubits(0).is_err());
    }

    #[test]
    fn separable_examples() {
        for m in [1, 5, 30] {
            assert_eq!(exact_error_separable_enum(&ChannelParams::identity(), m).unwrap(), 0.0);
            assert_eq!(exact_error_separable_closed(&params(1.0, 0.0, 0.0), m).unwrap(), 0.0);
        }
        let p = params(0.1, 0.2, 0.3);
        let closed = exact_error_separable_closed(&p, 4).unwrap();
        assert!(rel_close(exact_error_separable_enum(&p, 4).unwrap(), closed, 1e-12));
        assert!((exact_error_separable_closed(&p, 10).unwrap() - 0.0525).abs() < 1e-15);

        let third = 1.0 / 3.0;
        let p = params(third, third, third);
        assert!((exact_error_separable_closed(&p, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((exact_error_separable_enum(&p, 1).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entangled_examples() {
        for n in [1, 5, 30] {
            assert_eq!(exact_error_entangled_enum(&ChannelParams::identity(), n).unwrap(), 0.0);
            assert_eq!(exact_error_entangled_closed(&params(1.0, 0.0, 0.0), n).unwrap(), 0.0);
        }
        let p = params(0.2, 0.3, 0.4);
        let closed = exact_error_entangled_closed(&p, 5).unwrap();
        assert!(rel_close(exact_error_entangled_enum(&p, 5).unwrap(), closed, 1e-12));

        let p = params(0.25, 0.25, 0.25);
        assert!((exact_error_entangled_closed(&p, 1).unwrap() - 9.0 / 16.0).abs() < 1e-15);
        assert!((exact_error_entangled_enum(&p, 1).unwrap() - 9.0 / 16.0).abs() < 1e-15);

        let p = params(0.1, 0.2, 0.3);
        assert!((exact_error_entangled_closed(&p, 15).unwrap() - 0.46 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn enumeration_caps() {
        let p = params(0.1, 0.1, 0.1);
        assert!(exact_error_separable_enum(&p, ENUMERATION_CAP).is_ok());
        assert!(matches!(
            exact_error_separable_enum(&p, ENUMERATION_CAP + 1),
            Err(Error::EnumerationCap { .. })
        ));
        assert!(exact_error_entangled_enum(&p, ENUMERATION_CAP + 1).is_err());
        assert!(exact_error_entangled_enum(&p, 0).is_err());
        assert!(exact_error_separable_closed(&p, 0).is_err());
    }

    #[test]
    fn enumeration_at_cap_agrees() {
        let p = params(0.07, 0.21, 0.33);
        let m = ENUMERATION_CAP;
        assert!(rel_close(
            exact_error_separable_enum(&p, m).unwrap(),
            exact_error_separable_closed(&p, m).unwrap(),
            1e-11
        ));
        assert!(rel_close(
            exact_error_entangled_enum(&p, m).unwrap(),
            exact_error_entangled_closed(&p, m).unwrap(),
            1e-11
        ));
    }

    #[test]
    fn delta_examples() {
        for p in [params(0.0, 0.0, 0.0), params(1.0, 0.0, 0.0), params(0.0, 0.0, 1.0)] {
            assert!(delta_qubit_budget(&p, 6).unwrap().abs() < 1e-15);
        }
        let a = 5.0 / 19.0;
        for n in [6, 60, 600] {
            let d = delta_qubit_budget(&params(a, 0.0, a), n).unwrap();
            assert!((n as f64 * d - 25.0 / 38.0).abs() < 1e-12);
        }
        let b = 5.0 / 28.0;
        let d = delta_qubit_budget(&params(b, b, b), 12).unwrap();
        assert!((12.0 * d - 75.0 / 112.0).abs() < 1e-12);

        assert_eq!(delta_channel_uses(&ChannelParams::identity(), 3).unwrap(), 0.0);
        let d = delta_channel_uses(&params(0.1, 0.2, 0.3), 3).unwrap();
        assert!((d - 2.23 / 6.0).abs() < 1e-14);

        assert!(matches!(
            delta_qubit_budget(&params(0.1, 0.1, 0.1), 7),
            Err(Error::BudgetNotDivisible { .. })
        ));
        assert!(delta_channel_uses(&params(0.1, 0.1, 0.1), 4).is_err());
    }

    #[test]
    fn delta_vanishes_at_p2_corner() {
        // Not among the listed extremal points, but the bracket is zero there too.
        assert!(delta_qubit_budget(&params(0.0, 1.0, 0.0), 6).unwrap().abs() < 1e-15);
    }

    #[test]
    fn maximum_on_tiny_lattice() {
        // Slice p2 = 0 with steps 2: corners score 0, midpoints (1/2,0,0) and
        // (0,0,1/2) score 5/8, (1/2,0,1/2) scores 1/8.
        let best = find_delta_maximum(BudgetMode::Qubits, 2, Slice::FixedP2Zero).unwrap();
        assert_eq!(best.argmax, [0.0, 0.0, 0.5]);
        assert!((best.value - 5.0 / 8.0).abs() < 1e-15);
        assert!(find_delta_maximum(BudgetMode::Qubits, 1, Slice::FullSimplex).is_err());
    }

    #[test]
    fn maximum_on_p2_slice() {
        let best = find_delta_maximum(BudgetMode::Qubits, 1000, Slice::FixedP2Zero).unwrap();
        let a = 5.0 / 19.0;
        assert!((best.argmax[0] - a).abs() <= 1e-3 && (best.argmax[2] - a).abs() <= 1e-3);
        assert_eq!(best.argmax[1], 0.0);
        assert!((best.value - 25.0 / 38.0).abs() < 1e-5);
    }

    #[test]
    fn maximum_on_full_simplex() {
        let best = find_delta_maximum(BudgetMode::Qubits, 500, Slice::FullSimplex).unwrap();
        let b = 5.0 / 28.0;
        assert!(best.argmax.iter().all(|x| (x - b).abs() <= 2e-3), "{:?}", best.argmax);
        assert!((best.value - 75.0 / 112.0).abs() < 1e-4);
    }

    #[test]
    fn maximum_matches_brute_lattice_scan() {
        for (mode, slice) in [
            (BudgetMode::Qubits, Slice::FullSimplex),
            (BudgetMode::ChannelUses, Slice::FullSimplex),
            (BudgetMode::Qubits, Slice::Custom(0.2)),
        ] {
            let lattice = Lattice::new(slice, 37).unwrap();
            let brute = lattice
                .points()
                .map(|p| scaled_delta(mode, &ChannelParams::from_array(p).unwrap()))
                .fold(f64::NEG_INFINITY, f64::max);
            let found = find_delta_maximum(mode, 37, slice).unwrap();
            assert_eq!(found.value, brute);
        }
    }

    proptest! {
        #[test]
        fn separable_closed_matches_variance_route(p in valid_params(), m in 1u64..200) {
            let closed = exact_error_separable_closed(&p, m).unwrap();
            prop_assert!((closed - separable_variance_oracle(&p, m)).abs() < 1e-15);
        }

        #[test]
        fn enumeration_matches_closed(p in valid_params(), m in 1u64..9) {
            let sep = exact_error_separable_closed(&p, m).unwrap();
            prop_assert!(rel_close(exact_error_separable_enum(&p, m).unwrap(), sep, 1e-12));
            let ent = exact_error_entangled_closed(&p, m).unwrap();
            prop_assert!(rel_close(exact_error_entangled_enum(&p, m).unwrap(), ent, 1e-12));
        }

        #[test]
        fn delta_identities(p in valid_params(), k in 1u64..50) {
            let n = 6 * k;
            let s = p.total();
            let [a, b, c] = p.as_array();
            let pairs = a * b + a * c + b * c;
            let dq = delta_qubit_budget(&p, n).unwrap();
            let du = delta_channel_uses(&p, n).unwrap();
            prop_assert!(dq >= -1e-15);
            let gap = (2.0 * (1.0 - s) * s + 4.0 * pairs) / (2.0 * n as f64);
            prop_assert!((du - dq - gap).abs() < 1e-14);
            prop_assert!(du - dq >= -1e-15);
        }

        #[test]
        fn closed_forms_are_permutation_symmetric(p in valid_params()) {
            let [a, b, c] = p.as_array();
            let base = [
                exact_error_separable_closed(&p, 3).unwrap(),
                exact_error_entangled_closed(&p, 3).unwrap(),
                scaled_delta(BudgetMode::Qubits, &p),
                scaled_delta(BudgetMode::ChannelUses, &p),
            ];
            for perm in [[b, a, c], [c, b, a], [a, c, b], [b, c, a], [c, a, b]] {
                let q = ChannelParams::from_array(perm).unwrap();
                let got = [
                    exact_error_separable_closed(&q, 3).unwrap(),
                    exact_error_entangled_closed(&q, 3).unwrap(),
                    scaled_delta(BudgetMode::Qubits, &q),
                    scaled_delta(BudgetMode::ChannelUses, &q),
                ];
                for (g, w) in got.iter().zip(base) {
                    prop_assert!((g - w).abs() < 1e-15);
                }
            }
        }

        #[test]
        fn scaling_laws(p in valid_params(), m in 1u64..100) {
            let f = exact_error_separable_closed(&p, m).unwrap();
            let f2 = exact_error_separable_closed(&p, 2 * m).unwrap();
            prop_assert!(rel_close(f2, f / 2.0, 1e-12));
            let g = exact_error_entangled_closed(&p, m).unwrap();
            let g2 = exact_error_entangled_closed(&p, 2 * m).unwrap();
            prop_assert!(rel_close(g2, g / 2.0, 1e-12));
            let d = delta_qubit_budget(&p, 6 * m).unwrap();
            let d2 = delta_qubit_budget(&p, 12 * m).unwrap();
            prop_assert!(rel_close(d2, d / 2.0, 1e-12));
        }
    }
}
