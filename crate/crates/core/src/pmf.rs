//! Binomial and multinomial masses evaluated in log space.
//!
//! `0^0` is taken as 1, so a zero success probability puts all mass on a
//! count of zero.

/// `ln k!` for `k = 0..=n`.
pub(crate) fn ln_factorials(n: u64) -> Vec<f64> {
    let mut table = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0f64;
    table.push(acc);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// `k * ln(p)` with `0 * ln(0) = 0`; `None` when the term forces a zero mass.
fn ln_power(p: f64, k: u64) -> Option<f64> {
    if k == 0 {
        Some(0.0)
    } else if p <= 0.0 {
        None
    } else {
        Some(k as f64 * p.min(1.0).ln())
    }
}

/// `P(X = k)` for `X ~ Binomial(n, p)`, for every `k = 0..=n`.
pub(crate) fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    let lf = ln_factorials(n);
    let q = 1.0 - p;
    (0..=n)
        .map(|k| match (ln_power(p, k), ln_power(q, n - k)) {
            (Some(a), Some(b)) => (lf[n as usize] - lf[k as usize] - lf[(n - k) as usize] + a + b).exp(),
            _ => 0.0,
        })
        .collect()
}

/// Multinomial mass of `counts` given `ln_fact` covering their total.
pub(crate) fn multinomial_mass(counts: &[u64; 4], probs: &[f64; 4], ln_fact: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let mut log = ln_fact[n as usize];
    for (&k, &p) in counts.iter().zip(probs) {
        match ln_power(p, k) {
            Some(term) => log += term - ln_fact[k as usize],
            None => return 0.0,
        }
    }
    log.exp()
}
