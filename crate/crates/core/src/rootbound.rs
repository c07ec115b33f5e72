//! Root bound `Γ` with `max |ξ| <= 2^Γ`, from the Cauchy polynomial
//! `F^C(x) = |A_n| x^n - sum_{i<n} |A_i| x^i` evaluated at powers of two.
//!
//! `F^C` has a single positive root `ξ*` and it is positive exactly on
//! `(ξ*, ∞)`. With `k0` the smallest integer such that `F^C(2^k0) > 0`, the
//! returned `Γ` lies in `{k0, k0 + 1}`, so `2^Γ < 4 ξ*`. `Γ` may be zero or
//! negative when every root is small.

use crate::coeffstream::CoefficientOracle;
use crate::dyadic::{ceil_log2_u64, interval_eval_poly, Dyadic, DyadicInterval};

/// Cauchy polynomial of interval coefficients (constant term first).
pub fn cauchy_poly(coeffs: &[DyadicInterval]) -> Vec<DyadicInterval> {
    let n = coeffs.len() - 1;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if i == n { c.abs() } else { c.abs().neg() })
        .collect()
}

/// Interval enclosure of `F^C(2^k)` whose width is below `2^min(0, n(k-1))`.
pub fn cauchy_value(oracle: &CoefficientOracle, k: i64, extra: i64) -> DyadicInterval {
    let n = oracle.degree() as i64;
    // With a point argument the width is 2^-rho * O((n + 1) max(1, 2^(kn))),
    // independent of the coefficient sizes.
    let target = (n * (k - 1)).min(0);
    let rho = (n * k).max(0) + 4 + ceil_log2_u64(n as u64 + 1) - target + extra;
    let coeffs: Vec<DyadicInterval> = (0..=n as usize)
        .map(|i| DyadicInterval::ball(&oracle.query(i, rho), rho))
        .collect();
    interval_eval_poly(&cauchy_poly(&coeffs), &Dyadic::pow2(k), rho)
}

/// Root bound `Γ` for `F`; see the module documentation.
pub fn compute_gamma(oracle: &CoefficientOracle, tau_hat: i64) -> i64 {
    let mut extra = 0;
    loop {
        if let Some(g) = scan(oracle, tau_hat, extra) {
            return g;
        }
        extra = if extra == 0 { 8 } else { 2 * extra };
    }
}

fn positive(oracle: &CoefficientOracle, k: i64, extra: i64) -> bool {
    cauchy_value(oracle, k, extra).is_strictly_positive()
}

fn scan(oracle: &CoefficientOracle, tau_hat: i64, extra: i64) -> Option<i64> {
    if positive(oracle, 1, extra) {
        let mut k = 1;
        // F^C(2^k) < 0 once 2^k < ξ*, and ξ* > 0 for a square-free input of
        // degree >= 2; the floor only guards degenerate inputs.
        while k > -4096 && positive(oracle, k - 1, extra) {
            k -= 1;
        }
        return Some(k);
    }
    (2..=tau_hat + 2).find(|&k| positive(oracle, k, extra))
}
