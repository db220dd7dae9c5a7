use super::KnapsackInstance;
use crate::error::{Error, Result};

pub const MAX_BRUTE_FORCE: usize = 25;

/// Exact optimum by enumerating all `2^n` binary points.
///
/// Ties keep the lowest bitmask, so the result is deterministic.
pub fn brute_force_knapsack(instance: &KnapsackInstance) -> Result<(Vec<f64>, f64)> {
    let n = instance.len();
    if n > MAX_BRUTE_FORCE {
        return Err(Error::TooLarge(n));
    }
    let (c, a) = (instance.costs(), instance.volumes());
    let mut best_mask = 0u32;
    let mut best = 0.0;
    for mask in 1u32..(1 << n) {
        let mut value = 0.0;
        let mut volume = 0.0;
        for e in 0..n {
            if mask >> e & 1 == 1 {
                value += c[e];
                volume += a[e];
            }
        }
        if value > best && instance.fits(volume) {
            best = value;
            best_mask = mask;
        }
    }
    let rho = (0..n).map(|e| f64::from(best_mask >> e & 1)).collect();
    Ok((rho, -best))
}
