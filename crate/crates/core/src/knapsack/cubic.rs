use crate::error::{Error, Result};

/// Values of `|theta|` below this are rejected as degenerate.
pub const DEGENERATE_THETA: f64 = 1e-12;

/// Unique positive root of `4 sigma^3 / beta + sigma^2 = theta^2`.
///
/// With `y = 4 sigma / beta` and `q = (4 theta / beta)^2` the equation becomes
/// `h(y) = y^3 + y^2 - q = 0`. `h` is increasing and convex on `y > 0` and
/// `min(sqrt(q), cbrt(q))` bounds the root from above, so Newton's method
/// started there descends monotonically onto it with no overshoot.
pub fn solve_sigma_cubic(beta: f64, theta: f64) -> Result<f64> {
    if !(beta > 0.0) || beta.is_nan() {
        return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidInput(format!("theta must be finite, got {theta}")));
    }
    if theta.abs() < DEGENERATE_THETA {
        return Err(Error::DegenerateTheta(theta));
    }
    if beta.is_infinite() {
        return Ok(theta.abs());
    }

    let t = 4.0 * theta.abs() / beta;
    let q = t * t;
    let mut y = t.min(q.cbrt());
    for _ in 0..100 {
        let h = y * y * (y + 1.0) - q;
        if h <= 0.0 {
            break;
        }
        let step = h / (y * (3.0 * y + 2.0));
        let next = y - step;
        if !(next < y) || next <= 0.0 {
            break;
        }
        y = next;
    }
    Ok(0.25 * beta * y)
}

/// `4 sigma^3 / beta + sigma^2 - theta^2`.
pub fn sigma_cubic_residual(beta: f64, theta: f64, sigma: f64) -> f64 {
    4.0 * sigma * sigma * sigma / beta + sigma * sigma - theta * theta
}
