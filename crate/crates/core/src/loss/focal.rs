//! Focal classification loss.

use alloc::vec;
use alloc::vec::Vec;

use crate::float;

const P_EPS: f64 = 1e-7;

/// `-alpha (1 - p_t)^gamma ln(p_t)` on the target class, with the gradient
/// with respect to the probability vector. `p_t` is clamped at 1e-7; in
/// the clamped region the (sub)gradient is zero.
pub fn focal_loss(p_hat: &[f64], target: usize, alpha: f64, gamma: f64) -> (f64, Vec<f64>) {
    let raw = p_hat[target];
    let p = raw.max(P_EPS);
    let one_minus = 1.0 - p;
    let loss = -alpha * float::powf(one_minus, gamma) * float::ln(p);
    let mut grad = vec![0.0; p_hat.len()];
    if raw > P_EPS {
        // d/dp [ -a (1-p)^g ln p ] = a g (1-p)^(g-1) ln p - a (1-p)^g / p
        let d = alpha * gamma * float::powf(one_minus, gamma - 1.0) * float::ln(p)
            - alpha * float::powf(one_minus, gamma) / p;
        grad[target] = d;
    }
    (loss, grad)
}
