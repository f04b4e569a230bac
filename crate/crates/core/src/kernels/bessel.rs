//! Modified Bessel function `K₀` and the digamma function.
//!
//! `K₀` uses the ascending series below `x = 2` and, above it, the integral
//! `eˣK₀(x) = √(2/x) ∫₀^∞ e^{−s²} (1 + s²/2x)^{−1/2} ds`. That integrand is
//! even and analytic in the strip `|Im s| < √(2x)`, so the trapezoid rule on
//! the real line converges geometrically in the step and a fixed 27-point
//! rule already reaches full double precision for every `x ≥ 2`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const SERIES_LIMIT: f64 = 2.0;
const TRAPEZOID_STEP: f64 = 0.25;
const TRAPEZOID_POINTS: usize = 26;

/// `K₀(x)` for `x > 0`. Underflows to zero above `x ≈ 705`.
pub fn k0(x: f64) -> Result<f64> {
    check(x)?;
    if x <= SERIES_LIMIT {
        Ok(k0_series(x))
    } else {
        Ok(k0e_integral(x) * (-x).exp())
    }
}

/// The exponentially scaled `eˣK₀(x)` for `x > 0`.
pub fn k0e(x: f64) -> Result<f64> {
    check(x)?;
    if x <= SERIES_LIMIT {
        Ok(k0_series(x) * x.exp())
    } else {
        Ok(k0e_integral(x))
    }
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: x,
            min: 0.0,
            max: f64::INFINITY,
        })
    }
}

// K₀(x) = −(ln(x/2) + γ) I₀(x) + Σ_{k≥1} (x²/4)^k / (k!)² · H_k
fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..40 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

fn k0e_integral(x: f64) -> f64 {
    let c = 0.5 / x;
    let g = |s: f64| (-s * s).exp() / (1.0 + c * s * s).sqrt();
    let mut sum = 0.5 * g(0.0);
    for k in 1..=TRAPEZOID_POINTS {
        sum += g(k as f64 * TRAPEZOID_STEP);
    }
    (2.0 / x).sqrt() * TRAPEZOID_STEP * sum
}

/// Digamma `ψ(x)` for `x > 0`: upward recurrence to `x ≥ 10`, then the
/// asymptotic Bernoulli series.
pub fn digamma(mut x: f64) -> Result<f64> {
    check(x)?;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0)))));
    Ok(acc + x.ln() - 0.5 / x - series)
}
