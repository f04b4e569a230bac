use super::{QuadConfig, QuadResult};
use crate::error::{Error, Result};

const QUIET_TERMS: usize = 3;

/// Sums `Σ_{n≥1} term(n)` with compensated summation.
///
/// Summation stops once `n·|t_n|` falls below the target for three
/// consecutive terms. `n·|t_n|` rather than `|t_n|` bounds the tail of any
/// series whose terms decay at least like `1/n²`, so slowly converging series
/// are not declared converged just because their terms are small. The error
/// estimate is the largest of the last three `n·|t_n|` plus the accumulated
/// rounding bound. Reaching `cfg.max_terms` returns `converged = false`.
pub fn sum_series<F>(mut term: F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(usize) -> f64,
{
    cfg.validate()?;
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs_sum = 0.0;
    let mut quiet = 0;
    let mut tail = 0.0_f64;
    let mut recent = [0.0_f64; QUIET_TERMS];
    let mut n = 1;
    while n <= cfg.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::NonFinite("series term"));
        }
        // Neumaier summation
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
        abs_sum += t.abs();

        let proxy = n as f64 * t.abs();
        recent[n % QUIET_TERMS] = proxy;
        let total = sum + comp;
        if proxy <= cfg.target(total) {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                tail = recent.iter().copied().fold(0.0, f64::max);
                let err = tail + 4.0 * f64::EPSILON * abs_sum;
                return Ok(QuadResult {
                    value: total,
                    error_estimate: err,
                    evaluations: n,
                    converged: true,
                });
            }
        } else {
            quiet = 0;
        }
        tail = proxy;
        n += 1;
    }
    Ok(QuadResult {
        value: sum + comp,
        error_estimate: tail + 4.0 * f64::EPSILON * abs_sum,
        evaluations: cfg.max_terms,
        converged: false,
    })
}
