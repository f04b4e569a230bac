use super::{QuadConfig, QuadResult};
use crate::error::{Error, Result};

fn trapezoid<F>(f: &mut F, period: f64, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = period / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let v = f(k as f64 * h)?;
        if !v.is_finite() {
            return Err(Error::NonFinite("periodic integrand"));
        }
        sum += v;
    }
    Ok(sum * h)
}

/// Trapezoid rule over one period `[0, period)` with `n_points` samples.
///
/// The error estimate is `|T_2n − T_n|`, which for smooth periodic integrands
/// overstates the error of the returned `T_2n` value by a wide margin.
/// `converged` is judged against the default [`QuadConfig`] tolerances.
pub fn integrate_periodic<F>(mut f: F, period: f64, n_points: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    if n_points < 8 {
        return Err(Error::invalid("n_points", format!("need at least 8, got {n_points}")));
    }
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::invalid("period", "must be positive and finite"));
    }
    let mut g = |x: f64| Ok(f(x));
    let coarse = trapezoid(&mut g, period, n_points)?;
    let fine = trapezoid(&mut g, period, 2 * n_points)?;
    let err = (fine - coarse).abs();
    Ok(QuadResult {
        value: fine,
        error_estimate: err,
        evaluations: 3 * n_points,
        converged: err <= QuadConfig::default().target(fine),
    })
}

/// Trapezoid rule with point doubling until successive values agree to `cfg`.
///
/// Reuses the previous samples, so each doubling costs only the new midpoints.
/// Stops with `converged = false` when the sample count would exceed
/// `cfg.max_terms`.
pub fn try_integrate_periodic_adaptive<F>(mut f: F, period: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::invalid("period", "must be positive and finite"));
    }
    let mut n = 16;
    let mut sum = 0.0;
    for k in 0..n {
        let v = f(k as f64 * period / n as f64)?;
        if !v.is_finite() {
            return Err(Error::NonFinite("periodic integrand"));
        }
        sum += v;
    }
    let mut value = sum * period / n as f64;
    let mut evaluations = n;
    loop {
        if 2 * n > cfg.max_terms {
            return Ok(QuadResult {
                value,
                error_estimate: f64::INFINITY,
                evaluations,
                converged: false,
            });
        }
        // midpoints of the current grid
        let h = period / n as f64;
        let mut mid = 0.0;
        for k in 0..n {
            let v = f((k as f64 + 0.5) * h)?;
            if !v.is_finite() {
                return Err(Error::NonFinite("periodic integrand"));
            }
            mid += v;
        }
        evaluations += n;
        sum += mid;
        n *= 2;
        let next = sum * period / n as f64;
        let err = (next - value).abs();
        value = next;
        // a smooth integrand converges geometrically; require two quiet levels
        // before trusting agreement that could be accidental at small n
        if err <= cfg.target(value) && n >= 64 {
            return Ok(QuadResult {
                value,
                error_estimate: err,
                evaluations,
                converged: true,
            });
        }
    }
}

/// Infallible-integrand form of [`try_integrate_periodic_adaptive`].
pub fn integrate_periodic_adaptive<F>(mut f: F, period: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_periodic_adaptive(|x| Ok(f(x)), period, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn poisson_kernel_integral() {
        // residues: ∫₀^{2π} dΨ/(5 − 4cos Ψ) = 2π/√(25 − 16) = 2π/3
        let r = integrate_periodic(|s| 1.0 / (5.0 - 4.0 * s.cos()), 2.0 * PI, 64).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn constant_is_exact() {
        let r = integrate_periodic(|_| 2.5, 3.0, 8).unwrap();
        assert_eq!(r.value, 7.5);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn doubling_points_is_stable() {
        let f = |s: f64| (s.cos()).exp();
        let a = integrate_periodic(f, 2.0 * PI, 32).unwrap();
        let b = integrate_periodic(f, 2.0 * PI, 64).unwrap();
        assert!((a.value - b.value).abs() < 1e-14 * a.value);
    }

    #[test]
    fn adaptive_reaches_tolerance_on_peaked_integrand() {
        // ∫₀^{2π} dΨ/(1 + e² − 2e cos Ψ) = 2π/(1 − e²) for |e| < 1
        let e: f64 = 0.95;
        let cfg = QuadConfig::default();
        let r = integrate_periodic_adaptive(|s| 1.0 / (1.0 + e * e - 2.0 * e * s.cos()), 2.0 * PI, &cfg)
            .unwrap();
        assert!(r.converged);
        let exact = 2.0 * PI / (1.0 - e * e);
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(integrate_periodic(|s| s, 1.0, 4).is_err());
    }
}
