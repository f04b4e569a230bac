use super::{QuadConfig, QuadResult};
use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1]; odd positions carry the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
///
/// Returns `(value, error_estimate)`; the error is rescaled the QUADPACK way
/// so that it stays pessimistic on smooth integrands.
pub fn gauss_kronrod_15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0; 15];
    for (i, &x) in XGK.iter().enumerate() {
        if i == 7 {
            fv[7] = checked(f(center)?)?;
        } else {
            fv[i] = checked(f(center - half * x)?)?;
            fv[14 - i] = checked(f(center + half * x)?)?;
        }
    }
    let fc = fv[7];
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    for i in 0..7 {
        let pair = fv[i] + fv[14 - i];
        res_k += WGK[i] * pair;
        res_abs += WGK[i] * (fv[i].abs() + fv[14 - i].abs());
        if i % 2 == 1 {
            res_g += WG[i / 2] * pair;
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for i in 0..7 {
        res_asc += WGK[i] * ((fv[i] - mean).abs() + (fv[14 - i] - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * h, res_abs * h, res_asc * h);
    Ok((value, err))
}

fn checked(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("integrand"))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        e = res_asc * (200.0 * e / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive bisection with the 15/7-point Kronrod–Gauss pair.
///
/// The panel with the largest error estimate is bisected until the summed
/// error meets `cfg` or `cfg.max_subdivisions` is exhausted, in which case the
/// result is returned with `converged = false`.
pub fn try_integrate_adaptive<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("interval", format!("[{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    if a > b {
        let r = try_integrate_adaptive(f, b, a, cfg)?;
        return Ok(r.scaled(-1.0));
    }

    let (value, error) = gauss_kronrod_15(&mut f, a, b)?;
    let mut panels = vec![Panel { a, b, value, error }];
    let mut evaluations = 15;
    let mut total = value;
    let mut total_err = error;

    let mut splits = 0;
    while total_err > cfg.target(total) && splits < cfg.max_subdivisions {
        // largest error first; ties resolved by position for determinism
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // interval no longer representable; accept the current estimate
            break;
        }
        let (v1, e1) = gauss_kronrod_15(&mut f, p.a, mid)?;
        let (v2, e2) = gauss_kronrod_15(&mut f, mid, p.b)?;
        evaluations += 30;
        panels[worst] = Panel {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
        };
        panels.push(Panel {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
        });
        // resum from scratch so the result does not depend on update history
        total = panels.iter().map(|p| p.value).sum();
        total_err = panels.iter().map(|p| p.error).sum();
        splits += 1;
    }

    Ok(QuadResult {
        value: total,
        error_estimate: total_err,
        evaluations,
        converged: total_err <= cfg.target(total),
    })
}

/// Infallible-integrand form of [`try_integrate_adaptive`].
pub fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_adaptive(|x| Ok(f(x)), a, b, cfg)
}

/// Integral over `[a, b]` of an integrand with integrable singularities at the
/// parameters listed in `singular` (endpoints or interior points).
///
/// Each piece adjacent to a singular parameter is integrated over the
/// complement of an exclusion neighbourhood of radius `ε, ε/2, ε/4, ε/8`
/// (with `ε = cfg.singularity_exclusion · length`) and the sequence is
/// extrapolated to `ε → 0` with Aitken's Δ² process, which is exact for
/// power-law remainders `C ε^α`.
pub fn try_integrate_singular<F>(
    mut f: F,
    a: f64,
    b: f64,
    singular: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(a < b) {
        return Err(Error::invalid("interval", format!("need a < b, got [{a}, {b}]")));
    }
    let mut cuts: Vec<f64> = singular
        .iter()
        .copied()
        .filter(|s| *s > a && *s < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let is_singular = |x: f64| singular.contains(&x);

    let mut nodes = vec![a];
    nodes.extend(cuts);
    nodes.push(b);

    let mut total: Option<QuadResult> = None;
    for w in nodes.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let piece = singular_piece(&mut f, lo, hi, is_singular(lo), is_singular(hi), cfg)?;
        total = Some(match total {
            None => piece,
            Some(t) => t.combine(piece),
        });
    }
    let mut r = total.expect("at least one piece");
    r.converged = r.converged && r.error_estimate <= cfg.target(r.value);
    Ok(r)
}

/// Infallible-integrand form of [`try_integrate_singular`].
pub fn integrate_singular<F>(
    mut f: F,
    a: f64,
    b: f64,
    singular: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_singular(|x| Ok(f(x)), a, b, singular, cfg)
}

fn singular_piece<F>(
    f: &mut F,
    lo: f64,
    hi: f64,
    sing_lo: bool,
    sing_hi: bool,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(sing_lo || sing_hi) || cfg.singularity_exclusion == 0.0 {
        return try_integrate_adaptive(&mut *f, lo, hi, cfg);
    }
    let eps = cfg.singularity_exclusion * (hi - lo);
    let inner = |e: f64| {
        (
            if sing_lo { lo + e } else { lo },
            if sing_hi { hi - e } else { hi },
        )
    };
    // slivers are small pieces of the total; tighten their absolute target
    let sliver_cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 0.1,
        ..*cfg
    };

    let (c0, d0) = inner(eps);
    let core = try_integrate_adaptive(&mut *f, c0, d0, cfg)?;
    let mut partial = [core.value; 4];
    let mut evaluations = core.evaluations;
    let mut quad_err = core.error_estimate;
    let mut converged = core.converged;
    let mut e = eps;
    for k in 1..4 {
        let e_next = 0.5 * e;
        let mut add = 0.0;
        if sing_lo {
            let r = try_integrate_adaptive(&mut *f, lo + e_next, lo + e, &sliver_cfg)?;
            add += r.value;
            quad_err += r.error_estimate;
            evaluations += r.evaluations;
            converged &= r.converged;
        }
        if sing_hi {
            let r = try_integrate_adaptive(&mut *f, hi - e, hi - e_next, &sliver_cfg)?;
            add += r.value;
            quad_err += r.error_estimate;
            evaluations += r.evaluations;
            converged &= r.converged;
        }
        partial[k] = partial[k - 1] + add;
        e = e_next;
    }
    let first = aitken(partial[0], partial[1], partial[2]);
    let second = aitken(partial[1], partial[2], partial[3]);
    let extrapolation_err = (second - first).abs();
    Ok(QuadResult {
        value: second,
        error_estimate: quad_err + extrapolation_err,
        evaluations,
        converged: converged && extrapolation_err <= cfg.target(second),
    })
}

fn aitken(s0: f64, s1: f64, s2: f64) -> f64 {
    let d1 = s1 - s0;
    let d2 = s2 - s1;
    let denom = d2 - d1;
    if denom == 0.0 || !denom.is_finite() || d2 == 0.0 {
        return s2;
    }
    let r = s2 - d2 * d2 / denom;
    if r.is_finite() {
        r
    } else {
        s2
    }
}

/// Axis-aligned chart rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }
}

/// Iterated adaptive quadrature: the outer integral is over `x`, and every
/// outer node triggers an inner adaptive integral over `y`.
///
/// The inner absolute target is scaled by the outer interval length so that
/// the accumulated inner errors stay within the overall tolerance.
pub fn try_integrate_2d<F>(mut f: F, rect: Rect, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    cfg.validate()?;
    let width = (rect.x1 - rect.x0).abs().max(f64::MIN_POSITIVE);
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol * 0.1 / width,
        rel_tol: cfg.rel_tol * 0.1,
        ..*cfg
    };
    let mut inner_err = 0.0;
    let mut inner_evals = 0;
    let mut inner_ok = true;
    let outer = try_integrate_adaptive(
        |x| {
            let r = try_integrate_adaptive(|y| f(x, y), rect.y0, rect.y1, &inner_cfg)?;
            inner_err = f64::max(inner_err, r.error_estimate);
            inner_evals += r.evaluations;
            inner_ok &= r.converged;
            Ok(r.value)
        },
        rect.x0,
        rect.x1,
        cfg,
    )?;
    let error_estimate = outer.error_estimate + inner_err * width;
    Ok(QuadResult {
        value: outer.value,
        error_estimate,
        evaluations: inner_evals,
        converged: outer.converged && inner_ok && error_estimate <= cfg.target(outer.value),
    })
}

/// Infallible-integrand form of [`try_integrate_2d`].
pub fn integrate_2d<F>(mut f: F, rect: Rect, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> f64,
{
    try_integrate_2d(|x, y| Ok(f(x, y)), rect, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn rule_weights_sum_to_interval_length() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_panel_is_exact_for_degree_22() {
        for deg in 0..=22 {
            let (v, _) = gauss_kronrod_15(&mut |x: f64| Ok(x.powi(deg)), 0.0, 1.0).unwrap();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((v - exact).abs() < 1e-15, "degree {deg}: {v} vs {exact}");
        }
    }

    #[test]
    fn polynomial() {
        let r = integrate_adaptive(|x| x * x, 0.0, 1.0, &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cosine_over_period() {
        let r = integrate_adaptive(f64::cos, 0.0, 2.0 * PI, &cfg()).unwrap();
        assert!(r.converged);
        assert!(r.value.abs() < cfg().abs_tol.max(1e-14));
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let f = |x: f64| x.exp();
        let fwd = integrate_adaptive(f, 0.0, 2.0, &cfg()).unwrap();
        let bwd = integrate_adaptive(f, 2.0, 0.0, &cfg()).unwrap();
        assert_eq!(fwd.value, -bwd.value);
    }

    #[test]
    fn inverse_square_root_with_declared_singularity() {
        // ∫₀¹ x^(-1/2) dx = [2√x]₀¹ = 2
        let r = integrate_singular(|x| 1.0 / x.sqrt(), 0.0, 1.0, &[0.0], &cfg()).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
        assert!((r.value - 2.0).abs() <= 3.0 * r.error_estimate.max(1e-15));
    }

    #[test]
    fn exclusion_limit_is_stable() {
        let c = cfg();
        let half = QuadConfig {
            singularity_exclusion: c.singularity_exclusion / 2.0,
            ..c
        };
        let f = |x: f64| 1.0 / x.sqrt();
        let r1 = integrate_singular(f, 0.0, 1.0, &[0.0], &c).unwrap();
        let r2 = integrate_singular(f, 0.0, 1.0, &[0.0], &half).unwrap();
        assert!((r1.value - r2.value).abs() <= c.rel_tol * r1.value.abs());
    }

    #[test]
    fn interior_log_singularity() {
        // ∫₀² ln|x-1| dx = 2·∫₀¹ ln t dt = -2
        let r = integrate_singular(|x| (x - 1.0).abs().ln(), 0.0, 2.0, &[1.0], &cfg()).unwrap();
        assert!((r.value + 2.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = integrate_adaptive(|x| 1.0 / (x - 0.5), 0.0, 1.0, &cfg());
        assert!(matches!(r, Err(Error::NonFinite(_))));
    }

    #[test]
    fn exhausted_budget_is_flagged() {
        let tight = QuadConfig {
            max_subdivisions: 2,
            ..cfg()
        };
        let r = integrate_adaptive(|x| (50.0 * x).sin().abs(), 0.0, 10.0, &tight).unwrap();
        assert!(!r.converged);
        assert!(r.error_estimate > 0.0);
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (x * 7.0).sin() / (1.0 + x * x);
        let a = integrate_adaptive(f, -3.0, 5.0, &cfg()).unwrap();
        let b = integrate_adaptive(f, -3.0, 5.0, &cfg()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }

    #[test]
    fn product_on_unit_square() {
        let r = integrate_2d(|x, y| x * y, Rect::new(0.0, 1.0, 0.0, 1.0), &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.25).abs() < 1e-14);
    }

    #[test]
    fn separable_matches_product_of_1d() {
        let f = |x: f64| (-x * x).exp();
        let g = |y: f64| 1.0 / (1.0 + y * y);
        let fx = integrate_adaptive(f, -1.0, 2.0, &cfg()).unwrap().value;
        let gy = integrate_adaptive(g, 0.0, 3.0, &cfg()).unwrap().value;
        let r = integrate_2d(|x, y| f(x) * g(y), Rect::new(-1.0, 2.0, 0.0, 3.0), &cfg()).unwrap();
        assert!((r.value - fx * gy).abs() < 1e-10 * (fx * gy).abs());
    }

    #[test]
    fn inner_inverse_distance_matches_asinh_antiderivative() {
        // ∫₀^L dρ/√(c₁ + (z-ρ)²) = asinh((L-z)/√c₁) + asinh(z/√c₁)
        let (c1, z, len) = (0.37_f64, 0.8, 3.0);
        let exact = ((len - z) / c1.sqrt()).asinh() + (z / c1.sqrt()).asinh();
        let r = integrate_adaptive(|rho| 1.0 / (c1 + (z - rho) * (z - rho)).sqrt(), 0.0, len, &cfg())
            .unwrap();
        assert!((r.value - exact).abs() < 1e-12);

        // and as the inner integral of a 2D product: outer ∫₀¹ dσ of a σ-dependent c₁
        let c1s = |s: f64| 0.2 + s * s;
        let outer_exact = integrate_adaptive(
            |s| ((len - z) / c1s(s).sqrt()).asinh() + (z / c1s(s).sqrt()).asinh(),
            0.0,
            1.0,
            &cfg(),
        )
        .unwrap()
        .value;
        let r2 = integrate_2d(
            |s, rho| 1.0 / (c1s(s) + (z - rho) * (z - rho)).sqrt(),
            Rect::new(0.0, 1.0, 0.0, len),
            &cfg(),
        )
        .unwrap();
        assert!((r2.value - outer_exact).abs() < 1e-9 * outer_exact);
    }
}
