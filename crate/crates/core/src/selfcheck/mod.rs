//! Embedded oracle suite: every check compares an evaluator against an
//! independently computed reference and reports pass/fail with the measured
//! discrepancy. Run by `singem selfcheck` and by the acceptance tests.

pub mod oracles;

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exterior3::{Point3, Vec3};
use crate::fields::{
    ampere_residual, lienard_wiechert, loop_potential, plate_wire_closed_form,
    plate_wire_potential, Circuit, FieldModel, FieldSource, MediumConstants,
};
use crate::kernels::{plate_green, PlateGreen};
use crate::quad::{
    integrate_2d, integrate_adaptive, integrate_periodic_adaptive, integrate_singular, sum_series,
    QuadConfig, QuadResult, Rect,
};
use crate::sources::{CurveSource, PiecewiseCurve, PointSource, SurfaceSource};

const SEED: u64 = 0x5eed_0fac_1e55;

/// Settings for a self-check run. The oracles always use the vacuum
/// constants; `medium` only feeds the evaluators, so a wrong constant there
/// must make the affected checks fail.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SelfCheckOptions {
    pub medium: MediumConstants,
    pub cfg: QuadConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Measured discrepancy against the threshold, in words.
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let budget = match self.budget {
            Some(b) => format!(" (budget {:.0?})", b),
            None => String::new(),
        };
        write!(
            f,
            "[{}] {:2} {:<28} {} in {:.3?}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed,
            budget
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelfCheckReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelfCheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

type CheckFn = fn(&SelfCheckOptions) -> Result<(bool, String)>;

/// `(name, budget in seconds, check)`.
const CHECKS: [(&str, Option<u64>, CheckFn); 10] = [
    ("coulomb-limit", Some(1), coulomb_limit),
    ("loop-on-axis", Some(5), loop_on_axis),
    ("helix-to-loop", Some(10), helix_to_loop),
    ("long-solenoid", Some(30), long_solenoid),
    ("plate-green", Some(10), plate_green_check),
    ("wire-between-plates", Some(10), wire_between_plates),
    ("ampere-circuital", Some(10), ampere_circuital),
    ("gauge-residuals", None, gauge_residuals),
    ("boosted-coulomb", Some(1), boosted_coulomb),
    ("quadrature-honesty", None, quadrature_honesty),
];

/// Number of checks in the suite; ids run from 1 to this.
pub const CHECK_COUNT: usize = CHECKS.len();

/// Runs check `id` (1-based). Evaluator errors count as failures.
pub fn run_check(id: usize, opts: &SelfCheckOptions) -> Option<CheckOutcome> {
    let (name, budget, check) = *CHECKS.get(id.checked_sub(1)?)?;
    let budget = budget.map(Duration::from_secs);
    let start = Instant::now();
    let (mut passed, mut detail) = match check(opts) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            detail.push_str("; over time budget");
        }
    }
    Some(CheckOutcome {
        id,
        name,
        passed,
        detail,
        elapsed,
        budget,
    })
}

pub fn run_all(opts: &SelfCheckOptions) -> SelfCheckReport {
    SelfCheckReport {
        checks: (1..=CHECK_COUNT).filter_map(|i| run_check(i, opts)).collect(),
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn summary(worst: f64, threshold: f64) -> (bool, String) {
    (worst <= threshold, format!("worst rel. error {worst:.2e} (limit {threshold:.0e})"))
}

fn random_point(rng: &mut ChaCha8Rng, half: f64) -> Point3 {
    Vec3::new(
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
        rng.gen_range(-half..half),
    )
}

fn coulomb_limit(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x0 = random_point(&mut rng, 1.0);
        let y = loop {
            let y = random_point(&mut rng, 3.0);
            if y.distance(x0) > 0.1 {
                break y;
            }
        };
        let src = PointSource::stationary(1.0, x0)?;
        let t = rng.gen_range(-1.0..1.0);
        let lw = lienard_wiechert(&src, y, t, &opts.medium, 1e-12)?;
        worst = worst.max(rel(lw.phi, oracles::coulomb(1.0, y.distance(x0))));
        if lw.a != Vec3::ZERO {
            return Ok((false, "static charge produced a vector potential".into()));
        }
    }
    Ok(summary(worst, 1e-12))
}

fn loop_on_axis(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let (a, current) = (0.5, 2.0);
    let ring = CurveSource::circle(Vec3::ZERO, a, current)?;
    let model = FieldModel::new(vec![FieldSource::Curve(ring)], opts.medium, opts.cfg)?;
    let mut worst: f64 = 0.0;
    let mut oracle_vs_textbook: f64 = 0.0;
    for za in [0.0, 0.5, 1.0, 2.0, 5.0] {
        let z = za * a;
        let got = model.magnetic_field(Vec3::new(0.0, 0.0, z), 0.0)?.0.z;
        let bs = oracles::biot_savart_ring(oracles::MU_0, current, a, 0.0, [0.0, 0.0, z], 1_000_000)[2];
        oracle_vs_textbook = oracle_vs_textbook.max(rel(bs, oracles::loop_axis_field(oracles::MU_0, current, a, z)));
        worst = worst.max(rel(got, bs));
    }
    let (ok, mut detail) = summary(worst, 1e-5);
    detail.push_str(&format!("; Biot–Savart vs textbook {oracle_vs_textbook:.1e}"));
    Ok((ok && oracle_vs_textbook < 1e-9, detail))
}

fn helix_to_loop(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let (a, current, p) = (0.5_f64, 1.5, 1e-3_f64);
    let big_p = (1.0 - p * p).sqrt() / a;
    let helix = CurveSource::helix(Vec3::ZERO, a, p, 2.0 * PI / big_p, current)?;
    let model = FieldModel::new(vec![FieldSource::Curve(helix)], opts.medium, opts.cfg)?;
    let mut worst: f64 = 0.0;
    let radii = [0.2, 0.45, 0.6, 0.75, 1.25, 1.4, 1.6, 2.0, 2.5, 3.0];
    for (k, ra) in radii.iter().enumerate() {
        let y = Vec3::from_cylindrical(ra * a, 0.3 + 0.6 * k as f64, 0.0);
        let h = model.potential(y, 0.0)?.a_cylindrical(y, Vec3::ZERO);
        let l = loop_potential(a, current, y, &opts.medium, &opts.cfg)?.a_cylindrical(y, Vec3::ZERO);
        worst = worst.max(rel(h.y, l.y));
    }
    Ok(summary(worst, 1e-3))
}

fn long_solenoid(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let (a, kappa0) = (0.05, 1000.0);
    let l0 = 100.0 * a;
    let sheet = SurfaceSource::solenoid(Vec3::ZERO, a, 0.0, l0, kappa0)?;
    let k = sheet.axial_crossing_density();
    let model = FieldModel::new(vec![FieldSource::Solenoid(sheet)], opts.medium, opts.cfg)?;
    let centre = Vec3::new(0.0, 0.0, 0.5 * l0);
    let outside = Vec3::new(10.0 * a, 0.0, 0.5 * l0);
    let (b_in, _) = model.magnetic_field(centre, 0.0)?;
    let (b_out, _) = model.magnetic_field(outside, 0.0)?;
    let ideal = oracles::MU_0 * k;
    let rings_in = oracles::ring_stack(oracles::MU_0, k, a, l0, 200, centre.to_array(), 4096);
    let rings_out = oracles::ring_stack(oracles::MU_0, k, a, l0, 200, outside.to_array(), 4096);
    let e_ideal = rel(b_in.z, ideal);
    let e_rings = rel(b_in.z, rings_in[2]);
    let ratio = b_out.norm() / b_in.norm();
    let ring_ratio = Vec3::from_array(rings_out).norm() / rings_in[2].abs();
    let ok = e_ideal < 1e-2 && e_rings < 1e-2 && ratio < 1e-2 && ring_ratio < 1e-2;
    Ok((
        ok,
        format!(
            "interior vs μ₀K {e_ideal:.2e}, vs ring stack {e_rings:.2e}; |B(10a)|/|B(0)| = {ratio:.2e} \
             (ring stack {ring_ratio:.2e}, limit 1e-2)"
        ),
    ))
}

fn plate_green_check(_opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let l = 1.0;
    let g = PlateGreen::new(l)?;
    let pairs = [
        (Vec3::new(0.0, 0.0, 0.5), Vec3::new(0.05, 0.0, 0.3)),
        (Vec3::new(0.1, 0.2, 0.25), Vec3::new(0.3, 0.2, 0.6)),
        (Vec3::new(-0.2, 0.1, 0.8), Vec3::new(0.2, -0.2, 0.7)),
        (Vec3::new(0.0, 0.0, 0.1), Vec3::new(0.6, 0.8, 0.9)),
        (Vec3::new(1.0, -1.0, 0.5), Vec3::new(2.2, 0.6, 0.45)),
    ];
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (x, y) in pairs {
        let got = plate_green(x, y, &g)?;
        let want = oracles::slab_green(l, x.to_array(), y.to_array());
        worst = worst.max(rel(got, want));
        scale = scale.max(want.abs());
    }
    let mut boundary: f64 = 0.0;
    for (x, y) in pairs {
        for z in [0.0, l] {
            boundary = boundary.max(plate_green(x, Vec3::new(y.x, y.y, z), &g)?.abs());
        }
    }
    let (ok, mut detail) = summary(worst, 1e-6);
    let b_rel = boundary / scale;
    detail.push_str(&format!("; boundary |𝒢|/scale {b_rel:.1e} (limit 1e-8)"));
    Ok((ok && b_rel < 1e-8, detail))
}

fn wire_between_plates(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let (l, z0, lambda) = (1.0, 0.35, 1e-9);
    let g = PlateGreen::new(l)?;
    let quad = QuadConfig::default().with_rel_tol(1e-10).with_abs_tol(1e-14);
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let x = 0.1 * l + (1.9 * l) * k as f64 / 9.0;
        let z = 0.05 + 0.9 * ((k * 7) % 10) as f64 / 9.0;
        let y = Vec3::new(x, 0.0, z);
        let series = plate_wire_potential(z0, lambda, l, y, &opts.medium, &opts.cfg)?.phi;
        // ∫ 𝒢 λ/ε dℓ along the wire, by symmetry twice the half line
        let tail = 40.0 * l;
        let q = crate::quad::try_integrate_adaptive(
            |s| plate_green(Vec3::new(0.0, s, z0), y, &g),
            0.0,
            tail,
            &quad,
        )?;
        let direct = 2.0 * q.value * lambda / oracles::EPSILON_0;
        worst = worst.max(rel(series, direct));
    }
    let near = Vec3::new(1e-3 * l, 0.0, 0.6);
    let series = plate_wire_potential(z0, lambda, l, near, &opts.medium, &opts.cfg)?.phi;
    let closed = plate_wire_closed_form(z0, lambda, l, near, &MediumConstants::vacuum())?;
    let near_err = rel(series, closed);
    let (ok, mut detail) = summary(worst, 1e-5);
    detail.push_str(&format!("; closed form at x = 1e-3 L: {near_err:.1e} (limit 1e-4)"));
    Ok((ok && near_err < 1e-4, detail))
}

fn ampere_circuital(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let (a, current) = (0.5, 2.0);
    let src = CurveSource::circle(Vec3::ZERO, a, current)?;
    let model = FieldModel::new(vec![FieldSource::Curve(src.clone())], opts.medium, opts.cfg)?;
    let mu = opts.medium.mu;
    let h = |p: Point3| Ok(model.magnetic_field(p, 0.0)?.0 / mu);
    let cfg = QuadConfig::default().with_rel_tol(1e-6);
    let linking = Circuit::Circle {
        center: Vec3::new(a, 0.0, 0.0),
        normal: Vec3::Y,
        radius: 0.1 * a,
    };
    let beside = Circuit::Circle {
        center: Vec3::new(a, 0.0, 0.3 * a),
        normal: Vec3::Y,
        radius: 0.1 * a,
    };
    let r1 = ampere_residual(&src, 1, &linking, h, &cfg)?;
    let r0 = ampere_residual(&src, 0, &beside, h, &cfg)?;
    let free = r0.circulation.abs() / current;
    let ok = r1.residual < 5e-3 && free < 5e-3;
    Ok((
        ok,
        format!(
            "linking: ∮h·dl = {:.6} A vs {current} A (rel {:.1e}); non-linking {free:.1e} I (limit 5e-3)",
            r1.circulation,
            (r1.circulation - current).abs() / current
        ),
    ))
}

fn gauge_residuals(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let threshold = 1e-4;
    let a = 0.5;

    let ring = FieldModel::new(
        vec![FieldSource::Curve(CurveSource::circle(Vec3::ZERO, a, 1.0)?)],
        opts.medium,
        opts.cfg,
    )?;
    let mut loop_worst: f64 = 0.0;
    let mut n = 0;
    while n < 10 {
        let y = random_point(&mut rng, 2.0 * a);
        if (y.x.hypot(y.y) - a).hypot(y.z) < 0.2 * a {
            continue;
        }
        loop_worst = loop_worst.max(ring.gauge_residual(y, 0.0)?.relative);
        n += 1;
    }

    // a helix of three turns, closed by a straight return lead along the
    // cylinder so that the current is divergence-free
    let p = 0.1_f64;
    let big_p = (1.0 - p * p).sqrt() / a;
    let length = 3.0 * 2.0 * PI / big_p;
    let helix = CurveSource::helix(Vec3::ZERO, a, p, length, 1.0)?;
    let (start, end) = helix.endpoints()?;
    let closed = PiecewiseCurve::from_pieces(vec![helix, CurveSource::segment(end, start, 1.0)?])?;
    let coil = FieldModel::new(vec![FieldSource::Piecewise(closed.clone())], opts.medium, opts.cfg)?;
    let mut helix_worst: f64 = 0.0;
    let mut n = 0;
    while n < 10 {
        let y = random_point(&mut rng, 2.0 * a) + Vec3::new(0.0, 0.0, 0.5 * p * length);
        if closed.distance_to(y) < 0.2 * a {
            continue;
        }
        helix_worst = helix_worst.max(coil.gauge_residual(y, 0.0)?.relative);
        n += 1;
    }

    let c = opts.medium.c();
    let charge = PointSource::uniform(1e-9, Vec3::ZERO, Vec3::new(0.4 * c, -0.2 * c, 0.1 * c))?;
    let moving = FieldModel::new(vec![FieldSource::PointCharge(charge.clone())], opts.medium, opts.cfg)?;
    let mut lorenz_worst: f64 = 0.0;
    let mut n = 0;
    while n < 10 {
        let y = random_point(&mut rng, 2.0);
        let t = rng.gen_range(-5e-9..5e-9);
        if charge.state(t).0.distance(y) < 0.2 {
            continue;
        }
        lorenz_worst = lorenz_worst.max(moving.lorenz_residual(y, t)?.relative);
        n += 1;
    }
    let worst = loop_worst.max(helix_worst).max(lorenz_worst);
    Ok((
        worst <= threshold,
        format!(
            "δA loop {loop_worst:.1e}, helix+lead {helix_worst:.1e}; Lorenz {lorenz_worst:.1e} (limit {threshold:.0e})"
        ),
    ))
}

fn boosted_coulomb(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let c_oracle = 1.0 / (oracles::EPSILON_0 * oracles::MU_0).sqrt();
    let v = 0.5 * c_oracle;
    let q = 1e-9;
    let src = PointSource::uniform(q, Vec3::ZERO, Vec3::new(v, 0.0, 0.0))?;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 20 {
        let y = random_point(&mut rng, 2.0);
        let t = rng.gen_range(-5e-9..5e-9);
        if src.state(t).0.distance(y) < 0.1 {
            continue;
        }
        let got = lienard_wiechert(&src, y, t, &opts.medium, 1e-12)?.phi;
        let want = oracles::boosted_coulomb(q, v, c_oracle, oracles::EPSILON_0, y.to_array(), t);
        worst = worst.max(rel(got, want));
        n += 1;
    }
    Ok(summary(worst, 1e-8))
}

/// `(name, result, exact value)` for the analytic quadrature suite.
pub fn honesty_suite(cfg: &QuadConfig) -> Result<Vec<(&'static str, QuadResult, f64)>> {
    let e = std::f64::consts::E;
    let c = *cfg;
    let s = |a: f64, b: f64, sing: &[f64], f: fn(f64) -> f64| integrate_singular(f, a, b, sing, &c);
    Ok(vec![
        ("x^5 on [0,1]", integrate_adaptive(|x| x.powi(5), 0.0, 1.0, &c)?, 1.0 / 6.0),
        ("sin on [0,π]", integrate_adaptive(f64::sin, 0.0, PI, &c)?, 2.0),
        ("e^x on [0,1]", integrate_adaptive(f64::exp, 0.0, 1.0, &c)?, e - 1.0),
        ("1/(1+x²) on [0,1]", integrate_adaptive(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, &c)?, PI / 4.0),
        ("√x on [0,1]", integrate_adaptive(f64::sqrt, 0.0, 1.0, &c)?, 2.0 / 3.0),
        ("1/√x on [0,1]", s(0.0, 1.0, &[0.0], |x| 1.0 / x.sqrt())?, 2.0),
        ("ln x on [0,1]", s(0.0, 1.0, &[0.0], f64::ln)?, -1.0),
        ("x^(-1/3) on [0,1]", s(0.0, 1.0, &[0.0], |x| 1.0 / x.cbrt())?, 1.5),
        ("|x−½|^(−½) on [0,1]", s(0.0, 1.0, &[0.5], |x| 1.0 / (x - 0.5).abs().sqrt())?, 2.0 * 2f64.sqrt()),
        ("e^(−x²) on [0,10]", integrate_adaptive(|x| (-x * x).exp(), 0.0, 10.0, &c)?, PI.sqrt() / 2.0),
        ("Runge on [−1,1]", integrate_adaptive(|x| 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0, &c)?, 0.4 * 5f64.atan()),
        (
            "peak at 0.3 on [0,1]",
            integrate_adaptive(|x| 1.0 / ((x - 0.3) * (x - 0.3) + 1e-4), 0.0, 1.0, &c)?,
            100.0 * (70f64.atan() + 30f64.atan()),
        ),
        ("cos on [0,20]", integrate_adaptive(f64::cos, 0.0, 20.0, &c)?, 20f64.sin()),
        ("1/x on [1,2]", integrate_adaptive(|x| 1.0 / x, 1.0, 2.0, &c)?, 2f64.ln()),
        (
            "e^cos over a period",
            integrate_periodic_adaptive(|t| t.cos().exp(), 2.0 * PI, &c)?,
            2.0 * PI * 1.266_065_877_752_008_4,
        ),
        (
            "1/(2+cos) over a period",
            integrate_periodic_adaptive(|t| 1.0 / (2.0 + t.cos()), 2.0 * PI, &c)?,
            2.0 * PI / 3f64.sqrt(),
        ),
        ("xy on the unit square", integrate_2d(|x, y| x * y, Rect::new(0.0, 1.0, 0.0, 1.0), &c)?, 0.25),
        (
            "e^(x+y) on the unit square",
            integrate_2d(|x, y| (x + y).exp(), Rect::new(0.0, 1.0, 0.0, 1.0), &c)?,
            (e - 1.0) * (e - 1.0),
        ),
        ("Σ 2^(−n)", sum_series(|n| 0.5f64.powi(n as i32), &c)?, 1.0),
        ("Σ e^(−n)/n", sum_series(|n| (-(n as f64)).exp() / n as f64, &c)?, -(-(-1f64).exp()).ln_1p()),
    ])
}

fn quadrature_honesty(opts: &SelfCheckOptions) -> Result<(bool, String)> {
    let suite = honesty_suite(&opts.cfg)?;
    let honest = suite
        .iter()
        .filter(|(_, r, exact)| (r.value - exact).abs() <= 3.0 * r.error_estimate)
        .count();
    let dishonest: Vec<_> = suite
        .iter()
        .filter(|(_, r, exact)| (r.value - exact).abs() > 3.0 * r.error_estimate)
        .map(|(n, _, _)| *n)
        .collect();
    let mut detail = format!("{honest}/{} estimates within 3× the true error (need 19)", suite.len());
    if !dishonest.is_empty() {
        detail.push_str(&format!("; under-estimated: {}", dishonest.join(", ")));
    }
    Ok((honest >= 19, detail))
}
