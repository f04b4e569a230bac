//! Reference values computed with nothing but `std` floating-point math,
//! independently of the evaluators under test.

use std::f64::consts::PI;

/// Vacuum permittivity, restated here so that the oracles share no constants
/// with the library.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// `q/(4πε₀R)`.
pub fn coulomb(q: f64, r: f64) -> f64 {
    q / (4.0 * PI * EPSILON_0 * r)
}

/// Potential of a charge moving uniformly along `x` through the origin at
/// `t = 0`: `q/(4πε) / √((x − vt)² + (1 − v²/c²)(y² + z²))`.
pub fn boosted_coulomb(q: f64, v: f64, c: f64, epsilon: f64, y: [f64; 3], t: f64) -> f64 {
    let dx = y[0] - v * t;
    let g = 1.0 - (v / c) * (v / c);
    q / (4.0 * PI * epsilon) / (dx * dx + g * (y[1] * y[1] + y[2] * y[2])).sqrt()
}

/// Textbook on-axis field of a circular loop, `μIa²/(2(a² + z²)^{3/2})`.
pub fn loop_axis_field(mu: f64, current: f64, a: f64, z: f64) -> f64 {
    mu * current * a * a / (2.0 * (a * a + z * z).powf(1.5))
}

/// Biot–Savart field `(μI/4π) Σ dl × r/|r|³` of a circular loop of radius `a`
/// in the plane `z = z0`, centred on the `z` axis, replaced by a regular
/// polygon of `segments` straight pieces, each taken at its midpoint.
pub fn biot_savart_ring(mu: f64, current: f64, a: f64, z0: f64, y: [f64; 3], segments: usize) -> [f64; 3] {
    let mut b = [0.0; 3];
    let dphi = 2.0 * PI / segments as f64;
    // chord length of each polygon side
    let chord = 2.0 * a * (0.5 * dphi).sin();
    for k in 0..segments {
        let phi = (k as f64 + 0.5) * dphi;
        let (s, c) = phi.sin_cos();
        // midpoint of the chord lies at radius a cos(dφ/2)
        let rm = a * (0.5 * dphi).cos();
        let x = [rm * c, rm * s, z0];
        let dl = [-s * chord, c * chord, 0.0];
        let r = [y[0] - x[0], y[1] - x[1], y[2] - x[2]];
        let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        let inv = 1.0 / (r2 * r2.sqrt());
        b[0] += (dl[1] * r[2] - dl[2] * r[1]) * inv;
        b[1] += (dl[2] * r[0] - dl[0] * r[2]) * inv;
        b[2] += (dl[0] * r[1] - dl[1] * r[0]) * inv;
    }
    b.map(|v| v * mu * current / (4.0 * PI))
}

/// Field of a solenoid `0 ≤ z ≤ L₀` of radius `a` and sheet current `K`
/// (A/m), approximated by `rings` equally spaced loops each carrying `K L₀/rings`.
pub fn ring_stack(mu: f64, k: f64, a: f64, l0: f64, rings: usize, y: [f64; 3], segments: usize) -> [f64; 3] {
    let current = k * l0 / rings as f64;
    let mut b = [0.0; 3];
    for j in 0..rings {
        let z0 = (j as f64 + 0.5) * l0 / rings as f64;
        let r = biot_savart_ring(mu, current, a, z0, y, segments);
        for i in 0..3 {
            b[i] += r[i];
        }
    }
    b
}

/// 2D transverse Green function of `−∇² + m²`, from its Fourier integral
/// `(1/4π²) ∫∫ e^{ik·ρ}/(k² + m²) d²k`. The `k_x` integral is closed by
/// contour, `∫ e^{ik_x ρ}/(k_x² + β²) dk_x = (π/β) e^{−βρ}` with
/// `β = √(k_y² + m²)`, and the remaining `k_y` integral is done by the
/// trapezoid rule after `k_y = m sinh t`, which makes it doubly exponentially
/// decaying.
pub fn transverse_mode(m: f64, rho: f64) -> f64 {
    let x = m * rho;
    let h = 0.02;
    // e^{−x cosh t} < e^{−745} beyond this
    let t_max = (745.0 / x).max(1.0).acosh() + h;
    let mut sum = 0.5 * (-x).exp();
    let mut t = h;
    while t <= t_max {
        sum += (-x * t.cosh()).exp();
        t += h;
    }
    // (1/4π²)·π·∫ e^{−βρ}/β dk_y, and dk_y/β = dt
    2.0 * sum * h / (4.0 * PI)
}

/// Slab Dirichlet Green function from the eigenfunction expansion in `z` and
/// the Fourier integral in the plane, mode by mode.
pub fn slab_green(l: f64, x: [f64; 3], y: [f64; 3]) -> f64 {
    let rho = (x[0] - y[0]).hypot(x[1] - y[1]);
    let mut sum = 0.0;
    let mut n = 1;
    loop {
        let m = n as f64 * PI / l;
        let envelope = (-m * rho).exp();
        let term = (m * x[2]).sin() * (m * y[2]).sin() * transverse_mode(m, rho);
        sum += term;
        if envelope < 1e-18 && n > 4 {
            break;
        }
        n += 1;
    }
    2.0 / l * sum
}
