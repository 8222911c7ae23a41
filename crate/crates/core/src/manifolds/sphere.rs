use std::f64::consts::PI;

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * (1.0 + x.abs()) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub(crate) fn harmonic_index(l: i64, m: i64) -> usize {
    (l * l + l + m) as usize
}

// Below this the sectoral seed is flushed to zero instead of underflowing.
const SEED_FLOOR: f64 = 1e-280;

/// Values of all real orthonormal harmonics `Y_l^m(theta, phi)`, `l <= l_max`,
/// indexed by `l^2 + l + m`, at `x = cos(theta)`.
pub(crate) fn real_harmonics_at(l_max: usize, x: f64, phi: f64) -> Vec<f64> {
    let lm = l_max as i64;
    let mut out = vec![0.0; (l_max + 1) * (l_max + 1)];
    let s = (1.0 - x * x).max(0.0).sqrt();
    // normalized associated Legendre Q_l^m, orthonormal against dx dphi / (2 pi)
    let mut seed = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=lm {
        if m > 0 {
            let mf = m as f64;
            seed *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
            if seed.abs() < SEED_FLOOR {
                seed = 0.0;
            }
        }
        let angular = |q: f64| -> (f64, f64) {
            if m == 0 {
                (q, 0.0)
            } else {
                let mf = m as f64;
                let r2 = 2f64.sqrt();
                (r2 * q * (mf * phi).cos(), r2 * q * (mf * phi).sin())
            }
        };
        let mut q_prev = 0.0;
        let mut q_cur = seed;
        for l in m..=lm {
            if l > m {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
                let next = a * (x * q_cur - b * q_prev);
                q_prev = q_cur;
                q_cur = next;
            }
            let (cos_part, sin_part) = angular(q_cur);
            out[harmonic_index(l, m)] = cos_part;
            if m > 0 {
                out[harmonic_index(l, -m)] = sin_part;
            }
        }
    }
    out
}

/// A single real orthonormal spherical harmonic.
pub fn real_spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> f64 {
    assert!(m.unsigned_abs() as usize <= l, "|m| must not exceed l");
    real_harmonics_at(l, theta.cos(), phi)[harmonic_index(l as i64, m)]
}
