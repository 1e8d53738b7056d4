//! Wigner matrices for SU(2).
//!
//! Spins and magnetic numbers are carried doubled (`two_l = 2ℓ`,
//! `two_m = 2m`) so half-integers stay exact. Row/column `i` of a spin-ℓ
//! block corresponds to `m = -ℓ + i`.

use num_complex::Complex64;

fn ln_factorial(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Small Wigner matrix element `d^ℓ_{m' m}(β)`.
pub fn wigner_small_d(two_l: i64, two_mp: i64, two_m: i64, beta: f64) -> f64 {
    assert!(two_mp.abs() <= two_l && two_m.abs() <= two_l);
    assert!((two_l - two_mp) % 2 == 0 && (two_l - two_m) % 2 == 0);
    // integer quantities j+m', j-m', j+m, j-m, m'-m
    let jpmp = (two_l + two_mp) / 2;
    let jmmp = (two_l - two_mp) / 2;
    let jpm = (two_l + two_m) / 2;
    let jmm = (two_l - two_m) / 2;
    let mpm = (two_mp - two_m) / 2;
    let prefactor =
        0.5 * (ln_factorial(jpmp) + ln_factorial(jmmp) + ln_factorial(jpm) + ln_factorial(jmm));
    let c = (beta / 2.0).cos();
    let s = (beta / 2.0).sin();
    let s_min = 0.max(-mpm);
    let s_max = jpm.min(jmmp);
    let mut sum = 0.0;
    for k in s_min..=s_max {
        let denom = ln_factorial(jpm - k)
            + ln_factorial(k)
            + ln_factorial(mpm + k)
            + ln_factorial(jmmp - k);
        let mag = (prefactor - denom).exp();
        let cos_pow = (jpm + jmmp - 2 * k) as i32;
        let sin_pow = (mpm + 2 * k) as i32;
        let sign = if (mpm + k) % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * mag * c.powi(cos_pow) * s.powi(sin_pow);
    }
    sum
}

/// Full block `d^ℓ(β)` in row-major order.
pub fn wigner_small_d_matrix(two_l: u32, beta: f64) -> Vec<f64> {
    let d = two_l as usize + 1;
    let tl = two_l as i64;
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = wigner_small_d(tl, 2 * i as i64 - tl, 2 * j as i64 - tl, beta);
        }
    }
    out
}

/// `D^ℓ_{m' m}(α, β, γ) = e^{-i m' α} d^ℓ_{m' m}(β) e^{-i m γ}`.
pub fn wigner_big_d(
    two_l: i64,
    two_mp: i64,
    two_m: i64,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Complex64 {
    let phase = -(two_mp as f64 * alpha + two_m as f64 * gamma) / 2.0;
    Complex64::from_polar(wigner_small_d(two_l, two_mp, two_m, beta), phase)
}

/// Full block `D^ℓ(α, β, γ)` in row-major order.
pub fn wigner_big_d_matrix(two_l: u32, alpha: f64, beta: f64, gamma: f64) -> Vec<Complex64> {
    let d = two_l as usize + 1;
    let tl = two_l as i64;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            out.push(wigner_big_d(
                tl,
                2 * i as i64 - tl,
                2 * j as i64 - tl,
                alpha,
                beta,
                gamma,
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_half_closed_form() {
        let b: f64 = 0.7;
        let (c, s) = ((b / 2.0).cos(), (b / 2.0).sin());
        assert!((wigner_small_d(1, 1, 1, b) - c).abs() < 1e-15);
        assert!((wigner_small_d(1, 1, -1, b) + s).abs() < 1e-15);
        assert!((wigner_small_d(1, -1, 1, b) - s).abs() < 1e-15);
        assert!((wigner_small_d(1, -1, -1, b) - c).abs() < 1e-15);
    }

    #[test]
    fn spin_one_closed_form() {
        let b: f64 = 1.1;
        assert!((wigner_small_d(2, 0, 0, b) - b.cos()).abs() < 1e-14);
        assert!((wigner_small_d(2, 2, 2, b) - (1.0 + b.cos()) / 2.0).abs() < 1e-14);
        assert!((wigner_small_d(2, 2, 0, b) + b.sin() / 2f64.sqrt()).abs() < 1e-14);
        assert!((wigner_small_d(2, -2, 2, b) - (1.0 - b.cos()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn small_d_is_orthogonal() {
        for two_l in 0..=16u32 {
            let d = two_l as usize + 1;
            let m = wigner_small_d_matrix(two_l, 1.234);
            for i in 0..d {
                for j in 0..d {
                    let dot: f64 = (0..d).map(|k| m[i * d + k] * m[j * d + k]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-12, "l={two_l}/2 ({i},{j}) {dot}");
                }
            }
        }
    }

    #[test]
    fn big_d_factorizes_over_euler_angles() {
        // Z-Y-Z factorization D(α, β, γ) = D(α, 0, 0) D(0, β, 0) D(0, 0, γ)
        for two_l in 0..=5u32 {
            let d = two_l as usize + 1;
            let a = wigner_big_d_matrix(two_l, 0.3, 0.0, 0.0);
            let b = wigner_big_d_matrix(two_l, 0.0, 0.9, 0.0);
            let c = wigner_big_d_matrix(two_l, 0.0, 0.0, 0.4);
            let full = wigner_big_d_matrix(two_l, 0.3, 0.9, 0.4);
            let mut ab = vec![Complex64::new(0.0, 0.0); d * d];
            let mut abc = vec![Complex64::new(0.0, 0.0); d * d];
            for i in 0..d {
                for j in 0..d {
                    ab[i * d + j] = (0..d).map(|k| a[i * d + k] * b[k * d + j]).sum();
                }
            }
            for i in 0..d {
                for j in 0..d {
                    abc[i * d + j] = (0..d).map(|k| ab[i * d + k] * c[k * d + j]).sum();
                }
            }
            for (x, y) in abc.iter().zip(&full) {
                assert!((x - y).norm() < 1e-13);
            }
        }
    }
}
