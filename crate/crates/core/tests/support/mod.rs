//! Reference solutions computed independently of the library.

#![allow(dead_code)]

/// Classical RK4 for `y'' = y^p` from `(t0, y, yp)` to `t1` with steps of at
/// most `dt`.
pub fn rk4_power(p: f64, mut y: f64, mut yp: f64, t0: f64, t1: f64, dt: f64) -> (f64, f64) {
    let n = ((t1 - t0) / dt).ceil().max(1.0) as usize;
    let h = (t1 - t0) / n as f64;
    let acc = |y: f64| y.abs().powf(p);
    for _ in 0..n {
        let (k1y, k1v) = (yp, acc(y));
        let (k2y, k2v) = (yp + 0.5 * h * k1v, acc(y + 0.5 * h * k1y));
        let (k3y, k3v) = (yp + 0.5 * h * k2v, acc(y + 0.5 * h * k2y));
        let (k4y, k4v) = (yp + h * k3v, acc(y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        yp += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    (y, yp)
}

/// Adaptive Simpson on `[a, b]`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(
        f,
        a,
        b,
        fa,
        fm,
        fb,
        (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        tol,
        50,
    )
}

/// Blow-up time of `y'' = y^p`, `y(0) = y0 > 0`, `y'(0) = 0`:
/// `∫_{y0}^∞ dy / sqrt(2 (y^{p+1} − y0^{p+1}) / (p+1))` under
/// `y = y0 (1 − s²)^{-k}`, `k = 4/(p−1)`, which keeps the integrand bounded.
pub fn blowup_time_at_rest(p: f64, y0: f64) -> f64 {
    let k = 4.0 / (p - 1.0);
    let g = |s: f64| {
        if s <= 0.0 {
            return (2.0 * k).sqrt() * y0.powf((1.0 - p) / 2.0);
        }
        if s >= 1.0 {
            return 0.0;
        }
        let l = (-s * s).ln_1p();
        let y = y0 * (-k * l).exp();
        let dy = y * 2.0 * k * s / (1.0 - s * s);
        let gap = y0.powf(p + 1.0) * (-k * (p + 1.0) * l).exp_m1();
        dy / (2.0 * gap / (p + 1.0)).sqrt()
    };
    simpson(&g, 0.0, 1.0, 1e-13)
}

/// `cos(ω t)` and `sin(ω t)/ω` with `ω = λ^α`.
pub fn closed_form_propagators(t: f64, lambda: f64, alpha: f64) -> (f64, f64) {
    let w = lambda.powf(alpha);
    if w == 0.0 {
        (1.0, t)
    } else {
        ((w * t).cos(), (w * t).sin() / w)
    }
}
