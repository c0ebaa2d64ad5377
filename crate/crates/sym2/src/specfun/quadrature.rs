//! Gauss-Legendre panels and tanh-sinh at arbitrary precision.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::{log2_abs_c, pi};

/// Nodes and weights on [-1, 1].
pub struct GlRule {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

type RuleCache = Mutex<HashMap<(usize, u32), Arc<GlRule>>>;

/// P_m(x) and P_m'(x) by the three-term recurrence.
fn legendre_pair(m: usize, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for n in 2..=m {
        // n P_n = (2n - 1) x P_{n-1} - (n - 1) P_{n-2}
        let mut p2 = Float::with_val(prec, x * &p1) * (2 * n - 1) as u32;
        p2 -= Float::with_val(prec, &p0 * (n - 1) as u32);
        p2 /= n as u32;
        p0 = p1;
        p1 = p2;
    }
    // (1 - x^2) P_m' = m (P_{m-1} - x P_m)
    let mut d = Float::with_val(prec, x * &p1);
    d = Float::with_val(prec, &p0 - &d) * m as u32;
    let one_minus = Float::with_val(prec, 1 - Float::with_val(prec, x.square_ref()));
    d /= one_minus;
    (p1, d)
}

pub fn gauss_legendre(m: usize, prec: u32) -> Arc<GlRule> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let p = prec.div_ceil(64) * 64;
    if let Some(r) = cache.lock().expect("gl cache").get(&(m, p)) {
        return r.clone();
    }
    let wp = p + 32;
    let mut nodes = vec![Float::new(p); m];
    let mut weights = vec![Float::new(p); m];
    for i in 0..m.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        for _ in 0..100 {
            let (pm, dm) = legendre_pair(m, &x, wp);
            let dx = Float::with_val(wp, &pm / &dm);
            x -= &dx;
            if dx.is_zero() || crate::mp::log2_abs(&dx) < -(wp as f64) + 4.0 {
                break;
            }
        }
        let (_, dm) = legendre_pair(m, &x, wp);
        let one_minus = Float::with_val(wp, 1 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 2u32) / (one_minus * dm.square());
        nodes[i] = Float::with_val(p, &x);
        weights[i] = Float::with_val(p, &w);
        nodes[m - 1 - i] = Float::with_val(p, -&x);
        weights[m - 1 - i] = Float::with_val(p, &w);
    }
    let rule = Arc::new(GlRule { nodes, weights });
    cache.lock().expect("gl cache").insert((m, p), rule.clone());
    rule
}

/// Node count used for panels at a given precision.
pub fn default_order(prec: u32) -> usize {
    (16 + prec / 10).min(64) as usize
}

/// Integral of f over [a, b] with one Gauss-Legendre panel.
pub fn gl_panel<F: Fn(&Float) -> Complex>(f: &F, a: &Float, b: &Float, m: usize, prec: u32) -> Complex {
    let rule = gauss_legendre(m, prec);
    let half = Float::with_val(prec, b - a) / 2u32;
    let mid = Float::with_val(prec, b + a) / 2u32;
    let mut acc = Complex::with_val(prec, 0);
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let t = Float::with_val(prec, x * &half) + &mid;
        acc += f(&t) * w;
    }
    acc * half
}

/// Adaptive bisection on [a, b] until each panel agrees with its two halves to `tol`.
pub fn adaptive<F: Fn(&Float) -> Complex>(f: &F, a: &Float, b: &Float, tol: f64, prec: u32) -> Result<Complex> {
    let m = default_order(prec);
    let whole = gl_panel(f, a, b, m, prec);
    adaptive_rec(f, a, b, whole, tol, m, prec, 0)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_rec<F: Fn(&Float) -> Complex>(
    f: &F,
    a: &Float,
    b: &Float,
    whole: Complex,
    tol: f64,
    m: usize,
    prec: u32,
    depth: u32,
) -> Result<Complex> {
    let mid = Float::with_val(prec, a + b) / 2u32;
    let left = gl_panel(f, a, &mid, m, prec);
    let right = gl_panel(f, &mid, b, m, prec);
    let both = Complex::with_val(prec, &left + &right);
    let diff = Complex::with_val(prec, &both - &whole);
    if log2_abs_c(&diff) <= tol.log2() {
        return Ok(both);
    }
    if depth > 40 {
        return Err(Error::NonConvergence(format!(
            "adaptive panel [{}, {}] still off by 2^{:.1}",
            a.to_f64(),
            b.to_f64(),
            log2_abs_c(&diff)
        )));
    }
    let l = adaptive_rec(f, a, &mid, left, tol / 2.0, m, prec, depth + 1)?;
    let r = adaptive_rec(f, &mid, b, right, tol / 2.0, m, prec, depth + 1)?;
    Ok(l + r)
}

/// Integral over [0, 1] by tanh-sinh; tolerates algebraic singularities at 0.
pub fn tanh_sinh_01<F: Fn(&Float) -> Complex>(f: &F, tol: f64, prec: u32) -> Result<Complex> {
    let half_pi = pi(prec) / 2u32;
    // tau(x) = 1/(1 + exp(-pi sinh x)), tau'(x) = pi cosh x e / (1 + e)^2 with e = exp(-pi sinh x)
    let eval = |x: &Float| -> Option<Complex> {
        let sh = Float::with_val(prec, x.sinh_ref());
        let ch = Float::with_val(prec, x.cosh_ref());
        let e = (-Float::with_val(prec, Float::with_val(prec, &half_pi * 2u32) * &sh)).exp();
        let one_e = Float::with_val(prec, 1 + &e);
        let tau = Float::with_val(prec, one_e.recip_ref());
        if tau.is_zero() || tau >= 1 {
            return None;
        }
        let mut w = Float::with_val(prec, &half_pi * 2u32) * ch * &e;
        w /= Float::with_val(prec, one_e.square_ref());
        if w.is_zero() {
            return None;
        }
        Some(f(&tau) * w)
    };
    let mut h = Float::with_val(prec, 0.5);
    let mut total = eval(&Float::with_val(prec, 0)).unwrap_or_else(|| Complex::with_val(prec, 0));
    let mut x_max;
    // level 0: integer multiples of h
    let mut k = 1i64;
    loop {
        let x = Float::with_val(prec, &h * k);
        let mut small = 0;
        for s in [1i32, -1] {
            let xs = Float::with_val(prec, &x * s);
            if let Some(v) = eval(&xs) {
                if log2_abs_c(&v) < tol.log2() - 30.0 {
                    small += 1;
                }
                total += v;
            } else {
                small += 1;
            }
        }
        x_max = x.to_f64();
        if small == 2 || x_max > 8.0 {
            break;
        }
        k += 1;
    }
    let mut est = Complex::with_val(prec, &total * &h);
    for _level in 0..12 {
        h /= 2u32;
        let mut x = h.clone();
        let step = Float::with_val(prec, &h * 2u32);
        while x.to_f64() <= x_max + 1e-9 {
            for s in [1i32, -1] {
                let xs = Float::with_val(prec, &x * s);
                if let Some(v) = eval(&xs) {
                    total += v;
                }
            }
            x += &step;
        }
        let next = Complex::with_val(prec, &total * &h);
        let diff = Complex::with_val(prec, &next - &est);
        est = next;
        if log2_abs_c(&diff) < tol.log2() - 2.0 {
            return Ok(est);
        }
    }
    Err(Error::NonConvergence("tanh-sinh levels exhausted".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    const P: u32 = 200;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre(20, P);
        let sum_w: Float = rule.weights.iter().fold(Float::new(P), |acc, w| acc + w);
        assert!(Float::with_val(P, sum_w - 2u32).abs() < 1e-55);
        // integral of x^38 over [-1, 1] = 2/39
        let mut acc = Float::new(P);
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
            acc += Float::with_val(P, x.clone().pow(38u32) * w);
        }
        let want = Float::with_val(P, 2u32) / 39u32;
        assert!(Float::with_val(P, acc - want).abs() < 1e-55);
    }

    #[test]
    fn adaptive_exp() {
        let f = |t: &Float| Complex::with_val(P, (t.clone().exp(), 0));
        let a = Float::with_val(P, 0);
        let b = Float::with_val(P, 3);
        let got = adaptive(&f, &a, &b, 1e-45, P).unwrap();
        let want = Float::with_val(P, 3).exp() - 1u32;
        assert!(Float::with_val(P, got.real() - want).abs() < 1e-44);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // integral of t^(-1/2) over [0, 1] = 2
        let f = |t: &Float| Complex::with_val(P, (t.clone().sqrt().recip(), 0));
        let got = tanh_sinh_01(&f, 1e-30, P).unwrap();
        assert!((got.real().to_f64() - 2.0).abs() < 1e-28);
        let f = |t: &Float| Complex::with_val(P, (Float::with_val(P, t.ln_ref()), 0));
        let got = tanh_sinh_01(&f, 1e-30, P).unwrap();
        assert!((got.real().to_f64() + 1.0).abs() < 1e-28);
    }
}
