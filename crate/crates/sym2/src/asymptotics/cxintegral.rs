//! I(u, y) = (1/2πi)∫_{(3)} Γ((k−1/2−u−z)/2)/Γ((k+1/2+u+z)/2) Γ(z) cos(πz/2) y^{-z} dz.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::{i_pow_even, pi};
use crate::precision::PrecisionPolicy;
use crate::specfun::contour::{bent_integral, Bend, ContourSpec};
use crate::specfun::gamma::{gamma_c, ln_gamma_c};
use crate::specfun::hypergeometric::hyp2f1;
use crate::specfun::quadrature::{adaptive, gauss_legendre, tanh_sinh_01};

fn check_strip(u: &Complex, k: u32) -> Result<()> {
    let re = u.real().to_f64();
    let hi = k as f64 - 4.0;
    if !(re > 0.5 && re < hi) {
        return Err(Error::StripViolation { re, lo: 0.5, hi });
    }
    Ok(())
}

/// F(a,b;c;z), retrying at doubled digits while the series loses too much.
fn hyp2f1_escalating(a: &Complex, b: &Complex, c: &Complex, z: &Complex, policy: &PrecisionPolicy) -> Result<Complex> {
    let mut p = *policy;
    for _ in 0..4 {
        match hyp2f1(a, b, c, z, &p) {
            Err(Error::Precision { .. }) => p = p.escalated(p.working_digits * 2),
            other => return other,
        }
    }
    hyp2f1(a, b, c, z, &p)
}

/// cos(π(1/2 + u)/2).
fn cos_quarter(u: &Complex, prec: u32) -> Complex {
    let arg = Complex::with_val(prec, u + 0.5f64) * pi(prec) / 2u32;
    arg.cos()
}

/// Closed form; the y = 2 branch is taken only when y equals 2 exactly.
pub fn i_closed(u: &Complex, y: &Float, k: u32, policy: &PrecisionPolicy) -> Result<Complex> {
    check_strip(u, k)?;
    if !k.is_multiple_of(2) {
        return Err(Error::Range(format!("weight must be even, got {k}")));
    }
    if *y <= 0 {
        return Err(Error::Domain { func: "i_closed", detail: "y must be positive".into() });
    }
    let prec = policy.bits() + 32;
    let ik = i_pow_even(k);
    let kf = Float::with_val(prec, k);
    // A = k − 1/2 − u
    let big_a = Complex::with_val(prec, Float::with_val(prec, &kf - 0.5f64) - u);
    let half_a = Complex::with_val(prec, &big_a / 2u32);
    let out = if *y < 2 {
        let top = Complex::with_val(prec, Complex::with_val(prec, u + 0.5f64) + &kf) / 2u32;
        let b = Complex::with_val(prec, Complex::with_val(prec, 1.5f64 - u) - &kf) / 2u32;
        let z = Complex::with_val(prec, (Float::with_val(prec, y.square_ref()) / 4u32, 0));
        let f = hyp2f1_escalating(&half_a, &b, &Complex::with_val(prec, (0.5f64, 0)), &z, policy)?;
        let ln = ln_gamma_c(&half_a, prec) - ln_gamma_c(&top, prec);
        ln.exp() * f
    } else if *y == 2 {
        let four_u = (Complex::with_val(prec, u * 2u32) * Float::with_val(prec, 2).ln()).exp();
        let mut ln = ln_gamma_c(&big_a, prec);
        ln -= ln_gamma_c(&Complex::with_val(prec, Float::with_val(prec, &kf - 0.5f64) + u), prec);
        let g = ln.exp() * gamma_c(u, prec);
        four_u * cos_quarter(u, prec) * g / pi(prec).sqrt() * ik
    } else {
        let b = Complex::with_val(prec, &big_a + 1u32) / 2u32;
        let z = Complex::with_val(prec, (Float::with_val(prec, 4u32) / Float::with_val(prec, y.square_ref()), 0));
        let f = hyp2f1_escalating(&half_a, &b, &Complex::with_val(prec, (&kf, 0)), &z, policy)?;
        let mut ln = ln_gamma_c(&big_a, prec);
        ln -= ln_gamma_c(&Complex::with_val(prec, (&kf, 0)), prec);
        ln -= Complex::with_val(prec, &big_a * Float::with_val(prec, y.ln_ref()));
        ln.exp() * f * cos_quarter(u, prec) * (2 * ik)
    };
    Ok(Complex::with_val(policy.bits(), out))
}

fn integrand(z: &Complex, u: &Complex, ln_y: &Float, k: u32, prec: u32) -> Complex {
    let kf = Float::with_val(prec, k);
    let top = Complex::with_val(prec, Complex::with_val(prec, Float::with_val(prec, &kf - 0.5f64) - u) - z) / 2u32;
    let bot = Complex::with_val(prec, Complex::with_val(prec, Float::with_val(prec, &kf + 0.5f64) + u) + z) / 2u32;
    let mut ln = ln_gamma_c(&top, prec);
    ln -= ln_gamma_c(&bot, prec);
    ln += ln_gamma_c(z, prec);
    ln -= Complex::with_val(prec, z * ln_y);
    ln += ln_cos_half_pi(z, prec);
    ln.exp()
}

/// ln cos(πz/2) = b/2 + ln(1 + e^{−b}) − ln 2 with b = ∓iπz, the sign following Im z so that
/// Re b = π|Im z| and nothing overflows far up the line.
fn ln_cos_half_pi(z: &Complex, prec: u32) -> Complex {
    let w = Complex::with_val(prec, z * pi(prec));
    let b = if *z.imag() >= 0 {
        Complex::with_val(prec, (w.imag().clone(), Float::with_val(prec, -w.real())))
    } else {
        Complex::with_val(prec, (Float::with_val(prec, -w.imag()), w.real().clone()))
    };
    let one_plus = Complex::with_val(prec, Complex::with_val(prec, -&b).exp() + 1u32);
    Complex::with_val(prec, &b / 2u32) + one_plus.ln() - Float::with_val(prec, 2).ln()
}

/// Direct quadrature of the defining integral on Re z = spec.sigma. Off y = 2 the parts beyond
/// ±spec.height are swung onto horizontal rays (left for y < 2, right for y > 2); at y = 2 they
/// stay vertical and are mapped onto (0, 1] for tanh-sinh.
pub fn i_numeric(u: &Complex, y: &Float, k: u32, spec: &ContourSpec, policy: &PrecisionPolicy) -> Result<Complex> {
    check_strip(u, k)?;
    if *y <= 0 {
        return Err(Error::Domain { func: "i_numeric", detail: "y must be positive".into() });
    }
    let a_re = k as f64 - 0.5 - u.real().to_f64();
    spec.check_strip(0.0, a_re)?;
    if spec.height <= u.imag().to_f64().abs() + 1.0 {
        return Err(Error::Config(format!("contour height {} must clear Im u by at least 1", spec.height)));
    }
    let prec = policy.bits() + 32;
    let ln_y = Float::with_val(prec, y.ln_ref());
    let f = |z: &Complex| integrand(z, u, &ln_y, k, prec);
    let tol = policy.target_abs_tol;
    if *y != 2 {
        let bend = if *y < 2 { Bend::Left } else { Bend::Right };
        let rate = (ln_y.to_f64() - 2f64.ln()).abs();
        let max_ray = ((-tol.ln() + 40.0) / rate + 100.0).min(1e5);
        let wide = policy.escalated(policy.working_digits + 10);
        let v = bent_integral(f, spec.sigma, spec.height, bend, max_ray, &wide)?;
        return Ok(Complex::with_val(policy.bits(), v));
    }
    let sigma = Float::with_val(prec, spec.sigma);
    let h = Float::with_val(prec, spec.height);
    let g = |t: &Float| f(&Complex::with_val(prec, (&sigma, t)));
    let lo = Float::with_val(prec, -&h);
    let mut total = adaptive(&g, &lo, &h, tol * 1e-2, prec)?;
    // t = T/s on both tails; near s = 0 the mapped integrand is O(s^{Re u − 1}), so (0, 1e-40)
    // contributes below 1e-30
    let tails = |s: &Float| {
        if *s < 1e-40 {
            return Complex::with_val(prec, 0);
        }
        let t = Float::with_val(prec, &h / s);
        let jac = Float::with_val(prec, &t / s);
        let up = g(&t);
        let down = g(&Float::with_val(prec, -&t));
        Complex::with_val(prec, up + down) * jac
    };
    total += tanh_sinh_01(&tails, tol * 1e-2, prec)?;
    Ok(Complex::with_val(policy.bits(), total / (pi(prec) * 2u32)))
}

/// 2^{1/2+u}∫₀^∞ J_{k−1}(x) cos(xy/2) x^{−1/2−u} dx for real u, in double precision: quadrature
/// up to X = max(2(k−1)², 200), the rest from the Hankel expansion integrated term by term.
pub fn i_bessel_integral(u: f64, y: f64, k: u32) -> Result<f64> {
    if !(u > 0.5 && u < k as f64 - 4.0) || !(y > 0.0) || (y - 2.0).abs() < 0.05 {
        return Err(Error::Domain { func: "i_bessel_integral", detail: format!("u = {u}, y = {y}") });
    }
    let nu = (k - 1) as i32;
    let x_max = (2.0 * (nu as f64).powi(2)).max(200.0);
    let prec = 64;
    let rule = gauss_legendre(20, prec);
    let nodes: Vec<(f64, f64)> = rule.nodes.iter().zip(rule.weights.iter()).map(|(x, w)| (x.to_f64(), w.to_f64())).collect();
    let width = std::f64::consts::FRAC_PI_2;
    let panels = (x_max / width).ceil() as usize;
    let x_max = panels as f64 * width;
    let mut head = 0.0;
    for j in 0..panels {
        let mid = (j as f64 + 0.5) * width;
        for (x, w) in &nodes {
            let t = mid + x * width / 2.0;
            let jn = Float::with_val(prec, t).jn(nu).to_f64();
            head += w * width / 2.0 * jn * (t * y / 2.0).cos() * t.powf(-0.5 - u);
        }
    }
    // J_ν(x) = √(2/π) Re Σ_m i^m a_m x^{−m−1/2} e^{i(x − νπ/2 − π/4)}
    let mu = 4.0 * (nu as f64).powi(2);
    let mut a = vec![1.0f64];
    for m in 1..8 {
        let odd = (2 * m - 1) as f64;
        a.push(a[m - 1] * (mu - odd * odd) / (m as f64 * 8.0));
    }
    let phase0 = nu as f64 * std::f64::consts::FRAC_PI_2 + std::f64::consts::FRAC_PI_4;
    let mut tail = 0.0;
    for (m, am) in a.iter().enumerate() {
        let p = 1.0 + u + m as f64;
        // i^m e^{-i phase0}
        let rot = m as f64 * std::f64::consts::FRAC_PI_2 - phase0;
        for b in [1.0 + y / 2.0, 1.0 - y / 2.0] {
            let (re, im) = oscillatory_tail(p, b, x_max);
            tail += am * (rot.cos() * re - rot.sin() * im);
        }
    }
    tail *= (2.0 / std::f64::consts::PI).sqrt() / 2.0;
    Ok(2f64.powf(0.5 + u) * (head + tail))
}

/// ∫_X^∞ x^{-p} e^{ibx} dx = −e^{ibX} X^{-p} Σ_n (p)_n/((ib)^{n+1} X^n), summed while it shrinks.
fn oscillatory_tail(p: f64, b: f64, x: f64) -> (f64, f64) {
    // 1/(ib)^{n+1} = (−i/b)^{n+1}
    let mut coef = 1.0f64;
    let mut acc = (0.0f64, 0.0f64);
    let mut prev = f64::INFINITY;
    for n in 0..40 {
        let mag = coef / b.abs().powi(n + 1) / x.powi(n);
        if mag > prev {
            break;
        }
        prev = mag;
        let sign: f64 = if b > 0.0 { 1.0 } else { -1.0 };
        // (−i)^{n+1} sign^{n+1}
        let turns = (n + 1) as f64 * -std::f64::consts::FRAC_PI_2;
        let s = sign.powi(n + 1);
        acc.0 += mag * s * turns.cos();
        acc.1 += mag * s * turns.sin();
        coef *= p + n as f64;
        if mag < 1e-30 {
            break;
        }
    }
    let scale = -x.powf(-p);
    let (c, s) = ((b * x).cos(), (b * x).sin());
    ((acc.0 * c - acc.1 * s) * scale, (acc.0 * s + acc.1 * c) * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::abs_err_c;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::new(40, 1e-20, 1e-20).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(160, (re, im))
    }

    fn y(v: f64) -> Float {
        Float::with_val(160, v)
    }

    #[test]
    fn y_equals_two_example() {
        let p = pol();
        let got = i_closed(&c(1.0, 0.0), &y(2.0), 20, &p).unwrap();
        // i^20 2² cos(3π/4)/√π Γ(18.5)/Γ(20.5)
        let want = 4.0 * (3.0 * std::f64::consts::FRAC_PI_4).cos() / std::f64::consts::PI.sqrt() / (18.5 * 19.5);
        assert!((got.real().to_f64() - want).abs() < 1e-15);
        assert!(got.imag().to_f64().abs() < 1e-30);
    }

    #[test]
    fn strip_is_enforced() {
        let p = pol();
        assert!(matches!(i_closed(&c(0.4, 0.0), &y(1.0), 20, &p), Err(Error::StripViolation { .. })));
        assert!(matches!(i_closed(&c(16.5, 0.0), &y(1.0), 20, &p), Err(Error::StripViolation { .. })));
    }

    #[test]
    fn branches_meet_at_two() {
        let p = pol();
        let u = c(1.5, 0.5);
        let at = i_closed(&u, &y(2.0), 24, &p).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1e-3, 1e-4, 1e-5] {
            let lo = i_closed(&u, &y(2.0 - eps), 24, &p).unwrap();
            let hi = i_closed(&u, &y(2.0 + eps), 24, &p).unwrap();
            let gap = abs_err_c(&lo, &hi);
            assert!(gap < last, "eps = {eps}: {gap:e}");
            assert!(abs_err_c(&lo, &at) < 1e3 * eps);
            last = gap;
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let p = pol();
        let spec = ContourSpec::new(3.0, 4.0, 8).unwrap();
        for (yy, u) in [(1.0, c(1.0, 0.0)), (3.0, c(1.0, 0.0)), (2.0, c(1.0, 0.0)), (0.5, c(1.0, 1.0))] {
            let a = i_closed(&u, &y(yy), 20, &p).unwrap();
            let b = i_numeric(&u, &y(yy), 20, &spec, &p).unwrap();
            assert!(abs_err_c(&a, &b) < 1e-15, "y = {yy}: {a} vs {b}");
        }
    }

    #[test]
    fn bessel_representation() {
        let p = pol();
        let a = i_closed(&c(1.0, 0.0), &y(1.0), 20, &p).unwrap().real().to_f64();
        let b = i_bessel_integral(1.0, 1.0, 20).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}
