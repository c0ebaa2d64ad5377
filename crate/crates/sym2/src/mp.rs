//! Small helpers around MPFR/MPC values.

use rug::float::Constant;
use rug::{Complex, Float};

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn ln2(prec: u32) -> Float {
    Float::with_val(prec, Constant::Log2)
}

/// log2 |x|, or -inf for zero. Safe far outside the f64 exponent range.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    if !x.is_finite() {
        return f64::INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// log2 max(|re|, |im|); within half a bit of log2 |z|.
pub fn log2_abs_c(z: &Complex) -> f64 {
    log2_abs(z.real()).max(log2_abs(z.imag()))
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64()
}

pub fn czero(prec: u32) -> Complex {
    Complex::with_val(prec, 0)
}

pub fn creal(x: &Float) -> Complex {
    Complex::with_val(x.prec(), (x, 0))
}

/// True when z is exactly 0, -1, -2, ...
pub fn is_nonpositive_integer(z: &Complex) -> bool {
    z.imag().is_zero() && z.real().is_integer() && *z.real() <= 0
}

pub fn is_nonpositive_integer_real(x: &Float) -> bool {
    x.is_integer() && *x <= 0
}

/// e(num/den) = exp(2 pi i num/den).
pub fn e_frac(num: i64, den: u64, prec: u32) -> Complex {
    let r = num.rem_euclid(den as i64) as u64;
    let mut t = pi(prec + 8) * 2u32;
    t *= r;
    t /= den;
    let (s, c) = t.sin_cos(Float::new(prec + 8));
    Complex::with_val(prec, (c, s))
}

/// (-1)^(k/2) for even k, which is i^k and i^-k.
pub fn i_pow_even(k: u32) -> i32 {
    debug_assert!(k.is_multiple_of(2));
    if (k / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Relative distance |a - b| / max(|b|, tiny) as f64.
pub fn rel_err(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if b.is_zero() {
        return d.to_f64();
    }
    (d / b.clone().abs()).to_f64()
}

pub fn rel_err_c(a: &Complex, b: &Complex) -> f64 {
    let prec = a.prec().0.max(b.prec().0);
    let d = Complex::with_val(prec, a - b).abs().real().clone();
    let nb = Complex::with_val(prec, b).abs().real().clone();
    if nb.is_zero() {
        return d.to_f64();
    }
    (d / nb).to_f64()
}

pub fn abs_err_c(a: &Complex, b: &Complex) -> f64 {
    let prec = a.prec().0.max(b.prec().0);
    Complex::with_val(prec, a - b).abs().real().to_f64()
}

/// Scientific-notation string with the given number of significant digits.
pub fn sci(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0e0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits));
    if s.contains('e') || !x.is_finite() {
        s
    } else {
        s + "e0"
    }
}

/// ln Γ(x) for x > 0 in double precision, for bounds.
pub fn ln_gamma_f64(x: f64) -> f64 {
    // shift to x ≥ 15, then Stirling with four correction terms
    let mut x = x;
    let mut acc = 0.0;
    while x < 15.0 {
        acc -= x.ln();
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r / 1680.0))) / x;
    acc + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// ζ(x) for real x > 1 in double precision, for bounds.
pub fn zeta_f64(x: f64) -> f64 {
    // Euler-Maclaurin with twenty head terms
    let n = 20.0f64;
    let mut s = 0.0;
    for m in 1..20 {
        s += (m as f64).powf(-x);
    }
    let nx = n.powf(-x);
    s += n * nx / (x - 1.0) + nx / 2.0;
    let mut q = x * nx / n;
    s += q / 12.0;
    q *= (x + 1.0) * (x + 2.0) / (n * n);
    s -= q / 720.0;
    q *= (x + 3.0) * (x + 4.0) / (n * n);
    s += q / 30240.0;
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_precision_bounds_helpers() {
        for x in [0.3f64, 1.0, 2.5, 7.0, 40.0, 300.0] {
            let want = Float::with_val(64, x).ln_gamma().to_f64();
            assert!((ln_gamma_f64(x) - want).abs() < 1e-12 * want.abs().max(1.0), "x = {x}");
        }
        for x in [1.001f64, 1.5, 2.0, 3.25, 12.0] {
            let want = Float::with_val(64, x).zeta().to_f64();
            assert!((zeta_f64(x) / want - 1.0).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn log2_of_huge_and_tiny() {
        let big = Float::with_val(64, Float::i_exp(1, 5000));
        assert!((log2_abs(&big) - 5000.0).abs() < 1e-9);
        let tiny = Float::with_val(64, Float::i_exp(3, -7000));
        assert!((log2_abs(&tiny) - (-7000.0 + 3f64.log2())).abs() < 1e-9);
        assert_eq!(log2_abs(&Float::new(64)), f64::NEG_INFINITY);
    }

    #[test]
    fn roots_of_unity() {
        let z = e_frac(1, 4, 128);
        assert!(z.real().clone().abs() < 1e-35);
        assert!((z.imag().to_f64() - 1.0).abs() < 1e-35);
        let w = e_frac(-1, 3, 128);
        assert!((w.real().to_f64() + 0.5).abs() < 1e-30);
    }

    #[test]
    fn parity_of_i_power() {
        assert_eq!(i_pow_even(12), 1);
        assert_eq!(i_pow_even(14), -1);
        assert_eq!(i_pow_even(0), 1);
    }
}
