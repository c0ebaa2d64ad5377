//! log-Gamma and digamma by upward recursion into the Stirling regime.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float};

use crate::arith::bernoulli_range;
use crate::error::{Error, Result};
use crate::mp::{is_nonpositive_integer, log2_abs, log2_abs_c, pi};
use crate::precision::PrecisionPolicy;

type CoeffCache = Mutex<HashMap<(u8, u32), Arc<Vec<Float>>>>;

fn coeff_cache() -> &'static CoeffCache {
    static CACHE: OnceLock<CoeffCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn bucket(prec: u32) -> u32 {
    prec.div_ceil(64) * 64
}

/// Recursion target |w| for Stirling at `prec` bits.
fn stirling_radius(prec: u32) -> f64 {
    (0.5 * prec as f64 + 10.0).max(12.0)
}

fn max_terms(prec: u32) -> usize {
    (0.12 * prec as f64) as usize + 30
}

/// kind 0: B_2j / (2j (2j - 1)) for log-Gamma; kind 1: B_2j / (2j) for digamma.
fn coeffs(kind: u8, prec: u32) -> Arc<Vec<Float>> {
    let p = bucket(prec);
    if let Some(c) = coeff_cache().lock().expect("gamma cache").get(&(kind, p)) {
        return c.clone();
    }
    let j_max = max_terms(p);
    let b = bernoulli_range(2 * j_max as u32);
    let v: Vec<Float> = (1..=j_max)
        .map(|j| {
            let den = if kind == 0 { (2 * j * (2 * j - 1)) as u32 } else { (2 * j) as u32 };
            Float::with_val(p, &b[2 * j]) / den
        })
        .collect();
    let v = Arc::new(v);
    coeff_cache().lock().expect("gamma cache").insert((kind, p), v.clone());
    v
}

fn shift_count(re: f64, im: f64, radius: f64) -> u64 {
    if im.abs() >= radius {
        if re >= 0.5 {
            0
        } else {
            (0.5 - re).ceil() as u64
        }
    } else if re >= radius {
        0
    } else {
        (radius - re).ceil() as u64
    }
}

fn half_ln_2pi(prec: u32) -> Float {
    let mut t = pi(prec) * 2u32;
    t.ln_mut();
    t / 2u32
}

fn stirling_c(w: &Complex, prec: u32) -> Complex {
    let c = coeffs(0, prec);
    let lnw = Complex::with_val(prec, w.ln_ref());
    let mut s = Complex::with_val(prec, w - 0.5f64) * &lnw;
    s -= w;
    s += half_ln_2pi(prec);
    let inv = Complex::with_val(prec, w.recip_ref());
    let inv2 = Complex::with_val(prec, inv.square_ref());
    let mut pw = inv;
    let target = log2_abs_c(&s) - prec as f64 - 4.0;
    for cj in c.iter() {
        let t = Complex::with_val(prec, &pw * cj);
        let done = log2_abs_c(&t) < target;
        s += &t;
        if done {
            break;
        }
        pw *= &inv2;
    }
    s
}

fn stirling_r(w: &Float, prec: u32) -> Float {
    let c = coeffs(0, prec);
    let lnw = Float::with_val(prec, w.ln_ref());
    let mut s = Float::with_val(prec, w - 0.5f64) * &lnw;
    s -= w;
    s += half_ln_2pi(prec);
    let inv = Float::with_val(prec, w.recip_ref());
    let inv2 = Float::with_val(prec, inv.square_ref());
    let mut pw = inv;
    let target = log2_abs(&s) - prec as f64 - 4.0;
    for cj in c.iter() {
        let t = Float::with_val(prec, &pw * cj);
        let done = log2_abs(&t) < target;
        s += &t;
        if done {
            break;
        }
        pw *= &inv2;
    }
    s
}

/// Principal-branch log Gamma at `prec` bits; z must not be a pole.
pub(crate) fn ln_gamma_c(z: &Complex, prec: u32) -> Complex {
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    if z.imag().is_zero() && *z.real() > 0 {
        let r = ln_gamma_r(z.real(), prec);
        return Complex::with_val(prec, (r, 0));
    }
    let radius = stirling_radius(prec);
    let n = shift_count(re, im, radius);
    let mag = (re.abs() + n as f64 + im.abs() + 2.0).max(2.0);
    let wp = prec + 16 + (mag * mag.ln()).log2().max(0.0) as u32;
    let zz = Complex::with_val(wp, z);
    if n == 0 {
        return Complex::with_val(prec, stirling_c(&zz, wp));
    }
    let mut prod = zz.clone();
    let mut arg_sum = im.atan2(re);
    for j in 1..n {
        let t = Complex::with_val(wp, &zz + j);
        prod *= &t;
        arg_sum += im.atan2(re + j as f64);
    }
    let w = Complex::with_val(wp, &zz + n);
    let mut lp = Complex::with_val(wp, prod.ln_ref());
    let two_pi = pi(wp) * 2u32;
    let turns = ((arg_sum - lp.imag().to_f64()) / (2.0 * std::f64::consts::PI)).round();
    if turns != 0.0 {
        *lp.mut_imag() += Float::with_val(wp, &two_pi * turns);
    }
    let mut out = stirling_c(&w, wp);
    out -= &lp;
    Complex::with_val(prec, out)
}

/// log Gamma(x) for real x > 0.
pub(crate) fn ln_gamma_r(x: &Float, prec: u32) -> Float {
    debug_assert!(*x > 0);
    let xf = x.to_f64();
    let radius = stirling_radius(prec);
    let n = if xf >= radius { 0 } else { (radius - xf).ceil() as u64 };
    let mag = (xf + n as f64 + 2.0).max(2.0);
    let extra = if xf < 1e-3 { (-log2_abs(x)).max(0.0) as u32 } else { 0 };
    let wp = prec + 16 + extra + (mag * mag.ln()).log2().max(0.0) as u32;
    let xx = Float::with_val(wp, x);
    if n == 0 {
        return Float::with_val(prec, stirling_r(&xx, wp));
    }
    let mut prod = xx.clone();
    for j in 1..n {
        prod *= Float::with_val(wp, &xx + j);
    }
    let w = Float::with_val(wp, &xx + n);
    let mut out = stirling_r(&w, wp);
    out -= prod.ln();
    Float::with_val(prec, out)
}

/// Gamma(z); zero is never returned, poles must be screened by the caller.
pub(crate) fn gamma_c(z: &Complex, prec: u32) -> Complex {
    let l = ln_gamma_c(z, prec + 8);
    Complex::with_val(prec, l.exp())
}

/// 1/Gamma(z), exactly zero at the poles.
pub(crate) fn rgamma_c(z: &Complex, prec: u32) -> Complex {
    if is_nonpositive_integer(z) {
        return Complex::with_val(prec, 0);
    }
    let l = ln_gamma_c(z, prec + 8);
    Complex::with_val(prec, (-l).exp())
}

pub(crate) fn gamma_r(x: &Float, prec: u32) -> Float {
    if *x > 0 {
        return Float::with_val(prec, ln_gamma_r(x, prec + 8).exp());
    }
    let z = Complex::with_val(prec + 8, (x, 0));
    gamma_c(&z, prec).real().clone()
}

pub(crate) fn gamma_ratio_r(a: &Float, b: &Float, prec: u32) -> Float {
    let mut l = ln_gamma_r(a, prec + 8);
    l -= ln_gamma_r(b, prec + 8);
    Float::with_val(prec, l.exp())
}

/// Digamma for real x > 0.
pub(crate) fn digamma_r(x: &Float, prec: u32) -> Float {
    let xf = x.to_f64();
    let radius = stirling_radius(prec);
    let n = if xf >= radius { 0 } else { (radius - xf).ceil() as u64 };
    let extra = if xf < 1e-3 { (-log2_abs(x)).max(0.0) as u32 } else { 0 };
    let wp = prec + 20 + extra + ((xf + n as f64 + 2.0).ln().log2().max(0.0)) as u32;
    let xx = Float::with_val(wp, x);
    let mut acc = Float::new(wp);
    for j in 0..n {
        acc += Float::with_val(wp, &xx + j).recip();
    }
    let w = Float::with_val(wp, &xx + n);
    let c = coeffs(1, wp);
    let mut s = Float::with_val(wp, w.ln_ref());
    s -= Float::with_val(wp, w.recip_ref()) / 2u32;
    let inv2 = Float::with_val(wp, w.square_ref()).recip();
    let mut pw = inv2.clone();
    let target = log2_abs(&s) - wp as f64 - 4.0;
    for cj in c.iter() {
        let t = Float::with_val(wp, &pw * cj);
        let done = log2_abs(&t) < target;
        s -= &t;
        if done {
            break;
        }
        pw *= &inv2;
    }
    s -= acc;
    Float::with_val(prec, s)
}

/// Principal-branch log Gamma(z).
pub fn log_gamma(z: &Complex, policy: &PrecisionPolicy) -> Result<Complex> {
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z.real().to_string()));
    }
    Ok(ln_gamma_c(z, policy.bits()))
}

/// psi(x) = Gamma'(x)/Gamma(x) for x > 0.
pub fn digamma(x: &Float, policy: &PrecisionPolicy) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::Domain { func: "digamma", detail: format!("x = {x} <= 0") });
    }
    Ok(digamma_r(x, policy.bits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::euler_gamma;

    const P: u32 = 200;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(P, (re, im))
    }

    #[test]
    fn trivial_values() {
        let pol = PrecisionPolicy::default();
        let one = log_gamma(&c(1.0, 0.0), &pol).unwrap();
        assert!(one.real().clone().abs() < 1e-45);
        let half = log_gamma(&c(0.5, 0.0), &pol).unwrap();
        let want = pi(P).ln() / 2u32;
        assert!((Float::with_val(P, half.real() - &want)).abs() < 1e-45);
        assert!(matches!(log_gamma(&c(-3.0, 0.0), &pol), Err(Error::GammaPole(_))));
        assert!(matches!(log_gamma(&c(0.0, 0.0), &pol), Err(Error::GammaPole(_))));
    }

    #[test]
    fn recursion_oracle_at_30_25() {
        // log Gamma(z + N) - sum ln(z + j), with MPFR's lngamma at z + N
        let z = Float::with_val(P, 30.25);
        let n = 40u32;
        let mut oracle = Float::with_val(P, &z + n).ln_gamma();
        for j in 0..n {
            oracle -= Float::with_val(P, &z + j).ln();
        }
        let pol = PrecisionPolicy::default();
        let got = log_gamma(&Complex::with_val(P, (&z, 0)), &pol).unwrap();
        let err = Float::with_val(P, got.real() - &oracle).abs().to_f64();
        assert!(err < 1e-40, "err = {err:e}");
    }

    #[test]
    fn complex_values_against_reflection_and_modulus() {
        // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
        for t in [0.3, 2.0, 7.5, 40.0] {
            let g = ln_gamma_c(&c(0.5, t), P);
            let lhs = Float::with_val(P, g.real() * 2u32);
            let mut rhs = pi(P) / Float::with_val(P, pi(P) * t).cosh();
            rhs.ln_mut();
            assert!(Float::with_val(P, lhs - rhs).abs() < 1e-45, "t = {t}");
        }
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        for (re, im) in [(0.3, 0.7), (-2.4, 1.1), (3.7, -5.0), (-15.5, 0.25)] {
            let z = c(re, im);
            let one_minus = Complex::with_val(P, 1 - &z);
            let mut lhs = ln_gamma_c(&z, P);
            lhs += ln_gamma_c(&one_minus, P);
            let lhs = lhs.exp();
            let s = Complex::with_val(P, &z * pi(P)).sin();
            let rhs = Complex::with_val(P, pi(P) / s);
            let err = Complex::with_val(P, &lhs - &rhs).abs().real().to_f64()
                / rhs.clone().abs().real().to_f64();
            assert!(err < 1e-45, "z = {re}+{im}i err {err:e}");
        }
    }

    #[test]
    fn branch_is_continuous_principal() {
        // principal branch: imaginary part is continuous in the upper half plane
        // and equals the integral of psi; check against the sum of ln(z + j)
        let z = c(-7.3, 0.4);
        let mut direct = ln_gamma_c(&Complex::with_val(P, &z + 60u32), P);
        for j in 0..60 {
            direct -= Complex::with_val(P, &z + j).ln();
        }
        let got = ln_gamma_c(&z, P);
        assert!(Complex::with_val(P, &got - &direct).abs().real().to_f64() < 1e-40, "{got} vs {direct}");
    }

    #[test]
    fn real_path_matches_mpfr() {
        for x in [0.001, 0.75, 3.5, 17.25, 99.5, 1234.5] {
            let xf = Float::with_val(P, x);
            let got = ln_gamma_r(&xf, P);
            let want = xf.clone().ln_gamma();
            let err = Float::with_val(P, &got - &want).abs().to_f64();
            assert!(err < 1e-45 * want.to_f64().abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn digamma_examples() {
        let pol = PrecisionPolicy::default();
        let one = digamma(&Float::with_val(P, 1), &pol).unwrap();
        assert!(Float::with_val(P, one + euler_gamma(P)).abs() < 1e-45);
        // series oracle: psi(x) = -gamma + sum (1/(n+1) - 1/(n+x)), accelerated by pairing with the
        // tail integral; compare to 1e-12 via 10^6 terms plus the 1/N tail correction
        let x = 0.75f64;
        let mut s = 0.0f64;
        let n = 1_000_000;
        for k in 0..n {
            s += 1.0 / (k as f64 + 1.0) - 1.0 / (k as f64 + x);
        }
        s += (x - 1.0) / (n as f64);
        let want = -0.577_215_664_901_532_9 + s;
        let got = digamma(&Float::with_val(P, 0.75), &pol).unwrap().to_f64();
        assert!((got - want).abs() < 1e-11, "{got} vs {want}");
        assert!((got + 1.085_860_879_786_472_1).abs() < 1e-15);
        let big = digamma(&Float::with_val(P, 999.5), &pol).unwrap().to_f64();
        assert!((big - (999.5f64.ln() - 1.0 / 1999.0)).abs() < 1e-6);
        assert!(digamma(&Float::with_val(P, 0), &pol).is_err());
    }

    #[test]
    fn digamma_matches_mpfr() {
        for x in [0.01, 0.5, 2.25, 13.0, 250.75] {
            let xf = Float::with_val(P, x);
            let err = Float::with_val(P, digamma_r(&xf, P) - xf.clone().digamma()).abs().to_f64();
            assert!(err < 1e-45, "x = {x}: {err:e}");
        }
    }

    #[test]
    fn deterministic() {
        let a = ln_gamma_c(&c(2.5, 3.5), P);
        let b = ln_gamma_c(&c(2.5, 3.5), P);
        assert_eq!(a, b);
    }
}
