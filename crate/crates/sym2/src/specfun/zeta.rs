//! Riemann, Hurwitz and periodic zeta functions by Euler-Maclaurin summation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float, Rational};

use crate::arith::bernoulli_range;
use crate::error::{Error, Result};
use crate::mp::{e_frac, log2_abs_c};
use crate::precision::PrecisionPolicy;

type Cache = Mutex<HashMap<u32, Arc<Vec<Float>>>>;

/// B_2j / (2j)! for j = 1.., at a bucketed precision.
fn em_coeffs(prec: u32) -> Arc<Vec<Float>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let p = prec.div_ceil(64) * 64;
    if let Some(v) = cache.lock().expect("zeta cache").get(&p) {
        return v.clone();
    }
    let j_max = (0.15 * p as f64) as usize + 40;
    let b = bernoulli_range(2 * j_max as u32);
    let mut fact = Float::with_val(p, 1);
    let mut v = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        fact *= ((2 * j - 1) * (2 * j)) as u32;
        v.push(Float::with_val(p, &b[2 * j]) / &fact);
    }
    let v = Arc::new(v);
    cache.lock().expect("zeta cache").insert(p, v.clone());
    v
}

fn is_one(s: &Complex) -> bool {
    s.imag().is_zero() && *s.real() == 1
}

/// Hurwitz zeta at `prec` bits for s != 1, a > 0.
pub(crate) fn hurwitz_c(s: &Complex, a: &Float, prec: u32) -> Complex {
    let sr = s.real().to_f64();
    let sabs = s.clone().abs().real().to_f64();
    let af = a.to_f64();
    let mut guard = 20.0;
    let w_target = 0.25 * prec as f64 + 0.6 * sabs + 10.0;
    if sr < 1.0 {
        guard += (1.0 - sr) * (w_target + 1.0).log2();
    }
    let dist1 = {
        let d = Complex::with_val(64, s - 1u32);
        d.abs().real().to_f64()
    };
    if dist1 < 1.0 {
        guard += (-dist1.log2()).max(0.0);
    }
    let wp = prec + guard.ceil() as u32;
    let n = (w_target - af).ceil().max(1.0) as u64;
    let s = Complex::with_val(wp, s);
    let a = Float::with_val(wp, a);
    let neg_s = Complex::with_val(wp, -&s);
    let mut sum = Complex::with_val(wp, 0);
    if a == 1 {
        // (m)^{-s} multiplicatively: one exponential per prime
        let m_max = n as usize;
        let mut pw: Vec<Complex> = Vec::with_capacity(m_max + 1);
        pw.push(Complex::new(wp));
        pw.push(Complex::with_val(wp, 1));
        let spf = crate::arith::spf_table(m_max.max(2));
        for m in 2..=m_max {
            let p = spf[m] as usize;
            let v = if p == m {
                let base = Float::with_val(wp, m).ln();
                Complex::with_val(wp, &neg_s * &base).exp()
            } else {
                Complex::with_val(wp, &pw[p] * &pw[m / p])
            };
            pw.push(v);
        }
        for v in &pw[1..] {
            sum += v;
        }
    } else {
        for k in 0..n {
            let base = Float::with_val(wp, &a + k).ln();
            let t = Complex::with_val(wp, &neg_s * &base).exp();
            sum += t;
        }
    }
    let w = Float::with_val(wp, &a + n);
    let lnw = Float::with_val(wp, w.ln_ref());
    let w_neg_s = Complex::with_val(wp, &neg_s * &lnw).exp();
    // w^(1-s)/(s-1) + w^(-s)/2
    let sm1 = Complex::with_val(wp, &s - 1u32);
    sum += Complex::with_val(wp, &w_neg_s * &w) / &sm1;
    sum += Complex::with_val(wp, &w_neg_s / 2u32);
    // q_j = (s)_{2j-1} w^(1-s-2j); q_1 = s w^(-s-1)
    let w2 = Float::with_val(wp, w.square_ref());
    let mut q = Complex::with_val(wp, &s * &w_neg_s) / &w;
    let coeffs = em_coeffs(wp);
    let mut prev = f64::INFINITY;
    for (j0, b) in coeffs.iter().enumerate() {
        let j = j0 + 1;
        let t = Complex::with_val(wp, &q * b);
        let lt = log2_abs_c(&t);
        sum += &t;
        if lt < log2_abs_c(&sum) - wp as f64 - 2.0 {
            break;
        }
        if lt > prev + 1.0 && j > 4 {
            break;
        }
        prev = lt;
        let f1 = Complex::with_val(wp, &s + (2 * j - 1) as u32);
        let f2 = Complex::with_val(wp, &s + (2 * j) as u32);
        q *= f1;
        q *= f2;
        q /= &w2;
    }
    Complex::with_val(prec, sum)
}

pub fn hurwitz_zeta(s: &Complex, a: &Float, policy: &PrecisionPolicy) -> Result<Complex> {
    if is_one(s) {
        return Err(Error::Pole { func: "hurwitz_zeta", at: "s = 1".into() });
    }
    if !(*a > 0 && *a <= 1) {
        return Err(Error::Domain { func: "hurwitz_zeta", detail: format!("a = {a} not in (0, 1]") });
    }
    Ok(hurwitz_c(s, a, policy.bits()))
}

pub(crate) fn riemann_c(s: &Complex, prec: u32) -> Complex {
    hurwitz_c(s, &Float::with_val(prec, 1), prec)
}

pub fn riemann_zeta(s: &Complex, policy: &PrecisionPolicy) -> Result<Complex> {
    if is_one(s) {
        return Err(Error::Pole { func: "riemann_zeta", at: "s = 1".into() });
    }
    Ok(riemann_c(s, policy.bits()))
}

/// F(s, a) = sum_{n >= 1} e(n a) n^-s for rational a = p/q in (0, 1).
pub fn periodic_zeta(s: &Complex, a: &Rational, policy: &PrecisionPolicy) -> Result<Complex> {
    if !(*a > 0 && *a < 1) {
        return Err(Error::Domain { func: "periodic_zeta", detail: format!("a = {a} not in (0, 1)") });
    }
    let prec = policy.bits();
    let wp = prec + 16;
    let p = a.numer().to_i64().expect("small numerator");
    let q = a.denom().to_u64().expect("small denominator");
    if is_one(s) {
        // -log(1 - e(a))
        let one_minus = Complex::with_val(wp, 1) - e_frac(p, q, wp);
        return Ok(Complex::with_val(prec, -one_minus.ln()));
    }
    let sw = Complex::with_val(wp, s);
    let mut acc = Complex::with_val(wp, 0);
    for r in 1..=q {
        let ar = Float::with_val(wp, Rational::from((r, q)));
        let z = hurwitz_c(&sw, &ar, wp);
        acc += z * e_frac(p * r as i64, q, wp);
    }
    let lnq = Float::with_val(wp, q).ln();
    let scale = (Complex::with_val(wp, -&sw) * lnq).exp();
    Ok(Complex::with_val(prec, acc * scale))
}
