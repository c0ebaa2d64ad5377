//! Gauss 2F1 with cancellation-aware precision, the 1-z and Pfaff transforms, and Ferrers P^μ_ν.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::{is_nonpositive_integer, log2_abs_c};
use crate::precision::PrecisionPolicy;
use crate::specfun::gamma::{gamma_c, rgamma_c};

const MAX_BITS: u32 = 1 << 16;

/// Raw series sum at `prec` bits. Returns (sum, log2 of the largest term).
fn series(a: &Complex, b: &Complex, c: &Complex, z: &Complex, prec: u32, rel_log2: f64) -> Result<(Complex, f64)> {
    let mut term = Complex::with_val(prec, 1);
    let mut sum = Complex::with_val(prec, 1);
    let mut peak = 0.0f64;
    let zmag = z.clone().abs().real().to_f64();
    let mut n = 0u64;
    loop {
        let nf = Float::with_val(prec, n);
        let num = Complex::with_val(prec, a + &nf) * Complex::with_val(prec, b + &nf);
        if num.real().is_zero() && num.imag().is_zero() {
            return Ok((sum, peak));
        }
        let den = Complex::with_val(prec, c + &nf) * (n + 1);
        term *= num;
        term /= den;
        term *= z;
        sum += &term;
        n += 1;
        let lt = log2_abs_c(&term);
        peak = peak.max(lt);
        // the term ratio tends to z; once it is below 1 the tail is a geometric tail
        let ratio = {
            let nn = n as f64;
            let ar = a.real().to_f64() + nn;
            let br = b.real().to_f64() + nn;
            let cr = c.real().to_f64() + nn;
            ((ar * br).abs() / ((cr * (nn + 1.0)).abs())) * zmag
        };
        if ratio < 1.0 && n > 2 {
            let tail = lt + (ratio / (1.0 - ratio)).max(1.0).log2();
            if tail < log2_abs_c(&sum) + rel_log2 - 8.0 || term.real().is_zero() && term.imag().is_zero() {
                return Ok((sum, peak));
            }
        }
        if n > 5_000_000 {
            return Err(Error::NonConvergence("2F1 series".into()));
        }
    }
}

/// Direct series, re-run until the precision absorbs the peak-to-sum cancellation.
fn series_auto(a: &Complex, b: &Complex, c: &Complex, z: &Complex, bits: u32) -> Result<Complex> {
    let mut prec = bits + 32;
    for _ in 0..6 {
        let (sum, peak) = series(a, b, c, z, prec, -(bits as f64))?;
        let loss = (peak - log2_abs_c(&sum)).max(0.0);
        if (prec as f64) - loss >= bits as f64 + 16.0 {
            return Ok(sum);
        }
        prec = bits + loss.ceil() as u32 + 48;
        if prec > MAX_BITS {
            break;
        }
    }
    Err(Error::Precision { func: "hyp2f1", detail: format!("cancellation exceeds {MAX_BITS} bits") })
}

fn near_integer(x: &Complex, bits: u32) -> bool {
    let r = Float::with_val(x.prec().0, x.real().round_ref());
    let d = Complex::with_val(x.prec().0, x - &r);
    log2_abs_c(&d) < -(bits as f64) / 2.0 - 8.0
}

/// F(a,b;c;z) = A F(a,b;a+b-c+1;1-z) + B (1-z)^{c-a-b} F(c-a,c-b;c-a-b+1;1-z); c-a-b non-integer.
fn one_minus_z(a: &Complex, b: &Complex, c: &Complex, z: &Complex, bits: u32) -> Result<Complex> {
    let mut prec = bits + 48;
    for _ in 0..6 {
        let w = Complex::with_val(prec, 1 - z);
        let s = Complex::with_val(prec, c - a) - b;
        let f1 = series_auto(a, b, &Complex::with_val(prec, 1 - &s), &w, prec)?;
        let ca = Complex::with_val(prec, c - a);
        let cb = Complex::with_val(prec, c - b);
        let f2 = series_auto(&ca, &cb, &Complex::with_val(prec, &s + 1u32), &w, prec)?;
        let gc = gamma_c(&Complex::with_val(prec, c), prec);
        let t1 = Complex::with_val(prec, &gc * gamma_c(&s, prec)) * rgamma_c(&ca, prec) * rgamma_c(&cb, prec) * f1;
        let pw = (Complex::with_val(prec, w.ln_ref()) * &s).exp();
        let ms = Complex::with_val(prec, -&s);
        let t2 = gc * gamma_c(&ms, prec) * rgamma_c(&Complex::with_val(prec, a), prec) * rgamma_c(&Complex::with_val(prec, b), prec) * f2 * pw;
        let big = log2_abs_c(&t1).max(log2_abs_c(&t2));
        let out = t1 + t2;
        let loss = (big - log2_abs_c(&out)).max(0.0);
        if (prec as f64) - loss >= bits as f64 + 16.0 {
            return Ok(out);
        }
        prec = bits + loss.ceil() as u32 + 64;
        if prec > MAX_BITS {
            break;
        }
    }
    Err(Error::Precision { func: "hyp2f1", detail: "1-z transform cancellation".into() })
}

/// 2F1 to `bits` relative bits, choosing direct, Pfaff or 1-z evaluation by geometry.
pub(crate) fn hyp2f1_bits(a: &Complex, b: &Complex, c: &Complex, z: &Complex, bits: u32) -> Result<Complex> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole { func: "hyp2f1", at: format!("c = {}", c.real().to_f64()) });
    }
    let zabs = z.clone().abs().real().to_f64();
    if z.real().is_zero() && z.imag().is_zero() {
        return Ok(Complex::with_val(bits, 1));
    }
    let prec = bits + 32;
    let one_m = Complex::with_val(prec, 1 - z);
    let pf = Complex::with_val(prec, z / &one_m);
    let pf_abs = pf.clone().abs().real().to_f64();
    let om_abs = one_m.clone().abs().real().to_f64();
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if zabs <= 0.7 || terminating {
        return series_auto(a, b, c, z, bits);
    }
    if pf_abs <= 0.7 {
        // Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1))
        let cb = Complex::with_val(prec, c - b);
        let zz = Complex::with_val(prec, -&pf);
        let f = series_auto(a, &cb, c, &zz, bits)?;
        let pw = Complex::with_val(prec, one_m.ln_ref()) * a;
        return Ok(f * Complex::with_val(prec, -pw).exp());
    }
    if om_abs <= 0.7 {
        let s = Complex::with_val(prec, c - a) - b;
        if near_integer(&s, bits) {
            // symmetric perturbation in a: error is O(eps^2)
            let eps_bits = bits / 2 + 16;
            let wide = bits + eps_bits + 64;
            let eps = Float::with_val(wide, Float::i_exp(1, -(eps_bits as i32)));
            let ap = Complex::with_val(wide, a + &eps);
            let am = Complex::with_val(wide, a - &eps);
            let fp = one_minus_z(&ap, b, c, z, wide)?;
            let fm = one_minus_z(&am, b, c, z, wide)?;
            return Ok(Complex::with_val(bits, (fp + fm) / 2u32));
        }
        return one_minus_z(a, b, c, z, bits);
    }
    series_auto(a, b, c, z, bits)
}

/// F(a,b;c;z) at the policy's precision; fails if the series cancellation is larger than
/// the policy's digits can carry.
pub fn hyp2f1(a: &Complex, b: &Complex, c: &Complex, z: &Complex, policy: &PrecisionPolicy) -> Result<Complex> {
    if z.clone().abs().real().to_f64() >= 1.0 {
        return Err(Error::Domain { func: "hyp2f1", detail: "needs |z| < 1".into() });
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Pole { func: "hyp2f1", at: format!("c = {}", c.real().to_f64()) });
    }
    let prec = policy.bits();
    let rel_bits = (-policy.target_rel_tol.log2()).ceil() as u32;
    let zabs = z.clone().abs().real().to_f64();
    if zabs <= 0.7 {
        let (sum, peak) = series(a, b, c, z, prec, -(rel_bits as f64))?;
        let loss = (peak - log2_abs_c(&sum)).max(0.0);
        if (prec as f64) - loss < rel_bits as f64 {
            return Err(Error::Precision {
                func: "hyp2f1",
                detail: format!("series loses {loss:.0} of {prec} bits; {rel_bits} needed"),
            });
        }
        return Ok(sum);
    }
    hyp2f1_bits(a, b, c, z, rel_bits.max(prec - 32))
}

/// F(a,b;c;z)/Γ(c), finite for every c.
pub(crate) fn hyp2f1_reg_bits(a: &Complex, b: &Complex, c: &Complex, z: &Complex, bits: u32) -> Result<Complex> {
    let prec = bits + 32;
    if !is_nonpositive_integer(c) {
        let f = hyp2f1_bits(a, b, c, z, bits)?;
        return Ok(f * rgamma_c(c, prec));
    }
    // c = -m: (a)_{m+1}(b)_{m+1}/(m+1)! z^{m+1} F(a+m+1, b+m+1; m+2; z)
    let m = (-c.real().to_f64()).round() as u32;
    let mut coef = Complex::with_val(prec, 1);
    for j in 0..=m {
        coef *= Complex::with_val(prec, a + j) * Complex::with_val(prec, b + j);
        coef /= j + 1;
    }
    coef *= Complex::with_val(prec, rug::ops::Pow::pow(z, m + 1));
    let a2 = Complex::with_val(prec, a + (m + 1));
    let b2 = Complex::with_val(prec, b + (m + 1));
    let c2 = Complex::with_val(prec, m + 2);
    Ok(coef * hyp2f1_bits(&a2, &b2, &c2, z, bits)? * rgamma_c(&c2, prec))
}

/// Ferrers P^μ_ν(x) = ((1+x)/(1-x))^{μ/2} F̃(-ν, ν+1; 1-μ; (1-x)/2) on (-1, 1).
pub(crate) fn legendre_p_bits(mu: &Float, nu: &Float, x: &Float, bits: u32) -> Result<Float> {
    if *x <= -1 || *x >= 1 {
        return Err(Error::Domain { func: "legendre_p", detail: format!("x = {} outside (-1, 1)", x.to_f64()) });
    }
    let prec = bits + 32;
    let a = Complex::with_val(prec, -nu);
    let b = Complex::with_val(prec, nu + 1u32);
    let c = Complex::with_val(prec, 1 - Float::with_val(prec, mu));
    let z = Complex::with_val(prec, (Float::with_val(prec, 1 - x) / 2u32, 0));
    let f = hyp2f1_reg_bits(&a, &b, &c, &z, bits)?;
    let ratio = Float::with_val(prec, 1 + x) / Float::with_val(prec, 1 - x);
    let pw = Float::with_val(prec, ratio.ln() * mu) / 2u32;
    Ok(Float::with_val(bits, f.real() * pw.exp()))
}

pub fn legendre_p(mu: &Float, nu: &Float, x: &Float, policy: &PrecisionPolicy) -> Result<Float> {
    legendre_p_bits(mu, nu, x, policy.bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use crate::mp::{pi, rel_err_c};

    const B: u32 = 160;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(B, (re, im))
    }

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::new(40, 1e-30, 1e-30).unwrap()
    }

    #[test]
    fn trivial_values() {
        let p = pol();
        let v = hyp2f1(&c(2.5, 1.0), &c(-3.2, 0.0), &c(0.7, 0.0), &c(0.0, 0.0), &p).unwrap();
        assert_eq!(v, Complex::with_val(B, 1));
        // F(1,1;2;z) = -ln(1-z)/z
        let z = c(0.25, 0.0);
        let got = hyp2f1(&c(1.0, 0.0), &c(1.0, 0.0), &c(2.0, 0.0), &z, &p).unwrap();
        let want = Complex::with_val(B, 1 - &z).ln() / &z * -1i32;
        assert!(rel_err_c(&got, &want) < 1e-25);
        // F(a,b;b;z) = (1-z)^{-a}
        let z = c(-1.0 / 3.0, 0.0);
        let got = hyp2f1(&c(2.5, 0.0), &c(7.0, 0.0), &c(7.0, 0.0), &z, &p).unwrap();
        let want = Complex::with_val(B, 1 - &z).pow(&c(-2.5, 0.0));
        assert!(rel_err_c(&got, &want) < 1e-25);
    }

    #[test]
    fn pfaff_grid() {
        let p = pol();
        for (a, b, cc, z) in [
            (c(0.3, 0.2), c(1.7, 0.0), c(2.2, -0.4), c(-0.5, 0.1)),
            (c(3.0, 1.0), c(0.5, 0.0), c(4.5, 0.0), c(0.3, 0.3)),
            (c(-2.5, 0.0), c(1.25, 0.5), c(0.75, 0.0), c(0.6, -0.2)),
        ] {
            let lhs = hyp2f1(&a, &b, &cc, &z, &p).unwrap();
            let zz = Complex::with_val(B, &z / Complex::with_val(B, &z - 1u32));
            let cb = Complex::with_val(B, &cc - &b);
            let pw = Complex::with_val(B, 1 - &z).pow(&Complex::with_val(B, -&a));
            let rhs = hyp2f1_bits(&a, &cb, &cc, &zz, 120).unwrap() * pw;
            assert!(rel_err_c(&lhs, &rhs) < 1e-20);
        }
    }

    #[test]
    fn near_one_and_degenerate() {
        // F(a,b;c;1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b)) as z -> 1 with Re(c-a-b) > 0
        let a = c(0.3, 0.0);
        let b = c(0.4, 0.0);
        let cc = c(2.1, 0.0);
        let z = c(1.0 - 1e-12, 0.0);
        let got = hyp2f1_bits(&a, &b, &cc, &z, 120).unwrap();
        let g = |x: f64| Float::with_val(B, x).gamma();
        let want = g(2.1) * g(1.4) / (g(1.8) * g(1.7));
        assert!((got.real().to_f64() - want.to_f64()).abs() < 1e-10);
        // c - a - b = 1 exactly: continuity against a nearby non-degenerate value
        let a = c(0.25, 0.0);
        let b = c(0.75, 0.0);
        let cc = c(2.0, 0.0);
        let z = c(0.95, 0.0);
        let deg = hyp2f1_bits(&a, &b, &cc, &z, 120).unwrap();
        let direct = series_auto(&a, &b, &cc, &z, 120).unwrap();
        assert!(rel_err_c(&deg, &direct) < 1e-30);
    }

    #[test]
    fn precision_failure_is_typed() {
        let p = PrecisionPolicy::new(30, 1e-25, 1e-25).unwrap();
        let a = c(200.0, 0.0);
        let e = hyp2f1(&a, &a, &c(0.5, 0.0), &c(-1.0 / 3.0, 0.0), &p).unwrap_err();
        assert!(matches!(e, Error::Precision { .. }));
        // with automatic escalation the same value is reachable
        assert!(hyp2f1_bits(&a, &a, &c(0.5, 0.0), &c(-1.0 / 3.0, 0.0), 100).is_ok());
    }

    #[test]
    fn legendre_polynomials() {
        let p = pol();
        let zero = Float::new(B);
        let half = Float::with_val(B, 0.5);
        let p1 = legendre_p(&zero, &Float::with_val(B, 1), &half, &p).unwrap();
        assert!((p1.to_f64() - 0.5).abs() < 1e-30);
        let p2 = legendre_p(&zero, &Float::with_val(B, 2), &half, &p).unwrap();
        assert!((p2.to_f64() + 0.125).abs() < 1e-30);
        // P^1_1(x) = -(1-x^2)^{1/2} in the Ferrers convention
        let p11 = legendre_p(&Float::with_val(B, 1), &Float::with_val(B, 1), &half, &p).unwrap();
        assert!((p11.to_f64() + 0.75f64.sqrt()).abs() < 1e-25);
        assert!(legendre_p(&zero, &zero, &Float::with_val(B, 1), &p).is_err());
    }

    #[test]
    fn mos_combination_identity() {
        // F(a,b;1/2;-x) = 2^{a-b-1}/√π Γ(a+1/2)Γ(1-b)(1+x)^{-(a+b)/2}
        //   × [P^{b-a}_{a+b-1}(√(x/(1+x))) + P^{b-a}_{a+b-1}(-√(x/(1+x)))]
        let k = 24.0;
        let a = Float::with_val(B, (k - 0.5) / 2.0);
        let x = Float::with_val(B, 1) / 3u32;
        let lhs = hyp2f1_bits(&Complex::with_val(B, &a), &Complex::with_val(B, &a), &c(0.5, 0.0), &Complex::with_val(B, -&x), 120).unwrap();
        let arg = Float::with_val(B, &x / Float::with_val(B, 1 + &x)).sqrt();
        let deg = Float::with_val(B, &a * 2u32) - 1u32;
        let mu = Float::new(B);
        let pp = legendre_p_bits(&mu, &deg, &arg, 120).unwrap();
        let pm = legendre_p_bits(&mu, &deg, &Float::with_val(B, -&arg), 120).unwrap();
        let g1 = Float::with_val(B, &a + 0.5).gamma();
        let g2 = Float::with_val(B, 1 - &a).gamma();
        let scale = Float::with_val(B, 1 + &x).pow(Float::with_val(B, -&a));
        let rhs = Float::with_val(B, 0.5) / pi(B).sqrt() * g1 * g2 * scale * (pp + pm);
        let rel = ((lhs.real().to_f64() - rhs.to_f64()) / rhs.to_f64()).abs();
        assert!(rel < 1e-15, "rel = {rel}");
    }
}
