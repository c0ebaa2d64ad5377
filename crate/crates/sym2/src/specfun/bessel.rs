use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::log2_abs;
use crate::precision::PrecisionPolicy;
use crate::specfun::contour::{bent_integral, Bend, ContourSpec};
use crate::specfun::gamma::{ln_gamma_r, rgamma_c, gamma_c};

const MAX_GUARD_BITS: u32 = 1 << 16;

/// J_ν(x) by the ascending series; `abs_log2` is the target absolute error as a power of 2.
/// Precision is raised to cover the largest term, which for x ≫ ν is about e^x.
pub fn bessel_j_series(nu: &Float, x: &Float, abs_log2: f64, prec: u32) -> Result<Float> {
    if *x <= 0 || *nu < 0 {
        return Err(Error::Domain { func: "bessel_j", detail: format!("needs nu >= 0, x > 0 (nu = {}, x = {})", nu.to_f64(), x.to_f64()) });
    }
    // log2 of the largest term: (2m+ν)ln(x/2) - lnΓ(m+1) - lnΓ(m+ν+1) peaks near m = x/2
    let xf = x.to_f64();
    let nf = nu.to_f64();
    let ln_half = (xf / 2.0).ln();
    let mut peak = f64::NEG_INFINITY;
    let m_peak = (xf / 2.0).ceil() as u64 + 1;
    for m in [0u64, m_peak.saturating_sub(1), m_peak] {
        let mm = m as f64;
        let lt = (2.0 * mm + nf) * ln_half - ln_gamma_f64(mm + 1.0) - ln_gamma_f64(mm + nf + 1.0);
        peak = peak.max(lt / std::f64::consts::LN_2);
    }
    let guard = (peak - abs_log2).max(0.0).ceil() as u32 + 32;
    if guard > MAX_GUARD_BITS {
        return Err(Error::Precision { func: "bessel_j", detail: format!("series needs {guard} bits") });
    }
    let wp = prec.max(guard);
    let half = Float::with_val(wp, x) / 2u32;
    let q = Float::with_val(wp, half.square_ref());
    let nu_w = Float::with_val(wp, nu);
    let lt0 = Float::with_val(wp, &nu_w * Float::with_val(wp, half.ln_ref())) - ln_gamma_r(&Float::with_val(wp, &nu_w + 1u32), wp);
    let mut term = lt0.exp();
    let mut sum = term.clone();
    let stop = abs_log2 - 8.0;
    let mut m = 0u64;
    loop {
        m += 1;
        let den = Float::with_val(wp, &nu_w + m) * m;
        term *= &q;
        term /= den;
        term = -term;
        sum += &term;
        if m as f64 > xf && (term.is_zero() || log2_abs(&term) < stop) {
            break;
        }
        if m > 1_000_000 {
            return Err(Error::NonConvergence("bessel_j series".into()));
        }
    }
    Ok(Float::with_val(prec, &sum))
}

fn ln_gamma_f64(x: f64) -> f64 {
    // Stirling with shift; adequate for guard-bit estimates
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= x.ln();
        x += 1.0;
    }
    acc + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
}

pub fn bessel_j(nu: &Float, x: &Float, policy: &PrecisionPolicy) -> Result<Float> {
    bessel_j_series(nu, x, policy.abs_log2(), policy.bits())
}

/// J_ν(x) = (1/2πi)∫_(σ) x^{-s-1} 2^s Γ((ν+1+s)/2)/Γ((ν+1-s)/2) ds with -1-ν < σ < 0.
/// The integrand only decays like |Im s|^σ on the line, so the parts beyond ±height are
/// swung left where the Gamma ratio collapses factorially.
pub fn bessel_j_mb(nu: &Float, x: &Float, spec: &ContourSpec, policy: &PrecisionPolicy) -> Result<Float> {
    let nf = nu.to_f64();
    spec.check_strip(-1.0 - nf, 0.0)?;
    if *x <= 0 {
        return Err(Error::Domain { func: "bessel_j_mb", detail: "x must be positive".into() });
    }
    let prec = policy.bits();
    let lnx = Float::with_val(prec, x.ln_ref());
    let ln2 = Float::with_val(prec, rug::float::Constant::Log2);
    let nu1 = Float::with_val(prec, nu + 1u32);
    let f = |s: &Complex| {
        let up = Complex::with_val(prec, &nu1 + s) / 2u32;
        let dn = Complex::with_val(prec, &nu1 - s) / 2u32;
        let ex = Complex::with_val(prec, s * &ln2) - Complex::with_val(prec, s + 1u32) * &lnx;
        gamma_c(&up, prec) * rgamma_c(&dn, prec) * ex.exp()
    };
    let out = bent_integral(f, spec.sigma, spec.height, Bend::Left, 4000.0, policy)?;
    let imag_log2 = log2_abs(out.imag());
    if imag_log2 > policy.abs_log2() + 8.0 {
        return Err(Error::Precision { func: "bessel_j_mb", detail: format!("imaginary residue 2^{imag_log2:.1}") });
    }
    Ok(out.real().clone())
}
