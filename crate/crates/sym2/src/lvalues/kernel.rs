//! The weight V_k(y) = (1/2πi)∫_{(σ)} y^{-u} H(u) R(u) ζ(1+2u)/ζ(1/2+u) du with H(u) = e^{-u^4}/u.

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lvalues::mellin::MellinKernel;
use crate::mp::{ln_gamma_f64, pi, zeta_f64};
use crate::precision::PrecisionPolicy;
use crate::specfun::contour::ContourSpec;
use crate::specfun::gamma::ln_gamma_c;
use crate::specfun::zeta::riemann_c;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AfeKernelSpec {
    pub contour: ContourSpec,
    /// 0 selects the smallest certified cutoff.
    pub n_cutoff: u64,
    /// Certified bound on the discarded tail; NaN until a sum has been formed.
    pub tail_estimate: f64,
}

impl AfeKernelSpec {
    pub fn new(sigma: f64, n_cutoff: u64) -> Result<Self> {
        if !(sigma > 0.5 && sigma <= 3.0) {
            return Err(Error::ContourOutOfRange { sigma, lo: 0.5, hi: 3.0 });
        }
        Ok(AfeKernelSpec { contour: ContourSpec::new(sigma, 1.0, 8)?, n_cutoff, tail_estimate: f64::NAN })
    }

    pub fn sigma(&self) -> f64 {
        self.contour.sigma
    }
}

impl Default for AfeKernelSpec {
    fn default() -> Self {
        AfeKernelSpec::new(1.0, 0).expect("default abscissa is admissible")
    }
}

fn ln_pi_32_times_two(prec: u32) -> Float {
    // ln(2π^{3/2})
    let lp = pi(prec).ln();
    Float::with_val(prec, &lp * 3u32) / 2u32 + Float::with_val(prec, 2u32).ln()
}

/// Γ((k-1/2+u)/2)Γ((k+1/2+u)/2)Γ(3/4+u/2) normalized to 1 at u = 0.
pub fn gamma_ratio_three(u: &Complex, k: u32, prec: u32) -> Complex {
    let wp = prec + 32;
    let kf = Float::with_val(wp, k);
    let a0 = Float::with_val(wp, &kf - 0.5f64) / 2u32;
    let b0 = Float::with_val(wp, &kf + 0.5f64) / 2u32;
    let c0 = Float::with_val(wp, 0.75f64);
    let half_u = Complex::with_val(wp, u / 2u32);
    let mut ln = Complex::with_val(wp, 0);
    for x in [a0, b0, c0] {
        let shifted = Complex::with_val(wp, &half_u + &x);
        ln += ln_gamma_c(&shifted, wp);
        ln -= ln_gamma_c(&Complex::with_val(wp, &x), wp);
    }
    Complex::with_val(prec, ln.exp())
}

/// Γ(k-1/2+u)Γ(3/4+u/2) normalized to 1 at u = 0.
pub fn gamma_ratio_two(u: &Complex, k: u32, prec: u32) -> Complex {
    Complex::with_val(prec, ln_gamma_ratio_two(u, k, prec + 32).exp())
}

fn ln_gamma_ratio_two(u: &Complex, k: u32, wp: u32) -> Complex {
    let a0 = Float::with_val(wp, k) - 0.5f64;
    let c0 = Float::with_val(wp, 0.75f64);
    let mut ln = ln_gamma_c(&Complex::with_val(wp, u + &a0), wp);
    ln -= ln_gamma_c(&Complex::with_val(wp, &a0), wp);
    ln += ln_gamma_c(&Complex::with_val(wp, Complex::with_val(wp, u / 2u32) + &c0), wp);
    ln -= ln_gamma_c(&Complex::with_val(wp, &c0), wp);
    ln
}

/// The full integrand y^{-u}-coefficient H(u) R(u) ζ(1+2u)/ζ(1/2+u).
pub(crate) fn weight_integrand(u: &Complex, k: u32, prec: u32) -> Complex {
    let wp = prec + 32;
    let u4 = Complex::with_val(wp, u.square_ref()).square();
    let mut ln = ln_gamma_ratio_two(u, k, wp);
    ln -= u4;
    ln -= Complex::with_val(wp, u * ln_pi_32_times_two(wp));
    let two_u_plus_one = Complex::with_val(wp, Complex::with_val(wp, u * 2u32) + 1u32);
    let half_plus_u = Complex::with_val(wp, u + 0.5f64);
    let ratio = riemann_c(&two_u_plus_one, wp) / riemann_c(&half_plus_u, wp);
    let v = Complex::with_val(wp, ln.exp()) * ratio / u;
    Complex::with_val(prec, v)
}

/// ln of |Γ-ratio| bound on Re u = c: Γ(k-1/2+c)Γ(3/4+c/2)/(Γ(k-1/2)Γ(3/4)) (2π^{3/2})^{-c}.
fn ln_gamma_envelope(k: u32, c: f64) -> f64 {
    let kf = k as f64;
    ln_gamma_f64(kf - 0.5 + c) - ln_gamma_f64(kf - 0.5) + ln_gamma_f64(0.75 + c / 2.0) - ln_gamma_f64(0.75)
        - c * (2.0 * std::f64::consts::PI.powf(1.5)).ln()
}

/// Bound on (1/2π)∫_{|t|>T} |integrand(σ+it)| y^{-σ} dt for y ≥ 1, from |Γ(x+it)| ≤ Γ(x),
/// |ζ(1+2u)/ζ(1/2+u)| ≤ ζ(1/2+σ) and ∫_T^∞ e^{-φ}/t ≤ e^{-φ(T)}/(T φ'(T)), φ = t⁴ - 6σ²t² + σ⁴.
pub fn line_tail_bound(k: u32, sigma: f64, height: f64) -> f64 {
    let t = height;
    let dphi = 4.0 * t.powi(3) - 12.0 * sigma * sigma * t;
    if t * t <= 3.0 * sigma * sigma || dphi <= 0.0 {
        return f64::INFINITY;
    }
    let phi = t.powi(4) - 6.0 * sigma * sigma * t * t + sigma.powi(4);
    let ln = ln_gamma_envelope(k, sigma) + zeta_f64(0.5 + sigma).ln() - phi - (t * dphi).ln();
    ln.exp() / std::f64::consts::PI
}

/// Bound B(c) ≥ sup_{y} y^{c} |V_k(y)|, by integrating |H(c+it)| in double precision.
fn shifted_envelope(k: u32, c: f64) -> f64 {
    let phi = |t: f64| t.powi(4) - 6.0 * c * c * t * t + c.powi(4);
    let g = |t: f64| (-phi(t)).exp() / (c * c + t * t).sqrt();
    // past t0 the integrand is monotone and the closed tail bound applies
    let t0 = (3.0f64).sqrt() * c + 2.0;
    let n = 4000;
    let h = t0 / n as f64;
    let mut s = g(0.0) + g(t0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(i as f64 * h);
    }
    let body = s * h / 3.0;
    let dphi = 4.0 * t0.powi(3) - 12.0 * c * c * t0;
    let tail = (-phi(t0)).exp() / (t0 * dphi);
    // Simpson error is far below the 1% inflation for this smooth integrand
    1.01 * (body + tail) / std::f64::consts::PI * (ln_gamma_envelope(k, c) + zeta_f64(0.5 + c).ln()).exp()
}

/// Certified bound on |2 Σ_{n > N} λ(n)² V_k(n)/√n| from |λ(n)| ≤ d(n) and
/// Σ_{n>N} d(n)² n^{-a} ≤ N^{s-a} ζ(s)⁴/ζ(2s), 1 < s < a.
pub fn afe_tail_bound(k: u32, n_cutoff: u64) -> f64 {
    let ln_n = (n_cutoff.max(1) as f64).ln();
    let mut best = f64::INFINITY;
    for ci in 1..=120 {
        let c = 0.5 + 0.1 * ci as f64;
        let a = 0.5 + c;
        if a <= 1.0 {
            continue;
        }
        let env = shifted_envelope(k, c);
        for si in 1..=9 {
            let s = 1.0 + (a - 1.0) * si as f64 / 10.0;
            let ln = env.ln() + (s - a) * ln_n + 4.0 * zeta_f64(s).ln() - zeta_f64(2.0 * s).ln();
            best = best.min(2.0 * ln.exp());
        }
    }
    best
}

/// V_k tabulated on one contour for repeated evaluation at y ≤ y_max.
pub struct WeightKernel {
    k: u32,
    mellin: MellinKernel,
    prec: u32,
}

impl WeightKernel {
    pub fn new(k: u32, spec: &AfeKernelSpec, y_max: f64, policy: &PrecisionPolicy) -> Result<Self> {
        let sigma = spec.sigma();
        spec.contour.check_strip(0.5, 3.0 + 1e-12)?;
        let tol = policy.target_abs_tol;
        // |e^{-u⁴}| reaches e^{8σ⁴} on the line; carry enough bits to absorb the cancellation
        let prec = policy.bits() + 32 + (8.0 * sigma.powi(4) * std::f64::consts::LOG2_E).ceil() as u32;
        // height from the certified tail, which also covers y < 1 through the y^{-σ} factor
        let scale = if y_max < 1.0 { y_max.powf(-sigma) } else { 1.0 };
        let mut height = (3.0f64).sqrt() * sigma + 0.5;
        while line_tail_bound(k, sigma, height) * scale >= tol / 8.0 {
            height += 0.25;
        }
        let h = |u: &Complex| weight_integrand(u, k, prec);
        // the phase of e^{-u⁴} turns at rate up to 12σt² along the line
        let min_panels = (4.0 * sigma * height.powi(3) / 20.0).ceil() as usize;
        let mellin = MellinKernel::converged(&h, sigma, height, y_max, tol / 2.0, prec, min_panels)?;
        Ok(WeightKernel { k, mellin, prec })
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn eval(&self, y: &Float) -> Float {
        let ln_y = Float::with_val(self.prec, y.ln_ref());
        self.mellin.eval(&ln_y)
    }
}

/// V_k(y) on Re u = σ.
pub fn v_kernel(y: f64, k: u32, spec: &AfeKernelSpec, policy: &PrecisionPolicy) -> Result<Float> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain { func: "v_kernel", detail: format!("y = {y}") });
    }
    let kern = WeightKernel::new(k, spec, y, policy)?;
    Ok(Float::with_val(policy.bits(), kern.eval(&Float::with_val(policy.bits(), y))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::new(40, 1e-22, 1e-22).unwrap()
    }

    #[test]
    fn gamma_ratio_duplication() {
        let prec = 128;
        let u = Complex::with_val(prec, (1, 1));
        let k = 16;
        let three = gamma_ratio_three(&u, k, prec);
        let two = gamma_ratio_two(&u, k, prec);
        let p = pi(prec);
        // π^{-3u/2} R_three = (2π^{3/2})^{-u} R_two
        let lhs = Complex::with_val(prec, Complex::with_val(prec, Complex::with_val(prec, -&u) * Float::with_val(prec, p.ln_ref()) * 1.5f64).exp() * three);
        let rhs = Complex::with_val(prec, Complex::with_val(prec, Complex::with_val(prec, -&u) * ln_pi_32_times_two(prec)).exp() * two);
        let err = Complex::with_val(prec, &lhs - &rhs).abs().real().to_f64();
        assert!(err < 1e-25, "err = {err:e}");
    }

    #[test]
    fn abscissa_independence() {
        let p = pol();
        let a = v_kernel(3.0, 20, &AfeKernelSpec::new(1.0, 0).unwrap(), &p).unwrap();
        let b = v_kernel(3.0, 20, &AfeKernelSpec::new(2.0, 0).unwrap(), &p).unwrap();
        let c = v_kernel(3.0, 20, &AfeKernelSpec::new(1.5, 0).unwrap(), &p).unwrap();
        assert!(Float::with_val(p.bits(), &a - &b).abs().to_f64() < 1e-18);
        assert!(Float::with_val(p.bits(), &a - &c).abs().to_f64() < 1e-18);
    }

    #[test]
    fn matches_reference_quadrature() {
        // independent mpmath quadrature of the same integral on Re u = 1
        let want = [
            (1e-3, -1.841_657_423_754_320_8),
            (1.0, 0.197_803_077_838_651_23),
            (10.0, 0.071_254_318_410_171_3),
            (1e6, 0.000_028_460_321_063_318_8),
        ];
        let p = pol();
        for (y, v) in want {
            let got = v_kernel(y, 20, &AfeKernelSpec::default(), &p).unwrap().to_f64();
            assert!((got - v).abs() < 1e-15, "y = {y}: {got} vs {v}");
        }
    }

    #[test]
    fn abscissa_outside_strip_is_rejected() {
        assert!(AfeKernelSpec::new(0.5, 0).is_err());
        assert!(AfeKernelSpec::new(3.5, 0).is_err());
        assert!(AfeKernelSpec::new(3.0, 0).is_ok());
    }

    #[test]
    fn tail_bounds_are_monotone() {
        assert!(line_tail_bound(20, 1.0, 5.0) < line_tail_bound(20, 1.0, 4.0));
        assert!(afe_tail_bound(20, 10_000) < afe_tail_bound(20, 100));
    }
}
