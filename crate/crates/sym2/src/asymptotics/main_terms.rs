//! M₁ + M₋₄ + M₋₃ for Σ_f w_f L(1/2, sym²f), plus the pieces used to cross-check them.

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lvalues::kernel::gamma_ratio_two;
use crate::mp::{euler_gamma, i_pow_even, ln2, pi};
use crate::precision::PrecisionPolicy;
use crate::specfun::dirichlet::{completed_l_c, dirichlet_l_c, DirichletCharacter};
use crate::specfun::gamma::{digamma_r, gamma_r, gamma_ratio_r};
use crate::specfun::hypergeometric::{hyp2f1, legendre_p_bits};
use crate::specfun::zeta::riemann_c;

fn require_even(k: u32, min: u32) -> Result<()> {
    if !k.is_multiple_of(2) || k < min {
        return Err(Error::Range(format!("weight must be even and at least {min}, got {k}")));
    }
    Ok(())
}

/// ln(2π^{3/2}).
fn ln_two_pi_32(prec: u32) -> Float {
    let lp = pi(prec).ln();
    Float::with_val(prec, &lp * 3u32) / 2u32 + ln2(prec)
}

/// 2γ + ψ(3/4)/2 − ln(2π^{3/2}) through the digamma routine.
pub fn m1_constant(policy: &PrecisionPolicy) -> Float {
    let prec = policy.bits() + 16;
    let psi = digamma_r(&Float::with_val(prec, 0.75f64), prec);
    let c = Float::with_val(prec, euler_gamma(prec) * 2u32) + Float::with_val(prec, psi / 2u32) - ln_two_pi_32(prec);
    Float::with_val(policy.bits(), c)
}

/// The same constant with ψ(3/4) = −γ − 3 ln 2 + π/2.
pub fn m1_constant_reflection(policy: &PrecisionPolicy) -> Float {
    let prec = policy.bits() + 16;
    let g = euler_gamma(prec);
    let psi = Float::with_val(prec, -&g) - Float::with_val(prec, ln2(prec) * 3u32) + Float::with_val(prec, pi(prec) / 2u32);
    let c = Float::with_val(prec, g * 2u32) + Float::with_val(prec, psi / 2u32) - ln_two_pi_32(prec);
    Float::with_val(policy.bits(), c)
}

pub fn m1(k: u32, policy: &PrecisionPolicy) -> Result<Float> {
    require_even(k, 12)?;
    let prec = policy.bits() + 16;
    let psi = digamma_r(&(Float::with_val(prec, k) - 0.5f64), prec);
    Ok(Float::with_val(policy.bits(), psi + m1_constant(&policy.escalated(policy.working_digits + 5))))
}

/// 2 d/du [u² H(u) (2π^{3/2})^{-u} R_b(u) ζ(1+2u)] at u = 0, by a central difference of step h.
pub fn diagonal_residue(k: u32, h: f64, policy: &PrecisionPolicy) -> Result<Float> {
    require_even(k, 12)?;
    if !(h > 0.0 && h < 0.1) {
        return Err(Error::Range(format!("difference step {h} outside (0, 0.1)")));
    }
    // the difference quotient loses log2(1/h) bits
    let prec = policy.bits() + 32 + (-h.log2()).ceil() as u32;
    let ln_c = ln_two_pi_32(prec);
    let g = |u: f64| -> Float {
        let uf = Float::with_val(prec, u);
        let uc = Complex::with_val(prec, (&uf, 0));
        let damp = Float::with_val(prec, Float::with_val(prec, uf.square_ref()).square() + Float::with_val(prec, &uf * &ln_c));
        let zeta = riemann_c(&Complex::with_val(prec, Complex::with_val(prec, &uc * 2u32) + 1u32), prec);
        let rb = gamma_ratio_two(&uc, k, prec);
        let v = Complex::with_val(prec, zeta * rb) * Float::with_val(prec, (-damp).exp() * &uf);
        v.real().clone()
    };
    let d = Float::with_val(prec, g(h) - g(-h)) / Float::with_val(prec, h);
    Ok(Float::with_val(policy.bits(), d))
}

fn half_shift_ratio(k: u32, prec: u32) -> Float {
    // Γ((k−1/2)/2)/Γ((k+1/2)/2)
    let kf = Float::with_val(prec, k);
    let a = Float::with_val(prec, &kf - 0.5f64) / 2u32;
    let b = Float::with_val(prec, &kf + 0.5f64) / 2u32;
    gamma_ratio_r(&a, &b, prec)
}

fn central_l(chi: &DirichletCharacter, prec: u32) -> Float {
    let half = Complex::with_val(prec, (0.5f64, 0));
    dirichlet_l_c(&half, chi, prec).real().clone()
}

pub fn m_minus4(k: u32, policy: &PrecisionPolicy) -> Result<Float> {
    require_even(k, 2)?;
    let prec = policy.bits() + 16;
    let root = Float::with_val(prec, pi(prec) / 2u32).sqrt();
    let l4 = central_l(&DirichletCharacter::chi_minus4(), prec);
    let v = root * l4 * half_shift_ratio(k, prec) * i_pow_even(k);
    Ok(Float::with_val(policy.bits(), v))
}

/// i^{-k} π^{5/4}/(2Γ(3/4)) · res_{u=0} H(u) Γ-ratios Λ(1/2+u, χ₋₄), the residue taken by the
/// trapezoid rule on |u| = 1/2.
pub fn m_minus4_residue_form(k: u32, policy: &PrecisionPolicy) -> Result<Float> {
    require_even(k, 2)?;
    let prec = policy.bits() + 32;
    let chi = DirichletCharacter::chi_minus4();
    let kf = Float::with_val(prec, k);
    let a0 = Float::with_val(prec, &kf - 0.5f64) / 2u32;
    let b0 = Float::with_val(prec, &kf + 0.5f64) / 2u32;
    let ln_a0 = crate::specfun::gamma::ln_gamma_r(&a0, prec);
    let ln_b0 = crate::specfun::gamma::ln_gamma_r(&b0, prec);
    let n = 96u32;
    let two_pi = pi(prec) * 2u32;
    let mut acc = Complex::with_val(prec, 0);
    for j in 0..n {
        let theta = Float::with_val(prec, &two_pi * j) / n;
        let (s, c) = theta.sin_cos(Float::new(prec));
        let u = Complex::with_val(prec, (c / 2u32, s / 2u32));
        let half_u = Complex::with_val(prec, &u / 2u32);
        let mut ln = crate::specfun::gamma::ln_gamma_c(&Complex::with_val(prec, &a0 + &half_u), prec);
        ln += crate::specfun::gamma::ln_gamma_c(&Complex::with_val(prec, &a0 - &half_u), prec);
        ln -= &ln_a0;
        ln -= &ln_b0;
        ln -= Complex::with_val(prec, u.square_ref()).square();
        let lam = completed_l_c(&Complex::with_val(prec, &u + 0.5f64), &chi, prec);
        // H(u) u = e^{-u⁴}, and du/(2πi) = u dθ/2π
        acc += ln.exp() * lam;
    }
    let res = Float::with_val(prec, acc.real() / n);
    let pi_54 = Float::with_val(prec, pi(prec).ln() * 1.25f64).exp();
    let g34 = gamma_r(&Float::with_val(prec, 0.75f64), prec);
    let v = pi_54 / g34 / 2u32 * res * i_pow_even(k);
    // the odd integrand makes the (3)-line integral half the residue
    Ok(Float::with_val(policy.bits(), v / 2u32))
}

/// Digits used for the hypergeometric factor of M₋₃.
pub fn minus3_digits(k: u32, policy: &PrecisionPolicy) -> u32 {
    policy.working_digits.max((0.4 * k as f64).ceil() as u32 + 30)
}

/// (2/√3)^{k−1/2} F((k−1/2)/2, (k−1/2)/2; 1/2; −1/3).
fn scaled_hypergeometric(k: u32, policy: &PrecisionPolicy) -> Result<Float> {
    let p = policy.escalated(minus3_digits(k, policy));
    let prec = p.bits();
    let a = Float::with_val(prec, Float::with_val(prec, k) - 0.5f64) / 2u32;
    let ac = Complex::with_val(prec, (&a, 0));
    let c = Complex::with_val(prec, (0.5f64, 0));
    let z = Complex::with_val(prec, (Float::with_val(prec, -1) / 3u32, 0));
    let f = hyp2f1(&ac, &ac, &c, &z, &p)?;
    let scale = Float::with_val(prec, Float::with_val(prec, Float::with_val(prec, 4) / 3u32).ln() * &a).exp();
    Ok(Float::with_val(prec, f.real() * scale))
}

pub fn m_minus3(k: u32, policy: &PrecisionPolicy) -> Result<Float> {
    require_even(k, 2)?;
    let f = scaled_hypergeometric(k, policy)?;
    let prec = f.prec();
    let root = Float::with_val(prec, pi(prec) * 2u32).sqrt();
    let l3 = central_l(&DirichletCharacter::chi_minus3(), prec);
    let v = root * l3 * f * half_shift_ratio(k, prec) * i_pow_even(k);
    Ok(Float::with_val(policy.bits(), v))
}

/// S(k) ∈ {−1, 0, 1} for k ≡ 2, 4, 0 (mod 6).
pub fn s_sign(k: u32) -> i32 {
    match k % 6 {
        0 => 1,
        2 => -1,
        _ => 0,
    }
}

pub fn m_minus3_prime(k: u32, policy: &PrecisionPolicy) -> Result<Float> {
    require_even(k, 2)?;
    let prec = policy.bits() + 16;
    let s = s_sign(k);
    if s == 0 {
        return Ok(Float::new(policy.bits()));
    }
    let q = Float::with_val(prec, Float::with_val(prec, 3).ln() / 4u32).exp();
    let root = Float::with_val(prec, pi(prec) * 2u32).sqrt();
    let l3 = central_l(&DirichletCharacter::chi_minus3(), prec);
    let ratio = gamma_ratio_r(&(Float::with_val(prec, k) - 0.5f64), &Float::with_val(prec, k), prec);
    Ok(Float::with_val(policy.bits(), q * root * l3 * ratio * s))
}

/// cos(kπ/3 − 7π/12) + cos(2kπ/3 − 11π/12).
pub fn c_cosines(k: u32, prec: u32) -> Float {
    let wp = prec + 16;
    let p = Float::with_val(wp, pi(wp) / 12u32);
    let a = Float::with_val(wp, &p * (4 * (k % 6) as i64 - 7));
    let b = Float::with_val(wp, &p * (8 * (k % 6) as i64 - 11));
    Float::with_val(prec, a.cos() + b.cos())
}

/// √(3/2)·{1, 0, −1} for k ≡ 2, 4, 0 (mod 6).
pub fn c_table(k: u32, prec: u32) -> Float {
    let r = Float::with_val(prec, Float::with_val(prec, 1.5f64).sqrt());
    r * -s_sign(k)
}

/// Both sides of the Legendre-function rewriting of (2/√3)^{k−1/2}F(·,·;1/2;−1/3):
/// (hypergeometric side, Γ(a+1/2)Γ(1−a)(P_{k−3/2}(1/2) + P_{k−3/2}(−1/2))/(2√π)).
pub fn legendre_bridge(k: u32, policy: &PrecisionPolicy) -> Result<(Float, Float)> {
    require_even(k, 2)?;
    let lhs = scaled_hypergeometric(k, policy)?;
    let prec = lhs.prec();
    let bits = prec - 32;
    let a = Float::with_val(prec, Float::with_val(prec, k) - 0.5f64) / 2u32;
    let nu = Float::with_val(prec, k) - 1.5f64;
    let zero = Float::new(prec);
    let half = Float::with_val(prec, 0.5f64);
    let p_plus = legendre_p_bits(&zero, &nu, &half, bits)?;
    let p_minus = legendre_p_bits(&zero, &nu, &Float::with_val(prec, -&half), bits)?;
    let g1 = gamma_r(&Float::with_val(prec, &a + 0.5f64), prec);
    let g2 = gamma_r(&Float::with_val(prec, 1 - Float::with_val(prec, &a)), prec);
    let rhs = g1 * g2 * Float::with_val(prec, p_plus + p_minus) / 2u32 / pi(prec).sqrt();
    Ok((lhs, Float::with_val(prec, rhs)))
}

#[derive(Clone, Debug)]
pub struct MainTerms {
    pub k: u32,
    pub m1: Float,
    pub m_minus4: Float,
    pub m_minus3: Float,
}

impl MainTerms {
    pub fn compute(k: u32, policy: &PrecisionPolicy) -> Result<Self> {
        Ok(MainTerms { k, m1: m1(k, policy)?, m_minus4: m_minus4(k, policy)?, m_minus3: m_minus3(k, policy)? })
    }

    pub fn sum(&self) -> Float {
        let prec = self.m1.prec();
        Float::with_val(prec, &self.m1 + &self.m_minus4) + &self.m_minus3
    }
}

pub fn moment_rhs(k: u32, policy: &PrecisionPolicy) -> Result<Float> {
    Ok(MainTerms::compute(k, policy)?.sum())
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub k: u32,
    pub lhs: Float,
    pub terms: MainTerms,
    pub residual: Float,
    pub runtime_seconds: f64,
    pub fingerprint: String,
}

impl MomentReport {
    pub fn new(lhs: Float, terms: MainTerms, runtime_seconds: f64, fingerprint: String) -> Self {
        let residual = Float::with_val(lhs.prec().max(terms.m1.prec()), &lhs - terms.sum());
        MomentReport { k: terms.k, lhs, terms, residual, runtime_seconds, fingerprint }
    }

    /// Residual with both secondary terms left out.
    pub fn residual_without_secondary(&self) -> Float {
        Float::with_val(self.residual.prec(), &self.lhs - &self.terms.m1)
    }

    pub fn summary(&self, digits: usize) -> MomentSummary {
        let s = |x: &Float| crate::mp::sci(x, digits);
        MomentSummary {
            k: self.k,
            lhs: s(&self.lhs),
            m1: s(&self.terms.m1),
            m_minus4: s(&self.terms.m_minus4),
            m_minus3: s(&self.terms.m_minus3),
            residual: s(&self.residual),
            runtime_seconds: self.runtime_seconds,
            fingerprint: self.fingerprint.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub k: u32,
    pub lhs: String,
    pub m1: String,
    pub m_minus4: String,
    pub m_minus3: String,
    pub residual: String,
    pub runtime_seconds: f64,
    pub fingerprint: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::rel_err;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::new(40, 1e-25, 1e-25).unwrap()
    }

    #[test]
    fn m1_constant_two_ways() {
        let p = pol();
        let d = Float::with_val(p.bits(), m1_constant(&p) - m1_constant_reflection(&p)).abs();
        assert!(d < 1e-25, "{d}");
    }

    #[test]
    fn m1_grows_like_log() {
        let p = pol();
        for k in [100u32, 150, 250] {
            let d = Float::with_val(p.bits(), m1(4 * k, &p).unwrap() - m1(k, &p).unwrap()).to_f64() - 4f64.ln();
            assert!(d.abs() <= 1.0 / k as f64, "k = {k}: {d:e}");
        }
        assert!(m1(13, &p).is_err());
        assert!(m1(10, &p).is_err());
    }

    #[test]
    fn m1_is_the_diagonal_residue() {
        let p = pol();
        for k in [12u32, 30, 60] {
            let a = m1(k, &p).unwrap();
            let b = diagonal_residue(k, 1e-8, &p).unwrap();
            assert!(Float::with_val(p.bits(), &a - &b).abs() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn m_minus4_sign_and_size() {
        let p = pol();
        for k in (12u32..=40).step_by(2) {
            let v = m_minus4(k, &p).unwrap();
            assert_eq!(v > 0, k % 4 == 0, "k = {k}");
        }
        let k = 4000u32;
        let v = m_minus4(k, &p).unwrap().to_f64().abs();
        let approx = (std::f64::consts::PI / 2.0).sqrt() * 0.667691 * 2f64.sqrt() / (k as f64).sqrt();
        assert!((v / approx - 1.0).abs() < 1e-3);
    }

    #[test]
    fn m_minus4_residue_route() {
        let p = pol();
        for k in [12u32, 14, 40] {
            let a = m_minus4(k, &p).unwrap();
            let b = m_minus4_residue_form(k, &p).unwrap();
            assert!(Float::with_val(p.bits(), &a - &b).abs() < 1e-22, "k = {k}: {} vs {}", a, b);
        }
    }

    #[test]
    fn m_minus3_signs_and_vanishing_class() {
        let p = pol();
        for k in (12u32..=60).step_by(2) {
            let v = m_minus3(k, &p).unwrap();
            match k % 6 {
                0 => assert!(v > 0, "k = {k}"),
                2 => assert!(v < 0, "k = {k}"),
                _ => {}
            }
        }
        let scaled: Vec<f64> =
            [16u32, 28, 40, 52].iter().map(|&k| m_minus3(k, &p).unwrap().to_f64().abs() * (k as f64).powf(1.5)).collect();
        assert!(scaled.iter().all(|s| *s < 10.0), "{scaled:?}");
    }

    #[test]
    fn simplified_m_minus3() {
        let p = pol();
        for k in (20u32..=80).step_by(2).filter(|k| k % 6 != 4) {
            let a = m_minus3(k, &p).unwrap();
            let b = m_minus3_prime(k, &p).unwrap();
            assert!(rel_err(&a, &b) <= 5.0 / k as f64, "k = {k}");
        }
        assert!(m_minus3_prime(16, &p).unwrap().is_zero());
        let k = 6000u32;
        let v = m_minus3_prime(k, &p).unwrap().to_f64();
        let approx = 3f64.powf(0.25) * (2.0 * std::f64::consts::PI).sqrt() * 0.480868 / (k as f64).sqrt();
        assert!((v / approx - 1.0).abs() < 1e-3);
    }

    #[test]
    fn cosine_table() {
        for k in (2u32..40).step_by(2) {
            let d = Float::with_val(128, c_cosines(k, 128) - c_table(k, 128)).abs();
            assert!(d < 1e-25, "k = {k}");
        }
        assert_eq!([s_sign(12), s_sign(14), s_sign(16)], [1, -1, 0]);
    }

    #[test]
    fn legendre_bridge_holds() {
        let p = pol();
        for k in [16u32, 24, 36] {
            let (a, b) = legendre_bridge(k, &p).unwrap();
            assert!(rel_err(&a, &b) < 1e-12, "k = {k}: {a} vs {b}");
        }
    }

    #[test]
    fn rhs_is_the_exact_sum() {
        let p = pol();
        let t = MainTerms::compute(24, &p).unwrap();
        let want = Float::with_val(t.m1.prec(), &t.m1 + &t.m_minus4) + &t.m_minus3;
        assert_eq!(t.sum(), want);
        assert_eq!(moment_rhs(24, &p).unwrap(), want);
        let k = 100u32;
        let t = MainTerms::compute(k, &p).unwrap();
        let off = Float::with_val(t.m1.prec(), t.sum() - &t.m1).abs().to_f64();
        assert!(off <= 3.0 / (k as f64).sqrt());
        // k = 22: k ≡ 4 (mod 6) and k ≡ 2 (mod 4)
        assert!(m_minus4(22, &p).unwrap() < 0);
        assert!(m_minus3_prime(22, &p).unwrap().is_zero());
    }

    #[test]
    fn report_residual() {
        let p = pol();
        let t = MainTerms::compute(12, &p).unwrap();
        let lhs = Float::with_val(p.bits(), t.sum() + 0.25f64);
        let r = MomentReport::new(lhs, t, 0.0, "x".into());
        assert!(Float::with_val(128, &r.residual - 0.25f64).abs() < 1e-30);
        assert_eq!(r.summary(20).k, 12);
    }
}
