//! Vertical-line and bent contour integrals (1/2πi)∫ f(z) dz.

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp::{log2_abs_c, pi};
use crate::precision::PrecisionPolicy;
use crate::specfun::quadrature::{adaptive, default_order, gl_panel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub sigma: f64,
    pub height: f64,
    pub panels: usize,
}

impl ContourSpec {
    pub fn new(sigma: f64, height: f64, panels: usize) -> Result<Self> {
        if !sigma.is_finite() || !(height > 0.0) || panels == 0 {
            return Err(Error::Config(format!(
                "contour needs finite sigma, positive height and panels (got {sigma}, {height}, {panels})"
            )));
        }
        Ok(ContourSpec { sigma, height, panels })
    }

    pub fn check_strip(&self, lo: f64, hi: f64) -> Result<()> {
        if self.sigma > lo && self.sigma < hi {
            Ok(())
        } else {
            Err(Error::ContourOutOfRange { sigma: self.sigma, lo, hi })
        }
    }
}

/// Which way the horizontal rays leave the line at Im z = ±T.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bend {
    Left,
    Right,
}

fn sum_panels<F: Fn(&Float) -> Complex>(g: &F, lo: f64, hi: f64, n: usize, m: usize, prec: u32) -> Complex {
    let width = (hi - lo) / n as f64;
    let mut acc = Complex::with_val(prec, 0);
    for j in 0..n {
        let a = Float::with_val(prec, lo) + Float::with_val(prec, width) * j as u32;
        let b = if j + 1 == n { Float::with_val(prec, hi) } else { Float::with_val(prec, &a + width) };
        acc += gl_panel(g, &a, &b, m, prec);
    }
    acc
}

/// (1/2πi)∫_{σ-iT}^{σ+iT} f(z) dz. `tail_bound(T)` must bound (1/2π)∫_{|t|>T} |f(σ+it)| dt.
pub fn line_integral<F, B>(f: F, spec: &ContourSpec, tail_bound: B, policy: &PrecisionPolicy) -> Result<Complex>
where
    F: Fn(&Complex) -> Complex,
    B: Fn(f64) -> f64,
{
    let tol = policy.target_abs_tol;
    let tail = tail_bound(spec.height);
    if !(tail < tol) {
        return Err(Error::TailBound { bound: tail, height: spec.height, tol });
    }
    let prec = policy.bits();
    let sigma = Float::with_val(prec, spec.sigma);
    let g = |t: &Float| f(&Complex::with_val(prec, (&sigma, t)));
    let m = default_order(prec);
    let mut n = spec.panels;
    let mut prev = sum_panels(&g, -spec.height, spec.height, n, m, prec);
    for _ in 0..14 {
        n *= 2;
        let next = sum_panels(&g, -spec.height, spec.height, n, m, prec);
        let diff = Complex::with_val(prec, &next - &prev);
        prev = next;
        if log2_abs_c(&diff) < (tol / 4.0).log2() {
            return Ok(prev / (pi(prec) * 2u32));
        }
    }
    Err(Error::NonConvergence(format!("line integral at sigma = {} did not settle", spec.sigma)))
}

/// ∫_0^∞ g(r) dr over a ray with decay detected by sampling: panels grow geometrically and
/// stop once both the panel contribution and the endpoint integrand stay negligible.
pub fn ray_integral<G: Fn(&Float) -> Complex>(g: &G, start_len: f64, max_r: f64, tol: f64, prec: u32) -> Result<Complex> {
    let mut total = Complex::with_val(prec, 0);
    let mut a = 0.0f64;
    let mut len = start_len;
    let mut quiet = 0;
    let floor = (tol * 1e-3).log2();
    while a < max_r {
        let b = a + len;
        let fa = Float::with_val(prec, a);
        let fb = Float::with_val(prec, b);
        let piece = adaptive(g, &fa, &fb, tol * 1e-2, prec)?;
        let end = g(&fb);
        let small = log2_abs_c(&piece) < floor && log2_abs_c(&end) + len.log2() < floor;
        total += piece;
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= 3 {
            return Ok(total);
        }
        a = b;
        len = (len * 1.5).min(64.0);
    }
    Err(Error::NonConvergence(format!("ray integrand not negligible by r = {max_r}")))
}

/// (1/2πi)∫ f over the line Re z = σ with the parts |Im z| > T swung onto horizontal rays.
/// The caller guarantees f is analytic in the two swept quadrants and decays along the rays.
pub fn bent_integral<F>(f: F, sigma: f64, height: f64, bend: Bend, max_ray: f64, policy: &PrecisionPolicy) -> Result<Complex>
where
    F: Fn(&Complex) -> Complex,
{
    let prec = policy.bits();
    let tol = policy.target_abs_tol;
    let s = Float::with_val(prec, sigma);
    let h = Float::with_val(prec, height);
    // vertical piece: i ∫_{-T}^{T} f(σ+it) dt
    let g = |t: &Float| f(&Complex::with_val(prec, (&s, t)));
    let lo = Float::with_val(prec, -height);
    let vertical = adaptive(&g, &lo, &h, tol * 1e-2, prec)?;
    let vertical = Complex::with_val(prec, (Float::with_val(prec, -vertical.imag()), vertical.real().clone()));
    let dir = match bend {
        Bend::Left => -1i32,
        Bend::Right => 1,
    };
    // upper ray z = σ ± r + iT, lower ray z = σ ± r - iT; the closed path runs
    // lower ray inward, vertical upward, upper ray outward.
    let upper = |r: &Float| {
        let x = Float::with_val(prec, &s + Float::with_val(prec, r * dir));
        f(&Complex::with_val(prec, (x, &h)))
    };
    let lower = |r: &Float| {
        let x = Float::with_val(prec, &s + Float::with_val(prec, r * dir));
        f(&Complex::with_val(prec, (x, Float::with_val(prec, -&h))))
    };
    let up = ray_integral(&upper, 0.5, max_ray, tol, prec)?;
    let down = ray_integral(&lower, 0.5, max_ray, tol, prec)?;
    let rays = Complex::with_val(prec, &up - &down) * dir;
    let total = vertical + rays;
    // divide by 2πi
    let two_pi = pi(prec) * 2u32;
    let out = Complex::with_val(prec, (total.imag().clone(), Float::with_val(prec, -total.real())));
    Ok(out / two_pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma_c;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::new(40, 1e-22, 1e-22).unwrap()
    }

    #[test]
    fn cahen_mellin() {
        let pol = policy();
        let p = pol.bits();
        let ln2 = Float::with_val(p, 2).ln();
        let f = |z: &Complex| {
            let pow = (Complex::with_val(p, -z) * &ln2).exp();
            gamma_c(z, p) * pow
        };
        // |Γ(3+it)|² = πt(1+t²)(4+t²)/sinh(πt); summed upper bound for the decreasing tail
        let tail = |t0: f64| {
            let g = |t: f64| ((std::f64::consts::PI * t * (1.0 + t * t) * (4.0 + t * t)) / (std::f64::consts::PI * t).sinh()).sqrt() / 8.0;
            (0..400).map(|j| g(t0 + j as f64 * 0.5) * 0.5).sum::<f64>() / std::f64::consts::PI
        };
        let spec = ContourSpec::new(3.0, 40.0, 8).unwrap();
        let got = line_integral(f, &spec, tail, &pol).unwrap();
        let want = Float::with_val(p, -2).exp();
        assert!((got.real().to_f64() - want.to_f64()).abs() < 1e-20);
        assert!(got.imag().to_f64().abs() < 1e-20);
    }

    #[test]
    fn tail_bound_violation() {
        let pol = policy();
        let spec = ContourSpec::new(3.0, 1.0, 4).unwrap();
        let err = line_integral(|z: &Complex| z.clone(), &spec, |_| 1.0, &pol).unwrap_err();
        assert!(matches!(err, Error::TailBound { .. }));
    }

    #[test]
    fn mellin_inversion_of_cosine() {
        // Γ(z)cos(πz/2)x^{-z} on Re z = 1/2 at x = 1 inverts to cos(1)
        let pol = policy();
        let p = pol.bits();
        let half_pi = pi(p) / 2u32;
        let f = |z: &Complex| {
            let c = Complex::with_val(p, z * &half_pi).cos();
            gamma_c(z, p) * c
        };
        let got = bent_integral(f, 0.5, 4.0, Bend::Left, 400.0, &pol).unwrap();
        let want = Float::with_val(p, 1).cos();
        assert!((got.real().to_f64() - want.to_f64()).abs() < 1e-15);
        assert!(got.imag().to_f64().abs() < 1e-15);
    }

    #[test]
    fn reflected_cahen_mellin() {
        // Γ(-z)x^z on Re z = -1/2 inverts to e^{-x}
        let pol = policy();
        let p = pol.bits();
        let lnx = Float::with_val(p, 0.7).ln();
        let f = |z: &Complex| {
            let mz = Complex::with_val(p, -z);
            gamma_c(&mz, p) * Complex::with_val(p, z * &lnx).exp()
        };
        // |Γ(1/2+it)| = (π/cosh πt)^{1/2} ≤ (2π)^{1/2} e^{-π|t|/2}
        let tail = |t0: f64| {
            let pi = std::f64::consts::PI;
            (2.0 * pi).sqrt() * 0.7f64.powf(-0.5) * (2.0 / pi) * (-pi * t0 / 2.0).exp() / pi
        };
        let spec = ContourSpec::new(-0.5, 40.0, 8).unwrap();
        let line = line_integral(f, &spec, tail, &pol).unwrap();
        let want = Float::with_val(p, -0.7).exp();
        assert!((line.real().to_f64() - want.to_f64()).abs() < 1e-18);
    }

    #[test]
    fn bends_close_on_the_correct_side() {
        // x^{-z}/(z(z+1)) on Re z = 1: zero for x > 1, 1 - x for x < 1
        let pol = policy();
        let p = pol.bits();
        let make = |x: f64| {
            let lnx = Float::with_val(p, x).ln();
            move |z: &Complex| {
                let den = Complex::with_val(p, z * Complex::with_val(p, z + 1u32));
                (Complex::with_val(p, -z) * &lnx).exp() / den
            }
        };
        let right = bent_integral(make(2.0), 1.0, 3.0, Bend::Right, 400.0, &pol).unwrap();
        assert!(right.real().to_f64().abs() < 1e-20 && right.imag().to_f64().abs() < 1e-20);
        let left = bent_integral(make(0.5), 1.0, 3.0, Bend::Left, 400.0, &pol).unwrap();
        assert!((left.real().to_f64() - 0.5).abs() < 1e-20 && left.imag().to_f64().abs() < 1e-20);
    }

    #[test]
    fn strip_check() {
        let spec = ContourSpec::new(-0.5, 10.0, 4).unwrap();
        assert!(spec.check_strip(-12.0, 0.0).is_ok());
        assert!(matches!(spec.check_strip(0.0, 1.0), Err(Error::ContourOutOfRange { .. })));
        assert!(ContourSpec::new(1.0, -1.0, 4).is_err());
    }
}
