//! Dummigan's closed form for w_f L(r, sym²f) at odd r with 3 ≤ r ≤ k − 1.

use rug::{Complex, Float, Rational};

use crate::arith::{bernoulli, p_coeff};
use crate::error::{Error, Result};
use crate::mp::pi;
use crate::precision::PrecisionPolicy;
use crate::specfun::dirichlet::{dirichlet_l_c, DirichletCharacter};
use crate::specfun::gamma::gamma_ratio_r;

/// (c₁, c₋₄, c₋₃), with c₁ already carrying the 2k/B_k correction when r = k − 1.
pub fn dummigan_coefficients(k: u32, r: u32) -> Result<(Rational, Rational, Rational)> {
    if r.is_multiple_of(2) || r < 3 || r + 1 > k || !k.is_multiple_of(2) {
        return Err(Error::Range(format!("needs even k and odd r with 3 <= r <= k - 1, got k = {k}, r = {r}")));
    }
    let mut c1 = p_coeff(k, r, 2, 1)? + p_coeff(k, r, -2, 1)?;
    if r + 1 == k {
        c1 += Rational::from(2 * k) / bernoulli(k);
    }
    let c4 = p_coeff(k, r, 0, 1)?;
    let c3 = p_coeff(k, r, 1, 1)? + p_coeff(k, r, -1, 1)?;
    Ok((c1, c4, c3))
}

/// −(2π)^{2r} Γ(k−r)/(4Γ(k+r−1)) · β.
pub fn dummigan_beta(k: u32, r: u32, policy: &PrecisionPolicy) -> Result<Float> {
    let (c1, c4, c3) = dummigan_coefficients(k, r)?;
    let prec = policy.bits() + 32;
    // ζ(1 − 2r) = −B_{2r}/(2r)
    let zeta = -bernoulli(2 * r) / Rational::from(2 * r);
    let s = Complex::with_val(prec, (1 - r as i32, 0));
    let l4 = dirichlet_l_c(&s, &DirichletCharacter::chi_minus4(), prec).real().clone();
    let l3 = dirichlet_l_c(&s, &DirichletCharacter::chi_minus3(), prec).real().clone();
    let beta = Float::with_val(prec, c1 * zeta) + Float::with_val(prec, c4 * l4) + Float::with_val(prec, c3 * l3);
    let two_pi = Float::with_val(prec, pi(prec) * 2u32);
    let pw = Float::with_val(prec, two_pi.ln() * (2 * r)).exp();
    let ratio = gamma_ratio_r(&Float::with_val(prec, k - r), &Float::with_val(prec, k + r - 1), prec);
    let v = -(pw * ratio * beta) / 4u32;
    Ok(Float::with_val(policy.bits(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::rel_err;
    use rug::ops::Pow;
    use rug::Integer;

    fn bernoulli_poly(n: u32, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for j in 0..=n {
            let binom = Integer::from(Integer::binomial_u(n, j));
            let pw = x.clone().pow(n - j);
            acc += Rational::from(binom) * bernoulli(j) * pw;
        }
        acc
    }

    /// L(1 − n, χ) = −B_{n,χ}/n with B_{n,χ} = q^{n−1} Σ_a χ(a) B_n(a/q).
    fn generalized(n: u32, d: i64) -> Rational {
        let q = d.unsigned_abs();
        let mut b = Rational::new();
        for a in 1..q {
            let chi = crate::arith::kronecker(d, a as i64);
            if chi != 0 {
                b += bernoulli_poly(n, &Rational::from((a, q))) * chi;
            }
        }
        b *= Rational::from(Integer::from(q).pow(n - 1));
        -b / Rational::from(n)
    }

    #[test]
    fn coefficients_at_twelve() {
        let (c1, c4, c3) = dummigan_coefficients(12, 3).unwrap();
        assert_eq!((c1, c4, c3), (Rational::from(2574), Rational::from(15), Rational::from(36)));
        let (c1, c4, c3) = dummigan_coefficients(12, 11).unwrap();
        // 2 + 24/B_12 with B_12 = −691/2730
        assert_eq!(c1, Rational::from(2) + Rational::from(24) / Rational::from((-691, 2730)));
        assert_eq!((c4, c3), (Rational::from(1), Rational::from(2)));
        assert!(dummigan_coefficients(12, 4).is_err());
        assert!(dummigan_coefficients(12, 13).is_err());
    }

    #[test]
    fn special_values_are_exact() {
        assert_eq!(-bernoulli(6) / Rational::from(6), Rational::from((-1, 252)));
        let prec = 200;
        for r in [3u32, 5, 7] {
            let s = Complex::with_val(prec, (1 - r as i32, 0));
            for (d, chi) in [(-4i64, DirichletCharacter::chi_minus4()), (-3, DirichletCharacter::chi_minus3())] {
                let got = dirichlet_l_c(&s, &chi, prec).real().clone();
                let want = Float::with_val(prec, generalized(r, d));
                assert!(rel_err(&got, &want) < 1e-40, "r = {r}, d = {d}");
            }
        }
    }

    #[test]
    fn weight_twelve_against_the_euler_product() {
        let p = PrecisionPolicy::new(30, 1e-12, 1e-8).unwrap();
        let forms = crate::lvalues::weighted_eigenforms(12, 40_000, &p, None).unwrap();
        let w = forms[0].weight().unwrap().clone();
        for r in [3u32, 5] {
            let l = crate::lvalues::sym2_series(&forms[0], r as f64, &p).unwrap();
            assert!(l.certified);
            let lhs = Float::with_val(p.bits(), &w * &l.value);
            let rhs = dummigan_beta(12, r, &p).unwrap();
            assert!(rel_err(&lhs, &rhs) < 1e-8, "r = {r}: {lhs} vs {rhs}");
        }
    }
}
