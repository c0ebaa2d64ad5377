//! Dirichlet characters, their L-functions and Gauss sums.

use rug::{Complex, Float, Rational};
use serde::Serialize;

use super::gamma::{digamma_r, ln_gamma_c};
use super::zeta::hurwitz_c;
use crate::arith::{gcd, kronecker};
use crate::error::{Error, Result};
use crate::mp::{e_frac, pi};
use crate::precision::PrecisionPolicy;

/// A character mod q with values chi(n) = e(exps[n mod q] / order), or 0 off the units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    exps: Vec<Option<u64>>,
}

impl DirichletCharacter {
    /// Validates complete multiplicativity and the zero pattern.
    pub fn from_exponents(modulus: u64, order: u64, exps: Vec<Option<u64>>) -> Result<Self> {
        if modulus == 0 || order == 0 || exps.len() != modulus as usize {
            return Err(Error::Range("malformed character table".into()));
        }
        for (n, e) in exps.iter().enumerate() {
            if e.is_some() != (gcd(n as u64, modulus) == 1) {
                return Err(Error::Range(format!("chi({n}) zero pattern wrong mod {modulus}")));
            }
        }
        let q = modulus as usize;
        for a in 0..q {
            for b in 0..q {
                let ab = (a * b) % q;
                let want = match (exps[a], exps[b]) {
                    (Some(x), Some(y)) => Some((x + y) % order),
                    _ => None,
                };
                if exps[ab].map(|e| e % order) != want {
                    return Err(Error::Range(format!("not multiplicative at ({a}, {b}) mod {modulus}")));
                }
            }
        }
        let exps = exps.into_iter().map(|e| e.map(|x| x % order)).collect();
        Ok(Self { modulus, order, exps })
    }

    /// The real character n -> (d/n), periodic mod |d| for discriminants d.
    pub fn from_kronecker(d: i64) -> Result<Self> {
        let q = d.unsigned_abs();
        let exps = (0..q)
            .map(|n| match kronecker(d, n as i64) {
                1 => Some(0),
                -1 => Some(1),
                _ => None,
            })
            .collect();
        Self::from_exponents(q, 2, exps)
    }

    pub fn chi_minus4() -> Self {
        Self::from_kronecker(-4).expect("discriminant -4")
    }

    pub fn chi_minus3() -> Self {
        Self::from_kronecker(-3).expect("discriminant -3")
    }

    /// chi(g^m) = e(j m / (p - 1)) for a prime p with primitive root g.
    pub fn mod_prime(p: u64, j: u64) -> Result<Self> {
        let g = (2..p)
            .find(|&g| {
                let mut x = 1u64;
                (1..p - 1).all(|_| {
                    x = x * g % p;
                    x != 1
                })
            })
            .ok_or_else(|| Error::Range(format!("{p} has no primitive root")))?;
        let mut exps = vec![None; p as usize];
        let mut x = 1u64;
        for m in 0..p - 1 {
            exps[x as usize] = Some(j * m % (p - 1));
            x = x * g % p;
        }
        Self::from_exponents(p, p - 1, exps)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent of chi(n) over the order, None when gcd(n, q) > 1.
    pub fn exponent(&self, n: i64) -> Option<u64> {
        self.exps[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, n: i64, prec: u32) -> Complex {
        match self.exponent(n) {
            None => Complex::with_val(prec, 0),
            Some(e) => e_frac(e as i64, self.order, prec),
        }
    }

    /// delta = (1 - chi(-1))/2.
    pub fn delta(&self) -> u32 {
        match self.exponent(-1) {
            Some(0) => 0,
            _ => 1,
        }
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|e| matches!(e, None | Some(0)))
    }

    pub fn conj(&self) -> Self {
        let exps = self.exps.iter().map(|e| e.map(|x| (self.order - x) % self.order)).collect();
        Self { modulus: self.modulus, order: self.order, exps }
    }

    /// No proper divisor d of q induces chi.
    pub fn is_primitive(&self) -> bool {
        let q = self.modulus;
        if q == 1 {
            return true;
        }
        for d in 1..q {
            if !q.is_multiple_of(d) {
                continue;
            }
            let induced = (1..q)
                .filter(|&n| gcd(n, q) == 1 && n % d == 1 % d)
                .all(|n| self.exps[n as usize] == Some(0));
            if induced {
                return false;
            }
        }
        true
    }

    fn require_primitive_nonprincipal(&self) -> Result<()> {
        if self.is_principal() || !self.is_primitive() {
            return Err(Error::Imprimitive(self.modulus));
        }
        Ok(())
    }
}

/// L(s, chi) = q^-s sum_r chi(r) zeta(s, r/q) at `prec` bits; chi nonprincipal.
pub(crate) fn dirichlet_l_c(s: &Complex, chi: &DirichletCharacter, prec: u32) -> Complex {
    let q = chi.modulus();
    let wp = prec + 16;
    if s.imag().is_zero() && *s.real() == 1 {
        // L(1, chi) = -(1/q) sum chi(r) psi(r/q)
        let mut acc = Complex::with_val(wp, 0);
        for r in 1..q {
            if chi.exponent(r as i64).is_some() {
                let x = Float::with_val(wp, Rational::from((r, q)));
                acc += chi.value(r as i64, wp) * digamma_r(&x, wp);
            }
        }
        return Complex::with_val(prec, -acc / q);
    }
    let sw = Complex::with_val(wp, s);
    let mut acc = Complex::with_val(wp, 0);
    for r in 1..=q {
        if chi.exponent(r as i64).is_none() {
            continue;
        }
        let a = Float::with_val(wp, Rational::from((r, q)));
        acc += chi.value(r as i64, wp) * hurwitz_c(&sw, &a, wp);
    }
    let lnq = Float::with_val(wp, q).ln();
    let scale = (Complex::with_val(wp, -&sw) * lnq).exp();
    Complex::with_val(prec, acc * scale)
}

pub fn dirichlet_l(s: &Complex, chi: &DirichletCharacter, policy: &PrecisionPolicy) -> Result<Complex> {
    chi.require_primitive_nonprincipal()?;
    Ok(dirichlet_l_c(s, chi, policy.bits()))
}

/// Lambda(s, chi) = (q/pi)^((s + delta)/2) Gamma((s + delta)/2) L(s, chi).
pub(crate) fn completed_l_c(s: &Complex, chi: &DirichletCharacter, prec: u32) -> Complex {
    let wp = prec + 16;
    let half = Complex::with_val(wp, Complex::with_val(wp, s + chi.delta()) / 2u32);
    let lq = Float::with_val(wp, Float::with_val(wp, chi.modulus()) / pi(wp)).ln();
    let mut l = ln_gamma_c(&half, wp);
    l += Complex::with_val(wp, &half * lq);
    let out = l.exp() * dirichlet_l_c(s, chi, wp);
    Complex::with_val(prec, out)
}

pub fn completed_l(s: &Complex, chi: &DirichletCharacter, policy: &PrecisionPolicy) -> Result<Complex> {
    chi.require_primitive_nonprincipal()?;
    Ok(completed_l_c(s, chi, policy.bits()))
}

/// tau(chi) = sum_r chi(r) e(r/q).
pub fn gauss_sum(chi: &DirichletCharacter, policy: &PrecisionPolicy) -> Result<Complex> {
    chi.require_primitive_nonprincipal()?;
    let prec = policy.bits();
    let q = chi.modulus();
    let mut acc = Complex::with_val(prec + 16, 0);
    for r in 1..q {
        if let Some(e) = chi.exponent(r as i64) {
            // e(e/order + r/q) = e((e q + r order) / (order q))
            let num = e * q + r * chi.order();
            acc += e_frac(num as i64, chi.order() * q, prec + 16);
        }
    }
    Ok(Complex::with_val(prec, acc))
}

/// epsilon(chi) = i^-delta tau(chi) q^-1/2.
pub fn root_number(chi: &DirichletCharacter, policy: &PrecisionPolicy) -> Result<Complex> {
    let tau = gauss_sum(chi, policy)?;
    let prec = policy.bits();
    let sq = Float::with_val(prec, chi.modulus()).sqrt();
    let mut eps = tau / sq;
    if chi.delta() == 1 {
        // multiply by -i
        eps = Complex::with_val(prec, (eps.imag(), -eps.real().clone()));
    }
    Ok(eps)
}
