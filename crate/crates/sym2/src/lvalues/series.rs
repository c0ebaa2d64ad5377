//! L(s, sym²f) for s > 1 from the Euler product
//! L_p(s)^{-1} = 1 - (λ(p)² - 1)(X - X²) - X³, X = p^{-s}.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::modforms::HeckeEigenform;
use crate::precision::PrecisionPolicy;

#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: Float,
    /// Bound on |L/L_P - 1| from the primes beyond `prime_limit`.
    pub rel_tail: f64,
    pub prime_limit: u64,
    /// True when s ≥ 3 and the tail bound meets the relative tolerance.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub value: String,
    pub rel_tail: f64,
    pub prime_limit: u64,
    pub certified: bool,
}

/// |log Π_{p>P} L_p(s)| ≤ 3 Σ_{p>P} p^{-s}/(1 - p^{-s}); for P ≥ 5 every prime beyond P
/// is 1 or 5 mod 6, so the sum is at most (1 - P^{-s})^{-1}(P^{1-s}/(3(s-1)) + 2P^{-s}).
pub fn euler_tail_log_bound(s: f64, p_limit: u64) -> f64 {
    let p = p_limit.max(5) as f64;
    let geo = 1.0 / (1.0 - p.powf(-s));
    3.0 * geo * (p.powf(1.0 - s) / (3.0 * (s - 1.0)) + 2.0 * p.powf(-s))
}

/// Smallest prime limit whose relative tail is below `rel_tol`.
pub fn euler_prime_limit(s: f64, rel_tol: f64) -> u64 {
    let mut p = 16u64;
    while (euler_tail_log_bound(s, p).exp() - 1.0) >= rel_tol {
        p = p * 5 / 4 + 1;
        if p > 1 << 40 {
            break;
        }
    }
    p
}

pub fn sym2_series(f: &HeckeEigenform, s: f64, policy: &PrecisionPolicy) -> Result<SeriesValue> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain { func: "sym2_series", detail: format!("Euler product needs s > 1, got {s}") });
    }
    if f.len() < 3 {
        return Err(Error::Range("eigenform carries no λ(p)".into()));
    }
    let wanted = euler_prime_limit(s, policy.target_rel_tol / 2.0);
    let limit = wanted.min(f.len() as u64 - 1);
    let prec = policy.bits() + 32;
    let sf = Float::with_val(prec, s);
    let mut inv = Float::with_val(prec, 1u32);
    for p in primes_up_to(limit as usize) {
        let x = Float::with_val(prec, Float::with_val(prec, p).ln() * &sf);
        let x = Float::with_val(prec, -x).exp();
        let x2 = Float::with_val(prec, x.square_ref());
        let x3 = Float::with_val(prec, &x2 * &x);
        let lam2 = Float::with_val(prec, f.lambda(p as usize).square_ref()) - 1u32;
        let local = Float::with_val(prec, 1u32) - Float::with_val(prec, &lam2 * Float::with_val(prec, &x - &x2)) - x3;
        inv *= local;
    }
    let rel_tail = euler_tail_log_bound(s, limit).exp_m1();
    Ok(SeriesValue {
        value: Float::with_val(policy.bits(), inv.recip()),
        rel_tail,
        prime_limit: limit,
        certified: s >= 3.0 && rel_tail < policy.target_rel_tol,
    })
}

impl SeriesValue {
    pub fn summary(&self) -> SeriesSummary {
        SeriesSummary {
            value: crate::mp::sci(&self.value, 30),
            rel_tail: self.rel_tail,
            prime_limit: self.prime_limit,
            certified: self.certified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::hecke_eigenforms;

    #[test]
    fn matches_dirichlet_series_at_five() {
        // ζ(10) Σ λ(n²) n^{-5} truncated at the same height as the product
        let p = PrecisionPolicy::new(30, 1e-12, 1e-12).unwrap();
        let f = &hecke_eigenforms(12, 2000, &p).unwrap()[0];
        let v = sym2_series(f, 5.0, &p).unwrap();
        assert!(v.certified);
        let prec = p.bits();
        let sq = crate::lvalues::oracle::square_index_coefficients(f, 44).unwrap();
        let mut sum = Float::new(prec);
        for (n, l) in sq.iter().enumerate().skip(1) {
            sum += Float::with_val(prec, l / Float::with_val(prec, rug::ops::Pow::pow(Float::with_val(prec, n), 5u32)));
        }
        let z10 = Float::with_val(prec, 10u32).zeta();
        let direct = Float::with_val(prec, sum * z10);
        // terms beyond n = 44 are below d(n²) n^{-5}
        let rel = Float::with_val(prec, &direct - &v.value).abs().to_f64() / v.value.to_f64();
        assert!(rel < 1e-5, "rel = {rel:e}");
    }

    #[test]
    fn weight_24_values_are_positive() {
        let p = PrecisionPolicy::new(30, 1e-6, 1e-6).unwrap();
        let forms = hecke_eigenforms(24, 2000, &p).unwrap();
        for f in &forms {
            let v = sym2_series(f, 3.0, &p).unwrap();
            assert!(v.value > 0);
            assert!(v.certified);
        }
    }

    #[test]
    fn short_expansions_are_not_certified() {
        let p = PrecisionPolicy::new(30, 1e-12, 1e-12).unwrap();
        let f = &hecke_eigenforms(12, 50, &p).unwrap()[0];
        let v = sym2_series(f, 3.0, &p).unwrap();
        assert!(!v.certified);
        assert!(v.rel_tail > 1e-12);
        assert!(sym2_series(f, 1.0, &p).is_err());
        let low = sym2_series(f, 2.0, &p).unwrap();
        assert!(!low.certified);
    }

    #[test]
    fn tail_bound_is_decreasing() {
        assert!(euler_tail_log_bound(3.0, 1000) < euler_tail_log_bound(3.0, 100));
        let p = euler_prime_limit(3.0, 1e-11);
        assert!(euler_tail_log_bound(3.0, p).exp_m1() < 1e-11);
    }
}
