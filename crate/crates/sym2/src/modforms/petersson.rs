//! The Petersson formula as a right-hand side and as a linear system for the weights w_f.

use std::collections::HashMap;

use rug::Float;

use crate::arith::KloostermanTable;
use crate::error::{Error, Result};
use crate::modforms::hecke::{gauss_solve, HeckeEigenform};
use crate::mp::{i_pow_even, pi};
use crate::precision::PrecisionPolicy;
use crate::specfun::bessel::bessel_j_series;

fn ln_gamma_int(k: u32) -> f64 {
    (1..k).map(|j| (j as f64).ln()).sum()
}

/// Bound on 2π Σ_{c > C} |S(m,n;c)|/c · |J_{k-1}(4π√(mn)/c)| from |S| ≤ c and
/// |J_ν(x)| ≤ (x/2)^ν/Γ(ν+1): 2π (2π√(mn))^{k-1}/Γ(k) · C^{2-k}/(k-2).
pub fn petersson_tail_bound(k: u32, m: u64, n: u64, c_max: u64) -> f64 {
    let kf = k as f64;
    let a = 2.0 * std::f64::consts::PI * ((m * n) as f64).sqrt();
    let ln = (2.0 * std::f64::consts::PI).ln() + (kf - 1.0) * a.ln() - ln_gamma_int(k) + (2.0 - kf) * (c_max as f64).ln()
        - (kf - 2.0).ln();
    ln.exp()
}

/// Smallest C whose tail bound is below `tol`.
pub fn petersson_c_max(k: u32, m: u64, n: u64, tol: f64) -> u64 {
    let mut c = 1u64;
    while petersson_tail_bound(k, m, n, c) >= tol {
        c = (c as f64 * 1.1).ceil() as u64 + 1;
    }
    // walk back to the smallest admissible value
    let mut lo = c / 2;
    while lo + 1 < c {
        let mid = (lo + c) / 2;
        if petersson_tail_bound(k, m, n, mid) < tol {
            c = mid;
        } else {
            lo = mid;
        }
    }
    c
}

/// δ_{m,n} + 2π i^{-k} Σ_{c ≤ c_max} S(m,n;c) J_{k-1}(4π√(mn)/c)/c.
pub fn petersson_rhs(k: u32, m: u64, n: u64, c_max: u64, policy: &PrecisionPolicy) -> Result<Float> {
    let tail = petersson_tail_bound(k, m, n, c_max);
    if tail >= policy.target_abs_tol {
        return Err(Error::TailBound { bound: tail, height: c_max as f64, tol: policy.target_abs_tol });
    }
    Ok(rhs_many(k, &[(m, n, c_max)], policy)?.remove(0))
}

/// Right-hand sides for many (m, n), each with its own certified cutoff; Kloosterman tables and
/// Bessel values are shared across pairs.
pub fn petersson_rhs_batch(k: u32, pairs: &[(u64, u64)], policy: &PrecisionPolicy) -> Result<Vec<Float>> {
    let tol = policy.target_abs_tol;
    let jobs: Vec<(u64, u64, u64)> = pairs.iter().map(|&(m, n)| (m, n, petersson_c_max(k, m, n, tol))).collect();
    rhs_many(k, &jobs, policy)
}

fn rhs_many(k: u32, jobs: &[(u64, u64, u64)], policy: &PrecisionPolicy) -> Result<Vec<Float>> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::Range(format!("Petersson formula needs even k >= 4, got {k}")));
    }
    let prec = policy.bits();
    let c_top = jobs.iter().map(|j| j.2).max().unwrap_or(0);
    let nu = Float::with_val(prec, k - 1);
    let four_pi = pi(prec) * 4u32;
    let abs_log2 = policy.abs_log2() - (c_top.max(2) as f64).log2() - 8.0;
    let mut sums: Vec<Float> = jobs.iter().map(|_| Float::new(prec)).collect();
    for c in 1..=c_top {
        let table = KloostermanTable::new(c, prec);
        let mut bessel: HashMap<u64, Float> = HashMap::new();
        for (idx, &(m, n, cm)) in jobs.iter().enumerate() {
            if c > cm {
                continue;
            }
            let mn = m * n;
            let j = match bessel.get(&mn) {
                Some(v) => v.clone(),
                None => {
                    let x = Float::with_val(prec, Float::with_val(prec, mn).sqrt() * &four_pi) / c;
                    let v = bessel_j_series(&nu, &x, abs_log2, prec)?;
                    bessel.insert(mn, v.clone());
                    v
                }
            };
            let s = table.sum(m as i64, n as i64);
            sums[idx] += Float::with_val(prec, s * j) / c;
        }
    }
    let sign = i_pow_even(k);
    let two_pi = pi(prec) * 2u32;
    Ok(jobs
        .iter()
        .zip(sums)
        .map(|(&(m, n, _), s)| {
            let mut v = Float::with_val(prec, s * &two_pi) * sign;
            if m == n {
                v += 1u32;
            }
            v
        })
        .collect())
}

/// Fill w_f from Σ_f w_f λ_f(n) = RHS(1, n), n = 1..d.
pub fn solve_weights(k: u32, forms: &mut [HeckeEigenform], policy: &PrecisionPolicy) -> Result<()> {
    let d = forms.len();
    if d == 0 {
        return Err(Error::DimensionZero(k));
    }
    let prec = policy.bits();
    let pairs: Vec<(u64, u64)> = (1..=d as u64).map(|n| (1, n)).collect();
    let rhs = petersson_rhs_batch(k, &pairs, policy)?;
    let mut a = vec![vec![Float::new(prec); d + 1]; d];
    for n in 0..d {
        for (f, form) in forms.iter().enumerate() {
            a[n][f] = Float::with_val(prec, form.lambda(n + 1));
        }
        a[n][d] = rhs[n].clone();
    }
    let w = gauss_solve(a, prec).ok_or(Error::SingularSystem(k))?;
    for (form, wf) in forms.iter_mut().zip(w) {
        if wf <= 0 {
            return Err(Error::NegativeWeight { k, w: wf.to_f64() });
        }
        form.weight = Some(wf);
    }
    Ok(())
}
