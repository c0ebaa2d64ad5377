//! Independent route to L(s, sym²f): the smoothed two-sided expansion of the completed function
//! Λ(s) = L_∞(s) L(s) = Λ(1-s), L_∞(s) = π^{-3s/2} Γ((s+1)/2) Γ((s+k-1)/2) Γ((s+k)/2),
//! with Dirichlet coefficients A(m) = Σ_{a²b = m} λ(b²) and test function G(w) = e^{εw²}.

use rug::{Complex, Float};

use crate::arith::spf_table;
use crate::error::{Error, Result};
use crate::lvalues::mellin::MellinKernel;
use crate::modforms::HeckeEigenform;
use crate::mp::{ln_gamma_f64, log2_abs, pi, zeta_f64};
use crate::precision::PrecisionPolicy;
use crate::specfun::gamma::ln_gamma_c;

/// Two widths of the Gaussian test function; their results must coincide.
pub const KERNEL_WIDTHS: [f64; 2] = [1.0 / 32.0, 1.0 / 64.0];

/// λ(b²) for b ≤ n from λ(p) and λ(p^{j+1}) = λ(p)λ(p^j) - λ(p^{j-1}).
pub fn square_index_coefficients(f: &HeckeEigenform, n: usize) -> Result<Vec<Float>> {
    if f.len() <= n {
        return Err(Error::Range(format!("λ(p) needed for p ≤ {n}, eigenform carries n < {}", f.len())));
    }
    let prec = f.prec();
    let spf = spf_table(n.max(2));
    let mut out = vec![Float::new(prec); n + 1];
    if n >= 1 {
        out[1] = Float::with_val(prec, 1u32);
    }
    for b in 2..=n {
        let p = spf[b] as usize;
        let mut e = 0u32;
        let mut rest = b;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        // λ(p^{2e}) by the recursion
        let lp = f.lambda(p);
        let mut prev = Float::with_val(prec, 1u32);
        let mut cur = Float::with_val(prec, lp);
        for _ in 1..2 * e {
            let next = Float::with_val(prec, lp * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        out[b] = Float::with_val(prec, &out[rest] * &cur);
    }
    Ok(out)
}

/// A(m) = Σ_{a²b = m} λ(b²) for m ≤ n; A(0) = 0.
pub fn dirichlet_coefficients(f: &HeckeEigenform, n: usize) -> Result<Vec<Float>> {
    let sq = square_index_coefficients(f, n)?;
    let prec = f.prec();
    let mut a = vec![Float::new(prec); n + 1];
    let mut s = 1usize;
    while s * s <= n {
        let mut b = 1;
        while s * s * b <= n {
            a[s * s * b] += &sq[b];
            b += 1;
        }
        s += 1;
    }
    Ok(a)
}

fn ln_gamma_factor(s: &Complex, k: u32, prec: u32) -> Complex {
    let lp = pi(prec).ln();
    let mut ln = -Complex::with_val(prec, s * lp) * 1.5f64;
    for shift in [1u32, k - 1, k] {
        let z = Complex::with_val(prec, Complex::with_val(prec, s + shift) / 2u32);
        ln += ln_gamma_c(&z, prec);
    }
    ln
}

fn ln_gamma_factor_f64(s: f64, k: u32) -> f64 {
    let kf = k as f64;
    -1.5 * s * std::f64::consts::PI.ln()
        + ln_gamma_f64((s + 1.0) / 2.0)
        + ln_gamma_f64((s + kf - 1.0) / 2.0)
        + ln_gamma_f64((s + kf) / 2.0)
}

/// One of the two weight functions, W(y) = (1/2πi)∫_{(c)} y^{-w} G(w)/w · L_∞(shift+w)/L_∞(s0) dw.
struct Side {
    shift: f64,
    c: f64,
}

fn sides(s0: f64) -> Vec<Side> {
    let dual = 1.0 - s0;
    let mk = |shift: f64| Side { shift, c: (1.0 - shift).max(0.0) + 0.5 };
    if (s0 - 0.5).abs() < 1e-15 {
        vec![mk(s0)]
    } else {
        vec![mk(s0), mk(dual)]
    }
}

/// Height T with (1/2π)∫_{|t|>T} |integrand| ≤ tol, using |Γ(x+it)| decreasing in |t|.
fn height_for(side: &Side, s0: f64, k: u32, eps: f64, tol: f64) -> f64 {
    let base = ln_gamma_factor_f64(s0, k);
    let mut t = 4.0f64;
    loop {
        let z = Complex::with_val(64, (side.shift + side.c, t));
        let ln_abs = ln_gamma_factor(&z, k, 64).real().to_f64() - base;
        let ln = eps * side.c * side.c - eps * t * t + ln_abs - (2.0 * eps * t * t * std::f64::consts::PI).ln();
        if ln < tol.ln() || t > 4000.0 {
            return t;
        }
        t *= 1.1;
    }
}

/// Certified bound on the dropped part Σ_{m>M} |A(m)| m^{-shift} |W(m)| over all sides, from
/// |A(m)| ≤ d₃(m) and |W(y)| ≤ y^{-c'} (1/2π) e^{εc'²} √(π/ε)/c' · L_∞(shift+c')/L_∞(s0).
pub fn oracle_tail_bound(k: u32, s0: f64, eps: f64, m: u64) -> f64 {
    let ln_m = (m.max(1) as f64).ln();
    let base = ln_gamma_factor_f64(s0, k);
    let mut total = 0.0;
    for side in sides(s0) {
        let mut best = f64::INFINITY;
        for ci in 0..=800 {
            let c = side.c + 0.25 * ci as f64;
            let a = side.shift + c;
            if a <= 1.0 + 1e-9 {
                continue;
            }
            let ln_b = eps * c * c + (std::f64::consts::PI / eps).sqrt().ln() - c.ln() - (2.0 * std::f64::consts::PI).ln()
                + ln_gamma_factor_f64(side.shift + c, k)
                - base;
            for si in 1..=9 {
                let s1 = 1.0 + (a - 1.0) * si as f64 / 10.0;
                let ln = ln_b + (s1 - a) * ln_m + 3.0 * zeta_f64(s1).ln();
                best = best.min(ln.exp());
            }
        }
        total += if (s0 - 0.5).abs() < 1e-15 { 2.0 * best } else { best };
    }
    total
}

/// Smallest number of Dirichlet coefficients certifying `tol` at width `eps`.
pub fn oracle_terms(k: u32, s0: f64, eps: f64, tol: f64) -> u64 {
    let mut hi = 8u64;
    while oracle_tail_bound(k, s0, eps, hi) >= tol {
        hi *= 2;
        if hi > 1 << 30 {
            return hi;
        }
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if oracle_tail_bound(k, s0, eps, mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Coefficients λ(n), n ≤ this, suffice for every width at this point.
pub fn oracle_coefficients_needed(k: u32, s0: f64, tol: f64) -> usize {
    KERNEL_WIDTHS.iter().map(|&e| oracle_terms(k, s0, e, tol / 4.0) as usize).max().unwrap_or(0) + 1
}

/// Reusable weight functions for one (k, s0, ε); independent of the form.
pub struct OracleKernel {
    k: u32,
    s0: f64,
    terms: u64,
    sides: Vec<(f64, MellinKernel)>,
    prec: u32,
}

impl OracleKernel {
    pub fn new(k: u32, s0: f64, eps: f64, policy: &PrecisionPolicy) -> Result<Self> {
        if !(s0.is_finite()) || k < 4 {
            return Err(Error::Domain { func: "sym2_oracle", detail: format!("s = {s0}, k = {k}") });
        }
        let tol = policy.target_abs_tol / 4.0;
        let prec = policy.bits() + 32;
        let terms = oracle_terms(k, s0, eps, tol);
        let s0f = Float::with_val(prec, s0);
        let base = ln_gamma_factor(&Complex::with_val(prec, &s0f), k, prec);
        let mut out = Vec::new();
        for side in sides(s0) {
            let shift = Float::with_val(prec, side.shift);
            let h = |w: &Complex| {
                let ln = ln_gamma_factor(&Complex::with_val(prec, w + &shift), k, prec) - &base;
                let g = Complex::with_val(prec, w.square_ref()) * eps;
                Complex::with_val(prec, (ln + g).exp()) / w
            };
            let height = height_for(&side, s0, k, eps, tol / 8.0);
            let mk = MellinKernel::converged(&h, side.c, height, terms as f64, tol / 4.0, prec, 0)?;
            out.push((side.shift, mk));
        }
        Ok(OracleKernel { k, s0, terms, sides: out, prec })
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    pub fn eval(&self, f: &HeckeEigenform) -> Result<Float> {
        if f.k != self.k {
            return Err(Error::Config(format!("kernel built for k = {}, form has k = {}", self.k, f.k)));
        }
        let prec = self.prec;
        let n = self.terms as usize;
        let a = dirichlet_coefficients(f, n)?;
        let mut total = Float::new(prec);
        for (shift, mk) in &self.sides {
            let mut acc = Float::new(prec);
            for (m, am) in a.iter().enumerate().skip(1) {
                if am.is_zero() {
                    continue;
                }
                let ln_m = Float::with_val(prec, m).ln();
                let w = mk.eval(&ln_m);
                let pw = (-Float::with_val(prec, &ln_m * *shift)).exp();
                acc += Float::with_val(prec, am * pw) * w;
            }
            total += acc;
        }
        if (self.s0 - 0.5).abs() < 1e-15 {
            total *= 2u32;
        }
        Ok(total)
    }
}

/// L(s, sym²f) by the smoothed expansion at a single width.
pub fn sym2_oracle(f: &HeckeEigenform, s: f64, eps: f64, policy: &PrecisionPolicy) -> Result<Float> {
    OracleKernel::new(f.k, s, eps, policy)?.eval(f)
}

/// Values at both widths; fails when they disagree beyond the tolerance.
pub fn sym2_oracle_checked(f: &HeckeEigenform, s: f64, policy: &PrecisionPolicy) -> Result<Float> {
    let a = sym2_oracle(f, s, KERNEL_WIDTHS[0], policy)?;
    let b = sym2_oracle(f, s, KERNEL_WIDTHS[1], policy)?;
    let diff = Float::with_val(a.prec(), &a - &b);
    if log2_abs(&diff) > (4.0 * policy.target_abs_tol).log2() {
        return Err(Error::Precision {
            func: "sym2_oracle",
            detail: format!("kernel widths disagree by {:e} at s = {s}", diff.to_f64()),
        });
    }
    Ok(Float::with_val(policy.bits(), a))
}

/// L(1/2, sym²f) by the independent route.
pub fn sym2_central_oracle(f: &HeckeEigenform, policy: &PrecisionPolicy) -> Result<Float> {
    sym2_oracle_checked(f, 0.5, policy)
}
