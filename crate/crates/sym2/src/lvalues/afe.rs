//! L(1/2, sym²f) = 2 Σ λ_f(n)² V_k(n)/√n.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lvalues::kernel::{afe_tail_bound, AfeKernelSpec, WeightKernel};
use crate::modforms::HeckeEigenform;
use crate::precision::PrecisionPolicy;

/// Largest cutoff the automatic search will consider.
pub const AFE_CUTOFF_LIMIT: u64 = 1 << 24;

/// A truncated sum together with the certified bound on what was dropped.
#[derive(Clone, Debug)]
pub struct AfePartial {
    pub value: Float,
    pub n_cutoff: u64,
    pub tail_estimate: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutoffChoice {
    pub n_cutoff: u64,
    pub tail_estimate: f64,
    pub certified: bool,
}

/// Smallest power-of-two cutoff whose tail bound is below `tol`, or the search limit.
pub fn afe_cutoff(k: u32, tol: f64) -> CutoffChoice {
    let mut n = 16u64;
    loop {
        let tail = afe_tail_bound(k, n);
        if tail < tol {
            return CutoffChoice { n_cutoff: n, tail_estimate: tail, certified: true };
        }
        if n >= AFE_CUTOFF_LIMIT {
            return CutoffChoice { n_cutoff: n, tail_estimate: tail, certified: false };
        }
        n *= 2;
    }
}

fn weighted_sum(f: &HeckeEigenform, kern: &WeightKernel, n_cutoff: u64, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for n in 1..=n_cutoff as usize {
        let lam = f.lambda(n);
        if lam.is_zero() {
            continue;
        }
        let y = Float::with_val(prec, n);
        let v = kern.eval(&y);
        let term = Float::with_val(prec, lam.square_ref()) * v / y.sqrt();
        acc += term;
    }
    acc * 2u32
}

/// The sum up to `n_cutoff` with its certified tail, whatever the size of that tail.
pub fn sym2_central_afe_partial(
    f: &HeckeEigenform,
    spec: &AfeKernelSpec,
    n_cutoff: u64,
    policy: &PrecisionPolicy,
) -> Result<AfePartial> {
    if (f.len() as u64) <= n_cutoff {
        return Err(Error::Range(format!("eigenform carries λ(n) for n < {}, cutoff {n_cutoff} requested", f.len())));
    }
    let kern = WeightKernel::new(f.k, spec, n_cutoff as f64, policy)?;
    let value = weighted_sum(f, &kern, n_cutoff, policy.bits());
    Ok(AfePartial { value, n_cutoff, tail_estimate: afe_tail_bound(f.k, n_cutoff) })
}

/// Central value through the kernel H(u) = e^{-u⁴}/u; refuses to return a value whose tail
/// bound exceeds the absolute tolerance.
pub fn sym2_central_afe(f: &HeckeEigenform, spec: &AfeKernelSpec, policy: &PrecisionPolicy) -> Result<Float> {
    let tol = policy.target_abs_tol;
    let (n, tail) = if spec.n_cutoff > 0 {
        (spec.n_cutoff, afe_tail_bound(f.k, spec.n_cutoff))
    } else {
        let c = afe_cutoff(f.k, tol);
        (c.n_cutoff, c.tail_estimate)
    };
    if !(tail < tol) {
        return Err(Error::TruncationInsufficient { cutoff: n, tail, tol });
    }
    Ok(sym2_central_afe_partial(f, spec, n, policy)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::hecke_eigenforms;

    #[test]
    fn refuses_uncertified_tail() {
        let p = PrecisionPolicy::new(30, 1e-10, 1e-10).unwrap();
        let f = &hecke_eigenforms(12, 64, &p).unwrap()[0];
        let r = sym2_central_afe(f, &AfeKernelSpec::default(), &p);
        assert!(matches!(r, Err(Error::TruncationInsufficient { .. })), "{r:?}");
    }

    #[test]
    fn partial_sums_settle_within_their_tails() {
        let p = PrecisionPolicy::new(30, 1e-15, 1e-15).unwrap();
        let f = &hecke_eigenforms(12, 1100, &p).unwrap()[0];
        let spec = AfeKernelSpec::default();
        let a = sym2_central_afe_partial(f, &spec, 512, &p).unwrap();
        let b = sym2_central_afe_partial(f, &spec, 1024, &p).unwrap();
        let diff = Float::with_val(p.bits(), &a.value - &b.value).abs().to_f64();
        assert!(diff <= a.tail_estimate, "{diff:e} vs {:e}", a.tail_estimate);
        assert!(b.tail_estimate < a.tail_estimate);
    }

    #[test]
    fn cutoff_search_reports_honestly() {
        let c = afe_cutoff(12, 1e-10);
        assert_eq!(c.certified, c.tail_estimate < 1e-10);
        assert!(afe_cutoff(12, 1e6).certified);
    }
}
