//! Σ_f w_f L(1/2, sym²f) over an eigenbasis of weight k.

use std::path::Path;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lvalues::afe::sym2_central_afe;
use crate::lvalues::kernel::AfeKernelSpec;
use crate::lvalues::oracle::{oracle_coefficients_needed, OracleKernel, KERNEL_WIDTHS};
use crate::modforms::{cached_miller_basis, cusp_dimension, eigenforms_from_basis, solve_weights, HeckeEigenform};
use crate::mp::log2_abs;
use crate::precision::PrecisionPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LhsRoute {
    /// The kernel e^{-u⁴}/u expansion.
    Afe,
    /// The smoothed expansion of the completed L-function.
    Oracle,
}

#[derive(Clone, Debug)]
pub struct MomentLhs {
    pub k: u32,
    pub weights: Vec<Float>,
    pub central_values: Vec<Float>,
    pub value: Float,
}

/// Eigenforms with λ(n) for n < len and solved weights.
pub fn weighted_eigenforms(k: u32, len: usize, policy: &PrecisionPolicy, cache: Option<&Path>) -> Result<Vec<HeckeEigenform>> {
    let d = cusp_dimension(k) as usize;
    if d == 0 {
        return Err(Error::DimensionZero(k));
    }
    let len = len.max(3 * d + 2);
    let basis = cached_miller_basis(k, len, cache)?;
    let mut forms = eigenforms_from_basis(k, &basis, len, policy)?;
    solve_weights(k, &mut forms, policy)?;
    Ok(forms)
}

/// Coefficients needed by the default route at weight k.
pub fn coefficients_for_central_value(k: u32, policy: &PrecisionPolicy) -> usize {
    oracle_coefficients_needed(k, 0.5, policy.target_abs_tol) + 1
}

/// Central values of every form by the oracle route, sharing the weight functions across forms.
pub fn central_values_oracle(forms: &[HeckeEigenform], policy: &PrecisionPolicy) -> Result<Vec<Float>> {
    let Some(first) = forms.first() else {
        return Ok(Vec::new());
    };
    let a = OracleKernel::new(first.k, 0.5, KERNEL_WIDTHS[0], policy)?;
    let b = OracleKernel::new(first.k, 0.5, KERNEL_WIDTHS[1], policy)?;
    let mut out = Vec::with_capacity(forms.len());
    for f in forms {
        let va = a.eval(f)?;
        let vb = b.eval(f)?;
        let diff = Float::with_val(va.prec(), &va - &vb);
        if log2_abs(&diff) > (4.0 * policy.target_abs_tol).log2() {
            return Err(Error::Precision {
                func: "central_values_oracle",
                detail: format!("kernel widths disagree by {:e} at k = {}", diff.to_f64(), f.k),
            });
        }
        out.push(Float::with_val(policy.bits(), va));
    }
    Ok(out)
}

pub fn moment_lhs_from_forms(
    forms: &[HeckeEigenform],
    route: LhsRoute,
    spec: &AfeKernelSpec,
    policy: &PrecisionPolicy,
) -> Result<MomentLhs> {
    let k = forms.first().map(|f| f.k).ok_or(Error::Range("no eigenforms".into()))?;
    let values = match route {
        LhsRoute::Oracle => central_values_oracle(forms, policy)?,
        LhsRoute::Afe => forms.iter().map(|f| sym2_central_afe(f, spec, policy)).collect::<Result<Vec<_>>>()?,
    };
    let prec = policy.bits();
    let mut total = Float::new(prec);
    let mut weights = Vec::with_capacity(forms.len());
    for (f, v) in forms.iter().zip(&values) {
        let w = f.weight()?.clone();
        total += Float::with_val(prec, &w * v);
        weights.push(w);
    }
    Ok(MomentLhs { k, weights, central_values: values, value: total })
}

/// The first moment at weight k.
pub fn moment_lhs(k: u32, route: LhsRoute, spec: &AfeKernelSpec, policy: &PrecisionPolicy, cache: Option<&Path>) -> Result<MomentLhs> {
    let len = coefficients_for_central_value(k, policy);
    let forms = weighted_eigenforms(k, len, policy, cache)?;
    moment_lhs_from_forms(&forms, route, spec, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_12_is_a_single_product() {
        let p = PrecisionPolicy::new(40, 1e-20, 1e-20).unwrap();
        let m = moment_lhs(12, LhsRoute::Oracle, &AfeKernelSpec::default(), &p, None).unwrap();
        assert_eq!(m.weights.len(), 1);
        let prod = Float::with_val(p.bits(), &m.weights[0] * &m.central_values[0]);
        assert_eq!(prod, m.value);
    }

    #[test]
    fn weight_24_has_two_positive_terms() {
        let p = PrecisionPolicy::new(40, 1e-20, 1e-20).unwrap();
        let m = moment_lhs(24, LhsRoute::Oracle, &AfeKernelSpec::default(), &p, None).unwrap();
        assert_eq!(m.weights.len(), 2);
        for (w, v) in m.weights.iter().zip(&m.central_values) {
            assert!(*w > 0 && *v > 0);
        }
    }

    #[test]
    fn afe_route_reports_truncation() {
        let p = PrecisionPolicy::new(30, 1e-12, 1e-12).unwrap();
        let r = moment_lhs(12, LhsRoute::Afe, &AfeKernelSpec::default(), &p, None);
        assert!(matches!(r, Err(Error::TruncationInsufficient { .. })));
    }
}
