use std::path::Path;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::{RunConfig, VERSION};
use crate::harness::output::{read_moment_records, render};
use crate::mp::sci;
use crate::precision::PrecisionPolicy;

pub const PLOT_HEADER: &str = "k,residual,abs_m_minus4,abs_m_minus3,k_pow_minus_half,k_pow_minus_three_halves,version,fingerprint";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotRecord {
    pub k: u32,
    pub residual: String,
    pub abs_m_minus4: String,
    pub abs_m_minus3: String,
    pub k_pow_minus_half: String,
    pub k_pow_minus_three_halves: String,
    pub version: String,
    pub fingerprint: String,
}

fn text_abs(s: &str) -> String {
    s.strip_prefix('-').unwrap_or(s).to_string()
}

fn k_power(k: u32, e: f64, digits: u32) -> Result<String> {
    let bits = PrecisionPolicy::with_digits(digits)?.bits();
    let v = Float::with_val(bits, Float::with_val(bits, k).ln() * e).exp();
    Ok(sci(&v, digits as usize))
}

/// Residuals are copied from the moment table as text, never re-parsed.
pub fn plot_records(moment_text: &str, config: &RunConfig) -> Result<Vec<PlotRecord>> {
    let fp = config.fingerprint();
    read_moment_records(moment_text)?
        .into_iter()
        .map(|r| {
            Ok(PlotRecord {
                k: r.k,
                residual: r.residual,
                abs_m_minus4: text_abs(&r.m_minus4),
                abs_m_minus3: text_abs(&r.m_minus3),
                k_pow_minus_half: k_power(r.k, -0.5, config.digits)?,
                k_pow_minus_three_halves: k_power(r.k, -1.5, config.digits)?,
                version: VERSION.into(),
                fingerprint: fp.clone(),
            })
        })
        .collect()
}

pub fn cmd_plotdata(input: &Path, config: &RunConfig) -> Result<String> {
    config.validate()?;
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::Config(format!("cannot read moment table {}: {e}", input.display())))?;
    render(&plot_records(&text, config)?, PLOT_HEADER, config)
}
