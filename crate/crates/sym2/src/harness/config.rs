use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lvalues::{AfeKernelSpec, LhsRoute};
use crate::precision::{PrecisionPolicy, DEFAULT_DIGITS, MIN_DIGITS};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemmas,
    Petersson,
    Contour,
    Specfun,
    Critical,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Petersson => "petersson",
            Suite::Contour => "contour",
            Suite::Specfun => "specfun",
            Suite::Critical => "critical",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k_min: u32,
    pub k_max: u32,
    pub digits: u32,
    pub sigma: f64,
    /// 0 picks the smallest certified cutoff.
    pub n_cutoff: u64,
    /// 0 picks the smallest certified modulus per (m, n).
    pub c_max: u64,
    pub route: LhsRoute,
    pub format: Format,
    pub suite: Option<Suite>,
    /// Location of the q-expansion cache; does not enter the fingerprint.
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k_min: 12,
            k_max: 60,
            digits: DEFAULT_DIGITS,
            sigma: 1.0,
            n_cutoff: 0,
            c_max: 0,
            route: LhsRoute::Oracle,
            format: Format::Csv,
            suite: None,
            cache_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_min < 12 || self.k_min % 2 == 1 || self.k_max % 2 == 1 {
            return Err(Error::Config(format!("weights must be even and at least 12, got [{}, {}]", self.k_min, self.k_max)));
        }
        if self.k_min > self.k_max {
            return Err(Error::Config(format!("k_min = {} exceeds k_max = {}", self.k_min, self.k_max)));
        }
        if self.digits < MIN_DIGITS || self.digits > 2000 {
            return Err(Error::Config(format!("digits must lie in [{MIN_DIGITS}, 2000], got {}", self.digits)));
        }
        self.kernel_spec()?;
        Ok(())
    }

    pub fn policy(&self) -> Result<PrecisionPolicy> {
        PrecisionPolicy::with_digits(self.digits)
    }

    pub fn kernel_spec(&self) -> Result<AfeKernelSpec> {
        AfeKernelSpec::new(self.sigma, self.n_cutoff).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn weights(&self) -> Vec<u32> {
        (self.k_min..=self.k_max).step_by(2).collect()
    }

    /// SHA-256 over the serialized configuration and the library version.
    pub fn fingerprint(&self) -> String {
        let body = serde_json::to_string(self).expect("config serializes");
        let mut h = Sha256::new();
        h.update(body.as_bytes());
        h.update(b"\n");
        h.update(VERSION.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
