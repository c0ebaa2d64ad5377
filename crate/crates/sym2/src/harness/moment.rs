use std::time::Instant;

use rayon::prelude::*;
use rug::Float;

use crate::asymptotics::{MainTerms, MomentReport};
use crate::error::Result;
use crate::harness::config::RunConfig;
use crate::harness::log_event;
use crate::lvalues::{moment_lhs, AfeKernelSpec};
use crate::modforms::cusp_dimension;
use crate::precision::PrecisionPolicy;

#[derive(Clone, Debug)]
pub enum MomentRow {
    Done(MomentReport),
    Failed { k: u32, error: String },
}

impl MomentRow {
    pub fn k(&self) -> u32 {
        match self {
            MomentRow::Done(r) => r.k,
            MomentRow::Failed { k, .. } => *k,
        }
    }

    pub fn is_done(&self) -> bool {
        matches!(self, MomentRow::Done(_))
    }
}

pub fn moment_weight(k: u32, config: &RunConfig, policy: &PrecisionPolicy, spec: &AfeKernelSpec) -> Result<MomentReport> {
    let start = Instant::now();
    // an empty family sums to zero
    let lhs = if cusp_dimension(k) == 0 {
        Float::new(policy.bits())
    } else {
        moment_lhs(k, config.route, spec, policy, config.cache_dir.as_deref())?.value
    };
    let terms = MainTerms::compute(k, policy)?;
    Ok(MomentReport::new(lhs, terms, start.elapsed().as_secs_f64(), config.fingerprint()))
}

/// One row per even weight, ordered by k; a failure at one weight leaves the others untouched.
pub fn cmd_moment(config: &RunConfig) -> Result<Vec<MomentRow>> {
    config.validate()?;
    let policy = config.policy()?;
    let spec = config.kernel_spec()?;
    let mut rows: Vec<MomentRow> = config
        .weights()
        .into_par_iter()
        .map(|k| match moment_weight(k, config, &policy, &spec) {
            Ok(r) => {
                log_event(serde_json::json!({"event": "weight_done", "k": k, "runtime_seconds": r.runtime_seconds}));
                MomentRow::Done(r)
            }
            Err(e) => {
                log_event(serde_json::json!({"event": "weight_failed", "k": k, "error": e.to_string()}));
                MomentRow::Failed { k, error: e.to_string() }
            }
        })
        .collect();
    rows.sort_by_key(MomentRow::k);
    Ok(rows)
}
