//! CSV and JSON renderings. Runtimes never enter these tables, so equal configurations give equal bytes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::{Format, RunConfig, VERSION};
use crate::harness::moment::MomentRow;
use crate::harness::verify::{Check, Status};
use crate::mp::sci;

pub const MOMENT_HEADER: &str = "k,status,lhs,m1,m_minus4,m_minus3,residual,error,version,fingerprint";
pub const CHECK_HEADER: &str = "suite,check,status,measured,tolerance,detail,version,fingerprint";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRecord {
    pub k: u32,
    pub status: String,
    pub lhs: String,
    pub m1: String,
    pub m_minus4: String,
    pub m_minus3: String,
    pub residual: String,
    pub error: String,
    pub version: String,
    pub fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub status: Status,
    pub measured: String,
    pub tolerance: String,
    pub detail: String,
    pub version: String,
    pub fingerprint: String,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    version: &'static str,
    fingerprint: String,
    config: &'a RunConfig,
    rows: &'a [T],
}

fn short(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.6e}")
    }
}

pub fn moment_records(rows: &[MomentRow], config: &RunConfig) -> Vec<MomentRecord> {
    let digits = config.digits as usize;
    let fp = config.fingerprint();
    rows.iter()
        .map(|row| match row {
            MomentRow::Done(r) => MomentRecord {
                k: r.k,
                status: "ok".into(),
                lhs: sci(&r.lhs, digits),
                m1: sci(&r.terms.m1, digits),
                m_minus4: sci(&r.terms.m_minus4, digits),
                m_minus3: sci(&r.terms.m_minus3, digits),
                residual: sci(&r.residual, digits),
                error: String::new(),
                version: VERSION.into(),
                fingerprint: fp.clone(),
            },
            MomentRow::Failed { k, error } => MomentRecord {
                k: *k,
                status: "error".into(),
                lhs: String::new(),
                m1: String::new(),
                m_minus4: String::new(),
                m_minus3: String::new(),
                residual: String::new(),
                error: error.clone(),
                version: VERSION.into(),
                fingerprint: fp.clone(),
            },
        })
        .collect()
}

pub fn check_records(checks: &[Check], config: &RunConfig) -> Vec<CheckRecord> {
    let fp = config.fingerprint();
    checks
        .iter()
        .map(|c| CheckRecord {
            suite: c.suite.name().into(),
            check: c.name.clone(),
            status: c.status,
            measured: short(c.measured),
            tolerance: short(c.tolerance),
            detail: c.detail.clone(),
            version: VERSION.into(),
            fingerprint: fp.clone(),
        })
        .collect()
}

pub fn to_csv<T: Serialize>(rows: &[T], header: &str) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let mut out = String::with_capacity(header.len() + body.len() + 1);
    out.push_str(header);
    out.push('\n');
    out.push_str(&String::from_utf8(body).map_err(|e| Error::Io(e.to_string()))?);
    Ok(out)
}

pub fn to_json<T: Serialize>(rows: &[T], config: &RunConfig) -> Result<String> {
    let env = Envelope { version: VERSION, fingerprint: config.fingerprint(), config, rows };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render<T: Serialize>(rows: &[T], header: &str, config: &RunConfig) -> Result<String> {
    match config.format {
        Format::Csv => to_csv(rows, header),
        Format::Json => to_json(rows, config),
    }
}

pub fn render_moment(rows: &[MomentRow], config: &RunConfig) -> Result<String> {
    render(&moment_records(rows, config), MOMENT_HEADER, config)
}

pub fn render_checks(checks: &[Check], config: &RunConfig) -> Result<String> {
    render(&check_records(checks, config), CHECK_HEADER, config)
}

/// Rows of a moment table in either format.
pub fn read_moment_records(text: &str) -> Result<Vec<MomentRecord>> {
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Io(e.to_string()))?;
        let rows = v.get("rows").cloned().ok_or_else(|| Error::Io("JSON report has no rows".into()))?;
        return serde_json::from_value(rows).map_err(|e| Error::Io(e.to_string()));
    }
    let first = text.lines().next().unwrap_or("");
    if first != MOMENT_HEADER {
        return Err(Error::Io(format!("unexpected moment header {first:?}")));
    }
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(|e| Error::Io(e.to_string()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_record_fields() {
        let rec = MomentRecord {
            k: 12,
            status: "error".into(),
            lhs: String::new(),
            m1: String::new(),
            m_minus4: String::new(),
            m_minus3: String::new(),
            residual: String::new(),
            error: "tail, with a comma".into(),
            version: VERSION.into(),
            fingerprint: "f".into(),
        };
        let csv = to_csv(std::slice::from_ref(&rec), MOMENT_HEADER).unwrap();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&rec).unwrap();
        let auto = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(auto.lines().next().unwrap(), MOMENT_HEADER);
        assert_eq!(read_moment_records(&csv).unwrap(), vec![rec]);
    }

    #[test]
    fn check_header_matches_record_fields() {
        let rec = CheckRecord {
            suite: "lemmas".into(),
            check: "x".into(),
            status: Status::Pass,
            measured: "0".into(),
            tolerance: "0".into(),
            detail: String::new(),
            version: VERSION.into(),
            fingerprint: "f".into(),
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&rec).unwrap();
        let auto = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(auto.lines().next().unwrap(), CHECK_HEADER);
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_moment_records("a,b\n1,2\n").is_err());
    }
}
