//! Text cache of echelon bases: one integer per line, exact round trip.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rug::Integer;

use crate::error::{Error, Result};
use crate::modforms::basis::miller_basis;
use crate::modforms::qexp::QExpansion;

pub const CACHE_ENV: &str = "SYM2_CACHE_DIR";
const MAGIC: &str = "sym2-qexp 1";

/// The cache directory from the environment, if set and non-empty.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn file_for(dir: &Path, k: u32) -> PathBuf {
    dir.join(format!("basis_k{k}.txt"))
}

pub fn write_basis(path: &Path, k: u32, basis: &[QExpansion]) -> Result<()> {
    let len = basis.first().map_or(0, |b| b.len());
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        writeln!(w, "{MAGIC} k={k} d={} len={len}", basis.len())?;
        for g in basis {
            for c in &g.coeffs {
                writeln!(w, "{c}")?;
            }
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_basis(path: &Path) -> Result<(u32, Vec<QExpansion>)> {
    let r = BufReader::new(fs::File::open(path)?);
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Io(format!("{}: empty cache file", path.display())))??;
    let bad = || Error::Io(format!("{}: malformed cache header", path.display()));
    let rest = header.strip_prefix(MAGIC).ok_or_else(bad)?;
    let mut k = None;
    let mut d = None;
    let mut len = None;
    for field in rest.split_whitespace() {
        let (key, val) = field.split_once('=').ok_or_else(bad)?;
        let v: usize = val.parse().map_err(|_| bad())?;
        match key {
            "k" => k = Some(v as u32),
            "d" => d = Some(v),
            "len" => len = Some(v),
            _ => return Err(bad()),
        }
    }
    let (k, d, len) = (k.ok_or_else(bad)?, d.ok_or_else(bad)?, len.ok_or_else(bad)?);
    let mut basis = Vec::with_capacity(d);
    for _ in 0..d {
        let mut coeffs = Vec::with_capacity(len);
        for _ in 0..len {
            let line = lines.next().ok_or_else(|| Error::Io(format!("{}: truncated", path.display())))??;
            let c: Integer = line.trim().parse().map_err(|_| Error::Io(format!("{}: bad integer", path.display())))?;
            coeffs.push(c);
        }
        basis.push(QExpansion::new(k, coeffs));
    }
    Ok((k, basis))
}

/// Echelon basis of length at least `len`, read from or written to `dir` when given.
pub fn cached_miller_basis(k: u32, len: usize, dir: Option<&Path>) -> Result<Vec<QExpansion>> {
    if let Some(dir) = dir {
        let path = file_for(dir, k);
        if let Ok((kk, basis)) = read_basis(&path) {
            if kk == k && basis.first().is_some_and(|b| b.len() >= len) {
                return Ok(basis.into_iter().map(|b| b.truncate(len)).collect());
            }
        }
        let basis = miller_basis(k, len)?;
        fs::create_dir_all(dir)?;
        write_basis(&path, k, &basis)?;
        return Ok(basis);
    }
    miller_basis(k, len)
}
