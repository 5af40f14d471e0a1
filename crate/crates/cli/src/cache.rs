//! The on-disk cache of joint tables: one `Hn_<n>.csv` per n, in the joint
//! table CSV format with a leading `# mahonian-lab v1 n=<n>` stamp.
//!
//! Loads validate shape and the `total = n!` checksum; a corrupt file is a
//! hard failure rather than a silent recompute, so stale artifacts get
//! noticed.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use mahonian_core::clt::correction_series_from_cmu;
use mahonian_core::io::{read_table_csv, write_table_csv};
use mahonian_core::perm::{joint_table_bruteforce, poly_to_table, JointTable};
use mahonian_core::poly::Var;
use mahonian_core::qseries::{q_factorial, roselle_hn};
use mahonian_core::{max_stat, Result};

use crate::{CliError, Method};

pub fn table_path(cache_dir: &Path, n: usize) -> PathBuf {
    cache_dir.join(format!("Hn_{n}.csv"))
}

pub fn stamp(n: usize) -> String {
    format!("mahonian-lab v1 n={n}")
}

/// Load the cached table for `n`, or compute it with `method` and populate
/// the cache. A cache file that fails validation is an error.
pub fn load_or_compute(
    cache_dir: &Path,
    n: usize,
    method: Method,
) -> std::result::Result<(JointTable, PathBuf), CliError> {
    let path = table_path(cache_dir, n);
    if path.exists() {
        let file = fs::File::open(&path)?;
        let table = read_table_csv(BufReader::new(file), n).map_err(|e| {
            CliError::Failure(format!("cached table {} is invalid: {e}", path.display()))
        })?;
        return Ok((table, path));
    }
    let table = compute_table(n, method)?;
    fs::create_dir_all(cache_dir)?;
    let mut buf = Vec::new();
    write_table_csv(&mut buf, &table, Some(&stamp(n)))?;
    fs::write(&path, &buf)?;
    Ok((table, path))
}

pub fn compute_table(n: usize, method: Method) -> Result<JointTable> {
    match method {
        Method::Brute => Ok(joint_table_bruteforce(n)),
        Method::Roselle => poly_to_table(n, &roselle_hn(n)?),
        Method::Cmu => {
            // H_n = [n]_p! [n]_q! F_n / n!, with F_n from the partition
            // coefficients.
            let b = max_stat(n);
            let f = correction_series_from_cmu(n, b)?;
            let qf = q_factorial(n, Var::P)
                .to_series(b, b)
                .mul(&q_factorial(n, Var::Q).to_series(b, b))?;
            let hn = qf.mul(&f)?.div_exact(factorial_u64(n))?.to_poly();
            poly_to_table(n, &hn)
        }
    }
}

fn factorial_u64(n: usize) -> u64 {
    (2..=n as u64).product::<u64>().max(1)
}

/// Cached tables found in a directory, sorted by n for deterministic
/// reports.
pub fn scan(cache_dir: &Path) -> std::io::Result<Vec<(usize, PathBuf)>> {
    let mut found = Vec::new();
    if !cache_dir.is_dir() {
        return Ok(found);
    }
    for entry in fs::read_dir(cache_dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(n) = name
            .strip_prefix("Hn_")
            .and_then(|s| s.strip_suffix(".csv"))
            .and_then(|s| s.parse::<usize>().ok())
        {
            found.push((n, entry.path()));
        }
    }
    found.sort();
    Ok(found)
}
