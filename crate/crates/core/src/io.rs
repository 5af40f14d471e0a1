//! CSV serialization shared with the CLI: polynomials (`i,j,coeff`), joint
//! tables (`inv,maj,count`), evaluation grids (`s,t,re,im,abs_dev`), and the
//! `c_mu` table (`mu,c`).
//!
//! All writers emit rows in a fixed order and format numbers through the
//! standard display impls, so identical data always serializes to identical
//! bytes. Leading `#` lines are comments; readers skip them (the CLI cache
//! stores its version stamp there).

use std::io::{BufRead, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::clt::EvalGrid;
use crate::error::{Error, Result};
use crate::partitions::CmuTable;
use crate::perm::JointTable;
use crate::poly::BivarPoly;
use crate::{factorial, max_stat};

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Write nonzero coefficients as `i,j,coeff` rows in row-major order.
pub fn write_poly_csv<W: Write>(w: &mut W, poly: &BivarPoly) -> Result<()> {
    writeln!(w, "i,j,coeff")?;
    for (i, j, c) in poly.nonzero_terms() {
        writeln!(w, "{i},{j},{c}")?;
    }
    Ok(())
}

pub fn read_poly_csv<R: BufRead>(r: R) -> Result<BivarPoly> {
    let mut terms = Vec::new();
    let mut header_seen = false;
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != "i,j,coeff" {
                return Err(Error::Csv {
                    line: lineno + 1,
                    msg: format!("expected header `i,j,coeff`, got `{line}`"),
                });
            }
            header_seen = true;
            continue;
        }
        terms.push(parse_triple(line, lineno + 1)?);
    }
    if !header_seen {
        return Err(Error::Csv {
            line: 0,
            msg: "missing header".into(),
        });
    }
    let deg_p = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let deg_q = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut grid = vec![BigInt::zero(); (deg_p + 1) * (deg_q + 1)];
    for (i, j, c) in terms {
        grid[i * (deg_q + 1) + j] = c;
    }
    BivarPoly::from_grid(deg_p, deg_q, grid)
}

fn parse_triple(line: &str, lineno: usize) -> Result<(usize, usize, BigInt)> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 3 {
        return Err(Error::Csv {
            line: lineno,
            msg: format!("expected 3 fields, got {}", fields.len()),
        });
    }
    let i = parse_usize(fields[0], lineno)?;
    let j = parse_usize(fields[1], lineno)?;
    let c = BigInt::from_str(fields[2].trim()).map_err(|e| Error::Csv {
        line: lineno,
        msg: format!("bad integer `{}`: {e}", fields[2]),
    })?;
    Ok((i, j, c))
}

fn parse_usize(s: &str, lineno: usize) -> Result<usize> {
    s.trim().parse().map_err(|e| Error::Csv {
        line: lineno,
        msg: format!("bad index `{s}`: {e}"),
    })
}

// ---------------------------------------------------------------------------
// Joint tables
// ---------------------------------------------------------------------------

/// Write nonzero counts as `inv,maj,count` rows, optionally preceded by a
/// `#` comment line.
pub fn write_table_csv<W: Write>(
    w: &mut W,
    table: &JointTable,
    comment: Option<&str>,
) -> Result<()> {
    if let Some(comment) = comment {
        writeln!(w, "# {comment}")?;
    }
    writeln!(w, "inv,maj,count")?;
    for (i, j, c) in table.nonzero_entries() {
        writeln!(w, "{i},{j},{c}")?;
    }
    Ok(())
}

/// Read a joint table for a known `n`, validating the header, the support
/// (indices within `binom(n,2)`), nonnegativity, and the checksum
/// `total = n!`.
pub fn read_table_csv<R: BufRead>(r: R, n: usize) -> Result<JointTable> {
    let side = max_stat(n) + 1;
    let mut counts = vec![BigInt::zero(); side * side];
    let mut header_seen = false;
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != "inv,maj,count" {
                return Err(Error::Csv {
                    line: lineno + 1,
                    msg: format!("expected header `inv,maj,count`, got `{line}`"),
                });
            }
            header_seen = true;
            continue;
        }
        let (i, j, c) = parse_triple(line, lineno + 1)?;
        if i >= side || j >= side {
            return Err(Error::Csv {
                line: lineno + 1,
                msg: format!("({i}, {j}) outside the S_{n} support"),
            });
        }
        if c < BigInt::zero() {
            return Err(Error::Csv {
                line: lineno + 1,
                msg: format!("negative count {c}"),
            });
        }
        counts[i * side + j] = c;
    }
    if !header_seen {
        return Err(Error::Csv {
            line: 0,
            msg: "missing header".into(),
        });
    }
    let table = JointTable::from_counts(n, counts)?;
    let total = table.total();
    let expected = factorial(n);
    if total != expected {
        return Err(Error::Csv {
            line: 0,
            msg: format!("counts total {total}, expected {n}! = {expected}"),
        });
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Evaluation grids
// ---------------------------------------------------------------------------

/// Write an evaluation grid with a metadata comment line and the
/// `s,t,re,im,abs_dev` header.
pub fn write_eval_grid_csv<W: Write>(w: &mut W, grid: &EvalGrid) -> Result<()> {
    writeln!(
        w,
        "# mahonian-lab v1 n={} function={} reference={} s_max={} t_max={} steps={}",
        grid.n,
        grid.function.name(),
        grid.function.reference_name(),
        grid.s_max,
        grid.t_max,
        grid.steps
    )?;
    writeln!(w, "s,t,re,im,abs_dev")?;
    for p in &grid.points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.s, p.t, p.value.re, p.value.im, p.abs_dev
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// c_mu tables
// ---------------------------------------------------------------------------

/// Write the `c_mu` table as `mu,c` rows, ascending from `(1^n)` to `(n)`,
/// with `mu` encoded as a `+`-joined part list like `2+1+1`.
pub fn write_cmu_csv<W: Write>(w: &mut W, table: &CmuTable) -> Result<()> {
    writeln!(w, "mu,c")?;
    for (mu, c) in table.entries().iter().rev() {
        writeln!(w, "{mu},{c}")?;
    }
    Ok(())
}
