//! Exact-arithmetic toolkit for the joint distribution of the inversion and
//! major-index statistics on permutations.
//!
//! The crate computes the joint generating polynomial `H_n(p, q)` by three
//! independent routes (brute-force enumeration, the Roselle series route via
//! Newton's identities, and reconstruction from the partition-indexed
//! correction coefficients `c_mu`), and provides the numeric layer used to
//! check the factorization identity, the correction-factor decay, and the
//! joint central-limit behavior at desk scale.
//!
//! Modules map onto the main subsystems:
//!
//! * [`poly`] — dense bivariate polynomials and truncated power series over
//!   arbitrary-precision integers, plus stable complex evaluation.
//! * [`perm`] — permutation statistics and the exact brute-force joint table,
//!   the oracle everything else is tested against.
//! * [`qseries`] — q-analogs and the series route to `H_n`.
//! * [`partitions`] — integer partitions, the set-partition lattice with its
//!   Möbius function, and the `c_mu` coefficients.
//! * [`clt`] — moments, the correction factor on the unit torus,
//!   characteristic functions, CDF comparisons, and the bound suite.
//! * [`io`] — the CSV/JSON surface shared with the CLI.

pub mod clt;
pub mod error;
pub mod io;
pub mod partitions;
pub mod perm;
pub mod poly;
pub mod qseries;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use perm::{JointTable, Permutation};
pub use poly::{BivarPoly, TruncatedSeries, Var};

use num_bigint::BigInt;

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::from(1u8);
    for c in 2..=n {
        f *= c as u64;
    }
    f
}

/// `binom(n, 2) = n(n-1)/2`, the maximum value of `inv` and `maj` on `S_n`.
pub fn max_stat(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(1), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(12), BigInt::from(479_001_600u64));
    }

    #[test]
    fn max_stat_small() {
        assert_eq!(max_stat(0), 0);
        assert_eq!(max_stat(1), 0);
        assert_eq!(max_stat(4), 6);
        assert_eq!(max_stat(16), 120);
    }
}
