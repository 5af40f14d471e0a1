//! Permutation statistics and the exact brute-force joint distribution of
//! `(inv, maj)` over `S_n`.
//!
//! Full enumeration is the independent oracle every generating-function route
//! gets tested against. Enumeration walks permutations in lexicographic order
//! with an allocation-free successor step; the range `0..n!` splits into
//! contiguous blocks (decoded via factorial-base unranking) so the walk can
//! run data-parallel. Per-block tallies are merged by exact addition, so the
//! result is identical no matter how the range was split.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::BivarPoly;
use crate::{factorial, max_stat};

/// A permutation of `1..=n`, stored as its one-line word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    /// Validate that `word` really is a permutation of `1..=n`.
    pub fn new(word: Vec<u8>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &x in &word {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::invalid(
                    "permutation word",
                    format!("{word:?} is not a permutation of 1..={n}"),
                ));
            }
            seen[x] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n <= u8::MAX as usize);
        Permutation {
            word: (1..=n as u8).collect(),
        }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Number of inversions: pairs `i < j` with `w_i > w_j`.
pub fn inv(w: &Permutation) -> usize {
    inv_word(&w.word)
}

/// Major index: sum of the positions `i` (1-based) with `w_i > w_{i+1}`.
pub fn maj(w: &Permutation) -> usize {
    maj_word(&w.word)
}

fn inv_word(w: &[u8]) -> usize {
    let mut count = 0;
    for i in 0..w.len() {
        for j in (i + 1)..w.len() {
            if w[i] > w[j] {
                count += 1;
            }
        }
    }
    count
}

fn maj_word(w: &[u8]) -> usize {
    let mut sum = 0;
    for i in 1..w.len() {
        if w[i - 1] > w[i] {
            sum += i;
        }
    }
    sum
}

/// In-place lexicographic successor; returns `false` at the last permutation.
fn next_lex(w: &mut [u8]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let pivot = i - 1;
    let mut j = w.len() - 1;
    while w[j] <= w[pivot] {
        j -= 1;
    }
    w.swap(pivot, j);
    w[i..].reverse();
    true
}

/// The permutation of `1..=n` at position `rank` (0-based) in lexicographic
/// order, decoded from the factorial-base digits of `rank`.
fn unrank_lex(n: usize, mut rank: u64) -> Vec<u8> {
    let mut factorials = vec![1u64; n.max(1)];
    for i in 1..n {
        factorials[i] = factorials[i - 1] * i as u64;
    }
    let mut remaining: Vec<u8> = (1..=n as u8).collect();
    let mut word = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorials[i];
        let d = (rank / f) as usize;
        rank %= f;
        word.push(remaining.remove(d));
    }
    word
}

fn factorial_u64(n: usize) -> u64 {
    (2..=n as u64).product::<u64>().max(1)
}

/// Exact joint counts `#{w in S_n : inv(w) = i, maj(w) = j}` as a dense
/// integer matrix of side `binom(n,2) + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JointTable {
    n: usize,
    side: usize,
    counts: Vec<BigInt>,
}

impl JointTable {
    pub fn from_counts(n: usize, counts: Vec<BigInt>) -> Result<Self> {
        let side = max_stat(n) + 1;
        if counts.len() != side * side {
            return Err(Error::invalid(
                "joint table",
                format!("expected {} entries, got {}", side * side, counts.len()),
            ));
        }
        Ok(JointTable { n, side, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length of the square grid, `binom(n,2) + 1`.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn count(&self, i: usize, j: usize) -> &BigInt {
        &self.counts[i * self.side + j]
    }

    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }

    /// Row sums: the distribution of `inv` alone.
    pub fn inv_marginal(&self) -> Vec<BigInt> {
        (0..self.side)
            .map(|i| (0..self.side).map(|j| self.count(i, j)).sum())
            .collect()
    }

    /// Column sums: the distribution of `maj` alone.
    pub fn maj_marginal(&self) -> Vec<BigInt> {
        (0..self.side)
            .map(|j| (0..self.side).map(|i| self.count(i, j)).sum())
            .collect()
    }

    /// Nonzero entries as `(inv, maj, count)` in row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        let side = self.side;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / side, idx % side, c))
    }
}

/// Exact joint table by full enumeration of `S_n`.
///
/// `n = 0` yields the 1x1 table counting the empty permutation. Intended for
/// `n <= 12`; larger `n` is permitted if the caller accepts the runtime
/// (hard cap 20 so ranks fit in `u64`).
pub fn joint_table_bruteforce(n: usize) -> JointTable {
    assert!(n <= 20, "enumeration rank arithmetic requires n <= 20");
    let side = max_stat(n) + 1;
    if n <= 1 {
        let mut counts = vec![BigInt::zero(); side * side];
        counts[0] = BigInt::from(1);
        return JointTable { n, side, counts };
    }

    let total = factorial_u64(n);
    let num_blocks = if total <= 10_000 {
        1
    } else {
        (rayon::current_num_threads() as u64 * 8).min(total)
    };
    let block_size = total.div_ceil(num_blocks);

    let locals: Vec<Vec<u64>> = (0..num_blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * block_size;
            let end = (start + block_size).min(total);
            let mut tally = vec![0u64; side * side];
            let mut word = unrank_lex(n, start);
            for _ in start..end {
                tally[inv_word(&word) * side + maj_word(&word)] += 1;
                if !next_lex(&mut word) {
                    break;
                }
            }
            tally
        })
        .collect();

    let mut counts = vec![BigInt::zero(); side * side];
    for tally in locals {
        for (acc, c) in counts.iter_mut().zip(tally) {
            if c != 0 {
                *acc += c;
            }
        }
    }
    JointTable { n, side, counts }
}

/// Lossless transcription of a joint table into the polynomial
/// `sum counts[i][j] p^i q^j`.
pub fn table_to_poly(t: &JointTable) -> BivarPoly {
    let deg = t.side - 1;
    BivarPoly::from_grid(deg, deg, t.counts.clone()).expect("table grid is rectangular")
}

/// Inverse of [`table_to_poly`]; checks that the polynomial fits the `S_n`
/// support and that the counts are nonnegative and total `n!`.
pub fn poly_to_table(n: usize, poly: &BivarPoly) -> Result<JointTable> {
    let b = max_stat(n);
    if poly.deg_p() > b || poly.deg_q() > b {
        return Err(Error::invalid(
            "joint polynomial",
            format!(
                "degree ({}, {}) exceeds binom({n},2) = {b}",
                poly.deg_p(),
                poly.deg_q()
            ),
        ));
    }
    let side = b + 1;
    let mut counts = vec![BigInt::zero(); side * side];
    for (i, j, c) in poly.nonzero_terms() {
        if c < &BigInt::zero() {
            return Err(Error::invalid(
                "joint polynomial",
                format!("negative count {c} at ({i}, {j})"),
            ));
        }
        counts[i * side + j] = c.clone();
    }
    let table = JointTable { n, side, counts };
    let total = table.total();
    let expected = factorial(n);
    if total != expected {
        return Err(Error::invalid(
            "joint polynomial",
            format!("counts total {total}, expected {n}! = {expected}"),
        ));
    }
    Ok(table)
}
