//! Integer partitions, the set-partition lattice with its Möbius function,
//! Stirling cycle counts, and the partition-indexed correction coefficients
//! `c_mu`.
//!
//! Sums over the upper order ideal of an interval-block partition are
//! evaluated on the collapsed ground set (the ideal above a partition with
//! `l` blocks is isomorphic to the lattice on `l` points), so enumeration
//! cost is governed by `Bell(l)` rather than `Bell(n)`.

pub mod gf;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factorial;

pub use gf::{m_lambda_series, r_lambda_series, s_pi_series};

// ---------------------------------------------------------------------------
// Integer partitions
// ---------------------------------------------------------------------------

/// An integer partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct IntPartition {
    parts: Vec<usize>,
}

impl IntPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::invalid("partition", "parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(
                "partition",
                "parts must be weakly decreasing",
            ));
        }
        Ok(IntPartition { parts })
    }

    /// The partition `(1^n)`.
    pub fn all_ones(n: usize) -> Self {
        IntPartition {
            parts: vec![1; n],
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The partitioned integer `n`.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `lambda! = lambda_1! lambda_2! ...`
    pub fn factorial(&self) -> BigInt {
        self.parts.iter().map(|&p| factorial(p)).product()
    }

    /// `prod_j m_j!` over the multiplicities `m_j` of the distinct part
    /// values: the number of ways to permute equal parts among themselves.
    pub fn symmetry_factor(&self) -> BigInt {
        let mut out = BigInt::one();
        let mut run = 0usize;
        for i in 0..self.parts.len() {
            run += 1;
            if i + 1 == self.parts.len() || self.parts[i + 1] != self.parts[i] {
                out *= factorial(run);
                run = 0;
            }
        }
        out
    }
}

impl fmt::Display for IntPartition {
    /// Parts joined by `+`, e.g. `2+1+1`; the empty partition prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let strings: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strings.join("+"))
    }
}

/// All partitions of `n` in canonical order: largest part first, so
/// `all_partitions(3)` is `[(3), (2,1), (1,1,1)]`.
pub fn all_partitions(n: usize) -> Vec<IntPartition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    descend(n, n, &mut current, &mut out);
    out
}

fn descend(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<IntPartition>) {
    if remaining == 0 {
        out.push(IntPartition {
            parts: current.clone(),
        });
        return;
    }
    for first in (1..=remaining.min(max_part)).rev() {
        current.push(first);
        descend(remaining - first, first, current, out);
        current.pop();
    }
}

/// `lambda! = lambda_1! lambda_2! ...` as a free function, mirroring the
/// method.
pub fn partition_factorial(lambda: &IntPartition) -> BigInt {
    lambda.factorial()
}

// ---------------------------------------------------------------------------
// Set partitions
// ---------------------------------------------------------------------------

/// A set partition of `{1..n}` in canonical form: elements sorted within each
/// block, blocks sorted by their minimum.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut covered = 0;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::invalid("set partition", "empty block"));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::invalid(
                        "set partition",
                        format!("element {x} repeated or out of range 1..={n}"),
                    ));
                }
                seen[x] = true;
                covered += 1;
            }
        }
        if covered != n {
            return Err(Error::invalid(
                "set partition",
                format!("blocks cover {covered} of {n} elements"),
            ));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// The minimum element of the lattice: all singletons.
    pub fn singletons(n: usize) -> Self {
        SetPartition {
            n,
            blocks: (1..=n).map(|x| vec![x]).collect(),
        }
    }

    /// The maximum element of the lattice: one block.
    pub fn one_block(n: usize) -> Self {
        SetPartition {
            n,
            blocks: if n == 0 { vec![] } else { vec![(1..=n).collect()] },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block id of each element, indexed `1..=n`.
    fn block_ids(&self) -> Vec<usize> {
        let mut ids = vec![usize::MAX; self.n + 1];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                ids[x] = b;
            }
        }
        ids
    }

    /// Refinement order: `self <= other` iff `other` can be obtained by
    /// merging blocks of `self` (so the all-singletons partition is minimal).
    ///
    /// # Panics
    ///
    /// Panics if the two partitions have different ground sets.
    pub fn leq(&self, other: &SetPartition) -> bool {
        assert_eq!(self.n, other.n, "partitions of different ground sets");
        let ids = other.block_ids();
        self.blocks
            .iter()
            .all(|block| block.iter().all(|&x| ids[x] == ids[block[0]]))
    }

    /// The type: block sizes sorted into a partition of `n`.
    pub fn block_type(&self) -> IntPartition {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        IntPartition { parts: sizes }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let elems: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                elems.join(" ")
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(" | "))
    }
}

/// All `Bell(n)` set partitions of `{1..n}`, enumerated through restricted
/// growth strings (which yields the canonical block order directly).
/// Intended for `n <= 12`.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(SetPartition { n, blocks: vec![] });
        return out;
    }
    let mut rgs = vec![0usize; n];
    loop {
        let num_blocks = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); num_blocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        out.push(SetPartition { n, blocks });
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for r in rgs[i + 1..].iter_mut() {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// The interval-blocks set partition of type `lambda`: consecutive blocks
/// `{1..lambda_1}, {lambda_1+1..lambda_1+lambda_2}, ...`.
pub fn interval_partition(lambda: &IntPartition) -> SetPartition {
    let mut blocks = Vec::with_capacity(lambda.len());
    let mut next = 1;
    for &part in lambda.parts() {
        blocks.push((next..next + part).collect());
        next += part;
    }
    SetPartition {
        n: lambda.n(),
        blocks,
    }
}

/// Möbius function of the interval `[fine, coarse]` in the refinement
/// lattice. On such intervals it factors over the blocks of `coarse`:
/// a block absorbing `m` blocks of `fine` contributes `(-1)^{m-1} (m-1)!`.
pub fn mobius(fine: &SetPartition, coarse: &SetPartition) -> Result<BigInt> {
    if fine.n() != coarse.n() || !fine.leq(coarse) {
        return Err(Error::NotRefinement);
    }
    let ids = coarse.block_ids();
    let mut absorbed = vec![0usize; coarse.num_blocks()];
    for block in fine.blocks() {
        absorbed[ids[block[0]]] += 1;
    }
    Ok(absorbed.iter().map(|&m| signed_cycle_factor(m)).product())
}

/// `(-1)^{m-1} (m-1)!`, the per-block Möbius factor.
fn signed_cycle_factor(m: usize) -> BigInt {
    let f = factorial(m - 1);
    if m.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

// ---------------------------------------------------------------------------
// Stirling numbers and block sums
// ---------------------------------------------------------------------------

/// Unsigned Stirling number of the first kind: permutations of `m` letters
/// with exactly `j` cycles.
pub fn stirling_cycles(m: usize, j: usize) -> BigInt {
    if j > m {
        return BigInt::zero();
    }
    if m == 0 {
        return BigInt::one();
    }
    // c(i, j) = c(i-1, j-1) + (i-1) c(i-1, j)
    let mut prev = vec![BigInt::zero(); j + 1];
    prev[0] = BigInt::one();
    for i in 1..=m {
        let mut curr = vec![BigInt::zero(); j + 1];
        for jj in 1..=j.min(i) {
            curr[jj] = &prev[jj - 1] + &prev[jj] * (i as u64 - 1);
        }
        prev = curr;
    }
    prev.pop().unwrap()
}

/// Signed sum of Möbius values over the coarsenings of the interval
/// partition of `lambda` with exactly `n - d` blocks:
/// `sum_{L >= Pi(lambda), #L = n-d} mu(Pi(lambda), L)`.
///
/// Evaluated on the collapsed ground set of `l = len(lambda)` points. Equals
/// `(-1)^{d-k} stirling_cycles(n-k, n-d)` where `k = n - l`; zero outside
/// `k <= d <= n`.
pub fn signed_block_sum(lambda: &IntPartition, d: usize) -> BigInt {
    block_sum(lambda, d, false)
}

/// Same sum with every Möbius value replaced by its absolute value.
pub fn abs_block_sum(lambda: &IntPartition, d: usize) -> BigInt {
    block_sum(lambda, d, true)
}

fn block_sum(lambda: &IntPartition, d: usize, absolute: bool) -> BigInt {
    let n = lambda.n();
    let l = lambda.len();
    if d > n {
        return BigInt::zero();
    }
    let target_blocks = n - d;
    let mut sum = BigInt::zero();
    for theta in set_partitions(l) {
        if theta.num_blocks() != target_blocks {
            continue;
        }
        let mut term = BigInt::one();
        for block in theta.blocks() {
            let f = signed_cycle_factor(block.len());
            term *= if absolute {
                num_traits::Signed::abs(&f)
            } else {
                f
            };
        }
        sum += term;
    }
    sum
}

// ---------------------------------------------------------------------------
// c_mu
// ---------------------------------------------------------------------------

/// The correction coefficients `c_mu` for all `mu` partitioning `n`:
///
/// `c_mu = sum_{Pi in P[n]} type(Pi)! sum_{L >= Pi, type(L) = mu}
/// mu(Pi, L)`.
///
/// Since the inner sum depends on `Pi` only through its type, the outer sum
/// collapses to one representative interval partition per `lambda`, weighted
/// by `lambda! * #{Pi of type lambda} = n! / prod_j m_j(lambda)!`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CmuTable {
    n: usize,
    entries: Vec<(IntPartition, BigInt)>,
}

impl CmuTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entries in canonical partition order (largest part first).
    pub fn entries(&self) -> &[(IntPartition, BigInt)] {
        &self.entries
    }

    pub fn get(&self, mu: &IntPartition) -> Option<&BigInt> {
        self.entries
            .iter()
            .find(|(m, _)| m == mu)
            .map(|(_, c)| c)
    }
}

/// Compute the full `c_mu` table for `n` by enumerating, for each
/// `lambda`, the coarsenings of its interval partition on the collapsed
/// ground set. Intended for `n <= 8`.
pub fn c_mu(n: usize) -> CmuTable {
    let nfact = factorial(n);
    let mut map: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
    for lambda in all_partitions(n) {
        let weight = &nfact / lambda.symmetry_factor();
        for theta in set_partitions(lambda.len()) {
            // Merge lambda's interval blocks according to theta: the merged
            // block sizes are sums of the absorbed parts.
            let mut mu_parts: Vec<usize> = theta
                .blocks()
                .iter()
                .map(|block| block.iter().map(|&i| lambda.parts()[i - 1]).sum())
                .collect();
            mu_parts.sort_unstable_by(|a, b| b.cmp(a));
            let mob: BigInt = theta
                .blocks()
                .iter()
                .map(|b| signed_cycle_factor(b.len()))
                .product();
            *map.entry(mu_parts).or_insert_with(BigInt::zero) += &weight * mob;
        }
    }
    let entries = all_partitions(n)
        .into_iter()
        .map(|mu| {
            let c = map.remove(mu.parts()).unwrap_or_else(BigInt::zero);
            (mu, c)
        })
        .collect();
    CmuTable { n, entries }
}

/// Number of permutations of `n` letters whose cycle type is `mu`:
/// `n! / (prod_i mu_i * prod_j m_j!)`. This closed form equals `c_mu` and
/// serves as an independent oracle for the lattice route.
pub fn cycle_type_count(mu: &IntPartition) -> BigInt {
    let mut denom = mu.symmetry_factor();
    for &part in mu.parts() {
        denom *= part as u64;
    }
    factorial(mu.n()) / denom
}
