//! Generating functions attached to partitions: `M_lambda` for multisets of
//! pairs with a prescribed multiplicity type, and `R`/`S` for lists of pairs
//! constrained by a set partition (entries equal within blocks; for `S`,
//! additionally distinct across blocks).
//!
//! Small-truncation machinery: `M` is built by direct multiset enumeration,
//! `R` as a product of geometric factors, and `S` by Möbius inversion over
//! the coarsenings of the constraining partition.

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{TruncatedSeries, Var};

use super::{interval_partition, mobius, set_partitions, IntPartition, SetPartition};

/// Generating function of size-`n` multisets of pairs `(a, b)` whose
/// multiset of multiplicities is exactly `lambda`, weighted by the
/// coordinate sums. Direct enumeration; intended for `n <= 5` and small
/// truncations.
pub fn m_lambda_series(lambda: &IntPartition, trunc_p: usize, trunc_q: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(trunc_p, trunc_q);
    let parts = lambda.parts().to_vec();
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(parts.len());
    enumerate_multisets(&parts, 0, trunc_p, trunc_q, &mut chosen, &mut out);
    out
}

/// Recursive choice of one distinct pair per part. Parts with equal value
/// are interchangeable, so their pairs are forced into increasing order;
/// pairs across different part values must merely be distinct.
fn enumerate_multisets(
    parts: &[usize],
    idx: usize,
    budget_p: usize,
    budget_q: usize,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut TruncatedSeries,
) {
    if idx == parts.len() {
        let wp = out.trunc_p() - budget_p;
        let wq = out.trunc_q() - budget_q;
        let one = crate::poly::BivarPoly::monomial(wp, wq, BigInt::one());
        out.add_assign(&one.to_series(out.trunc_p(), out.trunc_q()))
            .expect("matching truncations");
        return;
    }
    let mult = parts[idx];
    let min_pair = if idx > 0 && parts[idx - 1] == mult {
        // same multiplicity as the previous part: enforce strict order
        Some(chosen[idx - 1])
    } else {
        None
    };
    for a in 0..=(budget_p / mult) {
        for b in 0..=(budget_q / mult) {
            let pair = (a, b);
            if let Some(m) = min_pair {
                if pair <= m {
                    continue;
                }
            }
            if chosen.contains(&pair) {
                continue;
            }
            chosen.push(pair);
            enumerate_multisets(
                parts,
                idx + 1,
                budget_p - mult * a,
                budget_q - mult * b,
                chosen,
                out,
            );
            chosen.pop();
        }
    }
}

/// Generating function of lists of pairs that are constant on each block of
/// `pi`: a product of `1 / ((1 - p^{#A})(1 - q^{#A}))` over the blocks.
pub fn r_lambda_series(pi: &SetPartition, trunc_p: usize, trunc_q: usize) -> TruncatedSeries {
    r_from_sizes(
        pi.blocks().iter().map(|b| b.len()),
        trunc_p,
        trunc_q,
    )
}

fn r_from_sizes(
    sizes: impl IntoIterator<Item = usize>,
    trunc_p: usize,
    trunc_q: usize,
) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(trunc_p, trunc_q);
    for size in sizes {
        s = s.mul_geometric(Var::P, size).mul_geometric(Var::Q, size);
    }
    s
}

/// Generating function of lists constant on blocks of `pi` and distinct
/// across blocks, by Möbius inversion: `S_pi = sum_{L >= pi} mu(pi, L) R_L`.
/// The coarsenings are enumerated on the collapsed ground set.
pub fn s_pi_series(pi: &SetPartition, trunc_p: usize, trunc_q: usize) -> TruncatedSeries {
    let sizes: Vec<usize> = pi.blocks().iter().map(|b| b.len()).collect();
    let mut out = TruncatedSeries::zero(trunc_p, trunc_q);
    for theta in set_partitions(sizes.len()) {
        let merged = theta
            .blocks()
            .iter()
            .map(|block| block.iter().map(|&i| sizes[i - 1]).sum::<usize>());
        let r = r_from_sizes(merged, trunc_p, trunc_q);
        let mob = mobius(&SetPartition::singletons(sizes.len()), &theta)
            .expect("singletons refine everything");
        out.add_assign(&r.scale(&mob)).expect("matching truncations");
    }
    out
}

/// Convenience: `S` attached to the interval partition of `lambda`.
///
/// The forgetful map from lists to multisets has fibers of size `n!/lambda!`
/// over type-`lambda` multisets, and those fibers spread over *all* set
/// partitions of type `lambda`:
/// `sum_{Pi : type(Pi) = lambda} S_Pi = (n!/lambda!) M_lambda`.
/// Per representative this reads
/// `S_{Pi(lambda)} = (prod_j m_j(lambda)!) M_lambda`.
pub fn s_of_lambda(lambda: &IntPartition, trunc_p: usize, trunc_q: usize) -> TruncatedSeries {
    s_pi_series(&interval_partition(lambda), trunc_p, trunc_q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::all_partitions;
    use crate::poly::BivarPoly;
    use crate::qseries::complete_homog;
    use crate::factorial;

    fn ip(parts: &[usize]) -> IntPartition {
        IntPartition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn r_of_singletons_in_p2() {
        // ((1+p)(1+q))^2 at truncation 1
        let r = r_lambda_series(&SetPartition::singletons(2), 1, 1);
        let factor = &BivarPoly::monomial(0, 0, BigInt::one())
            + &BivarPoly::monomial(1, 0, BigInt::one());
        let factor_q = &BivarPoly::monomial(0, 0, BigInt::one())
            + &BivarPoly::monomial(0, 1, BigInt::one());
        let expect = &(&factor * &factor) * &(&factor_q * &factor_q);
        assert_eq!(r, expect.to_series(1, 1));
    }

    #[test]
    fn s_at_the_top_equals_r() {
        let top = SetPartition::one_block(2);
        assert_eq!(s_pi_series(&top, 4, 4), r_lambda_series(&top, 4, 4));
    }

    #[test]
    fn s_at_the_bottom_in_p2() {
        let bottom = SetPartition::singletons(2);
        let top = SetPartition::one_block(2);
        let expect = r_lambda_series(&bottom, 4, 4)
            .sub(&r_lambda_series(&top, 4, 4))
            .unwrap();
        assert_eq!(s_pi_series(&bottom, 4, 4), expect);
    }

    #[test]
    fn r_decomposes_into_s() {
        // R_L = sum_{Pi >= L} S_Pi at truncation 4, n <= 4.
        for n in 1..=4 {
            let all = set_partitions(n);
            for l in &all {
                let mut sum = TruncatedSeries::zero(4, 4);
                for pi in all.iter().filter(|pi| l.leq(pi)) {
                    sum.add_assign(&s_pi_series(pi, 4, 4)).unwrap();
                }
                assert_eq!(sum, r_lambda_series(l, 4, 4), "n = {n}, L = {l}");
            }
        }
    }

    #[test]
    fn forgetful_fiber_identity() {
        // Per representative: S_{Pi(lambda)} = (prod m_j!) M_lambda.
        for n in 1..=4 {
            for lambda in all_partitions(n) {
                let lhs = s_of_lambda(&lambda, 4, 4);
                let rhs = m_lambda_series(&lambda, 4, 4).scale(&lambda.symmetry_factor());
                assert_eq!(lhs, rhs, "lambda = {lambda}");
            }
        }
    }

    #[test]
    fn forgetful_fiber_identity_aggregated() {
        // Over all set partitions of type lambda:
        // sum_{Pi : type(Pi) = lambda} S_Pi = (n!/lambda!) M_lambda.
        for n in 1..=4 {
            for lambda in all_partitions(n) {
                let mut lhs = TruncatedSeries::zero(4, 4);
                for pi in set_partitions(n) {
                    if pi.block_type() == lambda {
                        lhs.add_assign(&s_pi_series(&pi, 4, 4)).unwrap();
                    }
                }
                let fiber = factorial(n) / lambda.factorial();
                let rhs = m_lambda_series(&lambda, 4, 4).scale(&fiber);
                assert_eq!(lhs, rhs, "lambda = {lambda}");
            }
        }
    }

    #[test]
    fn multiset_types_sum_to_complete_homog() {
        // sum_{lambda |- n} M_lambda = h_n at matching truncation, n <= 4.
        for n in 1..=4 {
            let hs = complete_homog(n, 4, 4).unwrap();
            let mut sum = TruncatedSeries::zero(4, 4);
            for lambda in all_partitions(n) {
                sum.add_assign(&m_lambda_series(&lambda, 4, 4)).unwrap();
            }
            assert_eq!(sum, hs[n], "n = {n}");
        }
    }

    #[test]
    fn m_lambda_tiny_values() {
        // M_(1): all single pairs; coefficient of p^a q^b is 1.
        let m1 = m_lambda_series(&ip(&[1]), 2, 2);
        for i in 0..=2 {
            for j in 0..=2 {
                assert_eq!(m1.coeff(i, j), &BigInt::one());
            }
        }
        // M_(2): one pair with multiplicity 2; weight doubles the pair.
        let m2 = m_lambda_series(&ip(&[2]), 2, 2);
        assert_eq!(m2.coeff(0, 0), &BigInt::one());
        assert_eq!(m2.coeff(1, 0), &BigInt::from(0));
        assert_eq!(m2.coeff(2, 2), &BigInt::one());
    }
}
