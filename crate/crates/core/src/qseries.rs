//! q-analog primitives and the series route to the joint generating
//! polynomial `H_n`.
//!
//! Roselle's identity writes `sum_n H_n z^n / ((p)_n (q)_n)` as the product
//! `prod_{a,b >= 0} 1/(1 - p^a q^b z)`, whose `z^n` coefficient `h_n` is the
//! complete homogeneous function of the alphabet `{p^a q^b}`. We compute
//! `h_n` by the Newton recurrence `m h_m = sum_k p_k h_{m-k}` where the k-th
//! power sum factors as two geometric series, so multiplying by it is a pair
//! of strided prefix sums — O(grid) per term instead of a general truncated
//! product. `H_n` is then `(p)_n (q)_n h_n` at truncation `binom(n,2)`,
//! exactly the degree of `H_n`, so nothing is lost.
//!
//! The direct factor-by-factor expansion of the product is kept as an
//! independent cross-check for tiny `n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{BivarPoly, TruncatedSeries, Var};
use crate::{factorial, max_stat};

/// The q-integer `[c] = 1 + x + ... + x^{c-1}` in the chosen variable.
pub fn q_int(c: usize, var: Var) -> BivarPoly {
    assert!(c >= 1, "q-integer requires c >= 1");
    let mut p = BivarPoly::zero();
    for e in 0..c {
        p = &p + &var_monomial(var, e);
    }
    p
}

/// The q-factorial `[n]! = [n] [n-1] ... [1]`; the empty product is 1.
pub fn q_factorial(n: usize, var: Var) -> BivarPoly {
    let mut p = BivarPoly::one();
    for c in 1..=n {
        p = &p * &q_int(c, var);
    }
    p
}

/// The Pochhammer-style product `(x)_n = (1 - x)(1 - x^2) ... (1 - x^n)`.
pub fn pochhammer(n: usize, var: Var) -> BivarPoly {
    let mut p = BivarPoly::one();
    for c in 1..=n {
        let factor = &BivarPoly::one() - &var_monomial(var, c);
        p = &p * &factor;
    }
    p
}

fn var_monomial(var: Var, e: usize) -> BivarPoly {
    match var {
        Var::P => BivarPoly::monomial(e, 0, BigInt::one()),
        Var::Q => BivarPoly::monomial(0, e, BigInt::one()),
    }
}

/// The k-th power sum of the alphabet `{p^a q^b}`, truncated:
/// `sum_{a,b >= 0} p^{ka} q^{kb} = (sum_a p^{ka})(sum_b q^{kb})`.
pub fn power_sum_trunc(k: usize, trunc_p: usize, trunc_q: usize) -> TruncatedSeries {
    assert!(k >= 1, "power sum requires k >= 1");
    let mut s = TruncatedSeries::zero(trunc_p, trunc_q);
    let mut a = 0;
    while k * a <= trunc_p {
        let mut b = 0;
        while k * b <= trunc_q {
            let one = BivarPoly::monomial(k * a, k * b, BigInt::one());
            s.add_assign(&one.to_series(trunc_p, trunc_q))
                .expect("matching truncations");
            b += 1;
        }
        a += 1;
    }
    s
}

/// Complete homogeneous functions `h_0 ... h_n` of the alphabet `{p^a q^b}`,
/// via Newton's identities. Every division by `m` must be exact; a remainder
/// signals an arithmetic bug and is reported as an inconsistency.
pub fn complete_homog(n: usize, trunc_p: usize, trunc_q: usize) -> Result<Vec<TruncatedSeries>> {
    let mut hs = vec![TruncatedSeries::one(trunc_p, trunc_q)];
    for m in 1..=n {
        let mut acc = TruncatedSeries::zero(trunc_p, trunc_q);
        for k in 1..=m {
            // p_k * h_{m-k}: the power sum factors into geometric series.
            let term = hs[m - k]
                .clone()
                .mul_geometric(Var::P, k)
                .mul_geometric(Var::Q, k);
            acc.add_assign(&term)?;
        }
        hs.push(acc.div_exact(m as u64)?);
    }
    Ok(hs)
}

/// The joint `(inv, maj)` generating polynomial `H_n = (p)_n (q)_n h_n`,
/// computed through the series route at truncation `binom(n,2)`.
///
/// The result is validated to be a genuine polynomial of the expected degree
/// with nonnegative coefficients summing to `n!`.
pub fn roselle_hn(n: usize) -> Result<BivarPoly> {
    let b = max_stat(n);
    let mut s = complete_homog(n, b, b)?.pop().expect("h_n present");
    for c in 1..=n {
        s = s.mul_one_minus_power(Var::P, c);
        s = s.mul_one_minus_power(Var::Q, c);
    }
    let poly = s.to_poly();
    validate_hn(n, &poly)?;
    Ok(poly)
}

fn validate_hn(n: usize, poly: &BivarPoly) -> Result<()> {
    let b = max_stat(n);
    let expected_deg = if n >= 2 { b } else { 0 };
    if poly.deg_p() != expected_deg || poly.deg_q() != expected_deg {
        return Err(Error::Inconsistency(format!(
            "H_{n} has degree ({}, {}), expected ({expected_deg}, {expected_deg})",
            poly.deg_p(),
            poly.deg_q()
        )));
    }
    if poly.nonzero_terms().any(|(_, _, c)| c < &BigInt::zero()) {
        return Err(Error::Inconsistency(format!(
            "H_{n} has a negative coefficient"
        )));
    }
    let total = poly.coeff_sum();
    let expected = factorial(n);
    if total != expected {
        return Err(Error::Inconsistency(format!(
            "H_{n} coefficients sum to {total}, expected {n}! = {expected}"
        )));
    }
    Ok(())
}

/// The `z^n` coefficient of `prod 1/(1 - p^a q^b z)` over the truncation box
/// `a <= trunc_p, b <= trunc_q`, expanded factor by factor. Factors outside
/// the box only contribute monomials past the truncation, so restricting the
/// box is exact.
///
/// Quadratic in the box size; intended as a tiny-n cross-check of
/// [`complete_homog`].
pub fn roselle_product_direct(n: usize, trunc_p: usize, trunc_q: usize) -> TruncatedSeries {
    // z-coefficients of the partial product, kept modulo z^{n+1}.
    let mut z_coeffs = vec![TruncatedSeries::zero(trunc_p, trunc_q); n + 1];
    z_coeffs[0] = TruncatedSeries::one(trunc_p, trunc_q);
    for a in 0..=trunc_p {
        for b in 0..=trunc_q {
            // Multiply by 1/(1 - p^a q^b z) = sum_r (p^a q^b)^r z^r.
            // Geometric in z: new[m] = old[m] + p^a q^b * new[m-1], so an
            // ascending in-place sweep suffices.
            for m in 1..=n {
                let (lo, hi) = z_coeffs.split_at_mut(m);
                hi[0]
                    .add_shifted_assign(&lo[m - 1], a, b)
                    .expect("matching truncations");
            }
        }
    }
    z_coeffs.pop().expect("z^n coefficient present")
}
