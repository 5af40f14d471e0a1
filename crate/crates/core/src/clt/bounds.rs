//! The inequality suite behind the correction-factor decay: sign uniformity
//! and the Stirling identity for the lattice block sums, the elementary
//! Stirling bounds, the `3 n^{2d}` aggregate bound, and the modulus bound for
//! `|F_n - 1|` on the torus.
//!
//! Two of the inequalities are claimed only "for n sufficiently large", so
//! they are reported with an empirically measured validity threshold instead
//! of being asserted universally; `asserted` distinguishes the two kinds.

use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::factorial;
use crate::partitions::{all_partitions, set_partitions, stirling_cycles};

use super::{moments, CltContext};

/// One inequality (or identity) instance.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub check_id: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    /// Whether the source claims this instance universally (as opposed to
    /// "for n sufficiently large", which is only threshold-reported).
    pub asserted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub n_max: usize,
    /// Smallest n such that the `3 n^{2d}` bound holds for all d >= 1 from
    /// there up to `n_max`.
    pub lemma6_threshold: Option<usize>,
    /// Smallest n such that the torus modulus bound holds at all sample
    /// points from there up to the evaluation cap.
    pub eq13_threshold: Option<usize>,
    /// True iff every `asserted` check passes.
    pub all_pass: bool,
    pub checks: Vec<BoundCheck>,
}

/// Sum of `lambda!` over partitions of `n` with exactly `len` parts.
fn factorial_sum_by_len(n: usize, len: usize) -> BigInt {
    all_partitions(n)
        .into_iter()
        .filter(|l| l.len() == len)
        .map(|l| l.factorial())
        .sum()
}

/// The aggregate `sum_k (sum_{l(lambda)=n-k} lambda!) c(n-k, n-d)` bounded
/// by `3 n^{2d}`.
fn lemma6_lhs(n: usize, d: usize) -> BigInt {
    let mut lhs = BigInt::zero();
    for k in 0..=d.min(n.saturating_sub(1)) {
        lhs += factorial_sum_by_len(n, n - k) * stirling_cycles(n - k, n - d);
    }
    lhs
}

fn big_pow(base: usize, exp: usize) -> BigInt {
    BigInt::from(base as u64).pow(exp as u64)
}

/// Sample points for the torus modulus bound.
const EQ13_POINTS: [(f64, f64); 3] = [(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)];

/// Run the whole inequality suite up to `n_max`. Lattice-exact parts cap at
/// `n = 8`; the Stirling-only inequalities run for every `n <= n_max`.
pub fn bound_checks(n_max: usize) -> Result<BoundsReport> {
    let mut checks = Vec::new();
    let lattice_cap = n_max.min(8);
    let eval_cap = n_max.min(8);

    // Sign uniformity and the Stirling identity for the lattice block sums,
    // by direct enumeration on the collapsed ground set.
    for n in 1..=lattice_cap {
        let lambdas = all_partitions(n);
        for d in 0..=n {
            let mut sign_violations = 0u64;
            let mut stirling_mismatches = 0u64;
            for lambda in &lambdas {
                let k = n - lambda.len();
                let mut signed = BigInt::zero();
                for theta in set_partitions(lambda.len()) {
                    if theta.num_blocks() != n - d {
                        continue;
                    }
                    let mut term = BigInt::from(1);
                    for block in theta.blocks() {
                        let m = block.len();
                        let f = factorial(m - 1);
                        term *= if m % 2 == 0 { -f } else { f };
                    }
                    let expected_negative = d >= k && (d - k) % 2 == 1;
                    if term.is_negative() != expected_negative {
                        sign_violations += 1;
                    }
                    signed += term;
                }
                let expect = if d < k {
                    BigInt::zero()
                } else {
                    let s = stirling_cycles(n - k, n - d);
                    if (d - k) % 2 == 0 {
                        s
                    } else {
                        -s
                    }
                };
                if signed != expect {
                    stirling_mismatches += 1;
                }
            }
            checks.push(BoundCheck {
                check_id: "eq14_sign_uniformity".into(),
                n,
                d: Some(d),
                k: None,
                lhs: sign_violations.to_string(),
                rhs: "0".into(),
                pass: sign_violations == 0,
                asserted: true,
            });
            checks.push(BoundCheck {
                check_id: "eq14_stirling".into(),
                n,
                d: Some(d),
                k: None,
                lhs: stirling_mismatches.to_string(),
                rhs: "0".into(),
                pass: stirling_mismatches == 0,
                asserted: true,
            });
        }
    }

    // sum |mu| = c(n-k, n-d) <= (n-k)^{2(d-k)}
    for n in 1..=n_max {
        for k in 0..n {
            for d in k..=n {
                let lhs = stirling_cycles(n - k, n - d);
                let rhs = big_pow(n - k, 2 * (d - k));
                checks.push(BoundCheck {
                    check_id: "mu_abs_bound".into(),
                    n,
                    d: Some(d),
                    k: Some(k),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    pass: lhs <= rhs,
                    asserted: true,
                });
            }
        }
    }

    // sum_{l(lambda)=n-k} lambda! c(n-k, n-d) <= (n-k)^{2d-k} (k+1)!
    for n in 1..=n_max {
        for k in 0..n {
            for d in k..=n {
                let lhs = factorial_sum_by_len(n, n - k) * stirling_cycles(n - k, n - d);
                let rhs = big_pow(n - k, 2 * d - k) * factorial(k + 1);
                checks.push(BoundCheck {
                    check_id: "grouped_bound".into(),
                    n,
                    d: Some(d),
                    k: Some(k),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    pass: lhs <= rhs,
                    asserted: true,
                });
            }
        }
    }

    // sum over k <= 3 n^{2d}: claimed for n sufficiently large only.
    let mut lemma6_failing = Vec::new();
    for n in 1..=n_max {
        for d in 0..=n {
            let lhs = lemma6_lhs(n, d);
            let rhs = BigInt::from(3) * big_pow(n, 2 * d);
            let pass = lhs <= rhs;
            if !pass && d >= 1 {
                lemma6_failing.push(n);
            }
            checks.push(BoundCheck {
                check_id: "lemma6_bound".into(),
                n,
                d: Some(d),
                k: None,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                pass,
                asserted: false,
            });
        }
    }
    let lemma6_threshold =
        (1..=n_max).find(|&n0| lemma6_failing.iter().all(|&bad| bad < n0));

    // Torus modulus bound: |F_n - 1| <= sum_{d>=1} (|st|/sigma^2)^d A(n, d),
    // where A(n, d) sums the partition coefficients with n-d parts, i.e. the
    // unsigned Stirling number c(n, n-d). Needs every |[c]| >= 1, which only
    // holds for n large against the sample points, hence threshold-reported.
    let mut eq13_failing = Vec::new();
    for n in 2..=eval_cap {
        let ctx = CltContext::new(n)?;
        let m = moments(n);
        let sigma2 = m.sigma * m.sigma;
        for &(s, t) in &EQ13_POINTS {
            let lhs = (ctx.correction_eval(s, t)?
                - num_complex::Complex64::new(1.0, 0.0))
            .norm();
            let ratio = (s * t).abs() / sigma2;
            let mut rhs = 0.0;
            for d in 1..=n {
                let a = stirling_cycles(n, n - d)
                    .to_f64()
                    .expect("stirling in f64 range");
                rhs += ratio.powi(d as i32) * a;
            }
            let pass = lhs <= rhs;
            if !pass {
                eq13_failing.push(n);
            }
            checks.push(BoundCheck {
                check_id: format!("eq13_modulus(s={s},t={t})"),
                n,
                d: None,
                k: None,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
                pass,
                asserted: false,
            });
        }
    }
    let eq13_threshold =
        (2..=eval_cap).find(|&n0| eq13_failing.iter().all(|&bad| bad < n0));

    // Final geometric-series estimate at M = 2: |F_n - 1| over the compact
    // square is bounded by 3 sum ((Mn)^2/sigma^2)^d. Wildly loose at desk
    // scale; informational.
    for n in 2..=eval_cap {
        let ctx = CltContext::new(n)?;
        let lhs = super::max_correction_deviation(&ctx, 2.0, 9)?;
        let m = moments(n);
        let ratio = (2.0 * n as f64).powi(2) / (m.sigma * m.sigma);
        let rhs: f64 = 3.0 * (1..=n).map(|d| ratio.powi(d as i32)).sum::<f64>();
        checks.push(BoundCheck {
            check_id: "geometric_series_bound(M=2)".into(),
            n,
            d: None,
            k: None,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs <= rhs,
            asserted: false,
        });
    }

    let all_pass = checks.iter().filter(|c| c.asserted).all(|c| c.pass);
    Ok(BoundsReport {
        n_max,
        lemma6_threshold,
        eq13_threshold,
        all_pass,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_bound_spot_instance() {
        // c(4, 3) = 6 <= 4^2 (instance n=4, k=0, d=1 of the mu bound).
        assert_eq!(stirling_cycles(4, 3), BigInt::from(6));
        assert!(stirling_cycles(4, 3) <= big_pow(4, 2));
    }

    #[test]
    fn lemma6_at_d_zero() {
        // LHS = 1 <= 3 for every n.
        for n in 1..=8 {
            assert_eq!(lemma6_lhs(n, 0), BigInt::from(1));
        }
    }

    #[test]
    fn grouped_bound_is_tight_at_full_merge() {
        // n = 8, k = 7, d = 7: lhs = 8! = rhs.
        let lhs = factorial_sum_by_len(8, 1) * stirling_cycles(1, 1);
        let rhs = big_pow(1, 7) * factorial(8);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn suite_passes_at_n5() {
        let report = bound_checks(5).unwrap();
        assert!(report.all_pass);
        for c in report.checks.iter().filter(|c| c.check_id.starts_with("eq14")) {
            assert!(c.pass, "{}: n={} d={:?}", c.check_id, c.n, c.d);
        }
        assert_eq!(report.lemma6_threshold, Some(1));
    }

    #[test]
    fn report_serializes_deterministically() {
        let a = serde_json::to_string(&bound_checks(3).unwrap()).unwrap();
        let b = serde_json::to_string(&bound_checks(3).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("mu_abs_bound"));
    }
}
