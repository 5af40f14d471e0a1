//! Dense bivariate polynomials and truncated power series over
//! arbitrary-precision integers.
//!
//! Both types store a dense `(deg_p+1) x (deg_q+1)` grid of `BigInt`
//! coefficients, entry `(i, j)` being the coefficient of `p^i q^j`. The joint
//! generating polynomials computed here are dense across their full support,
//! so a rectangular grid beats sparse maps on both memory and multiplication
//! locality.
//!
//! All values are immutable after construction and every operation is pure,
//! so results are bit-identical regardless of evaluation order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

static ZERO: LazyLock<BigInt> = LazyLock::new(BigInt::zero);

/// The two formal variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    P,
    Q,
}

// ---------------------------------------------------------------------------
// BivarPoly
// ---------------------------------------------------------------------------

/// A dense bivariate polynomial with exact integer coefficients.
///
/// Kept canonical: unless the polynomial is zero (with `deg_p = deg_q = 0`),
/// the top row and top column each contain a nonzero entry.
#[derive(Clone, PartialEq, Eq)]
pub struct BivarPoly {
    deg_p: usize,
    deg_q: usize,
    coeffs: Vec<BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly {
            deg_p: 0,
            deg_q: 0,
            coeffs: vec![BigInt::zero()],
        }
    }

    pub fn one() -> Self {
        BivarPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        BivarPoly {
            deg_p: 0,
            deg_q: 0,
            coeffs: vec![c],
        }
    }

    /// The monomial `c * p^i q^j`.
    pub fn monomial(i: usize, j: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); (i + 1) * (j + 1)];
        coeffs[i * (j + 1) + j] = c;
        let mut poly = BivarPoly {
            deg_p: i,
            deg_q: j,
            coeffs,
        };
        poly.canonicalize();
        poly
    }

    /// Build from a dense row-major grid; the grid length must be exactly
    /// `(deg_p+1)*(deg_q+1)`. The result is canonicalized.
    pub fn from_grid(deg_p: usize, deg_q: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != (deg_p + 1) * (deg_q + 1) {
            return Err(Error::invalid(
                "coefficient grid",
                format!(
                    "expected {} entries for degrees ({deg_p}, {deg_q}), got {}",
                    (deg_p + 1) * (deg_q + 1),
                    coeffs.len()
                ),
            ));
        }
        let mut poly = BivarPoly {
            deg_p,
            deg_q,
            coeffs,
        };
        poly.canonicalize();
        Ok(poly)
    }

    pub fn deg_p(&self) -> usize {
        self.deg_p
    }

    pub fn deg_q(&self) -> usize {
        self.deg_q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient of `p^i q^j`; out-of-range indices read as zero.
    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        if i <= self.deg_p && j <= self.deg_q {
            &self.coeffs[i * (self.deg_q + 1) + j]
        } else {
            &ZERO
        }
    }

    /// Iterate nonzero coefficients as `(i, j, c)` in row-major order.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        let cols = self.deg_q + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / cols, idx % cols, c))
    }

    /// Drop zero top rows/columns so the degree pair is tight.
    pub fn canonicalize(&mut self) {
        let mut dp = self.deg_p;
        let mut dq = self.deg_q;
        let cols = self.deg_q + 1;
        let row_zero = |i: usize, dq: usize| (0..=dq).all(|j| self.coeffs[i * cols + j].is_zero());
        let col_zero = |j: usize, dp: usize| (0..=dp).all(|i| self.coeffs[i * cols + j].is_zero());
        while dp > 0 && row_zero(dp, dq) {
            dp -= 1;
        }
        while dq > 0 && col_zero(dq, dp) {
            dq -= 1;
        }
        if dp == self.deg_p && dq == self.deg_q {
            return;
        }
        let mut coeffs = Vec::with_capacity((dp + 1) * (dq + 1));
        for i in 0..=dp {
            for j in 0..=dq {
                coeffs.push(std::mem::take(&mut self.coeffs[i * cols + j]));
            }
        }
        self.deg_p = dp;
        self.deg_q = dq;
        self.coeffs = coeffs;
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return BivarPoly::zero();
        }
        BivarPoly {
            deg_p: self.deg_p,
            deg_q: self.deg_q,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Sum of all coefficients, i.e. the value at `p = q = 1`.
    pub fn coeff_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Sum of absolute values of all coefficients.
    pub fn coeff_abs_sum(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Transpose the grid, i.e. swap the roles of `p` and `q`.
    pub fn swap_vars(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for j in 0..=self.deg_q {
            for i in 0..=self.deg_p {
                coeffs.push(self.coeffs[i * (self.deg_q + 1) + j].clone());
            }
        }
        BivarPoly {
            deg_p: self.deg_q,
            deg_q: self.deg_p,
            coeffs,
        }
    }

    /// Substitute `1` for one variable, collapsing to a polynomial in the
    /// other (still represented as bivariate with the collapsed degree 0).
    pub fn substitute_one(&self, var: Var) -> Self {
        match var {
            Var::P => {
                let cols = self.deg_q + 1;
                let mut out = vec![BigInt::zero(); cols];
                for i in 0..=self.deg_p {
                    for j in 0..cols {
                        out[j] += &self.coeffs[i * cols + j];
                    }
                }
                let mut poly = BivarPoly {
                    deg_p: 0,
                    deg_q: self.deg_q,
                    coeffs: out,
                };
                poly.canonicalize();
                poly
            }
            Var::Q => self.swap_vars().substitute_one(Var::P).swap_vars(),
        }
    }

    /// Evaluate `sum_{i,j} (c_ij / divisor) p^i q^j` in double precision.
    ///
    /// Each rational factor `c_ij / divisor` is converted to a double
    /// individually, so no huge integer sum is ever formed in floating point;
    /// with unit-modulus `p, q` and all `|c_ij| <= divisor`, the absolute
    /// error stays around `termcount * eps`.
    ///
    /// # Panics
    ///
    /// Panics if `divisor < 1`.
    pub fn eval_scaled(&self, p: Complex64, q: Complex64, divisor: &BigInt) -> Complex64 {
        assert!(divisor >= &BigInt::one(), "divisor must be >= 1");
        let div = divisor
            .to_f64()
            .expect("divisor representable as a double");
        let p_pows = pow_table(p, self.deg_p);
        let q_pows = pow_table(q, self.deg_q);
        let cols = self.deg_q + 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=self.deg_p {
            for j in 0..cols {
                let c = &self.coeffs[i * cols + j];
                if c.is_zero() {
                    continue;
                }
                let ratio = c.to_f64().expect("coefficient representable") / div;
                acc += p_pows[i] * q_pows[j] * ratio;
            }
        }
        acc
    }

    /// View as a truncated series, discarding exponents above the truncation
    /// orders.
    pub fn to_series(&self, trunc_p: usize, trunc_q: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(trunc_p, trunc_q);
        for (i, j, c) in self.nonzero_terms() {
            if i <= trunc_p && j <= trunc_q {
                s.coeffs[i * (trunc_q + 1) + j] = c.clone();
            }
        }
        s
    }
}

fn pow_table(base: Complex64, deg: usize) -> Vec<Complex64> {
    let mut pows = Vec::with_capacity(deg + 1);
    pows.push(Complex64::new(1.0, 0.0));
    for i in 1..=deg {
        let prev = pows[i - 1];
        pows.push(prev * base);
    }
    pows
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        binop(self, rhs, false)
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        binop(self, rhs, true)
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            deg_p: self.deg_p,
            deg_q: self.deg_q,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn binop(a: &BivarPoly, b: &BivarPoly, subtract: bool) -> BivarPoly {
    let dp = a.deg_p.max(b.deg_p);
    let dq = a.deg_q.max(b.deg_q);
    let mut coeffs = Vec::with_capacity((dp + 1) * (dq + 1));
    for i in 0..=dp {
        for j in 0..=dq {
            let mut c = a.coeff(i, j).clone();
            if subtract {
                c -= b.coeff(i, j);
            } else {
                c += b.coeff(i, j);
            }
            coeffs.push(c);
        }
    }
    let mut out = BivarPoly {
        deg_p: dp,
        deg_q: dq,
        coeffs,
    };
    out.canonicalize();
    out
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;

    /// Schoolbook product, skipping zero coefficients of the left factor.
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        if self.is_zero() || rhs.is_zero() {
            return BivarPoly::zero();
        }
        let dp = self.deg_p + rhs.deg_p;
        let dq = self.deg_q + rhs.deg_q;
        let cols = dq + 1;
        let rcols = rhs.deg_q + 1;
        let mut coeffs = vec![BigInt::zero(); (dp + 1) * cols];
        for (i1, j1, c1) in self.nonzero_terms() {
            for i2 in 0..=rhs.deg_p {
                let row = (i1 + i2) * cols + j1;
                for j2 in 0..=rhs.deg_q {
                    let c2 = &rhs.coeffs[i2 * rcols + j2];
                    if c2.is_zero() {
                        continue;
                    }
                    coeffs[row + j2] += c1 * c2;
                }
            }
        }
        let mut out = BivarPoly {
            deg_p: dp,
            deg_q: dq,
            coeffs,
        };
        out.canonicalize();
        out
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, j, c) in self.nonzero_terms() {
            if first {
                write!(f, "{}", term(c, i, j, true))?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}", term(&-c, i, j, false))?;
            } else {
                write!(f, " + {}", term(c, i, j, false))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({self})")
    }
}

fn term(c: &BigInt, i: usize, j: usize, lead: bool) -> String {
    if (i, j) == (0, 0) {
        return format!("{c}");
    }
    let mut parts = Vec::new();
    if !c.is_one() || (lead && c.is_negative()) {
        parts.push(format!("{c}"));
    }
    for (var, e) in [("p", i), ("q", j)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{e}")),
        }
    }
    parts.join(" ")
}

// ---------------------------------------------------------------------------
// TruncatedSeries
// ---------------------------------------------------------------------------

/// A bivariate power series truncated at fixed orders in each variable.
///
/// Arithmetic is exact modulo the ideal generated by `p^{trunc_p+1}` and
/// `q^{trunc_q+1}`; binary operations require equal truncation orders.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    trunc_p: usize,
    trunc_q: usize,
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(trunc_p: usize, trunc_q: usize) -> Self {
        TruncatedSeries {
            trunc_p,
            trunc_q,
            coeffs: vec![BigInt::zero(); (trunc_p + 1) * (trunc_q + 1)],
        }
    }

    pub fn one(trunc_p: usize, trunc_q: usize) -> Self {
        let mut s = TruncatedSeries::zero(trunc_p, trunc_q);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn trunc_p(&self) -> usize {
        self.trunc_p
    }

    pub fn trunc_q(&self) -> usize {
        self.trunc_q
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        if i <= self.trunc_p && j <= self.trunc_q {
            &self.coeffs[i * (self.trunc_q + 1) + j]
        } else {
            &ZERO
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.trunc_p != other.trunc_p || self.trunc_q != other.trunc_q {
            return Err(Error::TruncationMismatch(
                self.trunc_p,
                self.trunc_q,
                other.trunc_p,
                other.trunc_q,
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncatedSeries {
            trunc_p: self.trunc_p,
            trunc_q: self.trunc_q,
            coeffs,
        })
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncatedSeries {
            trunc_p: self.trunc_p,
            trunc_q: self.trunc_q,
            coeffs,
        })
    }

    /// Truncated schoolbook product, skipping zero coefficients.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let tp = self.trunc_p;
        let tq = self.trunc_q;
        let cols = tq + 1;
        let mut coeffs = vec![BigInt::zero(); (tp + 1) * cols];
        for i1 in 0..=tp {
            for j1 in 0..=tq {
                let c1 = &self.coeffs[i1 * cols + j1];
                if c1.is_zero() {
                    continue;
                }
                for i2 in 0..=(tp - i1) {
                    let row = (i1 + i2) * cols + j1;
                    for j2 in 0..=(tq - j1) {
                        let c2 = &other.coeffs[i2 * cols + j2];
                        if c2.is_zero() {
                            continue;
                        }
                        coeffs[row + j2] += c1 * c2;
                    }
                }
            }
        }
        Ok(TruncatedSeries {
            trunc_p: tp,
            trunc_q: tq,
            coeffs,
        })
    }

    /// `self += other * p^dp q^dq` (terms pushed past the truncation are
    /// dropped).
    pub fn add_shifted_assign(&mut self, other: &Self, dp: usize, dq: usize) -> Result<()> {
        self.check_compatible(other)?;
        if dp > self.trunc_p || dq > self.trunc_q {
            return Ok(());
        }
        let cols = self.trunc_q + 1;
        for i in 0..=(self.trunc_p - dp) {
            let src = i * cols;
            let dst = (i + dp) * cols + dq;
            for j in 0..=(self.trunc_q - dq) {
                let c = &other.coeffs[src + j];
                if !c.is_zero() {
                    self.coeffs[dst + j] += c;
                }
            }
        }
        Ok(())
    }

    /// Multiply in place by the geometric series `sum_{a >= 0} x^{step * a}`
    /// (that is, by `1 / (1 - x^step)`) in the chosen variable.
    ///
    /// Implemented as a strided prefix sum along the variable's axis, which
    /// makes it O(grid) instead of a generic truncated product.
    pub fn mul_geometric(mut self, var: Var, step: usize) -> Self {
        assert!(step >= 1, "geometric step must be >= 1");
        let cols = self.trunc_q + 1;
        match var {
            Var::P => {
                for i in step..=self.trunc_p {
                    for j in 0..cols {
                        let (lo, hi) = self.coeffs.split_at_mut(i * cols);
                        hi[j] += &lo[(i - step) * cols + j];
                    }
                }
            }
            Var::Q => {
                for row in self.coeffs.chunks_mut(cols) {
                    for j in step..cols {
                        let (lo, hi) = row.split_at_mut(j);
                        hi[0] += &lo[j - step];
                    }
                }
            }
        }
        self
    }

    /// Multiply in place by `1 - x^step` in the chosen variable. This is the
    /// exact inverse of [`TruncatedSeries::mul_geometric`].
    pub fn mul_one_minus_power(mut self, var: Var, step: usize) -> Self {
        assert!(step >= 1, "step must be >= 1");
        let cols = self.trunc_q + 1;
        match var {
            Var::P => {
                for i in (step..=self.trunc_p).rev() {
                    for j in 0..cols {
                        let (lo, hi) = self.coeffs.split_at_mut(i * cols);
                        hi[j] -= &lo[(i - step) * cols + j];
                    }
                }
            }
            Var::Q => {
                for row in self.coeffs.chunks_mut(cols) {
                    for j in (step..cols).rev() {
                        let (lo, hi) = row.split_at_mut(j);
                        hi[0] -= &lo[j - step];
                    }
                }
            }
        }
        self
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncatedSeries {
            trunc_p: self.trunc_p,
            trunc_q: self.trunc_q,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divide every coefficient by `m`, failing if any division is inexact.
    pub fn div_exact(&self, m: u64) -> Result<Self> {
        let m = BigInt::from(m);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (quot, rem) = num_integer_div_rem(c, &m);
            if !rem.is_zero() {
                return Err(Error::Inconsistency(format!(
                    "expected {c} to be divisible by {m}"
                )));
            }
            coeffs.push(quot);
        }
        Ok(TruncatedSeries {
            trunc_p: self.trunc_p,
            trunc_q: self.trunc_q,
            coeffs,
        })
    }

    /// Convert to a polynomial; the caller asserts that the series really is
    /// polynomial at this truncation.
    pub fn to_poly(&self) -> BivarPoly {
        let mut poly = BivarPoly {
            deg_p: self.trunc_p,
            deg_q: self.trunc_q,
            coeffs: self.coeffs.clone(),
        };
        poly.canonicalize();
        poly
    }
}

fn num_integer_div_rem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    (a / b, a % b)
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncatedSeries[{},{}]({})",
            self.trunc_p,
            self.trunc_q,
            self.to_poly()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(usize, usize, i64)]) -> BivarPoly {
        terms.iter().fold(BivarPoly::zero(), |acc, &(i, j, c)| {
            &acc + &BivarPoly::monomial(i, j, BigInt::from(c))
        })
    }

    /// H_2 = 1 + pq, from enumerating S_2 by hand.
    fn h2() -> BivarPoly {
        poly(&[(0, 0, 1), (1, 1, 1)])
    }

    /// H_3, from enumerating S_3 by hand.
    fn h3() -> BivarPoly {
        poly(&[
            (0, 0, 1),
            (1, 1, 1),
            (1, 2, 1),
            (2, 1, 1),
            (2, 2, 1),
            (3, 3, 1),
        ])
    }

    #[test]
    fn add_identity() {
        let a = poly(&[(0, 0, 1), (1, 1, 1)]);
        assert_eq!(&a + &BivarPoly::zero(), a);
    }

    #[test]
    fn add_mixed_degrees() {
        let a = poly(&[(0, 0, 1), (1, 0, 1)]);
        let b = poly(&[(0, 0, 1), (0, 1, 1)]);
        assert_eq!(&a + &b, poly(&[(0, 0, 2), (1, 0, 1), (0, 1, 1)]));
    }

    #[test]
    fn add_joint_polys() {
        assert_eq!(&h2() + &h2(), poly(&[(0, 0, 2), (1, 1, 2)]));
    }

    #[test]
    fn mul_q_factorial_three() {
        // (1+p)(1+p+p^2) = 1 + 2p + 2p^2 + p^3
        let a = poly(&[(0, 0, 1), (1, 0, 1)]);
        let b = poly(&[(0, 0, 1), (1, 0, 1), (2, 0, 1)]);
        assert_eq!(
            &a * &b,
            poly(&[(0, 0, 1), (1, 0, 2), (2, 0, 2), (3, 0, 1)])
        );
    }

    #[test]
    fn mul_pochhammer_two() {
        // (1-p)(1-p^2) = 1 - p - p^2 + p^3
        let a = poly(&[(0, 0, 1), (1, 0, -1)]);
        let b = poly(&[(0, 0, 1), (2, 0, -1)]);
        assert_eq!(
            &a * &b,
            poly(&[(0, 0, 1), (1, 0, -1), (2, 0, -1), (3, 0, 1)])
        );
    }

    #[test]
    fn mul_by_one_is_identity() {
        let a = h3();
        assert_eq!(&a * &BivarPoly::one(), a);
        assert_eq!(&BivarPoly::one() * &a, a);
    }

    #[test]
    fn canonicalize_trims_zero_fringe() {
        let grid = vec![
            BigInt::from(1),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        let p = BivarPoly::from_grid(1, 1, grid).unwrap();
        assert_eq!(p.deg_p(), 0);
        assert_eq!(p.deg_q(), 0);
        assert_eq!(p, BivarPoly::one());
    }

    #[test]
    fn eval_scaled_h2_at_one_one() {
        let v = h2().eval_scaled(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            &BigInt::from(2),
        );
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_scaled_h3_at_q_minus_one() {
        // H_3(1, -1) = [3]_q! at q = -1 = (1)(1-1)(1-1+1) = 0.
        let v = h3().eval_scaled(
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            &BigInt::from(6),
        );
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn eval_scaled_zero_poly() {
        let v = BivarPoly::zero().eval_scaled(
            Complex64::new(0.3, 0.7),
            Complex64::new(-0.2, 0.5),
            &BigInt::one(),
        );
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn substitute_one_collapses() {
        // H_3(1, q) = 1 + 2q + 2q^2 + q^3 = [3]_q!
        let m = h3().substitute_one(Var::P);
        assert_eq!(
            m,
            poly(&[(0, 0, 1), (0, 1, 2), (0, 2, 2), (0, 3, 1)])
        );
    }

    #[test]
    fn series_mismatched_truncations_error() {
        let a = TruncatedSeries::one(2, 2);
        let b = TruncatedSeries::one(3, 2);
        assert!(matches!(
            a.add(&b),
            Err(Error::TruncationMismatch(2, 2, 3, 2))
        ));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn series_mul_matches_poly_mul_truncated() {
        let a = h3();
        let b = poly(&[(0, 0, 2), (1, 1, -1), (0, 2, 3)]);
        let full = &a * &b;
        let t = a.to_series(3, 3).mul(&b.to_series(3, 3)).unwrap();
        for i in 0..=3 {
            for j in 0..=3 {
                assert_eq!(t.coeff(i, j), full.coeff(i, j));
            }
        }
    }

    #[test]
    fn geometric_matches_generic_mul() {
        let s = h3().to_series(5, 5);
        // geometric series with step 2 in p, as an explicit polynomial
        let geom = poly(&[(0, 0, 1), (2, 0, 1), (4, 0, 1)]).to_series(5, 5);
        let fast = s.clone().mul_geometric(Var::P, 2);
        let slow = s.mul(&geom).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn one_minus_power_inverts_geometric() {
        let s = h3().to_series(6, 6);
        let roundtrip = s
            .clone()
            .mul_geometric(Var::Q, 3)
            .mul_one_minus_power(Var::Q, 3);
        assert_eq!(roundtrip, s);
    }

    #[test]
    fn div_exact_detects_remainders() {
        let s = h2().to_series(1, 1);
        assert!(matches!(s.div_exact(2), Err(Error::Inconsistency(_))));
        let doubled = s.scale(&BigInt::from(2));
        assert_eq!(doubled.div_exact(2).unwrap(), s);
    }

    #[test]
    fn display_small_poly() {
        let p = poly(&[(0, 0, 1), (1, 1, -2), (2, 0, 1)]);
        assert_eq!(p.to_string(), "1 - 2 p q + p^2");
    }
}
