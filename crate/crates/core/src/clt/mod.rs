//! The asymptotic layer: exact moments, the correction factor (as an exact
//! series and numerically on the unit torus), characteristic functions, the
//! factorization identity, and CDF comparisons against the bivariate normal.
//!
//! Everything numeric here is driven by the exact polynomial `H_n`; floating
//! point only enters at evaluation time, with every summand scaled to modulus
//! at most one so roundoff stays near `termcount * eps` regardless of how
//! large `n!` gets.

pub mod bounds;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::{poly_to_table, table_to_poly, JointTable};
use crate::poly::{BivarPoly, TruncatedSeries, Var};
use crate::qseries::{complete_homog, roselle_hn};
use crate::{factorial, max_stat};

/// Default cap for exact `H_n` construction in grid-producing commands; the
/// polynomial has `(binom(n,2)+1)^2` coefficients, about 14.6k at n = 16.
pub const DEFAULT_N_MAX: usize = 16;

/// Opt-in hard cap; coefficients exceed 64-bit range and runtime grows.
pub const HARD_N_MAX: usize = 24;

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

/// Exact mean and variance of `inv` (equivalently `maj`) on `S_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub n: usize,
    /// `n(n-1)/4`
    pub mean: BigRational,
    /// `(2n^3 + 3n^2 - 5n)/72`
    pub variance: BigRational,
    /// Floating square root of the variance.
    pub sigma: f64,
}

pub fn moments(n: usize) -> Moments {
    assert!(n >= 1, "moments require n >= 1");
    let n_i = BigInt::from(n as u64);
    let mean = BigRational::new(&n_i * (&n_i - 1), BigInt::from(4));
    let n2 = &n_i * &n_i;
    let n3 = &n2 * &n_i;
    let variance = BigRational::new(
        BigInt::from(2) * &n3 + BigInt::from(3) * &n2 - BigInt::from(5) * &n_i,
        BigInt::from(72),
    );
    let sigma = ratio_to_f64(&variance).sqrt();
    Moments {
        n,
        mean,
        variance,
        sigma,
    }
}

impl Moments {
    pub fn mean_f64(&self) -> f64 {
        ratio_to_f64(&self.mean)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().expect("numerator in f64 range")
        / r.denom().to_f64().expect("denominator in f64 range")
}

// ---------------------------------------------------------------------------
// Correction factor as an exact series
// ---------------------------------------------------------------------------

/// The correction factor `F_n = n! (1-p)^n (1-q)^n h_n` as a truncated
/// series (the series route). Its constant term is `n!`; the value at
/// `p = q = 1` is what tends to one.
pub fn correction_series(n: usize, trunc: usize) -> Result<TruncatedSeries> {
    let mut s = complete_homog(n, trunc, trunc)?
        .pop()
        .expect("h_n present");
    for _ in 0..n {
        s = s.mul_one_minus_power(Var::P, 1);
        s = s.mul_one_minus_power(Var::Q, 1);
    }
    Ok(s.scale(&factorial(n)))
}

/// The correction factor rebuilt from the partition-indexed coefficients:
/// `F_n = sum_mu c_mu [(1-p)(1-q)]^{n - l(mu)} / prod_i [mu_i]_p [mu_i]_q`,
/// with each `1/[c]` expanded as `(1-x) * sum_j x^{cj}`. Agrees exactly with
/// [`correction_series`].
pub fn correction_series_from_cmu(n: usize, trunc: usize) -> Result<TruncatedSeries> {
    let table = crate::partitions::c_mu(n);
    let mut acc = TruncatedSeries::zero(trunc, trunc);
    for (mu, c) in table.entries() {
        if c.is_zero() {
            continue;
        }
        // prod_i 1/[mu_i]_p [mu_i]_q, together with the [(1-p)(1-q)]^d
        // prefactor, collapses to (1-p)^n (1-q)^n prod_i geometric(mu_i).
        let mut term = TruncatedSeries::one(trunc, trunc);
        for &part in mu.parts() {
            term = term.mul_geometric(Var::P, part);
            term = term.mul_geometric(Var::Q, part);
        }
        for _ in 0..n {
            term = term.mul_one_minus_power(Var::P, 1);
            term = term.mul_one_minus_power(Var::Q, 1);
        }
        acc.add_assign(&term.scale(c))?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Evaluation context
// ---------------------------------------------------------------------------

/// Exact `H_n` plus moments, ready for numeric evaluation on the unit torus.
pub struct CltContext {
    n: usize,
    hn: BivarPoly,
    table: JointTable,
    moments: Moments,
    nfact: BigInt,
}

impl CltContext {
    /// Build `H_n` through the series route.
    pub fn new(n: usize) -> Result<Self> {
        let hn = roselle_hn(n)?;
        Self::from_poly(n, hn)
    }

    /// Wrap an existing joint table (e.g. loaded from cache).
    pub fn from_table(table: JointTable) -> Result<Self> {
        let n = table.n();
        if table.total() != factorial(n) {
            return Err(Error::invalid(
                "joint table",
                format!("counts do not total {n}!"),
            ));
        }
        Ok(CltContext {
            n,
            hn: table_to_poly(&table),
            table,
            moments: moments(n.max(1)),
            nfact: factorial(n),
        })
    }

    fn from_poly(n: usize, hn: BivarPoly) -> Result<Self> {
        let table = poly_to_table(n, &hn)?;
        Ok(CltContext {
            n,
            hn,
            table,
            moments: moments(n.max(1)),
            nfact: factorial(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hn(&self) -> &BivarPoly {
        &self.hn
    }

    pub fn table(&self) -> &JointTable {
        &self.table
    }

    pub fn moments(&self) -> &Moments {
        &self.moments
    }

    fn unit_point(&self, s: f64) -> Complex64 {
        Complex64::from_polar(1.0, s / self.moments.sigma)
    }

    /// `[n]_z! / n!` as a product of scaled q-integers `[c]_z / c`, keeping
    /// every factor near unit modulus.
    fn qfact_scaled(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for c in 1..=self.n {
            acc *= qint_eval(c, z) / c as f64;
        }
        acc
    }

    fn qfact_scaled_checked(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for c in 1..=self.n {
            let factor = qint_eval(c, z);
            if factor.norm() < 1e-12 {
                return Err(Error::QFactorialZero { c });
            }
            acc *= factor / c as f64;
        }
        Ok(acc)
    }

    /// The correction factor `F_n(e^{is/sigma}, e^{it/sigma})
    /// = H_n(p, q) n! / ([n]_p! [n]_q!)`.
    pub fn correction_eval(&self, s: f64, t: f64) -> Result<Complex64> {
        let p = self.unit_point(s);
        let q = self.unit_point(t);
        let num = self.hn.eval_scaled(p, q, &self.nfact);
        let den = self.qfact_scaled_checked(p)? * self.qfact_scaled_checked(q)?;
        Ok(num / den)
    }

    /// Characteristic function of the standardized `inv` (equivalently
    /// `maj`) statistic: `e^{-i mu s / sigma} [n]_p! / n!`.
    pub fn char_marginal(&self, s: f64) -> Complex64 {
        let phase = Complex64::from_polar(1.0, -self.moments.mean_f64() * s / self.moments.sigma);
        phase * self.qfact_scaled(self.unit_point(s))
    }

    /// Joint characteristic function of the standardized pair, through the
    /// probability generating function: `e^{-i mu (s+t)/sigma} H_n(p, q)/n!`.
    pub fn char_joint(&self, s: f64, t: f64) -> Complex64 {
        let phase = Complex64::from_polar(
            1.0,
            -self.moments.mean_f64() * (s + t) / self.moments.sigma,
        );
        let p = self.unit_point(s);
        let q = self.unit_point(t);
        phase * self.hn.eval_scaled(p, q, &self.nfact)
    }

    /// `|char_joint - char_marginal(s) char_marginal(t) F_n|`: exactly zero
    /// in exact arithmetic, so anything observed is pure roundoff.
    pub fn factorization_residual(&self, s: f64, t: f64) -> Result<f64> {
        let joint = self.char_joint(s, t);
        let product = self.char_marginal(s) * self.char_marginal(t) * self.correction_eval(s, t)?;
        Ok((joint - product).norm())
    }

    /// The `d = 1` term of the correction factor on the unit torus:
    /// `(1-p)(1-q) binom(n,2) / ([2]_p [2]_q)`. This is the Theta(1/n)
    /// leading term of `F_n - 1`.
    pub fn leading_correction_term(&self, s: f64, t: f64) -> Complex64 {
        let p = self.unit_point(s);
        let q = self.unit_point(t);
        let one = Complex64::new(1.0, 0.0);
        let coeff = max_stat(self.n) as f64;
        (one - p) * (one - q) * coeff / (qint_eval(2, p) * qint_eval(2, q))
    }
}

fn qint_eval(c: usize, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 0..c {
        acc += pow;
        pow *= z;
    }
    acc
}

/// Characteristic function of the bivariate standard normal.
pub fn gaussian_char(s: f64, t: f64) -> f64 {
    (-(s * s + t * t) / 2.0).exp()
}

/// Standard normal CDF via the complementary error function (absolute error
/// well below 1e-10; cross-checked against quadrature in the tests).
pub fn normal_cdf(u: f64) -> f64 {
    0.5 * libm::erfc(-u / std::f64::consts::SQRT_2)
}

// ---------------------------------------------------------------------------
// CDF comparisons
// ---------------------------------------------------------------------------

/// Exact joint CDF of the standardized pair at `(u, v)`:
/// `P[X_n <= u, Y_n <= v]` summed from the table.
pub fn joint_cdf(table: &JointTable, u: f64, v: f64) -> f64 {
    let m = moments(table.n().max(1));
    let ilim = stat_threshold(&m, u, table.side());
    let jlim = stat_threshold(&m, v, table.side());
    let (Some(ilim), Some(jlim)) = (ilim, jlim) else {
        return 0.0;
    };
    let mut sum = BigInt::zero();
    for i in 0..=ilim {
        for j in 0..=jlim {
            sum += table.count(i, j);
        }
    }
    big_ratio_f64(&sum, &factorial(table.n()))
}

/// Exact marginal CDF of the standardized `inv` statistic.
pub fn marginal_cdf(table: &JointTable, u: f64) -> f64 {
    let m = moments(table.n().max(1));
    let Some(ilim) = stat_threshold(&m, u, table.side()) else {
        return 0.0;
    };
    let marginal = table.inv_marginal();
    let sum: BigInt = marginal[..=ilim].iter().sum();
    big_ratio_f64(&sum, &factorial(table.n()))
}

/// Largest statistic value `i` with `(i - mu)/sigma <= u`, clamped to the
/// table; `None` when even `i = 0` exceeds the threshold.
fn stat_threshold(m: &Moments, u: f64, side: usize) -> Option<usize> {
    let raw = (m.mean_f64() + m.sigma * u).floor();
    if raw < 0.0 {
        None
    } else {
        Some((raw as usize).min(side - 1))
    }
}

fn big_ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    num.to_f64().expect("count in f64 range") / den.to_f64().expect("total in f64 range")
}

/// Maximum absolute difference between the exact joint CDF and the product
/// of standard normal CDFs over the grid.
pub fn bz_distance(table: &JointTable, grid: &[(f64, f64)]) -> f64 {
    grid.iter()
        .map(|&(u, v)| (joint_cdf(table, u, v) - normal_cdf(u) * normal_cdf(v)).abs())
        .fold(0.0, f64::max)
}

/// Maximum absolute difference between the exact marginal CDF and the
/// standard normal CDF over the points.
pub fn marginal_cdf_distance(table: &JointTable, us: &[f64]) -> f64 {
    us.iter()
        .map(|&u| (marginal_cdf(table, u) - normal_cdf(u)).abs())
        .fold(0.0, f64::max)
}

/// The default CDF comparison grid `{-2,-1,0,1,2}^2`.
pub fn default_uv_grid() -> Vec<(f64, f64)> {
    let axis = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut grid = Vec::with_capacity(25);
    for &u in &axis {
        for &v in &axis {
            grid.push((u, v));
        }
    }
    grid
}

// ---------------------------------------------------------------------------
// Evaluation grids
// ---------------------------------------------------------------------------

/// Which function a grid evaluates, and therefore which reference its
/// deviations are measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFunction {
    /// `F_n` on the torus; reference is the constant 1.
    Correction,
    /// Joint characteristic function; reference is the Gaussian limit.
    JointChar,
    /// `char_marginal(s) char_marginal(t) F_n`; reference is `char_joint`,
    /// so the deviation column is the factorization residual.
    FactoredChar,
    /// Exact joint CDF at `(u, v) = (s, t)`; reference is `Phi(u) Phi(v)`.
    JointCdf,
}

impl GridFunction {
    pub fn name(&self) -> &'static str {
        match self {
            GridFunction::Correction => "correction",
            GridFunction::JointChar => "joint-char",
            GridFunction::FactoredChar => "factored-char",
            GridFunction::JointCdf => "joint-cdf",
        }
    }

    pub fn reference_name(&self) -> &'static str {
        match self {
            GridFunction::Correction => "one",
            GridFunction::JointChar => "gaussian",
            GridFunction::FactoredChar => "joint-char",
            GridFunction::JointCdf => "gaussian-cdf-product",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridPoint {
    pub s: f64,
    pub t: f64,
    pub value: Complex64,
    /// `|value - reference|` where the reference function is declared by the
    /// grid metadata.
    pub abs_dev: f64,
}

/// Complex-valued evaluations of one function over an `(s, t)` grid.
#[derive(Clone, Debug)]
pub struct EvalGrid {
    pub n: usize,
    pub function: GridFunction,
    pub s_max: f64,
    pub t_max: f64,
    pub steps: usize,
    pub points: Vec<GridPoint>,
}

impl EvalGrid {
    pub fn max_abs_dev(&self) -> f64 {
        self.points.iter().map(|p| p.abs_dev).fold(0.0, f64::max)
    }
}

fn linspace(max: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 1);
    if steps == 1 {
        return vec![0.0];
    }
    (0..steps)
        .map(|i| -max + 2.0 * max * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Evaluate `function` over the `steps x steps` grid on
/// `[-s_max, s_max] x [-t_max, t_max]`, row-major in `s`.
pub fn eval_grid(
    ctx: &CltContext,
    function: GridFunction,
    s_max: f64,
    t_max: f64,
    steps: usize,
) -> Result<EvalGrid> {
    let ss = linspace(s_max, steps);
    let ts = linspace(t_max, steps);
    let mut points = Vec::with_capacity(ss.len() * ts.len());
    for &s in &ss {
        for &t in &ts {
            let (value, reference) = match function {
                GridFunction::Correction => {
                    (ctx.correction_eval(s, t)?, Complex64::new(1.0, 0.0))
                }
                GridFunction::JointChar => (
                    ctx.char_joint(s, t),
                    Complex64::new(gaussian_char(s, t), 0.0),
                ),
                GridFunction::FactoredChar => {
                    let product =
                        ctx.char_marginal(s) * ctx.char_marginal(t) * ctx.correction_eval(s, t)?;
                    (product, ctx.char_joint(s, t))
                }
                GridFunction::JointCdf => (
                    Complex64::new(joint_cdf(ctx.table(), s, t), 0.0),
                    Complex64::new(normal_cdf(s) * normal_cdf(t), 0.0),
                ),
            };
            points.push(GridPoint {
                s,
                t,
                value,
                abs_dev: (value - reference).norm(),
            });
        }
    }
    Ok(EvalGrid {
        n: ctx.n(),
        function,
        s_max,
        t_max,
        steps,
        points,
    })
}

/// `max |F_n - 1|` over the `steps x steps` grid with `|s|, |t| <= m`.
pub fn max_correction_deviation(ctx: &CltContext, m: f64, steps: usize) -> Result<f64> {
    Ok(eval_grid(ctx, GridFunction::Correction, m, m, steps)?.max_abs_dev())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::joint_table_bruteforce;
    use crate::qseries::q_factorial;

    #[test]
    fn moments_examples() {
        let m4 = moments(4);
        assert_eq!(m4.mean, BigRational::from(BigInt::from(3)));
        assert_eq!(
            m4.variance,
            BigRational::new(BigInt::from(13), BigInt::from(6))
        );
        let m1 = moments(1);
        assert!(m1.mean.is_zero());
        assert!(m1.variance.is_zero());
        let m10 = moments(10);
        assert_eq!(
            m10.variance,
            BigRational::new(BigInt::from(125), BigInt::from(4))
        );
    }

    #[test]
    fn variance_positive_and_asymptotic() {
        for n in 2..=30 {
            assert!(moments(n).variance > BigRational::zero());
        }
        // sigma_n^2 ~ n^3/36
        let n = 1000usize;
        let ratio = ratio_to_f64(&moments(n).variance) / (n.pow(3) as f64 / 36.0);
        assert!((ratio - 1.0).abs() < 2e-3);
    }

    #[test]
    fn correction_series_tiny() {
        // F_1 = 1 exactly.
        let f1 = correction_series(1, 4).unwrap();
        assert_eq!(f1, TruncatedSeries::one(4, 4));
        // F_2 (1+p)(1+q) = 2 (1+pq) as series.
        let f2 = correction_series(2, 6).unwrap();
        let lhs = f2
            .mul_geometric(Var::P, 1)
            .mul_geometric(Var::Q, 1)
            .mul_one_minus_power(Var::P, 2)
            .mul_one_minus_power(Var::Q, 2);
        // (1+x) = (1-x^2)/(1-x) = geometric(1) then (1 - x^2)
        let mut rhs = TruncatedSeries::zero(6, 6);
        rhs.add_assign(&TruncatedSeries::one(6, 6)).unwrap();
        rhs.add_assign(
            &BivarPoly::monomial(1, 1, BigInt::from(1)).to_series(6, 6),
        )
        .unwrap();
        assert_eq!(lhs, rhs.scale(&BigInt::from(2)));
    }

    #[test]
    fn correction_constant_term_is_n_factorial() {
        for n in 0..=5 {
            let f = correction_series(n, 3).unwrap();
            assert_eq!(f.coeff(0, 0), &factorial(n), "n = {n}");
        }
    }

    #[test]
    fn correction_routes_agree() {
        for n in 1..=6 {
            let trunc = max_stat(n).min(8);
            let a = correction_series(n, trunc).unwrap();
            let b = correction_series_from_cmu(n, trunc).unwrap();
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn correction_eval_at_origin_is_one() {
        for n in [2, 5, 8] {
            let ctx = CltContext::new(n).unwrap();
            let v = ctx.correction_eval(0.0, 0.0).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn correction_eval_n2_closed_form() {
        let ctx = CltContext::new(2).unwrap();
        let sigma = ctx.moments().sigma;
        for (s, t) in [(0.3, -0.7), (1.0, 1.0), (-1.2, 0.4)] {
            let p = Complex64::from_polar(1.0, s / sigma);
            let q = Complex64::from_polar(1.0, t / sigma);
            let expect = 2.0 * (1.0 + p * q) / ((1.0 + p) * (1.0 + q));
            let got = ctx.correction_eval(s, t).unwrap();
            assert!((got - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn char_joint_at_origin_is_one() {
        for n in [2, 4, 6] {
            let ctx = CltContext::new(n).unwrap();
            let v = ctx.char_joint(0.0, 0.0);
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn char_marginal_matches_direct_sum_over_s3() {
        // Independent oracle: (1/6) sum_w e^{i s (inv(w) - mu)/sigma}.
        use crate::perm::{inv, Permutation};
        let ctx = CltContext::new(3).unwrap();
        let m = ctx.moments();
        let words: [&[u8]; 6] = [
            &[1, 2, 3],
            &[1, 3, 2],
            &[2, 1, 3],
            &[2, 3, 1],
            &[3, 1, 2],
            &[3, 2, 1],
        ];
        for s in [-2.5, -1.0, 0.0, 0.7, 1.9] {
            let mut direct = Complex64::new(0.0, 0.0);
            for w in words {
                let w = Permutation::new(w.to_vec()).unwrap();
                let x = (inv(&w) as f64 - m.mean_f64()) / m.sigma;
                direct += Complex64::from_polar(1.0, s * x);
            }
            direct /= 6.0;
            let got = ctx.char_marginal(s);
            assert!((got - direct).norm() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn factorization_residual_examples() {
        let ctx4 = CltContext::new(4).unwrap();
        assert!(ctx4.factorization_residual(0.0, 0.0).unwrap() <= 1e-12);
        let ctx6 = CltContext::new(6).unwrap();
        assert!(ctx6.factorization_residual(1.5, -2.0).unwrap() <= 1e-9);
        let ctx12 = CltContext::new(12).unwrap();
        assert!(ctx12.factorization_residual(3.0, 3.0).unwrap() <= 1e-9);
    }

    #[test]
    fn gaussian_char_examples() {
        assert_eq!(gaussian_char(0.0, 0.0), 1.0);
        assert!((gaussian_char(1.0, 0.0) - (-0.5f64).exp()).abs() < 1e-15);
        assert!((gaussian_char(2.0, 2.0) - (-4.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn normal_cdf_against_quadrature() {
        // Independent oracle: Simpson's rule on the density from -10 to u.
        fn phi_quad(u: f64) -> f64 {
            let a = -10.0;
            let steps = 20_000usize; // even
            let h = (u - a) / steps as f64;
            let density =
                |x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
            let mut acc = density(a) + density(u);
            for i in 1..steps {
                let x = a + i as f64 * h;
                acc += density(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * h / 3.0
        }
        for u in [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0] {
            assert!(
                (normal_cdf(u) - phi_quad(u)).abs() <= 1e-10,
                "u = {u}: {} vs {}",
                normal_cdf(u),
                phi_quad(u)
            );
        }
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn joint_cdf_matches_direct_count_n3() {
        // Independent oracle: count the 6 permutations directly.
        use crate::perm::{inv, maj, Permutation};
        let table = joint_table_bruteforce(3);
        let m = moments(3);
        let words: [&[u8]; 6] = [
            &[1, 2, 3],
            &[1, 3, 2],
            &[2, 1, 3],
            &[2, 3, 1],
            &[3, 1, 2],
            &[3, 2, 1],
        ];
        for &(u, v) in &default_uv_grid() {
            let mut count = 0;
            for w in words {
                let w = Permutation::new(w.to_vec()).unwrap();
                let x = (inv(&w) as f64 - m.mean_f64()) / m.sigma;
                let y = (maj(&w) as f64 - m.mean_f64()) / m.sigma;
                if x <= u && y <= v {
                    count += 1;
                }
            }
            let direct = count as f64 / 6.0;
            assert!((joint_cdf(&table, u, v) - direct).abs() < 1e-15, "({u},{v})");
        }
    }

    #[test]
    fn joint_cdf_saturates() {
        let table = joint_table_bruteforce(4);
        // far beyond the support on both axes
        assert_eq!(joint_cdf(&table, 50.0, 50.0), 1.0);
        let dev = (1.0 - normal_cdf(50.0) * normal_cdf(50.0)).abs();
        assert!((joint_cdf(&table, 50.0, 50.0) - normal_cdf(50.0) * normal_cdf(50.0)).abs() - dev
            < 1e-15);
        assert_eq!(joint_cdf(&table, -50.0, 0.0), 0.0);
    }

    #[test]
    fn bz_distance_decreases_small() {
        let d3 = bz_distance(&joint_table_bruteforce(3), &default_uv_grid());
        let d6 = bz_distance(&joint_table_bruteforce(6), &default_uv_grid());
        assert!(d6 < d3, "bz distance should shrink: {d3} -> {d6}");
    }

    #[test]
    fn marginal_matches_q_factorial_shape() {
        // The inv marginal is the coefficient list of [n]_q!.
        let table = joint_table_bruteforce(5);
        let marg = table.inv_marginal();
        let qf = q_factorial(5, Var::Q);
        for (j, count) in marg.iter().enumerate() {
            assert_eq!(count, qf.coeff(0, j));
        }
    }

    #[test]
    fn leading_term_has_expected_scale() {
        // |d1| ~ binom(n,2) |st| / sigma^2 ~ 4.5 |st| / n for small angles.
        let ctx = CltContext::new(12).unwrap();
        let d1 = ctx.leading_correction_term(1.0, 1.0).norm();
        let rough = 4.5 / 12.0;
        assert!(d1 > rough * 0.5 && d1 < rough * 2.0, "d1 = {d1}");
    }

    #[test]
    fn eval_grid_shapes_and_origin() {
        let ctx = CltContext::new(6).unwrap();
        let grid = eval_grid(&ctx, GridFunction::Correction, 2.0, 2.0, 5).unwrap();
        assert_eq!(grid.points.len(), 25);
        let origin = grid
            .points
            .iter()
            .find(|p| p.s == 0.0 && p.t == 0.0)
            .unwrap();
        assert!(origin.abs_dev < 1e-12);
        assert!(grid.points.iter().all(|p| p.s.abs() <= 2.0 && p.t.abs() <= 2.0));
    }

    #[test]
    fn factored_grid_is_residual() {
        let ctx = CltContext::new(6).unwrap();
        let grid = eval_grid(&ctx, GridFunction::FactoredChar, 3.0, 3.0, 7).unwrap();
        assert!(grid.max_abs_dev() <= 1e-9);
    }
}
