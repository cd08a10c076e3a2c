//! Truncated power series.
//!
//! Two representations are provided.
//!
//! * [`PowerSeries<S>`] stores ordinary coefficients `[z^k]F` in any scalar
//!   type implementing the usual `num-traits` arithmetic: `BigRational` for
//!   exact work and `f64` for numerics.
//! * [`LabeledCounts`] stores `k!·[z^k]F` as big integers. Every series that
//!   counts labeled structures has integral entries in this basis, products
//!   become binomial convolutions and no gcd is ever taken, which makes it
//!   the workhorse for the class equations at orders in the hundreds.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalar types usable as power-series coefficients.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Coefficient for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + FromPrimitive
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Power series `Σ_{k ≤ order} c_k z^k` known up to its truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Coefficient> PowerSeries<S> {
    /// Zero series known to `order`.
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![S::zero(); order + 1] }
    }

    /// Constant series `c`.
    pub fn constant(c: S, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z` (truncated to `order`).
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = S::one();
        }
        s
    }

    /// Series with the given leading coefficients, padded with zeros or
    /// truncated to `order`.
    pub fn from_coeffs(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.resize(order + 1, S::zero());
        Self { coeffs }
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k` (zero beyond the order).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// All known coefficients.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Same series truncated to a lower order.
    pub fn truncated(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    /// Sum, known to the smaller order.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        Self { coeffs: (0..=n).map(|k| self.coeffs[k].clone() + other.coeffs[k].clone()).collect() }
    }

    /// Difference, known to the smaller order.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        Self { coeffs: (0..=n).map(|k| self.coeffs[k].clone() - other.coeffs[k].clone()).collect() }
    }

    /// Product by a scalar.
    pub fn scale(&self, c: &S) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    /// Cauchy product, known to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common_order(other);
        let mut out = vec![S::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self { coeffs: out }
    }

    /// Product by `z^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![S::zero(); n + 1];
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                out[i + k] = self.coeffs[i].clone();
            }
        }
        Self { coeffs: out }
    }

    /// Drops the first `k` coefficients (division by `z^k`); the order
    /// decreases by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::Domain("shift beyond the truncation order".into()));
        }
        Ok(Self { coeffs: self.coeffs[k..].to_vec() })
    }

    /// Formal derivative; the order decreases by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..=self.order())
            .map(|k| self.coeffs[k].clone() * S::from_usize(k).expect("small integer"))
            .collect();
        Self { coeffs }
    }

    /// `exp(F)` for `F(0) = 0`, by the recurrence `E' = F'·E`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp needs a zero constant term".into()));
        }
        let n = self.order();
        let mut e = vec![S::zero(); n + 1];
        e[0] = S::one();
        for m in 1..=n {
            let mut acc = S::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    let kk = S::from_usize(k).expect("small integer");
                    acc = acc + kk * self.coeffs[k].clone() * e[m - k].clone();
                }
            }
            e[m] = acc / S::from_usize(m).expect("small integer");
        }
        Ok(Self { coeffs: e })
    }

    /// Multiplicative inverse by back-substitution.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::Domain("inverse needs an invertible constant term".into()));
        }
        let n = self.order();
        let mut u = vec![S::zero(); n + 1];
        u[0] = S::one() / c0.clone();
        for m in 1..=n {
            let mut acc = S::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc = acc + self.coeffs[k].clone() * u[m - k].clone();
                }
            }
            u[m] = -(acc / c0.clone());
        }
        Ok(Self { coeffs: u })
    }

    /// Quotient `self / other`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Value of the truncated polynomial at `x` (Horner scheme).
    pub fn evaluate(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Coefficient-wise conversion to another scalar type.
    pub fn map<T: Coefficient>(&self, f: impl Fn(&S) -> T) -> PowerSeries<T> {
        PowerSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl PowerSeries<BigRational> {
    /// Float approximation of the coefficients.
    pub fn to_f64(&self) -> PowerSeries<f64> {
        self.map(rational_to_f64)
    }
}

/// Nearest `f64` to a rational, robust to numerators and denominators far
/// outside the `f64` range.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    ratio_to_f64(q.numer(), q.denom())
}

/// Nearest `f64` (up to a couple of ulps) to `num / den` for big integers.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (mn, en) = mantissa(num.magnitude());
    let (md, ed) = mantissa(den.magnitude());
    let value = (mn / md) * 2f64.powi((en - ed) as i32);
    if negative {
        -value
    } else {
        value
    }
}

/// `x = m · 2^e` with `m` holding the top 64 bits of `x`.
fn mantissa(x: &BigUint) -> (f64, i64) {
    let bits = x.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (x >> shift as usize).to_u64().expect("at most 64 bits");
    (top as f64, shift)
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let (m, e) = mantissa(x);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

/// Exact `n!`.
pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Series of labeled counts: entry `k` is `k!·[z^k]F`, an integer whenever
/// `F` counts labeled objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledCounts {
    counts: Vec<BigInt>,
}

/// Iterates `C(n, 0), C(n, 1), …, C(n, n)`.
fn binomial_row(n: usize) -> impl Iterator<Item = BigInt> {
    let mut current = BigInt::one();
    (0..=n).map(move |k| {
        let out = current.clone();
        if k < n {
            current = (&current * (n - k)).div_floor(&BigInt::from(k + 1));
        }
        out
    })
}

impl LabeledCounts {
    /// Zero series known to `order`.
    pub fn zero(order: usize) -> Self {
        Self { counts: vec![BigInt::zero(); order + 1] }
    }

    /// Constant series `c`.
    pub fn constant(c: i64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.counts[0] = BigInt::from(c);
        s
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.counts[1] = BigInt::one();
        }
        s
    }

    /// Series from explicit labeled counts, padded or truncated to `order`.
    pub fn from_counts(mut counts: Vec<BigInt>, order: usize) -> Self {
        counts.resize(order + 1, BigInt::zero());
        Self { counts }
    }

    /// Labeled counts of an ordinary series; fails unless every
    /// `k!·[z^k]F` is an integer.
    pub fn from_series(s: &PowerSeries<BigRational>) -> Result<Self> {
        let mut fact = BigInt::one();
        let mut counts = Vec::with_capacity(s.order() + 1);
        for (k, c) in s.coeffs().iter().enumerate() {
            if k > 0 {
                fact *= k;
            }
            let scaled = c * BigRational::from_integer(fact.clone());
            if !scaled.is_integer() {
                return Err(Error::Domain(format!("coefficient {k} is not a labeled count")));
            }
            counts.push(scaled.to_integer());
        }
        Ok(Self { counts })
    }

    /// Ordinary series with coefficients `counts[k] / k!`.
    pub fn to_series(&self) -> PowerSeries<BigRational> {
        let mut fact = BigInt::one();
        let coeffs = self
            .counts
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k;
                }
                BigRational::new(c.clone(), fact.clone())
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.counts.len() - 1
    }

    /// Entry `k!·[z^k]F` (zero beyond the order).
    pub fn count(&self, k: usize) -> BigInt {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    /// All known entries.
    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    /// Same series truncated to a lower order.
    pub fn truncated(&self, order: usize) -> Self {
        Self::from_counts(self.counts[..=order.min(self.order())].to_vec(), order)
    }

    /// Sum, known to the smaller order.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { counts: (0..=n).map(|k| &self.counts[k] + &other.counts[k]).collect() }
    }

    /// Difference, known to the smaller order.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { counts: (0..=n).map(|k| &self.counts[k] - &other.counts[k]).collect() }
    }

    /// Product by an integer.
    pub fn scale(&self, c: i64) -> Self {
        Self { counts: self.counts.iter().map(|x| x * c).collect() }
    }

    /// Entry `n` of the product `self · other`.
    pub fn product_count(&self, other: &Self, n: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for (k, binom) in binomial_row(n).enumerate() {
            let (a, b) = (&self.counts[k], &other.counts[n - k]);
            if !a.is_zero() && !b.is_zero() {
                acc += binom * a * b;
            }
        }
        acc
    }

    /// Product (binomial convolution), known to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { counts: (0..=n).map(|m| self.product_count(other, m)).collect() }
    }

    /// Product of several series (the empty product is `1`).
    pub fn product(factors: &[&Self], order: usize) -> Self {
        let mut iter = factors.iter();
        match iter.next() {
            None => Self::constant(1, order),
            Some(first) => iter.fold(first.truncated(order.min(first.order())), |acc, f| acc.mul(f)),
        }
    }

    /// Integer power.
    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::constant(1, self.order());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `exp(F)` for `F(0) = 0`: `e_n = Σ_k C(n−1, k−1) f_k e_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.counts[0].is_zero() {
            return Err(Error::Domain("exp needs a zero constant term".into()));
        }
        let n = self.order();
        let mut e = vec![BigInt::zero(); n + 1];
        e[0] = BigInt::one();
        for m in 1..=n {
            let mut acc = BigInt::zero();
            for (j, binom) in binomial_row(m - 1).enumerate() {
                let k = j + 1;
                if !self.counts[k].is_zero() && !e[m - k].is_zero() {
                    acc += binom * &self.counts[k] * &e[m - k];
                }
            }
            e[m] = acc;
        }
        Ok(Self { counts: e })
    }

    /// Quotient `self / other` for `other(0) = 1`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if !other.counts[0].is_one() {
            return Err(Error::Domain("labeled division needs a unit constant term 1".into()));
        }
        let n = self.order().min(other.order());
        let mut q: Vec<BigInt> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut acc = self.counts[m].clone();
            for (k, binom) in binomial_row(m).enumerate().skip(1) {
                if !other.counts[k].is_zero() && !q[m - k].is_zero() {
                    acc -= binom * &other.counts[k] * &q[m - k];
                }
            }
            q.push(acc);
        }
        Ok(Self { counts: q })
    }

    /// Multiplicative inverse for a constant term `1`.
    pub fn inverse(&self) -> Result<Self> {
        Self::constant(1, self.order()).div(self)
    }

    /// Derivative (a shift in this basis); the order decreases by one.
    pub fn derivative(&self) -> Self {
        Self { counts: self.counts[1..].to_vec() }
    }

    /// Product by `z^k`: entry `n` becomes `n!/(n−k)! · f_{n−k}`.
    pub fn times_z_pow(&self, k: usize) -> Self {
        let n = self.order();
        let counts = (0..=n)
            .map(|m| {
                if m < k {
                    BigInt::zero()
                } else {
                    let falling: BigInt = ((m - k + 1)..=m).fold(BigInt::one(), |acc, x| acc * x);
                    falling * &self.counts[m - k]
                }
            })
            .collect();
        Self { counts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exp_of_z_is_the_exponential() {
        let e = PowerSeries::<BigRational>::z(6).exp().unwrap();
        for k in 0..=6 {
            assert_eq!(e.coeff(k), BigRational::new(BigInt::one(), BigInt::from(factorial(k))));
        }
    }

    #[test]
    fn inverse_of_one_minus_z_is_geometric() {
        let s = PowerSeries::from_coeffs(vec![q(1, 1), q(-1, 1)], 5);
        let inv = s.inverse().unwrap();
        assert!(inv.coeffs().iter().all(|c| *c == q(1, 1)));
        assert!(PowerSeries::<BigRational>::z(3).inverse().is_err());
    }

    #[test]
    fn float_series_share_the_generic_code() {
        let e = PowerSeries::<f64>::z(20).exp().unwrap();
        assert!((e.evaluate(&1.0) - std::f64::consts::E).abs() < 1e-15);
        let single = PowerSeries::<f32>::z(10).exp().unwrap();
        assert!((single.evaluate(&1.0) - std::f32::consts::E).abs() < 1e-6);
    }

    #[test]
    fn labeled_exp_counts_set_partitions() {
        // exp(e^z − 1) has Bell numbers as labeled counts.
        let e_minus_1 = LabeledCounts::from_counts(
            std::iter::once(BigInt::zero()).chain((1..=8).map(|_| BigInt::one())).collect(),
            8,
        );
        let bell = e_minus_1.exp().unwrap();
        let expected = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (k, b) in expected.iter().enumerate() {
            assert_eq!(bell.count(k), BigInt::from(*b));
        }
    }

    #[test]
    fn labeled_and_ordinary_products_agree() {
        let a = LabeledCounts::from_counts((0..10).map(|k| BigInt::from(k * k + 1)).collect(), 9);
        let b = LabeledCounts::from_counts((0..10).map(|k| BigInt::from(3 * k + 2)).collect(), 9);
        let via_counts = a.mul(&b).to_series();
        let via_series = a.to_series().mul(&b.to_series());
        assert_eq!(via_counts, via_series);
        let quotient = a.mul(&b).div(&LabeledCounts::constant(1, 9).add(&b.sub(&b))).unwrap();
        assert_eq!(quotient, a.mul(&b));
    }

    #[test]
    fn labeled_division_inverts_multiplication() {
        let a = LabeledCounts::from_counts((0..12).map(|k| BigInt::from(2 * k + 1)).collect(), 11);
        let mut b_counts: Vec<BigInt> = (0..12).map(|k| BigInt::from(k * 7 % 5)).collect();
        b_counts[0] = BigInt::one();
        let b = LabeledCounts::from_counts(b_counts, 11);
        assert_eq!(a.mul(&b).div(&b).unwrap(), a);
    }

    #[test]
    fn shifts_and_derivatives() {
        let s = LabeledCounts::from_counts((0..8).map(BigInt::from).collect(), 7);
        let shifted = s.times_z_pow(2).to_series();
        assert_eq!(shifted, s.to_series().shift_up(2));
        assert_eq!(s.derivative().to_series(), s.to_series().derivative());
        let round = LabeledCounts::from_series(&s.to_series()).unwrap();
        assert_eq!(round, s);
    }

    #[test]
    fn huge_ratios_convert_to_floats() {
        let big = BigInt::from(factorial(300));
        let r = ratio_to_f64(&(&big * 3), &(&big * 7));
        assert!((r - 3.0 / 7.0).abs() < 1e-15);
        assert!((ln_biguint(&factorial(20)) - (2432902008176640000f64).ln()).abs() < 1e-9);
    }
}
