//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::QError;

/// A polynomial in `q` stored densely: `coeffs[i]` is the coefficient of `q^i`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and `degree()` is `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::from_coeffs(vec![c.into()])
    }

    /// The monomial `c * q^k`.
    pub fn monomial<T: Into<BigInt>>(c: T, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Multiply by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Multiply by `q^k` for a possibly negative `k`; fails if a nonzero
    /// coefficient would land on a negative exponent.
    pub fn shift(&self, k: i64) -> Result<Self, QError> {
        if k >= 0 {
            return Ok(self.shift_up(k as usize));
        }
        let down = k.unsigned_abs() as usize;
        match self.low_degree() {
            None => Ok(Self::zero()),
            Some(low) if low >= down => Ok(IntPoly {
                coeffs: self.coeffs[down..].to_vec(),
            }),
            Some(low) => Err(QError::NegativeExponent {
                exponent: low as i64 + k,
            }),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn add_assign_ref(&mut self, other: &IntPoly) {
        if other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigInt::zero());
        }
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
        self.normalize();
    }

    /// `self += c * q^k * other`, the workhorse of every weighted sum.
    pub fn add_scaled_shifted(&mut self, other: &IntPoly, c: &BigInt, k: usize) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let need = other.coeffs.len() + k;
        if need > self.coeffs.len() {
            self.coeffs.resize(need, BigInt::zero());
        }
        for (dst, o) in self.coeffs[k..].iter_mut().zip(&other.coeffs) {
            *dst += o * c;
        }
        self.normalize();
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out.add_scaled_shifted(other, &BigInt::from(-1), 0);
        out
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (dst, b) in coeffs[i..].iter_mut().zip(&other.coeffs) {
                *dst += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn pow(&self, mut e: u32) -> IntPoly {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Long division; `None` if `divisor` is zero.
    ///
    /// Over `Z` the quotient is only guaranteed integral when the divisor is
    /// monic (or the division happens to work out), so a non-integral step is
    /// reported as `Err` with the partial remainder discarded.
    fn div_rem_integral(&self, divisor: &IntPoly) -> Option<Result<(IntPoly, IntPoly), ()>> {
        let dd = divisor.degree()?;
        let lead = &divisor.coeffs[dd];
        if self.coeffs.len() <= dd {
            return Some(Ok((Self::zero(), self.clone())));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Some(Err(()));
            }
            for (dst, d) in rem[i..=i + dd].iter_mut().zip(&divisor.coeffs) {
                *dst -= &q * d;
            }
            quot[i] = q;
        }
        Some(Ok((Self::from_coeffs(quot), Self::from_coeffs(rem))))
    }

    /// Exact quotient `self / divisor`; errors with `NotDivisible` when the
    /// remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly, QError> {
        match self.div_rem_integral(divisor) {
            None => Err(QError::DivisionByZero),
            Some(Ok((q, r))) if r.is_zero() => Ok(q),
            Some(_) => Err(QError::NotDivisible),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Value at `q = 1`, i.e. the coefficient sum.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Smallest coefficient, or `None` for the zero polynomial.
    pub fn min_coeff(&self) -> Option<&BigInt> {
        self.coeffs.iter().min()
    }

    /// In place multiplication by `1 - q^d`, truncated to the current length.
    pub(crate) fn mul_one_minus_truncated(coeffs: &mut [BigInt], d: usize) {
        for i in (d..coeffs.len()).rev() {
            let (lo, hi) = coeffs.split_at_mut(i);
            if !lo[i - d].is_zero() {
                hi[0] -= &lo[i - d];
            }
        }
    }

    /// In place division by `1 - q^d` as a power series, truncated to the
    /// current length.
    pub(crate) fn div_one_minus_truncated(coeffs: &mut [BigInt], d: usize) {
        for i in d..coeffs.len() {
            let (lo, hi) = coeffs.split_at_mut(i);
            if !lo[i - d].is_zero() {
                hi[0] += &lo[i - d];
            }
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Coefficients as decimal strings, lowest degree first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.coeffs.iter().any(Signed::is_negative)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{abs}*q^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::add(self, rhs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::sub(self, rhs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::mul(self, rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
