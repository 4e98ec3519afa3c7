//! Truncated Laurent series over the integers.
//!
//! A [`TruncSeries`] stores a dense run of coefficients from `offset` to
//! `prec` inclusive. Every coefficient at an exponent `<= prec` is exact;
//! nothing is known above `prec`. Operations propagate the largest bound
//! they can prove and never report coefficients they cannot justify.
//!
//! Values are kept normalized: the first stored coefficient is nonzero, so
//! `offset` is the valuation of the series. A series that is zero through
//! `prec` has no stored coefficients and `offset == prec + 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    offset: i64,
    prec: i64,
    coeffs: Vec<BigInt>,
}

/// Sparse series: strictly increasing `(exponent, coefficient)` pairs with
/// no zero coefficients. Used for products with few nonzero terms, such as
/// Euler products expanded by the pentagonal number theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSeries {
    terms: Vec<(i64, BigInt)>,
    prec: i64,
}

impl TruncSeries {
    /// Builds a series whose coefficients start at `offset` and are valid
    /// through `prec`. Missing entries up to `prec` are taken as zero and
    /// entries past `prec` are dropped.
    pub fn new(offset: i64, prec: i64, mut coeffs: Vec<BigInt>) -> Result<Self> {
        if prec < offset - 1 {
            return Err(Error::InvalidTruncation { exponent: offset, prec });
        }
        let len = (prec - offset + 1) as usize;
        coeffs.resize(len, BigInt::zero());
        Ok(Self::normalized(offset, prec, coeffs))
    }

    pub fn from_i64s(offset: i64, prec: i64, coeffs: &[i64]) -> Result<Self> {
        Self::new(offset, prec, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The zero series known through `prec`.
    pub fn zero(prec: i64) -> Self {
        Self { offset: prec + 1, prec, coeffs: Vec::new() }
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(BigInt::one(), 0, prec.max(0)).expect("prec >= 0")
    }

    /// `c * q^e`, known through `prec`.
    pub fn monomial(c: impl Into<BigInt>, e: i64, prec: i64) -> Result<Self> {
        if prec < e {
            return Err(Error::InvalidTruncation { exponent: e, prec });
        }
        let mut coeffs = vec![BigInt::zero(); (prec - e + 1) as usize];
        coeffs[0] = c.into();
        Ok(Self::normalized(e, prec, coeffs))
    }

    fn normalized(offset: i64, prec: i64, mut coeffs: Vec<BigInt>) -> Self {
        debug_assert_eq!(coeffs.len() as i64, prec - offset + 1);
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => Self::zero(prec),
            Some(0) => Self { offset, prec, coeffs },
            Some(k) => {
                coeffs.drain(..k);
                Self { offset: offset + k as i64, prec, coeffs }
            }
        }
    }

    /// Lowest exponent with a nonzero coefficient, or `prec + 1` for zero.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Highest exponent whose coefficient is known.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Coefficients from `offset` through `prec`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact coefficient of `q^e`. Exponents below the offset are zero;
    /// exponents above `prec` are unknown.
    pub fn coeff(&self, e: i64) -> Result<BigInt> {
        self.coeff_ref(e).map(|c| c.cloned().unwrap_or_default())
    }

    fn coeff_ref(&self, e: i64) -> Result<Option<&BigInt>> {
        if e > self.prec {
            return Err(Error::UnknownCoefficient { exponent: e, prec: self.prec });
        }
        if e < self.offset {
            return Ok(None);
        }
        Ok(Some(&self.coeffs[(e - self.offset) as usize]))
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        (self.offset..).zip(self.coeffs.iter()).filter(|(_, c)| !c.is_zero())
    }

    /// Forgets everything above `prec`. A larger `prec` is ignored.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let keep = (prec - self.offset + 1).max(0) as usize;
        Self::normalized(self.offset.min(prec + 1), prec, self.coeffs[..keep].to_vec())
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { offset: self.offset + k, prec: self.prec + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec);
        }
        Self { offset: self.offset, prec: self.prec, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn relative_prec(&self) -> i64 {
        self.prec - self.offset
    }

    /// Product with a sparse series. Same contract as `*` with `s`
    /// densified, at a cost proportional to the number of sparse terms.
    pub fn mul_sparse(&self, s: &SparseSeries) -> Self {
        let offset = self.offset + s.offset();
        let prec = (self.prec + s.offset()).min(s.prec + self.offset);
        if self.is_zero() || s.terms.is_empty() {
            return Self::zero(prec);
        }
        let len = (prec - offset + 1) as usize;
        let mut out = vec![BigInt::zero(); len];
        let base = s.offset();
        for (e, c) in &s.terms {
            let shift = (e - base) as usize;
            if shift >= len {
                break;
            }
            for (k, a) in self.coeffs.iter().take(len - shift).enumerate() {
                if a.is_zero() {
                    continue;
                }
                add_product(&mut out[k + shift], a, c);
            }
        }
        Self::normalized(offset, prec, out)
    }

    /// Multiplicative inverse. The lowest nonzero coefficient must be `±1`.
    pub fn invert(&self) -> Result<Self> {
        let lead = self.lead_unit()?;
        let rel = self.relative_prec();
        let len = (rel + 1) as usize;
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        out.push(lead.clone());
        for k in 1..len {
            let mut acc = BigInt::zero();
            for t in 1..=k {
                let a = &self.coeffs[t];
                if !a.is_zero() {
                    add_product(&mut acc, a, &out[k - t]);
                }
            }
            out.push(if lead.is_one() { -acc } else { acc });
        }
        Ok(Self::normalized(-self.offset, rel - self.offset, out))
    }

    fn lead_unit(&self) -> Result<&BigInt> {
        let lead = self.coeffs.first().ok_or(Error::NonInvertible)?;
        if lead.abs().is_one() {
            Ok(lead)
        } else {
            Err(Error::NonUnit(lead.to_string()))
        }
    }

    /// Solves `d * c = self` for `c` by forward substitution, touching only
    /// the nonzero terms of `d`.
    pub fn div_forward(&self, d: &SparseSeries) -> Result<Self> {
        let (d0, lead) = d.terms.first().ok_or(Error::NonInvertible)?;
        if !lead.abs().is_one() {
            return Err(Error::NonUnit(lead.to_string()));
        }
        let rel = self.relative_prec().min(d.prec - d0);
        let offset = self.offset - d0;
        let prec = offset + rel;
        if rel < 0 {
            return Ok(Self::zero(prec));
        }
        let negate = !lead.is_one();
        let tail: Vec<(usize, &BigInt)> = d.terms[1..].iter().map(|(e, c)| ((e - d0) as usize, c)).collect();
        let len = (rel + 1) as usize;
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.coeffs[k].clone();
            for &(t, c) in &tail {
                if t > k {
                    break;
                }
                let prev = &out[k - t];
                if prev.is_zero() {
                    continue;
                }
                if c.is_one() {
                    acc -= prev;
                } else if (-c).is_one() {
                    acc += prev;
                } else {
                    acc -= c * prev;
                }
            }
            out.push(if negate { -acc } else { acc });
        }
        Ok(Self::normalized(offset, prec, out))
    }

    /// `self^k` by binary powering. `self^0` is `1` carrying the relative
    /// precision of `self`.
    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.relative_prec());
        if k == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut k = k;
        let mut first = true;
        while k > 0 {
            if k & 1 == 1 {
                result = if first { base.clone() } else { &result * &base };
                first = false;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitutes `q -> q^j`. Exponents strictly between `j*prec` and
    /// `j*(prec+1)` are known zeros, so the result is valid through
    /// `j*(prec+1) - 1`.
    pub fn inflate(&self, j: u32) -> Self {
        assert!(j > 0, "inflation factor must be positive");
        let j = j as i64;
        let prec = j * (self.prec + 1) - 1;
        if self.is_zero() {
            return Self::zero(prec);
        }
        let offset = j * self.offset;
        let mut out = vec![BigInt::zero(); (prec - offset + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * j as usize] = c.clone();
        }
        Self::normalized(offset, prec, out)
    }

    /// Keeps the terms whose exponent is `r` mod `m` (negative exponents
    /// included) without re-indexing. `restrict(0, 5)` is the operator that
    /// picks out exponents divisible by 5.
    pub fn restrict(&self, r: u32, m: u32) -> Self {
        assert!(m > 0 && r < m, "residue {r} out of range for modulus {m}");
        let (r, m) = (r as i64, m as i64);
        let out = (self.offset..)
            .zip(self.coeffs.iter())
            .map(|(e, c)| if e.mod_floor(&m) == r { c.clone() } else { BigInt::zero() })
            .collect();
        Self::normalized(self.offset, self.prec, out)
    }

    /// Keeps the exponents `e ≡ r (mod m)` and re-indexes `e -> (e - r)/m`.
    pub fn extract(&self, r: u32, m: u32) -> Self {
        assert!(m > 0 && r < m, "residue {r} out of range for modulus {m}");
        let (r, m) = (r as i64, m as i64);
        let prec = Integer::div_floor(&(self.prec - r), &m);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let offset = Integer::div_ceil(&(self.offset - r), &m);
        let out = (offset..=prec).map(|e| self.coeffs[(m * e + r - self.offset) as usize].clone()).collect();
        Self::normalized(offset, prec, out)
    }

    /// Exact equality of every coefficient with exponent `<= upto`.
    pub fn eq_upto(&self, other: &Self, upto: i64) -> Result<bool> {
        Ok(self.first_difference(other, upto, |a, b| a == b)?.is_none())
    }

    /// Coefficientwise congruence modulo `modulus` through `upto`. Returns
    /// `None` when congruent, otherwise the lowest failing exponent.
    pub fn congruent_upto(&self, other: &Self, modulus: &BigInt, upto: i64) -> Result<Option<i64>> {
        self.first_difference(other, upto, |a, b| (a - b).mod_floor(modulus).is_zero())
    }

    fn first_difference(
        &self,
        other: &Self,
        upto: i64,
        same: impl Fn(&BigInt, &BigInt) -> bool,
    ) -> Result<Option<i64>> {
        let bound = self.prec.min(other.prec);
        if upto > bound {
            return Err(Error::UnknownCoefficient { exponent: upto, prec: bound });
        }
        let zero = BigInt::zero();
        for e in self.offset.min(other.offset)..=upto {
            let a = self.coeff_ref(e)?.unwrap_or(&zero);
            let b = other.coeff_ref(e)?.unwrap_or(&zero);
            if !same(a, b) {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let prec = self.prec.min(other.prec);
        let offset = self.offset.min(other.offset).min(prec + 1);
        let zero = BigInt::zero();
        let out = (offset..=prec)
            .map(|e| {
                let a = self.coeff_ref(e).unwrap().unwrap_or(&zero);
                let b = other.coeff_ref(e).unwrap().unwrap_or(&zero);
                f(a, b)
            })
            .collect();
        Self::normalized(offset, prec, out)
    }
}

#[inline]
fn add_product(acc: &mut BigInt, a: &BigInt, b: &BigInt) {
    if b.is_one() {
        *acc += a;
    } else if (-b).is_one() {
        *acc -= a;
    } else {
        *acc += a * b;
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;

    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;

    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TruncSeries {
    type Output = TruncSeries;

    fn neg(self) -> TruncSeries {
        TruncSeries { offset: self.offset, prec: self.prec, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Cauchy product. The result is valid through
/// `min(prec(a) + offset(b), prec(b) + offset(a))`.
impl Mul for &TruncSeries {
    type Output = TruncSeries;

    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let offset = self.offset + rhs.offset;
        let prec = (self.prec + rhs.offset).min(rhs.prec + self.offset);
        if self.is_zero() || rhs.is_zero() {
            return TruncSeries::zero(prec);
        }
        let len = (prec - offset + 1) as usize;
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    add_product(&mut out[i + j], b, a);
                }
            }
        }
        TruncSeries::normalized(offset, prec, out)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{a}*q^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.prec + 1)
    }
}

impl SparseSeries {
    /// Builds a sparse series from terms in any order. Repeated exponents
    /// are summed, zero coefficients and terms above `prec` are dropped.
    pub fn new(terms: impl IntoIterator<Item = (i64, BigInt)>, prec: i64) -> Self {
        let mut terms: Vec<(i64, BigInt)> = terms.into_iter().filter(|(e, _)| *e <= prec).collect();
        terms.sort_by_key(|(e, _)| *e);
        let mut merged: Vec<(i64, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == e => *acc += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Self { terms: merged, prec }
    }

    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the lowest term, or `prec + 1` when empty.
    pub fn offset(&self) -> i64 {
        self.terms.first().map_or(self.prec + 1, |(e, _)| *e)
    }

    pub fn densify(&self) -> TruncSeries {
        let offset = self.offset();
        let mut out = vec![BigInt::zero(); (self.prec - offset + 1) as usize];
        for (e, c) in &self.terms {
            out[(e - offset) as usize] = c.clone();
        }
        TruncSeries::normalized(offset, self.prec, out)
    }
}
