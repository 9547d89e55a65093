//! Arbitrary-precision reals with an explicit precision tag.
//!
//! [`BigReal`] wraps an `astro_float::BigFloat` together with the precision
//! (in bits) that the value is meant to carry. Binary operations run at the
//! larger of the two operand precisions. The backend rounds every precision
//! up to a whole machine word, so the effective mantissa is never shorter
//! than the tag.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Smallest precision accepted anywhere in the library.
pub const MIN_PREC: usize = 64;

/// Guard bits added by every kernel operation.
pub const GUARD_BITS: usize = 8;

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Arbitrary-precision real number tagged with its working precision.
#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    prec: usize,
}

impl BigReal {
    fn wrap(value: BigFloat, prec: usize) -> Self {
        BigReal { value, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, prec), prec)
    }

    pub fn from_u64(v: u64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_u64(v, prec), prec)
    }

    /// Exact for every finite `f64`.
    pub fn from_f64(v: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(v, prec.max(WORD_BITS)), prec)
    }

    /// Rounds an unbounded integer to `prec` bits.
    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        if n.is_zero() {
            return Self::zero(prec);
        }
        let words = n.magnitude().to_u64_digits();
        let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
        let exp = (words.len() * WORD_BITS) as i32;
        let exact = BigFloat::from_words(&words, sign, exp);
        // round the exact integer to the requested precision
        let v = exact.add(&BigFloat::from_i64(0, prec), prec, RM);
        Self::wrap(v, prec)
    }

    pub fn from_ratio(q: &BigRational, prec: usize) -> Self {
        let w = prec + GUARD_BITS;
        let n = Self::from_bigint(q.numer(), w);
        let d = Self::from_bigint(q.denom(), w);
        (n / d).round_to(prec)
    }

    /// Parses a decimal literal such as `-1.25e-3` or `42`.
    pub fn parse_decimal(s: &str, prec: usize) -> Result<Self> {
        let t = s.trim();
        let (mant, exp10) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = t[i + 1..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Parse(format!("empty mantissa in {s:?}")));
        }
        let digits: String = [int_part, frac_part].concat();
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let mut n: BigInt = digits
            .parse::<BigUint>()
            .map_err(|e| Error::Parse(e.to_string()))?
            .into();
        if neg {
            n = -n;
        }
        let e = exp10 - frac_part.len() as i64;
        let q = if e >= 0 {
            BigRational::from_integer(n * num_traits::pow(BigInt::from(10), e as usize))
        } else {
            BigRational::new(n, num_traits::pow(BigInt::from(10), (-e) as usize))
        };
        Ok(Self::from_ratio(&q, prec))
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Re-tags the value with a new precision, rounding if it shrinks.
    pub fn round_to(&self, prec: usize) -> Self {
        let v = self.value.add(&BigFloat::from_i64(0, prec), prec, RM);
        Self::wrap(v, prec)
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.value.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.prec, RM), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.prec, RM), self.prec)
    }

    pub fn cbrt(&self) -> Self {
        Self::wrap(self.value.cbrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.value.exp(self.prec, RM, cc));
        Self::wrap(v, self.prec)
    }

    pub fn ln(&self) -> Self {
        let v = with_consts(|cc| self.value.ln(self.prec, RM, cc));
        Self::wrap(v, self.prec)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, n: i64) -> Self {
        let p = self.value.powi(n.unsigned_abs() as usize, self.prec, RM);
        let r = Self::wrap(p, self.prec);
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    /// `self^(num/den)` for positive `self`.
    pub fn pow_ratio(&self, num: i64, den: i64) -> Self {
        assert!(den > 0, "pow_ratio: denominator must be positive");
        match den {
            1 => self.powi(num),
            2 => self.sqrt().powi(num),
            3 => self.cbrt().powi(num),
            _ => {
                let w = self.prec + GUARD_BITS;
                let e = BigReal::from_i64(num, w) / BigReal::from_i64(den, w);
                (self.round_to(w).ln() * e).exp().round_to(self.prec)
            }
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() || !self.is_finite() {
            return self.clone();
        }
        let mut v = self.value.clone();
        let e = v.exponent().expect("finite value has an exponent") as i64 + k;
        v.set_exponent(e as i32);
        Self::wrap(v, self.prec)
    }

    /// `log2 |self|` as an `f64`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        match self.value.as_raw_parts() {
            Some((m, _, _, e, _)) => {
                let top = *m.last().unwrap_or(&0) as f64;
                e as f64 + (top / 2f64.powi(64)).log2()
            }
            None => f64::INFINITY,
        }
    }

    /// `log10 |self|` as an `f64`.
    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.value.is_nan() {
            return f64::NAN;
        }
        let l = self.log2_abs();
        if l > 1024.0 {
            return if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if l < -1100.0 {
            return 0.0;
        }
        let (m, _, s, e, _) = self.value.as_raw_parts().expect("finite");
        let top = *m.last().unwrap() as f64 / 2f64.powi(64);
        let mag = top * 2f64.powi(e);
        if s == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Nearest integer (ties to even are not needed here; ties round away).
    pub fn round_to_bigint(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let (m, _, s, e, _) = self.value.as_raw_parts().expect("finite value");
        let mant = BigUint::new(
            m.iter()
                .flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32])
                .collect(),
        );
        // value = mant * 2^(e - 64*len)
        let shift = e as i64 - (m.len() * WORD_BITS) as i64;
        let mag: BigUint = if shift >= 0 {
            mant << (shift as usize)
        } else {
            let sh = (-shift) as usize;
            let half = if sh == 0 { BigUint::zero() } else { BigUint::from(1u8) << (sh - 1) };
            (mant + half) >> sh
        };
        let n = BigInt::from(mag);
        if s == Sign::Neg {
            -n
        } else {
            n
        }
    }

    /// Scientific notation with `digits` significant decimal digits,
    /// e.g. `4.1421356237e-1`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("0.{}e0", "0".repeat(digits - 1));
        }
        if !self.is_finite() {
            return "nan".to_string();
        }
        let w = self.prec + 2 * GUARD_BITS + (digits as f64 * 3.33) as usize;
        let x = self.abs().round_to(w);
        let mut e10 = x.log10_abs().floor() as i64;
        let mut scaled = scale_pow10(&x, digits as i64 - 1 - e10).round_to_bigint();
        let limit = num_traits::pow(BigInt::from(10), digits);
        if scaled >= limit {
            e10 += 1;
            scaled = scale_pow10(&x, digits as i64 - 1 - e10).round_to_bigint();
        } else if scaled < num_traits::pow(BigInt::from(10), digits - 1) {
            e10 -= 1;
            scaled = scale_pow10(&x, digits as i64 - 1 - e10).round_to_bigint();
        }
        let s = scaled.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if s.len() == 1 {
            format!("{sign}{s}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &s[..1], &s[1..])
        }
    }

    /// Plain fixed-point rendering with `decimals` digits after the point.
    pub fn to_fixed_string(&self, decimals: usize) -> String {
        let w = self.prec + 2 * GUARD_BITS + (decimals as f64 * 3.33) as usize;
        let n = scale_pow10(&self.round_to(w), decimals as i64).round_to_bigint();
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let s = if s.len() <= decimals {
            format!("{}{}", "0".repeat(decimals + 1 - s.len()), s)
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - decimals);
        let sign = if neg { "-" } else { "" };
        if decimals == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }

    /// Decimal digits carried by a precision tag.
    pub fn decimal_digits(prec: usize) -> usize {
        (prec as f64 * std::f64::consts::LOG10_2).floor() as usize
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `π` at `prec` bits, computed once per precision by the Gauss–Legendre
    /// AGM iteration and then shared.
    pub fn pi(prec: usize) -> Self {
        static CACHE: OnceLock<RwLock<HashMap<usize, BigFloat>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(v) = cache.read().expect("pi cache poisoned").get(&prec) {
            return Self::wrap(v.clone(), prec);
        }
        let v = gauss_legendre_pi(prec).round_to(prec);
        cache
            .write()
            .expect("pi cache poisoned")
            .entry(prec)
            .or_insert_with(|| v.value.clone());
        v
    }

    /// `π` from the backend's Chudnovsky evaluation; used as an independent
    /// reference for verification only.
    pub fn pi_reference(prec: usize) -> Self {
        let v = with_consts(|cc| cc.pi(prec, RM));
        Self::wrap(v, prec)
    }
}

fn scale_pow10(x: &BigReal, k: i64) -> BigReal {
    let p = BigReal::from_bigint(&num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize), x.prec);
    if k >= 0 {
        x * &p
    } else {
        x / &p
    }
}

fn gauss_legendre_pi(prec: usize) -> BigReal {
    let w = prec + 64;
    let mut a = BigReal::one(w);
    let mut b = BigReal::from_i64(2, w).sqrt().recip();
    let mut t = BigReal::from_f64(0.25, w);
    let mut p = BigReal::one(w);
    let tol = -(w as f64) / 2.0 - 2.0;
    loop {
        let an = (&a + &b).mul_pow2(-1);
        let bn = (&a * &b).sqrt();
        let d = &a - &an;
        t = &t - &(&p * &(&d * &d));
        p = p.mul_pow2(1);
        let gap = (&an - &bn).log2_abs();
        a = an;
        b = bn;
        if gap < tol {
            break;
        }
    }
    let s = &a + &b;
    &(&s * &s) / &t.mul_pow2(2)
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.to_sci_string(30), self.prec)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| BigReal::decimal_digits(self.prec));
        f.write_str(&self.to_sci_string(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(self.value.neg(), self.prec)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(self.value.clone().neg(), self.prec)
    }
}

macro_rules! bin_op {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let p = self.prec.max(rhs.prec);
                BigReal::wrap(self.value.$inner(&rhs.value, p, RM), p)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.$method(&rhs)
            }
        }
        impl $tr<i64> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                self.$method(&BigReal::from_i64(rhs, self.prec))
            }
        }
        impl $tr<i64> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                (&self).$method(&BigReal::from_i64(rhs, self.prec))
            }
        }
    };
}

bin_op!(Add, add, add);
bin_op!(Sub, sub, sub);
bin_op!(Mul, mul, mul);
bin_op!(Div, div, div);

impl std::iter::Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(mut iter: I) -> BigReal {
        let first = iter.next().unwrap_or_else(|| BigReal::zero(MIN_PREC));
        iter.fold(first, |acc, x| acc + x)
    }
}

impl ToPrimitive for BigReal {
    fn to_i64(&self) -> Option<i64> {
        self.round_to_bigint().to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.round_to_bigint().to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(BigReal::to_f64(self))
    }
}

/// `|a - b|` expressed as `log2`, convenient for tolerance checks.
pub fn log2_diff(a: &BigReal, b: &BigReal) -> f64 {
    (a - b).log2_abs()
}

/// Relative agreement of `a` and `b` in decimal digits.
pub fn matched_digits(a: &BigReal, b: &BigReal) -> f64 {
    let d = (a - b).log10_abs();
    if d == f64::NEG_INFINITY {
        return BigReal::decimal_digits(a.prec.max(b.prec)) as f64;
    }
    (b.log10_abs() - d).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_round_trip() {
        let n: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let x = BigReal::from_bigint(&n, 256);
        assert_eq!(x.round_to_bigint(), n);
    }

    #[test]
    fn decimal_parse_and_format() {
        let x = BigReal::parse_decimal("-1.25e-3", 128).unwrap();
        assert_eq!(x.to_f64(), -0.00125);
        assert_eq!(x.to_sci_string(3), "-1.25e-3");
        assert_eq!(BigReal::from_i64(1000, 128).to_sci_string(2), "1.0e3");
        assert_eq!(BigReal::from_f64(0.5, 128).to_fixed_string(3), "0.500");
        assert!(BigReal::parse_decimal("1.2.3", 64).is_err());
        assert!(BigReal::parse_decimal("", 64).is_err());
    }

    #[test]
    fn pi_matches_reference() {
        for prec in [64, 256, 1024] {
            let a = BigReal::pi(prec);
            let b = BigReal::pi_reference(prec);
            assert!(log2_diff(&a, &b) < -(prec as f64) + 4.0, "prec {prec}");
        }
        assert!(BigReal::pi(512).to_sci_string(20).starts_with("3.1415926535897932385"));
    }

    #[test]
    fn pi_cache_is_stable() {
        let a = BigReal::pi(320);
        let b = BigReal::pi(320);
        assert!(a == b);
    }

    #[test]
    fn mixed_precision_uses_max() {
        let a = BigReal::one(64);
        let b = BigReal::one(512);
        assert_eq!((&a + &b).prec(), 512);
    }

    #[test]
    fn fractional_powers() {
        let x = BigReal::from_i64(7, 256);
        let y = x.pow_ratio(5, 6).powi(6);
        assert!(log2_diff(&y, &x.powi(5)) < -230.0);
        let z = x.pow_ratio(2, 3).powi(3);
        assert!(log2_diff(&z, &x.powi(2)) < -240.0);
    }

    #[test]
    fn log2_of_tiny_values() {
        let x = BigReal::one(128).mul_pow2(-5000);
        assert!((x.log2_abs() + 5000.0).abs() < 1e-9);
        assert_eq!(x.to_f64(), 0.0);
    }
}
