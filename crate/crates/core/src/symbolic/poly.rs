//! Univariate polynomials and rational functions in `k` over `Q`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bigreal::BigReal;
use crate::error::{Error, Result};

/// Dense polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(v: BigRational) -> Self {
        Self::from_coeffs(vec![v])
    }

    /// From small integer coefficients, low to high.
    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|v| q(*v)).collect())
    }

    /// `k`.
    pub fn k() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.c.last()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = BigRational::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|v| -v).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|v| v * s).collect())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, v)| v * q(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.c[dd].clone();
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let f = &rem[i + dd] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                rem[i + j] -= &f * dc;
            }
            quot[i] = f;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, x: &BigReal) -> BigReal {
        let p = x.prec();
        let mut acc = BigReal::zero(p);
        for v in self.c.iter().rev() {
            acc = &acc * x + BigReal::from_ratio(v, p);
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, v) in self.c.iter().enumerate().rev() {
            if v.is_zero() {
                continue;
            }
            let sign = if v.is_negative() { "-" } else { "+" };
            if first {
                if v.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = v.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("k")?,
                (1, false) => write!(f, "{a}*k")?,
                (_, true) => write!(f, "k^{i}")?,
                (_, false) => write!(f, "{a}*k^{i}")?,
            }
        }
        Ok(())
    }
}

/// `num / den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Structural("rational function with zero denominator".into()));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.degree() == Some(0) { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let lead = d.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Self { num: n, den: d }
    }

    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Poly::from_ints(&[n]))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::reduced(self.num.add(&o.num), self.den.clone());
        }
        // lcm-based sum keeps intermediate degrees down
        let g = self.den.gcd(&o.den);
        let a = self.den.div_rem(&g).0;
        let b = o.den.div_rem(&g).0;
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        Self::reduced(num, a.mul(&o.den))
    }

    pub fn neg(&self) -> RatFunc {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::reduced(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, s: &BigRational) -> RatFunc {
        if s.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::Structural("division by the zero rational function".into()));
        }
        Ok(Self::reduced(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    /// `d/dk` by the quotient rule.
    pub fn derivative(&self) -> RatFunc {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::reduced(n, self.den.mul(&self.den))
    }

    pub fn eval(&self, x: &BigReal) -> BigReal {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_rational(x) / d)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn division_and_gcd() {
        // (k-1)(k+2) and (k-1)(k-3)
        let a = Poly::from_ints(&[-2, 1, 1]);
        let b = Poly::from_ints(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
        let (qq, rr) = a.div_rem(&Poly::from_ints(&[-1, 1]));
        assert_eq!(qq, Poly::from_ints(&[2, 1]));
        assert!(rr.is_zero());
    }

    #[test]
    fn ratfunc_reduces() {
        let f = RatFunc::new(Poly::from_ints(&[-2, 1, 1]), Poly::from_ints(&[6, -8, 2])).unwrap();
        // (k+2) / (2(k-3)) with monic denominator
        assert_eq!(f.num(), &Poly::from_coeffs(vec![r(1, 1), r(1, 2)]));
        assert_eq!(f.den(), &Poly::from_ints(&[-3, 1]));
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn field_laws_at_a_point() {
        let f = RatFunc::new(Poly::from_ints(&[1, 2]), Poly::from_ints(&[3, 0, 1])).unwrap();
        let g = RatFunc::new(Poly::from_ints(&[0, 0, 5]), Poly::from_ints(&[-1, 1])).unwrap();
        let x = r(2, 7);
        let fx = f.eval_rational(&x).unwrap();
        let gx = g.eval_rational(&x).unwrap();
        assert_eq!(f.add(&g).eval_rational(&x).unwrap(), &fx + &gx);
        assert_eq!(f.mul(&g).eval_rational(&x).unwrap(), &fx * &gx);
        assert_eq!(f.div(&g).unwrap().eval_rational(&x).unwrap(), &fx / &gx);
        assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn quotient_rule() {
        // d/dk 1/k = -1/k^2
        let f = RatFunc::new(Poly::one(), Poly::k()).unwrap();
        let d = f.derivative();
        assert_eq!(d, RatFunc::new(Poly::from_ints(&[-1]), Poly::from_ints(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[1, 0, -3]).to_string(), "-3*k^2 + 1");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn div_rem_reconstructs(a in prop::collection::vec(-50i64..50, 1..8), b in prop::collection::vec(-50i64..50, 1..5)) {
            let (pa, pb) = (Poly::from_ints(&a), Poly::from_ints(&b));
            prop_assume!(!pb.is_zero());
            let (quo, rem) = pa.div_rem(&pb);
            prop_assert_eq!(quo.mul(&pb).add(&rem), pa);
            prop_assert!(rem.is_zero() || rem.degree() < pb.degree());
        }
    }
}
