//! Polynomials in the formal symbols `K`, `E` with rational-function
//! coefficients in the modulus `k`, and their derivative in `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use super::poly::{Poly, RatFunc};
use crate::bigreal::BigReal;
use crate::error::Result;

/// `Σ c_{ij}(k) K^i E^j`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct KEPoly {
    terms: BTreeMap<(u32, u32), RatFunc>,
}

impl KEPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(i: u32, j: u32, c: RatFunc) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// The symbol `K`.
    pub fn big_k() -> Self {
        Self::monomial(1, 0, RatFunc::one())
    }

    /// The symbol `E`.
    pub fn big_e() -> Self {
        Self::monomial(0, 1, RatFunc::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&RatFunc> {
        self.terms.get(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, i: u32, j: u32, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&(i, j)) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert((i, j), s);
                }
            }
            None => {
                self.terms.insert((i, j), c);
            }
        }
    }

    pub fn add(&self, o: &KEPoly) -> KEPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &KEPoly) -> KEPoly {
        self.add(&o.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, s: &RatFunc) -> KEPoly {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c.mul(s));
        }
        out
    }

    pub fn scale_rational(&self, s: &BigRational) -> KEPoly {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, c.scale(s));
        }
        out
    }

    pub fn mul(&self, o: &KEPoly) -> KEPoly {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (&(u, v), b) in &o.terms {
                out.add_term(i + u, j + v, a.mul(b));
            }
        }
        out
    }

    /// Total degrees `i + j` present, in increasing order.
    pub fn total_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|(i, j)| i + j).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The common total degree, if the polynomial is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.total_degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Largest power of `E` present.
    pub fn e_degree(&self) -> u32 {
        self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0)
    }

    /// Numeric value at `k` with `K`, `E` given.
    pub fn eval(&self, k: &BigReal, big_k: &BigReal, big_e: &BigReal) -> BigReal {
        let mut acc = BigReal::zero(k.prec());
        for (&(i, j), c) in &self.terms {
            acc = acc + c.eval(k) * big_k.powi(i as i64) * big_e.powi(j as i64);
        }
        acc
    }
}

impl fmt::Debug for KEPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KEPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(&(i, j), c)| format!("[{c}]*K^{i}*E^{j}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `dK/dk = E/(k(1-k²)) - K/k`.
pub fn dk_of_k() -> KEPoly {
    let inv_k = RatFunc::new(Poly::one(), Poly::k()).expect("nonzero");
    let e_coeff = RatFunc::new(Poly::one(), Poly::from_ints(&[0, 1, 0, -1])).expect("nonzero");
    KEPoly::monomial(0, 1, e_coeff).add(&KEPoly::monomial(1, 0, inv_k.neg()))
}

/// `dE/dk = (E - K)/k`.
pub fn de_of_k() -> KEPoly {
    let inv_k = RatFunc::new(Poly::one(), Poly::k()).expect("nonzero");
    KEPoly::monomial(0, 1, inv_k.clone()).add(&KEPoly::monomial(1, 0, inv_k.neg()))
}

/// Exact `d/dk` of a `K`, `E` polynomial.
pub fn diff_k(p: &KEPoly) -> KEPoly {
    let dk = dk_of_k();
    let de = de_of_k();
    let mut out = KEPoly::zero();
    for (&(i, j), c) in &p.terms {
        out.add_term(i, j, c.derivative());
        if i > 0 {
            let t = KEPoly::monomial(i - 1, j, c.scale(&BigRational::from_integer(i.into())));
            out = out.add(&t.mul(&dk));
        }
        if j > 0 {
            let t = KEPoly::monomial(i, j - 1, c.scale(&BigRational::from_integer(j.into())));
            out = out.add(&t.mul(&de));
        }
    }
    out
}

/// Divides by a nonzero rational function.
pub fn div_ratfunc(p: &KEPoly, d: &RatFunc) -> Result<KEPoly> {
    let inv = RatFunc::one().div(d)?;
    Ok(p.scale(&inv))
}
