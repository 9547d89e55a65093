//! Positive rational indices `r` for singular moduli.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bigreal::BigReal;
use crate::error::{Error, Result};

/// A strictly positive rational `p/q` in lowest terms.
///
/// Written as `"p"` or `"p/q"`; the Y-table arguments `r/5` make the
/// rational form necessary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PosRational {
    num: u64,
    den: u64,
}

impl PosRational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Domain(format!("r must be a positive rational, got {num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(PosRational { num: num / g, den: den / g })
    }

    pub fn integer(n: u64) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// `n * r`.
    pub fn scale(&self, n: u64) -> Self {
        let num = self.num.checked_mul(n).expect("rational index overflow");
        PosRational::new(num, self.den).expect("positive")
    }

    /// `r / n`.
    pub fn divide(&self, n: u64) -> Self {
        let den = self.den.checked_mul(n).expect("rational index overflow");
        PosRational::new(self.num, den).expect("positive")
    }

    pub fn to_big_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn to_real(&self, prec: usize) -> BigReal {
        BigReal::from_ratio(&self.to_big_rational(), prec)
    }

    /// `√r` at `prec` bits.
    pub fn sqrt(&self, prec: usize) -> BigReal {
        let w = prec + crate::bigreal::GUARD_BITS;
        self.to_real(w).sqrt().round_to(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for PosRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("expected \"p\" or \"p/q\" with positive integers, got {s:?}")))
        };
        match s.split_once('/') {
            Some((p, q)) => PosRational::new(parse(p)?, parse(q)?),
            None => PosRational::new(parse(s)?, 1),
        }
    }
}

impl TryFrom<String> for PosRational {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PosRational> for String {
    fn from(r: PosRational) -> String {
        r.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        let r: PosRational = "10/4".parse().unwrap();
        assert_eq!((r.num(), r.den()), (5, 2));
        assert_eq!(r.to_string(), "5/2");
        assert_eq!("7".parse::<PosRational>().unwrap(), PosRational::integer(7).unwrap());
    }

    #[test]
    fn rejects_nonpositive() {
        assert!("0".parse::<PosRational>().is_err());
        assert!("3/0".parse::<PosRational>().is_err());
        assert!("-2".parse::<PosRational>().is_err());
        assert!("1.5".parse::<PosRational>().is_err());
    }

    #[test]
    fn scaling() {
        let r: PosRational = "17/5".parse().unwrap();
        assert_eq!(r.scale(4).to_string(), "68/5");
        assert_eq!(r.scale(5).to_string(), "17/1");
        assert_eq!(r.divide(2).to_string(), "17/10");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn display_parse_round_trip(n in 1u64..1_000_000, d in 1u64..1_000_000) {
            let r = PosRational::new(n, d).unwrap();
            let back: PosRational = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
