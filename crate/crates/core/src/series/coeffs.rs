//! Exact coefficients `c_p(n)` of `(Σ C(2n,n)³ xⁿ / 64ⁿ)^p`.
//!
//! Since the base sequence carries `64^{-n}`, every convolution does too, so
//! the tables hold the integers `64ⁿ c_p(n)`.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Unbounded-integer rational used for `c_p(n)`.
pub type ExactRational = BigRational;

/// Highest supported power `p`.
pub const MAX_P: u32 = 6;

/// `levels[0][n] = C(2n,n)³`, `levels[i][n] = 64ⁿ c_{2i}(n)`.
type Levels = RwLock<Vec<Vec<BigInt>>>;

fn tables() -> &'static Levels {
    static T: OnceLock<Levels> = OnceLock::new();
    T.get_or_init(|| RwLock::new(vec![Vec::new(); 1 + (MAX_P / 2) as usize]))
}

fn extend(levels: &mut [Vec<BigInt>], upto: usize) {
    while levels[0].len() <= upto {
        let n = levels[0].len() as u64;
        let b = binomial(BigInt::from(2 * n), BigInt::from(n));
        levels[0].push(&b * &b * &b);
    }
    for lvl in 1..levels.len() {
        // c_2 = b * b, then c_{2i} = c_2 * c_{2i-2}
        while levels[lvl].len() <= upto {
            let n = levels[lvl].len();
            let prev = if lvl == 1 { &levels[0] } else { &levels[lvl - 1] };
            let base = if lvl == 1 { &levels[0] } else { &levels[1] };
            let mut acc = BigInt::zero();
            for s in 0..=n {
                acc += &base[s] * &prev[n - s];
            }
            levels[lvl].push(acc);
        }
    }
}

fn level_of(p: u32) -> Result<usize> {
    if p == 0 || !p.is_multiple_of(2) || p > MAX_P {
        return Err(Error::Domain(format!("p must be one of 2, 4, 6; got {p}")));
    }
    Ok((p / 2) as usize)
}

/// `64ⁿ c_p(n)`, an integer.
pub fn cp_scaled(p: u32, n: usize) -> Result<BigInt> {
    let lvl = level_of(p)?;
    if let Some(v) = tables().read().expect("coefficient table").get(lvl).and_then(|t| t.get(n)) {
        return Ok(v.clone());
    }
    let mut t = tables().write().expect("coefficient table");
    extend(&mut t, n);
    Ok(t[lvl][n].clone())
}

/// `64ⁿ c_p(n)` for `n = 0..count`.
pub fn cp_scaled_range(p: u32, count: usize) -> Result<Vec<BigInt>> {
    if count == 0 {
        level_of(p)?;
        return Ok(Vec::new());
    }
    cp_scaled(p, count - 1)?;
    let lvl = level_of(p)?;
    Ok(tables().read().expect("coefficient table")[lvl][..count].to_vec())
}

/// `c_p(n)`.
pub fn cp(p: u32, n: usize) -> Result<ExactRational> {
    let num = cp_scaled(p, n)?;
    let den = num_traits::pow(BigInt::from(64), n);
    Ok(BigRational::new(num, den))
}

/// `c₂(n) = 2^{-6n} Σ_s C(2s,s)³ C(2n-2s,n-s)³`.
pub fn c2(n: usize) -> ExactRational {
    cp(2, n).expect("p = 2 is supported")
}

/// Signed Stirling numbers of the first kind, `s(m, j)` for `m, j ≤ max`.
pub fn stirling_first(max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); max + 1]; max + 1];
    s[0][0] = BigInt::one();
    for m in 1..=max {
        for j in 1..=m {
            s[m][j] = &s[m - 1][j - 1] - BigInt::from((m - 1) as u64) * &s[m - 1][j];
        }
    }
    s
}
