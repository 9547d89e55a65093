//! Exact differentiation in `K`, `E` over `Q(k)` and the numeric solve for
//! the coefficients of Ramanujan-type series.
//!
//! With `z = 4k²(1 - k²)` and `φ(z) = (2/π)² K(k)²`, the generating function
//! `F(z) = φ(z)^{2ν} = Σ c_{2ν}(n) zⁿ` is `(2/π)^{4ν} K^{4ν}`. The entries
//! `z^m F^{(m)}(z)` for `m = 0..2ν` are built exactly (without the constant
//! prefactor) by [`derivative_stack`]. After replacing `E` through the alpha
//! relation every entry is a Laurent polynomial in `K`; requiring
//! `Σ A_m z^m F^{(m)}` to have no positive power of `K` gives `2ν` linear
//! conditions on `A_1..A_{2ν}` with `A_0 = 1`, and the remaining `K⁰` term
//! is `g/π^{2ν}`.

mod kepoly;
mod poly;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

pub use kepoly::{de_of_k, diff_k, div_ratfunc, dk_of_k, KEPoly};
pub use poly::{Poly, RatFunc};

use crate::alpha::alpha_from_context;
use crate::bigreal::BigReal;
use crate::elliptic::{singular_modulus, ModulusContext};
use crate::error::{Error, Result};
use crate::rational::PosRational;

/// Extra bits carried through substitution and elimination.
pub const SOLVE_GUARD: usize = 64;
/// A solve is accepted when its residual is below `2^{-prec+48}`.
pub const RESIDUAL_SLACK: i64 = 48;
pub const MAX_NU: u32 = 3;

/// `z = 4k²(1 - k²)`.
pub fn z_of_k() -> RatFunc {
    RatFunc::from_poly(Poly::from_ints(&[0, 0, 4, 0, -4]))
}

/// `dz/dk = 8k(1 - 2k²)`.
pub fn dz_dk() -> RatFunc {
    RatFunc::from_poly(Poly::from_ints(&[0, 8, 0, -16]))
}

type StackCache = RwLock<HashMap<u32, Arc<Vec<KEPoly>>>>;

fn stack_cache() -> &'static StackCache {
    static CACHE: OnceLock<StackCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `[z^m F^{(m)}(z) / (2/π)^{4ν}]` for `m = 0..=2ν`, where `F = (2/π)^{4ν} K^{4ν}`.
///
/// Every entry is homogeneous of total degree `4ν` in `K`, `E`. Results are
/// memoized per `ν`.
pub fn derivative_stack(nu: u32) -> Result<Arc<Vec<KEPoly>>> {
    if nu == 0 {
        return Err(Error::Domain("nu must be at least 1".into()));
    }
    if let Some(s) = stack_cache().read().expect("stack cache").get(&nu) {
        return Ok(s.clone());
    }
    let z = z_of_k();
    let dz = dz_dk();
    let mut g = KEPoly::monomial(4 * nu, 0, RatFunc::one());
    let mut zm = RatFunc::one();
    let mut out = vec![g.clone()];
    for _ in 0..2 * nu {
        g = div_ratfunc(&diff_k(&g), &dz)?;
        zm = zm.mul(&z);
        out.push(g.scale(&zm));
    }
    let out = Arc::new(out);
    stack_cache().write().expect("stack cache").entry(nu).or_insert_with(|| out.clone());
    Ok(out)
}

/// `2^{4ν}`: the rational part of the prefactor `(2/π)^{4ν}`.
pub fn stack_prefactor_rational(nu: u32) -> BigReal {
    BigReal::one(crate::bigreal::MIN_PREC).mul_pow2(4 * nu as i64)
}

/// `Σ_e c_e K^e` where term `e` carries an implicit `π^{(D-e)/2}`, `D` being
/// the total `K`,`E`-degree of the source.
#[derive(Clone, Debug)]
pub struct LaurentK {
    pub terms: BTreeMap<i64, BigReal>,
    pub degree: i64,
}

impl LaurentK {
    pub fn coeff(&self, e: i64) -> Option<&BigReal> {
        self.terms.get(&e)
    }

    /// Numeric value with the implicit powers of `π` restored.
    pub fn eval(&self, big_k: &BigReal) -> BigReal {
        let p = big_k.prec();
        let pi = BigReal::pi(p);
        let mut acc = BigReal::zero(p);
        for (&e, c) in &self.terms {
            acc = acc + c * big_k.powi(e) * pi.powi((self.degree - e) / 2);
        }
        acc
    }
}

/// Replaces `E` by `c₁K + c₂π/K` with `c₁ = 1 - a/√r`, `c₂ = 1/(4√r)` and
/// evaluates the coefficients at `k = k_r`. The input must be homogeneous.
pub fn substitute_alpha(p: &KEPoly, ctx: &ModulusContext, a: &BigReal) -> Result<LaurentK> {
    let w = ctx.prec.max(a.prec());
    if p.is_empty() {
        return Ok(LaurentK { terms: BTreeMap::new(), degree: 0 });
    }
    let degree = p
        .homogeneous_degree()
        .ok_or_else(|| Error::Structural("substitution needs a homogeneous K,E polynomial".into()))?
        as i64;
    let sr = ctx.r.sqrt(w);
    let one = BigReal::one(w);
    let c1 = &one - a.round_to(w) / &sr;
    let c2 = (&sr * 4).recip();
    let k = ctx.k.round_to(w);
    let mut terms: BTreeMap<i64, BigReal> = BTreeMap::new();
    for (&(i, j), c) in p.terms() {
        let cv = c.eval(&k);
        let mut binom = BigReal::one(w);
        for l in 0..=j {
            let e = (i + j) as i64 - 2 * l as i64;
            let v = &cv * &binom * c1.powi((j - l) as i64) * c2.powi(l as i64);
            let slot = terms.entry(e).or_insert_with(|| BigReal::zero(w));
            *slot = &*slot + &v;
            binom = binom * (j - l) as i64 / (l + 1) as i64;
        }
    }
    Ok(LaurentK { terms, degree })
}

/// Output of [`solve_coefficients`].
#[derive(Clone, Debug)]
pub struct Solution {
    pub nu: u32,
    pub r: PosRational,
    /// `A_0 = 1, A_1, .., A_{2ν}`.
    pub a: Vec<BigReal>,
    /// The series sums to `g / π^{2ν}`.
    pub g: BigReal,
    /// `log2` of the largest leftover positive-`K` coefficient, relative to
    /// the coefficient scale.
    pub residual_log2: f64,
    pub rank: usize,
    /// `z = 4 k_r² k'_r²`.
    pub x: BigReal,
    pub alpha: BigReal,
    pub prec: usize,
}

fn eliminate(mut m: Vec<Vec<BigReal>>, mut rhs: Vec<BigReal>, w: usize) -> Result<(Vec<BigReal>, usize)> {
    let n = rhs.len();
    let scale = m.iter().flatten().map(|v| v.log2_abs()).fold(f64::NEG_INFINITY, f64::max);
    let tiny = scale - (w as f64) / 2.0;
    let mut rank = 0;
    for col in 0..n {
        let (piv, best) = (col..n)
            .map(|r| (r, m[r][col].log2_abs()))
            .fold((col, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best < tiny {
            continue;
        }
        rank += 1;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let pivot_row = m[col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot_row[col];
            for (dst, src) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst = &*dst - &(&f * src);
            }
            rhs[r] = &rhs[r] - &(&f * &rhs[col]);
        }
    }
    if rank < n {
        return Err(Error::Degenerate { rank, unknowns: n });
    }
    let mut x = vec![BigReal::zero(w); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for c in row + 1..n {
            acc = acc - &m[row][c] * &x[c];
        }
        x[row] = acc / &m[row][row];
    }
    Ok((x, rank))
}

/// Solves for `A_1..A_{2ν}` and `g` at the singular modulus `k_r`.
pub fn solve_coefficients(nu: u32, r: &PosRational, prec: usize) -> Result<Solution> {
    if !(1..=MAX_NU).contains(&nu) {
        return Err(Error::Domain(format!("nu must be in 1..={MAX_NU}, got {nu}")));
    }
    let w = prec + SOLVE_GUARD;
    let ctx = singular_modulus(r, w)?;
    let alpha = alpha_from_context(&ctx);
    solve_with(nu, &ctx, &alpha, prec)
}

/// [`solve_coefficients`] for a given context and alpha value.
pub fn solve_with(nu: u32, ctx: &ModulusContext, alpha: &BigReal, prec: usize) -> Result<Solution> {
    let w = ctx.prec;
    let stack = derivative_stack(nu)?;
    let laurent: Vec<LaurentK> = stack.iter().map(|p| substitute_alpha(p, ctx, alpha)).collect::<Result<_>>()?;
    let n = 2 * nu as usize;
    let rows: Vec<i64> = (1..=n as i64).map(|i| 2 * i).collect();
    let zero = BigReal::zero(w);
    let get = |m: usize, e: i64| laurent[m].coeff(e).cloned().unwrap_or_else(|| zero.clone());
    for l in &laurent {
        if let Some((&e, _)) = l.terms.iter().find(|(e, v)| (**e < 0 || **e % 2 != 0) && !v.is_zero()) {
            return Err(Error::Structural(format!("unexpected K^{e} term after substitution")));
        }
    }
    let mat: Vec<Vec<BigReal>> = rows.iter().map(|&e| (1..=n).map(|m| get(m, e)).collect()).collect();
    let rhs: Vec<BigReal> = rows.iter().map(|&e| -get(0, e)).collect();
    let (sol, rank) = eliminate(mat.clone(), rhs.clone(), w)?;

    let mut resid = f64::NEG_INFINITY;
    let mut scale = f64::NEG_INFINITY;
    for (row, &e) in rows.iter().enumerate() {
        let mut acc = get(0, e);
        scale = scale.max(acc.log2_abs());
        for m in 0..n {
            let t = &mat[row][m] * &sol[m];
            scale = scale.max(t.log2_abs());
            acc = acc + t;
        }
        resid = resid.max(acc.log2_abs());
    }
    let residual_log2 = resid - scale.max(0.0);
    let threshold = -(prec as i64) + RESIDUAL_SLACK;
    if residual_log2 >= threshold as f64 {
        return Err(Error::Residual {
            context: format!("coefficient solve nu={nu}, r={}", ctx.r),
            residual_log2,
            threshold_log2: threshold,
        });
    }

    let mut c0 = get(0, 0);
    for (m, s) in sol.iter().enumerate() {
        c0 = c0 + get(m + 1, 0) * s;
    }
    let g = c0.mul_pow2(4 * nu as i64);
    let mut a = vec![BigReal::one(w)];
    a.extend(sol);
    let k2 = &ctx.k * &ctx.k;
    let x = (&k2 * (BigReal::one(w) - &k2)).mul_pow2(2);
    Ok(Solution {
        nu,
        r: ctx.r,
        a: a.into_iter().map(|v| v.round_to(prec)).collect(),
        g: g.round_to(prec),
        residual_log2,
        rank,
        x: x.round_to(prec),
        alpha: alpha.round_to(prec),
        prec,
    })
}

/// Closed forms of `A_1..A_4` and `g` for `ν = 2` as functions of `a(r)`,
/// `√r` and `w = k_r²`.
#[derive(Clone, Debug)]
pub struct Nu2ClosedForm {
    pub a: [BigReal; 5],
    pub g: BigReal,
}

pub fn nu2_closed_form(alpha: &BigReal, r: &PosRational, w: &BigReal) -> Nu2ClosedForm {
    let p = alpha.prec().max(w.prec());
    let a = alpha.round_to(p);
    let w = w.round_to(p);
    let s = r.sqrt(p);
    let rr = r.to_real(p);
    let one = BigReal::one(p);
    let poly = |c: &[i64]| -> BigReal {
        let mut acc = BigReal::zero(p);
        for v in c.iter().rev() {
            acc = &acc * &w + *v;
        }
        acc
    };
    let a2 = &a * &a;
    let a3 = &a2 * &a;
    let a4 = &a3 * &a;
    let r32 = &rr * &s;
    let u = &one - w.mul_pow2(1);
    let den = &a4 * 105 - &a3 * &s * &w * 420 + &a2 * &rr * &w * poly(&[-1, 8]) * 90
        - &a * &r32 * &w * poly(&[1, -12, 32]) * 20
        + &rr * &rr * &w * poly(&[-2, 43, -192, 256]);
    let big_a4 = &rr * &rr * u.powi(4) / &den;
    let big_a3 = &r32 * u.powi(2) * (&a * poly(&[5, -10]) + &s * poly(&[3, -23, 28])) * 2 / &den;
    let big_a2 = &rr
        * (&a2 * u.powi(2) * 45 - &a * &s * poly(&[-1, 11, -30, 24]) * 30 + &rr * poly(&[7, -140, 735, -1400, 880]))
        / &den;
    let big_a1 = &s
        * (-(&a3 * poly(&[-1, 2]) * 210) + &a2 * &s * poly(&[1, -13, 20]) * 90
            - &a * &rr * poly(&[-2, 57, -276, 304]) * 10
            + &r32 * poly(&[2, -115, 995, -2640, 2080]))
        / (&den * 2);
    let g = BigReal::from_i64(105, p) / &den;
    Nu2ClosedForm { a: [one, big_a1, big_a2, big_a3, big_a4], g }
}
