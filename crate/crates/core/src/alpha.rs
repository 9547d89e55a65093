//! The elliptic alpha function
//! `a(r) = π/(4K²) - √r (E/K - 1)` at singular moduli, with its modular
//! reductions `a(r) → a(4r), a(9r), a(25r)`, the multipliers
//! `m_p = K[r]/K[p²r]` and the weight-2 Eisenstein sums.
//!
//! Reductions never replace [`alpha_direct`]; they cross-check it. Each one
//! recomputes the algebraic relation it relies on and fails with
//! [`Error::Residual`] if that relation is not met.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bigreal::{BigReal, GUARD_BITS};
use crate::elliptic::{nome, singular_modulus, ModulusContext};
use crate::error::{Error, Result};
use crate::rational::PosRational;
use crate::roots::{eval_poly, real_roots, select_nearest};
use crate::rr::rr_eval;

const REDUCTION_GUARD: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaRoute {
    Direct,
    Via4r,
    Via9r,
    Via25r,
}

impl AlphaRoute {
    /// Degree factor `d` with `a(d·r)` produced from `a(r)`.
    pub fn factor(self) -> u64 {
        match self {
            AlphaRoute::Direct => 1,
            AlphaRoute::Via4r => 4,
            AlphaRoute::Via9r => 9,
            AlphaRoute::Via25r => 25,
        }
    }
}

impl fmt::Display for AlphaRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlphaRoute::Direct => "direct",
            AlphaRoute::Via4r => "4r",
            AlphaRoute::Via9r => "9r",
            AlphaRoute::Via25r => "25r",
        })
    }
}

impl FromStr for AlphaRoute {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(AlphaRoute::Direct),
            "4r" => Ok(AlphaRoute::Via4r),
            "9r" => Ok(AlphaRoute::Via9r),
            "25r" => Ok(AlphaRoute::Via25r),
            other => Err(Error::Parse(format!("unknown route {other:?}; expected direct, 4r, 9r or 25r"))),
        }
    }
}

/// `a(r)` and the route that produced it.
#[derive(Clone, Debug)]
pub struct AlphaValue {
    pub r: PosRational,
    pub value: BigReal,
    pub route: AlphaRoute,
    pub prec: usize,
}

impl AlphaValue {
    /// `0 < a(r) < √r`, the sanity window for `r ≥ 1`.
    pub fn in_sanity_window(&self) -> bool {
        self.value.is_positive() && self.value < self.r.sqrt(self.prec)
    }
}

/// `m_p = K[r] / K[p²r]`.
#[derive(Clone, Debug)]
pub struct MultiplierValue {
    pub p: u64,
    pub r: PosRational,
    pub m: BigReal,
}

fn residual_check(context: &str, residual: &BigReal, scale: &BigReal, slack: i64, prec: usize) -> Result<()> {
    let rel = residual.log2_abs() - scale.log2_abs().max(0.0);
    let threshold = -(prec as i64) + slack;
    if rel >= threshold as f64 {
        return Err(Error::Residual { context: context.to_string(), residual_log2: rel, threshold_log2: threshold });
    }
    Ok(())
}

/// `a(r)` from the values carried by a context.
pub fn alpha_from_context(ctx: &ModulusContext) -> BigReal {
    let w = ctx.prec + GUARD_BITS;
    let k = ctx.big_k.round_to(w);
    let first = BigReal::pi(w) / (&k * &k).mul_pow2(2);
    (first + ctx.r.sqrt(w) * ctx.side_sum.round_to(w)).round_to(ctx.prec)
}

pub fn alpha_direct(r: &PosRational, prec: usize) -> Result<AlphaValue> {
    let ctx = singular_modulus(r, prec + GUARD_BITS)?;
    Ok(AlphaValue { r: *r, value: alpha_from_context(&ctx).round_to(prec), route: AlphaRoute::Direct, prec })
}

/// `k_{4r} = (1 - k'_r)/(1 + k'_r) = k_r² / (1 + k'_r)²` (Landen).
pub fn landen_k4r(ctx: &ModulusContext) -> BigReal {
    let d = BigReal::one(ctx.prec) + &ctx.kprime;
    (&ctx.k * &ctx.k) / (&d * &d)
}

/// `a(4r) = (1 + k_{4r})² a(r) - 2√r k_{4r}`.
pub fn alpha_4r(a_r: &AlphaValue, prec: usize) -> Result<AlphaValue> {
    let w = prec + REDUCTION_GUARD;
    let ctx = singular_modulus(&a_r.r, w)?;
    let k4 = landen_k4r(&ctx);
    // Landen against the theta route for k_{4r}
    let ctx4 = singular_modulus(&a_r.r.scale(4), w)?;
    residual_check("Landen k_{4r}", &(&k4 - &ctx4.k).abs(), &ctx4.k, 16, w)?;
    let one = BigReal::one(w);
    let s = &one + &k4;
    let value = &s * &s * a_r.value.round_to(w) - ctx.sqrt_r() * &k4 * 2;
    Ok(AlphaValue { r: a_r.r.scale(4), value: value.round_to(prec), route: AlphaRoute::Via4r, prec })
}

/// The 4r reduction with `k_r` in place of `k_{4r}`, exactly as it is often
/// quoted. It is wrong (by about 0.3 at `r = 1`) and exists only so the test
/// suite can keep demonstrating that.
pub fn alpha_4r_with_kr(a_r: &AlphaValue, prec: usize) -> Result<BigReal> {
    let w = prec + REDUCTION_GUARD;
    let ctx = singular_modulus(&a_r.r, w)?;
    let s = BigReal::one(w) + &ctx.k;
    Ok((&s * &s * a_r.value.round_to(w) - ctx.sqrt_r() * &ctx.k * 2).round_to(prec))
}

/// Coefficients (low to high) of `27M⁴ - 18M² - 8(1 - 2k_r²)M - 1`.
pub fn cubic_multiplier_quartic(ctx: &ModulusContext) -> Vec<BigReal> {
    let p = ctx.prec;
    let k2 = &ctx.k * &ctx.k;
    vec![
        BigReal::from_i64(-1, p),
        (BigReal::one(p) - k2.mul_pow2(1)) * -8,
        BigReal::from_i64(-18, p),
        BigReal::zero(p),
        BigReal::from_i64(27, p),
    ]
}

/// `M_{3r}`: the root of the quartic closest to `K[9r]/K[r]`.
pub fn cubic_multiplier(ctx: &ModulusContext, ctx9: &ModulusContext) -> Result<BigReal> {
    let quartic = cubic_multiplier_quartic(ctx);
    let mut prec = ctx.prec;
    let target = &ctx9.big_k / &ctx.big_k;
    for _ in 0..3 {
        let roots = real_roots(&quartic, prec)?;
        match select_nearest(&roots, &target) {
            Ok(m) => {
                let res = eval_poly(&quartic, &m).abs();
                residual_check("M_{3r} quartic", &res, &BigReal::one(prec), 16, ctx.prec)?;
                return Ok(m);
            }
            Err(Error::RootSelection(_)) => prec *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RootSelection("M_{3r}: no admissible root of the quartic".into()))
}

/// `a(9r)` from `a(r)` via the cubic modular relation
/// `a(9r)/√r - k_{9r}² = 1 - (k_{9r}k_r + k'_{9r}k'_r + 1)/(3M) - 1/(3M²)
///  + (a(r)/√r - k_r²/3)/M²`.
pub fn alpha_9r(a_r: &AlphaValue, prec: usize) -> Result<AlphaValue> {
    let w = prec + REDUCTION_GUARD;
    let ctx = singular_modulus(&a_r.r, w)?;
    let ctx9 = singular_modulus(&a_r.r.scale(9), w)?;
    let m = cubic_multiplier(&ctx, &ctx9)?;
    let sr = ctx.sqrt_r();
    let one = BigReal::one(w);
    let three_m = &m * 3;
    let cross = &ctx9.k * &ctx.k + &ctx9.kprime * &ctx.kprime + &one;
    let m2 = &m * &m;
    let rhs = &one - cross / &three_m - (&m2 * 3).recip()
        + (a_r.value.round_to(w) / &sr - (&ctx.k * &ctx.k) / 3) / &m2;
    let value = (rhs + &ctx9.k * &ctx9.k) * &sr;
    Ok(AlphaValue { r: a_r.r.scale(9), value: value.round_to(prec), route: AlphaRoute::Via9r, prec })
}

/// `P(q) = 1 - 24 Σ_{n≥1} n qⁿ/(1 - qⁿ)`.
///
/// Stops when `24 (N+1) q^{N+1} / (1-q)³`, which bounds the omitted tail,
/// falls below `2^{-prec-8}`.
pub fn eisenstein_p(q: &BigReal, prec: usize) -> Result<BigReal> {
    if q.is_negative() || q >= &BigReal::one(q.prec()) {
        return Err(Error::Domain(format!("nome must satisfy 0 <= q < 1, got {}", q.to_sci_string(12))));
    }
    let w = prec + GUARD_BITS;
    if q.is_zero() {
        return Ok(BigReal::one(prec));
    }
    let q = q.round_to(w);
    let one = BigReal::one(w);
    let tail = 3.0 * (&one - &q).log2_abs() - (24f64).log2();
    let mut sum = BigReal::zero(w);
    let mut qn = q.clone();
    let mut n: i64 = 1;
    loop {
        sum = &sum + &(&qn * n / (&one - &qn));
        qn = &qn * &q;
        n += 1;
        if qn.is_zero() || qn.log2_abs() + (n as f64).log2() - tail < -(w as f64) {
            break;
        }
    }
    Ok((one - sum * 24).round_to(prec))
}

/// `T_{p,r} = P(q²) - p P(q^{2p})` with `q = e^{-π√r}`.
pub fn t_sum(p: u64, r: &PosRational, prec: usize) -> Result<BigReal> {
    if p < 2 {
        return Err(Error::Domain(format!("T_{{p,r}} needs p >= 2, got {p}")));
    }
    let w = prec + GUARD_BITS;
    let q = nome(r, w)?;
    let q2 = &q * &q;
    let t = eisenstein_p(&q2, w)? - eisenstein_p(&q2.powi(p as i64), w)? * p as i64;
    Ok(t.round_to(prec))
}

pub fn multiplier(p: u64, r: &PosRational, prec: usize) -> Result<MultiplierValue> {
    if p < 2 {
        return Err(Error::Domain(format!("multiplier needs p >= 2, got {p}")));
    }
    let w = prec + GUARD_BITS;
    let c = singular_modulus(r, w)?;
    let cp = singular_modulus(&r.scale(p * p), w)?;
    Ok(MultiplierValue { p, r: *r, m: (&c.big_k / &cp.big_k).round_to(prec) })
}

/// `m₅ = w/k + w'/k' - w w'/(k k')` with `w = √(k_r k_{25r})`,
/// `w' = √(k'_r k'_{25r})`.
pub fn m5_algebraic(ctx: &ModulusContext, ctx25: &ModulusContext) -> BigReal {
    let ww = (&ctx.k * &ctx25.k).sqrt();
    let wwp = (&ctx.kprime * &ctx25.kprime).sqrt();
    &ww / &ctx.k + &wwp / &ctx.kprime - (&ww * &wwp) / ctx.kk()
}

/// Both sides of the degree-5 multiplier relation
/// `(5μ - 1)⁵ (1 - μ) = 256 k_r² k'_r² μ`, which holds for the inverse
/// multiplier `μ = 1/m₅ = K[25r]/K[r]`.
pub fn m5_quintic_sides(ctx: &ModulusContext, m5: &BigReal) -> (BigReal, BigReal) {
    let mu = m5.recip();
    let one = BigReal::one(mu.prec());
    let lhs = (&mu * 5 - &one).powi(5) * (&one - &mu);
    let kk = ctx.kk();
    let rhs = &kk * &kk * &mu * 256;
    (lhs, rhs)
}

/// `a(25r)` from `a(r)`:
/// `3a(25r)/(m₅²√r) = 3a(r)/√r + 5(1 + k_{25r}²)/m₅² - (1 + k_r²)
///   - 2^{2/3} A_r^{-5/6} (k k')^{2/3} (R⁵ + R^{-5})`, `R = R(q²)`.
pub fn alpha_25r(a_r: &AlphaValue, prec: usize) -> Result<AlphaValue> {
    let w = prec + REDUCTION_GUARD;
    let ctx = singular_modulus(&a_r.r, w)?;
    let ctx25 = singular_modulus(&a_r.r.scale(25), w)?;
    let m = m5_algebraic(&ctx, &ctx25);
    let k_ratio = &ctx.big_k / &ctx25.big_k;
    residual_check("m_5 algebraic vs K[r]/K[25r]", &(&m - &k_ratio).abs(), &m, 24, w)?;
    let (lhs, rhs) = m5_quintic_sides(&ctx, &m);
    residual_check("m_5 quintic", &(&lhs - &rhs).abs(), &rhs, 24, w)?;

    let q = ctx.q.round_to(w);
    let rr = rr_eval(&(&q * &q), w)?;
    let bracket = &rr.fraction5 + rr.fraction5.recip();
    let kk = ctx.kk();
    let eis = BigReal::from_i64(2, w).pow_ratio(2, 3) * rr.a.pow_ratio(-5, 6) * kk.pow_ratio(2, 3) * bracket;
    let sr = ctx.sqrt_r();
    let one = BigReal::one(w);
    let m2 = &m * &m;
    let rhs = a_r.value.round_to(w) * 3 / &sr + (&one + &ctx25.k * &ctx25.k) * 5 / &m2
        - (&one + &ctx.k * &ctx.k)
        - eis;
    let value = rhs * &m2 * &sr / 3;
    Ok(AlphaValue { r: a_r.r.scale(25), value: value.round_to(prec), route: AlphaRoute::Via25r, prec })
}

/// `a(r)` by the requested route. For a reduction route `d·r'`, `r` must be
/// `d` times a positive rational `r'`; `a(r')` is then computed directly and
/// reduced.
pub fn alpha_via(route: AlphaRoute, r: &PosRational, prec: usize) -> Result<AlphaValue> {
    let d = route.factor();
    if d == 1 {
        return alpha_direct(r, prec);
    }
    let base = r.divide(d);
    let a = alpha_direct(&base, prec + REDUCTION_GUARD)?;
    match route {
        AlphaRoute::Via4r => alpha_4r(&a, prec),
        AlphaRoute::Via9r => alpha_9r(&a, prec),
        AlphaRoute::Via25r => alpha_25r(&a, prec),
        AlphaRoute::Direct => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigreal::log2_diff;

    fn r(n: u64) -> PosRational {
        PosRational::integer(n).unwrap()
    }

    fn s(n: i64, p: usize) -> BigReal {
        BigReal::from_i64(n, p).sqrt()
    }

    #[test]
    fn direct_values() {
        let p = 256;
        assert!(log2_diff(&alpha_direct(&r(1), p).unwrap().value, &BigReal::from_f64(0.5, p)) < -240.0);
        assert!(log2_diff(&alpha_direct(&r(2), p).unwrap().value, &(s(2, p) - 1)) < -240.0);
        let a7 = (s(7, p) - 2).mul_pow2(-1);
        assert!(log2_diff(&alpha_direct(&r(7), p).unwrap().value, &a7) < -240.0);
        let a15 = (s(15, p) - s(5, p) - 1).mul_pow2(-1);
        assert!(log2_diff(&alpha_direct(&r(15), p).unwrap().value, &a15) < -240.0);
    }

    #[test]
    fn four_r_forms() {
        let p = 256;
        let a1 = alpha_direct(&r(1), p).unwrap();
        let a4 = alpha_4r(&a1, p).unwrap();
        let closed = BigReal::from_i64(6, p) - s(2, p) * 4;
        assert!(log2_diff(&a4.value, &closed) < -230.0);
        let wrong = alpha_4r_with_kr(&a1, p).unwrap();
        assert!((&wrong - &closed).abs().to_f64() > 1e-2);
    }

    #[test]
    fn quartic_root_is_inverse_k_ratio() {
        let p = 256;
        let c = singular_modulus(&r(1), p).unwrap();
        let c9 = singular_modulus(&r(9), p).unwrap();
        let m = cubic_multiplier(&c, &c9).unwrap();
        assert!(m.to_sci_string(8).starts_with("8.4748659"));
        assert!(eval_poly(&cubic_multiplier_quartic(&c), &m).log2_abs() < -(p as f64) + 16.0);
    }

    #[test]
    fn eisenstein_limit_and_domain() {
        assert!(eisenstein_p(&BigReal::zero(128), 128).unwrap() == BigReal::one(128));
        let tiny = BigReal::parse_decimal("1e-60", 128).unwrap();
        assert!((eisenstein_p(&tiny, 128).unwrap() - 1).log10_abs() < -58.0);
        assert!(eisenstein_p(&BigReal::one(128), 128).is_err());
        // P(e^{-2π}) = 3/π
        let q = nome(&r(4), 256).unwrap();
        let three_over_pi = BigReal::from_i64(3, 256) / BigReal::pi(256);
        assert!(log2_diff(&eisenstein_p(&q, 256).unwrap(), &three_over_pi) < -240.0);
    }

    #[test]
    fn multipliers_exceed_one() {
        for (p, n) in [(2u64, 1u64), (3, 1), (5, 1), (5, 2), (3, 4)] {
            let m = multiplier(p, &r(n), 128).unwrap();
            assert!(m.m > BigReal::one(128), "p = {p}, r = {n}");
        }
        assert!(multiplier(1, &r(1), 128).is_err());
        assert!(t_sum(1, &r(1), 128).is_err());
    }

    #[test]
    fn route_parsing() {
        assert_eq!("9r".parse::<AlphaRoute>().unwrap(), AlphaRoute::Via9r);
        assert!("7r".parse::<AlphaRoute>().is_err());
        assert_eq!(AlphaRoute::Via25r.to_string(), "25r");
    }

    #[test]
    fn routes_agree_small_prec() {
        let p = 192;
        for (route, n) in [(AlphaRoute::Via4r, 8u64), (AlphaRoute::Via9r, 9), (AlphaRoute::Via25r, 25)] {
            let via = alpha_via(route, &r(n), p).unwrap();
            let direct = alpha_direct(&r(n), p).unwrap();
            assert!(log2_diff(&via.value, &direct.value) < -(p as f64) + 32.0, "{route} r={n}");
            assert!(via.in_sanity_window());
        }
    }
}
