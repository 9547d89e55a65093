//! Complete elliptic integrals, theta functions and singular moduli.
//!
//! Every public function takes the modulus `k`, never the parameter
//! `m = k²`. Software that writes `EllipticK[m]` with `m = k²` therefore
//! corresponds to `ell_k(k)` here.
//!
//! Error model: each kernel evaluates at `prec + GUARD_BITS` (or more where
//! noted) and rounds to `prec`. AGM-based values are accurate to about
//! `2^{-prec+8}` relative; truncated q-series stop once a geometric-tail
//! majorant of the omitted terms drops below `2^{-prec-8}`.

use crate::bigreal::{BigReal, GUARD_BITS, MIN_PREC};
use crate::error::{Error, Result};
use crate::rational::PosRational;

/// Extra bits used when building a [`ModulusContext`].
const CONTEXT_GUARD: usize = 32;

fn check_prec(prec: usize) -> Result<()> {
    if prec < MIN_PREC {
        return Err(Error::Domain(format!("precision {prec} is below the minimum of {MIN_PREC} bits")));
    }
    Ok(())
}

/// Arithmetic-geometric mean of `a` and `b`.
///
/// Iterates until `|a_n - b_n| < 2^{-prec} a_n`; the result is accurate to
/// `2^{-prec+4}`.
pub fn agm(a: &BigReal, b: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain("agm needs positive arguments".into()));
    }
    let w = prec + GUARD_BITS;
    let mut a = a.round_to(w);
    let mut b = b.round_to(w);
    for _ in 0..10_000 {
        let gap = (&a - &b).log2_abs() - a.log2_abs();
        if gap < -(prec as f64) {
            return Ok(a.round_to(prec));
        }
        let an = (&a + &b).mul_pow2(-1);
        b = (&a * &b).sqrt();
        a = an;
    }
    Err(Error::InsufficientPrecision("agm failed to converge".into()))
}

/// AGM of `(1, kprime)` together with the side sum
/// `S = Σ_{n≥0} 2^{n-1} c_n²` (`c_0 = k`), so that `E = K (1 - S)`.
///
/// The differences use `c_{n+1} = c_n² / (4 a_{n+1})`, which keeps full
/// relative accuracy when `k` is tiny.
fn agm_side_sum(k: &BigReal, kprime: &BigReal, w: usize) -> (BigReal, BigReal) {
    let mut a = BigReal::one(w);
    let mut b = kprime.round_to(w);
    let mut c = k.round_to(w);
    // n = 0 term: 2^{-1} c_0^2
    let mut side = (&c * &c).mul_pow2(-1);
    let mut n: i64 = 0;
    loop {
        let an = (&a + &b).mul_pow2(-1);
        let bn = (&a * &b).sqrt();
        c = (&c * &c) / an.mul_pow2(2);
        n += 1;
        let term = (&c * &c).mul_pow2(n - 1);
        side = &side + &term;
        a = an;
        b = bn;
        if c.is_zero() || c.log2_abs() - a.log2_abs() < -(w as f64) {
            break;
        }
        if n > 10_000 {
            break;
        }
    }
    (a, side)
}

fn complementary(k: &BigReal) -> BigReal {
    let one = BigReal::one(k.prec());
    ((&one - k) * (&one + k)).sqrt()
}

fn check_modulus(k: &BigReal) -> Result<()> {
    if k.is_negative() || k >= &BigReal::one(k.prec()) {
        return Err(Error::Domain(format!("modulus must satisfy 0 <= k < 1, got {}", k.to_sci_string(12))));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind with modulus `k`:
/// `K(k) = ∫_0^{π/2} dt / √(1 - k² sin² t) = π / (2 agm(1, k'))`.
pub fn ell_k(k: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    check_modulus(k)?;
    let w = prec + GUARD_BITS;
    let k = k.round_to(w);
    let kp = complementary(&k);
    let m = agm(&BigReal::one(w), &kp, w)?;
    Ok((BigReal::pi(w) / m.mul_pow2(1)).round_to(prec))
}

/// Complete elliptic integral of the second kind with modulus `k`, by the
/// AGM side sum `E = K (1 - Σ 2^{n-1} c_n²)`.
pub fn ell_e(k: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    check_modulus(k)?;
    let w = prec + GUARD_BITS;
    let k = k.round_to(w);
    let kp = complementary(&k);
    let (m, side) = agm_side_sum(&k, &kp, w);
    let big_k = BigReal::pi(w) / m.mul_pow2(1);
    Ok((&big_k * &(BigReal::one(w) - side)).round_to(prec))
}

/// `dK/dk = E / (k k'²) - K / k`, written as `K (k² - S) / (k k'²)` so
/// that small moduli keep their relative accuracy. Returns 0 at `k = 0`.
pub fn dk_dk_at(k: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    check_modulus(k)?;
    if k.is_zero() {
        return Ok(BigReal::zero(prec));
    }
    let w = prec + GUARD_BITS;
    let k = k.round_to(w);
    let kp = complementary(&k);
    let (m, side) = agm_side_sum(&k, &kp, w);
    let big_k = BigReal::pi(w) / m.mul_pow2(1);
    let k2 = &k * &k;
    let num = &big_k * &(&k2 - &side);
    Ok((num / (&k * &(&kp * &kp))).round_to(prec))
}

/// Derivative of `K` at the modulus of a context.
pub fn dk_dk(ctx: &ModulusContext) -> BigReal {
    let w = ctx.prec + GUARD_BITS;
    let k = ctx.k.round_to(w);
    let kp = ctx.kprime.round_to(w);
    let num = ctx.big_k.round_to(w) * (&k * &k - ctx.side_sum.round_to(w));
    (num / (&k * &(&kp * &kp))).round_to(ctx.prec)
}

/// The nome `q = e^{-π√r}`.
pub fn nome(r: &PosRational, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    let w = prec + GUARD_BITS;
    let x = BigReal::pi(w) * r.sqrt(w);
    Ok((-x).exp().round_to(prec))
}

fn check_nome(q: &BigReal) -> Result<()> {
    if q.is_negative() || q >= &BigReal::one(q.prec()) {
        return Err(Error::Domain(format!("nome must satisfy 0 <= q < 1, got {}", q.to_sci_string(12))));
    }
    Ok(())
}

/// Sums `Σ_{n≥0} s_n q^{f(n)}` for the theta exponents `f(n) = n(n+1)` or `n²`
/// given the first exponent step. Terms shrink super-geometrically; the loop
/// stops when `term / (1 - q) < 2^{-w}` relative to the leading term.
fn theta_tail(q: &BigReal, first_step: i64, alternating: bool, w: usize) -> BigReal {
    // term_n = q^{f(n)}, ratio term_{n+1}/term_n = q^{first_step + 2n}
    let q2 = q * q;
    let one = BigReal::one(w);
    let tail_factor = (&one - q).log2_abs();
    let mut sum = BigReal::zero(w);
    let mut term = one.clone();
    let mut ratio = q.powi(first_step);
    let mut n = 0i64;
    loop {
        let signed = if alternating && n % 2 == 1 { -&term } else { term.clone() };
        sum = &sum + &signed;
        term = &term * &ratio;
        ratio = &ratio * &q2;
        n += 1;
        if term.is_zero() || term.log2_abs() - tail_factor < -(w as f64) {
            break;
        }
    }
    sum
}

/// `θ₂(q) = 2 Σ_{n≥0} q^{(n+1/2)²}`.
pub fn theta2(q: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    check_nome(q)?;
    if q.is_zero() {
        return Ok(BigReal::zero(prec));
    }
    let w = prec + GUARD_BITS;
    let q = q.round_to(w);
    let quarter = q.sqrt().sqrt();
    let s = theta_tail(&q, 2, false, w);
    Ok((quarter * s).mul_pow2(1).round_to(prec))
}

/// `θ₃(q) = 1 + 2 Σ_{n≥1} q^{n²}`.
pub fn theta3(q: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    check_nome(q)?;
    let w = prec + GUARD_BITS;
    if q.is_zero() {
        return Ok(BigReal::one(prec));
    }
    let q = q.round_to(w);
    // Σ_{n≥1} q^{n²} = q Σ_{m≥0} q^{m² + 2m}
    let s = &q * &theta_tail(&q, 3, false, w);
    Ok((BigReal::one(w) + s.mul_pow2(1)).round_to(prec))
}

/// `θ₄(q) = 1 + 2 Σ_{n≥1} (-1)^n q^{n²}`.
pub fn theta4(q: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    check_nome(q)?;
    let w = prec + GUARD_BITS;
    if q.is_zero() {
        return Ok(BigReal::one(prec));
    }
    let q = q.round_to(w);
    let s = &q * &theta_tail(&q, 3, true, w);
    Ok((BigReal::one(w) - s.mul_pow2(1)).round_to(prec))
}

/// `f(-q) = Π_{n≥1} (1 - qⁿ)`, truncated once the logarithmic tail bound
/// `q^{N+1} / (1 - q)²` drops below `2^{-prec-8}`.
pub fn eta_f(q: &BigReal, prec: usize) -> Result<BigReal> {
    check_prec(prec)?;
    check_nome(q)?;
    let w = prec + GUARD_BITS;
    if q.is_zero() {
        return Ok(BigReal::one(prec));
    }
    let q = q.round_to(w);
    let one = BigReal::one(w);
    let tail_factor = 2.0 * (&one - &q).log2_abs();
    let mut prod = one.clone();
    let mut qn = q.clone();
    loop {
        prod = &prod * &(&one - &qn);
        qn = &qn * &q;
        if qn.is_zero() || qn.log2_abs() - tail_factor < -(w as f64) {
            break;
        }
    }
    Ok(prod.round_to(prec))
}

/// Everything known about the singular modulus `k_r` at one precision.
///
/// Invariants (checked by the test suite): `0 < k < 1`,
/// `k² + k'² = 1` to `2^{-prec+8}`, `K(k')/K(k) = √r` to `2^{-prec+16}`,
/// `q = e^{-π√r}`.
#[derive(Clone, Debug)]
pub struct ModulusContext {
    pub r: PosRational,
    pub q: BigReal,
    pub k: BigReal,
    pub kprime: BigReal,
    pub big_k: BigReal,
    pub big_e: BigReal,
    /// `1 - E/K`, carried separately because `E/K - 1` cancels badly for
    /// small `k`.
    pub side_sum: BigReal,
    pub prec: usize,
}

impl ModulusContext {
    /// `√r` at the context precision.
    pub fn sqrt_r(&self) -> BigReal {
        self.r.sqrt(self.prec)
    }

    /// `K(k'_r)` computed as `π / (2 agm(1, k_r))`, which does not need
    /// `√(1 - k'²)`.
    pub fn big_k_complement(&self) -> BigReal {
        let w = self.prec + GUARD_BITS;
        let m = agm(&BigReal::one(w), &self.k.round_to(w), w).expect("k_r is positive");
        (BigReal::pi(w) / m.mul_pow2(1)).round_to(self.prec)
    }

    /// `E/K - 1 = -S`.
    pub fn e_over_k_minus_one(&self) -> BigReal {
        -&self.side_sum
    }

    /// `k k'`.
    pub fn kk(&self) -> BigReal {
        &self.k * &self.kprime
    }
}

/// Builds the context for `k_r` from `k = θ₂²/θ₃²`, `k' = θ₄²/θ₃²` at
/// `q = e^{-π√r}`.
///
/// Fails with [`Error::InsufficientPrecision`] when `k_r² < 2^{-prec}`, i.e.
/// when `k'_r` would round to 1.
pub fn singular_modulus(r: &PosRational, prec: usize) -> Result<ModulusContext> {
    check_prec(prec)?;
    let w = prec + CONTEXT_GUARD;
    let q = nome(r, w)?;
    // cheap screen before any series work: k ~ 4 q^{1/2}
    let approx_log2_k2 = 4.0 + q.log2_abs();
    if approx_log2_k2 < -(prec as f64) {
        return Err(Error::InsufficientPrecision(format!(
            "k_r^2 ~ 2^{approx_log2_k2:.0} is indistinguishable from 0 at {prec} bits (r = {r}); \
             raise the precision above {} bits",
            (-approx_log2_k2).ceil() as usize + 16
        )));
    }
    let t2 = theta2(&q, w)?;
    let t3 = theta3(&q, w)?;
    let t4 = theta4(&q, w)?;
    let t3sq = &t3 * &t3;
    let k = (&t2 * &t2) / &t3sq;
    let kprime = (&t4 * &t4) / &t3sq;
    if (&k * &k).log2_abs() < -(prec as f64) {
        return Err(Error::InsufficientPrecision(format!(
            "k_r is indistinguishable from 0 at {prec} bits (r = {r})"
        )));
    }
    let (m, side) = agm_side_sum(&k, &kprime, w);
    let big_k = BigReal::pi(w) / m.mul_pow2(1);
    let big_e = &big_k * &(BigReal::one(w) - &side);
    Ok(ModulusContext {
        r: *r,
        q: q.round_to(prec),
        k: k.round_to(prec),
        kprime: kprime.round_to(prec),
        big_k: big_k.round_to(prec),
        big_e: big_e.round_to(prec),
        side_sum: side.round_to(prec),
        prec,
    })
}
