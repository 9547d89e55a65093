//! Modular identities linking Eisenstein sums, multipliers, the alpha
//! function and the Rogers–Ramanujan continued fraction.
//!
//! Every check evaluates both sides independently. [`identity_suite`]
//! returns the forms that hold; [`literal_sentinels`] returns commonly
//! quoted variants that do not, so that tests can keep proving them wrong.

use crate::alpha::{alpha_from_context, eisenstein_p, m5_algebraic, m5_quintic_sides};
use crate::bigreal::{matched_digits, BigReal};
use crate::elliptic::{eta_f, nome, singular_modulus, ModulusContext};
use crate::error::Result;
use crate::rational::PosRational;
use crate::rr::{a_r_from_fraction, rr_eval};

const WORK_GUARD: usize = 32;

/// Both sides of one identity at one argument.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: BigReal,
    pub rhs: BigReal,
}

impl IdentityCheck {
    fn new(name: impl Into<String>, lhs: BigReal, rhs: BigReal) -> Self {
        Self { name: name.into(), lhs, rhs }
    }

    /// Relative agreement in decimal digits.
    pub fn digits(&self) -> f64 {
        matched_digits(&self.lhs, &self.rhs)
    }

    pub fn passes(&self, min_digits: f64) -> bool {
        self.digits() >= min_digits
    }
}

fn int(n: u64) -> PosRational {
    PosRational::integer(n).expect("positive")
}

struct Point {
    c: ModulusContext,
    a: BigReal,
    pi: BigReal,
}

impl Point {
    fn new(r: &PosRational, w: usize) -> Result<Self> {
        let c = singular_modulus(r, w)?;
        let a = alpha_from_context(&c);
        Ok(Self { c, a, pi: BigReal::pi(w) })
    }

    fn w(&self) -> usize {
        self.c.prec
    }

    fn k2(&self) -> BigReal {
        &self.c.k * &self.c.k
    }

    /// `4K²/π²`.
    fn four_k2_over_pi2(&self) -> BigReal {
        let k = &self.c.big_k;
        (k * k).mul_pow2(2) / (&self.pi * &self.pi)
    }
}

/// `P(q²) = 3/(π√r) + (1 + k² - 3a/√r) 4K²/π²`.
pub fn weight2_q2(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let p = Point::new(r, prec + WORK_GUARD)?;
    let q = &p.c.q;
    let lhs = eisenstein_p(&(q * q), p.w())?;
    let sr = p.c.sqrt_r();
    let one = BigReal::one(p.w());
    let rhs = BigReal::from_i64(3, p.w()) / (&p.pi * &sr) + (&one + p.k2() - &p.a * 3 / &sr) * p.four_k2_over_pi2();
    Ok(IdentityCheck::new(format!("P(q^2) alpha form, r={r}"), lhs, rhs))
}

/// `P(q) = 6/(π√r) + 4K²(√r(1 + k²) - 6a)/(π²√r)`.
pub fn weight2_q(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let p = Point::new(r, prec + WORK_GUARD)?;
    let lhs = eisenstein_p(&p.c.q, p.w())?;
    let sr = p.c.sqrt_r();
    let one = BigReal::one(p.w());
    let rhs = BigReal::from_i64(6, p.w()) / (&p.pi * &sr)
        + p.four_k2_over_pi2() * ((&one + p.k2()) * &sr - &p.a * 6) / &sr;
    Ok(IdentityCheck::new(format!("P(q) alpha form, r={r}"), lhs, rhs))
}

/// `T_{p,r} = P(q²) - p P(q^{2p})`.
fn t_from_sums(p: u64, q: &BigReal, w: usize) -> Result<BigReal> {
    let q2 = q * q;
    Ok(eisenstein_p(&q2, w)? - eisenstein_p(&q2.powi(p as i64), w)? * p as i64)
}

struct Pair {
    base: Point,
    high: Point,
    m: BigReal,
    p: u64,
}

impl Pair {
    fn new(p: u64, r: &PosRational, prec: usize) -> Result<Self> {
        let w = prec + WORK_GUARD;
        let base = Point::new(r, w)?;
        let high = Point::new(&r.scale(p * p), w)?;
        let m = &base.c.big_k / &high.c.big_k;
        Ok(Self { base, high, m, p })
    }
}

/// `a(p²r)/(m_p²√r) = -(1 + k_r²)/3 + p(1 + k_{p²r}²)/(3m_p²) + π²T/(12K²) + a(r)/√r`.
pub fn multiplier_alpha_relation(p: u64, r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let s = Pair::new(p, r, prec)?;
    let w = s.base.w();
    let sr = s.base.c.sqrt_r();
    let m2 = &s.m * &s.m;
    let one = BigReal::one(w);
    let t = t_from_sums(p, &s.base.c.q, w)?;
    let lhs = &s.high.a / (&m2 * &sr);
    let rhs = -(&one + s.base.k2()) / 3 + (&one + s.high.k2()) * s.p as i64 / (&m2 * 3)
        + &s.base.pi * &s.base.pi * t / (&s.base.c.big_k * &s.base.c.big_k * 12)
        + &s.base.a / &sr;
    Ok(IdentityCheck::new(format!("alpha(p^2 r) via T, p={p}, r={r}"), lhs, rhs))
}

/// `T_{p,r}` from the sums against its alpha/multiplier closed form.
pub fn t_closed_form(p: u64, r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let s = Pair::new(p, r, prec)?;
    let w = s.base.w();
    let sr = s.base.c.sqrt_r();
    let m2 = &s.m * &s.m;
    let one = BigReal::one(w);
    let lhs = t_from_sums(p, &s.base.c.q, w)?;
    let inner = &s.high.a * 3 - (&one + s.high.k2()) * &sr * s.p as i64
        + (-(&s.base.a * 3) + (&one + s.base.k2()) * &sr) * &m2;
    let rhs = s.base.four_k2_over_pi2() / (&sr * &m2) * inner;
    Ok(IdentityCheck::new(format!("T closed form, p={p}, r={r}"), lhs, rhs))
}

/// `P(q^{2p}) = 3/(π√r p) + 4K²/(π²√r p m²) (p√r(1 + k_{p²r}²) - 3a(p²r))`.
pub fn weight2_q2p(p: u64, r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let s = Pair::new(p, r, prec)?;
    let w = s.base.w();
    let sr = s.base.c.sqrt_r();
    let m2 = &s.m * &s.m;
    let one = BigReal::one(w);
    let q = &s.base.c.q;
    let lhs = eisenstein_p(&(q * q).powi(p as i64), w)?;
    let pi = &s.base.pi;
    let rhs = BigReal::from_i64(3, w) / (pi * &sr * s.p as i64)
        + s.base.four_k2_over_pi2() / (&sr * &m2 * s.p as i64)
            * ((&one + s.high.k2()) * &sr * s.p as i64 - &s.high.a * 3);
    Ok(IdentityCheck::new(format!("P(q^(2p)) alpha form, p={p}, r={r}"), lhs, rhs))
}

/// `x = f(-q²)⁶`, `y = f(-q^{10})⁶`.
fn eta_xy(q: &BigReal, w: usize) -> Result<(BigReal, BigReal)> {
    let q2 = q * q;
    let x = eta_f(&q2, w)?.powi(6);
    let y = eta_f(&q2.powi(5), w)?.powi(6);
    Ok((x, y))
}

fn t5_eta_quotient_unsigned(q: &BigReal, w: usize) -> Result<BigReal> {
    let (x, y) = eta_xy(q, w)?;
    let q2 = q * q;
    let rad = &x * &x + &q2 * &x * &y * 22 + &q2 * &q2 * &y * &y * 125;
    Ok(rad.sqrt() / (&x * &y).pow_ratio(1, 6))
}

/// `T_{5,r} = -4 √(x² + 22q²xy + 125q⁴y²) / (xy)^{1/6}`.
pub fn t5_eta_quotient(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let w = prec + WORK_GUARD;
    let q = nome(r, w)?;
    let lhs = t_from_sums(5, &q, w)?;
    let rhs = t5_eta_quotient_unsigned(&q, w)? * -4;
    Ok(IdentityCheck::new(format!("T_5 eta quotient, r={r}"), lhs, rhs))
}

/// `f(-q²)⁶ = 2 k k' K³ / (π³ q^{1/2})`.
pub fn eta_modulus(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let p = Point::new(r, prec + WORK_GUARD)?;
    let q = &p.c.q;
    let lhs = eta_f(&(q * q), p.w())?.powi(6);
    let rhs = p.c.kk().mul_pow2(1) * p.c.big_k.powi(3) / (p.pi.powi(3) * q.sqrt());
    Ok(IdentityCheck::new(format!("f(-q^2)^6 modulus form, r={r}"), lhs, rhs))
}

/// `A_r = x / (q² y)`.
pub fn rr_eta_quotient(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let w = prec + WORK_GUARD;
    let q = nome(r, w)?;
    let (x, y) = eta_xy(&q, w)?;
    let lhs = a_r_from_fraction(r, w)?.a;
    let rhs = x / (&q * &q * y);
    Ok(IdentityCheck::new(format!("A_r eta quotient, r={r}"), lhs, rhs))
}

/// `2^{2/3} (k k')^{2/3} (R^{-5} + R⁵) / A_r^{5/6}` at `R = R(q²)`.
fn rr_bracket_term(c: &ModulusContext, w: usize) -> Result<BigReal> {
    let q = c.q.round_to(w);
    let rr = rr_eval(&(&q * &q), w)?;
    let bracket = rr.fraction5.recip() + &rr.fraction5;
    Ok(BigReal::from_i64(2, w).pow_ratio(2, 3) * c.kk().pow_ratio(2, 3) * bracket / rr.a.pow_ratio(5, 6))
}

/// `-4 - 24Σ nq^{2n}/(1-q^{2n}) + 120Σ nq^{10n}/(1-q^{10n})
///  = -(4K²/π²) 2^{2/3} (kk')^{2/3} (R^{-5} + R⁵) / A_r^{5/6}`.
pub fn t5_rogers_ramanujan(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let p = Point::new(r, prec + WORK_GUARD)?;
    let lhs = t_from_sums(5, &p.c.q, p.w())?;
    let rhs = -(p.four_k2_over_pi2() * rr_bracket_term(&p.c, p.w())?);
    Ok(IdentityCheck::new(format!("T_5 Rogers-Ramanujan form, r={r}"), lhs, rhs))
}

/// `m₅ = K[r]/K[25r]` against its algebraic form in `k_r`, `k_{25r}`.
pub fn m5_algebraic_form(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let s = Pair::new(5, r, prec)?;
    let rhs = m5_algebraic(&s.base.c, &s.high.c);
    Ok(IdentityCheck::new(format!("m_5 algebraic form, r={r}"), s.m, rhs))
}

/// `(5μ - 1)⁵ (1 - μ) = 256 k² k'² μ` with `μ = K[25r]/K[r]`.
pub fn m5_quintic(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let s = Pair::new(5, r, prec)?;
    let (lhs, rhs) = m5_quintic_sides(&s.base.c, &s.m);
    Ok(IdentityCheck::new(format!("m_5 quintic, r={r}"), lhs, rhs))
}

/// The two right sides of the `a(25r)` relation, one with the bracket
/// `R^{-5} + R⁵` and one with `√(125 + 22A + A²)`, each against the left
/// side `3a(25r)/(m₅²√r) - 3a(r)/√r`.
pub fn a25_relation(r: &PosRational, prec: usize) -> Result<[IdentityCheck; 2]> {
    let s = Pair::new(5, r, prec)?;
    let w = s.base.w();
    let sr = s.base.c.sqrt_r();
    let m2 = &s.m * &s.m;
    let one = BigReal::one(w);
    let lhs = &s.high.a * 3 / (&m2 * &sr) - &s.base.a * 3 / &sr;
    let head = (&one + s.high.k2()) * 5 / &m2 - (&one + s.base.k2());
    let bracket_form = &head - rr_bracket_term(&s.base.c, w)?;
    let q = s.base.c.q.round_to(w);
    let a = rr_eval(&(&q * &q), w)?.a;
    let rad = (&a * &a + &a * 22 + 125).sqrt();
    let radical_form = &head
        - BigReal::from_i64(2, w).pow_ratio(2, 3) * rad * s.base.c.kk().pow_ratio(2, 3) / a.pow_ratio(5, 6);
    Ok([
        IdentityCheck::new(format!("alpha(25r) bracket form, r={r}"), lhs.clone(), bracket_form),
        IdentityCheck::new(format!("alpha(25r) radical form, r={r}"), lhs, radical_form),
    ])
}

fn a_quarter_rhs(s: &Pair, exponent: i64) -> BigReal {
    let kp = &s.base.c.kprime / &s.high.c.kprime;
    (&kp * &kp) * (&s.base.c.k / &s.high.c.k).sqrt() * s.m.powi(exponent)
}

/// `A_{r/4} = (k'_r/k'_{25r})² √(k_r/k_{25r}) m₅³`.
pub fn a_quarter(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let s = Pair::new(5, r, prec)?;
    let lhs = a_r_from_fraction(&r.divide(4), s.base.w())?.a;
    Ok(IdentityCheck::new(format!("A_(r/4) modulus form, r={r}"), lhs, a_quarter_rhs(&s, 3)))
}

/// `k_{r/4} = 2√k_r / (1 + k_r)`.
pub fn landen_quarter(r: &PosRational, prec: usize) -> Result<IdentityCheck> {
    let w = prec + WORK_GUARD;
    let c = singular_modulus(r, w)?;
    let c4 = singular_modulus(&r.divide(4), w)?;
    let rhs = c.k.sqrt().mul_pow2(1) / (BigReal::one(w) + &c.k);
    Ok(IdentityCheck::new(format!("k_(r/4) Landen form, r={r}"), c4.k, rhs))
}

/// Every identity that holds, at the arguments used for validation.
pub fn identity_suite(prec: usize) -> Result<Vec<IdentityCheck>> {
    let mut out = vec![
        weight2_q2(&int(3), prec)?,
        weight2_q(&int(2), prec)?,
        multiplier_alpha_relation(5, &int(1), prec)?,
        t_closed_form(5, &int(1), prec)?,
        weight2_q2p(5, &int(1), prec)?,
        t5_eta_quotient(&int(1), prec)?,
        eta_modulus(&int(2), prec)?,
        rr_eta_quotient(&int(1), prec)?,
        t5_rogers_ramanujan(&int(1), prec)?,
        t5_rogers_ramanujan(&int(2), prec)?,
        m5_algebraic_form(&int(1), prec)?,
        m5_quintic(&int(1), prec)?,
        a_quarter(&int(1), prec)?,
    ];
    out.extend(a25_relation(&int(1), prec)?);
    for r in [4, 8, 16] {
        out.push(landen_quarter(&int(r), prec)?);
    }
    Ok(out)
}

/// Variants as they are usually printed that do not hold numerically.
pub fn literal_sentinels(prec: usize) -> Result<Vec<IdentityCheck>> {
    let r = int(1);
    let w = prec + WORK_GUARD;
    let q = nome(&r, w)?;
    let t = t_from_sums(5, &q, w)?;
    let eta_plain = t5_eta_quotient_unsigned(&q, w)?;

    let p = Point::new(&r, w)?;
    let rr_plain = rr_bracket_term(&p.c, w)? / 3;

    let s = Pair::new(5, &r, prec)?;
    let mu = s.m.recip();
    let (lhs, rhs) = m5_quintic_sides(&s.base.c, &mu);

    let a_quarter_lhs = a_r_from_fraction(&r.divide(4), w)?.a;

    Ok(vec![
        IdentityCheck::new("T_5 eta quotient without -4, r=1", t.clone(), eta_plain),
        IdentityCheck::new("T_5 Rogers-Ramanujan form without -12K^2/pi^2, r=1", t, rr_plain),
        IdentityCheck::new("m_5 quintic in K[r]/K[25r], r=1", lhs, rhs),
        IdentityCheck::new("A_(r/4) with m_5^-3, r=1", a_quarter_lhs, a_quarter_rhs(&s, -3)),
    ])
}
