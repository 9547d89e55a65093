//! Acceptance suite. Prints one PASS/FAIL line per criterion, with indented
//! detail lines, and exits non-zero if any criterion fails.

use std::process::ExitCode;

use piforge::alpha::{alpha_4r, alpha_4r_with_kr, alpha_9r, alpha_25r, alpha_direct, eisenstein_p, AlphaValue};
use piforge::bigreal::{matched_digits, BigReal};
use piforge::elliptic::{agm, ell_e, ell_k, eta_f, nome, singular_modulus, theta2, theta3, theta4};
use piforge::identities::{identity_suite, literal_sentinels};
use piforge::rr::{a_r_algebraic, a_r_from_fraction, r68_example, rr_eval, y_table, y_value};
use piforge::series::{build_series, paper_series, spec_to_json, QuadSurd};
use piforge::symbolic::{derivative_stack, diff_k, nu2_closed_form, solve_coefficients, KEPoly};
use piforge::{PosRational, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PREC: usize = 512;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { passed: true, summary: String::new(), details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn digits(&mut self, name: &str, got: f64, min: f64) {
        self.check(got >= min, format!("{name}: {got:.1} digits (need {min})"));
    }
}

fn int(n: u64) -> PosRational {
    PosRational::integer(n).unwrap()
}

fn sq(n: i64) -> BigReal {
    BigReal::from_i64(n, PREC).sqrt()
}

fn rel_log2(a: &BigReal, b: &BigReal) -> f64 {
    (a - b).log2_abs() - b.log2_abs()
}

fn criterion_1() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut worst = f64::NEG_INFINITY;
    for r in 1..=10 {
        let c = singular_modulus(&int(r), PREC)?;
        let resid = (c.big_k_complement() / &c.big_k - c.sqrt_r()).abs().log2_abs();
        worst = worst.max(resid);
        o.check(resid < -480.0, format!("r={r}: |K'/K - sqrt(r)| = 2^{resid:.1}"));
    }
    o.summary = format!("singular moduli r=1..10 satisfy K(k')/K(k) = sqrt(r); worst 2^{worst:.1} (need < 2^-480)");
    Ok(o)
}

fn criterion_2() -> Result<Outcome> {
    let mut o = Outcome::new();
    let k2 = singular_modulus(&int(2), PREC)?.k;
    o.digits("k_2 = sqrt2 - 1", matched_digits(&k2, &(sq(2) - 1)), 140.0);
    let k7 = singular_modulus(&int(7), PREC)?.k;
    let k7sq = (BigReal::from_i64(8, PREC) - sq(7) * 3) / 16;
    o.digits("k_7^2 = (8 - 3 sqrt7)/16", matched_digits(&(&k7 * &k7), &k7sq), 140.0);
    o.digits("a(2) = sqrt2 - 1", matched_digits(&alpha_direct(&int(2), PREC)?.value, &(sq(2) - 1)), 140.0);
    let a7 = (sq(7) - 2) / 2;
    o.digits("a(7) = (sqrt7 - 2)/2", matched_digits(&alpha_direct(&int(7), PREC)?.value, &a7), 140.0);
    let a15 = (sq(15) - sq(5) - 1) / 2;
    o.digits("a(15) = (sqrt15 - sqrt5 - 1)/2", matched_digits(&alpha_direct(&int(15), PREC)?.value, &a15), 140.0);
    o.summary = "closed forms of k_2, k_7^2, a(2), a(7), a(15) to >= 140 digits".into();
    Ok(o)
}

fn criterion_3() -> Result<Outcome> {
    let mut o = Outcome::new();
    let base = |r: u64| -> Result<AlphaValue> { alpha_direct(&int(r), PREC + 32) };
    type Reduce = fn(&AlphaValue, usize) -> Result<AlphaValue>;
    let cases: [(&str, u64, u64, Reduce); 6] = [
        ("a(4) via 4r", 1, 4, alpha_4r),
        ("a(8) via 4r", 2, 8, alpha_4r),
        ("a(9) via 9r", 1, 9, alpha_9r),
        ("a(18) via 9r", 2, 18, alpha_9r),
        ("a(25) via 25r", 1, 25, alpha_25r),
        ("a(50) via 25r", 2, 50, alpha_25r),
    ];
    for (name, from, to, f) in cases {
        let via = f(&base(from)?, PREC)?;
        let direct = alpha_direct(&int(to), PREC)?;
        o.digits(name, matched_digits(&via.value, &direct.value), 130.0);
    }
    let wrong = alpha_4r_with_kr(&base(1)?, PREC)?;
    let gap = (&wrong - &alpha_direct(&int(4), PREC)?.value).abs().to_f64();
    o.check(gap >= 1e-2, format!("4r reduction with k_r instead of k_4r is off by {gap:.4} at r=1 (need >= 1e-2)"));
    o.summary = "4r, 9r and 25r reductions match direct a(r) to >= 130 digits; k_r variant of 4r rejected".into();
    Ok(o)
}

fn criterion_4() -> Result<Outcome> {
    let mut o = Outcome::new();
    for c in identity_suite(PREC)? {
        o.digits(&c.name, c.digits(), 60.0);
    }
    for c in literal_sentinels(PREC)? {
        let d = c.digits();
        o.check(d < 2.0, format!("literal variant rejected: {}: {d:.1} digits", c.name));
    }
    o.summary = "Eisenstein, multiplier, eta and Rogers-Ramanujan identities to >= 60 digits".into();
    Ok(o)
}

fn criterion_5() -> Result<Outcome> {
    let mut o = Outcome::new();
    let plan = [(0usize, 120usize, 25.0), (1, 120, 25.0), (2, 60, 100.0), (3, 40, 120.0)];
    let all = paper_series();
    for (idx, n, need) in plan {
        let s = &all[idx];
        let rep = s.verify(n, PREC)?;
        o.digits(&format!("{} at N={n} vs printed right side", s.name), rep.matched_digits, need);
        o.digits(&format!("{} at N={n} vs independent pi", s.name), rep.matched_digits_reference, need);
    }
    o.summary = "printed series match their right sides: 1/pi^4 r=2 >= 25 (N=120), ii >= 100 (N=60), iii >= 120 (N=40), i >= 25 (N=120)".into();
    Ok(o)
}

fn criterion_6() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r2 = int(2);
    let sol = solve_coefficients(2, &r2, PREC)?;
    let ctx = singular_modulus(&r2, PREC + 64)?;
    let w = &ctx.k * &ctx.k;
    let cf = nu2_closed_form(&sol.alpha, &r2, &w);
    for j in 1..=4 {
        o.digits(&format!("nu=2 r=2 A_{j} vs closed form"), matched_digits(&sol.a[j], &cf.a[j]), 130.0);
    }
    o.digits("nu=2 r=2 g vs closed form", matched_digits(&sol.g, &cf.g), 130.0);

    let spec = build_series(3, &int(7), PREC)?;
    let printed = &paper_series()[2];
    for (j, (b, p)) in spec.bracket.iter().zip(&printed.bracket).enumerate() {
        let exact = p.value(PREC);
        let d = matched_digits(b, &exact);
        let num = (b * BigReal::from_bigint(&p.den.into(), PREC)).round_to_bigint();
        let same = num == p.a.into();
        o.check(d >= 130.0 && same, format!("nu=3 r=7 B_{j} = {}/{}: {d:.1} digits, numerator recovered exactly: {same}", p.a, p.den));
    }
    let g = printed.g(PREC);
    let g_num = (&spec.g * 34147).round_to_bigint();
    o.check(
        matched_digits(&spec.g, &g) >= 130.0 && g_num == (-14_417_920).into(),
        format!("nu=3 r=7 g = -14417920/34147: {:.1} digits", matched_digits(&spec.g, &g)),
    );
    o.summary = "solve reproduces the nu=2 closed forms to >= 130 digits and example ii's rational bracket exactly".into();
    Ok(o)
}

fn criterion_7() -> Result<Outcome> {
    let mut o = Outcome::new();
    for e in y_table() {
        let v = y_value(&e.s, PREC)?;
        o.digits(e.label, matched_digits(&v, &(e.closed_form)(PREC)), 40.0);
    }
    for r in [1, 2] {
        let alg = a_r_algebraic(&int(r), PREC)?;
        let frac = a_r_from_fraction(&int(r), PREC)?.a;
        o.digits(&format!("A_{r} algebraic vs continued fraction"), matched_digits(&alg, &frac), 60.0);
    }
    let c = r68_example(PREC)?;
    let d = c.half_gap.log10_abs() - c.residual.log10_abs();
    o.digits("Y(17/5)/Y(68/5) = (sqrt(x+4) - sqrt(x))/2", d, 30.0);
    o.summary = "Y-values to >= 40 digits, A_r cross-route to >= 60, r=68 example to >= 30".into();
    Ok(o)
}

fn doubling(o: &mut Outcome, name: &str, f: &dyn Fn(usize) -> Result<BigReal>) -> Result<()> {
    let lo = f(PREC)?;
    let hi = f(2 * PREC)?;
    let d = rel_log2(&lo, &hi);
    o.check(d < -(PREC as f64) + 8.0, format!("doubling {name}: 2^{d:.1}"));
    Ok(())
}

fn criterion_8() -> Result<Outcome> {
    let mut o = Outcome::new();
    let r3 = int(3);
    doubling(&mut o, "pi", &|p| Ok(BigReal::pi(p)))?;
    doubling(&mut o, "agm(1, 0.3)", &|p| agm(&BigReal::one(p), &BigReal::from_f64(0.3, p), p))?;
    doubling(&mut o, "K(0.3)", &|p| ell_k(&BigReal::from_f64(0.3, p), p))?;
    doubling(&mut o, "E(0.3)", &|p| ell_e(&BigReal::from_f64(0.3, p), p))?;
    doubling(&mut o, "nome(3)", &|p| nome(&r3, p))?;
    doubling(&mut o, "theta2(q_3)", &|p| theta2(&nome(&r3, p)?, p))?;
    doubling(&mut o, "theta3(q_3)", &|p| theta3(&nome(&r3, p)?, p))?;
    doubling(&mut o, "theta4(q_3)", &|p| theta4(&nome(&r3, p)?, p))?;
    doubling(&mut o, "f(-q_3)", &|p| eta_f(&nome(&r3, p)?, p))?;
    doubling(&mut o, "k_3", &|p| Ok(singular_modulus(&r3, p)?.k))?;
    doubling(&mut o, "k'_3", &|p| Ok(singular_modulus(&r3, p)?.kprime))?;
    doubling(&mut o, "K[3]", &|p| Ok(singular_modulus(&r3, p)?.big_k))?;
    doubling(&mut o, "E[3]", &|p| Ok(singular_modulus(&r3, p)?.big_e))?;
    doubling(&mut o, "a(5)", &|p| Ok(alpha_direct(&int(5), p)?.value))?;
    doubling(&mut o, "P(q_1)", &|p| eisenstein_p(&nome(&int(1), p)?, p))?;
    doubling(&mut o, "R(q_1^2)", &|p| {
        let q = nome(&int(1), p)?;
        Ok(rr_eval(&(&q * &q), p)?.fraction)
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let pi_half = BigReal::pi(PREC).mul_pow2(-1);
    for _ in 0..10 {
        let kf: f64 = rng.gen_range(0.02..0.98);
        let k = BigReal::from_f64(kf, PREC);
        let kp = (BigReal::one(PREC) - &k * &k).sqrt();
        let (kk, ee) = (ell_k(&k, PREC)?, ell_e(&k, PREC)?);
        let (kk2, ee2) = (ell_k(&kp, PREC)?, ell_e(&kp, PREC)?);
        let lhs = &ee * &kk2 + &ee2 * &kk - &kk * &kk2;
        let d = rel_log2(&lhs, &pi_half);
        o.check(d < -(PREC as f64) + 16.0, format!("Legendre relation at k={kf:.6}: 2^{d:.1}"));
    }

    let probe = derivative_stack(1)?[1].add(&KEPoly::big_k().mul(&KEPoly::big_e()));
    let dprobe = diff_k(&probe);
    let h = BigReal::parse_decimal("1e-30", PREC)?;
    for _ in 0..5 {
        let kf: f64 = rng.gen_range(0.05..0.65);
        let k = BigReal::from_f64(kf, PREC);
        let at = |k: &BigReal| -> Result<BigReal> { Ok(probe.eval(k, &ell_k(k, PREC)?, &ell_e(k, PREC)?)) };
        let fd = (at(&(&k + &h))? - at(&(&k - &h))?) / h.mul_pow2(1);
        let exact = dprobe.eval(&k, &ell_k(&k, PREC)?, &ell_e(&k, PREC)?);
        let d = matched_digits(&fd, &exact);
        o.check(d >= 50.0, format!("diff_k vs central difference at k={kf:.6}: {d:.1} digits"));
    }

    let a = spec_to_json(&build_series(2, &int(2), PREC)?);
    let b = spec_to_json(&build_series(2, &int(2), PREC)?);
    o.check(a == b, format!("series JSON byte-identical across runs ({} bytes)", a.len()));
    let x = QuadSurd::new(-56, 40, 2, 1).value(PREC);
    o.check(x.to_sci_string(30) == x.to_sci_string(30), "decimal rendering deterministic".into());

    o.summary = "precision doubling, Legendre relation at 10 random moduli, diff_k finite differences at 5 moduli, deterministic JSON".into();
    Ok(o)
}

fn main() -> ExitCode {
    let criteria: [(u32, Criterion); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = Vec::new();
    for (n, f) in criteria {
        match f() {
            Ok(o) => {
                println!("{} criterion {n}: {}", if o.passed { "PASS" } else { "FAIL" }, o.summary);
                for d in &o.details {
                    println!("    {d}");
                }
                if !o.passed {
                    failed.push(n);
                }
            }
            Err(e) => {
                println!("FAIL criterion {n}: error: {e}");
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
