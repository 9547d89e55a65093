//! Ramanujan-type series `Σ c_{2ν}(n) xⁿ B(n) = g / π^{2ν}`: construction
//! from solved coefficients, evaluation, verification and JSON exchange.

mod coeffs;
mod replay;

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use coeffs::{c2, cp, cp_scaled, cp_scaled_range, stirling_first, ExactRational, MAX_P};
pub use replay::{paper_series, replay_paper, replay_terms, PaperSeries, QuadSurd};

use crate::bigreal::{matched_digits, BigReal};
use crate::error::{Error, Result};
use crate::rational::PosRational;
use crate::symbolic::{solve_coefficients, Solution};

pub const SCHEMA: &str = "piforge/1";
/// Terms summed per parallel chunk; fixed so the reduction order never
/// depends on the thread count.
pub const CHUNK: usize = 8;
const EVAL_GUARD: usize = 32;
/// Digits kept free between the predicted agreement and the precision.
const DIGIT_MARGIN: f64 = 8.0;
/// A verification passes when it matches at least `predicted - 10` digits.
pub const DIGIT_SLACK: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Solved,
    PaperReplay,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Solved => "solved",
            Provenance::PaperReplay => "paper-replay",
        })
    }
}

/// A fully determined series.
#[derive(Clone, Debug)]
pub struct SeriesSpec {
    pub nu: u32,
    pub r: PosRational,
    pub x: BigReal,
    /// `B_0..B_{2ν}`, coefficients of `n⁰..n^{2ν}`.
    pub bracket: Vec<BigReal>,
    pub g: BigReal,
    pub prec: usize,
    pub provenance: Provenance,
}

impl SeriesSpec {
    pub fn new(
        nu: u32,
        r: PosRational,
        x: BigReal,
        bracket: Vec<BigReal>,
        g: BigReal,
        prec: usize,
        provenance: Provenance,
    ) -> Result<Self> {
        if nu == 0 || 2 * nu > MAX_P {
            return Err(Error::Domain(format!("nu must be in 1..={}, got {nu}", MAX_P / 2)));
        }
        if bracket.len() != 2 * nu as usize + 1 {
            return Err(Error::LengthMismatch { expected: 2 * nu as usize + 1, found: bracket.len() });
        }
        if x.abs() >= BigReal::one(x.prec()) {
            return Err(Error::NonConvergent(format!("series argument |x| = {} is not below 1", x.to_sci_string(12))));
        }
        if x.is_zero() {
            return Err(Error::Domain("series argument is zero".into()));
        }
        Ok(Self { nu, r, x, bracket, g, prec, provenance })
    }

    /// Digits per term, `-log10 |x|`.
    pub fn dpt(&self) -> f64 {
        -self.x.log10_abs()
    }

    /// `g / π^{2ν}` with the cached AGM value of `π`.
    pub fn target(&self, prec: usize) -> BigReal {
        self.g.round_to(prec) / BigReal::pi(prec).powi(2 * self.nu as i64)
    }

    /// `g / π^{2ν}` with the independent Chudnovsky value of `π`.
    pub fn target_reference(&self, prec: usize) -> BigReal {
        self.g.round_to(prec) / BigReal::pi_reference(prec).powi(2 * self.nu as i64)
    }

    /// `B(n)`.
    pub fn bracket_at(&self, n: u64, prec: usize) -> BigReal {
        let nn = BigReal::from_u64(n, prec);
        let mut acc = BigReal::zero(prec);
        for b in self.bracket.iter().rev() {
            acc = &acc * &nn + b;
        }
        acc
    }

    /// The bracket scaled so that `B_0 = 1`, with `g` scaled alike.
    pub fn normalized(&self) -> Result<SeriesSpec> {
        let b0 = self.bracket[0].clone();
        if b0.is_zero() {
            return Err(Error::Structural("bracket has zero constant term".into()));
        }
        let mut out = self.clone();
        out.bracket = self.bracket.iter().map(|b| b / &b0).collect();
        out.g = &self.g / &b0;
        Ok(out)
    }
}

/// `B_j = Σ_m A_m s(m, j)`: the falling-factorial combination
/// `Σ A_m n(n-1)..(n-m+1)` in the monomial basis.
pub fn bracket_from_a(a: &[BigReal], nu: u32) -> Result<Vec<BigReal>> {
    let len = 2 * nu as usize + 1;
    if a.len() != len {
        return Err(Error::LengthMismatch { expected: len, found: a.len() });
    }
    let prec = a.iter().map(|v| v.prec()).max().unwrap_or(crate::bigreal::MIN_PREC);
    let s = stirling_first(len - 1);
    Ok((0..len)
        .map(|j| {
            let mut acc = BigReal::zero(prec);
            for (m, am) in a.iter().enumerate().skip(j) {
                let c = &s[m][j];
                if !num_traits::Zero::is_zero(c) {
                    acc = acc + am * BigReal::from_bigint(c, prec);
                }
            }
            acc
        })
        .collect())
}

/// Builds the series for `(ν, r)` from the coefficient solve. Needs `r > 1`:
/// at `r = 1` the argument is exactly 1, and for `r < 1` the modulus leaves
/// the region where `z = 4k²k'²` inverts to `k`.
pub fn build_series(nu: u32, r: &PosRational, prec: usize) -> Result<SeriesSpec> {
    if r.num() == r.den() {
        return Err(Error::NonConvergent("r = 1 gives series argument x = 1".into()));
    }
    if r.num() < r.den() {
        return Err(Error::Domain(format!("r must exceed 1, got {r}")));
    }
    let sol = solve_coefficients(nu, r, prec)?;
    spec_from_solution(&sol)
}

pub fn spec_from_solution(sol: &Solution) -> Result<SeriesSpec> {
    let bracket = bracket_from_a(&sol.a, sol.nu)?;
    SeriesSpec::new(sol.nu, sol.r, sol.x.clone(), bracket, sol.g.clone(), sol.prec, Provenance::Solved)
}

fn chunk_sum(spec: &SeriesSpec, scaled: &[BigInt], x: &BigReal, from: usize, to: usize, w: usize) -> BigReal {
    let mut xn = x.powi(from as i64);
    let mut acc = BigReal::zero(w);
    for (n, c) in scaled.iter().enumerate().take(to).skip(from) {
        let cn = BigReal::from_bigint(c, w).mul_pow2(-6 * n as i64);
        acc = acc + cn * &xn * spec.bracket_at(n as u64, w);
        xn = &xn * x;
    }
    acc
}

/// `Σ_{start ≤ n < start+terms} c_{2ν}(n) xⁿ B(n)`.
pub fn evaluate_from(spec: &SeriesSpec, start: usize, terms: usize, prec: usize) -> Result<BigReal> {
    if terms == 0 {
        return Err(Error::Domain("at least one term is required".into()));
    }
    let w = prec + EVAL_GUARD;
    let end = start + terms;
    let scaled = cp_scaled_range(2 * spec.nu, end)?;
    let x = spec.x.round_to(w);
    let bounds: Vec<(usize, usize)> = (start..end).step_by(CHUNK).map(|a| (a, (a + CHUNK).min(end))).collect();
    let parts: Vec<BigReal> = bounds.par_iter().map(|&(a, b)| chunk_sum(spec, &scaled, &x, a, b, w)).collect();
    let mut acc = BigReal::zero(w);
    for p in parts {
        acc = acc + p;
    }
    Ok(acc.round_to(prec))
}

/// Partial sum of the first `terms` terms.
pub fn evaluate(spec: &SeriesSpec, terms: usize, prec: usize) -> Result<BigReal> {
    evaluate_from(spec, 0, terms, prec)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub nu: u32,
    pub r: String,
    pub terms: usize,
    pub start: usize,
    pub prec_bits: usize,
    pub dpt: f64,
    pub predicted_digits: f64,
    pub threshold_digits: f64,
    /// Agreement with `g/π^{2ν}`, cached AGM `π`.
    pub matched_digits: f64,
    /// Agreement with `g/π^{2ν}`, independent Chudnovsky `π`.
    pub matched_digits_reference: f64,
    /// 1-based position of the first significant digit that disagrees.
    pub first_bad_digit: usize,
    pub sum: String,
    pub target: String,
    pub passed: bool,
}

impl VerificationReport {
    pub fn line(&self) -> String {
        format!(
            "{} {}: {:.1} digits (reference pi {:.1}), predicted {:.1}, threshold {:.1}, N={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.matched_digits,
            self.matched_digits_reference,
            self.predicted_digits,
            self.threshold_digits,
            self.terms
        )
    }
}

/// Bits needed so that `digits` decimal digits, plus a margin, fit.
pub fn required_bits(digits: f64) -> usize {
    ((digits + DIGIT_MARGIN) / std::f64::consts::LOG10_2).ceil() as usize
}

/// Largest term count whose predicted agreement still fits in `prec`.
pub fn max_terms_for(dpt: f64, prec: usize) -> usize {
    let room = BigReal::decimal_digits(prec) as f64 - DIGIT_MARGIN;
    ((room / dpt).floor() as usize).max(1)
}

/// Sums `terms` terms from `start` and compares with `g/π^{2ν}`.
pub fn verify_named(name: &str, spec: &SeriesSpec, start: usize, terms: usize, prec: usize) -> Result<VerificationReport> {
    let dpt = spec.dpt();
    let predicted = (start + terms) as f64 * dpt;
    let need = required_bits(predicted);
    if need > prec {
        return Err(Error::PrecisionTooLow {
            what: format!("{name}: {terms} terms predict {predicted:.1} digits"),
            required_bits: need,
        });
    }
    let sum = evaluate_from(spec, start, terms, prec)?;
    let target = spec.target(prec);
    let reference = spec.target_reference(prec);
    let matched = matched_digits(&sum, &target);
    let matched_ref = matched_digits(&sum, &reference);
    let threshold = predicted - DIGIT_SLACK;
    let digits = BigReal::decimal_digits(prec);
    Ok(VerificationReport {
        name: name.to_string(),
        nu: spec.nu,
        r: spec.r.to_string(),
        terms,
        start,
        prec_bits: prec,
        dpt,
        predicted_digits: predicted,
        threshold_digits: threshold,
        matched_digits: matched,
        matched_digits_reference: matched_ref,
        first_bad_digit: matched.floor() as usize + 1,
        sum: sum.to_sci_string(digits),
        target: target.to_sci_string(digits),
        passed: matched >= threshold && matched_ref >= threshold,
    })
}

pub fn verify(spec: &SeriesSpec, terms: usize, prec: usize) -> Result<VerificationReport> {
    let name = format!("nu={} r={}", spec.nu, spec.r);
    verify_named(&name, spec, 0, terms, prec)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct SpecDocument {
    schema: String,
    nu: u32,
    r: String,
    x_decimal: String,
    bracket_decimals: Vec<String>,
    g_decimal: String,
    prec_bits: usize,
    dpt: f64,
    provenance: Provenance,
}

fn decimal(v: &BigReal, prec: usize) -> String {
    v.to_sci_string(BigReal::decimal_digits(prec) + 3)
}

/// Flat JSON document for a series; byte-identical for identical input.
pub fn spec_to_json(spec: &SeriesSpec) -> String {
    let doc = SpecDocument {
        schema: SCHEMA.to_string(),
        nu: spec.nu,
        r: spec.r.to_string(),
        x_decimal: decimal(&spec.x, spec.prec),
        bracket_decimals: spec.bracket.iter().map(|b| decimal(b, spec.prec)).collect(),
        g_decimal: decimal(&spec.g, spec.prec),
        prec_bits: spec.prec,
        dpt: spec.dpt(),
        provenance: spec.provenance,
    };
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn spec_from_json(s: &str) -> Result<SeriesSpec> {
    let doc: SpecDocument = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.schema != SCHEMA {
        return Err(Error::Parse(format!("unsupported schema {:?}", doc.schema)));
    }
    let p = doc.prec_bits;
    let r: PosRational = doc.r.parse()?;
    let x = BigReal::parse_decimal(&doc.x_decimal, p)?;
    let bracket = doc
        .bracket_decimals
        .iter()
        .map(|b| BigReal::parse_decimal(b, p))
        .collect::<Result<Vec<_>>>()?;
    let g = BigReal::parse_decimal(&doc.g_decimal, p)?;
    SeriesSpec::new(doc.nu, r, x, bracket, g, p, doc.provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigreal::log2_diff;
    use crate::elliptic::ell_k;

    fn int(n: u64) -> PosRational {
        PosRational::integer(n).unwrap()
    }

    #[test]
    fn bracket_identity_and_nu2_pattern() {
        let p = 128;
        let one = vec![BigReal::one(p), BigReal::zero(p), BigReal::zero(p), BigReal::zero(p), BigReal::zero(p)];
        let b = bracket_from_a(&one, 2).unwrap();
        assert!(b[0] == BigReal::one(p) && b[1..].iter().all(|v| v.is_zero()));
        let a: Vec<BigReal> = [1, 2, 3, 5, 7].iter().map(|v| BigReal::from_i64(*v, p)).collect();
        let b = bracket_from_a(&a, 2).unwrap();
        // B1 = A1 - A2 + 2A3 - 6A4, B2 = A2 - 3A3 + 11A4, B3 = A3 - 6A4
        let expect = [1, 2 - 3 + 10 - 42, 3 - 15 + 77, 5 - 42, 7];
        for (v, e) in b.iter().zip(expect) {
            assert!(*v == BigReal::from_i64(e, p));
        }
        assert!(bracket_from_a(&a, 3).is_err());
    }

    #[test]
    fn nu3_pattern() {
        let p = 128;
        let a: Vec<BigReal> = (0..7).map(|i| BigReal::from_i64([1, 0, 0, 0, 0, 1, 1][i], p)).collect();
        let b = bracket_from_a(&a, 3).unwrap();
        // B5 = A5 - 15A6, B4 = A4 - 10A5 + 85A6
        assert!(b[5] == BigReal::from_i64(-14, p));
        assert!(b[4] == BigReal::from_i64(75, p));
    }

    #[test]
    fn generating_function_matches_elliptic_power() {
        // Σ c6(n) xⁿ = (2K/π)^{12} with k² = (1 - √(1-x))/2
        let p = 192;
        let x = BigReal::from_f64(0.1, p);
        let spec = SeriesSpec::new(
            3,
            int(2),
            x.clone(),
            (0..7).map(|i| if i == 0 { BigReal::one(p) } else { BigReal::zero(p) }).collect(),
            BigReal::one(p),
            p,
            Provenance::Solved,
        )
        .unwrap();
        let sum = evaluate(&spec, 80, p).unwrap();
        let k = ((BigReal::one(p) - (BigReal::one(p) - &x).sqrt()).mul_pow2(-1)).sqrt();
        let phi = ell_k(&k, p).unwrap().mul_pow2(1) / BigReal::pi(p);
        assert!((sum - phi.powi(12)).log10_abs() < -30.0);
    }

    #[test]
    fn single_term() {
        let spec = build_series(2, &int(2), 192).unwrap();
        let s = evaluate(&spec, 1, 192).unwrap();
        assert!(s == spec.bracket[0].round_to(192));
        assert!(spec.bracket[0] == BigReal::one(192));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(build_series(2, &int(1), 128), Err(Error::NonConvergent(_))));
        assert!(build_series(2, &PosRational::new(1, 2).unwrap(), 128).is_err());
        let p = 128;
        let b = vec![BigReal::one(p); 5];
        assert!(SeriesSpec::new(2, int(2), BigReal::one(p), b.clone(), BigReal::one(p), p, Provenance::Solved).is_err());
        assert!(matches!(
            SeriesSpec::new(2, int(2), BigReal::from_f64(0.5, p), b[..3].to_vec(), BigReal::one(p), p, Provenance::Solved),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn precision_hint() {
        let spec = build_series(3, &int(7), 128).unwrap();
        match verify(&spec, 60, 128) {
            Err(Error::PrecisionTooLow { required_bits, .. }) => assert!(required_bits > 128),
            other => panic!("expected a precision error, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = build_series(2, &int(2), 256).unwrap();
        let js = spec_to_json(&spec);
        assert_eq!(js, spec_to_json(&spec));
        let back = spec_from_json(&js).unwrap();
        assert!(log2_diff(&back.x, &spec.x) < -(256.0 - 4.0));
        assert!((&back.g - &spec.g).log2_abs() - spec.g.log2_abs() < -(256.0 - 4.0));
        for (a, b) in back.bracket.iter().zip(&spec.bracket) {
            assert!((a - b).log2_abs() - b.log2_abs().max(0.0) < -(256.0 - 4.0));
        }
        assert!(js.contains("\"schema\": \"piforge/1\""));
        assert!(spec_from_json(&js.replace("piforge/1", "piforge/0")).is_err());
    }

    #[test]
    fn truncation_model() {
        // |S_N - S_∞| <= C |x|^N N^{2ν}, C fitted at N = 10
        let p = 320;
        let spec = build_series(2, &int(2), p).unwrap();
        let target = spec.target(p);
        let err = |n: usize| (evaluate(&spec, n, p).unwrap() - &target).abs().log10_abs();
        let model = |n: usize| n as f64 * spec.x.log10_abs() + 4.0 * (n as f64).log10();
        let c = err(10) - model(10);
        for n in [20, 40, 60, 80] {
            assert!(err(n) <= c + model(n) + 1.0, "N = {n}");
        }
    }
}
