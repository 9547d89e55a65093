//! The four printed series, coefficient for coefficient, and their replay.

use super::{max_terms_for, verify_named, Provenance, SeriesSpec, VerificationReport};
use crate::bigreal::BigReal;
use crate::error::Result;
use crate::rational::PosRational;

/// `(a + b√d) / den` with integer parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: i128,
    pub b: i128,
    pub d: u32,
    pub den: i128,
}

impl QuadSurd {
    pub const fn new(a: i128, b: i128, d: u32, den: i128) -> Self {
        Self { a, b, d, den }
    }

    pub const fn int(a: i128) -> Self {
        Self::new(a, 0, 1, 1)
    }

    pub const fn rational(a: i128, den: i128) -> Self {
        Self::new(a, 0, 1, den)
    }

    pub fn value(&self, prec: usize) -> BigReal {
        let big = |v: i128| BigReal::from_bigint(&v.into(), prec);
        let mut v = big(self.a);
        if self.b != 0 {
            v = v + big(self.b) * BigReal::from_u64(self.d as u64, prec).sqrt();
        }
        v / big(self.den)
    }

    pub fn scaled(&self, k: i128) -> Self {
        Self { a: self.a * k, b: self.b * k, ..*self }
    }
}

/// A printed series `Σ_{n ≥ start} c_{2ν}(n) xⁿ B(n) = num / (den π^{2ν})`.
#[derive(Clone, Debug)]
pub struct PaperSeries {
    pub name: &'static str,
    pub nu: u32,
    pub r: u64,
    pub x: QuadSurd,
    pub bracket: Vec<QuadSurd>,
    pub rhs_num: i128,
    pub rhs_den: QuadSurd,
    /// Lower summation index as printed.
    pub printed_start: usize,
    /// Lower summation index under which the printed right side holds.
    pub start: usize,
    /// Term count used for replay at full precision.
    pub terms: usize,
}

impl PaperSeries {
    pub fn g(&self, prec: usize) -> BigReal {
        BigReal::from_bigint(&self.rhs_num.into(), prec) / self.rhs_den.value(prec)
    }

    pub fn spec(&self, prec: usize) -> Result<SeriesSpec> {
        SeriesSpec::new(
            self.nu,
            PosRational::integer(self.r)?,
            self.x.value(prec),
            self.bracket.iter().map(|b| b.value(prec)).collect(),
            self.g(prec),
            prec,
            Provenance::PaperReplay,
        )
    }

    pub fn verify(&self, terms: usize, prec: usize) -> Result<VerificationReport> {
        verify_named(self.name, &self.spec(prec)?, self.start, terms, prec)
    }

    /// Same, summed from the printed lower index.
    pub fn verify_printed_start(&self, terms: usize, prec: usize) -> Result<VerificationReport> {
        verify_named(self.name, &self.spec(prec)?, self.printed_start, terms, prec)
    }
}

/// The printed series in order: `1/π⁴` at `r = 2`, then the `1/π⁶` examples
/// at `r = 2, 7, 15`.
pub fn paper_series() -> Vec<PaperSeries> {
    const D1: i128 = 12_623_771_801;
    const D3: i128 = 293_049_243_769;
    vec![
        PaperSeries {
            name: "1/pi^4, r=2",
            nu: 2,
            r: 2,
            x: QuadSurd::new(-56, 40, 2, 1),
            bracket: vec![
                QuadSurd::int(462_719),
                QuadSurd::new(292_072, 56_267, 2, 1).scaled(5),
                QuadSurd::new(268_641, 81_580, 2, 1).scaled(6),
                QuadSurd::new(134_444, 32_155, 2, 1).scaled(4),
                QuadSurd::new(36_209, 34_800, 2, 1).scaled(-4),
            ],
            rhs_num: -48_585_495,
            rhs_den: QuadSurd::new(-229_441, 162_240, 2, 1),
            printed_start: 0,
            start: 0,
            terms: 120,
        },
        PaperSeries {
            name: "1/pi^6 example i, r=2",
            nu: 3,
            r: 2,
            x: QuadSurd::new(-56, 40, 2, 1),
            bracket: vec![
                QuadSurd::int(1),
                QuadSurd::new(28_335_508_172, -240_070_543, 2, D1),
                QuadSurd::new(-22_911_684_702, 3_047_538_900, 2, D1).scaled(-1),
                QuadSurd::new(-6_110_502_200, 5_456_734_120, 2, D1).scaled(-1),
                QuadSurd::new(1_196_112_280, 3_649_618_320, 2, D1).scaled(-1),
                QuadSurd::new(505_494_672, 788_011_092, 2, D1).scaled(-1),
                QuadSurd::new(463_408_744, 244_639_040, 2, 37_871_315_403),
            ],
            rhs_num: 3465,
            rhs_den: QuadSurd::new(629_823_301, -445_352_320, 2, 1),
            printed_start: 1,
            start: 0,
            terms: 120,
        },
        PaperSeries {
            name: "1/pi^6 example ii, r=7",
            nu: 3,
            r: 7,
            x: QuadSurd::rational(1, 64),
            bracket: vec![
                QuadSurd::int(1),
                QuadSurd::rational(913_150, 307_323),
                QuadSurd::rational(-75_313, 102_441),
                QuadSurd::rational(-4_998_980, 307_323),
                QuadSurd::rational(-1_126_755, 34_147),
                QuadSurd::rational(-1_080_450, 34_147),
                QuadSurd::rational(-453_789, 34_147),
            ],
            rhs_num: -14_417_920,
            rhs_den: QuadSurd::int(34_147),
            printed_start: 0,
            start: 0,
            terms: 60,
        },
        PaperSeries {
            name: "1/pi^6 example iii, r=15",
            nu: 3,
            r: 15,
            x: QuadSurd::new(47, -21, 5, 128),
            bracket: vec![
                QuadSurd::int(1),
                QuadSurd::new(2_877_117_109_830, 924_178_552_332, 5, D3),
                QuadSurd::new(15_689_590_644_975, 6_660_423_786_240, 5, D3),
                QuadSurd::new(51_863_088_153_600, 23_066_524_139_820, 5, D3),
                QuadSurd::new(106_483_989_569_175, 47_630_637_457_200, 5, D3),
                QuadSurd::new(130_261_549_416_750, 58_266_415_341_540, 5, D3),
                QuadSurd::new(75_619_648_012_725, 33_817_435_224_300, 5, D3),
            ],
            rhs_num: 20_185_088,
            rhs_den: QuadSurd::new(11_556_387, -5_162_500, 5, 1),
            printed_start: 0,
            start: 0,
            terms: 40,
        },
    ]
}

/// Term count for a printed series at `prec`: the full count when it fits,
/// otherwise the largest count whose predicted digits fit.
pub fn replay_terms(s: &PaperSeries, prec: usize) -> Result<usize> {
    let dpt = -s.x.value(prec).log10_abs();
    Ok(s.terms.min(max_terms_for(dpt, prec)))
}

/// Replays every printed series against its printed right side and against
/// the independent `π`.
pub fn replay_paper(prec: usize) -> Result<Vec<VerificationReport>> {
    paper_series().iter().map(|s| s.verify(replay_terms(s, prec)?, prec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_values() {
        let p = 128;
        let x = QuadSurd::new(-56, 40, 2, 1).value(p);
        assert!((x.to_f64() - 0.568_542_494_923_801_9).abs() < 1e-15);
        assert!(QuadSurd::rational(1, 64).value(p) == BigReal::from_f64(1.0 / 64.0, p));
    }

    #[test]
    fn replay_small_precision() {
        for rep in replay_paper(192).unwrap() {
            assert!(rep.passed, "{}", rep.line());
        }
    }

    #[test]
    fn printed_start_of_first_sextic_example_fails() {
        let s = &paper_series()[1];
        let rep = s.verify_printed_start(60, 192).unwrap();
        assert!(rep.matched_digits < 1.0);
    }

    #[test]
    fn corrupted_constant_fails() {
        let mut s = paper_series()[2].clone();
        s.bracket[1] = QuadSurd::rational(913_151, 307_323);
        let rep = s.verify(replay_terms(&s, 256).unwrap(), 256).unwrap();
        assert!(!rep.passed);
        assert!(rep.first_bad_digit < 10);
    }
}
