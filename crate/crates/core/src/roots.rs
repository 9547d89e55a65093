//! Real roots of small polynomials with `BigReal` coefficients.
//!
//! Roots are located in double precision with the Durand–Kerner iteration
//! and then polished by Newton's method at the requested precision.

use crate::bigreal::{BigReal, GUARD_BITS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Evaluates `Σ c_i x^i` (coefficients low to high) by Horner's rule.
pub fn eval_poly(coeffs: &[BigReal], x: &BigReal) -> BigReal {
    let mut acc = BigReal::zero(x.prec());
    for c in coeffs.iter().rev() {
        acc = &acc * x + c;
    }
    acc
}

fn derivative(coeffs: &[BigReal]) -> Vec<BigReal> {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as i64).collect()
}

fn durand_kerner(coeffs: &[f64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: C64| {
        let mut acc = C64 { re: 0.0, im: 0.0 };
        for c in monic.iter().rev() {
            acc = acc.mul(z).add(C64 { re: *c, im: 0.0 });
        }
        acc
    };
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = C64 { re: 0.4, im: 0.9 };
    let mut z: Vec<C64> = (0..n)
        .map(|i| {
            let mut p = C64 { re: 1.0, im: 0.0 };
            for _ in 0..i {
                p = p.mul(seed);
            }
            C64 { re: p.re * radius.min(4.0), im: p.im * radius.min(4.0) }
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = C64 { re: 1.0, im: 0.0 };
            for j in 0..n {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            let step = eval(z[i]).div(den);
            z[i] = z[i].sub(step);
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// All real roots, each polished to about `2^{-prec}` relative accuracy,
/// in increasing order.
pub fn real_roots(coeffs: &[BigReal], prec: usize) -> Result<Vec<BigReal>> {
    let mut coeffs: Vec<BigReal> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::RootSelection("polynomial has no roots to select from".into()));
    }
    let w = prec + GUARD_BITS;
    let coeffs: Vec<BigReal> = coeffs.iter().map(|c| c.round_to(w)).collect();
    let dcoeffs = derivative(&coeffs);
    let approx: Vec<f64> = coeffs.iter().map(|c| c.to_f64()).collect();
    let mut roots: Vec<BigReal> = Vec::new();
    for z in durand_kerner(&approx) {
        if z.im.abs() > 1e-7 * z.re.abs().max(1.0) {
            continue;
        }
        let mut x = BigReal::from_f64(z.re, w);
        let mut converged = false;
        for _ in 0..200 {
            let fx = eval_poly(&coeffs, &x);
            let dfx = eval_poly(&dcoeffs, &x);
            if dfx.is_zero() {
                break;
            }
            let step = &fx / &dfx;
            x = &x - &step;
            if step.is_zero() || step.log2_abs() - x.log2_abs().max(0.0) < -(prec as f64) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::RootSelection(format!("Newton polishing stalled near {}", z.re)));
        }
        if !roots.iter().any(|r| (r - &x).log2_abs() < -(prec as f64) / 2.0) {
            roots.push(x.round_to(prec));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(roots)
}

/// Picks the root closest to `target`; fails when the runner-up is within a
/// relative gap of `2^{-16}`.
pub fn select_nearest(roots: &[BigReal], target: &BigReal) -> Result<BigReal> {
    let mut scored: Vec<(f64, &BigReal)> = roots.iter().map(|r| ((r - target).log2_abs(), r)).collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"));
    let best = scored
        .first()
        .ok_or_else(|| Error::RootSelection("no real roots".into()))?;
    if let Some(second) = scored.get(1) {
        let gap = (second.1 - best.1).log2_abs() - target.log2_abs();
        if gap < -16.0 {
            return Err(Error::RootSelection(format!(
                "two roots within relative gap 2^{gap:.1} of the target; raise the precision"
            )));
        }
    }
    Ok(best.1.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i64], prec: usize) -> Vec<BigReal> {
        v.iter().map(|x| BigReal::from_i64(*x, prec)).collect()
    }

    #[test]
    fn quadratic_roots() {
        // x^2 - 2
        let roots = real_roots(&c(&[-2, 0, 1], 256), 256).unwrap();
        assert_eq!(roots.len(), 2);
        let s2 = BigReal::from_i64(2, 256).sqrt();
        assert!((&roots[1] - &s2).log2_abs() < -250.0);
        assert!((&roots[0] + &s2).log2_abs() < -250.0);
    }

    #[test]
    fn cubic_with_complex_pair() {
        // (x - 3)(x^2 + 1) = x^3 - 3x^2 + x - 3
        let roots = real_roots(&c(&[-3, 1, -3, 1], 128), 128).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((&roots[0] - BigReal::from_i64(3, 128)).log2_abs() < -120.0);
    }

    #[test]
    fn nearest_selection() {
        let roots = c(&[-1, 1, 5], 128);
        let pick = select_nearest(&roots, &BigReal::from_f64(0.8, 128)).unwrap();
        assert!(pick == BigReal::one(128));
        let close = vec![BigReal::one(128), BigReal::one(128) + BigReal::one(128).mul_pow2(-30)];
        assert!(select_nearest(&close, &BigReal::one(128)).is_err());
    }
}
