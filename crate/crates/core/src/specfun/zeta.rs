use num_complex::Complex64;

use super::{check_finite, fmt_c, EvalOptions};
use crate::error::{Error, Result};

/// Something that evaluates the Riemann zeta function.
///
/// Scattering computations are generic over this so that verification
/// suites can be run against a deliberately perturbed implementation.
pub trait ZetaEval: Sync {
    fn zeta(&self, s: Complex64, opts: &EvalOptions) -> Result<Complex64>;
}

/// Euler–Maclaurin evaluation of `ζ(s)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RiemannZeta;

impl ZetaEval for RiemannZeta {
    fn zeta(&self, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
        zeta(s, opts)
    }
}

// (numerator, denominator) of B_2, B_4, .., B_30
const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174_611.0, 330.0),
    (854_513.0, 138.0),
    (-236_364_091.0, 2730.0),
    (8_553_103.0, 6.0),
    (-23_749_461_029.0, 870.0),
    (8_615_841_276_005.0, 14322.0),
];

/// `ζ(s)` by Euler–Maclaurin summation.
///
/// `ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
///        + Σ_k B_{2k}/(2k)! · s(s+1)..(s+2k-2) · N^{1-s-2k}`
///
/// The cut `N` starts at `max(30, |Im s|)` and doubles until the Bernoulli
/// tail falls below `opts.target_abs_error`. Intended for `Re s >= -2` and
/// `|Im s| <= 2000`.
pub fn zeta(s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    check_finite(s, "argument of ζ")?;
    opts.validate()?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { function: "zeta", at: fmt_c(s) });
    }
    let mut cut = (s.im.abs().ceil() as usize).max(30);
    loop {
        if cut > opts.max_terms {
            return Err(Error::Budget { needed: cut, limit: opts.max_terms });
        }
        if let Some(v) = euler_maclaurin(s, cut, opts.target_abs_error) {
            return Ok(v);
        }
        cut *= 2;
    }
}

/// `n^{-s}` via `exp(-s ln n)`.
#[inline]
fn pow_neg(n: f64, s: Complex64) -> Complex64 {
    let ln = n.ln();
    let (sin, cos) = (-s.im * ln).sin_cos();
    let mag = n.powf(-s.re);
    Complex64::new(mag * cos, mag * sin)
}

fn euler_maclaurin(s: Complex64, cut: usize, tol: f64) -> Option<Complex64> {
    let big_n = cut as f64;
    let n_pow = pow_neg(big_n, s);
    let one = Complex64::new(1.0, 0.0);

    // Bernoulli tail first: if it does not converge at this cut, skip the head.
    let mut tail = Complex64::new(0.0, 0.0);
    let mut rising = s; // s (s+1) .. (s+2k-2)
    let mut power = n_pow / big_n; // N^{1-s-2k}, k = 1
    let mut factorial = 2.0; // (2k)!
    let mut converged = false;
    for (k, &(num, den)) in BERNOULLI_EVEN.iter().enumerate() {
        let k = k + 1;
        let term = rising * power * (num / den / factorial);
        tail += term;
        if term.norm() < 0.1 * tol {
            converged = true;
            break;
        }
        let kf = k as f64;
        rising *= (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        power /= big_n * big_n;
        factorial *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
    }
    if !converged {
        return None;
    }

    let mut head = Complex64::new(0.0, 0.0);
    for n in 1..cut {
        head += pow_neg(n as f64, s);
    }
    Some(head + n_pow * big_n / (s - one) + n_pow * 0.5 + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z(s: Complex64) -> Complex64 {
        zeta(s, &EvalOptions::default()).unwrap()
    }

    #[test]
    fn classical_values() {
        assert!((z(c(2.0, 0.0)) - PI * PI / 6.0).norm() < 1e-14);
        assert!((z(c(0.0, 0.0)) + 0.5).norm() < 1e-14);
        assert!((z(c(-1.0, 0.0)) + 1.0 / 12.0).norm() < 1e-13);
        assert!(z(c(-2.0, 0.0)).norm() < 1e-12);
        assert!((z(c(4.0, 0.0)) - PI.powi(4) / 90.0).norm() < 1e-14);
    }

    #[test]
    fn zeta_three_matches_direct_summation() {
        // independent oracle: partial sum to 10^6 plus the integral tail and half-term
        let n = 1_000_000u64;
        let head: f64 = (1..n).rev().map(|k| (k as f64).powi(-3)).sum();
        let nf = n as f64;
        let oracle = head + 0.5 / (nf * nf) + 0.5 * nf.powi(-3) + 0.25 * nf.powi(-4);
        assert!((z(c(3.0, 0.0)).re - oracle).abs() < 1e-12);
        assert!((z(c(3.0, 0.0)).re - 1.202_056_903_159_594_3).abs() < 1e-14);
    }

    // reference values from a 40-digit evaluation
    #[test]
    fn complex_values() {
        let cases = [
            (c(0.5, 14.0), c(0.022_241_142_609_993_59, -0.103_258_123_266_450_06), 1e-13),
            (c(-1.5, 20.0), c(-4.856_977_220_470_568, -8.774_823_385_208_829), 1e-11),
            (c(0.0, 200.0), c(10.682_421_276_404_72, -11.647_038_759_263_586), 1e-11),
            (c(1.0, 1000.0), c(0.940_936_868_292_753_3, 0.045_226_652_072_095_1), 1e-11),
            (c(2.0, 1999.0), c(0.769_364_596_164_200_4, 0.022_126_594_398_948_28), 1e-11),
        ];
        for (s, want, tol) in cases {
            let got = z(s);
            assert!((got - want).norm() < tol, "ζ({s}) = {got}, want {want}");
        }
    }

    #[test]
    fn pole_and_budget() {
        assert!(matches!(zeta(c(1.0, 0.0), &EvalOptions::default()), Err(Error::Pole { .. })));
        let tight = EvalOptions { target_abs_error: 1e-12, max_terms: 100 };
        assert!(matches!(zeta(c(0.5, 500.0), &tight), Err(Error::Budget { .. })));
        assert!(zeta(c(1.0, 1e-8), &EvalOptions::default()).is_ok());
    }

    #[test]
    fn dirichlet_series_for_large_real_part() {
        for sigma in [2.0, 2.5, 3.0] {
            for t in [0.0, 3.0, -17.0] {
                let s = c(sigma, t);
                let partial: Complex64 = (1..=100_000u32).rev().map(|n| pow_neg(n as f64, s)).sum();
                let bound = 10f64.powf(-5.0 * (sigma - 1.0)) / (sigma - 1.0);
                assert!((z(s) - partial).norm() <= bound, "s = {s}");
            }
        }
    }
}
