use proptest::prelude::*;
use scatterflat::exactlin::Permutation;
use scatterflat::scatmat::*;
use scatterflat::specfun::{EvalOptions, RiemannZeta, ZetaEval};
use scatterflat::{Complex64, Result};

fn lambda(d1: f64, d2: f64, im: [f64; 3]) -> SpectralParameter3 {
    SpectralParameter3::centered([
        Complex64::new(d1 + d2, im[0]),
        Complex64::new(d2, im[1]),
        Complex64::new(0.0, im[2]),
    ])
    .unwrap()
}

proptest! {
    #[test]
    fn reflection(re in -1.0f64..2.0, im in 0.2f64..40.0) {
        let s = Complex64::new(re, im);
        let a = c_rank1(s).unwrap().value;
        let b = c_rank1(1.0 - s).unwrap().value;
        prop_assert!((a * b - 1.0).norm() < 1e-10);
    }

    #[test]
    fn unitarity(r in 0.01f64..800.0) {
        prop_assert!((c_rank1(Complex64::new(0.5, r)).unwrap().value.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn conjugation(re in 0.6f64..3.0, im in 0.1f64..50.0) {
        let s = Complex64::new(re, im);
        prop_assert!((c_rank1(s).unwrap().value - c_rank1(s.conj()).unwrap().value.conj()).norm() < 1e-12);
    }

    #[test]
    fn cocycle(d1 in 1.5f64..3.0, d2 in 1.5f64..3.0, im in prop::array::uniform3(-10.0f64..10.0)) {
        let lam = lambda(d1, d2, im);
        let s1: Permutation = "12".parse().unwrap();
        let s2: Permutation = "23".parse().unwrap();
        for (x, y) in [(&s1, &s2), (&s2, &s1), (&s1, &s2.compose(&s1)), (&s2, &s1.compose(&s2))] {
            prop_assert!(cocycle_residual(x, y, &lam).unwrap() < 1e-10);
        }
    }

    #[test]
    fn simple_reflections_factor(re in prop::array::uniform3(-3.0f64..3.0), im in prop::array::uniform3(-15.0f64..15.0)) {
        let lam = SpectralParameter3::centered([0, 1, 2].map(|i| Complex64::new(re[i], im[i]))).unwrap();
        for w in ["12", "23"] {
            let w: Permutation = w.parse().unwrap();
            let a = c_rank2(&w, &lam).unwrap().value;
            let b = c_rank2_via_rank1(&w, &lam).unwrap().value;
            prop_assert!((a - b).norm() <= 1e-13 * b.norm());
        }
    }

    #[test]
    fn longest_element_is_a_product(re in prop::array::uniform3(-3.0f64..3.0), im in prop::array::uniform3(-15.0f64..15.0)) {
        let lam = SpectralParameter3::centered([0, 1, 2].map(|i| Complex64::new(re[i], im[i]))).unwrap();
        let whole = c_rank2(&Permutation::longest(3), &lam).unwrap().value;
        let product: Complex64 = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(a, b)| c_rank1((lam.difference(a, b) + 1.0) / 2.0).unwrap().value)
            .product();
        prop_assert!((whole - product).norm() <= 1e-12 * product.norm());
    }
}

#[test]
fn eisenstein_residual_shrinks_with_cmax() {
    let s = Complex64::new(2.0, 0.0);
    let coarse = eisenstein_constant_term_check(3.0, s, 100).unwrap();
    let fine = eisenstein_constant_term_check(3.0, s, 1000).unwrap();
    assert!(fine < coarse / 50.0, "{coarse} {fine}");
    // tail Σ_{c>N} φ(c) c^{-4} F(2) / y < (π/2)/(2N²·3)
    assert!(coarse < std::f64::consts::PI / 4.0 / 3.0 / 1e4);
}

struct Shifted;

impl ZetaEval for Shifted {
    fn zeta(&self, s: Complex64, opts: &EvalOptions) -> Result<Complex64> {
        Ok(RiemannZeta.zeta(s, opts)? + 1e-4)
    }
}

#[test]
fn broken_zeta_is_detected() {
    let bad = Scattering::with_zeta(&Shifted, EvalOptions::default());
    let r = bad.c_rank1(Complex64::new(0.5, 40.0)).unwrap().value.norm();
    assert!((r - 1.0).abs() > 1e-6);
    assert!(bad.eisenstein_constant_term_check(3.0, Complex64::new(2.0, 0.0), 100).unwrap() > 1e-6);
}
