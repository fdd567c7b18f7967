use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use opfunc_core::calculus::{BandlimitedFunction, RnFunction};
use opfunc_core::dyadic::{is_maximal, maximal_admissible};
use opfunc_core::experiment::{gen_commuting_tuple, SpectrumBox};
use opfunc_core::multiplier::{gamma2_norm, PsiConstruction};
use opfunc_core::smooth::smoothstep;
use opfunc_core::spectral::{
    commutation_defect, eigh, joint_diagonalize_default, schatten_norm, CMatrix, HermitianMatrix,
};
use opfunc_core::C64;

fn gaussian(rows: usize, cols: usize, seed: u64) -> CMatrix {
    CMatrix::gaussian(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs(dim in 1usize..9, seed in any::<u64>()) {
        let h = HermitianMatrix::new(gaussian(dim, dim, seed).hermitian_part()).unwrap();
        let e = eigh(&h);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let scale = 1.0 + h.as_matrix().max_abs();
        prop_assert!((&e.reconstruct() - h.as_matrix()).max_abs() < 1e-12 * scale);
    }

    #[test]
    fn joint_diagonalisation_of_generated_tuples(dim in 1usize..9, n in 1usize..4, seed in any::<u64>()) {
        let t = gen_commuting_tuple(dim, n, &SpectrumBox::cube(n, 2.0), seed).unwrap();
        prop_assert!(commutation_defect(&t) <= 1e-12);
        let js = joint_diagonalize_default(&t).unwrap();
        prop_assert!(js.unitarity_defect() < 1e-10);
        prop_assert!(js.reconstruction_residual(&t) < 1e-10);
    }

    #[test]
    fn schatten_norms_decrease_in_p(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let t = gaussian(rows, cols, seed);
        let ps = [1.0, 1.5, 2.0, 3.0, 8.0, f64::INFINITY];
        let norms: Vec<f64> = ps.iter().map(|&p| schatten_norm(&t, p).unwrap()).collect();
        prop_assert!(norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        prop_assert!((norms[2] - t.frobenius_norm()).abs() < 1e-12 * norms[2]);
        prop_assert!((norms[5] - t.op_norm()).abs() < 1e-10 * norms[5]);
    }

    #[test]
    fn maximal_cube_contains_its_pair(
        x in prop::collection::vec(-100.0f64..100.0, 1..4),
        dy in prop::collection::vec(-100.0f64..100.0, 3),
    ) {
        let y: Vec<f64> = x.iter().zip(&dy).map(|(a, b)| a + b).collect();
        let c = maximal_admissible(&x, &y);
        prop_assert!(c.contains(&x, &y));
        prop_assert!(is_maximal(&c).unwrap());
        if c.m > 0 {
            prop_assert!(c.separation() >= c.sidelength());
        }
    }

    #[test]
    fn psi_identity_on_random_pairs(
        n in 1usize..4,
        seed in any::<u64>(),
        sigma in 0.1f64..6.0,
        x in prop::collection::vec(-50.0f64..50.0, 3),
        y in prop::collection::vec(-50.0f64..50.0, 3),
    ) {
        let f = BandlimitedFunction::random(n, 5, sigma, &mut ChaCha8Rng::seed_from_u64(seed));
        for c in [PsiConstruction::new(&f), PsiConstruction::for_bandwidth(&f)] {
            let (x, y) = (&x[..n], &y[..n]);
            prop_assert!(c.identity_residual(x, y).unwrap() <= c.identity_tolerance(x, y));
        }
    }

    #[test]
    fn divided_differences_telescope(
        seed in any::<u64>(),
        x in prop::collection::vec(-10.0f64..10.0, 3),
        y in prop::collection::vec(-10.0f64..10.0, 3),
    ) {
        let f = BandlimitedFunction::random(3, 4, 2.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let mut sum = C64::new(0.0, 0.0);
        for j in 0..3 {
            sum += f.divided_difference(j, &x, &y).unwrap() * (x[j] - y[j]);
        }
        prop_assert!((sum - (f.eval_c(&x) - f.eval_c(&y))).norm() < 1e-10);
    }

    #[test]
    fn smoothstep_is_antisymmetric(t in -1.0f64..2.0) {
        prop_assert!((smoothstep(t) + smoothstep(1.0 - t) - 1.0).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&smoothstep(t)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gamma2_sandwich_and_homogeneity(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>(), s in 0.1f64..10.0) {
        let m = gaussian(rows, cols, seed);
        let c = gamma2_norm(&m, 1e-6).unwrap();
        prop_assert!(c.lower <= c.upper);
        prop_assert!(m.max_abs() <= c.upper * (1.0 + 1e-12));
        prop_assert!(c.lower <= m.op_norm() * (1.0 + 1e-12));
        prop_assert!(c.factorization_residual(&m) <= 1e-6);
        let cs = gamma2_norm(&m.scale_real(s), 1e-6 * s).unwrap();
        prop_assert!(cs.lower <= s * c.upper * (1.0 + 1e-12) && s * c.lower <= cs.upper * (1.0 + 1e-12));
    }
}
