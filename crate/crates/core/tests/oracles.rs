//! Comparisons against independent reference computations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opfunc_core::besov::{bandlimit_project, modulus_star, ModulusOfContinuity, UniformGrid};
use opfunc_core::calculus::{apply_function, BandlimitedFunction, RnFunction, Term};
use opfunc_core::dyadic::{partition_check, Window};
use opfunc_core::experiment::{preset, KontrFunction, PresetParams};
use opfunc_core::multiplier::{gamma2_lower_probe, gamma2_norm, PsiConstruction};
use opfunc_core::spectral::{
    joint_diagonalize_default, schatten_norm, singular_values, CMatrix, CommutingTuple, HermitianMatrix,
};
use opfunc_core::C64;

/// Gauss-Legendre nodes and weights on `[0, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

#[test]
fn gauss_legendre_is_exact_on_polynomials() {
    let rule = gauss_legendre(64);
    let total: f64 = rule.iter().map(|(_, w)| w).sum();
    assert!((total - 1.0).abs() < 1e-14);
    let m: f64 = rule.iter().map(|(x, w)| w * x.powi(9)).sum();
    assert!((m - 0.1).abs() < 1e-14);
}

#[test]
fn unit_cell_psi_matches_quadrature_of_the_gradient() {
    let rule = gauss_legendre(64);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        let f = BandlimitedFunction::random(n, 6, 3.0, &mut rng);
        let c = PsiConstruction::new(&f);
        let mut checked = 0;
        while checked < 40 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-8.0..8.0)).collect();
            let y: Vec<f64> = x.iter().map(|v| v + rng.random_range(-1.0..1.0)).collect();
            if !c.cell(&x, &y).is_unit() {
                continue;
            }
            for j in 0..n {
                let quad: C64 = rule
                    .iter()
                    .map(|&(t, w)| {
                        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| (1.0 - t) * a + t * b).collect();
                        f.partial(j, &z).unwrap() * w
                    })
                    .sum();
                let psi = c.psi(j, &x, &y).unwrap();
                assert!((psi - quad).norm() < 1e-12 * (1.0 + quad.norm()), "{psi} vs {quad}");
            }
            checked += 1;
        }
    }
}

#[test]
fn large_cell_psi_matches_difference_quotient_in_one_dimension() {
    // On R the pieces are forced: Psi = (f(x) - f(y)) / (x - y) off the unit cells.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let f = BandlimitedFunction::random(1, 5, 2.0, &mut rng);
    let c = PsiConstruction::new(&f);
    for _ in 0..200 {
        let x = [rng.random_range(-40.0..40.0)];
        let y = [rng.random_range(-40.0..40.0)];
        if c.cell(&x, &y).is_unit() {
            continue;
        }
        let q = (f.eval_c(&x) - f.eval_c(&y)) / (x[0] - y[0]);
        assert!((c.psi(0, &x, &y).unwrap() - q).norm() < 1e-12);
    }
}

fn sin_series(a: &CMatrix) -> CMatrix {
    let dim = a.rows();
    let a2 = a * a;
    let mut term = a.clone();
    let mut sum = a.clone();
    for k in 1..60 {
        let denom = ((2 * k) * (2 * k + 1)) as f64;
        term = (&term * &a2).scale_real(-1.0 / denom);
        sum = &sum + &term;
    }
    assert_eq!(sum.rows(), dim);
    sum
}

#[test]
fn functional_calculus_matches_power_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let f = preset("sin-xj", &PresetParams::default()).unwrap();
    for dim in [1, 3, 6] {
        let h = HermitianMatrix::new(CMatrix::gaussian(dim, dim, &mut rng).hermitian_part()).unwrap();
        let t = CommutingTuple::with_default_tol(vec![h.clone()]).unwrap();
        let js = joint_diagonalize_default(&t).unwrap();
        let direct = apply_function(&js, &f).unwrap();
        let series = sin_series(h.as_matrix());
        assert!((&direct - &series).max_abs() < 1e-12);
    }
}

#[test]
fn joint_diagonalisation_resolves_degenerate_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let u = CMatrix::gaussian(6, 6, &mut rng).orthonormalize_columns().unwrap();
    let lam1 = [1.0, 1.0, 1.0, -2.0, -2.0, 0.5];
    let lam2 = [0.0, 3.0, -1.0, 0.0, 3.0, 0.0];
    let build = |lam: &[f64]| {
        let d = CMatrix::from_diag(lam);
        HermitianMatrix::new((&(&u * &d) * &u.adjoint()).hermitian_part()).unwrap()
    };
    let t = CommutingTuple::with_default_tol(vec![build(&lam1), build(&lam2)]).unwrap();
    let js = joint_diagonalize_default(&t).unwrap();
    assert!(js.reconstruction_residual(&t) < 1e-10);
    let mut got: Vec<(i64, i64)> = js
        .spectrum()
        .iter()
        .map(|p| ((p[0] * 1e6).round() as i64, (p[1] * 1e6).round() as i64))
        .collect();
    let mut want: Vec<(i64, i64)> = lam1
        .iter()
        .zip(&lam2)
        .map(|(a, b)| ((a * 1e6) as i64, (b * 1e6) as i64))
        .collect();
    got.sort_unstable();
    want.sort_unstable();
    assert_eq!(got, want);
}

#[test]
fn schatten_norms_of_rotated_diagonals() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let d = [3.0, -1.5, 0.25, 0.1, 2.0];
    let u = CMatrix::gaussian(5, 5, &mut rng).orthonormalize_columns().unwrap();
    let v = CMatrix::gaussian(5, 5, &mut rng).orthonormalize_columns().unwrap();
    let diag = CMatrix::from_diag(&d);
    let t = &(&u * &diag) * &v.adjoint();
    for p in [0.5, 1.0, 1.5, 2.0, 4.0] {
        let exact = d.iter().map(|x: &f64| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
        assert!((schatten_norm(&t, p).unwrap() - exact).abs() < 1e-12 * exact);
    }
    assert!((schatten_norm(&t, f64::INFINITY).unwrap() - 3.0).abs() < 1e-12);
    let s = singular_values(&t);
    assert!(s.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn log_lipschitz_transform_closed_form() {
    let w = ModulusOfContinuity::LogLipschitz;
    for &d in &[1e-6_f64, 1e-3, 0.1, 0.5, 1.0] {
        let l = (1.0 / d).ln();
        let exact = d * (1.0 + l + 0.5 * l * l);
        assert!((modulus_star(&w, d).unwrap() / exact - 1.0).abs() < 1e-9, "delta {d}");
    }
    assert!((modulus_star(&w, 4.0).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn kontr_function_at_pi() {
    let v = KontrFunction.eval(&[std::f64::consts::PI, std::f64::consts::FRAC_PI_2, 0.0]).unwrap();
    assert!((v.re - 1.851937051982466).abs() < 1e-12);
}

#[test]
fn projection_recovers_a_sampled_trigonometric_sum() {
    let f = BandlimitedFunction::new(
        2,
        vec![
            Term { xi: vec![0.5, -0.25], c: C64::new(0.7, -0.2) },
            Term { xi: vec![-0.75, 0.0], c: C64::new(-0.1, 0.4) },
        ],
    )
    .unwrap();
    let p = 8.0 * std::f64::consts::PI;
    let grid = UniformGrid {
        origin: vec![-3.0, 1.0],
        period: vec![p, p],
        shape: vec![16, 16],
    };
    let samples = grid.sample(|x| f.eval_c(x));
    let g = bandlimit_project(&samples, &grid, 1.0).unwrap();
    for x in [[0.3, -2.0], [10.0, 4.0]] {
        assert!((g.eval_c(&x) - f.eval_c(&x)).norm() < 1e-12);
    }
}

#[test]
fn sampled_partition_in_two_dimensions() {
    let r = partition_check(&Window::cube(2, -20.0, 20.0), 4000, 16).unwrap();
    assert!(r.ok(), "{r:?}");
    assert!(r.distinct_cubes > 100);
}

#[test]
fn gamma2_of_rank_one_and_probe_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let u: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
    let v: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
    let m = CMatrix::from_fn(5, 4, |i, j| C64::new(u[i] * v[j], 0.0));
    let exact = u.iter().fold(0.0_f64, |a, b| a.max(b.abs())) * v.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    let c = gamma2_norm(&m, 1e-8).unwrap();
    assert!((c.value - exact).abs() < 1e-7);
    let g = CMatrix::gaussian(6, 6, &mut rng);
    let c = gamma2_norm(&g, 1e-6).unwrap();
    assert!(gamma2_lower_probe(&g, 32, 3).unwrap() <= c.upper * (1.0 + 1e-12));
    assert!(c.factorization_residual(&g) < 1e-10);
    assert!((c.factor_bound() - c.upper).abs() < 1e-9 * c.upper);
}

#[test]
fn exact_divided_difference_matches_generic_quotient() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let f = BandlimitedFunction::random(3, 4, 2.0, &mut rng);
    for _ in 0..50 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
        let y: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
        let mut sum = C64::new(0.0, 0.0);
        for j in 0..3 {
            let (zx, zy) = opfunc_core::calculus::merged_points(j, &x, &y);
            let q = (f.eval_c(&zx) - f.eval_c(&zy)) / (x[j] - y[j]);
            let dd = f.divided_difference(j, &x, &y).unwrap();
            assert!((dd - q).norm() < 1e-10 * (1.0 + q.norm()));
            sum += dd * (x[j] - y[j]);
        }
        assert!((sum - (f.eval_c(&x) - f.eval_c(&y))).norm() < 1e-11);
    }
}
