//! Named test functions.

use crate::calculus::{BandlimitedFunction, FnHandle, RnFunction};
use crate::error::{Error, Result};
use crate::quad::sine_integral;
use crate::C64;

/// Parameters shared by the presets; unused fields are ignored.
#[derive(Clone, Debug)]
pub struct PresetParams {
    pub n: usize,
    /// Coordinate index (0-based) for `sin-xj`.
    pub j: usize,
    /// Number of quadrature nodes or lacunary terms.
    pub k: usize,
    pub alpha: f64,
    /// Bandwidth of `random`.
    pub sigma: f64,
    pub seed: u64,
}

impl Default for PresetParams {
    fn default() -> Self {
        PresetParams {
            n: 1,
            j: 0,
            k: 8,
            alpha: 0.5,
            sigma: 1.0,
            seed: 0,
        }
    }
}

pub const PRESETS: &[(&str, &str)] = &[
    ("sin-xj", "sin(x_j) on R^n"),
    ("sinc-si", "band-limited sine integral: sum_k h sin(xi_k x)/xi_k, xi_k = (k - 1/2) h, h = 1/K"),
    ("kontr-f", "g_K(x1 - x3) sin(x2) on R^3 with g_K the band-limited sine integral"),
    ("lacunary", "sum_{k=0..K} 2^(-k alpha) cos(2^k x1) on R^n"),
    ("random", "seeded real trigonometric sum with K conjugate pairs and bandwidth sigma"),
];

fn sine_integral_terms(k: usize) -> Vec<(f64, f64)> {
    let h = 1.0 / k as f64;
    (1..=k)
        .map(|i| {
            let xi = (i as f64 - 0.5) * h;
            (xi, h / xi)
        })
        .collect()
}

pub fn preset(name: &str, p: &PresetParams) -> Result<BandlimitedFunction> {
    if p.n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let half_i = C64::new(0.0, -0.5);
    let f = match name {
        "sin-xj" => {
            if p.j >= p.n {
                return Err(Error::InvalidArgument(format!("coordinate {} out of range for n={}", p.j, p.n)));
            }
            let mut xi = vec![0.0; p.n];
            xi[p.j] = 1.0;
            let mut terms = Vec::new();
            BandlimitedFunction::push_real_pair(&mut terms, xi, half_i);
            BandlimitedFunction::new(p.n, terms)?
        }
        "sinc-si" => {
            let mut terms = Vec::new();
            for (xi, w) in sine_integral_terms(p.k.max(1)) {
                let mut v = vec![0.0; p.n];
                v[0] = xi;
                BandlimitedFunction::push_real_pair(&mut terms, v, half_i * w);
            }
            BandlimitedFunction::new(p.n, terms)?
        }
        "kontr-f" => {
            // sin(a) sin(b) = -(1/4)(e^{i(a+b)} - e^{i(a-b)} - e^{-i(a-b)} + e^{-i(a+b)})
            let mut terms = Vec::new();
            for (xi, w) in sine_integral_terms(p.k.max(1)) {
                let q = C64::new(0.25 * w, 0.0);
                BandlimitedFunction::push_real_pair(&mut terms, vec![xi, 1.0, -xi], -q);
                BandlimitedFunction::push_real_pair(&mut terms, vec![xi, -1.0, -xi], q);
            }
            BandlimitedFunction::new(3, terms)?
        }
        "lacunary" => {
            let mut terms = Vec::new();
            for i in 0..=p.k {
                let mut v = vec![0.0; p.n];
                v[0] = 2f64.powi(i as i32);
                let c = C64::new(0.5 * 2f64.powf(-(i as f64) * p.alpha), 0.0);
                BandlimitedFunction::push_real_pair(&mut terms, v, c);
            }
            BandlimitedFunction::new(p.n, terms)?
        }
        "random" => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(p.seed);
            BandlimitedFunction::random(p.n, p.k.max(1), p.sigma, &mut rng)
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    Ok(f.named(name))
}

/// `sqrt(|x - a|^2 + s^2)^alpha - s^alpha`: the cone `|x - a|^alpha` for
/// `s = 0`, smoothed at the tip otherwise.
pub fn cone(a: Vec<f64>, alpha: f64, smoothing: f64) -> FnHandle {
    let n = a.len();
    let base = smoothing.powf(alpha);
    FnHandle::new(format!("cone(alpha={alpha})"), n, move |x| {
        let r2: f64 = x.iter().zip(&a).map(|(u, v)| (u - v).powi(2)).sum::<f64>() + smoothing * smoothing;
        r2.powf(0.5 * alpha) - base
    })
}

/// `g(x1 - x3) sin(x2)` with `g = Si` the sine integral, with analytic
/// partial derivatives.
#[derive(Clone, Copy, Debug, Default)]
pub struct KontrFunction;

fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sin() / u
    }
}

impl RnFunction for KontrFunction {
    fn n(&self) -> usize {
        3
    }

    fn eval(&self, x: &[f64]) -> Result<C64> {
        Ok(C64::new(sine_integral(x[0] - x[2]) * x[1].sin(), 0.0))
    }

    fn name(&self) -> String {
        "kontr".into()
    }

    fn partial(&self, j: usize, x: &[f64]) -> Result<C64> {
        let u = x[0] - x[2];
        let v = match j {
            0 => sinc(u) * x[1].sin(),
            1 => sine_integral(u) * x[1].cos(),
            2 => -sinc(u) * x[1].sin(),
            _ => {
                return Err(Error::InvalidArgument(format!("coordinate {j} out of range for n=3")))
            }
        };
        Ok(C64::new(v, 0.0))
    }
}
