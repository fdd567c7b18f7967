use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::function::{merged_points, RnFunction};
use crate::error::{Error, Result};
use crate::C64;

/// One term `c * exp(i <xi, x>)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub xi: Vec<f64>,
    pub c: C64,
}

/// A finite trigonometric sum `f(x) = sum_k c_k exp(i <xi_k, x>)` on `R^n`;
/// its Fourier transform is supported in the ball of radius `sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandlimitedFunction {
    n: usize,
    terms: Vec<Term>,
    sigma: f64,
    name: String,
}

/// `(exp(i theta) - 1) / (i theta)` evaluated as `exp(i theta/2) sinc(theta/2)`.
pub fn phase_quotient(theta: f64) -> C64 {
    let h = 0.5 * theta;
    let sinc = if h.abs() < 1e-4 {
        1.0 - h * h / 6.0 + h.powi(4) / 120.0
    } else {
        h.sin() / h
    };
    C64::from_polar(sinc, h)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl BandlimitedFunction {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension n must be positive".into()));
        }
        for (k, t) in terms.iter().enumerate() {
            if t.xi.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "term {k} has frequency of length {}, expected {n}",
                    t.xi.len()
                )));
            }
            if !(t.xi.iter().all(|v| v.is_finite()) && t.c.re.is_finite() && t.c.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("term {k} is not finite")));
            }
        }
        let sigma = terms.iter().map(|t| norm2(&t.xi)).fold(0.0, f64::max);
        Ok(BandlimitedFunction {
            n,
            terms,
            sigma,
            name: "bandlimited".into(),
        })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("n checked by caller").named("zero")
    }

    /// Adds the term together with its mirror `(-xi, conj(c))`, which keeps
    /// the sum real valued.
    pub fn push_real_pair(terms: &mut Vec<Term>, xi: Vec<f64>, c: C64) {
        let minus: Vec<f64> = xi.iter().map(|v| -v).collect();
        terms.push(Term { xi, c });
        terms.push(Term { xi: minus, c: c.conj() });
    }

    /// Seeded real-valued random sum with `pairs` conjugate pairs; the first
    /// frequency has norm exactly `sigma`, the rest are uniform in the ball.
    pub fn random<R: Rng + ?Sized>(n: usize, pairs: usize, sigma: f64, rng: &mut R) -> Self {
        let mut terms = Vec::with_capacity(2 * pairs);
        for k in 0..pairs {
            let dir: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let len = norm2(&dir).max(1e-300);
            let radius = if k == 0 {
                sigma
            } else {
                sigma * rng.random::<f64>().powf(1.0 / n as f64)
            };
            let xi = dir.iter().map(|v| v / len * radius).collect();
            let c = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                / (2.0 * pairs as f64);
            Self::push_real_pair(&mut terms, xi, c);
        }
        Self::new(n, terms).expect("finite by construction").named("random")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `sum_k |c_k|`, an upper bound for the sup norm.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).sum()
    }

    pub fn eval_c(&self, x: &[f64]) -> C64 {
        self.terms
            .iter()
            .map(|t| t.c * C64::from_polar(1.0, dot(&t.xi, x)))
            .sum()
    }

    /// `f(s x)`.
    pub fn dilate(&self, s: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                xi: t.xi.iter().map(|v| v * s).collect(),
                c: t.c,
            })
            .collect();
        Self::new(self.n, terms)
            .expect("finite by construction")
            .named(format!("{}(s={s})", self.name))
    }

    pub fn scale(&self, a: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                xi: t.xi.clone(),
                c: t.c * a,
            })
            .collect();
        Self::new(self.n, terms)
            .expect("finite by construction")
            .named(self.name.clone())
    }

    /// Same frequencies, coefficients multiplied by `w(xi)`; zero terms dropped.
    pub fn reweight(&self, w: impl Fn(&[f64]) -> f64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let k = w(&t.xi);
                (k != 0.0).then(|| Term {
                    xi: t.xi.clone(),
                    c: t.c * k,
                })
            })
            .collect();
        Self::new(self.n, terms).expect("finite by construction")
    }

    /// Checks the mirror-pair structure: every `(xi, c)` has a partner
    /// `(-xi, conj c)` up to `tol * sum |c|` after merging equal frequencies.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        let scale = tol * self.coefficient_l1().max(f64::MIN_POSITIVE);
        self.terms.iter().all(|t| {
            let mine: C64 = self
                .terms
                .iter()
                .filter(|u| u.xi == t.xi)
                .map(|u| u.c)
                .sum();
            let mirror: C64 = self
                .terms
                .iter()
                .filter(|u| u.xi.iter().zip(&t.xi).all(|(a, b)| *a == -*b))
                .map(|u| u.c)
                .sum();
            (mine - mirror.conj()).norm() <= scale
        })
    }

    /// `c * exp(i <xi, z>) * i xi_j * (exp(i xi_j d) - 1)/(i xi_j d)` summed:
    /// the exact divided difference of the sum with `z` the point carrying
    /// `y_j` in slot `j` and `d = x_j - y_j`.
    fn divided_difference_exact(&self, j: usize, x: &[f64], y: &[f64]) -> C64 {
        let (_, zy) = merged_points(j, x, y);
        let d = x[j] - y[j];
        self.terms
            .iter()
            .map(|t| {
                let e = C64::from_polar(1.0, dot(&t.xi, &zy));
                t.c * e * C64::new(0.0, t.xi[j]) * phase_quotient(t.xi[j] * d)
            })
            .sum()
    }

    pub fn to_json(&self) -> BandlimitedJson {
        BandlimitedJson {
            n: self.n,
            sigma: self.sigma,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    xi: t.xi.clone(),
                    c: [t.c.re, t.c.im],
                })
                .collect(),
        }
    }

    pub fn from_json(j: &BandlimitedJson) -> Result<Self> {
        let f = Self::new(
            j.n,
            j.terms
                .iter()
                .map(|t| Term {
                    xi: t.xi.clone(),
                    c: C64::new(t.c[0], t.c[1]),
                })
                .collect(),
        )?;
        if (f.sigma - j.sigma).abs() > 1e-9 * (1.0 + j.sigma.abs()) {
            return Err(Error::InvalidArgument(format!(
                "declared sigma {} does not match the largest frequency norm {}",
                j.sigma, f.sigma
            )));
        }
        Ok(f)
    }
}

impl RnFunction for BandlimitedFunction {
    fn n(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64]) -> Result<C64> {
        Ok(self.eval_c(x))
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn partial(&self, j: usize, x: &[f64]) -> Result<C64> {
        Ok(self
            .terms
            .iter()
            .map(|t| t.c * C64::new(0.0, t.xi[j]) * C64::from_polar(1.0, dot(&t.xi, x)))
            .sum())
    }

    fn divided_difference(&self, j: usize, x: &[f64], y: &[f64]) -> Result<C64> {
        Ok(self.divided_difference_exact(j, x, y))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub xi: Vec<f64>,
    pub c: [f64; 2],
}

/// Serialised form `{n, sigma, terms: [{xi: [...], c: [re, im]}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BandlimitedJson {
    pub n: usize,
    pub sigma: f64,
    pub terms: Vec<TermJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phase_quotient_matches_direct() {
        for &t in &[1e-9, 1e-5, 1e-3, 0.5, 3.0, -7.0] {
            let direct = (C64::from_polar(1.0, t) - 1.0) / C64::new(0.0, t);
            assert!((phase_quotient(t) - direct).norm() < 1e-14 * (1.0 + 1.0 / t.abs()));
        }
        assert_eq!(phase_quotient(0.0), C64::new(1.0, 0.0));
    }

    #[test]
    fn random_is_real_with_exact_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = BandlimitedFunction::random(3, 10, 4.0, &mut rng);
        assert!((f.sigma() - 4.0).abs() < 1e-12);
        assert!(f.is_real_valued(1e-12));
        for k in 0..50 {
            let x = [k as f64 * 0.37, -(k as f64) * 0.11, 1.0];
            assert!(f.eval_c(&x).im.abs() <= 1e-12 * f.coefficient_l1());
        }
    }

    #[test]
    fn complex_term_is_not_real() {
        let f = BandlimitedFunction::new(
            1,
            vec![Term {
                xi: vec![1.0],
                c: C64::new(1.0, 0.0),
            }],
        )
        .unwrap();
        assert!(!f.is_real_valued(1e-12));
    }

    #[test]
    fn divided_difference_matches_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = BandlimitedFunction::random(2, 6, 3.0, &mut rng);
        let x = [0.4, -1.3];
        let y = [2.1, 0.9];
        for j in 0..2 {
            let (zx, zy) = merged_points(j, &x, &y);
            let direct = (f.eval_c(&zx) - f.eval_c(&zy)) / (x[j] - y[j]);
            let exact = f.divided_difference(j, &x, &y).unwrap();
            assert!((direct - exact).norm() < 1e-13);
        }
        let d = f.divided_difference(1, &x, &x).unwrap();
        assert!((d - f.partial(1, &x).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn json_roundtrip_and_sigma_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = BandlimitedFunction::random(2, 3, 2.0, &mut rng);
        let j = f.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back = BandlimitedFunction::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.terms(), f.terms());
        let mut bad = j.clone();
        bad.sigma = 5.0;
        assert!(BandlimitedFunction::from_json(&bad).is_err());
    }
}
