use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

type ModulusFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A modulus of continuity `omega: [0, inf) -> [0, inf)`.
#[derive(Clone)]
pub enum ModulusOfContinuity {
    /// `t^alpha`, `alpha in (0, 1)`.
    Power(f64),
    /// Piecewise-linear through `(0, 0)` and the given knots, extended past
    /// the last knot by the power law of the last two knots.
    Table { t: Vec<f64>, w: Vec<f64> },
    /// `t (1 + ln(1/t))` on `[0, 1]`, 1 afterwards.
    LogLipschitz,
    Custom { name: String, f: ModulusFn },
}

impl fmt::Debug for ModulusOfContinuity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(a) => write!(f, "Power({a})"),
            Self::Table { t, .. } => write!(f, "Table({} knots)", t.len()),
            Self::LogLipschitz => write!(f, "LogLipschitz"),
            Self::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl ModulusOfContinuity {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "power modulus needs alpha in (0, 1), got {alpha}"
            )));
        }
        Ok(Self::Power(alpha))
    }

    pub fn table(t: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if t.len() != w.len() || t.len() < 2 {
            return Err(Error::InvalidArgument(
                "table needs at least two knots with matching values".into(),
            ));
        }
        if t[0] <= 0.0 || t.windows(2).any(|p| p[1] <= p[0]) || w.iter().any(|v| *v <= 0.0) {
            return Err(Error::InvalidArgument(
                "table knots must be positive and increasing with positive values".into(),
            ));
        }
        Ok(Self::Table { t, w })
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    fn table_tail_exponent(t: &[f64], w: &[f64]) -> f64 {
        let k = t.len();
        (w[k - 1] / w[k - 2]).ln() / (t[k - 1] / t[k - 2]).ln()
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Power(a) => s.powf(*a),
            Self::LogLipschitz => {
                if s >= 1.0 {
                    1.0
                } else {
                    s * (1.0 - s.ln())
                }
            }
            Self::Custom { f, .. } => f(s),
            Self::Table { t, w } => {
                let k = t.len();
                if s >= t[k - 1] {
                    let beta = Self::table_tail_exponent(t, w);
                    return w[k - 1] * (s / t[k - 1]).powf(beta);
                }
                let (mut t0, mut w0) = (0.0, 0.0);
                for i in 0..k {
                    if s <= t[i] {
                        return w0 + (w[i] - w0) * (s - t0) / (t[i] - t0);
                    }
                    t0 = t[i];
                    w0 = w[i];
                }
                unreachable!("s < last knot")
            }
        }
    }

    /// Soft checks on a log mesh of `[1e-6, 1e6]`: `omega(0) = 0`,
    /// monotonicity, and subadditivity within 5%. Returns the failures.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.eval(0.0) != 0.0 {
            issues.push("omega(0) != 0".into());
        }
        let mesh: Vec<f64> = (0..=120).map(|k| 10f64.powf(-6.0 + k as f64 * 0.1)).collect();
        for p in mesh.windows(2) {
            if self.eval(p[1]) < self.eval(p[0]) {
                issues.push(format!("decreasing between {} and {}", p[0], p[1]));
                break;
            }
        }
        'outer: for &a in mesh.iter().step_by(6) {
            for &b in mesh.iter().step_by(6) {
                if self.eval(a + b) > 1.05 * (self.eval(a) + self.eval(b)) {
                    issues.push(format!("not subadditive at ({a}, {b})"));
                    break 'outer;
                }
            }
        }
        issues
    }
}

/// `int_a^b omega(t) / t^2 dt` in the variable `u = ln t`.
fn log_integral(w: &ModulusOfContinuity, a: f64, b: f64, tol: f64) -> Result<f64> {
    let g = |u: f64| {
        let t = u.exp();
        w.eval(t) / t
    };
    adaptive_simpson(&g, a.ln(), b.ln(), tol)
}

/// `omega_*(delta) = delta int_delta^inf omega(t) / t^2 dt`.
pub fn modulus_star(w: &ModulusOfContinuity, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let scale = (w.eval(delta) / delta).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let integral = match w {
        ModulusOfContinuity::Power(a) => {
            if *a >= 1.0 {
                return Err(divergent(w));
            }
            let top = delta * 1e4;
            let tail = top.powf(a - 1.0) / (1.0 - a);
            log_integral(w, delta, top, tol)? + tail
        }
        ModulusOfContinuity::Table { t, w: vals } => {
            let beta = ModulusOfContinuity::table_tail_exponent(t, vals);
            if beta >= 1.0 {
                return Err(divergent(w));
            }
            let last = *t.last().expect("validated");
            let start = delta.max(last);
            let tail = w.eval(start) / start / (1.0 - beta);
            let mut body = 0.0;
            if delta < last {
                let mut knots: Vec<f64> = t.iter().copied().filter(|&k| k > delta).collect();
                knots.insert(0, delta);
                for p in knots.windows(2) {
                    body += log_integral(w, p[0], p[1], tol)?;
                }
            }
            body + tail
        }
        _ => doubling_integral(w, delta, tol)?,
    };
    Ok(delta * integral)
}

fn divergent(w: &ModulusOfContinuity) -> Error {
    Error::Divergent(format!(
        "int omega(t)/t^2 dt diverges at infinity for {w:?}; omega_* needs omega(t)/t to be \
         integrable against dt/t"
    ))
}

/// Sums the integral over `[delta 2^k, delta 2^(k+1)]` until the pieces
/// become negligible; pieces that fail to decay signal divergence.
fn doubling_integral(w: &ModulusOfContinuity, delta: f64, tol: f64) -> Result<f64> {
    let mut total = 0.0;
    let mut a = delta;
    let mut last = f64::INFINITY;
    for _ in 0..200 {
        let b = 2.0 * a;
        let piece = log_integral(w, a, b, tol * 1e-2)?;
        total += piece;
        if piece <= 1e-15 * total {
            return Ok(total);
        }
        let ratio = piece / last;
        if ratio < 0.9 && piece / (1.0 - ratio) <= 1e-13 * total {
            return Ok(total + piece * ratio / (1.0 - ratio));
        }
        last = piece;
        a = b;
    }
    Err(divergent(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_closed_form() {
        let w = ModulusOfContinuity::power(0.5).unwrap();
        assert!((modulus_star(&w, 1.0).unwrap() - 2.0).abs() < 1e-9);
        assert!((modulus_star(&w, 4.0).unwrap() - 4.0).abs() < 1e-9);
        for &a in &[0.1, 0.3, 0.7, 0.9] {
            let w = ModulusOfContinuity::power(a).unwrap();
            for &d in &[1e-3_f64, 0.1, 1.0, 7.0] {
                let exact = d.powf(a) / (1.0 - a);
                assert!((modulus_star(&w, d).unwrap() - exact).abs() <= 1e-9 * exact);
            }
        }
    }

    #[test]
    fn lipschitz_diverges() {
        let w = ModulusOfContinuity::custom("t", |t| t);
        assert!(matches!(modulus_star(&w, 0.5), Err(Error::Divergent(_))));
        assert!(ModulusOfContinuity::power(1.0).is_err());
    }

    #[test]
    fn log_lipschitz_closed_form() {
        let w = ModulusOfContinuity::LogLipschitz;
        for &d in &[1e-3_f64, 0.1, 0.5] {
            let l = (1.0 / d).ln();
            let exact = d * (l + 0.5 * l * l + 1.0);
            assert!((modulus_star(&w, d).unwrap() - exact).abs() < 1e-9 * exact);
        }
        assert!((modulus_star(&w, 3.0).unwrap() - 1.0).abs() < 1e-9);
        assert!(w.validate().is_empty());
    }

    #[test]
    fn table_mimics_power() {
        let t: Vec<f64> = (0..=60).map(|k| 10f64.powf(-4.0 + k as f64 * 0.1)).collect();
        let w: Vec<f64> = t.iter().map(|s| s.powf(0.3)).collect();
        let m = ModulusOfContinuity::table(t, w).unwrap();
        for &d in &[1e-3_f64, 0.05, 1.0, 10.0] {
            let exact = d.powf(0.3) / 0.7;
            assert!((modulus_star(&m, d).unwrap() - exact).abs() < 0.01 * exact);
        }
    }

    #[test]
    fn rejects_bad_delta() {
        let w = ModulusOfContinuity::power(0.5).unwrap();
        assert!(modulus_star(&w, 0.0).is_err());
        assert!(modulus_star(&w, -1.0).is_err());
    }
}
