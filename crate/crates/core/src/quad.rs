//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// Integral of `f` over `[a, b]` to absolute tolerance `tol`, with
/// Richardson-corrected adaptive Simpson refinement.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let v = step(f, a, b, fa, fm, fb, whole, tol.max(f64::MIN_POSITIVE), MAX_DEPTH);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::FunctionEvaluation {
            point: vec![a, b],
            reason: "integrand is not finite".into(),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || (m - a).abs() <= f64::EPSILON * m.abs() {
        return left + right + delta / 15.0;
    }
    step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Sine integral `Si(x) = int_0^x sin(t)/t dt`.
pub fn sine_integral(x: f64) -> f64 {
    let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    // Split into unit panels so the tolerance stays absolute per panel.
    let panels = x.abs().ceil().max(1.0) as usize;
    let h = x / panels as f64;
    let tol = 1e-12 / panels as f64;
    (0..panels)
        .map(|k| {
            let a = k as f64 * h;
            adaptive_simpson(&sinc, a, a + h, tol).expect("sinc is finite")
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_exp() {
        let v = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(&f64::exp, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn si_against_series() {
        // Si(x) = sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
        let series = |x: f64| {
            let mut term = x;
            let mut sum = 0.0;
            for k in 0..40 {
                sum += term / (2 * k + 1) as f64;
                term *= -x * x / (((2 * k + 2) * (2 * k + 3)) as f64);
            }
            sum
        };
        for &x in &[0.0, 0.5, 1.0, std::f64::consts::PI, 5.0, -3.0] {
            assert!((sine_integral(x) - series(x)).abs() < 1e-11, "x={x}");
        }
        assert!((sine_integral(std::f64::consts::PI) - 1.851_937_051_982_466).abs() < 1e-11);
    }
}
