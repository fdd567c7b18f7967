use crate::error::{Error, Result};
use crate::smooth::{ln_smoothstep, smoothstep};

/// Even C-infinity cutoff: 0 on `[-1/2, 1/2]`, 1 outside `[-1, 1]`,
/// `omega(t) = smoothstep(2|t| - 1)` in between.
pub fn cutoff_omega(t: f64) -> f64 {
    smoothstep(2.0 * t.abs() - 1.0)
}

fn ln_omega(t: f64) -> f64 {
    ln_smoothstep(2.0 * t.abs() - 1.0)
}

/// `Phi(x, y) = sum_j omega((x_j - y_j) / l)`.
pub fn phi_total(x: &[f64], y: &[f64], l: f64) -> f64 {
    x.iter().zip(y).map(|(a, b)| cutoff_omega((a - b) / l)).sum()
}

/// `Xi_j(x, y) = Phi_j(x, y) / (Phi(x, y) (x_j - y_j))` with
/// `Phi_j = omega((x_j - y_j) / l)`; zero when `x_j = y_j`.
///
/// Meant for pairs in a maximal admissible cube of sidelength `l > 1`, where
/// `Phi >= 1`; `Phi < 1/2` is reported as a contract violation.
pub fn xi(x: &[f64], y: &[f64], l: f64, j: usize) -> Result<f64> {
    let total = phi_total(x, y, l);
    if total < 0.5 {
        return Err(Error::ContractViolation(format!(
            "Phi = {total} < 1/2 at x = {x:?}, y = {y:?}, l = {l}"
        )));
    }
    let d = x[j] - y[j];
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok(cutoff_omega(d / l) / (total * d))
}

/// The same kernel wherever `Phi > 0`, with the ratio `Phi_j / Phi` taken
/// in the log domain so it stays accurate where every `Phi_i` underflows.
/// This is the smooth extension used on dilated cubes.
pub fn xi_extended(x: &[f64], y: &[f64], l: f64, j: usize) -> Result<f64> {
    let logs: Vec<f64> = x.iter().zip(y).map(|(a, b)| ln_omega((a - b) / l)).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Err(Error::FunctionEvaluation {
            point: x.iter().chain(y).copied().collect(),
            reason: "Phi vanishes".into(),
        });
    }
    if logs[j] == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let denom: f64 = logs.iter().map(|v| (v - top).exp()).sum();
    Ok((logs[j] - top).exp() / denom / (x[j] - y[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_values() {
        assert_eq!(cutoff_omega(0.4), 0.0);
        assert_eq!(cutoff_omega(-0.5), 0.0);
        assert_eq!(cutoff_omega(2.0), 1.0);
        assert_eq!(cutoff_omega(-1.0), 1.0);
        assert_eq!(cutoff_omega(0.75), 0.5);
        assert_eq!(cutoff_omega(0.6), cutoff_omega(-0.6));
        let mut prev = 0.0;
        for k in 0..=50 {
            let v = cutoff_omega(0.5 + k as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn xi_examples() {
        let l = 4.0;
        assert_eq!(xi(&[8.0, 1.0], &[0.0, 1.0], l, 0).unwrap(), 1.0 / 8.0);
        assert_eq!(xi(&[8.0, 1.0], &[0.0, 1.0], l, 1).unwrap(), 0.0);
        assert!(xi(&[0.1], &[0.0], l, 0).is_err());
    }

    #[test]
    fn extended_matches_direct() {
        let x = [3.1, 0.2, -1.0];
        let y = [0.0, 2.9, -1.5];
        for j in 0..3 {
            let a = xi(&x, &y, 4.0, j).unwrap();
            let b = xi_extended(&x, &y, 4.0, j).unwrap();
            assert!((a - b).abs() < 1e-15, "{a} {b}");
        }
        // Deep in the underflow region the ratio is still finite.
        let v = xi_extended(&[2.0004], &[0.0], 4.0, 0).unwrap();
        assert!((v - 1.0 / 2.0004).abs() < 1e-15);
        assert!(xi_extended(&[1.0], &[0.0], 4.0, 0).is_err());
    }
}
