use std::fmt;

use crate::error::{Error, Result};
use crate::C64;

/// Relative gap below which divided differences switch to the derivative.
pub const DIAG_TOL: f64 = 1e-7;

/// A function on `R^n`, possibly complex valued.
pub trait RnFunction {
    fn n(&self) -> usize;

    fn eval(&self, x: &[f64]) -> Result<C64>;

    fn name(&self) -> String {
        "anonymous".into()
    }

    /// `D_j f(x)`. The default is a Richardson-extrapolated central difference.
    fn partial(&self, j: usize, x: &[f64]) -> Result<C64> {
        let h = 1e-3 * (1.0 + x[j].abs());
        let central = |h: f64| -> Result<C64> {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            Ok((self.eval(&xp)? - self.eval(&xm)?) / (2.0 * h))
        };
        let coarse = central(h)?;
        let fine = central(0.5 * h)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    /// `delta_j f(x, y)`: coordinates before `j` come from `y` in both
    /// terms, coordinates after `j` from `x`, and the quotient is taken in
    /// coordinate `j`. Near the diagonal the partial derivative at the
    /// midpoint is returned instead.
    fn divided_difference(&self, j: usize, x: &[f64], y: &[f64]) -> Result<C64> {
        let (mut zx, mut zy) = merged_points(j, x, y);
        let d = x[j] - y[j];
        if d.abs() < DIAG_TOL * (1.0 + x[j].abs() + y[j].abs()) {
            zx[j] = 0.5 * (x[j] + y[j]);
            return self.partial(j, &zx);
        }
        zy[j] = y[j];
        Ok((self.eval(&zx)? - self.eval(&zy)?) / d)
    }
}

/// The two points `(y_1..y_{j-1}, x_j, x_{j+1}..x_n)` and
/// `(y_1..y_{j-1}, y_j, x_{j+1}..x_n)`.
pub fn merged_points(j: usize, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut zx = x.to_vec();
    zx[..j].copy_from_slice(&y[..j]);
    let mut zy = zx.clone();
    zy[j] = y[j];
    (zx, zy)
}

type RealClosure = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type PartialClosure = Box<dyn Fn(usize, &[f64]) -> f64 + Send + Sync>;

/// A real function given by a closure, with an optional analytic gradient.
pub struct FnHandle {
    name: String,
    n: usize,
    f: RealClosure,
    partial: Option<PartialClosure>,
}

impl FnHandle {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FnHandle {
            name: name.into(),
            n,
            f: Box::new(f),
            partial: None,
        }
    }

    pub fn with_partial(
        mut self,
        partial: impl Fn(usize, &[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.partial = Some(Box::new(partial));
        self
    }
}

impl fmt::Debug for FnHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnHandle({}, n={})", self.name, self.n)
    }
}

impl RnFunction for FnHandle {
    fn n(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64]) -> Result<C64> {
        let v = (self.f)(x);
        if !v.is_finite() {
            return Err(Error::FunctionEvaluation {
                point: x.to_vec(),
                reason: format!("{} returned {v}", self.name),
            });
        }
        Ok(C64::new(v, 0.0))
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn partial(&self, j: usize, x: &[f64]) -> Result<C64> {
        match &self.partial {
            Some(p) => Ok(C64::new(p(j, x), 0.0)),
            None => {
                let h = 1e-3 * (1.0 + x[j].abs());
                let central = |h: f64| {
                    let mut xp = x.to_vec();
                    let mut xm = x.to_vec();
                    xp[j] += h;
                    xm[j] -= h;
                    ((self.f)(&xp) - (self.f)(&xm)) / (2.0 * h)
                };
                Ok(C64::new((4.0 * central(0.5 * h) - central(h)) / 3.0, 0.0))
            }
        }
    }
}

type KernelClosure<'a> = Box<dyn Fn(&[f64], &[f64]) -> Result<C64> + 'a>;

/// A named function on `R^n x R^n`, the symbol of a double operator integral.
pub struct GridFunction<'a> {
    name: String,
    n: usize,
    f: KernelClosure<'a>,
}

impl<'a> GridFunction<'a> {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        f: impl Fn(&[f64], &[f64]) -> Result<C64> + 'a,
    ) -> Self {
        GridFunction {
            name: name.into(),
            n,
            f: Box::new(f),
        }
    }

    /// A symbol that ignores errors: `f` returns a plain value.
    pub fn total(name: impl Into<String>, n: usize, f: impl Fn(&[f64], &[f64]) -> C64 + 'a) -> Self {
        Self::new(name, n, move |x, y| Ok(f(x, y)))
    }

    /// `delta_j f` as a symbol.
    pub fn divided_difference(f: &'a dyn RnFunction, j: usize) -> Self {
        Self::new(format!("delta_{}({})", j + 1, f.name()), f.n(), move |x, y| {
            f.divided_difference(j, x, y)
        })
    }

    pub fn constant(n: usize, c: C64) -> Self {
        Self::total(format!("const {c}"), n, move |_, _| c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<C64> {
        let v = (self.f)(x, y)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::FunctionEvaluation {
                point: x.iter().chain(y).copied().collect(),
                reason: format!("{} returned {v}", self.name),
            });
        }
        Ok(v)
    }
}

impl fmt::Debug for GridFunction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridFunction({}, n={})", self.name, self.n)
    }
}
