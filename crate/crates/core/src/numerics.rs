//! Quadrature, fixed-step ODE integration and central finite differences.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("adaptive Simpson did not converge within depth {depth} (error estimate {estimate:e})")]
    NonConvergence { depth: u32, estimate: f64 },
    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Maximum bisection depth of [`integrate_1d`].
pub const SIMPSON_MAX_DEPTH: u32 = 40;

/// Adaptive composite Simpson quadrature of `g` over `[a, b]` to absolute
/// tolerance `tol`. Reversed bounds give the negated integral.
pub fn integrate_1d(g: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, NumericsError> {
    try_integrate_1d(|t| Ok::<_, NumericsError>(g(t)), a, b, tol)
}

/// [`integrate_1d`] for integrands that can fail. The first integrand error
/// aborts the quadrature.
pub fn try_integrate_1d<E>(
    g: impl Fn(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, E>
where
    E: From<NumericsError>,
{
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!("tolerance must be positive, got {tol}")).into());
    }
    if a == b {
        return Ok(0.0);
    }
    let eval = |t: f64| -> Result<f64, E> {
        let v = g(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::NonFinite { t }.into())
        }
    };
    let (fa, fm, fb) = (eval(a)?, eval(0.5 * (a + b))?, eval(b)?);
    let whole = simpson(a, b, fa, fm, fb);
    let mut worst = 0.0_f64;
    let value = simpson_step(&eval, a, b, fa, fm, fb, whole, tol, SIMPSON_MAX_DEPTH, &mut worst)?;
    if worst > 0.0 {
        return Err(NumericsError::NonConvergence { depth: SIMPSON_MAX_DEPTH, estimate: worst }.into());
    }
    Ok(value)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<E>(
    eval: &impl Fn(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    worst: &mut f64,
) -> Result<f64, E> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (eval(lm)?, eval(rm)?);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        *worst = worst.max(delta.abs() / 15.0);
        return Ok(left + right + delta / 15.0);
    }
    let l = simpson_step(eval, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, worst)?;
    let r = simpson_step(eval, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, worst)?;
    Ok(l + r)
}

/// Samples of a scalar function on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath1D {
    params: Vec<f64>,
    values: Vec<f64>,
    step: f64,
}

impl SampledPath1D {
    pub fn new(params: Vec<f64>, values: Vec<f64>, step: f64) -> Result<Self, NumericsError> {
        if params.len() != values.len() {
            return Err(NumericsError::InvalidArgument("parameter and value lengths differ".into()));
        }
        if params.len() < 2 {
            return Err(NumericsError::InvalidArgument("at least two samples are required".into()));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NumericsError::InvalidArgument("parameters must be strictly increasing".into()));
        }
        Ok(SampledPath1D { params, values, step })
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn last(&self) -> (f64, f64) {
        (*self.params.last().unwrap(), *self.values.last().unwrap())
    }

    /// Index of the sample nearest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let k = ((t - self.params[0]) / self.step).round();
        (k.max(0.0) as usize).min(self.params.len() - 1)
    }
}

/// Classical fourth-order Runge–Kutta with `steps` equal steps from `t0` to
/// `t1` (`t1 > t0`).
pub fn solve_ode_1d(
    rhs: impl Fn(f64, f64) -> f64,
    t0: f64,
    y0: f64,
    t1: f64,
    steps: usize,
) -> Result<SampledPath1D, NumericsError> {
    try_solve_ode_1d(|t, y| Ok::<_, NumericsError>(rhs(t, y)), t0, y0, t1, steps)
}

/// [`solve_ode_1d`] for right-hand sides that can fail.
pub fn try_solve_ode_1d<E>(
    rhs: impl Fn(f64, f64) -> Result<f64, E>,
    t0: f64,
    y0: f64,
    t1: f64,
    steps: usize,
) -> Result<SampledPath1D, E>
where
    E: From<NumericsError>,
{
    if steps < 2 {
        return Err(NumericsError::InvalidArgument(format!("need at least 2 steps, got {steps}")).into());
    }
    if !(t1 > t0) {
        return Err(NumericsError::InvalidArgument(format!("empty interval [{t0}, {t1}]")).into());
    }
    let h = (t1 - t0) / steps as f64;
    let mut params = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let mut y = y0;
    params.push(t0);
    values.push(y0);
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = rhs(t, y)?;
        let k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)?;
        let k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)?;
        let k4 = rhs(t + h, y + h * k3)?;
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let t_next = if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h };
        if !y.is_finite() {
            return Err(NumericsError::NonFinite { t: t_next }.into());
        }
        params.push(t_next);
        values.push(y);
    }
    Ok(SampledPath1D::new(params, values, h)?)
}

/// Derivative order accepted by [`derivative_fd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    First,
    Second,
}

/// Step used by [`derivative_fd`] at `t`.
pub fn fd_step(t: f64, order: FdOrder) -> f64 {
    let root = match order {
        FdOrder::First => f64::EPSILON.cbrt(),
        FdOrder::Second => f64::EPSILON.powf(0.25),
    };
    root * (1.0 + t.abs())
}

/// Three-point central difference of the given order.
pub fn derivative_fd(g: impl Fn(f64) -> f64, t: f64, order: FdOrder) -> f64 {
    let h = fd_step(t, order);
    match order {
        FdOrder::First => (g(t + h) - g(t - h)) / (2.0 * h),
        FdOrder::Second => (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h),
    }
}

/// Five-point central first derivative of a vector-valued, fallible function.
pub fn central_5pt<const N: usize, E>(
    mut g: impl FnMut(f64) -> Result<[f64; N], E>,
    t: f64,
    h: f64,
) -> Result<[f64; N], E> {
    let m2 = g(t - 2.0 * h)?;
    let m1 = g(t - h)?;
    let p1 = g(t + h)?;
    let p2 = g(t + 2.0 * h)?;
    Ok(std::array::from_fn(|i| (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h)))
}

/// Five-point central second derivative of a fallible scalar function.
pub fn central_5pt_second<E>(mut g: impl FnMut(f64) -> Result<f64, E>, t: f64, h: f64) -> Result<f64, E> {
    let m2 = g(t - 2.0 * h)?;
    let m1 = g(t - h)?;
    let c = g(t)?;
    let p1 = g(t + h)?;
    let p2 = g(t + 2.0 * h)?;
    Ok((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn quadrature_examples() {
        assert_eq!(integrate_1d(|_| 2.0, 0.0, 1.0, 1e-12).unwrap(), 2.0);
        assert!((integrate_1d(|t| t, 0.0, 2.0, 1e-12).unwrap() - 2.0).abs() < 1e-15);
        assert!((integrate_1d(f64::sin, 0.0, PI, 1e-12).unwrap() - 2.0).abs() <= 1e-10);
        assert!((integrate_1d(f64::sin, PI, 0.0, 1e-12).unwrap() + 2.0).abs() <= 1e-10);
        assert_eq!(integrate_1d(f64::exp, 1.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn quadrature_reports_non_convergence() {
        // 1/sqrt(t) is integrable but its singularity defeats the depth limit at this tolerance
        let err = integrate_1d(|t| if t == 0.0 { 0.0 } else { 1.0 / t.abs().sqrt() }, 0.0, 1.0, 1e-15);
        assert!(matches!(err, Err(NumericsError::NonConvergence { depth: SIMPSON_MAX_DEPTH, .. })), "{err:?}");
        assert!(matches!(integrate_1d(|t| 1.0 / t, 0.0, 1.0, 1e-8), Err(NumericsError::NonFinite { .. })));
        assert!(integrate_1d(|t| t, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn rk4_examples() {
        let constant = solve_ode_1d(|_, _| 0.0, 0.0, 5.0, 1.0, 10).unwrap();
        assert!(constant.values().iter().all(|&v| v == 5.0));

        let growth = solve_ode_1d(|_, y| y, 0.0, 1.0, 1.0, 1000).unwrap();
        assert_eq!(growth.len(), 1001);
        assert!((growth.last().1 - E).abs() <= 1e-10);

        let log = solve_ode_1d(|t, _| 1.0 / (1.0 + t), 0.0, 0.0, 2.0, 2000).unwrap();
        assert_eq!(log.last().0, 2.0);
        assert!((log.last().1 - 3f64.ln()).abs() <= 1e-10);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let err = |n| (solve_ode_1d(|_, y| y, 0.0, 1.0, 1.0, n).unwrap().last().1 - E).abs();
        for n in [10, 20, 40] {
            assert!(err(n) / err(2 * n) >= 8.0, "n = {n}");
        }
    }

    #[test]
    fn rk4_errors() {
        let blowup = solve_ode_1d(|_, y| y * y, 0.0, 1.0, 2.0, 100);
        assert!(matches!(blowup, Err(NumericsError::NonFinite { .. })));
        assert!(solve_ode_1d(|_, y| y, 0.0, 1.0, 1.0, 1).is_err());
        assert!(solve_ode_1d(|_, y| y, 1.0, 1.0, 0.0, 10).is_err());
    }

    #[test]
    fn finite_difference_examples() {
        assert!((derivative_fd(|t| t * t, 3.0, FdOrder::First) - 6.0).abs() <= 1e-7);
        assert!(derivative_fd(|_| 4.2, 17.0, FdOrder::First).abs() <= 1e-9);
        assert!(derivative_fd(f64::sin, 0.0, FdOrder::Second).abs() <= 1e-5);
        let cubic = |t: f64| 2.0 * t * t * t - t * t + 3.0 * t - 1.0;
        for t in [-2.0, -0.3, 0.0, 1.7, 4.0] {
            let exact = 6.0 * t * t - 2.0 * t + 3.0;
            let approx = derivative_fd(cubic, t, FdOrder::First);
            assert!((approx - exact).abs() <= 1e-6 * exact.abs().max(1.0), "t = {t}");
        }
    }

    #[test]
    fn five_point_stencils() {
        let d = central_5pt(|t| Ok::<_, ()>([t.sin(), t.powi(4)]), 0.7, 1e-3).unwrap();
        assert!((d[0] - 0.7f64.cos()).abs() < 1e-12);
        assert!((d[1] - 4.0 * 0.7f64.powi(3)).abs() < 1e-11);
        let d2 = central_5pt_second(|t| Ok::<_, ()>(t.exp()), 0.3, 1e-3).unwrap();
        assert!((d2 - 0.3f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn sampled_path_validation() {
        assert!(SampledPath1D::new(vec![0.0], vec![1.0], 1.0).is_err());
        assert!(SampledPath1D::new(vec![0.0, 0.0], vec![1.0, 1.0], 1.0).is_err());
        assert!(SampledPath1D::new(vec![0.0, 1.0], vec![1.0], 1.0).is_err());
        let p = SampledPath1D::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0, 3.0], 0.5).unwrap();
        assert_eq!(p.nearest(0.74), 1);
        assert_eq!(p.nearest(9.0), 2);
        assert_eq!(p.nearest(-1.0), 0);
    }
}
