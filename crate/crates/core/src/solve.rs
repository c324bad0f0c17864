//! Scalar and vector solver helpers shared by the renormalization modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Bisection on a bracketing interval. `f(a)` and `f(b)` must differ in sign.
pub fn bisect(
    context: &'static str,
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::BracketFailure {
            context,
            a,
            b,
            fa,
            fb,
        });
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() < tol {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Expands a bracket around `x0` until `f` changes sign, then bisects.
pub fn bisect_expand(
    context: &'static str,
    f: impl Fn(f64) -> f64,
    x0: f64,
    step0: f64,
    tol: f64,
) -> Result<f64> {
    let f0 = f(x0);
    if f0 == 0.0 {
        return Ok(x0);
    }
    let mut step = step0;
    for _ in 0..60 {
        for &cand in &[x0 + step, x0 - step] {
            let fc = f(cand);
            if fc.is_finite() && fc.signum() != f0.signum() {
                let (a, b) = if cand < x0 { (cand, x0) } else { (x0, cand) };
                return bisect(context, f, a, b, tol);
            }
        }
        step *= 1.6;
    }
    Err(Error::BracketFailure {
        context,
        a: x0 - step,
        b: x0 + step,
        fa: f0,
        fb: f(x0 + step),
    })
}

/// Scalar fixed point x = g(x) by damped iteration.
pub fn damped_fixed_point(
    context: &'static str,
    g: impl Fn(f64) -> f64,
    mut x: f64,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let gx = g(x);
        if !gx.is_finite() {
            return Err(Error::NoConvergence {
                context,
                iterations: max_iter,
                residual,
            });
        }
        residual = (gx - x).abs();
        x = x + damping * (gx - x);
        if residual < tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        context,
        iterations: max_iter,
        residual,
    })
}

/// Outcome of a quasi-Newton solve, with the residual history kept for
/// reporting.
pub struct NewtonOutcome {
    pub solution: DVector<f64>,
    pub residual_history: Vec<f64>,
}

/// Quasi-Newton with a forward-difference Jacobian.
///
/// The Jacobian is assembled at the starting point (and re-assembled whenever
/// the residual stalls), then reused as a chord iteration. This keeps the
/// number of expensive residual evaluations proportional to the dimension
/// only a handful of times.
pub fn quasi_newton<F>(
    context: &'static str,
    residual_fn: F,
    x0: DVector<f64>,
    fd_step: f64,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonOutcome>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let mut x = x0;
    let mut r = residual_fn(&x)?;
    let mut history = vec![r.amax()];
    if r.amax() <= tol {
        return Ok(NewtonOutcome {
            solution: x,
            residual_history: history,
        });
    }

    let mut lu = factor_fd_jacobian(context, &residual_fn, &x, &r, fd_step)?;
    let mut last = r.amax();
    let mut since_refresh = 0usize;

    for iter in 0..max_iter {
        let delta = lu
            .solve(&r)
            .ok_or(Error::SingularJacobian { context, cond: f64::INFINITY })?;
        let mut step = 1.0;
        // Naive line search: halve until the residual stops blowing up.
        let mut accepted = false;
        for _ in 0..8 {
            let cand = &x - step * &delta;
            match residual_fn(&cand) {
                Ok(rc) if rc.amax().is_finite() && rc.amax() < last * 1.5 => {
                    x = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
                _ => step *= 0.5,
            }
        }
        if !accepted {
            return Err(Error::NoConvergence {
                context,
                iterations: iter,
                residual: last,
            });
        }
        let now = r.amax();
        history.push(now);
        if now <= tol {
            return Ok(NewtonOutcome {
                solution: x,
                residual_history: history,
            });
        }
        since_refresh += 1;
        // Chord stalls once the Jacobian is stale; refresh and keep going.
        if (now > 0.5 * last && since_refresh >= 2) || since_refresh >= 12 {
            lu = factor_fd_jacobian(context, &residual_fn, &x, &r, fd_step)?;
            since_refresh = 0;
        }
        last = now;
    }
    Err(Error::NoConvergence {
        context,
        iterations: max_iter,
        residual: last,
    })
}

/// Dense forward-difference Jacobian of `residual_fn` at `x`.
pub fn fd_jacobian<F>(
    residual_fn: F,
    x: &DVector<f64>,
    r0: &DVector<f64>,
    fd_step: f64,
) -> Result<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let n = x.len();
    let m = r0.len();
    let mut jac = DMatrix::zeros(m, n);
    for col in 0..n {
        let mut xp = x.clone();
        xp[col] += fd_step;
        let rp = residual_fn(&xp)?;
        for row in 0..m {
            jac[(row, col)] = (rp[row] - r0[row]) / fd_step;
        }
    }
    Ok(jac)
}

fn factor_fd_jacobian<F>(
    context: &'static str,
    residual_fn: &F,
    x: &DVector<f64>,
    r0: &DVector<f64>,
    fd_step: f64,
) -> Result<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    let jac = fd_jacobian(residual_fn, x, r0, fd_step)?;
    if jac.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularJacobian {
            context,
            cond: f64::INFINITY,
        });
    }
    Ok(jac.lu())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect("sqrt2", |x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bisect_reports_missing_bracket() {
        assert!(matches!(
            bisect("none", |x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::BracketFailure { .. })
        ));
    }

    #[test]
    fn quasi_newton_solves_quadratic_system() {
        let f = |v: &DVector<f64>| -> Result<DVector<f64>> {
            Ok(DVector::from_vec(vec![
                v[0] * v[0] + v[1] - 3.0,
                v[0] - v[1] * v[1] + 1.0,
            ]))
        };
        let out = quasi_newton("quad", f, DVector::from_vec(vec![1.0, 1.0]), 1e-7, 1e-12, 100).unwrap();
        let r = f(&out.solution).unwrap();
        assert!(r.amax() < 1e-11);
    }
}
