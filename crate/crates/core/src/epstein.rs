//! The factorized-inverse operator: the scaling triple (e, b, lambda), the
//! square-root composition V, the operator on the diffeomorphic part u, and
//! the reconstruction of the one-dimensional solution from its fixed point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::claim::ClaimGeometry;
use crate::error::{Error, Result};
use crate::series::UnivariateSeries;
use crate::solve::bisect;

/// Small perturbation slot: an explicit series plus the sup bounds used by
/// the envelope arithmetic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TauPerturbation {
    pub series: UnivariateSeries,
    pub delta: f64,
    pub kappa: f64,
}

impl TauPerturbation {
    pub fn zero() -> Self {
        Self {
            series: UnivariateSeries::constant(0.0, 0.0, 0),
            delta: 0.0,
            kappa: 0.0,
        }
    }

    pub fn linear(slope: f64) -> Self {
        let mut series = UnivariateSeries::constant(0.0, 0.0, 1);
        series.coeffs[1] = slope;
        // sup bounds over the real diameter of the target set
        let r = 3.2;
        Self {
            series,
            delta: slope.abs() * r,
            kappa: slope.abs(),
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.series.eval(y)
    }

    pub fn deriv(&self, y: f64) -> f64 {
        self.series.derivative().eval(y)
    }

    pub fn is_zero(&self) -> bool {
        self.series.coeff_norm() == 0.0
    }
}

/// The solution (e, b, lambda) of the normalization system together with the
/// derived affine-frame constants.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScalingTriple {
    pub e: f64,
    pub b: f64,
    pub lambda: f64,
}

impl ScalingTriple {
    pub fn beta(&self) -> f64 {
        (self.b - self.lambda / 2.0).sqrt()
    }

    pub fn gamma(&self) -> f64 {
        (self.b - 1.0).sqrt()
    }

    pub fn alpha(&self) -> f64 {
        1.0 / (2.0 * self.beta() - 2.0 * self.gamma())
    }

    /// T_{b,lambda}(x) = -alpha (x + beta).
    pub fn t_map(&self, x: f64) -> f64 {
        -self.alpha() * (x + self.beta())
    }

    pub fn t_map_c(&self, x: Complex64) -> Complex64 {
        -self.alpha() * (x + self.beta())
    }

    pub fn t_inv(&self, z: f64) -> f64 {
        -z / self.alpha() - self.beta()
    }

    pub fn t_inv_c(&self, z: Complex64) -> Complex64 {
        -z / self.alpha() - self.beta()
    }

    fn check_box(&self) -> Result<()> {
        if !(self.b > 1.0) {
            return Err(Error::EscapedBox {
                which: "b > 1",
                value: self.b,
            });
        }
        let (beta, gamma) = (self.beta(), self.gamma());
        if !(beta > gamma) {
            return Err(Error::EscapedBox {
                which: "beta > gamma",
                value: beta - gamma,
            });
        }
        if !(-beta <= self.e && self.e <= -gamma) {
            return Err(Error::EscapedBox {
                which: "e in [-beta, -gamma]",
                value: self.e,
            });
        }
        Ok(())
    }
}

/// Polynomial representation of the diffeomorphic factor on the domain
/// interval, in the Chebyshev basis, with its derivative pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UFunction {
    pub lo: f64,
    pub hi: f64,
    pub cheb: Vec<f64>,
    pub t: f64,
    pub s: f64,
}

impl UFunction {
    fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.lo - self.hi) / (self.hi - self.lo)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let xi = self.to_unit(x);
        clenshaw(&self.cheb, xi)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        let xi = (2.0 * z - Complex64::new(self.lo + self.hi, 0.0)) / (self.hi - self.lo);
        clenshaw_c(&self.cheb, xi)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let xi = self.to_unit(x);
        clenshaw(&self.deriv_cheb(), xi) * 2.0 / (self.hi - self.lo)
    }

    /// Chebyshev coefficients of the derivative on the unit interval.
    fn deriv_cheb(&self) -> Vec<f64> {
        let n = self.cheb.len();
        if n <= 1 {
            return vec![0.0];
        }
        let mut d = vec![0.0; n];
        // backward recurrence d_k = d_{k+2} + 2(k+1) c_{k+1}
        for k in (0..n - 1).rev() {
            let up = if k + 2 < n { d[k + 2] } else { 0.0 };
            d[k] = up + 2.0 * (k as f64 + 1.0) * self.cheb[k + 1];
        }
        d[0] /= 2.0;
        d.truncate(n - 1);
        d
    }

    /// Monotone inverse on the real interval by bisection.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        bisect(
            "u inverse",
            |x| self.eval(x) - y,
            self.lo + 1e-12,
            self.hi - 1e-12,
            1e-13,
        )
    }

    /// Interpolate values on Chebyshev nodes of the interval.
    pub fn fit(
        lo: f64,
        hi: f64,
        degree: usize,
        f: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        let n = degree + 1;
        let mut values = Vec::with_capacity(n);
        for j in 0..n {
            let xi = (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos();
            let x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * xi;
            values.push(f(x)?);
        }
        let mut cheb = vec![0.0; n];
        for (k, c) in cheb.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, v) in values.iter().enumerate() {
                let ang = std::f64::consts::PI * (j as f64 + 0.5) * k as f64 / n as f64;
                acc += v * ang.cos();
            }
            *c = 2.0 * acc / n as f64;
        }
        cheb[0] /= 2.0;
        let mut u = Self {
            lo,
            hi,
            cheb,
            t: 0.0,
            s: 0.0,
        };
        u.t = u.deriv(-0.5);
        u.s = u.deriv(0.0);
        Ok(u)
    }
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let tmp = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = tmp;
    }
    x * b1 - b2 + c[0]
}

fn clenshaw_c(c: &[f64], x: Complex64) -> Complex64 {
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let tmp = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = tmp;
    }
    x * b1 - b2 + c[0]
}

/// Options of the triple solve; the positive-root variant of the critical
/// value equation is kept behind a switch (the negative root is the one the
/// verified numerics used).
#[derive(Debug, Clone, Copy)]
pub struct TripleOptions {
    pub positive_sqrt_in_b: bool,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TripleOptions {
    fn default() -> Self {
        Self {
            positive_sqrt_in_b: false,
            damping: 0.6,
            tol: 1e-12,
            max_iter: 400,
        }
    }
}

/// Damped fixed-point iteration of the triple map.
pub fn solve_scaling_triple(
    u: &UFunction,
    tau: &TauPerturbation,
    start: ScalingTriple,
    opts: TripleOptions,
) -> Result<ScalingTriple> {
    let mut cur = start;
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let beta = (cur.b - cur.lambda / 2.0).sqrt();
        let gamma = (cur.b - 1.0).sqrt();
        if !beta.is_finite() || !gamma.is_finite() {
            return Err(Error::EscapedBox {
                which: "square-root domain",
                value: cur.b,
            });
        }
        let alpha = 1.0 / (2.0 * beta - 2.0 * gamma);
        let t_map = |x: f64| -alpha * (x + beta);

        let ue = u.eval(t_map(cur.e));
        let due = u.deriv(t_map(cur.e));
        let e_next = -(alpha / 2.0) * (1.0 - tau.deriv(ue)) * due;

        // w at the normalization point x = -beta carries the tau(1) term
        let inner = cur.b - cur.lambda / 2.0 - cur.lambda * cur.lambda / 4.0
            - (cur.lambda / 2.0) * tau.eval(1.0);
        if inner < 0.0 {
            return Err(Error::EscapedBox {
                which: "lambda equation radicand",
                value: inner,
            });
        }
        let mid = u.eval(t_map(-inner.sqrt()));
        let rad = cur.b - mid;
        if rad < 0.0 {
            return Err(Error::EscapedBox {
                which: "lambda equation outer radicand",
                value: rad,
            });
        }
        let lambda_next = u.eval(t_map(rad.sqrt()));

        let we = cur.b
            - (cur.lambda / 2.0) * (cur.b - cur.e * cur.e + ue + tau.eval(ue));
        if we < 0.0 {
            return Err(Error::EscapedBox {
                which: "critical-value radicand",
                value: we,
            });
        }
        let root = if opts.positive_sqrt_in_b {
            we.sqrt()
        } else {
            -we.sqrt()
        };
        let b_next = u.eval(t_map(root));

        residual = (e_next - cur.e)
            .abs()
            .max((lambda_next - cur.lambda).abs())
            .max((b_next - cur.b).abs());
        cur = ScalingTriple {
            e: cur.e + opts.damping * (e_next - cur.e),
            lambda: cur.lambda + opts.damping * (lambda_next - cur.lambda),
            b: cur.b + opts.damping * (b_next - cur.b),
        };
        if residual < opts.tol {
            cur.check_box()?;
            return Ok(cur);
        }
    }
    Err(Error::NoConvergence {
        context: "scaling triple",
        iterations: opts.max_iter,
        residual,
    })
}

/// w(x) = b - (lambda/2)(b - x^2 + u(T x) + tau(u(T x))), the inner quadratic
/// of the square-root composition, in the untransformed coordinate.
pub fn w_at(u: &UFunction, tau: &TauPerturbation, triple: &ScalingTriple, x: f64) -> f64 {
    let utx = u.eval(triple.t_map(x));
    triple.b
        - (triple.lambda / 2.0) * (triple.b - x * x + utx + tau.eval(utx))
}

/// Real-slice evaluation of V with the sign switch at e.
pub fn eval_v(
    u: &UFunction,
    tau: &TauPerturbation,
    triple: &ScalingTriple,
    x: f64,
) -> Result<f64> {
    let w = w_at(u, tau, triple, x);
    if w < 0.0 {
        return Err(Error::BranchViolation {
            context: "eval_v inner radicand",
            arg: w,
        });
    }
    let inner = u.eval(triple.t_map(-w.sqrt()));
    let rad = triple.b - inner;
    // the outer radicand has a genuine simple zero at x = e; absorb roundoff
    if rad < -1e-9 {
        return Err(Error::BranchViolation {
            context: "eval_v outer radicand",
            arg: rad,
        });
    }
    Ok((triple.e - x).signum() * rad.max(0.0).sqrt())
}

/// Continuity-tracked complex evaluation of V along a sampled path starting
/// from a real anchor. Returns the values along the path.
pub fn eval_v_path(
    u: &UFunction,
    tau: &TauPerturbation,
    triple: &ScalingTriple,
    path: &[Complex64],
) -> Result<Vec<Complex64>> {
    assert!(!path.is_empty());
    let anchor = path[0];
    if anchor.im.abs() > 1e-12 {
        return Err(Error::BranchViolation {
            context: "eval_v_path anchor must be real",
            arg: anchor.im,
        });
    }
    let mut out = Vec::with_capacity(path.len());
    // anchored branches
    let mut w_prev = {
        let w = w_at(u, tau, triple, anchor.re);
        Complex64::new(w.sqrt(), 0.0)
    };
    let mut v_prev = {
        let v = eval_v(u, tau, triple, anchor.re)?;
        Complex64::new(v, 0.0)
    };
    out.push(v_prev);
    for (k, &z) in path.iter().enumerate().skip(1) {
        let utz = u.eval_c(triple.t_map_c(z));
        let w = triple.b
            - (triple.lambda / 2.0)
                * (Complex64::new(triple.b, 0.0) - z * z
                    + utz
                    + tau.series.eval_complex(utz));
        let mut root = w.sqrt();
        if (root - w_prev).norm() > (root + w_prev).norm() {
            root = -root;
        }
        // continuity guard: a genuine jump between adjacent samples means the
        // path resolution missed a cut crossing
        if (root - w_prev).norm() > 0.5 * (w_prev.norm() + 1.0) {
            return Err(Error::BranchTrackingFailure {
                index: k - 1,
                jump: (root - w_prev).norm(),
            });
        }
        w_prev = root;
        let inner = u.eval_c(triple.t_map_c(-root));
        let rad = Complex64::new(triple.b, 0.0) - inner;
        let mut v = rad.sqrt();
        if (v - v_prev).norm() > (v + v_prev).norm() {
            v = -v;
        }
        if (v - v_prev).norm() > 0.5 * (v_prev.norm() + 1.0) {
            return Err(Error::BranchTrackingFailure {
                index: k - 1,
                jump: (v - v_prev).norm(),
            });
        }
        v_prev = v;
        out.push(v);
    }
    Ok(out)
}

/// Outcome of one application of the operator.
#[derive(Debug, Clone)]
pub struct TApplication {
    pub u_next: UFunction,
    pub triple: ScalingTriple,
    pub normalization_drift: f64,
}

/// Apply the operator: solve the triple, push u through the square-root
/// composition, refit on the domain interval and recheck the normalization.
pub fn apply_t(
    u: &UFunction,
    tau: &TauPerturbation,
    start: ScalingTriple,
    opts: TripleOptions,
    fit_degree: usize,
) -> Result<TApplication> {
    let triple = solve_scaling_triple(u, tau, start, opts)?;
    let map = |x: f64| -> Result<f64> {
        let z = triple.t_inv(x);
        let v = eval_v(u, tau, &triple, z)?;
        Ok(u.eval(triple.t_map(v)) / triple.lambda)
    };
    // normalization drift of the map itself, before interpolation error
    let drift = map(-0.5)?.abs().max((map(0.0)? - 1.0).abs());
    if drift > 1e-8 {
        return Err(Error::NormalizationDrift {
            drift,
            limit: 1e-8,
        });
    }
    let u_next = UFunction::fit(u.lo, u.hi, fit_degree, map)?;
    Ok(TApplication {
        u_next,
        triple,
        normalization_drift: drift,
    })
}

/// Record of the operator fixed point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TFixedPoint {
    pub u: UFunction,
    pub triple: ScalingTriple,
    pub residual: f64,
    pub iterations: usize,
}

/// Seed from the affine member of the pulled-back class.
pub fn affine_seed(geom: &ClaimGeometry, fit_degree: usize) -> Result<UFunction> {
    let g0 = geom.c4 / geom.c2;
    UFunction::fit(
        geom.constants.i1.0,
        geom.constants.i1.1,
        fit_degree,
        |x: f64| -> Result<f64> {
            let xi = geom.phi1_real(x);
            Ok(geom.theta2_real((g0 * xi).clamp(-1.0 + 1e-13, 1.0 - 1e-13)))
        },
    )
}

/// Iterate the operator to its fixed point with adaptive damping.
pub fn t_fixed_point(
    seed: &UFunction,
    tau: &TauPerturbation,
    fit_degree: usize,
    tol: f64,
    max_iter: usize,
) -> Result<TFixedPoint> {
    let mut u = seed.clone();
    let mut triple = ScalingTriple {
        e: -0.52,
        b: 1.0106,
        lambda: -0.2501,
    };
    let mut best_res = f64::INFINITY;
    for iter in 0..max_iter {
        let app = apply_t(&u, tau, triple, TripleOptions::default(), fit_degree)?;
        triple = app.triple;
        // sup-norm of the update on a dense grid
        let mut res: f64 = 0.0;
        for k in 0..200 {
            let x = u.lo + (u.hi - u.lo) * (k as f64 + 0.5) / 200.0;
            res = res.max((app.u_next.eval(x) - u.eval(x)).abs());
        }
        u = app.u_next;
        if res < tol {
            return Ok(TFixedPoint {
                u,
                triple,
                residual: res,
                iterations: iter + 1,
            });
        }
        best_res = best_res.min(res);
    }
    Err(Error::NoConvergence {
        context: "operator fixed point",
        iterations: max_iter,
        residual: best_res,
    })
}

/// Inverse branches of the reconstructed one-dimensional solution:
/// eta(z) = u(T(-sqrt(b - z))) and zeta(z) = u(T(+sqrt(b - z))).
pub fn inverse_branch_eta(u: &UFunction, triple: &ScalingTriple, z: f64) -> Result<f64> {
    let rad = triple.b - z;
    if rad < 0.0 {
        return Err(Error::BranchViolation {
            context: "eta radicand",
            arg: rad,
        });
    }
    Ok(u.eval(triple.t_map(-rad.sqrt())))
}

pub fn inverse_branch_zeta(u: &UFunction, triple: &ScalingTriple, z: f64) -> Result<f64> {
    let rad = triple.b - z;
    if rad < 0.0 {
        return Err(Error::BranchViolation {
            context: "zeta radicand",
            arg: rad,
        });
    }
    Ok(u.eval(triple.t_map(rad.sqrt())))
}

/// phi on the decreasing branch, reconstructed from u by inverting eta:
/// phi(y) = b - (T^{-1}(u^{-1}(y)))^2.
pub fn phi_from_u(u: &UFunction, triple: &ScalingTriple, y: f64) -> Result<f64> {
    let q = u.inverse(y)?;
    let x = triple.t_inv(q);
    Ok(triple.b - x * x)
}

/// Critical point and value carried by the factorization: c = u(T(0)),
/// b = phi(c).
pub fn critical_point_from_u(u: &UFunction, triple: &ScalingTriple) -> f64 {
    u.eval(triple.t_map(0.0))
}
