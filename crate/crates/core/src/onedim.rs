//! The one-dimensional renormalization operator
//! K[phi](y) = (2/lambda) phi(phi(lambda y)) - y + tau(y),
//! its Newton fixed points, spectrum, and the qualitative structure of the
//! unperturbed fixed point phi_0.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bivariate::BivariateSeries;
use crate::error::{Error, Result};
use crate::series::UnivariateSeries;
use crate::solve::{bisect, bisect_expand, quasi_newton};

/// Sanity floor for the rescaling; every admissible fixed point sits near
/// lambda = -0.25.
const LAMBDA_FLOOR: f64 = 0.1;

/// Forward-difference step for the Newton Jacobian.
const NEWTON_FD_STEP: f64 = 1e-7;

/// Central-difference step for the spectral Jacobian.
const SPECTRUM_FD_STEP: f64 = 1e-6;

/// Eigenvalues below this modulus are truncation artifacts.
const SPURIOUS_EIGENVALUE: f64 = 1e-6;

/// Perturbation slot of the operator.
#[derive(Debug, Clone)]
pub enum Perturbation {
    /// The pure doubling equation.
    None,
    /// An explicit tau(y) with tau(0) = 0.
    Tau(UnivariateSeries),
    /// A two-dimensional corrective term; tau = -omega_{eps,phi}.
    Eps(BivariateSeries),
}

/// A normalized state: phi(0) = 1 exactly, lambda slaved to phi.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OneDimState {
    pub phi: UnivariateSeries,
    pub lambda: f64,
}

/// Result record of a Newton solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub state: OneDimState,
    pub residual: f64,
    pub residual_history: Vec<f64>,
}

/// Compute lambda from the normalization. For tau-problems lambda = 2 phi(1);
/// with an eps-term it solves lambda = 2 phi(1) - eps(lambda,1) - eps(0,1).
pub fn lambda_of(phi: &UnivariateSeries, pert: &Perturbation) -> Result<f64> {
    let base = 2.0 * phi.eval(1.0);
    let lambda = match pert {
        Perturbation::Eps(eps) => bisect_expand(
            "lambda normalization",
            |l| base - eps.eval(l, 1.0) - eps.eval(0.0, 1.0) - l,
            base,
            0.02,
            1e-14,
        )?,
        _ => base,
    };
    if lambda.abs() <= LAMBDA_FLOOR {
        return Err(Error::LambdaFloor(lambda.abs()));
    }
    Ok(lambda)
}

/// omega_{eps,phi}(y) = (1/lambda)[eps(lambda phi(y), phi(lambda y))
///                               + eps(lambda y, phi(lambda y))].
pub fn omega_series(
    eps: &BivariateSeries,
    phi: &UnivariateSeries,
    lambda: f64,
) -> UnivariateSeries {
    let b = phi.compose_scale(lambda);
    let a1 = phi.scale(lambda);
    let a2 = UnivariateSeries::identity(0.0, phi.order()).scale(lambda);
    let first = eps.compose_uni(&a1, &b);
    let second = eps.compose_uni(&a2, &b);
    first.add(&second).scale(1.0 / lambda)
}

/// One application of the operator, with lambda recomputed from phi first.
pub fn apply_k(phi: &UnivariateSeries, pert: &Perturbation) -> Result<UnivariateSeries> {
    let lambda = lambda_of(phi, pert)?;
    apply_k_with_lambda(phi, pert, lambda)
}

fn apply_k_with_lambda(
    phi: &UnivariateSeries,
    pert: &Perturbation,
    lambda: f64,
) -> Result<UnivariateSeries> {
    let n = phi.order();
    let inner = phi.compose_scale(lambda);
    let outer = phi.recenter(1.0).compose(&inner)?;
    let mut out = outer.scale(2.0 / lambda).sub(&UnivariateSeries::identity(0.0, n));
    match pert {
        Perturbation::None => {}
        Perturbation::Tau(tau) => out = out.add(&tau.truncate(n)),
        Perturbation::Eps(eps) => {
            out = out.sub(&omega_series(eps, phi, lambda).truncate(n));
        }
    }
    Ok(out.truncate(n))
}

fn phi_from_unknowns(x: &DVector<f64>) -> UnivariateSeries {
    let mut coeffs = Vec::with_capacity(x.len() + 1);
    coeffs.push(1.0);
    coeffs.extend(x.iter().copied());
    UnivariateSeries::new(0.0, coeffs)
}

fn unknowns_from_phi(phi: &UnivariateSeries) -> DVector<f64> {
    DVector::from_iterator(phi.order(), phi.coeffs.iter().skip(1).copied())
}

fn fixed_point_residual(x: &DVector<f64>, pert: &Perturbation) -> Result<DVector<f64>> {
    let phi = phi_from_unknowns(x);
    let k = apply_k(&phi, pert)?;
    Ok(DVector::from_iterator(
        x.len(),
        (1..=x.len()).map(|j| k.coeff(j) - phi.coeff(j)),
    ))
}

/// Default Newton seed, a rough quadratic inside the basin.
pub fn default_initial(order: usize) -> UnivariateSeries {
    let mut coeffs = vec![0.0; order + 1];
    coeffs[0] = 1.0;
    coeffs[1] = -0.2;
    coeffs[2] = -0.9;
    UnivariateSeries::new(0.0, coeffs)
}

/// Newton iteration on the coefficient vector (c1..cN), c0 pinned at 1.
pub fn newton_fixed_point(
    initial: &UnivariateSeries,
    pert: &Perturbation,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointRecord> {
    assert!(initial.coeff(0) == 1.0, "initial state must have phi(0) = 1");
    let x0 = unknowns_from_phi(initial);
    let out = quasi_newton(
        "onedim fixed point",
        |x| fixed_point_residual(x, pert),
        x0,
        NEWTON_FD_STEP,
        tol,
        max_iter,
    )?;
    let phi = phi_from_unknowns(&out.solution);
    let lambda = lambda_of(&phi, pert)?;
    let residual = *out.residual_history.last().unwrap();
    Ok(FixedPointRecord {
        state: OneDimState { phi, lambda },
        residual,
        residual_history: out.residual_history,
    })
}

/// Spectral data of the linearized operator at a fixed point.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// All eigenvalues above the spurious floor, sorted by modulus, largest
    /// first.
    pub eigenvalues: Vec<Complex64>,
    /// Indices (into `eigenvalues`) of the expanding modes.
    pub expanding: Vec<usize>,
    /// Index of the mode identified as the coordinate-translation eigenvector.
    pub translation_index: Option<usize>,
    /// Eigenvector series for the expanding modes, same order as `expanding`.
    pub expanding_vectors: Vec<Vec<Complex64>>,
}

/// Dense finite-difference Jacobian of the coefficient map c -> K[phi_c].
fn spectral_jacobian(state: &OneDimState, pert: &Perturbation) -> Result<DMatrix<f64>> {
    let x = unknowns_from_phi(&state.phi);
    let n = x.len();
    let map = |v: &DVector<f64>| -> Result<DVector<f64>> {
        let phi = phi_from_unknowns(v);
        let k = apply_k(&phi, pert)?;
        Ok(DVector::from_iterator(n, (1..=n).map(|j| k.coeff(j))))
    };
    let mut jac = DMatrix::zeros(n, n);
    for col in 0..n {
        let h = SPECTRUM_FD_STEP * x[col].abs().max(1.0);
        let mut xp = x.clone();
        xp[col] += h;
        let mut xm = x.clone();
        xm[col] -= h;
        let rp = map(&xp)?;
        let rm = map(&xm)?;
        for row in 0..n {
            jac[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
        }
    }
    if jac.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure("non-finite Jacobian"));
    }
    Ok(jac)
}

fn eigenvector(jac: &DMatrix<f64>, ev: Complex64) -> Option<DVector<Complex64>> {
    let n = jac.nrows();
    let shift = ev + Complex64::new(1e-9 * (1.0 + ev.norm()), 1e-12);
    let mut a = jac.map(|v| Complex64::new(v, 0.0));
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let lu = a.lu();
    let mut v = DVector::from_iterator(
        n,
        (0..n).map(|k| Complex64::new(1.0 + (k as f64 * 0.37).sin(), 0.0)),
    );
    for _ in 0..8 {
        let solved = lu.solve(&v)?;
        let norm = solved.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        v = solved / Complex64::new(norm, 0.0);
    }
    Some(v)
}

/// Eigenvalues and expanding eigenvectors of D K at the fixed point.
pub fn spectrum(state: &OneDimState, pert: &Perturbation) -> Result<SpectrumReport> {
    let jac = spectral_jacobian(state, pert)?;
    let mut eigenvalues: Vec<Complex64> = jac
        .clone()
        .complex_eigenvalues()
        .iter()
        .copied()
        .filter(|ev| ev.norm() >= SPURIOUS_EIGENVALUE)
        .collect();
    eigenvalues.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());

    let expanding: Vec<usize> = eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, ev)| ev.norm() > 1.0)
        .map(|(i, _)| i)
        .collect();

    // Coordinate-translation direction: the derivative of the fixed point,
    // restricted to the reduced coordinates c1..cN.
    let dphi = state.phi.derivative();
    let n = state.phi.order();
    let dir = DVector::from_iterator(n, (1..=n).map(|j| dphi.coeff(j)));
    let dir_norm = dir.norm();

    let mut expanding_vectors = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    for &i in &expanding {
        match eigenvector(&jac, eigenvalues[i]) {
            Some(v) => {
                let overlap = dir
                    .iter()
                    .zip(v.iter())
                    .map(|(d, c)| Complex64::new(*d, 0.0) * c.conj())
                    .sum::<Complex64>()
                    .norm()
                    / (dir_norm * v.norm());
                if best.map_or(true, |(_, o)| overlap > o) {
                    best = Some((i, overlap));
                }
                expanding_vectors.push(v.iter().copied().collect());
            }
            None => expanding_vectors.push(Vec::new()),
        }
    }

    Ok(SpectrumReport {
        eigenvalues,
        expanding,
        translation_index: best.map(|(i, _)| i),
        expanding_vectors,
    })
}

/// Qualitative structure of phi_0 (zeros, fixed point, critical point) checked
/// against the orderings claimed for the unperturbed solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QualitativeReport {
    pub x_plus: f64,
    pub x_minus: f64,
    pub x_star: f64,
    pub critical_point: f64,
    pub critical_value: f64,
    pub second_derivative_at_c: f64,
    pub phi_at_lambda: f64,
    pub violations: Vec<String>,
}

/// Locates the marked points of phi_0 by bisection and checks the orderings.
/// Ordering failures are recorded as violations, not errors.
pub fn qualitative_checks(state: &OneDimState) -> Result<QualitativeReport> {
    let phi = &state.phi;
    let lambda = state.lambda;
    let mut violations = Vec::new();

    let x_plus = bisect("x_plus", |x| phi.eval(x), 1e-6, 1.0, 1e-13)?;

    // First zero to the left of -1; scan outward to stay inside the reliable
    // part of the truncated series.
    let mut x_minus = f64::NAN;
    let mut prev = phi.eval(-1.0);
    if prev <= 0.0 {
        violations.push(format!("phi(-1) = {prev} is not positive"));
    }
    let mut a = -1.0;
    let step = 0.01;
    for k in 1..=200 {
        let b = -1.0 - step * k as f64;
        let v = phi.eval(b);
        if v.signum() != prev.signum() {
            x_minus = bisect("x_minus", |x| phi.eval(x), b, a, 1e-13)?;
            break;
        }
        a = b;
        prev = v;
    }
    if !x_minus.is_finite() {
        violations.push("no zero found left of -1".to_string());
    }

    let x_star = bisect("x_star", |x| phi.eval(x) - x, 0.0, 1.0, 1e-13)?;

    let dphi = phi.derivative();
    let critical_point = bisect("critical point", |x| dphi.eval(x), lambda, 0.0, 1e-13)?;
    let critical_value = phi.eval(critical_point);
    let second_derivative_at_c = phi.derivative().derivative().eval(critical_point);
    let phi_at_lambda = phi.eval(lambda);

    if !(0.0 < x_plus && x_plus < phi_at_lambda && phi_at_lambda < 1.0) {
        violations.push(format!(
            "ordering 0 < x+ = {x_plus} < phi(lambda) = {phi_at_lambda} < 1 fails"
        ));
    }
    if x_minus.is_finite() && !(x_plus / lambda < x_minus && x_minus < -1.0) {
        violations.push(format!(
            "ordering x+/lambda = {} < x- = {x_minus} < -1 fails",
            x_plus / lambda
        ));
    }
    if !(lambda < critical_point && critical_point < 0.0) {
        violations.push(format!(
            "critical point {critical_point} outside (lambda, 0)"
        ));
    }
    if second_derivative_at_c >= 0.0 {
        violations.push(format!(
            "phi''(c) = {second_derivative_at_c} is not negative"
        ));
    }
    // The printed claim "b < 1 + lambda" cannot hold: c is the unique maximum
    // and c != 0, so b = phi(c) > phi(0) = 1 > 1 + lambda. The inequality that
    // is consistent with b > 1 (and with the scaling constant gamma = sqrt(b-1)
    // being real) is b < 1 - lambda, and that is what we enforce.
    if !(critical_value < 1.0 - lambda) {
        violations.push(format!(
            "critical value b = {critical_value} is not below 1 - lambda = {}",
            1.0 - lambda
        ));
    }
    if !(critical_value > 1.0) {
        violations.push(format!("critical value b = {critical_value} should exceed 1"));
    }
    let phi1 = phi.eval(1.0);
    if (phi1 - lambda / 2.0).abs() > 1e-8 {
        violations.push(format!(
            "phi(1) = {phi1} differs from lambda/2 = {}",
            lambda / 2.0
        ));
    }

    Ok(QualitativeReport {
        x_plus,
        x_minus,
        x_star,
        critical_point,
        critical_value,
        second_derivative_at_c,
        phi_at_lambda,
        violations,
    })
}
