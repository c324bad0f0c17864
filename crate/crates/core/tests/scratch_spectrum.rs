// Temporary experiment: spectrum of the linearized doubling operator under
// different normalization conventions.

use nalgebra::{DMatrix, DVector};
use renorm_core::onedim::{apply_k, default_initial, newton_fixed_point, Perturbation};
use renorm_core::series::UnivariateSeries;

fn eigen_table(jac: &DMatrix<f64>, label: &str) {
    let mut evs: Vec<_> = jac.clone().complex_eigenvalues().iter().copied().collect();
    evs.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    println!(
        "{label}: top eigenvalues: {:?}",
        evs.iter().take(4).collect::<Vec<_>>()
    );
}

#[test]
fn coefficient_table() {
    let rec = newton_fixed_point(&default_initial(40), &Perturbation::None, 1e-13, 80).unwrap();
    let published = [
        1.0, -1.9719e-1, -9.2103e-1, -3.1550e-2, 2.5252e-2, -5.6774e-4, 1.6209e-5, 5.5554e-6,
        -2.5832e-6, 5.1783e-8,
    ];
    for (k, &p) in published.iter().enumerate() {
        println!(
            "c{k}: computed {:+.6e}  published {:+.6e}  diff {:.2e}",
            rec.state.phi.coeff(k),
            p,
            (rec.state.phi.coeff(k) - p).abs()
        );
    }
    println!("lambda = {:.10}", rec.state.lambda);
}

#[test]
fn truncation_dependence() {
    for order in [8usize, 9, 10, 11, 12, 14, 16, 20, 24, 30] {
        let rec = newton_fixed_point(&default_initial(order), &Perturbation::None, 1e-12, 80)
            .unwrap();
        let spec = renorm_core::onedim::spectrum(&rec.state, &Perturbation::None).unwrap();
        println!(
            "order {order}: lambda {:.8}, top: {:?}",
            rec.state.lambda,
            spec.eigenvalues.iter().take(2).collect::<Vec<_>>()
        );
    }
}

#[test]
fn more_variants() {
    let order = 30usize;
    let rec =
        newton_fixed_point(&default_initial(order), &Perturbation::None, 1e-12, 80).unwrap();
    let phi = rec.state.phi.clone();
    let n = order;

    // Variant D: all coefficients free, lambda slaved to 2 phi(1).
    let map_d = |v: &DVector<f64>| {
        let p = UnivariateSeries::new(0.0, v.iter().copied().collect());
        let lambda = 2.0 * p.eval(1.0);
        let inner = p.compose_scale(lambda);
        let outer = p.recenter(p.eval(0.0)).compose(&inner).unwrap();
        let k = outer
            .scale(2.0 / lambda)
            .sub(&UnivariateSeries::identity(0.0, n));
        DVector::from_iterator(n + 1, (0..=n).map(|j| k.coeff(j)))
    };
    let y0 = DVector::from_iterator(n + 1, phi.coeffs.iter().copied());
    let mut jac = DMatrix::zeros(n + 1, n + 1);
    for col in 0..=n {
        let h = 1e-6 * y0[col].abs().max(1.0);
        let mut xp = y0.clone();
        xp[col] += h;
        let mut xm = y0.clone();
        xm[col] -= h;
        let (rp, rm) = (map_d(&xp), map_d(&xm));
        for row in 0..=n {
            jac[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
        }
    }
    eigen_table(&jac, "D (all free, lambda slaved)");

    // Variant E: extended system (c1..cN, lambda) with the lagged scaling,
    // i.e. lambda enters as an unknown updated to 2 phi(1) afterwards.
    let map_e = |v: &DVector<f64>| {
        let mut coeffs = vec![1.0];
        coeffs.extend(v.iter().take(n).copied());
        let p = UnivariateSeries::new(0.0, coeffs);
        let lambda = v[n];
        let inner = p.compose_scale(lambda);
        let outer = p.recenter(1.0).compose(&inner).unwrap();
        let k = outer
            .scale(2.0 / lambda)
            .sub(&UnivariateSeries::identity(0.0, n));
        let mut out: Vec<f64> = (1..=n).map(|j| k.coeff(j)).collect();
        out.push(2.0 * p.eval(1.0));
        DVector::from_iterator(n + 1, out)
    };
    let mut z0 = DVector::zeros(n + 1);
    for j in 1..=n {
        z0[j - 1] = phi.coeff(j);
    }
    z0[n] = rec.state.lambda;
    let mut jace = DMatrix::zeros(n + 1, n + 1);
    for col in 0..=n {
        let h = 1e-6 * z0[col].abs().max(1.0);
        let mut xp = z0.clone();
        xp[col] += h;
        let mut xm = z0.clone();
        xm[col] -= h;
        let (rp, rm) = (map_e(&xp), map_e(&xm));
        for row in 0..=n {
            jace[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
        }
    }
    eigen_table(&jace, "E (extended, lagged lambda)");
}

#[test]
fn spectrum_variants() {
    for order in [40usize, 60] {
        let rec = newton_fixed_point(&default_initial(order), &Perturbation::None, 1e-12, 80)
            .unwrap();
        let phi = rec.state.phi.clone();
        let lambda0 = rec.state.lambda;
        println!("order {order}: lambda = {lambda0}");
        let n = order;

        // Variant A: lambda slaved to phi, c0 pinned (reduced coords c1..cN).
        let map_a = |v: &DVector<f64>| {
            let mut coeffs = vec![1.0];
            coeffs.extend(v.iter().copied());
            let p = UnivariateSeries::new(0.0, coeffs);
            let k = apply_k(&p, &Perturbation::None).unwrap();
            DVector::from_iterator(n, (1..=n).map(|j| k.coeff(j)))
        };
        let x0 = DVector::from_iterator(n, phi.coeffs.iter().skip(1).copied());
        let mut jac = DMatrix::zeros(n, n);
        for col in 0..n {
            let h = 1e-6 * x0[col].abs().max(1.0);
            let mut xp = x0.clone();
            xp[col] += h;
            let mut xm = x0.clone();
            xm[col] -= h;
            let (rp, rm) = (map_a(&xp), map_a(&xm));
            for row in 0..n {
                jac[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        eigen_table(&jac, "A (lambda slaved, c0 pinned)");

        // Variant B: lambda frozen at lambda0, c0 pinned.
        let map_b = |v: &DVector<f64>| {
            let mut coeffs = vec![1.0];
            coeffs.extend(v.iter().copied());
            let p = UnivariateSeries::new(0.0, coeffs);
            let inner = p.compose_scale(lambda0);
            let outer = p.recenter(1.0).compose(&inner).unwrap();
            let k = outer
                .scale(2.0 / lambda0)
                .sub(&UnivariateSeries::identity(0.0, n));
            DVector::from_iterator(n, (1..=n).map(|j| k.coeff(j)))
        };
        let mut jacb = DMatrix::zeros(n, n);
        for col in 0..n {
            let h = 1e-6 * x0[col].abs().max(1.0);
            let mut xp = x0.clone();
            xp[col] += h;
            let mut xm = x0.clone();
            xm[col] -= h;
            let (rp, rm) = (map_b(&xp), map_b(&xm));
            for row in 0..n {
                jacb[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        eigen_table(&jacb, "B (lambda frozen, c0 pinned)");

        // Variant C: lambda frozen, all coefficients free.
        let map_c = |v: &DVector<f64>| {
            let p = UnivariateSeries::new(0.0, v.iter().copied().collect());
            let inner = p.compose_scale(lambda0);
            let outer = p.recenter(p.eval(0.0)).compose(&inner).unwrap();
            let k = outer
                .scale(2.0 / lambda0)
                .sub(&UnivariateSeries::identity(0.0, n));
            DVector::from_iterator(n + 1, (0..=n).map(|j| k.coeff(j)))
        };
        let y0 = DVector::from_iterator(n + 1, phi.coeffs.iter().copied());
        let mut jacc = DMatrix::zeros(n + 1, n + 1);
        for col in 0..=n {
            let h = 1e-6 * y0[col].abs().max(1.0);
            let mut xp = y0.clone();
            xp[col] += h;
            let mut xm = y0.clone();
            xm[col] -= h;
            let (rp, rm) = (map_c(&xp), map_c(&xm));
            for row in 0..=n {
                jacc[(row, col)] = (rp[row] - rm[row]) / (2.0 * h);
            }
        }
        eigen_table(&jacc, "C (lambda frozen, all coeffs free)");
    }
}
