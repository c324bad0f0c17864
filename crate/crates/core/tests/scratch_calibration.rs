// Geometry calibration experiment: which lens convention / sector placement
// makes the published fixed-point data realizable in the pulled-back
// Herglotz class.

use num_complex::Complex64;
use renorm_core::conformal::{build_theta, ConformalMap, LensConvention, PI};
use renorm_core::onedim::{default_initial, newton_fixed_point, Perturbation};
use renorm_core::series::UnivariateSeries;
use renorm_core::solve::bisect;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

struct UStar {
    phi: UnivariateSeries,
    dphi: UnivariateSeries,
    b: f64,
    lambda: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl UStar {
    fn build() -> Self {
        let rec =
            newton_fixed_point(&default_initial(40), &Perturbation::None, 1e-12, 60).unwrap();
        let phi = rec.state.phi.clone();
        let lambda = rec.state.lambda;
        let dphi = phi.derivative();
        let c = bisect("crit", |x| dphi.eval(x), lambda, 0.0, 1e-14).unwrap();
        let b = phi.eval(c);
        let beta = (b - lambda / 2.0).sqrt();
        let gamma = (b - 1.0).sqrt();
        let alpha = 1.0 / (2.0 * beta - 2.0 * gamma);
        println!("phi0: lambda={lambda:.8} c={c:.8} b={b:.8} beta={beta:.6} gamma={gamma:.6} alpha={alpha:.6}");
        Self { phi, dphi, b, lambda, alpha, beta, gamma }
    }

    fn t_inv(&self, z: Complex64) -> Complex64 {
        -z / self.alpha - c64(self.beta)
    }

    /// Real u on the safe zone, branch picked by the sign of T^{-1}(z).
    fn eval_real(&self, z: f64) -> f64 {
        let x = (-z / self.alpha) - self.beta;
        let w = self.b - x * x;
        if x <= 0.0 {
            bisect("u right branch", |y| self.phi.eval(y) - w, -0.10, 3.4, 1e-13).unwrap()
        } else {
            bisect("u left branch", |y| self.phi.eval(y) - w, -2.4, -0.11, 1e-13).unwrap()
        }
    }

    fn deriv_real(&self, z: f64) -> f64 {
        let x = (-z / self.alpha) - self.beta;
        let u = self.eval_real(z);
        2.0 * x / (self.alpha * self.phi.derivative().eval(u))
    }

    /// Complex continuation along the vertical segment from Re(z).
    fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        let mut y = c64(self.eval_real(z.re));
        let steps = 80;
        for k in 1..=steps {
            let zt = Complex64::new(z.re, z.im * k as f64 / steps as f64);
            let x = self.t_inv(zt);
            let w = self.b - x * x;
            // Newton on phi(y) = w
            for _ in 0..60 {
                let f = self.phi.eval_complex(y) - w;
                let d = self.dphi.eval_complex(y);
                if d.norm() < 1e-12 {
                    return None;
                }
                let step = f / d;
                y -= step;
                if step.norm() < 1e-13 {
                    break;
                }
            }
        }
        Some(y)
    }
}

struct Geometry {
    label: String,
    c2: f64,
    c4: f64,
    dtheta2_at_c3: f64,
    dtheta2_at_c4: f64,
    dphi1_at_mhalf: f64,
    dphi1_at_zero: f64,
    theta1: ConformalMap,
    theta2: Box<dyn Fn(Complex64) -> Complex64>,
}

fn build_geometry(conv: LensConvention, sector_at_minus_one: bool) -> Geometry {
    let vt = 0.24;
    let i1 = (-1.49, 0.96);
    let th1v = 0.2075 * PI;
    let i2 = (-2.347360978, 3.181216988);
    let th2v = 0.28285 * PI;

    let theta1 = build_theta(i1, th1v, conv, 0.0, -0.5).unwrap();

    // sector preimage of 0 in the slit plane
    let sector = ConformalMap::SectorPi2 { vartheta: vt };
    let z_star = if sector_at_minus_one {
        sector.inverse_eval(c64(0.0)).re
    } else {
        // mirrored variant: vertex at +1
        -sector.inverse_eval(c64(0.0)).re
    };
    let theta2_tilde = build_theta(i2, th2v, conv, z_star, 0.0).unwrap();

    let sector_inv = move |w: Complex64| -> Complex64 {
        if sector_at_minus_one {
            ConformalMap::SectorPi2 { vartheta: vt }.inverse_eval(w)
        } else {
            -ConformalMap::SectorPi2 { vartheta: vt }.inverse_eval(-w)
        }
    };
    let t2t = theta2_tilde.clone();
    let theta2 = move |z: Complex64| t2t.eval(sector_inv(z));

    // derivative via finite differences on the real axis (cheap, accurate)
    let d = |f: &dyn Fn(f64) -> f64, x: f64| (f(&x + 1e-7) - f(x - 1e-7)) / 2e-7;
    let th2_real = {
        let th2 = theta2.clone();
        move |x: f64| th2(c64(x)).re
    };
    let c2 = theta1.inverse_real(0.0);
    // c4 = Phi2(1): solve theta2(c4) = 1
    let c4 = bisect("c4", |x| th2_real(x) - 1.0, 0.0, 0.999999, 1e-14).unwrap();
    let dtheta2_at_c3 = d(&th2_real, 0.0);
    let dtheta2_at_c4 = d(&th2_real, c4);
    let dphi1_at_mhalf = 1.0 / theta1.deriv(c64(0.0)).re;
    let dphi1_at_zero = 1.0 / theta1.deriv(c64(c2)).re;

    Geometry {
        label: format!(
            "{:?}, sector at {}",
            conv,
            if sector_at_minus_one { "-1" } else { "+1" }
        ),
        c2,
        c4,
        dtheta2_at_c3,
        dtheta2_at_c4,
        dphi1_at_mhalf,
        dphi1_at_zero,
        theta1,
        theta2: Box::new(theta2),
    }
}

#[test]
fn band_table_direction() {
    let u = UStar::build();
    let conv = LensConvention::Thin;
    let nb = conv.nbhd(-1.49, 0.96, 0.2075 * PI);
    // continue u* along the upper arc from a safe real anchor
    let anchor = -0.5f64;
    let mut y = c64(u.eval_real(anchor));
    // path: up from the anchor to the arc? simpler: walk along the arc from
    // the left end by small parameter steps, re-anchoring Newton each step.
    let n = 400;
    let mut profile = Vec::new();
    // start near the left end (param t close to pi) and walk to the right end
    let mut started = false;
    for k in (1..n).rev() {
        let t = PI * k as f64 / n as f64;
        let z = nb.boundary_point(t);
        let x = u.t_inv(z);
        let w = u.b - x * x;
        if !started {
            // first point: anchor from the real value below it
            y = c64(u.eval_real(z.re.clamp(-1.45, 0.4)));
            started = true;
        }
        for _ in 0..80 {
            let f = u.phi.eval_complex(y) - w;
            let d = u.dphi.eval_complex(y);
            let step = f / d;
            y -= step;
            if step.norm() < 1e-13 {
                break;
            }
        }
        profile.push((t, z, y));
    }
    // c_Im / C_Im knots
    let cim = [2.5, 2.5, 2.5, 2.5, 2.5, 2.5, 2.5, 2.3, 2.3, 2.2, 2.1];
    let big_cim = [4.5, 4.5, 4.5, 4.5, 4.5, 4.0, 3.5, 2.8, 2.7, 2.6, 2.5];
    println!("theta_from_left  multiplier   theta_from_right  multiplier");
    for knot in 0..=10 {
        let tab = knot as f64 / 10.0;
        // from-left radians coordinate: arc parameter pi - tab; from-right: tab
        let grab = |target: f64| {
            profile
                .iter()
                .min_by(|a, b| {
                    ((a.0 - target).abs())
                        .partial_cmp(&(b.0 - target).abs())
                        .unwrap()
                })
                .map(|(_, z, y)| (y.im / z.im, *z, *y))
                .unwrap()
        };
        let (ml, _, _) = grab(PI - tab);
        let (mr, zr, yr) = grab(tab);
        println!(
            "t={tab:.1}: band [{:.1},{:.1}]  from-left {:.3}   from-right {:.3}  (z {:.3} u {:.3})",
            cim[knot], big_cim[knot], ml, mr, zr, yr
        );
    }
}

#[test]
fn calibrate_geometry() {
    let u = UStar::build();
    let t_star = u.deriv_real(-0.5);
    let s_star = u.deriv_real(0.0);
    println!("t* = {t_star:.6}, s* = {s_star:.6}");
    println!("u(l1) = {:.6}", u.eval_real(-1.49));
    println!(
        "square: t in [1.9775, 2.0229], s in [2.011, 2.04621]; inside: {}",
        t_star >= 1.9775 && t_star <= 2.0229 && s_star >= 2.011 && s_star <= 2.04621
    );

    for conv in [LensConvention::Thin, LensConvention::Fat] {
        for sector_minus in [true, false] {
            let g = build_geometry(conv, sector_minus);
            let (c1, c2, c3, c4) = (0.0f64, g.c2, 0.0f64, g.c4);
            let tt = t_star / (g.dtheta2_at_c3 * g.dphi1_at_mhalf);
            let ss = s_star / (g.dtheta2_at_c4 * g.dphi1_at_zero);
            let g0 = (c4 - c3) / (c2 - c1);
            let hyper = (c2 - c1) * (tt * ss).sqrt();
            // C-curve necessary condition
            let x_big = 2.0 * ss * ((ss / tt).sqrt() - 1.0) / (c2 - c1);
            let denom = 2.0 * ss - x_big * (1.0 - c2);
            let i_x = 2.0 * ss * ss * (1.0 - c2) / denom;
            // Z-curve necessary condition
            let z_big = 2.0 * tt * (1.0 - (tt / ss).sqrt()) / (c2 - c1);
            let i_z = 2.0 * tt * tt * (1.0 + c1) / (2.0 * tt + z_big * (1.0 + c1));
            println!("--- {}", g.label);
            println!(
                "    c2={:.6} c4={:.6} th2'(0)={:.6} th2'(c4)={:.6} phi1'(-1/2)={:.6} phi1'(0)={:.6}",
                c2, c4, g.dtheta2_at_c3, g.dtheta2_at_c4, g.dphi1_at_mhalf, g.dphi1_at_zero
            );
            println!(
                "    T*={tt:.6} S*={ss:.6} g0={g0:.6}; hyperbola {hyper:.6} >= {:.6}: {}",
                c4 - c3,
                hyper >= c4 - c3
            );
            println!(
                "    C-curve: I_X={i_x:.6} <= 1-c4={:.6}: {} (denom {denom:.4})",
                1.0 - c4,
                i_x <= 1.0 - c4 && denom > 0.0
            );
            println!(
                "    Z-curve: I_Z={i_z:.6} <= 1+c3={:.6}: {}",
                1.0 + c3,
                i_z <= 1.0 + c3
            );

            // half-plane preservation of u* along the upper boundary arc of D
            // (sampled on the reliable left part), and band multipliers.
            let nb = conv.nbhd(-1.49, 0.96, 0.2075 * PI);
            let mut ok_halves = true;
            let mut mults = Vec::new();
            for &t in &[0.2, 0.5, 1.0, 1.5, 2.2, 2.9] {
                let z = nb.boundary_point(PI - t * (PI / 3.1)); // from the left end
                if z.re > 0.4 {
                    continue;
                }
                if let Some(uval) = u.eval_complex(z) {
                    if uval.im <= 0.0 {
                        ok_halves = false;
                    }
                    mults.push((t, uval.im / z.im, uval));
                } else {
                    ok_halves = false;
                }
            }
            println!("    u* maps sampled upper arc into C+: {ok_halves}");
            for (t, m, uval) in mults {
                println!("      arc param {t:.2}: Im u / Im z = {m:.4} (u = {uval:.4})");
            }
        }
    }
}
