//! Frozen constants and conformal frames for the inclusion/inequality
//! verification battery: the domain and target sets, their uniformizing
//! maps, the normalization quadruple, and the published bound tables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{build_theta, ConformalMap, LensConvention, PoincareNbhd, PI};
use crate::error::Result;
use crate::region::NotchedTarget;
use crate::solve::bisect;

/// Interval and angle data with the auxiliary tables, serialized as plain
/// decimal literals.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClaimConstants {
    pub i1: (f64, f64),
    pub theta1: f64,
    pub i2: (f64, f64),
    pub theta2: f64,
    pub i3: (f64, f64),
    pub theta3: f64,
    pub i4: (f64, f64),
    pub theta4: f64,
    /// Sector half-angle at the left slit tip.
    pub vartheta: f64,
    /// theta5 = 1.3 * theta2.
    pub theta5: f64,
    /// Extent of the boundary-distortion window in arc radians.
    pub theta_star: f64,
    /// Knots of the лower/upper distortion multipliers on [0, 1].
    pub c_im: [f64; 11],
    pub c_im_upper: [f64; 11],
    /// Coefficients of the affine lambda bounds.
    pub a_lower: [f64; 3],
    pub a_upper: [f64; 3],
    /// Coefficients of the affine-in-lambda b bounds.
    pub b_lower: [f64; 6],
    pub b_upper: [f64; 6],
    /// Bounding square of the realizable derivative pairs.
    pub t_range: (f64, f64),
    pub s_range: (f64, f64),
}

impl Default for ClaimConstants {
    fn default() -> Self {
        Self {
            i1: (-1.49, 0.96),
            theta1: 0.2075 * PI,
            i2: (-2.347360978, 3.181216988),
            theta2: 0.28285 * PI,
            i3: (-2.347360978, 0.652639022),
            theta3: 0.8,
            i4: (1.681216988, 3.181216988),
            theta4: 0.4,
            vartheta: 0.24,
            theta5: 1.3 * 0.28285 * PI,
            theta_star: 1.0,
            c_im: [2.5, 2.5, 2.5, 2.5, 2.5, 2.5, 2.5, 2.3, 2.3, 2.2, 2.1],
            c_im_upper: [4.5, 4.5, 4.5, 4.5, 4.5, 4.0, 3.5, 2.8, 2.7, 2.6, 2.5],
            a_lower: [-5.35599046, 0.139748610, 10.2175899],
            a_upper: [0.21030246, -0.607475331, 0.556299141],
            b_lower: [
                2.55648917,
                0.607658324,
                1.99870694,
                0.5118151460,
                -9.20477427,
                -1.26473672,
            ],
            b_upper: [
                0.31811096,
                0.169200466,
                -0.656080571,
                -0.222331242,
                0.638677617,
                1.10774246,
            ],
            t_range: (1.9775, 2.0229),
            s_range: (2.011, 2.04621),
        }
    }
}

impl ClaimConstants {
    /// Piecewise-linear interpolation of the lower distortion multiplier.
    pub fn c_im_at(&self, theta: f64) -> f64 {
        interp_knots(&self.c_im, theta)
    }

    pub fn c_im_upper_at(&self, theta: f64) -> f64 {
        interp_knots(&self.c_im_upper, theta)
    }

    pub fn lambda_lower(&self, t: f64, s: f64) -> f64 {
        self.a_lower[0] * t + self.a_lower[1] * s + self.a_lower[2]
    }

    pub fn lambda_upper(&self, t: f64, s: f64) -> f64 {
        self.a_upper[0] * t + self.a_upper[1] * s + self.a_upper[2]
    }

    pub fn b_lower_at(&self, lambda: f64, t: f64, s: f64) -> f64 {
        let c = &self.b_lower;
        (c[0] * lambda + c[1]) * t + (c[2] * lambda + c[3]) * s + c[4] * lambda + c[5]
    }

    pub fn b_upper_at(&self, lambda: f64, t: f64, s: f64) -> f64 {
        let c = &self.b_upper;
        (c[0] * lambda + c[1]) * t + (c[2] * lambda + c[3]) * s + c[4] * lambda + c[5]
    }
}

fn interp_knots(knots: &[f64; 11], theta: f64) -> f64 {
    let t = theta.clamp(0.0, 1.0) * 10.0;
    let i = (t.floor() as usize).min(9);
    let frac = t - i as f64;
    knots[i] * (1.0 - frac) + knots[i + 1] * frac
}

/// The uniformized geometry: lens domains, the notched target, the maps
/// Theta_1, Theta_2 with inverses, and the pulled-back normalization points.
pub struct ClaimGeometry {
    pub constants: ClaimConstants,
    pub domain: PoincareNbhd,
    pub lens2: PoincareNbhd,
    pub target: std::sync::Arc<NotchedTarget>,
    theta1: ConformalMap,
    theta2_tilde: ConformalMap,
    sector: ConformalMap,
    /// c = (c1, c2, c3, c4) with c1 = c3 = 0 by the normalizations.
    pub c2: f64,
    pub c4: f64,
    /// Derivative factors entering T(t) and S(s).
    pub dtheta2_c3: f64,
    pub dtheta2_c4: f64,
    pub dphi1_mhalf: f64,
    pub dphi1_zero: f64,
}

impl ClaimGeometry {
    pub fn build() -> Result<Self> {
        Self::build_with(ClaimConstants::default())
    }

    pub fn build_with(constants: ClaimConstants) -> Result<Self> {
        let conv = LensConvention::Thin;
        let domain = conv.nbhd(constants.i1.0, constants.i1.1, constants.theta1);
        let lens2 = conv.nbhd(constants.i2.0, constants.i2.1, constants.theta2);
        let lens3 = conv.nbhd(constants.i3.0, constants.i3.1, constants.theta3);
        let lens4 = conv.nbhd(constants.i4.0, constants.i4.1, constants.theta4);

        let theta1 = build_theta(constants.i1, constants.theta1, conv, 0.0, -0.5)?;
        let sector = ConformalMap::SectorPi2 {
            vartheta: constants.vartheta,
        };
        // Normalize so that Theta2(0) = Theta2_tilde(sector^{-1}(0)) = 0.
        let z_star = sector.inverse_eval(Complex64::new(0.0, 0.0)).re;
        let theta2_tilde = build_theta(constants.i2, constants.theta2, conv, z_star, 0.0)?;

        let target = std::sync::Arc::new(NotchedTarget::new(
            lens2,
            lens3,
            lens4,
            theta2_tilde.clone(),
            constants.vartheta,
        ));

        let mut g = Self {
            constants,
            domain,
            lens2,
            target,
            theta1,
            theta2_tilde,
            sector,
            c2: 0.0,
            c4: 0.0,
            dtheta2_c3: 0.0,
            dtheta2_c4: 0.0,
            dphi1_mhalf: 0.0,
            dphi1_zero: 0.0,
        };
        g.c2 = g.phi1_real(0.0);
        g.c4 = bisect("c4", |x| g.theta2_real(x) - 1.0, 0.0, 1.0 - 1e-9, 1e-14)?;
        g.dtheta2_c3 = g.theta2_deriv_real(0.0);
        g.dtheta2_c4 = g.theta2_deriv_real(g.c4);
        g.dphi1_mhalf = 1.0 / g.theta1.deriv(Complex64::new(0.0, 0.0)).re;
        g.dphi1_zero = 1.0 / g.theta1.deriv(Complex64::new(g.c2, 0.0)).re;
        Ok(g)
    }

    // --- Theta_1 / Phi_1 ---

    pub fn theta1(&self, z: Complex64) -> Complex64 {
        self.theta1.eval(z)
    }

    pub fn theta1_real(&self, x: f64) -> f64 {
        self.theta1.eval_real(x)
    }

    pub fn theta1_deriv_real(&self, x: f64) -> f64 {
        self.theta1.deriv(Complex64::new(x, 0.0)).re
    }

    pub fn phi1(&self, w: Complex64) -> Complex64 {
        self.theta1.inverse_eval(w)
    }

    pub fn phi1_real(&self, w: f64) -> f64 {
        self.theta1.inverse_real(w)
    }

    // --- Theta_2 = Theta2_tilde . sector^{-1}, Phi_2 = sector . Theta2_tilde^{-1} ---

    pub fn theta2(&self, z: Complex64) -> Complex64 {
        self.theta2_tilde.eval(self.sector.inverse_eval(z))
    }

    pub fn theta2_real(&self, x: f64) -> f64 {
        self.theta2(Complex64::new(x, 0.0)).re
    }

    pub fn theta2_deriv(&self, z: Complex64) -> Complex64 {
        let mid = self.sector.inverse_eval(z);
        self.theta2_tilde.deriv(mid) / self.sector.deriv(mid)
    }

    pub fn theta2_deriv_real(&self, x: f64) -> f64 {
        self.theta2_deriv(Complex64::new(x, 0.0)).re
    }

    pub fn phi2(&self, w: Complex64) -> Complex64 {
        self.sector.eval(self.theta2_tilde.inverse_eval(w))
    }

    pub fn phi2_real(&self, w: f64) -> f64 {
        self.phi2(Complex64::new(w, 0.0)).re
    }

    /// Rescaled derivative at the left normalization point: f'(c1) = T(t).
    pub fn t_of(&self, t: f64) -> f64 {
        t / (self.dtheta2_c3 * self.dphi1_mhalf)
    }

    /// Rescaled derivative at the right normalization point: f'(c2) = S(s).
    pub fn s_of(&self, s: f64) -> f64 {
        s / (self.dtheta2_c4 * self.dphi1_zero)
    }

    /// Upper-boundary point of the domain at arc parameter theta (radians,
    /// measured from the right interval end along the (0, pi) scale).
    pub fn domain_boundary(&self, theta: f64) -> Complex64 {
        self.domain.boundary_point(theta)
    }
}
