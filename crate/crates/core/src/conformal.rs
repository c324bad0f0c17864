//! Conformal maps between the double-slit plane, the unit disk, lens-shaped
//! Poincare neighborhoods and the sector-notched target set.
//!
//! All maps are real-symmetric, carry closed-form derivatives and inverses,
//! and use principal branches with cuts on the slits R \ (-1,1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solve::bisect;

pub const PI: f64 = std::f64::consts::PI;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Principal power z^p for z off the negative real axis.
fn cpow(z: Complex64, p: f64) -> Complex64 {
    z.powf(p)
}

/// One conformal building block. `Composite` applies left to right.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ConformalMap {
    /// zeta: double-slit plane onto the unit disk, 0 -> 0, halves preserved.
    Zeta,
    /// Inverse of `Zeta`: w -> 2w / (1 + w^2).
    ZetaInv,
    /// Disk automorphism z -> (z + a)/(1 + a z), a real in (-1,1).
    Moebius { a: f64 },
    /// Slit-plane to lens map with corner exponent p = theta/pi:
    /// z -> (1 - R^p)/(1 + R^p), R = (1-z)/(1+z). Image is D((-1,1), theta)
    /// with boundary arcs meeting the interval ends at interior angle theta.
    Lens { exponent: f64 },
    /// Affine q(z) = scale * z + offset.
    AffineQ { scale: f64, offset: f64 },
    /// Sector straightening with vertex at -1: maps the slit plane minus the
    /// sector of half-angle `vartheta` onto the full double-slit plane,
    /// fixing both slit tips.
    SectorPi2 { vartheta: f64 },
    Composite(Vec<ConformalMap>),
}

impl ConformalMap {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            ConformalMap::Zeta => {
                let a = (c64(1.0) + z).sqrt();
                let b = (c64(1.0) - z).sqrt();
                (a - b) / (a + b)
            }
            ConformalMap::ZetaInv => 2.0 * z / (c64(1.0) + z * z),
            ConformalMap::Moebius { a } => (z + *a) / (c64(1.0) + *a * z),
            ConformalMap::Lens { exponent } => {
                if (c64(1.0) + z).norm() == 0.0 {
                    return c64(-1.0); // slit tip, limit value
                }
                let r = (c64(1.0) - z) / (c64(1.0) + z);
                let rp = cpow(r, *exponent);
                (c64(1.0) - rp) / (c64(1.0) + rp)
            }
            ConformalMap::AffineQ { scale, offset } => *scale * z + *offset,
            ConformalMap::SectorPi2 { vartheta } => {
                let p = PI / (PI - vartheta);
                let c = (-vartheta / (PI - vartheta)) * std::f64::consts::LN_2;
                c64(-1.0) + c.exp() * cpow(c64(1.0) + z, p)
            }
            ConformalMap::Composite(maps) => maps.iter().fold(z, |acc, m| m.eval(acc)),
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match self {
            ConformalMap::Zeta => {
                let a = (c64(1.0) + z).sqrt();
                let b = (c64(1.0) - z).sqrt();
                let s = a + b;
                2.0 / (a * b * s * s)
            }
            ConformalMap::ZetaInv => {
                let d = c64(1.0) + z * z;
                2.0 * (c64(1.0) - z * z) / (d * d)
            }
            ConformalMap::Moebius { a } => {
                let d = c64(1.0) + *a * z;
                c64(1.0 - a * a) / (d * d)
            }
            ConformalMap::Lens { exponent } => {
                let p = *exponent;
                let r = (c64(1.0) - z) / (c64(1.0) + z);
                let rp = cpow(r, p);
                let one_plus = c64(1.0) + z;
                4.0 * p * rp / (r * (c64(1.0) + rp) * (c64(1.0) + rp) * one_plus * one_plus)
            }
            ConformalMap::AffineQ { scale, .. } => c64(*scale),
            ConformalMap::SectorPi2 { vartheta } => {
                let p = PI / (PI - vartheta);
                let c = (-vartheta / (PI - vartheta)) * std::f64::consts::LN_2;
                c.exp() * p * cpow(c64(1.0) + z, p - 1.0)
            }
            ConformalMap::Composite(maps) => {
                let mut acc = z;
                let mut d = c64(1.0);
                for m in maps {
                    d *= m.deriv(acc);
                    acc = m.eval(acc);
                }
                d
            }
        }
    }

    pub fn inverse_eval(&self, w: Complex64) -> Complex64 {
        match self {
            ConformalMap::Zeta => ConformalMap::ZetaInv.eval(w),
            ConformalMap::ZetaInv => ConformalMap::Zeta.eval(w),
            ConformalMap::Moebius { a } => ConformalMap::Moebius { a: -a }.eval(w),
            ConformalMap::Lens { exponent } => {
                let s = cpow((c64(1.0) - w) / (c64(1.0) + w), 1.0 / *exponent);
                (c64(1.0) - s) / (c64(1.0) + s)
            }
            ConformalMap::AffineQ { scale, offset } => (w - *offset) / *scale,
            ConformalMap::SectorPi2 { vartheta } => {
                // w = -1 + 2^{-c0} (1+z)^P  =>  z = -1 + 2^{vt/pi} (1+w)^{1/P}
                let inv_p = (PI - vartheta) / PI;
                let c = (vartheta / PI) * std::f64::consts::LN_2;
                c64(-1.0) + c.exp() * cpow(c64(1.0) + w, inv_p)
            }
            ConformalMap::Composite(maps) => maps
                .iter()
                .rev()
                .fold(w, |acc, m| m.inverse_eval(acc)),
        }
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.eval(c64(x)).re
    }

    pub fn deriv_real(&self, x: f64) -> f64 {
        self.deriv(c64(x)).re
    }

    pub fn inverse_real(&self, x: f64) -> f64 {
        self.inverse_eval(c64(x)).re
    }
}

/// The transformation printed for the sector straightening, kept verbatim
/// (vertex at +1, only the +1 tip fixed). Errors when 1 - z falls on the
/// branch cut.
pub fn sector_map_pi2(z: Complex64, vartheta: f64) -> Result<Complex64> {
    let w = c64(1.0) - z;
    if w.im == 0.0 && w.re < 0.0 {
        return Err(Error::BranchViolation {
            context: "sector_map_pi2",
            arg: w.re,
        });
    }
    let c = (vartheta / (PI - vartheta)) * std::f64::consts::LN_2;
    let p = PI / (PI - vartheta);
    Ok(c64(1.0) - c.exp() * cpow(w, p))
}

/// Interval plus interior angle; the lens-shaped hyperbolic neighborhood of
/// the interval in the slit plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareNbhd {
    pub left: f64,
    pub right: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Upper,
    Lower,
}

impl PoincareNbhd {
    pub fn new(left: f64, right: f64, theta: f64) -> Self {
        assert!(left < right, "interval must be ordered");
        assert!(theta > 0.0 && theta < PI, "angle must lie in (0, pi)");
        Self { left, right, theta }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.right - self.left)
    }

    /// Center of the circle carrying the boundary arc on the given side.
    pub fn arc_center(&self, side: Side) -> Complex64 {
        let d = self.half_width();
        let k = d / self.theta.tan();
        match side {
            Side::Upper => Complex64::new(self.midpoint(), -k),
            Side::Lower => Complex64::new(self.midpoint(), k),
        }
    }

    pub fn arc_radius(&self) -> f64 {
        self.half_width() / self.theta.sin()
    }

    /// Height of the lens above the interval.
    pub fn apex(&self) -> f64 {
        self.half_width() * (0.5 * self.theta).tan()
    }

    /// Signed clearance of z inside the open half-lens: positive inside,
    /// negative outside; magnitude is a lower bound on the distance to the
    /// boundary (arc plus interval edge for the half set).
    pub fn half_clearance(&self, z: Complex64, side: Side) -> f64 {
        let im_ok = match side {
            Side::Upper => z.im,
            Side::Lower => -z.im,
        };
        let c = self.arc_center(side);
        let arc = self.arc_radius() - (z - c).norm();
        arc.min(im_ok)
    }

    /// Signed clearance inside the full lens D = D_+ u D_- u J; the boundary
    /// consists of the two arcs only. For theta < pi/2 the lens is the
    /// intersection of the two boundary disks, beyond pi/2 their union.
    pub fn clearance(&self, z: Complex64) -> f64 {
        let up = self.arc_radius() - (z - self.arc_center(Side::Upper)).norm();
        let lo = self.arc_radius() - (z - self.arc_center(Side::Lower)).norm();
        if self.theta <= PI / 2.0 {
            up.min(lo)
        } else {
            up.max(lo)
        }
    }

    pub fn contains(&self, z: Complex64, margin: f64) -> bool {
        self.clearance(z) > margin
    }

    pub fn contains_half(&self, z: Complex64, side: Side, margin: f64) -> bool {
        self.half_clearance(z, side) > margin
    }

    /// Samples of the boundary arc. The parameter runs over (0, pi) for the
    /// upper side (0 at the right interval end) and (-pi, 0) for the lower,
    /// the affine rescaling of the central-angle parametrization.
    pub fn boundary(&self, side: Side, n: usize) -> Vec<Complex64> {
        assert!(n >= 16, "need at least 16 samples per arc");
        (0..n)
            .map(|k| {
                let t = match side {
                    Side::Upper => PI * k as f64 / (n - 1) as f64,
                    Side::Lower => -PI * k as f64 / (n - 1) as f64,
                };
                self.boundary_point(t)
            })
            .collect()
    }

    /// Boundary point at parameter t in (0, pi) upper / (-pi, 0) lower.
    pub fn boundary_point(&self, t: f64) -> Complex64 {
        let r = self.arc_radius();
        if t >= 0.0 {
            // psi runs from pi/2 - theta (right end) to pi/2 + theta (left).
            let psi = (PI / 2.0 - self.theta) + (2.0 * self.theta) * t / PI;
            let c = self.arc_center(Side::Upper);
            c + r * Complex64::new(psi.cos(), psi.sin())
        } else {
            self.boundary_point(-t).conj()
        }
    }
}

/// Convention switch used while the printed geometry was being pinned down;
/// `Thin` reads the angle as the interior tangent-chord angle (small theta,
/// thin lens), `Fat` as its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LensConvention {
    Thin,
    Fat,
}

impl LensConvention {
    pub fn exponent(&self, theta: f64) -> f64 {
        match self {
            LensConvention::Thin => theta / PI,
            LensConvention::Fat => 1.0 - theta / PI,
        }
    }

    pub fn nbhd(&self, left: f64, right: f64, theta: f64) -> PoincareNbhd {
        let t = match self {
            LensConvention::Thin => theta,
            LensConvention::Fat => PI - theta,
        };
        PoincareNbhd::new(left, right, t)
    }
}

/// Normalized slit-plane-to-lens map q . Lens . A_a with the Moebius
/// normalization constant solved so that `norm_source` maps to `norm_target`.
pub fn build_theta(
    interval: (f64, f64),
    theta: f64,
    convention: LensConvention,
    norm_source: f64,
    norm_target: f64,
) -> Result<ConformalMap> {
    let (l, r) = interval;
    let p = convention.exponent(theta);
    let q = ConformalMap::AffineQ {
        scale: 0.5 * (r - l),
        offset: 0.5 * (r + l),
    };
    let with_a = |a: f64| {
        ConformalMap::Composite(vec![
            ConformalMap::Zeta,
            ConformalMap::Moebius { a },
            ConformalMap::ZetaInv,
            ConformalMap::Lens { exponent: p },
            q.clone(),
        ])
    };
    let f = |a: f64| with_a(a).eval_real(norm_source) - norm_target;
    let a = bisect("theta normalization", f, -1.0 + 1e-6, 1.0 - 1e-6, 1e-15)?;
    if !(-1.0 + 1e-5..=1.0 - 1e-5).contains(&a) {
        return Err(Error::BracketFailure {
            context: "theta normalization",
            a: -1.0,
            b: 1.0,
            fa: f(-1.0 + 1e-9),
            fb: f(1.0 - 1e-9),
        });
    }
    Ok(with_a(a))
}
