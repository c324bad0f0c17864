//! A-priori bounds for the normalized Herglotz class on the double-slit
//! plane: the integral-representation sampler (the Monte-Carlo oracle), the
//! classical two-point bounds, the sharpened piecewise envelopes with their
//! Schwarzian-extremal and convexity pieces, the derivative envelopes, the
//! transfer to the uniformized domain/target frame, and the realizable
//! derivative set S.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::claim::ClaimGeometry;
use crate::error::{Error, Result};
use crate::solve::{bisect, bisect_expand};

/// Pulled-back normalization quadruple (c1, c2, c3, c4) together with the
/// chain factors that rescale the derivative pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NormalizationData {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub dtheta2_c3: f64,
    pub dtheta2_c4: f64,
    pub dphi1_mhalf: f64,
    pub dphi1_zero: f64,
}

impl NormalizationData {
    pub fn from_geometry(g: &ClaimGeometry) -> Self {
        Self {
            c1: 0.0,
            c2: g.c2,
            c3: 0.0,
            c4: g.c4,
            dtheta2_c3: g.dtheta2_c3,
            dtheta2_c4: g.dtheta2_c4,
            dphi1_mhalf: g.dphi1_mhalf,
            dphi1_zero: g.dphi1_zero,
        }
    }

    pub fn g0(&self) -> f64 {
        (self.c4 - self.c3) / (self.c2 - self.c1)
    }

    /// f'(c1) in slit-plane units from u'(-1/2).
    pub fn t_of(&self, t: f64) -> f64 {
        t / (self.dtheta2_c3 * self.dphi1_mhalf)
    }

    /// f'(c2) in slit-plane units from u'(0).
    pub fn s_of(&self, s: f64) -> f64 {
        s / (self.dtheta2_c4 * self.dphi1_zero)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !(-1.0 < x && x < 1.0) {
            return Err(Error::DomainError {
                x,
                domain: "(-1, 1)",
            });
        }
        Ok(())
    }
}

/// A concrete member of the normalized class, built from a finite positive
/// measure outside the slits plus an affine part:
/// f(z) = c3 + a (z - c1) + sum_i w_i (1/(t_i - z) - 1/(t_i - c1)).
#[derive(Debug, Clone)]
pub struct HerglotzSample {
    pub a: f64,
    pub atoms: Vec<(f64, f64)>,
    pub c1: f64,
    pub c3: f64,
}

impl HerglotzSample {
    pub fn eval(&self, x: f64) -> f64 {
        let mut v = self.c3 + self.a * (x - self.c1);
        for &(t, w) in &self.atoms {
            v += w * (1.0 / (t - x) - 1.0 / (t - self.c1));
        }
        v
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let mut v = self.a;
        for &(t, w) in &self.atoms {
            v += w / ((t - x) * (t - x));
        }
        v
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        let mut v = 0.0;
        for &(t, w) in &self.atoms {
            v += 2.0 * w / ((t - x) * (t - x) * (t - x));
        }
        v
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut v = Complex64::new(self.c3 + self.a * (z.re - self.c1), self.a * z.im);
        for &(t, w) in &self.atoms {
            v += w * (1.0 / (Complex64::new(t, 0.0) - z) - 1.0 / (t - self.c1));
        }
        v
    }
}

/// Draws a measure-sampled member with f(c2) = c4 enforced; with
/// `capped = true` the draw is rejected until -1 <= f <= 1 on (-1, 1),
/// which puts the sample in the normalized class proper.
pub fn sample_herglotz(
    n_atoms: usize,
    rng: &mut impl Rng,
    norm: &NormalizationData,
    capped: bool,
) -> Result<HerglotzSample> {
    for _ in 0..400 {
        let mut atoms = Vec::with_capacity(n_atoms);
        for _ in 0..n_atoms {
            // heavy-tailed support outside the slits
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let t = sign / rng.gen_range(1e-3..1.0f64).powf(1.5);
            let t = t.clamp(-1e6, 1e6);
            if t.abs() <= 1.0 + 1e-9 {
                continue;
            }
            let w: f64 = rng.gen_range(0.0..1.0);
            atoms.push((t, w));
        }
        // rescale the measure so a positive affine weight remains
        let gap = norm.c4 - norm.c3;
        let kernel_sum: f64 = atoms
            .iter()
            .map(|&(t, w)| w * (1.0 / (t - norm.c2) - 1.0 / (t - norm.c1)))
            .sum();
        let rho: f64 = rng.gen_range(0.0..0.95);
        if kernel_sum > 0.0 {
            let scale = rho * gap / kernel_sum;
            for a in &mut atoms {
                a.1 *= scale;
            }
        } else {
            atoms.clear();
        }
        let measured: f64 = atoms
            .iter()
            .map(|&(t, w)| w * (1.0 / (t - norm.c2) - 1.0 / (t - norm.c1)))
            .sum();
        let a = (gap - measured) / (norm.c2 - norm.c1);
        if a < 0.0 {
            return Err(Error::InfeasibleNormalization { a });
        }
        let sample = HerglotzSample {
            a,
            atoms,
            c1: norm.c1,
            c3: norm.c3,
        };
        if !capped {
            return Ok(sample);
        }
        let ok = (0..200).all(|k| {
            let x = -1.0 + 2.0 * (k as f64 + 0.5) / 200.0;
            let v = sample.eval(x);
            (-1.0..=1.0).contains(&v)
        }) && sample.eval(-1.0 + 1e-9) >= -1.0
            && sample.eval(1.0 - 1e-9) <= 1.0;
        if ok {
            return Ok(sample);
        }
    }
    Err(Error::NoConvergence {
        context: "herglotz rejection sampling",
        iterations: 400,
        residual: f64::NAN,
    })
}

/// Two-sided classical bounds on f, f' and f'' at a point, from the integral
/// representation and the two normalization pins alone.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalBounds {
    pub f: (f64, f64),
    pub df: (f64, f64),
    pub d2f: (f64, f64),
}

pub fn classical_bounds(x: f64, norm: &NormalizationData) -> Result<ClassicalBounds> {
    norm.check_domain(x)?;
    let (c1, c2, c3) = (norm.c1, norm.c2, norm.c3);
    let g0 = norm.g0();
    // bounds on the divided difference G(x) = (f(x) - c3)/(x - c1)
    let lo_ratio = g0 * (1.0 - c2) / (1.0 - x);
    let hi_ratio = g0 * (1.0 + c2) / (1.0 + x);
    let (g_lo, g_hi) = if x <= c2 {
        (lo_ratio, hi_ratio)
    } else {
        (hi_ratio, lo_ratio)
    };
    let f = if x >= c1 {
        (c3 + (x - c1) * g_lo, c3 + (x - c1) * g_hi)
    } else {
        (c3 + (x - c1) * g_hi, c3 + (x - c1) * g_lo)
    };

    // logarithmic-derivative bound f'/(f - c3) in [l, u]
    let l = (1.0 + c1) / ((x - c1) * (1.0 + x));
    let u = (1.0 - c1) / ((x - c1) * (1.0 - x));
    let df = if x > c1 {
        // positive factors: products of interval endpoints
        (l * (f.0 - c3), u * (f.1 - c3))
    } else if x < c1 {
        // both ratios negative, f - c3 negative
        (u * (f.1 - c3), l * (f.0 - c3))
    } else {
        (f64::NEG_INFINITY, f64::INFINITY)
    };

    let d2f = (-2.0 * df.1 / (1.0 + x), 2.0 * df.1 / (1.0 - x));
    Ok(ClassicalBounds { f, df, d2f })
}

/// The sharpened piecewise envelope pair (lower, upper) with its derivative
/// envelopes, for a fixed rescaled derivative pair.
#[derive(Debug, Clone)]
pub struct BoundEnvelope {
    pub norm: NormalizationData,
    /// u-frame derivative pair.
    pub t: f64,
    pub s: f64,
    /// slit-frame derivative pair T(t), S(s).
    pub tt: f64,
    pub ss: f64,
    /// Schwarzian-extremal second derivatives at c1 and c2.
    pub z_ext: f64,
    pub x_ext: f64,
    /// kink of the lower middle piece: location and line slope.
    pub kink_lo: (f64, f64),
    /// kink of the upper middle piece.
    pub kink_hi: (f64, f64),
    /// range caps in the slit frame.
    pub m_lo: f64,
    pub m_hi: f64,
}

impl BoundEnvelope {
    pub fn build(t: f64, s: f64, norm: &NormalizationData) -> Result<Self> {
        Self::build_with_caps(t, s, norm, -1.0, 1.0)
    }

    pub fn build_with_caps(
        t: f64,
        s: f64,
        norm: &NormalizationData,
        m_lo: f64,
        m_hi: f64,
    ) -> Result<Self> {
        let tt = norm.t_of(t);
        let ss = norm.s_of(s);
        let (c1, c2, c3, c4) = (norm.c1, norm.c2, norm.c3, norm.c4);
        let delta = c2 - c1;
        if tt <= 0.0 || ss <= 0.0 {
            return Err(Error::DomainError {
                x: tt.min(ss),
                domain: "positive rescaled derivatives",
            });
        }
        let z_ext = 2.0 * tt * (1.0 - (tt / ss).sqrt()) / delta;
        let x_ext = 2.0 * ss * ((ss / tt).sqrt() - 1.0) / delta;

        // lower middle kink: curve y from c1 meets the chord into (c2, S)
        // subject to the exact area c4 - c3.
        let gap = c4 - c3;
        let m0 = -2.0 * tt / (1.0 + c1);
        let m1 = -2.0 * (ss - tt) / (delta * (1.0 + c1));
        let y = |x: f64| {
            let u = x - c1;
            tt + m0 * u + m1 * u * u / 2.0
        };
        let int_y = |x: f64| {
            let u = x - c1;
            tt * u + m0 * u * u / 2.0 + m1 * u * u * u / 6.0
        };
        let area_lo = |xh: f64| int_y(xh) + (c2 - xh) * (y(xh) + ss) / 2.0;
        let xh = bisect(
            "lower kink",
            |x| area_lo(x) - gap,
            c1 + 1e-12,
            c2 - 1e-12,
            1e-13,
        )?;
        let n_lo = (ss - y(xh)) / (c2 - xh);

        // upper middle kink: chord from (c1, T) meets the backward curve Y.
        let mm0 = 2.0 * ss / (1.0 - c2);
        let mm1 = 2.0 * (ss - tt) / (delta * (1.0 - c2));
        let yy = |x: f64| {
            let v = x - c2;
            ss + mm0 * v + mm1 * v * v / 2.0
        };
        let int_yy_to_c2 = |x: f64| {
            // integral of Y from x to c2
            let v = x - c2;
            -(ss * v + mm0 * v * v / 2.0 + mm1 * v * v * v / 6.0)
        };
        let area_hi = |xh: f64| (xh - c1) * (tt + yy(xh)) / 2.0 + int_yy_to_c2(xh);
        let xh2 = bisect(
            "upper kink",
            |x| area_hi(x) - gap,
            c1 + 1e-12,
            c2 - 1e-12,
            1e-13,
        )?;
        let n_hi = (yy(xh2) - tt) / (xh2 - c1);

        Ok(Self {
            norm: *norm,
            t,
            s,
            tt,
            ss,
            z_ext,
            x_ext,
            kink_lo: (xh, n_lo),
            kink_hi: (xh2, n_hi),
            m_lo,
            m_hi,
        })
    }

    fn mid_coeffs(&self) -> (f64, f64, f64, f64) {
        let (c1, c2) = (self.norm.c1, self.norm.c2);
        let delta = c2 - c1;
        let m0 = -2.0 * self.tt / (1.0 + c1);
        let m1 = -2.0 * (self.ss - self.tt) / (delta * (1.0 + c1));
        let mm0 = 2.0 * self.ss / (1.0 - c2);
        let mm1 = 2.0 * (self.ss - self.tt) / (delta * (1.0 - c2));
        (m0, m1, mm0, mm1)
    }

    /// Lower envelope.
    pub fn lower(&self, x: f64) -> f64 {
        let n = &self.norm;
        let (c1, c2, c3, c4) = (n.c1, n.c2, n.c3, n.c4);
        if x <= c1 {
            // quadratic piece anchored at the range floor
            let u = x - c1;
            c3 - self.tt * (c1 - x)
                + (self.tt * (1.0 + c1) + self.m_lo - c3) * u * u / ((1.0 + c1) * (1.0 + c1))
        } else if x <= c2 {
            let (xh, n_lo) = self.kink_lo;
            let (m0, m1, _, _) = self.mid_coeffs();
            let int_y = |z: f64| {
                let u = z - c1;
                self.tt * u + m0 * u * u / 2.0 + m1 * u * u * u / 6.0
            };
            if x <= xh {
                c3 + int_y(x)
            } else {
                let y_xh = self.tt + m0 * (xh - c1) + m1 * (xh - c1) * (xh - c1) / 2.0;
                c3 + int_y(xh)
                    + y_xh * (x - xh)
                    + n_lo * (x - xh) * (x - xh) / 2.0
            }
        } else {
            // Schwarzian-extremal lower piece on the right
            let v = x - c2;
            c4 + schwarzian_integral(self.ss, self.x_ext, v)
        }
    }

    /// Upper envelope.
    pub fn upper(&self, x: f64) -> f64 {
        let n = &self.norm;
        let (c1, c2, c3, c4) = (n.c1, n.c2, n.c3, n.c4);
        if x <= c1 {
            // Schwarzian-extremal upper piece on the left
            let u = x - c1;
            c3 + schwarzian_integral(self.tt, self.z_ext, u)
        } else if x <= c2 {
            let (xh2, n_hi) = self.kink_hi;
            let (_, _, mm0, mm1) = self.mid_coeffs();
            if x >= xh2 {
                let v = x - c2;
                c4 + self.ss * v + mm0 * v * v / 2.0 + mm1 * v * v * v / 6.0
            } else {
                // chord piece from (c1, T)
                let f_xh2 = {
                    let v = xh2 - c2;
                    c4 + self.ss * v + mm0 * v * v / 2.0 + mm1 * v * v * v / 6.0
                };
                f_xh2
                    - (self.tt * (xh2 - x)
                        + n_hi * ((xh2 - c1) * (xh2 - c1) - (x - c1) * (x - c1)) / 2.0)
            }
        } else {
            // quadratic cap piece on the right
            let v = x - c2;
            c4 + self.ss * v
                + (self.m_hi - c4 - self.ss * (1.0 - c2)) * v * v / ((1.0 - c2) * (1.0 - c2))
        }
    }

    /// Upper bound on f' (Heaviside-switched ratio bound outside the middle
    /// interval, the convexity envelope inside it).
    pub fn deriv_upper(&self, x: f64) -> Result<f64> {
        let n = &self.norm;
        let (c1, c2) = (n.c1, n.c2);
        if (x - c1).abs() < 1e-9 && !(c1..=c2).contains(&x) {
            return Err(Error::DomainError {
                x,
                domain: "derivative bound singular at c1",
            });
        }
        if x < c1 {
            let factor = (1.0 + c1) / ((x - c1) * (1.0 + x));
            Ok(factor * (self.lower(x) - n.c3))
        } else if x <= c2 {
            let (m0, m1, mm0, mm1) = self.mid_coeffs();
            // forward with the largest admissible curvature, backward with
            // the smallest, plus the endpoint convext bound
            let u = x - c1;
            let fwd = self.tt + 2.0 * self.tt / (1.0 - c2) * u
                + (2.0 * (self.ss - self.tt) / ((c2 - c1) * (1.0 - c2))) * u * u / 2.0;
            let v = x - c2;
            let bwd = self.ss + m0_at_c2(m0, m1, c1, c2) * v + m1 * v * v / 2.0;
            let _ = (mm0, mm1);
            Ok(fwd.min(bwd).min(self.tt.max(self.ss)))
        } else {
            let factor = (1.0 - c1) / ((x - c1) * (1.0 - x));
            Ok(factor * (self.upper(x) - n.c3))
        }
    }

    /// Lower bound on f'.
    pub fn deriv_lower(&self, x: f64) -> Result<f64> {
        let n = &self.norm;
        let (c1, c2) = (n.c1, n.c2);
        if x < c1 {
            let factor = (1.0 - c1) / ((x - c1) * (1.0 - x));
            Ok((factor * (self.upper(x) - n.c3)).max(0.0))
        } else if x <= c2 {
            let (m0, m1, mm0, mm1) = self.mid_coeffs();
            let u = x - c1;
            let fwd = self.tt + m0 * u + m1 * u * u / 2.0;
            let v = x - c2;
            let bwd = self.ss + mm0 * v + mm1 * v * v / 2.0;
            Ok(fwd.max(bwd).max(0.0))
        } else {
            let factor = (1.0 + c1) / ((x - c1) * (1.0 + x));
            Ok((factor * (self.lower(x) - n.c3)).max(0.0))
        }
    }
}

fn m0_at_c2(m0: f64, m1: f64, c1: f64, c2: f64) -> f64 {
    m0 + m1 * (c2 - c1)
}

/// Integral of the Schwarzian-equality derivative 4 d0^3 / (2 d0 - zeta u)^2
/// from 0 to u, continuous through zeta -> 0.
fn schwarzian_integral(d0: f64, zeta: f64, u: f64) -> f64 {
    let denom = 2.0 * d0 - zeta * u;
    2.0 * d0 * d0 * u / denom
}

/// Transferred envelopes on the domain interval: composition with the real
/// slices of the uniformizing maps, including the transferred derivative
/// bound with a conservative interval maximum of the target map derivative.
pub struct TransferredEnvelope<'g> {
    pub env: BoundEnvelope,
    pub geom: &'g ClaimGeometry,
}

impl<'g> TransferredEnvelope<'g> {
    pub fn new(env: BoundEnvelope, geom: &'g ClaimGeometry) -> Self {
        Self { env, geom }
    }

    fn clamp_slit(v: f64) -> f64 {
        v.clamp(-1.0 + 1e-13, 1.0 - 1e-13)
    }

    /// Lower transferred envelope on the domain interval.
    pub fn lower(&self, x: f64) -> f64 {
        let xi = self.geom.phi1_real(x);
        self.geom.theta2_real(Self::clamp_slit(self.env.lower(xi)))
    }

    pub fn upper(&self, x: f64) -> f64 {
        let xi = self.geom.phi1_real(x);
        self.geom.theta2_real(Self::clamp_slit(self.env.upper(xi)))
    }

    /// Conservative maximum of Theta2' over the envelope interval at xi.
    fn theta2_deriv_range(&self, xi: f64) -> (f64, f64) {
        let lo = Self::clamp_slit(self.env.lower(xi));
        let hi = Self::clamp_slit(self.env.upper(xi));
        let mut dmin = f64::INFINITY;
        let mut dmax = f64::NEG_INFINITY;
        let n = 33;
        for k in 0..=n {
            let v = lo + (hi - lo) * k as f64 / n as f64;
            let d = self.geom.theta2_deriv_real(v);
            dmin = dmin.min(d);
            dmax = dmax.max(d);
        }
        // guard against the sampled extremum undershooting the true one
        (dmin * (1.0 - 1e-8), dmax * (1.0 + 1e-8))
    }

    /// Transferred derivative upper bound on u'.
    pub fn deriv_upper(&self, x: f64) -> Result<f64> {
        let xi = self.geom.phi1_real(x);
        let (_, dmax) = self.theta2_deriv_range(xi);
        let dphi1 = 1.0 / self.geom.theta1_deriv_real(xi);
        Ok(dmax * self.env.deriv_upper(xi)? * dphi1)
    }

    pub fn deriv_lower(&self, x: f64) -> Result<f64> {
        let xi = self.geom.phi1_real(x);
        let (dmin, _) = self.theta2_deriv_range(xi);
        let dphi1 = 1.0 / self.geom.theta1_deriv_real(xi);
        Ok((dmin * self.env.deriv_lower(xi)? * dphi1).max(0.0))
    }
}

/// The realizable derivative set: the published bounding square intersected
/// with the realizability conditions carried by the envelope construction.
#[derive(Debug, Clone)]
pub struct SetS {
    pub norm: NormalizationData,
    pub t_range: (f64, f64),
    pub s_range: (f64, f64),
}

/// One sampled boundary description of S: for a grid of t, the binding
/// s-interval and which constraint binds on each side.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SCurves {
    pub t_grid: Vec<f64>,
    /// curve from the left range-cap condition (f(-1) >= -1)
    pub z_curve: Vec<Option<f64>>,
    /// curve from the right range-cap condition (f(1) <= 1)
    pub c_curve: Vec<Option<f64>>,
    /// the coincident pair of middle-extremal conditions
    pub g_curve: Vec<Option<f64>>,
    pub k_curve: Vec<Option<f64>>,
}

impl SetS {
    pub fn new(norm: NormalizationData, t_range: (f64, f64), s_range: (f64, f64)) -> Self {
        Self {
            norm,
            t_range,
            s_range,
        }
    }

    /// Left-cap integral: the minimal drop of f over (-1, c1).
    fn left_drop(&self, tt: f64, ss: f64) -> f64 {
        let delta = self.norm.c2 - self.norm.c1;
        let z = 2.0 * tt * (1.0 - (tt / ss).sqrt()) / delta;
        -schwarzian_integral(tt, z, -(1.0 + self.norm.c1))
    }

    /// Right-cap integral: the minimal rise of f over (c2, 1).
    fn right_rise(&self, tt: f64, ss: f64) -> f64 {
        let delta = self.norm.c2 - self.norm.c1;
        let x = 2.0 * ss * ((ss / tt).sqrt() - 1.0) / delta;
        let denom = 2.0 * ss - x * (1.0 - self.norm.c2);
        if denom <= 0.0 {
            return f64::INFINITY;
        }
        schwarzian_integral(ss, x, 1.0 - self.norm.c2)
    }

    pub fn contains(&self, t: f64, s: f64) -> bool {
        if !(self.t_range.0..=self.t_range.1).contains(&t)
            || !(self.s_range.0..=self.s_range.1).contains(&s)
        {
            return false;
        }
        let tt = self.norm.t_of(t);
        let ss = self.norm.s_of(s);
        if tt <= 0.0 || ss <= 0.0 {
            return false;
        }
        // f(-1) >= m_lo = -1
        if self.left_drop(tt, ss) > 1.0 + self.norm.c3 {
            return false;
        }
        // f(1) <= m_hi = 1
        if self.right_rise(tt, ss) > 1.0 - self.norm.c4 {
            return false;
        }
        // connecting-extremal (Cauchy-Schwarz) condition
        let g0 = self.norm.g0();
        (self.norm.c2 - self.norm.c1) * (tt * ss).sqrt() >= (self.norm.c4 - self.norm.c3) - 1e-12
            && g0 > 0.0
    }

    /// Solve the four boundary curves over a t-grid.
    pub fn curves(&self, n: usize) -> SCurves {
        let mut t_grid = Vec::with_capacity(n);
        let mut z_curve = Vec::new();
        let mut c_curve = Vec::new();
        let mut g_curve = Vec::new();
        let mut k_curve = Vec::new();
        for k in 0..n {
            let t = self.t_range.0 + (self.t_range.1 - self.t_range.0) * k as f64 / (n - 1) as f64;
            t_grid.push(t);
            let tt = self.norm.t_of(t);
            let s_of = |s: f64| self.norm.s_of(s);
            // 1 + c3 - left_drop crosses zero from above as s decreases
            let zf = |s: f64| 1.0 + self.norm.c3 - self.left_drop(tt, s_of(s));
            z_curve.push(bisect_expand("Z curve", zf, 1.0, 0.5, 1e-11).ok());
            let cf = |s: f64| 1.0 - self.norm.c4 - self.right_rise(tt, s_of(s));
            c_curve.push(bisect_expand("C curve", cf, 2.0, 0.5, 1e-11).ok());
            // the coincident middle-extremal curves
            let g0 = self.norm.g0();
            let target_ss = g0 * g0 / tt;
            let s_val = target_ss * self.norm.dtheta2_c4 * self.norm.dphi1_zero;
            g_curve.push(Some(s_val));
            k_curve.push(Some(s_val));
        }
        SCurves {
            t_grid,
            z_curve,
            c_curve,
            g_curve,
            k_curve,
        }
    }

    /// Feasible grid points for the verification sweeps.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for i in 0..n {
            let t = self.t_range.0 + (self.t_range.1 - self.t_range.0) * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let s =
                    self.s_range.0 + (self.s_range.1 - self.s_range.0) * j as f64 / (n - 1) as f64;
                if self.contains(t, s) {
                    pts.push((t, s));
                }
            }
        }
        pts
    }
}
