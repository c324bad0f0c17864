//! Composite plane regions: lens neighborhoods, horizontal bands, the
//! sector-notched target set, and boolean combinations, with conservative
//! clearance estimates and sampled boundaries for inclusion sweeps.

use num_complex::Complex64;

use crate::conformal::{ConformalMap, PoincareNbhd, Side, PI};
use crate::error::{Error, Result};

/// The target set E: the lens over I2 with the sector notch at its left end,
/// united with the two filler lenses over I3 and I4.
#[derive(Debug, Clone)]
pub struct NotchedTarget {
    pub lens2: PoincareNbhd,
    pub lens3: PoincareNbhd,
    pub lens4: PoincareNbhd,
    /// Slit plane onto the I2 lens.
    pub theta2_tilde: ConformalMap,
    pub vartheta: f64,
    /// Cached image of the upper sector ray, the notch boundary curve.
    notch_upper: Vec<Complex64>,
}

impl NotchedTarget {
    pub fn new(
        lens2: PoincareNbhd,
        lens3: PoincareNbhd,
        lens4: PoincareNbhd,
        theta2_tilde: ConformalMap,
        vartheta: f64,
    ) -> Self {
        // Image of the upper boundary ray of the sector at -1; log-spaced in
        // the ray parameter so both the vertex region and the far tail are
        // resolved.
        let dir = Complex64::new((PI - vartheta).cos(), (PI - vartheta).sin());
        let n = 600;
        let notch_upper: Vec<Complex64> = (0..n)
            .map(|k| {
                let rho = 10f64.powf(-4.0 + 10.0 * k as f64 / (n - 1) as f64);
                theta2_tilde.eval(Complex64::new(-1.0, 0.0) + rho * dir)
            })
            .collect();
        Self {
            lens2,
            lens3,
            lens4,
            theta2_tilde,
            vartheta,
            notch_upper,
        }
    }

    /// True when the slit-plane preimage of z falls in the removed sector.
    fn in_sector_preimage(&self, z: Complex64) -> bool {
        let w = self.theta2_tilde.inverse_eval(z);
        let a = (w + Complex64::new(1.0, 0.0)).arg();
        a.abs() > PI - self.vartheta
    }

    fn dist_to_notch(&self, z: Complex64) -> f64 {
        let zc = if z.im >= 0.0 { z } else { z.conj() };
        self.notch_upper
            .windows(2)
            .map(|w| dist_point_segment(zc, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Conservative signed clearance: positive values bound the distance to
    /// the boundary from below for interior points.
    pub fn clearance(&self, z: Complex64) -> f64 {
        let in_notched_lens2 = {
            let c2 = self.lens2.clearance(z);
            if c2 <= 0.0 {
                c2
            } else if self.in_sector_preimage(z) {
                -self.dist_to_notch(z)
            } else {
                c2.min(self.dist_to_notch(z))
            }
        };
        in_notched_lens2
            .max(self.lens3.clearance(z))
            .max(self.lens4.clearance(z))
    }

    pub fn contains(&self, z: Complex64, margin: f64) -> bool {
        self.clearance(z) > margin
    }

    /// Boundary polyline pieces (upper half; callers mirror for the lower).
    pub fn boundary_components(&self, n: usize) -> Vec<Vec<Complex64>> {
        let mut comps = Vec::new();
        // Arc of lens2 clipped to the part outside the notch pullback, the
        // notch curve itself, and the filler-lens arcs poking out of the
        // notched set; a sampled over-approximation of the true boundary.
        let arc2: Vec<Complex64> = self
            .lens2
            .boundary(Side::Upper, n)
            .into_iter()
            .collect();
        comps.push(arc2);
        comps.push(self.notch_upper.clone());
        comps.push(self.lens3.boundary(Side::Upper, n));
        comps.push(self.lens4.boundary(Side::Upper, n));
        comps
    }
}

/// A region given by lens algebra plus the notched target set.
#[derive(Debug, Clone)]
pub enum Region {
    Lens(PoincareNbhd),
    Half(PoincareNbhd, Side),
    /// Horizontal band lo < Im z < hi.
    Band { lo: f64, hi: f64 },
    Target(std::sync::Arc<NotchedTarget>),
    Union(Vec<Region>),
    Inter(Vec<Region>),
    /// Complement (used for excisions such as E minus a lens).
    Not(Box<Region>),
}

impl Region {
    /// Signed conservative clearance; positive inside.
    pub fn clearance(&self, z: Complex64) -> f64 {
        match self {
            Region::Lens(nb) => nb.clearance(z),
            Region::Half(nb, side) => nb.half_clearance(z, *side),
            Region::Band { lo, hi } => (z.im - lo).min(hi - z.im),
            Region::Target(t) => t.clearance(z),
            Region::Union(rs) => rs
                .iter()
                .map(|r| r.clearance(z))
                .fold(f64::NEG_INFINITY, f64::max),
            Region::Inter(rs) => rs
                .iter()
                .map(|r| r.clearance(z))
                .fold(f64::INFINITY, f64::min),
            Region::Not(r) => -r.clearance(z),
        }
    }

    pub fn contains(&self, z: Complex64, margin: f64) -> Result<bool> {
        self.check_degenerate()?;
        Ok(self.clearance(z) > margin)
    }

    fn check_degenerate(&self) -> Result<()> {
        match self {
            Region::Union(rs) | Region::Inter(rs) if rs.is_empty() => {
                Err(Error::DegenerateBoundary)
            }
            _ => Ok(()),
        }
    }

    /// Sampled boundary points, grouped per component. Pieces interior to the
    /// composite are kept by unions only when no sibling strictly contains
    /// them; the result is a dense subset of the closure of the boundary.
    pub fn boundary_samples(&self, n: usize) -> Vec<Vec<Complex64>> {
        match self {
            Region::Lens(nb) => vec![
                nb.boundary(Side::Upper, n),
                nb.boundary(Side::Lower, n),
            ],
            Region::Half(nb, side) => {
                let mut arc = nb.boundary(*side, n);
                // close with the interval edge
                for k in 0..n {
                    let x = nb.right - (nb.right - nb.left) * k as f64 / (n - 1) as f64;
                    arc.push(Complex64::new(x, 0.0));
                }
                vec![arc]
            }
            Region::Band { lo, hi } => {
                // unbounded; sample a wide reference box
                let xs = |y: f64| {
                    (0..n)
                        .map(|k| Complex64::new(-8.0 + 16.0 * k as f64 / (n - 1) as f64, y))
                        .collect::<Vec<_>>()
                };
                vec![xs(*lo), xs(*hi)]
            }
            Region::Target(t) => {
                let mut comps = t.boundary_components(n);
                let lower: Vec<Vec<Complex64>> = comps
                    .iter()
                    .map(|c| c.iter().map(|z| z.conj()).collect())
                    .collect();
                comps.extend(lower);
                comps
            }
            Region::Union(rs) => {
                let mut out = Vec::new();
                for (i, r) in rs.iter().enumerate() {
                    for comp in r.boundary_samples(n) {
                        let kept: Vec<Complex64> = comp
                            .into_iter()
                            .filter(|z| {
                                rs.iter()
                                    .enumerate()
                                    .all(|(j, s)| j == i || s.clearance(*z) <= 1e-12)
                            })
                            .collect();
                        if kept.len() >= 2 {
                            out.push(kept);
                        }
                    }
                }
                out
            }
            Region::Inter(rs) => {
                let mut out = Vec::new();
                for (i, r) in rs.iter().enumerate() {
                    for comp in r.boundary_samples(n) {
                        let kept: Vec<Complex64> = comp
                            .into_iter()
                            .filter(|z| {
                                rs.iter()
                                    .enumerate()
                                    .all(|(j, s)| j == i || s.clearance(*z) >= -1e-12)
                            })
                            .collect();
                        if kept.len() >= 2 {
                            out.push(kept);
                        }
                    }
                }
                out
            }
            Region::Not(r) => r.boundary_samples(n),
        }
    }

    /// Export the sampled boundary as CSV (re, im rows, blank line between
    /// components).
    pub fn boundary_csv(&self, n: usize) -> String {
        let mut out = String::new();
        for comp in self.boundary_samples(n) {
            for z in comp {
                out.push_str(&format!("{},{}\n", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }
}

/// Inclusion check with a worst-point report.
#[derive(Debug, Clone)]
pub struct InclusionReport {
    pub included: bool,
    pub worst_clearance: f64,
    pub worst_point: Complex64,
    pub samples: usize,
}

/// Every boundary sample of `inner` must clear `outer` by `margin`.
pub fn region_included(
    inner: &Region,
    outer: &Region,
    margin: f64,
    n: usize,
) -> Result<InclusionReport> {
    let comps = inner.boundary_samples(n);
    let mut worst = f64::INFINITY;
    let mut worst_point = Complex64::new(f64::NAN, f64::NAN);
    let mut count = 0usize;
    for comp in &comps {
        for &z in comp {
            let c = outer.clearance(z);
            count += 1;
            if c < worst {
                worst = c;
                worst_point = z;
            }
        }
    }
    if count < 3 {
        return Err(Error::DegenerateBoundary);
    }
    Ok(InclusionReport {
        included: worst > margin,
        worst_clearance: worst,
        worst_point,
        samples: count,
    })
}

/// Check a sampled point set against a region, reporting the worst margin.
pub fn points_included(
    points: &[Complex64],
    outer: &Region,
    margin: f64,
) -> InclusionReport {
    let mut worst = f64::INFINITY;
    let mut worst_point = Complex64::new(f64::NAN, f64::NAN);
    for &z in points {
        let c = outer.clearance(z);
        if c < worst {
            worst = c;
            worst_point = z;
        }
    }
    InclusionReport {
        included: worst > margin,
        worst_clearance: worst,
        worst_point,
        samples: points.len(),
    }
}

fn dist_point_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + t * ab)).norm()
}

/// Winding number of a closed polyline around z, for cross-validation of the
/// exact lens tests.
pub fn winding_number(polyline: &[Complex64], z: Complex64) -> i32 {
    let mut total = 0.0;
    for w in polyline.windows(2) {
        let a = w[0] - z;
        let b = w[1] - z;
        total += (b.arg() - a.arg() + PI).rem_euclid(2.0 * PI) - PI;
    }
    (total / (2.0 * PI)).round() as i32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::LensConvention;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn unit_half_disk_contains() {
        let nb = PoincareNbhd::new(-1.0, 1.0, PI / 2.0);
        let r = Region::Lens(nb);
        assert!(r.contains(c(0.0, 0.5), 0.4).unwrap());
        assert!(!r.contains(c(0.0, 0.5), 0.6).unwrap());
        // boundary sample with zero margin: strict interior fails
        let b = nb.boundary_point(1.0);
        assert!(!r.contains(b, 0.0).unwrap());
    }

    #[test]
    fn nested_lens_inclusion() {
        let inner = Region::Lens(PoincareNbhd::new(-0.5, 0.5, PI / 2.0));
        let outer = Region::Lens(PoincareNbhd::new(-1.0, 1.0, PI / 2.0));
        let rep = region_included(&inner, &outer, 0.1, 64).unwrap();
        assert!(rep.included, "worst {}", rep.worst_clearance);
        // A region in itself fails any positive margin.
        let same = region_included(&outer, &outer, 0.0, 64).unwrap();
        assert!(!same.included);
    }

    #[test]
    fn winding_number_cross_validates_lens_test() {
        let nb = PoincareNbhd::new(-1.2, 0.7, 0.4 * PI);
        let mut poly = nb.boundary(Side::Upper, 800);
        let mut lower = nb.boundary(Side::Lower, 800);
        lower.reverse();
        poly.extend(lower);
        poly.push(poly[0]);
        let mut state = 0x243f6a8885a308d3u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for _ in 0..1000 {
            let z = c(rnd() * 2.0, rnd() * 1.5);
            if nb.clearance(z).abs() < 2e-3 {
                continue; // skip points hugging the boundary at sampling resolution
            }
            let exact = nb.contains(z, 0.0);
            let wind = winding_number(&poly, z) != 0;
            assert_eq!(exact, wind, "disagreement at {z}");
        }
    }

    #[test]
    fn band_and_boolean_algebra() {
        let band = Region::Band { lo: 0.1, hi: 0.5 };
        let lens = Region::Lens(PoincareNbhd::new(-1.0, 1.0, PI / 2.0));
        let inter = Region::Inter(vec![band, lens]);
        assert!(inter.contains(c(0.0, 0.3), 0.05).unwrap());
        assert!(!inter.contains(c(0.0, 0.7), 0.0).unwrap());
        assert!(!inter.contains(c(0.0, 0.05), 0.0).unwrap());
        let not = Region::Not(Box::new(Region::Lens(PoincareNbhd::new(
            -0.2,
            0.2,
            PI / 2.0,
        ))));
        assert!(not.contains(c(0.6, 0.01), 0.1).unwrap());
    }

    #[test]
    fn notched_target_basic_shape() {
        // Build E with the published intervals and angles.
        let conv = LensConvention::Thin;
        let lens2 = conv.nbhd(-2.347360978, 3.181216988, 0.28285 * PI);
        let lens3 = conv.nbhd(-2.347360978, 0.652639022, 0.8);
        let lens4 = conv.nbhd(1.681216988, 3.181216988, 0.4);
        let th2 = crate::conformal::build_theta(
            (lens2.left, lens2.right),
            lens2.theta,
            LensConvention::Thin,
            0.054381547700076493, // preimage of 0 under the sector variant
            0.0,
        )
        .unwrap();
        let e = NotchedTarget::new(lens2, lens3, lens4, th2, 0.24);
        // interior of the real interval stays inside
        assert!(e.contains(c(1.0, 0.0), 1e-3));
        assert!(e.contains(c(-1.0, 0.0), 1e-3));
        // far outside fails
        assert!(!e.contains(c(4.0, 0.0), 0.0));
        assert!(!e.contains(c(0.0, 3.0), 0.0));
    }
}
