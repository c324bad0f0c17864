//! Truncated bivariate power series on a triangular index set.
//!
//! Coefficients are stored in (i, j)-lexicographic order for all i + j <= D,
//! matching the serialized layout. Centers are explicit, as in the
//! univariate case.

use serde::{Deserialize, Serialize};

use crate::series::UnivariateSeries;

/// Default total degree for bivariate work.
pub const DEFAULT_DEGREE: usize = 20;

/// sum_{i+j<=D} coeffs[(i,j)] (x - cx)^i (y - cy)^j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariateSeries {
    pub center: (f64, f64),
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl BivariateSeries {
    pub fn zero(center: (f64, f64), degree: usize) -> Self {
        let len = (degree + 1) * (degree + 2) / 2;
        Self {
            center,
            degree,
            coeffs: vec![0.0; len],
        }
    }

    pub fn constant(value: f64, center: (f64, f64), degree: usize) -> Self {
        let mut s = Self::zero(center, degree);
        s.coeffs[0] = value;
        s
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + j <= self.degree);
        // row i starts after rows 0..i of lengths D+1, D, ...
        i * (self.degree + 1) - i * (i.wrapping_sub(1)) / 2 + j
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree {
            0.0
        } else {
            self.coeffs[self.idx(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, value: f64) {
        let k = self.idx(i, j);
        self.coeffs[k] = value;
    }

    /// Iterate (i, j, coeff) over the stored triangle.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let d = self.degree;
        (0..=d).flat_map(move |i| (0..=(d - i)).map(move |j| (i, j, self.coeff(i, j))))
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        // Horner in x of Horner-in-y rows.
        let dx = x - self.center.0;
        let dy = y - self.center.1;
        let mut acc = 0.0;
        for i in (0..=self.degree).rev() {
            let mut row = 0.0;
            for j in (0..=(self.degree - i)).rev() {
                row = row * dy + self.coeff(i, j);
            }
            acc = acc * dx + row;
        }
        acc
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            center: self.center,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.center, other.center);
        assert_eq!(self.degree, other.degree);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            center: self.center,
            degree: self.degree,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.center, other.center);
        assert_eq!(self.degree, other.degree);
        let mut out = Self::zero(self.center, self.degree);
        for (i, j, a) in self.iter() {
            if a == 0.0 {
                continue;
            }
            for (k, l, b) in other.iter() {
                if i + k + j + l <= self.degree && b != 0.0 {
                    let t = out.idx(i + k, j + l);
                    out.coeffs[t] += a * b;
                }
            }
        }
        out
    }

    pub fn partial_x(&self) -> Self {
        let mut out = Self::zero(self.center, self.degree);
        for (i, j, c) in self.iter() {
            if i >= 1 {
                out.set_coeff(i - 1, j, out.coeff(i - 1, j) + i as f64 * c);
            }
        }
        out
    }

    pub fn partial_y(&self) -> Self {
        let mut out = Self::zero(self.center, self.degree);
        for (i, j, c) in self.iter() {
            if j >= 1 {
                out.set_coeff(i, j - 1, out.coeff(i, j - 1) + j as f64 * c);
            }
        }
        out
    }

    /// Substitute bivariate series for both slots: s(A(x,y), B(x,y)).
    ///
    /// A and B share a center and degree; their values at that center should
    /// sit near this series' own center so the truncated expansion applies.
    pub fn compose_bi(&self, a: &BivariateSeries, b: &BivariateSeries) -> Self {
        assert_eq!(a.center, b.center);
        assert_eq!(a.degree, b.degree);
        let d = a.degree;
        let mut da = a.clone();
        da.coeffs[0] -= self.center.0;
        let mut db = b.clone();
        db.coeffs[0] -= self.center.1;
        // Horner in the x-slot, inner Horner in the y-slot.
        let mut acc = BivariateSeries::zero(a.center, d);
        for i in (0..=self.degree).rev() {
            let mut row = BivariateSeries::zero(a.center, d);
            for j in (0..=(self.degree - i)).rev() {
                row = row.mul(&db);
                row.coeffs[0] += self.coeff(i, j);
            }
            acc = acc.mul(&da);
            acc = acc.add(&row);
        }
        acc
    }

    /// Substitute univariate series for both slots: y |-> s(A(y), B(y)).
    pub fn compose_uni(&self, a: &UnivariateSeries, b: &UnivariateSeries) -> UnivariateSeries {
        assert_eq!(a.center, b.center);
        let n = a.order().max(b.order());
        let mut da = a.truncate(n);
        da.coeffs[0] -= self.center.0;
        let mut db = b.truncate(n);
        db.coeffs[0] -= self.center.1;
        let mut acc = UnivariateSeries::constant(0.0, a.center, n);
        for i in (0..=self.degree).rev() {
            let mut row = UnivariateSeries::constant(0.0, a.center, n);
            for j in (0..=(self.degree - i)).rev() {
                row = row.mul(&db);
                row.coeffs[0] += self.coeff(i, j);
            }
            acc = acc.mul(&da);
            acc = acc.add(&row);
        }
        acc
    }

    /// Swap the two variables.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero((self.center.1, self.center.0), self.degree);
        for (i, j, c) in self.iter() {
            out.set_coeff(j, i, c);
        }
        out
    }

    /// Rescale the first variable: s(x, y) -> s(a x, y) for center 0.
    pub fn scale_x(&self, a: f64) -> Self {
        assert_eq!(self.center.0, 0.0, "scale_x expects x-center 0");
        let mut out = self.clone();
        for i in 0..=self.degree {
            let f = a.powi(i as i32);
            for j in 0..=(self.degree - i) {
                let k = out.idx(i, j);
                out.coeffs[k] *= f;
            }
        }
        out
    }

    /// Rescale the second variable: s(x, y) -> s(x, a y) for center 0.
    pub fn scale_y(&self, a: f64) -> Self {
        assert_eq!(self.center.1, 0.0, "scale_y expects y-center 0");
        let mut out = self.clone();
        for i in 0..=self.degree {
            for j in 0..=(self.degree - i) {
                let k = out.idx(i, j);
                out.coeffs[k] *= a.powi(j as i32);
            }
        }
        out
    }

    /// Substitute a bivariate series for the second slot: s(x, z(x,y)),
    /// sharing the output x. Exact on the kept triangle; center offsets in
    /// the shared variable are absorbed by a Taylor shift of the rows.
    pub fn substitute_y(&self, z: &BivariateSeries) -> Self {
        let d = z.degree;
        let mut dz = z.clone();
        dz.coeffs[0] -= self.center.1;
        let xshift = z.center.0 - self.center.0;
        let mut acc = BivariateSeries::zero(z.center, d);
        for j in (0..=self.degree).rev() {
            acc = acc.mul(&dz);
            let row: Vec<f64> = (0..=(self.degree - j)).map(|i| self.coeff(i, j)).collect();
            let row = taylor_shift(&row, xshift);
            for (i, &c) in row.iter().enumerate() {
                if i > d {
                    break;
                }
                if c != 0.0 {
                    let k = acc.idx(i, 0);
                    acc.coeffs[k] += c;
                }
            }
        }
        acc
    }

    /// Substitute a bivariate series for the first slot: s(z(x,y), y),
    /// sharing the output y.
    pub fn substitute_x(&self, z: &BivariateSeries) -> Self {
        let d = z.degree;
        let mut dz = z.clone();
        dz.coeffs[0] -= self.center.0;
        let yshift = z.center.1 - self.center.1;
        let mut acc = BivariateSeries::zero(z.center, d);
        for i in (0..=self.degree).rev() {
            acc = acc.mul(&dz);
            let row: Vec<f64> = (0..=(self.degree - i)).map(|j| self.coeff(i, j)).collect();
            let row = taylor_shift(&row, yshift);
            for (j, &c) in row.iter().enumerate() {
                if j > d {
                    break;
                }
                if c != 0.0 {
                    let k = acc.idx(0, j);
                    acc.coeffs[k] += c;
                }
            }
        }
        acc
    }

    /// Exact recentering (polynomial shift in both variables).
    pub fn recenter(&self, new_center: (f64, f64)) -> Self {
        let sx = new_center.0 - self.center.0;
        let sy = new_center.1 - self.center.1;
        if sx == 0.0 && sy == 0.0 {
            return self.clone();
        }
        let d = self.degree;
        let mut out = Self::zero(new_center, d);
        // Shift row-by-row in y, then column-by-column in x, reusing the
        // univariate Taylor shift.
        // First: for each fixed i, shift the y-row.
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let row: Vec<f64> = (0..=(d - i)).map(|j| self.coeff(i, j)).collect();
            let shifted = taylor_shift(&row, sy);
            rows.push(shifted);
        }
        // Then shift in x for each fixed j.
        for j in 0..=d {
            let col: Vec<f64> = (0..=(d - j))
                .map(|i| rows[i].get(j).copied().unwrap_or(0.0))
                .collect();
            let shifted = taylor_shift(&col, sx);
            for (i, &v) in shifted.iter().enumerate() {
                out.set_coeff(i, j, v);
            }
        }
        out
    }

    /// Compose a univariate series with a bivariate inner argument:
    /// f(z(x,y)). Coefficients of f beyond the working degree cannot touch
    /// the kept triangle because z - f.center has no constant term... unless
    /// the heads mismatch, in which case the offset is carried exactly.
    pub fn univariate_of(f: &UnivariateSeries, z: &BivariateSeries) -> Self {
        let d = z.degree;
        let mut dz = z.clone();
        dz.coeffs[0] -= f.center;
        let mut acc = BivariateSeries::zero(z.center, d);
        let top = f.order();
        for k in (0..=top).rev() {
            acc = acc.mul(&dz);
            acc.coeffs[0] += f.coeff(k);
        }
        acc
    }

    /// Embed a univariate series in y as a bivariate one.
    pub fn from_univariate_y(f: &UnivariateSeries, center_x: f64, degree: usize) -> Self {
        let mut out = Self::zero((center_x, f.center), degree);
        for k in 0..=degree.min(f.order()) {
            out.set_coeff(0, k, f.coeff(k));
        }
        out
    }

    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Series reciprocal 1/self, requiring a nonzero constant term.
    pub fn reciprocal(&self) -> Self {
        let c0 = self.coeffs[0];
        assert!(c0.abs() > 1e-14, "reciprocal of series with zero head");
        // Newton iteration r <- r(2 - s r) doubles correct degree each pass.
        let mut r = Self::constant(1.0 / c0, self.center, self.degree);
        let two = Self::constant(2.0, self.center, self.degree);
        let mut correct = 1usize;
        while correct <= self.degree {
            let sr = self.mul(&r);
            r = r.mul(&two.sub(&sr));
            correct *= 2;
        }
        r
    }
}

/// In-place Taylor shift of a coefficient vector: p(t) -> p(t + shift).
fn taylor_shift(coeffs: &[f64], shift: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    if shift == 0.0 || n < 2 {
        return c;
    }
    for k in 0..n {
        for i in (k..n - 1).rev() {
            let next = c[i + 1];
            c[i] += shift * next;
        }
    }
    c
}
