//! Uniform half-open grids and complex samples attached to them.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest sample count accepted by [`Grid1D::new`].
pub const MIN_POINTS: usize = 8;

/// Uniform grid with points `x_min + j * spacing` for `j = 0..n`.
///
/// The right end `x_max` is not a sample point, which is the same layout
/// the FFT uses, so an x-grid and its reciprocal frequency grid share one
/// convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "bounds must be finite, got [{x_min}, {x_max})"
            )));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid(format!(
                "x_min must be below x_max, got [{x_min}, {x_max})"
            )));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {n}"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Grid translated by `shift`, same spacing and count.
    pub fn shifted(&self, shift: f64) -> Result<Self> {
        Self::new(self.x_min + shift, self.x_max + shift, self.n)
    }

    /// Fractional index of `x`, `(x - x_min) / spacing`.
    pub fn position(&self, x: f64) -> f64 {
        (x - self.x_min) / self.spacing()
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n
            && (self.x_min - other.x_min).abs() <= 1e-12 * self.length()
            && (self.x_max - other.x_max).abs() <= 1e-12 * self.length()
    }
}

/// Free-function constructor mirroring [`Grid1D::new`].
pub fn make_grid(x_min: f64, x_max: f64, n: usize) -> Result<Grid1D> {
    Grid1D::new(x_min, x_max, n)
}

/// Complex samples on a [`Grid1D`]. Values are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(j) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite(j));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise map with access to the grid coordinate.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &v)| f(self.grid.point(j), v))
            .collect();
        Self::new(self.grid, values)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.grid, values)
    }

    /// Discrete L2 norm `sqrt(h * sum |v_j|^2)`.
    pub fn norm_l2(&self) -> f64 {
        (self.grid.spacing() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `||self - reference||_2 / ||reference||_2`; absolute when the reference vanishes.
    pub fn rel_l2_error(&self, reference: &Self) -> Result<f64> {
        let diff = self.sub(reference)?.norm_l2();
        let denom = reference.norm_l2();
        Ok(if denom > 0.0 { diff / denom } else { diff })
    }

    /// `max |v|` over the first and last `width` samples, relative to `max |v|`.
    pub fn edge_ratio(&self, width: usize) -> f64 {
        let peak = self.sup_norm();
        if peak == 0.0 {
            return 0.0;
        }
        let w = width.min(self.len() / 2).max(1);
        let head = self.values[..w].iter();
        let tail = self.values[self.len() - w..].iter();
        head.chain(tail).map(|v| v.norm()).fold(0.0, f64::max) / peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_grid_layout() {
        let g = make_grid(-1.0, 1.0, 8).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.point(0), -1.0);
        assert_eq!(g.point(7), 0.75);
    }

    #[test]
    fn two_pi_grid_spacing() {
        let g = make_grid(0.0, 2.0 * PI, 16).unwrap();
        assert!((g.spacing() - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            make_grid(1.0, -1.0, 8),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(make_grid(0.0, 1.0, 7), Err(Error::InvalidGrid(_))));
        assert!(matches!(
            make_grid(f64::NAN, 1.0, 8),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            make_grid(0.0, f64::INFINITY, 8),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn rejects_non_finite_and_wrong_length() {
        let g = make_grid(0.0, 1.0, 8).unwrap();
        let mut v = vec![Complex64::new(1.0, 0.0); 8];
        v[3] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(SampledFunction::new(g, v), Err(Error::NonFinite(3)));
        assert!(matches!(
            SampledFunction::new(g, vec![Complex64::new(0.0, 0.0); 7]),
            Err(Error::LengthMismatch {
                expected: 8,
                got: 7
            })
        ));
    }
}
