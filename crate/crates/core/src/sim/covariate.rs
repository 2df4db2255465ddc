use std::f64::consts::PI;

use rand::Rng;

use crate::data::{Curve, Grid};
use crate::error::Result;

/// `X(t) = cos(2 pi Z t)` on `[0, 1]`, `Z ~ Uniform[1/4, 1]`, stored on an
/// `m`-point equispaced grid.
#[derive(Debug, Clone)]
pub struct CosineCovariateProcess {
    grid: Grid<f64>,
}

impl CosineCovariateProcess {
    pub const Z_MIN: f64 = 0.25;
    pub const Z_MAX: f64 = 1.0;

    pub fn new(m: usize) -> Result<Self> {
        Ok(Self {
            grid: Grid::uniform(0.0, 1.0, m)?,
        })
    }

    pub fn grid(&self) -> &Grid<f64> {
        &self.grid
    }

    pub fn sample_z<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Self::Z_MIN + (Self::Z_MAX - Self::Z_MIN) * rng.random::<f64>()
    }

    pub fn curve(&self, z: f64) -> Curve<f64> {
        Curve::new(
            self.grid
                .points()
                .iter()
                .map(|t| (2.0 * PI * z * t).cos())
                .collect(),
        )
        .expect("cosine values are finite")
    }

    /// `||X||_2^2 = (1 + sin(4 pi Z) / (4 pi Z)) / 2`.
    pub fn closed_norm_sq(z: f64) -> f64 {
        let w = 4.0 * PI * z;
        0.5 * (1.0 + w.sin() / w)
    }
}
