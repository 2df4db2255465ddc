//! Semi-metrics between discretized curves.

use std::fmt;
use std::str::FromStr;

use crate::data::{Curve, Dataset, Grid};
use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiMetricKind {
    /// `||a - b||_2`, trapezoidal quadrature on the grid.
    L2,
    /// `| ||a||_2^2 - ||b||_2^2 |`, trapezoidal quadrature of the squares.
    NormDiff,
    /// Root sum of squared centered second differences over interior indices.
    /// Grid spacing is ignored.
    SecondDeriv,
}

impl SemiMetricKind {
    pub const ALL: [SemiMetricKind; 3] = [
        SemiMetricKind::L2,
        SemiMetricKind::NormDiff,
        SemiMetricKind::SecondDeriv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemiMetricKind::L2 => "l2",
            SemiMetricKind::NormDiff => "normdiff",
            SemiMetricKind::SecondDeriv => "d2",
        }
    }

    pub fn distance<T: Scalar>(self, a: &Curve<T>, b: &Curve<T>, grid: &Grid<T>) -> Result<T> {
        for c in [a, b] {
            if c.len() != grid.len() {
                return Err(Error::GridMismatch {
                    found: c.len(),
                    expected: grid.len(),
                });
            }
        }
        if self == SemiMetricKind::SecondDeriv && grid.len() < 3 {
            return Err(Error::invalid(
                "semimetric",
                "second-derivative semi-metric needs at least 3 grid points",
            ));
        }
        Ok(self.distance_unchecked(a.values(), b.values(), grid))
    }

    pub(crate) fn distance_unchecked<T: Scalar>(self, a: &[T], b: &[T], grid: &Grid<T>) -> T {
        let w = grid.trapezoid_weights();
        match self {
            SemiMetricKind::L2 => a
                .iter()
                .zip(b)
                .zip(w)
                .map(|((&x, &y), &wk)| wk * (x - y) * (x - y))
                .sum::<T>()
                .max(T::zero())
                .sqrt(),
            SemiMetricKind::NormDiff => (squared_norm(a, w) - squared_norm(b, w)).abs(),
            SemiMetricKind::SecondDeriv => {
                let two = T::lit(2.0);
                (1..a.len() - 1)
                    .map(|l| {
                        let d = (a[l + 1] - b[l + 1]) + (a[l - 1] - b[l - 1]) - two * (a[l] - b[l]);
                        d * d
                    })
                    .sum::<T>()
                    .sqrt()
            }
        }
    }

    /// Distances from `x` to every sample curve.
    pub fn distances_to<T: Scalar>(self, dataset: &Dataset<T>, x: &Curve<T>) -> Result<Vec<T>> {
        dataset.check_query(x)?;
        let grid = dataset.grid();
        if self == SemiMetricKind::NormDiff {
            let w = grid.trapezoid_weights();
            let nx = squared_norm(x.values(), w);
            return Ok(dataset
                .curves()
                .iter()
                .map(|c| (nx - squared_norm(c.values(), w)).abs())
                .collect());
        }
        Ok(dataset
            .curves()
            .iter()
            .map(|c| self.distance_unchecked(x.values(), c.values(), grid))
            .collect())
    }
}

fn squared_norm<T: Scalar>(a: &[T], w: &[T]) -> T {
    a.iter().zip(w).map(|(&x, &wk)| wk * x * x).sum()
}

impl fmt::Display for SemiMetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemiMetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(SemiMetricKind::L2),
            "normdiff" => Ok(SemiMetricKind::NormDiff),
            "d2" => Ok(SemiMetricKind::SecondDeriv),
            other => Err(Error::invalid(
                "semimetric",
                format!("unknown `{other}` (expected l2, normdiff or d2)"),
            )),
        }
    }
}

/// Symmetric `n x n` matrix of pairwise sample distances, built once per
/// (dataset, kind) and then shared read-only.
#[derive(Debug, Clone)]
pub struct DistanceMatrix<T> {
    n: usize,
    kind: SemiMetricKind,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn build(dataset: &Dataset<T>, kind: SemiMetricKind) -> Result<Self> {
        let n = dataset.len();
        let grid = dataset.grid();
        if kind == SemiMetricKind::SecondDeriv && grid.len() < 3 {
            return Err(Error::invalid(
                "semimetric",
                "second-derivative semi-metric needs at least 3 grid points",
            ));
        }
        let mut data = vec![T::zero(); n * n];
        match kind {
            SemiMetricKind::NormDiff => {
                let w = grid.trapezoid_weights();
                let norms: Vec<T> = dataset
                    .curves()
                    .iter()
                    .map(|c| squared_norm(c.values(), w))
                    .collect();
                for i in 0..n {
                    for j in 0..n {
                        data[i * n + j] = (norms[i] - norms[j]).abs();
                    }
                }
            }
            _ => {
                let curves = dataset.curves();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let d = kind.distance_unchecked(curves[i].values(), curves[j].values(), grid);
                        data[i * n + j] = d;
                        data[j * n + i] = d;
                    }
                }
            }
        }
        Ok(Self { n, kind, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kind(&self) -> SemiMetricKind {
        self.kind
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Pair `(i, j)`, `i < j`, with the largest distance. First hit wins ties.
    pub fn argmax_pair(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let d = self.get(i, j);
                if best.is_none_or(|(_, _, b)| d > b) {
                    best = Some((i, j, d));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Off-diagonal distances `d(i, j)`, `i < j`.
    pub fn pairwise(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }
}
