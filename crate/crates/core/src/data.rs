//! Discretized functional covariates and paired responses.
//!
//! Curves file: CSV, one curve per row, `m` numeric columns, with an optional
//! first header row `t=<v1>,...,t=<vm>` giving the grid abscissae. Without a
//! header the grid is `0, 1, ..., m-1`.
//!
//! Responses file: CSV, one numeric value per row.
//!
//! Row indices in error messages are 0-based data rows (the header, when
//! present, is not counted); columns are 0-based.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::Scalar;

/// Strictly increasing abscissae shared by every curve of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    points: Vec<T>,
    trapezoid: Vec<T>,
}

impl<T: Scalar> Grid<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::invalid(
                "grid",
                format!("needs at least 3 points, got {}", points.len()),
            ));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid("grid", format!("point {i} is not finite")));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "grid",
                format!("not strictly increasing at index {}", i + 1),
            ));
        }
        let m = points.len();
        let half = T::lit(0.5);
        let trapezoid = (0..m)
            .map(|k| {
                let left = if k == 0 { points[0] } else { points[k - 1] };
                let right = if k + 1 == m { points[m - 1] } else { points[k + 1] };
                (right - left) * half
            })
            .collect();
        Ok(Self { points, trapezoid })
    }

    /// `0, 1, ..., m-1`.
    pub fn unit(m: usize) -> Result<Self> {
        Self::new((0..m).map(T::from_count).collect())
    }

    /// `m` equispaced points from `a` to `b` inclusive.
    pub fn uniform(a: T, b: T, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid("grid", "needs at least 3 points"));
        }
        let step = (b - a) / T::from_count(m - 1);
        Self::new((0..m).map(|k| a + step * T::from_count(k)).collect())
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Trapezoidal quadrature weights, so `integral(f) ~ sum_k w_k f(t_k)`.
    pub fn trapezoid_weights(&self) -> &[T] {
        &self.trapezoid
    }

    /// Trapezoidal integral of `values` sampled on this grid.
    pub fn integrate(&self, values: &[T]) -> T {
        self.trapezoid
            .iter()
            .zip(values)
            .map(|(&w, &v)| w * v)
            .sum()
    }
}

/// One functional covariate observed on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T> {
    values: Vec<T>,
}

impl<T: Scalar> Curve<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("curve", format!("value {i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `xi * other + (1 - xi) * self`, the point at `xi` on the segment from
    /// `self` to `other`.
    pub fn lerp(&self, other: &Curve<T>, xi: T) -> Result<Curve<T>> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                found: other.len(),
                expected: self.len(),
            });
        }
        Curve::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| xi * b + (T::one() - xi) * a)
                .collect(),
        )
    }
}

/// Paired sample `(X_i, Y_i)`, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    grid: Grid<T>,
    curves: Vec<Curve<T>>,
    responses: Vec<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(grid: Grid<T>, curves: Vec<Curve<T>>, responses: Vec<T>) -> Result<Self> {
        if curves.len() != responses.len() {
            return Err(Error::LengthMismatch {
                curves: curves.len(),
                responses: responses.len(),
            });
        }
        if curves.is_empty() {
            return Err(Error::invalid("dataset", "needs at least one observation"));
        }
        if let Some(c) = curves.iter().find(|c| c.len() != grid.len()) {
            return Err(Error::GridMismatch {
                found: c.len(),
                expected: grid.len(),
            });
        }
        if let Some(i) = responses.iter().position(|y| !y.is_finite()) {
            return Err(Error::invalid(
                "responses",
                format!("response {i} is not finite"),
            ));
        }
        Ok(Self {
            grid,
            curves,
            responses,
        })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn curves(&self) -> &[Curve<T>] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> Option<&Curve<T>> {
        self.curves.get(i)
    }

    pub fn responses(&self) -> &[T] {
        &self.responses
    }

    /// Sample size `n`.
    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    /// Grid size `m`.
    pub fn grid_len(&self) -> usize {
        self.grid.len()
    }

    /// Checks that `x` can be compared with the sample curves.
    pub fn check_query(&self, x: &Curve<T>) -> Result<()> {
        if x.len() != self.grid.len() {
            return Err(Error::GridMismatch {
                found: x.len(),
                expected: self.grid.len(),
            });
        }
        Ok(())
    }

    /// Returns a new dataset with mapped responses; `self` is untouched.
    pub fn transform_response(&self, map: ResponseTransform) -> Result<Self> {
        let responses = self
            .responses
            .iter()
            .enumerate()
            .map(|(row, &y)| map.apply(y).map_err(|reason| Error::TransformDomain {
                row,
                value: y.to_f64_lossy(),
                reason,
            }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: self.grid.clone(),
            curves: self.curves.clone(),
            responses,
        })
    }

    /// Same data with observation `i` dropped.
    pub fn without(&self, i: usize) -> Result<Self> {
        if i >= self.len() || self.len() < 2 {
            return Err(Error::invalid("row", format!("cannot drop row {i}")));
        }
        let mut curves = self.curves.clone();
        let mut responses = self.responses.clone();
        curves.remove(i);
        responses.remove(i);
        Self::new(self.grid.clone(), curves, responses)
    }

    /// Same data with extra observations appended.
    pub fn with_extra(&self, curves: &[Curve<T>], responses: &[T]) -> Result<Self> {
        let mut all_curves = self.curves.clone();
        all_curves.extend_from_slice(curves);
        let mut all_responses = self.responses.clone();
        all_responses.extend_from_slice(responses);
        Self::new(self.grid.clone(), all_curves, all_responses)
    }
}

/// Response maps applied before estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseTransform {
    Identity,
    /// `Y = 100 / Y~` for a percentage `Y~` in `(0, 100]`, turning a bounded
    /// fat content into a response on `[1, inf)`.
    ReciprocalPercent,
}

impl ResponseTransform {
    fn apply<T: Scalar>(self, y: T) -> std::result::Result<T, &'static str> {
        match self {
            ResponseTransform::Identity => Ok(y),
            ResponseTransform::ReciprocalPercent => {
                let hundred = T::lit(100.0);
                if y <= T::zero() {
                    Err("reciprocal-percent needs a positive response")
                } else if y > hundred {
                    Err("reciprocal-percent needs a response of at most 100")
                } else {
                    Ok(hundred / y)
                }
            }
        }
    }
}

fn parse_cell<T: Scalar>(path: &Path, row: usize, column: usize, cell: &str) -> Result<T> {
    let parse_err = |reason: String| Error::Parse {
        path: path.to_path_buf(),
        row,
        column,
        reason,
    };
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| parse_err(format!("`{}` is not a number", cell.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(format!("`{}` is not finite", cell.trim())));
    }
    T::from_f64(v).ok_or_else(|| parse_err("not representable".into()))
}

fn reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|source| Error::Open {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

/// Reads the curves file; returns the grid and the curves.
pub fn load_curves<T: Scalar>(path: &Path) -> Result<(Grid<T>, Vec<Curve<T>>)> {
    let mut records = reader(path)?.into_records().peekable();
    let mut grid = None;
    if let Some(Ok(first)) = records.peek() {
        if first.get(0).is_some_and(|c| c.starts_with("t=")) {
            let first = first.clone();
            records.next();
            let points = first
                .iter()
                .enumerate()
                .map(|(col, cell)| {
                    let value = cell.strip_prefix("t=").ok_or_else(|| Error::Parse {
                        path: path.to_path_buf(),
                        row: 0,
                        column: col,
                        reason: format!("header cell `{cell}` lacks the `t=` prefix"),
                    })?;
                    parse_cell(path, 0, col, value)
                })
                .collect::<Result<Vec<T>>>()?;
            grid = Some(Grid::new(points)?);
        }
    }

    let mut curves = Vec::new();
    let mut width = grid.as_ref().map(Grid::len);
    for (row, record) in records.enumerate() {
        let record = record?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RowLength {
                path: path.to_path_buf(),
                row,
                found: record.len(),
                expected,
            });
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(col, cell)| parse_cell(path, row, col, cell))
            .collect::<Result<Vec<T>>>()?;
        curves.push(Curve::new(values)?);
    }
    let grid = match grid {
        Some(g) => g,
        None => Grid::unit(width.unwrap_or(0))?,
    };
    Ok((grid, curves))
}

/// Reads a one-column responses file.
pub fn load_responses<T: Scalar>(path: &Path) -> Result<Vec<T>> {
    reader(path)?
        .into_records()
        .enumerate()
        .map(|(row, record)| {
            let record = record?;
            if record.len() != 1 {
                return Err(Error::RowLength {
                    path: path.to_path_buf(),
                    row,
                    found: record.len(),
                    expected: 1,
                });
            }
            parse_cell(path, row, 0, &record[0])
        })
        .collect()
}

pub fn load_dataset<T: Scalar>(curves_path: &Path, responses_path: &Path) -> Result<Dataset<T>> {
    let (grid, curves) = load_curves(curves_path)?;
    let responses = load_responses(responses_path)?;
    Dataset::new(grid, curves, responses)
}

fn fmt17<T: Scalar>(v: T) -> String {
    format!("{:.16e}", v.to_f64_lossy())
}

/// Writes both files, always with a grid header. Values carry 17 significant
/// digits, so loading them back is bit-exact.
pub fn save_dataset<T: Scalar>(
    dataset: &Dataset<T>,
    curves_path: &Path,
    responses_path: &Path,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(curves_path)?);
    let header: Vec<String> = dataset
        .grid
        .points()
        .iter()
        .map(|&t| format!("t={}", fmt17(t)))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for curve in &dataset.curves {
        let row: Vec<String> = curve.values.iter().map(|&v| fmt17(v)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;

    let mut out = BufWriter::new(File::create(responses_path)?);
    for &y in &dataset.responses {
        writeln!(out, "{}", fmt17(y))?;
    }
    out.flush()?;
    Ok(())
}
