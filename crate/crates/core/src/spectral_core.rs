//! Grid, closed-form eigensystem of `K = tridiag(-1, 2, -1)` and matrix
//! functions of `K` applied mode by mode.
//!
//! Eigen-quantities of the `N x N` matrix use the angle `pi / (N + 1)`:
//!
//! ```text
//! sqrt(lambda_k) = 2 sin(k pi / (2 (N + 1)))
//! v_k[m]         = sqrt(2 / (N + 1)) sin(m k pi / (N + 1)),   m, k = 1..N
//! ```
//!
//! The mesh spacing `dx = 2 / (N - 1)` only enters as the physical length and
//! time scale. No `N x N` matrix is ever formed on the main path: a matrix
//! function costs one projection and one synthesis, each `O(N^2)`, and both are
//! reduced in fixed ascending index order so results do not depend on the
//! number of threads.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

/// Largest `N` for which dense verification matrices may be built.
pub const DEFAULT_DENSE_CEILING: usize = 128;

/// Uniform mesh of `N` (odd) points on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n_points: usize,
    dx: f64,
}

impl GridSpec {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::GridTooSmall(n_points));
        }
        if n_points.is_multiple_of(2) {
            return Err(Error::EvenGrid(n_points));
        }
        Ok(Self {
            n_points,
            dx: 2.0 / (n_points - 1) as f64,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Mesh spacing, which is also the time step `dt`.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Coordinate of the 0-based node `i`. Endpoints and midpoint are exact.
    pub fn x(&self, i: usize) -> f64 {
        let span = (self.n_points - 1) as f64;
        (2.0 * i as f64 - span) / span
    }

    pub fn mesh(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// 0-based index of the node at `x = 0`.
    pub fn midpoint_index(&self) -> usize {
        (self.n_points - 1) / 2
    }

    /// Time `j dt` of the `j`-th sample.
    pub fn time_of(&self, j: usize) -> f64 {
        j as f64 * self.dx
    }
}

/// Builds the mesh for `n_points` (odd, at least 3) nodes.
pub fn make_grid(n_points: usize) -> Result<GridSpec> {
    GridSpec::new(n_points)
}

/// Solution samples on every mesh node, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavefield {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Wavefield {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::LengthMismatch {
                expected: grid.n_points(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.n_points()],
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.mesh().into_iter().map(f).collect(),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Spatial spread `max - min` of the samples.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn same_grid(&self, other: &Wavefield) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(
                self.grid.n_points(),
                other.grid.n_points(),
            ));
        }
        Ok(())
    }

    /// `max_m |self[m] - other[m]|`.
    pub fn max_abs_diff(&self, other: &Wavefield) -> f64 {
        max_abs_diff(&self.values, &other.values)
    }

    pub fn add(&self, other: &Wavefield) -> Result<Wavefield> {
        self.same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Eigenvalue data of one mode of `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub k: usize,
    pub lambda: f64,
    pub sqrt_lambda: f64,
}

impl ModeData {
    pub fn new(n_points: usize, k: usize) -> Result<Self> {
        check_mode(n_points, k)?;
        let sqrt_lambda = 2.0 * (k as f64 * PI / (2.0 * (n_points + 1) as f64)).sin();
        Ok(Self {
            k,
            lambda: sqrt_lambda * sqrt_lambda,
            sqrt_lambda,
        })
    }
}

fn check_mode(n_points: usize, k: usize) -> Result<()> {
    if k == 0 || k > n_points {
        return Err(Error::ModeOutOfRange { k, n: n_points });
    }
    Ok(())
}

/// `lambda_k = 4 sin^2(k pi / (2 (N + 1)))`.
pub fn eigenvalue(n_points: usize, k: usize) -> Result<f64> {
    Ok(ModeData::new(n_points, k)?.lambda)
}

/// `sqrt(lambda_k) = 2 sin(k pi / (2 (N + 1)))`.
pub fn sqrt_eigenvalue(n_points: usize, k: usize) -> Result<f64> {
    Ok(ModeData::new(n_points, k)?.sqrt_lambda)
}

/// Unit eigenvector `v_k` (entries for `m = 1..N`).
pub fn eigenvector(n_points: usize, k: usize) -> Result<Vec<f64>> {
    check_mode(n_points, k)?;
    let trig = TrigTable::new(n_points);
    let scale = (2.0 / (n_points + 1) as f64).sqrt();
    Ok((1..=n_points).map(|m| scale * trig.sin(m * k)).collect())
}

/// `sin(p pi / (N + 1))` and `cos(p pi / (N + 1))` for every integer `p`,
/// looked up modulo the period `2 (N + 1)` so large products `m k` keep full
/// accuracy.
#[derive(Debug, Clone)]
pub struct TrigTable {
    sin: Vec<f64>,
    cos: Vec<f64>,
}

impl TrigTable {
    pub fn new(n_points: usize) -> Self {
        let period = 2 * (n_points + 1);
        let step = PI / (n_points + 1) as f64;
        let (sin, cos) = (0..period)
            .map(|p| {
                let a = p as f64 * step;
                (a.sin(), a.cos())
            })
            .unzip();
        Self { sin, cos }
    }

    #[inline]
    pub fn sin(&self, p: usize) -> f64 {
        self.sin[p % self.sin.len()]
    }

    #[inline]
    pub fn cos(&self, p: usize) -> f64 {
        self.cos[p % self.cos.len()]
    }
}

/// Matrix functions of `K` on a fixed grid, applied without forming `K`.
#[derive(Debug, Clone)]
pub struct ModalBasis {
    n: usize,
    trig: TrigTable,
    modes: Vec<ModeData>,
}

impl ModalBasis {
    pub fn new(n_points: usize) -> Self {
        let modes = (1..=n_points)
            .map(|k| ModeData::new(n_points, k).expect("k in range"))
            .collect();
        Self {
            n: n_points,
            trig: TrigTable::new(n_points),
            modes,
        }
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> &[ModeData] {
        &self.modes
    }

    pub fn trig(&self) -> &TrigTable {
        &self.trig
    }

    /// Coefficients `v_k^T u` for `k = 1..N` (stored at index `k - 1`).
    pub fn project(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.n);
        let scale = (2.0 / (self.n + 1) as f64).sqrt();
        (1..=self.n)
            .into_par_iter()
            .map(|k| {
                scale
                    * u.iter()
                        .enumerate()
                        .map(|(i, &ui)| self.trig.sin((i + 1) * k) * ui)
                        .sum::<f64>()
            })
            .collect()
    }

    /// `sum_k w_k v_k`, summed in ascending `k` for each output entry.
    pub fn synthesize(&self, weights: &[f64]) -> Vec<f64> {
        assert_eq!(weights.len(), self.n);
        let scale = (2.0 / (self.n + 1) as f64).sqrt();
        (1..=self.n)
            .into_par_iter()
            .map(|m| {
                scale
                    * weights
                        .iter()
                        .enumerate()
                        .map(|(i, &w)| w * self.trig.sin(m * (i + 1)))
                        .sum::<f64>()
            })
            .collect()
    }

    /// `g(K) u` for a per-mode weight `g`.
    pub fn apply_modal(
        &self,
        u: &Wavefield,
        g: impl Fn(&ModeData) -> f64 + Sync,
    ) -> Result<Wavefield> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: u.len(),
            });
        }
        let mut coeffs = self.project(u.values());
        for (c, mode) in coeffs.iter_mut().zip(&self.modes) {
            let w = g(mode);
            if !w.is_finite() {
                return Err(Error::NonFiniteMode {
                    k: mode.k,
                    lambda: mode.lambda,
                    value: w,
                });
            }
            *c *= w;
        }
        Wavefield::new(u.grid(), self.synthesize(&coeffs))
    }
}

/// `f(K) u0 = sum_k f(lambda_k) v_k (v_k^T u0)`.
pub fn apply_matrix_function(f: impl Fn(f64) -> f64 + Sync, u0: &Wavefield) -> Result<Wavefield> {
    ModalBasis::new(u0.len()).apply_modal(u0, |m| f(m.lambda))
}

/// `cos(t sqrt(K) / dx) u0`: the semi-discrete solution with zero initial velocity.
pub fn wave_solution(t: f64, u0: &Wavefield) -> Result<Wavefield> {
    if !t.is_finite() {
        return Err(invalid(format!("time must be finite, got {t}")));
    }
    let dx = u0.grid().dx();
    ModalBasis::new(u0.len()).apply_modal(u0, |m| (t * m.sqrt_lambda / dx).cos())
}

/// `cos(t sqrt(K)/dx) u0 + dx K^{-1/2} sin(t sqrt(K)/dx) v0`.
pub fn wave_solution_with_velocity(t: f64, u0: &Wavefield, v0: &Wavefield) -> Result<Wavefield> {
    if !t.is_finite() {
        return Err(invalid(format!("time must be finite, got {t}")));
    }
    u0.same_grid(v0)?;
    let dx = u0.grid().dx();
    let basis = ModalBasis::new(u0.len());
    let displacement = basis.apply_modal(u0, |m| (t * m.sqrt_lambda / dx).cos())?;
    let velocity = basis.apply_modal(v0, |m| dx * (t * m.sqrt_lambda / dx).sin() / m.sqrt_lambda)?;
    displacement.add(&velocity)
}

/// `d^2/dt^2` of [`wave_solution`], differentiated mode by mode.
pub fn wave_acceleration(t: f64, u0: &Wavefield) -> Result<Wavefield> {
    let dx = u0.grid().dx();
    ModalBasis::new(u0.len()).apply_modal(u0, |m| {
        -(m.lambda / (dx * dx)) * (t * m.sqrt_lambda / dx).cos()
    })
}

/// `K u` via the stencil `2 u_m - u_{m-1} - u_{m+1}` (zero beyond the ends).
pub fn apply_laplacian(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    (0..n)
        .map(|m| {
            let left = if m > 0 { u[m - 1] } else { 0.0 };
            let right = if m + 1 < n { u[m + 1] } else { 0.0 };
            2.0 * u[m] - left - right
        })
        .collect()
}

/// `cos(2 j sin(k pi / (2 (N + 1))))` for `k = 1..N`: the modal factors of the
/// solution at `t = j dx`.
pub fn modal_cosines(j: usize, n_points: usize) -> Vec<f64> {
    let two_j = 2.0 * j as f64;
    (1..=n_points)
        .map(|k| (two_j * (k as f64 * PI / (2.0 * (n_points + 1) as f64)).sin()).cos())
        .collect()
}

/// Dense `K` for verification runs; refuses `N` above `ceiling`.
pub fn dense_laplacian(n_points: usize, ceiling: usize) -> Result<nalgebra::DMatrix<f64>> {
    if n_points > ceiling {
        return Err(Error::DenseCeiling {
            n: n_points,
            ceiling,
        });
    }
    Ok(nalgebra::DMatrix::from_fn(n_points, n_points, |r, c| {
        match r.abs_diff(c) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        }
    }))
}
