//! Toeplitz-plus-Hankel splitting of the eigenprojectors of `K`.
//!
//! With `theta = pi / (N + 1)` the product-to-sum identity gives
//! `v_k v_k^T = T_k + H_k` where
//!
//! ```text
//! (T_k)_{mn} =  cos((m - n) k theta) / (N + 1)     constant along diagonals
//! (H_k)_{mn} = -cos((m + n) k theta) / (N + 1)     constant along anti-diagonals
//! ```
//!
//! Both halves are rank two: `cos((m -+ n) a) = cos(ma) cos(na) +- sin(ma) sin(na)`,
//! so `T_k u` and `H_k u` only need the two sums `sum_n cos(n k theta) u_n`
//! and `sum_n sin(n k theta) u_n`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral_core::{modal_cosines, ModalBasis, TrigTable, Wavefield};

fn check_entry(n: usize, k: usize, row: usize, col: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::ModeOutOfRange { k, n });
    }
    if row == 0 || row > n || col == 0 || col > n {
        return Err(Error::EntryOutOfRange { row, col, n });
    }
    Ok(())
}

/// `(T_k)_{mn} = cos((m - n) k pi / (N + 1)) / (N + 1)`, 1-based indices.
pub fn toeplitz_component_entry(n_points: usize, k: usize, m: usize, n: usize) -> Result<f64> {
    check_entry(n_points, k, m, n)?;
    let trig = TrigTable::new(n_points);
    Ok(trig.cos(m.abs_diff(n) * k) / (n_points + 1) as f64)
}

/// `(H_k)_{mn} = -cos((m + n) k pi / (N + 1)) / (N + 1)`, 1-based indices.
pub fn hankel_component_entry(n_points: usize, k: usize, m: usize, n: usize) -> Result<f64> {
    check_entry(n_points, k, m, n)?;
    let trig = TrigTable::new(n_points);
    Ok(-trig.cos((m + n) * k) / (n_points + 1) as f64)
}

/// Cosine and sine moments `sum_n cos(n k theta) u_n`, `sum_n sin(n k theta) u_n`.
fn moments(trig: &TrigTable, u: &[f64], k: usize) -> (f64, f64) {
    u.iter().enumerate().fold((0.0, 0.0), |(c, s), (i, &ui)| {
        let p = (i + 1) * k;
        (c + trig.cos(p) * ui, s + trig.sin(p) * ui)
    })
}

fn apply_component(k: usize, u: &Wavefield, hankel: bool) -> Result<Wavefield> {
    let n = u.len();
    if k == 0 || k > n {
        return Err(Error::ModeOutOfRange { k, n });
    }
    let trig = TrigTable::new(n);
    let (c, s) = moments(&trig, u.values(), k);
    let scale = 1.0 / (n + 1) as f64;
    let values = (1..=n)
        .map(|m| {
            let p = m * k;
            if hankel {
                -scale * (trig.cos(p) * c - trig.sin(p) * s)
            } else {
                scale * (trig.cos(p) * c + trig.sin(p) * s)
            }
        })
        .collect();
    Wavefield::new(u.grid(), values)
}

/// `T_k u` without forming `T_k`.
pub fn apply_toeplitz_component(k: usize, u: &Wavefield) -> Result<Wavefield> {
    apply_component(k, u, false)
}

/// `H_k u` without forming `H_k`.
pub fn apply_hankel_component(k: usize, u: &Wavefield) -> Result<Wavefield> {
    apply_component(k, u, true)
}

/// Toeplitz and Hankel waves at one sampled time; they sum to the solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitWave {
    pub toeplitz: Wavefield,
    pub hankel: Wavefield,
    /// Time index when sampled at `t = j dx`.
    pub j: Option<usize>,
    pub time: f64,
}

impl SplitWave {
    /// `toeplitz + hankel`.
    pub fn total(&self) -> Wavefield {
        self.toeplitz
            .add(&self.hankel)
            .expect("halves share a grid")
    }
}

/// Spectral evaluation of `sum_k f(lambda_k) T_k u0` and `sum_k f(lambda_k) H_k u0`
/// for many weight vectors against one initial condition.
///
/// The per-mode moments of `u0` are computed once, so each time sample costs
/// `O(N^2)` with no trigonometric evaluations.
#[derive(Debug, Clone)]
pub struct SpectralSplitter {
    u0: Wavefield,
    basis: ModalBasis,
    cos_moments: Vec<f64>,
    sin_moments: Vec<f64>,
}

impl SpectralSplitter {
    pub fn new(u0: &Wavefield) -> Self {
        let n = u0.len();
        let basis = ModalBasis::new(n);
        let (cos_moments, sin_moments) = (1..=n)
            .into_par_iter()
            .map(|k| moments(basis.trig(), u0.values(), k))
            .unzip();
        Self {
            u0: u0.clone(),
            basis,
            cos_moments,
            sin_moments,
        }
    }

    pub fn initial(&self) -> &Wavefield {
        &self.u0
    }

    /// Splits `f(K) u0` for modal weights `weights[k - 1] = f(lambda_k)`.
    pub fn split_weighted(&self, weights: &[f64]) -> (Wavefield, Wavefield) {
        let n = self.u0.len();
        assert_eq!(weights.len(), n);
        let trig = self.basis.trig();
        let scale = 1.0 / (n + 1) as f64;
        let (toeplitz, hankel): (Vec<f64>, Vec<f64>) = (1..=n)
            .into_par_iter()
            .map(|m| {
                let mut even = 0.0;
                let mut odd = 0.0;
                for (i, &w) in weights.iter().enumerate() {
                    let p = m * (i + 1);
                    even += w * trig.cos(p) * self.cos_moments[i];
                    odd += w * trig.sin(p) * self.sin_moments[i];
                }
                (scale * (even + odd), -scale * (even - odd))
            })
            .unzip();
        let grid = self.u0.grid();
        (
            Wavefield::new(grid, toeplitz).expect("length n"),
            Wavefield::new(grid, hankel).expect("length n"),
        )
    }

    /// Split solution at `t = j dx`.
    pub fn at_index(&self, j: usize) -> SplitWave {
        let weights = modal_cosines(j, self.u0.len());
        let (toeplitz, hankel) = self.split_weighted(&weights);
        SplitWave {
            toeplitz,
            hankel,
            j: Some(j),
            time: self.u0.grid().time_of(j),
        }
    }

    /// Split solution at an arbitrary time `t`.
    pub fn at_time(&self, t: f64) -> SplitWave {
        let dx = self.u0.grid().dx();
        let weights: Vec<f64> = self
            .basis
            .modes()
            .iter()
            .map(|m| (t * m.sqrt_lambda / dx).cos())
            .collect();
        let (toeplitz, hankel) = self.split_weighted(&weights);
        SplitWave {
            toeplitz,
            hankel,
            j: None,
            time: t,
        }
    }
}

/// Toeplitz and Hankel waves at `t = j dx`, evaluated from the spectral form.
pub fn split_wave_spectral(j: usize, u0: &Wavefield) -> SplitWave {
    SpectralSplitter::new(u0).at_index(j)
}
