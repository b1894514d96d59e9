//! Toeplitz and Hankel waves as finite sums of even-order Bessel functions.
//!
//! At the sampled times `t = j dx` every modal factor expands as
//! `cos(2j sin(k pi / (2(N+1)))) = J_0(2j) + 2 sum_l J_{2l}(2j) cos(l k pi / (N+1))`.
//! Summing over modes with the Lagrange identity collapses the spectral sums
//! onto shifts of the initial condition:
//!
//! ```text
//! T(j dx) = sum_{l=0}^{N-1} J_{2l} nu_l
//!         + sum_{rho=1}^{R-1} sum_{l=0}^{N-1} (J_{4(N+1)rho - 2l} + J_{4(N+1)rho + 2l}) nu_l
//!         - X(j)
//!
//! H(j dx) = X(j) - sum_{rho=0}^{R-1} sum_{l=1}^{2N-1} J_{4(N+1)rho + 2l + 2} psi_l
//!
//! X(j)    = (alpha e + beta cos(2j) w) / (2 (N + 1))
//! ```
//!
//! with all Bessel functions evaluated at `2j`, `nu_l = (E_l + E_l^T) u0`
//! (`nu_0 = u0`), `psi_l = (F_l + F_{2N-l}) u0`, `e` the ones vector, `w` the
//! alternating `(1, -1, 1, ...)` vector, `alpha = e^T u0` and `beta = w^T u0`.
//!
//! Each block of orders `rho` stands for one traversal of the domain, so the
//! traversal count `R` decides up front how many boundary reflections the
//! waves carry. Once `2j` is far beyond the largest retained order both waves
//! settle to the constants `-X` and `X`.

use rayon::prelude::*;

use crate::bessel_kernel::BesselTable;
use crate::error::Result;
use crate::spectral_core::Wavefield;
use crate::th_split::SplitWave;

const CHUNK: usize = 64;

/// Shifted combinations of the initial condition that the Bessel sums weight.
#[derive(Debug, Clone)]
pub struct NuPsiBasis {
    nu: Vec<Wavefield>,
    psi: Vec<Wavefield>,
    alpha: f64,
    beta: f64,
}

impl NuPsiBasis {
    pub fn n_points(&self) -> usize {
        self.nu[0].len()
    }

    pub fn initial(&self) -> &Wavefield {
        &self.nu[0]
    }

    /// `nu_k` for `k = 0..N-1`.
    pub fn nu(&self, k: usize) -> &Wavefield {
        &self.nu[k]
    }

    /// `psi_l` for `l = 1..=2N-1`.
    pub fn psi(&self, l: usize) -> &Wavefield {
        assert!(l >= 1, "psi is indexed from 1");
        &self.psi[l - 1]
    }

    /// `e^T u0`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `w^T u0`, `w = (1, -1, 1, ...)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Builds `nu_0..nu_{N-1}`, `psi_1..psi_{2N-1}`, `alpha` and `beta` from `u0`.
pub fn build_basis(u0: &Wavefield) -> NuPsiBasis {
    let n = u0.len();
    let grid = u0.grid();
    let u = u0.values();

    let nu = (0..n)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return u0.clone();
            }
            let values = (0..n)
                .map(|m| {
                    let below = if m >= k { u[m - k] } else { 0.0 };
                    let above = if m + k < n { u[m + k] } else { 0.0 };
                    below + above
                })
                .collect();
            Wavefield::new(grid, values).expect("length n")
        })
        .collect();

    // (F_l u)[m] = u[l + 1 - m] with 1-based indices, zero outside 1..=N.
    let flip = |l: usize, m: usize| -> f64 {
        let idx = (l + 1).checked_sub(m);
        match idx {
            Some(i) if (1..=n).contains(&i) => u[i - 1],
            _ => 0.0,
        }
    };
    let psi = (1..2 * n)
        .into_par_iter()
        .map(|l| {
            let mirror = 2 * n - l;
            let values = (1..=n).map(|m| flip(l, m) + flip(mirror, m)).collect();
            Wavefield::new(grid, values).expect("length n")
        })
        .collect();

    let alpha = u.iter().sum();
    let beta = u
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { *v } else { -v })
        .sum();

    NuPsiBasis {
        nu,
        psi,
        alpha,
        beta,
    }
}

/// `X(j) = (alpha e + beta cos(2j) w) / (2 (N + 1))`.
pub fn x_term(j: usize, basis: &NuPsiBasis) -> Wavefield {
    let n = basis.n_points();
    let scale = 1.0 / (2.0 * (n + 1) as f64);
    let constant = scale * basis.alpha;
    let checker = scale * basis.beta * (2.0 * j as f64).cos();
    let values = (0..n)
        .map(|m| {
            if m % 2 == 0 {
                constant + checker
            } else {
                constant - checker
            }
        })
        .collect();
    Wavefield::new(basis.initial().grid(), values).expect("length n")
}

/// One Bessel term `J_order(2j) * basis_vector[index]` of an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BesselTerm {
    pub order: usize,
    pub index: usize,
}

/// Terms of the Toeplitz expansion over `traversals` traversals, grouped by
/// traversal and ascending in order within each group. `index` selects `nu`.
///
/// `traversals = 0` keeps only the first group, like `traversals = 1`.
pub fn toeplitz_terms(n_points: usize, traversals: usize) -> Vec<BesselTerm> {
    let period = 4 * (n_points + 1);
    let mut terms: Vec<BesselTerm> = (0..n_points)
        .map(|l| BesselTerm {
            order: 2 * l,
            index: l,
        })
        .collect();
    for rho in 1..traversals {
        let centre = period * rho;
        terms.extend((0..n_points).rev().map(|l| BesselTerm {
            order: centre - 2 * l,
            index: l,
        }));
        terms.extend((0..n_points).map(|l| BesselTerm {
            order: centre + 2 * l,
            index: l,
        }));
    }
    terms
}

/// Terms of the Hankel expansion over `traversals` traversals. `index` selects
/// `psi` (1-based). Empty for `traversals = 0`.
pub fn hankel_terms(n_points: usize, traversals: usize) -> Vec<BesselTerm> {
    let period = 4 * (n_points + 1);
    (0..traversals)
        .flat_map(|rho| {
            (1..2 * n_points).map(move |l| BesselTerm {
                order: period * rho + 2 * l + 2,
                index: l,
            })
        })
        .collect()
}

/// Largest Bessel order in the Toeplitz expansion: `4(N+1)(R-1) + 2(N-1)`.
pub fn max_order_toeplitz(n_points: usize, traversals: usize) -> usize {
    4 * (n_points + 1) * traversals.saturating_sub(1) + 2 * (n_points - 1)
}

/// Largest Bessel order in the Hankel expansion: `4(N+1)(R-1) + 2(2N-1) + 2`,
/// or 0 when `R = 0` leaves only the `X` term.
pub fn max_order_hankel(n_points: usize, traversals: usize) -> usize {
    if traversals == 0 {
        return 0;
    }
    4 * (n_points + 1) * (traversals - 1) + 2 * (2 * n_points - 1) + 2
}

/// Table order serving both expansions at once.
pub fn required_table_order(n_points: usize, traversals: usize) -> usize {
    max_order_toeplitz(n_points, traversals)
        .max(max_order_hankel(n_points, traversals))
        .max(1)
}

/// `sum_k a_k v_k` accumulated in ascending `k` for every entry.
fn combine(vectors: &[Wavefield], coeffs: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, chunk)| {
            let lo = c * CHUNK;
            for (v, &a) in vectors.iter().zip(coeffs) {
                if a == 0.0 {
                    continue;
                }
                let src = &v.values()[lo..lo + chunk.len()];
                for (o, s) in chunk.iter_mut().zip(src) {
                    *o += a * s;
                }
            }
        });
    out
}

fn bessel_argument(j: usize) -> f64 {
    2.0 * j as f64
}

/// Toeplitz wave at `t = j dx` from a prebuilt table at `x = 2j`.
pub fn toeplitz_wave_from_table(
    j: usize,
    basis: &NuPsiBasis,
    traversals: usize,
    table: &BesselTable,
) -> Result<Wavefield> {
    let n = basis.n_points();
    table.ensure_covers(bessel_argument(j), max_order_toeplitz(n, traversals))?;
    let mut coeffs = vec![0.0; n];
    for term in toeplitz_terms(n, traversals) {
        coeffs[term.index] += table.j(term.order);
    }
    let mut values = combine(&basis.nu, &coeffs, n);
    let x = x_term(j, basis);
    for (v, c) in values.iter_mut().zip(x.values()) {
        *v -= c;
    }
    Wavefield::new(basis.initial().grid(), values)
}

/// Hankel wave at `t = j dx` from a prebuilt table at `x = 2j`.
pub fn hankel_wave_from_table(
    j: usize,
    basis: &NuPsiBasis,
    traversals: usize,
    table: &BesselTable,
) -> Result<Wavefield> {
    let n = basis.n_points();
    table.ensure_covers(bessel_argument(j), max_order_hankel(n, traversals))?;
    let mut coeffs = vec![0.0; 2 * n - 1];
    for term in hankel_terms(n, traversals) {
        coeffs[term.index - 1] += table.j(term.order);
    }
    let sum = combine(&basis.psi, &coeffs, n);
    let x = x_term(j, basis);
    let values = x.values().iter().zip(&sum).map(|(a, b)| a - b).collect();
    Wavefield::new(basis.initial().grid(), values)
}

/// Toeplitz wave at `t = j dx` over `traversals` traversals.
pub fn toeplitz_wave_bessel(j: usize, basis: &NuPsiBasis, traversals: usize) -> Result<Wavefield> {
    let order = max_order_toeplitz(basis.n_points(), traversals).max(1);
    let table = BesselTable::new(bessel_argument(j), order)?;
    toeplitz_wave_from_table(j, basis, traversals, &table)
}

/// Hankel wave at `t = j dx` over `traversals` traversals.
pub fn hankel_wave_bessel(j: usize, basis: &NuPsiBasis, traversals: usize) -> Result<Wavefield> {
    let order = max_order_hankel(basis.n_points(), traversals).max(1);
    let table = BesselTable::new(bessel_argument(j), order)?;
    hankel_wave_from_table(j, basis, traversals, &table)
}

/// Both waves at one time, evaluated from a single shared Bessel table.
#[derive(Debug, Clone)]
pub struct BesselSplit {
    pub split: SplitWave,
    pub table: BesselTable,
}

/// Evaluates the Bessel-form waves for one initial condition at many times.
#[derive(Debug, Clone)]
pub struct BesselSplitter {
    basis: NuPsiBasis,
    traversals: usize,
}

impl BesselSplitter {
    pub fn new(u0: &Wavefield, traversals: usize) -> Self {
        Self {
            basis: build_basis(u0),
            traversals,
        }
    }

    pub fn basis(&self) -> &NuPsiBasis {
        &self.basis
    }

    pub fn traversals(&self) -> usize {
        self.traversals
    }

    /// Order of the one table built per time index.
    pub fn table_order(&self) -> usize {
        required_table_order(self.basis.n_points(), self.traversals)
    }

    pub fn at_index(&self, j: usize) -> Result<BesselSplit> {
        let table = BesselTable::new(bessel_argument(j), self.table_order())?;
        let toeplitz = toeplitz_wave_from_table(j, &self.basis, self.traversals, &table)?;
        let hankel = hankel_wave_from_table(j, &self.basis, self.traversals, &table)?;
        Ok(BesselSplit {
            split: SplitWave {
                toeplitz,
                hankel,
                j: Some(j),
                time: self.basis.initial().grid().time_of(j),
            },
            table,
        })
    }
}

/// `sum_{k=1}^{N} cos(k p pi / (N + 1))` in closed form: `N` when `p` is a
/// multiple of `2(N+1)`, 0 when `p` is odd, -1 otherwise.
pub fn lagrange_sum(p: i64, n_points: usize) -> i64 {
    let period = 2 * (n_points as i64 + 1);
    if p.rem_euclid(period) == 0 {
        n_points as i64
    } else if p.rem_euclid(2) == 1 {
        0
    } else {
        -1
    }
}
