//! Toeplitz and Hankel waves of the semi-discrete wave equation.
//!
//! The semi-discrete wave equation `u'' = -(K / dx^2) u` on `[-1, 1]` with
//! Dirichlet ends has the exact solution `u(t) = cos(t sqrt(K) / dx) u0`,
//! where `K = tridiag(-1, 2, -1)`. Every rank-one eigenprojector of `K`
//! splits into a Toeplitz matrix plus a Hankel matrix, so the solution splits
//! into a Toeplitz wave and a Hankel wave.
//!
//! The crate evaluates both waves two ways:
//!
//! * [`th_split`]: spectrally, summing modal cosines against the Toeplitz and
//!   Hankel halves of each eigenprojector (exact ground truth).
//! * [`bessel_waves`]: through finite sums of even-order Bessel functions
//!   `J_{2l}(2j)` at the sampled times `t = j dx`, where a traversal count `R`
//!   fixes in advance how many boundary reflections are represented.
//!
//! Supporting modules provide bulk Bessel tables ([`bessel_kernel`]), the
//! closed-form eigensystem of `K` ([`spectral_core`]), independent oracles
//! ([`reference_oracles`]) and the command-line surface ([`cli`]).

pub mod bessel_kernel;
pub mod bessel_waves;
pub mod cli;
pub mod error;
pub mod reference_oracles;
pub mod spectral_core;
pub mod th_split;

pub use bessel_kernel::{bessel_j, bessel_table, BesselTable};
pub use bessel_waves::{build_basis, hankel_wave_bessel, toeplitz_wave_bessel, NuPsiBasis};
pub use error::{Error, Result};
pub use reference_oracles::{dalembert_gaussian, gaussian_profile, GaussianIc};
pub use spectral_core::{make_grid, wave_solution, GridSpec, Wavefield};
pub use th_split::{split_wave_spectral, SplitWave};
