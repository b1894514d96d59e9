//! Brute-force references that share no code path with the fast evaluators:
//! the Bessel power series and quadrature, dense small-`N` matrices, the
//! free-space d'Alembert solution and the Gaussian initial condition.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::spectral_core::{dense_laplacian, GridSpec, Wavefield};

/// Centred Gaussian density used as the initial displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianIc {
    sigma: f64,
}

impl Default for GaussianIc {
    fn default() -> Self {
        Self { sigma: 0.05 }
    }
}

impl GaussianIc {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `exp(-x^2 / (2 sigma^2)) / (sqrt(2 pi) sigma)`.
    pub fn density(&self, x: f64) -> f64 {
        let s = self.sigma;
        (-(x * x) / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s)
    }
}

/// Point samples of the Gaussian density at the mesh nodes (no renormalisation).
pub fn gaussian_profile(grid: GridSpec, ic: GaussianIc) -> Wavefield {
    Wavefield::from_fn(grid, |x| ic.density(x))
}

/// Free-space solution `(g(x - t) + g(x + t)) / 2` sampled on the mesh.
pub fn dalembert_gaussian(t: f64, grid: GridSpec, ic: GaussianIc) -> Result<Wavefield> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(Wavefield::from_fn(grid, |x| {
        0.5 * (ic.density(x - t) + ic.density(x + t))
    }))
}

/// Truncated power series `sum_m (-1)^m (x/2)^{n+2m} / (m! (n+m)!)`.
///
/// Only trusted for `x <= 15`, `n <= 40`, with at least 30 terms.
pub fn bessel_series_oracle(n: usize, x: f64, terms: usize) -> Result<f64> {
    if !(x.is_finite() && (0.0..=15.0).contains(&x)) || n > 40 || terms < 30 {
        return Err(invalid(format!(
            "series oracle limited to 0 <= x <= 15, n <= 40, terms >= 30 (got n = {n}, x = {x}, terms = {terms})"
        )));
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=n {
        term *= half / i as f64;
    }
    // Neumaier summation
    let mut sum = 0.0;
    let mut carry = 0.0;
    for m in 0..terms {
        let next = sum + term;
        if sum.abs() >= term.abs() {
            carry += (sum - next) + term;
        } else {
            carry += (term - next) + sum;
        }
        sum = next;
        term *= -half * half / (((m + 1) * (n + m + 1)) as f64);
    }
    Ok(sum + carry)
}

/// `J_n(x) = (1/2pi) int_0^{2pi} cos(n s - x sin s) ds` by the periodic
/// trapezoid rule. Aliasing picks up `J_{n +- q nodes}`, so the rule needs
/// `nodes > n + x` by a margin.
pub fn bessel_integral_oracle(n: usize, x: f64, nodes: usize) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(invalid(format!("quadrature oracle needs finite x >= 0, got {x}")));
    }
    let needed = n + x.ceil() as usize + 60;
    if nodes < needed {
        return Err(invalid(format!(
            "quadrature oracle needs at least {needed} nodes for n = {n}, x = {x}"
        )));
    }
    let step = 2.0 * PI / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|i| {
            // n s_i reduced exactly modulo 2 pi
            let phase = ((n * i) % nodes) as f64 * step;
            (phase - x * (i as f64 * step).sin()).cos()
        })
        .sum();
    Ok(sum / nodes as f64)
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub max_abs_error: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, max_abs_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_abs_error,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.max_abs_error.is_finite() && self.max_abs_error <= self.tolerance
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} {:.3e}", self.name, self.max_abs_error)
    }
}

/// Deliberate corruption of the dense construction, used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseFault {
    FlipHankelSign,
}

/// Tolerance for every dense brute-force check.
pub const DENSE_TOLERANCE: f64 = 1e-11;

/// Dense `N x N` versions of every structured matrix in the splitting.
#[derive(Debug, Clone)]
pub struct DenseMatrices {
    n: usize,
    fault: Option<DenseFault>,
}

impl DenseMatrices {
    pub fn new(n: usize, ceiling: usize, fault: Option<DenseFault>) -> Result<Self> {
        dense_laplacian(n, ceiling)?;
        Ok(Self { n, fault })
    }

    fn theta(&self) -> f64 {
        PI / (self.n + 1) as f64
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        dense_laplacian(self.n, usize::MAX).expect("no ceiling")
    }

    pub fn eigenvector(&self, k: usize) -> DVector<f64> {
        let s = (2.0 / (self.n + 1) as f64).sqrt();
        let th = self.theta();
        DVector::from_fn(self.n, |m, _| s * (((m + 1) * k) as f64 * th).sin())
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        2.0 - 2.0 * (k as f64 * self.theta()).cos()
    }

    pub fn toeplitz(&self, k: usize) -> DMatrix<f64> {
        let th = self.theta();
        let h = 1.0 / (self.n + 1) as f64;
        DMatrix::from_fn(self.n, self.n, |r, c| {
            h * ((r as f64 - c as f64) * k as f64 * th).cos()
        })
    }

    pub fn hankel(&self, k: usize) -> DMatrix<f64> {
        let th = self.theta();
        let h = 1.0 / (self.n + 1) as f64;
        let sign = match self.fault {
            Some(DenseFault::FlipHankelSign) => 1.0,
            None => -1.0,
        };
        // 0-based r, c: (r + 1) + (c + 1)
        DMatrix::from_fn(self.n, self.n, |r, c| {
            sign * h * (((r + c + 2) * k) as f64 * th).cos()
        })
    }

    /// Ones on the `k`-th upper diagonal.
    pub fn shift(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| if c == r + k { 1.0 } else { 0.0 })
    }

    /// Ones where `m + n = l + 1` (1-based), `l = 1..=2N-1`.
    pub fn flip_shift(&self, l: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| if r + c + 1 == l { 1.0 } else { 0.0 })
    }

    pub fn reversal(&self) -> DMatrix<f64> {
        self.flip_shift(self.n)
    }

    /// Ones where `m + n` is even.
    pub fn parity_even(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| if (r + c) % 2 == 0 { 1.0 } else { 0.0 })
    }

    /// Ones where `m + n` is odd.
    pub fn parity_odd(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| if (r + c) % 2 == 1 { 1.0 } else { 0.0 })
    }

    pub fn ones(&self) -> DVector<f64> {
        DVector::from_element(self.n, 1.0)
    }

    pub fn alternating(&self) -> DVector<f64> {
        DVector::from_fn(self.n, |m, _| if m % 2 == 0 { 1.0 } else { -1.0 })
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Largest deviation of `m` from being constant along each diagonal.
pub fn toeplitz_defect(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for r in 1..m.nrows() {
        for c in 1..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(r - 1, c - 1)]).abs());
        }
    }
    worst
}

/// Largest deviation of `m` from being constant along each anti-diagonal.
pub fn hankel_defect(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for r in 1..m.nrows() {
        for c in 0..m.ncols() - 1 {
            worst = worst.max((m[(r, c)] - m[(r - 1, c + 1)]).abs());
        }
    }
    worst
}

/// Brute-force checks of the splitting on dense `N x N` matrices.
pub fn dense_small_checks(
    n: usize,
    ceiling: usize,
    fault: Option<DenseFault>,
) -> Result<Vec<CheckOutcome>> {
    let d = DenseMatrices::new(n, ceiling, fault)?;
    let tol = DENSE_TOLERANCE;
    let name = |s: &str| format!("dense.n{n}.{s}");
    let k_mat = d.laplacian();
    let identity = DMatrix::<f64>::identity(n, n);

    let mut eigen = 0.0_f64;
    let mut projector = 0.0_f64;
    let mut structure = 0.0_f64;
    let mut completeness = DMatrix::<f64>::zeros(n, n);
    let mut hankel_sum = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        let v = d.eigenvector(k);
        eigen = eigen.max((&k_mat * &v - d.eigenvalue(k) * &v).amax());
        let t = d.toeplitz(k);
        let h = d.hankel(k);
        let th = &t + &h;
        projector = projector.max(max_abs(&(&th - &v * v.transpose())));
        structure = structure
            .max(toeplitz_defect(&t))
            .max(hankel_defect(&h))
            .max(max_abs(&(&t - t.transpose())))
            .max(max_abs(&(&h - h.transpose())));
        completeness += th;
        hankel_sum += h;
    }

    let a = d.parity_even();
    let b = d.parity_odd();
    let e = d.ones();
    let w = d.alternating();
    let sum_ab = max_abs(&(&a + &b - &e * e.transpose()));
    let diff_ab = max_abs(&(&a - &b - &w * w.transpose()));
    let ab_structure = toeplitz_defect(&a)
        .max(hankel_defect(&a))
        .max(toeplitz_defect(&b))
        .max(hankel_defect(&b));
    let checkerboard = max_abs(&(&hankel_sum - &a / (n + 1) as f64));

    let j = d.reversal();
    let mut flips = max_abs(&(&j - d.flip_shift(n)));
    for k in 1..n {
        let e_k = d.shift(k);
        flips = flips
            .max(max_abs(&(&j * &e_k - d.flip_shift(n + k))))
            .max(max_abs(&(&j * e_k.transpose() - d.flip_shift(n - k))));
    }

    Ok(vec![
        CheckOutcome::new(name("eigenpairs"), eigen, tol),
        CheckOutcome::new(name("t_plus_h_projector"), projector, tol),
        CheckOutcome::new(name("completeness"), max_abs(&(completeness - identity)), tol),
        CheckOutcome::new(name("t_h_structure"), structure, tol),
        CheckOutcome::new(name("hankel_sum_checkerboard"), checkerboard, tol),
        CheckOutcome::new(name("a_plus_b_ones"), sum_ab, tol),
        CheckOutcome::new(name("a_minus_b_alternating"), diff_ab, tol),
        CheckOutcome::new(name("a_b_toeplitz_and_hankel"), ab_structure, tol),
        CheckOutcome::new(name("flip_shifts_from_reversal"), flips, tol),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;

    #[test]
    fn gaussian_peak_and_sigma_validation() {
        let ic = GaussianIc::default();
        let g = gaussian_profile(make_grid(101).unwrap(), ic);
        let peak = 1.0 / ((2.0 * PI).sqrt() * 0.05);
        assert!((g.values()[50] - peak).abs() < 1e-15);
        assert!(GaussianIc::new(-0.1).is_err());
        assert!(GaussianIc::new(0.0).is_err());
        assert!(GaussianIc::new(f64::NAN).is_err());
    }

    #[test]
    fn dalembert_cases() {
        let grid = make_grid(201).unwrap();
        let ic = GaussianIc::default();
        let d0 = dalembert_gaussian(0.0, grid, ic).unwrap();
        assert_eq!(d0, gaussian_profile(grid, ic));

        let d = dalembert_gaussian(0.5, grid, ic).unwrap();
        let peak = ic.density(0.0);
        // x = +-0.5 sit at nodes 50 and 150
        assert!((d.values()[50] - 0.5 * peak).abs() < 1e-12);
        assert!((d.values()[150] - 0.5 * peak).abs() < 1e-12);
        let v = d.values();
        for i in 0..v.len() {
            assert_eq!(v[i], v[v.len() - 1 - i]);
        }
        assert!(dalembert_gaussian(-1.0, grid, ic).is_err());
    }

    #[test]
    fn series_oracle_regime() {
        assert_eq!(bessel_series_oracle(0, 0.0, 30).unwrap(), 1.0);
        assert!(bessel_series_oracle(41, 1.0, 30).is_err());
        assert!(bessel_series_oracle(1, 16.0, 30).is_err());
        assert!(bessel_series_oracle(1, 1.0, 10).is_err());
        // truncation: the first dropped term is negligible
        let x: f64 = 1.0;
        let n = 2;
        let s30 = bessel_series_oracle(n, x, 30).unwrap();
        let s60 = bessel_series_oracle(n, x, 60).unwrap();
        assert_eq!(s30, s60);
        assert!((s30 - 0.114_903_484_931_900_5).abs() < 1e-15);
    }

    #[test]
    fn quadrature_matches_series() {
        for &x in &[0.5, 3.0, 9.0] {
            for n in [0, 1, 4, 13] {
                let a = bessel_series_oracle(n, x, 60).unwrap();
                let b = bessel_integral_oracle(n, x, 128).unwrap();
                // the series loses a few digits to cancellation near x = 9
                assert!((a - b).abs() < 1e-13, "n = {n} x = {x}: {a} vs {b}");
            }
        }
        assert!(bessel_integral_oracle(100, 100.0, 128).is_err());
    }

    #[test]
    fn dense_checks_pass() {
        for n in [3, 11, 31] {
            for c in dense_small_checks(n, 128, None).unwrap() {
                assert!(c.passed(), "{c}");
            }
        }
    }

    #[test]
    fn dense_three_ones_matrix() {
        let d = DenseMatrices::new(3, 128, None).unwrap();
        let ab = d.parity_even() + d.parity_odd();
        assert!(ab.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn dense_fault_is_detected() {
        let out = dense_small_checks(11, 128, Some(DenseFault::FlipHankelSign)).unwrap();
        assert!(out.iter().any(|c| !c.passed()));
    }

    #[test]
    fn dense_ceiling_enforced() {
        assert!(dense_small_checks(11, 5, None).is_err());
    }

    #[test]
    fn outcome_line_format() {
        let c = CheckOutcome::new("x.y", 1.5e-13, 1e-12);
        assert_eq!(c.to_string(), "PASS x.y 1.500e-13");
        let c = CheckOutcome::new("x.y", f64::NAN, 1e-12);
        assert!(c.to_string().starts_with("FAIL x.y"));
    }
}
