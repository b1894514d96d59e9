//! Integer-order Bessel functions of the first kind, evaluated in bulk.
//!
//! All orders `J_0(x) ..= J_M(x)` come out of one downward pass of the
//! three-term recurrence
//!
//! ```text
//! J_{n-1}(x) = (2n / x) J_n(x) - J_{n+1}(x)
//! ```
//!
//! started well above both `M` and `x` from the seed `(0, 1)` and normalised
//! afterwards with `J_0 + 2 sum_{l>=1} J_{2l} = 1` (Miller's algorithm).
//! Downward recurrence is stable for `J`, so the table is accurate to a few
//! ulps of the largest entry for every order, including orders far above `x`
//! where the values underflow gracefully to zero.

use crate::error::{invalid, Error, Result};

/// Minimum number of extra recurrence steps above the highest needed order.
const MIN_GUARD_ORDERS: usize = 40;

/// Unnormalised recurrence values are rescaled once they exceed this.
const RESCALE_THRESHOLD: f64 = 1.340_780_792_994_259_7e154; // 2^512
const RESCALE_FACTOR: f64 = 7.458_340_731_200_207e-155; // 2^-512

/// `J_0(x) ..= J_M(x)` at a single evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselTable {
    x: f64,
    values: Vec<f64>,
    start_order: usize,
}

impl BesselTable {
    /// Builds the table with a single backward-recurrence pass.
    pub fn new(x: f64, m_max: usize) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(invalid(format!(
                "Bessel argument must be finite and non-negative, got {x}"
            )));
        }
        if m_max == 0 {
            return Err(invalid("Bessel table needs m_max >= 1"));
        }
        if x == 0.0 {
            let mut values = vec![0.0; m_max + 1];
            values[0] = 1.0;
            return Ok(Self {
                x,
                values,
                start_order: 0,
            });
        }

        let start = miller_start_order(x, m_max);
        let mut values = vec![0.0; m_max + 1];

        // f_above = f_{n+1}, f_here = f_n while stepping n downward.
        let mut f_above = 0.0_f64;
        let mut f_here = 1.0_f64;
        // Running J_0 + 2 sum J_{2l} of the unnormalised sequence, without J_0.
        let mut even_sum = 0.0_f64;
        if start.is_multiple_of(2) {
            even_sum += 2.0 * f_here;
        }

        let two_over_x = 2.0 / x;
        for n in (1..=start).rev() {
            let f_below = (n as f64) * two_over_x * f_here - f_above;
            f_above = f_here;
            f_here = f_below;
            let order = n - 1;
            if order <= m_max {
                values[order] = f_here;
            }
            if order > 0 && order % 2 == 0 {
                even_sum += 2.0 * f_here;
            }
            if f_here.abs() > RESCALE_THRESHOLD {
                f_here *= RESCALE_FACTOR;
                f_above *= RESCALE_FACTOR;
                even_sum *= RESCALE_FACTOR;
                let lo = order;
                if lo <= m_max {
                    for v in &mut values[lo..] {
                        *v *= RESCALE_FACTOR;
                    }
                }
            }
        }

        let norm = f_here + even_sum;
        for v in &mut values {
            *v /= norm;
        }
        Ok(Self {
            x,
            values,
            start_order: start,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Highest order held by the table.
    pub fn max_order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order at which the downward recurrence was seeded (0 for `x = 0`).
    pub fn start_order(&self) -> usize {
        self.start_order
    }

    /// `J_n(x)`; panics if `n` exceeds [`max_order`](Self::max_order).
    #[inline]
    pub fn j(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// Checks that the table was built at `x` and reaches `order`.
    pub fn ensure_covers(&self, x: f64, order: usize) -> Result<()> {
        if self.x != x || order > self.max_order() {
            return Err(Error::TableMismatch {
                available: self.max_order(),
                needed: order,
                x: self.x,
                wanted: x,
            });
        }
        Ok(())
    }

    /// `J_0 + 2 sum_{l>=1, 2l<=M} J_{2l}` over the table.
    pub fn even_normalization_sum(&self) -> f64 {
        self.values[0] + 2.0 * self.values.iter().skip(2).step_by(2).sum::<f64>()
    }
}

/// Order at which the downward recurrence is seeded for a table up to `m_max`.
///
/// The seed sits above `max(m_max, x)` by `max(40, 1.2 sqrt(40 max(m_max, x)))`
/// orders; past the turning point `n = x` the true values decay faster than
/// geometrically, so the normalisation sum is complete to rounding.
pub fn miller_start_order(x: f64, m_max: usize) -> usize {
    let base = m_max.max(x.ceil() as usize);
    let guard = (1.2 * (40.0 * base as f64).sqrt()).ceil() as usize;
    base + guard.max(MIN_GUARD_ORDERS)
}

/// Table of `J_0(x) ..= J_{m_max}(x)`.
pub fn bessel_table(x: f64, m_max: usize) -> Result<BesselTable> {
    BesselTable::new(x, m_max)
}

/// `J_n(x)` for a single order, read out of a table of order `max(n, 1)`.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    Ok(BesselTable::new(x, n.max(1))?.j(n))
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {v}")))
    }
}

/// Partial Jacobi-Anger sum `J_0(t) + 2 sum_{l=1}^{l_max} J_{2l}(t) cos(2 l x)`.
///
/// Converges to `cos(t sin x)`; with `l_max >= (|t| + 40) / 2` the truncation
/// error is below rounding. Even orders are even in `t`, so negative `t` is
/// accepted.
pub fn cos_sine_expansion(t: f64, x: f64, l_max: usize) -> Result<f64> {
    check_finite("t", t)?;
    check_finite("x", x)?;
    if l_max == 0 {
        return Err(invalid("l_max must be at least 1"));
    }
    let table = BesselTable::new(t.abs(), 2 * l_max)?;
    let tail: f64 = (1..=l_max)
        .map(|l| table.j(2 * l) * (2.0 * l as f64 * x).cos())
        .sum();
    Ok(table.j(0) + 2.0 * tail)
}

/// Splits the even-order normalisation sum by order modulo 4.
///
/// Returns `(J_0 + 2 sum_{l=1}^{l_max} J_{4l}, 2 sum_{l=1}^{l_max} J_{4l-2})`,
/// which converge to `((1 + cos t) / 2, (1 - cos t) / 2)`.
pub fn mod4_order_sums(t: f64, l_max: usize) -> Result<(f64, f64)> {
    check_finite("t", t)?;
    if l_max == 0 {
        return Err(invalid("l_max must be at least 1"));
    }
    let table = BesselTable::new(t.abs(), 4 * l_max)?;
    let zero_mod4: f64 = (1..=l_max).map(|l| table.j(4 * l)).sum();
    let two_mod4: f64 = (1..=l_max).map(|l| table.j(4 * l - 2)).sum();
    Ok((table.j(0) + 2.0 * zero_mod4, 2.0 * two_mod4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference_oracles::{bessel_integral_oracle, bessel_series_oracle};

    #[test]
    fn zero_argument_is_unit_impulse() {
        let t = bessel_table(0.0, 5).unwrap();
        assert_eq!(t.values(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn j0_of_two() {
        // 40-term power series
        let oracle = bessel_series_oracle(0, 2.0, 40).unwrap();
        assert!((oracle - 0.223_890_779_141_235_7).abs() < 1e-15);
        let got = bessel_j(0, 2.0).unwrap();
        assert!((got - oracle).abs() < 1e-13, "{got} vs {oracle}");
    }

    #[test]
    fn small_argument_leading_term() {
        let x: f64 = 1e-4;
        let got = bessel_j(1, x).unwrap();
        let want = 0.5 * x - x.powi(3) / 16.0;
        assert!(((got - want) / want).abs() < 1e-14, "{got}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(bessel_table(-1.0, 3).is_err());
        assert!(bessel_table(f64::NAN, 3).is_err());
        assert!(bessel_table(f64::INFINITY, 3).is_err());
        assert!(bessel_table(1.0, 0).is_err());
    }

    #[test]
    fn agrees_with_power_series() {
        for &x in &[0.1, 1.0, 2.0, 5.0, 10.0] {
            let t = bessel_table(x, 30).unwrap();
            for n in 0..=30 {
                let s = bessel_series_oracle(n, x, 60).unwrap();
                assert!((t.j(n) - s).abs() < 1e-12, "J_{n}({x}): {} vs {s}", t.j(n));
            }
        }
    }

    #[test]
    fn agrees_with_quadrature_at_large_argument() {
        let x = 6000.0;
        let t = bessel_table(x, 3620).unwrap();
        for &n in &[0, 1, 2, 7, 500, 1999, 3000, 3620] {
            let q = bessel_integral_oracle(n, x, 16384).unwrap();
            assert!((t.j(n) - q).abs() < 1e-13, "J_{n}({x}): {} vs {q}", t.j(n));
        }
    }

    #[test]
    fn normalization_at_scale() {
        // The tail past the turning point n = x has width ~ x^(1/3); the table
        // must reach well beyond it before the truncated sum closes.
        for &x in &[10.0_f64, 100.0, 1000.0, 6000.0] {
            let m = x as usize + 40 + (10.0 * x.cbrt()).ceil() as usize;
            let t = bessel_table(x, m).unwrap();
            assert!((t.even_normalization_sum() - 1.0).abs() < 1e-12, "x = {x}");
        }
        let short = bessel_table(6000.0, 3620).unwrap();
        let long = bessel_table(6000.0, 6300).unwrap();
        let prefix = short
            .values()
            .iter()
            .zip(long.values())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(prefix < 1e-14, "{prefix}");
    }

    #[test]
    fn normalization_over_short_table_is_incomplete() {
        // J_{1040}(1000) ~ 1.3e-5, so stopping at x + 40 misses the tail.
        let t = bessel_table(1000.0, 1040).unwrap();
        let gap = t.even_normalization_sum() - 1.0;
        assert!(gap < -1e-6 && gap > -1e-4, "{gap}");
        assert!((t.j(1040) - 1.259_129_801_050_149_8e-5).abs() < 1e-17);
    }

    #[test]
    fn start_order_clears_argument_and_order() {
        assert!(miller_start_order(6000.0, 3620) > 6000 + 40);
        assert!(miller_start_order(1.0, 3620) > 3620 + 40);
        assert_eq!(miller_start_order(1.0, 1), 41);
    }

    #[test]
    fn table_covers_check() {
        let t = bessel_table(4.0, 10).unwrap();
        assert!(t.ensure_covers(4.0, 10).is_ok());
        assert!(t.ensure_covers(4.0, 11).is_err());
        assert!(t.ensure_covers(4.5, 2).is_err());
    }

    #[test]
    fn jacobi_anger_partial_sums() {
        assert_eq!(cos_sine_expansion(0.0, 1.3, 1).unwrap(), 1.0);
        let t = 37.0;
        let v = cos_sine_expansion(t, 0.0, ((t + 40.0) / 2.0).ceil() as usize).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = cos_sine_expansion(7.3, 0.6, 30).unwrap();
        assert!((v - (7.3 * 0.6_f64.sin()).cos()).abs() < 1e-12);
        assert!(cos_sine_expansion(f64::NAN, 0.0, 3).is_err());
    }

    #[test]
    fn mod4_sums_closed_forms() {
        assert_eq!(mod4_order_sums(0.0, 1).unwrap(), (1.0, 0.0));
        let (a, b) = mod4_order_sums(5.0, 20).unwrap();
        assert!((a - 0.5 * (1.0 + 5.0_f64.cos())).abs() < 1e-12);
        assert!((b - 0.5 * (1.0 - 5.0_f64.cos())).abs() < 1e-12);
        let (a, b) = mod4_order_sums(20.0, 20).unwrap();
        assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decay_beyond_turning_point() {
        let x = 50.0;
        let t = bessel_table(x, 200).unwrap();
        let first = (x + 10.0) as usize;
        for n in first..200 {
            assert!(t.j(n + 1).abs() < t.j(n).abs() || t.j(n) == 0.0);
        }
    }
}
