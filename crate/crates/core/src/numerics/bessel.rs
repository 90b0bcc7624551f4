//! Spherical Bessel functions of the first kind, `j_k(z)` for real `z > 0`.
//!
//! Orders `k <= z` come from the upward recurrence, which is stable there.
//! Higher orders come from a Miller-type downward recurrence, rescaled to match
//! the upward values at the switchover order. Matching at `j_0` alone is not
//! usable because `j_0(pi j) = 0` at exactly the arguments we care about.

use super::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Largest order accepted by the public entry points.
pub const MAX_ORDER: usize = 500;

/// Magnitudes below this are reported as underflow.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValue {
    pub value: f64,
    /// Set when `|j_k(z)| < 1e-300`; `value` is then a signed zero.
    pub underflow: bool,
}

/// `j_k(z)` for `k <= 500`, `z > 0`.
pub fn spherical_bessel(k: usize, z: f64) -> Result<BesselValue> {
    let seq = spherical_bessel_orders(k, z)?;
    let v = seq[k];
    if v.abs() < UNDERFLOW_THRESHOLD {
        Ok(BesselValue {
            value: 0.0f64.copysign(v),
            underflow: true,
        })
    } else {
        Ok(BesselValue {
            value: v,
            underflow: false,
        })
    }
}

/// `[j_0(z), ..., j_kmax(z)]`.
pub fn spherical_bessel_orders(kmax: usize, z: f64) -> Result<Vec<f64>> {
    check_args(kmax, z)?;
    Ok(orders_with_trig(kmax, z, z.sin(), z.cos()))
}

/// `[j_0(pi j), ..., j_kmax(pi j)]` for integer `j >= 1`, using the exact
/// values `sin(pi j) = 0` and `cos(pi j) = (-1)^j`.
pub fn spherical_bessel_orders_at_pi_multiple(kmax: usize, j: u64) -> Result<Vec<f64>> {
    if j == 0 {
        return Err(Error::InvalidArgument(
            "spherical Bessel argument must be positive".into(),
        ));
    }
    let z = std::f64::consts::PI * j as f64;
    check_args(kmax, z)?;
    let c = if j % 2 == 0 { 1.0 } else { -1.0 };
    Ok(orders_with_trig(kmax, z, 0.0, c))
}

/// Double-double version of [`spherical_bessel_orders_at_pi_multiple`].
pub fn spherical_bessel_orders_at_pi_multiple_dd(kmax: usize, j: u64) -> Result<Vec<DoubleDouble>> {
    if j == 0 {
        return Err(Error::InvalidArgument(
            "spherical Bessel argument must be positive".into(),
        ));
    }
    let zf = std::f64::consts::PI * j as f64;
    check_args(kmax, zf)?;
    let z = DoubleDouble::PI * j as f64;
    let zinv = z.recip();
    let c = if j % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = vec![DoubleDouble::ZERO; kmax + 1];
    if kmax == 0 {
        return Ok(out);
    }
    // j_0 = sin(z)/z = 0, j_1 = -cos(z)/z
    let kup = (zf.floor() as usize).min(kmax);
    out[1] = zinv * (-c);
    for k in 1..kup {
        out[k + 1] = out[k] * zinv * (2 * k + 1) as f64 - out[k - 1];
    }
    if kup == kmax {
        return Ok(out);
    }
    let start = kmax + 20 + (40.0 * kmax as f64).sqrt() as usize;
    let mut down = vec![DoubleDouble::ZERO; kmax + 1];
    let mut f_next = DoubleDouble::ZERO;
    let mut f = DoubleDouble::from_f64(1e-200);
    for k in (1..=start).rev() {
        let f_prev = f * zinv * (2 * k + 1) as f64 - f_next;
        f_next = f;
        f = f_prev;
        if k - 1 <= kmax {
            down[k - 1] = f;
        }
        if f.hi().abs() > 1e200 {
            f = f * 1e-200;
            f_next = f_next * 1e-200;
            for d in down.iter_mut() {
                *d = *d * 1e-200;
            }
        }
    }
    let r = down[kup].hi().abs().max(down[kup - 1].hi().abs());
    let (a, b) = (down[kup] / r, down[kup - 1] / r);
    let scale = (out[kup] * a + out[kup - 1] * b) / (a * a + b * b) / r;
    for k in (kup + 1)..=kmax {
        out[k] = scale * down[k];
    }
    Ok(out)
}

fn check_args(kmax: usize, z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "spherical Bessel argument must be positive and finite, got {z}"
        )));
    }
    if kmax > MAX_ORDER {
        return Err(Error::DegreeCap {
            degree: kmax,
            cap: MAX_ORDER,
        });
    }
    Ok(())
}

fn orders_with_trig(kmax: usize, z: f64, s: f64, c: f64) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    let j0 = s / z;
    out[0] = j0;
    if kmax == 0 {
        return out;
    }
    // highest order reachable by the upward recurrence
    let kup = (z.floor() as usize).min(kmax);
    if kup >= 1 {
        out[1] = s / (z * z) - c / z;
        for k in 1..kup {
            out[k + 1] = (2 * k + 1) as f64 / z * out[k] - out[k - 1];
        }
    }
    if kup == kmax {
        return out;
    }

    let start = kmax + 20 + (40.0 * kmax as f64).sqrt() as usize;
    let mut down = vec![0.0; kmax + 1];
    let mut f_next = 0.0;
    let mut f = 1e-200;
    for k in (1..=start).rev() {
        // f = f_k, f_next = f_{k+1}; produce f_{k-1}
        let f_prev = (2 * k + 1) as f64 / z * f - f_next;
        f_next = f;
        f = f_prev;
        let idx = k - 1;
        if idx <= kmax {
            down[idx] = f;
        }
        if f.abs() > 1e200 {
            f *= 1e-200;
            f_next *= 1e-200;
            for d in down.iter_mut() {
                *d *= 1e-200;
            }
        }
    }

    let scale = if kup >= 1 {
        let r = down[kup].abs().max(down[kup - 1].abs());
        let (a, b) = (down[kup] / r, down[kup - 1] / r);
        (out[kup] * a + out[kup - 1] * b) / (a * a + b * b) / r
    } else {
        // z < 1: j_0 is close to 1 and free of cancellation
        j0 / down[0]
    };
    for k in (kup + 1)..=kmax {
        out[k] = scale * down[k];
    }
    out
}
