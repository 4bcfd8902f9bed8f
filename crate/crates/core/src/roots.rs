//! Scalar root finding on a bracket.

use crate::{Error, Result};

const MAX_ITER: usize = 400;

/// Root of `f` on `[lo, hi]` by bisection, where `f(lo)` and `f(hi)` differ in sign.
/// Stops once the bracket is narrower than `xtol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, op: &'static str) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Root {
            op,
            lo,
            hi,
            iterations: 0,
        });
    }
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::Root {
        op,
        lo,
        hi,
        iterations: MAX_ITER,
    })
}

/// Newton's method kept inside a shrinking sign-change bracket; falls back to a
/// bisection step whenever the Newton step leaves the bracket or stalls.
/// `f` returns the value and the derivative.
pub fn newton_bracketed<F: FnMut(f64) -> (f64, f64)>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    op: &'static str,
) -> Result<f64> {
    let (flo, _) = f(lo);
    let (fhi, _) = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Root {
            op,
            lo,
            hi,
            iterations: 0,
        });
    }
    let increasing = fhi > 0.0;
    let mut x = 0.5 * (lo + hi);
    let mut last_width = hi - lo;
    for _ in 0..MAX_ITER {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= xtol {
            return Ok(0.5 * (lo + hi));
        }
        let newton = x - fx / dfx;
        let step_ok = newton.is_finite() && newton > lo && newton < hi;
        let next = if step_ok && ((hi - lo) < 0.75 * last_width || (newton - x).abs() < 0.5 * (hi - lo)) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        last_width = hi - lo;
        if (next - x).abs() <= 0.25 * xtol {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Root {
        op,
        lo,
        hi,
        iterations: MAX_ITER,
    })
}
