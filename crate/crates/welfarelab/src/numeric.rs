//! Root finding and quadrature used by the welfare module.
//!
//! Two bisection flavors are provided because the welfare code needs both:
//! a plain midpoint bisection for continuous indirect-utility equations, and
//! a *certified* generalized-inverse bisection for CDF quantiles, which must
//! return the smallest point where a nondecreasing (possibly discontinuous)
//! function reaches a level — the `inf {z : G(z) >= tau}` convention.
//!
//! ```
//! use welfarelab::numeric::bisect_increasing_root;
//!
//! let root = bisect_increasing_root(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
//! assert!((root - 2.0_f64.sqrt()).abs() < 1e-11);
//! ```

use crate::{Error, Result};

/// Midpoint bisection for a continuous nondecreasing `f` with a sign change.
///
/// Requires `f(lo) <= 0 <= f(hi)`; returns a point within `tol` of a root.
/// Errors with [`Error::BracketError`] when the bracket does not straddle.
pub fn bisect_increasing_root<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::BracketError { lo, hi });
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    // ~60 iterations resolve any f64 bracket to 1e-12 relative width; the
    // cap guards against pathological tolerances, not normal operation.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket collapsed to adjacent floats
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest `z` in `[lo, hi]` with `f(z) >= level`, for nondecreasing `f`.
///
/// This is the generalized inverse `inf {z : f(z) >= level}` localized to a
/// bracket, valid for step functions: the returned point `z*` satisfies
/// `f(z*) >= level` exactly (it is always a point where the level is
/// *attained*), and no point more than `tol` below it does. Requires
/// `f(hi) >= level`; if `f(lo) >= level` the answer is `lo` itself.
pub fn bisect_smallest_at_least<F: FnMut(f64) -> f64>(
    mut f: F,
    level: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    if f(hi) < level {
        return Err(Error::BracketError { lo, hi });
    }
    if f(lo) >= level {
        return Ok(lo);
    }
    // Invariant: f(lo) < level <= f(hi).
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance.
///
/// The classic recursive scheme with the 1/15 Richardson error estimate; the
/// integrand must be bounded on the interval. Depth is capped at 50, by which
/// point subintervals are ~2^-50 of the original and roundoff dominates.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&mut f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Integrates `f` over `[a, b]` splitting at the supplied interior points.
///
/// Breakpoints outside `(a, b)` are ignored; each smooth piece gets an equal
/// share of the tolerance. Use when the integrand has kinks at known places
/// (e.g. a CDF with atoms) so the adaptive rule never straddles one.
pub fn integrate_with_breakpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> f64 {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = Vec::with_capacity(cuts.len() + 2);
    nodes.push(a);
    nodes.extend(cuts);
    nodes.push(b);
    let per = tol / (nodes.len() - 1) as f64;
    nodes
        .windows(2)
        .map(|w| adaptive_simpson(&mut f, w[0], w[1], per))
        .sum()
}
