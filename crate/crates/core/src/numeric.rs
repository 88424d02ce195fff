//! Scalar root finding and one-dimensional maximization used by the
//! equilibrium solvers.

/// Bisect `f` on `[lo, hi]`, which must bracket a sign change. Returns the
/// midpoint once the interval width drops below `xtol`.
pub fn bisect<F>(mut lo: f64, mut hi: f64, f: F, xtol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    // f64 halves to any xtol > 0 in well under 200 steps.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Some(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Scan `[lo, hi]` at `points` evenly spaced abscissae and return the
/// bracketing sub-intervals on which `f` changes sign, in order.
pub fn sign_change_brackets<F>(lo: f64, hi: f64, points: usize, f: F) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    debug_assert!(points >= 2 && hi > lo);
    let mut out = Vec::new();
    let step = (hi - lo) / (points - 1) as f64;
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..points {
        let x = if i == points - 1 { hi } else { lo + i as f64 * step };
        let fx = f(x);
        if f_prev == 0.0 || f_prev.signum() != fx.signum() {
            out.push((x_prev, x));
        }
        x_prev = x;
        f_prev = fx;
    }
    out
}

const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of `f` on `[lo, hi]`. Assumes a
/// unimodal objective on the interval; returns the abscissa of the
/// maximum to within `xtol`.
pub fn golden_section_max<F>(mut lo: f64, mut hi: f64, f: F, xtol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    debug_assert!(hi >= lo);
    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > xtol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}
