//! Bracketing root finders.

/// Shrinks `[lo, hi]` around the boundary of a predicate that is false at
/// `lo` and true at `hi`. Stops when the bracket is narrower than `tol`, when
/// the midpoint is no longer representable between the ends, or after
/// `max_iter` halvings. Returns the final `(lo, hi)`.
pub fn bisect_predicate<P: FnMut(f64) -> bool>(
    mut pred: P,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Root of `f` in `[lo, hi]`, assuming `f(lo)` and `f(hi)` have opposite
/// signs (or one of them is zero).
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let fhi = f(hi);
    if fhi == 0.0 {
        return hi;
    }
    let lo_negative = flo < 0.0;
    let mut hit = None;
    let (a, b) = bisect_predicate(
        |x| {
            let v = f(x);
            if v == 0.0 {
                hit = Some(x);
            }
            // "true" on the side of hi
            if lo_negative {
                v >= 0.0
            } else {
                v <= 0.0
            }
        },
        lo,
        hi,
        tol,
        200,
    );
    hit.filter(|x| *x >= a && *x <= b).unwrap_or(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let r = bisect_root(|x| 2.0 - x * x, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn exact_zero_at_midpoint() {
        assert_eq!(bisect_root(|x| x, -1.0, 1.0, 1e-12), 0.0);
    }

    #[test]
    fn predicate_bracket_is_tight() {
        let (lo, hi) = bisect_predicate(|x| x >= 0.3, 0.0, 1.0, 0.0, 200);
        assert!(lo < 0.3 && hi >= 0.3);
        assert!(hi - lo < 1e-15);
    }
}
