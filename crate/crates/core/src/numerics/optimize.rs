//! Bounded scalar maximization.

use crate::error::{domain, Result};

const PRESCAN_POINTS: usize = 41;
const GOLDEN: f64 = 0.381_966_011_250_105_1; // (3 - √5) / 2
const MAX_ITER: usize = 200;

/// Maximizes `f` on `[lo, hi]`, returning `(argmax, max)`.
///
/// A 41-point pre-scan picks the bracket around the best grid point, then
/// Brent's parabolic/golden-section search refines it to within `tol`. The
/// result is exact only for unimodal `f`; unimodality is not checked. A
/// constant `f` returns the midpoint. Both endpoints are candidates, so a
/// maximum on the boundary is found.
pub fn maximize_scalar<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return domain(format!("maximize_scalar needs finite lo < hi, got [{lo}, {hi}]"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let h = (hi - lo) / (PRESCAN_POINTS - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..PRESCAN_POINTS)
        .map(|i| {
            let x = if i == PRESCAN_POINTS - 1 { hi } else { lo + i as f64 * h };
            (x, f(x))
        })
        .collect();
    let first = grid[0].1;
    if grid.iter().all(|&(_, v)| v == first) {
        let mid = 0.5 * (lo + hi);
        return Ok((mid, f(mid)));
    }
    // NaN never wins
    let best = (0..PRESCAN_POINTS).filter(|&i| !grid[i].1.is_nan()).fold(None, |acc: Option<usize>, i| match acc {
        Some(j) if grid[j].1 >= grid[i].1 => Some(j),
        _ => Some(i),
    });
    let Some(best) = best else {
        return domain("objective is NaN on the whole pre-scan grid");
    };
    let a = grid[best.saturating_sub(1)].0;
    let b = grid[(best + 1).min(PRESCAN_POINTS - 1)].0;
    let (x, fx) = brent_max(&f, a, b, grid[best], tol);
    if fx >= grid[best].1 {
        Ok((x, fx))
    } else {
        Ok(grid[best])
    }
}

/// Brent's method on `-f` over `[a, b]`, started from the interior point `start`.
fn brent_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, start: (f64, f64), tol: f64) -> (f64, f64) {
    let (mut x, mut fx) = (start.0, -start.1);
    let (mut w, mut fw) = (x, fx);
    let (mut v, mut fv) = (x, fx);
    let (mut d, mut e) = (0.0f64, 0.0f64);
    for _ in 0..MAX_ITER {
        let m = 0.5 * (a + b);
        let tol1 = 1e-10 * x.abs() + 0.25 * tol;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = -f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    (x, -fx)
}
