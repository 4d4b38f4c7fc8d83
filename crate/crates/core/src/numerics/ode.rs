//! Classical fixed-step fourth-order Runge-Kutta integration.

use crate::error::{domain, Error, Result};

/// A point on a trajectory. `D` is the state dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState<const D: usize> {
    pub t: f64,
    pub y: [f64; D],
}

impl<const D: usize> OdeState<D> {
    pub fn new(t: f64, y: [f64; D]) -> Self {
        Self { t, y }
    }
}

fn axpy<const D: usize>(y: &[f64; D], h: f64, k: &[f64; D]) -> [f64; D] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

/// One RK4 step of size `dt` from `(t, y)`.
#[inline]
pub(crate) fn rk4_step<const D: usize, F>(deriv: &F, t: f64, y: &[f64; D], dt: f64) -> [f64; D]
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let half = 0.5 * dt;
    let k1 = deriv(t, y);
    let k2 = deriv(t + half, &axpy(y, half, &k1));
    let k3 = deriv(t + half, &axpy(y, half, &k2));
    let k4 = deriv(t + dt, &axpy(y, dt, &k3));
    std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn check_step(y0: &[f64], dt: f64, t_end: f64, t0: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return domain(format!("step must be positive and finite, got {dt}"));
    }
    if !t_end.is_finite() || t_end < t0 {
        return domain(format!("t_end {t_end} precedes t0 {t0}"));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return domain("initial state is not finite");
    }
    // tolerate t_end being a rounding error away from a multiple of dt
    Ok(((t_end - t0) / dt + 1e-9).floor() as usize)
}

/// Integrates from `y0` to `t_end`, returning every state at `t0 + k·dt`
/// including the initial one. Times are computed as `t0 + k·dt`, not by
/// accumulation.
pub fn rk4_integrate<const D: usize, F>(deriv: F, y0: OdeState<D>, t_end: f64, dt: f64) -> Result<Vec<OdeState<D>>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    rk4_sampled(deriv, y0, t_end, dt, 1)
}

/// As [`rk4_integrate`] but keeps only every `every`-th step, which avoids
/// materializing long fine-step trajectories.
pub fn rk4_sampled<const D: usize, F>(
    deriv: F,
    y0: OdeState<D>,
    t_end: f64,
    dt: f64,
    every: usize,
) -> Result<Vec<OdeState<D>>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    if every == 0 {
        return domain("sampling stride must be at least 1");
    }
    let steps = check_step(&y0.y, dt, t_end, y0.t)?;
    let mut out = Vec::with_capacity(steps / every + 1);
    out.push(y0);
    let mut y = y0.y;
    for k in 0..steps {
        let t = y0.t + k as f64 * dt;
        let next = rk4_step(&deriv, t, &y, dt);
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t, context: format!("non-finite state after step {}", k + 1) });
        }
        y = next;
        if (k + 1) % every == 0 {
            out.push(OdeState::new(y0.t + (k + 1) as f64 * dt, y));
        }
    }
    Ok(out)
}

/// Keeps every `stride`-th state starting from the first.
pub fn downsample<T: Clone>(trajectory: &[T], stride: usize) -> Result<Vec<T>> {
    if stride == 0 {
        return domain("downsampling stride must be at least 1");
    }
    Ok(trajectory.iter().step_by(stride).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn decay_error(dt: f64) -> f64 {
        let traj = rk4_integrate(|_, y: &[f64; 1]| [-y[0]], OdeState::new(0.0, [1.0]), 1.0, dt).unwrap();
        let last = traj.last().unwrap();
        assert!((last.t - 1.0).abs() < 1e-12);
        (last.y[0] - (-1f64).exp()).abs()
    }

    #[test]
    fn exponential_decay() {
        assert!(decay_error(1e-3) < 1e-10);
        let traj = rk4_integrate(|_, y: &[f64; 1]| [-y[0]], OdeState::new(0.0, [1.0]), 1.0, 1e-3).unwrap();
        assert_eq!(traj.len(), 1001);
        assert_eq!(traj[500].t, 0.5);
    }

    #[test]
    fn fourth_order_convergence() {
        let ratio = decay_error(0.1) / decay_error(0.05);
        assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
    }

    #[test]
    fn harmonic_oscillator_period() {
        let dt = 1e-3;
        let traj = rk4_integrate(|_, y: &[f64; 2]| [y[1], -y[0]], OdeState::new(0.0, [1.0, 0.0]), TAU, dt).unwrap();
        // TAU is not a multiple of dt; finish the period with one partial step
        let last = traj.last().unwrap();
        let y = rk4_step(&|_, y: &[f64; 2]| [y[1], -y[0]], last.t, &last.y, TAU - last.t);
        assert!((y[0] - 1.0).abs() < 1e-6 && y[1].abs() < 1e-6, "{y:?}");
    }

    #[test]
    fn sampling_and_downsampling_agree() {
        let f = |_: f64, y: &[f64; 2]| [y[1], -y[0]];
        let full = rk4_integrate(f, OdeState::new(0.0, [1.0, 0.0]), 2.0, 0.01).unwrap();
        let sampled = rk4_sampled(f, OdeState::new(0.0, [1.0, 0.0]), 2.0, 0.01, 10).unwrap();
        assert_eq!(downsample(&full, 10).unwrap(), sampled);
        assert_eq!(sampled.len(), 21);
    }

    #[test]
    fn divergence_is_reported() {
        let err = rk4_integrate(|_, y: &[f64; 1]| [y[0] * y[0]], OdeState::new(0.0, [1.0]), 2.0, 1e-3).unwrap_err();
        match err {
            Error::Divergence { t, .. } => assert!(t > 0.9 && t < 1.1, "t={t}"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_bad_steps() {
        let f = |_: f64, y: &[f64; 1]| [-y[0]];
        assert!(rk4_integrate(f, OdeState::new(0.0, [1.0]), 1.0, 0.0).is_err());
        assert!(rk4_integrate(f, OdeState::new(0.0, [f64::NAN]), 1.0, 0.1).is_err());
        assert!(rk4_integrate(f, OdeState::new(1.0, [1.0]), 0.0, 0.1).is_err());
    }
}
