//! One-dimensional quadrature of functions given by their logarithm.
//!
//! Integrands are supplied as `ln f(x)` and every panel sum is a log-sum-exp,
//! so integrals of size `e^-2000` or `e^2000` are computed without underflow.
//! Refinement is global: the panel with the largest error estimate is bisected
//! until the summed error meets the tolerance.

use serde::{Deserialize, Serialize};

use super::{log_abs_diff, lse2, lse_iter};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMethod {
    /// Composite Gauss-Legendre; panel error from comparing one panel against its two halves.
    GaussLegendreComposite,
    /// Simpson's rule with the usual `|S2 - S1| / 15` error estimate.
    AdaptiveSimpson,
}

/// Quadrature settings.
///
/// `abs_tol` is measured in units of the largest integrand value seen, which
/// keeps it meaningful for integrands that are far from order one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub nodes_per_panel: usize,
    pub initial_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::GaussLegendreComposite,
            abs_tol: 1e-16,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
            nodes_per_panel: 10,
            initial_panels: 16,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return domain("quadrature tolerances must be positive");
        }
        if self.nodes_per_panel < 2 {
            return domain("nodes_per_panel must be at least 2");
        }
        if self.max_subdivisions < 1 || self.initial_panels < 1 {
            return domain("max_subdivisions and initial_panels must be at least 1");
        }
        Ok(())
    }
}

/// Result of [`integrate`]: the log of the integral and a relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegral {
    pub log_value: f64,
    pub rel_err: f64,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (1.0, 0.0);
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
                }
                dp = nf * (z * p1 - p2) / (z * z - 1.0);
                let step = p1 / dp;
                z -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Plain (linear-space) integral over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let (half, mid) = (0.5 * (b - a), 0.5 * (a + b));
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }
}

enum Rule {
    Gauss(GaussLegendre),
    Simpson,
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

struct Integrator<'a, F> {
    log_f: &'a F,
    rule: Rule,
    peak: f64,
}

impl<F: Fn(f64) -> f64> Integrator<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        let v = (self.log_f)(x);
        if v.is_nan() {
            return domain(format!("integrand is NaN at x = {x}"));
        }
        if v > self.peak {
            self.peak = v;
        }
        Ok(v)
    }

    fn rule_estimate(&mut self, a: f64, b: f64) -> Result<f64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        match &self.rule {
            Rule::Gauss(gl) => {
                let pts: Vec<(f64, f64)> =
                    gl.nodes.iter().zip(&gl.weights).map(|(x, w)| (mid + half * x, (w * half).ln())).collect();
                let mut terms = Vec::with_capacity(pts.len());
                for (x, lw) in pts {
                    terms.push(lw + self.eval(x)?);
                }
                Ok(lse_iter(terms.iter().copied()))
            }
            Rule::Simpson => {
                let (fa, fm, fb) = (self.eval(a)?, self.eval(mid)?, self.eval(b)?);
                let w = ((b - a) / 6.0).ln();
                let t = [w + fa, w + 4f64.ln() + fm, w + fb];
                Ok(lse_iter(t.iter().copied()))
            }
        }
    }

    fn panel(&mut self, a: f64, b: f64, coarse: Option<f64>) -> Result<Panel> {
        let coarse = match coarse {
            Some(c) => c,
            None => self.rule_estimate(a, b)?,
        };
        let m = 0.5 * (a + b);
        let left = self.rule_estimate(a, m)?;
        let right = self.rule_estimate(m, b)?;
        let fine = lse2(left, right);
        let mut err = log_abs_diff(fine, coarse);
        if matches!(self.rule, Rule::Simpson) {
            err -= 15f64.ln();
        }
        Ok(Panel { a, b, left, right, err })
    }
}

/// Integrates `exp(log_f)` over `[a, b]` and returns the log of the integral.
///
/// `b` may be `+inf`; the domain `[a, inf)` is then mapped onto `[0, 1)` with
/// `x = a + t / (1 - t)`, and the integrand must vanish at infinity.
pub fn integrate<F: Fn(f64) -> f64>(log_f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<LogIntegral> {
    spec.validate()?;
    if !a.is_finite() || b.is_nan() || b == f64::NEG_INFINITY || a >= b {
        return domain(format!("invalid integration range [{a}, {b}]"));
    }
    if b == f64::INFINITY {
        let mapped = |t: f64| {
            if t >= 1.0 {
                return f64::NEG_INFINITY;
            }
            let s = 1.0 - t;
            log_f(a + t / s) - 2.0 * s.ln()
        };
        integrate_finite(&mapped, 0.0, 1.0, spec)
    } else {
        integrate_finite(&log_f, a, b, spec)
    }
}

fn integrate_finite<F: Fn(f64) -> f64>(log_f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<LogIntegral> {
    let rule = match spec.method {
        QuadratureMethod::GaussLegendreComposite => Rule::Gauss(GaussLegendre::new(spec.nodes_per_panel)),
        QuadratureMethod::AdaptiveSimpson => Rule::Simpson,
    };
    let mut it = Integrator { log_f, rule, peak: f64::NEG_INFINITY };
    let width = (b - a) / spec.initial_panels as f64;
    let mut panels = Vec::with_capacity(spec.initial_panels * 4);
    for i in 0..spec.initial_panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == spec.initial_panels { b } else { lo + width };
        panels.push(it.panel(lo, hi, None)?);
    }

    let log_abs = spec.abs_tol.ln();
    let log_rel = spec.rel_tol.ln();
    let mut splits = 0;
    loop {
        let total = lse_iter(panels.iter().map(|p| lse2(p.left, p.right)));
        let err = lse_iter(panels.iter().map(|p| p.err));
        if total == f64::INFINITY {
            return Ok(LogIntegral { log_value: total, rel_err: 0.0 });
        }
        if total == f64::NEG_INFINITY {
            return Ok(LogIntegral { log_value: total, rel_err: 0.0 });
        }
        let rel_err = (err - total).exp();
        if err <= (log_abs + it.peak).max(log_rel + total) {
            return Ok(LogIntegral { log_value: total, rel_err });
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::Accuracy { stage: "quadrature", estimate: total, rel_err });
        }
        let worst = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.err > acc.1 { (i, p.err) } else { acc })
            .0;
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            return Err(Error::Accuracy {
                stage: "quadrature (panel below float resolution)",
                estimate: total,
                rel_err,
            });
        }
        panels.push(it.panel(p.a, m, Some(p.left))?);
        panels.push(it.panel(m, p.b, Some(p.right))?);
        splits += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(method: QuadratureMethod) -> QuadratureSpec {
        QuadratureSpec { method, ..QuadratureSpec::default() }
    }

    #[test]
    fn gauss_legendre_rule_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(5);
        // degree 9 = 2n - 1 is integrated exactly
        let v = gl.integrate(|x| x.powi(9) + x.powi(8), -1.0, 1.0);
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
        assert!((gl.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn square_on_unit_interval() {
        for m in [QuadratureMethod::GaussLegendreComposite, QuadratureMethod::AdaptiveSimpson] {
            let r = integrate(|x| 2.0 * x.ln(), 0.0, 1.0, &spec(m)).unwrap();
            assert!((r.log_value - (1.0f64 / 3.0).ln()).abs() < 1e-10, "{m:?}: {}", r.log_value);
        }
    }

    #[test]
    fn normal_density_normalizes() {
        let ln_norm = -0.5 * (2.0 * std::f64::consts::PI).ln();
        let r = integrate(|x| ln_norm - 0.5 * x * x, -8.0, 8.0, &QuadratureSpec::default()).unwrap();
        // the mass beyond ±8 is ~1.2e-15
        assert!(r.log_value.abs() < 1e-12, "{}", r.log_value);
    }

    #[test]
    fn circular_prior_on_half_line() {
        // κ (1 + κ²)^(-3/2) has antiderivative -(1 + κ²)^(-1/2), so the integral is 1
        let log_f = |k: f64| k.ln() - 1.5 * (k * k).ln_1p();
        let r = integrate(log_f, 0.0, f64::INFINITY, &QuadratureSpec::default()).unwrap();
        assert!(r.log_value.abs() < 1e-10, "{}", r.log_value);
        let r = integrate(log_f, 0.0, f64::INFINITY, &spec(QuadratureMethod::AdaptiveSimpson)).unwrap();
        assert!(r.log_value.abs() < 1e-9, "{}", r.log_value);
    }

    #[test]
    fn extreme_scales_do_not_underflow() {
        let r = integrate(|x| -3000.0 - 0.5 * x * x, -10.0, 10.0, &QuadratureSpec::default()).unwrap();
        let expect = -3000.0 + 0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!((r.log_value - expect).abs() < 1e-10);
    }

    #[test]
    fn narrow_peak_is_resolved() {
        let s = 1e-3;
        let log_f = |x: f64| -0.5 * ((x - 0.37) / s).powi(2);
        let r = integrate(log_f, -1.0, 1.0, &QuadratureSpec::default()).unwrap();
        let expect = (s * (2.0 * std::f64::consts::PI).sqrt()).ln();
        assert!((r.log_value - expect).abs() < 1e-9);
    }

    #[test]
    fn zero_integrand_gives_neg_infinity() {
        let r = integrate(|_| f64::NEG_INFINITY, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.log_value, f64::NEG_INFINITY);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let tight =
            QuadratureSpec { max_subdivisions: 2, initial_panels: 1, nodes_per_panel: 2, ..QuadratureSpec::default() };
        match integrate(|x| -((x - 0.5) / 0.01).powi(2), 0.0, 1.0, &tight) {
            Err(Error::Accuracy { estimate, .. }) => assert!(estimate.is_finite()),
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn bad_arguments() {
        let s = QuadratureSpec::default();
        assert!(integrate(|x| x, 1.0, 0.0, &s).is_err());
        assert!(integrate(|x| x, f64::NEG_INFINITY, 0.0, &s).is_err());
        assert!(integrate(|_| f64::NAN, 0.0, 1.0, &s).is_err());
        let bad = QuadratureSpec { nodes_per_panel: 1, ..s };
        assert!(integrate(|x| x, 0.0, 1.0, &bad).is_err());
    }

    #[test]
    fn composite_error_drops_at_the_gauss_order() {
        // halving the panel width of an n-node rule shrinks the error by about 2^(2n)
        let n = 3;
        let gl = GaussLegendre::new(n);
        let f = |x: f64| x.exp();
        let exact = 1f64.exp() - 1.0;
        let composite = |panels: usize| {
            let h = 1.0 / panels as f64;
            (0..panels).map(|i| gl.integrate(f, i as f64 * h, (i + 1) as f64 * h)).sum::<f64>()
        };
        let e1 = (composite(2) - exact).abs();
        let e2 = (composite(4) - exact).abs();
        assert!(e1 / e2 >= 2f64.powi(2 * n as i32 - 1), "ratio {}", e1 / e2);
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (x * 3.0).sin().abs().ln();
        let a = integrate(f, 0.1, 2.0, &QuadratureSpec::default()).unwrap();
        let b = integrate(f, 0.1, 2.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(a.log_value.to_bits(), b.log_value.to_bits());
    }
}
