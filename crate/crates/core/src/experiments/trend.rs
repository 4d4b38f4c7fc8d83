//! Shape statistics of a median series along one sweep axis.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::models::misspec::ls_slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendStats {
    /// Fraction of adjacent pairs that strictly increase.
    pub increasing_fraction: f64,
    /// Fraction of adjacent pairs that strictly decrease.
    pub decreasing_fraction: f64,
    /// R² of the least-squares line of the series against the axis.
    pub linear_fit_r2: f64,
    /// R² against the log of the axis; NaN when an axis value is not positive.
    pub log_fit_r2: f64,
    /// Sign of each value: -1, 0 or 1.
    pub signs: Vec<i8>,
}

impl TrendStats {
    pub fn monotone_fraction(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Increasing => self.increasing_fraction,
            Direction::Decreasing => self.decreasing_fraction,
        }
    }
}

/// R² of the least-squares line; a constant series is fitted exactly.
pub fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let my = ys.iter().sum::<f64>() / n;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if ss_tot == 0.0 {
        return 1.0;
    }
    let slope = ls_slope(xs, ys);
    let mx = xs.iter().sum::<f64>() / n;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let fit = my + slope * (x - mx);
            (y - fit) * (y - fit)
        })
        .sum();
    1.0 - ss_res / ss_tot
}

/// Trend statistics of `values` along the ascending axis `xs`.
pub fn trend_stats(xs: &[f64], values: &[f64]) -> Result<TrendStats> {
    if xs.len() != values.len() {
        return domain("axis and values differ in length");
    }
    if xs.len() < 3 {
        return domain(format!("trend statistics need at least 3 cells, got {}", xs.len()));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return domain("axis values must be strictly increasing");
    }
    let pairs = (values.len() - 1) as f64;
    let inc = values.windows(2).filter(|w| w[1] > w[0]).count() as f64;
    let dec = values.windows(2).filter(|w| w[1] < w[0]).count() as f64;
    let log_fit_r2 = if xs.iter().all(|&x| x > 0.0) {
        r_squared(&xs.iter().map(|x| x.ln()).collect::<Vec<_>>(), values)
    } else {
        f64::NAN
    };
    Ok(TrendStats {
        increasing_fraction: inc / pairs,
        decreasing_fraction: dec / pairs,
        linear_fit_r2: r_squared(xs, values),
        log_fit_r2,
        signs: values
            .iter()
            .map(|&v| {
                if v > 0.0 {
                    1
                } else if v < 0.0 {
                    -1
                } else {
                    0
                }
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decreasing_series() {
        let t = trend_stats(&[1.0, 2.0, 3.0], &[-1.0, -2.0, -3.0]).unwrap();
        assert_eq!(t.monotone_fraction(Direction::Decreasing), 1.0);
        assert_eq!(t.monotone_fraction(Direction::Increasing), 0.0);
        assert_eq!(t.signs, vec![-1, -1, -1]);
    }

    #[test]
    fn exact_line_and_log_curve() {
        let xs = [20.0, 40.0, 60.0, 80.0];
        let t = trend_stats(&xs, &xs.map(|x| 0.3 * x - 2.0)).unwrap();
        assert!((t.linear_fit_r2 - 1.0).abs() < 1e-12);
        let t = trend_stats(&xs, &xs.map(|x| -1.5 * x.ln())).unwrap();
        assert!((t.log_fit_r2 - 1.0).abs() < 1e-12);
        assert!(t.linear_fit_r2 < 1.0);
        assert_eq!(trend_stats(&xs, &[2.0; 4]).unwrap().linear_fit_r2, 1.0);
    }

    #[test]
    fn needs_three_cells() {
        assert!(trend_stats(&[1.0, 2.0], &[0.0, 1.0]).is_err());
        assert!(trend_stats(&[1.0, 1.0, 2.0], &[0.0, 1.0, 2.0]).is_err());
    }
}
