//! The phase-coherence table: `d^logr` of the von Mises comparator over an
//! `R̄ × N` grid, the minimizing `N0(R̄)` per row and the classical
//! `1/√N` significance reference.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ItcConfig;
use crate::error::{domain, Result};
use crate::measure::PriorOdds;
use crate::models::{n0_curve, N0Curve};
use crate::numerics::quadrature::QuadratureSpec;
use crate::parallel::{map_indices, Execution};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItcTable {
    pub n_grid: Vec<usize>,
    pub rbar_grid: Vec<f64>,
    /// `values[i][j]` is `d^logr` at `rbar_grid[i]`, `n_grid[j]`.
    pub values: Vec<Vec<f64>>,
    pub n0: Vec<N0Curve>,
    /// `(N, 1/√N)` for every grid `N`.
    pub reference: Vec<(usize, f64)>,
}

impl ItcTable {
    pub fn row(&self, rbar: f64) -> Option<&[f64]> {
        self.rbar_grid.iter().position(|&r| r == rbar).map(|i| self.values[i].as_slice())
    }

    pub fn column(&self, n: usize) -> Option<Vec<f64>> {
        let j = self.n_grid.iter().position(|&m| m == n)?;
        Some(self.values.iter().map(|row| row[j]).collect())
    }
}

/// The default 20 × 20 grid: `R̄ = (k − ½)/20` and `N` log-spaced over `[10, 1000]`.
pub fn default_grids() -> (Vec<usize>, Vec<f64>) {
    let rbar = (1..=20).map(|k| (k as f64 - 0.5) / 20.0).collect();
    let mut n: Vec<usize> = (0..20).map(|i| (10.0 * 100f64.powf(i as f64 / 19.0)).round() as usize).collect();
    n.dedup();
    (n, rbar)
}

pub fn itc_table(
    n_grid: &[usize],
    rbar_grid: &[f64],
    prior: PriorOdds,
    quadrature: &QuadratureSpec,
) -> Result<ItcTable> {
    itc_table_with(n_grid, rbar_grid, prior, quadrature, Execution::default())
}

/// Rows are evaluated independently; `exec` only changes scheduling.
pub fn itc_table_with(
    n_grid: &[usize],
    rbar_grid: &[f64],
    prior: PriorOdds,
    quadrature: &QuadratureSpec,
    exec: Execution,
) -> Result<ItcTable> {
    if n_grid.is_empty() || rbar_grid.is_empty() {
        return domain("n_grid and rbar_grid must be nonempty");
    }
    let n0 = map_indices(rbar_grid.len(), exec, |i| n0_curve(rbar_grid[i], n_grid, prior, quadrature))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ItcTable {
        n_grid: n_grid.to_vec(),
        rbar_grid: rbar_grid.to_vec(),
        values: n0.iter().map(|c| c.values.clone()).collect(),
        reference: n_grid.iter().map(|&n| (n, 1.0 / (n as f64).sqrt())).collect(),
        n0,
    })
}

pub fn run_itc(config: &ItcConfig) -> Result<ItcTable> {
    config.validate()?;
    itc_table(&config.n_grid, &config.rbar_grid, PriorOdds::new(config.prior_log_odds)?, &config.quadrature)
}

#[derive(Debug, Clone)]
pub struct ItcOutputs {
    pub table: PathBuf,
    pub n0: PathBuf,
    pub reference: PathBuf,
}

/// Writes `<name>_table.csv` (`rbar,n,d_logr`), `<name>_n0.csv` (`rbar,n0,d_logr_min`)
/// and `<name>_ref.csv` (`n,rbar_ref`) into `dir`.
pub fn write_itc(table: &ItcTable, name: &str, dir: &Path) -> Result<ItcOutputs> {
    fs::create_dir_all(dir)?;
    let out = ItcOutputs {
        table: dir.join(format!("{name}_table.csv")),
        n0: dir.join(format!("{name}_n0.csv")),
        reference: dir.join(format!("{name}_ref.csv")),
    };
    let mut w = csv::Writer::from_path(&out.table)?;
    w.write_record(["rbar", "n", "d_logr"])?;
    for (i, &rbar) in table.rbar_grid.iter().enumerate() {
        for (j, &n) in table.n_grid.iter().enumerate() {
            w.write_record([rbar.to_string(), n.to_string(), table.values[i][j].to_string()])?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(&out.n0)?;
    w.write_record(["rbar", "n0", "d_logr_min"])?;
    for c in &table.n0 {
        let min = c.values.iter().copied().fold(f64::INFINITY, f64::min);
        w.write_record([c.rbar.to_string(), c.n0.to_string(), min.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(&out.reference)?;
    w.write_record(["n", "rbar_ref"])?;
    for &(n, r) in &table.reference {
        w.write_record([n.to_string(), r.to_string()])?;
    }
    w.flush()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_n1_is_zero() {
        let t = itc_table(&[1], &[1.0], PriorOdds::EVEN, &QuadratureSpec::default()).unwrap();
        assert_eq!(t.values, vec![vec![0.0]]);
    }

    #[test]
    fn default_grid_is_finite() {
        let (n, r) = default_grids();
        assert_eq!((n.len(), r.len()), (20, 20));
        assert_eq!((n[0], n[19]), (10, 1000));
        let t = itc_table(&n, &r, PriorOdds::EVEN, &QuadratureSpec::default()).unwrap();
        assert!(t.values.iter().flatten().all(|v| v.is_finite()));
        let col = t.column(100).unwrap_or_else(|| t.column(n[10]).unwrap());
        assert!(col.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rows_behave() {
        let n: Vec<usize> = (1..=10).map(|k| 10 * k).collect();
        let t = itc_table(&n, &[0.05, 0.5], PriorOdds::EVEN, &QuadratureSpec::default()).unwrap();
        assert!(t.row(0.05).unwrap().windows(2).all(|w| w[1] < w[0]));
        assert!(t.row(0.5).unwrap().windows(2).all(|w| w[1] > w[0]));
        assert_eq!(t.reference[3], (40, 1.0 / 40f64.sqrt()));
    }

    #[test]
    fn writes_three_files() {
        let dir = tempfile::tempdir().unwrap();
        let t = itc_table(&[10, 20], &[0.1, 0.2, 0.3], PriorOdds::EVEN, &QuadratureSpec::default()).unwrap();
        let out = write_itc(&t, "itc", dir.path()).unwrap();
        assert_eq!(fs::read_to_string(out.table).unwrap().lines().count(), 7);
        assert_eq!(fs::read_to_string(out.n0).unwrap().lines().count(), 4);
        assert!(fs::read_to_string(out.reference).unwrap().starts_with("n,rbar_ref\n10,"));
    }
}
