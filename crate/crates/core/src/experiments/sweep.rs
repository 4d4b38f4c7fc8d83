//! Replicated sweeps over a parameter grid.
//!
//! Cells are the Cartesian product of the axes, first axis slowest. A cell's
//! seed is derived from the base seed and the (name, value) pairs of its
//! coordinates, and replication `r` uses `mix(cell_seed, r)`, so a cell's
//! records do not depend on the grid order or on scheduling.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{ExperimentConfig, SweepConfig};
use super::summary::{summarize, CellSummary};
use crate::datagen::seed::{fold_key, mix, name_key};
use crate::error::{Error, Result};
use crate::measure::{combine, PriorOdds};
use crate::parallel::{map_indices, Execution};

/// One replication of one cell. A failed replication has `d_logr = NaN`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawRecord {
    pub cell: usize,
    pub rep: usize,
    pub seed: u64,
    pub d_logr: f64,
    pub approx_flag: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub comparator: String,
    pub axis_names: Vec<String>,
    /// Axis values of every cell, in cell order.
    pub cells: Vec<Vec<f64>>,
    pub records: Vec<RawRecord>,
    pub summaries: Vec<CellSummary>,
}

impl SweepResult {
    /// Medians along `axis` for the cells matching `fixed` on every other axis.
    pub fn series(&self, axis: &str, fixed: &[(&str, f64)]) -> Option<(Vec<f64>, Vec<f64>)> {
        let a = self.axis_names.iter().position(|n| n == axis)?;
        let idx: Vec<(usize, f64)> = fixed
            .iter()
            .map(|(n, v)| self.axis_names.iter().position(|m| m == n).map(|i| (i, *v)))
            .collect::<Option<_>>()?;
        let mut points: Vec<(f64, f64)> = self
            .summaries
            .iter()
            .filter(|s| idx.iter().all(|&(i, v)| s.axis_values[i] == v))
            .map(|s| (s.axis_values[a], s.median))
            .collect();
        points.sort_by(|p, q| p.0.total_cmp(&q.0));
        Some(points.into_iter().unzip())
    }

    /// Summary of the cell with exactly these axis values.
    pub fn summary_at(&self, axis_values: &[f64]) -> Option<&CellSummary> {
        self.summaries.iter().find(|s| s.axis_values == axis_values)
    }

    /// The raw `d^logr` values of one cell, in replication order.
    pub fn cell_values(&self, cell: usize) -> Vec<f64> {
        self.records.iter().filter(|r| r.cell == cell).map(|r| r.d_logr).collect()
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, values| {
        acc.into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

/// Seed of the cell at the given coordinates.
pub fn cell_seed(base: u64, names: &[String], values: &[f64]) -> u64 {
    fold_key(base, names.iter().zip(values).flat_map(|(n, v)| [name_key(n), v.to_bits()]))
}

/// [`run_sweep_with`] on the default execution.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    run_sweep_with(config, Execution::default())
}

/// Runs every cell and replication; `exec` only changes scheduling, never results.
///
/// A cell in which more than 1% of the replications fail aborts the sweep
/// with [`Error::CellFailure`].
pub fn run_sweep_with(config: &SweepConfig, exec: Execution) -> Result<SweepResult> {
    config.validate()?;
    let names: Vec<String> = config.axes.iter().map(|a| a.name.clone()).collect();
    let cells = cartesian(&config.axes.iter().map(|a| a.values.clone()).collect::<Vec<_>>());
    let prior = PriorOdds::new(config.prior_log_odds)?;
    let m = config.replications;

    let prepared = map_indices(cells.len(), exec, |c| -> Result<_> {
        let mut params: BTreeMap<String, f64> = config.params.clone();
        params.extend(names.iter().cloned().zip(cells[c].iter().copied()));
        let (scenario, n, comparator) = config.resolve_cell(&params)?;
        let seed = cell_seed(config.seed, &names, &cells[c]);
        Ok((scenario.prepare(n, seed)?, comparator, seed))
    });
    let prepared = prepared.into_iter().collect::<Result<Vec<_>>>()?;

    let outcomes = map_indices(cells.len() * m, exec, |k| {
        let (c, rep) = (k / m, k % m);
        let (cell, comparator, seed) = &prepared[c];
        let rep_seed = mix(*seed, rep as u64);
        let value = cell.draw(rep_seed).and_then(|s| comparator.evaluate(&s)).map(|lnbf| combine(prior, lnbf).logr());
        (c, rep, rep_seed, comparator.approximate(), value)
    });

    let mut records = Vec::with_capacity(outcomes.len());
    let mut summaries = Vec::with_capacity(cells.len());
    for (c, chunk) in outcomes.chunks(m).enumerate() {
        let failures: Vec<&Error> = chunk.iter().filter_map(|o| o.4.as_ref().err()).collect();
        if failures.len() * 100 > m {
            let cell = names.iter().zip(&cells[c]).map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(", ");
            return Err(Error::CellFailure {
                cell,
                failures: failures.len(),
                replications: m,
                first: failures[0].to_string(),
            });
        }
        let values: Vec<f64> = chunk.iter().map(|o| *o.4.as_ref().unwrap_or(&f64::NAN)).collect();
        for (o, &d_logr) in chunk.iter().zip(&values) {
            records.push(RawRecord { cell: o.0, rep: o.1, seed: o.2, d_logr, approx_flag: o.3 });
        }
        summaries.push(summarize(cells[c].clone(), &values)?);
    }
    Ok(SweepResult { comparator: config.comparator.clone(), axis_names: names, cells, records, summaries })
}

/// Paths written by [`write_sweep`].
#[derive(Debug, Clone)]
pub struct SweepOutputs {
    pub raw: PathBuf,
    pub summary: PathBuf,
    pub config: PathBuf,
}

/// Writes `<name>_raw.csv`, `<name>_summary.csv` and `<name>_config.json` into `dir`.
pub fn write_sweep(result: &SweepResult, config: &SweepConfig, dir: &Path) -> Result<SweepOutputs> {
    fs::create_dir_all(dir)?;
    let out = SweepOutputs {
        raw: dir.join(format!("{}_raw.csv", config.name)),
        summary: dir.join(format!("{}_summary.csv", config.name)),
        config: dir.join(format!("{}_config.json", config.name)),
    };

    let mut w = csv::Writer::from_path(&out.raw)?;
    let mut header = vec!["comparator".to_string()];
    header.extend(result.axis_names.iter().cloned());
    header.extend(["rep", "seed", "d_logr", "approx_flag"].map(String::from));
    w.write_record(&header)?;
    for r in &result.records {
        let mut row = vec![result.comparator.clone()];
        row.extend(result.cells[r.cell].iter().map(f64::to_string));
        row.extend([r.rep.to_string(), r.seed.to_string(), r.d_logr.to_string(), r.approx_flag.to_string()]);
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(&out.summary)?;
    let mut header = vec!["comparator".to_string()];
    header.extend(result.axis_names.iter().cloned());
    header.extend(["m", "q25", "median", "q75", "frac_positive", "mean"].map(String::from));
    w.write_record(&header)?;
    for s in &result.summaries {
        let mut row = vec![result.comparator.clone()];
        row.extend(s.axis_values.iter().map(f64::to_string));
        row.push(s.m.to_string());
        row.extend([s.q25, s.median, s.q75, s.frac_positive, s.mean].map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut f = fs::File::create(&out.config)?;
    serde_json::to_writer_pretty(&mut f, &ExperimentConfig::Sweep(config.clone()))?;
    writeln!(f)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::gen_noisy_normal;
    use crate::experiments::config::Axis;
    use crate::models::{noisy_normal_lnbf, NoisyNormalParams};

    fn config(axes: Vec<Axis>, m: usize) -> SweepConfig {
        SweepConfig {
            name: "unit".into(),
            scenario: "noisy-normal".into(),
            comparator: "noisy-normal".into(),
            params: [("rho".to_string(), 0.3), ("sigma2".to_string(), 0.1), ("n".to_string(), 15.0)].into(),
            axes,
            replications: m,
            seed: 42,
            prior_log_odds: 0.0,
            quadrature: Default::default(),
            output_dir: None,
        }
    }

    fn axis(name: &str, values: &[f64]) -> Axis {
        Axis { name: name.into(), values: values.to_vec() }
    }

    #[test]
    fn single_cell_equals_direct_calls() {
        let cfg = config(vec![axis("n", &[15.0])], 3);
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.records.len(), 3);
        let seed = cell_seed(42, &["n".to_string()], &[15.0]);
        for rec in &r.records {
            assert_eq!(rec.seed, mix(seed, rec.rep as u64));
            let d = gen_noisy_normal(0.3, 1.0, 0.1, 15, rec.seed).unwrap();
            let direct = noisy_normal_lnbf(&d, &NoisyNormalParams::new(1.0, 0.1, 0.0).unwrap()).unwrap();
            assert_eq!(rec.d_logr, combine(PriorOdds::EVEN, direct).logr());
        }
    }

    #[test]
    fn cells_do_not_depend_on_grid_order() {
        let a = run_sweep(&config(vec![axis("n", &[10.0, 20.0]), axis("rho", &[0.0, 0.5])], 4)).unwrap();
        let b = run_sweep(&config(vec![axis("n", &[20.0, 10.0]), axis("rho", &[0.5, 0.0])], 4)).unwrap();
        for s in &a.summaries {
            assert_eq!(Some(s), b.summary_at(&s.axis_values));
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = config(vec![axis("n", &[10.0, 30.0]), axis("sigma2", &[0.01, 1.0])], 5);
        assert_eq!(
            run_sweep_with(&cfg, Execution::Sequential).unwrap().records,
            run_sweep_with(&cfg, Execution::Parallel).unwrap().records
        );
    }

    #[test]
    fn summaries_recompute_from_records() {
        let r = run_sweep(&config(vec![axis("n", &[10.0, 20.0, 30.0])], 7)).unwrap();
        for (c, s) in r.summaries.iter().enumerate() {
            assert_eq!(&summarize(r.cells[c].clone(), &r.cell_values(c)).unwrap(), s);
        }
        let (xs, meds) = r.series("n", &[]).unwrap();
        assert_eq!(xs, vec![10.0, 20.0, 30.0]);
        assert_eq!(meds.len(), 3);
    }

    #[test]
    fn failing_cells_abort() {
        // a correlation of 2 is rejected by the generator in every replication
        let cfg = config(vec![axis("rho", &[2.0])], 3);
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_)) | Err(Error::CellFailure { .. })));
        let mut cfg = config(vec![axis("n", &[15.0])], 3);
        cfg.params.insert("rho".into(), 1.5);
        let err = run_sweep_with(&cfg, Execution::Sequential).unwrap_err();
        assert!(err.to_string().contains("rho") || matches!(err, Error::CellFailure { .. }), "{err}");
    }

    #[test]
    fn writes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(vec![axis("n", &[10.0, 20.0])], 2);
        let r = run_sweep(&cfg).unwrap();
        let out = write_sweep(&r, &cfg, dir.path()).unwrap();
        let raw = fs::read_to_string(&out.raw).unwrap();
        assert!(raw.starts_with("comparator,n,rep,seed,d_logr,approx_flag\n"));
        assert_eq!(raw.lines().count(), 5);
        let summary = fs::read_to_string(&out.summary).unwrap();
        assert!(summary.starts_with("comparator,n,m,q25,median,q75,frac_positive,mean\n"));
        let back = ExperimentConfig::from_path(&out.config).unwrap();
        assert_eq!(back, ExperimentConfig::Sweep(cfg));
    }
}
