use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{finish_replicate, prepare_replicate, relative_reduction, ComparisonResult, ExperimentConfig};
use crate::error::{Error, Result};

/// Evenly spaced values from `lower` to `upper`; a single step yields `lower`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub lower: f64,
    pub upper: f64,
    pub steps: usize,
}

impl ParamRange {
    pub fn fixed(value: f64) -> Self {
        ParamRange { lower: value, upper: value, steps: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.lower];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.upper
                } else {
                    self.lower + (self.upper - self.lower) * i as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self, name: &str, open_unit: bool) -> Result<()> {
        let in_range = |x: f64| {
            if open_unit {
                x > 0.0 && x < 1.0
            } else {
                (0.0..=1.0).contains(&x)
            }
        };
        if self.steps == 0 || !(self.lower <= self.upper) || !in_range(self.lower) || !in_range(self.upper) {
            return Err(Error::Config(format!("invalid sweep range for {name}: {self:?}")));
        }
        Ok(())
    }
}

/// Full-factorial grid over the dormitory-network disease and edge-rate parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub initial_infected_fraction: ParamRange,
    /// Applied directly as `r_i`.
    pub infection_rate: ParamRange,
    pub p_floor: ParamRange,
    pub p_dorm: ParamRange,
    pub p_campus: ParamRange,
}

impl SweepSpec {
    /// Two levels per parameter at the bounds of the wide exploration ranges.
    pub fn wide_coarse() -> Self {
        SweepSpec {
            initial_infected_fraction: ParamRange { lower: 0.05, upper: 0.5, steps: 2 },
            infection_rate: ParamRange { lower: 0.01, upper: 0.1, steps: 2 },
            p_floor: ParamRange { lower: 0.1, upper: 0.6, steps: 2 },
            p_dorm: ParamRange { lower: 0.001, upper: 0.016, steps: 2 },
            p_campus: ParamRange { lower: 0.00005, upper: 0.0005, steps: 2 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.initial_infected_fraction.validate("initial_infected_fraction", true)?;
        self.infection_rate.validate("infection_rate", false)?;
        self.p_floor.validate("p_floor", false)?;
        self.p_dorm.validate("p_dorm", false)?;
        self.p_campus.validate("p_campus", false)?;
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        [
            self.initial_infected_fraction,
            self.infection_rate,
            self.p_floor,
            self.p_dorm,
            self.p_campus,
        ]
        .iter()
        .map(|r| r.steps.max(1))
        .product()
    }

    /// Grid points in row-major order (`p_campus` varies fastest).
    pub fn grid(&self) -> Vec<GridValues> {
        let mut out = Vec::with_capacity(self.point_count());
        for &f in &self.initial_infected_fraction.values() {
            for &ri in &self.infection_rate.values() {
                for &pf in &self.p_floor.values() {
                    for &pd in &self.p_dorm.values() {
                        for &pc in &self.p_campus.values() {
                            out.push(GridValues {
                                initial_infected_fraction: f,
                                infection_rate: ri,
                                p_floor: pf,
                                p_dorm: pd,
                                p_campus: pc,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridValues {
    pub initial_infected_fraction: f64,
    pub infection_rate: f64,
    pub p_floor: f64,
    pub p_dorm: f64,
    pub p_campus: f64,
}

impl GridValues {
    /// `config` with this point's parameters substituted.
    pub fn apply(&self, config: &ExperimentConfig) -> Result<ExperimentConfig> {
        let mut cfg = config.clone();
        let sin = cfg
            .sin
            .as_mut()
            .ok_or_else(|| Error::Config("sweeps need a `sin` section".into()))?;
        sin.p_floor = self.p_floor;
        sin.p_dorm = self.p_dorm;
        sin.p_campus = self.p_campus;
        cfg.disease.initial_infected_fraction = self.initial_infected_fraction;
        cfg.disease.infection_rate = Some(self.infection_rate);
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub index: usize,
    pub params: GridValues,
    pub result: ComparisonResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Over every (point, replicate) pair: solver total infected strictly lower.
    pub global_win_rate_total: f64,
    pub global_win_rate_peak: f64,
    /// Fraction of grid points whose mean solver total is below the random mean.
    pub point_win_rate_total: f64,
    /// Mean over points of each point's relative total reduction (percent).
    pub mean_total_reduction_pct: f64,
    pub mean_peak_reduction_pct: f64,
    /// Relative reduction of the grand means over all points (percent).
    pub pooled_total_reduction_pct: f64,
    pub pooled_peak_reduction_pct: f64,
}

impl SweepResult {
    pub fn from_points(points: Vec<SweepPoint>) -> Self {
        let records: Vec<_> = points.iter().flat_map(|p| &p.result.records).collect();
        let n = records.len().max(1) as f64;
        let np = points.len().max(1) as f64;
        let mean = |f: &dyn Fn(&SweepPoint) -> f64| points.iter().map(f).sum::<f64>() / np;
        let grand = |f: &dyn Fn(&super::ReplicateRecord) -> f64| records.iter().map(|r| f(r)).sum::<f64>() / n;
        SweepResult {
            global_win_rate_total: records.iter().filter(|r| r.solver_total_pct < r.random_total_pct).count() as f64 / n,
            global_win_rate_peak: records.iter().filter(|r| r.solver_peak_pct < r.random_peak_pct).count() as f64 / n,
            point_win_rate_total: mean(&|p| {
                let a = &p.result.aggregates;
                f64::from(u8::from(a.solver_total_pct.mean < a.random_total_pct.mean))
            }),
            mean_total_reduction_pct: mean(&|p| p.result.aggregates.total_reduction_pct),
            mean_peak_reduction_pct: mean(&|p| p.result.aggregates.peak_reduction_pct),
            pooled_total_reduction_pct: relative_reduction(
                grand(&|r| r.random_total_pct),
                grand(&|r| r.solver_total_pct),
            ),
            pooled_peak_reduction_pct: relative_reduction(
                grand(&|r| r.random_peak_pct),
                grand(&|r| r.solver_peak_pct),
            ),
            points,
        }
    }
}

pub fn run_sweep(spec: &SweepSpec, config: &ExperimentConfig) -> Result<SweepResult> {
    run_sweep_with(spec, config, |_| Ok(()))
}

/// Runs the grid point by point, handing each finished point to `on_point`
/// before starting the next.
///
/// Networks and partitions do not depend on the swept parameters, so they
/// are built once per replicate and shared by all points; each point's
/// result equals `run_sin_experiment` on the overridden configuration.
pub fn run_sweep_with(
    spec: &SweepSpec,
    config: &ExperimentConfig,
    mut on_point: impl FnMut(&SweepPoint) -> Result<()>,
) -> Result<SweepResult> {
    spec.validate()?;
    config.validate()?;
    let grid = spec.grid();
    for values in &grid {
        values.apply(config)?.validate()?;
    }

    let prepared: Vec<_> = (0..config.replicates)
        .into_par_iter()
        .map(|r| prepare_replicate(config, r))
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(grid.len());
    for (index, values) in grid.into_iter().enumerate() {
        let cfg = values.apply(config)?;
        let outcomes: Vec<_> = prepared
            .par_iter()
            .map(|p| finish_replicate(p, &cfg.disease, cfg.sin.as_ref(), cfg.max_days))
            .collect::<Result<_>>()?;
        let (records, traces) = outcomes.into_iter().unzip();
        let point = SweepPoint {
            index,
            params: values,
            result: ComparisonResult::from_records(records, traces),
        };
        on_point(&point)?;
        points.push(point);
    }
    Ok(SweepResult::from_points(points))
}
