//! Paired solver-vs-random experiments.
//!
//! Every replicate draws one network and one disease seed and runs both arms
//! on them; the arms differ only in how cohorts were assigned. All seeds
//! are derived from `base_seed + replicate`, so a configuration fully
//! determines its results.

mod output;
mod sweep;

pub use output::{emit_outputs, emit_sweep_outputs, emit_sweep_point, sweep_point_dir, write_json_pretty};
pub use sweep::{run_sweep, run_sweep_with, GridValues, ParamRange, SweepPoint, SweepResult, SweepSpec};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohort::{apply_cohort_separation, partition_random, partition_recursive_maxcut, CohortAssignment};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::netgen::{augment_sin, generate_cen, CenConfig, SinConfig};
use crate::qubomc::SolverConfig;
use crate::rng::derive_seed;
use crate::sir::{avg_degree, simulate, summarize, DiseaseParams, SirTrace, DEFAULT_MAX_DAYS};

const NETWORK_STREAM: u64 = 1;
const RANDOM_ARM_STREAM: u64 = 2;
const SOLVER_STREAM: u64 = 3;
const SIN_STREAM: u64 = 4;
const DISEASE_STREAM: u64 = 5;

/// Disease inputs. With `infection_rate` set, `r_i` is used directly;
/// otherwise it is derived from `r0` and the pre-partition network's average degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiseaseConfig {
    #[serde(default)]
    pub r0: Option<f64>,
    pub recovery_days: f64,
    pub initial_infected_fraction: f64,
    #[serde(default)]
    pub infection_rate: Option<f64>,
}

impl DiseaseConfig {
    pub fn params_for(&self, reference: &Graph) -> Result<DiseaseParams> {
        let degree = avg_degree(reference);
        match (self.infection_rate, self.r0) {
            (Some(ri), _) => {
                DiseaseParams::direct(ri, self.recovery_days, self.initial_infected_fraction, degree)
            }
            (None, Some(r0)) => DiseaseParams::from_avg_degree(
                r0,
                self.recovery_days,
                self.initial_infected_fraction,
                degree,
            ),
            (None, None) => Err(Error::Config(
                "disease needs either r0 or infection_rate".into(),
            )),
        }
    }
}

fn default_max_days() -> usize {
    DEFAULT_MAX_DAYS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Generator parameters; the seed is replaced per replicate.
    pub network: CenConfig,
    /// Dormitory augmentation; the seed is replaced per replicate.
    #[serde(default)]
    pub sin: Option<SinConfig>,
    pub n_cohorts: usize,
    #[serde(default)]
    pub solver: SolverConfig,
    pub disease: DiseaseConfig,
    pub replicates: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_max_days")]
    pub max_days: usize,
}

impl ExperimentConfig {
    /// 3800-student enrollment network, four cohorts, 5% seeded, R0 = 6, 10-day recovery.
    pub fn cen_headline() -> Self {
        ExperimentConfig {
            network: CenConfig::large_campus(0),
            sin: None,
            n_cohorts: 4,
            solver: SolverConfig::default(),
            disease: DiseaseConfig {
                r0: Some(6.0),
                recovery_days: 10.0,
                initial_infected_fraction: 0.05,
                infection_rate: None,
            },
            replicates: 20,
            base_seed: 0,
            max_days: DEFAULT_MAX_DAYS,
        }
    }

    /// 800 students in 8 dorms of 2 floors, 1% seeded, R0 = 2.
    pub fn sin_dormitory() -> Self {
        ExperimentConfig {
            network: CenConfig::small_campus(0),
            sin: Some(SinConfig {
                dorm_count: 8,
                floors_per_dorm: 2,
                p_floor: 0.2,
                p_dorm: 0.005,
                p_campus: 0.0001,
                seed: 0,
            }),
            n_cohorts: 16,
            solver: SolverConfig::default(),
            disease: DiseaseConfig {
                r0: Some(2.0),
                recovery_days: 10.0,
                initial_infected_fraction: 0.01,
                infection_rate: None,
            },
            replicates: 20,
            base_seed: 0,
            max_days: DEFAULT_MAX_DAYS,
        }
    }

    /// Dormitory network in the low-density regime: 5% seeded, `r_i = 0.02`.
    pub fn sin_low_density() -> Self {
        let mut cfg = Self::sin_dormitory();
        cfg.disease = DiseaseConfig {
            r0: None,
            recovery_days: 10.0,
            initial_infected_fraction: 0.05,
            infection_rate: Some(0.02),
        };
        cfg.replicates = 10;
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        self.solver.validate()?;
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.max_days == 0 {
            return Err(Error::Config("max_days must be at least 1".into()));
        }
        if !self.n_cohorts.is_power_of_two() {
            return Err(Error::Config(format!(
                "n_cohorts must be a power of two, got {}",
                self.n_cohorts
            )));
        }
        if let Some(sin) = &self.sin {
            sin.validate()?;
            if sin.cohort_count() != self.n_cohorts {
                return Err(Error::Config(format!(
                    "n_cohorts ({}) must equal dorm_count x floors_per_dorm ({})",
                    self.n_cohorts,
                    sin.cohort_count()
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one paired replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub seed: u64,
    pub infection_rate: f64,
    pub solver_total_pct: f64,
    pub solver_peak_pct: f64,
    pub random_total_pct: f64,
    pub random_peak_pct: f64,
    pub cut_edges_removed_solver: usize,
    pub cut_edges_removed_random: usize,
    pub solver_duration_days: usize,
    pub random_duration_days: usize,
    pub solver_cohort_sizes: Vec<usize>,
    pub random_cohort_sizes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single replicate.
    pub stddev: f64,
}

impl ColumnStats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.into_iter().collect();
        let n = values.len();
        if n == 0 {
            return ColumnStats { mean: 0.0, stddev: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let stddev = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        ColumnStats { mean, stddev }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub solver_total_pct: ColumnStats,
    pub solver_peak_pct: ColumnStats,
    pub random_total_pct: ColumnStats,
    pub random_peak_pct: ColumnStats,
    pub cut_edges_removed_solver: ColumnStats,
    pub cut_edges_removed_random: ColumnStats,
    /// `100 * (random - solver) / random` on the mean total infected fraction.
    pub total_reduction_pct: f64,
    /// Same, on the mean peak infected fraction.
    pub peak_reduction_pct: f64,
}

fn relative_reduction(random: f64, solver: f64) -> f64 {
    if random > 0.0 {
        100.0 * (random - solver) / random
    } else {
        0.0
    }
}

impl Aggregates {
    pub fn of(records: &[ReplicateRecord]) -> Self {
        let col = |f: fn(&ReplicateRecord) -> f64| ColumnStats::of(records.iter().map(f));
        let solver_total_pct = col(|r| r.solver_total_pct);
        let solver_peak_pct = col(|r| r.solver_peak_pct);
        let random_total_pct = col(|r| r.random_total_pct);
        let random_peak_pct = col(|r| r.random_peak_pct);
        Aggregates {
            total_reduction_pct: relative_reduction(random_total_pct.mean, solver_total_pct.mean),
            peak_reduction_pct: relative_reduction(random_peak_pct.mean, solver_peak_pct.mean),
            solver_total_pct,
            solver_peak_pct,
            random_total_pct,
            random_peak_pct,
            cut_edges_removed_solver: col(|r| r.cut_edges_removed_solver as f64),
            cut_edges_removed_random: col(|r| r.cut_edges_removed_random as f64),
        }
    }
}

/// Both arms' daily traces for one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmTraces {
    pub solver: SirTrace,
    pub random: SirTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub records: Vec<ReplicateRecord>,
    pub aggregates: Aggregates,
    /// Fraction of replicates where the solver arm's total infected is strictly lower.
    pub win_rate_total: f64,
    pub win_rate_peak: f64,
    #[serde(skip)]
    pub traces: Vec<ArmTraces>,
}

impl ComparisonResult {
    pub fn from_records(records: Vec<ReplicateRecord>, traces: Vec<ArmTraces>) -> Self {
        let n = records.len().max(1) as f64;
        let wins = |f: fn(&ReplicateRecord) -> bool| records.iter().filter(|r| f(r)).count() as f64 / n;
        ComparisonResult {
            aggregates: Aggregates::of(&records),
            win_rate_total: wins(|r| r.solver_total_pct < r.random_total_pct),
            win_rate_peak: wins(|r| r.solver_peak_pct < r.random_peak_pct),
            records,
            traces,
        }
    }
}

/// Network and both partitions of one replicate; independent of disease and
/// dormitory parameters, so sweeps reuse it across grid points.
pub(crate) struct PreparedReplicate {
    replicate: usize,
    seed: u64,
    cen: Graph,
    solver_arm: Arm,
    random_arm: Arm,
}

struct Arm {
    assignment: CohortAssignment,
    separated: Graph,
}

impl Arm {
    fn new(cen: &Graph, assignment: CohortAssignment) -> Result<Self> {
        let separated = apply_cohort_separation(cen, &assignment)?;
        Ok(Arm { assignment, separated })
    }
}

pub(crate) fn prepare_replicate(config: &ExperimentConfig, replicate: usize) -> Result<PreparedReplicate> {
    let seed = config.base_seed.wrapping_add(replicate as u64);
    let cen = generate_cen(&CenConfig {
        seed: derive_seed(seed, NETWORK_STREAM, 0),
        ..config.network
    })?;
    let solver = SolverConfig {
        seed: derive_seed(seed, SOLVER_STREAM, 0),
        ..config.solver
    };
    let solver_assignment = partition_recursive_maxcut(&cen, config.n_cohorts, &solver)?;
    let random_assignment = partition_random(&cen, config.n_cohorts, derive_seed(seed, RANDOM_ARM_STREAM, 0))?;
    Ok(PreparedReplicate {
        replicate,
        seed,
        solver_arm: Arm::new(&cen, solver_assignment)?,
        random_arm: Arm::new(&cen, random_assignment)?,
        cen,
    })
}

pub(crate) fn finish_replicate(
    prepared: &PreparedReplicate,
    disease: &DiseaseConfig,
    sin: Option<&SinConfig>,
    max_days: usize,
) -> Result<(ReplicateRecord, ArmTraces)> {
    let params = disease.params_for(&prepared.cen)?;
    let disease_seed = derive_seed(prepared.seed, DISEASE_STREAM, 0);
    let run_arm = |arm: &Arm| -> Result<SirTrace> {
        let contact = match sin {
            Some(sin) => {
                let sin = SinConfig {
                    seed: derive_seed(prepared.seed, SIN_STREAM, 0),
                    ..*sin
                };
                augment_sin(&arm.separated, &arm.assignment, &sin)?
            }
            None => arm.separated.clone(),
        };
        simulate(&contact, &params, disease_seed, max_days)
    };
    let solver_trace = run_arm(&prepared.solver_arm)?;
    let random_trace = run_arm(&prepared.random_arm)?;
    let s = summarize(&solver_trace);
    let r = summarize(&random_trace);
    let record = ReplicateRecord {
        replicate: prepared.replicate,
        seed: prepared.seed,
        infection_rate: params.infection_rate,
        solver_total_pct: s.total_infected_pct,
        solver_peak_pct: s.peak_infected_pct,
        random_total_pct: r.total_infected_pct,
        random_peak_pct: r.peak_infected_pct,
        cut_edges_removed_solver: prepared.solver_arm.assignment.cut_edges_removed(),
        cut_edges_removed_random: prepared.random_arm.assignment.cut_edges_removed(),
        solver_duration_days: s.duration_days,
        random_duration_days: r.duration_days,
        solver_cohort_sizes: prepared.solver_arm.assignment.cohort_sizes().to_vec(),
        random_cohort_sizes: prepared.random_arm.assignment.cohort_sizes().to_vec(),
    };
    Ok((
        record,
        ArmTraces {
            solver: solver_trace,
            random: random_trace,
        },
    ))
}

fn run_paired(config: &ExperimentConfig, sin: Option<&SinConfig>) -> Result<ComparisonResult> {
    config.validate()?;
    let outcomes: Vec<(ReplicateRecord, ArmTraces)> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let prepared = prepare_replicate(config, r)?;
            finish_replicate(&prepared, &config.disease, sin, config.max_days)
        })
        .collect::<Result<_>>()?;
    let (records, traces) = outcomes.into_iter().unzip();
    Ok(ComparisonResult::from_records(records, traces))
}

/// Solver vs random cohorts on course enrollment networks alone.
pub fn run_cen_experiment(config: &ExperimentConfig) -> Result<ComparisonResult> {
    if config.sin.is_some() {
        return Err(Error::Config(
            "enrollment-network experiment takes no dormitory configuration".into(),
        ));
    }
    run_paired(config, None)
}

/// Solver vs random cohorts with dormitory interaction edges added after separation.
pub fn run_sin_experiment(config: &ExperimentConfig) -> Result<ComparisonResult> {
    let sin = config
        .sin
        .as_ref()
        .ok_or_else(|| Error::Config("dormitory experiment needs a `sin` section".into()))?;
    run_paired(config, Some(sin))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cen() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::cen_headline();
        cfg.network = CenConfig::calibrated(120, 0.1, 0.4, 0).unwrap();
        cfg.replicates = 3;
        cfg
    }

    #[test]
    fn column_stats() {
        let s = ColumnStats::of([1.0, 2.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.stddev, 1.0);
        assert_eq!(ColumnStats::of([4.0]).stddev, 0.0);
    }

    #[test]
    fn arm_mismatch_is_rejected() {
        let cen = small_cen();
        assert!(run_sin_experiment(&cen).is_err());
        let mut sin = ExperimentConfig::sin_dormitory();
        assert!(run_cen_experiment(&sin).is_err());
        sin.n_cohorts = 8;
        assert!(matches!(sin.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn single_cohort_arms_are_identical() {
        let mut cfg = small_cen();
        cfg.n_cohorts = 1;
        let res = run_cen_experiment(&cfg).unwrap();
        for (rec, tr) in res.records.iter().zip(&res.traces) {
            assert_eq!(tr.solver, tr.random);
            assert_eq!(rec.solver_total_pct, rec.random_total_pct);
            assert_eq!(rec.cut_edges_removed_solver, 0);
        }
        assert_eq!(res.win_rate_total, 0.0);
    }

    #[test]
    fn disease_config_needs_a_rate() {
        let d = DiseaseConfig {
            r0: None,
            recovery_days: 10.0,
            initial_infected_fraction: 0.05,
            infection_rate: None,
        };
        assert!(d.params_for(&Graph::new(3)).is_err());
    }

    #[test]
    fn config_json_uses_documented_field_names() {
        let cfg = ExperimentConfig::sin_low_density();
        let v = serde_json::to_value(&cfg).unwrap();
        for key in ["network", "sin", "n_cohorts", "solver", "disease", "replicates", "base_seed", "max_days"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: ExperimentConfig = serde_json::from_value(v).unwrap();
        assert_eq!(back, cfg);
    }
}
