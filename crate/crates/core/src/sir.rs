//! Discrete-time SIR outbreaks on contact graphs.
//!
//! Each day, every susceptible node with `k` neighbors infected on the
//! previous day is infected with probability `1 - (1 - r_i)^k`; then every
//! node infected on the previous day recovers with probability `r_r`. A node
//! infected today cannot recover today, so infectious periods are geometric
//! with mean `1 / r_r` days.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{rng_from_seed, SimRng};

pub const DEFAULT_MAX_DAYS: usize = 365;

/// Disease parameters linked by `R0 = avg_deg * r_i / r_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiseaseParams {
    pub r0: f64,
    pub recovery_days: f64,
    /// `r_r`, daily recovery probability.
    pub recovery_rate: f64,
    /// `r_i`, daily per-contact infection probability.
    pub infection_rate: f64,
    pub initial_infected_fraction: f64,
    /// Average degree the infection rate was calibrated against.
    pub reference_avg_degree: f64,
    /// Set when `R0 * r_r / avg_deg` exceeded 1 and `r_i` was capped.
    pub infection_rate_clamped: bool,
}

/// `r_r = 1 / T_r` and `r_i = R0 * r_r / avg_deg(reference_graph)`.
pub fn derive_params(
    r0: f64,
    recovery_days: f64,
    initial_infected_fraction: f64,
    reference_graph: &Graph,
) -> Result<DiseaseParams> {
    DiseaseParams::from_avg_degree(
        r0,
        recovery_days,
        initial_infected_fraction,
        avg_degree(reference_graph),
    )
}

/// `2|E| / n`, as in [`crate::netgen::NetworkStats::avg_degree`].
pub fn avg_degree(g: &Graph) -> f64 {
    if g.node_count() == 0 {
        0.0
    } else {
        2.0 * g.edge_count() as f64 / g.node_count() as f64
    }
}

impl DiseaseParams {
    pub fn from_avg_degree(
        r0: f64,
        recovery_days: f64,
        initial_infected_fraction: f64,
        avg_degree: f64,
    ) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::Argument(format!("R0 must be positive, got {r0}")));
        }
        check_common(recovery_days, initial_infected_fraction)?;
        if !(avg_degree > 0.0) {
            return Err(Error::Derivation(
                "reference graph has average degree 0".into(),
            ));
        }
        let recovery_rate = 1.0 / recovery_days;
        let raw = r0 * recovery_rate / avg_degree;
        Ok(DiseaseParams {
            r0,
            recovery_days,
            recovery_rate,
            infection_rate: raw.min(1.0),
            initial_infected_fraction,
            reference_avg_degree: avg_degree,
            infection_rate_clamped: raw > 1.0,
        })
    }

    /// Uses `infection_rate` as given; `r0` is the value it implies at `avg_degree`.
    pub fn direct(
        infection_rate: f64,
        recovery_days: f64,
        initial_infected_fraction: f64,
        avg_degree: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&infection_rate) {
            return Err(Error::Argument(format!(
                "infection rate must lie in [0, 1], got {infection_rate}"
            )));
        }
        check_common(recovery_days, initial_infected_fraction)?;
        let recovery_rate = 1.0 / recovery_days;
        Ok(DiseaseParams {
            r0: avg_degree.max(0.0) * infection_rate / recovery_rate,
            recovery_days,
            recovery_rate,
            infection_rate,
            initial_infected_fraction,
            reference_avg_degree: avg_degree,
            infection_rate_clamped: false,
        })
    }
}

fn check_common(recovery_days: f64, initial_infected_fraction: f64) -> Result<()> {
    if !(recovery_days >= 1.0 && recovery_days.is_finite()) {
        return Err(Error::Argument(format!(
            "recovery time must be at least one day, got {recovery_days}"
        )));
    }
    if !(initial_infected_fraction > 0.0 && initial_infected_fraction < 1.0) {
        return Err(Error::Argument(format!(
            "initial infected fraction must lie in (0, 1), got {initial_infected_fraction}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayCounts {
    pub susceptible: usize,
    pub infected: usize,
    pub recovered: usize,
}

/// Daily compartment counts; `days[0]` is the seeded state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SirTrace {
    pub node_count: usize,
    pub seed: u64,
    pub days: Vec<DayCounts>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SirSummary {
    /// Fraction of the population ever infected.
    pub total_infected_pct: f64,
    /// Largest simultaneously infected fraction.
    pub peak_infected_pct: f64,
    pub duration_days: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Susceptible,
    Infected,
    Recovered,
}

/// Runs one outbreak until nobody is infected or `max_days` is reached.
pub fn simulate(g: &Graph, params: &DiseaseParams, seed: u64, max_days: usize) -> Result<SirTrace> {
    if max_days == 0 {
        return Err(Error::Argument("max_days must be at least 1".into()));
    }
    let n = g.node_count();
    // round half up
    let initial = (n as f64 * params.initial_infected_fraction + 0.5).floor() as usize;
    if initial == 0 {
        return Err(Error::Seeding(format!(
            "{} of {n} nodes rounds to zero initial infections",
            params.initial_infected_fraction
        )));
    }
    let initial = initial.min(n);

    let mut rng = rng_from_seed(seed);
    let infected = index::sample(&mut rng, n, initial).into_vec();
    Ok(run_outbreak(g, params, infected, rng, seed, max_days))
}

/// Like [`simulate`] but with the day-0 infected nodes given explicitly.
pub fn simulate_from(
    g: &Graph,
    params: &DiseaseParams,
    initial_infected: &[usize],
    seed: u64,
    max_days: usize,
) -> Result<SirTrace> {
    if max_days == 0 {
        return Err(Error::Argument("max_days must be at least 1".into()));
    }
    let mut infected = initial_infected.to_vec();
    infected.sort_unstable();
    infected.dedup();
    if infected.is_empty() {
        return Err(Error::Seeding("no initially infected nodes".into()));
    }
    if let Some(&bad) = infected.iter().find(|&&u| u >= g.node_count()) {
        return Err(Error::Argument(format!("node {bad} out of range")));
    }
    Ok(run_outbreak(g, params, infected, rng_from_seed(seed), seed, max_days))
}

fn run_outbreak(
    g: &Graph,
    params: &DiseaseParams,
    mut infected: Vec<usize>,
    mut rng: SimRng,
    seed: u64,
    max_days: usize,
) -> SirTrace {
    let n = g.node_count();
    let adj = g.compact();
    let mut state = vec![State::Susceptible; n];
    infected.sort_unstable();
    for &u in &infected {
        state[u] = State::Infected;
    }

    let mut counts = DayCounts {
        susceptible: n - infected.len(),
        infected: infected.len(),
        recovered: 0,
    };
    let mut days = vec![counts];

    let escape_one = 1.0 - params.infection_rate;
    let mut pressure = vec![0u32; n];
    let mut exposed = Vec::new();
    let mut still_infected = Vec::new();

    while counts.infected > 0 && days.len() <= max_days {
        exposed.clear();
        for &u in &infected {
            for &v in adj.neighbors(u) {
                let v = v as usize;
                if state[v] == State::Susceptible {
                    if pressure[v] == 0 {
                        exposed.push(v);
                    }
                    pressure[v] += 1;
                }
            }
        }
        exposed.sort_unstable();

        let mut newly = Vec::new();
        for &v in &exposed {
            let k = pressure[v];
            pressure[v] = 0;
            let p = 1.0 - escape_one.powi(k as i32);
            if rng.gen::<f64>() < p {
                newly.push(v);
            }
        }

        still_infected.clear();
        for &u in &infected {
            if rng.gen::<f64>() < params.recovery_rate {
                state[u] = State::Recovered;
                counts.recovered += 1;
            } else {
                still_infected.push(u);
            }
        }
        for &v in &newly {
            state[v] = State::Infected;
        }
        counts.susceptible -= newly.len();
        counts.infected = still_infected.len() + newly.len();

        infected.clear();
        infected.extend_from_slice(&still_infected);
        infected.extend_from_slice(&newly);
        infected.sort_unstable();
        days.push(counts);
    }

    SirTrace {
        node_count: n,
        seed,
        days,
    }
}

pub fn summarize(trace: &SirTrace) -> SirSummary {
    let n = trace.node_count.max(1) as f64;
    let last = trace.days.last().expect("trace has at least the seeded day");
    let peak = trace.days.iter().map(|d| d.infected).max().unwrap_or(0);
    SirSummary {
        total_infected_pct: 1.0 - last.susceptible as f64 / n,
        peak_infected_pct: peak as f64 / n,
        duration_days: trace.days.len() - 1,
    }
}

impl SirTrace {
    /// `day,S,I,R,s_frac,i_frac,r_frac` with fractions at 6 decimals.
    pub fn to_csv(&self) -> String {
        let n = self.node_count.max(1) as f64;
        let mut out = String::from("day,S,I,R,s_frac,i_frac,r_frac\n");
        for (day, c) in self.days.iter().enumerate() {
            writeln!(
                out,
                "{day},{},{},{},{:.6},{:.6},{:.6}",
                c.susceptible,
                c.infected,
                c.recovered,
                c.susceptible as f64 / n,
                c.infected as f64 / n,
                c.recovered as f64 / n
            )
            .unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeTag;

    fn rates(infection_rate: f64, recovery_days: f64, initial: f64) -> DiseaseParams {
        DiseaseParams::direct(infection_rate, recovery_days, initial, 1.0).unwrap()
    }

    fn ring(n: usize) -> Graph {
        crate::netgen::generate_cen(&crate::netgen::CenConfig {
            node_count: n,
            ring_degree_k: 4,
            rewire_probability: 0.1,
            seed: 4,
        })
        .unwrap()
    }

    #[test]
    fn recovery_rate_from_recovery_time() {
        let g = Graph::from_edges(2, [(0, 1, EdgeTag::Class)]).unwrap();
        let p = derive_params(2.0, 10.0, 0.01, &g).unwrap();
        assert_eq!(p.recovery_rate, 0.1);
    }

    #[test]
    fn infection_rate_from_r0() {
        let p = DiseaseParams::from_avg_degree(2.0, 10.0, 0.01, 20.0).unwrap();
        assert!((p.infection_rate - 0.01).abs() < 1e-15);
        let p = DiseaseParams::from_avg_degree(6.0, 10.0, 0.05, 152.0).unwrap();
        assert!((p.infection_rate - 0.6 / 152.0).abs() < 1e-15);
        assert!((p.infection_rate - 0.003947).abs() < 1e-6);
        assert!(!p.infection_rate_clamped);
    }

    #[test]
    fn infection_rate_is_clamped() {
        let p = DiseaseParams::from_avg_degree(50.0, 1.0, 0.1, 2.0).unwrap();
        assert_eq!(p.infection_rate, 1.0);
        assert!(p.infection_rate_clamped);
    }

    #[test]
    fn derivation_errors() {
        assert!(matches!(derive_params(2.0, 10.0, 0.1, &Graph::new(5)), Err(Error::Derivation(_))));
        assert!(DiseaseParams::from_avg_degree(0.0, 10.0, 0.1, 4.0).is_err());
        assert!(DiseaseParams::from_avg_degree(2.0, 0.5, 0.1, 4.0).is_err());
        assert!(DiseaseParams::from_avg_degree(2.0, 10.0, 0.0, 4.0).is_err());
        assert!(DiseaseParams::direct(1.5, 10.0, 0.1, 4.0).is_err());
    }

    #[test]
    fn zero_initial_count_is_seeding_error() {
        let err = simulate(&ring(40), &rates(0.1, 10.0, 0.01), 0, 100).unwrap_err();
        assert!(matches!(err, Error::Seeding(_)));
        // 0.0125 * 40 = 0.5 rounds up
        let t = simulate(&ring(40), &rates(0.0, 10.0, 0.0125), 0, 100).unwrap();
        assert_eq!(t.days[0].infected, 1);
    }

    #[test]
    fn no_transmission_without_infection_rate() {
        let t = simulate(&ring(200), &rates(0.0, 10.0, 0.1), 3, 365).unwrap();
        let s0 = t.days[0].susceptible;
        assert!(t.days.iter().all(|d| d.susceptible == s0));
        assert_eq!(t.days.last().unwrap().infected, 0);
    }

    #[test]
    fn certain_recovery_after_one_day() {
        let t = simulate(&ring(200), &rates(0.3, 1.0, 0.1), 8, 365).unwrap();
        // everyone infected on day d recovers on day d + 1
        for w in t.days.windows(2) {
            assert_eq!(w[1].recovered - w[0].recovered, w[0].infected);
        }
    }

    #[test]
    fn edgeless_graph_never_spreads() {
        let t = simulate(&Graph::new(100), &rates(1.0, 10.0, 0.2), 1, 365).unwrap();
        let s = summarize(&t);
        assert!((s.total_infected_pct - 0.2).abs() < 1e-12);
    }

    #[test]
    fn stops_at_max_days() {
        let t = simulate(&Graph::new(10), &rates(0.0, 1000.0, 0.5), 1, 5).unwrap();
        assert_eq!(t.days.len(), 6);
        assert!(simulate(&Graph::new(10), &rates(0.0, 10.0, 0.5), 1, 0).is_err());
    }

    #[test]
    fn summary_of_fully_infected_start() {
        let trace = SirTrace {
            node_count: 4,
            seed: 0,
            days: vec![
                DayCounts { susceptible: 0, infected: 4, recovered: 0 },
                DayCounts { susceptible: 0, infected: 1, recovered: 3 },
                DayCounts { susceptible: 0, infected: 0, recovered: 4 },
            ],
        };
        let s = summarize(&trace);
        assert_eq!(s.peak_infected_pct, 1.0);
        assert_eq!(s.total_infected_pct, 1.0);
        assert_eq!(s.duration_days, 2);
    }

    #[test]
    fn csv_layout() {
        let trace = SirTrace {
            node_count: 3,
            seed: 0,
            days: vec![
                DayCounts { susceptible: 2, infected: 1, recovered: 0 },
                DayCounts { susceptible: 2, infected: 0, recovered: 1 },
            ],
        };
        assert_eq!(
            trace.to_csv(),
            "day,S,I,R,s_frac,i_frac,r_frac\n\
             0,2,1,0,0.666667,0.333333,0.000000\n\
             1,2,0,1,0.666667,0.000000,0.333333\n"
        );
    }
}
