//! Sampling checks against closed-form expectations, at 4 standard deviations
//! unless noted otherwise.

mod common;

use cohortcut::cohort::{apply_cohort_separation, partition_random, partition_recursive_maxcut};
use cohortcut::netgen::{augment_sin, generate_cen, network_stats, ws_clustering_estimate, CenConfig, SinConfig};
use cohortcut::qubomc::{SolverConfig, SolverKind};
use cohortcut::rng::rng_from_seed;
use cohortcut::sir::{derive_params, simulate, simulate_from, summarize, DiseaseParams};
use cohortcut::{EdgeTag, Graph};
use common::random_graph;
use rand::Rng;

fn within_sigmas(observed: f64, mean: f64, sd: f64, k: f64) -> bool {
    (observed - mean).abs() <= k * sd
}

#[test]
fn single_edge_transmits_half_the_time() {
    let g = Graph::from_edges(2, [(0, 1, EdgeTag::Class)]).unwrap();
    let params = DiseaseParams::direct(0.5, 1.0, 0.5, 1.0).unwrap();
    let runs = 10_000;
    let both = (0..runs)
        .filter(|&seed| {
            let trace = simulate(&g, &params, seed, 365).unwrap();
            assert_eq!(trace.days[0].infected, 1);
            summarize(&trace).total_infected_pct == 1.0
        })
        .count();
    let freq = both as f64 / runs as f64;
    assert!((freq - 0.5).abs() <= 0.02, "second node infected in {freq:.4} of runs");
}

#[test]
fn star_leaves_are_infected_at_the_contact_rate() {
    let leaves = 5000;
    let g = Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v, EdgeTag::Class))).unwrap();
    for ri in [0.05, 0.3, 0.8] {
        let params = DiseaseParams::direct(ri, 5.0, 0.5, 2.0).unwrap();
        let mut infected = 0usize;
        let seeds = 10u64;
        for seed in 0..seeds {
            let trace = simulate_from(&g, &params, &[0], seed, 2).unwrap();
            infected += trace.days[0].susceptible - trace.days[1].susceptible;
        }
        let trials = (leaves as u64 * seeds) as f64;
        let sd = (trials * ri * (1.0 - ri)).sqrt();
        assert!(
            within_sigmas(infected as f64, trials * ri, sd, 4.0),
            "r_i {ri}: {infected} of {trials} leaves infected"
        );
    }
}

#[test]
fn infection_probability_compounds_over_infected_neighbors() {
    // two infected hubs share every leaf
    let leaves = 5000;
    let edges = (2..leaves + 2).flat_map(|v| [(0, v, EdgeTag::Class), (1, v, EdgeTag::Class)]);
    let g = Graph::from_edges(leaves + 2, edges).unwrap();
    let ri = 0.2;
    let p = 1.0 - (1.0 - ri) * (1.0 - ri);
    let params = DiseaseParams::direct(ri, 5.0, 0.5, 2.0).unwrap();
    let mut infected = 0usize;
    for seed in 0..10 {
        let trace = simulate_from(&g, &params, &[0, 1], seed, 2).unwrap();
        infected += trace.days[0].susceptible - trace.days[1].susceptible;
    }
    let trials = (leaves * 10) as f64;
    let sd = (trials * p * (1.0 - p)).sqrt();
    assert!(within_sigmas(infected as f64, trials * p, sd, 4.0), "{infected} of {trials}");
}

#[test]
fn infectious_period_averages_recovery_days() {
    for recovery_days in [2.0, 7.0, 14.0] {
        let params = DiseaseParams::direct(0.0, recovery_days, 0.4, 0.0).unwrap();
        let trace = simulate(&Graph::new(50_000), &params, 3, 10_000).unwrap();
        let initial = trace.days[0].infected as f64;
        let person_days: usize = trace.days.iter().map(|d| d.infected).sum();
        let mean = person_days as f64 / initial;
        // geometric with success probability 1 / recovery_days
        let r = 1.0 / recovery_days;
        let sd = ((1.0 - r).sqrt() / r) / initial.sqrt();
        assert!(within_sigmas(mean, recovery_days, sd, 4.0), "T_r {recovery_days}: mean {mean:.3}");
    }
}

#[test]
fn derived_infection_rate_reproduces_r0() {
    let g = generate_cen(&CenConfig::small_campus(5)).unwrap();
    let params = derive_params(6.0, 10.0, 0.05, &g).unwrap();
    let avg = network_stats(&g).avg_degree;
    assert!((params.infection_rate * avg / params.recovery_rate - 6.0).abs() < 1e-9);
    assert!(!params.infection_rate_clamped);
}

#[test]
fn random_cohort_sizes_are_binomial() {
    let n = 3800;
    let cohorts = 4;
    let g = Graph::new(n);
    let p = 1.0 / cohorts as f64;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    for seed in 0..50 {
        let a = partition_random(&g, cohorts, seed).unwrap();
        for &size in a.cohort_sizes() {
            assert!(within_sigmas(size as f64, n as f64 * p, sd, 4.0), "seed {seed}: size {size}");
        }
    }
}

#[test]
fn random_cohorts_cut_the_expected_share_of_edges() {
    let g = generate_cen(&CenConfig::calibrated(400, 0.05, 0.4, 9).unwrap()).unwrap();
    let m = g.edge_count() as f64;
    for cohorts in [2usize, 4, 16] {
        let q = (cohorts - 1) as f64 / cohorts as f64;
        let seeds = 100;
        let total: usize = (0..seeds)
            .map(|seed| partition_random(&g, cohorts, seed).unwrap().cut_edges_removed())
            .sum();
        let mean = total as f64 / seeds as f64;
        // edge-cut indicators are pairwise independent, so the variance is m q (1 - q)
        let sd = (m * q * (1.0 - q) / seeds as f64).sqrt();
        assert!(within_sigmas(mean, m * q, sd, 4.0), "N={cohorts}: mean removed {mean:.1} vs {:.1}", m * q);
    }
}

#[test]
fn recursive_exact_bisection_beats_random_expectation() {
    let mut rng = rng_from_seed(77);
    for i in 0..100u64 {
        let g = random_graph(12, rng.gen_range(0.1..0.9), 7000 + i);
        let m = g.edge_count();
        for cohorts in [2usize, 4] {
            let solver = SolverConfig::with_kind(SolverKind::Exact, i);
            let a = partition_recursive_maxcut(&g, cohorts, &solver).unwrap();
            assert!(
                a.cut_edges_removed() * cohorts >= (cohorts - 1) * m,
                "graph {i}, N={cohorts}: removed {} of {m}",
                a.cut_edges_removed()
            );
        }
    }
}

#[test]
fn deeper_splits_refine_shallower_ones() {
    let g = generate_cen(&CenConfig::calibrated(200, 0.08, 0.4, 3).unwrap()).unwrap();
    let solver = SolverConfig { seed: 11, ..SolverConfig::default() };
    let two = partition_recursive_maxcut(&g, 2, &solver).unwrap();
    let four = partition_recursive_maxcut(&g, 4, &solver).unwrap();
    let (c2, c4) = (two.cohort_of(), four.cohort_of());
    assert!((0..g.node_count()).all(|u| c4[u] / 2 == c2[u]));
    let second_level = g
        .edges()
        .filter(|&(u, v, _)| c2[u] == c2[v] && c4[u] != c4[v])
        .count();
    assert_eq!(four.cut_edges_removed(), two.cut_edges_removed() + second_level);
}

#[test]
fn dormitory_edges_follow_pair_class_rates() {
    let cen = generate_cen(&CenConfig::small_campus(1)).unwrap();
    let cfg = SinConfig {
        dorm_count: 8,
        floors_per_dorm: 2,
        p_floor: 0.2,
        p_dorm: 0.005,
        p_campus: 0.0001,
        seed: 21,
    };
    let assignment = partition_random(&cen, 16, 4).unwrap();
    let separated = apply_cohort_separation(&cen, &assignment).unwrap();
    let sin = augment_sin(&separated, &assignment, &cfg).unwrap();

    let c = assignment.cohort_of();
    let n = cen.node_count();
    let mut open_pairs = [0u64; 3];
    for u in 0..n {
        for v in u + 1..n {
            if separated.has_edge(u, v) {
                continue;
            }
            let class = if c[u] == c[v] {
                0
            } else if c[u] / 2 == c[v] / 2 {
                1
            } else {
                2
            };
            open_pairs[class] += 1;
        }
    }
    let tags = [EdgeTag::Floor, EdgeTag::Dorm, EdgeTag::Campus];
    let probs = [cfg.p_floor, cfg.p_dorm, cfg.p_campus];
    for ((tag, p), pairs) in tags.into_iter().zip(probs).zip(open_pairs) {
        let count = sin.count_tag(tag) as f64;
        let trials = pairs as f64;
        let sd = (trials * p * (1.0 - p)).sqrt();
        assert!(within_sigmas(count, trials * p, sd, 4.0), "{tag:?}: {count} edges over {pairs} pairs");
    }
    assert_eq!(sin.count_tag(EdgeTag::Class), separated.edge_count());
}

#[test]
fn generated_clustering_tracks_the_calibration_formula() {
    let cfg = CenConfig::small_campus(2);
    let target = ws_clustering_estimate(cfg.ring_degree_k, cfg.rewire_probability);
    let mean: f64 = (0..3)
        .map(|s| {
            let g = generate_cen(&CenConfig { seed: s, ..cfg }).unwrap();
            network_stats(&g).clustering_coefficient
        })
        .sum::<f64>()
        / 3.0;
    assert!((mean - target).abs() < 0.03, "clustering {mean:.4} vs estimate {target:.4}");
    assert!((mean - 0.465).abs() < 0.03);
}
