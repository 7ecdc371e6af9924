//! Scenario generation and the paired Monte Carlo benchmark harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::belief::GaussianCentroid;
use crate::planner::{plan, PlannerKind};
use crate::scenario::{BenchReport, GroupReport, PlannerStats, Scenario, TrialRecord};
use crate::Error;

/// Table-style centroid-count buckets.
pub const BUCKETS: [(usize, usize); 4] = [(1, 3), (4, 6), (7, 9), (10, 12)];

/// SplitMix64 step, used to derive independent per-trial seeds.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Draws a scenario from the template: centroid count uniform in 1..=12
/// unless fixed, placements uniform inside the margin, peak and spread from
/// the standard ranges. Fully determined by the seed.
pub fn generate_scenario(seed: u64, template: &Scenario) -> Scenario {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let count = template
        .generator
        .fixed_centroid_count
        .unwrap_or_else(|| rng.random_range(1..=12));
    let mx = template.map.width_m * template.generator.margin_frac;
    let my = template.map.height_m * template.generator.margin_frac;
    let centroids = (0..count)
        .map(|_| GaussianCentroid {
            x: rng.random_range(mx..template.map.width_m - mx),
            y: rng.random_range(my..template.map.height_m - my),
            peak_prob: rng.random_range(0.4..0.9),
            sigma: rng.random_range(2.0..8.0) * template.map.cell_size_m,
        })
        .collect();
    let mut scenario = template.clone();
    scenario.seed = seed;
    scenario.centroids = centroids;
    scenario.planner.seed = seed;
    scenario
}

/// Runs one planner on one scenario.
pub fn run_trial(scenario: &Scenario, kind: PlannerKind) -> TrialRecord {
    let base = TrialRecord {
        trial_seed: scenario.seed,
        centroid_count: scenario.centroids.len(),
        planner: kind,
        info: 0.0,
        cost: 0.0,
        node_count: 0,
        max_node_cost: 0.0,
        curve: Vec::new(),
        error: None,
    };
    let run = || -> Result<TrialRecord, Error> {
        scenario.validate()?;
        let grid = scenario.build_grid()?;
        let world = crate::planner::World {
            grid: &grid,
            sensor: &scenario.sensor,
            weights: &scenario.weights,
            zones: &scenario.zones,
        };
        let mut cfg = scenario.planner;
        cfg.seed = mix_seed(scenario.seed, kind as u64 + 1);
        let r = plan(&world, scenario.start, &cfg, kind)?;
        Ok(TrialRecord {
            info: r.info,
            cost: r.cost,
            node_count: r.node_count,
            max_node_cost: r.max_node_cost,
            curve: r.curve,
            ..base.clone()
        })
    };
    match run() {
        Ok(rec) => rec,
        Err(e) => TrialRecord {
            error: Some(e.to_string()),
            ..base
        },
    }
}

pub struct BenchOptions {
    pub trials: usize,
    pub planners: Vec<PlannerKind>,
    pub jobs: usize,
    /// Assign trials round-robin to the four buckets so every bucket gets
    /// an equal share; the count is uniform within the bucket. The marginal
    /// distribution over 1..=12 stays uniform.
    pub stratify: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            trials: 200,
            planners: vec![PlannerKind::Tigris, PlannerKind::Rig],
            jobs: 4,
            stratify: true,
        }
    }
}

/// Paired Monte Carlo benchmark: every planner sees the identical scenario
/// for a given trial seed. Aggregation is independent of `jobs`.
pub fn run_benchmark(
    template: &Scenario,
    opts: &BenchOptions,
) -> Result<(BenchReport, Vec<TrialRecord>), Error> {
    if opts.trials < 2 {
        return Err(Error::Config("need at least 2 trials".into()));
    }
    if opts.planners.is_empty() {
        return Err(Error::Config("no planners requested".into()));
    }
    template.validate()?;

    let specs: Vec<Scenario> = (0..opts.trials)
        .map(|i| {
            let seed = mix_seed(template.seed, i as u64);
            let mut t = template.clone();
            if opts.stratify && t.generator.fixed_centroid_count.is_none() {
                let (lo, hi) = BUCKETS[i % BUCKETS.len()];
                let mut rng = ChaCha20Rng::seed_from_u64(mix_seed(seed, 0xb0c));
                t.generator.fixed_centroid_count = Some(rng.random_range(lo..=hi));
            }
            generate_scenario(seed, &t)
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let records: Vec<Vec<TrialRecord>> = pool.install(|| {
        specs
            .par_iter()
            .map(|s| {
                opts.planners
                    .iter()
                    .map(|&k| run_trial(s, k))
                    .collect::<Vec<_>>()
            })
            .collect()
    });

    let flat: Vec<TrialRecord> = records.iter().flatten().cloned().collect();
    let report = aggregate(&records, &opts.planners);
    Ok((report, flat))
}

fn aggregate(per_trial: &[Vec<TrialRecord>], planners: &[PlannerKind]) -> BenchReport {
    // a trial is usable only if every planner finished it
    let usable: Vec<&Vec<TrialRecord>> = per_trial
        .iter()
        .filter(|recs| recs.iter().all(|r| r.error.is_none()))
        .collect();
    let failed = per_trial.len() - usable.len();

    let mut groups = Vec::new();
    for &(lo, hi) in &BUCKETS {
        groups.push(group_report(
            &format!("{lo}-{hi}"),
            lo,
            hi,
            &usable,
            planners,
        ));
    }
    groups.push(group_report("all", 1, usize::MAX, &usable, planners));

    BenchReport {
        trials: per_trial.len(),
        failed,
        planners: planners.to_vec(),
        groups,
    }
}

fn group_report(
    label: &str,
    lo: usize,
    hi: usize,
    usable: &[&Vec<TrialRecord>],
    planners: &[PlannerKind],
) -> GroupReport {
    let in_group: Vec<&&Vec<TrialRecord>> = usable
        .iter()
        .filter(|recs| {
            let c = recs[0].centroid_count;
            c >= lo && c <= hi
        })
        .collect();
    let stats: Vec<PlannerStats> = planners
        .iter()
        .enumerate()
        .map(|(pi, &p)| {
            let xs: Vec<f64> = in_group.iter().map(|r| r[pi].info).collect();
            let (mean, std) = mean_std(&xs);
            PlannerStats {
                planner: p,
                n: xs.len(),
                mean,
                std,
            }
        })
        .collect();
    let (mean_diff, percent_diff, p_value) = if planners.len() >= 2 && !in_group.is_empty() {
        let diffs: Vec<f64> = in_group.iter().map(|r| r[0].info - r[1].info).collect();
        let (md, _) = mean_std(&diffs);
        (
            Some(md),
            Some(percent_difference(stats[0].mean, stats[1].mean)),
            Some(paired_one_tailed_p(&diffs)),
        )
    } else {
        (None, None, None)
    };
    GroupReport {
        label: label.to_string(),
        lo,
        hi,
        n: in_group.len(),
        stats,
        mean_diff,
        percent_diff,
        p_value,
    }
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// `100 * (a - b) / b`, the reporting convention for improvements.
pub fn percent_difference(a: f64, b: f64) -> f64 {
    100.0 * (a - b) / b
}

/// One-tailed p-value for "mean difference > 0" from a paired t statistic.
pub fn paired_one_tailed_p(diffs: &[f64]) -> f64 {
    if diffs.len() < 2 {
        return 0.5;
    }
    let (mean, std) = mean_std(diffs);
    if std == 0.0 {
        return if mean > 0.0 {
            0.0
        } else if mean < 0.0 {
            1.0
        } else {
            0.5
        };
    }
    let n = diffs.len() as f64;
    let t = mean / (std / n.sqrt());
    let dist = StudentsT::new(0.0, 1.0, n - 1.0).expect("valid dof");
    1.0 - dist.cdf(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::StopCondition;
    use statrs::distribution::ChiSquared;

    fn quick_template() -> Scenario {
        let mut t = Scenario::desk_template();
        t.planner.stop = StopCondition::Iterations(60);
        t
    }

    #[test]
    fn generation_is_deterministic_and_respects_fixed_count() {
        let t = Scenario::desk_template();
        let a = generate_scenario(42, &t);
        let b = generate_scenario(42, &t);
        assert_eq!(a.to_toml(), b.to_toml());
        assert!((1..=12).contains(&a.centroids.len()));

        let mut fixed = t.clone();
        fixed.generator.fixed_centroid_count = Some(3);
        let c = generate_scenario(7, &fixed);
        assert_eq!(c.centroids.len(), 3);
        // placements stay inside the margin
        for g in &c.centroids {
            assert!(g.x >= 250.0 && g.x <= 2250.0);
            assert!(g.y >= 250.0 && g.y <= 2250.0);
        }
    }

    #[test]
    fn centroid_count_distribution_is_uniform() {
        let t = Scenario::desk_template();
        let n = 10_000;
        let mut counts = [0usize; 12];
        for seed in 0..n {
            let s = generate_scenario(mix_seed(1234, seed), &t);
            counts[s.centroids.len() - 1] += 1;
        }
        let expected = n as f64 / 12.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        let dist = ChiSquared::new(11.0).unwrap();
        let p = 1.0 - dist.cdf(chi2);
        assert!(p > 0.01, "chi2 {chi2}, p {p}");
    }

    #[test]
    fn self_comparison_is_null() {
        // identical planner twice: zero percent difference, p = 0.5
        let t = quick_template();
        let opts = BenchOptions {
            trials: 6,
            planners: vec![PlannerKind::Tigris, PlannerKind::Tigris],
            jobs: 2,
            stratify: false,
        };
        let (report, _) = run_benchmark(&t, &opts).unwrap();
        let all = report.groups.last().unwrap();
        assert_eq!(all.percent_diff, Some(0.0));
        assert_eq!(all.p_value, Some(0.5));
    }

    #[test]
    fn aggregation_is_order_independent() {
        let t = quick_template();
        let mk = |jobs| BenchOptions {
            trials: 8,
            planners: vec![PlannerKind::Tigris, PlannerKind::Rig],
            jobs,
            stratify: true,
        };
        let (r1, t1) = run_benchmark(&t, &mk(1)).unwrap();
        let (r4, t4) = run_benchmark(&t, &mk(4)).unwrap();
        assert_eq!(r1, r4);
        assert_eq!(t1, t4);
    }

    #[test]
    fn percent_difference_matches_reported_convention() {
        // (427.53 - 362.38) / 362.38 rounds to the reported 18.0%
        let p = percent_difference(427.53, 362.38);
        assert!((p - 17.9784).abs() < 1e-3);
        assert!((p - 18.0).abs() < 0.05);
    }

    #[test]
    fn paired_t_reference() {
        // hand-checked small case
        let diffs = [1.0, 2.0, 0.5, 1.5];
        let p = paired_one_tailed_p(&diffs);
        assert!(p < 0.05, "p {p}");
        let null = [0.5, -0.5, 0.25, -0.25];
        assert!(paired_one_tailed_p(&null) > 0.3);
        assert_eq!(paired_one_tailed_p(&[1.0, 1.0, 1.0]), 0.0);
        assert_eq!(paired_one_tailed_p(&[0.0, 0.0]), 0.5);
    }
}
