//! Strategy timing harness. Both strategies are built on the same inputs and
//! their cubes must match before any timing is reported.

use std::fmt::Write as _;
use std::time::Instant;

use crate::cube::{compute_cube, CubeOptions, GraphCube, Strategy};
use crate::error::{Error, Result};
use crate::graph::MultidimGraph;
use crate::index::build_inverted_index;
use crate::measures::{significance_table, PrunePolicy};
use crate::oracle::compare;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub strategy: Strategy,
    pub policy: PrunePolicy,
    pub max_level: usize,
    pub wall_millis: f64,
    pub nodes_emitted: usize,
    pub combines_attempted: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub environment: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub max_level: usize,
    pub repeats: usize,
    pub policy: PrunePolicy,
    pub threads: usize,
}

fn environment(threads: usize) -> String {
    let workers = if threads == 0 {
        rayon::current_num_threads()
    } else {
        threads
    };
    format!(
        "{}-{} cpus={} threads={workers}",
        std::env::consts::OS,
        std::env::consts::ARCH,
        std::thread::available_parallelism().map_or(1, |n| n.get()),
    )
}

fn row(cube: &GraphCube, millis: f64) -> BenchRow {
    let m = cube.meta();
    BenchRow {
        strategy: m.strategy.expect("engine cube"),
        policy: m.policy,
        max_level: m.max_level,
        wall_millis: millis,
        nodes_emitted: cube.node_count(),
        combines_attempted: m.stats.combines_attempted,
    }
}

/// Builds the cube once per strategy per repeat. Fails with a verification
/// error, and reports nothing, if the two strategies ever disagree.
pub fn run_bench(g: &MultidimGraph, cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.repeats == 0 {
        return Err(Error::Parameter("repeats must be at least 1".into()));
    }
    let idx = build_inverted_index(g);
    let table = significance_table(g, &idx).apply_policy(cfg.policy);
    let mut rows = Vec::with_capacity(2 * cfg.repeats);
    for _ in 0..cfg.repeats {
        let mut built = Vec::with_capacity(2);
        for strategy in [Strategy::LevelByLevel, Strategy::StepsUp] {
            let opts = CubeOptions {
                strategy,
                max_level: cfg.max_level,
                threads: cfg.threads,
            };
            let start = Instant::now();
            let cube = compute_cube(g, &idx, &table, &opts)?;
            let millis = start.elapsed().as_secs_f64() * 1e3;
            built.push((cube, millis));
        }
        let diff = compare(&built[0].0, &built[1].0)?;
        if !diff.is_empty() {
            return Err(Error::Verification(format!(
                "strategies disagree on {} cells:\n{diff}",
                diff.len()
            )));
        }
        rows.extend(built.iter().map(|(c, ms)| row(c, *ms)));
    }
    Ok(BenchReport {
        rows,
        environment: environment(cfg.threads),
    })
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "strategy,policy,max_level,wall_millis,nodes_emitted,combines_attempted,environment\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.3},{},{},{}",
                r.strategy,
                r.policy,
                r.max_level,
                r.wall_millis,
                r.nodes_emitted,
                r.combines_attempted,
                self.environment
            );
        }
        out
    }

    /// Mean wall time per strategy.
    pub fn mean_millis(&self, strategy: Strategy) -> f64 {
        let xs: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.strategy == strategy)
            .map(|r| r.wall_millis)
            .collect();
        xs.iter().sum::<f64>() / xs.len().max(1) as f64
    }

    pub fn combines(&self, strategy: Strategy) -> u64 {
        self.rows
            .iter()
            .find(|r| r.strategy == strategy)
            .map_or(0, |r| r.combines_attempted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::g0;

    #[test]
    fn repeats_produce_two_rows_each() {
        let g = g0();
        let cfg = BenchConfig {
            max_level: 2,
            repeats: 3,
            policy: PrunePolicy::None,
            threads: 1,
        };
        let report = run_bench(&g, &cfg).unwrap();
        assert_eq!(report.rows.len(), 6);
        assert!(report.rows.iter().all(|r| r.wall_millis > 0.0));
        assert_eq!(
            report.combines(Strategy::LevelByLevel),
            report.combines(Strategy::StepsUp)
        );
        assert_eq!(report.to_csv().lines().count(), 7);
    }

    #[test]
    fn zero_repeats_rejected() {
        let cfg = BenchConfig {
            max_level: 2,
            repeats: 0,
            policy: PrunePolicy::None,
            threads: 1,
        };
        assert!(matches!(run_bench(&g0(), &cfg), Err(Error::Parameter(_))));
    }
}
