//! Bottom-up, breadth-first cuboid lattice traversal over inverted lists.
//!
//! A pass takes the cells of one level L as its inputs and combines every
//! pair of cells from different cuboids whose shared dimensions agree; the
//! pair's signature union decides which level the result lands on, anywhere
//! in `(L, 2L]`. Level-by-level keeps only results at `L + 1`. Steps-up keeps
//! everything in `(L, 2L]`, marks those levels complete, and never spends
//! combine work on a level that is already complete, so passes whose whole
//! target range is complete are skipped outright.
//!
//! Work is grouped by target signature so each group deduplicates locally;
//! groups run in parallel and are merged in signature order, which makes the
//! result independent of the worker count.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;

use super::{aggregate_edges, AggregateNetwork, AggregateNode, CubeMeta, GraphCube, Strategy};
use crate::error::{Error, Result};
use crate::graph::{MultidimGraph, ValueCode, VertexIdx};
use crate::index::InvertedIndex;
use crate::measures::SignificanceTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeOptions {
    pub strategy: Strategy,
    pub max_level: usize,
    /// Worker count hint; 0 uses the rayon default. Results do not depend on it.
    pub threads: usize,
}

impl CubeOptions {
    pub fn new(strategy: Strategy, max_level: usize) -> Self {
        CubeOptions {
            strategy,
            max_level,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PassStats {
    pub source_level: usize,
    /// Levels whose pair work ran in this pass.
    pub traversed: Vec<usize>,
    /// Levels whose results were kept.
    pub retained: Vec<usize>,
    pub combines: u64,
    /// Non-empty intersections thrown away because their level was not retained.
    pub discarded: u64,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BuildStats {
    pub combines_attempted: u64,
    pub passes: Vec<PassStats>,
    /// Source levels whose pass was skipped because every target level was complete.
    pub skipped_passes: Vec<usize>,
    /// Node count per level, index 0 unused.
    pub nodes_per_level: Vec<usize>,
    /// Millis attributed to each level, index 0 unused. A pass that completes
    /// several levels is charged to the lowest; the rest show 0.
    pub level_millis: Vec<f64>,
    pub edge_millis: f64,
    pub total_millis: f64,
}

/// One cell per kept (dimension, value), members copied from the index.
pub fn level1_nodes(idx: &InvertedIndex, table: &SignificanceTable) -> Vec<AggregateNode> {
    (0..idx.dim_count())
        .flat_map(|d| {
            idx.entries(d)
                .filter(move |&(code, _)| table.keep(d, code))
                .map(move |(code, list)| AggregateNode {
                    dims: vec![d],
                    values: vec![code],
                    members: list.to_vec(),
                })
        })
        .collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for d in start..n {
            if n - d < k - cur.len() {
                break;
            }
            cur.push(d);
            rec(d + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

type Level = BTreeMap<Vec<usize>, Vec<AggregateNode>>;
type PairsByTarget<'a> = BTreeMap<Vec<usize>, Vec<(&'a Vec<usize>, &'a Vec<usize>)>>;

struct GroupOutcome {
    signature: Vec<usize>,
    combines: u64,
    discarded: u64,
    nodes: Option<Vec<AggregateNode>>,
}

/// Combines every matching cell pair of the cuboid pairs that produce `target`.
fn run_group(
    level: &Level,
    target: &[usize],
    pairs: &[(&Vec<usize>, &Vec<usize>)],
    retain: bool,
) -> GroupOutcome {
    let mut combines = 0u64;
    let mut discarded = 0u64;
    let mut seen: HashSet<Vec<ValueCode>> = HashSet::new();
    let mut out = Vec::new();
    let mut buf: Vec<VertexIdx> = Vec::new();

    for &(s1, s2) in pairs {
        let left = &level[s1];
        let right = &level[s2];
        // Positions of the shared dimensions on both sides, the join key.
        let shared: Vec<(usize, usize)> = s1
            .iter()
            .enumerate()
            .filter_map(|(i, d)| s2.iter().position(|e| e == d).map(|j| (i, j)))
            .collect();
        // Where each target dimension's value comes from.
        let source: Vec<(bool, usize)> = target
            .iter()
            .map(|d| match s1.iter().position(|e| e == d) {
                Some(i) => (true, i),
                None => (false, s2.iter().position(|e| e == d).expect("target is the union")),
            })
            .collect();

        let mut buckets: HashMap<Vec<ValueCode>, Vec<usize>> = HashMap::new();
        for (k, b) in right.iter().enumerate() {
            let key = shared.iter().map(|&(_, j)| b.values[j]).collect();
            buckets.entry(key).or_default().push(k);
        }

        for a in left {
            let key: Vec<ValueCode> = shared.iter().map(|&(i, _)| a.values[i]).collect();
            let Some(matches) = buckets.get(&key) else {
                continue;
            };
            for &k in matches {
                let b = &right[k];
                combines += 1;
                super::intersect_into(&a.members, &b.members, &mut buf);
                if buf.is_empty() {
                    continue;
                }
                if !retain {
                    discarded += 1;
                    continue;
                }
                let values: Vec<ValueCode> = source
                    .iter()
                    .map(|&(from_a, i)| if from_a { a.values[i] } else { b.values[i] })
                    .collect();
                if seen.contains(&values) {
                    continue;
                }
                seen.insert(values.clone());
                out.push(AggregateNode {
                    dims: target.to_vec(),
                    values,
                    members: buf.clone(),
                });
            }
        }
    }

    GroupOutcome {
        signature: target.to_vec(),
        combines,
        discarded,
        nodes: retain.then(|| {
            out.sort_unstable_by(|x, y| x.values.cmp(&y.values));
            out
        }),
    }
}

fn run_pass(
    source: &Level,
    source_level: usize,
    traverse: &[usize],
    retain: &[usize],
    levels: &mut [Level],
) -> PassStats {
    let start = Instant::now();
    let sigs: Vec<&Vec<usize>> = source.keys().collect();
    let mut groups = PairsByTarget::new();
    for (i, s1) in sigs.iter().enumerate() {
        for s2 in &sigs[i + 1..] {
            let u = union(s1, s2);
            if traverse.contains(&u.len()) {
                groups.entry(u).or_default().push((s1, s2));
            }
        }
    }

    let outcomes: Vec<GroupOutcome> = groups
        .par_iter()
        .map(|(target, pairs)| run_group(source, target, pairs, retain.contains(&target.len())))
        .collect();

    let mut stats = PassStats {
        source_level,
        traversed: traverse.to_vec(),
        retained: retain.to_vec(),
        combines: 0,
        discarded: 0,
        millis: 0.0,
    };
    for o in outcomes {
        stats.combines += o.combines;
        stats.discarded += o.discarded;
        if let Some(nodes) = o.nodes {
            levels[o.signature.len()].insert(o.signature, nodes);
        }
    }
    stats.millis = start.elapsed().as_secs_f64() * 1e3;
    stats
}

fn materialize(
    g: &MultidimGraph,
    idx: &InvertedIndex,
    table: &SignificanceTable,
    opts: &CubeOptions,
) -> (BTreeMap<Vec<usize>, AggregateNetwork>, BuildStats) {
    let n = g.dim_count();
    let max = opts.max_level;
    let started = Instant::now();
    let mut stats = BuildStats {
        nodes_per_level: vec![0; max + 1],
        level_millis: vec![0.0; max + 1],
        ..Default::default()
    };

    let mut levels: Vec<Level> = vec![Level::new(); max + 1];
    let t1 = Instant::now();
    for d in 0..n {
        levels[1].insert(vec![d], Vec::new());
    }
    for node in level1_nodes(idx, table) {
        levels[1].get_mut(&node.dims).expect("dimension present").push(node);
    }
    stats.level_millis[1] = t1.elapsed().as_secs_f64() * 1e3;

    let mut complete = vec![false; max + 1];
    complete[1] = true;
    for src in 1..max {
        let reachable: Vec<usize> = (src + 1..=max.min(2 * src)).collect();
        let (traverse, retain) = match opts.strategy {
            Strategy::LevelByLevel => (reachable, vec![src + 1]),
            Strategy::StepsUp => {
                let open: Vec<usize> = reachable.into_iter().filter(|&k| !complete[k]).collect();
                (open.clone(), open)
            }
        };
        if traverse.is_empty() {
            stats.skipped_passes.push(src);
            continue;
        }
        let source = std::mem::take(&mut levels[src]);
        let pass = run_pass(&source, src, &traverse, &retain, &mut levels);
        levels[src] = source;
        // Cuboids with no surviving cells still exist, just empty.
        for &k in &retain {
            for sig in subsets(n, k) {
                levels[k].entry(sig).or_default();
            }
            complete[k] = true;
        }
        stats.level_millis[retain[0]] += pass.millis;
        stats.combines_attempted += pass.combines;
        stats.passes.push(pass);
    }

    let te = Instant::now();
    let cuboids: BTreeMap<Vec<usize>, AggregateNetwork> = levels
        .into_iter()
        .enumerate()
        .skip(1)
        .flat_map(|(k, level)| {
            stats.nodes_per_level[k] = level.values().map(Vec::len).sum();
            level.into_iter()
        })
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(sig, nodes)| {
            let net = aggregate_edges(g, AggregateNetwork::new(sig.clone(), nodes));
            (sig, net)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    stats.edge_millis = te.elapsed().as_secs_f64() * 1e3;
    stats.total_millis = started.elapsed().as_secs_f64() * 1e3;
    (cuboids, stats)
}

/// Materializes every cuboid up to `max_level` from the kept level-1 cells.
pub fn compute_cube(
    g: &MultidimGraph,
    idx: &InvertedIndex,
    table: &SignificanceTable,
    opts: &CubeOptions,
) -> Result<GraphCube> {
    let n = g.dim_count();
    if opts.max_level == 0 || opts.max_level > n {
        return Err(Error::Parameter(format!(
            "max level {} outside 1..={n}",
            opts.max_level
        )));
    }
    if idx.dim_count() != n || table.dim_count() != n {
        return Err(Error::Parameter("index or table built from another graph".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    let (cuboids, stats) = pool.install(|| materialize(g, idx, table, opts));
    let meta = CubeMeta {
        fingerprint: g.fingerprint(),
        policy: table.policy(),
        strategy: Some(opts.strategy),
        max_level: opts.max_level,
        stats,
    };
    Ok(GraphCube::new(g.catalog().clone(), cuboids, meta))
}
