//! Brute-force reference cube.
//!
//! Everything here works from the raw vertex table and edge list: cells come
//! from a direct group-by over vertex attributes and edges are classified by
//! the cells of their endpoints. Nothing touches the inverted index or the
//! engine's combine step. Significance is re-derived in exact rational
//! arithmetic from neighbor sets built here.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cube::{lws_valid, AggregateNetwork, AggregateNode, BuildStats, CubeMeta, GraphCube};
use crate::error::{Error, Result};
use crate::graph::{MultidimGraph, ValueCode, VertexIdx};
use crate::measures::PrunePolicy;

fn group_cells(
    g: &MultidimGraph,
    dims: &[usize],
    keep: &dyn Fn(usize, ValueCode) -> bool,
) -> BTreeMap<Vec<ValueCode>, Vec<VertexIdx>> {
    let mut cells: BTreeMap<Vec<ValueCode>, Vec<VertexIdx>> = BTreeMap::new();
    for v in 0..g.vertex_count() as VertexIdx {
        let key: Vec<ValueCode> = dims.iter().map(|&d| g.attr(v, d)).collect();
        if dims.iter().zip(&key).all(|(&d, &c)| keep(d, c)) {
            cells.entry(key).or_default().push(v);
        }
    }
    cells
}

fn oracle_network(
    g: &MultidimGraph,
    dims: &[usize],
    keep: &dyn Fn(usize, ValueCode) -> bool,
) -> AggregateNetwork {
    let cells = group_cells(g, dims, keep);
    let position: BTreeMap<&Vec<ValueCode>, usize> =
        cells.keys().enumerate().map(|(i, k)| (k, i)).collect();
    let cell_of = |v: VertexIdx| -> Option<usize> {
        let key: Vec<ValueCode> = dims.iter().map(|&d| g.attr(v, d)).collect();
        position.get(&key).copied()
    };

    let mut self_edges = vec![0u64; cells.len()];
    let mut cross_edges: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for &(a, b) in g.edges() {
        match (cell_of(a), cell_of(b)) {
            (Some(x), Some(y)) if x == y => self_edges[x] += 1,
            (Some(x), Some(y)) => {
                *cross_edges
                    .entry((x.min(y) as u32, x.max(y) as u32))
                    .or_insert(0) += 1
            }
            _ => {}
        }
    }

    AggregateNetwork {
        signature: dims.to_vec(),
        nodes: cells
            .into_iter()
            .map(|(values, members)| AggregateNode {
                dims: dims.to_vec(),
                values,
                members,
            })
            .collect(),
        self_edges,
        cross_edges,
    }
}

/// Exact aggregate network for one signature, without pruning.
pub fn oracle_cuboid(g: &MultidimGraph, dims: &[usize]) -> Result<AggregateNetwork> {
    if !lws_valid(dims) || dims.iter().any(|&d| d >= g.dim_count()) {
        return Err(Error::Parameter(format!("invalid signature {dims:?}")));
    }
    Ok(oracle_network(g, dims, &|_, _| true))
}

/// Every signature of size `1..=max_level`, without pruning.
pub fn oracle_cube(g: &MultidimGraph, max_level: usize) -> Result<GraphCube> {
    oracle_cube_filtered(g, max_level, PrunePolicy::None, &|_, _| true)
}

/// Oracle cube restricted to cells whose every value passes `keep`, which is
/// what pruning level-1 cells and replaying the lattice must produce.
pub fn oracle_cube_filtered(
    g: &MultidimGraph,
    max_level: usize,
    policy: PrunePolicy,
    keep: &dyn Fn(usize, ValueCode) -> bool,
) -> Result<GraphCube> {
    let n = g.dim_count();
    if max_level == 0 || max_level > n {
        return Err(Error::Parameter(format!("max level {max_level} outside 1..={n}")));
    }
    let mut cuboids = BTreeMap::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() as usize > max_level {
            continue;
        }
        let dims: Vec<usize> = (0..n).filter(|d| mask & (1 << d) != 0).collect();
        let net = oracle_network(g, &dims, keep);
        cuboids.insert(dims, net);
    }
    let meta = CubeMeta {
        fingerprint: g.fingerprint(),
        policy,
        strategy: None,
        max_level,
        stats: BuildStats::default(),
    };
    Ok(GraphCube::new(g.catalog().clone(), cuboids, meta))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub signature: String,
    pub label: String,
    pub detail: String,
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.signature, self.label, self.detail)
    }
}

/// Differences between an expected and an actual cube.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CubeDiff {
    /// In the expected cube only.
    pub missing_nodes: Vec<DiffEntry>,
    /// In the actual cube only.
    pub extra_nodes: Vec<DiffEntry>,
    pub member_mismatches: Vec<DiffEntry>,
    pub weight_mismatches: Vec<DiffEntry>,
}

impl CubeDiff {
    pub fn is_empty(&self) -> bool {
        self.missing_nodes.is_empty()
            && self.extra_nodes.is_empty()
            && self.member_mismatches.is_empty()
            && self.weight_mismatches.is_empty()
    }

    pub fn len(&self) -> usize {
        self.missing_nodes.len()
            + self.extra_nodes.len()
            + self.member_mismatches.len()
            + self.weight_mismatches.len()
    }
}

impl fmt::Display for CubeDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (kind, list) in [
            ("missing", &self.missing_nodes),
            ("extra", &self.extra_nodes),
            ("members", &self.member_mismatches),
            ("weight", &self.weight_mismatches),
        ] {
            for e in list {
                writeln!(f, "{kind} {e}")?;
            }
        }
        Ok(())
    }
}

type LabeledNet = (
    BTreeMap<String, (Vec<VertexIdx>, u64)>,
    BTreeMap<(String, String), u64>,
);

fn labeled(cube: &GraphCube, net: &AggregateNetwork) -> LabeledNet {
    let cat = cube.catalog();
    let labels: Vec<String> = net.nodes.iter().map(|n| n.label(cat)).collect();
    let nodes = labels
        .iter()
        .zip(&net.nodes)
        .zip(&net.self_edges)
        .map(|((l, n), &w)| (l.clone(), (n.members.clone(), w)))
        .collect();
    let cross = net
        .cross_edges
        .iter()
        .map(|(&(i, j), &w)| {
            let (a, b) = (labels[i as usize].clone(), labels[j as usize].clone());
            (if a < b { (a, b) } else { (b, a) }, w)
        })
        .collect();
    (nodes, cross)
}

/// Structural diff of `actual` against `expected`. Both must come from the
/// same graph.
pub fn compare(expected: &GraphCube, actual: &GraphCube) -> Result<CubeDiff> {
    let (fa, fb) = (&expected.meta().fingerprint, &actual.meta().fingerprint);
    if fa != fb {
        return Err(Error::FingerprintMismatch {
            left: fa.clone(),
            right: fb.clone(),
        });
    }
    let cat = expected.catalog();
    let mut diff = CubeDiff::default();
    let sigs: BTreeSet<&Vec<usize>> = expected
        .cuboids()
        .keys()
        .chain(actual.cuboids().keys())
        .collect();
    let empty = (BTreeMap::new(), BTreeMap::new());

    for sig in sigs {
        let names: Vec<&str> = sig.iter().map(|&d| cat.dims()[d].as_str()).collect();
        let signature = names.join("_");
        let entry = |label: &str, detail: String| DiffEntry {
            signature: signature.clone(),
            label: label.to_owned(),
            detail,
        };
        let (ea, eb) = (expected.cuboid(sig), actual.cuboid(sig));
        match (ea, eb) {
            (Some(_), None) => diff.missing_nodes.push(entry("*", "cuboid absent".into())),
            (None, Some(_)) => diff.extra_nodes.push(entry("*", "cuboid unexpected".into())),
            _ => {}
        }
        let (na, ca) = ea.map_or_else(|| empty.clone(), |n| labeled(expected, n));
        let (nb, cb) = eb.map_or_else(|| empty.clone(), |n| labeled(actual, n));

        for (label, (members, w)) in &na {
            match nb.get(label) {
                None => diff.missing_nodes.push(entry(label, format!("{} members", members.len()))),
                Some((m2, w2)) => {
                    if members != m2 {
                        diff.member_mismatches.push(entry(
                            label,
                            format!("{} vs {} members", members.len(), m2.len()),
                        ));
                    }
                    if w != w2 {
                        diff.weight_mismatches.push(entry(label, format!("self {w} vs {w2}")));
                    }
                }
            }
        }
        for (label, (members, _)) in &nb {
            if !na.contains_key(label) {
                diff.extra_nodes.push(entry(label, format!("{} members", members.len())));
            }
        }
        let pairs: BTreeSet<&(String, String)> = ca.keys().chain(cb.keys()).collect();
        for pair in pairs {
            let (x, y) = (ca.get(pair).copied().unwrap_or(0), cb.get(pair).copied().unwrap_or(0));
            if x != y {
                diff.weight_mismatches
                    .push(entry(&format!("{}~{}", pair.0, pair.1), format!("cross {x} vs {y}")));
            }
        }
    }
    Ok(diff)
}

/// Exact significance per `[dim][code]`, thresholds per dimension, and keep
/// flags under the mean rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSignificance {
    pub ss: Vec<Vec<BigRational>>,
    pub support: Vec<Vec<usize>>,
    pub thresholds: Vec<BigRational>,
    pub keep: Vec<Vec<bool>>,
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Per-vertex `(alpha, cc, density)` in exact arithmetic.
pub fn exact_components(g: &MultidimGraph) -> Vec<(BigRational, BigRational, BigRational)> {
    let mut nbrs: Vec<BTreeSet<VertexIdx>> = vec![BTreeSet::new(); g.vertex_count()];
    for &(a, b) in g.edges() {
        nbrs[a as usize].insert(b);
        nbrs[b as usize].insert(a);
    }
    let edge_set: BTreeSet<(VertexIdx, VertexIdx)> = g.edges().iter().copied().collect();
    let linked = |a: VertexIdx, b: VertexIdx| edge_set.contains(&(a.min(b), a.max(b)));
    let n = g.dim_count();

    (0..g.vertex_count())
        .map(|v| {
            let nv: Vec<VertexIdx> = nbrs[v].iter().copied().collect();
            let deg = nv.len();
            if deg == 0 {
                return (BigRational::zero(), BigRational::zero(), BigRational::zero());
            }
            let mut among = 0;
            for (i, &a) in nv.iter().enumerate() {
                for &b in &nv[i + 1..] {
                    if linked(a, b) {
                        among += 1;
                    }
                }
            }
            let cc = if deg < 2 { BigRational::zero() } else { ratio(among, deg * (deg - 1) / 2) };
            let mut closed = nv.clone();
            closed.push(v as VertexIdx);
            let mut induced = 0;
            for (i, &a) in closed.iter().enumerate() {
                for &b in &closed[i + 1..] {
                    if linked(a, b) {
                        induced += 1;
                    }
                }
            }
            let density = ratio(induced, closed.len() * (closed.len() - 1) / 2);
            let mut alpha = BigRational::zero();
            for d in 0..n {
                let distinct: BTreeSet<ValueCode> = nv.iter().map(|&u| g.attr(u, d)).collect();
                alpha += ratio(distinct.len(), deg);
            }
            alpha /= BigRational::from_integer(BigInt::from(n));
            (alpha, cc, density)
        })
        .collect()
}

pub fn exact_significance(g: &MultidimGraph) -> ExactSignificance {
    let comps = exact_components(g);
    let scores: Vec<BigRational> = comps.iter().map(|(a, c, d)| a * c + d).collect();
    let cat = g.catalog();
    let mut out = ExactSignificance {
        ss: Vec::new(),
        support: Vec::new(),
        thresholds: Vec::new(),
        keep: Vec::new(),
    };
    for d in 0..g.dim_count() {
        let card = cat.values(d).len();
        let mut ss = vec![BigRational::zero(); card];
        let mut support = vec![0usize; card];
        for v in 0..g.vertex_count() as VertexIdx {
            let c = g.attr(v, d) as usize;
            ss[c] += &scores[v as usize];
            support[c] += 1;
        }
        let total: BigRational = ss.iter().fold(BigRational::zero(), |acc, x| acc + x);
        let mean = total / BigRational::from_integer(BigInt::from(card));
        out.keep.push(ss.iter().map(|x| x >= &mean).collect());
        out.ss.push(ss);
        out.support.push(support);
        out.thresholds.push(mean);
    }
    out
}
