//! Structural significance of dimensional values.
//!
//! Each vertex gets a score `alpha * cc + density`, where
//!
//! * `alpha` is the neighborhood attribute diversity: for every dimension the
//!   number of distinct values among the neighbors divided by the degree,
//!   averaged over dimensions;
//! * `cc` is the local clustering coefficient;
//! * `density` is the edge density of the subgraph induced on the closed
//!   neighborhood `{v} ∪ N(v)`.
//!
//! The significance of a dimensional value is the sum of the scores of the
//! vertices carrying it. Values whose significance is below the mean of their
//! dimension are pruned.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{MultidimGraph, ValueCode, VertexId, VertexIdx};
use crate::index::InvertedIndex;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VertexScore {
    pub alpha: f64,
    pub cc: f64,
    pub density: f64,
    pub score: f64,
}

impl VertexScore {
    pub fn new(alpha: f64, cc: f64, density: f64) -> Self {
        VertexScore {
            alpha,
            cc,
            density,
            score: alpha * cc + density,
        }
    }
}

/// Number of edges among the neighbors of `v`.
fn neighbor_links(g: &MultidimGraph, v: VertexIdx) -> usize {
    let nbrs = g.adjacent(v);
    let twice: usize = nbrs
        .iter()
        .map(|&u| sorted_overlap(g.adjacent(u), nbrs))
        .sum();
    twice / 2
}

fn sorted_overlap(a: &[VertexIdx], b: &[VertexIdx]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn pairs(k: usize) -> f64 {
    (k * k.saturating_sub(1) / 2) as f64
}

fn cc_from(deg: usize, links: usize) -> f64 {
    if deg < 2 {
        0.0
    } else {
        links as f64 / pairs(deg)
    }
}

fn density_from(deg: usize, links: usize) -> f64 {
    // Induced edges on the closed neighborhood are the star plus the links.
    if deg == 0 {
        0.0
    } else {
        (deg + links) as f64 / pairs(deg + 1)
    }
}

fn alpha_at(g: &MultidimGraph, v: VertexIdx) -> f64 {
    let nbrs = g.adjacent(v);
    if nbrs.is_empty() {
        return 0.0;
    }
    let n = g.dim_count();
    let mut seen = HashSet::with_capacity(nbrs.len());
    let mut total = 0.0;
    for d in 0..n {
        seen.clear();
        seen.extend(nbrs.iter().map(|&u| g.attr(u, d)));
        total += seen.len() as f64 / nbrs.len() as f64;
    }
    total / n as f64
}

fn score_at(g: &MultidimGraph, v: VertexIdx) -> VertexScore {
    let deg = g.degree(v);
    let links = neighbor_links(g, v);
    VertexScore::new(alpha_at(g, v), cc_from(deg, links), density_from(deg, links))
}

pub fn clustering_coefficient(g: &MultidimGraph, v: VertexId) -> Result<f64> {
    let v = g.idx(v)?;
    Ok(cc_from(g.degree(v), neighbor_links(g, v)))
}

pub fn local_density(g: &MultidimGraph, v: VertexId) -> Result<f64> {
    let v = g.idx(v)?;
    Ok(density_from(g.degree(v), neighbor_links(g, v)))
}

pub fn attribute_diversity(g: &MultidimGraph, v: VertexId) -> Result<f64> {
    Ok(alpha_at(g, g.idx(v)?))
}

pub fn vertex_score(g: &MultidimGraph, v: VertexId) -> Result<VertexScore> {
    Ok(score_at(g, g.idx(v)?))
}

/// Scores of all vertices, indexed by vertex position.
pub fn vertex_scores(g: &MultidimGraph) -> Vec<VertexScore> {
    (0..g.vertex_count() as VertexIdx)
        .into_par_iter()
        .map(|v| score_at(g, v))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrunePolicy {
    /// Keep every value.
    #[default]
    None,
    /// Keep values whose significance is at least the mean of their dimension.
    SsMean,
    /// Iceberg baseline: keep values carried by at least `min_support` vertices.
    Support { min_support: usize },
}

impl PrunePolicy {
    pub fn support(min_support: usize) -> Result<Self> {
        if min_support == 0 {
            return Err(Error::Parameter("min support must be at least 1".into()));
        }
        Ok(PrunePolicy::Support { min_support })
    }

    /// Parses `none`, `ss-mean` or `support` (which needs `min_support`).
    pub fn parse(kind: &str, min_support: Option<usize>) -> Result<Self> {
        match kind {
            "none" => Ok(PrunePolicy::None),
            "ss-mean" => Ok(PrunePolicy::SsMean),
            "support" => PrunePolicy::support(min_support.ok_or_else(|| {
                Error::Parameter("policy support requires --min-support".into())
            })?),
            other => Err(Error::Parameter(format!("unknown policy {other}"))),
        }
    }
}

impl fmt::Display for PrunePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrunePolicy::None => f.write_str("none"),
            PrunePolicy::SsMean => f.write_str("ss-mean"),
            PrunePolicy::Support { min_support } => write!(f, "support:{min_support}"),
        }
    }
}

impl FromStr for PrunePolicy {
    type Err = Error;

    /// Inverse of `Display`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("support", n)) => PrunePolicy::support(
                n.parse()
                    .map_err(|_| Error::Parameter(format!("bad min support {n:?}")))?,
            ),
            _ => PrunePolicy::parse(s, None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceRow {
    pub ss: f64,
    pub support: usize,
    pub keep: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceTable {
    /// `rows[dim][code]`.
    rows: Vec<Vec<SignificanceRow>>,
    thresholds: Vec<f64>,
    policy: PrunePolicy,
}

impl SignificanceTable {
    pub fn dim_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, dim: usize, code: ValueCode) -> &SignificanceRow {
        &self.rows[dim][code as usize]
    }

    pub fn rows(&self, dim: usize) -> &[SignificanceRow] {
        &self.rows[dim]
    }

    /// Per-dimension mean significance.
    pub fn threshold(&self, dim: usize) -> f64 {
        self.thresholds[dim]
    }

    pub fn policy(&self) -> PrunePolicy {
        self.policy
    }

    pub fn keep(&self, dim: usize, code: ValueCode) -> bool {
        self.rows[dim][code as usize].keep
    }

    pub fn lookup(&self, g: &MultidimGraph, dim: &str, value: &str) -> Option<&SignificanceRow> {
        let cat = g.catalog();
        let d = cat.dim_index(dim)?;
        Some(self.row(d, cat.code(d, value)?))
    }

    /// Recomputes keep flags; significance and support are untouched.
    pub fn apply_policy(mut self, policy: PrunePolicy) -> Self {
        for (d, rows) in self.rows.iter_mut().enumerate() {
            let threshold = self.thresholds[d];
            for r in rows {
                r.keep = match policy {
                    PrunePolicy::None => true,
                    PrunePolicy::SsMean => at_least_mean(r.ss, threshold),
                    PrunePolicy::Support { min_support } => r.support >= min_support,
                };
            }
        }
        self.policy = policy;
        self
    }

    /// Writes `dimension,value,ss,support,keep`, rows in (dimension, value) order.
    pub fn write_csv<W: Write>(&self, g: &MultidimGraph, mut out: W) -> std::io::Result<()> {
        let cat = g.catalog();
        writeln!(out, "dimension,value,ss,support,keep")?;
        for (d, rows) in self.rows.iter().enumerate() {
            for (code, r) in rows.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    cat.dims()[d],
                    cat.value(d, code as ValueCode),
                    fmt_sig12(r.ss),
                    r.support,
                    r.keep
                )?;
            }
        }
        Ok(())
    }

    pub fn to_csv(&self, g: &MultidimGraph) -> String {
        let mut buf = Vec::new();
        self.write_csv(g, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Builds the table with keep flags under [`PrunePolicy::SsMean`].
/// Relative slack for `ss >= mean`. A summed mean can round above values
/// that equal it exactly (three scores of 0.1 average to 0.10000000000000002),
/// which would prune every value of a uniform dimension.
const MEAN_SLACK: f64 = 1e-12;

fn at_least_mean(ss: f64, mean: f64) -> bool {
    ss >= mean - mean.abs() * MEAN_SLACK
}

pub fn significance_table(g: &MultidimGraph, idx: &InvertedIndex) -> SignificanceTable {
    significance_table_from_scores(idx, &vertex_scores(g))
}

pub fn significance_table_from_scores(idx: &InvertedIndex, scores: &[VertexScore]) -> SignificanceTable {
    let mut rows = Vec::with_capacity(idx.dim_count());
    let mut thresholds = Vec::with_capacity(idx.dim_count());
    for d in 0..idx.dim_count() {
        let dim_rows: Vec<SignificanceRow> = idx
            .entries(d)
            .map(|(_, list)| SignificanceRow {
                ss: list.iter().map(|&v| scores[v as usize].score).sum(),
                support: list.len(),
                keep: true,
            })
            .collect();
        let mean = dim_rows.iter().map(|r| r.ss).sum::<f64>() / dim_rows.len() as f64;
        rows.push(dim_rows);
        thresholds.push(mean);
    }
    SignificanceTable {
        rows,
        thresholds,
        policy: PrunePolicy::None,
    }
    .apply_policy(PrunePolicy::SsMean)
}

pub fn apply_policy(t: SignificanceTable, p: PrunePolicy) -> SignificanceTable {
    t.apply_policy(p)
}

/// Sum of member degrees per value, `[dim][code]`.
pub fn degree_baseline(g: &MultidimGraph, idx: &InvertedIndex) -> Vec<Vec<f64>> {
    (0..idx.dim_count())
        .map(|d| {
            idx.entries(d)
                .map(|(_, list)| list.iter().map(|&v| g.degree(v) as f64).sum())
                .collect()
        })
        .collect()
}

/// Renders like C's `%.12g`.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_owned()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}
