//! Graph cube materialization.
//!
//! A cuboid is identified by its signature, the strictly ascending list of
//! dimension indices it groups by. Its aggregate network has one node per
//! occurring combination of values, with intra-group (self) and inter-group
//! (cross) edge counts.

mod edges;
mod engine;
mod store;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Catalog, ValueCode, VertexIdx};
use crate::measures::PrunePolicy;

pub use edges::aggregate_edges;
pub use engine::{compute_cube, level1_nodes, BuildStats, CubeOptions, PassStats};
pub use store::{
    cuboid_file_path, read_cube_meta, read_cuboid, render_meta, write_cube, CubeDirMeta, CuboidFile,
    CUBOID_EXT, META_FILE,
};

/// Signatures are valid when non-empty and strictly ascending, which also
/// rules out duplicates: `[0, 1, 2]` is valid, `[0, 2, 1]` is not.
pub fn lws_valid(dims: &[usize]) -> bool {
    !dims.is_empty() && dims.windows(2).all(|w| w[0] < w[1])
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggregateNode {
    pub dims: Vec<usize>,
    /// Value codes aligned with `dims`.
    pub values: Vec<ValueCode>,
    /// Ascending vertex positions.
    pub members: Vec<VertexIdx>,
}

impl AggregateNode {
    pub fn level(&self) -> usize {
        self.dims.len()
    }

    /// Values joined with `|` in signature order.
    pub fn label(&self, cat: &Catalog) -> String {
        label_of(cat, &self.dims, &self.values)
    }
}

pub(crate) fn label_of(cat: &Catalog, dims: &[usize], values: &[ValueCode]) -> String {
    let parts: Vec<&str> = dims.iter().zip(values).map(|(&d, &c)| cat.value(d, c)).collect();
    parts.join("|")
}

pub(crate) fn signature_name(cat: &Catalog, dims: &[usize]) -> String {
    let names: Vec<&str> = dims.iter().map(|&d| cat.dims()[d].as_str()).collect();
    names.join("_")
}

/// Linear merge of two ascending lists into `out` (cleared first).
pub fn intersect_into(a: &[VertexIdx], b: &[VertexIdx], out: &mut Vec<VertexIdx>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (x, y) = (a[i], b[j]);
        if x < y {
            i += 1;
        } else if y < x {
            j += 1;
        } else {
            out.push(x);
            i += 1;
            j += 1;
        }
    }
}

/// Unions the labels of two cells. `None` for identical signatures or when a
/// shared dimension carries different values.
pub fn merge_labels(
    a_dims: &[usize],
    a_values: &[ValueCode],
    b_dims: &[usize],
    b_values: &[ValueCode],
) -> Option<(Vec<usize>, Vec<ValueCode>)> {
    if a_dims == b_dims {
        return None;
    }
    let mut dims = Vec::with_capacity(a_dims.len() + b_dims.len());
    let mut values = Vec::with_capacity(dims.capacity());
    let (mut i, mut j) = (0, 0);
    while i < a_dims.len() || j < b_dims.len() {
        let take_a = j == b_dims.len() || (i < a_dims.len() && a_dims[i] <= b_dims[j]);
        if take_a {
            if j < b_dims.len() && a_dims[i] == b_dims[j] {
                if a_values[i] != b_values[j] {
                    return None;
                }
                j += 1;
            }
            dims.push(a_dims[i]);
            values.push(a_values[i]);
            i += 1;
        } else {
            dims.push(b_dims[j]);
            values.push(b_values[j]);
            j += 1;
        }
    }
    Some((dims, values))
}

/// Intersects two cells from the same build. Yields nothing for equal
/// signatures, conflicting shared values, or an empty intersection.
pub fn combine(a: &AggregateNode, b: &AggregateNode) -> Option<AggregateNode> {
    let (dims, values) = merge_labels(&a.dims, &a.values, &b.dims, &b.values)?;
    if !lws_valid(&dims) {
        return None;
    }
    let mut members = Vec::new();
    intersect_into(&a.members, &b.members, &mut members);
    if members.is_empty() {
        return None;
    }
    Some(AggregateNode {
        dims,
        values,
        members,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateNetwork {
    pub signature: Vec<usize>,
    /// Sorted by value codes.
    pub nodes: Vec<AggregateNode>,
    /// Intra-node edge count, aligned with `nodes`; zero allowed.
    pub self_edges: Vec<u64>,
    /// Inter-node edge counts keyed by `(i, j)` node indices with `i < j`;
    /// zero weights are never stored.
    pub cross_edges: BTreeMap<(u32, u32), u64>,
}

impl AggregateNetwork {
    pub fn new(signature: Vec<usize>, mut nodes: Vec<AggregateNode>) -> Self {
        nodes.sort_unstable_by(|a, b| a.values.cmp(&b.values));
        let self_edges = vec![0; nodes.len()];
        AggregateNetwork {
            signature,
            nodes,
            self_edges,
            cross_edges: BTreeMap::new(),
        }
    }

    pub fn node_index(&self, values: &[ValueCode]) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.values.as_slice().cmp(values)).ok()
    }

    /// Resolves a `v1|v2|...` label against the catalog.
    pub fn find(&self, cat: &Catalog, label: &str) -> Option<usize> {
        let parts: Vec<&str> = label.split('|').collect();
        if parts.len() != self.signature.len() {
            return None;
        }
        let codes: Option<Vec<ValueCode>> = self
            .signature
            .iter()
            .zip(&parts)
            .map(|(&d, v)| cat.code(d, v))
            .collect();
        self.node_index(&codes?)
    }

    pub fn self_weight(&self, node: usize) -> u64 {
        self.self_edges[node]
    }

    pub fn cross_weight(&self, a: usize, b: usize) -> u64 {
        let key = (a.min(b) as u32, a.max(b) as u32);
        self.cross_edges.get(&key).copied().unwrap_or(0)
    }

    pub fn total_edge_weight(&self) -> u64 {
        self.self_edges.iter().sum::<u64>() + self.cross_edges.values().sum::<u64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    LevelByLevel,
    StepsUp,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::LevelByLevel => "level-by-level",
            Strategy::StepsUp => "steps-up",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "level" | "level-by-level" => Ok(Strategy::LevelByLevel),
            "steps" | "steps-up" => Ok(Strategy::StepsUp),
            other => Err(Error::Parameter(format!("unknown strategy {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeMeta {
    pub fingerprint: String,
    pub policy: PrunePolicy,
    /// `None` for reference cubes built without a traversal strategy.
    pub strategy: Option<Strategy>,
    pub max_level: usize,
    pub stats: BuildStats,
}

/// Materialized cuboids keyed by signature. Equality ignores build metadata.
#[derive(Debug, Clone)]
pub struct GraphCube {
    catalog: Arc<Catalog>,
    cuboids: BTreeMap<Vec<usize>, AggregateNetwork>,
    meta: CubeMeta,
}

impl PartialEq for GraphCube {
    fn eq(&self, other: &Self) -> bool {
        self.meta.fingerprint == other.meta.fingerprint && self.cuboids == other.cuboids
    }
}

impl GraphCube {
    pub fn new(
        catalog: Arc<Catalog>,
        cuboids: BTreeMap<Vec<usize>, AggregateNetwork>,
        meta: CubeMeta,
    ) -> Self {
        GraphCube {
            catalog,
            cuboids,
            meta,
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn meta(&self) -> &CubeMeta {
        &self.meta
    }

    pub fn cuboids(&self) -> &BTreeMap<Vec<usize>, AggregateNetwork> {
        &self.cuboids
    }

    pub fn cuboids_mut(&mut self) -> &mut BTreeMap<Vec<usize>, AggregateNetwork> {
        &mut self.cuboids
    }

    pub fn cuboid(&self, signature: &[usize]) -> Option<&AggregateNetwork> {
        self.cuboids.get(signature)
    }

    pub fn node_count(&self) -> usize {
        self.cuboids.values().map(|c| c.nodes.len()).sum()
    }

    /// Looks up a cuboid by dimension names in any order.
    pub fn query(&self, dims: &[&str]) -> Result<&AggregateNetwork> {
        let sig = resolve_signature(self.catalog.dims(), dims)?;
        self.cuboids
            .get(&sig)
            .ok_or_else(|| Error::NotMaterialized(signature_name(&self.catalog, &sig)))
    }
}

/// Maps names to indices and puts them in canonical order.
pub(crate) fn resolve_signature<S: AsRef<str>>(all: &[String], names: &[S]) -> Result<Vec<usize>> {
    let mut sig = names
        .iter()
        .map(|n| {
            let n = n.as_ref();
            all.iter()
                .position(|d| d == n)
                .ok_or_else(|| Error::UnknownDimension(n.to_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    sig.sort_unstable();
    sig.dedup();
    if sig.is_empty() {
        return Err(Error::Parameter("query needs at least one dimension".into()));
    }
    Ok(sig)
}

pub fn query_cuboid<'a>(cube: &'a GraphCube, dims: &[&str]) -> Result<&'a AggregateNetwork> {
    cube.query(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(dims: &[usize], values: &[u32], members: &[u32]) -> AggregateNode {
        AggregateNode {
            dims: dims.to_vec(),
            values: values.to_vec(),
            members: members.to_vec(),
        }
    }

    #[test]
    fn lws_examples() {
        assert!(lws_valid(&[0, 1, 2]));
        assert!(!lws_valid(&[0, 2, 1]));
        assert!(lws_valid(&[0]));
        assert!(!lws_valid(&[]));
        assert!(!lws_valid(&[1, 1]));
    }

    #[test]
    fn combine_intersects_members() {
        let m = node(&[0], &[1], &[0, 2, 4]);
        let ny = node(&[1], &[1], &[0, 1, 2]);
        let c = combine(&m, &ny).unwrap();
        assert_eq!(c, node(&[0, 1], &[1, 1], &[0, 2]));
        assert_eq!(combine(&ny, &m).unwrap(), c);
    }

    #[test]
    fn combine_disjoint_signatures_steps_up_two_levels() {
        let ab = node(&[0, 1], &[0, 0], &[1, 2, 3]);
        let cd = node(&[2, 3], &[1, 0], &[2, 3, 9]);
        let abcd = combine(&ab, &cd).unwrap();
        assert_eq!(abcd.dims, vec![0, 1, 2, 3]);
        assert_eq!(abcd.values, vec![0, 0, 1, 0]);
        assert_eq!(abcd.level(), 4);
    }

    #[test]
    fn combine_bridges_shared_dimension() {
        let ab = node(&[0, 1], &[0, 5], &[1, 2, 3]);
        let bc = node(&[1, 2], &[5, 7], &[2, 3, 4]);
        assert_eq!(combine(&ab, &bc).unwrap(), node(&[0, 1, 2], &[0, 5, 7], &[2, 3]));
        let bc_other = node(&[1, 2], &[6, 7], &[2, 3, 4]);
        assert_eq!(combine(&ab, &bc_other), None);
    }

    #[test]
    fn combine_rejects_same_signature_and_empty() {
        let a = node(&[0], &[0], &[1]);
        let b = node(&[0], &[1], &[2]);
        assert_eq!(combine(&a, &b), None);
        let c = node(&[1], &[0], &[3]);
        assert_eq!(combine(&a, &c), None);
    }

    #[test]
    fn strategy_names() {
        assert_eq!("steps".parse::<Strategy>().unwrap(), Strategy::StepsUp);
        assert_eq!("level".parse::<Strategy>().unwrap(), Strategy::LevelByLevel);
        assert!("fast".parse::<Strategy>().is_err());
    }
}
