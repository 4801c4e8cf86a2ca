//! Undirected, simple, vertex-attributed graphs.
//!
//! Every vertex carries exactly one value per dimension. Values are interned
//! per dimension into a dictionary sorted by string, so comparing value codes
//! of one dimension agrees with comparing the strings themselves. Vertices are
//! stored densely in ascending id order; the dense position of a vertex is its
//! [`VertexIdx`], and all internal lists (adjacency, postings, cube members)
//! are in terms of positions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// External vertex id as it appears in input files.
pub type VertexId = u64;
/// Dense position of a vertex inside a [`MultidimGraph`].
pub type VertexIdx = u32;
/// Interned dimensional value, unique within one dimension.
pub type ValueCode = u32;

/// Names shared by a graph and everything derived from it: dimension names,
/// per-dimension value dictionaries, and the external vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    dims: Vec<String>,
    values: Vec<Vec<String>>,
    ids: Vec<VertexId>,
}

impl Catalog {
    pub fn dims(&self) -> &[String] {
        &self.dims
    }

    pub fn dim_count(&self) -> usize {
        self.dims.len()
    }

    pub fn dim_index(&self, name: &str) -> Option<usize> {
        self.dims.iter().position(|d| d == name)
    }

    /// Sorted distinct values of dimension `dim`.
    pub fn values(&self, dim: usize) -> &[String] {
        &self.values[dim]
    }

    pub fn value(&self, dim: usize, code: ValueCode) -> &str {
        &self.values[dim][code as usize]
    }

    pub fn code(&self, dim: usize, value: &str) -> Option<ValueCode> {
        self.values[dim]
            .binary_search_by(|v| v.as_str().cmp(value))
            .ok()
            .map(|c| c as ValueCode)
    }

    pub fn vertex_id(&self, idx: VertexIdx) -> VertexId {
        self.ids[idx as usize]
    }

    pub fn vertex_idx(&self, id: VertexId) -> Option<VertexIdx> {
        self.ids.binary_search(&id).ok().map(|i| i as VertexIdx)
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }
}

/// Counters for input rows that were accepted but altered during loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub self_loops_dropped: usize,
    pub duplicate_edges_collapsed: usize,
}

#[derive(Debug, Clone)]
pub struct MultidimGraph {
    catalog: Arc<Catalog>,
    /// Row-major `vertex_count × dim_count` value codes.
    attrs: Vec<ValueCode>,
    adjacency: Vec<Vec<VertexIdx>>,
    /// Each undirected edge once, as `(lo, hi)` positions, sorted.
    edges: Vec<(VertexIdx, VertexIdx)>,
}

fn check_name(kind: &str, name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::Load(format!("empty {kind}")));
    }
    if let Some(c) = name.chars().find(|c| matches!(c, ',' | '|' | '\t' | '\n' | '\r' | '/' | '\\')) {
        return Err(Error::Load(format!("{kind} {name:?} contains reserved character {c:?}")));
    }
    Ok(())
}

/// Dimension names also exclude `_`, which joins them in cuboid file names.
fn check_dim_name(name: &str) -> Result<()> {
    check_name("dimension name", name)?;
    if name.contains('_') {
        return Err(Error::Load(format!("dimension name {name:?} contains reserved character '_'")));
    }
    Ok(())
}

impl MultidimGraph {
    /// Builds and validates a graph. Self-loops are dropped and duplicate
    /// edges (in either orientation) collapse to one; both are counted in the
    /// returned report.
    pub fn new(
        dims: Vec<String>,
        vertices: Vec<(VertexId, Vec<String>)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<(Self, LoadReport)> {
        if dims.is_empty() {
            return Err(Error::Load("graph needs at least one dimension".into()));
        }
        let mut seen_dims = BTreeSet::new();
        for d in &dims {
            check_dim_name(d)?;
            if !seen_dims.insert(d.as_str()) {
                return Err(Error::Load(format!("duplicate dimension {d}")));
            }
        }
        let n = dims.len();

        let mut rows: BTreeMap<VertexId, Vec<String>> = BTreeMap::new();
        for (id, attrs) in vertices {
            if attrs.len() != n {
                return Err(Error::Load(format!(
                    "row {id}: expected {n} attributes, got {}",
                    attrs.len()
                )));
            }
            for a in &attrs {
                check_name("attribute value", a).map_err(|e| Error::Load(format!("row {id}: {e}")))?;
            }
            if rows.insert(id, attrs).is_some() {
                return Err(Error::Load(format!("row {id}: duplicate vertex id")));
            }
        }

        let ids: Vec<VertexId> = rows.keys().copied().collect();
        let mut values: Vec<Vec<String>> = (0..n)
            .map(|j| {
                let set: BTreeSet<&str> = rows.values().map(|r| r[j].as_str()).collect();
                set.into_iter().map(str::to_owned).collect()
            })
            .collect();
        values.iter_mut().for_each(|v| v.shrink_to_fit());
        let catalog = Catalog { dims, values, ids };

        let mut attrs = Vec::with_capacity(rows.len() * n);
        for row in rows.values() {
            for (j, v) in row.iter().enumerate() {
                attrs.push(catalog.code(j, v).expect("value interned above"));
            }
        }

        let mut report = LoadReport::default();
        let mut edge_set = BTreeSet::new();
        for (src, dst) in edges {
            let lookup = |x: VertexId| {
                catalog
                    .vertex_idx(x)
                    .ok_or_else(|| Error::Load(format!("edge {src},{dst}: unknown vertex {x}")))
            };
            let (a, b) = (lookup(src)?, lookup(dst)?);
            if a == b {
                report.self_loops_dropped += 1;
                continue;
            }
            if !edge_set.insert((a.min(b), a.max(b))) {
                report.duplicate_edges_collapsed += 1;
            }
        }
        let edges: Vec<_> = edge_set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); catalog.ids.len()];
        for &(a, b) in &edges {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        Ok((
            MultidimGraph {
                catalog: Arc::new(catalog),
                attrs,
                adjacency,
                edges,
            },
            report,
        ))
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn dim_count(&self) -> usize {
        self.catalog.dim_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexIdx, VertexIdx)] {
        &self.edges
    }

    /// Value code of vertex `v` in dimension `dim`.
    #[inline]
    pub fn attr(&self, v: VertexIdx, dim: usize) -> ValueCode {
        self.attrs[v as usize * self.dim_count() + dim]
    }

    pub fn attrs(&self, v: VertexIdx) -> &[ValueCode] {
        let n = self.dim_count();
        &self.attrs[v as usize * n..(v as usize + 1) * n]
    }

    /// Sorted open neighborhood of a vertex position.
    #[inline]
    pub fn adjacent(&self, v: VertexIdx) -> &[VertexIdx] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: VertexIdx) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn idx(&self, id: VertexId) -> Result<VertexIdx> {
        self.catalog.vertex_idx(id).ok_or(Error::UnknownVertex(id))
    }

    /// Open neighborhood of vertex `id`, as external ids.
    pub fn neighbors(&self, id: VertexId) -> Result<BTreeSet<VertexId>> {
        let v = self.idx(id)?;
        Ok(self.adjacent(v).iter().map(|&u| self.catalog.vertex_id(u)).collect())
    }

    pub fn has_edge(&self, a: VertexIdx, b: VertexIdx) -> bool {
        self.adjacent(a).binary_search(&b).is_ok()
    }

    /// Vertex file contents: header, then one row per vertex in id order.
    pub fn vertex_csv(&self) -> String {
        let mut out = String::from("id");
        for d in self.catalog.dims() {
            out.push(',');
            out.push_str(d);
        }
        out.push('\n');
        for v in 0..self.vertex_count() as VertexIdx {
            let _ = write!(out, "{}", self.catalog.vertex_id(v));
            for (j, &c) in self.attrs(v).iter().enumerate() {
                out.push(',');
                out.push_str(self.catalog.value(j, c));
            }
            out.push('\n');
        }
        out
    }

    /// Edge file contents: `src,dst` with `src < dst`, sorted.
    pub fn edge_csv(&self) -> String {
        let mut pairs: Vec<(VertexId, VertexId)> = self
            .edges
            .iter()
            .map(|&(a, b)| (self.catalog.vertex_id(a), self.catalog.vertex_id(b)))
            .collect();
        pairs.sort_unstable();
        let mut out = String::with_capacity(pairs.len() * 12);
        for (a, b) in pairs {
            let _ = writeln!(out, "{a},{b}");
        }
        out
    }

    /// Hex digest of the canonical vertex and edge files.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.vertex_csv().as_bytes());
        h.update([0u8]);
        h.update(self.edge_csv().as_bytes());
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn parse_id(s: &str, what: impl FnOnce() -> String) -> Result<VertexId> {
    s.trim()
        .parse()
        .map_err(|_| Error::Load(format!("{}: invalid vertex id {:?}", what(), s.trim())))
}

/// Parses the vertex and edge file formats from in-memory text.
pub fn parse_graph(vertex_text: &str, edge_text: &str) -> Result<(MultidimGraph, LoadReport)> {
    let mut lines = data_lines(vertex_text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Load("vertex file is empty".into()))?;
    let mut cols = header.split(',');
    if cols.next().map(str::trim) != Some("id") {
        return Err(Error::Load("vertex file header must start with `id`".into()));
    }
    let dims: Vec<String> = cols.map(|c| c.trim().to_owned()).collect();

    let mut vertices = Vec::new();
    for (line, row) in lines {
        let mut fields = row.split(',');
        let id = parse_id(fields.next().unwrap_or(""), || format!("line {line}"))?;
        let attrs: Vec<String> = fields.map(|f| f.trim().to_owned()).collect();
        vertices.push((id, attrs));
    }

    let mut edges = Vec::new();
    for (line, row) in data_lines(edge_text) {
        let parts: Vec<&str> = row.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Load(format!(
                "edge line {line}: expected `src,dst`, got {row:?}"
            )));
        }
        let src = parse_id(parts[0], || format!("edge line {line}"))?;
        let dst = parse_id(parts[1], || format!("edge line {line}"))?;
        edges.push((src, dst));
    }
    MultidimGraph::new(dims, vertices, edges)
}

pub fn load_graph(vertex_file: &Path, edge_file: &Path) -> Result<(MultidimGraph, LoadReport)> {
    let vertices = read(vertex_file)?;
    let edges = read(edge_file)?;
    parse_graph(&vertices, &edges)
}

pub fn write_graph(g: &MultidimGraph, vertex_file: &Path, edge_file: &Path) -> Result<()> {
    fs::write(vertex_file, g.vertex_csv())
        .map_err(|e| Error::io(format!("writing {}", vertex_file.display()), e))?;
    fs::write(edge_file, g.edge_csv())
        .map_err(|e| Error::io(format!("writing {}", edge_file.display()), e))
}
