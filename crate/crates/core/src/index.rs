//! Per-dimension inverted lists: for every dimensional value, the ascending
//! positions of the vertices that carry it.

use crate::graph::{MultidimGraph, ValueCode, VertexId, VertexIdx};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertedIndex {
    /// `postings[dim][code]`, never empty because every interned value occurs.
    postings: Vec<Vec<Vec<VertexIdx>>>,
}

impl InvertedIndex {
    pub fn build(g: &MultidimGraph) -> Self {
        let cat = g.catalog();
        let mut postings: Vec<Vec<Vec<VertexIdx>>> = (0..g.dim_count())
            .map(|d| vec![Vec::new(); cat.values(d).len()])
            .collect();
        // Ascending scan keeps every list sorted without a final sort.
        for v in 0..g.vertex_count() as VertexIdx {
            for (d, &code) in g.attrs(v).iter().enumerate() {
                postings[d][code as usize].push(v);
            }
        }
        InvertedIndex { postings }
    }

    pub fn dim_count(&self) -> usize {
        self.postings.len()
    }

    /// Number of distinct values of `dim`.
    pub fn cardinality(&self, dim: usize) -> usize {
        self.postings[dim].len()
    }

    pub fn postings(&self, dim: usize, code: ValueCode) -> &[VertexIdx] {
        &self.postings[dim][code as usize]
    }

    /// `(code, list)` pairs of one dimension in value order.
    pub fn entries(&self, dim: usize) -> impl Iterator<Item = (ValueCode, &[VertexIdx])> {
        self.postings[dim]
            .iter()
            .enumerate()
            .map(|(c, l)| (c as ValueCode, l.as_slice()))
    }

    /// Looks up a value by name and returns the external ids carrying it.
    pub fn lookup(&self, g: &MultidimGraph, dim: usize, value: &str) -> Option<Vec<VertexId>> {
        let cat = g.catalog();
        let code = cat.code(dim, value)?;
        Some(self.postings(dim, code).iter().map(|&v| cat.vertex_id(v)).collect())
    }
}

pub fn build_inverted_index(g: &MultidimGraph) -> InvertedIndex {
    InvertedIndex::build(g)
}
