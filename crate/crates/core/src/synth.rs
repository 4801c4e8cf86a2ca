//! Seeded synthetic graphs with uniformly drawn attributes and an optional
//! planted community: a clique of hub vertices that all carry the rare value
//! [`HUB_VALUE`] in the first dimension.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{MultidimGraph, VertexId};

/// Dimension-0 value reserved for planted hub vertices.
pub const HUB_VALUE: &str = "hub";

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub dim_count: usize,
    pub cardinality: usize,
    pub seed: u64,
    pub hub_fraction: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            vertex_count: 1000,
            edge_count: 5000,
            dim_count: 6,
            cardinality: 10,
            seed: 0,
            hub_fraction: 0.0,
        }
    }
}

impl GenParams {
    /// Number of planted hub vertices.
    pub fn hub_size(&self) -> usize {
        (self.hub_fraction * self.vertex_count as f64).round() as usize
    }

    pub fn max_edges(&self) -> u128 {
        let v = self.vertex_count as u128;
        v * v.saturating_sub(1) / 2
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Parameter(m));
        if self.vertex_count == 0 || self.dim_count == 0 || self.cardinality == 0 {
            return fail("vertices, dims and cardinality must be positive".into());
        }
        if self.edge_count == 0 {
            return fail("edge count must be positive".into());
        }
        if self.edge_count as u128 > self.max_edges() {
            return fail(format!(
                "{} edges exceed the {} possible among {} vertices",
                self.edge_count,
                self.max_edges(),
                self.vertex_count
            ));
        }
        if !(0.0..=1.0).contains(&self.hub_fraction) {
            return fail(format!("hub fraction {} outside [0, 1]", self.hub_fraction));
        }
        let h = self.hub_size() as u128;
        if h * h.saturating_sub(1) / 2 > self.edge_count as u128 {
            return fail(format!(
                "a hub clique of {h} vertices needs more than {} edges",
                self.edge_count
            ));
        }
        Ok(())
    }
}

/// Generates a graph with vertex ids `1..=vertex_count` and dimensions
/// `D1..Dn`. Ordinary values are `v0..v{cardinality-1}`.
pub fn generate_synthetic(p: &GenParams) -> Result<MultidimGraph> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let v = p.vertex_count;

    let mut hubs: Vec<usize> = sample(&mut rng, v, p.hub_size()).into_vec();
    hubs.sort_unstable();
    let hub_set: HashSet<usize> = hubs.iter().copied().collect();

    let dims: Vec<String> = (1..=p.dim_count).map(|j| format!("D{j}")).collect();
    let vertices: Vec<(VertexId, Vec<String>)> = (0..v)
        .map(|i| {
            let attrs = (0..p.dim_count)
                .map(|j| {
                    let draw = rng.gen_range(0..p.cardinality);
                    if j == 0 && hub_set.contains(&i) {
                        HUB_VALUE.to_owned()
                    } else {
                        format!("v{draw}")
                    }
                })
                .collect();
            (i as VertexId + 1, attrs)
        })
        .collect();

    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(p.edge_count);
    let mut ordered = Vec::with_capacity(p.edge_count);
    for (k, &a) in hubs.iter().enumerate() {
        for &b in &hubs[k + 1..] {
            edges.insert((a, b));
            ordered.push((a, b));
        }
    }

    let remaining = p.edge_count - ordered.len();
    if remaining as u128 * 2 > p.max_edges() {
        // Dense request: enumerate the free pairs and draw without replacement.
        let free: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
            .filter(|e| !edges.contains(e))
            .collect();
        for i in sample(&mut rng, free.len(), remaining) {
            ordered.push(free[i]);
        }
    } else {
        while ordered.len() < p.edge_count {
            let a = rng.gen_range(0..v);
            let b = rng.gen_range(0..v);
            if a == b {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if edges.insert(e) {
                ordered.push(e);
            }
        }
    }

    let (g, _) = MultidimGraph::new(
        dims,
        vertices,
        ordered
            .into_iter()
            .map(|(a, b)| (a as VertexId + 1, b as VertexId + 1)),
    )?;
    Ok(g)
}
