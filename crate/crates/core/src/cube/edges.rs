use std::collections::HashMap;

use super::AggregateNetwork;
use crate::graph::MultidimGraph;

const UNASSIGNED: u32 = u32::MAX;

/// Counts every undirected edge once: inside a node it adds to that node's
/// self weight, between two nodes to their cross weight. Edges touching a
/// vertex outside every node (pruned) are not counted.
pub fn aggregate_edges(g: &MultidimGraph, mut net: AggregateNetwork) -> AggregateNetwork {
    let mut cell_of = vec![UNASSIGNED; g.vertex_count()];
    for (i, node) in net.nodes.iter().enumerate() {
        for &v in &node.members {
            cell_of[v as usize] = i as u32;
        }
    }

    let mut self_edges = vec![0u64; net.nodes.len()];
    let mut cross: HashMap<(u32, u32), u64> = HashMap::new();
    for &(a, b) in g.edges() {
        let (ca, cb) = (cell_of[a as usize], cell_of[b as usize]);
        if ca == UNASSIGNED || cb == UNASSIGNED {
            continue;
        }
        if ca == cb {
            self_edges[ca as usize] += 1;
        } else {
            *cross.entry((ca.min(cb), ca.max(cb))).or_insert(0) += 1;
        }
    }
    net.self_edges = self_edges;
    net.cross_edges = cross.into_iter().collect();
    net
}
