#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sigcube::graph::parse_graph;
use sigcube::{
    build_inverted_index, compute_cube, generate_synthetic, significance_table, CubeOptions,
    GenParams, GraphCube, MultidimGraph, PrunePolicy, Strategy,
};

pub const G0_VERTICES: &str =
    "id,Gender,City\n1,M,NY\n2,F,NY\n3,M,NY\n4,F,LA\n5,M,LA\n6,F,LA\n";
pub const G0_EDGES: &str = "1,2\n1,3\n2,3\n3,4\n4,5\n5,6\n";

pub fn g0() -> MultidimGraph {
    parse_graph(G0_VERTICES, G0_EDGES).unwrap().0
}

/// Small random graph: 3-5 dims, cardinality 2-4, up to 200 vertices and
/// 800 edges.
pub fn corpus_graph(seed: u64) -> MultidimGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + seed);
    let vertex_count = rng.gen_range(2..=200usize);
    let max_edges = vertex_count * (vertex_count - 1) / 2;
    let params = GenParams {
        vertex_count,
        edge_count: rng.gen_range(1..=max_edges.min(800)),
        dim_count: rng.gen_range(3..=5),
        cardinality: rng.gen_range(2..=4),
        seed,
        hub_fraction: 0.0,
    };
    generate_synthetic(&params).unwrap()
}

pub fn build(g: &MultidimGraph, policy: PrunePolicy, strategy: Strategy, threads: usize) -> GraphCube {
    let idx = build_inverted_index(g);
    let table = significance_table(g, &idx).apply_policy(policy);
    let opts = CubeOptions {
        strategy,
        max_level: g.dim_count(),
        threads,
    };
    compute_cube(g, &idx, &table, &opts).unwrap()
}

/// Every file in `dir` by name. The `level,<k>,<millis>` timing lines of
/// `meta` are dropped; with `skip_meta` the whole file is.
pub fn dir_files(dir: &Path, skip_meta: bool) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = fs::read_to_string(&path).unwrap();
        if name == "meta" {
            if skip_meta {
                continue;
            }
            let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with("level,")).collect();
            out.insert(name, kept.join("\n"));
        } else {
            out.insert(name, text);
        }
    }
    out
}
