//! Structure-aware OLAP cubing for vertex-attributed graphs.
//!
//! The pipeline is: load or generate a [`MultidimGraph`], build its
//! [`InvertedIndex`], score every dimensional value with
//! [`significance_table`], choose a [`PrunePolicy`], and materialize the
//! cuboid lattice with [`compute_cube`]. The [`oracle`] module recomputes
//! the same cube by brute force for verification.

pub mod bench;
pub mod cube;
pub mod error;
pub mod graph;
pub mod index;
pub mod measures;
pub mod oracle;
pub mod synth;

pub use cube::{
    combine, compute_cube, lws_valid, query_cuboid, read_cuboid, write_cube, AggregateNetwork,
    AggregateNode, CubeOptions, GraphCube, Strategy,
};
pub use error::{Error, Result};
pub use graph::{load_graph, write_graph, Catalog, MultidimGraph, VertexId};
pub use index::{build_inverted_index, InvertedIndex};
pub use measures::{significance_table, PrunePolicy, SignificanceTable, VertexScore};
pub use synth::{generate_synthetic, GenParams};
