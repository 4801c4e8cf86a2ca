//! C interface. Graphs, significance tables and cubes are opaque handles
//! released with their `*_free` function. Every fallible call returns an
//! [`ScStatus`] and writes its result through an out-pointer; on failure the
//! message is available from [`sc_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use sigcube::cube::CuboidFile;
use sigcube::{
    build_inverted_index, compute_cube, generate_synthetic, load_graph, significance_table,
    write_cube, CubeOptions, Error, GenParams, GraphCube, InvertedIndex, MultidimGraph,
    PrunePolicy, SignificanceTable, Strategy,
};

/// Status codes. 1 to 4 match the exit codes of the `sigcube` tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    Parameter = 1,
    Load = 2,
    QueryMiss = 3,
    Verification = 4,
    NullArgument = 5,
    Panic = 6,
}

pub struct ScGraph {
    graph: MultidimGraph,
}

pub struct ScTable {
    table: SignificanceTable,
    index: InvertedIndex,
    fingerprint: String,
}

pub struct ScCube {
    cube: GraphCube,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn status_of(e: &Error) -> ScStatus {
    match e.exit_code() {
        1 => ScStatus::Parameter,
        2 => ScStatus::Load,
        3 => ScStatus::QueryMiss,
        _ => ScStatus::Verification,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ScStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("{what} is null"));
            ScStatus::NullArgument
        }
        Err(_) => {
            set_error("internal panic".into());
            ScStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::Parameter(format!("{what} is not valid UTF-8"))))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    *out = CString::new(s)
        .map_err(|_| Fail::Lib(Error::Parameter("output contains a nul byte".into())))?
        .into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a graph from a vertex CSV and an edge CSV.
///
/// # Safety
/// Paths must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_load(
    vertex_path: *const c_char,
    edge_path: *const c_char,
    out: *mut *mut ScGraph,
) -> ScStatus {
    guard(|| {
        let v = str_arg(vertex_path, "vertex_path")?;
        let e = str_arg(edge_path, "edge_path")?;
        let (graph, _) = load_graph(Path::new(v), Path::new(e))?;
        put(out, ScGraph { graph })
    })
}

/// Seeded synthetic graph; see the `gen` command.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_generate(
    vertices: usize,
    edges: usize,
    dims: usize,
    cardinality: usize,
    seed: u64,
    hub_fraction: f64,
    out: *mut *mut ScGraph,
) -> ScStatus {
    guard(|| {
        let graph = generate_synthetic(&GenParams {
            vertex_count: vertices,
            edge_count: edges,
            dim_count: dims,
            cardinality,
            seed,
            hub_fraction,
        })?;
        put(out, ScGraph { graph })
    })
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_vertex_count(g: *const ScGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.vertex_count())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_edge_count(g: *const ScGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_dim_count(g: *const ScGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.dim_count())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_graph_free(g: *mut ScGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Significance table with keep flags under `policy` (`none`, `ss-mean` or
/// `support`). `min_support` is read only by `support`.
///
/// # Safety
/// `g` must be a live graph handle, `policy` a nul-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_significance_compute(
    g: *const ScGraph,
    policy: *const c_char,
    min_support: usize,
    out: *mut *mut ScTable,
) -> ScStatus {
    guard(|| {
        let g = &handle(g, "graph")?.graph;
        let policy = PrunePolicy::parse(str_arg(policy, "policy")?, Some(min_support))?;
        let index = build_inverted_index(g);
        let table = significance_table(g, &index).apply_policy(policy);
        put(
            out,
            ScTable {
                table,
                index,
                fingerprint: g.fingerprint(),
            },
        )
    })
}

/// Looks up one value. Any of the result pointers may be null.
///
/// # Safety
/// Handles must be live; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn sc_table_lookup(
    g: *const ScGraph,
    t: *const ScTable,
    dim: *const c_char,
    value: *const c_char,
    ss: *mut f64,
    support: *mut usize,
    keep: *mut bool,
) -> ScStatus {
    guard(|| {
        let g = &handle(g, "graph")?.graph;
        let t = handle(t, "table")?;
        let dim = str_arg(dim, "dim")?;
        let value = str_arg(value, "value")?;
        if g.catalog().dim_index(dim).is_none() {
            return Err(Error::UnknownDimension(dim.to_owned()).into());
        }
        let row = t
            .table
            .lookup(g, dim, value)
            .ok_or_else(|| Error::Parameter(format!("no value {value} in {dim}")))?;
        if !ss.is_null() {
            *ss = row.ss;
        }
        if !support.is_null() {
            *support = row.support;
        }
        if !keep.is_null() {
            *keep = row.keep;
        }
        Ok(())
    })
}

/// The table as `dimension,value,ss,support,keep` CSV. Free with
/// [`sc_string_free`].
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_table_csv(
    g: *const ScGraph,
    t: *const ScTable,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(|| {
        let g = &handle(g, "graph")?.graph;
        let t = handle(t, "table")?;
        put_string(out, t.table.to_csv(g))
    })
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_table_free(t: *mut ScTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Materializes every cuboid up to `max_level` (0 means all dimensions).
/// `strategy` is `level` or `steps`; `threads` 0 uses every core.
///
/// # Safety
/// Handles must be live, `strategy` nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_cube_build(
    g: *const ScGraph,
    t: *const ScTable,
    strategy: *const c_char,
    max_level: usize,
    threads: usize,
    out: *mut *mut ScCube,
) -> ScStatus {
    guard(|| {
        let g = &handle(g, "graph")?.graph;
        let t = handle(t, "table")?;
        if t.fingerprint != g.fingerprint() {
            return Err(Error::FingerprintMismatch {
                left: t.fingerprint.clone(),
                right: g.fingerprint(),
            }
            .into());
        }
        let strategy: Strategy = str_arg(strategy, "strategy")?.parse()?;
        let opts = CubeOptions {
            strategy,
            max_level: if max_level == 0 { g.dim_count() } else { max_level },
            threads,
        };
        let cube = compute_cube(g, &t.index, &t.table, &opts)?;
        put(out, ScCube { cube })
    })
}

/// # Safety
/// `c` must be null or a live cube handle.
#[no_mangle]
pub unsafe extern "C" fn sc_cube_node_count(c: *const ScCube) -> usize {
    c.as_ref().map_or(0, |c| c.cube.node_count())
}

/// # Safety
/// `c` must be null or a live cube handle.
#[no_mangle]
pub unsafe extern "C" fn sc_cube_combines(c: *const ScCube) -> u64 {
    c.as_ref().map_or(0, |c| c.cube.meta().stats.combines_attempted)
}

/// Writes the cube directory.
///
/// # Safety
/// `c` must be live and `dir` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn sc_cube_write(c: *const ScCube, dir: *const c_char, keep_members: bool) -> ScStatus {
    guard(|| {
        let c = handle(c, "cube")?;
        write_cube(&c.cube, Path::new(str_arg(dir, "dir")?), keep_members)?;
        Ok(())
    })
}

/// Renders one cuboid, named by comma-separated dimensions in any order, in
/// the stored file format with members. Free with [`sc_string_free`].
///
/// # Safety
/// `c` must be live, `dims` nul-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sc_cube_query(c: *const ScCube, dims: *const c_char, out: *mut *mut c_char) -> ScStatus {
    guard(|| {
        let c = handle(c, "cube")?;
        let names: Vec<&str> = str_arg(dims, "dims")?.split(',').collect();
        let net = c.cube.query(&names)?;
        put_string(out, CuboidFile::from_network(net, c.cube.catalog(), true).render())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_cube_free(c: *mut ScCube) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
