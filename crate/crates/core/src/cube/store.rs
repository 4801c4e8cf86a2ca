//! Cube directory format.
//!
//! One `<dim1>_<dim2>_....cuboid` file per cuboid plus a `meta` file. Cuboid
//! files are UTF-8 and tab-separated, with sections in the order N, S, E, M
//! and lines sorted within each section:
//!
//! ```text
//! N  v1|v2  member_count
//! S  label  weight
//! E  label1  label2  weight      (label1 < label2)
//! M  label  id,id,...           (only when members are retained)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{label_of, resolve_signature, AggregateNetwork, GraphCube};
use crate::error::{Error, Result};
use crate::graph::{Catalog, VertexId};

pub const CUBOID_EXT: &str = "cuboid";
pub const META_FILE: &str = "meta";

/// A cuboid as stored on disk, keyed by value labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CuboidFile {
    pub nodes: BTreeMap<String, u64>,
    pub self_edges: BTreeMap<String, u64>,
    pub cross_edges: BTreeMap<(String, String), u64>,
    pub members: Option<BTreeMap<String, Vec<VertexId>>>,
}

impl CuboidFile {
    pub fn from_network(net: &AggregateNetwork, cat: &Catalog, keep_members: bool) -> Self {
        let labels: Vec<String> = net
            .nodes
            .iter()
            .map(|n| label_of(cat, &n.dims, &n.values))
            .collect();
        let nodes = labels
            .iter()
            .zip(&net.nodes)
            .map(|(l, n)| (l.clone(), n.members.len() as u64))
            .collect();
        let self_edges = labels.iter().cloned().zip(net.self_edges.iter().copied()).collect();
        let cross_edges = net
            .cross_edges
            .iter()
            .map(|(&(i, j), &w)| {
                let (a, b) = (&labels[i as usize], &labels[j as usize]);
                let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
                (key, w)
            })
            .collect();
        let members = keep_members.then(|| {
            labels
                .iter()
                .zip(&net.nodes)
                .map(|(l, n)| (l.clone(), n.members.iter().map(|&v| cat.vertex_id(v)).collect()))
                .collect()
        });
        CuboidFile {
            nodes,
            self_edges,
            cross_edges,
            members,
        }
    }

    pub fn render(&self) -> String {
        fn section(out: &mut String, mut lines: Vec<String>) {
            lines.sort_unstable();
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        }
        let mut out = String::new();
        section(
            &mut out,
            self.nodes.iter().map(|(l, c)| format!("N\t{l}\t{c}")).collect(),
        );
        section(
            &mut out,
            self.self_edges.iter().map(|(l, w)| format!("S\t{l}\t{w}")).collect(),
        );
        section(
            &mut out,
            self.cross_edges
                .iter()
                .map(|((a, b), w)| format!("E\t{a}\t{b}\t{w}"))
                .collect(),
        );
        if let Some(members) = &self.members {
            section(
                &mut out,
                members
                    .iter()
                    .map(|(l, ids)| {
                        let mut line = format!("M\t{l}\t");
                        for (k, id) in ids.iter().enumerate() {
                            if k > 0 {
                                line.push(',');
                            }
                            let _ = write!(line, "{id}");
                        }
                        line
                    })
                    .collect(),
            );
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut file = CuboidFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| Error::Parse {
                path: path.to_owned(),
                line,
                msg,
            };
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| err(format!("invalid weight {s:?}")))
            };
            let f: Vec<&str> = raw.split('\t').collect();
            match (f[0], f.len()) {
                ("N", 3) => {
                    file.nodes.insert(f[1].to_owned(), num(f[2])?);
                }
                ("S", 3) => {
                    file.self_edges.insert(f[1].to_owned(), num(f[2])?);
                }
                ("E", 4) => {
                    file.cross_edges
                        .insert((f[1].to_owned(), f[2].to_owned()), num(f[3])?);
                }
                ("M", 3) => {
                    let ids = if f[2].is_empty() {
                        Vec::new()
                    } else {
                        f[2].split(',')
                            .map(|s| s.parse().map_err(|_| err(format!("invalid vertex id {s:?}"))))
                            .collect::<Result<Vec<VertexId>>>()?
                    };
                    file.members
                        .get_or_insert_with(BTreeMap::new)
                        .insert(f[1].to_owned(), ids);
                }
                _ => return Err(err(format!("unrecognized line {raw:?}"))),
            }
        }
        Ok(file)
    }
}

fn cuboid_path(dir: &Path, cat_dims: &[String], sig: &[usize]) -> PathBuf {
    let names: Vec<&str> = sig.iter().map(|&d| cat_dims[d].as_str()).collect();
    dir.join(format!("{}.{CUBOID_EXT}", names.join("_")))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn render_meta(cube: &GraphCube, keep_members: bool) -> String {
    let m = cube.meta();
    let mut out = String::new();
    let _ = writeln!(out, "fingerprint,{}", m.fingerprint);
    let _ = writeln!(out, "dims,{}", cube.catalog().dims().join(","));
    let _ = writeln!(out, "policy,{}", m.policy);
    let _ = writeln!(out, "strategy,{}", m.strategy.map_or("oracle".to_owned(), |s| s.to_string()));
    let _ = writeln!(out, "max_level,{}", m.max_level);
    let _ = writeln!(out, "members,{keep_members}");
    let _ = writeln!(out, "combines,{}", m.stats.combines_attempted);
    for (k, ms) in m.stats.level_millis.iter().enumerate().skip(1) {
        let _ = writeln!(out, "level,{k},{}", ms.round() as u64);
    }
    out
}

/// Writes every cuboid and the `meta` file into `dir`, creating it if needed.
pub fn write_cube(cube: &GraphCube, dir: &Path, keep_members: bool) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let cat = cube.catalog();
    for (sig, net) in cube.cuboids() {
        let file = CuboidFile::from_network(net, cat, keep_members);
        write_file(&cuboid_path(dir, cat.dims(), sig), &file.render())?;
    }
    write_file(&dir.join(META_FILE), &render_meta(cube, keep_members))
}

/// The parts of `meta` needed to resolve queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeDirMeta {
    pub fingerprint: String,
    pub dims: Vec<String>,
    pub policy: String,
    pub strategy: String,
    pub max_level: usize,
    pub members: bool,
}

pub fn read_cube_meta(dir: &Path) -> Result<CubeDirMeta> {
    let path = dir.join(META_FILE);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let mut meta = CubeDirMeta {
        fingerprint: String::new(),
        dims: Vec::new(),
        policy: String::new(),
        strategy: String::new(),
        max_level: 0,
        members: false,
    };
    for (i, line) in text.lines().enumerate() {
        let err = |msg: &str| Error::Parse {
            path: path.clone(),
            line: i + 1,
            msg: msg.to_owned(),
        };
        let (key, rest) = line.split_once(',').ok_or_else(|| err("expected key,value"))?;
        match key {
            "fingerprint" => meta.fingerprint = rest.to_owned(),
            "dims" => meta.dims = rest.split(',').map(str::to_owned).collect(),
            "policy" => meta.policy = rest.to_owned(),
            "strategy" => meta.strategy = rest.to_owned(),
            "max_level" => meta.max_level = rest.parse().map_err(|_| err("invalid max_level"))?,
            "members" => meta.members = rest == "true",
            _ => {}
        }
    }
    if meta.dims.is_empty() {
        return Err(Error::Parse {
            path,
            line: 0,
            msg: "missing dims line".into(),
        });
    }
    Ok(meta)
}

/// Path of the stored cuboid for `dims` given in any order.
pub fn cuboid_file_path<S: AsRef<str>>(dir: &Path, dims: &[S]) -> Result<PathBuf> {
    let meta = read_cube_meta(dir)?;
    let sig = resolve_signature(&meta.dims, dims)?;
    let path = cuboid_path(dir, &meta.dims, &sig);
    if !path.is_file() {
        let names: Vec<&str> = sig.iter().map(|&d| meta.dims[d].as_str()).collect();
        return Err(Error::NotMaterialized(names.join("_")));
    }
    Ok(path)
}

pub fn read_cuboid<S: AsRef<str>>(dir: &Path, dims: &[S]) -> Result<CuboidFile> {
    let path = cuboid_file_path(dir, dims)?;
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    CuboidFile::parse(&text, &path)
}
