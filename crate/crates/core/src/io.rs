//! TSV dataset files and the id manifest.
//!
//! A dataset directory holds
//!
//! * `edges.tsv`: `src<TAB>dst`, dense node ids;
//! * `tag_counts.tsv`: `user<TAB>tag<TAB>count`, dense ids;
//! * `manifest.json`: external id of every dense user and tag id;
//! * `probs.tsv` (optional): `src<TAB>dst<TAB>tag<TAB>p`.
//!
//! Raw inputs may start with a header row; a first line that does not parse
//! as numbers is skipped.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::graph::{ProbRecord, TagGraph, UserTagCounts};
use crate::{Error, Result};

pub const EDGES_FILE: &str = "edges.tsv";
pub const TAG_COUNTS_FILE: &str = "tag_counts.tsv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PROBS_FILE: &str = "probs.tsv";

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn tsv_reader(path: &Path) -> Result<csv::Reader<File>> {
    Ok(csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(open(path)?))
}

/// Parses the first `width` columns of every row as `T`.
fn read_columns<T: std::str::FromStr>(path: &Path, width: usize) -> Result<Vec<Vec<T>>>
where
    T::Err: std::fmt::Display,
{
    let mut out = Vec::new();
    for (i, record) in tsv_reader(path)?.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if record.len() < width {
            return Err(Error::Parse {
                path: path.to_owned(),
                line,
                msg: format!("expected {width} columns, found {}", record.len()),
            });
        }
        let parsed: std::result::Result<Vec<T>, _> = record
            .iter()
            .take(width)
            .map(|f| f.trim().parse::<T>())
            .collect();
        match parsed {
            Ok(row) => out.push(row),
            Err(_) if out.is_empty() && i == 0 => continue,
            Err(e) => {
                return Err(Error::Parse {
                    path: path.to_owned(),
                    line,
                    msg: e.to_string(),
                })
            }
        }
    }
    Ok(out)
}

pub fn read_edges(path: &Path) -> Result<Vec<(u64, u64)>> {
    Ok(read_columns::<u64>(path, 2)?
        .into_iter()
        .map(|r| (r[0], r[1]))
        .collect())
}

pub fn read_tag_counts(path: &Path) -> Result<Vec<(u64, u64, u64)>> {
    Ok(read_columns::<u64>(path, 3)?
        .into_iter()
        .map(|r| (r[0], r[1], r[2]))
        .collect())
}

/// Reads a HetRec-style tag assignment log (`userID ... tagID ...` with a
/// header row) and counts each `(user, tag)` row once.
pub fn read_tag_assignments(path: &Path) -> Result<Vec<(u64, u64, u64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .flexible(true)
        .from_reader(open(path)?);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Parse {
                path: path.to_owned(),
                line: 1,
                msg: format!("missing column `{name}`"),
            })
    };
    let user_col = column("userID")?;
    let tag_col = column("tagID")?;
    let mut counts: HashMap<(u64, u64), u64> = HashMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |col: usize| -> Result<u64> {
            record
                .get(col)
                .and_then(|f| f.trim().parse().ok())
                .ok_or_else(|| Error::Parse {
                    path: path.to_owned(),
                    line: i + 2,
                    msg: format!("bad id in column {}", col + 1),
                })
        };
        *counts
            .entry((parse(user_col)?, parse(tag_col)?))
            .or_default() += 1;
    }
    let mut triples: Vec<_> = counts.into_iter().map(|((u, t), c)| (u, t, c)).collect();
    triples.sort_unstable();
    Ok(triples)
}

pub fn read_probs(path: &Path) -> Result<Vec<ProbRecord>> {
    let mut out = Vec::new();
    for (i, record) in tsv_reader(path)?.records().enumerate() {
        let record = record?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let bad = |msg: String| Error::Parse {
            path: path.to_owned(),
            line: i + 1,
            msg,
        };
        if record.len() < 4 {
            return Err(bad(format!("expected 4 columns, found {}", record.len())));
        }
        let id = |j: usize| -> Result<usize> {
            record[j]
                .trim()
                .parse()
                .map_err(|e: std::num::ParseIntError| bad(e.to_string()))
        };
        let src = match id(0) {
            Ok(v) => v,
            Err(_) if i == 0 => continue,
            Err(e) => return Err(e),
        };
        let p: f64 = record[3]
            .trim()
            .parse()
            .map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?;
        out.push(ProbRecord {
            src,
            dst: id(1)?,
            tag: id(2)?,
            p,
        });
    }
    Ok(out)
}

pub fn write_edges(path: &Path, edges: &[(usize, usize)]) -> Result<()> {
    let mut w = create(path)?;
    for &(u, v) in edges {
        writeln!(w, "{u}\t{v}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_tag_counts(path: &Path, counts: &UserTagCounts) -> Result<()> {
    let mut w = create(path)?;
    for (u, t, c) in counts.triples() {
        writeln!(w, "{u}\t{t}\t{c}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_probs(path: &Path, graph: &TagGraph) -> Result<()> {
    let mut w = create(path)?;
    for r in graph.prob_records() {
        writeln!(w, "{}\t{}\t{}\t{}", r.src, r.dst, r.tag, r.p).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Dense-id to external-id tables for users and tags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub users: Vec<u64>,
    pub tags: Vec<u64>,
}

impl Manifest {
    pub fn identity(users: usize, tags: usize) -> Self {
        Manifest {
            users: (0..users as u64).collect(),
            tags: (0..tags as u64).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(std::io::BufReader::new(open(
            path,
        )?))?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = create(path)?;
        serde_json::to_writer_pretty(&mut w, self)?;
        w.flush().map_err(io_err(path))
    }

    /// Dense id of external tag id `ext`.
    pub fn tag_index(&self, ext: u64) -> Option<usize> {
        self.tags.binary_search(&ext).ok()
    }
}

fn densify(ids: impl IntoIterator<Item = u64>) -> (Vec<u64>, HashMap<u64, usize>) {
    let mut sorted: Vec<u64> = ids.into_iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    let index = sorted.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    (sorted, index)
}

/// A topology plus tag counts, all ids dense.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub graph: TagGraph,
    pub counts: UserTagCounts,
    pub manifest: Manifest,
}

impl Dataset {
    /// Maps raw external-id records onto dense ids, ascending by external
    /// id. With `undirected`, every tie is expanded into both directions
    /// (repeated ties collapse); otherwise duplicate edges are an error.
    pub fn from_raw(
        edges: &[(u64, u64)],
        tag_counts: &[(u64, u64, u64)],
        undirected: bool,
    ) -> Result<Self> {
        let (users, user_index) = densify(
            edges
                .iter()
                .flat_map(|&(u, v)| [u, v])
                .chain(tag_counts.iter().map(|t| t.0)),
        );
        let (tags, tag_index) = densify(tag_counts.iter().map(|t| t.1));
        let mut dense: Vec<(usize, usize)> = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            let (u, v) = (user_index[&u], user_index[&v]);
            dense.push((u, v));
            if undirected {
                dense.push((v, u));
            }
        }
        if undirected {
            dense.sort_unstable();
            dense.dedup();
        }
        let graph = TagGraph::from_edges(users.len(), tags.len(), dense)?;
        let counts = UserTagCounts::from_triples(
            users.len(),
            tags.len(),
            tag_counts
                .iter()
                .map(|&(u, t, c)| (user_index[&u], tag_index[&t], c)),
        )?;
        Ok(Dataset {
            graph,
            counts,
            manifest: Manifest { users, tags },
        })
    }

    pub fn load_dir(dir: &Path) -> Result<Self> {
        let path = |name: &str| -> PathBuf { dir.join(name) };
        let manifest = Manifest::load(&path(MANIFEST_FILE))?;
        let n = manifest.users.len();
        let tag_count = manifest.tags.len();
        let to_usize = |x: u64| x as usize;
        let edges = read_edges(&path(EDGES_FILE))?
            .into_iter()
            .map(|(u, v)| (to_usize(u), to_usize(v)))
            .collect();
        let probs_path = path(PROBS_FILE);
        let probs = if probs_path.exists() {
            read_probs(&probs_path)?
        } else {
            Vec::new()
        };
        let graph = TagGraph::load(n, tag_count, edges, probs)?;
        let counts = UserTagCounts::from_triples(
            n,
            tag_count,
            read_tag_counts(&path(TAG_COUNTS_FILE))?
                .into_iter()
                .map(|(u, t, c)| (to_usize(u), to_usize(t), c)),
        )?;
        Ok(Dataset {
            graph,
            counts,
            manifest,
        })
    }

    /// Writes `probs.tsv` only when some probability is nonzero.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        write_edges(&dir.join(EDGES_FILE), self.graph.edges())?;
        write_tag_counts(&dir.join(TAG_COUNTS_FILE), &self.counts)?;
        self.manifest.save(&dir.join(MANIFEST_FILE))?;
        if self.graph.probabilities().iter().any(|&p| p != 0.0) {
            write_probs(&dir.join(PROBS_FILE), &self.graph)?;
        }
        Ok(())
    }
}
