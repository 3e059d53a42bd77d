//! Whitespace-separated edge lists.
//!
//! One `u v` pair per line, 0-indexed. An optional first line `# n=<count>`
//! fixes the node count, so isolated trailing nodes survive a round trip;
//! without it the count is one past the largest index seen. Other lines
//! starting with `#` and blank lines are ignored.
//!
//! Interlink files use the same layout with a `# n1=<count> n2=<count>`
//! header, each line `u w` linking layer-1 node `u` to layer-2 node `w`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::graph::{Graph, Interlinks, LayeredNetwork};
use crate::error::{Error, Result};

fn format_err(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

fn header_value(line: &str, key: &str) -> Option<String> {
    line.trim_start_matches('#')
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix(key)?.strip_prefix('=').map(str::to_owned))
}

struct EdgeFile {
    header: Option<String>,
    pairs: Vec<(usize, usize, usize)>,
}

fn read_pairs(path: &Path) -> Result<EdgeFile> {
    let text = fs::read_to_string(path)?;
    let mut header = None;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() && pairs.is_empty() {
                header = Some(line.to_owned());
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = tokens
                .next()
                .ok_or_else(|| format_err(path, lineno, "expected two node indices"))?;
            tok.parse()
                .map_err(|_| format_err(path, lineno, format!("`{tok}` is not a node index")))
        };
        let (u, v) = (next()?, next()?);
        if tokens.next().is_some() {
            return Err(format_err(path, lineno, "expected exactly two node indices"));
        }
        pairs.push((lineno, u, v));
    }
    Ok(EdgeFile { header, pairs })
}

fn parse_count(path: &Path, header: &Option<String>, key: &str) -> Result<Option<usize>> {
    match header.as_deref().and_then(|h| header_value(h, key)) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| format_err(path, 1, format!("bad `{key}` value `{v}` in header"))),
    }
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let file = read_pairs(path)?;
    let declared = parse_count(path, &file.header, "n")?;
    let n = declared.unwrap_or_else(|| {
        file.pairs
            .iter()
            .map(|&(_, u, v)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
    });
    let mut edges = Vec::with_capacity(file.pairs.len());
    let mut seen = std::collections::HashSet::with_capacity(file.pairs.len());
    for &(line, u, v) in &file.pairs {
        if u >= n || v >= n {
            return Err(format_err(
                path,
                line,
                format!("node index out of range for n = {n}"),
            ));
        }
        if u == v {
            return Err(format_err(path, line, format!("self-loop at node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(format_err(path, line, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    Graph::from_edges(n, edges)
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "# n={}", g.node_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn load_interlinks(path: impl AsRef<Path>) -> Result<Interlinks> {
    let path = path.as_ref();
    let file = read_pairs(path)?;
    let n1 = parse_count(path, &file.header, "n1")?;
    let n2 = parse_count(path, &file.header, "n2")?;
    let (Some(n1), Some(n2)) = (n1, n2) else {
        return Err(format_err(path, 1, "missing `# n1=<count> n2=<count>` header"));
    };
    for &(line, u, w) in &file.pairs {
        if u >= n1 || w >= n2 {
            return Err(format_err(
                path,
                line,
                format!("link out of range for n1 = {n1}, n2 = {n2}"),
            ));
        }
    }
    Interlinks::new(n1, n2, file.pairs.iter().map(|&(_, u, w)| (u, w)).collect())
}

pub fn save_interlinks(links: &Interlinks, n1: usize, n2: usize, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "# n1={n1} n2={n2}")?;
    for &(u, w) in links.pairs() {
        writeln!(out, "{u} {w}")?;
    }
    out.flush()?;
    Ok(())
}

/// File names used for a layered network saved under `prefix`.
pub fn layered_paths(prefix: &Path) -> [PathBuf; 3] {
    let with = |suffix: &str| {
        let mut name = prefix.as_os_str().to_owned();
        name.push(suffix);
        PathBuf::from(name)
    };
    [
        with(".layer1.edges"),
        with(".layer2.edges"),
        with(".interlinks.edges"),
    ]
}

/// Writes `<prefix>.layer1.edges`, `<prefix>.layer2.edges` and
/// `<prefix>.interlinks.edges`.
pub fn save_layered(net: &LayeredNetwork, prefix: impl AsRef<Path>) -> Result<()> {
    let [p1, p2, pl] = layered_paths(prefix.as_ref());
    save_graph(net.layer1(), p1)?;
    save_graph(net.layer2(), p2)?;
    save_interlinks(net.interlinks(), net.n1(), net.n2(), pl)
}

pub fn load_layered(prefix: impl AsRef<Path>) -> Result<LayeredNetwork> {
    let [p1, p2, pl] = layered_paths(prefix.as_ref());
    let g1 = load_graph(p1)?;
    let g2 = load_graph(&p2)?;
    let links = load_interlinks(&pl)?;
    if links
        .pairs()
        .iter()
        .any(|&(u, w)| u >= g1.node_count() || w >= g2.node_count())
    {
        return Err(format_err(&pl, 1, "interlinks do not fit the layer files"));
    }
    LayeredNetwork::new(g1, g2, links.pairs().to_vec())
}
