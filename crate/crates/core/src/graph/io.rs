//! Edge-list text format.
//!
//! ```text
//! n m
//! u v
//! ...
//! ```
//!
//! The writer emits each edge once as `u v` with `u < v`, in lexicographic
//! order, every line terminated by `\n`. Reading that output and writing it
//! again reproduces it byte for byte. The reader accepts edges in any order
//! and orientation but rejects loops, duplicates and a wrong edge count.

use std::io::{self, BufRead, Write};

use super::{Graph, GraphError, VertexId};

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph, GraphError> {
    let mut lines = input.lines().enumerate();
    let (n, m) = loop {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| GraphError::Parse { line: 1, message: "missing header".into() })?;
        let line = line.map_err(|e| GraphError::Parse { line: idx + 1, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let (n, m) = parse_pair::<usize>(&line, idx + 1)?;
        break (n, m);
    };
    if n > VertexId::MAX as usize {
        return Err(GraphError::TooLarge { n, max: VertexId::MAX as usize });
    }
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let line = line.map_err(|e| GraphError::Parse { line: idx + 1, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        edges.push(parse_pair::<VertexId>(&line, idx + 1)?);
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 1,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

fn parse_pair<T: std::str::FromStr>(line: &str, lineno: usize) -> Result<(T, T), GraphError>
where
    T::Err: std::fmt::Display,
{
    let mut it = line.split_whitespace();
    let mut next = || -> Result<T, GraphError> {
        let tok = it.next().ok_or_else(|| GraphError::Parse {
            line: lineno,
            message: "expected two integers".into(),
        })?;
        tok.parse::<T>().map_err(|e| GraphError::Parse { line: lineno, message: format!("{tok:?}: {e}") })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Parse { line: lineno, message: "trailing tokens".into() });
    }
    Ok((a, b))
}
