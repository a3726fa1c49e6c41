//! Plain-text edge-list format.
//!
//! ```text
//! # nodes=<n> d=<d>
//! <u> <v>
//! ...
//! # pos
//! <x_1> ... <x_d>      (one row per node, present iff d > 0)
//! # weight
//! <w>                  (one row per node, optional)
//! ```
//!
//! Edges are written once each with `u <= v`, ordered by `u` and then by
//! adjacency order. Reals use Rust's shortest round-trip decimal form, so
//! reading a written file reproduces the graph exactly. `d=0` means the
//! graph carries no positions. See `docs/edge-list-format.md`.

use std::io::{BufRead, Write};

use super::{Graph, GraphBuilder, NodeId, Positions};
use crate::error::{Error, Result};

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    let d = g.positions().map_or(0, |p| p.dim());
    writeln!(out, "# nodes={} d={}", g.num_nodes(), d)?;
    let mut result = Ok(());
    g.for_each_edge(|u, v| {
        if result.is_ok() {
            result = writeln!(out, "{u} {v}");
        }
    });
    result?;
    if let Some(pos) = g.positions() {
        writeln!(out, "# pos")?;
        for i in 0..pos.len() {
            let row = pos.get(i);
            for (k, x) in row.iter().enumerate() {
                if k > 0 {
                    out.write_all(b" ")?;
                }
                write!(out, "{x}")?;
            }
            out.write_all(b"\n")?;
        }
    }
    if let Some(w) = g.weights() {
        writeln!(out, "# weight")?;
        for x in w {
            writeln!(out, "{x}")?;
        }
    }
    Ok(())
}

pub fn to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("edge list is ASCII")
}

#[derive(PartialEq)]
enum Section {
    Edges,
    Pos,
    Weight,
}

fn fmt_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Format {
        line,
        reason: reason.into(),
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix("# nodes=")?;
    let (n, d) = rest.split_once(" d=")?;
    Some((n.parse().ok()?, d.trim_end().parse().ok()?))
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input.lines().enumerate();
    let (n, d) = match lines.next() {
        Some((_, line)) => {
            let line = line?;
            parse_header(&line).ok_or_else(|| fmt_err(1, "expected `# nodes=<n> d=<d>`"))?
        }
        None => return Err(fmt_err(1, "empty input")),
    };
    let mut builder = GraphBuilder::new(n);
    let mut coords: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut section = Section::Edges;
    let mut seen_pos = false;
    let mut seen_weight = false;
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "# pos" {
            if d == 0 || seen_pos {
                return Err(fmt_err(lineno, "unexpected `# pos` section"));
            }
            seen_pos = true;
            section = Section::Pos;
            continue;
        }
        if line == "# weight" {
            if seen_weight {
                return Err(fmt_err(lineno, "duplicate `# weight` section"));
            }
            seen_weight = true;
            section = Section::Weight;
            continue;
        }
        if line.starts_with('#') {
            return Err(fmt_err(lineno, format!("unknown directive `{line}`")));
        }
        match section {
            Section::Edges => {
                let mut it = line.split_whitespace();
                let parse = |tok: Option<&str>| -> Result<NodeId> {
                    let tok = tok.ok_or_else(|| fmt_err(lineno, "expected `u v`"))?;
                    let id: NodeId = tok
                        .parse()
                        .map_err(|_| fmt_err(lineno, format!("bad node id `{tok}`")))?;
                    if id as usize >= n {
                        return Err(fmt_err(lineno, format!("node {id} >= nodes={n}")));
                    }
                    Ok(id)
                };
                let u = parse(it.next())?;
                let v = parse(it.next())?;
                if it.next().is_some() {
                    return Err(fmt_err(lineno, "trailing tokens after edge"));
                }
                builder.add_edge(u, v);
            }
            Section::Pos => {
                let row: Vec<f64> = line
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| fmt_err(lineno, "bad coordinate"))?;
                if row.len() != d {
                    return Err(fmt_err(lineno, format!("expected {d} coordinates")));
                }
                coords.extend(row);
            }
            Section::Weight => {
                let w: f64 = line
                    .parse()
                    .map_err(|_| fmt_err(lineno, format!("bad weight `{line}`")))?;
                weights.push(w);
            }
        }
    }
    let mut g = builder.build();
    if d > 0 {
        if coords.len() != n * d {
            return Err(fmt_err(0, format!("expected {n} position rows")));
        }
        g = g.with_positions(Positions::new(d, coords)?)?;
    }
    if seen_weight {
        if weights.len() != n {
            return Err(fmt_err(0, format!("expected {n} weight rows")));
        }
        g = g.with_weights(weights)?;
    }
    Ok(g)
}
