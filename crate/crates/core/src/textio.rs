//! Plain-text graph format and vertex labelling.
//!
//! ```text
//! c prism 9
//! p <order> <edge-count>
//! e <u> <v>
//! ```
//!
//! Vertices are 1-based. Lines starting with `c` are comments; a leading
//! `c prism <n>` comment marks the graph as a complementary prism so that
//! reports can use `v3`/`vbar7` labels.

use crate::error::{Error, Result};
use crate::graph::{Graph, PrismIndexing};
use serde_json::Value;
use std::fmt::Write as _;

/// How vertices are named in human-facing output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VertexLabels {
    /// 1-based integers.
    #[default]
    Plain,
    Prism(PrismIndexing),
}

impl VertexLabels {
    pub fn label(&self, v: usize) -> String {
        match self {
            VertexLabels::Plain => (v + 1).to_string(),
            VertexLabels::Prism(idx) => idx.label(v),
        }
    }

    pub fn json(&self, v: usize) -> Value {
        match self {
            VertexLabels::Plain => Value::from(v + 1),
            VertexLabels::Prism(idx) => Value::from(idx.label(v)),
        }
    }

    /// Parses a label: a 1-based integer, or `v3`/`vbar7` on prisms.
    pub fn parse(&self, s: &str, order: usize) -> Option<usize> {
        if let Ok(k) = s.parse::<usize>() {
            return (1..=order).contains(&k).then(|| k - 1);
        }
        match self {
            VertexLabels::Prism(idx) => idx.parse_label(s),
            VertexLabels::Plain => None,
        }
    }
}

/// A graph read from text, with any prism annotation it carried.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub labels: VertexLabels,
}

pub fn write_graph(g: &Graph, labels: VertexLabels) -> String {
    let mut out = String::new();
    if let VertexLabels::Prism(idx) = labels {
        let n = idx.n;
        writeln!(out, "c prism {n}").unwrap();
        writeln!(out, "c v_i -> i, vbar_i -> {n}+i for i in 1..{n}").unwrap();
    }
    writeln!(out, "p {} {}", g.order(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut prism_n: Option<usize> = None;
    let mut edges = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("c") => {
                if header.is_none() && tokens.next() == Some("prism") {
                    let n = tokens
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::parse(line_no, "bad prism annotation"))?;
                    prism_n = Some(n);
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate header"));
                }
                let nums: Vec<usize> = tokens
                    .map(|t| t.parse().map_err(|_| Error::parse(line_no, "bad header number")))
                    .collect::<Result<_>>()?;
                if nums.len() != 2 {
                    return Err(Error::parse(line_no, "header needs order and edge count"));
                }
                header = Some((nums[0], nums[1]));
            }
            Some("e") => {
                let (order, _) = header.ok_or_else(|| Error::parse(line_no, "edge before header"))?;
                let nums: Vec<usize> = tokens
                    .map(|t| t.parse().map_err(|_| Error::parse(line_no, "bad vertex")))
                    .collect::<Result<_>>()?;
                if nums.len() != 2 {
                    return Err(Error::parse(line_no, "edge needs two endpoints"));
                }
                let (u, v) = (nums[0], nums[1]);
                if !(1..=order).contains(&u) || !(1..=order).contains(&v) {
                    return Err(Error::parse(line_no, format!("vertex out of range 1..{order}")));
                }
                if u == v {
                    return Err(Error::parse(line_no, "self-loop"));
                }
                edges.push((u - 1, v - 1));
            }
            Some(tok) => return Err(Error::parse(line_no, format!("unknown line type '{tok}'"))),
            None => unreachable!(),
        }
    }
    let (order, count) = header.ok_or_else(|| Error::parse(0, "missing 'p' header"))?;
    let graph = Graph::from_edges(order, edges).map_err(|e| Error::parse(0, e.to_string()))?;
    if graph.edge_count() != count {
        return Err(Error::parse(
            0,
            format!("header declares {count} edges, found {}", graph.edge_count()),
        ));
    }
    let labels = match prism_n {
        Some(n) if 2 * n == order => VertexLabels::Prism(PrismIndexing::new(n)),
        Some(n) => {
            return Err(Error::parse(0, format!("prism of order {n} must have {} vertices", 2 * n)))
        }
        None => VertexLabels::Plain,
    };
    Ok(GraphFile { graph, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, cycle_prism};

    #[test]
    fn write_is_sorted_and_one_based() {
        let text = write_graph(&cycle(3).unwrap(), VertexLabels::Plain);
        assert_eq!(text, "p 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    }

    #[test]
    fn prism_round_trip() {
        let (g, idx) = cycle_prism(9).unwrap();
        let text = write_graph(&g, VertexLabels::Prism(idx));
        assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 45);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.labels, VertexLabels::Prism(idx));
        assert_eq!(write_graph(&back.graph, back.labels), text);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_graph("e 1 2\n").is_err());
        assert!(parse_graph("p 2 1\ne 1 3\n").is_err());
        assert!(parse_graph("p 2 2\ne 1 2\n").is_err());
        assert!(parse_graph("p 2 1\ne 1 1\n").is_err());
        assert!(parse_graph("p 2\n").is_err());
        assert!(parse_graph("q\n").is_err());
        assert!(parse_graph("c prism 2\np 3 0\n").is_err());
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn labels_parse() {
        let l = VertexLabels::Prism(PrismIndexing::new(9));
        assert_eq!(l.parse("vbar5", 18), Some(13));
        assert_eq!(l.parse("3", 18), Some(2));
        assert_eq!(l.parse("19", 18), None);
        assert_eq!(VertexLabels::Plain.parse("v1", 18), None);
        assert_eq!(l.json(9), Value::from("vbar1"));
        assert_eq!(VertexLabels::Plain.json(0), Value::from(1));
    }
}
