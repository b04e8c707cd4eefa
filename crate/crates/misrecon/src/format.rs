//! Text and JSON file formats.
//!
//! Edge list: a header line `n m`, then `m` lines `u v` (0-based ids). Lines
//! starting with `#` are comments and the file must end with a newline.
//! Serialization writes edges sorted by `(u, v)` with `u < v`, so output is
//! byte-stable.
//!
//! JSON shapes:
//!
//! * graph: `{"n": 4, "edges": [[0, 1], ...]}`
//! * scheme: `{"n": 10, "delta": 1, "sets": [[0, 3], ...]}`
//! * transcript: `{"entries": [{"query": [..], "answer": [..]}, ...]}`
//! * result: `{"n": .., "edges": [[u, v], ..], "queries": q, "witnessed_non_edges": k}`

use std::fmt::Write as _;

use misrecon_core::oracle::{TranscriptEntry, TranscriptError};
use misrecon_core::reconstruct::ReconstructionResult;
use misrecon_core::scheme::SchemeError;
use misrecon_core::{Graph, GraphError, QueryScheme, Transcript, Vertex, VertexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("empty input")]
    Empty,
    #[error("line {line}: malformed header, expected `n m`")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed edge, expected `u v`")]
    MalformedEdge { line: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: Vertex, n: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: Vertex, v: Vertex },
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("missing trailing newline")]
    MissingTrailingNewline,
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid scheme: {0}")]
    Scheme(#[from] SchemeError),
    #[error("invalid transcript: {0}")]
    Transcript(#[from] TranscriptError),
    #[error("transcript mentions vertex {vertex}, outside 0..{n}")]
    TranscriptOutOfRange { vertex: Vertex, n: usize },
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn edge_error(line: usize, err: GraphError) -> FormatError {
    match err {
        GraphError::SelfLoop(vertex) => FormatError::SelfLoop { line, vertex },
        GraphError::VertexOutOfRange { vertex, n } => FormatError::VertexOutOfRange { line, vertex, n },
        GraphError::DuplicateEdge(e) => FormatError::DuplicateEdge { line, u: e.u(), v: e.v() },
        other => FormatError::Graph(other),
    }
}

fn parse_pair(text: &str) -> Option<(usize, usize)> {
    let mut it = text.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Parses the edge-list format.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    if text.is_empty() {
        return Err(FormatError::Empty);
    }
    if !text.ends_with('\n') {
        return Err(FormatError::MissingTrailingNewline);
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or(FormatError::Empty)?;
    let (n, m) = parse_pair(header).ok_or(FormatError::MalformedHeader { line: header_line })?;
    let mut g = Graph::empty(n);
    let mut found = 0;
    for (line, text) in lines {
        let (u, v) = parse_pair(text).ok_or(FormatError::MalformedEdge { line })?;
        g.add_edge(u, v).map_err(|e| edge_error(line, e))?;
        found += 1;
    }
    if found != m {
        return Err(FormatError::EdgeCountMismatch { declared: m, found });
    }
    Ok(g)
}

/// Writes the edge-list format with canonically sorted edges.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        writeln!(out, "{} {}", e.u(), e.v()).unwrap();
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[Vertex; 2]>,
}

pub fn graph_to_json(g: &Graph) -> String {
    let doc = GraphJson {
        n: g.n(),
        edges: g.edges().map(|e| [e.u(), e.v()]).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn graph_from_json(text: &str) -> Result<Graph, FormatError> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let mut g = Graph::empty(doc.n);
    for (i, [u, v]) in doc.edges.into_iter().enumerate() {
        g.add_edge(u, v).map_err(|e| edge_error(i + 1, e))?;
    }
    Ok(g)
}

/// Parses either format: JSON when the first non-blank character is `{`.
pub fn parse_graph_auto(text: &str) -> Result<Graph, FormatError> {
    if text.trim_start().starts_with('{') {
        graph_from_json(text)
    } else {
        parse_graph(text)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SchemeJson {
    n: usize,
    delta: usize,
    sets: Vec<Vec<Vertex>>,
}

pub fn scheme_to_json(s: &QueryScheme) -> String {
    let doc = SchemeJson {
        n: s.n(),
        delta: s.delta(),
        sets: s.sets().iter().map(VertexSet::to_vec).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn scheme_from_json(text: &str) -> Result<QueryScheme, FormatError> {
    let doc: SchemeJson = serde_json::from_str(text)?;
    let sets = doc.sets.into_iter().map(VertexSet::from_iter).collect();
    Ok(QueryScheme::new(doc.n, doc.delta, sets)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryJson {
    query: Vec<Vertex>,
    answer: Vec<Vertex>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TranscriptJson {
    entries: Vec<EntryJson>,
}

pub fn transcript_to_json(t: &Transcript) -> String {
    let doc = TranscriptJson {
        entries: t
            .iter()
            .map(|e| EntryJson {
                query: e.query.to_vec(),
                answer: e.answer.to_vec(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn transcript_from_json(text: &str) -> Result<Transcript, FormatError> {
    let doc: TranscriptJson = serde_json::from_str(text)?;
    let entries = doc
        .entries
        .into_iter()
        .map(|e| TranscriptEntry {
            query: e.query.into_iter().collect(),
            answer: e.answer.into_iter().collect(),
        })
        .collect();
    Ok(Transcript::from_entries(entries)?)
}

/// Reads a transcript and checks that it only mentions vertices below `n`.
pub fn transcript_from_json_for(text: &str, n: usize) -> Result<Transcript, FormatError> {
    let t = transcript_from_json(text)?;
    match t.max_vertex() {
        Some(vertex) if vertex >= n => Err(FormatError::TranscriptOutOfRange { vertex, n }),
        _ => Ok(t),
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResultJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    pub queries: usize,
    pub witnessed_non_edges: usize,
}

pub fn result_to_json(r: &ReconstructionResult) -> String {
    let doc = ResultJson {
        n: r.graph.n(),
        edges: r.graph.edges().map(|e| [e.u(), e.v()]).collect(),
        queries: r.queries_used,
        witnessed_non_edges: r.witnessed_non_edges.len(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use misrecon_core::generate::{cycle, random_bounded};
    use misrecon_core::SeededRng;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn parses_examples() {
        let g = parse_graph("3 1\n0 1\n").unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(0, 1));
        assert_eq!(g.edge_count(), 1);
        let g = parse_graph("# a comment\n4 2\n# another\n2 3\n1 0\n").unwrap();
        assert_eq!(serialize_graph(&g), "4 2\n0 1\n2 3\n");
    }

    #[test]
    fn serializes_canonically() {
        assert_eq!(serialize_graph(&cycle(3).unwrap()), "3 3\n0 1\n0 2\n1 2\n");
        assert_eq!(serialize_graph(&Graph::empty(2)), "2 0\n");
    }

    #[test]
    fn diagnostics_are_distinct() {
        assert!(matches!(parse_graph("2 1\n0 0\n"), Err(FormatError::SelfLoop { line: 2, vertex: 0 })));
        assert!(matches!(parse_graph("x\n"), Err(FormatError::MalformedHeader { line: 1 })));
        assert!(matches!(parse_graph("3\n"), Err(FormatError::MalformedHeader { .. })));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 0\n"),
            Err(FormatError::DuplicateEdge { line: 3, u: 0, v: 1 })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 3\n"),
            Err(FormatError::VertexOutOfRange { line: 2, vertex: 3, n: 3 })
        ));
        assert!(matches!(parse_graph("3 1\n0 1"), Err(FormatError::MissingTrailingNewline)));
        assert!(matches!(
            parse_graph("3 2\n0 1\n"),
            Err(FormatError::EdgeCountMismatch { declared: 2, found: 1 })
        ));
        assert!(matches!(parse_graph("3 1\n0 1 2\n"), Err(FormatError::MalformedEdge { line: 2 })));
        assert!(matches!(parse_graph(""), Err(FormatError::Empty)));
    }

    #[test]
    fn json_graph() {
        let g = cycle(4).unwrap();
        let text = graph_to_json(&g);
        assert_eq!(text, r#"{"n":4,"edges":[[0,1],[0,3],[1,2],[2,3]]}"#);
        assert_eq!(parse_graph_auto(&text).unwrap(), g);
        assert!(matches!(
            graph_from_json(r#"{"n":2,"edges":[[1,1]]}"#),
            Err(FormatError::SelfLoop { .. })
        ));
    }

    #[test]
    fn scheme_and_transcript_json() {
        let s = QueryScheme::new(4, 1, vec![VertexSet::from([0, 1]), VertexSet::from([2])]).unwrap();
        let text = scheme_to_json(&s);
        assert_eq!(text, r#"{"n":4,"delta":1,"sets":[[0,1],[2]]}"#);
        assert_eq!(scheme_from_json(&text).unwrap(), s);
        assert!(matches!(
            scheme_from_json(r#"{"n":2,"delta":1,"sets":[[5]]}"#),
            Err(FormatError::Scheme(SchemeError::SetOutOfRange { index: 0, n: 2 }))
        ));

        let mut t = Transcript::new();
        t.push(VertexSet::from([0, 1, 2]), VertexSet::from([0, 2])).unwrap();
        let text = transcript_to_json(&t);
        assert_eq!(text, r#"{"entries":[{"query":[0,1,2],"answer":[0,2]}]}"#);
        assert_eq!(transcript_from_json(&text).unwrap(), t);
        assert!(matches!(
            transcript_from_json(r#"{"entries":[{"query":[0],"answer":[1]}]}"#),
            Err(FormatError::Transcript(_))
        ));
        assert!(matches!(
            transcript_from_json_for(&text, 2),
            Err(FormatError::TranscriptOutOfRange { vertex: 2, n: 2 })
        ));
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(seed in any::<u64>(), n in 2usize..40, d in 1usize..6) {
            let mut rng = SeededRng::seed_from_u64(seed);
            let g = random_bounded(n, d.min(n - 1), 100_000, &mut rng).unwrap();
            prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g.clone());
            prop_assert_eq!(graph_from_json(&graph_to_json(&g)).unwrap(), g);
        }
    }
}
