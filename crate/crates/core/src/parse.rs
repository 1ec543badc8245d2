//! Reading graphs from edge-list text or JSON.
//!
//! Edge-list: the first non-comment line is the vertex count, every following
//! non-comment line holds two whitespace-separated 0-based indices. `#` starts
//! a comment and blank lines are skipped. A document whose first non-blank
//! character is `{` is read as `{"n": int, "edges": [[int, int], ...]}`.

use crate::error::{GraphError, ParseError};
use crate::graph::{Graph, GraphDoc};

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}

fn parse_json(text: &str) -> Result<Graph, ParseError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    Graph::try_from(doc).map_err(|e| ParseError::Json(e.to_string()))
}

fn parse_index(token: &str, line: usize) -> Result<usize, ParseError> {
    token.parse().map_err(|_| ParseError::Malformed {
        line,
        message: format!("expected a non-negative integer, found {token:?}"),
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then_some((i + 1, content))
    });

    let (count_line, count) = lines.next().ok_or(ParseError::MissingVertexCount)?;
    let mut tokens = count.split_whitespace();
    let n = parse_index(tokens.next().unwrap_or(""), count_line)?;
    if tokens.next().is_some() {
        return Err(ParseError::Malformed {
            line: count_line,
            message: "vertex count line must hold a single integer".into(),
        });
    }

    let mut g = Graph::empty(n);
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [a, b] = tokens[..] else {
            return Err(ParseError::Malformed {
                line,
                message: format!("expected two vertex indices, found {} tokens", tokens.len()),
            });
        };
        let (a, b) = (parse_index(a, line)?, parse_index(b, line)?);
        g.add_edge(a, b).map_err(|e| match e {
            GraphError::VertexOutOfRange { vertex, n } => ParseError::IndexOutOfRange { line, index: vertex, n },
            GraphError::SelfLoop { vertex } => ParseError::SelfLoop { line, vertex },
            other => ParseError::Malformed {
                line,
                message: other.to_string(),
            },
        })?;
    }
    Ok(g)
}
