//! Standard graph families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::Graph;

/// A generator family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Path {
        n: usize,
    },
    /// Requires `n >= 3`.
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// `rows × cols` lattice with 4-neighborhoods, vertex `r * cols + c`.
    Grid {
        rows: usize,
        cols: usize,
    },
    Petersen,
    /// `G(n, p)`; every generation needs a seed.
    ErdosRenyi {
        n: usize,
        p: f64,
    },
}

/// Builds a graph of the given family. Deterministic for a fixed `(kind, seed)`.
pub fn generate(kind: &GraphKind, seed: Option<u64>) -> Result<Graph, GraphError> {
    let invalid = |msg: String| Err(GraphError::InvalidParams(msg));
    match *kind {
        GraphKind::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        GraphKind::Cycle { n } => {
            if n < 3 {
                return invalid(format!("cycle needs at least 3 vertices, got {n}"));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphKind::Complete { n } => Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))),
        GraphKind::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return invalid(format!("grid dimensions must be at least 1, got {rows}x{cols}"));
            }
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            Graph::from_edges(rows * cols, edges)
        }
        GraphKind::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))
        }
        GraphKind::ErdosRenyi { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return invalid(format!("edge probability must lie in [0, 1], got {p}"));
            }
            let Some(seed) = seed else {
                return invalid("erdos_renyi requires a seed".into());
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::empty(n);
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(p) {
                        g.add_edge(i, j)?;
                    }
                }
            }
            Ok(g)
        }
    }
}
