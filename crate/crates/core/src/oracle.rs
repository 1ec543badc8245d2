//! Brute-force ground truth: exhaustive press-set search and graph corpora.
//!
//! Nothing here goes through the elimination code, so its answers can be used
//! to check the solvers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::{generate, GraphKind};
use crate::gf2::solve_complement;
use crate::graph::{Configuration, Graph, PressSet};
use crate::inductive::{complementing_set_with, InductiveConfig};

pub const BRUTE_FORCE_MAX_N: usize = 20;
pub const EXHAUSTIVE_MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force is limited to {cap} vertices, graph has {n}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("exhaustive enumeration is limited to {cap} vertices, requested {n}")]
    CorpusTooLarge { n: usize, cap: usize },
    #[error("invalid corpus: {0}")]
    InvalidCorpus(String),
    #[error("target has {found} bits for a graph on {n} vertices")]
    LengthMismatch { n: usize, found: usize },
}

/// Every press-set with the requested effect, lightest first, ties in integer
/// order of the mask (vertex `i` = bit `i`). Empty when the target is unreachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub solutions: Vec<PressSet>,
}

impl BruteForce {
    pub fn is_solvable(&self) -> bool {
        !self.solutions.is_empty()
    }

    pub fn min_weight(&self) -> Option<&PressSet> {
        self.solutions.first()
    }
}

/// Closed neighborhoods as integer masks, bit `i` = vertex `i`.
fn closed_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| {
            (0..g.n())
                .filter(|&u| u == v || g.has_edge(u, v))
                .fold(0, |m, u| m | (1 << u))
        })
        .collect()
}

/// Checks all `2^n` press-sets, in integer order of their masks.
pub fn brute_force_solutions(g: &Graph, target: &Configuration) -> Result<BruteForce, OracleError> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(OracleError::TooManyVertices {
            n,
            cap: BRUTE_FORCE_MAX_N,
        });
    }
    if target.len() != n {
        return Err(OracleError::LengthMismatch { n, found: target.len() });
    }
    let closed = closed_masks(g);
    let goal = target.iter().fold(0u32, |m, v| m | (1 << v));
    let mut masks: Vec<u32> = (0u32..1 << n)
        .filter(|&mask| {
            let toggled = (0..n).filter(|&v| mask >> v & 1 == 1).fold(0, |acc, v| acc ^ closed[v]);
            toggled == goal
        })
        .collect();
    masks.sort_by_key(|&mask| (mask.count_ones(), mask));
    let solutions = masks
        .into_iter()
        .map(|mask| PressSet::from_indices(n, (0..n).filter(|&v| mask >> v & 1 == 1)))
        .collect();
    Ok(BruteForce { solutions })
}

/// A family of graphs to check a property against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "corpus", rename_all = "snake_case")]
pub enum GraphCorpus {
    /// Every labeled graph on `n` vertices, `n <= 6`.
    Exhaustive { n: usize },
    /// `count` Erdős–Rényi graphs `G(n, p)`; graph `k` uses its own stream of
    /// the generator seeded by `seed`.
    Sampled { n: usize, count: usize, p: f64, seed: u64 },
}

impl GraphCorpus {
    pub fn validate(&self) -> Result<(), OracleError> {
        match *self {
            GraphCorpus::Exhaustive { n } if n > EXHAUSTIVE_MAX_N => Err(OracleError::CorpusTooLarge {
                n,
                cap: EXHAUSTIVE_MAX_N,
            }),
            GraphCorpus::Sampled { p, .. } if !(0.0..=1.0).contains(&p) => Err(OracleError::InvalidCorpus(format!(
                "edge probability {p} outside [0, 1]"
            ))),
            _ => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            GraphCorpus::Exhaustive { n } => 1 << (n * n.saturating_sub(1) / 2),
            GraphCorpus::Sampled { count, .. } => count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `k`-th graph of the corpus. Exhaustive corpora read `k` as an edge
    /// mask over pairs `(0,1), (0,2), …, (n-2,n-1)`.
    pub fn graph_at(&self, k: usize) -> Graph {
        match *self {
            GraphCorpus::Exhaustive { n } => {
                let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
                let edges = pairs.enumerate().filter(|(bit, _)| k >> bit & 1 == 1).map(|(_, e)| e);
                Graph::from_edges(n, edges).expect("pairs are in range and distinct")
            }
            GraphCorpus::Sampled { n, p, seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                generate(&GraphKind::ErdosRenyi { n, p }, Some(rng.next_u64())).expect("corpus validated before use")
            }
        }
    }
}

pub fn enumerate_graphs(corpus: GraphCorpus) -> Result<impl Iterator<Item = Graph>, OracleError> {
    corpus.validate()?;
    Ok((0..corpus.len()).map(move |k| corpus.graph_at(k)))
}

/// Outcome of checking the complement property over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub checked: usize,
    /// Offending graphs in edge-list text.
    pub failures: Vec<String>,
}

impl TheoremReport {
    pub fn merge(mut self, other: TheoremReport) -> TheoremReport {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Both solvers complement `g`, and their answers differ by a quiet pattern.
pub fn check_graph(g: &Graph, config: InductiveConfig) -> bool {
    let Ok(linear) = solve_complement(g) else {
        return false;
    };
    let Ok((constructed, _)) = complementing_set_with(g, config) else {
        return false;
    };
    let complements = |s: &PressSet| g.effect(s).is_ok_and(|e| e.is_all_ones());
    complements(&linear.particular) && complements(&constructed) && linear.same_coset(&linear.particular, &constructed)
}

/// Runs [`check_graph`] over every graph of the corpus, in parallel.
pub fn verify_theorem(corpus: GraphCorpus) -> Result<TheoremReport, OracleError> {
    verify_theorem_with(corpus, InductiveConfig::default())
}

pub fn verify_theorem_with(corpus: GraphCorpus, config: InductiveConfig) -> Result<TheoremReport, OracleError> {
    corpus.validate()?;
    Ok((0..corpus.len())
        .into_par_iter()
        .map(|k| {
            let g = corpus.graph_at(k);
            TheoremReport {
                checked: 1,
                failures: if check_graph(&g, config) {
                    vec![]
                } else {
                    vec![g.to_edge_list()]
                },
            }
        })
        .reduce(TheoremReport::default, TheoremReport::merge))
}
