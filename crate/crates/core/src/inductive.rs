//! Constructive complementing sets by induction on the vertex count.
//!
//! For each vertex `v`, a complementing set `P_v` of `G - v` is found
//! recursively and lifted back into `G`. If `P_v` happens to toggle `v` as
//! well, it already complements all of `G` and is returned as is. Otherwise
//! `P_a ⊕ P_b` toggles exactly `{a, b}`. Pairing up the odd-degree vertices
//! this way and then pressing every vertex once (which toggles exactly the
//! even-degree ones) toggles everything.
//!
//! Recursion is memoized on the vertex subset of the root graph, since an
//! induced subgraph of a fixed graph is determined by its vertex set.

use std::collections::HashMap;

use thiserror::Error;

use crate::bits::BitVector;
use crate::error::GraphError;
use crate::graph::{Graph, PressSet};
use crate::trace::{Trace, TraceEvent};

pub const DEFAULT_MAX_VERTICES: usize = 24;
pub const DEFAULT_MEMO_BUDGET: usize = 1 << 20;

/// Overrides [`DEFAULT_MAX_VERTICES`] when set.
pub const MAX_N_ENV: &str = "TOGGLED_MAX_N";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductiveError {
    #[error("graph has {n} vertices, above the inductive solver cap of {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("memo table reached {entries} entries, exhausting its budget")]
    MemoBudgetExceeded { entries: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InductiveConfig {
    pub max_vertices: usize,
    pub memo_budget: usize,
}

impl Default for InductiveConfig {
    fn default() -> Self {
        Self {
            max_vertices: DEFAULT_MAX_VERTICES,
            memo_budget: DEFAULT_MEMO_BUDGET,
        }
    }
}

impl InductiveConfig {
    /// Defaults, with the vertex cap taken from `TOGGLED_MAX_N` when it parses.
    pub fn from_env() -> Self {
        let mut config = Self::default();
        if let Some(cap) = std::env::var(MAX_N_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            config.max_vertices = cap;
        }
        config
    }
}

/// Complementing sets of induced subgraphs, keyed by their vertex subset of
/// the root graph. Both keys and values use root indices.
#[derive(Debug, Default, Clone)]
pub struct MemoTable {
    entries: HashMap<BitVector, PressSet>,
}

impl MemoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, mask: &BitVector) -> Option<&PressSet> {
        self.entries.get(mask)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitVector, &PressSet)> {
        self.entries.iter()
    }
}

/// Result of combining the complementing sets of `G - a` and `G - b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairToggle {
    /// Toggles exactly `a` and `b`.
    Pair(PressSet),
    /// One of the lifted sets already toggles every vertex of `G`.
    ShortCircuit(PressSet),
}

/// A press-set complementing every configuration of `g`, plus the proof trace.
pub fn complementing_set(g: &Graph) -> Result<(PressSet, Trace), InductiveError> {
    complementing_set_with(g, InductiveConfig::default())
}

pub fn complementing_set_with(g: &Graph, config: InductiveConfig) -> Result<(PressSet, Trace), InductiveError> {
    check_cap(g, &config)?;
    let mut memo = MemoTable::new();
    let mut events = Vec::new();
    let mut run = Recursion {
        config,
        memo: &mut memo,
        events: Some(&mut events),
    };
    let ids: Vec<usize> = (0..g.n()).collect();
    let set = run.complement(g, &ids, &BitVector::ones(g.n()), 0)?;
    Ok((set, Trace::new(g.n(), events)))
}

/// The press-set toggling exactly `{a, b}`, or a short-circuit complementing set.
/// `memo` must belong to `g` as the root graph.
pub fn pair_toggle_set(g: &Graph, a: usize, b: usize, memo: &mut MemoTable) -> Result<PairToggle, InductiveError> {
    let config = InductiveConfig::default();
    check_cap(g, &config)?;
    for v in [a, b] {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() }.into());
        }
    }
    assert_ne!(a, b, "pair endpoints must differ");
    let mut run = Recursion {
        config,
        memo,
        events: None,
    };
    let ids: Vec<usize> = (0..g.n()).collect();
    run.pair(g, &ids, &BitVector::ones(g.n()), a, b, 0)
}

fn check_cap(g: &Graph, config: &InductiveConfig) -> Result<(), InductiveError> {
    if g.n() > config.max_vertices {
        Err(InductiveError::TooManyVertices {
            n: g.n(),
            cap: config.max_vertices,
        })
    } else {
        Ok(())
    }
}

struct Recursion<'a> {
    config: InductiveConfig,
    memo: &'a mut MemoTable,
    events: Option<&'a mut Vec<TraceEvent>>,
}

impl Recursion<'_> {
    fn log(&mut self, event: impl FnOnce() -> TraceEvent) {
        if let Some(events) = self.events.as_deref_mut() {
            events.push(event());
        }
    }

    /// Complementing set of `g`, in `g`'s own indices. `ids[i]` is the root
    /// index of local vertex `i` and `mask` is the set of those root indices.
    fn complement(
        &mut self,
        g: &Graph,
        ids: &[usize],
        mask: &BitVector,
        depth: usize,
    ) -> Result<PressSet, InductiveError> {
        self.log(|| TraceEvent::Enter {
            depth,
            mask: mask.clone(),
        });

        let result = if g.n() <= 1 {
            self.log(|| TraceEvent::BaseCase {
                depth,
                mask: mask.clone(),
            });
            PressSet::ones(g.n())
        } else {
            let odd = g.odd_degree_vertices();
            let mut combined = PressSet::zeros(g.n());
            let mut short_circuit = None;
            for pair in odd.chunks_exact(2) {
                match self.pair(g, ids, mask, pair[0], pair[1], depth)? {
                    PairToggle::Pair(s) => combined = &combined ^ &s,
                    PairToggle::ShortCircuit(s) => {
                        short_circuit = Some(s);
                        break;
                    }
                }
            }
            match short_circuit {
                Some(s) => s,
                None => {
                    self.log(|| TraceEvent::PressAll {
                        depth,
                        mask: mask.clone(),
                    });
                    &combined ^ &PressSet::ones(g.n())
                }
            }
        };

        let lifted = to_root(&result, ids, mask.len());
        self.log(|| TraceEvent::Exit {
            depth,
            mask: mask.clone(),
            result: lifted.clone(),
        });
        if self.memo.len() >= self.config.memo_budget {
            return Err(InductiveError::MemoBudgetExceeded {
                entries: self.memo.len(),
            });
        }
        self.memo.entries.insert(mask.clone(), lifted);
        Ok(result)
    }

    fn pair(
        &mut self,
        g: &Graph,
        ids: &[usize],
        mask: &BitVector,
        a: usize,
        b: usize,
        depth: usize,
    ) -> Result<PairToggle, InductiveError> {
        let p_a = self.without(g, ids, mask, a, depth)?;
        if g.toggle_parity_at(&p_a, a)? {
            self.log(|| TraceEvent::ShortCircuit {
                depth,
                mask: mask.clone(),
                vertex: ids[a],
            });
            return Ok(PairToggle::ShortCircuit(p_a));
        }
        let p_b = self.without(g, ids, mask, b, depth)?;
        if g.toggle_parity_at(&p_b, b)? {
            self.log(|| TraceEvent::ShortCircuit {
                depth,
                mask: mask.clone(),
                vertex: ids[b],
            });
            return Ok(PairToggle::ShortCircuit(p_b));
        }
        self.log(|| TraceEvent::Pair {
            depth,
            mask: mask.clone(),
            a: ids[a],
            b: ids[b],
        });
        Ok(PairToggle::Pair(&p_a ^ &p_b))
    }

    /// Complementing set of `g - v`, lifted into `g`'s indices.
    fn without(
        &mut self,
        g: &Graph,
        ids: &[usize],
        mask: &BitVector,
        v: usize,
        depth: usize,
    ) -> Result<PressSet, InductiveError> {
        let mut child_mask = mask.clone();
        child_mask.set(ids[v], false);
        if let Some(known) = self.memo.get(&child_mask) {
            return Ok(PressSet::from_indices(g.n(), (0..g.n()).filter(|&i| known.get(ids[i]))));
        }
        let (sub, map) = g.induced_subgraph(v)?;
        let sub_ids: Vec<usize> = ids.iter().copied().filter(|&r| r != ids[v]).collect();
        let sub_set = self.complement(&sub, &sub_ids, &child_mask, depth + 1)?;
        Ok(map.lift(&sub_set))
    }
}

fn to_root(local: &PressSet, ids: &[usize], root_n: usize) -> PressSet {
    PressSet::from_indices(root_n, local.iter().map(|i| ids[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, GraphKind};

    fn graph(kind: GraphKind) -> Graph {
        generate(&kind, None).unwrap()
    }

    #[test]
    fn single_vertex_base_case() {
        let (set, trace) = complementing_set(&Graph::empty(1)).unwrap();
        assert_eq!(set, PressSet::from_indices(1, [0]));
        assert!(matches!(trace.events()[1], TraceEvent::BaseCase { depth: 0, .. }));
    }

    #[test]
    fn empty_graph() {
        let (set, _) = complementing_set(&Graph::empty(0)).unwrap();
        assert_eq!(set, PressSet::zeros(0));
    }

    #[test]
    fn path3_short_circuits_on_the_middle() {
        let p3 = graph(GraphKind::Path { n: 3 });
        let (set, trace) = complementing_set(&p3).unwrap();
        assert_eq!(set, PressSet::from_indices(3, [1]));
        // P_0 on the edge {1,2} is {2}, which misses vertex 0; P_2 on {0,1}
        // is {1}, which reaches vertex 2 and ends the construction
        let top: Vec<_> = trace.top_level().collect();
        assert_eq!(top.len(), 1);
        assert!(matches!(top[0], TraceEvent::ShortCircuit { vertex: 2, .. }));
    }

    #[test]
    fn path4_pairs_the_endpoints() {
        let p4 = graph(GraphKind::Path { n: 4 });
        let (set, trace) = complementing_set(&p4).unwrap();
        assert_eq!(set, PressSet::from_indices(4, [0, 3]));
        let top: Vec<_> = trace.top_level().collect();
        assert!(matches!(
            top[..],
            [TraceEvent::Pair { a: 0, b: 3, .. }, TraceEvent::PressAll { .. }]
        ));
    }

    #[test]
    fn pair_toggle_examples() {
        let p4 = graph(GraphKind::Path { n: 4 });
        let out = pair_toggle_set(&p4, 0, 3, &mut MemoTable::new()).unwrap();
        assert_eq!(out, PairToggle::Pair(PressSet::from_indices(4, [1, 2])));
        assert_eq!(
            p4.effect(&PressSet::from_indices(4, [1, 2])).unwrap().to_string(),
            "1001"
        );

        let k4 = graph(GraphKind::Complete { n: 4 });
        let out = pair_toggle_set(&k4, 0, 1, &mut MemoTable::new()).unwrap();
        assert_eq!(out, PairToggle::ShortCircuit(PressSet::from_indices(4, [1, 2, 3])));

        let two = Graph::empty(2);
        let out = pair_toggle_set(&two, 0, 1, &mut MemoTable::new()).unwrap();
        assert_eq!(out, PairToggle::Pair(PressSet::ones(2)));
    }

    #[test]
    fn memo_entries_complement_their_subsets() {
        let g = graph(GraphKind::Petersen);
        let mut memo = MemoTable::new();
        pair_toggle_set(&g, 0, 1, &mut memo).unwrap();
        assert!(!memo.is_empty());
        for (mask, set) in memo.iter() {
            // effect restricted to the subset, counting only presses inside it
            for v in mask.iter_ones() {
                let hits = set.get(v) as usize + g.neighbors(v).and(set.bits()).count_ones();
                assert_eq!(hits % 2, 1, "vertex {v} of subset {mask}");
            }
            assert!(set.iter().all(|v| mask.get(v)));
        }
    }

    #[test]
    fn caps_are_enforced() {
        let g = Graph::empty(30);
        assert_eq!(
            complementing_set(&g).unwrap_err(),
            InductiveError::TooManyVertices { n: 30, cap: 24 }
        );
        // K6 needs two memo entries: K5 after removing vertex 0, then K6 itself
        let k6 = graph(GraphKind::Complete { n: 6 });
        let tight = InductiveConfig {
            max_vertices: 24,
            memo_budget: 1,
        };
        assert_eq!(
            complementing_set_with(&k6, tight),
            Err(InductiveError::MemoBudgetExceeded { entries: 1 })
        );
        let roomy = InductiveConfig {
            memo_budget: 2,
            ..tight
        };
        assert!(complementing_set_with(&k6, roomy).is_ok());
    }

    #[test]
    fn deterministic() {
        let g = generate(&GraphKind::ErdosRenyi { n: 11, p: 0.4 }, Some(3)).unwrap();
        assert_eq!(complementing_set(&g).unwrap(), complementing_set(&g).unwrap());
    }
}
