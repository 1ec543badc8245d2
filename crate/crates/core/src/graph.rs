//! Graphs, configurations, press-sets and the press operation.
//!
//! Presses commute and a vertex pressed twice cancels, so any sequence of
//! presses is represented by the set of vertices pressed an odd number of
//! times. Composition of plans is XOR of their [`PressSet`]s.

use std::fmt;
use std::ops::{BitXor, Deref};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitVector;
use crate::error::{GraphError, ParseError};

/// Simple undirected graph on vertices `0..n`, stored as one neighbor row per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<BitVector>,
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![BitVector::zeros(n); n],
        }
    }

    /// Duplicate edges (in either orientation) collapse to one.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub(crate) fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.n();
        for v in [a, b] {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop { vertex: a });
        }
        self.adjacency[a].set(b, true);
        self.adjacency[b].set(a, true);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &BitVector {
        &self.adjacency[v]
    }

    /// `{v} ∪ N(v)`.
    pub fn closed_neighborhood(&self, v: usize) -> BitVector {
        let mut row = self.adjacency[v].clone();
        row.set(v, true);
        row
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].get(b)
    }

    /// Edges as `(i, j)` with `i < j`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter_ones().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitVector::count_ones).sum::<usize>() / 2
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    fn check_len(&self, bits: &BitVector) -> Result<(), GraphError> {
        if bits.len() == self.n() {
            Ok(())
        } else {
            Err(GraphError::LengthMismatch {
                expected: self.n(),
                found: bits.len(),
            })
        }
    }

    /// The graph on `V ∖ {removed}` with the order-preserving renumbering.
    pub fn induced_subgraph(&self, removed: usize) -> Result<(Graph, IndexMap), GraphError> {
        self.check_vertex(removed)?;
        let n = self.n();
        let new_to_old: Vec<usize> = (0..n).filter(|&v| v != removed).collect();
        let mut sub = Graph::empty(n - 1);
        for (new_i, &old_i) in new_to_old.iter().enumerate() {
            for old_j in self.adjacency[old_i].iter_ones() {
                if old_j != removed {
                    let new_j = if old_j > removed { old_j - 1 } else { old_j };
                    sub.adjacency[new_i].set(new_j, true);
                }
            }
        }
        Ok((
            sub,
            IndexMap {
                parent_len: n,
                new_to_old,
            },
        ))
    }

    /// `c` with `{v} ∪ N(v)` toggled.
    pub fn press(&self, c: &Configuration, v: usize) -> Result<Configuration, GraphError> {
        self.check_vertex(v)?;
        self.check_len(&c.0)?;
        let mut out = c.0.clone();
        out ^= &self.adjacency[v];
        out.toggle(v);
        Ok(Configuration(out))
    }

    /// Toggle vector of a press-set: bit `v` is the parity of `|({v} ∪ N(v)) ∩ s|`.
    pub fn effect(&self, s: &PressSet) -> Result<Configuration, GraphError> {
        self.check_len(&s.0)?;
        let mut out = s.0.clone();
        for v in s.iter() {
            out ^= &self.adjacency[v];
        }
        Ok(Configuration(out))
    }

    /// Bit `v` of `effect(s)`, without computing the rest.
    pub fn toggle_parity_at(&self, s: &PressSet, v: usize) -> Result<bool, GraphError> {
        self.check_vertex(v)?;
        self.check_len(&s.0)?;
        Ok(s.0.get(v) ^ self.adjacency[v].dot(&s.0))
    }

    pub fn apply_press_set(&self, c: &Configuration, s: &PressSet) -> Result<Configuration, GraphError> {
        self.check_len(&c.0)?;
        let delta = self.effect(s)?;
        Ok(c ^ &delta)
    }

    /// Ascending odd-degree vertices. Always of even length.
    pub fn odd_degree_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v) % 2 == 1).collect()
    }

    /// Edge-list text: vertex count, then one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (a, b) in self.edges() {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            n: self.n(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// JSON shape of a graph: `{"n": int, "edges": [[int, int], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphDoc> for Graph {
    type Error = GraphError;

    fn try_from(doc: GraphDoc) -> Result<Self, Self::Error> {
        Graph::from_edges(doc.n, doc.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = GraphDoc::deserialize(deserializer)?;
        Graph::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// Order-preserving renumbering between a graph and one of its vertex-deleted subgraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    parent_len: usize,
    new_to_old: Vec<usize>,
}

impl IndexMap {
    pub fn old_index(&self, new: usize) -> usize {
        self.new_to_old[new]
    }

    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.new_to_old.binary_search(&old).ok()
    }

    /// Carries a press-set of the subgraph into parent indices.
    pub fn lift(&self, s: &PressSet) -> PressSet {
        assert_eq!(
            s.len(),
            self.new_to_old.len(),
            "press-set does not belong to this subgraph"
        );
        PressSet(BitVector::from_indices(
            self.parent_len,
            s.iter().map(|v| self.new_to_old[v]),
        ))
    }
}

macro_rules! bit_newtype {
    ($name:ident) => {
        impl $name {
            pub fn zeros(n: usize) -> Self {
                Self(BitVector::zeros(n))
            }

            pub fn ones(n: usize) -> Self {
                Self(BitVector::ones(n))
            }

            pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
                Self(BitVector::from_indices(n, indices))
            }

            pub fn bits(&self) -> &BitVector {
                &self.0
            }

            pub fn into_bits(self) -> BitVector {
                self.0
            }

            /// Ascending set positions.
            pub fn iter(&self) -> crate::bits::Ones<'_> {
                self.0.iter_ones()
            }

            pub fn weight(&self) -> usize {
                self.0.count_ones()
            }
        }

        impl Deref for $name {
            type Target = BitVector;

            fn deref(&self) -> &BitVector {
                &self.0
            }
        }

        impl From<BitVector> for $name {
            fn from(bits: BitVector) -> Self {
                Self(bits)
            }
        }

        impl BitXor<&$name> for &$name {
            type Output = $name;

            fn bitxor(self, rhs: &$name) -> $name {
                $name(&self.0 ^ &rhs.0)
            }
        }

        impl FromStr for $name {
            type Err = ParseError;

            fn from_str(s: &str) -> Result<Self, ParseError> {
                s.parse().map(Self)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(&self.0.to_bitstring())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

/// On/off state of every vertex (bit `i` = vertex `i` is lit). Also used for
/// toggle vectors, the change a press-set induces.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Configuration(pub BitVector);

/// The vertices pressed an odd number of times.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PressSet(pub BitVector);

bit_newtype!(Configuration);
bit_newtype!(PressSet);

impl Configuration {
    pub fn complement(&self) -> Configuration {
        Configuration(self.0.not())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_bitstring())
    }
}

/// Sorted indices in braces, e.g. `{0,3}`.
impl fmt::Display for PressSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}
