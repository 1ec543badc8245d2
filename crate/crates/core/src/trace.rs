//! Event log of one inductive construction.
//!
//! Vertex indices and masks in events always refer to the root graph. A mask
//! is the vertex subset of the induced subgraph being worked on, printed as a
//! 0/1 string with vertex 0 leftmost.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitVector;
use crate::graph::PressSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum TraceEvent {
    /// Start of the construction for the subgraph on `mask`.
    Enter { depth: usize, mask: BitVector },
    /// At most one vertex: press it (or nothing).
    BaseCase { depth: usize, mask: BitVector },
    /// The set for `mask - vertex` also toggles `vertex`, so it is the answer.
    ShortCircuit {
        depth: usize,
        mask: BitVector,
        vertex: usize,
    },
    /// Sets for `mask - a` and `mask - b` combined to toggle exactly `a` and `b`.
    Pair {
        depth: usize,
        mask: BitVector,
        a: usize,
        b: usize,
    },
    /// Every vertex of `mask` pressed once on top of the pair sets.
    PressAll { depth: usize, mask: BitVector },
    /// End of the construction for `mask`, with its complementing set.
    Exit {
        depth: usize,
        mask: BitVector,
        result: PressSet,
    },
}

impl TraceEvent {
    pub fn depth(&self) -> usize {
        match *self {
            TraceEvent::Enter { depth, .. }
            | TraceEvent::BaseCase { depth, .. }
            | TraceEvent::ShortCircuit { depth, .. }
            | TraceEvent::Pair { depth, .. }
            | TraceEvent::PressAll { depth, .. }
            | TraceEvent::Exit { depth, .. } => depth,
        }
    }

    fn to_line(&self) -> String {
        let indent = "  ".repeat(self.depth());
        let body = match self {
            TraceEvent::Enter { mask, .. } => format!("enter mask={mask}"),
            TraceEvent::BaseCase { mask, .. } => format!("base-case mask={mask}"),
            TraceEvent::ShortCircuit { mask, vertex, .. } => format!("short-circuit vertex={vertex} mask={mask}"),
            TraceEvent::Pair { mask, a, b, .. } => format!("pair a={a} b={b} mask={mask}"),
            TraceEvent::PressAll { mask, .. } => format!("press-all mask={mask}"),
            TraceEvent::Exit { mask, result, .. } => format!("exit mask={mask} set={result}"),
        };
        format!("{indent}{body}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("event {index}: {message}")]
    Inconsistent { index: usize, message: String },
    #[error("trace does not close its top-level construction")]
    Unterminated,
}

/// Ordered events of a construction; serializes as a JSON array of events.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Trace {
    #[serde(skip)]
    n: usize,
    events: Vec<TraceEvent>,
}

impl Trace {
    pub fn new(n: usize, events: Vec<TraceEvent>) -> Self {
        Self { n, events }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    /// Steps taken on the root graph itself, without enter/exit markers.
    pub fn top_level(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events
            .iter()
            .filter(|e| e.depth() == 0 && !matches!(e, TraceEvent::Enter { .. } | TraceEvent::Exit { .. }))
    }

    /// One event per line, indented two spaces per recursion level.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            let _ = writeln!(out, "{}", event.to_line());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace events always serialize")
    }

    /// Rebuilds the final press-set from the logged steps alone.
    ///
    /// Each subset's answer is recomputed from the answers of the smaller
    /// subsets it refers to, and checked against the set logged at its exit.
    pub fn replay(&self) -> Result<PressSet, ReplayError> {
        struct Frame {
            mask: BitVector,
            combined: BitVector,
            result: Option<BitVector>,
        }

        let mut known: HashMap<BitVector, BitVector> = HashMap::new();
        let mut stack: Vec<Frame> = Vec::new();
        let mut last = None;

        for (index, event) in self.events.iter().enumerate() {
            let fail = |message: String| ReplayError::Inconsistent { index, message };
            let lookup = |known: &HashMap<BitVector, BitVector>, mask: &BitVector, v: usize| {
                let mut child = mask.clone();
                child.set(v, false);
                known
                    .get(&child)
                    .cloned()
                    .ok_or_else(|| fail(format!("no earlier answer for subset {child}")))
            };
            if let TraceEvent::Enter { mask, .. } = event {
                stack.push(Frame {
                    mask: mask.clone(),
                    combined: BitVector::zeros(mask.len()),
                    result: None,
                });
                continue;
            }
            let frame = stack
                .last_mut()
                .ok_or_else(|| fail("event outside any construction".into()))?;
            let mask = match event {
                TraceEvent::Enter { .. } => unreachable!(),
                TraceEvent::BaseCase { mask, .. }
                | TraceEvent::ShortCircuit { mask, .. }
                | TraceEvent::Pair { mask, .. }
                | TraceEvent::PressAll { mask, .. }
                | TraceEvent::Exit { mask, .. } => mask,
            };
            if *mask != frame.mask {
                return Err(fail(format!("mask {mask} does not match open subset {}", frame.mask)));
            }
            match event {
                TraceEvent::Enter { .. } => unreachable!(),
                TraceEvent::BaseCase { .. } | TraceEvent::PressAll { .. } => {
                    frame.result = Some(&frame.combined ^ mask);
                }
                TraceEvent::ShortCircuit { vertex, .. } => {
                    frame.result = Some(lookup(&known, mask, *vertex)?);
                }
                TraceEvent::Pair { a, b, .. } => {
                    let p_a = lookup(&known, mask, *a)?;
                    let p_b = lookup(&known, mask, *b)?;
                    frame.combined ^= &p_a;
                    frame.combined ^= &p_b;
                }
                TraceEvent::Exit { result, .. } => {
                    let frame = stack.pop().expect("frame checked above");
                    let rebuilt = frame
                        .result
                        .ok_or_else(|| fail("subset closed without an answer".into()))?;
                    if &rebuilt != result.bits() {
                        return Err(fail(format!(
                            "logged set {result} differs from rebuilt {}",
                            PressSet(rebuilt)
                        )));
                    }
                    known.insert(frame.mask, rebuilt.clone());
                    if stack.is_empty() {
                        last = Some(PressSet(rebuilt));
                    }
                }
            }
        }
        if !stack.is_empty() {
            return Err(ReplayError::Unterminated);
        }
        last.ok_or(ReplayError::Unterminated)
    }
}
