//! Flood-and-solve MIS in `O(diameter)` rounds.
//!
//! Each node starts out holding its own adjacency record and in every round
//! forwards the records it learned in the previous round. After `r` rounds a
//! node holds the records of its `r`-ball. A round that brings no new record
//! means the node's whole component is known; the node then runs the greedy
//! MIS by ascending id on that component, outputs its own membership and
//! halts. A node of eccentricity `e` therefore halts in round `e + 1`.
//!
//! A record for vertex `x` always carries the same list, `N(x)`, so records
//! are interned: a message lists vertex ids and a node keeps the set of ids
//! whose records it holds, reading the list contents from the shared graph.
//! Byte accounting still charges each record at its full size.
//!
//! Large batches of records travel as a bitset over vertex ids instead of a
//! list; that only changes how the simulator stores a message.
//!
//! Every node of a component ends up with the same closed knowledge and so
//! computes the same greedy set; the simulator memoizes that set per
//! knowledge set rather than recomputing it at every node.

use std::io::Write;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use fixedbitset::FixedBitSet;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId, VertexSet};
use crate::localsim::{run_protocol, GlobalKnowledge, NodeContext, Outbox, Protocol, ProtocolFault, RunConfig, Status};

use super::luby::collect_members;
use super::{MisError, MisOutcome, Route};

/// Batches above `n / DENSE_RATIO` records are sent as bitsets.
const DENSE_RATIO: usize = 32;

pub(crate) struct Flood<'g> {
    records: &'g Graph,
    solved: Mutex<HashMap<FixedBitSet, Arc<FixedBitSet>>>,
}

/// Vertex ids whose records a message carries.
#[derive(Clone, Debug)]
pub(crate) enum Records {
    Sparse(Arc<[VertexId]>),
    Dense(Arc<FixedBitSet>),
}

impl Records {
    fn len(&self) -> usize {
        match self {
            Records::Sparse(ids) => ids.len(),
            Records::Dense(bits) => bits.count_ones(..),
        }
    }

}

pub(crate) struct FloodState {
    known: FixedBitSet,
    fresh: Records,
    /// Full size of the records in `fresh`.
    fresh_bytes: usize,
    member: Option<bool>,
}

impl<'g> Flood<'g> {
    fn new(records: &'g Graph) -> Self {
        Flood { records, solved: Mutex::new(HashMap::new()) }
    }

    /// Greedy-by-id set over the closed knowledge `known`.
    fn greedy(&self, known: &FixedBitSet) -> FixedBitSet {
        let mut chosen = FixedBitSet::with_capacity(known.len());
        for x in known.ones() {
            let x32 = x as VertexId;
            let blocked =
                self.records.neighbors(x32).iter().take_while(|&&y| y < x32).any(|&y| chosen.contains(y as usize));
            if !blocked {
                chosen.insert(x);
            }
        }
        chosen
    }

    /// Bytes of the record for `x`: its id and its adjacency list.
    fn record_bytes(&self, x: VertexId) -> usize {
        let id = std::mem::size_of::<VertexId>();
        id + id * self.records.degree(x)
    }

    fn decide(&self, known: &FixedBitSet, me: VertexId) -> bool {
        let cached = self.solved.lock().expect("memo poisoned").get(known).cloned();
        let chosen = match cached {
            Some(c) => c,
            None => {
                let c = Arc::new(self.greedy(known));
                self.solved.lock().expect("memo poisoned").insert(known.clone(), c.clone());
                c
            }
        };
        chosen.contains(me as usize)
    }
}

impl Protocol for Flood<'_> {
    type State = FloodState;
    type Message = (Records, usize);
    type Output = Option<bool>;

    fn init(&self, ctx: &NodeContext<'_>, _: &mut ChaCha8Rng) -> (FloodState, Status) {
        let mut known = FixedBitSet::with_capacity(self.records.n());
        known.insert(ctx.id as usize);
        let fresh_bytes = self.record_bytes(ctx.id);
        (FloodState { known, fresh: Records::Sparse(Arc::from(vec![ctx.id])), fresh_bytes, member: None }, Status::Active)
    }

    fn send(&self, _: &NodeContext<'_>, state: &FloodState, _: u32, _: &mut ChaCha8Rng) -> Outbox<Self::Message> {
        Outbox::Broadcast((state.fresh.clone(), state.fresh_bytes))
    }

    fn receive(
        &self,
        ctx: &NodeContext<'_>,
        state: &mut FloodState,
        _: u32,
        inbox: &[(usize, Self::Message)],
        _: &mut ChaCha8Rng,
    ) -> Result<Status, ProtocolFault> {
        let n = state.known.len();
        let mut fresh = Vec::new();
        for (_, (records, _)) in inbox {
            match records {
                Records::Sparse(ids) => {
                    for &x in ids.iter() {
                        if (x as usize) >= n {
                            return Err(ProtocolFault(format!("record for unknown vertex {x}")));
                        }
                        if !state.known.put(x as usize) {
                            fresh.push(x);
                        }
                    }
                }
                Records::Dense(bits) => {
                    if bits.len() != n {
                        return Err(ProtocolFault(format!("record set over {} ids, expected {n}", bits.len())));
                    }
                    let known = state.known.as_mut_slice();
                    for (i, (k, &b)) in known.iter_mut().zip(bits.as_slice()).enumerate() {
                        let mut new = b & !*k;
                        *k |= b;
                        while new != 0 {
                            fresh.push((i * usize::BITS as usize + new.trailing_zeros() as usize) as VertexId);
                            new &= new - 1;
                        }
                    }
                }
            }
        }
        state.fresh_bytes = fresh.iter().map(|&x| self.record_bytes(x)).sum();
        if fresh.is_empty() {
            state.member = Some(self.decide(&state.known, ctx.id));
            state.fresh = Records::Sparse(Arc::from(Vec::new()));
            Ok(Status::Halted)
        } else if fresh.len() * DENSE_RATIO > n {
            let mut bits = FixedBitSet::with_capacity(n);
            fresh.iter().for_each(|&x| bits.insert(x as usize));
            state.fresh = Records::Dense(Arc::new(bits));
            Ok(Status::Active)
        } else {
            state.fresh = Records::Sparse(fresh.into());
            Ok(Status::Active)
        }
    }

    fn output(&self, _: &NodeContext<'_>, state: &FloodState) -> Option<bool> {
        state.member
    }

    fn message_bytes(&self, msg: &Self::Message) -> usize {
        msg.1
    }

    fn summarize(&self, state: &FloodState) -> String {
        format!("known={} fresh={} member={:?}", state.known.count_ones(..), state.fresh.len(), state.member)
    }
}

pub(crate) fn run_flood(
    g: &Graph,
    knowledge: GlobalKnowledge,
    round_limit: u32,
    phase: &'static str,
    trace: Option<&mut dyn Write>,
) -> Result<MisOutcome, MisError> {
    let mut cfg = RunConfig::new(0, round_limit).with_knowledge(knowledge);
    cfg.trace = trace;
    let run = run_protocol(g, &Flood::new(g), cfg)?;
    let (mis, decided) = collect_members(&run.outputs);
    if !run.stats.halted {
        return Err(MisError::RoundLimit { phase, rounds: run.stats.rounds, decided, total: g.n(), partial: mis });
    }
    Ok(MisOutcome { mis, stats: run.stats, phases: Vec::new(), route: Route::Diameter })
}

/// Deterministic MIS in `max component diameter + 1` rounds.
pub fn diameter_mis(g: &Graph, round_limit: u32) -> Result<MisOutcome, MisError> {
    run_flood(g, GlobalKnowledge::of(g, f64::NAN), round_limit, "diameter", None)
}

/// Membership the flood protocol converges to: greedy by ascending id.
pub fn diameter_mis_reference(g: &Graph) -> VertexSet {
    let order: Vec<VertexId> = g.vertices().collect();
    crate::graph::greedy_mis(g, &order).expect("identity order is a permutation")
}
