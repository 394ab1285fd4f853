//! Synchronous message passing in the LOCAL model.
//!
//! A run proceeds in rounds. In every round each active node first produces
//! its outgoing messages from its current state, then all messages are
//! delivered at once and every active node processes its inbox. Nodes that
//! halt stop sending and receiving. Message size is unbounded; the simulator
//! only records it.
//!
//! Node randomness is a pure function of `(seed, node id, round, phase)`, so
//! the order in which nodes are evaluated never affects a run.

use std::io::Write;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::rng::slot_rng;

/// What a node knows locally.
#[derive(Clone, Debug)]
pub struct NodeContext<'g> {
    pub id: VertexId,
    pub degree: usize,
    pub known_n: usize,
    pub known_max_degree: usize,
    pub known_beta: f64,
    /// Port `p` leads to `neighbor_ports[p]`. Ids are exposed because the
    /// protocols built here exchange them anyway.
    pub neighbor_ports: &'g [VertexId],
}

/// Node status after a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Active,
    Halted,
}

/// Messages a node emits in one round.
#[derive(Clone, Debug)]
pub enum Outbox<M> {
    Silent,
    /// The same message on every port.
    Broadcast(M),
    /// One optional message per port.
    PerPort(Vec<Option<M>>),
}

/// Error raised by a node program.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ProtocolFault(pub String);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("protocol fault at node {node} in round {round}: {message}")]
    Fault { node: VertexId, round: u32, message: String },
    #[error("round limit must be at least 1")]
    InvalidRoundLimit,
    #[error("per-port outbox from node {node} has {got} entries for degree {degree}")]
    PortMismatch { node: VertexId, got: usize, degree: usize },
    #[error("trace output failed: {0}")]
    Trace(String),
}

/// A node program. One value of the implementing type is shared read-only by
/// all nodes; per-node mutable data lives in `State`.
pub trait Protocol: Sync {
    type State: Send + Sync;
    type Message: Clone + Send + Sync;
    type Output: Send;

    fn init(&self, ctx: &NodeContext<'_>, rng: &mut ChaCha8Rng) -> (Self::State, Status);

    fn send(&self, ctx: &NodeContext<'_>, state: &Self::State, round: u32, rng: &mut ChaCha8Rng) -> Outbox<Self::Message>;

    /// `inbox` holds `(port, message)` pairs in port order.
    fn receive(
        &self,
        ctx: &NodeContext<'_>,
        state: &mut Self::State,
        round: u32,
        inbox: &[(usize, Self::Message)],
        rng: &mut ChaCha8Rng,
    ) -> Result<Status, ProtocolFault>;

    fn output(&self, ctx: &NodeContext<'_>, state: &Self::State) -> Self::Output;

    fn message_bytes(&self, msg: &Self::Message) -> usize {
        std::mem::size_of_val(msg)
    }

    /// One-line state summary for trace logs.
    fn summarize(&self, _state: &Self::State) -> String {
        String::new()
    }
}

/// Accounting for one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub rounds: u32,
    pub messages_sent: u64,
    pub max_message_bytes: usize,
    /// Every node halted before the round limit.
    pub halted: bool,
}

impl RunStats {
    /// Stats of two runs executed back to back.
    pub fn then(self, next: RunStats) -> RunStats {
        RunStats {
            rounds: self.rounds + next.rounds,
            messages_sent: self.messages_sent + next.messages_sent,
            max_message_bytes: self.max_message_bytes.max(next.max_message_bytes),
            halted: self.halted && next.halted,
        }
    }
}

/// Knowledge shared by every node of the network.
#[derive(Clone, Copy, Debug)]
pub struct GlobalKnowledge {
    pub n: usize,
    pub max_degree: usize,
    pub beta: f64,
}

impl GlobalKnowledge {
    pub fn of(g: &Graph, beta: f64) -> Self {
        GlobalKnowledge { n: g.n(), max_degree: g.max_degree(), beta }
    }
}

pub struct RunConfig<'a> {
    pub seed: u64,
    pub round_limit: u32,
    pub knowledge: Option<GlobalKnowledge>,
    /// JSON-lines sink receiving one record per (round, active node).
    pub trace: Option<&'a mut dyn Write>,
}

impl<'a> RunConfig<'a> {
    pub fn new(seed: u64, round_limit: u32) -> Self {
        RunConfig { seed, round_limit, knowledge: None, trace: None }
    }

    pub fn with_knowledge(mut self, k: GlobalKnowledge) -> Self {
        self.knowledge = Some(k);
        self
    }

    pub fn with_trace(mut self, sink: &'a mut dyn Write) -> Self {
        self.trace = Some(sink);
        self
    }
}

/// Final node outputs and accounting.
#[derive(Debug)]
pub struct RunResult<O> {
    pub outputs: Vec<O>,
    pub stats: RunStats,
}

#[derive(Serialize)]
struct TraceRecord<'s> {
    round: u32,
    node: VertexId,
    status: &'static str,
    state: &'s str,
}

const SEND_PHASE: u64 = 1;
const RECEIVE_PHASE: u64 = 2;

fn node_rng(seed: u64, node: VertexId, round: u32, phase: u64) -> ChaCha8Rng {
    slot_rng(seed, u64::from(node), u64::from(round) * 3 + phase)
}

/// Runs `protocol` on `g` until every node halts or `round_limit` rounds pass.
pub fn run_protocol<P: Protocol>(g: &Graph, protocol: &P, mut cfg: RunConfig<'_>) -> Result<RunResult<P::Output>, SimError> {
    if cfg.round_limit < 1 {
        return Err(SimError::InvalidRoundLimit);
    }
    let knowledge = cfg.knowledge.unwrap_or_else(|| GlobalKnowledge::of(g, f64::NAN));
    let contexts: Vec<NodeContext<'_>> = g
        .vertices()
        .map(|v| NodeContext {
            id: v,
            degree: g.degree(v),
            known_n: knowledge.n,
            known_max_degree: knowledge.max_degree,
            known_beta: knowledge.beta,
            neighbor_ports: g.neighbors(v),
        })
        .collect();
    // reverse_port[v][p]: port under which v appears at its p-th neighbour.
    let reverse_port: Vec<Vec<usize>> = g
        .vertices()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .map(|&u| g.neighbors(u).binary_search(&v).expect("symmetric adjacency"))
                .collect()
        })
        .collect();

    let seed = cfg.seed;
    let (mut states, mut status): (Vec<P::State>, Vec<Status>) =
        contexts.par_iter().map(|ctx| protocol.init(ctx, &mut node_rng(seed, ctx.id, 0, 0))).unzip();
    let mut stats = RunStats::default();

    for round in 1..=cfg.round_limit {
        if status.iter().all(|&s| s == Status::Halted) {
            break;
        }
        stats.rounds = round;

        let outboxes: Vec<Outbox<P::Message>> = contexts
            .par_iter()
            .zip(states.par_iter())
            .zip(status.par_iter())
            .map(|((ctx, state), &st)| match st {
                Status::Halted => Outbox::Silent,
                Status::Active => protocol.send(ctx, state, round, &mut node_rng(seed, ctx.id, round, SEND_PHASE)),
            })
            .collect();

        for (v, out) in outboxes.iter().enumerate() {
            let (count, bytes) = match out {
                Outbox::Silent => (0, 0),
                Outbox::Broadcast(m) => (contexts[v].degree, if contexts[v].degree > 0 { protocol.message_bytes(m) } else { 0 }),
                Outbox::PerPort(ms) => {
                    if ms.len() != contexts[v].degree {
                        return Err(SimError::PortMismatch { node: v as VertexId, got: ms.len(), degree: contexts[v].degree });
                    }
                    let mut max = 0;
                    let mut c = 0;
                    for m in ms.iter().flatten() {
                        c += 1;
                        max = max.max(protocol.message_bytes(m));
                    }
                    (c, max)
                }
            };
            stats.messages_sent += count as u64;
            stats.max_message_bytes = stats.max_message_bytes.max(bytes);
        }

        let results: Vec<Result<Status, (VertexId, String)>> = contexts
            .par_iter()
            .zip(states.par_iter_mut())
            .zip(status.par_iter())
            .map(|((ctx, state), &st)| {
                if st == Status::Halted {
                    return Ok(Status::Halted);
                }
                let v = ctx.id as usize;
                let mut inbox = Vec::new();
                for (p, &u) in ctx.neighbor_ports.iter().enumerate() {
                    let msg = match &outboxes[u as usize] {
                        Outbox::Silent => None,
                        Outbox::Broadcast(m) => Some(m.clone()),
                        Outbox::PerPort(ms) => ms[reverse_port[v][p]].clone(),
                    };
                    if let Some(m) = msg {
                        inbox.push((p, m));
                    }
                }
                protocol
                    .receive(ctx, state, round, &inbox, &mut node_rng(seed, ctx.id, round, RECEIVE_PHASE))
                    .map_err(|f| (ctx.id, f.0))
            })
            .collect();

        if let Some(trace) = cfg.trace.as_deref_mut() {
            for (v, st) in status.iter().enumerate() {
                if *st == Status::Active {
                    let now = results[v].as_ref().ok().copied().unwrap_or(Status::Halted);
                    let summary = protocol.summarize(&states[v]);
                    let rec = TraceRecord {
                        round,
                        node: v as VertexId,
                        status: if now == Status::Halted { "halted" } else { "active" },
                        state: &summary,
                    };
                    let line = serde_json::to_string(&rec).map_err(|e| SimError::Trace(e.to_string()))?;
                    writeln!(trace, "{line}").map_err(|e| SimError::Trace(e.to_string()))?;
                }
            }
        }

        for (v, r) in results.into_iter().enumerate() {
            match r {
                Ok(s) => status[v] = s,
                Err((node, message)) => return Err(SimError::Fault { node, round, message }),
            }
        }
    }

    stats.halted = status.iter().all(|&s| s == Status::Halted);
    let outputs = contexts.iter().zip(&states).map(|(ctx, st)| protocol.output(ctx, st)).collect();
    Ok(RunResult { outputs, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use rand::Rng;

    struct HaltAtOnce;

    impl Protocol for HaltAtOnce {
        type State = ();
        type Message = ();
        type Output = ();
        fn init(&self, _: &NodeContext<'_>, _: &mut ChaCha8Rng) -> ((), Status) {
            ((), Status::Halted)
        }
        fn send(&self, _: &NodeContext<'_>, _: &(), _: u32, _: &mut ChaCha8Rng) -> Outbox<()> {
            unreachable!("halted nodes never send")
        }
        fn receive(&self, _: &NodeContext<'_>, _: &mut (), _: u32, _: &[(usize, ())], _: &mut ChaCha8Rng) -> Result<Status, ProtocolFault> {
            unreachable!()
        }
        fn output(&self, _: &NodeContext<'_>, _: &()) {}
    }

    /// Min-id flooding; halts after a round without improvement.
    struct FloodMin;

    #[derive(Debug)]
    struct FloodState {
        best: VertexId,
        changed: bool,
        settled_at: u32,
        history: Vec<VertexId>,
        coin: u64,
    }

    impl Protocol for FloodMin {
        type State = FloodState;
        type Message = VertexId;
        type Output = (VertexId, u32, u64);

        fn init(&self, ctx: &NodeContext<'_>, _: &mut ChaCha8Rng) -> (FloodState, Status) {
            (FloodState { best: ctx.id, changed: true, settled_at: 0, history: vec![], coin: 0 }, Status::Active)
        }
        fn send(&self, _: &NodeContext<'_>, s: &FloodState, _: u32, _: &mut ChaCha8Rng) -> Outbox<VertexId> {
            Outbox::Broadcast(s.best)
        }
        fn receive(&self, _: &NodeContext<'_>, s: &mut FloodState, round: u32, inbox: &[(usize, VertexId)], rng: &mut ChaCha8Rng) -> Result<Status, ProtocolFault> {
            s.coin ^= rng.gen::<u64>();
            let m = inbox.iter().map(|x| x.1).min().unwrap_or(s.best);
            s.history.push(s.best);
            s.changed = m < s.best;
            if s.changed {
                s.best = m;
                s.settled_at = round;
            }
            Ok(if s.changed || round == 1 { Status::Active } else { Status::Halted })
        }
        fn output(&self, _: &NodeContext<'_>, s: &FloodState) -> (VertexId, u32, u64) {
            (s.best, s.settled_at, s.coin)
        }
        fn summarize(&self, s: &FloodState) -> String {
            format!("best={}", s.best)
        }
    }

    struct FaultAtRound2;

    impl Protocol for FaultAtRound2 {
        type State = ();
        type Message = ();
        type Output = ();
        fn init(&self, _: &NodeContext<'_>, _: &mut ChaCha8Rng) -> ((), Status) {
            ((), Status::Active)
        }
        fn send(&self, _: &NodeContext<'_>, _: &(), _: u32, _: &mut ChaCha8Rng) -> Outbox<()> {
            Outbox::Silent
        }
        fn receive(&self, ctx: &NodeContext<'_>, _: &mut (), round: u32, _: &[(usize, ())], _: &mut ChaCha8Rng) -> Result<Status, ProtocolFault> {
            if round == 2 && ctx.id == 1 {
                Err(ProtocolFault("boom".into()))
            } else {
                Ok(Status::Active)
            }
        }
        fn output(&self, _: &NodeContext<'_>, _: &()) {}
    }

    #[test]
    fn immediate_halt_uses_no_rounds() {
        let r = run_protocol(&path(5), &HaltAtOnce, RunConfig::new(1, 10)).unwrap();
        assert_eq!(r.stats, RunStats { rounds: 0, messages_sent: 0, max_message_bytes: 0, halted: true });
    }

    #[test]
    fn flooding_settles_after_diameter_rounds() {
        // path 3-2-1-0: node 3 learns id 0 after exactly 3 rounds
        let g = path(4);
        let r = run_protocol(&g, &FloodMin, RunConfig::new(5, 50)).unwrap();
        assert!(r.outputs.iter().all(|o| o.0 == 0));
        assert_eq!(r.outputs.iter().map(|o| o.1).max(), Some(3));
        assert!(r.stats.halted);
    }

    #[test]
    fn causality_one_hop_per_round() {
        // The value known after round r can only come from distance <= r.
        let g = path(6);
        struct Probe;
        impl Protocol for Probe {
            type State = Vec<VertexId>;
            type Message = VertexId;
            type Output = Vec<VertexId>;
            fn init(&self, ctx: &NodeContext<'_>, _: &mut ChaCha8Rng) -> (Vec<VertexId>, Status) {
                (vec![ctx.id], Status::Active)
            }
            fn send(&self, _: &NodeContext<'_>, s: &Vec<VertexId>, _: u32, _: &mut ChaCha8Rng) -> Outbox<VertexId> {
                Outbox::Broadcast(*s.last().unwrap())
            }
            fn receive(&self, _: &NodeContext<'_>, s: &mut Vec<VertexId>, round: u32, inbox: &[(usize, VertexId)], _: &mut ChaCha8Rng) -> Result<Status, ProtocolFault> {
                let m = inbox.iter().map(|x| x.1).min().unwrap();
                s.push(m.min(*s.last().unwrap()));
                Ok(if round >= 6 { Status::Halted } else { Status::Active })
            }
            fn output(&self, _: &NodeContext<'_>, s: &Vec<VertexId>) -> Vec<VertexId> {
                s.clone()
            }
        }
        let r = run_protocol(&g, &Probe, RunConfig::new(0, 10)).unwrap();
        for (v, hist) in r.outputs.iter().enumerate() {
            for (round, &known) in hist.iter().enumerate() {
                assert_eq!(known as usize, v.saturating_sub(round));
            }
        }
    }

    #[test]
    fn round_limit_reported() {
        let r = run_protocol(&path(10), &FloodMin, RunConfig::new(5, 2)).unwrap();
        assert_eq!(r.stats.rounds, 2);
        assert!(!r.stats.halted);
        assert!(matches!(run_protocol(&path(3), &FloodMin, RunConfig::new(5, 0)), Err(SimError::InvalidRoundLimit)));
    }

    #[test]
    fn fault_carries_node_and_round() {
        let err = run_protocol(&path(3), &FaultAtRound2, RunConfig::new(0, 5)).unwrap_err();
        assert_eq!(err, SimError::Fault { node: 1, round: 2, message: "boom".into() });
    }

    #[test]
    fn deterministic_by_seed() {
        let g = cycle(30);
        let a = run_protocol(&g, &FloodMin, RunConfig::new(77, 100)).unwrap();
        let b = run_protocol(&g, &FloodMin, RunConfig::new(77, 100)).unwrap();
        assert_eq!(a.outputs, b.outputs);
        assert_eq!(a.stats, b.stats);
        let c = run_protocol(&g, &FloodMin, RunConfig::new(78, 100)).unwrap();
        assert_ne!(a.outputs, c.outputs);
    }

    #[test]
    fn trace_emits_json_lines() {
        let mut buf = Vec::new();
        run_protocol(&path(3), &FloodMin, RunConfig::new(1, 10).with_trace(&mut buf)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["round"], 1);
        assert_eq!(first["node"], 0);
        assert!(first["state"].as_str().unwrap().starts_with("best="));
    }
}
