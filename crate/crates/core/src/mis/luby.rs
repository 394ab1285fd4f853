//! Random-priority MIS in the style of Luby.
//!
//! Every round each undecided node broadcasts a fresh random priority. A node
//! whose priority beats every priority it received (ties go to the smaller
//! id) joins. A joiner announces itself in the following round, which doubles
//! as the next priority round for everyone else, so one round is one
//! iteration. Receivers of an announcement drop out and halt.

use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexSet};
use crate::localsim::{run_protocol, GlobalKnowledge, NodeContext, Outbox, Protocol, ProtocolFault, RunConfig, Status};

use super::{MisError, MisOutcome, Route};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LubyState {
    Undecided { priority: u64 },
    Joining,
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LubyMsg {
    Priority(u64),
    Joined,
}

pub(crate) struct Luby;

impl Protocol for Luby {
    type State = LubyState;
    type Message = LubyMsg;
    type Output = Option<bool>;

    fn init(&self, _: &NodeContext<'_>, rng: &mut ChaCha8Rng) -> (LubyState, Status) {
        (LubyState::Undecided { priority: rng.gen() }, Status::Active)
    }

    fn send(&self, _: &NodeContext<'_>, state: &LubyState, _: u32, _: &mut ChaCha8Rng) -> Outbox<LubyMsg> {
        match *state {
            LubyState::Undecided { priority } => Outbox::Broadcast(LubyMsg::Priority(priority)),
            LubyState::Joining => Outbox::Broadcast(LubyMsg::Joined),
            LubyState::In | LubyState::Out => Outbox::Silent,
        }
    }

    fn receive(
        &self,
        ctx: &NodeContext<'_>,
        state: &mut LubyState,
        _: u32,
        inbox: &[(usize, LubyMsg)],
        rng: &mut ChaCha8Rng,
    ) -> Result<Status, ProtocolFault> {
        match *state {
            LubyState::Joining => {
                *state = LubyState::In;
                Ok(Status::Halted)
            }
            LubyState::Undecided { priority } => {
                if inbox.iter().any(|(_, m)| *m == LubyMsg::Joined) {
                    *state = LubyState::Out;
                    return Ok(Status::Halted);
                }
                let wins = inbox.iter().all(|&(port, m)| match m {
                    LubyMsg::Priority(other) => {
                        let u = ctx.neighbor_ports[port];
                        (priority, std::cmp::Reverse(ctx.id)) > (other, std::cmp::Reverse(u))
                    }
                    LubyMsg::Joined => unreachable!(),
                });
                if !wins {
                    *state = LubyState::Undecided { priority: rng.gen() };
                    Ok(Status::Active)
                } else if inbox.is_empty() {
                    // every neighbour already halted, nobody to notify
                    *state = LubyState::In;
                    Ok(Status::Halted)
                } else {
                    *state = LubyState::Joining;
                    Ok(Status::Active)
                }
            }
            LubyState::In | LubyState::Out => Err(ProtocolFault("decided node scheduled".into())),
        }
    }

    fn output(&self, _: &NodeContext<'_>, state: &LubyState) -> Option<bool> {
        match state {
            LubyState::In => Some(true),
            LubyState::Out => Some(false),
            LubyState::Undecided { .. } | LubyState::Joining => None,
        }
    }

    fn message_bytes(&self, msg: &LubyMsg) -> usize {
        match msg {
            LubyMsg::Priority(_) => 8,
            LubyMsg::Joined => 1,
        }
    }

    fn summarize(&self, state: &LubyState) -> String {
        format!("{state:?}")
    }
}

/// Outputs of a decided-or-partial run mapped to a vertex set.
pub(crate) fn collect_members(outputs: &[Option<bool>]) -> (VertexSet, usize) {
    let mask: Vec<bool> = outputs.iter().map(|o| *o == Some(true)).collect();
    let decided = outputs.iter().filter(|o| o.is_some()).count();
    (VertexSet::from_mask(&mask), decided)
}

pub(crate) fn run_luby(
    g: &Graph,
    knowledge: GlobalKnowledge,
    seed: u64,
    round_limit: u32,
    phase: &'static str,
    trace: Option<&mut dyn Write>,
) -> Result<MisOutcome, MisError> {
    let mut cfg = RunConfig::new(seed, round_limit).with_knowledge(knowledge);
    cfg.trace = trace;
    let run = run_protocol(g, &Luby, cfg)?;
    let (mis, decided) = collect_members(&run.outputs);
    if !run.stats.halted {
        return Err(MisError::RoundLimit { phase, rounds: run.stats.rounds, decided, total: g.n(), partial: mis });
    }
    Ok(MisOutcome { mis, stats: run.stats, phases: Vec::new(), route: Route::Luby })
}

/// Luby-style MIS on `g`.
pub fn luby_mis(g: &Graph, seed: u64, round_limit: u32) -> Result<MisOutcome, MisError> {
    run_luby(g, GlobalKnowledge::of(g, f64::NAN), seed, round_limit, "luby", None)
}

