//! Two-phase MIS for sparse power-law graphs.
//!
//! Phase I solves the subgraph induced by the high-degree vertices with the
//! flood protocol. One extra round lets the Phase I MIS members tell their
//! neighbours about it. Phase II runs the randomized protocol on what is left:
//! low-degree vertices with no Phase I MIS neighbour.

use std::io::Write;

use crate::graph::{is_valid_mis, Graph, VertexId, VertexSet};
use crate::localsim::{GlobalKnowledge, RunStats};
use crate::netgen::log_star;

use super::flood::run_flood;
use super::luby::run_luby;
use super::{MisError, MisOutcome, PhaseStats, Route};

/// `ceil(log2 n * log* n)`.
pub fn two_phase_threshold(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    ((n as f64).log2() * f64::from(log_star(n as u64))).ceil() as usize
}

/// Phase bookkeeping computed before any protocol runs.
#[derive(Clone, Debug)]
pub struct PhaseSplit {
    pub threshold: usize,
    /// `V_I`: vertices with degree at least `threshold`.
    pub heavy: VertexSet,
}

pub fn phase_split(g: &Graph) -> PhaseSplit {
    let threshold = two_phase_threshold(g.n());
    let mask: Vec<bool> = g.vertices().map(|v| g.degree(v) >= threshold).collect();
    PhaseSplit { threshold, heavy: VertexSet::from_mask(&mask) }
}

pub(crate) fn run_two_phase(
    g: &Graph,
    beta: f64,
    seed: u64,
    round_limit: u32,
    mut trace: Option<&mut dyn Write>,
) -> Result<MisOutcome, MisError> {
    let knowledge = GlobalKnowledge::of(g, beta);
    let split = phase_split(g);

    let (g1, map1) = g.induced_subgraph(&split.heavy)?;
    let phase1 = run_flood(&g1, knowledge, round_limit, "phase-i", trace.as_mut().map(|t| &mut **t as &mut dyn Write))?;
    let mis1 = phase1.mis.lift(&map1, g.n())?;

    // announcement round: each Phase I member broadcasts once
    let mut dominated = vec![false; g.n()];
    let mut announce = RunStats { rounds: 1, messages_sent: 0, max_message_bytes: 0, halted: true };
    for v in mis1.iter() {
        dominated[v as usize] = true;
        for &u in g.neighbors(v) {
            dominated[u as usize] = true;
        }
        announce.messages_sent += g.degree(v) as u64;
        if g.degree(v) > 0 {
            announce.max_message_bytes = 1;
        }
    }

    let light: Vec<bool> = g.vertices().map(|v| !split.heavy.contains(v) && !dominated[v as usize]).collect();
    let light = VertexSet::from_mask(&light);
    let (g2, map2) = g.induced_subgraph(&light)?;
    let remaining = round_limit.saturating_sub(phase1.stats.rounds + 1);
    let phase2 = match run_luby(&g2, knowledge, seed, remaining.max(1), "phase-ii", trace) {
        Ok(p) => p,
        Err(MisError::RoundLimit { rounds, decided, partial, .. }) => {
            let partial = union(&mis1, &partial.lift(&map2, g.n())?);
            return Err(MisError::RoundLimit {
                phase: "phase-ii",
                rounds: phase1.stats.rounds + 1 + rounds,
                decided: split.heavy.len() + (g.n() - split.heavy.len() - light.len()) + decided,
                total: g.n(),
                partial,
            });
        }
        Err(e) => return Err(e),
    };
    let mis2 = phase2.mis.lift(&map2, g.n())?;

    if mis1.iter().any(|v| light.contains(v)) {
        return Err(MisError::Invariant("Phase I member inside V_II".into()));
    }
    if mis2.iter().any(|v| g.neighbors(v).iter().any(|&u| mis1.contains(u))) {
        return Err(MisError::Invariant("edge between the two phase MIS sets".into()));
    }
    let mis = union(&mis1, &mis2);
    if !is_valid_mis(g, &mis)? {
        return Err(MisError::Invariant("union of phase outputs is not a maximal independent set".into()));
    }

    let phases = vec![
        PhaseStats { phase: "phase-i".into(), rounds: phase1.stats.rounds, vertices: g1.n(), mis_size: mis1.len() },
        PhaseStats { phase: "announce".into(), rounds: 1, vertices: mis1.len(), mis_size: 0 },
        PhaseStats { phase: "phase-ii".into(), rounds: phase2.stats.rounds, vertices: g2.n(), mis_size: mis2.len() },
    ];
    Ok(MisOutcome { mis, stats: phase1.stats.then(announce).then(phase2.stats), phases, route: Route::TwoPhase })
}

fn union(a: &VertexSet, b: &VertexSet) -> VertexSet {
    let ids: Vec<VertexId> = a.iter().chain(b.iter()).collect();
    let mut mask = vec![false; a.universe()];
    for v in ids {
        mask[v as usize] = true;
    }
    VertexSet::from_mask(&mask)
}

/// Two-phase MIS with threshold [`two_phase_threshold`]`(n)`.
pub fn two_phase_mis(g: &Graph, seed: u64, round_limit: u32) -> Result<MisOutcome, MisError> {
    run_two_phase(g, f64::NAN, seed, round_limit, None)
}
