//! Distributed MIS protocols running on [`crate::localsim`].

mod flood;
mod luby;
mod two_phase;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};
use crate::localsim::{RunStats, SimError};

pub use flood::{diameter_mis, diameter_mis_reference};
pub use luby::luby_mis;
pub use two_phase::{phase_split, two_phase_mis, two_phase_threshold, PhaseSplit};

#[derive(Debug, Error)]
pub enum MisError {
    #[error("{phase}: round limit reached after {rounds} rounds with {decided} of {total} nodes decided")]
    RoundLimit { phase: &'static str, rounds: u32, decided: usize, total: usize, partial: VertexSet },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("exponent must be a finite number, got {0}")]
    InvalidExponent(f64),
}

/// Which protocol produced an outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Diameter,
    Luby,
    TwoPhase,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Diameter => "diameter",
            Route::Luby => "luby",
            Route::TwoPhase => "two-phase",
        }
    }
}

/// Rounds and sizes of one phase of a multi-phase run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseStats {
    pub phase: String,
    pub rounds: u32,
    /// Vertices taking part in the phase.
    pub vertices: usize,
    pub mis_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MisOutcome {
    pub mis: VertexSet,
    pub stats: RunStats,
    /// Empty for single-phase protocols.
    pub phases: Vec<PhaseStats>,
    pub route: Route,
}

impl MisOutcome {
    /// JSON record with members, stats, phases, seed and config hash.
    pub fn to_json(&self, seed: u64, config_hash: &str) -> serde_json::Value {
        serde_json::json!({
            "route": self.route,
            "mis": self.mis.members(),
            "mis_size": self.mis.len(),
            "rounds": self.stats.rounds,
            "messages_sent": self.stats.messages_sent,
            "max_message_bytes": self.stats.max_message_bytes,
            "phases": self.phases,
            "seed": seed,
            "config_hash": config_hash,
        })
    }

    /// Size of `V_I` for two-phase runs.
    pub fn heavy_count(&self) -> Option<usize> {
        self.phases.iter().find(|p| p.phase == "phase-i").map(|p| p.vertices)
    }
}

/// Protocol selection. `Alg3` and `Alg4` choose by exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Alg3,
    Alg4,
    Luby,
    Diameter,
    TwoPhase,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [Strategy::Luby, Strategy::Diameter, Strategy::TwoPhase, Strategy::Alg3, Strategy::Alg4];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Alg3 => "alg3",
            Strategy::Alg4 => "alg4",
            Strategy::Luby => "luby",
            Strategy::Diameter => "diameter",
            Strategy::TwoPhase => "two-phase",
        }
    }

    /// `Alg3`: diameter for `beta <= 3`. `Alg4`: diameter for `beta < 3`.
    pub fn route(self, beta: f64) -> Result<Route, MisError> {
        if !beta.is_finite() && matches!(self, Strategy::Alg3 | Strategy::Alg4) {
            return Err(MisError::InvalidExponent(beta));
        }
        Ok(match self {
            Strategy::Alg3 if beta <= 3.0 => Route::Diameter,
            Strategy::Alg3 => Route::Luby,
            Strategy::Alg4 if beta < 3.0 => Route::Diameter,
            Strategy::Alg4 => Route::TwoPhase,
            Strategy::Luby => Route::Luby,
            Strategy::Diameter => Route::Diameter,
            Strategy::TwoPhase => Route::TwoPhase,
        })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?} (expected alg3, alg4, luby, diameter or two-phase)"))
    }
}

/// Runs the protocol `strategy` selects for exponent `beta`.
pub fn dispatch_mis(g: &Graph, beta: f64, seed: u64, strategy: Strategy, round_limit: u32) -> Result<MisOutcome, MisError> {
    dispatch_mis_traced(g, beta, seed, strategy, round_limit, None)
}

pub fn dispatch_mis_traced(
    g: &Graph,
    beta: f64,
    seed: u64,
    strategy: Strategy,
    round_limit: u32,
    trace: Option<&mut dyn Write>,
) -> Result<MisOutcome, MisError> {
    let knowledge = crate::localsim::GlobalKnowledge::of(g, beta);
    match strategy.route(beta)? {
        Route::Diameter => flood::run_flood(g, knowledge, round_limit, "diameter", trace),
        Route::Luby => luby::run_luby(g, knowledge, seed, round_limit, "luby", trace),
        Route::TwoPhase => two_phase::run_two_phase(g, beta, seed, round_limit, trace),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{component_diameters, is_valid_mis, VertexId};
    use proptest::prelude::*;
    use super::Strategy;
    use rand::SeedableRng;

    const LIMIT: u32 = 10_000;

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        crate::graph::traversal::tests::random_graph(n, p, &mut rng)
    }

    #[test]
    fn empty_graph_everyone_joins_in_one_round() {
        let g = Graph::empty(7);
        for out in [luby_mis(&g, 1, LIMIT).unwrap(), diameter_mis(&g, LIMIT).unwrap()] {
            assert_eq!(out.mis.len(), 7);
            assert_eq!(out.stats.rounds, 1);
        }
    }

    #[test]
    fn clique_gives_single_vertex() {
        for seed in 0..20 {
            assert_eq!(luby_mis(&complete(9), seed, LIMIT).unwrap().mis.len(), 1);
        }
        assert_eq!(diameter_mis(&complete(9), LIMIT).unwrap().mis.members(), &[0]);
    }

    #[test]
    fn path_by_smallest_id() {
        let out = diameter_mis(&path(3), LIMIT).unwrap();
        assert_eq!(out.mis.members(), &[0, 2]);
        assert!(out.stats.rounds <= 3);
    }

    #[test]
    fn isolated_vertex_first_round() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let out = diameter_mis(&g, LIMIT).unwrap();
        assert!(out.mis.contains(3));
        assert_eq!(out.stats.rounds, 3);
        let alone = diameter_mis(&Graph::empty(1), LIMIT).unwrap();
        assert_eq!((alone.mis.len(), alone.stats.rounds), (1, 1));
    }

    #[test]
    fn round_limit_reports_partial() {
        let err = diameter_mis(&path(10), 3).unwrap_err();
        match err {
            MisError::RoundLimit { rounds, decided, total, .. } => {
                assert_eq!((rounds, decided, total), (3, 0, 10));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn threshold_values() {
        assert_eq!(two_phase_threshold(10_000), 40);
        assert_eq!(two_phase_threshold(100_000), 67);
        assert_eq!(two_phase_threshold(1), 0);
    }

    #[test]
    fn star_center_alone_in_phase_one() {
        let tau = two_phase_threshold(51);
        assert!(50 >= tau);
        let g = star(50);
        let out = two_phase_mis(&g, 3, LIMIT).unwrap();
        assert_eq!(out.mis.members(), &[0]);
        assert_eq!(out.heavy_count(), Some(1));
        assert_eq!(out.phases[2].vertices, 0);
    }

    #[test]
    fn low_degree_graph_matches_luby() {
        let g = cycle(200);
        assert!(g.max_degree() < two_phase_threshold(200));
        for seed in 0..5 {
            let a = two_phase_mis(&g, seed, LIMIT).unwrap();
            let b = luby_mis(&g, seed, LIMIT).unwrap();
            assert_eq!(a.mis, b.mis);
            assert_eq!(a.heavy_count(), Some(0));
            // Phase I on the empty subgraph takes no rounds, plus the announcement
            assert_eq!(a.stats.rounds, b.stats.rounds + 1);
        }
    }

    #[test]
    fn dispatch_boundaries() {
        assert_eq!(Strategy::Alg4.route(2.5).unwrap(), Route::Diameter);
        assert_eq!(Strategy::Alg3.route(3.0).unwrap(), Route::Diameter);
        assert_eq!(Strategy::Alg4.route(3.0).unwrap(), Route::TwoPhase);
        assert_eq!(Strategy::Alg4.route(4.0).unwrap(), Route::TwoPhase);
        assert_eq!(Strategy::Alg3.route(3.5).unwrap(), Route::Luby);
        assert!(matches!(Strategy::Alg3.route(f64::NAN), Err(MisError::InvalidExponent(_))));
        let out = dispatch_mis(&petersen(), 3.0, 0, Strategy::Alg4, LIMIT).unwrap();
        assert_eq!(out.route, Route::TwoPhase);
    }

    #[test]
    fn strategy_names_round_trip() {
        for st in Strategy::ALL {
            assert_eq!(st.name().parse::<Strategy>().unwrap(), st);
        }
        assert!("alg5".parse::<Strategy>().is_err());
    }

    #[test]
    fn json_export() {
        let out = diameter_mis(&path(3), LIMIT).unwrap();
        let v = out.to_json(9, "abc");
        assert_eq!(v["mis"], serde_json::json!([0, 2]));
        assert_eq!(v["seed"], 9);
        assert_eq!(v["config_hash"], "abc");
        assert_eq!(v["route"], "diameter");
    }

    #[test]
    fn trace_is_written() {
        let mut buf = Vec::new();
        dispatch_mis_traced(&path(3), 2.5, 0, Strategy::Alg4, LIMIT, Some(&mut buf)).unwrap();
        assert!(!buf.is_empty());
    }

    proptest! {
        #[test]
        fn every_protocol_is_valid(n in 1usize..60, p in 0.0f64..0.3, seed in any::<u64>()) {
            let g = random_graph(n, p, seed);
            for st in [Strategy::Luby, Strategy::Diameter, Strategy::TwoPhase] {
                let out = dispatch_mis(&g, 3.0, seed, st, LIMIT).unwrap();
                prop_assert!(is_valid_mis(&g, &out.mis).unwrap(), "{st}");
            }
        }

        #[test]
        fn flood_rounds_are_diameter_plus_one(n in 1usize..60, p in 0.0f64..0.2, seed in any::<u64>()) {
            let g = random_graph(n, p, seed);
            let out = diameter_mis(&g, LIMIT).unwrap();
            let ecc = component_diameters(&g);
            prop_assert_eq!(out.stats.rounds, ecc.max_diameter() + 1);
            prop_assert_eq!(&out.mis, &diameter_mis_reference(&g));
        }

        #[test]
        fn two_phase_with_hubs(hubs in 1usize..4, leaves in 40usize..80, extra in 0usize..40, seed in any::<u64>()) {
            // hubs joined to many leaves so Phase I is non-empty
            let n = hubs + leaves;
            let mut edges = Vec::new();
            for h in 0..hubs as VertexId {
                for l in 0..leaves as VertexId {
                    if (l + h) % (hubs as VertexId) == 0 || l % 2 == 0 {
                        edges.push((h, hubs as VertexId + l));
                    }
                }
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..extra {
                use rand::Rng;
                let a = rng.gen_range(hubs..n) as VertexId;
                let b = rng.gen_range(hubs..n) as VertexId;
                if a != b && !edges.contains(&(a.min(b), a.max(b))) {
                    edges.push((a.min(b), a.max(b)));
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let out = two_phase_mis(&g, seed, LIMIT).unwrap();
            prop_assert!(is_valid_mis(&g, &out.mis).unwrap());
        }
    }
}
