//! Graph generation, peeling and distributed maximal independent set
//! protocols for sparse power-law networks.
//!
//! Numeric code (weights, probabilities, fitted exponents) is generic over
//! [`Real`], implemented for `f32` and `f64`. The aliases below fix `f64`
//! or `f32` for the common cases.

pub mod graph;
pub mod localsim;
pub mod mis;
pub mod netgen;
pub mod peeling;
pub mod plfit;
pub mod rng;
pub mod scalar;

pub use graph::{Graph, GraphError, VertexId, VertexSet};
pub use mis::{dispatch_mis, MisError, MisOutcome, Route, Strategy};
pub use netgen::{GenConfig, GenError, Kernel, WeightSequence};
pub use plfit::{FitError, TailFit};
pub use scalar::Real;

pub type WeightSequence64 = WeightSequence<f64>;
pub type WeightSequence32 = WeightSequence<f32>;
pub type GenConfig64 = GenConfig<f64>;
pub type GenConfig32 = GenConfig<f32>;
pub type TailFit64 = TailFit<f64>;
pub type TailFit32 = TailFit<f32>;
