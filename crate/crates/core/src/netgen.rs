//! Power-law weight sequences and inhomogeneous random graph sampling.
//!
//! Vertex `i` of an `n`-vertex graph carries weight
//! `scale * (n / (n - i))^(1 / (beta - 1))` for `i = 0..n`, so weights are
//! non-decreasing with the vertex id, the smallest is `scale` and the largest
//! is `scale * n^(1 / (beta - 1))`. Each pair `{i, j}` becomes an edge
//! independently with a probability given by a [`Kernel`] applied to
//! `w_i * w_j / W`, where `W` is the total weight.

use std::io::{self, BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::rng::stream_rng;
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("power-law exponent must exceed 2, got {0}")]
    InvalidExponent(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty input")]
    EmptyInput,
}

/// Non-decreasing positive weights with the exponent and scale that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence<R: Real = f64> {
    weights: Vec<R>,
    beta: R,
    scale: R,
}

impl<R: Real> WeightSequence<R> {
    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn beta(&self) -> R {
        self.beta
    }

    pub fn scale(&self) -> R {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> R {
        self.weights.iter().fold(R::zero(), |acc, &w| acc + w)
    }

    /// One weight per line, index-aligned with vertex ids.
    pub fn write_sidecar<W: Write>(&self, mut out: W) -> io::Result<()> {
        for w in &self.weights {
            writeln!(out, "{w}")?;
        }
        out.flush()
    }

    /// Parses a sidecar written by [`WeightSequence::write_sidecar`].
    /// The exponent and scale are not stored in the file and must be supplied.
    pub fn read_sidecar<B: BufRead>(input: B, beta: R, scale: R) -> Result<Self, GenError> {
        let mut weights = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line.map_err(|e| GenError::InvalidInput(e.to_string()))?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let w: R = t
                .parse()
                .map_err(|_| GenError::InvalidInput(format!("line {}: not a number: {t:?}", idx + 1)))?;
            weights.push(w);
        }
        Self::from_weights(weights, beta, scale)
    }

    /// Wraps an explicit weight list, checking positivity and order.
    pub fn from_weights(weights: Vec<R>, beta: R, scale: R) -> Result<Self, GenError> {
        if weights.is_empty() {
            return Err(GenError::EmptyInput);
        }
        if let Some(w) = weights.iter().find(|w| !(**w > R::zero()) || !w.is_finite()) {
            return Err(GenError::InvalidInput(format!("weight {w} is not a positive finite number")));
        }
        if weights.windows(2).any(|p| p[1] < p[0]) {
            return Err(GenError::InvalidInput("weights must be non-decreasing".into()));
        }
        Ok(WeightSequence { weights, beta, scale })
    }
}

/// Edge probability law as a function of `x = w_i * w_j / W`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// `min(1, x)`, the Chung-Lu law.
    #[default]
    ProductCap,
    /// `1 - exp(-x)`, the Norros-Reittu law.
    Exponential,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::ProductCap => "product-cap",
            Kernel::Exponential => "exponential",
        }
    }

    #[inline]
    fn apply<R: Real>(self, x: R) -> R {
        match self {
            Kernel::ProductCap => x.min(R::one()),
            Kernel::Exponential => -(-x).exp_m1(),
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "product-cap" | "chung-lu" => Ok(Kernel::ProductCap),
            "exponential" | "norros-reittu" => Ok(Kernel::Exponential),
            other => Err(GenError::InvalidInput(format!("unknown kernel {other:?}"))),
        }
    }
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn default_scale<R: Real>() -> R {
    R::one()
}

/// Generator parameters; deserialises from `{"n", "beta", "scale", "kernel", "seed"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "R: Real + Deserialize<'de>", serialize = "R: Real + Serialize"))]
pub struct GenConfig<R: Real = f64> {
    pub n: usize,
    pub beta: R,
    #[serde(default = "default_scale")]
    pub scale: R,
    #[serde(default)]
    pub kernel: Kernel,
    #[serde(default)]
    pub seed: u64,
}

impl<R: Real> GenConfig<R> {
    pub fn new(n: usize, beta: R, seed: u64) -> Self {
        GenConfig { n, beta, scale: R::one(), kernel: Kernel::ProductCap, seed }
    }

    pub fn with_scale(mut self, scale: R) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        check_params(self.n, self.beta, self.scale)?;
        if self.n > VertexId::MAX as usize {
            return Err(GenError::InvalidInput(format!("n = {} exceeds the vertex id range", self.n)));
        }
        Ok(())
    }
}

impl<R: Real + for<'de> Deserialize<'de>> GenConfig<R> {
    pub fn from_json(text: &str) -> Result<Self, GenError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| GenError::InvalidInput(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn check_params<R: Real>(n: usize, beta: R, scale: R) -> Result<(), GenError> {
    if !(beta > R::lit(2.0)) || !beta.is_finite() {
        return Err(GenError::InvalidExponent(beta.to_f64_lossy()));
    }
    if n < 2 {
        return Err(GenError::InvalidInput(format!("need at least 2 vertices, got {n}")));
    }
    if !(scale > R::zero()) || !scale.is_finite() {
        return Err(GenError::InvalidInput(format!("scale must be positive, got {scale}")));
    }
    Ok(())
}

/// `scale * (n / (n - i))^(1 / (beta - 1))` for `i = 0..n`.
pub fn weight_sequence<R: Real>(n: usize, beta: R, scale: R) -> Result<WeightSequence<R>, GenError> {
    check_params(n, beta, scale)?;
    let exponent = (beta - R::one()).recip();
    let nf = R::from_count(n);
    let weights = (0..n).map(|i| scale * (nf / R::from_count(n - i)).powf(exponent)).collect();
    Ok(WeightSequence { weights, beta, scale })
}

/// Probability of the edge `{i, j}` under `kernel`.
pub fn edge_probability<R: Real>(w_i: R, w_j: R, total_weight: R, kernel: Kernel) -> Result<R, GenError> {
    for w in [w_i, w_j] {
        if !(w > R::zero()) || !w.is_finite() {
            return Err(GenError::InvalidInput(format!("weight {w} must be positive")));
        }
    }
    if !(total_weight >= w_i.max(w_j)) {
        return Err(GenError::InvalidInput(format!(
            "total weight {total_weight} is below an endpoint weight"
        )));
    }
    Ok(kernel.apply(w_i * w_j / total_weight))
}

/// Samples a graph in expected `O(n + m)` time.
///
/// Vertices are visited from the heaviest down. For a fixed `u`, candidate
/// partners `v < u` are scanned in decreasing weight, so the edge probability
/// `p(u, v)` is non-increasing along the scan. The scan jumps ahead by a
/// geometric number of candidates using the current probability `p` as an
/// upper bound, then accepts the landing candidate with probability
/// `p(u, v) / p` (Miller and Hagberg's skipping scheme). One RNG stream is
/// consumed in a fixed order, so a seed determines the graph exactly.
pub fn sample_graph<R: Real>(cfg: &GenConfig<R>) -> Result<(Graph, WeightSequence<R>), GenError> {
    cfg.validate()?;
    let ws = weight_sequence(cfg.n, cfg.beta, cfg.scale)?;
    let w = ws.weights();
    let total = ws.total();
    let mut rng = stream_rng(cfg.seed, 0);
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();

    for u in (1..cfg.n).rev() {
        let pu = |v: usize| cfg.kernel.apply(w[u] * w[v] / total);
        let mut v = u - 1;
        let mut p = pu(v);
        loop {
            if p < R::one() {
                // Skip k ~ Geometric(p) failures: k = floor(ln r / ln(1 - p)).
                let r = R::lit(1.0 - rng.gen::<f64>());
                let skip = (r.ln() / (-p).ln_1p()).floor();
                match skip.to_usize() {
                    Some(k) if k <= v => v -= k,
                    _ => break,
                }
            }
            let q = pu(v);
            if R::lit(rng.gen::<f64>()) * p < q {
                pairs.push((v as VertexId, u as VertexId));
            }
            p = q;
            if v == 0 {
                break;
            }
            v -= 1;
        }
    }
    pairs.sort_unstable();
    Ok((Graph::from_sorted_unique(cfg.n, &pairs), ws))
}

/// Iterated base-2 logarithm: 0 for `x <= 2`, else `1 + log_star(ceil(log2 x))`.
pub fn log_star(x: u64) -> u32 {
    if x <= 2 {
        0
    } else {
        1 + log_star(ceil_log2(x))
    }
}

/// `ceil(log2 x)` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u64 {
    u64::from(64 - (x - 1).leading_zeros())
}

/// Empirical complementary CDF: for each distinct value `v` in ascending
/// order, the fraction of entries `>= v`.
pub fn eccdf<R: Real>(values: &[R]) -> Result<Vec<(R, R)>, GenError> {
    if values.is_empty() {
        return Err(GenError::EmptyInput);
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(GenError::InvalidInput("NaN in input".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let total = R::from_count(sorted.len());
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        out.push((v, R::from_count(sorted.len() - i) / total));
        while i < sorted.len() && sorted[i] == v {
            i += 1;
        }
    }
    Ok(out)
}
