//! The five experiments. Each writes `<experiment>.csv` (plus SVG charts for
//! the degeneracy and fit experiments) into the output directory.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sfmis_core::graph::{component_diameters, is_valid_mis, write_edge_list, Graph};
use sfmis_core::mis::{dispatch_mis_traced, phase_split, two_phase_threshold};
use sfmis_core::netgen::sample_graph;
use sfmis_core::peeling::{arboricity_bounds, degeneracy, degeneracy_threshold, modified_degeneracy};
use sfmis_core::plfit::{fit_discrete_powerlaw, gof_pvalue};
use sfmis_core::rng::derive_seed;
use sfmis_core::{FitError, GenConfig64, WeightSequence64};

use crate::config::{Experiment, ExperimentConfig, FitDegrees};
use crate::{svg, HarnessError};

/// Files written by one experiment and the number of rows that did not
/// complete normally.
#[derive(Debug)]
pub struct Report {
    pub csv: PathBuf,
    pub charts: Vec<PathBuf>,
    pub rows: usize,
    pub error_rows: usize,
}

#[derive(Clone, Copy, Debug)]
struct Trial {
    n: usize,
    beta: f64,
    trial: usize,
    seed: u64,
}

fn trials(cfg: &ExperimentConfig) -> Vec<Trial> {
    let mut betas = cfg.beta_list.clone();
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    let mut out = Vec::new();
    for &beta in &betas {
        for &n in &cfg.n_list {
            for trial in 0..cfg.trials {
                out.push(Trial { n, beta, trial, seed: cfg.trial_seed(n, beta, trial) });
            }
        }
    }
    out
}

fn generate(cfg: &ExperimentConfig, t: &Trial) -> Result<(Graph, WeightSequence64), HarnessError> {
    let gen = GenConfig64::new(t.n, t.beta, t.seed).with_scale(cfg.scale).with_kernel(cfg.kernel);
    Ok(sample_graph(&gen)?)
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn beta_label(beta: f64) -> String {
    format!("beta={beta}")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateRow {
    pub config_hash: String,
    pub seed: u64,
    pub beta: f64,
    pub trial: usize,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub mean_degree: f64,
    pub heavy_count: usize,
    pub components: usize,
    pub largest_component: usize,
    pub edge_file: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyRow {
    pub config_hash: String,
    pub seed: u64,
    pub beta: f64,
    pub trial: usize,
    pub n: usize,
    pub m: usize,
    pub degeneracy: usize,
    pub modified_degeneracy: usize,
    pub arboricity_lower: Option<usize>,
    pub threshold: f64,
    /// `beta-below-3` when the exponent is outside the analysed range.
    pub flag: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub config_hash: String,
    pub beta_config: f64,
    pub seed: u64,
    pub trial: usize,
    pub n: usize,
    pub tau: usize,
    /// `|V_I|`, vertices with degree at least `tau`.
    pub heavy_count: usize,
    pub degrees: String,
    /// Positive degrees handed to the fitter.
    pub fitted_count: usize,
    /// `ok`, `insufficient-data` or `failed`.
    pub status: String,
    pub alpha_hat: Option<f64>,
    pub xmin: Option<u64>,
    pub ks_distance: Option<f64>,
    pub tail_size: Option<usize>,
    pub p_value: Option<f64>,
    /// `beta-at-most-3` when the exponent is outside the analysed range.
    pub flag: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MisRow {
    pub config_hash: String,
    pub seed: u64,
    pub beta: f64,
    pub trial: usize,
    pub n: usize,
    pub strategy: String,
    pub route: String,
    /// `ok`, `invalid` or `failed`.
    pub status: String,
    pub reason: String,
    pub valid: Option<bool>,
    pub rounds: Option<u32>,
    pub messages_sent: Option<u64>,
    pub max_message_bytes: Option<usize>,
    pub mis_size: Option<usize>,
    pub heavy_count: Option<usize>,
    pub phase1_rounds: Option<u32>,
    pub phase2_rounds: Option<u32>,
    pub phase2_vertices: Option<usize>,
    pub largest_component_diameter: u32,
    pub max_component_diameter: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterRow {
    pub config_hash: String,
    pub seed: u64,
    pub beta: f64,
    pub trial: usize,
    pub n: usize,
    pub m: usize,
    pub components: usize,
    pub largest_component_size: usize,
    pub largest_component_diameter: u32,
    pub max_component_diameter: u32,
}

/// Runs `cfg.experiment`, creating the output directory if needed.
pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output_dir)?;
    match cfg.experiment {
        Experiment::Generate => run_generate(cfg),
        Experiment::Degeneracy => run_degeneracy(cfg),
        Experiment::Mis => run_mis(cfg),
        Experiment::Fit => run_fit(cfg),
        Experiment::Diameter => run_diameter(cfg),
    }
}

fn report(cfg: &ExperimentConfig, charts: Vec<PathBuf>, rows: usize, error_rows: usize) -> Report {
    Report { csv: cfg.output_dir.join(format!("{}.csv", cfg.experiment)), charts, rows, error_rows }
}

pub fn run_generate(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let hash = cfg.hash();
    let graphs = cfg.output_dir.join("graphs");
    fs::create_dir_all(&graphs)?;
    let rows: Vec<GenerateRow> = trials(cfg)
        .par_iter()
        .map(|t| {
            let (g, ws) = generate(cfg, t)?;
            let stem = format!("n{}_beta{}_t{}", t.n, t.beta, t.trial);
            write_edge_list(&g, BufWriter::new(File::create(graphs.join(format!("{stem}.edges")))?))?;
            ws.write_sidecar(BufWriter::new(File::create(graphs.join(format!("{stem}.weights")))?))?;
            let comps = component_diameters(&g);
            Ok(GenerateRow {
                config_hash: hash.clone(),
                seed: t.seed,
                beta: t.beta,
                trial: t.trial,
                n: t.n,
                m: g.m(),
                max_degree: g.max_degree(),
                mean_degree: 2.0 * g.m() as f64 / t.n as f64,
                heavy_count: phase_split(&g).heavy.len(),
                components: comps.components.len(),
                largest_component: comps.largest_component().map_or(0, |c| c.size),
                edge_file: format!("graphs/{stem}.edges"),
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let r = report(cfg, Vec::new(), rows.len(), 0);
    write_csv(&r.csv, &rows)?;
    Ok(r)
}

pub fn run_degeneracy(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let hash = cfg.hash();
    let rows: Vec<DegeneracyRow> = trials(cfg)
        .par_iter()
        .map(|t| {
            let (g, ws) = generate(cfg, t)?;
            Ok(DegeneracyRow {
                config_hash: hash.clone(),
                seed: t.seed,
                beta: t.beta,
                trial: t.trial,
                n: t.n,
                m: g.m(),
                degeneracy: degeneracy(&g).value,
                modified_degeneracy: modified_degeneracy(&g, &ws)?.value,
                arboricity_lower: arboricity_bounds(&g).ok().map(|b| b.lower),
                threshold: degeneracy_threshold(t.n),
                flag: if t.beta < 3.0 { "beta-below-3".into() } else { String::new() },
            })
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut charts = Vec::new();
    for &n in &cfg.n_list {
        let groups: Vec<(String, Vec<usize>)> = group_by_beta(rows.iter().filter(|r| r.n == n), |r| r.beta, |r| r.degeneracy);
        let path = cfg.output_dir.join(format!("degeneracy_n{n}.svg"));
        let title = format!("degeneracy, n = {n}");
        fs::write(&path, svg::histograms(&title, "degeneracy", &groups, degeneracy_threshold(n)))?;
        charts.push(path);
    }
    let r = report(cfg, charts, rows.len(), 0);
    write_csv(&r.csv, &rows)?;
    Ok(r)
}

fn group_by_beta<'a, T: 'a, V>(rows: impl Iterator<Item = &'a T>, beta: impl Fn(&T) -> f64, value: impl Fn(&T) -> V) -> Vec<(String, Vec<V>)> {
    let mut groups: Vec<(f64, Vec<V>)> = Vec::new();
    for r in rows {
        let b = beta(r);
        match groups.iter_mut().find(|(gb, _)| *gb == b) {
            Some((_, vs)) => vs.push(value(r)),
            None => groups.push((b, vec![value(r)])),
        }
    }
    groups.into_iter().map(|(b, vs)| (beta_label(b), vs)).collect()
}

pub fn run_fit(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let hash = cfg.hash();
    let rows: Vec<FitRow> = trials(cfg)
        .par_iter()
        .map(|t| {
            let (g, _) = generate(cfg, t)?;
            let split = phase_split(&g);
            let degrees: Vec<u64> = match cfg.fit_degrees {
                FitDegrees::Internal => {
                    let (g1, _) = g.induced_subgraph(&split.heavy)?;
                    g1.degrees().into_iter().map(|d| d as u64).collect()
                }
                FitDegrees::Original => split.heavy.iter().map(|v| g.degree(v) as u64).collect(),
            };
            let degrees: Vec<u64> = degrees.into_iter().filter(|&d| d > 0).collect();
            let mut row = FitRow {
                config_hash: hash.clone(),
                beta_config: t.beta,
                seed: t.seed,
                trial: t.trial,
                n: t.n,
                tau: split.threshold,
                heavy_count: split.heavy.len(),
                degrees: match cfg.fit_degrees {
                    FitDegrees::Internal => "internal".into(),
                    FitDegrees::Original => "original".into(),
                },
                fitted_count: degrees.len(),
                status: "ok".into(),
                alpha_hat: None,
                xmin: None,
                ks_distance: None,
                tail_size: None,
                p_value: None,
                flag: if t.beta <= 3.0 { "beta-at-most-3".into() } else { String::new() },
            };
            let fitted = fit_discrete_powerlaw::<f64>(&degrees).and_then(|fit| {
                let p = gof_pvalue(&degrees, &fit, cfg.n_bootstrap, derive_seed(t.seed, &[2]))?;
                Ok((fit, p))
            });
            match fitted {
                Ok((fit, p)) => {
                    row.alpha_hat = Some(fit.alpha_hat);
                    row.xmin = Some(fit.xmin);
                    row.ks_distance = Some(fit.ks_distance);
                    row.tail_size = Some(fit.tail_size);
                    row.p_value = Some(p);
                }
                Err(FitError::InsufficientData { .. }) => row.status = "insufficient-data".into(),
                Err(e) => row.status = format!("failed: {e}"),
            }
            Ok(row)
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut charts = Vec::new();
    for &n in &cfg.n_list {
        let groups = group_by_beta(rows.iter().filter(|r| r.n == n), |r| r.beta_config, |r| r.p_value.unwrap_or(f64::NAN));
        let path = cfg.output_dir.join(format!("fit_n{n}.svg"));
        let title = format!("tail fit p-values, n = {n}, tau = {}", two_phase_threshold(n));
        fs::write(&path, svg::boxplots(&title, "p-value", &groups, 0.10))?;
        charts.push(path);
    }
    let errors = rows.iter().filter(|r| r.status != "ok").count();
    let r = report(cfg, charts, rows.len(), errors);
    write_csv(&r.csv, &rows)?;
    Ok(r)
}

pub fn run_mis(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let hash = cfg.hash();
    let trace_dir = cfg.output_dir.join("traces");
    if cfg.trace {
        fs::create_dir_all(&trace_dir)?;
    }
    let per_trial: Vec<Vec<MisRow>> = trials(cfg)
        .par_iter()
        .map(|t| {
            let (g, _) = generate(cfg, t)?;
            let comps = component_diameters(&g);
            let protocol_seed = derive_seed(t.seed, &[1]);
            cfg.strategies
                .iter()
                .map(|&st| {
                    let mut row = MisRow {
                        config_hash: hash.clone(),
                        seed: t.seed,
                        beta: t.beta,
                        trial: t.trial,
                        n: t.n,
                        strategy: st.name().into(),
                        route: st.route(t.beta).map(|r| r.name().to_string()).unwrap_or_default(),
                        status: "ok".into(),
                        reason: String::new(),
                        valid: None,
                        rounds: None,
                        messages_sent: None,
                        max_message_bytes: None,
                        mis_size: None,
                        heavy_count: None,
                        phase1_rounds: None,
                        phase2_rounds: None,
                        phase2_vertices: None,
                        largest_component_diameter: comps.largest_component_diameter(),
                        max_component_diameter: comps.max_diameter(),
                    };
                    let result = if cfg.trace {
                        let path = trace_dir.join(format!("n{}_beta{}_t{}_{}.jsonl", t.n, t.beta, t.trial, st.name()));
                        let mut sink = BufWriter::new(File::create(path)?);
                        dispatch_mis_traced(&g, t.beta, protocol_seed, st, cfg.round_limit, Some(&mut sink))
                    } else {
                        dispatch_mis_traced(&g, t.beta, protocol_seed, st, cfg.round_limit, None)
                    };
                    match result {
                        Ok(out) => {
                            let valid = is_valid_mis(&g, &out.mis)?;
                            row.valid = Some(valid);
                            if !valid {
                                row.status = "invalid".into();
                                row.reason = "output is not a maximal independent set".into();
                            }
                            row.rounds = Some(out.stats.rounds);
                            row.messages_sent = Some(out.stats.messages_sent);
                            row.max_message_bytes = Some(out.stats.max_message_bytes);
                            row.mis_size = Some(out.mis.len());
                            row.heavy_count = out.heavy_count();
                            if let [p1, _, p2] = out.phases.as_slice() {
                                row.phase1_rounds = Some(p1.rounds);
                                row.phase2_rounds = Some(p2.rounds);
                                row.phase2_vertices = Some(p2.vertices);
                            }
                        }
                        Err(e) => {
                            row.status = "failed".into();
                            row.reason = e.to_string();
                        }
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>, HarnessError>>()
        })
        .collect::<Result<_, HarnessError>>()?;
    let rows: Vec<MisRow> = per_trial.into_iter().flatten().collect();
    let errors = rows.iter().filter(|r| r.status != "ok").count();
    let r = report(cfg, Vec::new(), rows.len(), errors);
    write_csv(&r.csv, &rows)?;
    Ok(r)
}

pub fn run_diameter(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let hash = cfg.hash();
    let rows: Vec<DiameterRow> = trials(cfg)
        .par_iter()
        .map(|t| {
            let (g, _) = generate(cfg, t)?;
            let comps = component_diameters(&g);
            Ok(DiameterRow {
                config_hash: hash.clone(),
                seed: t.seed,
                beta: t.beta,
                trial: t.trial,
                n: t.n,
                m: g.m(),
                components: comps.components.len(),
                largest_component_size: comps.largest_component().map_or(0, |c| c.size),
                largest_component_diameter: comps.largest_component_diameter(),
                max_component_diameter: comps.max_diameter(),
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let r = report(cfg, Vec::new(), rows.len(), 0);
    write_csv(&r.csv, &rows)?;
    Ok(r)
}

/// Reads rows written by one of the experiments.
pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, HarnessError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

