//! End-to-end concept mining and report serialization.

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{connected_components, diameter, LabeledHypergraph, NodeId};
use crate::hypothesis::PathTestConfig;
use crate::scalar::Scalar;
use crate::spectral::{hcluster, SpectralConfig};
use crate::symmetry::symmetry_clustering;
use crate::walk::{run_walks, topk_walk_count, WalkConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub k_top: usize,
    pub proj_dim: usize,
    pub lambda2_max: f64,
    pub n_min: usize,
    /// Cap on the walk length; `None` walks the full diameter.
    pub max_length: Option<usize>,
    pub seed: u64,
    pub hcluster: bool,
    pub min_expected_count: f64,
    /// Worker threads; 0 leaves the choice to the thread pool. Not part of
    /// the report, since it never changes results.
    #[serde(skip)]
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            alpha: 0.01,
            k_top: 3,
            proj_dim: 2,
            lambda2_max: 0.8,
            n_min: 8,
            max_length: Some(5),
            seed: 0,
            hcluster: true,
            min_expected_count: 5.0,
            threads: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, x: f64| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must lie in (0, 1), got {x}")))
            }
        };
        unit("epsilon", self.epsilon)?;
        unit("alpha", self.alpha)?;
        if self.k_top == 0 || self.proj_dim == 0 {
            return Err(Error::InvalidConfig("top-k and projection dimension must be positive".into()));
        }
        if self.max_length == Some(0) {
            return Err(Error::InvalidConfig("length cap must be positive".into()));
        }
        if !(self.min_expected_count >= 0.0) {
            return Err(Error::InvalidConfig("minimum expected count must be non-negative".into()));
        }
        self.spectral::<f64>().validate()
    }

    pub fn spectral<T: Scalar>(&self) -> SpectralConfig<T> {
        SpectralConfig {
            lambda2_max: T::lit(self.lambda2_max),
            n_min: self.n_min,
            ..SpectralConfig::default()
        }
    }

    pub fn path_test<T: Scalar>(&self) -> PathTestConfig<T> {
        PathTestConfig {
            alpha: T::lit(self.alpha),
            min_expected_count: T::lit(self.min_expected_count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthMargin {
    pub length: usize,
    pub q: f64,
    pub critical: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptEntry {
    pub members: Vec<String>,
    pub parent_tht: f64,
    pub tests: Vec<LengthMargin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSetEntry {
    pub members: Vec<String>,
    pub tht: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceReport {
    pub source: String,
    pub theta_sym: f64,
    pub distance_sets: Vec<DistanceSetEntry>,
    pub unreached: Vec<String>,
    pub concepts: Vec<ConceptEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubReport {
    pub id: usize,
    pub nodes: Vec<String>,
    pub edges: usize,
    pub diameter: usize,
    pub walk_length: usize,
    pub n_walks: u64,
    pub sources: Vec<SourceReport>,
}

/// Wall and summed per-task times of the pipeline stages.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub partition: Duration,
    pub walks: Duration,
    pub clustering: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptReport {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    pub subhypergraphs: Vec<SubReport>,
    #[serde(skip)]
    pub timings: StageTimings,
}

impl ConceptReport {
    pub fn empty() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config: None,
            subhypergraphs: Vec::new(),
            timings: StageTimings::default(),
        }
    }

    pub fn with_config(mut self, cfg: &RunConfig) -> Self {
        self.config = Some(cfg.clone());
        self
    }
}

/// Splits `h` into components, optionally clusters each spectrally, and
/// mines concepts from every node of every resulting sub-hypergraph.
pub fn get_communities<T: Scalar>(h: &LabeledHypergraph, cfg: &RunConfig) -> Result<ConceptReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = ConceptReport::empty();
    if h.is_empty() {
        return Ok(report);
    }

    let spectral = cfg.spectral::<T>();
    let mut subs = Vec::new();
    for comp in connected_components(h) {
        if cfg.hcluster {
            subs.extend(hcluster::<T>(&comp, &spectral)?);
        } else {
            subs.push(comp);
        }
    }
    let partition_time = start.elapsed();

    let path_cfg = cfg.path_test::<T>();
    type Mined = (SubReport, Duration, Duration);
    let mined: Vec<Mined> = subs
        .par_iter()
        .enumerate()
        .map(|(id, sub)| mine_sub::<T>(id, sub, cfg, &path_cfg))
        .collect::<Result<_>>()?;

    let mut walks = Duration::ZERO;
    let mut clustering = Duration::ZERO;
    for (sub, w, c) in mined {
        walks += w;
        clustering += c;
        report.subhypergraphs.push(sub);
    }
    report.timings = StageTimings {
        partition: partition_time,
        walks,
        clustering,
        total: start.elapsed(),
    };
    Ok(report)
}

fn mine_sub<T: Scalar>(
    id: usize,
    sub: &LabeledHypergraph,
    cfg: &RunConfig,
    path_cfg: &PathTestConfig<T>,
) -> Result<(SubReport, Duration, Duration)> {
    let diam = diameter(sub);
    let length = cfg.max_length.map_or(diam, |cap| diam.min(cap)).max(1);
    let n_walks = topk_walk_count(cfg.epsilon, sub.label_count().max(1), length, cfg.k_top)?;
    let walk_cfg = WalkConfig {
        epsilon: cfg.epsilon,
        length,
        n_walks,
        k_top: cfg.k_top,
        seed: cfg.seed,
    };
    let names = |vs: &[NodeId]| -> Vec<String> { vs.iter().map(|&v| sub.node_name(v).to_owned()).collect() };

    let per_source: Vec<(SourceReport, Duration, Duration)> = (0..sub.node_count())
        .into_par_iter()
        .map(|i| {
            let t0 = Instant::now();
            let stats = run_walks(sub, NodeId::new(i), &walk_cfg)?;
            let t1 = Instant::now();
            let sp = symmetry_clustering(&stats, path_cfg, cfg.proj_dim)?;
            let t2 = Instant::now();
            let report = SourceReport {
                source: sub.node_name(NodeId::new(i)).to_owned(),
                theta_sym: sp.theta.to_f64_lossy(),
                distance_sets: sp
                    .distance_sets
                    .iter()
                    .map(|d| DistanceSetEntry {
                        members: names(&d.members),
                        tht: d.tht.to_f64_lossy(),
                    })
                    .collect(),
                unreached: names(&sp.unreached),
                concepts: sp
                    .concepts
                    .iter()
                    .map(|c| ConceptEntry {
                        members: names(&c.members),
                        parent_tht: sp.distance_sets[c.parent].tht.to_f64_lossy(),
                        tests: c
                            .tests
                            .iter()
                            .map(|t| LengthMargin {
                                length: t.length,
                                q: t.q.to_f64_lossy(),
                                critical: t.critical.map(Scalar::to_f64_lossy),
                                passed: t.passed,
                            })
                            .collect(),
                    })
                    .collect(),
            };
            Ok((report, t1 - t0, t2 - t1))
        })
        .collect::<Result<_>>()?;

    let mut walks = Duration::ZERO;
    let mut clustering = Duration::ZERO;
    let mut sources = Vec::with_capacity(per_source.len());
    for (s, w, c) in per_source {
        walks += w;
        clustering += c;
        sources.push(s);
    }
    Ok((
        SubReport {
            id,
            nodes: sub.node_names().to_vec(),
            edges: sub.edge_count(),
            diameter: diam,
            walk_length: length,
            n_walks,
            sources,
        },
        walks,
        clustering,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Tsv,
}

pub const TSV_HEADER: &str = "sub_hypergraph\tsource\tconcept_members\tparent_tht";

pub fn emit_report<W: Write>(r: &ConceptReport, format: ReportFormat, mut out: W) -> Result<()> {
    match format {
        ReportFormat::Json => serde_json::to_writer(&mut out, r)?,
        ReportFormat::Tsv => {
            writeln!(out, "{TSV_HEADER}")?;
            for sub in &r.subhypergraphs {
                for src in &sub.sources {
                    for c in &src.concepts {
                        writeln!(out, "{}\t{}\t{}\t{}", sub.id, src.source, c.members.join(","), c.parent_tht)?;
                    }
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn report_to_string(r: &ConceptReport, format: ReportFormat) -> Result<String> {
    let mut buf = Vec::new();
    emit_report(r, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("reports are UTF-8"))
}

pub fn parse_report(json: &str) -> Result<ConceptReport> {
    Ok(serde_json::from_str(json)?)
}

/// Size and shape of one connected component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub nodes: usize,
    pub edges: usize,
    pub diameter: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypergraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub labels: Vec<String>,
    pub components: Vec<ComponentSummary>,
}

pub fn summarize(h: &LabeledHypergraph) -> HypergraphSummary {
    HypergraphSummary {
        nodes: h.node_count(),
        edges: h.edge_count(),
        labels: h.label_alphabet().to_vec(),
        components: connected_components(h)
            .iter()
            .map(|c| ComponentSummary {
                nodes: c.node_count(),
                edges: c.edge_count(),
                diameter: diameter(c),
            })
            .collect(),
    }
}
