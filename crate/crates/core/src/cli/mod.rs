//! Experiment runners behind the `spinring` binary.
//!
//! An experiment is one JSON file: the network keys (`K`, `M`, `theta`,
//! `alpha`, `offsets`, `schedule`, `initial`, `steps`) plus `name`,
//! `sample_every` and `outputs`. Every runner writes into an output
//! directory and returns the paths it wrote. Floats are written with 17
//! significant digits so files round-trip exactly and compare bytewise.

pub mod svg;
pub mod verify;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{
    all_cluster_sums, cluster_sum, surplus_correlation, BlochVector, ClusterSum, PeriodicityReport,
    SumRuleReport, SurplusCorrelation, DEFAULT_HORIZON, SUM_RULE_QUBIT_LIMIT,
};
use crate::error::{Error, Result};
use crate::network::{bloch_trajectories, InitialState, NetworkConfig, NetworkConfigFile};
use crate::primitives::{
    enumerate_patterns, evolve_primitive, recursion_series, uniform_weights, PrimitiveEnsemble,
    PrimitiveTrajectory, SignPattern,
};
use crate::statevec::AgentType;

pub use verify::{run_verify, Check, Level, VerifyReport};

/// Largest ring for which `recursion` adds a full-simulation comparison.
pub const RECURSION_COMPARE_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    TrajectoryCsv,
    PatternSvg,
    ClusterJson,
    RecursionCsv,
    VerifyReport,
}

#[derive(Clone, Debug, Deserialize)]
struct ExperimentFile {
    #[serde(default)]
    name: Option<String>,
    #[serde(default = "one")]
    sample_every: usize,
    #[serde(default)]
    outputs: Vec<OutputKind>,
    #[serde(flatten)]
    network: NetworkConfigFile,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub config: NetworkConfig,
    pub steps: usize,
    pub sample_every: usize,
    pub outputs: BTreeSet<OutputKind>,
}

/// Command-line values that take precedence over the experiment file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub steps: Option<usize>,
}

pub fn is_safe_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl ExperimentSpec {
    pub fn from_json_str(text: &str, default_name: &str) -> Result<Self> {
        let file: ExperimentFile = serde_json::from_str(text)?;
        let steps = file.network.steps.unwrap_or(0);
        let name = file.name.unwrap_or_else(|| default_name.to_string());
        let spec = Self {
            name,
            config: file.network.into_config()?,
            steps,
            sample_every: file.sample_every,
            outputs: file.outputs.into_iter().collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("experiment");
        Self::from_json_str(&text, stem)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_safe_name(&self.name) {
            return Err(Error::InvalidConfig(format!(
                "experiment name {:?} is not filesystem-safe",
                self.name
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidConfig(
                "sample_every must be at least 1".into(),
            ));
        }
        self.config.validate()
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(a) = o.alpha {
            self.config.alphas = vec![a; self.config.sites];
        }
        if let Some(s) = o.steps {
            self.steps = s;
        }
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }

    /// Head angle of a sign-tape initial state; zero for the ground state.
    pub fn phi0(&self) -> f64 {
        match &self.config.initial {
            InitialState::SignTape { phi0, .. }
            | InitialState::PatternSuperposition { phi0, .. } => *phi0,
            _ => 0.0,
        }
    }
}

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(dir: &Path, file: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file);
    fs::write(&path, contents)?;
    Ok(path)
}

fn bloch_csv(rows: &[(usize, BlochVector)]) -> String {
    let mut s = String::from("m,lambda1,lambda2,lambda3\n");
    for (m, b) in rows {
        let _ = writeln!(
            s,
            "{m},{},{},{}",
            fmt_num(b.l1),
            fmt_num(b.l2),
            fmt_num(b.l3)
        );
    }
    s
}

/// Writes the sampled Bloch trajectory of every agent, and scatter plots
/// when requested.
pub fn cmd_simulate(spec: &ExperimentSpec, out: &Path, svg: bool) -> Result<Vec<PathBuf>> {
    spec.validate()?;
    let (trajectories, _) = bloch_trajectories(&spec.config, spec.steps)?;
    let mut written = Vec::new();
    for (k, traj) in trajectories.iter().enumerate() {
        let rows: Vec<(usize, BlochVector)> = traj
            .iter()
            .copied()
            .enumerate()
            .step_by(spec.sample_every)
            .collect();
        let stem = format!("{}_S{}", spec.name, k + 1);
        written.push(write_file(out, &format!("{stem}.csv"), &bloch_csv(&rows))?);
        if svg || spec.wants(OutputKind::PatternSvg) {
            let points: Vec<BlochVector> = rows.iter().map(|(_, b)| *b).collect();
            let label = format!("S{}", k + 1);
            written.push(write_file(
                out,
                &format!("{stem}.svg"),
                &svg::scatter(&[(&label, &points)]),
            )?);
        }
    }
    Ok(written)
}

/// Which primitives to emit.
#[derive(Clone, Debug, PartialEq)]
pub enum Selection {
    All,
    Periodic,
    Aperiodic,
    Explicit(Vec<SignPattern>),
}

impl std::str::FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Selection::All),
            "periodic" => Ok(Selection::Periodic),
            "aperiodic" => Ok(Selection::Aperiodic),
            other => other
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<Vec<_>>>()
                .map(Selection::Explicit),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveRecord {
    pub pattern: String,
    pub selected: bool,
    pub report: PeriodicityReport,
}

#[derive(Clone, Debug)]
pub struct PrimitivesOutcome {
    pub records: Vec<PrimitiveRecord>,
    pub files: Vec<PathBuf>,
}

/// `p` for `+`, `m` for `-`, so patterns can go into file names.
pub fn pattern_file_code(p: &SignPattern) -> String {
    p.signs()
        .iter()
        .map(|s| if s.as_char() == '+' { 'p' } else { 'm' })
        .collect()
}

/// Evolves every primitive of the first agent, classifies it, and writes the
/// selected ones together with their equal-weight reconstruction.
pub fn cmd_primitives(
    spec: &ExperimentSpec,
    phi0: f64,
    selection: &Selection,
    horizon: usize,
    out: &Path,
    svg: bool,
) -> Result<PrimitivesOutcome> {
    spec.validate()?;
    let sites = spec.config.sites;
    let kind = spec.config.agent_types[0];
    let alphas = &spec.config.alphas;
    if let Selection::Explicit(ps) = selection {
        if let Some(p) = ps.iter().find(|p| p.len() != sites) {
            return Err(Error::InvalidPattern(format!(
                "{p} has length {} for M = {sites}",
                p.len()
            )));
        }
    }
    let evolve_steps = spec.steps.max(horizon * 2 * sites);
    let trajectories: Vec<PrimitiveTrajectory> = {
        use rayon::prelude::*;
        enumerate_patterns(sites)?
            .par_iter()
            .map(|p| evolve_primitive(p, phi0, alphas, kind, evolve_steps))
            .collect::<Result<_>>()?
    };
    let mut records = Vec::new();
    let mut chosen = Vec::new();
    for t in &trajectories {
        let report = t.periodicity(horizon)?;
        let selected = match selection {
            Selection::All => true,
            Selection::Periodic => report.is_periodic(),
            Selection::Aperiodic => !report.is_periodic(),
            Selection::Explicit(ps) => ps.contains(&t.pattern),
        };
        if selected {
            chosen.push(t);
        }
        records.push(PrimitiveRecord {
            pattern: t.pattern.to_string(),
            selected,
            report,
        });
    }

    let mut files = Vec::new();
    let sampled = |t: &PrimitiveTrajectory| -> Vec<(usize, BlochVector)> {
        t.bloch_samples[..=spec.steps]
            .iter()
            .copied()
            .enumerate()
            .step_by(spec.sample_every)
            .collect()
    };
    for t in &chosen {
        let mut s = String::from("m,pattern,lambda1,lambda2,lambda3\n");
        for (m, b) in sampled(t) {
            let _ = writeln!(
                s,
                "{m},{},{},{},{}",
                t.pattern,
                fmt_num(b.l1),
                fmt_num(b.l2),
                fmt_num(b.l3)
            );
        }
        let file = format!("{}_P{}.csv", spec.name, pattern_file_code(&t.pattern));
        files.push(write_file(out, &file, &s)?);
    }

    if !chosen.is_empty() {
        let patterns: Vec<SignPattern> = chosen.iter().map(|t| t.pattern.clone()).collect();
        let mut ensemble = PrimitiveEnsemble::new(uniform_weights(&patterns))?;
        for t in &chosen {
            ensemble.insert((*t).clone());
        }
        let rows: Vec<(usize, BlochVector)> = (0..=spec.steps)
            .step_by(spec.sample_every)
            .map(|m| ensemble.reconstruct(m).map(|b| (m, b)))
            .collect::<Result<_>>()?;
        files.push(write_file(
            out,
            &format!("{}_reconstruction.csv", spec.name),
            &bloch_csv(&rows),
        )?);
        if svg || spec.wants(OutputKind::PatternSvg) {
            let per_pattern: Vec<(String, Vec<BlochVector>)> = chosen
                .iter()
                .map(|t| {
                    (
                        t.pattern.to_string(),
                        sampled(t).into_iter().map(|(_, b)| b).collect(),
                    )
                })
                .collect();
            let series: Vec<(&str, &[BlochVector])> = per_pattern
                .iter()
                .map(|(l, p)| (l.as_str(), p.as_slice()))
                .collect();
            files.push(write_file(
                out,
                &format!("{}_primitives.svg", spec.name),
                &svg::scatter(&series),
            )?);
            let recon: Vec<BlochVector> = rows.iter().map(|(_, b)| *b).collect();
            files.push(write_file(
                out,
                &format!("{}_reconstruction.svg", spec.name),
                &svg::scatter(&[("reconstruction", &recon)]),
            )?);
        }
    }
    files.push(write_file(
        out,
        &format!("{}_periodicity.json", spec.name),
        &(serde_json::to_string_pretty(&records)? + "\n"),
    )?);
    Ok(PrimitivesOutcome { records, files })
}

#[derive(Clone, Debug, Serialize)]
pub struct RecursionSummary {
    pub sites: usize,
    pub alpha: f64,
    pub steps: usize,
    /// Largest `max(|Y - λ2|, |Z - λ3|)`, when a simulation was run.
    pub max_defect: Option<f64>,
}

/// Writes the recursion rows, with a full-simulation comparison for small rings.
pub fn cmd_recursion(
    name: &str,
    sites: usize,
    alpha: f64,
    steps: usize,
    out: &Path,
) -> Result<(RecursionSummary, Vec<PathBuf>)> {
    if !is_safe_name(name) {
        return Err(Error::InvalidConfig(format!(
            "name {name:?} is not filesystem-safe"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidConfig(
            "recursion needs at least one step".into(),
        ));
    }
    let rows = recursion_series(sites, alpha, steps)?;
    let simulated = if sites <= RECURSION_COMPARE_LIMIT {
        let config = NetworkConfig::single(sites, AgentType::Zero, alpha);
        Some(bloch_trajectories(&config, steps)?.0.remove(0))
    } else {
        None
    };
    let mut s = String::from("m,n,p,Y,Z");
    if simulated.is_some() {
        s.push_str(",sim_lambda2,sim_lambda3,defect");
    }
    s.push('\n');
    let mut max_defect: Option<f64> = None;
    for r in &rows {
        let _ = write!(
            s,
            "{},{},{},{},{}",
            r.m,
            r.n,
            r.p,
            fmt_num(r.y),
            fmt_num(r.z)
        );
        if let Some(sim) = &simulated {
            let b = sim[r.m];
            let d = (r.y - b.l2).abs().max((r.z - b.l3).abs()).max(b.l1.abs());
            max_defect = Some(max_defect.map_or(d, |x| x.max(d)));
            let _ = write!(s, ",{},{},{}", fmt_num(b.l2), fmt_num(b.l3), fmt_num(d));
        }
        s.push('\n');
    }
    let summary = RecursionSummary {
        sites,
        alpha,
        steps,
        max_defect,
    };
    let files = vec![
        write_file(out, &format!("{name}_recursion.csv"), &s)?,
        write_file(
            out,
            &format!("{name}_recursion.json"),
            &(serde_json::to_string_pretty(&summary)? + "\n"),
        )?,
    ];
    Ok((summary, files))
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub pair: [usize; 2],
    #[serde(flatten)]
    pub surplus: SurplusCorrelation,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    pub n_qubits: usize,
    pub steps: usize,
    pub clusters: Vec<ClusterSum>,
    pub sum_rule: Option<SumRuleReport>,
    pub pairs: Vec<PairRecord>,
}

/// Cluster sums of the final state. All clusters and the sum rule up to
/// [`SUM_RULE_QUBIT_LIMIT`] qubits, single qubits and pairs beyond.
pub fn cluster_report(spec: &ExperimentSpec) -> Result<ClusterReport> {
    spec.validate()?;
    let (_, state) = bloch_trajectories(&spec.config, spec.steps)?;
    let n = state.n_qubits();
    let (clusters, sum_rule) = if n <= SUM_RULE_QUBIT_LIMIT {
        let all = all_cluster_sums(&state)?;
        let total: f64 = all.iter().map(|c| c.y).sum();
        let target = ((1u64 << n) - 1) as f64;
        (
            all,
            Some(SumRuleReport {
                total,
                defect: (total - target).abs(),
            }),
        )
    } else {
        let mut v = Vec::new();
        for a in 0..n {
            v.push(cluster_sum(&state, &[a])?);
        }
        for a in 0..n {
            for b in a + 1..n {
                v.push(cluster_sum(&state, &[a, b])?);
            }
        }
        (v, None)
    };
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            pairs.push(PairRecord {
                pair: [a, b],
                surplus: surplus_correlation(&state, (a, b))?,
            });
        }
    }
    Ok(ClusterReport {
        n_qubits: n,
        steps: spec.steps,
        clusters,
        sum_rule,
        pairs,
    })
}

pub fn cmd_clusters(spec: &ExperimentSpec, out: &Path) -> Result<(ClusterReport, PathBuf)> {
    let report = cluster_report(spec)?;
    let path = write_file(
        out,
        &format!("{}_clusters.json", spec.name),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    Ok((report, path))
}

pub const DEFAULT_PRIMITIVE_HORIZON: usize = DEFAULT_HORIZON;
