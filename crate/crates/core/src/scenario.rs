//! Scenario-driven experiment runner.
//!
//! A scenario is a JSON file naming a system, interpolation points and a
//! list of analyses; running it deposits one artifact set per analysis in
//! the output directory plus an `index.json` listing every file with its
//! SHA-256. Identical scenario + seed reproduce identical bytes. A failing
//! analysis is recorded in the index and does not stop the others.
//!
//! Complex numbers in scenario files are `[re, im]` pairs.

use crate::catalog;
use crate::error::{Error, Result};
use crate::loewner::{
    build_hermite_loewner, build_loewner, cauchy, HermiteDataSet, LoewnerQuadruple,
    QuadrupleProvenance, TangentialDataSet,
};
use crate::numerics::{c64, svd, C64, ComplexMatrix, RealMatrix};
use crate::pseudospectra::{contours, default_scales, grid_epsilon, GridRegion};
use crate::report::{data_f64, sha256_hex, write_atomic, CsvTable};
use crate::sensitivity::{
    distance_scaling, eta_report_distinct, eta_report_same_point, monte_carlo_poles,
    rho_unstructured, HermitePencilContext, MonteCarloConfig, SisoPencilContext, StructuredKind,
    StructuredReport,
};
use crate::svbounds::{cond_lower_bound, decay_curve, IntervalPairGeometry};
use crate::systems::{SisoPoleResidue, SystemModel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

pub type JsonComplex = [f64; 2];

fn to_c64(v: JsonComplex) -> C64 {
    c64(v[0], v[1])
}

fn to_c64_vec(v: &[JsonComplex]) -> Vec<C64> {
    v.iter().map(|&z| to_c64(z)).collect()
}

fn from_c64(z: C64) -> JsonComplex {
    [z.re, z.im]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemSpec {
    /// Built-in system by name (example1, example2, example42, example43).
    Builtin { name: String },
    PoleResidue { poles: Vec<JsonComplex>, residues: Vec<JsonComplex> },
    /// Diagonal state space: residues are c_i * b_i.
    Diagonal { poles: Vec<JsonComplex>, b: Vec<JsonComplex>, c: Vec<JsonComplex> },
    StateSpace {
        c: Vec<Vec<JsonComplex>>,
        #[serde(default)]
        e: Option<Vec<Vec<JsonComplex>>>,
        a: Vec<Vec<JsonComplex>>,
        b: Vec<Vec<JsonComplex>>,
    },
    Polynomial { coeffs: Vec<JsonComplex> },
}

impl SystemSpec {
    /// Resolves to a pole-residue model where the sensitivity machinery
    /// applies; state-space and polynomial specs are rejected here.
    pub fn to_pole_residue(&self) -> Result<SisoPoleResidue> {
        match self {
            SystemSpec::Builtin { name } => catalog::system_by_name(name),
            SystemSpec::PoleResidue { poles, residues } => {
                SisoPoleResidue::new(to_c64_vec(poles), to_c64_vec(residues))
            }
            SystemSpec::Diagonal { poles, b, c } => {
                if b.len() != poles.len() || c.len() != poles.len() {
                    return Err(Error::ScenarioValidation(
                        "diagonal system needs one b and c entry per pole".into(),
                    ));
                }
                let residues: Vec<C64> =
                    b.iter().zip(c).map(|(&bi, &ci)| to_c64(bi) * to_c64(ci)).collect();
                SisoPoleResidue::new(to_c64_vec(poles), residues)
            }
            SystemSpec::StateSpace { .. } | SystemSpec::Polynomial { .. } => {
                Err(Error::ScenarioValidation(
                    "sensitivity analyses need a pole-residue (or diagonal/builtin) system".into(),
                ))
            }
        }
    }

    /// Resolves to a general model for quadruple building and recovery.
    pub fn to_model(&self) -> Result<SystemModel> {
        match self {
            SystemSpec::StateSpace { c, e, a, b } => {
                let parse = |m: &Vec<Vec<JsonComplex>>| -> Result<ComplexMatrix> {
                    ComplexMatrix::from_rows(&m.iter().map(|row| to_c64_vec(row)).collect::<Vec<_>>())
                };
                let a = parse(a)?;
                let e = match e {
                    Some(m) => parse(m)?,
                    None => ComplexMatrix::identity(a.rows()),
                };
                Ok(SystemModel::StateSpace(crate::systems::StateSpaceSystem::new(
                    parse(c)?,
                    e,
                    a,
                    parse(b)?,
                )?))
            }
            SystemSpec::Polynomial { coeffs } => {
                Ok(SystemModel::Polynomial(crate::systems::PolynomialTF::new(to_c64_vec(coeffs))?))
            }
            other => Ok(SystemModel::PoleResidue(other.to_pole_residue()?)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointsSpec {
    #[serde(default)]
    pub mu: Vec<JsonComplex>,
    #[serde(default)]
    pub lambda: Vec<JsonComplex>,
    #[serde(default)]
    pub hermite: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisKind {
    Loewner,
    Rho,
    Eta,
    Pseudospectra,
    Montecarlo,
    Svbounds,
    DistanceScan,
}

impl AnalysisKind {
    pub fn label(&self) -> &'static str {
        match self {
            AnalysisKind::Loewner => "loewner",
            AnalysisKind::Rho => "rho",
            AnalysisKind::Eta => "eta",
            AnalysisKind::Pseudospectra => "pseudospectra",
            AnalysisKind::Montecarlo => "montecarlo",
            AnalysisKind::Svbounds => "svbounds",
            AnalysisKind::DistanceScan => "distance_scan",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PseudospectraSpec {
    /// [re_min, re_max, im_min, im_max].
    pub region: [f64; 4],
    #[serde(default = "default_grid_n")]
    pub nx: usize,
    #[serde(default = "default_grid_n")]
    pub ny: usize,
    #[serde(default)]
    pub nu: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub levels: Vec<f64>,
}

fn default_grid_n() -> usize {
    200
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceSpec {
    pub base_mu: Vec<JsonComplex>,
    pub base_lambda: Vec<JsonComplex>,
    pub d_values: Vec<f64>,
    /// Separate, deeper sweep for the log-log slope fit; defaults to
    /// `d_values`.
    #[serde(default)]
    pub slope_d_values: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputSpec {
    pub directory: String,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub system: SystemSpec,
    #[serde(default)]
    pub points: Option<PointsSpec>,
    pub analyses: Vec<AnalysisKind>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub pseudospectra: Option<PseudospectraSpec>,
    #[serde(default)]
    pub distance: Option<DistanceSpec>,
    pub output: OutputSpec,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| Error::ScenarioValidation(format!("{e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let needs_points = [
            AnalysisKind::Loewner,
            AnalysisKind::Rho,
            AnalysisKind::Eta,
            AnalysisKind::Pseudospectra,
            AnalysisKind::Montecarlo,
            AnalysisKind::Svbounds,
        ];
        for kind in &self.analyses {
            if needs_points.contains(kind) {
                let pts = self.points.as_ref().ok_or_else(|| {
                    Error::ScenarioValidation(format!(
                        "analysis '{}' needs a points block",
                        kind.label()
                    ))
                })?;
                if pts.mu.is_empty() {
                    return Err(Error::ScenarioValidation("points.mu must be non-empty".into()));
                }
                if !pts.hermite && pts.lambda.is_empty() {
                    return Err(Error::ScenarioValidation(
                        "points.lambda must be non-empty unless hermite = true".into(),
                    ));
                }
            }
            match kind {
                AnalysisKind::Montecarlo if self.noise.is_none() => {
                    return Err(Error::ScenarioValidation("montecarlo needs a noise block".into()));
                }
                AnalysisKind::Pseudospectra if self.pseudospectra.is_none() => {
                    return Err(Error::ScenarioValidation(
                        "pseudospectra needs a pseudospectra block".into(),
                    ));
                }
                AnalysisKind::DistanceScan if self.distance.is_none() => {
                    return Err(Error::ScenarioValidation(
                        "distance_scan needs a distance block".into(),
                    ));
                }
                AnalysisKind::Rho if self.points.as_ref().map(|p| p.hermite).unwrap_or(false) => {
                    return Err(Error::ScenarioValidation(
                        "rho needs distinct left/right points (hermite = false)".into(),
                    ));
                }
                _ => {}
            }
        }
        if let Some(p) = &self.pseudospectra {
            let [a, b, c, d] = p.region;
            if !(a < b && c < d) || p.nx < 2 || p.ny < 2 {
                return Err(Error::ScenarioValidation("malformed pseudospectra region/grid".into()));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Bundled scenarios
// ---------------------------------------------------------------------------

/// Scenario files shipped with the crate, one per tabulated experiment.
pub fn bundled_scenarios() -> BTreeMap<&'static str, &'static str> {
    let mut m = BTreeMap::new();
    m.insert("example1_setting1", include_str!("../scenarios/example1_setting1.json"));
    m.insert("example1_setting2", include_str!("../scenarios/example1_setting2.json"));
    m.insert("example1_setting3", include_str!("../scenarios/example1_setting3.json"));
    m.insert("example1_setting4", include_str!("../scenarios/example1_setting4.json"));
    m.insert("example1_distance", include_str!("../scenarios/example1_distance.json"));
    m.insert("example42", include_str!("../scenarios/example42.json"));
    m.insert("example43", include_str!("../scenarios/example43.json"));
    m.insert("example2_setting1", include_str!("../scenarios/example2_setting1.json"));
    m.insert("example2_setting2", include_str!("../scenarios/example2_setting2.json"));
    m.insert("example2_montecarlo", include_str!("../scenarios/example2_montecarlo.json"));
    m.insert("example2_svbounds", include_str!("../scenarios/example2_svbounds.json"));
    m
}

/// Loads a scenario from a file path or a bundled name.
pub fn load_scenario(spec: &str) -> Result<Scenario> {
    if let Some(text) = bundled_scenarios().get(spec) {
        return Scenario::from_json(text);
    }
    let path = Path::new(spec);
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io { path: spec.to_string(), source: e })?;
    Scenario::from_json(&text)
}

// ---------------------------------------------------------------------------
// Serializable quadruple
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major [re, im] pairs.
    pub entries: Vec<JsonComplex>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.data().iter().map(|&z| from_c64(z)).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::ScenarioValidation("matrix entry count mismatch".into()));
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            to_c64(self.entries[i * self.cols + j])
        }))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceJson {
    Tangential { mu: Vec<JsonComplex>, lambda: Vec<JsonComplex> },
    Hermite { mu: Vec<JsonComplex> },
    Hankel { q: usize, k: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuadrupleJson {
    pub w: MatrixJson,
    pub l: MatrixJson,
    pub ls: MatrixJson,
    pub v: MatrixJson,
    pub provenance: ProvenanceJson,
}

impl QuadrupleJson {
    pub fn from_quadruple(q: &LoewnerQuadruple) -> Self {
        let provenance = match &q.provenance {
            QuadrupleProvenance::Tangential { mu, lambda } => ProvenanceJson::Tangential {
                mu: mu.iter().map(|&z| from_c64(z)).collect(),
                lambda: lambda.iter().map(|&z| from_c64(z)).collect(),
            },
            QuadrupleProvenance::Hermite { mu } => {
                ProvenanceJson::Hermite { mu: mu.iter().map(|&z| from_c64(z)).collect() }
            }
            QuadrupleProvenance::Hankel { q: qq, k } => ProvenanceJson::Hankel { q: *qq, k: *k },
        };
        QuadrupleJson {
            w: MatrixJson::from_matrix(&q.w),
            l: MatrixJson::from_matrix(&q.l),
            ls: MatrixJson::from_matrix(&q.ls),
            v: MatrixJson::from_matrix(&q.v),
            provenance,
        }
    }

    pub fn to_quadruple(&self) -> Result<LoewnerQuadruple> {
        let provenance = match &self.provenance {
            ProvenanceJson::Tangential { mu, lambda } => {
                QuadrupleProvenance::Tangential { mu: to_c64_vec(mu), lambda: to_c64_vec(lambda) }
            }
            ProvenanceJson::Hermite { mu } => QuadrupleProvenance::Hermite { mu: to_c64_vec(mu) },
            ProvenanceJson::Hankel { q, k } => QuadrupleProvenance::Hankel { q: *q, k: *k },
        };
        Ok(LoewnerQuadruple {
            w: self.w.to_matrix()?,
            l: self.l.to_matrix()?,
            ls: self.ls.to_matrix()?,
            v: self.v.to_matrix()?,
            provenance,
        })
    }
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ArtifactRecord {
    pub file: String,
    pub analysis: String,
    pub status: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunIndex {
    pub scenario: String,
    pub artifacts: Vec<ArtifactRecord>,
    pub failures: usize,
}

pub struct RunOutcome {
    pub index_path: PathBuf,
    pub index: RunIndex,
}

struct ArtifactSink {
    dir: PathBuf,
    records: Vec<ArtifactRecord>,
    failures: usize,
}

impl ArtifactSink {
    fn write(&mut self, analysis: AnalysisKind, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.records.push(ArtifactRecord {
            file: name.to_string(),
            analysis: analysis.label().to_string(),
            status: "ok".to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
        Ok(())
    }

    fn record_failure(&mut self, analysis: AnalysisKind, err: &Error) {
        self.failures += 1;
        self.records.push(ArtifactRecord {
            file: String::new(),
            analysis: analysis.label().to_string(),
            status: format!("failed: {err}"),
            sha256: String::new(),
            bytes: 0,
        });
    }
}

/// Runs every analysis of the scenario, writing artifacts under
/// `out_dir_override` (or the scenario's own output directory). The index
/// is written last. Analyses run in the listed order; a failure is
/// recorded and the remaining analyses still run.
pub fn run_scenario(scenario: &Scenario, out_dir_override: Option<&Path>) -> Result<RunOutcome> {
    scenario.validate()?;
    let dir = out_dir_override
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from(&scenario.output.directory));
    std::fs::create_dir_all(&dir)
        .map_err(|e| Error::Io { path: dir.display().to_string(), source: e })?;
    let mut sink = ArtifactSink { dir: dir.clone(), records: Vec::new(), failures: 0 };

    for &kind in &scenario.analyses {
        if let Err(err) = run_analysis(scenario, kind, &mut sink) {
            sink.record_failure(kind, &err);
        }
    }

    let index = RunIndex {
        scenario: scenario.name.clone().unwrap_or_else(|| "unnamed".to_string()),
        artifacts: sink.records,
        failures: sink.failures,
    };
    let index_bytes = serde_json::to_vec_pretty(&index)?;
    let index_path = dir.join("index.json");
    write_atomic(&index_path, &index_bytes)?;
    Ok(RunOutcome { index_path, index })
}

fn points(scenario: &Scenario) -> Result<&PointsSpec> {
    scenario
        .points
        .as_ref()
        .ok_or_else(|| Error::ScenarioValidation("points block required".into()))
}

fn distinct_context(scenario: &Scenario) -> Result<SisoPencilContext> {
    let pts = points(scenario)?;
    if pts.hermite {
        return Err(Error::ScenarioValidation("analysis needs distinct points".into()));
    }
    let pr = scenario.system.to_pole_residue()?;
    SisoPencilContext::new(&pr, to_c64_vec(&pts.mu), to_c64_vec(&pts.lambda))
}

fn run_analysis(scenario: &Scenario, kind: AnalysisKind, sink: &mut ArtifactSink) -> Result<()> {
    match kind {
        AnalysisKind::Loewner => run_loewner(scenario, sink),
        AnalysisKind::Rho => run_rho(scenario, sink),
        AnalysisKind::Eta => run_eta(scenario, sink),
        AnalysisKind::Pseudospectra => run_pseudospectra(scenario, sink),
        AnalysisKind::Montecarlo => run_montecarlo(scenario, sink),
        AnalysisKind::Svbounds => run_svbounds(scenario, sink),
        AnalysisKind::DistanceScan => run_distance(scenario, sink),
    }
}

fn build_quadruple(scenario: &Scenario) -> Result<LoewnerQuadruple> {
    let pts = points(scenario)?;
    let model = scenario.system.to_model()?;
    if pts.hermite {
        let data = HermiteDataSet::sample(&model, to_c64_vec(&pts.mu))?;
        build_hermite_loewner(&data)
    } else {
        let data =
            TangentialDataSet::sample_siso(&model, to_c64_vec(&pts.mu), to_c64_vec(&pts.lambda))?;
        build_loewner(&data)
    }
}

fn run_loewner(scenario: &Scenario, sink: &mut ArtifactSink) -> Result<()> {
    let quad = build_quadruple(scenario)?;
    let json = QuadrupleJson::from_quadruple(&quad);
    sink.write(AnalysisKind::Loewner, "loewner.json", &serde_json::to_vec_pretty(&json)?)?;
    Ok(())
}

fn run_rho(scenario: &Scenario, sink: &mut ArtifactSink) -> Result<()> {
    let ctx = distinct_context(scenario)?;
    let report = rho_unstructured(&ctx, None)?;
    match scenario.output.format {
        OutputFormat::Csv => {
            let mut t = CsvTable::new(&["pole_re", "pole_im", "rho", "zeta", "bound"]);
            for i in 0..report.rho.len() {
                t.push_row(vec![
                    data_f64(report.poles[i].re),
                    data_f64(report.poles[i].im),
                    data_f64(report.rho[i]),
                    data_f64(report.zeta[i]),
                    data_f64(report.bound_per_pole[i]),
                ]);
            }
            sink.write(AnalysisKind::Rho, "rho.csv", &t.to_bytes())?;
        }
        OutputFormat::Json => {
            let body = serde_json::json!({
                "poles": report.poles.iter().map(|&z| from_c64(z)).collect::<Vec<_>>(),
                "rho": report.rho,
                "zeta": report.zeta,
                "bound_per_pole": report.bound_per_pole,
            });
            sink.write(AnalysisKind::Rho, "rho.json", &serde_json::to_vec_pretty(&body)?)?;
        }
    }
    let summary = serde_json::json!({
        "cond_c_mu_pi": report.cond_c_mu_pi,
        "cond_c_lambda_pi": report.cond_c_lambda_pi,
        "rho_l2": report.rho_l2,
        "bound_l2": report.bound_l2,
        "rho_l1": report.rho_l1,
        "bound_l1": report.bound_l1,
        "weights": { "omega0": report.weights.0, "omega1": report.weights.1 },
    });
    sink.write(AnalysisKind::Rho, "rho_summary.json", &serde_json::to_vec_pretty(&summary)?)?;
    Ok(())
}

fn matrix_csv(row_label: &str, poles: &[C64], m: &RealMatrix) -> CsvTable {
    let mut header: Vec<String> = vec![row_label.to_string()];
    for (i, p) in poles.iter().enumerate() {
        header.push(format!("pole_{}_{}", i + 1, compact_complex(*p)));
    }
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut t = CsvTable::new(&header_refs);
    for j in 0..m.rows() {
        let mut row = vec![format!("{}", j + 1)];
        for i in 0..m.cols() {
            row.push(data_f64(m[(j, i)]));
        }
        t.push_row(row);
    }
    t
}

fn compact_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{}{}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
    }
}

fn eta_artifacts(report: &StructuredReport, sigma: Option<f64>, sink: &mut ArtifactSink) -> Result<()> {
    let mut t = CsvTable::new(&["pole_re", "pole_im", "eta", "gaussian_std"]);
    for i in 0..report.eta.len() {
        let std = report.gaussian_std.first().map(|(_, v)| v[i]).unwrap_or(0.0);
        t.push_row(vec![
            data_f64(report.poles[i].re),
            data_f64(report.poles[i].im),
            data_f64(report.eta[i]),
            data_f64(std),
        ]);
    }
    sink.write(AnalysisKind::Eta, "eta.csv", &t.to_bytes())?;
    let first = matrix_csv("measurement", &report.poles, &report.n_mu);
    sink.write(AnalysisKind::Eta, "n_mu.csv", &first.to_bytes())?;
    let second_name = match report.kind {
        StructuredKind::DistinctPoints => "n_lambda.csv",
        StructuredKind::SamePoint => "n_mu_prime.csv",
    };
    let second = matrix_csv("measurement", &report.poles, &report.n_second);
    sink.write(AnalysisKind::Eta, second_name, &second.to_bytes())?;
    let meta = serde_json::json!({
        "kind": match report.kind {
            StructuredKind::DistinctPoints => "distinct_points",
            StructuredKind::SamePoint => "same_point",
        },
        "blocks": match report.kind {
            StructuredKind::DistinctPoints => ["value-left", "value-right"],
            StructuredKind::SamePoint => ["value", "derivative"],
        },
        "sigma": sigma,
    });
    sink.write(AnalysisKind::Eta, "eta_meta.json", &serde_json::to_vec_pretty(&meta)?)?;
    Ok(())
}

fn run_eta(scenario: &Scenario, sink: &mut ArtifactSink) -> Result<()> {
    let pts = points(scenario)?;
    let sigma = scenario.noise.as_ref().map(|n| n.sigma);
    let sigmas: Vec<f64> = sigma.into_iter().collect();
    let pr = scenario.system.to_pole_residue()?;
    let report = if pts.hermite {
        let ctx = HermitePencilContext::new(&pr, to_c64_vec(&pts.mu))?;
        eta_report_same_point(&ctx, &sigmas)?
    } else {
        let ctx = SisoPencilContext::new(&pr, to_c64_vec(&pts.mu), to_c64_vec(&pts.lambda))?;
        eta_report_distinct(&ctx, &sigmas)?
    };
    eta_artifacts(&report, sigma, sink)
}

fn run_pseudospectra(scenario: &Scenario, sink: &mut ArtifactSink) -> Result<()> {
    let spec = scenario.pseudospectra.as_ref().expect("validated");
    let quad = build_quadruple(scenario)?;
    let (nu_default, delta_default) = default_scales(&quad.ls, &quad.l)?;
    let nu = spec.nu.unwrap_or(nu_default);
    let delta = spec.delta.unwrap_or(delta_default);
    let region = GridRegion::new(spec.region[0], spec.region[1], spec.region[2], spec.region[3])?;
    let grid = grid_epsilon(&quad.ls, &quad.l, region, spec.nx, spec.ny, nu, delta)?;

    let mut t = CsvTable::new(&["re", "im", "eps"]);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            t.push_row(vec![
                data_f64(grid.x_coord(ix)),
                data_f64(grid.y_coord(iy)),
                data_f64(grid.values[(iy, ix)]),
            ]);
        }
    }
    sink.write(AnalysisKind::Pseudospectra, "pseudospectra.csv", &t.to_bytes())?;

    let meta = serde_json::json!({
        "region": spec.region,
        "nx": grid.nx,
        "ny": grid.ny,
        "nu": nu,
        "delta": delta,
        "values_row_major": grid.values.data(),
    });
    sink.write(AnalysisKind::Pseudospectra, "pseudospectra.json", &serde_json::to_vec_pretty(&meta)?)?;

    if !spec.levels.is_empty() {
        let polys = contours(&grid, &spec.levels);
        let mut t = CsvTable::new(&["level", "segment_id", "re", "im"]);
        for (seg_id, poly) in polys.iter().enumerate() {
            for z in &poly.points {
                t.push_row(vec![
                    data_f64(poly.level),
                    format!("{seg_id}"),
                    data_f64(z.re),
                    data_f64(z.im),
                ]);
            }
        }
        sink.write(AnalysisKind::Pseudospectra, "contours.csv", &t.to_bytes())?;
    }
    Ok(())
}

fn run_montecarlo(scenario: &Scenario, sink: &mut ArtifactSink) -> Result<()> {
    let noise = scenario.noise.as_ref().expect("validated");
    let ctx = distinct_context(scenario)?;
    let cfg = MonteCarloConfig { sigma: noise.sigma, trials: noise.trials, seed: noise.seed };
    let res = monte_carlo_poles(&ctx, &cfg)?;

    let mut scatter = CsvTable::new(&["trial", "pole_index", "re", "im"]);
    for (t, row) in res.samples.iter().enumerate() {
        for (i, z) in row.iter().enumerate() {
            scatter.push_row(vec![
                format!("{t}"),
                format!("{}", i + 1),
                data_f64(z.re),
                data_f64(z.im),
            ]);
        }
    }
    sink.write(AnalysisKind::Montecarlo, "montecarlo_scatter.csv", &scatter.to_bytes())?;

    let mut summary = CsvTable::new(&[
        "pole_index",
        "pole_re",
        "pole_im",
        "mean_re",
        "mean_im",
        "empirical_std",
        "predicted_std",
    ]);
    for i in 0..res.reference_poles.len() {
        summary.push_row(vec![
            format!("{}", i + 1),
            data_f64(res.reference_poles[i].re),
            data_f64(res.reference_poles[i].im),
            data_f64(res.empirical_mean[i].re),
            data_f64(res.empirical_mean[i].im),
            data_f64(res.empirical_std[i]),
            data_f64(res.predicted_std[i]),
        ]);
    }
    sink.write(AnalysisKind::Montecarlo, "montecarlo_summary.csv", &summary.to_bytes())?;

    let meta = serde_json::json!({
        "sigma": noise.sigma,
        "trials": noise.trials,
        "seed": noise.seed,
        "failed_trials": res.failed_trials,
        "outlier_trials": res.outlier_trials,
    });
    sink.write(AnalysisKind::Montecarlo, "montecarlo_meta.json", &serde_json::to_vec_pretty(&meta)?)?;
    Ok(())
}

fn run_svbounds(scenario: &Scenario, sink: &mut ArtifactSink) -> Result<()> {
    let pts = points(scenario)?;
    if pts.hermite {
        return Err(Error::ScenarioValidation("svbounds needs distinct mu/lambda intervals".into()));
    }
    let mu = to_c64_vec(&pts.mu);
    let lambda = to_c64_vec(&pts.lambda);
    let geom = IntervalPairGeometry::from_nodes(&mu, &lambda)?;
    let c = cauchy(&mu, &lambda)?;
    let sv_c = svd(&c)?.singular_values;
    let model = scenario.system.to_model()?;
    let data = TangentialDataSet::sample_siso(&model, mu.clone(), lambda.clone())?;
    let quad = build_loewner(&data)?;
    let sv_l = svd(&quad.l)?.singular_values;

    for (name, sv, loewner_stride) in
        [("svdecay_cauchy.csv", &sv_c, false), ("svdecay_loewner.csv", &sv_l, true)]
    {
        let curve = decay_curve(&geom, sv, loewner_stride);
        let mut t = CsvTable::new(&["index", "sigma_actual", "sigma_bound"]);
        for (i, (actual, bound)) in curve.iter().enumerate() {
            t.push_row(vec![format!("{}", i + 1), data_f64(*actual), data_f64(*bound)]);
        }
        sink.write(AnalysisKind::Svbounds, name, &t.to_bytes())?;
    }

    // Condition-number lower bounds against the pole intervals. Only
    // emitted when every point interval is real and disjoint from the
    // pole interval; geometries where they overlap (all of the ten-pole
    // settings) have no applicable bound and the file is skipped.
    if let Ok(pr) = scenario.system.to_pole_residue() {
        if pr.poles().iter().all(|p| p.im.abs() < 1e-12) {
            let mut t = CsvTable::new(&["matrix", "kappa_actual", "kappa_lower_bound"]);
            let mut rows = 0;
            for (label, nodes) in [("C_mu_pi", &mu), ("C_lambda_pi", &lambda)] {
                let geom_p = match IntervalPairGeometry::from_nodes(nodes, pr.poles()) {
                    Ok(g) => g,
                    Err(_) => continue,
                };
                let mat = cauchy(nodes, pr.poles())?;
                let actual = crate::numerics::cond2(&mat)?;
                let bound = cond_lower_bound(&geom_p, pr.order().min(nodes.len()))?;
                t.push_row(vec![label.to_string(), data_f64(actual), data_f64(bound)]);
                rows += 1;
            }
            if rows > 0 {
                sink.write(AnalysisKind::Svbounds, "cond_bounds.csv", &t.to_bytes())?;
            }
        }
    }
    Ok(())
}

fn run_distance(scenario: &Scenario, sink: &mut ArtifactSink) -> Result<()> {
    let spec = scenario.distance.as_ref().expect("validated");
    let pr = scenario.system.to_pole_residue()?;
    let base_mu = to_c64_vec(&spec.base_mu);
    let base_lambda = to_c64_vec(&spec.base_lambda);
    let scan = distance_scaling(&pr, &base_mu, &base_lambda, &spec.d_values)?;

    let n = pr.order();
    let mut header: Vec<String> = vec!["d".to_string()];
    for i in 0..n {
        header.push(format!("rho_{}", compact_complex(pr.poles()[i])));
    }
    for i in 0..n {
        header.push(format!("eta_{}", compact_complex(pr.poles()[i])));
    }
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut t = CsvTable::new(&header_refs);
    for s in &scan.samples {
        let mut row = vec![data_f64(s.d)];
        row.extend(s.rho.iter().map(|&x| data_f64(x)));
        row.extend(s.eta.iter().map(|&x| data_f64(x)));
        t.push_row(row);
    }
    sink.write(AnalysisKind::DistanceScan, "distance_scan.csv", &t.to_bytes())?;

    let slope_scan = match &spec.slope_d_values {
        Some(ds) => distance_scaling(&pr, &base_mu, &base_lambda, ds)?,
        None => scan,
    };
    let slopes = serde_json::json!({
        "slope_rho": slope_scan.slope_rho,
        "slope_eta": slope_scan.slope_eta,
        "slope_d_values": spec.slope_d_values.clone().unwrap_or_else(|| spec.d_values.clone()),
    });
    sink.write(AnalysisKind::DistanceScan, "distance_slopes.json", &serde_json::to_vec_pretty(&slopes)?)?;
    Ok(())
}
