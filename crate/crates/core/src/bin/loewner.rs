//! Command-line front end: build Loewner quadruples, print sensitivity
//! tables, sample pseudospectra, run Monte Carlo noise studies, emit
//! singular-value decay bounds, and drive whole scenario files.
//!
//! Exit codes: 0 success, 2 usage error, 3 validation error, 4 numerical
//! failure.

use clap::{Parser, Subcommand, ValueEnum};
use loewner_pencil::catalog;
use loewner_pencil::error::Error;
use loewner_pencil::loewner::{
    build_hermite_loewner, build_loewner, cauchy, HermiteDataSet, TangentialDataSet,
};
use loewner_pencil::numerics::{c64, cond2, svd, C64};
use loewner_pencil::pseudospectra::{contours, default_scales, grid_epsilon, GridRegion};
use loewner_pencil::report::{data_f64, sci4, sci4_complex, write_atomic, CsvTable};
use loewner_pencil::scenario::{
    bundled_scenarios, load_scenario, run_scenario, QuadrupleJson, SystemSpec,
};
use loewner_pencil::sensitivity::{
    eta_report_distinct, eta_report_same_point, monte_carlo_poles, rho_unstructured,
    HermitePencilContext, MonteCarloConfig, SisoPencilContext,
};
use loewner_pencil::svbounds::{cond_lower_bound, decay_curve, IntervalPairGeometry};
use loewner_pencil::systems::{SisoPoleResidue, SystemModel};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "loewner",
    version,
    about = "Loewner pencils from transfer-function data: factorizations, sensitivities, pseudospectra, decay bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Loewner quadruple from sampled data and write it as JSON.
    Build {
        /// Built-in system name (example1, example2, example42, example43)
        /// or path to a JSON system spec.
        #[arg(long)]
        system: String,
        /// Built-in point setting for example1/example2.
        #[arg(long)]
        setting: Option<usize>,
        /// Left points as comma-separated complex literals (re+imi).
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        /// Right points as comma-separated complex literals.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Same-point (Hermite) data: uses --mu only.
        #[arg(long)]
        hermite: bool,
        /// Output file (JSON) or directory (CSV); JSON prints to stdout
        /// when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Print the unstructured sensitivity table (rho, bounds, condition
    /// numbers), optionally with the structured eta column.
    Sensitivity {
        #[arg(long)]
        system: String,
        #[arg(long)]
        setting: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Also compute the structured sensitivity eta per pole.
        #[arg(long)]
        eta: bool,
        /// Optional CSV output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the eps-(nu, delta) pseudospectra of the data pencil.
    Pseudospectra {
        #[arg(long)]
        system: String,
        #[arg(long)]
        setting: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        hermite: bool,
        /// Region "re_min,re_max,im_min,im_max".
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        #[arg(long, default_value_t = 200)]
        nx: usize,
        #[arg(long, default_value_t = 200)]
        ny: usize,
        /// Perturbation scale on L; defaults to ||L||_2.
        #[arg(long)]
        nu: Option<f64>,
        /// Perturbation scale on Ls; defaults to ||Ls||_2.
        #[arg(long)]
        delta: Option<f64>,
        /// Contour levels, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        levels: Option<String>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild noisy pencils and compare pole scatter with the
    /// sigma*eta prediction.
    Montecarlo {
        #[arg(long)]
        system: String,
        #[arg(long)]
        setting: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit singular-value decay curves with their Grotzsch-ring bounds
    /// and the derived condition-number lower bounds.
    Bounds {
        /// Built-in example number (1 or 2).
        #[arg(long)]
        example: Option<usize>,
        /// Point setting; defaults to the separated split (example 2,
        /// setting 2), the only Example-2 geometry with disjoint
        /// intervals.
        #[arg(long)]
        setting: Option<usize>,
        #[arg(long)]
        system: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Scenario files: run one, or list the bundled names.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run a scenario from a file path or bundled name.
    Run {
        spec: String,
        /// Override the scenario's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List bundled scenario names.
    List,
}

enum CliError {
    Usage(String),
    App(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::App(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ScenarioValidation(_)
        | Error::InvalidArgument(_)
        | Error::Dimension(_)
        | Error::NonFinite { .. }
        | Error::Json(_)
        | Error::Io { .. } => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::App(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

// ---------------------------------------------------------------------------
// Argument resolution
// ---------------------------------------------------------------------------

/// Parses a complex literal of the form `re`, `imi`, or `re+imi`
/// (e.g. `1.5`, `-2i`, `0.3-0.7i`, `1e-3+2.5e2i`).
fn parse_complex(text: &str) -> CliResult<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(usage("empty complex literal"));
    }
    let bad = || usage(format!("malformed complex literal '{text}' (expected re+imi)"));
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the sign splitting real and imaginary parts: the last
        // '+'/'-' that is not leading and not an exponent sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx].parse().map_err(|_| bad())?;
                let im_text = &body[idx..];
                let im: f64 = if im_text == "+" {
                    1.0
                } else if im_text == "-" {
                    -1.0
                } else {
                    im_text.parse().map_err(|_| bad())?
                };
                Ok(c64(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().map_err(|_| bad())?
                };
                Ok(c64(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(c64(re, 0.0))
    }
}

fn parse_complex_list(text: &str) -> CliResult<Vec<C64>> {
    text.split(',').map(parse_complex).collect()
}

fn parse_f64_list(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("malformed number '{t}'"))))
        .collect()
}

/// Resolves a system argument: a built-in name or a JSON file containing
/// a system spec object.
fn resolve_system(spec: &str) -> CliResult<SisoPoleResidue> {
    if let Ok(sys) = catalog::system_by_name(spec) {
        return Ok(sys);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| usage(format!("'{spec}' is not a built-in system and not a readable file: {e}")))?;
    let parsed: SystemSpec = serde_json::from_str(&text).map_err(Error::Json)?;
    Ok(parsed.to_pole_residue()?)
}

/// Resolves interpolation points from --setting or --mu/--lambda.
fn resolve_points(
    system: &str,
    setting: Option<usize>,
    mu: &Option<String>,
    lambda: &Option<String>,
    hermite: bool,
) -> CliResult<(Vec<C64>, Vec<C64>, bool)> {
    if let Some(s) = setting {
        let (mu, lambda) = match system {
            "example1" => catalog::example1_setting(s)?,
            "example2" => catalog::example2_setting(s)?,
            "example42" => catalog::five_pole_distinct_points(),
            "example43" => {
                let pts = catalog::five_pole_same_points();
                return Ok((pts, Vec::new(), true));
            }
            other => return Err(usage(format!("--setting only applies to built-in systems, got '{other}'"))),
        };
        return Ok((mu, lambda, hermite));
    }
    let mu = match mu {
        Some(text) => parse_complex_list(text)?,
        None => {
            if system == "example42" {
                catalog::five_pole_distinct_points().0
            } else if system == "example43" {
                return Ok((catalog::five_pole_same_points(), Vec::new(), true));
            } else {
                return Err(usage("need --setting or --mu"));
            }
        }
    };
    if hermite {
        return Ok((mu, Vec::new(), true));
    }
    let lambda = match lambda {
        Some(text) => parse_complex_list(text)?,
        None => {
            if system == "example42" {
                catalog::five_pole_distinct_points().1
            } else {
                return Err(usage("need --lambda (or --hermite)"));
            }
        }
    };
    Ok((mu, lambda, false))
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Build { system, setting, mu, lambda, hermite, out, format } => {
            cmd_build(&system, setting, &mu, &lambda, hermite, out, format)
        }
        Command::Sensitivity { system, setting, mu, lambda, eta, out } => {
            cmd_sensitivity(&system, setting, &mu, &lambda, eta, out)
        }
        Command::Pseudospectra {
            system,
            setting,
            mu,
            lambda,
            hermite,
            region,
            nx,
            ny,
            nu,
            delta,
            levels,
            out,
        } => cmd_pseudospectra(
            &system, setting, &mu, &lambda, hermite, &region, nx, ny, nu, delta, &levels, &out,
        ),
        Command::Montecarlo { system, setting, mu, lambda, sigma, trials, seed, out } => {
            cmd_montecarlo(&system, setting, &mu, &lambda, sigma, trials, seed, &out)
        }
        Command::Bounds { example, setting, system, mu, lambda, out } => {
            cmd_bounds(example, setting, &system, &mu, &lambda, &out)
        }
        Command::Scenario { action } => match action {
            ScenarioAction::Run { spec, out_dir } => cmd_scenario_run(&spec, out_dir),
            ScenarioAction::List => {
                for name in bundled_scenarios().keys() {
                    println!("{name}");
                }
                Ok(())
            }
        },
    }
}

fn cmd_build(
    system: &str,
    setting: Option<usize>,
    mu: &Option<String>,
    lambda: &Option<String>,
    hermite: bool,
    out: Option<PathBuf>,
    format: FormatArg,
) -> CliResult<()> {
    let pr = resolve_system(system)?;
    let model = SystemModel::PoleResidue(pr);
    let (mu_pts, lambda_pts, hermite) = resolve_points(system, setting, mu, lambda, hermite)?;
    let quad = if hermite {
        build_hermite_loewner(&HermiteDataSet::sample(&model, mu_pts)?)?
    } else {
        build_loewner(&TangentialDataSet::sample_siso(&model, mu_pts, lambda_pts)?)?
    };
    match format {
        FormatArg::Json => {
            let json = QuadrupleJson::from_quadruple(&quad);
            let bytes = serde_json::to_vec_pretty(&json).map_err(Error::Json)?;
            match out {
                Some(path) => {
                    write_atomic(&path, &bytes)?;
                    println!("wrote {}", path.display());
                }
                None => println!("{}", String::from_utf8(bytes).expect("json is utf-8")),
            }
        }
        FormatArg::Csv => {
            // One CSV per matrix, entries as (row, col, re, im).
            let dir = out.ok_or_else(|| usage("--format csv needs --out DIRECTORY"))?;
            for (name, m) in
                [("w.csv", &quad.w), ("l.csv", &quad.l), ("ls.csv", &quad.ls), ("v.csv", &quad.v)]
            {
                let mut t = CsvTable::new(&["row", "col", "re", "im"]);
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        let z = m[(i, j)];
                        t.push_row(vec![
                            format!("{}", i + 1),
                            format!("{}", j + 1),
                            data_f64(z.re),
                            data_f64(z.im),
                        ]);
                    }
                }
                write_atomic(&dir.join(name), &t.to_bytes())?;
            }
            println!("wrote quadruple CSVs to {}", dir.display());
        }
    }
    Ok(())
}

fn cmd_sensitivity(
    system: &str,
    setting: Option<usize>,
    mu: &Option<String>,
    lambda: &Option<String>,
    with_eta: bool,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let pr = resolve_system(system)?;
    let (mu_pts, lambda_pts, hermite) = resolve_points(system, setting, mu, lambda, false)?;
    if hermite {
        // Same-point data has no rho table; print eta instead.
        let ctx = HermitePencilContext::new(&pr, mu_pts)?;
        let rep = eta_report_same_point(&ctx, &[])?;
        println!("same-point structured sensitivity (blocks: value, derivative)");
        for (i, pole) in rep.poles.iter().enumerate() {
            println!("pole {}: eta = {}", sci4_complex(*pole), sci4(rep.eta[i]));
        }
        return Ok(());
    }
    let ctx = SisoPencilContext::new(&pr, mu_pts, lambda_pts)?;
    let report = rho_unstructured(&ctx, None)?;
    let eta = if with_eta { Some(eta_report_distinct(&ctx, &[])?) } else { None };

    println!(
        "cond(C_mu,pi) = {}   cond(C_lambda,pi) = {}",
        sci4(report.cond_c_mu_pi),
        sci4(report.cond_c_lambda_pi)
    );
    for i in 0..report.rho.len() {
        let eta_part = eta
            .as_ref()
            .map(|e| format!("   eta = {}", sci4(e.eta[i])))
            .unwrap_or_default();
        println!(
            "pole {}: rho = {}   bound = {}{}",
            sci4_complex(report.poles[i]),
            sci4(report.rho[i]),
            sci4(report.bound_per_pole[i]),
            eta_part
        );
    }
    println!(
        "||rho||_2 = {}   bound = {}   ||rho||_1 = {}   bound = {}",
        sci4(report.rho_l2),
        sci4(report.bound_l2),
        sci4(report.rho_l1),
        sci4(report.bound_l1)
    );

    if let Some(path) = out {
        let mut header = vec!["pole_re", "pole_im", "rho", "zeta", "bound"];
        if eta.is_some() {
            header.push("eta");
        }
        let mut t = CsvTable::new(&header);
        for i in 0..report.rho.len() {
            let mut row = vec![
                data_f64(report.poles[i].re),
                data_f64(report.poles[i].im),
                data_f64(report.rho[i]),
                data_f64(report.zeta[i]),
                data_f64(report.bound_per_pole[i]),
            ];
            if let Some(e) = &eta {
                row.push(data_f64(e.eta[i]));
            }
            t.push_row(row);
        }
        write_atomic(&path, &t.to_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_pseudospectra(
    system: &str,
    setting: Option<usize>,
    mu: &Option<String>,
    lambda: &Option<String>,
    hermite: bool,
    region_text: &str,
    nx: usize,
    ny: usize,
    nu: Option<f64>,
    delta: Option<f64>,
    levels: &Option<String>,
    out: &Path,
) -> CliResult<()> {
    let pr = resolve_system(system)?;
    let model = SystemModel::PoleResidue(pr);
    let (mu_pts, lambda_pts, hermite) = resolve_points(system, setting, mu, lambda, hermite)?;
    let quad = if hermite {
        build_hermite_loewner(&HermiteDataSet::sample(&model, mu_pts)?)?
    } else {
        build_loewner(&TangentialDataSet::sample_siso(&model, mu_pts, lambda_pts)?)?
    };
    let r = parse_f64_list(region_text)?;
    if r.len() != 4 {
        return Err(usage("--region needs re_min,re_max,im_min,im_max"));
    }
    let region = GridRegion::new(r[0], r[1], r[2], r[3])?;
    let (nu_default, delta_default) = default_scales(&quad.ls, &quad.l)?;
    let grid = grid_epsilon(
        &quad.ls,
        &quad.l,
        region,
        nx,
        ny,
        nu.unwrap_or(nu_default),
        delta.unwrap_or(delta_default),
    )?;

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
    write_atomic(&out.join("pseudospectra.csv"), &t.to_bytes())?;
    let meta = serde_json::json!({
        "region": [r[0], r[1], r[2], r[3]],
        "nx": grid.nx,
        "ny": grid.ny,
        "nu": grid.nu,
        "delta": grid.delta,
        "values_row_major": grid.values.data(),
    });
    write_atomic(
        &out.join("pseudospectra.json"),
        &serde_json::to_vec_pretty(&meta).map_err(Error::Json)?,
    )?;
    if let Some(levels_text) = levels {
        let levels = parse_f64_list(levels_text)?;
        let polys = contours(&grid, &levels);
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
        write_atomic(&out.join("contours.csv"), &t.to_bytes())?;
    }
    println!("wrote pseudospectra grid ({} x {}) to {}", grid.nx, grid.ny, out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_montecarlo(
    system: &str,
    setting: Option<usize>,
    mu: &Option<String>,
    lambda: &Option<String>,
    sigma: f64,
    trials: usize,
    seed: u64,
    out: &Path,
) -> CliResult<()> {
    let pr = resolve_system(system)?;
    let (mu_pts, lambda_pts, hermite) = resolve_points(system, setting, mu, lambda, false)?;
    if hermite {
        return Err(usage("montecarlo needs distinct left/right points"));
    }
    let ctx = SisoPencilContext::new(&pr, mu_pts, lambda_pts)?;
    let res = monte_carlo_poles(&ctx, &MonteCarloConfig { sigma, trials, seed })?;

    let mut scatter = CsvTable::new(&["trial", "pole_index", "re", "im"]);
    for (t, row) in res.samples.iter().enumerate() {
        for (i, z) in row.iter().enumerate() {
            scatter.push_row(vec![format!("{t}"), format!("{}", i + 1), data_f64(z.re), data_f64(z.im)]);
        }
    }
    write_atomic(&out.join("montecarlo_scatter.csv"), &scatter.to_bytes())?;
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
        println!(
            "pole {}: empirical std = {}   predicted sigma*eta = {}",
            sci4_complex(res.reference_poles[i]),
            sci4(res.empirical_std[i]),
            sci4(res.predicted_std[i])
        );
    }
    write_atomic(&out.join("montecarlo_summary.csv"), &summary.to_bytes())?;
    println!(
        "{} trials ({} failed, {} outliers) written to {}",
        trials,
        res.failed_trials,
        res.outlier_trials.len(),
        out.display()
    );
    Ok(())
}

fn cmd_bounds(
    example: Option<usize>,
    setting: Option<usize>,
    system: &Option<String>,
    mu: &Option<String>,
    lambda: &Option<String>,
    out: &Path,
) -> CliResult<()> {
    let (pr, mu_pts, lambda_pts) = match (example, system) {
        (Some(1), _) => {
            let s = setting.unwrap_or(4);
            let (m, l) = catalog::example1_setting(s)?;
            (catalog::example1_system(), m, l)
        }
        (Some(2), _) => {
            // Setting 2 is the separated split; setting 1's interlaced
            // intervals overlap and the bound does not apply there.
            let s = setting.unwrap_or(2);
            let (m, l) = catalog::example2_setting(s)?;
            (catalog::example2_system(), m, l)
        }
        (Some(other), _) => return Err(usage(format!("--example must be 1 or 2, got {other}"))),
        (None, Some(sys)) => {
            let pr = resolve_system(sys)?;
            let (m, l, hermite) = resolve_points(sys, setting, mu, lambda, false)?;
            if hermite {
                return Err(usage("bounds need distinct mu/lambda intervals"));
            }
            (pr, m, l)
        }
        (None, None) => return Err(usage("need --example or --system")),
    };

    let geom = IntervalPairGeometry::from_nodes(&mu_pts, &lambda_pts)?;
    let c = cauchy(&mu_pts, &lambda_pts)?;
    let sv_c = svd(&c)?.singular_values;
    let model = SystemModel::PoleResidue(pr.clone());
    let data = TangentialDataSet::sample_siso(&model, mu_pts.clone(), lambda_pts.clone())?;
    let quad = build_loewner(&data)?;
    let sv_l = svd(&quad.l)?.singular_values;
    for (name, sv, stride) in
        [("svdecay_cauchy.csv", &sv_c, false), ("svdecay_loewner.csv", &sv_l, true)]
    {
        let curve = decay_curve(&geom, sv, stride);
        let mut t = CsvTable::new(&["index", "sigma_actual", "sigma_bound"]);
        for (i, (actual, bound)) in curve.iter().enumerate() {
            t.push_row(vec![format!("{}", i + 1), data_f64(*actual), data_f64(*bound)]);
        }
        write_atomic(&out.join(name), &t.to_bytes())?;
    }
    println!("decay factor rho* = {}", sci4(geom.decay_factor()));

    if pr.poles().iter().all(|p| p.im.abs() < 1e-12) {
        let mut t = CsvTable::new(&["matrix", "kappa_actual", "kappa_lower_bound"]);
        let mut rows = 0;
        for (label, nodes) in [("C_mu_pi", &mu_pts), ("C_lambda_pi", &lambda_pts)] {
            let geom_p = match IntervalPairGeometry::from_nodes(nodes, pr.poles()) {
                Ok(g) => g,
                Err(_) => {
                    println!("kappa({label}): point and pole intervals overlap, no bound");
                    continue;
                }
            };
            let actual = cond2(&cauchy(nodes, pr.poles())?)?;
            let bound = cond_lower_bound(&geom_p, pr.order().min(nodes.len()))?;
            println!("kappa({label}) = {}   lower bound = {}", sci4(actual), sci4(bound));
            t.push_row(vec![label.to_string(), data_f64(actual), data_f64(bound)]);
            rows += 1;
        }
        if rows > 0 {
            write_atomic(&out.join("cond_bounds.csv"), &t.to_bytes())?;
        }
    }
    println!("wrote decay CSVs to {}", out.display());
    Ok(())
}

fn cmd_scenario_run(spec: &str, out_dir: Option<PathBuf>) -> CliResult<()> {
    let scenario = load_scenario(spec)?;
    let outcome = run_scenario(&scenario, out_dir.as_deref())?;
    for record in &outcome.index.artifacts {
        if record.status == "ok" {
            println!("[ok] {} ({} bytes) {}", record.file, record.bytes, record.analysis);
        } else {
            println!("[{}] {}", record.status, record.analysis);
        }
    }
    println!("index: {}", outcome.index_path.display());
    if outcome.index.failures > 0 {
        return Err(CliError::App(Error::AnalysisFailures(outcome.index.failures)));
    }
    Ok(())
}
