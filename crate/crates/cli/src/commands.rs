//! One function per subcommand, each a thin wrapper over the library
//! operation that assembles the run report.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::Value;

use transradii::deviation::DeviationVariant;
use transradii::error::OpError;
use transradii::georange;
use transradii::pair::{validate_pair, OperatorPair, ToleranceSet};
use transradii::radii::{self, OracleConfig, RadiusResult};
use transradii::states;
use transradii::stationary;
use transradii::translation;
use transradii::{ComplexMatrix, UnitVector};

use crate::format::{complex_json, matrix_json, parse_matrix, parse_vector, vector_json};
use crate::report::{Check, RunReport, EXIT_CHECKS_FAILED, EXIT_PARSE, EXIT_PRECONDITION};

/// Error with the exit code it maps to and a machine-readable kind.
pub struct CliError {
    pub exit_code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_PARSE,
            kind: "parse",
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "error": { "kind": self.kind, "message": self.message }
        })
    }
}

impl From<OpError> for CliError {
    fn from(err: OpError) -> Self {
        let (exit_code, kind) = match &err {
            OpError::InvalidMatrix | OpError::InvalidVector => (EXIT_PARSE, "invalid-input"),
            OpError::DimensionMismatch(..) => (EXIT_PRECONDITION, "dimension-mismatch"),
            OpError::InvalidTolerance(_) => (EXIT_PRECONDITION, "invalid-tolerance"),
            OpError::SingularDirection { .. } => (EXIT_PRECONDITION, "singular-direction"),
            OpError::NumericalRangeZero { .. } => (EXIT_PRECONDITION, "numerical-range-zero"),
            OpError::KernelVector { .. } => (EXIT_PRECONDITION, "kernel-vector"),
            OpError::UnsupportedDimension { .. } => (EXIT_PRECONDITION, "unsupported-dimension"),
            OpError::DegenerateMaximizer => (EXIT_PRECONDITION, "degenerate-maximizer"),
            OpError::DegenerateStationary => (EXIT_PRECONDITION, "degenerate-stationary"),
            OpError::NotHermitian { .. } => (EXIT_PRECONDITION, "not-hermitian"),
            OpError::NotSelfadjoint { .. } => (EXIT_PRECONDITION, "not-selfadjoint"),
            OpError::HypothesisViolated { .. } => (EXIT_PRECONDITION, "hypothesis-violated"),
            OpError::StateOutsideP { .. } => (EXIT_PRECONDITION, "state-outside-admissible-set"),
            OpError::NotAState(_) => (EXIT_PRECONDITION, "not-a-state"),
            OpError::NonConvergence => (EXIT_CHECKS_FAILED, "non-convergence"),
            OpError::CertificateNotFound { .. } => (EXIT_CHECKS_FAILED, "certificate-not-found"),
            OpError::NumericalFailure(_) => (EXIT_CHECKS_FAILED, "numerical-failure"),
        };
        Self {
            exit_code,
            kind,
            message: err.to_string(),
        }
    }
}

pub struct CommonOptions {
    pub tol_identity: f64,
    pub tol_opt: f64,
    pub starts: usize,
    pub seed: u64,
}

impl CommonOptions {
    pub fn tolerances(&self) -> Result<ToleranceSet, CliError> {
        Ok(ToleranceSet::new(
            self.tol_identity,
            self.tol_opt,
            ToleranceSet::default().rank_tol,
        )?)
    }

    fn record(&self, report: &mut RunReport) {
        report.parameter("tol_identity", self.tol_identity);
        report.parameter("tol_opt", self.tol_opt);
        report.parameter("starts", self.starts);
        report.parameter("seed", self.seed);
    }
}

struct LoadedMatrix {
    path: String,
    bytes: Vec<u8>,
    matrix: ComplexMatrix,
}

fn load_matrix(path: &Path) -> Result<LoadedMatrix, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let matrix = parse_matrix(&bytes)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    Ok(LoadedMatrix {
        path: path.display().to_string(),
        bytes,
        matrix,
    })
}

fn load_pair(
    t_path: &Path,
    a_path: &Path,
    tol: ToleranceSet,
    report: &mut RunReport,
) -> Result<OperatorPair, CliError> {
    let t = load_matrix(t_path)?;
    let a = load_matrix(a_path)?;
    report.input("t_file", &t.path, &t.bytes);
    report.input("a_file", &a.path, &a.bytes);
    Ok(validate_pair(t.matrix, a.matrix, tol)?)
}

fn load_start(
    start: &Option<PathBuf>,
    pair: &OperatorPair,
    seed: u64,
    report: &mut RunReport,
) -> Result<UnitVector, CliError> {
    match start {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
            let v = parse_vector(&bytes)
                .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
            if v.dim() != pair.n() {
                return Err(CliError::from(OpError::DimensionMismatch(
                    v.dim(),
                    1,
                    pair.n(),
                    1,
                )));
            }
            report.input("start_file", &path.display().to_string(), &bytes);
            Ok(v)
        }
        None => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let comps: Vec<Complex64> = (0..pair.n())
                .map(|_| {
                    Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
                })
                .collect();
            Ok(UnitVector::new(&comps)?)
        }
    }
}

fn radius_results_json(r: &RadiusResult) -> Value {
    serde_json::json!({
        "value": r.value,
        "maximizer": vector_json(r.maximizer.components()),
        "lambda": complex_json(r.report.lambda),
        "stationary_residual": r.stationary_residual,
        "starts_used": r.starts_used,
        "converged_starts": r.converged_starts,
    })
}

pub fn cmd_radius(
    t_path: &Path,
    a_path: &Path,
    tilde: bool,
    oracle: bool,
    alpha_steps: usize,
    beta_steps: usize,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("radius");
    let tol = common.tolerances()?;
    let pair = load_pair(t_path, a_path, tol, &mut report)?;
    common.record(&mut report);
    report.parameter("tilde", tilde);
    report.parameter("oracle", oracle);

    let result = if tilde {
        radii::radius_tilde(&pair, common.starts, common.seed)?
    } else {
        radii::radius(&pair, common.starts, common.seed)?
    };
    let mut results = radius_results_json(&result);

    report.checks.push(Check::measured(
        "converged",
        result.is_converged(),
        result.starts_used as f64 - result.converged_starts as f64,
    ));
    if !tilde {
        let bar = tol.opt_tol * (result.value * result.value).max(1.0);
        report.checks.push(Check::measured(
            "stationary_residual",
            result.stationary_residual <= bar,
            result.stationary_residual,
        ));
    }

    if oracle {
        report.parameter("alpha_steps", alpha_steps);
        report.parameter("beta_steps", beta_steps);
        let cfg = OracleConfig {
            alpha_steps,
            beta_steps,
            seed: common.seed,
        };
        let variant = if tilde {
            DeviationVariant::Tilde
        } else {
            DeviationVariant::Standard
        };
        let oracle_value = radii::oracle_radius(&pair, variant, &cfg)?;
        let gap = (result.value - oracle_value).abs();
        results["oracle"] = serde_json::json!(oracle_value);
        results["oracle_gap"] = serde_json::json!(gap);
        report.checks.push(Check::measured("oracle_gap", gap <= 5e-3, gap));
    }

    report.headline = serde_json::json!(result.value);
    report.results = results;
    Ok(report)
}

pub fn cmd_translate(
    t_path: &Path,
    a_path: &Path,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("translate");
    let tol = common.tolerances()?;
    let pair = load_pair(t_path, a_path, tol, &mut report)?;
    common.record(&mut report);
    let result = translation::minimal_translation(&pair)?;
    report.results = serde_json::json!({
        "lambda0": complex_json(result.lambda0),
        "min_norm": result.min_norm,
        "probe_gap": result.probe_gap,
        "iterations": result.iterations,
    });
    report.checks.push(Check::measured(
        "probe_gap",
        result.probe_gap <= tol.identity_tol,
        result.probe_gap,
    ));
    report.headline = serde_json::json!(result.min_norm);
    Ok(report)
}

pub fn cmd_stationary(
    t_path: &Path,
    a_path: &Path,
    start: &Option<PathBuf>,
    max_iter: usize,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("stationary");
    let tol = common.tolerances()?;
    let pair = load_pair(t_path, a_path, tol, &mut report)?;
    common.record(&mut report);
    report.parameter("max_iter", max_iter);
    let start_vec = load_start(start, &pair, common.seed, &mut report)?;
    let cert = stationary::find_stationary(&pair, &start_vec, max_iter)?;
    report.results = serde_json::json!({
        "f": vector_json(cert.f.components()),
        "lambda": complex_json(cert.lambda),
        "h_norm": cert.h_norm,
        "residual": cert.residual,
        "is_stationary": cert.is_stationary,
        "iterations": cert.iterations,
    });
    report.checks.push(Check::measured(
        "is_stationary",
        cert.is_stationary,
        cert.residual,
    ));
    report.headline = serde_json::json!(cert.h_norm);
    Ok(report)
}

pub fn cmd_decompose(
    t_path: &Path,
    a_path: &Path,
    start: &Option<PathBuf>,
    max_iter: usize,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("decompose");
    let tol = common.tolerances()?;
    let pair = load_pair(t_path, a_path, tol, &mut report)?;
    common.record(&mut report);
    report.parameter("max_iter", max_iter);
    let start_vec = load_start(start, &pair, common.seed, &mut report)?;
    let cert = stationary::find_stationary(&pair, &start_vec, max_iter)?;
    let dec = stationary::selfadjoint_decomposition(&pair, &cert)?;
    let scale = transradii::spectral_norm(pair.t())?
        + dec.lambda.norm() * transradii::spectral_norm(pair.a())?;
    report.results = serde_json::json!({
        "f": vector_json(cert.f.components()),
        "lambda": complex_json(dec.lambda),
        "h_norm": dec.h_norm,
        "g1": vector_json(dec.g1.as_slice()),
        "g2": vector_json(dec.g2.as_slice()),
        "eig_residual_plus": dec.eig_residual_plus,
        "eig_residual_minus": dec.eig_residual_minus,
        "reconstruction_error": dec.reconstruction_error,
    });
    let bar = tol.identity_tol * scale.max(1.0);
    report.checks.push(Check::measured(
        "eig_relation_plus",
        dec.eig_residual_plus <= bar,
        dec.eig_residual_plus,
    ));
    report.checks.push(Check::measured(
        "eig_relation_minus",
        dec.eig_residual_minus <= bar,
        dec.eig_residual_minus,
    ));
    report.checks.push(Check::measured(
        "reconstruction",
        dec.reconstruction_error <= tol.identity_tol,
        dec.reconstruction_error,
    ));
    report.headline = serde_json::json!(dec.h_norm);
    Ok(report)
}

pub fn cmd_states(
    t_path: &Path,
    a_path: &Path,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("states");
    let tol = common.tolerances()?;
    let pair = load_pair(t_path, a_path, tol, &mut report)?;
    common.record(&mut report);
    let radius = radii::radius(&pair, common.starts, common.seed)?;
    let sup = states::state_supremum(&pair, common.starts, common.seed)?;
    let target = radius.value * radius.value;
    let gap = (sup.value - target).abs();
    report.results = serde_json::json!({
        "value": sup.value,
        "radius_squared": target,
        "denominator": sup.denominator,
        "rho": matrix_json(sup.rho.rho()),
    });
    report.checks.push(Check::measured(
        "matches_radius_squared",
        gap <= 10.0 * tol.opt_tol * sup.value.max(1.0),
        gap,
    ));
    report.headline = serde_json::json!(sup.value);
    Ok(report)
}

pub fn cmd_wrange(
    a_path: &Path,
    theta_steps: usize,
    samples: usize,
    dump: &Option<PathBuf>,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("wrange");
    let loaded = load_matrix(a_path)?;
    report.input("a_file", &loaded.path, &loaded.bytes);
    common.record(&mut report);
    report.parameter("theta_steps", theta_steps);
    report.parameter("samples", samples);
    let distance = georange::wrange_distance(&loaded.matrix, theta_steps)?;
    report.results = serde_json::json!({
        "distance": distance.distance,
        "signed": distance.signed,
        "theta": distance.theta,
        "zero_outside_range": distance.distance > ToleranceSet::default().rank_tol,
    });
    if let Some(path) = dump {
        let cloud = georange::sample_numerical_range(&loaded.matrix, samples, common.seed)?;
        let mut csv = String::from("re,im\n");
        for p in &cloud.points {
            csv.push_str(&format!("{},{}\n", p.re, p.im));
        }
        std::fs::write(path, csv)
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        report.parameter("dump", path.display().to_string());
    }
    report.headline = serde_json::json!(distance.distance);
    Ok(report)
}

pub fn cmd_chain(
    t_path: &Path,
    a_path: &Path,
    samples: usize,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("chain");
    let tol = common.tolerances()?;
    let pair = load_pair(t_path, a_path, tol, &mut report)?;
    common.record(&mut report);
    report.parameter("samples", samples);
    let chain = georange::chain_check(&pair, samples, common.seed)?;
    report.results = serde_json::json!({
        "tilde": chain.tilde,
        "standard": chain.standard,
        "m_radius": chain.m_radius,
        "m_scaled": chain.m_scaled,
    });
    let slack = 10.0 * tol.opt_tol * chain.standard.max(1.0);
    report.checks.push(Check::measured(
        "standard_vs_scaled_circle",
        chain.standard >= chain.m_scaled - slack,
        chain.m_scaled - chain.standard,
    ));
    match chain.tilde {
        Some(tilde) => report.checks.push(Check::measured(
            "tilde_vs_standard",
            tilde >= chain.standard - slack,
            chain.standard - tilde,
        )),
        None => report.checks.push(Check::skipped(
            "tilde_vs_standard",
            "0 lies in W(A); the tilde radius is undefined",
        )),
    }
    report.headline = serde_json::json!(chain.standard);
    Ok(report)
}

pub fn cmd_suite(
    t_path: &Path,
    a_path: &Path,
    oracle: bool,
    samples: usize,
    common: &CommonOptions,
) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("suite");
    let tol = common.tolerances()?;
    let pair = load_pair(t_path, a_path, tol, &mut report)?;
    common.record(&mut report);
    report.parameter("oracle", oracle);
    report.parameter("samples", samples);

    let mut results = serde_json::Map::new();

    // Radius and its stationarity certificate.
    let radius = radii::radius(&pair, common.starts, common.seed)?;
    results.insert("radius".into(), radius_results_json(&radius));
    report.checks.push(Check::measured(
        "radius_converged",
        radius.is_converged(),
        radius.starts_used as f64 - radius.converged_starts as f64,
    ));
    let bar = tol.opt_tol * (radius.value * radius.value).max(1.0);
    report.checks.push(Check::measured(
        "maximizer_stationary",
        radius.stationary_residual <= bar,
        radius.stationary_residual,
    ));

    // Minimal translation and the central identity.
    let trans = translation::minimal_translation(&pair)?;
    results.insert(
        "translation".into(),
        serde_json::json!({
            "lambda0": complex_json(trans.lambda0),
            "min_norm": trans.min_norm,
            "probe_gap": trans.probe_gap,
        }),
    );
    let equality_gap = (trans.min_norm - radius.value).abs();
    report.checks.push(Check::measured(
        "translation_radius_equality",
        equality_gap <= 10.0 * tol.opt_tol * radius.value.max(1.0),
        equality_gap,
    ));

    // Adjoint duality at the maximizer's residual direction.
    match stationary::adjoint_duality_check(&pair, &radius) {
        Ok(gap) => {
            results.insert("adjoint_duality_gap".into(), serde_json::json!(gap));
            report.checks.push(Check::measured(
                "adjoint_duality",
                gap <= 10.0 * tol.opt_tol * radius.value.max(1.0),
                gap,
            ));
        }
        Err(OpError::DegenerateMaximizer) => report.checks.push(Check::skipped(
            "adjoint_duality",
            "deviation vanishes at the maximizer (T is a multiple of A)",
        )),
        Err(e) => return Err(e.into()),
    }

    // Tilde radius and dominance, when 0 stays outside W(A).
    if pair.zero_outside_wrange_a() {
        let tilde = radii::radius_tilde(&pair, common.starts, common.seed)?;
        results.insert(
            "radius_tilde".into(),
            serde_json::json!({ "value": tilde.value }),
        );
        report.checks.push(Check::measured(
            "tilde_dominates",
            tilde.value >= radius.value - tol.opt_tol,
            radius.value - tilde.value,
        ));
    } else {
        report.checks.push(Check::skipped(
            "tilde_dominates",
            "0 lies in W(A); the tilde radius is undefined",
        ));
    }

    // Chain inequality on the sampled generalized range.
    let chain = georange::chain_check(&pair, samples, common.seed)?;
    results.insert(
        "chain".into(),
        serde_json::json!({
            "tilde": chain.tilde,
            "standard": chain.standard,
            "m_scaled": chain.m_scaled,
        }),
    );
    report.checks.push(Check::measured(
        "chain_inequality",
        chain.holds,
        chain.m_scaled - chain.standard,
    ));

    // State-functional supremum against the radius squared.
    let sup = states::state_supremum(&pair, common.starts, common.seed)?;
    let target = radius.value * radius.value;
    let state_gap = (sup.value - target).abs();
    results.insert("state_supremum".into(), serde_json::json!(sup.value));
    report.checks.push(Check::measured(
        "state_supremum_matches",
        state_gap <= 10.0 * tol.opt_tol * target.max(1.0),
        state_gap,
    ));

    // Grid oracle at n = 2 on request.
    if oracle {
        if pair.n() == 2 {
            let cfg = OracleConfig {
                alpha_steps: 720,
                beta_steps: 720,
                seed: common.seed,
            };
            let oracle_value =
                radii::oracle_radius(&pair, DeviationVariant::Standard, &cfg)?;
            let gap = (radius.value - oracle_value).abs();
            results.insert("oracle".into(), serde_json::json!(oracle_value));
            report.checks.push(Check::measured("oracle_gap", gap <= 5e-3, gap));
        } else {
            report.checks.push(Check::skipped(
                "oracle_gap",
                format!("grid oracle requires n = 2, got n = {}", pair.n()),
            ));
        }
    }

    report.headline = serde_json::json!(radius.value);
    report.results = Value::Object(results);
    Ok(report)
}
