//! `centers compute`: one center of one input set, as a JSON report.

use std::path::PathBuf;
use std::time::Instant;

use centers_core::categorical::{
    arithmetic_mean, gb_center_cat, jeffreys_centroid_cat, jeffreys_loss_cat, jfr_center_cat,
    normalized_geometric_mean, tv_cat, unnormalized_center, HistogramSet, SimplexPoint, DEFAULT_EPSILON, GB_EPSILON,
};
use centers_core::gaussian::{
    gb_center_mvn, jeffreys_centroid_common_mean, jeffreys_loss_mvn, jfr_center_mvn, natural_to_mvn,
    sided_kl_centroids_mvn, GaussianParam, GaussianSet,
};
use centers_core::legendre::Weights;
use centers_core::{CenterDiagnostics, ToleranceConfig};
use serde_json::{json, Map, Value};

use crate::bench::info_eps;
use crate::error::{CliError, CliResult};
use crate::format::{sci_array, sci_json};
use crate::input::{read_gaussians, read_histograms, read_weights};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Categorical,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Jeffreys,
    Jfr,
    Gb,
    Arithmetic,
    Geometric,
    Unnormalized,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Jeffreys => "jeffreys",
            Method::Jfr => "jfr",
            Method::Gb => "gb",
            Method::Arithmetic => "arithmetic",
            Method::Geometric => "geometric",
            Method::Unnormalized => "unnormalized",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComputeOptions {
    pub family: Family,
    pub method: Method,
    pub input: PathBuf,
    pub weights: Option<PathBuf>,
    pub reference: bool,
    /// Bisection width for `jeffreys`, stopping threshold for `gb`.
    pub epsilon: Option<f64>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, CenterDiagnostics) {
    let start = Instant::now();
    let out = f();
    let diagnostics =
        CenterDiagnostics { elapsed_ns: start.elapsed().as_nanos() as u64, converged: true, ..Default::default() };
    (out, diagnostics)
}

fn diagnostics_json(d: &CenterDiagnostics) -> Value {
    json!({
        "iterations": d.iterations,
        "final_gap": sci_json(d.final_gap),
        "residual": sci_json(d.residual),
        "elapsed_ns": d.elapsed_ns,
        "converged": d.converged,
    })
}

fn require_converged(what: &str, d: &CenterDiagnostics) -> CliResult<()> {
    if d.converged {
        Ok(())
    } else {
        Err(CliError::core(what, centers_core::Error::NoConvergence { iterations: d.iterations, gap: d.final_gap }))
    }
}

fn check_epsilon(eps: Option<f64>) -> CliResult<()> {
    match eps {
        Some(e) if !(e > 0.0 && e < 1.0) => Err(CliError::Validation(format!("epsilon = {e} is outside (0, 1)"))),
        _ => Ok(()),
    }
}

pub fn run_compute(opts: &ComputeOptions) -> CliResult<Value> {
    check_epsilon(opts.epsilon)?;
    let mut report = Map::new();
    report.insert("schema_version".into(), json!(SCHEMA_VERSION));
    report.insert(
        "family".into(),
        json!(match opts.family {
            Family::Categorical => "categorical",
            Family::Gaussian => "gaussian",
        }),
    );
    report.insert("method".into(), json!(opts.method.name()));
    match opts.family {
        Family::Categorical => compute_categorical(opts, &mut report)?,
        Family::Gaussian => compute_gaussian(opts, &mut report)?,
    }
    Ok(Value::Object(report))
}

fn compute_categorical(opts: &ComputeOptions, report: &mut Map<String, Value>) -> CliResult<()> {
    let rows = read_histograms(&opts.input)?;
    let weights = match &opts.weights {
        Some(p) => read_weights(p)?,
        None => Weights::uniform(rows.len()).map_err(|e| CliError::core("weights", e))?,
    };
    let set = HistogramSet::new(rows, weights).map_err(|e| CliError::Validation(format!("input set: {e}")))?;
    report.insert("dim".into(), json!(set.dim()));
    report.insert("n".into(), json!(set.len()));

    let (center, diagnostics) = match opts.method {
        Method::Jeffreys => {
            let eps = opts.epsilon.unwrap_or(DEFAULT_EPSILON);
            let r = jeffreys_centroid_cat(&set, eps).map_err(|e| CliError::core("Jeffreys centroid", e))?;
            report.insert("lambda".into(), sci_json(r.lambda));
            report.insert("mass_residual".into(), sci_json(r.mass_residual));
            (r.center, r.diagnostics)
        }
        Method::Jfr => timed(|| jfr_center_cat(&set)),
        Method::Gb => {
            let eps = opts.epsilon.unwrap_or(GB_EPSILON);
            let (c, d) = gb_center_cat(&set, eps).map_err(|e| CliError::core("Gauss-Bregman center", e))?;
            require_converged("Gauss-Bregman center", &d)?;
            (c, d)
        }
        Method::Arithmetic => timed(|| arithmetic_mean(&set)),
        Method::Geometric => timed(|| normalized_geometric_mean(&set)),
        Method::Unnormalized => {
            let (r, d) = timed(|| unnormalized_center(&set));
            let (c, s) = r.map_err(|e| CliError::core("unnormalized center", e))?;
            report.insert("unnormalized_center".into(), sci_array(&c));
            report.insert("mass".into(), sci_json(s));
            let normalized = SimplexPoint::new(c.iter().map(|v| v / s).collect())
                .map_err(|e| CliError::core("unnormalized center", e))?;
            (normalized, d)
        }
    };
    report.insert("center".into(), sci_array(center.probs()));
    let loss = jeffreys_loss_cat(&set, &center).map_err(|e| CliError::core("Jeffreys loss", e))?;
    report.insert("jeffreys_loss".into(), sci_json(loss));
    report.insert("diagnostics".into(), diagnostics_json(&diagnostics));

    if opts.reference && opts.method != Method::Jeffreys {
        let r = jeffreys_centroid_cat(&set, DEFAULT_EPSILON).map_err(|e| CliError::core("reference centroid", e))?;
        let reference = json!({
            "center": sci_array(r.center.probs()),
            "jeffreys_loss": sci_json(jeffreys_loss_cat(&set, &r.center).map_err(|e| CliError::core("Jeffreys loss", e))?),
            "info_eps": sci_json(info_eps(&set, &center, &r.center)?),
            "tv": sci_json(tv_cat(&center, &r.center)),
        });
        report.insert("reference".into(), reference);
    }
    Ok(())
}

fn gaussian_json(p: &GaussianParam) -> Value {
    let cov = p.cov().matrix();
    let rows: Vec<Value> = (0..p.dim()).map(|i| sci_array(&cov.row(i).iter().copied().collect::<Vec<_>>())).collect();
    json!({ "mean": sci_array(p.mean().as_slice()), "cov": rows })
}

fn compute_gaussian(opts: &ComputeOptions, report: &mut Map<String, Value>) -> CliResult<()> {
    let (params, inline) = read_gaussians(&opts.input)?;
    let weights = match (&opts.weights, inline) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation("weights given both inline and with --weights".into()));
        }
        (Some(p), None) => read_weights(p)?,
        (None, Some(w)) => w,
        (None, None) => Weights::uniform(params.len()).map_err(|e| CliError::core("weights", e))?,
    };
    let set = GaussianSet::new(params, weights).map_err(|e| CliError::Validation(format!("input set: {e}")))?;
    report.insert("dim".into(), json!(set.dim()));
    report.insert("n".into(), json!(set.len()));
    if opts.reference {
        log::warn!("--reference applies to the categorical family only; ignored");
    }
    let core = |what: &'static str| move |e| CliError::core(what, e);
    let (center, diagnostics) = match opts.method {
        Method::Jeffreys => {
            let (c, d) = timed(|| jeffreys_centroid_common_mean(&set));
            (c.map_err(core("Jeffreys centroid"))?, d)
        }
        Method::Jfr => {
            let (c, d) = timed(|| jfr_center_mvn(&set));
            (c.map_err(core("Jeffreys-Fisher-Rao center"))?, d)
        }
        Method::Gb => {
            let mut tol = ToleranceConfig::iterative();
            if let Some(e) = opts.epsilon {
                tol = ToleranceConfig::new(e, tol.max_iter).map_err(core("tolerance"))?;
            }
            let (c, d) = gb_center_mvn(&set, tol).map_err(core("Gauss-Bregman center"))?;
            require_converged("Gauss-Bregman center", &d)?;
            (c, d)
        }
        Method::Arithmetic | Method::Geometric => {
            let (r, d) = timed(|| sided_kl_centroids_mvn(&set));
            let (right, left) = r.map_err(core("sided centroids"))?;
            // moment average for "arithmetic", natural-parameter average for "geometric"
            let theta = if opts.method == Method::Arithmetic { left } else { right };
            (natural_to_mvn(&theta).map_err(core("sided centroids"))?, d)
        }
        Method::Unnormalized => {
            return Err(CliError::Validation(
                "method 'unnormalized' is defined for the categorical family only".into(),
            ));
        }
    };
    report.insert("center".into(), gaussian_json(&center));
    let loss = jeffreys_loss_mvn(&set, &center).map_err(core("Jeffreys loss"))?;
    report.insert("jeffreys_loss".into(), sci_json(loss));
    report.insert("diagnostics".into(), diagnostics_json(&diagnostics));
    Ok(())
}
