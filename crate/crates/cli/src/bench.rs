//! The `table1` (random histogram pairs) and `table2` (one-parameter family
//! of 3-bin pairs) benchmark protocols.

use std::time::Instant;

use centers_core::categorical::{
    approximation_factor, gb_center_cat, jeffreys_centroid_cat, jeffreys_loss_cat, jfr_center_cat, tv_cat,
    HistogramSet, SimplexPoint, GB_EPSILON,
};
use centers_core::legendre::Weights;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::format::sci;

/// Components below this are rejected and the histogram is redrawn.
pub const MIN_BIN: f64 = 1e-12;

pub const TABLE1_HEADER: &str = "dim,method,avg_info_eps,max_info_eps,avg_tv,max_tv,avg_time_ns,speedup";
pub const TABLE2_HEADER: &str = "alpha,method,info_eps,tv_eps,time_ns,speedup,input_lossy";

pub const DEFAULT_ALPHAS: [f64; 16] =
    [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-13, 1e-14, 1e-15, 1e-16];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    Jeffreys,
    Jfr,
    Gb,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 3] = [BenchMethod::Jeffreys, BenchMethod::Jfr, BenchMethod::Gb];

    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Jeffreys => "jeffreys",
            BenchMethod::Jfr => "jfr",
            BenchMethod::Gb => "gb",
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at dimension `dim`; independent of scheduling.
pub fn trial_seed(seed: u64, dim: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ dim as u64) ^ trial as u64)
}

/// Uniform draw from the open simplex (normalized unit exponentials).
pub fn dirichlet_histogram<R: Rng>(rng: &mut R, d: usize) -> SimplexPoint {
    loop {
        let x: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let s: f64 = x.iter().sum();
        let p: Vec<f64> = x.iter().map(|v| v / s).collect();
        if p.iter().all(|&v| v >= MIN_BIN) {
            if let Ok(p) = SimplexPoint::new(p) {
                return p;
            }
        }
    }
}

/// `L_J(candidate) / L_J(reference) - 1`. A candidate with zero loss is an
/// exact minimizer and scores 0 even when the bisected reference is off by
/// rounding.
pub fn info_eps(set: &HistogramSet, candidate: &SimplexPoint, reference: &SimplexPoint) -> CliResult<f64> {
    let lc = jeffreys_loss_cat(set, candidate).map_err(|e| CliError::core("Jeffreys loss", e))?;
    if lc == 0.0 {
        return Ok(0.0);
    }
    let lref = jeffreys_loss_cat(set, reference).map_err(|e| CliError::core("Jeffreys loss", e))?;
    if lref == 0.0 {
        return Ok(f64::INFINITY);
    }
    approximation_factor(set, candidate, reference).map_err(|e| CliError::core("approximation factor", e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodOutcome {
    pub info_eps: f64,
    pub tv: f64,
    pub time_ns: u64,
}

/// Runs the three methods on one set; index order follows [`BenchMethod::ALL`].
pub fn evaluate(set: &HistogramSet, epsilon: f64) -> CliResult<[MethodOutcome; 3]> {
    let t = Instant::now();
    let reference = jeffreys_centroid_cat(set, epsilon).map_err(|e| CliError::core("Jeffreys centroid", e))?.center;
    let t_ref = t.elapsed().as_nanos() as u64;

    let t = Instant::now();
    let jfr = jfr_center_cat(set);
    let t_jfr = t.elapsed().as_nanos() as u64;

    let t = Instant::now();
    let (gb, diag) = gb_center_cat(set, GB_EPSILON).map_err(|e| CliError::core("Gauss-Bregman center", e))?;
    let t_gb = t.elapsed().as_nanos() as u64;
    if !diag.converged {
        return Err(CliError::core(
            "Gauss-Bregman center",
            centers_core::Error::NoConvergence { iterations: diag.iterations, gap: diag.final_gap },
        ));
    }

    let outcome = |c: &SimplexPoint, time_ns| -> CliResult<MethodOutcome> {
        Ok(MethodOutcome { info_eps: info_eps(set, c, &reference)?, tv: tv_cat(c, &reference), time_ns })
    };
    Ok([outcome(&reference, t_ref)?, outcome(&jfr, t_jfr)?, outcome(&gb, t_gb)?])
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Config {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub epsilon: f64,
    pub timing: bool,
}

impl Table1Config {
    pub fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Validation("trials must be at least 1".into()));
        }
        if self.dims.is_empty() {
            return Err(CliError::Validation("no dimensions given".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(CliError::Validation(format!("dimension {d} is below 2")));
        }
        if !(self.epsilon > 0.0) {
            return Err(CliError::Validation("epsilon must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub dim: usize,
    pub method: BenchMethod,
    pub avg_info_eps: f64,
    pub max_info_eps: f64,
    pub avg_tv: f64,
    pub max_tv: f64,
    pub avg_time_ns: u64,
    pub speedup_vs_jeffreys: f64,
}

impl BenchRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.dim,
            self.method.name(),
            sci(self.avg_info_eps),
            sci(self.max_info_eps),
            sci(self.avg_tv),
            sci(self.max_tv),
            self.avg_time_ns,
            sci(self.speedup_vs_jeffreys)
        )
    }
}

/// Outcomes of every trial at one dimension, in trial order.
pub fn table1_trials(cfg: &Table1Config, dim: usize) -> CliResult<Vec<[MethodOutcome; 3]>> {
    let weights = Weights::uniform(2).map_err(|e| CliError::core("weights", e))?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, dim, trial));
            let rows = vec![dirichlet_histogram(&mut rng, dim), dirichlet_histogram(&mut rng, dim)];
            let set = HistogramSet::new(rows, weights.clone()).map_err(|e| CliError::core("histogram set", e))?;
            evaluate(&set, cfg.epsilon).map_err(|e| match e {
                CliError::Core { context, source } => {
                    CliError::Core { context: format!("dim {dim}, trial {trial}: {context}"), source }
                }
                other => other,
            })
        })
        .collect()
}

fn speedup(reference_ns: f64, method_ns: f64) -> f64 {
    reference_ns / method_ns.max(1.0)
}

/// Aggregates trial outcomes into one record per method.
pub fn aggregate(dim: usize, trials: &[[MethodOutcome; 3]], timing: bool) -> Vec<BenchRecord> {
    let n = trials.len() as f64;
    let avg_time = |k: usize| trials.iter().map(|t| t[k].time_ns as f64).sum::<f64>() / n;
    let ref_time = avg_time(0);
    BenchMethod::ALL
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let (mut s_eps, mut m_eps, mut s_tv, mut m_tv) = (0.0, f64::NEG_INFINITY, 0.0, f64::NEG_INFINITY);
            for t in trials {
                s_eps += t[k].info_eps;
                m_eps = m_eps.max(t[k].info_eps);
                s_tv += t[k].tv;
                m_tv = m_tv.max(t[k].tv);
            }
            let t = avg_time(k);
            BenchRecord {
                dim,
                method,
                // a single trial reports max = avg exactly
                avg_info_eps: if trials.len() == 1 { m_eps } else { s_eps / n },
                max_info_eps: m_eps,
                avg_tv: if trials.len() == 1 { m_tv } else { s_tv / n },
                max_tv: m_tv,
                avg_time_ns: if timing { t.round() as u64 } else { 0 },
                speedup_vs_jeffreys: if timing { speedup(ref_time, t) } else { 0.0 },
            }
        })
        .collect()
}

pub fn run_table1(cfg: &Table1Config) -> CliResult<Vec<BenchRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &dim in &cfg.dims {
        log::info!("table1: d = {dim}, {} trials", cfg.trials);
        let trials = table1_trials(cfg, dim)?;
        out.extend(aggregate(dim, &trials, cfg.timing));
    }
    Ok(out)
}

pub fn table1_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from(TABLE1_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}

/// Uniform histogram paired with `(1 - α, α/2, α/2)`.
pub fn table2_set(alpha: f64) -> CliResult<HistogramSet> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Validation(format!("alpha = {alpha} is outside (0, 1)")));
    }
    let uniform = vec![1.0 / 3.0; 3];
    let mut other = vec![1.0 - alpha, 0.5 * alpha, 0.5 * alpha];
    // α = 2/3 reproduces the uniform row up to rounding
    if other.iter().zip(&uniform).all(|(x, u)| (x - u).abs() <= 4.0 * f64::EPSILON) {
        other.clone_from(&uniform);
    }
    HistogramSet::from_rows(vec![uniform, other], Weights::uniform(2).expect("two weights"))
        .map_err(|e| CliError::core(format!("alpha = {alpha}"), e))
}

/// True when `1 - α` no longer determines `α` to a relative 1e-4.
pub fn input_lossy(alpha: f64) -> bool {
    let recovered = 1.0 - (1.0 - alpha);
    (recovered - alpha).abs() > 1e-4 * alpha
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Row {
    pub alpha: f64,
    pub method: BenchMethod,
    pub info_eps: f64,
    pub tv_eps: f64,
    pub time_ns: u64,
    pub speedup: f64,
    pub input_lossy: bool,
}

impl Table2Row {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            sci(self.alpha),
            self.method.name(),
            sci(self.info_eps),
            sci(self.tv_eps),
            self.time_ns,
            sci(self.speedup),
            self.input_lossy
        )
    }
}

/// JFR and GB rows for each α, in input order.
pub fn run_table2(alphas: &[f64], epsilon: f64, timing: bool) -> CliResult<Vec<Table2Row>> {
    if !(epsilon > 0.0) {
        return Err(CliError::Validation("epsilon must be positive".into()));
    }
    let sets = alphas.iter().map(|&a| table2_set(a)).collect::<CliResult<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(2 * alphas.len());
    for (&alpha, set) in alphas.iter().zip(&sets) {
        let lossy = input_lossy(alpha);
        if lossy {
            log::warn!("alpha = {alpha:e}: 1 - alpha does not resolve alpha; row flagged");
        }
        let out = evaluate(set, epsilon).map_err(|e| match e {
            CliError::Core { context, source } => {
                CliError::Core { context: format!("alpha = {alpha:e}: {context}"), source }
            }
            other => other,
        })?;
        for k in [1, 2] {
            rows.push(Table2Row {
                alpha,
                method: BenchMethod::ALL[k],
                info_eps: out[k].info_eps,
                tv_eps: out[k].tv,
                time_ns: if timing { out[k].time_ns } else { 0 },
                speedup: if timing { speedup(out[0].time_ns as f64, out[k].time_ns as f64) } else { 0.0 },
                input_lossy: lossy,
            });
        }
    }
    Ok(rows)
}

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut s = String::from(TABLE2_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}
