//! The five subcommands. Each returns its rendered output and whether every
//! check it ran passed.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use valuewalk::analytics::{
    absorption_time, conditional_time_to_one, cumulative_value, cumulative_value_exact, rn_threshold,
    worst_case_cumulative, WalkParams,
};
use valuewalk::process::ValueProcess;
use valuewalk::schemes::{closed_form_revenue, optimal_bin, optimal_constant_ppp, PricingScheme};
use valuewalk::sim::{estimate, EstimateResult};
use valuewalk::strategy::RiskProfile;
use valuewalk::verify::{criterion, summary_line, VerifyOptions};
use valuewalk::Error;

use crate::config::{Alpha, ConfigError, DistributionSpec, ExperimentConfig, ProcessSpec};
use crate::Format;

pub struct Output {
    pub text: String,
    pub ok: bool,
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), ConfigError> {
    let io = |source, path: &Path| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io(e, p)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io(e, Path::new("<stdout>"))),
    }
}

fn render<T: Serialize>(headers: &[&str], rows: &[T], format: Format) -> Result<String, ConfigError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| ConfigError::Invalid(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            let fail = |e: csv::Error| ConfigError::Invalid(e.to_string());
            w.write_record(headers).map_err(fail)?;
            for r in rows {
                w.serialize(r).map_err(fail)?;
            }
            let bytes = w.into_inner().map_err(|e| ConfigError::Invalid(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

fn profile(a: Alpha) -> Result<RiskProfile, ConfigError> {
    Ok(RiskProfile::new(a.0)?)
}

fn delta_sq(model: &ValueProcess) -> Option<f64> {
    model.as_walk().map(|w| w.delta() * w.delta())
}

#[derive(Serialize)]
struct AnalyzeRow {
    v: f64,
    absorption_time: f64,
    cumulative_value: f64,
    cumulative_value_exact: f64,
    worst_case_cumulative: f64,
    conditional_time_to_one: Option<f64>,
    rn_threshold_at_price_v: f64,
}

const ANALYZE_HEADERS: [&str; 7] = [
    "v",
    "absorption_time",
    "cumulative_value",
    "cumulative_value_exact",
    "worst_case_cumulative",
    "conditional_time_to_one",
    "rn_threshold_at_price_v",
];

/// Closed forms of the walk over a grid of initial values.
pub fn analyze(cfg: &ExperimentConfig, format: Format) -> Result<Output, ConfigError> {
    let model = cfg.process.build()?;
    let walk = model
        .as_walk()
        .ok_or_else(|| ConfigError::Invalid("analyze tabulates the random walk process only".into()))?;
    let p: WalkParams<f64> = walk.params();
    let vs: Vec<f64> = match &cfg.v_grid {
        Some(v) => v.clone(),
        None => p.grid().collect(),
    };
    let rows = vs
        .iter()
        .map(|&v| -> Result<AnalyzeRow, ConfigError> {
            Ok(AnalyzeRow {
                v,
                absorption_time: absorption_time(v, &p)?,
                cumulative_value: cumulative_value(v, &p)?,
                cumulative_value_exact: cumulative_value_exact(v, &p)?,
                worst_case_cumulative: worst_case_cumulative(v, &p)?,
                conditional_time_to_one: conditional_time_to_one(v, &p).ok(),
                rn_threshold_at_price_v: rn_threshold(v),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Output {
        text: render(&ANALYZE_HEADERS, &rows, format)?,
        ok: true,
    })
}

#[derive(Serialize)]
struct SimRow {
    scheme: String,
    parameters: String,
    alpha: String,
    n: u64,
    seed: u64,
    revenue_mean: f64,
    revenue_std_err: f64,
    revenue_ci_low: f64,
    revenue_ci_high: f64,
    welfare_mean: f64,
    welfare_std_err: f64,
    utility_mean: f64,
    utility_std_err: f64,
    stop_time_mean: f64,
    post_trial_duration_mean: f64,
    capped_fraction: f64,
    min_running_utility: f64,
    warnings: String,
}

const SIM_HEADERS: [&str; 18] = [
    "scheme",
    "parameters",
    "alpha",
    "n",
    "seed",
    "revenue_mean",
    "revenue_std_err",
    "revenue_ci_low",
    "revenue_ci_high",
    "welfare_mean",
    "welfare_std_err",
    "utility_mean",
    "utility_std_err",
    "stop_time_mean",
    "post_trial_duration_mean",
    "capped_fraction",
    "min_running_utility",
    "warnings",
];

#[derive(Serialize)]
struct SimRecord<'a> {
    scheme: &'a PricingScheme,
    profile: Alpha,
    model: &'a ProcessSpec,
    distribution: &'a DistributionSpec,
    n: u64,
    seed: u64,
    metrics: &'a EstimateResult,
}

fn sim_row(scheme: &PricingScheme, alpha: Alpha, seed: u64, r: &EstimateResult) -> SimRow {
    SimRow {
        scheme: scheme.name().into(),
        parameters: serde_json::to_string(scheme).unwrap_or_default(),
        alpha: alpha.to_string(),
        n: r.n_samples,
        seed,
        revenue_mean: r.revenue.mean,
        revenue_std_err: r.revenue.std_err,
        revenue_ci_low: r.revenue.ci_low,
        revenue_ci_high: r.revenue.ci_high,
        welfare_mean: r.welfare.mean,
        welfare_std_err: r.welfare.std_err,
        utility_mean: r.utility.mean,
        utility_std_err: r.utility.std_err,
        stop_time_mean: r.stop_time.mean,
        post_trial_duration_mean: r.post_trial_duration.mean,
        capped_fraction: r.capped_fraction,
        min_running_utility: r.min_running_utility,
        warnings: r.warnings.join("; "),
    }
}

type Estimates = Vec<(PricingScheme, Alpha, EstimateResult)>;

fn run_estimates(cfg: &ExperimentConfig) -> Result<Estimates, ConfigError> {
    let seed = cfg.seed()?;
    let f = cfg.distribution.build()?;
    let model = cfg.process.build()?;
    let mut out = Vec::new();
    for &a in &cfg.profiles {
        let prof = profile(a)?;
        for spec in &cfg.schemes {
            let scheme = spec.resolve(&prof, &f, &model, cfg.grid_resolution)?;
            let r = estimate(&scheme, &prof, &model, &f, cfg.n_samples, seed)?;
            for w in &r.warnings {
                eprintln!("warning ({} alpha {a}): {w}", scheme.name());
            }
            out.push((scheme, a, r));
        }
    }
    Ok(out)
}

/// Monte Carlo estimates for every (profile, scheme) pair.
pub fn simulate(cfg: &ExperimentConfig, format: Format) -> Result<Output, ConfigError> {
    let seed = cfg.seed()?;
    let results = run_estimates(cfg)?;
    let text = match format {
        Format::Csv => {
            let rows: Vec<SimRow> = results.iter().map(|(s, a, r)| sim_row(s, *a, seed, r)).collect();
            render(&SIM_HEADERS, &rows, format)?
        }
        Format::Json => {
            let records: Vec<SimRecord> = results
                .iter()
                .map(|(s, a, r)| SimRecord {
                    scheme: s,
                    profile: *a,
                    model: &cfg.process,
                    distribution: &cfg.distribution,
                    n: r.n_samples,
                    seed,
                    metrics: r,
                })
                .collect();
            render(&[], &records, format)?
        }
    };
    Ok(Output { text, ok: true })
}

#[derive(Serialize)]
struct OptimizeRow {
    alpha: String,
    scheme: &'static str,
    price: Option<f64>,
    threshold: Option<f64>,
    revenue: Option<f64>,
    scaled_revenue: Option<f64>,
    note: String,
}

const OPTIMIZE_HEADERS: [&str; 7] = ["alpha", "scheme", "price", "threshold", "revenue", "scaled_revenue", "note"];

/// Optimal one-off and constant per-usage prices for each risk profile.
pub fn optimize(cfg: &ExperimentConfig, format: Format) -> Result<Output, ConfigError> {
    let f = cfg.distribution.build()?;
    let model = cfg.process.build()?;
    let scale = delta_sq(&model);
    let mut rows = Vec::new();
    for &a in &cfg.profiles {
        let prof = profile(a)?;
        let results = [
            ("bin", optimal_bin(&f, &model, &prof, cfg.grid_resolution)),
            ("ppp", optimal_constant_ppp(&f, &model, &prof, cfg.grid_resolution)),
        ];
        for (scheme, r) in results {
            rows.push(match r {
                Ok(o) => OptimizeRow {
                    alpha: a.to_string(),
                    scheme,
                    price: Some(o.price),
                    threshold: o.threshold,
                    revenue: Some(o.revenue),
                    scaled_revenue: scale.map(|s| s * o.revenue),
                    note: String::new(),
                },
                Err(e @ (Error::NotClosedForm(_) | Error::Unsupported(_))) => OptimizeRow {
                    alpha: a.to_string(),
                    scheme,
                    price: None,
                    threshold: None,
                    revenue: None,
                    scaled_revenue: None,
                    note: e.to_string(),
                },
                Err(e) => return Err(e.into()),
            });
        }
    }
    Ok(Output {
        text: render(&OPTIMIZE_HEADERS, &rows, format)?,
        ok: true,
    })
}

#[derive(Serialize)]
struct CompareRow {
    alpha: String,
    scheme: String,
    parameters: String,
    revenue: f64,
    revenue_source: &'static str,
    scaled_revenue: Option<f64>,
    welfare: f64,
    utility: f64,
    best_revenue: bool,
    best_welfare: bool,
    best_utility: bool,
}

const COMPARE_HEADERS: [&str; 11] = [
    "alpha",
    "scheme",
    "parameters",
    "revenue",
    "revenue_source",
    "scaled_revenue",
    "welfare",
    "utility",
    "best_revenue",
    "best_welfare",
    "best_utility",
];

/// Side-by-side outcomes of the configured schemes, winners flagged per
/// profile. Revenue comes from the closed form where one exists.
pub fn compare(cfg: &ExperimentConfig, format: Format) -> Result<Output, ConfigError> {
    if cfg.schemes.len() < 2 {
        return Err(ConfigError::Invalid("compare needs at least two schemes".into()));
    }
    let f = cfg.distribution.build()?;
    let model = cfg.process.build()?;
    let scale = delta_sq(&model);
    let mut rows: Vec<CompareRow> = Vec::new();
    for (scheme, a, r) in run_estimates(cfg)? {
        let (revenue, source) = match closed_form_revenue(&scheme, &f, &model, &profile(a)?) {
            Ok(x) => (x, "closed_form"),
            Err(Error::NotClosedForm(_)) => (r.revenue.mean, "monte_carlo"),
            Err(e) => return Err(e.into()),
        };
        rows.push(CompareRow {
            alpha: a.to_string(),
            scheme: scheme.name().into(),
            parameters: serde_json::to_string(&scheme).unwrap_or_default(),
            revenue,
            revenue_source: source,
            scaled_revenue: scale.map(|s| s * revenue),
            welfare: r.welfare.mean,
            utility: r.utility.mean,
            best_revenue: false,
            best_welfare: false,
            best_utility: false,
        });
    }
    let alphas: Vec<String> = cfg.profiles.iter().map(|a| a.to_string()).collect();
    for alpha in alphas {
        let group: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].alpha == alpha).collect();
        let best = |key: fn(&CompareRow) -> f64| {
            group
                .iter()
                .copied()
                .fold(None, |b: Option<usize>, i| match b {
                    Some(j) if key(&rows[j]) >= key(&rows[i]) => Some(j),
                    _ => Some(i),
                })
        };
        let (r, w, u) = (best(|r| r.revenue), best(|r| r.welfare), best(|r| r.utility));
        if let Some(i) = r {
            rows[i].best_revenue = true;
        }
        if let Some(i) = w {
            rows[i].best_welfare = true;
        }
        if let Some(i) = u {
            rows[i].best_utility = true;
        }
    }
    Ok(Output {
        text: render(&COMPARE_HEADERS, &rows, format)?,
        ok: true,
    })
}

const VERIFY_HEADERS: [&str; 4] = ["criterion", "name", "passed", "detail"];

/// Acceptance suite; one summary line per criterion goes to stderr.
pub fn verify(cfg: &ExperimentConfig, format: Format) -> Result<Output, ConfigError> {
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        seed: cfg.master_seed.unwrap_or(defaults.seed),
        mc_scale: cfg.mc_scale,
        slack_constant: cfg.slack_constant,
        symmetric_slack: cfg.slack_constant.min(defaults.symmetric_slack),
        grid: cfg.grid_resolution,
    };
    let ks: Vec<u8> = cfg.criteria.clone().unwrap_or_else(|| (1..=12).collect());
    let mut checks = Vec::new();
    for k in ks {
        let c = criterion(k, &opts).expect("criteria validated");
        eprintln!("{}", summary_line(k, &c));
        checks.extend(c);
    }
    let ok = checks.iter().all(|c| c.passed);
    Ok(Output {
        text: render(&VERIFY_HEADERS, &checks, format)?,
        ok,
    })
}
